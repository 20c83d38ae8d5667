use edgerm::code::{
    build_global_table, check_feasibility, GlobalCodeTable, DEFAULT_ENUMERATION_CAP,
};
use edgerm::library::{butterfly, butterfly4, star, STAR_EDGE};
use edgerm::removal::{
    check_condition_a, check_condition_b, corollary1_witness, corollary3_remove, find_witness_y,
    restrict_code, AuxiliaryPartition,
};
use edgerm::{Error, Fraction};
use proptest::prelude::*;

mod common;

const CAP: u128 = DEFAULT_ENUMERATION_CAP;

fn table_of(
    inst: &edgerm::network::NetworkInstance,
    code: &edgerm::code::NetworkCode,
) -> GlobalCodeTable {
    build_global_table(inst, code, CAP).unwrap()
}

fn star_table(
    sizes: &[usize],
    edge_size: usize,
    phi: impl Fn(&[usize]) -> usize,
) -> (
    edgerm::network::NetworkInstance,
    edgerm::code::NetworkCode,
    GlobalCodeTable,
) {
    let total: usize = sizes.iter().product();
    let values = (0..total)
        .map(|k| phi(&edgerm::radix::decode(k, sizes)))
        .collect();
    let (inst, code) = star(sizes, edge_size, values);
    let table = table_of(&inst, &code);
    (inst, code, table)
}

#[test]
fn condition_a_examples() {
    let (inst, code) = butterfly();
    let table = table_of(&inst, &code);
    let b = inst.edge_index("bottleneck").unwrap();
    let own = AuxiliaryPartition::from_edge(&table, b);
    let g = check_condition_a(&table, b, &own).unwrap();
    assert_eq!(g, vec![Some(0), Some(1)]);
    let single = AuxiliaryPartition::new(&[2, 2], vec![0; 4]).unwrap();
    assert!(check_condition_a(&table, b, &single).is_none());
}

#[test]
fn condition_b_examples() {
    let singletons = AuxiliaryPartition::new(&[2, 2], vec![0, 1, 2, 3]).unwrap();
    assert!(check_condition_b(&singletons));
    // labels per tuple (0,0),(0,1),(1,0),(1,1): fiber 0 is {(0,0),(1,1)}
    let diagonal = AuxiliaryPartition::new(&[2, 2], vec![0, 1, 2, 0]).unwrap();
    assert!(!check_condition_b(&diagonal));
    assert_eq!(diagonal.projections(0), &[vec![0, 1], vec![0, 1]]);
}

#[test]
fn witness_exists_by_averaging_for_zero_error() {
    // e* carries x1 mod 2 over sources of size 4 and 3; fibers are products.
    let (inst, _, table) = star_table(&[4, 3], 2, |x| x[0] % 2);
    let e = inst.edge_index(STAR_EDGE).unwrap();
    let part = AuxiliaryPartition::from_edge(&table, e);
    assert_eq!(
        find_witness_y(&table, e, &part, Fraction::ZERO, 2).unwrap(),
        Some(0)
    );
}

#[test]
fn no_witness_when_fibers_are_too_thin() {
    let (inst, _, table) = star_table(&[4, 4], 2, |_| 0);
    let e = inst.edge_index(STAR_EDGE).unwrap();
    // refine by x1 entirely: |A_1(y)| = 1 and 1 * 2 < 4
    let labels = (0..16).map(|k| k / 4).collect();
    let part = AuxiliaryPartition::new(&[4, 4], labels).unwrap();
    assert_eq!(
        find_witness_y(&table, e, &part, Fraction::ZERO, 2).unwrap(),
        None
    );
}

#[test]
fn witness_search_requires_a_and_b() {
    let (inst, code) = butterfly();
    let table = table_of(&inst, &code);
    let b = inst.edge_index("bottleneck").unwrap();
    let single = AuxiliaryPartition::new(&[2, 2], vec![0; 4]).unwrap();
    assert!(matches!(
        find_witness_y(&table, b, &single, Fraction::ZERO, 2),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn butterfly4_low_bit_partition_halves_sources() {
    let (inst, code) = butterfly4();
    let table = table_of(&inst, &code);
    let e = inst.edge_index("bottleneck").unwrap();
    let labels = (0..16).map(|k| ((k / 4) & 1) * 2 + ((k % 4) & 1)).collect();
    let part = AuxiliaryPartition::new(&[4, 4], labels).unwrap();
    let y = find_witness_y(&table, e, &part, Fraction::ZERO, 2)
        .unwrap()
        .unwrap();
    let out = restrict_code(
        &inst,
        &code,
        &table,
        "bottleneck",
        &part,
        y,
        Fraction::ZERO,
        CAP,
    )
    .unwrap();
    assert_eq!(out.certificate.restricted_cardinalities, vec![2, 2]);
    assert_eq!(out.certificate.promised_cardinalities, vec![2, 2]);
    assert_eq!(out.certificate.report.error, Fraction::ZERO);
    assert!(out.instance.edge("bottleneck").is_none());
    assert!(out.certificate.edge_alphabets.iter().all(|s| s.ok));
}

#[test]
fn butterfly_bottleneck_removal_leaves_single_symbols() {
    let (inst, code) = butterfly();
    let table = table_of(&inst, &code);
    let e = inst.edge_index("bottleneck").unwrap();
    let part = AuxiliaryPartition::new(&[2, 2], (0..4).collect()).unwrap();
    let y = find_witness_y(&table, e, &part, Fraction::ZERO, 2)
        .unwrap()
        .unwrap();
    let out = restrict_code(
        &inst,
        &code,
        &table,
        "bottleneck",
        &part,
        y,
        Fraction::ZERO,
        CAP,
    )
    .unwrap();
    assert_eq!(out.certificate.restricted_cardinalities, vec![1, 1]);
    assert_eq!(out.certificate.report.error, Fraction::ZERO);
}

#[test]
fn constant_edge_removal_keeps_the_code() {
    let (inst, code, table) = star_table(&[3, 2], 2, |_| 1);
    let e = inst.edge_index(STAR_EDGE).unwrap();
    let part = AuxiliaryPartition::new(&[3, 2], vec![0; 6]).unwrap();
    let y = find_witness_y(&table, e, &part, Fraction::ZERO, 2)
        .unwrap()
        .unwrap();
    let out = restrict_code(
        &inst,
        &code,
        &table,
        STAR_EDGE,
        &part,
        y,
        Fraction::ZERO,
        CAP,
    )
    .unwrap();
    let mut expected = code.clone();
    expected.encoders.remove(STAR_EDGE);
    expected.edge_alphabets.remove(STAR_EDGE);
    assert_eq!(out.code, expected);
    assert_eq!(out.instance, inst.remove_edge(STAR_EDGE).unwrap());
    assert_eq!(out.certificate.edge_value, 1);
}

#[test]
fn restriction_rejects_a_label_failing_condition_c() {
    let (inst, code, table) = star_table(&[4, 4], 2, |_| 0);
    let labels = (0..16).map(|k| k / 4).collect();
    let part = AuxiliaryPartition::new(&[4, 4], labels).unwrap();
    assert!(matches!(
        restrict_code(
            &inst,
            &code,
            &table,
            STAR_EDGE,
            &part,
            0,
            Fraction::ZERO,
            CAP
        ),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn product_witness_examples() {
    let (inst, _, table) = star_table(&[2, 3], 4, |_| 0);
    let e = inst.edge_index(STAR_EDGE).unwrap();
    assert!(
        corollary1_witness(&table, e, &[vec![0, 1], vec![0, 1, 2]], Fraction::ZERO, 4).unwrap()
    );

    let (inst, _, table) = star_table(&[2, 3], 3, |x| x[1]);
    let e = inst.edge_index(STAR_EDGE).unwrap();
    assert!(corollary1_witness(&table, e, &[vec![1], vec![2]], Fraction::ZERO, 3).unwrap());

    // Break t1's decoder on x1 = 0: half of {0,1} x {0,1,2} is then bad.
    let (inst, mut code) = star(&[2, 3], 4, vec![0; 6]);
    code.decoders.get_mut("t1").unwrap()[0] = vec![1];
    let table = table_of(&inst, &code);
    let e = inst.edge_index(STAR_EDGE).unwrap();
    let full = [vec![0, 1], vec![0, 1, 2]];
    assert!(!corollary1_witness(&table, e, &full, Fraction::new(1, 2).unwrap(), 4).unwrap());
    assert!(corollary1_witness(&table, e, &full, Fraction::new(2, 3).unwrap(), 4).unwrap());
    assert!(corollary1_witness(&table, e, &[vec![1], vec![0, 1, 2]], Fraction::ZERO, 4).unwrap());
}

#[test]
fn edge_partition_projection_edge() {
    let (inst, code, table) = star_table(&[3, 2], 3, |x| x[0]);
    let out = corollary3_remove(&inst, &code, &table, STAR_EDGE, CAP)
        .unwrap()
        .unwrap();
    assert_eq!(out.certificate.restricted_cardinalities, vec![1, 2]);
    assert_eq!(out.certificate.source_relabel, vec![vec![0], vec![0, 1]]);
}

#[test]
fn edge_partition_equality_indicator_fails_b() {
    let (inst, code, table) = star_table(&[3, 3], 2, |x| usize::from(x[0] == x[1]));
    assert!(corollary3_remove(&inst, &code, &table, STAR_EDGE, CAP)
        .unwrap()
        .is_none());
}

#[test]
fn edge_partition_constant_edge() {
    let (inst, code, table) = star_table(&[3, 2], 2, |_| 0);
    let out = corollary3_remove(&inst, &code, &table, STAR_EDGE, CAP)
        .unwrap()
        .unwrap();
    assert_eq!(out.certificate.restricted_cardinalities, vec![3, 2]);
}

#[test]
fn edge_partition_refuses_lossy_codes() {
    let (inst, mut code) = star(&[2, 2], 2, vec![0; 4]);
    code.decoders.get_mut("t1").unwrap()[0] = vec![1];
    let table = table_of(&inst, &code);
    assert!(matches!(
        corollary3_remove(&inst, &code, &table, STAR_EDGE, CAP),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn lossy_restriction_stays_within_budget() {
    // Break one decoder entry of the 4-symbol butterfly: error 1/16 overall.
    let (inst, mut code) = butterfly4();
    code.decoders.get_mut("t1").unwrap()[0] = vec![1, 1];
    let table = table_of(&inst, &code);
    let eps = Fraction::new(1, 4).unwrap();
    let r = check_feasibility(&inst, &code, &table, eps, &[4, 4]).unwrap();
    assert!(r.feasible);
    let e = inst.edge_index("bottleneck").unwrap();
    let labels = (0..16).map(|k| ((k / 4) & 1) * 2 + ((k % 4) & 1)).collect();
    let part = AuxiliaryPartition::new(&[4, 4], labels).unwrap();
    let y = find_witness_y(&table, e, &part, eps, 2).unwrap().unwrap();
    let out = restrict_code(&inst, &code, &table, "bottleneck", &part, y, eps, CAP).unwrap();
    assert!(out.certificate.report.error < eps);
}

fn soundness_case(seed: u64) -> Result<(), TestCaseError> {
    use rand::Rng;
    let (inst, code) = common::random_instance(seed);
    let table = table_of(&inst, &code);
    let mut r = common::rng(seed ^ 0x5eed);
    let e = r.gen_range(0..inst.edges.len());
    let capacity = inst.edges[e].alphabet_size;
    let kind = r.gen_range(0..4);
    let labels = common::random_partition(&mut r, table.source_sizes(), &table.column(e), kind);
    let part = AuxiliaryPartition::new(table.source_sizes(), labels).unwrap();
    let b = check_condition_b(&part);
    prop_assert!((part.conditional_entropy_gap().abs() <= 1e-9) == b);
    let eps = [
        Fraction::ZERO,
        Fraction::new(1, 4).unwrap(),
        Fraction::new(1, 2).unwrap(),
    ][r.gen_range(0..3)];
    if check_condition_a(&table, e, &part).is_none() || !b {
        return Ok(());
    }
    if let Some(y) = find_witness_y(&table, e, &part, eps, capacity).unwrap() {
        let out =
            restrict_code(&inst, &code, &table, &inst.edges[e].id, &part, y, eps, CAP).unwrap();
        let t2 = table_of(&out.instance, &out.code);
        let again = check_feasibility(
            &out.instance,
            &out.code,
            &t2,
            eps,
            &out.certificate.promised_cardinalities,
        )
        .unwrap();
        prop_assert!(again.feasible);
        prop_assert!(out
            .certificate
            .edge_alphabets
            .iter()
            .all(|s| s.restricted <= s.original));
        if table.bad_count() == 0 {
            prop_assert_eq!(again.bad, 0);
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn restriction_is_sound(seed in any::<u64>()) {
        soundness_case(seed)?;
    }
}

#[test]
fn edgeless_restriction_counts_tuples_once() {
    let (inst, code) = edgerm::library::relay_chain(3, 1);
    let table = table_of(&inst, &code);
    let part = AuxiliaryPartition::new(&[3], vec![0, 1, 2]).unwrap();
    let out = restrict_code(&inst, &code, &table, "e000", &part, 0, Fraction::ZERO, CAP);
    // The terminal loses its only input, so the single restricted tuple must still decode.
    let out = out.unwrap();
    assert!(out.code.encoders.is_empty());
    assert_eq!(out.certificate.report.bad, 0);
}
