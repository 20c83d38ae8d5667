use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ensure_a_b, satisfies_condition_c, AuxiliaryPartition};
use crate::code::{
    build_global_table, check_feasibility, EncoderInput, FeasibilityReport, GlobalCodeTable,
    NetworkCode,
};
use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::network::NetworkInstance;
use crate::radix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeShrink {
    pub edge: String,
    pub original: usize,
    pub restricted: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovalCertificate {
    pub edge: String,
    /// Chosen label `y'`, absent for a directly supplied product set.
    pub witness: Option<usize>,
    /// Constant carried by the removed edge on the restricted domain.
    pub edge_value: usize,
    pub eps: Fraction,
    pub edge_capacity: usize,
    /// Promised cardinalities are `⌈|X_i| / rate_divisor⌉`; the divisor is the
    /// removed edge's capacity, times the piece count for piecewise removal.
    pub rate_divisor: usize,
    /// Retained source symbols; new symbol `k` of source `i` is `sources[i][k]`.
    pub source_relabel: Vec<Vec<usize>>,
    /// Retained edge symbols; new symbol `k` of edge `e` is `edges[e][k]`.
    pub edge_relabel: BTreeMap<String, Vec<usize>>,
    pub original_cardinalities: Vec<usize>,
    pub restricted_cardinalities: Vec<usize>,
    /// `⌈|X_i| / rate_divisor⌉` per source.
    pub promised_cardinalities: Vec<usize>,
    pub rates_met: bool,
    pub edge_alphabets: Vec<EdgeShrink>,
    /// Independent verification of the restricted code on the reduced instance.
    pub report: FeasibilityReport,
}

#[derive(Clone, Debug)]
pub struct Removal {
    pub instance: NetworkInstance,
    pub code: NetworkCode,
    pub certificate: RemovalCertificate,
}

/// Restricts the code to fiber `A(y)` after checking conditions A, B and C.
#[allow(clippy::too_many_arguments)]
pub fn restrict_code(
    inst: &NetworkInstance,
    code: &NetworkCode,
    table: &GlobalCodeTable,
    edge_id: &str,
    part: &AuxiliaryPartition,
    y: usize,
    eps: Fraction,
    cap: u128,
) -> Result<Removal> {
    let edge = inst.edge_index(edge_id)?;
    let capacity = inst.edges[edge].alphabet_size;
    ensure_a_b(table, edge, part)?;
    if y >= part.label_count() || !satisfies_condition_c(table, part, y, eps, capacity) {
        return Err(Error::precondition(format!(
            "label {y} does not satisfy condition C at eps {eps}"
        )));
    }
    let mut removal =
        restrict_to_product(inst, code, table, edge_id, part.projections(y), eps, cap)?;
    removal.certificate.witness = Some(y);
    Ok(removal)
}

pub(crate) fn normalize_sets(sizes: &[usize], sets: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    if sets.len() != sizes.len() {
        return Err(Error::InvalidArity(format!(
            "{} source subsets for {} sources",
            sets.len(),
            sizes.len()
        )));
    }
    sets.iter()
        .zip(sizes)
        .map(|(s, &n)| {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            if s.is_empty() || s.last().is_some_and(|&v| v >= n) {
                return Err(Error::domain(format!(
                    "subset {s:?} is empty or leaves a source alphabet of size {n}"
                )));
            }
            Ok(s)
        })
        .collect()
}

pub(crate) fn for_each_in_product(sets: &[Vec<usize>], mut f: impl FnMut(&[usize])) {
    let radices: Vec<usize> = sets.iter().map(Vec::len).collect();
    let mut pos = vec![0; sets.len()];
    let mut x: Vec<usize> = sets.iter().map(|s| s[0]).collect();
    loop {
        f(&x);
        if !radix::increment(&mut pos, &radices) {
            return;
        }
        for (i, &p) in pos.iter().enumerate() {
            x[i] = sets[i][p];
        }
    }
}

/// Restricts the code to the product set `∏ sets`, on which the removed
/// edge must be constant, relabels every alphabet densely to its reachable
/// symbols, hardwires the constant into the encoders and decoders downstream
/// of the edge, and verifies the result on the reduced instance.
pub fn restrict_to_product(
    inst: &NetworkInstance,
    code: &NetworkCode,
    table: &GlobalCodeTable,
    edge_id: &str,
    sets: &[Vec<usize>],
    eps: Fraction,
    cap: u128,
) -> Result<Removal> {
    let capacity = inst.edges[inst.edge_index(edge_id)?].alphabet_size;
    restrict_with_divisor(inst, code, table, edge_id, sets, eps, capacity, cap)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn restrict_with_divisor(
    inst: &NetworkInstance,
    code: &NetworkCode,
    table: &GlobalCodeTable,
    edge_id: &str,
    sets: &[Vec<usize>],
    eps: Fraction,
    rate_divisor: usize,
    cap: u128,
) -> Result<Removal> {
    let removed = inst.edge_index(edge_id)?;
    let compiled = table.compiled();
    let sizes = compiled.source_sizes().to_vec();
    let sets = normalize_sets(&sizes, sets)?;
    for e in &inst.edges {
        if code
            .edge_alphabets
            .get(&e.id)
            .is_some_and(|&n| n > e.alphabet_size)
        {
            return Err(Error::precondition(format!(
                "code alphabet of edge {:?} exceeds its capacity",
                e.id
            )));
        }
    }
    let m = inst.edges.len();

    let mut reach = vec![vec![false; 0]; m];
    for (j, r) in reach.iter_mut().enumerate() {
        *r = vec![false; compiled.edge_sizes()[j]];
    }
    let mut constant: Option<usize> = None;
    let mut consistent = true;
    for_each_in_product(&sets, |x| {
        let k = radix::encode(x, &sizes);
        for (j, r) in reach.iter_mut().enumerate() {
            r[table.value(k, j)] = true;
        }
        let v = table.value(k, removed);
        if *constant.get_or_insert(v) != v {
            consistent = false;
        }
    });
    if !consistent {
        return Err(Error::precondition(format!(
            "edge {edge_id:?} is not constant on the restricted domain"
        )));
    }
    let constant = constant.expect("nonempty product");

    let kept: Vec<Vec<usize>> = reach
        .iter()
        .map(|r| (0..r.len()).filter(|&v| r[v]).collect())
        .collect();
    let relabel = |j: usize, v: usize| kept[j].binary_search(&v).unwrap_or(0);
    let source_label = |i: usize, v: usize| sets[i].binary_search(&v).unwrap_or(0);

    let mut new_inst = inst.remove_edge(edge_id)?;
    for (s, set) in new_inst.sources.iter_mut().zip(&sets) {
        s.alphabet_size = set.len();
    }

    // Maps a new-label input combination over `ins` (edge indices of the
    // original instance, removed edge excluded) to the original table index.
    let old_index = |ins: &[usize], radices: &[usize], new_combo: &[usize]| -> usize {
        let mut it = new_combo.iter();
        ins.iter().zip(radices).fold(0, |acc, (&i, &r)| {
            let v = if i == removed {
                constant
            } else {
                kept[i][*it.next().expect("one label per kept input")]
            };
            acc * r + v
        })
    };

    let mut encoders = BTreeMap::new();
    let mut edge_alphabets = BTreeMap::new();
    for (j, e) in inst.edges.iter().enumerate() {
        if j == removed {
            continue;
        }
        let old = &compiled.encoders[j];
        let new_table: Vec<usize> = match compiled.encoder_input(j) {
            EncoderInput::Source(s) => sets[*s].iter().map(|&a| relabel(j, old[a])).collect(),
            EncoderInput::Edges(ins) => {
                let new_radices: Vec<usize> = ins
                    .iter()
                    .filter(|&&i| i != removed)
                    .map(|&i| kept[i].len())
                    .collect();
                let n = radix::size(&new_radices).expect("no larger than the original domain");
                (0..n)
                    .map(|c| {
                        let combo = radix::decode(c, &new_radices);
                        relabel(j, old[old_index(ins, &compiled.input_radices[j], &combo)])
                    })
                    .collect()
            }
        };
        encoders.insert(e.id.clone(), new_table);
        edge_alphabets.insert(e.id.clone(), kept[j].len());
    }

    let mut decoders = BTreeMap::new();
    for (t, name) in inst.terminals.iter().enumerate() {
        let ins = &compiled.terminal_inputs[t];
        let new_radices: Vec<usize> = ins
            .iter()
            .filter(|&&i| i != removed)
            .map(|&i| kept[i].len())
            .collect();
        let n = radix::size(&new_radices).expect("no larger than the original domain");
        let dem = &compiled.demanded[t];
        let table_t: Vec<Vec<usize>> = (0..n)
            .map(|c| {
                let combo = radix::decode(c, &new_radices);
                let out =
                    &compiled.decoders[t][old_index(ins, &compiled.terminal_radices[t], &combo)];
                out.iter()
                    .zip(dem)
                    .map(|(&v, &s)| source_label(s, v))
                    .collect()
            })
            .collect();
        decoders.insert(name.clone(), table_t);
    }

    let new_code = NetworkCode {
        blocklength: code.blocklength,
        source_alphabets: sets.iter().map(Vec::len).collect(),
        edge_alphabets,
        encoders,
        decoders,
    };

    let capacity = inst.edges[removed].alphabet_size;
    let promised: Vec<usize> = sizes.iter().map(|&n| n.div_ceil(rate_divisor)).collect();
    let new_table = build_global_table(&new_inst, &new_code, cap)?;
    let report = check_feasibility(&new_inst, &new_code, &new_table, eps, &promised)?;
    if !report.feasible {
        return Err(Error::internal(format!(
            "restricted code failed independent verification: error {} against eps {eps}, rates ok {}, capacities ok {}",
            report.error, report.rates_ok, report.capacities_ok
        )));
    }

    let edge_shrink: Vec<EdgeShrink> = inst
        .edges
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != removed)
        .map(|(j, e)| EdgeShrink {
            edge: e.id.clone(),
            original: compiled.edge_sizes()[j],
            restricted: kept[j].len(),
            ok: kept[j].len() <= compiled.edge_sizes()[j],
        })
        .collect();
    let certificate = RemovalCertificate {
        edge: edge_id.to_string(),
        witness: None,
        edge_value: constant,
        eps,
        edge_capacity: capacity,
        rate_divisor,
        source_relabel: sets.clone(),
        edge_relabel: inst
            .edges
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != removed)
            .map(|(j, e)| (e.id.clone(), kept[j].clone()))
            .collect(),
        original_cardinalities: sizes,
        restricted_cardinalities: new_code.source_alphabets.clone(),
        rates_met: report.rates_ok,
        promised_cardinalities: promised,
        edge_alphabets: edge_shrink,
        report,
    };
    Ok(Removal {
        instance: new_inst,
        code: new_code,
        certificate,
    })
}
