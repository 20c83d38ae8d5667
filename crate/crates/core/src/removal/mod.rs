//! Local edge removal for a fixed code.
//!
//! A partition `Y` of the source tuples certifies that edge `e*` can be
//! dropped when `x_{e*}` is constant on every fiber (condition A), every fiber
//! is a product set (condition B), and some fiber is both large in every
//! coordinate and mostly good (condition C). The code restricted to that
//! fiber, with the constant hardwired downstream, then runs without `e*`.

mod partition;
mod restrict;

pub use partition::{AuxiliaryPartition, PartitionFile};
pub(crate) use restrict::restrict_with_divisor;
pub use restrict::{restrict_code, restrict_to_product, EdgeShrink, Removal, RemovalCertificate};

use crate::code::{GlobalCodeTable, NetworkCode};
use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::network::NetworkInstance;

/// `g_Y(y)` for each label when `x_{e*}` is constant on every fiber, `None`
/// for empty fibers. Returns `None` overall when some fiber disagrees.
pub fn check_condition_a(
    table: &GlobalCodeTable,
    edge: usize,
    part: &AuxiliaryPartition,
) -> Option<Vec<Option<usize>>> {
    (0..part.label_count())
        .map(|y| {
            let fib = part.fiber(y);
            match fib.first() {
                None => Some(None),
                Some(&k0) => {
                    let v = table.value(k0, edge);
                    fib.iter()
                        .all(|&k| table.value(k, edge) == v)
                        .then_some(Some(v))
                }
            }
        })
        .collect()
}

/// Every fiber equals the product of its projections.
pub fn check_condition_b(part: &AuxiliaryPartition) -> bool {
    part.used_labels().all(|y| part.is_product_fiber(y))
}

/// Size and error parts of condition C for a single label.
pub fn satisfies_condition_c(
    table: &GlobalCodeTable,
    part: &AuxiliaryPartition,
    y: usize,
    eps: Fraction,
    edge_capacity: usize,
) -> bool {
    if part.fiber(y).is_empty() {
        return false;
    }
    let sizes_ok = part
        .projections(y)
        .iter()
        .zip(table.source_sizes())
        .all(|(a, &n)| a.len() as u128 * edge_capacity as u128 >= n as u128);
    let (good, bad) = part.good_bad(table, y);
    sizes_ok && eps.budget_admits(bad, good + bad)
}

/// Smallest label meeting condition C. Conditions A and B must hold.
pub fn find_witness_y(
    table: &GlobalCodeTable,
    edge: usize,
    part: &AuxiliaryPartition,
    eps: Fraction,
    edge_capacity: usize,
) -> Result<Option<usize>> {
    ensure_a_b(table, edge, part)?;
    Ok(part
        .used_labels()
        .find(|&y| satisfies_condition_c(table, part, y, eps, edge_capacity)))
}

pub(crate) fn ensure_a_b(
    table: &GlobalCodeTable,
    edge: usize,
    part: &AuxiliaryPartition,
) -> Result<Vec<Option<usize>>> {
    if part.source_sizes() != table.source_sizes() {
        return Err(Error::precondition(
            "partition and code have different source alphabets",
        ));
    }
    let g = check_condition_a(table, edge, part).ok_or_else(|| {
        Error::precondition("condition A fails: the edge is not constant on every fiber")
    })?;
    if !check_condition_b(part) {
        return Err(Error::precondition(
            "condition B fails: some fiber is not a product set",
        ));
    }
    Ok(g)
}

/// Checks the product-set form: `x_{e*}` is constant on `∏ sets`, every
/// `|sets_i|·|X_{e*}| ≥ |X_i|`, and the bad fraction of the product meets `eps`.
pub fn corollary1_witness(
    table: &GlobalCodeTable,
    edge: usize,
    sets: &[Vec<usize>],
    eps: Fraction,
    edge_capacity: usize,
) -> Result<bool> {
    let sizes = table.source_sizes();
    let sets = restrict::normalize_sets(sizes, sets)?;
    let sizes_ok = sets
        .iter()
        .zip(sizes)
        .all(|(s, &n)| s.len() as u128 * edge_capacity as u128 >= n as u128);
    if !sizes_ok {
        return Ok(false);
    }
    let mut value = None;
    let mut bad = 0u64;
    let mut total = 0u64;
    let mut constant = true;
    restrict::for_each_in_product(&sets, |x| {
        let k = crate::radix::encode(x, sizes);
        let v = table.value(k, edge);
        if *value.get_or_insert(v) != v {
            constant = false;
        }
        total += 1;
        if !table.is_good(k) {
            bad += 1;
        }
    });
    Ok(constant && eps.budget_admits(bad, total))
}

/// Removal with `Y = X_{e*}` for a zero-error code. Returns `None` when some
/// fiber of the edge function is not a product set.
pub fn corollary3_remove(
    inst: &NetworkInstance,
    code: &NetworkCode,
    table: &GlobalCodeTable,
    edge_id: &str,
    cap: u128,
) -> Result<Option<Removal>> {
    if table.bad_count() != 0 {
        return Err(Error::precondition(
            "the edge-function partition is only certified for zero-error codes",
        ));
    }
    let edge = inst.edge_index(edge_id)?;
    let part = AuxiliaryPartition::from_edge(table, edge);
    if !check_condition_b(&part) {
        return Ok(None);
    }
    let y = part
        .used_labels()
        .max_by(|&a, &b| {
            part.fiber(a)
                .len()
                .cmp(&part.fiber(b).len())
                .then(b.cmp(&a))
        })
        .expect("at least one tuple");
    restrict_code(inst, code, table, edge_id, &part, y, Fraction::ZERO, cap).map(Some)
}
