use std::collections::HashMap;

use super::GlobalCodeTable;

/// Absolute tolerance, in bits, for comparing computed entropies.
pub const ENTROPY_TOLERANCE: f64 = 1e-9;

/// A random variable induced by uniform source tuples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variable {
    Source(usize),
    Edge(usize),
}

/// Entropy in bits of a distribution given by integer counts summing to `total`.
pub fn entropy_from_counts(counts: impl IntoIterator<Item = u64>, total: u64) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let mut counts: Vec<u64> = counts.into_iter().filter(|&c| c > 0).collect();
    counts.sort_unstable();
    let n = total as f64;
    let s: f64 = counts.iter().map(|&c| c as f64 * (c as f64).log2()).sum();
    (n.log2() - s / n).max(0.0)
}

/// Joint entropy of `vars` under uniformly distributed source tuples.
pub fn joint_entropy(table: &GlobalCodeTable, vars: &[Variable]) -> f64 {
    if vars.is_empty() {
        return 0.0;
    }
    let mut counts: HashMap<Vec<usize>, u64> = HashMap::new();
    for k in 0..table.tuple_count() {
        let x = table.tuple(k);
        let key = vars
            .iter()
            .map(|v| match *v {
                Variable::Source(i) => x[i],
                Variable::Edge(e) => table.value(k, e),
            })
            .collect();
        *counts.entry(key).or_default() += 1;
    }
    entropy_from_counts(counts.into_values(), table.tuple_count() as u64)
}
