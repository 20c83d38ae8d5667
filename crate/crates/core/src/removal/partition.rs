use serde::{Deserialize, Serialize};

use crate::code::{entropy_from_counts, GlobalCodeTable};
use crate::error::{Error, Result};
use crate::radix;

/// A labeling `f_Y` of source tuples, with its fibers `A(y)` and the
/// per-source projections `A_i(y)`. Tuple `k` is the mixed-radix decoding of
/// `k` over the source alphabets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxiliaryPartition {
    source_sizes: Vec<usize>,
    labels: Vec<usize>,
    label_count: usize,
    fibers: Vec<Vec<usize>>,
    projections: Vec<Vec<Vec<usize>>>,
}

/// Serialized form: one label per source tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionFile {
    pub labels: Vec<usize>,
}

impl AuxiliaryPartition {
    pub fn new(source_sizes: &[usize], labels: Vec<usize>) -> Result<Self> {
        let total = radix::size(source_sizes)
            .ok_or_else(|| Error::domain("source tuple space overflows"))?;
        if labels.len() != total {
            return Err(Error::domain(format!(
                "partition labels {} tuples but there are {total}",
                labels.len()
            )));
        }
        let label_count = labels.iter().max().map_or(0, |m| m + 1);
        let mut fibers = vec![Vec::new(); label_count];
        let mut marks: Vec<Vec<Vec<bool>>> = source_sizes
            .iter()
            .map(|&n| vec![vec![false; n]; label_count])
            .collect();
        let mut x = vec![0; source_sizes.len()];
        for (k, &y) in labels.iter().enumerate() {
            fibers[y].push(k);
            for (i, &xi) in x.iter().enumerate() {
                marks[i][y][xi] = true;
            }
            radix::increment(&mut x, source_sizes);
        }
        let projections = (0..label_count)
            .map(|y| {
                marks
                    .iter()
                    .map(|m| (0..m[y].len()).filter(|&a| m[y][a]).collect())
                    .collect()
            })
            .collect();
        Ok(AuxiliaryPartition {
            source_sizes: source_sizes.to_vec(),
            labels,
            label_count,
            fibers,
            projections,
        })
    }

    /// The partition induced by an edge's global encoding function.
    pub fn from_edge(table: &GlobalCodeTable, edge: usize) -> Self {
        Self::new(table.source_sizes(), table.column(edge)).expect("column covers every tuple")
    }

    pub fn from_file(source_sizes: &[usize], file: PartitionFile) -> Result<Self> {
        Self::new(source_sizes, file.labels)
    }

    pub fn to_file(&self) -> PartitionFile {
        PartitionFile {
            labels: self.labels.clone(),
        }
    }

    pub fn source_sizes(&self) -> &[usize] {
        &self.source_sizes
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label_count(&self) -> usize {
        self.label_count
    }

    /// Tuple indices in `A(y)`, ascending.
    pub fn fiber(&self, y: usize) -> &[usize] {
        &self.fibers[y]
    }

    /// Labels with a nonempty fiber, ascending.
    pub fn used_labels(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.label_count).filter(|&y| !self.fibers[y].is_empty())
    }

    /// `A_i(y)` for every source `i`, each sorted.
    pub fn projections(&self, y: usize) -> &[Vec<usize>] {
        &self.projections[y]
    }

    /// `(|A^G(y)|, |A^B(y)|)`.
    pub fn good_bad(&self, table: &GlobalCodeTable, y: usize) -> (u64, u64) {
        let good = self.fibers[y].iter().filter(|&&k| table.is_good(k)).count() as u64;
        (good, self.fibers[y].len() as u64 - good)
    }

    /// `|A(y)| = ∏ |A_i(y)|`, i.e. the fiber is the full product of its projections.
    pub fn is_product_fiber(&self, y: usize) -> bool {
        let prod = self.projections[y]
            .iter()
            .try_fold(1usize, |acc, p| acc.checked_mul(p.len()));
        prod == Some(self.fibers[y].len())
    }

    /// `H(X_S | Y) - Σ_i H(X_i | Y)` in bits under uniform sources. Zero
    /// exactly when every fiber is a product set.
    pub fn conditional_entropy_gap(&self) -> f64 {
        let total = self.labels.len() as u64;
        let fiber_sizes = self.fibers.iter().map(|f| f.len() as u64);
        let h_y = entropy_from_counts(fiber_sizes, total);
        let h_s_given_y = (total as f64).log2() - h_y;
        let mut sum = 0.0;
        for i in 0..self.source_sizes.len() {
            let n = self.source_sizes[i];
            let mut joint = vec![0u64; self.label_count * n];
            let mut x = vec![0; self.source_sizes.len()];
            for &y in &self.labels {
                joint[y * n + x[i]] += 1;
                radix::increment(&mut x, &self.source_sizes);
            }
            sum += entropy_from_counts(joint, total) - h_y;
        }
        h_s_given_y - sum
    }
}
