use rayon::prelude::*;

use super::{CompiledCode, NetworkCode};
use crate::error::{Error, Result};
use crate::network::NetworkInstance;
use crate::radix;

/// Default upper bound on the number of enumerated source tuples.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 24;

/// Upper bound on stored edge messages (tuples times edges).
const MAX_TABLE_ENTRIES: u128 = 1 << 28;

const CHUNK: usize = 4096;

/// The global encoding map materialized over every source tuple, with the
/// good/bad classification. Tuple `k` is the mixed-radix decoding of `k`
/// over the source alphabets.
#[derive(Clone, Debug)]
pub struct GlobalCodeTable {
    compiled: CompiledCode,
    tuples: usize,
    values: Vec<u32>,
    good: Vec<bool>,
    terminal_bad: Vec<u64>,
}

/// Enumerates every source tuple. Work is split into fixed index ranges, so
/// the result does not depend on the number of worker threads.
pub fn build_global_table(
    inst: &NetworkInstance,
    code: &NetworkCode,
    cap: u128,
) -> Result<GlobalCodeTable> {
    let compiled = CompiledCode::new(inst, code)?;
    GlobalCodeTable::from_compiled(compiled, cap)
}

impl GlobalCodeTable {
    pub fn from_compiled(compiled: CompiledCode, cap: u128) -> Result<Self> {
        let sizes = compiled.source_sizes.clone();
        let required: u128 = sizes.iter().map(|&n| n as u128).product();
        if required > cap {
            return Err(Error::Resource {
                what: "source tuples to enumerate".into(),
                required,
                cap,
            });
        }
        let m = compiled.edge_sizes.len();
        if required * m.max(1) as u128 > MAX_TABLE_ENTRIES {
            return Err(Error::Resource {
                what: "stored edge messages".into(),
                required: required * m as u128,
                cap: MAX_TABLE_ENTRIES,
            });
        }
        if compiled.edge_sizes.iter().any(|&n| n > u32::MAX as usize) {
            return Err(Error::Resource {
                what: "edge alphabet size".into(),
                required: *compiled.edge_sizes.iter().max().unwrap() as u128,
                cap: u32::MAX as u128,
            });
        }
        let tuples = required as usize;
        let nt = compiled.terminal_count();
        // One padding column keeps the chunking aligned when there are no edges.
        let mut values = vec![0u32; tuples * m.max(1)];
        let mut good = vec![false; tuples];

        let stride = CHUNK * m.max(1);
        let chunk_bad: Vec<Vec<u64>> = values
            .par_chunks_mut(stride)
            .zip(good.par_chunks_mut(CHUNK))
            .enumerate()
            .map(|(c, (vals, good))| {
                let start = c * CHUNK;
                let mut x = radix::decode(start, &sizes);
                let mut scratch = vec![0usize; m];
                let mut bad = vec![0u64; nt];
                for (k, g) in good.iter_mut().enumerate() {
                    compiled.evaluate_into(&x, &mut scratch);
                    let mut all = true;
                    for (t, b) in bad.iter_mut().enumerate() {
                        if !compiled.terminal_correct(t, &x, &scratch) {
                            *b += 1;
                            all = false;
                        }
                    }
                    *g = all;
                    for (dst, &v) in vals[k * m..(k + 1) * m].iter_mut().zip(&scratch) {
                        *dst = v as u32;
                    }
                    radix::increment(&mut x, &sizes);
                }
                bad
            })
            .collect();
        let mut terminal_bad = vec![0u64; nt];
        for b in chunk_bad {
            for (acc, v) in terminal_bad.iter_mut().zip(b) {
                *acc += v;
            }
        }
        Ok(GlobalCodeTable {
            compiled,
            tuples,
            values,
            good,
            terminal_bad,
        })
    }

    pub fn compiled(&self) -> &CompiledCode {
        &self.compiled
    }

    pub fn tuple_count(&self) -> usize {
        self.tuples
    }

    pub fn source_sizes(&self) -> &[usize] {
        &self.compiled.source_sizes
    }

    pub fn edge_count(&self) -> usize {
        self.compiled.edge_sizes.len()
    }

    pub fn tuple(&self, k: usize) -> Vec<usize> {
        radix::decode(k, &self.compiled.source_sizes)
    }

    pub fn tuple_index(&self, x: &[usize]) -> Result<usize> {
        radix::checked_encode(x, &self.compiled.source_sizes)
    }

    /// Message on edge index `e` for tuple index `k`.
    pub fn value(&self, k: usize, e: usize) -> usize {
        self.values[k * self.edge_count() + e] as usize
    }

    pub fn edge_values(&self, k: usize) -> Vec<usize> {
        let m = self.edge_count();
        self.values[k * m..(k + 1) * m]
            .iter()
            .map(|&v| v as usize)
            .collect()
    }

    /// The column of edge index `e`, one entry per tuple.
    pub fn column(&self, e: usize) -> Vec<usize> {
        (0..self.tuples).map(|k| self.value(k, e)).collect()
    }

    pub fn is_good(&self, k: usize) -> bool {
        self.good[k]
    }

    pub fn good_mask(&self) -> &[bool] {
        &self.good
    }

    pub fn bad_count(&self) -> u64 {
        self.good.iter().filter(|&&g| !g).count() as u64
    }

    pub fn first_bad(&self) -> Option<usize> {
        self.good.iter().position(|&g| !g)
    }

    /// Bad-tuple count for each terminal index.
    pub fn terminal_bad_counts(&self) -> &[u64] {
        &self.terminal_bad
    }

    /// Re-evaluates every edge locally from its tabulated inputs and
    /// compares with the stored messages.
    pub fn is_chain_consistent(&self) -> bool {
        let c = &self.compiled;
        (0..self.tuples).into_par_iter().all(|k| {
            let x = self.tuple(k);
            let vals = self.edge_values(k);
            (0..self.edge_count()).all(|j| {
                let idx = match &c.inputs[j] {
                    super::EncoderInput::Source(s) => x[*s],
                    super::EncoderInput::Edges(ins) => ins
                        .iter()
                        .zip(&c.input_radices[j])
                        .fold(0, |acc, (&i, &r)| acc * r + vals[i]),
                };
                c.encoders[j][idx] == vals[j]
            })
        })
    }
}
