//! Explicit block codes: local encoder tables per edge and decoder tables per
//! terminal.
//!
//! An encoder for an edge leaving source node `s` is indexed by the source
//! symbol. Any other encoder is indexed by the mixed-radix combination of
//! the messages on the tail's incoming edges, sorted by edge id, using the
//! code's edge alphabets as radices. Decoders are indexed the same way over
//! the terminal's incoming edges and output the tuple of demanded source
//! symbols in source order.

mod entropy;
mod feasibility;
mod table;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use entropy::{entropy_from_counts, joint_entropy, Variable, ENTROPY_TOLERANCE};
pub use feasibility::{check_feasibility, CapacityFlag, FeasibilityReport, TerminalError};
pub use table::{build_global_table, GlobalCodeTable, DEFAULT_ENUMERATION_CAP};

use crate::error::{Error, Result};
use crate::network::NetworkInstance;
use crate::radix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkCode {
    pub blocklength: usize,
    pub source_alphabets: Vec<usize>,
    pub edge_alphabets: BTreeMap<String, usize>,
    pub encoders: BTreeMap<String, Vec<usize>>,
    pub decoders: BTreeMap<String, Vec<Vec<usize>>>,
}

impl NetworkCode {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("code: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("code serializes")
    }
}

/// Where an encoder reads its input from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EncoderInput {
    Source(usize),
    Edges(Vec<usize>),
}

/// A code checked against an instance and laid out by edge index, ready for
/// repeated evaluation.
#[derive(Clone, Debug)]
pub struct CompiledCode {
    pub(crate) order: Vec<usize>,
    pub(crate) inputs: Vec<EncoderInput>,
    pub(crate) input_radices: Vec<Vec<usize>>,
    pub(crate) encoders: Vec<Vec<usize>>,
    pub(crate) edge_sizes: Vec<usize>,
    pub(crate) source_sizes: Vec<usize>,
    pub(crate) terminal_inputs: Vec<Vec<usize>>,
    pub(crate) terminal_radices: Vec<Vec<usize>>,
    pub(crate) demanded: Vec<Vec<usize>>,
    pub(crate) decoders: Vec<Vec<Vec<usize>>>,
}

impl CompiledCode {
    pub fn new(inst: &NetworkInstance, code: &NetworkCode) -> Result<Self> {
        if let Some(v) = inst.validate().first() {
            return Err(Error::Invalid(format!("instance: {v}")));
        }
        let order = inst.topological_order()?;
        let source_sizes = inst.source_sizes();
        if code.source_alphabets != source_sizes {
            return Err(Error::malformed(format!(
                "code source alphabets {:?} differ from instance source sizes {:?}",
                code.source_alphabets, source_sizes
            )));
        }
        let mut edge_sizes = Vec::with_capacity(inst.edges.len());
        for e in &inst.edges {
            match code.edge_alphabets.get(&e.id) {
                Some(&0) => {
                    return Err(Error::malformed(format!(
                        "edge {:?} has alphabet size 0",
                        e.id
                    )))
                }
                Some(&n) => edge_sizes.push(n),
                None => return Err(Error::malformed(format!("no alphabet for edge {:?}", e.id))),
            }
        }
        for id in code.edge_alphabets.keys().chain(code.encoders.keys()) {
            if inst.edge(id).is_none() {
                return Err(Error::malformed(format!(
                    "code mentions unknown edge {id:?}"
                )));
            }
        }

        let mut inputs = Vec::new();
        let mut input_radices = Vec::new();
        let mut encoders = Vec::new();
        for (j, e) in inst.edges.iter().enumerate() {
            let (input, radices) = match inst.source_index(&e.tail) {
                Some(s) => (EncoderInput::Source(s), vec![source_sizes[s]]),
                None => {
                    let ins = inst.in_edges(&e.tail);
                    let r = ins.iter().map(|&i| edge_sizes[i]).collect();
                    (EncoderInput::Edges(ins), r)
                }
            };
            let table = code
                .encoders
                .get(&e.id)
                .ok_or_else(|| Error::malformed(format!("no encoder for edge {:?}", e.id)))?;
            let want = domain_size(&radices, &format!("encoder for edge {:?}", e.id))?;
            if table.len() != want {
                return Err(Error::malformed(format!(
                    "encoder for edge {:?} has {} entries, expected {want}",
                    e.id,
                    table.len()
                )));
            }
            if let Some(&v) = table.iter().find(|&&v| v >= edge_sizes[j]) {
                return Err(Error::malformed(format!(
                    "encoder for edge {:?} outputs {v}, outside alphabet of size {}",
                    e.id, edge_sizes[j]
                )));
            }
            inputs.push(input);
            input_radices.push(radices);
            encoders.push(table.clone());
        }

        for t in code.decoders.keys() {
            if inst.terminal_index(t).is_none() {
                return Err(Error::malformed(format!(
                    "decoder for unknown terminal {t:?}"
                )));
            }
        }
        let mut terminal_inputs = Vec::new();
        let mut terminal_radices = Vec::new();
        let mut demanded = Vec::new();
        let mut decoders = Vec::new();
        for (ti, t) in inst.terminals.iter().enumerate() {
            let ins = inst.in_edges(t);
            let radices: Vec<usize> = ins.iter().map(|&i| edge_sizes[i]).collect();
            let dem = inst.demanded_by(ti);
            let table = code
                .decoders
                .get(t)
                .ok_or_else(|| Error::malformed(format!("no decoder for terminal {t:?}")))?;
            let want = domain_size(&radices, &format!("decoder for terminal {t:?}"))?;
            if table.len() != want {
                return Err(Error::malformed(format!(
                    "decoder for terminal {t:?} has {} entries, expected {want}",
                    table.len()
                )));
            }
            for out in table {
                if out.len() != dem.len()
                    || out.iter().zip(&dem).any(|(&v, &s)| v >= source_sizes[s])
                {
                    return Err(Error::malformed(format!(
                        "decoder for terminal {t:?} has output {out:?}, not a tuple over its {} demanded sources",
                        dem.len()
                    )));
                }
            }
            terminal_inputs.push(ins);
            terminal_radices.push(radices);
            demanded.push(dem);
            decoders.push(table.clone());
        }

        Ok(CompiledCode {
            order,
            inputs,
            input_radices,
            encoders,
            edge_sizes,
            source_sizes,
            terminal_inputs,
            terminal_radices,
            demanded,
            decoders,
        })
    }

    pub fn source_sizes(&self) -> &[usize] {
        &self.source_sizes
    }

    pub fn edge_sizes(&self) -> &[usize] {
        &self.edge_sizes
    }

    pub fn encoder_input(&self, edge: usize) -> &EncoderInput {
        &self.inputs[edge]
    }

    /// Fills `values` (indexed by edge) with every edge message for source
    /// tuple `x`.
    pub fn evaluate_into(&self, x: &[usize], values: &mut [usize]) {
        for &j in &self.order {
            let idx = match &self.inputs[j] {
                EncoderInput::Source(s) => x[*s],
                EncoderInput::Edges(ins) => ins
                    .iter()
                    .zip(&self.input_radices[j])
                    .fold(0, |acc, (&i, &r)| acc * r + values[i]),
            };
            values[j] = self.encoders[j][idx];
        }
    }

    pub fn evaluate(&self, x: &[usize]) -> Result<Vec<usize>> {
        if x.len() != self.source_sizes.len()
            || x.iter().zip(&self.source_sizes).any(|(&v, &n)| v >= n)
        {
            return Err(Error::domain(format!(
                "{x:?} is not a tuple over source alphabets {:?}",
                self.source_sizes
            )));
        }
        let mut values = vec![0; self.edge_sizes.len()];
        self.evaluate_into(x, &mut values);
        Ok(values)
    }

    /// Decoder output of terminal index `t` given all edge messages.
    pub fn decode(&self, t: usize, values: &[usize]) -> &[usize] {
        let idx = self.terminal_inputs[t]
            .iter()
            .zip(&self.terminal_radices[t])
            .fold(0, |acc, (&i, &r)| acc * r + values[i]);
        &self.decoders[t][idx]
    }

    /// True iff terminal `t` recovers its demanded sources from `values`.
    pub fn terminal_correct(&self, t: usize, x: &[usize], values: &[usize]) -> bool {
        self.decode(t, values)
            .iter()
            .zip(&self.demanded[t])
            .all(|(&v, &s)| v == x[s])
    }

    pub fn terminal_count(&self) -> usize {
        self.decoders.len()
    }
}

fn domain_size(radices: &[usize], what: &str) -> Result<usize> {
    radix::size(radices).ok_or_else(|| Error::Resource {
        what: format!("{what} domain"),
        required: radices.iter().map(|&r| r as u128).product(),
        cap: usize::MAX as u128,
    })
}

/// Every edge message for a single source tuple.
pub fn evaluate_global(
    inst: &NetworkInstance,
    code: &NetworkCode,
    x: &[usize],
) -> Result<Vec<usize>> {
    CompiledCode::new(inst, code)?.evaluate(x)
}
