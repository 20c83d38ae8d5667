use serde::{Deserialize, Serialize};

use super::{GlobalCodeTable, NetworkCode};
use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::network::NetworkInstance;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminalError {
    pub terminal: String,
    pub bad: u64,
    pub error: Fraction,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapacityFlag {
    pub edge: String,
    pub code_size: usize,
    pub capacity: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub tuples: u64,
    pub bad: u64,
    /// Global bad fraction over all source tuples.
    pub error: Fraction,
    pub first_bad_tuple: Option<Vec<usize>>,
    pub terminals: Vec<TerminalError>,
    pub source_cardinalities: Vec<usize>,
    pub target_cardinalities: Vec<usize>,
    pub rates_ok: bool,
    pub capacities: Vec<CapacityFlag>,
    pub capacities_ok: bool,
    pub decoding_ok: bool,
    pub target_eps: Fraction,
    pub blocklength: usize,
    /// Sources are uniform and independent, and encoders are deterministic,
    /// by construction of the data model.
    pub structural_conditions: String,
    pub feasible: bool,
}

/// Exact `(eps, rates, n)`-feasibility of `code` on `inst`.
///
/// Each terminal must decode correctly on more than a `1 - eps` fraction of
/// tuples; for `eps = 0` that means on every tuple. `target_rates` holds the
/// required source alphabet cardinalities.
pub fn check_feasibility(
    inst: &NetworkInstance,
    code: &NetworkCode,
    table: &GlobalCodeTable,
    target_eps: Fraction,
    target_rates: &[usize],
) -> Result<FeasibilityReport> {
    if target_rates.len() != inst.sources.len() {
        return Err(Error::InvalidArity(format!(
            "{} target rates for {} sources",
            target_rates.len(),
            inst.sources.len()
        )));
    }
    let total = table.tuple_count() as u64;
    let bad = table.bad_count();
    let terminals: Vec<TerminalError> = inst
        .terminals
        .iter()
        .zip(table.terminal_bad_counts())
        .map(|(t, &b)| TerminalError {
            terminal: t.clone(),
            bad: b,
            error: Fraction::of(b, total),
            ok: target_eps.budget_admits(b, total),
        })
        .collect();
    let decoding_ok = terminals.iter().all(|t| t.ok);
    let source_cardinalities = table.source_sizes().to_vec();
    let rates_ok = source_cardinalities
        .iter()
        .zip(target_rates)
        .all(|(&have, &want)| have >= want);
    let capacities: Vec<CapacityFlag> = inst
        .edges
        .iter()
        .map(|e| {
            let code_size = code.edge_alphabets.get(&e.id).copied().unwrap_or(0);
            CapacityFlag {
                edge: e.id.clone(),
                code_size,
                capacity: e.alphabet_size,
                ok: code_size <= e.alphabet_size,
            }
        })
        .collect();
    let capacities_ok = capacities.iter().all(|c| c.ok);
    Ok(FeasibilityReport {
        tuples: total,
        bad,
        error: Fraction::of(bad, total),
        first_bad_tuple: table.first_bad().map(|k| table.tuple(k)),
        terminals,
        source_cardinalities,
        target_cardinalities: target_rates.to_vec(),
        rates_ok,
        capacities,
        capacities_ok,
        decoding_ok,
        target_eps,
        blocklength: code.blocklength,
        structural_conditions:
            "uniform independent sources and deterministic encoders hold by construction".into(),
        feasible: decoding_ok && rates_ok && capacities_ok,
    })
}
