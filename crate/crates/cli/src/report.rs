//! Run reports and their text and CSV forms.

use std::path::Path;

use anyhow::{Context, Result};
use edgerm::removal::RemovalCertificate;
use edgerm::Fraction;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Present only with `--timing`, so that default reports do not depend on
/// the machine or the worker count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Runtime {
    pub wall_time_us: u64,
    pub workers: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub verdict: bool,
    pub result: serde_json::Value,
    pub certificates: Vec<CertificateRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime: Option<Runtime>,
}

/// One removal certificate as a flat record. Lists are `;`-separated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRow {
    pub edge: String,
    pub witness: Option<usize>,
    pub edge_value: usize,
    pub eps: Fraction,
    pub edge_capacity: usize,
    pub rate_divisor: usize,
    pub original_cardinalities: String,
    pub restricted_cardinalities: String,
    pub promised_cardinalities: String,
    pub rates_met: bool,
    pub restricted_error: Fraction,
    pub feasible: bool,
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(";")
}

impl From<&RemovalCertificate> for CertificateRow {
    fn from(c: &RemovalCertificate) -> Self {
        CertificateRow {
            edge: c.edge.clone(),
            witness: c.witness,
            edge_value: c.edge_value,
            eps: c.eps,
            edge_capacity: c.edge_capacity,
            rate_divisor: c.rate_divisor,
            original_cardinalities: join(&c.original_cardinalities),
            restricted_cardinalities: join(&c.restricted_cardinalities),
            promised_cardinalities: join(&c.promised_cardinalities),
            rates_met: c.rates_met,
            restricted_error: c.report.error,
            feasible: c.report.feasible,
        }
    }
}

pub fn digest(path: &Path) -> Result<InputDigest> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(InputDigest {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    })
}

pub fn to_text(r: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("report serializes");
    s.push('\n');
    s
}

#[cfg_attr(not(test), allow(dead_code))]
pub fn from_text(s: &str) -> Result<RunReport> {
    serde_json::from_str(s).context("parsing report")
}

const CSV_HEADER: [&str; 12] = [
    "edge",
    "witness",
    "edge_value",
    "eps",
    "edge_capacity",
    "rate_divisor",
    "original_cardinalities",
    "restricted_cardinalities",
    "promised_cardinalities",
    "rates_met",
    "restricted_error",
    "feasible",
];

/// Certificate rows only; the header is written even with no rows.
pub fn to_csv(rows: &[CertificateRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.serialize(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

#[cfg_attr(not(test), allow(dead_code))]
pub fn from_csv(s: &str) -> Result<Vec<CertificateRow>> {
    csv::Reader::from_reader(s.as_bytes())
        .deserialize()
        .map(|r| r.context("parsing certificate row"))
        .collect()
}
