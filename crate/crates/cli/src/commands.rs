//! Subcommand implementations. Each returns a verdict and a structured result.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use edgerm::code::{build_global_table, check_feasibility, GlobalCodeTable, NetworkCode};
use edgerm::cwl::{
    check_cwl, check_piecewise, cwl_search, theorem2_remove, theorem3_remove, CwlWitness,
    LabeledGroup, PieceSpec,
};
use edgerm::group_codes::{
    abelian_edge_removal, zero_error_upgrade, CharacterizationFile, GroupCharacterization,
};
use edgerm::library;
use edgerm::network::NetworkInstance;
use edgerm::removal::{
    check_condition_a, check_condition_b, corollary3_remove, find_witness_y, restrict_code,
    AuxiliaryPartition, PartitionFile, Removal,
};
use edgerm::Fraction;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::report::{digest, CertificateRow, InputDigest};
use crate::{CaseStudy, Command};

pub struct Outcome {
    pub inputs: Vec<InputDigest>,
    pub verdict: bool,
    pub result: Value,
    pub certificates: Vec<CertificateRow>,
}

#[derive(Default)]
struct Inputs(Vec<InputDigest>);

impl Inputs {
    fn text(&mut self, path: &Path) -> Result<String> {
        self.0.push(digest(path)?);
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }

    fn json<T: DeserializeOwned>(&mut self, path: &Path) -> Result<T> {
        let text = self.text(path)?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    fn instance(&mut self, path: &Path) -> Result<NetworkInstance> {
        let text = self.text(path)?;
        NetworkInstance::from_json(&text).with_context(|| format!("parsing {}", path.display()))
    }

    fn code(&mut self, path: &Path) -> Result<NetworkCode> {
        let text = self.text(path)?;
        NetworkCode::from_json(&text).with_context(|| format!("parsing {}", path.display()))
    }

    fn pair(&mut self, inst: &Path, code: &Path) -> Result<(NetworkInstance, NetworkCode)> {
        Ok((self.instance(inst)?, self.code(code)?))
    }

    fn characterization(&mut self, path: &Path) -> Result<GroupCharacterization> {
        let file: CharacterizationFile = self.json(path)?;
        Ok(GroupCharacterization::from_file(file)?)
    }
}

fn parse_eps(s: &str) -> Result<Fraction> {
    s.parse::<Fraction>()
        .map_err(|e| anyhow!("--eps {s:?}: {e}"))
}

/// Integers are bits per source symbol, so `R` means `2^(R·n)` messages
/// over blocklength `n`. A `#` prefix gives the message count directly.
fn parse_rates(s: Option<&str>, code: &NetworkCode) -> Result<Vec<usize>> {
    let Some(s) = s else {
        return Ok(code.source_alphabets.clone());
    };
    s.split(',')
        .map(|tok| {
            let tok = tok.trim();
            if let Some(card) = tok.strip_prefix('#') {
                card.parse::<usize>()
                    .map_err(|e| anyhow!("rate {tok:?}: {e}"))
            } else {
                let bits: u32 = tok.parse().map_err(|e| anyhow!("rate {tok:?}: {e}"))?;
                let exp = bits
                    .checked_mul(code.blocklength as u32)
                    .filter(|&e| e < usize::BITS)
                    .ok_or_else(|| anyhow!("rate {tok:?} is too large"))?;
                Ok(1usize << exp)
            }
        })
        .collect()
}

fn witness_json(w: &CwlWitness) -> Value {
    json!({
        "sources": w.sources,
        "edge": w.edge,
        "domain": w.domain.describe(),
    })
}

#[derive(Deserialize)]
struct GroupsFile {
    sources: Vec<LabeledGroup>,
    edge: LabeledGroup,
}

fn emit(dir: Option<&PathBuf>, inst: &NetworkInstance, code: &NetworkCode) -> Result<Value> {
    let Some(dir) = dir else {
        return Ok(Value::Null);
    };
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let ip = dir.join("instance.json");
    let cp = dir.join("code.json");
    std::fs::write(&ip, inst.to_json()).with_context(|| format!("writing {}", ip.display()))?;
    std::fs::write(&cp, code.to_json()).with_context(|| format!("writing {}", cp.display()))?;
    Ok(json!({
        "instance": ip.display().to_string(),
        "code": cp.display().to_string(),
    }))
}

fn removal_outcome(
    inputs: Inputs,
    rem: &Removal,
    extra: Value,
    dir: Option<&PathBuf>,
) -> Result<Outcome> {
    let files = emit(dir, &rem.instance, &rem.code)?;
    Ok(Outcome {
        inputs: inputs.0,
        verdict: rem.certificate.report.feasible,
        result: json!({
            "certificate": rem.certificate,
            "details": extra,
            "emitted": files,
        }),
        certificates: vec![CertificateRow::from(&rem.certificate)],
    })
}

fn negative(inputs: Inputs, result: Value) -> Outcome {
    Outcome {
        inputs: inputs.0,
        verdict: false,
        result,
        certificates: Vec::new(),
    }
}

fn edge_column(inst: &NetworkInstance, table: &GlobalCodeTable, edge: &str) -> Result<Vec<usize>> {
    Ok(table.column(inst.edge_index(edge)?))
}

pub fn dispatch(cmd: &Command, cap: u128) -> Result<Outcome> {
    let mut inputs = Inputs::default();
    match cmd {
        Command::Validate { instance } => {
            let text = inputs.text(instance)?;
            let inst = NetworkInstance::from_json(&text)
                .with_context(|| format!("parsing {}", instance.display()))?;
            let violations = inst.validate();
            Ok(Outcome {
                inputs: inputs.0,
                verdict: violations.is_empty(),
                result: json!({ "violations": violations }),
                certificates: Vec::new(),
            })
        }
        Command::Verify {
            instance,
            code,
            eps,
            rates,
        } => {
            let (inst, code) = inputs.pair(instance, code)?;
            let eps = parse_eps(eps)?;
            let rates = parse_rates(rates.as_deref(), &code)?;
            let table = build_global_table(&inst, &code, cap)?;
            let rep = check_feasibility(&inst, &code, &table, eps, &rates)?;
            Ok(Outcome {
                inputs: inputs.0,
                verdict: rep.feasible,
                result: serde_json::to_value(&rep)?,
                certificates: Vec::new(),
            })
        }
        Command::RemoveEdge {
            instance,
            code,
            edge,
            partition,
            eps,
            y,
            budget,
            emit_dir,
        } => {
            let (inst, code) = inputs.pair(instance, code)?;
            let eps = parse_eps(eps)?;
            let table = build_global_table(&inst, &code, cap)?;
            let e = inst.edge_index(edge)?;
            let part = match partition.as_str() {
                "builtin:cor3" => {
                    return match corollary3_remove(&inst, &code, &table, edge, cap)? {
                        Some(rem) => removal_outcome(inputs, &rem, Value::Null, emit_dir.as_ref()),
                        None => Ok(negative(
                            inputs,
                            json!({ "reason": "some fiber of the edge function is not a product set" }),
                        )),
                    };
                }
                "builtin:thm2" => {
                    let rates = code.source_alphabets.clone();
                    return match cwl_search(&inst, &code, edge, *budget, eps, &rates, cap)? {
                        Some(found) => {
                            let rem = theorem2_remove(
                                &inst,
                                &code,
                                &table,
                                edge,
                                &found.witness,
                                eps,
                                cap,
                            )?;
                            let details = json!({
                                "witness": witness_json(&found.witness),
                                "attempts": found.attempts,
                            });
                            removal_outcome(inputs, &rem, details, emit_dir.as_ref())
                        }
                        None => Ok(negative(
                            inputs,
                            json!({ "reason": "no CWL structure found within the budget", "budget": budget }),
                        )),
                    };
                }
                "builtin:edge" => AuxiliaryPartition::from_edge(&table, e),
                path => {
                    let file: PartitionFile = inputs.json(Path::new(path))?;
                    AuxiliaryPartition::from_file(table.source_sizes(), file)?
                }
            };
            let a = check_condition_a(&table, e, &part);
            let b = check_condition_b(&part);
            if a.is_none() || !b {
                return Ok(negative(
                    inputs,
                    json!({ "condition_a": a.is_some(), "condition_b": b }),
                ));
            }
            let capacity = inst.edges[e].alphabet_size;
            let y = match y {
                Some(y) => Some(*y),
                None => find_witness_y(&table, e, &part, eps, capacity)?,
            };
            let Some(y) = y else {
                return Ok(negative(
                    inputs,
                    json!({ "condition_a": true, "condition_b": true, "condition_c": false }),
                ));
            };
            let rem = restrict_code(&inst, &code, &table, edge, &part, y, eps, cap)?;
            removal_outcome(inputs, &rem, Value::Null, emit_dir.as_ref())
        }
        Command::CwlCheck {
            instance,
            code,
            edge,
            groups,
        } => {
            let (inst, code) = inputs.pair(instance, code)?;
            let g: GroupsFile = inputs.json(groups)?;
            let table = build_global_table(&inst, &code, cap)?;
            let phi = edge_column(&inst, &table, edge)?;
            let w = check_cwl(&phi, table.source_sizes(), &g.sources, &g.edge)?;
            Ok(Outcome {
                inputs: inputs.0,
                verdict: w.is_some(),
                result: json!({ "witness": w.as_ref().map(witness_json) }),
                certificates: Vec::new(),
            })
        }
        Command::CwlRemove {
            instance,
            code,
            edge,
            groups,
            budget,
            eps,
            emit_dir,
        } => {
            let (inst, code) = inputs.pair(instance, code)?;
            let eps = parse_eps(eps)?;
            let table = build_global_table(&inst, &code, cap)?;
            let witness = match groups {
                Some(path) => {
                    let g: GroupsFile = inputs.json(path)?;
                    let phi = edge_column(&inst, &table, edge)?;
                    check_cwl(&phi, table.source_sizes(), &g.sources, &g.edge)?
                }
                None => {
                    let rates = code.source_alphabets.clone();
                    cwl_search(&inst, &code, edge, *budget, eps, &rates, cap)?.map(|o| o.witness)
                }
            };
            let Some(w) = witness else {
                return Ok(negative(
                    inputs,
                    json!({ "reason": "edge function is not CWL for these groups" }),
                ));
            };
            let rem = theorem2_remove(&inst, &code, &table, edge, &w, eps, cap)?;
            removal_outcome(
                inputs,
                &rem,
                json!({ "witness": witness_json(&w) }),
                emit_dir.as_ref(),
            )
        }
        Command::PwlRemove {
            instance,
            code,
            edge,
            pieces,
            emit_dir,
        } => {
            let (inst, code) = inputs.pair(instance, code)?;
            let specs: Vec<PieceSpec> = inputs.json(pieces)?;
            let table = build_global_table(&inst, &code, cap)?;
            let phi = edge_column(&inst, &table, edge)?;
            let Some(pw) = check_piecewise(&phi, table.source_sizes(), &specs)? else {
                return Ok(negative(
                    inputs,
                    json!({ "reason": "edge function is not piecewise CWL on these pieces" }),
                ));
            };
            let rem = theorem3_remove(&inst, &code, &table, edge, &pw, cap)?;
            let details = json!({ "pieces": pw.pieces.len() });
            removal_outcome(inputs, &rem, details, emit_dir.as_ref())
        }
        Command::CwlSearch {
            instance,
            code,
            edge,
            budget,
            eps,
            rates,
        } => {
            let (inst, code) = inputs.pair(instance, code)?;
            let eps = parse_eps(eps)?;
            let rates = parse_rates(rates.as_deref(), &code)?;
            let found = cwl_search(&inst, &code, edge, *budget, eps, &rates, cap)?;
            let result = match &found {
                Some(o) => json!({
                    "witness": witness_json(&o.witness),
                    "attempts": o.attempts,
                    "feasible_before": o.feasible_before,
                    "feasible_after": o.feasible_after,
                }),
                None => json!({ "witness": null, "budget": budget }),
            };
            Ok(Outcome {
                inputs: inputs.0,
                verdict: found.is_some(),
                result,
                certificates: Vec::new(),
            })
        }
        Command::GroupRemove {
            characterization,
            edge,
            sources,
            emit_dir,
        } => {
            let gc = inputs.characterization(characterization)?;
            let names: Vec<&str> = sources.iter().map(String::as_str).collect();
            let r = abelian_edge_removal(&gc, edge, &names)?;
            let verdict = r.all_conditions_hold()
                && r.removal
                    .as_ref()
                    .is_some_and(|m| m.certificate.report.feasible);
            let files = match &r.removal {
                Some(m) => emit(emit_dir.as_ref(), &m.instance, &m.code)?,
                None => Value::Null,
            };
            let result = json!({
                "h": r.h.iter().map(|s| s.members().to_vec()).collect::<Vec<_>>(),
                "g_prime": r.g_prime.members(),
                "condition_a": r.condition_a,
                "condition_b": r.condition_b,
                "entropy_identity": r.entropy_identity,
                "size_bounds": r.size_bounds,
                "witness": r.witness,
                "certificate": r.removal.as_ref().map(|m| &m.certificate),
                "emitted": files,
            });
            Ok(Outcome {
                inputs: inputs.0,
                verdict,
                result,
                certificates: r
                    .removal
                    .iter()
                    .map(|m| CertificateRow::from(&m.certificate))
                    .collect(),
            })
        }
        Command::GroupZeroError {
            characterization,
            terminals,
        } => {
            let gc = inputs.characterization(characterization)?;
            let pairs = terminals
                .iter()
                .map(|t| {
                    t.split_once(':')
                        .ok_or_else(|| anyhow!("--terminal {t:?}: expected input:source"))
                })
                .collect::<Result<Vec<_>>>()?;
            let decisions = zero_error_upgrade(&gc, &pairs)?;
            let verdict = decisions.iter().all(|d| {
                matches!(
                    d,
                    edgerm::group_codes::TerminalDecision::ZeroError { verified: true, .. }
                )
            });
            Ok(Outcome {
                inputs: inputs.0,
                verdict,
                result: json!({ "terminals": terminals, "decisions": decisions }),
                certificates: Vec::new(),
            })
        }
        Command::CaseStudy {
            name,
            m,
            w,
            l,
            s,
            alpha,
            k,
            t,
            search,
            emit_dir,
        } => case_study(
            *name,
            *m,
            *w,
            *l,
            *s,
            *alpha,
            *k,
            t.as_deref(),
            *search,
            emit_dir.as_ref(),
            cap,
        ),
    }
}

#[allow(clippy::too_many_arguments)]
fn case_study(
    name: CaseStudy,
    m: usize,
    w: usize,
    l: Option<usize>,
    s: usize,
    alpha: usize,
    k: usize,
    t: Option<&[usize]>,
    search: bool,
    emit_dir: Option<&PathBuf>,
    cap: u128,
) -> Result<Outcome> {
    let (verdict, result) = match name {
        CaseStudy::Butterfly => {
            let (inst, code) = library::butterfly();
            let table = build_global_table(&inst, &code, cap)?;
            let rep =
                check_feasibility(&inst, &code, &table, Fraction::ZERO, &code.source_alphabets)?;
            let phi = edge_column(&inst, &table, "bottleneck")?;
            let z2 = LabeledGroup::cyclic(2)?;
            let wit = check_cwl(&phi, table.source_sizes(), &[z2.clone(), z2.clone()], &z2)?
                .ok_or_else(|| anyhow!("bundled butterfly bottleneck is not CWL"))?;
            let rem = theorem2_remove(
                &inst,
                &code,
                &table,
                "bottleneck",
                &wit,
                Fraction::ZERO,
                cap,
            )?;
            let files = emit(emit_dir, &inst, &code)?;
            let verdict = rep.feasible && rem.certificate.report.feasible;
            let result = json!({
                "feasibility": rep,
                "witness": witness_json(&wit),
                "certificate": rem.certificate,
                "emitted": files,
            });
            return Ok(Outcome {
                inputs: Vec::new(),
                verdict,
                result,
                certificates: vec![CertificateRow::from(&rem.certificate)],
            });
        }
        CaseStudy::N2 => {
            let assignment = match l {
                Some(l) => {
                    if l == 0 || l > w {
                        bail!("--l must lie in 1..={w}");
                    }
                    library::identity_reassignment(w, l)
                }
                None => (1..=w).collect(),
            };
            let rep = library::n2_code_check(m, w, &assignment, cap)?;
            let cwl_ok = rep.copies.iter().all(|c| c.edges_cwl != Some(false));
            (rep.decoding_ok && cwl_ok, serde_json::to_value(&rep)?)
        }
        CaseStudy::N3Injectivity => {
            let rep = library::n3_injectivity(m, s, alpha)?;
            (rep.injective, serde_json::to_value(&rep)?)
        }
        CaseStudy::Dougherty => {
            let rep = library::dougherty_identity_check(k, t, search, cap)?;
            let verdict = match &rep.solutions {
                Some(sol) => !sol.is_empty(),
                None => rep.all_hold == Some(true),
            };
            (verdict, serde_json::to_value(&rep)?)
        }
    };
    Ok(Outcome {
        inputs: Vec::new(),
        verdict,
        result,
        certificates: Vec::new(),
    })
}
