use itertools::Itertools;

use super::{check_cwl, CwlWitness, LabeledGroup};
use crate::code::{build_global_table, check_feasibility, NetworkCode};
use crate::error::Result;
use crate::fraction::Fraction;
use crate::group::FiniteGroup;
use crate::network::NetworkInstance;
use crate::radix;

/// All abelian groups of order `n` up to isomorphism, as products of cyclic
/// groups `Z_{d_1} × ... × Z_{d_r}` with `d_1 | d_2 | ... | d_r`. The cyclic
/// group comes first.
pub fn abelian_structures(n: usize) -> Vec<FiniteGroup> {
    fn chains(rem: usize, prev: usize, out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>) {
        if rem == 1 {
            out.push(cur.clone());
            return;
        }
        for d in (2..=rem).filter(|&d| rem.is_multiple_of(d) && d % prev == 0) {
            cur.push(d);
            chains(rem / d, d, out, cur);
            cur.pop();
        }
    }
    if n == 1 {
        return vec![FiniteGroup::Cyclic(1)];
    }
    let mut out = Vec::new();
    chains(n, 1, &mut out, &mut Vec::new());
    out.sort_by_key(|c| c.len());
    out.into_iter()
        .map(|c| {
            if c.len() == 1 {
                FiniteGroup::Cyclic(c[0])
            } else {
                FiniteGroup::direct_product(c.into_iter().map(FiniteGroup::Cyclic).collect())
                    .expect("nonempty")
            }
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// The code that was certified. Group structures live in the witness
    /// labels, so encoder tables never need rewriting.
    pub code: NetworkCode,
    pub witness: CwlWitness,
    pub attempts: usize,
    pub feasible_before: bool,
    pub feasible_after: bool,
}

/// The edge group induced on the image of `phi` by source structures, when
/// the fibers are cosets of a normal kernel.
fn induced_edge(phi_by_element: &[usize], domain: &FiniteGroup) -> Option<LabeledGroup> {
    let symbols: Vec<usize> = phi_by_element.iter().copied().sorted().dedup().collect();
    let idx = |s: usize| symbols.binary_search(&s).ok();
    let mut rep = vec![usize::MAX; symbols.len()];
    for (g, &s) in phi_by_element.iter().enumerate() {
        let i = idx(s)?;
        if rep[i] == usize::MAX {
            rep[i] = g;
        }
    }
    if symbols.len() > crate::group::TABLE_VERIFY_BOUND {
        return None;
    }
    let rows: Vec<Vec<usize>> = rep
        .iter()
        .map(|&a| {
            rep.iter()
                .map(|&b| idx(phi_by_element[domain.op(a, b)]).expect("image symbol"))
                .collect()
        })
        .collect();
    let group = FiniteGroup::from_table(rows).ok()?;
    LabeledGroup::new(group, symbols).ok()
}

/// Tries source group structures and symbol labelings, in order, until the
/// function on `edge_id` is certified CWL or `budget` assignments have been
/// tried. `None` is inconclusive.
pub fn cwl_search(
    inst: &NetworkInstance,
    code: &NetworkCode,
    edge_id: &str,
    budget: usize,
    eps: Fraction,
    rates: &[usize],
    cap: u128,
) -> Result<Option<SearchOutcome>> {
    if budget == 0 {
        return Ok(None);
    }
    let table = build_global_table(inst, code, cap)?;
    let edge = inst.edge_index(edge_id)?;
    let phi = table.column(edge);
    let sizes = table.source_sizes().to_vec();
    let before = check_feasibility(inst, code, &table, eps, rates)?.feasible;

    // Per-source options, each capped at the budget.
    let options: Vec<Vec<LabeledGroup>> = sizes
        .iter()
        .map(|&n| {
            abelian_structures(n)
                .into_iter()
                .flat_map(|g| {
                    (0..n).permutations(n).map(move |labels| LabeledGroup {
                        group: g.clone(),
                        labels,
                    })
                })
                .take(budget)
                .collect()
        })
        .collect();
    let radices: Vec<usize> = options.iter().map(Vec::len).collect();
    let mut pick = vec![0; sizes.len()];
    let mut attempts = 0;
    loop {
        attempts += 1;
        let sources: Vec<LabeledGroup> = pick
            .iter()
            .zip(&options)
            .map(|(&p, o)| o[p].clone())
            .collect();
        let domain =
            FiniteGroup::direct_product(sources.iter().map(|s| s.group.clone()).collect())?;
        let by_element: Vec<usize> = domain
            .elements()
            .map(|g| {
                let symbols: Vec<usize> = domain
                    .components(g)
                    .iter()
                    .zip(&sources)
                    .map(|(&p, s)| s.labels[p])
                    .collect();
                phi[radix::encode(&symbols, &sizes)]
            })
            .collect();
        if let Some(edge_group) = induced_edge(&by_element, &domain) {
            if let Some(witness) = check_cwl(&phi, &sizes, &sources, &edge_group)? {
                let after = check_feasibility(inst, code, &table, eps, rates)?.feasible;
                return Ok(Some(SearchOutcome {
                    code: code.clone(),
                    witness,
                    attempts,
                    feasible_before: before,
                    feasible_after: after,
                }));
            }
        }
        if attempts >= budget || !radix::increment(&mut pick, &radices) {
            return Ok(None);
        }
    }
}
