//! Group-characterizable codes: every variable `X_f` is the left coset
//! `gG_f` of a uniformly random group element `g`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::{build_global_table, entropy_from_counts, NetworkCode, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::group::{FiniteGroup, Subgroup};
use crate::library::{star, STAR_EDGE};
use crate::network::NetworkInstance;
use crate::radix;
use crate::removal::{
    check_condition_a, check_condition_b, find_witness_y, restrict_code, AuxiliaryPartition,
    Removal,
};

/// Largest group enumerated element by element.
pub const GROUP_ENUMERATION_CAP: usize = 1 << 20;

/// Decoder spaces up to this many tables are also searched literally.
const BRUTE_FORCE_DECODERS: u128 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupCharacterization {
    pub group: FiniteGroup,
    pub subgroups: BTreeMap<String, Subgroup>,
    pub abelian: bool,
}

/// Serialized form: a group description and named subgroup member lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterizationFile {
    pub group: FiniteGroup,
    pub subgroups: BTreeMap<String, Vec<usize>>,
}

impl GroupCharacterization {
    pub fn new(group: FiniteGroup, subgroups: BTreeMap<String, Subgroup>) -> Result<Self> {
        if group.order() > GROUP_ENUMERATION_CAP {
            return Err(Error::Resource {
                what: "group elements to enumerate".into(),
                required: group.order() as u128,
                cap: GROUP_ENUMERATION_CAP as u128,
            });
        }
        if let Some((name, _)) = subgroups.iter().find(|(_, h)| h.parent() != &group) {
            return Err(Error::precondition(format!(
                "subgroup {name:?} belongs to another group"
            )));
        }
        let abelian = group.is_abelian();
        Ok(GroupCharacterization {
            group,
            subgroups,
            abelian,
        })
    }

    pub fn from_file(file: CharacterizationFile) -> Result<Self> {
        let subgroups = file
            .subgroups
            .iter()
            .map(|(n, m)| Ok((n.clone(), Subgroup::new(&file.group, m)?)))
            .collect::<Result<_>>()?;
        Self::new(file.group, subgroups)
    }

    pub fn to_file(&self) -> CharacterizationFile {
        CharacterizationFile {
            group: self.group.clone(),
            subgroups: self
                .subgroups
                .iter()
                .map(|(n, h)| (n.clone(), h.members().to_vec()))
                .collect(),
        }
    }

    pub fn subgroup(&self, name: &str) -> Result<&Subgroup> {
        self.subgroups
            .get(name)
            .ok_or_else(|| Error::domain(format!("unknown variable {name:?}")))
    }

    /// `∩_{f∈alpha} G_f`, the whole group for an empty set.
    pub fn intersection(&self, alpha: &[&str]) -> Result<Subgroup> {
        alpha
            .iter()
            .try_fold(Subgroup::whole(&self.group), |acc, name| {
                acc.intersection(self.subgroup(name)?)
            })
    }

    /// `H(X_alpha) = log2(|G| / |∩ G_f|)`.
    pub fn induced_entropy(&self, alpha: &[&str]) -> Result<f64> {
        let h = self.intersection(alpha)?;
        Ok((self.group.order() as f64 / h.order() as f64).log2())
    }

    /// The same entropy computed from the joint coset distribution of a
    /// uniform group element.
    pub fn enumerated_entropy(&self, alpha: &[&str]) -> Result<f64> {
        let labels: Vec<Vec<usize>> = alpha
            .iter()
            .map(|n| Ok(self.subgroup(n)?.coset_labels()))
            .collect::<Result<_>>()?;
        let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
        for g in self.group.elements() {
            *counts
                .entry(labels.iter().map(|l| l[g]).collect())
                .or_default() += 1;
        }
        Ok(entropy_from_counts(
            counts.into_values(),
            self.group.order() as u64,
        ))
    }
}

/// Result of the abelian removal construction.
#[derive(Clone, Debug)]
pub struct GroupRemoval {
    /// `H_i = ∩_{j≠i} G_j`.
    pub h: Vec<Subgroup>,
    /// `G' = ∏_i (G_{e*} ∩ H_i)`.
    pub g_prime: Subgroup,
    /// Concrete star network realizing the sources and `e*`; symbols are
    /// coset indices in order of smallest element.
    pub instance: NetworkInstance,
    pub code: NetworkCode,
    /// Source tuple of each group element.
    pub element_tuples: Vec<Vec<usize>>,
    /// Tuples labeled by the `G'`-coset of their group element.
    pub partition: AuxiliaryPartition,
    pub condition_a: bool,
    pub condition_b: bool,
    /// `H(X_S|Y) = Σ_i H(X_i|Y)` from subgroup orders.
    pub entropy_identity: bool,
    /// `|G'|·|G_i| ≥ |G_{e*}|·|G_i ∩ G'|` per source.
    pub size_bounds: Vec<bool>,
    pub witness: Option<usize>,
    pub removal: Option<Removal>,
}

impl GroupRemoval {
    pub fn all_conditions_hold(&self) -> bool {
        self.condition_a
            && self.condition_b
            && self.entropy_identity
            && self.size_bounds.iter().all(|&b| b)
            && self.witness.is_some()
    }
}

/// Builds the partition `Y = gG'` for an abelian characterization and checks
/// it against conditions A, B and C with zero error on a concrete star
/// network carrying the sources and `e*`.
pub fn abelian_edge_removal(
    gc: &GroupCharacterization,
    edge: &str,
    sources: &[&str],
) -> Result<GroupRemoval> {
    if !gc.abelian {
        return Err(Error::precondition("group is not abelian"));
    }
    if sources.is_empty() {
        return Err(Error::InvalidArity("no sources".into()));
    }
    let g = &gc.group;
    let ge = gc.subgroup(edge)?;
    let gs: Vec<&Subgroup> = sources
        .iter()
        .map(|s| gc.subgroup(s))
        .collect::<Result<_>>()?;
    if !gc.intersection(sources)?.is_trivial() {
        return Err(Error::precondition(
            "source subgroups do not intersect trivially",
        ));
    }
    let source_sizes: Vec<usize> = gs.iter().map(|h| h.index()).collect();
    if source_sizes.iter().map(|&n| n as u128).product::<u128>() != g.order() as u128 {
        return Err(Error::precondition(
            "sources are not independent: |G| differs from the product of the source alphabet sizes",
        ));
    }

    let h: Vec<Subgroup> = (0..gs.len())
        .map(|i| {
            let others: Vec<&str> = (0..sources.len())
                .filter(|&j| j != i)
                .map(|j| sources[j])
                .collect();
            gc.intersection(&others)
        })
        .collect::<Result<_>>()?;
    let mut gens = Vec::new();
    for hi in &h {
        gens.extend_from_slice(ge.intersection(hi)?.members());
    }
    let g_prime = Subgroup::generated_by(g, &gens)?;

    let source_labels: Vec<Vec<usize>> = gs.iter().map(|h| h.coset_labels()).collect();
    let edge_labels = ge.coset_labels();
    let total = g.order();
    let mut element_of_tuple = vec![usize::MAX; total];
    let mut element_tuples = Vec::with_capacity(total);
    for x in g.elements() {
        let t: Vec<usize> = source_labels.iter().map(|l| l[x]).collect();
        element_of_tuple[radix::encode(&t, &source_sizes)] = x;
        element_tuples.push(t);
    }
    if element_of_tuple.contains(&usize::MAX) {
        return Err(Error::internal(
            "coset tuples do not cover the source alphabets",
        ));
    }
    let phi: Vec<usize> = element_of_tuple.iter().map(|&x| edge_labels[x]).collect();
    let (instance, code) = star(&source_sizes, ge.index(), phi);
    let table = build_global_table(&instance, &code, DEFAULT_ENUMERATION_CAP)?;
    let e = instance.edge_index(STAR_EDGE)?;

    let y_labels = g_prime.coset_labels();
    let partition = AuxiliaryPartition::new(
        &source_sizes,
        element_of_tuple.iter().map(|&x| y_labels[x]).collect(),
    )?;
    let condition_a =
        g_prime.is_subset_of(ge) && check_condition_a(&table, e, &partition).is_some();
    let condition_b = check_condition_b(&partition);

    let log = |n: usize| (n as f64).log2();
    let lhs = log(g_prime.order());
    let rhs: f64 = gs
        .iter()
        .map(|gi| Ok(log(g_prime.order()) - log(gi.intersection(&g_prime)?.order())))
        .sum::<Result<f64>>()?;
    let entropy_identity = (lhs - rhs).abs() <= crate::code::ENTROPY_TOLERANCE;

    let size_bounds = gs
        .iter()
        .map(|gi| {
            Ok(g_prime.order() as u128 * gi.order() as u128
                >= ge.order() as u128 * gi.intersection(&g_prime)?.order() as u128)
        })
        .collect::<Result<Vec<bool>>>()?;

    let (witness, removal) = if condition_a && condition_b {
        let w = find_witness_y(&table, e, &partition, Fraction::ZERO, ge.index())?;
        let removal = match w {
            Some(y) => Some(restrict_code(
                &instance,
                &code,
                &table,
                STAR_EDGE,
                &partition,
                y,
                Fraction::ZERO,
                DEFAULT_ENUMERATION_CAP,
            )?),
            None => None,
        };
        (w, removal)
    } else {
        (None, None)
    };

    Ok(GroupRemoval {
        h,
        g_prime,
        instance,
        code,
        element_tuples,
        partition,
        condition_a,
        condition_b,
        entropy_identity,
        size_bounds,
        witness,
        removal,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum TerminalDecision {
    /// `G_In ⊆ G_i`: the coset of `G_In` determines the coset of `G_i`.
    ZeroError {
        /// Index of the `G_i`-coset for each `G_In`-coset index.
        decoder: Vec<usize>,
        verified: bool,
    },
    /// `q = |G_In| / |G_In ∩ G_i| ≥ 2`: each received coset leaves `q`
    /// equally likely source values.
    Lossy {
        q: usize,
        /// Exact minimum error over all decoders.
        min_error: Fraction,
        /// `1 - 1/q`.
        bound: Fraction,
        /// Whether every decoder table was also tried one by one.
        brute_forced: bool,
    },
}

/// For each `(received variable, demanded source)` pair, either a verified
/// zero-error decoder or the exact minimum error of any decoder.
pub fn zero_error_upgrade(
    gc: &GroupCharacterization,
    terminals: &[(&str, &str)],
) -> Result<Vec<TerminalDecision>> {
    terminals
        .iter()
        .map(|&(input, source)| decide(gc, gc.subgroup(input)?, gc.subgroup(source)?))
        .collect()
}

fn decide(gc: &GroupCharacterization, g_in: &Subgroup, g_i: &Subgroup) -> Result<TerminalDecision> {
    let in_labels = g_in.coset_labels();
    let i_labels = g_i.coset_labels();
    let n = gc.group.order();
    if g_in.is_subset_of(g_i) {
        let mut decoder = vec![usize::MAX; g_in.index()];
        for x in 0..n {
            decoder[in_labels[x]] = i_labels[x];
        }
        let verified = (0..n).all(|x| decoder[in_labels[x]] == i_labels[x]);
        return Ok(TerminalDecision::ZeroError { decoder, verified });
    }
    let q = g_in.order() / g_in.intersection(g_i)?.order();
    let (a, b) = (g_in.index(), g_i.index());
    let mut joint = vec![0u64; a * b];
    for x in 0..n {
        joint[in_labels[x] * b + i_labels[x]] += 1;
    }
    let best_correct: u64 = (0..a)
        .map(|r| joint[r * b..(r + 1) * b].iter().copied().max().unwrap_or(0))
        .sum();
    let min_error = Fraction::of(n as u64 - best_correct, n as u64);

    let decoders = (b as u128).checked_pow(a as u32);
    let brute_forced = decoders.is_some_and(|d| d <= BRUTE_FORCE_DECODERS);
    if brute_forced {
        let count = decoders.expect("checked") as usize;
        let radices = vec![b; a];
        let brute_best = (0..count.div_ceil(4096))
            .into_par_iter()
            .map(|c| {
                let start = c * 4096;
                let mut table = radix::decode(start, &radices);
                let mut best = 0;
                for _ in start..(start + 4096).min(count) {
                    let correct: u64 = table
                        .iter()
                        .enumerate()
                        .map(|(r, &v)| joint[r * b + v])
                        .sum();
                    best = best.max(correct);
                    radix::increment(&mut table, &radices);
                }
                best
            })
            .max()
            .unwrap_or(0);
        if brute_best != best_correct {
            return Err(Error::internal(
                "decoder brute force disagrees with per-coset optimum",
            ));
        }
    }
    Ok(TerminalDecision::Lossy {
        q,
        min_error,
        bound: Fraction::new(q as u64 - 1, q as u64)?,
        brute_forced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> FiniteGroup {
        FiniteGroup::direct_product(vec![
            FiniteGroup::cyclic(2).unwrap(),
            FiniteGroup::cyclic(2).unwrap(),
        ])
        .unwrap()
    }

    fn gc(g: &FiniteGroup, subs: &[(&str, &[usize])]) -> GroupCharacterization {
        let map = subs
            .iter()
            .map(|(n, m)| (n.to_string(), Subgroup::new(g, m).unwrap()))
            .collect();
        GroupCharacterization::new(g.clone(), map).unwrap()
    }

    #[test]
    fn entropies() {
        // ids: (a,b) -> 2a + b
        let g = k4();
        let c = gc(
            &g,
            &[("whole", &[0, 1, 2, 3]), ("x1", &[0, 1]), ("x2", &[0, 2])],
        );
        assert_eq!(c.induced_entropy(&["whole"]).unwrap(), 0.0);
        assert_eq!(c.induced_entropy(&["x1"]).unwrap(), 1.0);
        assert_eq!(c.induced_entropy(&["x1", "x2"]).unwrap(), 2.0);
        assert_eq!(c.enumerated_entropy(&["x1", "x2"]).unwrap(), 2.0);
        assert_eq!(c.induced_entropy(&[]).unwrap(), 0.0);
        assert!(matches!(
            c.induced_entropy(&["nope"]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn diagonal_edge_removal() {
        let g = k4();
        let c = gc(&g, &[("x1", &[0, 1]), ("x2", &[0, 2]), ("e", &[0, 3])]);
        let r = abelian_edge_removal(&c, "e", &["x1", "x2"]).unwrap();
        assert!(r.all_conditions_hold());
        assert!(r.g_prime.is_trivial());
        assert!(r.removal.is_some());
    }

    #[test]
    fn dichotomy_on_k4() {
        let g = k4();
        let c = gc(&g, &[("in", &[0, 3]), ("x", &[0, 1]), ("id", &[0])]);
        match &zero_error_upgrade(&c, &[("in", "x")]).unwrap()[0] {
            TerminalDecision::Lossy {
                q,
                min_error,
                brute_forced,
                ..
            } => {
                assert_eq!(*q, 2);
                assert_eq!(*min_error, Fraction::new(1, 2).unwrap());
                assert!(brute_forced);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            zero_error_upgrade(&c, &[("id", "x")]).unwrap()[0],
            TerminalDecision::ZeroError { verified: true, .. }
        ));
        assert!(matches!(
            zero_error_upgrade(&c, &[("x", "x")]).unwrap()[0],
            TerminalDecision::ZeroError { verified: true, .. }
        ));
    }
}
