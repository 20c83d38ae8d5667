//! Coordinate-wise linear (CWL) edge functions.
//!
//! A function `φ` of the source tuple is CWL when the source alphabets and
//! the image of `φ` carry group structures making `φ` a homomorphism from
//! the direct product of the source groups onto the image group. Group
//! structures on symbol sets are given as [`LabeledGroup`]s: a group plus
//! the symbol assigned to each element id.

mod characterize;
mod piecewise;
mod relabel;
mod search;
mod theorem2;

use serde::{Deserialize, Serialize};

pub use characterize::{cwl_to_group_characterization, EDGE_NAME, SOURCE_PREFIX};
pub use piecewise::{check_piecewise, theorem3_remove, Piece, PieceSpec, PiecewiseCwl};
pub use relabel::{balanced_to_cwl_relabel, Relabeling};
pub use search::{abelian_structures, cwl_search, SearchOutcome};
pub use theorem2::{build_theorem2_partition, lemma1_verify, theorem2_remove, Theorem2Partition};

use crate::error::{Error, Result};
use crate::group::{is_homomorphism_by_factors, FiniteGroup};
use crate::radix;

/// A group whose element `g` stands for symbol `labels[g]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledGroup {
    pub group: FiniteGroup,
    pub labels: Vec<usize>,
}

impl LabeledGroup {
    /// Element `g` stands for symbol `g`.
    pub fn identity_labels(group: FiniteGroup) -> Self {
        let labels = group.elements().collect();
        LabeledGroup { group, labels }
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Ok(Self::identity_labels(FiniteGroup::cyclic(n)?))
    }

    pub fn new(group: FiniteGroup, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != group.order() {
            return Err(Error::domain(format!(
                "{} labels for a group of order {}",
                labels.len(),
                group.order()
            )));
        }
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::domain("group labels must be distinct"));
        }
        Ok(LabeledGroup { group, labels })
    }

    /// Element id carrying each symbol, `None` for unused symbols.
    pub fn inverse_labels(&self) -> Vec<Option<usize>> {
        let n = self.labels.iter().max().map_or(0, |m| m + 1);
        let mut inv = vec![None; n];
        for (g, &s) in self.labels.iter().enumerate() {
            inv[s] = Some(g);
        }
        inv
    }

    /// Labels form exactly `0..order`.
    pub fn labels_are_alphabet(&self) -> bool {
        let mut sorted = self.labels.clone();
        sorted.sort_unstable();
        sorted.iter().enumerate().all(|(i, &s)| i == s)
    }
}

/// A verified CWL certificate for a function of the source tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CwlWitness {
    pub sources: Vec<LabeledGroup>,
    pub edge: LabeledGroup,
    /// Direct product of the source groups.
    pub domain: FiniteGroup,
    /// Image, as an edge-group element id, of each domain element id.
    pub map: Vec<usize>,
}

impl CwlWitness {
    pub fn source_sizes(&self) -> Vec<usize> {
        self.sources.iter().map(|s| s.group.order()).collect()
    }

    /// Domain element id for a tuple of source symbols.
    pub fn element_of(&self, symbols: &[usize]) -> usize {
        let invs: Vec<Vec<Option<usize>>> = self
            .sources
            .iter()
            .map(LabeledGroup::inverse_labels)
            .collect();
        element_of(&self.domain, &invs, symbols)
    }

    /// `φ` as a table of edge symbols indexed by source tuple.
    pub fn symbol_table(&self) -> Vec<usize> {
        let sizes = self.source_sizes();
        let total = radix::size(&sizes).expect("domain fits");
        let mut out = vec![0; total];
        for g in self.domain.elements() {
            let parts = self.domain.components(g);
            let symbols: Vec<usize> = parts
                .iter()
                .zip(&self.sources)
                .map(|(&p, s)| s.labels[p])
                .collect();
            out[radix::encode(&symbols, &sizes)] = self.edge.labels[self.map[g]];
        }
        out
    }

    /// Edge element of `φ(id, ..., a, ..., id)` with `a` in slot `i`.
    pub fn slot_image(&self, i: usize, a: usize) -> usize {
        let mut parts: Vec<usize> = self.sources.iter().map(|s| s.group.identity()).collect();
        parts[i] = a;
        self.map[self.domain.from_components(&parts).expect("valid slot")]
    }
}

fn element_of(domain: &FiniteGroup, invs: &[Vec<Option<usize>>], symbols: &[usize]) -> usize {
    let parts: Vec<usize> = symbols
        .iter()
        .zip(invs)
        .map(|(&s, inv)| inv[s].expect("symbol in alphabet"))
        .collect();
    domain.from_components(&parts).expect("valid components")
}

/// Certifies `phi` (edge symbols indexed by source tuple over
/// `source_sizes`) as CWL for the given group structures. Returns `None`
/// when the image differs from the edge group's symbols or the
/// homomorphism law fails.
pub fn check_cwl(
    phi: &[usize],
    source_sizes: &[usize],
    sources: &[LabeledGroup],
    edge: &LabeledGroup,
) -> Result<Option<CwlWitness>> {
    if sources.len() != source_sizes.len() || sources.is_empty() {
        return Err(Error::InvalidArity(format!(
            "{} source groups for {} sources",
            sources.len(),
            source_sizes.len()
        )));
    }
    for (i, (s, &n)) in sources.iter().zip(source_sizes).enumerate() {
        if s.group.order() != n {
            return Err(Error::domain(format!(
                "source {i} has alphabet size {n} but its group has order {}",
                s.group.order()
            )));
        }
        LabeledGroup::new(s.group.clone(), s.labels.clone())?;
        if !s.labels_are_alphabet() {
            return Err(Error::domain(format!(
                "labels of source group {i} are not a bijection onto its alphabet"
            )));
        }
    }
    LabeledGroup::new(edge.group.clone(), edge.labels.clone())?;
    let total = radix::size(source_sizes).ok_or_else(|| Error::domain("domain overflows"))?;
    if phi.len() != total {
        return Err(Error::domain(format!(
            "function has {} entries for {total} source tuples",
            phi.len()
        )));
    }

    let domain = FiniteGroup::direct_product(sources.iter().map(|s| s.group.clone()).collect())?;
    let edge_inv = edge.inverse_labels();
    let radices: Vec<usize> = sources.iter().map(|s| s.group.order()).collect();
    let plain = |l: &LabeledGroup| l.labels.iter().enumerate().all(|(i, &v)| i == v);
    let mut parts = vec![0; radices.len()];
    let mut map = vec![0; domain.order()];
    if sources.iter().all(plain) && plain(edge) {
        if phi.iter().any(|&v| v >= edge.group.order()) {
            return Ok(None);
        }
        map.copy_from_slice(phi);
    } else {
        for slot in map.iter_mut() {
            let k = parts
                .iter()
                .zip(sources)
                .fold(0, |acc, (&p, s)| acc * s.group.order() + s.labels[p]);
            match edge_inv.get(phi[k]).copied().flatten() {
                Some(e) => *slot = e,
                None => return Ok(None),
            }
            radix::increment(&mut parts, &radices);
        }
    }
    let mut hit = vec![false; edge.group.order()];
    map.iter().for_each(|&e| hit[e] = true);
    if !hit.iter().all(|&h| h) {
        return Ok(None);
    }
    if !is_homomorphism_by_factors(&map, &domain, &edge.group)? {
        return Ok(None);
    }
    Ok(Some(CwlWitness {
        sources: sources.to_vec(),
        edge: edge.clone(),
        domain,
        map,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> LabeledGroup {
        LabeledGroup::cyclic(n).unwrap()
    }

    #[test]
    fn xor_and_mod3() {
        let xor = [0, 1, 1, 0];
        assert!(check_cwl(&xor, &[2, 2], &[z(2), z(2)], &z(2))
            .unwrap()
            .is_some());
        let and = [0, 0, 0, 1];
        // Z2 is the only group of order 2, and relabeling it moves the identity;
        // check both labelings of every alphabet.
        let flip = LabeledGroup::new(FiniteGroup::cyclic(2).unwrap(), vec![1, 0]).unwrap();
        for a in [z(2), flip.clone()] {
            for b in [z(2), flip.clone()] {
                for e in [z(2), flip.clone()] {
                    assert!(check_cwl(&and, &[2, 2], &[a.clone(), b.clone()], &e)
                        .unwrap()
                        .is_none());
                }
            }
        }
        let sum3: Vec<usize> = (0..9).map(|k| (k / 3 + k % 3) % 3).collect();
        assert!(check_cwl(&sum3, &[3, 3], &[z(3), z(3)], &z(3))
            .unwrap()
            .is_some());
    }

    #[test]
    fn size_mismatch_is_an_error() {
        assert!(matches!(
            check_cwl(&[0, 1, 1, 0], &[2, 2], &[z(2), z(3)], &z(2)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn image_must_be_whole_edge_group() {
        let constant = [0, 0, 0, 0];
        assert!(check_cwl(&constant, &[2, 2], &[z(2), z(2)], &z(2))
            .unwrap()
            .is_none());
        assert!(check_cwl(&constant, &[2, 2], &[z(2), z(2)], &z(1))
            .unwrap()
            .is_some());
    }

    #[test]
    fn edge_labels_may_be_any_symbols() {
        // 1 xor x1 xor x2: symbol 1 plays the identity.
        let xnor = [1, 0, 0, 1];
        let e = LabeledGroup::new(FiniteGroup::cyclic(2).unwrap(), vec![1, 0]).unwrap();
        let w = check_cwl(&xnor, &[2, 2], &[z(2), z(2)], &e)
            .unwrap()
            .unwrap();
        assert_eq!(w.symbol_table(), xnor);
    }
}
