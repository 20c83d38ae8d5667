use std::collections::BTreeSet;

use super::FiniteGroup;
use crate::error::{Error, Result};

/// A verified subgroup of a parent group. Members are kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    parent: FiniteGroup,
    members: Vec<usize>,
    mask: Vec<bool>,
}

/// True iff `subset` contains the identity and is closed under the operation
/// and inverses. Duplicate ids are ignored.
pub fn is_subgroup(g: &FiniteGroup, subset: &[usize]) -> Result<bool> {
    let mut mask = vec![false; g.order()];
    for &a in subset {
        g.check_element(a)?;
        mask[a] = true;
    }
    Ok(closed(g, &mask))
}

fn closed(g: &FiniteGroup, mask: &[bool]) -> bool {
    if !mask[g.identity()] {
        return false;
    }
    let members: Vec<usize> = (0..mask.len()).filter(|&a| mask[a]).collect();
    members
        .iter()
        .all(|&a| mask[g.inverse(a)] && members.iter().all(|&b| mask[g.op(a, b)]))
}

/// Left cosets `gH`, ordered by their smallest element, each sorted.
pub fn cosets(g: &FiniteGroup, h: &Subgroup) -> Result<Vec<Vec<usize>>> {
    if h.parent() != g {
        return Err(Error::precondition(
            "subgroup does not belong to the given group",
        ));
    }
    Ok(h.left_cosets())
}

impl Subgroup {
    pub fn new(parent: &FiniteGroup, members: &[usize]) -> Result<Self> {
        let mut mask = vec![false; parent.order()];
        for &a in members {
            parent.check_element(a)?;
            mask[a] = true;
        }
        if !closed(parent, &mask) {
            return Err(Error::precondition(format!(
                "{members:?} is not a subgroup of {}",
                parent.describe()
            )));
        }
        Ok(Self::from_mask(parent.clone(), mask))
    }

    fn from_mask(parent: FiniteGroup, mask: Vec<bool>) -> Self {
        let members: Vec<usize> = (0..mask.len()).filter(|&a| mask[a]).collect();
        debug_assert_eq!(parent.order() % members.len(), 0);
        Subgroup {
            parent,
            members,
            mask,
        }
    }

    pub fn trivial(parent: &FiniteGroup) -> Self {
        let mut mask = vec![false; parent.order()];
        mask[parent.identity()] = true;
        Self::from_mask(parent.clone(), mask)
    }

    pub fn whole(parent: &FiniteGroup) -> Self {
        Self::from_mask(parent.clone(), vec![true; parent.order()])
    }

    /// Smallest subgroup containing `generators`.
    pub fn generated_by(parent: &FiniteGroup, generators: &[usize]) -> Result<Self> {
        for &a in generators {
            parent.check_element(a)?;
        }
        let mut mask = vec![false; parent.order()];
        mask[parent.identity()] = true;
        let mut members = vec![parent.identity()];
        let mut frontier = members.clone();
        while let Some(x) = frontier.pop() {
            for &gen in generators {
                for y in [parent.op(x, gen), parent.op(gen, x)] {
                    if !mask[y] {
                        mask[y] = true;
                        members.push(y);
                        frontier.push(y);
                    }
                }
            }
        }
        Ok(Self::from_mask(parent.clone(), mask))
    }

    /// Every subgroup of `parent`, sorted by (order, members). Built by
    /// closing under one extra generator at a time, so the cost grows with
    /// the number of subgroups rather than with subsets.
    pub fn all(parent: &FiniteGroup) -> Vec<Subgroup> {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue = vec![Subgroup::trivial(parent)];
        seen.insert(queue[0].members.clone());
        let mut out = Vec::new();
        while let Some(h) = queue.pop() {
            for a in parent.elements() {
                if h.contains(a) {
                    continue;
                }
                let mut gens = h.members.clone();
                gens.push(a);
                let bigger = Subgroup::generated_by(parent, &gens).expect("ids in range");
                if seen.insert(bigger.members.clone()) {
                    queue.push(bigger);
                }
            }
            out.push(h);
        }
        out.sort_by(|a, b| (a.order(), &a.members).cmp(&(b.order(), &b.members)));
        out
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.order()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.mask.get(a).copied().unwrap_or(false)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&a| other.contains(a))
    }

    pub fn intersection(&self, other: &Subgroup) -> Result<Subgroup> {
        if self.parent != other.parent {
            return Err(Error::precondition(
                "intersection of subgroups of different groups",
            ));
        }
        let mask = self
            .mask
            .iter()
            .zip(&other.mask)
            .map(|(&a, &b)| a && b)
            .collect();
        Ok(Self::from_mask(self.parent.clone(), mask))
    }

    /// `g·h` for `h` in the subgroup, sorted.
    pub fn left_coset_of(&self, g: usize) -> Vec<usize> {
        let mut c: Vec<usize> = self.members.iter().map(|&h| self.parent.op(g, h)).collect();
        c.sort_unstable();
        c
    }

    pub fn left_cosets(&self) -> Vec<Vec<usize>> {
        let labels = self.coset_labels();
        let mut out: Vec<Vec<usize>> = vec![Vec::with_capacity(self.order()); self.index()];
        for (a, &l) in labels.iter().enumerate() {
            out[l].push(a);
        }
        out
    }

    /// For each element, the index of its left coset, cosets numbered in
    /// order of their smallest element.
    pub fn coset_labels(&self) -> Vec<usize> {
        let n = self.parent.order();
        let mut labels = vec![usize::MAX; n];
        let mut next = 0;
        for g in 0..n {
            if labels[g] != usize::MAX {
                continue;
            }
            for &h in &self.members {
                labels[self.parent.op(g, h)] = next;
            }
            next += 1;
        }
        labels
    }
}
