use super::{check_cwl, CwlWitness, LabeledGroup};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

/// A balanced map rewritten as a projection `Z_k × Z_q -> Z_q`.
#[derive(Clone, Debug)]
pub struct Relabeling {
    pub k: usize,
    pub q: usize,
    /// Original element of `A` for each element id `i·q + j` of `Z_k × Z_q`.
    pub domain_labels: Vec<usize>,
    /// Original element of `B` for each element of `Z_q`.
    pub codomain_labels: Vec<usize>,
    pub witness: CwlWitness,
}

/// Labels the `i`-th element of the fiber over `j` as `(i, j)`, which turns
/// `g` into the projection onto the second coordinate.
pub fn balanced_to_cwl_relabel(g: &[usize], codomain: usize) -> Result<Relabeling> {
    let p = g.len();
    if codomain == 0 || p == 0 || !p.is_multiple_of(codomain) {
        return Err(Error::precondition(format!(
            "codomain size {codomain} does not divide domain size {p}"
        )));
    }
    let k = p / codomain;
    let mut fibers = vec![Vec::new(); codomain];
    for (a, &b) in g.iter().enumerate() {
        if b >= codomain {
            return Err(Error::domain(format!("value {b} is outside 0..{codomain}")));
        }
        fibers[b].push(a);
    }
    if let Some((j, f)) = fibers.iter().enumerate().find(|(_, f)| f.len() != k) {
        return Err(Error::precondition(format!(
            "map is not balanced: fiber over {j} has {} elements, expected {k}",
            f.len()
        )));
    }
    let mut domain_labels = vec![0; p];
    for (j, f) in fibers.iter().enumerate() {
        for (i, &a) in f.iter().enumerate() {
            domain_labels[i * codomain + j] = a;
        }
    }
    let zk = FiniteGroup::cyclic(k)?;
    let zq = FiniteGroup::cyclic(codomain)?;
    let source = LabeledGroup::new(
        FiniteGroup::direct_product(vec![zk, zq.clone()])?,
        domain_labels.clone(),
    )?;
    let edge = LabeledGroup::identity_labels(zq);
    let witness = check_cwl(g, &[p], &[source], &edge)?
        .ok_or_else(|| Error::internal("relabeled balanced map is not a projection"))?;
    Ok(Relabeling {
        k,
        q: codomain,
        domain_labels,
        codomain_labels: (0..codomain).collect(),
        witness,
    })
}
