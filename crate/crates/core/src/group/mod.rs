//! Finite groups with dense integer element ids.
//!
//! Cyclic groups and direct products compute their operation by rule. Any
//! other group enters as an explicit Cayley table whose axioms are verified
//! at construction. Element ids of a direct product are the mixed-radix
//! encoding of the component ids, first factor most significant (see
//! [`crate::radix`]).

mod hom;
mod spec;
mod subgroup;

use std::sync::Arc;

pub use hom::{
    fibers, fibers_are_kernel_cosets, image, is_homomorphism, is_homomorphism_by_factors, kernel,
};
pub use spec::GroupSpec;
pub use subgroup::{cosets, is_subgroup, Subgroup};

use crate::error::{Error, Result};
use crate::radix;

/// Largest Cayley table whose associativity is checked eagerly by default.
pub const TABLE_VERIFY_BOUND: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiniteGroup {
    /// Additive integers modulo `n`.
    Cyclic(usize),
    Product(ProductGroup),
    Table(Arc<CayleyTable>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductGroup {
    factors: Vec<FiniteGroup>,
    radices: Vec<usize>,
    order: usize,
}

#[derive(Debug, PartialEq, Eq)]
pub struct CayleyTable {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
    abelian: bool,
}

impl FiniteGroup {
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidOrder(0));
        }
        Ok(FiniteGroup::Cyclic(n))
    }

    pub fn direct_product(factors: Vec<FiniteGroup>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArity(
                "direct product needs at least one factor".into(),
            ));
        }
        let radices: Vec<usize> = factors.iter().map(FiniteGroup::order).collect();
        let order = radix::size(&radices).ok_or_else(|| Error::Resource {
            what: "direct product order".into(),
            required: radices.iter().map(|&r| r as u128).product(),
            cap: usize::MAX as u128,
        })?;
        Ok(FiniteGroup::Product(ProductGroup {
            factors,
            radices,
            order,
        }))
    }

    /// Builds a group from its Cayley table (`rows[a][b] = a·b`), verifying
    /// associativity up to [`TABLE_VERIFY_BOUND`].
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self> {
        Self::from_table_with_bound(rows, TABLE_VERIFY_BOUND)
    }

    /// Tables larger than `verify_bound` are rejected rather than accepted unverified.
    pub fn from_table_with_bound(rows: Vec<Vec<usize>>, verify_bound: usize) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidOrder(0));
        }
        if n > verify_bound {
            return Err(Error::Resource {
                what: "Cayley table axiom verification".into(),
                required: n as u128,
                cap: verify_bound as u128,
            });
        }
        let mut table = Vec::with_capacity(n * n);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Invalid(format!(
                    "Cayley table row {a} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (b, &c) in row.iter().enumerate() {
                if c >= n {
                    return Err(Error::domain(format!(
                        "Cayley table entry {a}·{b} = {c} is outside 0..{n}"
                    )));
                }
            }
            table.extend_from_slice(row);
        }
        let at = |a: usize, b: usize| table[a * n + b];

        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::Invalid("Cayley table has no two-sided identity".into()))?;

        let mut inverses = Vec::with_capacity(n);
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or_else(|| Error::Invalid(format!("element {x} has no two-sided inverse")))?;
            inverses.push(inv);
        }

        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::Invalid(format!(
                            "Cayley table is not associative on ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }

        let abelian = (0..n).all(|a| (0..a).all(|b| at(a, b) == at(b, a)));
        Ok(FiniteGroup::Table(Arc::new(CayleyTable {
            order: n,
            table,
            identity,
            inverses,
            abelian,
        })))
    }

    /// Re-expresses a subgroup as a standalone table group. The returned
    /// vector maps each new element id to its id in the parent.
    pub fn from_subgroup(sub: &Subgroup) -> Result<(FiniteGroup, Vec<usize>)> {
        let members = sub.members().to_vec();
        let parent = sub.parent();
        let index_of = |g: usize| members.binary_search(&g).expect("subgroup is closed");
        let rows = members
            .iter()
            .map(|&a| members.iter().map(|&b| index_of(parent.op(a, b))).collect())
            .collect();
        Ok((FiniteGroup::from_table(rows)?, members))
    }

    pub fn order(&self) -> usize {
        match self {
            FiniteGroup::Cyclic(n) => *n,
            FiniteGroup::Product(p) => p.order,
            FiniteGroup::Table(t) => t.order,
        }
    }

    pub fn identity(&self) -> usize {
        match self {
            FiniteGroup::Cyclic(_) => 0,
            FiniteGroup::Product(p) => p
                .factors
                .iter()
                .zip(&p.radices)
                .fold(0, |acc, (f, &r)| acc * r + f.identity()),
            FiniteGroup::Table(t) => t.identity,
        }
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        match self {
            FiniteGroup::Cyclic(n) => {
                let s = a + b;
                if s >= *n {
                    s - n
                } else {
                    s
                }
            }
            FiniteGroup::Product(p) => {
                let (mut a, mut b) = (a, b);
                let mut out = 0;
                let mut place = 1;
                for (f, &r) in p.factors.iter().zip(&p.radices).rev() {
                    out += f.op(a % r, b % r) * place;
                    a /= r;
                    b /= r;
                    place *= r;
                }
                out
            }
            FiniteGroup::Table(t) => t.table[a * t.order + b],
        }
    }

    pub fn inverse(&self, a: usize) -> usize {
        match self {
            FiniteGroup::Cyclic(n) => (n - a % n) % n,
            FiniteGroup::Product(p) => {
                let mut a = a;
                let mut out = 0;
                let mut place = 1;
                for (f, &r) in p.factors.iter().zip(&p.radices).rev() {
                    out += f.inverse(a % r) * place;
                    a /= r;
                    place *= r;
                }
                out
            }
            FiniteGroup::Table(t) => t.inverses[a],
        }
    }

    /// `a^k` by repeated squaring.
    pub fn pow(&self, a: usize, mut k: usize) -> usize {
        let mut base = a;
        let mut acc = self.identity();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.op(acc, base);
            }
            base = self.op(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let e = self.identity();
        let mut x = a;
        let mut k = 1;
        while x != e {
            x = self.op(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            FiniteGroup::Cyclic(_) => true,
            FiniteGroup::Product(p) => p.factors.iter().all(FiniteGroup::is_abelian),
            FiniteGroup::Table(t) => t.abelian,
        }
    }

    pub fn contains(&self, a: usize) -> bool {
        a < self.order()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    /// Factors of a direct product, or `None` for cyclic and table groups.
    pub fn factors(&self) -> Option<&[FiniteGroup]> {
        match self {
            FiniteGroup::Product(p) => Some(&p.factors),
            _ => None,
        }
    }

    /// Component ids of a product element (a single component otherwise).
    pub fn components(&self, a: usize) -> Vec<usize> {
        match self {
            FiniteGroup::Product(p) => radix::decode(a, &p.radices),
            _ => vec![a],
        }
    }

    pub fn from_components(&self, parts: &[usize]) -> Result<usize> {
        match self {
            FiniteGroup::Product(p) => radix::checked_encode(parts, &p.radices),
            _ => match parts {
                [a] if *a < self.order() => Ok(*a),
                _ => Err(Error::domain(format!(
                    "{parts:?} is not an element of a group of order {}",
                    self.order()
                ))),
            },
        }
    }

    pub(crate) fn check_element(&self, a: usize) -> Result<()> {
        if a < self.order() {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "element id {a} is outside a group of order {}",
                self.order()
            )))
        }
    }

    /// Short human-readable description such as `Z2 x Z3`.
    pub fn describe(&self) -> String {
        match self {
            FiniteGroup::Cyclic(n) => format!("Z{n}"),
            FiniteGroup::Product(p) => p
                .factors
                .iter()
                .map(|f| match f {
                    FiniteGroup::Product(_) => format!("({})", f.describe()),
                    _ => f.describe(),
                })
                .collect::<Vec<_>>()
                .join(" x "),
            FiniteGroup::Table(t) => format!("T{}", t.order),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> FiniteGroup {
        FiniteGroup::cyclic(n).unwrap()
    }

    /// Symmetric group S3 as permutations of {0,1,2}, listed lexicographically.
    pub(crate) fn s3() -> FiniteGroup {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let rows = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| idx([a[b[0]], a[b[1]], a[b[2]]]))
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(rows).unwrap()
    }

    #[test]
    fn cyclic_basics() {
        assert_eq!(FiniteGroup::cyclic(0), Err(Error::InvalidOrder(0)));
        let trivial = z(1);
        assert_eq!(trivial.order(), 1);
        assert_eq!(trivial.op(0, 0), 0);
        assert_eq!(z(2).op(1, 1), 0);
        let z12 = z(12);
        assert_eq!(z12.op(7, 8), 3);
        assert_eq!(z12.inverse(5), 7);
        for a in 0..12 {
            assert_eq!(z12.inverse(a), (12 - a) % 12);
            for b in 0..12 {
                assert_eq!(z12.op(a, b), (a + b) % 12);
            }
        }
    }

    #[test]
    fn product_uses_mixed_radix_ids() {
        let single = FiniteGroup::direct_product(vec![z(2)]).unwrap();
        assert_eq!(single.order(), 2);
        assert_eq!(single.op(1, 1), 0);

        let g = FiniteGroup::direct_product(vec![z(2), z(3)]).unwrap();
        assert_eq!(g.order(), 6);
        let a = g.from_components(&[1, 2]).unwrap();
        assert_eq!(a, 5);
        assert_eq!(g.components(g.op(a, a)), vec![0, 1]);
        assert_eq!(g.identity(), 0);

        let k = FiniteGroup::direct_product(vec![z(2), z(2)]).unwrap();
        let x = k.from_components(&[1, 0]).unwrap();
        let y = k.from_components(&[0, 1]).unwrap();
        assert_eq!(k.components(k.op(x, y)), vec![1, 1]);

        assert!(matches!(
            FiniteGroup::direct_product(vec![]),
            Err(Error::InvalidArity(_))
        ));
    }

    #[test]
    fn product_matches_tuple_arithmetic() {
        let radices = [2, 3, 4];
        let g = FiniteGroup::direct_product(radices.iter().map(|&n| z(n)).collect()).unwrap();
        for a in g.elements() {
            for b in g.elements() {
                let (ta, tb) = (radix::decode(a, &radices), radix::decode(b, &radices));
                let expect: Vec<usize> = (0..3).map(|i| (ta[i] + tb[i]) % radices[i]).collect();
                assert_eq!(g.components(g.op(a, b)), expect);
            }
            assert_eq!(g.op(a, g.inverse(a)), g.identity());
        }
    }

    #[test]
    fn table_group_axioms_are_checked() {
        let g = s3();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        assert_eq!(g.identity(), 0);
        for a in g.elements() {
            assert_eq!(g.op(a, g.inverse(a)), 0);
        }
        // 1·1 = 1 leaves 1 without an inverse.
        let bad = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]);
        assert!(bad.is_err());
        let no_identity = FiniteGroup::from_table(vec![vec![1, 0], vec![0, 0]]);
        assert!(no_identity.is_err());
        let ragged = FiniteGroup::from_table(vec![vec![0, 1], vec![1]]);
        assert!(ragged.is_err());
        let too_big = FiniteGroup::from_table_with_bound(vec![vec![0]; 3], 2);
        assert!(matches!(too_big, Err(Error::Resource { .. })));
    }

    #[test]
    fn pow_and_element_order() {
        let g = z(12);
        assert_eq!(g.pow(5, 3), 3);
        assert_eq!(g.element_order(4), 3);
        assert_eq!(g.element_order(0), 1);
    }

    #[test]
    fn product_associativity_exhaustive_small() {
        let g = FiniteGroup::direct_product(vec![z(2), s3()]).unwrap();
        for a in g.elements() {
            assert_eq!(g.op(a, g.identity()), a);
            assert_eq!(g.op(g.identity(), a), a);
            for b in g.elements() {
                for c in g.elements() {
                    assert_eq!(g.op(g.op(a, b), c), g.op(a, g.op(b, c)));
                }
            }
        }
    }
}
