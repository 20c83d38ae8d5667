//! Permutation codes over `Z_{mw}` and `Z_{m^{α+1}}`.
//!
//! Copy `l` of the code has sources `x_1..x_{m+1}` and `z` in the ring and
//! sends `e_0 = Σ x_j`, `e_i = π(z) + Σ_{j≠i} x_j` and `e = π(z) + Σ x_j`,
//! where `π` is the permutation assigned to the copy.

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cwl::{check_cwl, LabeledGroup};
use crate::error::{Error, Result};
use crate::radix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationFamily {
    pub modulus: usize,
    /// `perms[l - 1]` is `π_l`.
    pub perms: Vec<Vec<usize>>,
}

fn is_bijection(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter()
        .all(|&v| v < seen.len() && !std::mem::replace(&mut seen[v], true))
}

/// `π_l` for `l < w` increments the low digit of `a = q·m + r` modulo `m`
/// when `q = l` and fixes everything else; `π_w` is the identity.
pub fn n2_permutations(m: usize, w: usize) -> Result<PermutationFamily> {
    if m < 2 || w < 1 {
        return Err(Error::domain(format!(
            "need m >= 2 and w >= 1, got m={m}, w={w}"
        )));
    }
    let n = m
        .checked_mul(w)
        .ok_or_else(|| Error::domain("m*w overflows"))?;
    let mut perms: Vec<Vec<usize>> = (1..w)
        .map(|l| {
            (0..n)
                .map(|a| {
                    let (q, r) = (a / m, a % m);
                    if q == l {
                        q * m + (r + 1) % m
                    } else {
                        a
                    }
                })
                .collect()
        })
        .collect();
    perms.push((0..n).collect());
    if !perms.iter().all(|p| is_bijection(p)) {
        return Err(Error::internal(
            "a permutation of the family is not a bijection",
        ));
    }
    Ok(PermutationFamily { modulus: n, perms })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopyReport {
    pub copy: usize,
    pub identity_permutation: bool,
    pub tuples: u64,
    /// `e - e_i = x_i` for every `i`.
    pub recovers_x: bool,
    /// `π` is a bijection and `π^{-1}(e - e_0) = z`.
    pub recovers_z: bool,
    /// `Σ_i e_i - m·e_0 = (m+1)·π(z)`.
    pub sum_relation: bool,
    pub violations: Vec<String>,
    /// Every edge function of the copy passes the CWL check over cyclic
    /// groups; only evaluated for copies using the identity.
    pub edges_cwl: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct N2Report {
    pub m: usize,
    pub w: usize,
    pub copies: Vec<CopyReport>,
    pub decoding_ok: bool,
}

/// Checks the code with copy `l` using `π_{assignment[l-1]}` (1-based).
pub fn n2_code_check(m: usize, w: usize, assignment: &[usize], cap: u128) -> Result<N2Report> {
    let fam = n2_permutations(m, w)?;
    if assignment.len() != w {
        return Err(Error::InvalidArity(format!(
            "{} assignments for {w} copies",
            assignment.len()
        )));
    }
    let perms = assignment
        .iter()
        .map(|&p| {
            fam.perms
                .get(p.wrapping_sub(1))
                .cloned()
                .ok_or_else(|| Error::domain(format!("no permutation with index {p}")))
        })
        .collect::<Result<Vec<_>>>()?;
    n2_code_check_with(m, w, &perms, cap)
}

/// The assignment that gives copy `l` the identity and copy `w` the former
/// `π_l`, leaving every other copy as is.
pub fn identity_reassignment(w: usize, l: usize) -> Vec<usize> {
    let mut a: Vec<usize> = (1..=w).collect();
    a.swap(l - 1, w - 1);
    a
}

/// Same as [`n2_code_check`] with explicit per-copy maps, which need not be
/// permutations.
pub fn n2_code_check_with(m: usize, w: usize, perms: &[Vec<usize>], cap: u128) -> Result<N2Report> {
    if m < 2 || w < 1 {
        return Err(Error::domain(format!(
            "need m >= 2 and w >= 1, got m={m}, w={w}"
        )));
    }
    let n = m * w;
    if perms.len() != w
        || perms
            .iter()
            .any(|p| p.len() != n || p.iter().any(|&v| v >= n))
    {
        return Err(Error::domain(format!("need {w} maps on Z_{n}")));
    }
    let k = m + 1;
    let radices = vec![n; k + 1];
    let tuples = (n as u128).pow(k as u32 + 1);
    if tuples > cap {
        return Err(Error::Resource {
            what: "source tuples per copy".into(),
            required: tuples,
            cap,
        });
    }
    let mut copies = Vec::with_capacity(w);
    for (l, p) in perms.iter().enumerate() {
        let bijective = is_bijection(p);
        let mut inv = vec![usize::MAX; n];
        for (a, &v) in p.iter().enumerate() {
            inv[v] = a;
        }
        let mut report = CopyReport {
            copy: l + 1,
            identity_permutation: p.iter().enumerate().all(|(a, &v)| a == v),
            tuples: tuples as u64,
            recovers_x: true,
            recovers_z: bijective,
            sum_relation: true,
            violations: Vec::new(),
            edges_cwl: None,
        };
        if !bijective {
            report
                .violations
                .push(format!("copy {} map is not a bijection", l + 1));
        }
        let xs_total = n.pow(k as u32);
        let found = (0..xs_total)
            .into_par_iter()
            .fold(Scan::default, |mut acc, xi| {
                let xs = radix::decode(xi, &radices[..k]);
                scan_copy(&mut acc, &xs, n, p, &inv, bijective);
                acc
            })
            .reduce(Scan::default, Scan::merge);
        report.recovers_x = !found.bad_x;
        report.recovers_z &= !found.bad_z;
        report.sum_relation = !found.bad_sum;
        for v in found.violations {
            note(&mut report.violations, v);
        }
        if report.identity_permutation {
            report.edges_cwl = Some(copy_edges_cwl(k, n)?);
        }
        copies.push(report);
    }
    let decoding_ok = copies
        .iter()
        .all(|c| c.recovers_x && c.recovers_z && c.sum_relation);
    Ok(N2Report {
        m,
        w,
        copies,
        decoding_ok,
    })
}

#[derive(Default)]
struct Scan {
    bad_x: bool,
    bad_z: bool,
    bad_sum: bool,
    violations: Vec<String>,
}

impl Scan {
    fn merge(mut self, other: Scan) -> Scan {
        self.bad_x |= other.bad_x;
        self.bad_z |= other.bad_z;
        self.bad_sum |= other.bad_sum;
        for v in other.violations {
            note(&mut self.violations, v);
        }
        self
    }
}

fn add(a: usize, b: usize, n: usize) -> usize {
    let s = a + b;
    if s >= n {
        s - n
    } else {
        s
    }
}

fn sub(a: usize, b: usize, n: usize) -> usize {
    if a >= b {
        a - b
    } else {
        a + n - b
    }
}

/// Checks every `z` for fixed `x_1..x_k`.
fn scan_copy(acc: &mut Scan, xs: &[usize], n: usize, p: &[usize], inv: &[usize], bijective: bool) {
    let k = xs.len();
    let e0 = xs.iter().fold(0, |a, &x| add(a, x, n));
    let m_e0 = (k - 1) * e0 % n;
    for (z, &pz) in p.iter().enumerate() {
        let e = add(pz, e0, n);
        let mut sum_ei = 0;
        for (i, &x) in xs.iter().enumerate() {
            let ei = sub(add(pz, e0, n), x, n);
            sum_ei = add(sum_ei, ei, n);
            if sub(e, ei, n) != x {
                acc.bad_x = true;
                note(
                    &mut acc.violations,
                    format!("x_{} not recovered at x={xs:?}, z={z}", i + 1),
                );
            }
        }
        if bijective && inv[sub(e, e0, n)] != z {
            acc.bad_z = true;
            note(
                &mut acc.violations,
                format!("z not recovered at x={xs:?}, z={z}"),
            );
        }
        if sub(sum_ei, m_e0, n) != k * pz % n {
            acc.bad_sum = true;
            note(
                &mut acc.violations,
                format!("sum relation fails at x={xs:?}, z={z}"),
            );
        }
    }
}

fn note(v: &mut Vec<String>, msg: String) {
    if v.len() < 8 {
        v.push(msg);
    }
}

/// Values of the sum of the selected coordinates mod `n` over
/// `Z_n^len(used)`, in enumeration order.
fn linear_table(used: &[bool], n: usize) -> Vec<usize> {
    let mut out = vec![0];
    for &u in used {
        let mut next = Vec::with_capacity(out.len() * n);
        for &v in &out {
            next.extend((0..n).map(|d| if u { add(v, d, n) } else { v }));
        }
        out = next;
    }
    out
}

/// CWL check over `Z_n^{k+1}` of `e_0`, each `e_i` and `e` with `π` the
/// identity and `k` summands.
fn copy_edges_cwl(k: usize, n: usize) -> Result<bool> {
    let sizes = vec![n; k + 1];
    let groups = vec![LabeledGroup::cyclic(n)?; k + 1];
    let edge = LabeledGroup::cyclic(n)?;
    let mut forms = vec![[vec![true; k], vec![false]].concat(), vec![true; k + 1]];
    for i in 0..k {
        let mut c = vec![true; k + 1];
        c[i] = false;
        forms.push(c);
    }
    for c in &forms {
        if check_cwl(&linear_table(c, n), &sizes, &groups, &edge)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct N3Report {
    pub m: usize,
    pub s: usize,
    pub alpha: usize,
    pub modulus: usize,
    pub injective: bool,
    pub collision: Option<(usize, usize)>,
}

/// Base-`m` digit rotation `π_2(a) = a_α + Σ_{i<α} m^{i+1} a_i` on `Z_{m^{α+1}}`.
pub fn n3_rotation(m: usize, alpha: usize) -> Result<Vec<usize>> {
    if m < 2 || alpha < 1 {
        return Err(Error::domain(format!(
            "need m >= 2 and alpha >= 1, got m={m}, alpha={alpha}"
        )));
    }
    let modulus = m
        .checked_pow(alpha as u32 + 1)
        .ok_or_else(|| Error::domain("modulus overflows"))?;
    let digits = vec![m; alpha + 1];
    Ok((0..modulus)
        .map(|a| {
            // radix digits are most significant first: digits[alpha - i] = a_i
            let d = radix::decode(a, &digits);
            let a_i = |i: usize| d[alpha - i];
            a_i(alpha)
                + (0..alpha)
                    .map(|i| m.pow(i as u32 + 1) * a_i(i))
                    .sum::<usize>()
        })
        .collect())
}

/// Injectivity of `a ↦ (m·a, s·m^α·π_2(a))` on `Z_{m^{α+1}}`.
pub fn n3_injectivity(m: usize, s: usize, alpha: usize) -> Result<N3Report> {
    let rot = n3_rotation(m, alpha)?;
    if m.gcd(&s) != 1 {
        return Err(Error::precondition(format!("gcd({m}, {s}) is not 1")));
    }
    let modulus = rot.len();
    let scale = (s % modulus) * m.pow(alpha as u32) % modulus;
    let mut first: std::collections::HashMap<(usize, usize), usize> = Default::default();
    let mut collision = None;
    for (a, &r) in rot.iter().enumerate() {
        let key = (m * a % modulus, scale * r % modulus);
        if let Some(&b) = first.get(&key) {
            collision = Some((b, a));
            break;
        }
        first.insert(key, a);
    }
    Ok(N3Report {
        m,
        s,
        alpha,
        modulus,
        injective: collision.is_none(),
        collision,
    })
}
