//! Decoding identities of the modified three-subnetwork code over `Z_k`.
//!
//! Sources `a, b, c, d, e`. The second subnetwork sends `a+b+t(c)`, `a+b`,
//! `a+t(c)` and `b+t(c)`; the third sends `c+d+e`, `c+d`, `c+e` and `d+e`.
//! Each identity recomputes what a sink decodes from those messages.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::radix;

pub const IDENTITY_NAMES: [&str; 7] = ["n40", "n41", "n42", "n43", "n44", "n45", "n46"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityResult {
    pub name: String,
    pub holds: bool,
    /// First `(a, b, c, d, e)` where the decoded value is wrong.
    pub counterexample: Option<[usize; 5]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoughertyReport {
    pub alphabet_size: usize,
    pub t: Option<Vec<usize>>,
    pub identities: Vec<IdentityResult>,
    pub all_hold: Option<bool>,
    /// Every `t` for which all identities hold, when searched.
    pub solutions: Option<Vec<Vec<usize>>>,
}

/// Decoded value and the source it should equal, for identity `idx`.
fn decode(idx: usize, k: usize, t: &[usize], s: [usize; 5]) -> (usize, usize) {
    let [a, b, c, d, e] = s;
    let add = |x: usize, y: usize| (x + y) % k;
    let sub = |x: usize, y: usize| (x + k - y) % k;
    let tc = t[c];
    let e19 = add(add(a, b), tc);
    let e31 = add(a, b);
    let e32 = add(a, tc);
    let e33 = add(b, tc);
    let e20 = add(add(c, d), e);
    let e34 = add(c, d);
    let e35 = add(c, e);
    let e36 = add(d, e);
    match idx {
        0 => (t[sub(e19, e31)], c),
        1 => (sub(e19, e32), b),
        2 => (sub(e19, e33), a),
        3 => (add(sub(add(e33, e32), e31), t[sub(add(e34, e35), e36)]), c),
        4 => (sub(e20, e34), e),
        5 => (sub(e20, e35), d),
        _ => (sub(e20, e36), c),
    }
}

fn check_all(k: usize, t: &[usize]) -> Vec<IdentityResult> {
    let radices = [k; 5];
    (0..IDENTITY_NAMES.len())
        .map(|idx| {
            let mut s = [0usize; 5];
            let counterexample = loop {
                let (got, want) = decode(idx, k, t, s);
                if got != want {
                    break Some(s);
                }
                if !radix::increment(&mut s, &radices) {
                    break None;
                }
            };
            IdentityResult {
                name: IDENTITY_NAMES[idx].to_string(),
                holds: counterexample.is_none(),
                counterexample,
            }
        })
        .collect()
}

/// Checks every identity for the given `t` and, with `search`, collects all
/// `t: Z_k -> Z_k` making every identity hold.
pub fn dougherty_identity_check(
    k: usize,
    t: Option<&[usize]>,
    search: bool,
    cap: u128,
) -> Result<DoughertyReport> {
    if k == 0 {
        return Err(Error::domain("alphabet size must be positive"));
    }
    let work = (k as u128).pow(5);
    if work > cap {
        return Err(Error::Resource {
            what: "symbol tuples per identity".into(),
            required: work,
            cap,
        });
    }
    let (identities, all_hold) = match t {
        Some(t) => {
            if t.len() != k || t.iter().any(|&v| v >= k) {
                return Err(Error::domain(format!("t must map Z_{k} into itself")));
            }
            let ids = check_all(k, t);
            let all = ids.iter().all(|r| r.holds);
            (ids, Some(all))
        }
        None => (Vec::new(), None),
    };
    let solutions = if search {
        let space = (k as u128)
            .checked_pow(k as u32)
            .filter(|&n| n <= cap)
            .ok_or_else(|| Error::Resource {
                what: "candidate maps t".into(),
                required: (k as u128).saturating_pow(k as u32),
                cap,
            })?;
        let radices = vec![k; k];
        let mut cand = vec![0; k];
        let mut found = Vec::new();
        for _ in 0..space {
            if check_all(k, &cand).iter().all(|r| r.holds) {
                found.push(cand.clone());
            }
            radix::increment(&mut cand, &radices);
        }
        Some(found)
    } else {
        None
    };
    Ok(DoughertyReport {
        alphabet_size: k,
        t: t.map(<[usize]>::to_vec),
        identities,
        all_hold,
        solutions,
    })
}
