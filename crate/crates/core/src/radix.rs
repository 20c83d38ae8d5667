//! Mixed-radix encoding shared by product groups, source tuples and table domains.
//!
//! Digit 0 is the most significant: with radices `[r0, r1]` the tuple `(a, b)`
//! encodes to `a * r1 + b`.

use crate::error::{Error, Result};

pub fn size(radices: &[usize]) -> Option<usize> {
    radices
        .iter()
        .try_fold(1usize, |acc, &r| acc.checked_mul(r))
}

pub fn encode(digits: &[usize], radices: &[usize]) -> usize {
    debug_assert_eq!(digits.len(), radices.len());
    digits
        .iter()
        .zip(radices)
        .fold(0, |acc, (&d, &r)| acc * r + d)
}

pub fn checked_encode(digits: &[usize], radices: &[usize]) -> Result<usize> {
    if digits.len() != radices.len() {
        return Err(Error::domain(format!(
            "tuple has {} components, expected {}",
            digits.len(),
            radices.len()
        )));
    }
    for (pos, (&d, &r)) in digits.iter().zip(radices).enumerate() {
        if d >= r {
            return Err(Error::domain(format!(
                "component {pos} has value {d}, alphabet size is {r}"
            )));
        }
    }
    Ok(encode(digits, radices))
}

pub fn decode_into(mut index: usize, radices: &[usize], out: &mut [usize]) {
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = index % r;
        index /= r;
    }
}

pub fn decode(index: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    decode_into(index, radices, &mut out);
    out
}

/// Advances `digits` to the next tuple in encoding order. Returns false on wrap-around.
pub fn increment(digits: &mut [usize], radices: &[usize]) -> bool {
    for (d, &r) in digits.iter_mut().zip(radices).rev() {
        *d += 1;
        if *d < r {
            return true;
        }
        *d = 0;
    }
    false
}
