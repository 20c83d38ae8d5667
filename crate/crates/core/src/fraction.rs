//! Exact non-negative rationals with a stable `p/q` text form.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A reduced non-negative fraction. Always printed as `p/q`, even when `q = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fraction(Ratio<u64>);

impl Fraction {
    pub const ZERO: Fraction = Fraction(Ratio::new_raw(0, 1));
    pub const ONE: Fraction = Fraction(Ratio::new_raw(1, 1));

    pub fn new(numer: u64, denom: u64) -> Result<Self, Error> {
        if denom == 0 {
            return Err(Error::Invalid(format!(
                "fraction {numer}/0 has zero denominator"
            )));
        }
        Ok(Fraction(Ratio::new(numer, denom)))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.numer() == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    /// `count / total`, reduced.
    pub fn of(count: u64, total: u64) -> Self {
        assert!(total > 0, "fraction of an empty population");
        Fraction(Ratio::new(count, total))
    }

    /// Exact comparison of `count / total` against `self` without building a ratio.
    pub fn cmp_ratio(&self, count: u64, total: u64) -> Ordering {
        let lhs = count as u128 * self.denom() as u128;
        let rhs = self.numer() as u128 * total as u128;
        lhs.cmp(&rhs)
    }

    /// Error-budget test shared by feasibility verdicts and witness selection.
    ///
    /// A bad fraction `bad / total` meets budget `self` when the budget is zero
    /// and nothing is bad, when the budget is at least one, or when the bad
    /// fraction is strictly below the budget (correct fraction `> 1 - budget`).
    pub fn budget_admits(&self, bad: u64, total: u64) -> bool {
        if self.is_zero() {
            bad == 0
        } else if self.numer() >= self.denom() {
            true
        } else {
            self.cmp_ratio(bad, total) == Ordering::Less
        }
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let bad = || Error::Invalid(format!("cannot parse fraction {s:?}; expected p/q"));
        let p: u64 = p.parse().map_err(|_| bad())?;
        let q: u64 = q.parse().map_err(|_| bad())?;
        Fraction::new(p, q)
    }
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Fraction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
