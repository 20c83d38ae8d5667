//! Exact verification of local edge removal in network coding.
//!
//! Instances, codes and groups are explicit finite objects. Feasibility is
//! decided by enumerating every source tuple, error probabilities are exact
//! rationals, and every reduced code produced by a removal procedure is
//! re-verified independently before it is reported.

pub mod code;
pub mod cwl;
pub mod error;
pub mod fraction;
pub mod group;
pub mod group_codes;
pub mod library;
pub mod network;
pub mod radix;
pub mod removal;

pub use error::{Error, Result};
pub use fraction::Fraction;
