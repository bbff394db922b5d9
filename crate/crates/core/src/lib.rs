//! Common subsequences between Thue-Morse words and their complements.
//!
//! * [`word`]: Thue-Morse words, digits, prefixes and block decompositions.
//! * [`alignment`]: common subsequences as explicit position matchings.
//! * [`construction`]: the recursive construction `CS(k)` and its
//!   extensions to arbitrary word exponents and prefix lengths.
//! * [`lcs`]: exact LCS lengths (quadratic, bit-parallel, linear-space).
//! * [`analysis`]: the exact omission recurrence `f(k)` and bound checks.
//! * [`oeis`]: b-file export for A297618 and A320847.

pub mod alignment;
pub mod analysis;
pub mod construction;
pub mod error;
pub mod lcs;
pub mod limits;
pub mod oeis;
pub mod word;

/// Arbitrary-precision nonnegative integer.
pub type BigCount = num_bigint::BigUint;

pub use alignment::{Alignment, AlignmentRecord, Run, Violation};
pub use construction::{ConstructionKind, ConstructionResult};
pub use error::{Error, Result};
pub use lcs::{Algorithm, LcsResult};
pub use limits::Limits;
pub use word::{BitWord, BlockDecomposition, ThueMorseSource};
