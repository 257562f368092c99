//! Exact continued-fraction and Ostrowski machinery for studying the double
//! exponential sum `T_M(α) = (1/M) Σ_{m,n<M} e(nmα)`, the reciprocal sums
//! `Σ 1/{{kα}}` that control it, and discrepancy bounds for `{mα}`.
//!
//! Every fractional part that enters a floating-point evaluation is first
//! reduced exactly (quadratic-field arithmetic) or inside a certified
//! fixed-point enclosure, so reciprocals of size `q_{n+1}` keep full
//! relative precision.

pub mod accum;
pub mod alpha;
pub mod discrepancy;
pub mod error;
pub mod exact;
pub mod fixed;
pub mod ostrowski;
pub mod segments;
pub mod sums;
pub mod verify;

pub use alpha::{
    convergents, partial_quotients, signed_frac_scalar, Alpha, AlphaSpec, ContinuedFraction, ConvergentError,
    SignedFrac,
};
pub use error::{Error, Result};
pub use exact::{QuadElem, Real};
pub use ostrowski::{ostrowski_eval, ostrowski_expand, OstrowskiExpansion};
pub use segments::{Segment, SegmentAnalysis, SegmentPlan};
pub use sums::{Method, SumReport};
pub use verify::{BoundReport, BoundRow, Verdict};
