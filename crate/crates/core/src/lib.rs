//! Exact limit moments of Wishart-type products `BB*`, `B = X_1 X_2 ... X_p`,
//! where each `X_l` is a superdiagonal block of a unitarily invariant
//! Hermitian random matrix.
//!
//! Three exact routes are provided and cross-checked against each other:
//!
//! * weighted enumeration of noncrossing partitions adapted to the word
//!   `W^k = (1 2 ... p p* ... 2* 1*)^k` ([`moments::limit_moment_enumerative`]);
//! * weighted enumeration of noncrossing pair partitions of the doubled word
//!   with depth-parity weights ([`moments::limit_moment_pair`]);
//! * truncated power series: S-transforms, the functional equation for the
//!   moment generating function and its closed-form Lagrange inversion
//!   ([`series`]).
//!
//! [`rmt`] samples finite random matrices and compares the empirical moments
//! with the exact limits.

pub mod error;
pub mod model;
pub mod moments;
pub mod numbers;
pub mod partition;
pub mod rational;
pub mod rmt;
pub mod series;
pub mod words;

mod enumerate;

pub use error::{Error, Result};
pub use model::{CumulantSequence, Label, LabelPattern, ModelParams};
pub use moments::{MomentResult, WeightedCount};
pub use partition::{BlockStats, PairPartition, Partition};
pub use series::{Distribution, FormalPowerSeries};
pub use words::{Letter, SegmentColoring, Word};

/// Default upper bound on the ground-set size handed to exhaustive enumerators.
pub const DEFAULT_CAP: usize = 24;

/// Environment variable that overrides [`DEFAULT_CAP`] for front ends.
pub const CAP_ENV_VAR: &str = "WISHART_NC_CAP";

/// Enumeration cap from [`CAP_ENV_VAR`], falling back to [`DEFAULT_CAP`].
pub fn cap_from_env() -> usize {
    std::env::var(CAP_ENV_VAR)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_CAP)
}
