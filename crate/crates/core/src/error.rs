//! Error type shared by every module in the crate.
//!
//! Two families of failure exist, mirroring the contracts of the numeric
//! operations: *domain* errors (an argument is outside the mathematical
//! domain of the operation — non-finite input, probability mass outside
//! `(0, 1)`, an empty sample, a malformed grid) and *range* errors (the
//! mathematically correct result cannot be represented — a normal tail mass
//! underflowing to zero, a point outside the tabulated coverage of the
//! antiderivative). Range errors are reported, never saturated.

use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes of the numeric operations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Error {
    /// An argument that must be finite was NaN or infinite.
    NonFiniteInput {
        /// The offending value.
        value: f64,
    },
    /// A probability mass outside the open interval `(0, 1)`.
    MassOutOfRange {
        /// The offending mass.
        mass: f64,
    },
    /// Re-expressing a tail probability in the opposite orientation would
    /// destroy it: `1 - mass` rounds to `1` when `mass` is this small.
    ComplementPrecisionLoss {
        /// The mass that cannot survive the conversion.
        mass: f64,
    },
    /// The normal tail mass at `x` underflows to zero in `f64`
    /// (|x| beyond roughly 37.6 for the CDF, 37 for the transforms).
    NormalTailUnderflow {
        /// The point whose tail mass is unrepresentable.
        x: f64,
    },
    /// The t₂ tail mass at `x` underflows to zero in `f64`.
    StudentTailUnderflow {
        /// The point whose tail mass is unrepresentable.
        x: f64,
    },
    /// A strictly positive argument was required.
    NonPositiveArgument {
        /// The offending value.
        value: f64,
    },
    /// A strictly negative sample value where non-negative data is required.
    NegativeSampleValue {
        /// The offending value.
        value: f64,
    },
    /// Evaluation point outside the tabulated antiderivative coverage.
    OutsideTableCoverage {
        /// Requested point.
        x: f64,
        /// Largest |x| covered by the table.
        coverage: f64,
    },
    /// A time grid violated its invariants (must start at 0, be strictly
    /// increasing, and finite), or a construction parameter was unusable.
    InvalidGrid(&'static str),
    /// Path values and grid do not describe a valid sample path.
    InvalidPath(&'static str),
    /// An empty sample where at least one observation is required.
    EmptySample,
    /// An order-statistics window `k` unusable for the requested estimate.
    InvalidTailWindow {
        /// Requested window size.
        k: usize,
        /// Sample size.
        n: usize,
    },
    /// Checkpoint list for a running-mean profile was not strictly
    /// increasing within `1..=n`.
    InvalidCheckpoints,
    /// A quadrature rule parameter was unusable (order too small/large,
    /// tolerance not positive, spacing not positive).
    InvalidQuadrature(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Error::NonFiniteInput { value } => {
                write!(f, "non-finite input: {value}")
            }
            Error::MassOutOfRange { mass } => {
                write!(f, "probability mass {mass} outside (0, 1)")
            }
            Error::ComplementPrecisionLoss { mass } => write!(
                f,
                "re-orienting mass {mass:e} would lose all precision (1 - mass rounds to 1)"
            ),
            Error::NormalTailUnderflow { x } => {
                write!(f, "normal tail mass at {x} underflows to zero")
            }
            Error::StudentTailUnderflow { x } => {
                write!(f, "t2 tail mass at {x} underflows to zero")
            }
            Error::NonPositiveArgument { value } => {
                write!(f, "argument must be strictly positive, got {value}")
            }
            Error::NegativeSampleValue { value } => {
                write!(f, "sample value must be non-negative, got {value}")
            }
            Error::OutsideTableCoverage { x, coverage } => write!(
                f,
                "point {x} outside tabulated coverage [-{coverage}, {coverage}]"
            ),
            Error::InvalidGrid(msg) => write!(f, "invalid time grid: {msg}"),
            Error::InvalidPath(msg) => write!(f, "invalid sample path: {msg}"),
            Error::EmptySample => write!(f, "empty sample"),
            Error::InvalidTailWindow { k, n } => {
                write!(f, "tail window k={k} unusable for sample size n={n}")
            }
            Error::InvalidCheckpoints => {
                write!(f, "checkpoints must be strictly increasing within 1..=n")
            }
            Error::InvalidQuadrature(msg) => write!(f, "invalid quadrature parameter: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
