//! Numerics for a quantile-transform counterexample in stochastic integration.
//!
//! The library is built around one function pair. Let `N` be the standard
//! normal CDF and `F(x) = 1/2 + x / (2·sqrt(2 + x²))` the CDF of a Student t
//! law with two degrees of freedom (density `(2 + x²)^(−3/2)`, finite mean,
//! infinite variance). The transform
//!
//! ```text
//! h = F⁻¹ ∘ N,        h⁻¹ = N⁻¹ ∘ F
//! ```
//!
//! maps a standard normal variable onto the t₂ law. Its antiderivative `f`
//! (with `f' = h`, `f(0) = 0`, `f` even) is a C² function whose Ito expansion
//! on a Wiener path has a pathwise well-defined stochastic integral even
//! though `E h(W(1))² = ∞`: the integrand is square integrable along every
//! path but not in expectation. The modules here provide everything needed to
//! check the numerically checkable faces of that construction:
//!
//! * [`specfun`] — tail-oriented probabilities, normal and t₂ CDF/quantile
//!   pairs accurate deep into the tails;
//! * [`transform`] — `h`, `h⁻¹`, `h'`, the tabulated antiderivative `f`, and
//!   the distribution of `h(σZ)²`;
//! * [`rng`] / [`paths`] — reproducible stream-seeded Wiener paths with
//!   Brownian-bridge refinement;
//! * [`integrate`] — left-point Ito and time sums, the Ito-lemma residual,
//!   and the pathwise (square-)integrability functionals;
//! * [`stats`] — Kolmogorov–Smirnov distance, Hill tail-index estimation,
//!   the tail-expectation identity, and running-mean profiles.
//!
//! The crate is `no_std` (with `alloc`); all transcendental kernels come from
//! `libm` so results are bit-identical across std and embedded builds.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod error;
pub mod integrate;
pub mod kahan;
pub mod paths;
pub mod quad;
pub mod rng;
pub mod specfun;
pub mod stats;
pub mod transform;

pub use error::{Error, Result};
