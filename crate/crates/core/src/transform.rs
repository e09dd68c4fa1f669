//! The constructed transform `h = F⁻¹ ∘ N` and everything derived from it.
//!
//! `h` pushes a standard normal variable forward onto the Student t₂ law:
//! `h(Z)` has CDF `F(x) = 1/2 + x/(2·sqrt(2 + x²))` when `Z ~ N(0, 1)`.
//! This module evaluates, entirely in tail form,
//!
//! * `h` and its inverse `h⁻¹ = N⁻¹ ∘ F`,
//! * the derivative `h'(x) = φ(x)·(2 + h(x)²)^(3/2)` (chain rule through
//!   the quantile),
//! * the antiderivative `f(x) = ∫₀ˣ h(s) ds` via a checkpointed
//!   Gauss–Legendre table ([`AntiderivativeTable`]),
//! * the closed-form CDF `G_σ(y) = erf(h⁻¹(√y)/(σ√2))` of `h(σW(1))²`,
//! * the survival `P(h(W(1))² > y) = 1 − sqrt(y/(2+y))`, whose `1/y` decay
//!   is the signature of the infinite second moment.
//!
//! `h` grows like `exp(x²/4)`: `h(8) ≈ 2.8e7`, `h(37) ≈ 1e150`. The domain
//! is therefore capped at `|x| ≤ 37` with an explicit range error rather
//! than silent saturation — beyond the cap the normal tail mass leaves the
//! representable range and any returned number would be a lie.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::quad::GaussLegendre;
use crate::specfun::{normal_cdf, normal_pdf, normal_quantile, t2_cdf, t2_quantile, t2_tail};

/// Largest `|x|` accepted by [`h`] and [`h_prime`].
pub const H_DOMAIN_MAX: f64 = 37.0;

const SQRT_2: f64 = core::f64::consts::SQRT_2;

#[inline(always)]
fn abs(x: f64) -> f64 {
    f64::from_bits(x.to_bits() & !(1u64 << 63))
}

/// The transform `h(x) = F⁻¹(N(x))`: strictly increasing, odd, with
/// `h(Z) ~ t₂` for standard normal `Z`.
///
/// Evaluated as `t2_quantile(normal_cdf(x))` with both factors in tail
/// form, so relative accuracy (≲ 1e−12) holds even at `h(8) ≈ 2.8e7` and
/// `h(37) ≈ 1e150`. Oddness is bit-exact because only `|x|` enters the
/// kernels.
///
/// # Errors
///
/// [`Error::NormalTailUnderflow`] for `|x| > 37`;
/// [`Error::NonFiniteInput`] for NaN/infinite `x`.
pub fn h(x: f64) -> Result<f64> {
    check_h_domain(x)?;
    t2_quantile(normal_cdf(x)?)
}

/// The inverse transform `h⁻¹(y) = N⁻¹(F(y))`; odd, strictly increasing,
/// defined for every finite `y` up to the point (|y| ≈ 5e161) where the t₂
/// tail mass itself underflows.
pub fn h_inv(y: f64) -> Result<f64> {
    if !y.is_finite() {
        return Err(Error::NonFiniteInput { value: y });
    }
    normal_quantile(t2_cdf(y)?)
}

/// Derivative `h'(x) = φ(x)·(2 + h(x)²)^(3/2)`: strictly positive, even.
///
/// The factors are grouped as `(φ(x)·s)·sqrt(s)` with `s = 2 + h(x)²`; the
/// naive `s^(3/2)` overflows for `|x| ≳ 32` while the true product is only
/// ≈ 1.9e151 at the domain edge.
pub fn h_prime(x: f64) -> Result<f64> {
    check_h_domain(x)?;
    let hx = h(x)?;
    let s = 2.0 + hx * hx;
    Ok((normal_pdf(x)? * s) * libm::sqrt(s))
}

#[inline]
fn check_h_domain(x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::NonFiniteInput { value: x });
    }
    if abs(x) > H_DOMAIN_MAX {
        return Err(Error::NormalTailUnderflow { x });
    }
    Ok(())
}

/// Checkpointed antiderivative `f(x) = ∫₀ˣ h(s) ds`.
///
/// `f` has no closed form. The table stores `f` at checkpoints
/// `0, Δ, 2Δ, …` out to the coverage limit (defaults: Δ = 0.25 on
/// `[−12, 12]`); an evaluation adds one partial-panel Gauss–Legendre
/// integral to the nearest checkpoint below, so the amortized cost is O(1)
/// with bounded error. `f` is even (h is odd) and the table exploits this:
/// only `x ≥ 0` is stored and `f(x) = f(|x|)` by construction.
///
/// Construction is self-validating: every panel is integrated whole and as
/// two half-panels, and the two must agree within the stated tolerance
/// relative to the running value of `f`, otherwise construction fails. The
/// half-panel sums (the more accurate of the two) are what the table keeps.
///
/// Immutable after construction; shareable across threads.
#[derive(Debug, Clone)]
pub struct AntiderivativeTable {
    grid: Vec<f64>,
    values: Vec<f64>,
    spacing: f64,
    coverage: f64,
    tolerance: f64,
    rule: GaussLegendre,
}

impl AntiderivativeTable {
    /// Default table: coverage 12, spacing 0.25, order-15 panels,
    /// tolerance 1e−9.
    pub fn with_defaults() -> Self {
        // The defaults validate by a wide margin; unwrap is safe.
        Self::new(12.0, 0.25, 15, 1e-9).expect("default antiderivative table must build")
    }

    /// Build a table covering `[−coverage, coverage]`.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidQuadrature`] for nonsensical parameters (coverage
    /// outside `(0, 37]`, spacing outside `(0, coverage]`, tolerance ≤ 0,
    /// order outside `1..=64`) or when the panel refinement check fails.
    pub fn new(coverage: f64, spacing: f64, order: usize, tolerance: f64) -> Result<Self> {
        if !(coverage > 0.0 && coverage <= H_DOMAIN_MAX) {
            return Err(Error::InvalidQuadrature(
                "coverage must lie in (0, 37] (transform domain)",
            ));
        }
        if !(spacing > 0.0 && spacing <= coverage) {
            return Err(Error::InvalidQuadrature("spacing must lie in (0, coverage]"));
        }
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Error::InvalidQuadrature("tolerance must be positive"));
        }
        let rule = GaussLegendre::new(order)?;

        let mut grid = Vec::new();
        grid.push(0.0);
        let mut k = 1u64;
        loop {
            let x = (k as f64) * spacing;
            if x >= coverage {
                grid.push(coverage);
                break;
            }
            grid.push(x);
            k += 1;
        }

        let mut values = Vec::with_capacity(grid.len());
        values.push(0.0);
        let mut acc = crate::kahan::NeumaierSum::new();
        for win in grid.windows(2) {
            let (a, b) = (win[0], win[1]);
            let whole = rule.integrate(a, b, h)?;
            let mid = 0.5 * (a + b);
            let halves = rule.integrate(a, mid, h)? + rule.integrate(mid, b, h)?;
            acc.add(halves);
            let f_here = acc.sum();
            if libm::fabs(whole - halves) > tolerance * libm::fabs(f_here).max(1.0) {
                return Err(Error::InvalidQuadrature(
                    "panel refinement disagreement exceeds tolerance",
                ));
            }
            values.push(f_here);
        }

        Ok(AntiderivativeTable {
            grid,
            values,
            spacing,
            coverage,
            tolerance,
            rule,
        })
    }

    /// `f(x)`, for `|x| ≤ coverage`.
    ///
    /// # Errors
    ///
    /// [`Error::OutsideTableCoverage`] beyond the coverage limit;
    /// [`Error::NonFiniteInput`] for NaN/infinite `x`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::NonFiniteInput { value: x });
        }
        let a = abs(x);
        if a > self.coverage {
            return Err(Error::OutsideTableCoverage {
                x,
                coverage: self.coverage,
            });
        }
        let mut k = (a / self.spacing) as usize;
        if k >= self.grid.len() - 1 {
            k = self.grid.len() - 2;
        }
        // Degenerate partial panels (a == grid[k]) integrate to exactly 0.
        let partial = self.rule.integrate(self.grid[k], a, h)?;
        Ok(self.values[k] + partial)
    }

    /// Checkpoint abscissae `0 = x₀ < x₁ < … = coverage`.
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// Checkpoint values `f(xₖ)`, starting at `f(0) = 0`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Coverage limit: `eval` accepts `|x|` up to this.
    pub fn coverage(&self) -> f64 {
        self.coverage
    }

    /// Checkpoint spacing.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Panel quadrature order.
    pub fn order(&self) -> usize {
        self.rule.order()
    }

    /// Relative tolerance enforced by the construction-time refinement check.
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }
}

/// Free-function form of [`AntiderivativeTable::eval`].
pub fn f_eval(x: f64, table: &AntiderivativeTable) -> Result<f64> {
    table.eval(x)
}

/// CDF of `h(σW(1))²` at `y`: `G_σ(y) = erf(h⁻¹(√y)/(σ·√2))`.
///
/// Equivalently `N(h⁻¹(√y)/σ) − N(h⁻¹(−√y)/σ)` — the probability that the
/// scaled normal `σW(1)` lands where `h² ≤ y`. Strictly decreasing in `σ`
/// for fixed `y` and → 0 as `σ → ∞`: ever more of the mass escapes past
/// `±h⁻¹(√y)`.
///
/// # Errors
///
/// [`Error::NonPositiveArgument`] for `y ≤ 0` or `sigma ≤ 0`;
/// [`Error::NonFiniteInput`] for NaN/infinite arguments.
pub fn gsigma_cdf(y: f64, sigma: f64) -> Result<f64> {
    if !y.is_finite() {
        return Err(Error::NonFiniteInput { value: y });
    }
    if !sigma.is_finite() {
        return Err(Error::NonFiniteInput { value: sigma });
    }
    if y <= 0.0 {
        return Err(Error::NonPositiveArgument { value: y });
    }
    if sigma <= 0.0 {
        return Err(Error::NonPositiveArgument { value: sigma });
    }
    let a = h_inv(libm::sqrt(y))?;
    Ok(libm::erf(a / (sigma * SQRT_2)))
}

/// Survival function of `h(W(1))²`: `P(h(W(1))² > y) = 1 − sqrt(y/(2+y))`.
///
/// Evaluated in the algebraically identical cancellation-free form
/// `2/((2+y) + sqrt(y·(2+y)))` (twice the t₂ upper tail at `√y`), which
/// keeps full relative precision in the deep tail where the textbook form
/// loses everything to `1 − (1−ε)`. Decays like `1/y` — tail exponent 1,
/// hence the infinite mean.
///
/// # Errors
///
/// [`Error::NonPositiveArgument`] for `y ≤ 0`; [`Error::NonFiniteInput`]
/// for NaN/infinite `y`.
pub fn t2_squared_survival(y: f64) -> Result<f64> {
    if !y.is_finite() {
        return Err(Error::NonFiniteInput { value: y });
    }
    if y <= 0.0 {
        return Err(Error::NonPositiveArgument { value: y });
    }
    Ok(2.0 * t2_tail(libm::sqrt(y)))
}
