//! Discrete stochastic and time integrals along sample paths.
//!
//! The stochastic sum is **left-point only**: `Σ g(tᵢ, wᵢ)·(wᵢ₊₁ − wᵢ)`.
//! Evaluating `g` anywhere else in the step (midpoint, trapezoid) makes the
//! sums converge to the Stratonovich integral instead and would silently
//! falsify the correction-term check below, so no other evaluation rule is
//! offered.
//!
//! [`ito_lemma_residual`] measures how well the discrete sums reproduce the
//! chain rule of stochastic calculus for `f` (with `f' = h`, `f'' = h'`)
//! along a Wiener path:
//!
//! ```text
//! R = f(w_n) − f(w_0) − Σ h(wᵢ)·Δwᵢ − ½·Σ h'(wᵢ)·Δtᵢ
//! ```
//!
//! `R → 0` as the grid refines, at the strong rate ≈ n^(−1/2) typical of
//! left-point discretization.
//!
//! All sums use compensated accumulation; overflow and integrand range
//! failures are **reported, never saturated**: the result carries a flag
//! and the offending node index, and the value is NaN. Callers exclude
//! flagged paths from ensemble statistics and tally them.

use crate::error::{Error, Result};
use crate::kahan::NeumaierSum;
use crate::paths::SamplePath;
use crate::transform::{h, h_prime, AntiderivativeTable, H_DOMAIN_MAX};

/// An integrand `g(t, w)` evaluated at grid nodes. Implementations must be
/// deterministic: equal inputs give equal outputs.
pub trait Integrand {
    /// Value of `g` at time `t`, path value `w`. Range failures (as `h`
    /// raises beyond its domain) surface as errors and mark the whole
    /// path-sum overflowed.
    fn eval(&self, t: f64, w: f64) -> Result<f64>;
}

/// Adapter for infallible closures.
pub struct FnIntegrand<F>(F);

impl<F: Fn(f64, f64) -> f64> Integrand for FnIntegrand<F> {
    #[inline]
    fn eval(&self, t: f64, w: f64) -> Result<f64> {
        Ok((self.0)(t, w))
    }
}

/// Wrap an infallible closure `g(t, w) → value` as an [`Integrand`].
pub fn from_fn<F: Fn(f64, f64) -> f64>(g: F) -> FnIntegrand<F> {
    FnIntegrand(g)
}

/// Adapter for fallible closures.
pub struct TryFnIntegrand<F>(F);

impl<F: Fn(f64, f64) -> Result<f64>> Integrand for TryFnIntegrand<F> {
    #[inline]
    fn eval(&self, t: f64, w: f64) -> Result<f64> {
        (self.0)(t, w)
    }
}

/// Wrap a fallible closure `g(t, w) → Result` as an [`Integrand`].
pub fn from_try_fn<F: Fn(f64, f64) -> Result<f64>>(g: F) -> TryFnIntegrand<F> {
    TryFnIntegrand(g)
}

/// Outcome of a path sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathIntegralResult {
    /// The compensated sum; NaN whenever `overflow` is set.
    pub value: f64,
    /// Number of grid intervals the sum ranges over.
    pub n_steps: usize,
    /// Set iff some evaluation or partial sum was non-finite or the
    /// integrand raised a range error.
    pub overflow: bool,
    /// First node index at which the failure occurred, when `overflow`.
    pub first_bad_node: Option<usize>,
}

impl PathIntegralResult {
    /// True when the value is meaningful (no overflow).
    pub fn is_clean(&self) -> bool {
        !self.overflow
    }

    fn clean(value: f64, n_steps: usize) -> Self {
        PathIntegralResult {
            value,
            n_steps,
            overflow: false,
            first_bad_node: None,
        }
    }

    fn flagged(n_steps: usize, node: usize) -> Self {
        PathIntegralResult {
            value: f64::NAN,
            n_steps,
            overflow: true,
            first_bad_node: Some(node),
        }
    }
}

/// Shared engine: left-point sum with either `Δw` or `Δt` weights.
fn left_sum<G: Integrand + ?Sized>(
    path: &SamplePath,
    g: &G,
    use_increments: bool,
) -> PathIntegralResult {
    let times = path.grid().times();
    let values = path.values();
    let n = times.len() - 1;
    let mut acc = NeumaierSum::new();
    for i in 0..n {
        let gi = match g.eval(times[i], values[i]) {
            Ok(v) => v,
            Err(_) => return PathIntegralResult::flagged(n, i),
        };
        let weight = if use_increments {
            values[i + 1] - values[i]
        } else {
            times[i + 1] - times[i]
        };
        let term = gi * weight;
        if !term.is_finite() {
            return PathIntegralResult::flagged(n, i);
        }
        acc.add(term);
        if !acc.sum().is_finite() {
            return PathIntegralResult::flagged(n, i);
        }
    }
    PathIntegralResult::clean(acc.sum(), n)
}

/// Left-point stochastic sum `Σ g(tᵢ, wᵢ)·(wᵢ₊₁ − wᵢ)`.
pub fn ito_left_sum<G: Integrand + ?Sized>(path: &SamplePath, g: &G) -> PathIntegralResult {
    left_sum(path, g, true)
}

/// Left-point time sum `Σ g(tᵢ, wᵢ)·(tᵢ₊₁ − tᵢ)`.
pub fn time_left_sum<G: Integrand + ?Sized>(path: &SamplePath, g: &G) -> PathIntegralResult {
    left_sum(path, g, false)
}

/// Discrete chain-rule residual for `f` along a Wiener path:
/// `R = f(w_n) − f(w_0) − Σ h(wᵢ)·Δwᵢ − ½·Σ h'(wᵢ)·Δtᵢ`.
///
/// For a fixed logical path, `|R|` shrinks under bridge refinement at the
/// strong rate ≈ n^(−1/2).
///
/// # Errors
///
/// Range errors propagate: [`Error::NormalTailUnderflow`] when any path
/// value leaves `h`'s domain, [`Error::OutsideTableCoverage`] when the
/// endpoint leaves the table.
pub fn ito_lemma_residual(path: &SamplePath, table: &AntiderivativeTable) -> Result<f64> {
    for &w in path.values() {
        if !(-H_DOMAIN_MAX..=H_DOMAIN_MAX).contains(&w) {
            return Err(Error::NormalTailUnderflow { x: w });
        }
    }
    let values = path.values();
    let f_end = table.eval(values[values.len() - 1])?;
    let f_start = table.eval(values[0])?;
    let ito = ito_left_sum(path, &from_try_fn(|_, w| h(w)));
    let correction = time_left_sum(path, &from_try_fn(|_, w| h_prime(w)));
    if ito.overflow || correction.overflow {
        // Unreachable after the domain pre-check, kept as a hard stop.
        return Err(Error::InvalidPath("non-finite accumulation in residual sums"));
    }
    Ok(f_end - f_start - ito.value - 0.5 * correction.value)
}

struct Squared<'a, G: ?Sized>(&'a G);

impl<G: Integrand + ?Sized> Integrand for Squared<'_, G> {
    #[inline]
    fn eval(&self, t: f64, w: f64) -> Result<f64> {
        let v = self.0.eval(t, w)?;
        Ok(v * v)
    }
}

struct AbsOf<'a, G: ?Sized>(&'a G);

impl<G: Integrand + ?Sized> Integrand for AbsOf<'_, G> {
    #[inline]
    fn eval(&self, t: f64, w: f64) -> Result<f64> {
        let v = self.0.eval(t, w)?;
        Ok(f64::from_bits(v.to_bits() & !(1u64 << 63)))
    }
}

/// Discrete square-integrability witness: `Σ g(tᵢ, wᵢ)²·Δtᵢ`. A finite,
/// unflagged value on a path is the pathwise evidence that `g(t, W)`
/// belongs to the square-integrable-in-time class on `[0, T]`.
pub fn pathwise_l2_functional<G: Integrand + ?Sized>(
    path: &SamplePath,
    g: &G,
) -> PathIntegralResult {
    time_left_sum(path, &Squared(g))
}

/// Discrete absolute-integrability witness: `Σ |g(tᵢ, wᵢ)|·Δtᵢ`.
pub fn pathwise_l1_functional<G: Integrand + ?Sized>(
    path: &SamplePath,
    g: &G,
) -> PathIntegralResult {
    time_left_sum(path, &AbsOf(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::TimeGrid;
    use crate::rng::SeedSpec;
    use alloc::vec;

    /// Grid (0, 1, 2) with values (0, 1, 3) — the hand example used
    /// throughout: left sums are short exact arithmetic.
    fn hand_path() -> SamplePath {
        SamplePath::from_parts(
            TimeGrid::from_times(vec![0.0, 1.0, 2.0]).unwrap(),
            vec![0.0, 1.0, 3.0],
            SeedSpec::new(0),
        )
        .unwrap()
    }

    #[test]
    fn constant_integrand_telescopes_exactly() {
        // (0, 0.5, −0.25) on grid (0, 0.5, 1): Σ c·Δw = c·(w_n − w_0).
        let p = SamplePath::from_parts(
            TimeGrid::from_times(vec![0.0, 0.5, 1.0]).unwrap(),
            vec![0.0, 0.5, -0.25],
            SeedSpec::new(0),
        )
        .unwrap();
        let r = ito_left_sum(&p, &from_fn(|_, _| 3.0));
        assert!(r.is_clean());
        assert_eq!(r.value, 3.0 * -0.25);
        assert_eq!(r.n_steps, 2);
        // g ≡ 1 reproduces the endpoint exactly on dyadic values.
        assert_eq!(ito_left_sum(&p, &from_fn(|_, _| 1.0)).value, -0.25);
    }

    #[test]
    fn left_point_rule_hand_values() {
        let p = hand_path();
        // Ito: 0·(1−0) + 1·(3−1) = 2.
        assert_eq!(ito_left_sum(&p, &from_fn(|_, w| w)).value, 2.0);
        // Time, g ≡ 1: the horizon, exactly.
        assert_eq!(time_left_sum(&p, &from_fn(|_, _| 1.0)).value, 2.0);
        // Time, g = w²: 0²·1 + 1²·1 = 1.
        assert_eq!(time_left_sum(&p, &from_fn(|_, w| w * w)).value, 1.0);
    }

    #[test]
    fn functional_hand_values() {
        let p = hand_path();
        // ℒ² with g = w: same as time sum of w² = 1.
        assert_eq!(pathwise_l2_functional(&p, &from_fn(|_, w| w)).value, 1.0);
        // ℒ² with g ≡ 1 over T=1.
        let unit = SamplePath::from_parts(
            TimeGrid::uniform(1.0, 4).unwrap(),
            vec![0.0; 5],
            SeedSpec::new(0),
        )
        .unwrap();
        assert_eq!(pathwise_l2_functional(&unit, &from_fn(|_, _| 1.0)).value, 1.0);
        // ℒ¹ with g ≡ −1 over T=2: absolute value makes it 2.
        assert_eq!(pathwise_l1_functional(&p, &from_fn(|_, _| -1.0)).value, 2.0);
        // ℒ¹ with g = w on the hand path: |0| + |1| = 1.
        assert_eq!(pathwise_l1_functional(&p, &from_fn(|_, w| w)).value, 1.0);
    }

    #[test]
    fn transform_is_square_integrable_on_tame_paths() {
        // |w| ≤ 8 keeps h finite: the functionals witness membership.
        let g = TimeGrid::uniform(1.0, 256).unwrap();
        let p = crate::paths::sample_wiener(&g, SeedSpec::new(42));
        assert!(p.max_abs() < 8.0, "seed chosen to stay tame");
        let l2 = pathwise_l2_functional(&p, &from_try_fn(|_, w| h(w)));
        assert!(l2.is_clean() && l2.value.is_finite() && l2.value >= 0.0);
        let l1 = pathwise_l1_functional(&p, &from_try_fn(|_, w| h(w)));
        assert!(l1.is_clean() && l1.value.is_finite());
        // Cauchy–Schwarz on the discrete measure: ∫|g| ≤ √(T·∫g²).
        assert!(l1.value <= libm::sqrt(1.0 * l2.value) + 1e-12);
    }

    #[test]
    fn integrand_failure_sets_flag_with_node() {
        let p = hand_path();
        let g = from_try_fn(|_, w| {
            if w > 0.5 {
                Err(Error::NonFiniteInput { value: w })
            } else {
                Ok(w)
            }
        });
        let r = ito_left_sum(&p, &g);
        assert!(r.overflow);
        assert!(r.value.is_nan());
        assert_eq!(r.first_bad_node, Some(1));
        // Non-finite values flag too, with the earliest node reported.
        let r2 = time_left_sum(&p, &from_fn(|_, _| f64::INFINITY));
        assert!(r2.overflow);
        assert_eq!(r2.first_bad_node, Some(0));
    }

    #[test]
    fn telescoping_on_simulated_paths() {
        // Neumaier keeps Σ Δw within accumulation tolerance of w_n even
        // when individual float subtractions round.
        let g = TimeGrid::uniform(1.0, 4096).unwrap();
        let p = crate::paths::sample_wiener(&g, SeedSpec::new(5));
        let sum = ito_left_sum(&p, &from_fn(|_, _| 1.0)).value;
        let w_n = *p.values().last().unwrap();
        assert!((sum - w_n).abs() <= 1e-13, "sum {sum} vs {w_n}");
    }

    #[test]
    fn linearity_within_accumulation_tolerance() {
        let g = TimeGrid::uniform(1.0, 1024).unwrap();
        let p = crate::paths::sample_wiener(&g, SeedSpec::new(8));
        let g1 = from_fn(|t, w: f64| libm::sin(w) + t);
        let g2 = from_fn(|_, w: f64| w * w - 0.5);
        let (a, b) = (2.5, -1.25);
        let combo = from_fn(|t, w| {
            a * (libm::sin(w) + t) + b * (w * w - 0.5)
        });
        let lhs = ito_left_sum(&p, &combo).value;
        let rhs = a * ito_left_sum(&p, &g1).value + b * ito_left_sum(&p, &g2).value;
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        assert!((lhs - rhs).abs() / scale < 1e-12, "{lhs} vs {rhs}");
    }

    #[test]
    fn residual_on_constant_path_matches_closed_form() {
        // w ≡ 0: the endpoint and stochastic terms vanish, leaving exactly
        // the correction term −½·h'(0)·T = −T/√π.
        let table = AntiderivativeTable::with_defaults();
        for steps in [1usize, 7, 64] {
            let grid = TimeGrid::uniform(2.0, steps).unwrap();
            let p = SamplePath::from_parts(grid, vec![0.0; steps + 1], SeedSpec::new(0))
                .unwrap();
            let r = ito_lemma_residual(&p, &table).unwrap();
            let expected = -2.0 / libm::sqrt(core::f64::consts::PI);
            assert!((r - expected).abs() < 1e-12, "steps={steps}: {r}");
        }
    }

    #[test]
    fn residual_shrinks_under_refinement() {
        let table = AntiderivativeTable::with_defaults();
        let g = TimeGrid::uniform(1.0, 16).unwrap();
        let mut path = crate::paths::sample_wiener(&g, SeedSpec::new(42));
        let coarse = ito_lemma_residual(&path, &table).unwrap().abs();
        for level in 1..=6 {
            path = crate::paths::bridge_refine(&path, SeedSpec::new(42).with_stream(level))
                .unwrap();
        }
        let fine = ito_lemma_residual(&path, &table).unwrap().abs();
        assert!(fine < coarse, "coarse {coarse} fine {fine}");
    }

    #[test]
    fn residual_propagates_domain_errors() {
        let table = AntiderivativeTable::with_defaults();
        let grid = TimeGrid::uniform(1.0, 2).unwrap();
        let escaped =
            SamplePath::from_parts(grid.clone(), vec![0.0, 38.0, 38.5], SeedSpec::new(0))
                .unwrap();
        assert!(matches!(
            ito_lemma_residual(&escaped, &table),
            Err(Error::NormalTailUnderflow { .. })
        ));
        // Within h's domain but beyond the table's coverage.
        let outside =
            SamplePath::from_parts(grid, vec![0.0, 6.0, 13.0], SeedSpec::new(0)).unwrap();
        assert!(matches!(
            ito_lemma_residual(&outside, &table),
            Err(Error::OutsideTableCoverage { .. })
        ));
    }
}
