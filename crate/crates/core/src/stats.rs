//! Empirical-distribution machinery: KS distance, Hill tail-index
//! estimator, the tail-expectation identity, and running-mean diagnostics.
//!
//! These are the instruments that turn "infinite variance" into something a
//! finite simulation can witness: a Hill index below 1 for the squared
//! transform (infinite mean), and a running mean that refuses to stabilize
//! as the sample grows. Neither is a proof; both are the standard
//! operational signatures.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::kahan::NeumaierSum;

/// A sample with a cached ascending view. Values are immutable after
/// construction; order statistics come from the sorted view, running means
/// from the insertion order.
#[derive(Debug, Clone)]
pub struct EmpiricalSample {
    values: Vec<f64>,
    sorted: Vec<f64>,
}

impl EmpiricalSample {
    /// Wrap a sample, caching the ascending order.
    ///
    /// # Errors
    ///
    /// [`Error::NonFiniteInput`] if any value is NaN or infinite. Empty
    /// samples are allowed; operations that need data reject them
    /// individually.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput { value: bad });
        }
        let mut sorted = values.clone();
        sorted.sort_unstable_by(f64::total_cmp);
        Ok(EmpiricalSample { values, sorted })
    }

    /// Number of observations.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True when the sample holds no observations.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Observations in insertion order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Observations in ascending order.
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// Arithmetic mean (compensated).
    ///
    /// # Errors
    ///
    /// [`Error::EmptySample`] on an empty sample.
    pub fn mean(&self) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut acc = NeumaierSum::new();
        for &v in &self.values {
            acc.add(v);
        }
        Ok(acc.sum() / self.len() as f64)
    }
}

/// Kolmogorov–Smirnov distance between the empirical CDF and a reference
/// CDF: `D = maxᵢ max(|i/n − cdf(x₍ᵢ₎)|, |(i−1)/n − cdf(x₍ᵢ₎)|)`.
///
/// Compare with the asymptotic critical value `c(α)/√n`
/// ([`KS_CRIT_1PCT`], [`KS_CRIT_5PCT`]).
///
/// # Errors
///
/// [`Error::EmptySample`] on an empty sample.
pub fn ks_statistic<F: Fn(f64) -> f64>(sample: &EmpiricalSample, cdf: F) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = sample.len() as f64;
    let mut d: f64 = 0.0;
    for (idx, &x) in sample.sorted().iter().enumerate() {
        let fi = cdf(x);
        let hi = ((idx + 1) as f64 / n - fi).abs();
        let lo = (idx as f64 / n - fi).abs();
        d = d.max(hi).max(lo);
    }
    Ok(d)
}

/// Asymptotic KS critical value at the 1% level: reject when `D > 1.628/√n`.
pub const KS_CRIT_1PCT: f64 = 1.628;
/// Asymptotic KS critical value at the 5% level: reject when `D > 1.358/√n`.
pub const KS_CRIT_5PCT: f64 = 1.358;

/// Hill estimate of the tail index from the top `k` order statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailIndexEstimate {
    /// Estimated tail exponent `α̂`; the underlying survival decays like
    /// `x^(−α̂)`. Below 1 ⇒ infinite mean; below 2 ⇒ infinite variance.
    pub alpha_hat: f64,
    /// Number of upper order statistics used.
    pub k: usize,
    /// Asymptotic standard error `α̂/√k`.
    pub standard_error: f64,
}

/// Hill estimator:
/// `α̂ = [ (1/k)·Σ_{i=1..k} (ln x₍n−i+1₎ − ln x₍n−k₎) ]⁻¹`.
///
/// # Errors
///
/// [`Error::InvalidTailWindow`] unless `10 ≤ k < n` (or if the top window
/// is entirely tied, leaving no log-spacing to invert);
/// [`Error::NonPositiveArgument`] when the threshold order statistic
/// `x₍n−k₎` is not strictly positive.
pub fn hill_estimator(sample: &EmpiricalSample, k: usize) -> Result<TailIndexEstimate> {
    let n = sample.len();
    if k < 10 || k >= n {
        return Err(Error::InvalidTailWindow { k, n });
    }
    let sorted = sample.sorted();
    let threshold = sorted[n - k - 1];
    if threshold <= 0.0 {
        return Err(Error::NonPositiveArgument { value: threshold });
    }
    let log_threshold = libm::log(threshold);
    let mut acc = NeumaierSum::new();
    for &x in &sorted[n - k..] {
        acc.add(libm::log(x) - log_threshold);
    }
    let mean_spacing = acc.sum() / k as f64;
    if mean_spacing <= 0.0 {
        return Err(Error::InvalidTailWindow { k, n });
    }
    let alpha_hat = 1.0 / mean_spacing;
    Ok(TailIndexEstimate {
        alpha_hat,
        k,
        standard_error: alpha_hat / libm::sqrt(k as f64),
    })
}

/// Default Hill window: `n^(2/3)` rounded — the standard bias/variance
/// compromise at this scale.
pub fn default_tail_window(n: usize) -> usize {
    libm::round(libm::pow(n as f64, 2.0 / 3.0)) as usize
}

/// Integral of the empirical survival function of a nonnegative sample,
/// computed exactly as `Σ (sorted gaps)·(fraction of sample above)`.
///
/// For empirical measures this equals the sample mean *identically* — the
/// discrete form of `E X = ∫₀^∞ P(X > t) dt` — so the two must agree to
/// accumulation tolerance, which the verification suite checks.
///
/// # Errors
///
/// [`Error::EmptySample`] on an empty sample;
/// [`Error::NegativeSampleValue`] if any value is negative.
pub fn tail_expectation(sample: &EmpiricalSample) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let sorted = sample.sorted();
    if sorted[0] < 0.0 {
        return Err(Error::NegativeSampleValue { value: sorted[0] });
    }
    let n = sorted.len();
    let nf = n as f64;
    let mut acc = NeumaierSum::new();
    let mut prev = 0.0;
    for (idx, &x) in sorted.iter().enumerate() {
        // Gap from the previous order statistic, weighted by the fraction
        // of the sample at or above x — the survival value on that gap.
        acc.add((x - prev) * ((n - idx) as f64 / nf));
        prev = x;
    }
    Ok(acc.sum())
}

/// Mean of the first `m` values (insertion order) at each checkpoint `m`.
///
/// The diagnostic behind the divergence experiment: under an infinite
/// expectation the profile never settles, and late checkpoints keep
/// drifting relative to early ones.
///
/// # Errors
///
/// [`Error::InvalidCheckpoints`] unless checkpoints are strictly
/// increasing and within `1..=n`.
pub fn running_mean_profile(
    sample: &EmpiricalSample,
    checkpoints: &[usize],
) -> Result<Vec<f64>> {
    let n = sample.len();
    for (i, &c) in checkpoints.iter().enumerate() {
        let ascending = i == 0 || checkpoints[i - 1] < c;
        if c == 0 || c > n || !ascending {
            return Err(Error::InvalidCheckpoints);
        }
    }
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut acc = NeumaierSum::new();
    let mut next = 0;
    for (idx, &v) in sample.values().iter().enumerate() {
        acc.add(v);
        while next < checkpoints.len() && checkpoints[next] == idx + 1 {
            out.push(acc.sum() / (idx + 1) as f64);
            next += 1;
        }
    }
    Ok(out)
}
