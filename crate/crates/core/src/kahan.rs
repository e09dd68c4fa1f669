//! Compensated (Neumaier) summation.
//!
//! Left-point sums over 2¹⁴-step paths mix terms spanning many orders of
//! magnitude; naive accumulation would pollute the convergence-order
//! measurements. The Neumaier variant of Kahan's algorithm keeps a running
//! compensation term and, unlike classic Kahan, stays accurate when an
//! incoming term is larger than the running sum — exactly the situation a
//! heavy-tailed integrand produces.

/// Running sum with Neumaier compensation.
///
/// The logical value is `sum() = s + c`; the compensation `c` collects the
/// low-order bits lost by each addition.
///
/// # Examples
///
/// ```
/// use itocheck_core::kahan::NeumaierSum;
///
/// let mut acc = NeumaierSum::new();
/// acc += 1.0;
/// acc += 1e100;
/// acc += 1.0;
/// acc += -1e100;
/// assert_eq!(acc.sum(), 2.0); // naive summation returns 0.0
/// ```
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    s: f64,
    c: f64,
}

impl NeumaierSum {
    /// Empty sum.
    #[inline]
    pub fn new() -> Self {
        NeumaierSum { s: 0.0, c: 0.0 }
    }

    /// Add one term.
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.s + x;
        if abs(self.s) >= abs(x) {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    /// Compensated total.
    #[inline]
    pub fn sum(&self) -> f64 {
        self.s + self.c
    }
}

impl core::ops::AddAssign<f64> for NeumaierSum {
    #[inline]
    fn add_assign(&mut self, x: f64) {
        self.add(x);
    }
}

/// Compensated sum of a slice.
#[inline]
pub fn neumaier_sum(values: &[f64]) -> f64 {
    let mut acc = NeumaierSum::new();
    for &v in values {
        acc += v;
    }
    acc.sum()
}

#[inline(always)]
fn abs(x: f64) -> f64 {
    f64::from_bits(x.to_bits() & !(1u64 << 63))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_low_bits() {
        let mut acc = NeumaierSum::new();
        for _ in 0..10 {
            acc += 0.1;
        }
        assert!((acc.sum() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn large_small_alternation() {
        assert_eq!(neumaier_sum(&[1.0, 1e100, 1.0, -1e100]), 2.0);
    }

    #[test]
    fn empty_is_zero() {
        assert_eq!(neumaier_sum(&[]), 0.0);
    }

    #[test]
    fn matches_exact_integer_sums() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(neumaier_sum(&xs), (999 * 1000 / 2) as f64);
    }
}
