//! Discretization behavior: first-order time sums, chain-rule residual
//! decay under bridge refinement, and the zero-mean property of the
//! stochastic sums for bounded integrands.

use itocheck_core::integrate::{from_fn, from_try_fn, ito_left_sum, ito_lemma_residual};
use itocheck_core::kahan::NeumaierSum;
use itocheck_core::paths::{bridge_refine, sample_wiener, SamplePath, TimeGrid};
use itocheck_core::rng::SeedSpec;
use itocheck_core::transform::AntiderivativeTable;

/// Left-rectangle quadrature is first order: doubling the grid should
/// roughly halve the error on a smooth deterministic "path".
#[test]
fn time_sum_is_first_order_on_smooth_functions() {
    // w(t) = sin(t) as a deterministic path; ∫₀¹ w dt = 1 − cos 1.
    let exact = 1.0 - (1.0f64).cos();
    let err_at = |steps: usize| -> f64 {
        let grid = TimeGrid::uniform(1.0, steps).unwrap();
        let values: Vec<f64> = grid.times().iter().map(|&t| t.sin()).collect();
        let path = SamplePath::from_parts(grid, values, SeedSpec::new(0)).unwrap();
        let sum = itocheck_core::integrate::time_left_sum(&path, &from_fn(|_, w| w));
        (sum.value - exact).abs()
    };
    for steps in [256usize, 512, 1024] {
        let ratio = err_at(steps) / err_at(2 * steps);
        assert!(
            (1.8..=2.2).contains(&ratio),
            "steps {steps}: halving ratio {ratio}"
        );
    }
}

/// The chain-rule residual shrinks under refinement of a common logical
/// path, with the median over an ensemble strictly smaller at 2¹² steps
/// than at 2⁸.
#[test]
fn residual_median_shrinks_along_refinement() {
    let table = AntiderivativeTable::with_defaults();
    let n_paths = 40usize;
    let mut coarse = Vec::new();
    let mut fine = Vec::new();
    for p in 0..n_paths {
        let grid = TimeGrid::uniform(1.0, 256).unwrap();
        let mut path = sample_wiener(&grid, SeedSpec::new(42).with_stream(p as u64));
        if path.max_abs() > 8.0 {
            continue; // escape policy: skip rare wild paths
        }
        coarse.push(ito_lemma_residual(&path, &table).unwrap().abs());
        for level in 0..4 {
            let seed = SeedSpec::new(42).with_stream(((p as u64) << 8) | (100 + level));
            path = bridge_refine(&path, seed).unwrap();
        }
        fine.push(ito_lemma_residual(&path, &table).unwrap().abs());
    }
    assert!(coarse.len() >= 35, "too many escapes: {}", coarse.len());
    let med = |v: &mut Vec<f64>| {
        v.sort_unstable_by(f64::total_cmp);
        v[v.len() / 2]
    };
    let m_coarse = med(&mut coarse);
    let m_fine = med(&mut fine);
    assert!(
        m_fine < m_coarse,
        "median residual did not shrink: {m_coarse} -> {m_fine}"
    );
}

/// For the bounded integrand cos(w), the stochastic sum has mean zero
/// (its driving increments are centered and independent of the left
/// evaluation point); the ensemble mean must sit within 3 standard errors.
#[test]
fn bounded_integrand_sum_is_centered() {
    let n_paths = 3000usize;
    let grid = TimeGrid::uniform(1.0, 256).unwrap();
    let mut sum = NeumaierSum::new();
    let mut sumsq = NeumaierSum::new();
    for p in 0..n_paths {
        let path = sample_wiener(&grid, SeedSpec::new(7).with_stream(p as u64));
        let v = ito_left_sum(&path, &from_fn(|_, w: f64| w.cos())).value;
        sum.add(v);
        sumsq.add(v * v);
    }
    let n = n_paths as f64;
    let mean = sum.sum() / n;
    let var = sumsq.sum() / n - mean * mean;
    let se = (var / n).sqrt();
    assert!(mean.abs() < 3.0 * se, "mean {mean}, se {se}");
    // The sum's variance is E∫cos²(W) dt ∈ (0, 1): a sanity band.
    assert!(var > 0.3 && var < 1.1, "var {var}");
}

/// Escaped paths (|w| beyond the transform domain) surface as errors from
/// the residual, never as silent saturation.
#[test]
fn residual_rejects_out_of_range_paths() {
    let table = AntiderivativeTable::with_defaults();
    let grid = TimeGrid::uniform(1.0, 4).unwrap();
    let path = SamplePath::from_parts(
        grid,
        vec![0.0, 5.0, 20.0, 39.0, 12.0],
        SeedSpec::new(0),
    )
    .unwrap();
    assert!(ito_lemma_residual(&path, &table).is_err());
    // h itself flags, via the sum's overflow contract.
    let r = ito_left_sum(&path, &from_try_fn(|_, w| itocheck_core::transform::h(w)));
    assert!(r.overflow);
    assert_eq!(r.first_bad_node, Some(3));
}
