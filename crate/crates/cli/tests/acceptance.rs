//! Acceptance gate: one test per release criterion, numbered a01–a11.
//!
//! Each test drives the published library or binary surface at the
//! documented default scale, gates on the documented thresholds, and
//! prints the measured statistic (visible under `--nocapture`). Stated
//! runtime budgets are asserted too; every run here is single-seeded and
//! deterministic, so these tests never flake.

use std::process::Command;
use std::time::{Duration, Instant};

use itocheck::config::Overrides;
use itocheck::experiments;
use itocheck::report::deterministic_view;
use itocheck_core::rng::{rng_from, uniform_open01, SeedSpec};
use itocheck_core::specfun::{
    normal_cdf, normal_quantile, t2_cdf, t2_pdf, t2_quantile, t2_survival, TailProbability,
};
use itocheck_core::stats::{tail_expectation, EmpiricalSample};
use itocheck_core::transform::{f_eval, h, h_inv, h_prime, AntiderivativeTable};

/// Fails with the criterion label when `cond` is false.
macro_rules! gate {
    ($label:expr, $cond:expr, $($detail:tt)*) => {
        assert!($cond, "{} failed: {}", $label, format!($($detail)*));
    };
}

fn budget(label: &str, start: Instant, limit: Duration) {
    let took = start.elapsed();
    assert!(
        took <= limit,
        "{label} exceeded its runtime budget: {took:?} > {limit:?}"
    );
    println!("{label}: PASS in {took:.2?}");
}

/// Lower-tail masses spanning the full representable sweep down to
/// 1e−300, two points per decade, plus near-median values.
fn mass_grid() -> Vec<f64> {
    let mut grid: Vec<f64> = (1..=300)
        .flat_map(|e| [10f64.powi(-e), 2.5 * 10f64.powi(-e)])
        .collect();
    grid.extend([0.5, 0.4, 0.3, 0.15]);
    grid
}

#[test]
fn a01_special_function_precision() {
    let start = Instant::now();
    let mut worst_normal = 0.0f64;
    let mut worst_t2 = 0.0f64;
    for m in mass_grid() {
        let u = TailProbability::lower(m).expect("valid mass");
        let z = normal_quantile(u).expect("in range");
        let back = normal_cdf(z).expect("in range").to_lower_lossy();
        worst_normal = worst_normal.max((back - m).abs());

        let x = t2_quantile(u).expect("in range");
        let back = t2_cdf(x).expect("in range").to_lower_lossy();
        worst_t2 = worst_t2.max((back - m).abs());
    }
    gate!("a01", worst_normal <= 1e-11, "normal round-trip error {worst_normal:.3e}");
    gate!("a01", worst_t2 <= 1e-11, "t2 round-trip error {worst_t2:.3e}");

    // pdf vs. central differences of the distribution function; the
    // survival form avoids cancellation away from the center.
    let mut worst_fd = 0.0f64;
    for &x in &[0.0f64, 0.3, -0.3, 1.0, -1.0, 2.5, -2.5, 4.0, -4.0, 8.0, -8.0] {
        let d = 1e-5 * (1.0 + x.abs());
        let fd = if x.abs() <= 0.5 {
            let hi = t2_cdf(x + d).expect("in range").to_lower_lossy();
            let lo = t2_cdf(x - d).expect("in range").to_lower_lossy();
            (hi - lo) / (2.0 * d)
        } else {
            let hi = t2_survival(x + d).expect("in range").to_lower_lossy();
            let lo = t2_survival(x - d).expect("in range").to_lower_lossy();
            // survival's lower-collapsed value is 1 − F, so negate.
            -(hi - lo) / (2.0 * d)
        };
        let pdf = t2_pdf(x).expect("in range");
        worst_fd = worst_fd.max((fd - pdf).abs() / pdf);
    }
    gate!("a01", worst_fd <= 1e-6, "pdf vs finite differences rel error {worst_fd:.3e}");
    println!(
        "a01 stats: normal rt {worst_normal:.2e}, t2 rt {worst_t2:.2e}, pdf fd {worst_fd:.2e}"
    );
    budget("a01", start, Duration::from_secs(1));
}

#[test]
fn a02_transform_identities() {
    let start = Instant::now();
    gate!("a02", h(0.0).expect("in range") == 0.0, "h(0) must be exactly zero");

    let mut worst_odd = 0.0f64;
    let mut worst_inv = 0.0f64;
    let mut worst_fd = 0.0f64;
    let mut x = -8.0;
    while x <= 8.0 {
        let hx = h(x).expect("in range");
        let hmx = h(-x).expect("in range");
        worst_odd = worst_odd.max((hx + hmx).abs() / hx.abs().max(1.0));
        worst_inv = worst_inv.max((h_inv(hx).expect("in range") - x).abs());
        let d = 1e-6 * (1.0 + x.abs());
        let fd = (h(x + d).expect("in range") - h(x - d).expect("in range")) / (2.0 * d);
        let hp = h_prime(x).expect("in range");
        worst_fd = worst_fd.max((fd - hp).abs() / hp);
        x += 0.25;
    }
    gate!("a02", worst_odd <= 1e-12, "oddness defect {worst_odd:.3e}");
    gate!("a02", worst_inv <= 1e-9, "inverse-composition defect {worst_inv:.3e}");
    gate!("a02", worst_fd <= 1e-6, "derivative vs finite differences {worst_fd:.3e}");

    let mut worst_fwd = 0.0f64;
    for e in -6..=6 {
        for sign in [-1.0, 1.0] {
            let y = sign * 10f64.powi(e);
            let back = h(h_inv(y).expect("in range")).expect("in range");
            worst_fwd = worst_fwd.max((back - y).abs() / y.abs().max(1.0));
        }
    }
    gate!("a02", worst_fwd <= 1e-9, "forward-composition defect {worst_fwd:.3e}");

    let table = AntiderivativeTable::with_defaults();
    gate!(
        "a02",
        f_eval(0.0, &table).expect("in range") == 0.0,
        "antiderivative must vanish at zero"
    );
    let mut worst_even = 0.0f64;
    let mut worst_f_fd = 0.0f64;
    let mut x = 0.25;
    while x <= 9.0 {
        let fx = f_eval(x, &table).expect("in range");
        let fmx = f_eval(-x, &table).expect("in range");
        worst_even = worst_even.max((fx - fmx).abs() / fx.abs().max(1.0));
        let d = 1e-5 * (1.0 + x);
        let fd = (f_eval(x + d, &table).expect("in range")
            - f_eval(x - d, &table).expect("in range"))
            / (2.0 * d);
        let hx = h(x).expect("in range");
        worst_f_fd = worst_f_fd.max((fd - hx).abs() / hx);
        x += 0.25;
    }
    gate!("a02", worst_even == 0.0, "evenness defect {worst_even:.3e}");
    gate!("a02", worst_f_fd <= 1e-6, "antiderivative slope vs h {worst_f_fd:.3e}");
    println!(
        "a02 stats: odd {worst_odd:.1e}, inv {worst_inv:.1e}, h' fd {worst_fd:.1e}, \
         fwd {worst_fwd:.1e}, f' fd {worst_f_fd:.1e}"
    );
    budget("a02", start, Duration::from_secs(5));
}

#[test]
fn a03_distributional_identity() {
    let start = Instant::now();
    let r = experiments::dist::run(&Overrides::default()).expect("default config valid");
    gate!(
        "a03",
        r.checks["ks_below_threshold"],
        "D = {} vs threshold {}",
        r.scalars["ks_d"],
        r.scalars["ks_threshold"]
    );
    gate!(
        "a03",
        r.checks["identity_control_rejected"],
        "control D = {} did not exceed {}",
        r.scalars["ks_d_identity_control"],
        r.scalars["ks_threshold"]
    );
    println!(
        "a03 stats: D {:.3e} < {:.3e}, control {:.3e}",
        r.scalars["ks_d"], r.scalars["ks_threshold"], r.scalars["ks_d_identity_control"]
    );
    budget("a03", start, Duration::from_secs(5));
}

#[test]
fn a04_survival_law() {
    let start = Instant::now();
    let r = experiments::survival::run(&Overrides::default()).expect("default config valid");
    gate!(
        "a04",
        r.checks["survival_within_3se_sigma_1"],
        "worst deviation {} SE",
        r.scalars["max_dev_in_se_sigma_1"]
    );
    gate!("a04", r.pass, "secondary survival checks failed: {:?}", r.checks);
    println!(
        "a04 stats: worst |dev| {:.2} SE (sigma 1), {:.2} SE (sigma 2)",
        r.scalars["max_dev_in_se_sigma_1"], r.scalars["max_dev_in_se_sigma_2"]
    );
    budget("a04", start, Duration::from_secs(30));
}

#[test]
fn a05_infinite_variance_signature() {
    let start = Instant::now();
    let r = experiments::tail_index::run(&Overrides::default()).expect("default config valid");
    for sigma in ["0.7", "1", "1.2"] {
        gate!(
            "a05",
            r.checks[&format!("alpha_in_band_sigma_{sigma}")],
            "alpha at sigma {sigma} = {}",
            r.scalars[&format!("alpha_hat_sigma_{sigma}")]
        );
        gate!(
            "a05",
            r.checks[&format!("verdict_expected_sigma_{sigma}")],
            "verdict at sigma {sigma} flipped"
        );
    }
    gate!("a05", r.scalars["hill_k_sigma_1"] == 10_000.0, "window drifted");
    println!(
        "a05 stats: alpha(0.7) {:.3}, alpha(1) {:.3}, alpha(1.2) {:.3}",
        r.scalars["alpha_hat_sigma_0.7"],
        r.scalars["alpha_hat_sigma_1"],
        r.scalars["alpha_hat_sigma_1.2"]
    );
    budget("a05", start, Duration::from_secs(120));
}

#[test]
fn a06_square_integrability_contrast() {
    let start = Instant::now();
    let r = experiments::divergence::run(&Overrides::default()).expect("default config valid");
    gate!(
        "a06",
        r.checks["all_retained_paths_finite"],
        "finite fraction {}",
        r.scalars["frac_retained_finite"]
    );
    gate!(
        "a06",
        r.checks["running_mean_unstable"],
        "moved fraction {} below {}",
        r.scalars["frac_ratio_moved"],
        r.scalars["min_moved_fraction"]
    );
    gate!(
        "a06",
        r.checks["control_cos_ratio_stable"],
        "control ratio {}",
        r.scalars["control_cos_ratio"]
    );
    println!(
        "a06 stats: finite {:.0}%, moved {:.0}%, upward {:.0}%, control {:.5}",
        100.0 * r.scalars["frac_retained_finite"],
        100.0 * r.scalars["frac_ratio_moved"],
        100.0 * r.scalars["frac_ratio_above_1_05"],
        r.scalars["control_cos_ratio"]
    );
    budget("a06", start, Duration::from_secs(300));
}

#[test]
fn a07_chain_rule_consistency() {
    let start = Instant::now();
    let r = experiments::ito::run(&Overrides::default()).expect("default config valid");
    gate!("a07", r.checks["slope_in_band"], "slope {}", r.scalars["slope"]);
    gate!(
        "a07",
        r.checks["median_decreases_end_to_end"],
        "medians {} -> {}",
        r.scalars["median_coarsest"],
        r.scalars["median_finest"]
    );
    gate!(
        "a07",
        r.scalars["control_identity_max"] <= 1e-9
            && r.scalars["control_residual_dev_max"] <= 1e-9,
        "control defects {} / {}",
        r.scalars["control_identity_max"],
        r.scalars["control_residual_dev_max"]
    );
    println!(
        "a07 stats: slope {:.3}, median {:.2e} -> {:.2e}, controls {:.1e}/{:.1e}",
        r.scalars["slope"],
        r.scalars["median_coarsest"],
        r.scalars["median_finest"],
        r.scalars["control_identity_max"],
        r.scalars["control_residual_dev_max"]
    );
    budget("a07", start, Duration::from_secs(120));
}

#[test]
fn a08_martingale_mean_zero() {
    let start = Instant::now();
    let r = experiments::martingale::run(&Overrides::default()).expect("default config valid");
    gate!(
        "a08",
        r.checks["cos_mean_within_3se"],
        "|mean|/SE = {}",
        r.scalars["cos_mean_over_se"]
    );
    println!(
        "a08 stats: mean {:.2e}, SE {:.2e}, |mean|/SE {:.2}",
        r.scalars["cos_mean"], r.scalars["cos_se"], r.scalars["cos_mean_over_se"]
    );
    budget("a08", start, Duration::from_secs(60));
}

#[test]
fn a09_scale_monotonicity() {
    let start = Instant::now();
    let r = experiments::gsigma::run(&Overrides::default()).expect("default config valid");
    for y in ["0.1", "1", "10"] {
        gate!("a09", r.checks[&format!("strict_decrease_y_{y}")], "row y = {y}");
    }
    gate!(
        "a09",
        r.checks["wide_sigma_mass_escapes"],
        "G_100(1) = {}",
        r.scalars["gsigma_1_100"]
    );
    gate!(
        "a09",
        r.scalars["sigma1_closed_form_dev"] <= 1e-10,
        "closed-form deviation {}",
        r.scalars["sigma1_closed_form_dev"]
    );
    println!(
        "a09 stats: G_100(1) {:.4e}, sigma-1 column dev {:.1e}",
        r.scalars["gsigma_1_100"], r.scalars["sigma1_closed_form_dev"]
    );
    budget("a09", start, Duration::from_secs(1));
}

#[test]
fn a10_tail_expectation_identity() {
    let start = Instant::now();
    let n = 100_000;
    let mut rng = rng_from(SeedSpec::new(42).with_stream(6 << 48));
    let values: Vec<f64> = (0..n).map(|_| -uniform_open01(&mut rng).ln()).collect();
    let sample = EmpiricalSample::new(values).expect("finite sample");
    let mean = sample.mean().expect("non-empty");
    let integral = tail_expectation(&sample).expect("non-negative sample");
    let rel = (integral - mean).abs() / mean;
    gate!("a10", rel <= 1e-12, "relative defect {rel:.3e}");
    println!("a10 stats: mean {mean:.6}, survival integral matches to {rel:.2e}");
    budget("a10", start, Duration::from_secs(1));
}

/// Cheapest valid configuration per experiment, used to exercise every
/// code path through the binary for the determinism criterion.
const CHEAP_CONFIGS: [&[&str]; 7] = [
    &["dist-check", "--n", "10000"],
    &["survival-check", "--n", "100000"],
    &["tail-index", "--n", "20000", "--sigma", "1"],
    &["divergence", "--paths", "64"],
    &["ito-check", "--paths", "8"],
    &["martingale-check", "--steps", "8"],
    &["gsigma"],
];

fn masked_run(args: &[&str], threads: &str) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_itocheck"))
        .args(args)
        .env("ITOCHECK_THREADS", threads)
        .output()
        .expect("binary runs");
    assert!(
        out.status.code() == Some(0) || out.status.code() == Some(1),
        "unexpected exit for {args:?}: {:?}",
        out.status
    );
    deterministic_view(&String::from_utf8(out.stdout).expect("utf-8 report"))
        .expect("maskable JSON")
}

#[test]
fn a11_determinism_across_runs_and_workers() {
    let start = Instant::now();
    for args in CHEAP_CONFIGS {
        let first = masked_run(args, "1");
        let second = masked_run(args, "1");
        let wide = masked_run(args, "4");
        gate!("a11", first == second, "{args:?} differed between identical runs");
        gate!("a11", first == wide, "{args:?} differed between 1 and 4 workers");
    }
    println!("a11 stats: 7 experiments byte-stable across reruns and workers 1/4");
    budget("a11", start, Duration::from_secs(120));
}

#[test]
fn all_subcommand_emits_one_csv_per_experiment_at_desk_scale() {
    let start = Instant::now();
    let dir = tempfile::tempdir().expect("tempdir");
    let base = dir.path().join("report.csv");
    let out = Command::new(env!("CARGO_BIN_EXE_itocheck"))
        .args(["all", "--format", "csv", "--out"])
        .arg(&base)
        .env_remove("ITOCHECK_THREADS")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    for name in [
        "dist-check",
        "survival-check",
        "tail-index",
        "divergence",
        "ito-check",
        "martingale-check",
        "gsigma",
    ] {
        let path = dir.path().join(format!("report.{name}.csv"));
        let text = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("missing per-experiment file {path:?}: {e}"));
        assert!(text.starts_with("section,key,index,value\n"), "{name} lacks header");
        assert!(text.contains(&format!("meta,name,,\"{name}\"")));
        assert!(text.contains("meta,pass,,true"), "{name} did not pass");
    }
    budget("all-subcommand", start, Duration::from_secs(600));
}
