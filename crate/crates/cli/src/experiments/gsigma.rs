//! Monotonicity of the squared-transform law in the scale parameter.
//!
//! `G_σ(y)` is the distribution function of `h(σW(1))²`; as σ grows the
//! mass escapes to infinity, so at every fixed `y` the grid of values
//! must decrease strictly in σ and approach zero. Pure closed-form
//! evaluation — no sampling — with an exact cross-check of the σ = 1
//! column against the direct survival formula.

use itocheck_core::transform::{gsigma_cdf, t2_squared_survival};

use crate::config::{ConfigEcho, ConfigError, Overrides};
use crate::report::ExperimentReport;

/// Evaluation abscissae for the squared transform.
const Y_GRID: [(&str, f64); 3] = [("0.1", 0.1), ("1", 1.0), ("10", 10.0)];

/// Agreement tolerance for the σ = 1 closed-form cross-check.
const SIGMA1_TOL: f64 = 1e-10;

pub fn run(overrides: &Overrides) -> Result<ExperimentReport, ConfigError> {
    overrides.validate()?;
    let sigmas: Vec<f64> = if overrides.sigmas.is_empty() {
        vec![1.0, 2.0, 4.0, 8.0, 100.0]
    } else {
        overrides.sigmas.clone()
    };
    if sigmas.len() < 2 {
        return Err(ConfigError(
            "gsigma needs at least two --sigma values to test monotonicity".into(),
        ));
    }
    if sigmas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ConfigError(
            "gsigma requires strictly increasing --sigma values".into(),
        ));
    }
    let seed = overrides.seed;

    let config = ConfigEcho::new(seed).reals("sigmas", &sigmas).finish();
    let mut report = ExperimentReport::new("gsigma", config);
    let start = std::time::Instant::now();

    report.series("sigmas", sigmas.clone());
    report.series("y_grid", Y_GRID.iter().map(|&(_, y)| y).collect());
    for &(label, y) in &Y_GRID {
        let row: Vec<f64> = sigmas
            .iter()
            .map(|&s| gsigma_cdf(y, s).expect("grid point in range"))
            .collect();
        let strictly_decreasing = row.windows(2).all(|w| w[1] < w[0]);
        report.check(&format!("strict_decrease_y_{label}"), strictly_decreasing);
        report.series(&format!("gsigma_y_{label}"), row);
    }

    if sigmas.contains(&100.0) {
        let g = gsigma_cdf(1.0, 100.0).expect("grid point in range");
        report.scalar("gsigma_1_100", g);
        report.scalar("gsigma_1_100_bound", 0.01);
        report.check("wide_sigma_mass_escapes", g < 0.01);
    }
    if sigmas.contains(&1.0) {
        let worst = Y_GRID
            .iter()
            .map(|&(_, y)| {
                let direct = 1.0 - t2_squared_survival(y).expect("positive y");
                (gsigma_cdf(y, 1.0).expect("grid point in range") - direct).abs()
            })
            .fold(0.0f64, f64::max);
        report.scalar("sigma1_closed_form_dev", worst);
        report.scalar("sigma1_closed_form_tol", SIGMA1_TOL);
        report.check("sigma1_matches_closed_form", worst <= SIGMA1_TOL);
    }
    report.note(
        "rows are G_sigma(y) per y across the sigma sweep; the law of the squared \
         transform thins at every fixed y as sigma widens",
    );
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_passes_all_gates() {
        let r = run(&Overrides::default()).unwrap();
        assert!(r.pass, "checks: {:?}", r.checks);
        assert!(r.scalars["gsigma_1_100"] < 0.01);
        assert!(r.scalars["sigma1_closed_form_dev"] <= 1e-10);
        // Frozen closed form: G_1(1) = √(1/3).
        let row = &r.series["gsigma_y_1"];
        assert!((row[0] - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn custom_sweep_skips_absent_columns() {
        let o = Overrides { sigmas: vec![2.0, 3.0], ..Overrides::default() };
        let r = run(&o).unwrap();
        assert!(r.pass);
        assert!(!r.scalars.contains_key("gsigma_1_100"));
        assert!(!r.checks.contains_key("sigma1_matches_closed_form"));
    }

    #[test]
    fn unsorted_or_single_sigma_rejected() {
        let mut o = Overrides { sigmas: vec![4.0, 2.0], ..Overrides::default() };
        assert!(run(&o).is_err());
        o.sigmas = vec![2.0];
        assert!(run(&o).is_err());
    }
}
