//! Seeded simulation of standard Wiener paths on time grids.
//!
//! A [`SamplePath`] is a pure function of its grid and [`SeedSpec`]:
//! increments are independent normals with variance equal to the step
//! width, drawn from the stream the seed names. [`bridge_refine`] inserts
//! midpoints by the Brownian-bridge conditional law, so one logical path
//! can be re-examined at finer and finer resolution while keeping every
//! previously generated value bit-identical — the backbone of the
//! convergence study on the Ito-lemma residual.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::{rng_from, standard_normal, SeedSpec};

/// A strictly increasing time grid `0 = t₀ < t₁ < … < t_n = T`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    /// Validate and wrap an explicit list of times.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidGrid`] unless the list is nonempty, starts at
    /// exactly 0, is strictly increasing, and contains only finite values.
    pub fn from_times(times: Vec<f64>) -> Result<Self> {
        let first = *times.first().ok_or(Error::InvalidGrid("grid is empty"))?;
        if first != 0.0 {
            return Err(Error::InvalidGrid("grid must start at t = 0"));
        }
        for pair in times.windows(2) {
            if !(pair[1].is_finite() && pair[1] > pair[0]) {
                return Err(Error::InvalidGrid("grid must be finite and strictly increasing"));
            }
        }
        Ok(TimeGrid { times })
    }

    /// Uniform grid with `steps` equal intervals on `[0, horizon]`.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidGrid`] for `steps == 0` or a non-finite or
    /// non-positive horizon.
    pub fn uniform(horizon: f64, steps: usize) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::InvalidGrid("horizon must be positive and finite"));
        }
        if steps == 0 {
            return Err(Error::InvalidGrid("a uniform grid needs at least one step"));
        }
        let n = steps as f64;
        let times = (0..=steps)
            .map(|i| horizon * (i as f64) / n)
            .collect();
        Ok(TimeGrid { times })
    }

    /// The grid points, `t₀ = 0` through `t_n = horizon`.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Number of intervals (one less than the number of points).
    pub fn n_steps(&self) -> usize {
        self.times.len() - 1
    }

    /// Final time `T`.
    pub fn horizon(&self) -> f64 {
        *self.times.last().expect("grid is nonempty by construction")
    }
}

/// A Wiener path sampled on a grid, together with the seed that produced
/// it. Values are immutable after creation.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    grid: TimeGrid,
    values: Vec<f64>,
    seed: SeedSpec,
}

impl SamplePath {
    /// Assemble a path from explicit parts (used by tests and hand
    /// examples; simulation goes through [`sample_wiener`]).
    ///
    /// # Errors
    ///
    /// [`Error::InvalidPath`] unless lengths match, `w₀ = 0`, and all
    /// values are finite.
    pub fn from_parts(grid: TimeGrid, values: Vec<f64>, seed: SeedSpec) -> Result<Self> {
        if values.len() != grid.times().len() {
            return Err(Error::InvalidPath("value list must match grid length"));
        }
        if values[0] != 0.0 {
            return Err(Error::InvalidPath("a standard Wiener path starts at 0"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPath("path values must be finite"));
        }
        Ok(SamplePath { grid, values, seed })
    }

    /// The time grid.
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    /// The path values, aligned with [`TimeGrid::times`].
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The seed that generated (or labels) this path.
    pub fn seed(&self) -> SeedSpec {
        self.seed
    }

    /// Largest |w| along the path — the cheap escape test before feeding
    /// the path to range-limited integrands.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, &v| {
            let a = if v < 0.0 { -v } else { v };
            if a > m {
                a
            } else {
                m
            }
        })
    }
}

/// Simulate a standard Wiener path on `grid` from the stream `seed` names.
///
/// `w₀ = 0`; each increment is `sqrt(Δtᵢ)·zᵢ` with independent standard
/// normal `zᵢ` drawn in grid order, so the result is a deterministic
/// function of `(grid, seed)`.
pub fn sample_wiener(grid: &TimeGrid, seed: SeedSpec) -> SamplePath {
    let mut rng = rng_from(seed);
    let times = grid.times();
    let mut values = Vec::with_capacity(times.len());
    let mut w = 0.0;
    values.push(w);
    for pair in times.windows(2) {
        let dt = pair[1] - pair[0];
        w += libm::sqrt(dt) * standard_normal(&mut rng);
        values.push(w);
    }
    SamplePath {
        grid: grid.clone(),
        values,
        seed,
    }
}

/// Refine a path by inserting the midpoint of every interval, drawn from
/// the Brownian-bridge conditional law given the existing endpoints:
/// mean `(wᵢ + wᵢ₊₁)/2`, variance `δ₁·δ₂/Δt` (which is `Δt/4` on a uniform
/// step). Existing values are copied bit-identically; the fresh draws come
/// from `seed`, which must name a stream not used elsewhere.
///
/// # Errors
///
/// [`Error::InvalidGrid`] if an interval is too narrow for its midpoint to
/// be representable strictly between the endpoints.
pub fn bridge_refine(path: &SamplePath, seed: SeedSpec) -> Result<SamplePath> {
    let times = path.grid().times();
    let values = path.values();
    let mut rng = rng_from(seed);
    let mut new_times = Vec::with_capacity(2 * times.len() - 1);
    let mut new_values = Vec::with_capacity(2 * times.len() - 1);
    new_times.push(times[0]);
    new_values.push(values[0]);
    for i in 0..times.len() - 1 {
        let (t0, t1) = (times[i], times[i + 1]);
        let tm = 0.5 * (t0 + t1);
        if !(tm > t0 && tm < t1) {
            return Err(Error::InvalidGrid(
                "interval too narrow to hold a distinct midpoint",
            ));
        }
        let d1 = tm - t0;
        let d2 = t1 - tm;
        let sd = libm::sqrt(d1 * d2 / (t1 - t0));
        let mean = 0.5 * (values[i] + values[i + 1]);
        new_times.push(tm);
        new_values.push(mean + sd * standard_normal(&mut rng));
        new_times.push(t1);
        new_values.push(values[i + 1]);
    }
    Ok(SamplePath {
        grid: TimeGrid { times: new_times },
        values: new_values,
        seed,
    })
}

/// The scaled path `σ·W`: values multiplied by `σ`, grid and seed label
/// unchanged. (`σW(s)` has the same law as a Wiener path run at rate `σ²`,
/// which is how the σ-sweep experiments reuse one ensemble.)
///
/// # Errors
///
/// [`Error::NonPositiveArgument`] for `σ ≤ 0`; [`Error::NonFiniteInput`]
/// for NaN/infinite `σ`.
pub fn scale_path(path: &SamplePath, sigma: f64) -> Result<SamplePath> {
    if !sigma.is_finite() {
        return Err(Error::NonFiniteInput { value: sigma });
    }
    if sigma <= 0.0 {
        return Err(Error::NonPositiveArgument { value: sigma });
    }
    Ok(SamplePath {
        grid: path.grid.clone(),
        values: path.values.iter().map(|&w| sigma * w).collect(),
        seed: path.seed,
    })
}
