//! Experiment runners and the shared deterministic execution machinery.
//!
//! # Reproducibility contract
//!
//! Every experiment must produce byte-identical reports (modulo the
//! documented `wall_time_s` mask) across runs, across thread counts, and
//! across `--batch` settings. Three rules enforce this:
//!
//! 1. **Fixed stream plan.** Every random draw belongs to a counter stream
//!    whose index is a pure function of the experiment, the σ index, and
//!    the sample/path index — never of the scheduler. Direct-draw
//!    experiments consume samples in fixed chunks of [`CHUNK`] draws, one
//!    stream per chunk; path experiments use one stream per path (with a
//!    sub-block per refinement level where needed). Experiment stream
//!    spaces are separated by multiples of 2⁴⁸ so distinct experiments
//!    sharing a root seed never overlap.
//! 2. **Ordered reduction.** Parallel work units are collected in index
//!    order and reduced sequentially, so floating-point accumulation order
//!    is fixed.
//! 3. **Scheduling-only knobs.** `--batch` and the `ITOCHECK_THREADS`
//!    worker cap tune how work units are grouped onto threads; they never
//!    enter the stream plan or the reduction order.

use itocheck_core::kahan::NeumaierSum;
use rayon::prelude::*;

pub mod dist;
pub mod divergence;
pub mod gsigma;
pub mod ito;
pub mod martingale;
pub mod survival;
pub mod tail_index;

/// Draws per sample-chunk stream in direct-draw experiments. Fixed: the
/// chunk→stream map must not depend on `--batch` or thread count.
pub const CHUNK: usize = 4096;

/// Stream-space stride between experiments sharing a root seed.
pub const STREAM_BLOCK: u64 = 1 << 48;

/// Stream bases, one disjoint 2⁴⁸-wide block per experiment family.
pub const DIST_BASE: u64 = 0;
pub const SURVIVAL_BASE: u64 = STREAM_BLOCK;
pub const TAIL_BASE: u64 = 2 * STREAM_BLOCK;
pub const DIVERGENCE_BASE: u64 = 3 * STREAM_BLOCK;
pub const ITO_BASE: u64 = 4 * STREAM_BLOCK;
pub const MARTINGALE_BASE: u64 = 5 * STREAM_BLOCK;

/// Absolute path bound beyond which a simulated path is excluded and
/// tallied rather than evaluated; |W| past this is far outside the mass
/// of every horizon used here and keeps all transform calls in range.
pub const ESCAPE_ABS: f64 = 8.0;

/// Stream index for chunk `chunk` of the σ-slot `sigma_idx` in the
/// experiment block starting at `base`.
pub fn chunk_stream(base: u64, sigma_idx: usize, chunk: usize) -> u64 {
    base + (sigma_idx as u64) * (1 << 32) + chunk as u64
}

/// Maps `f` over chunk indices covering `n_items` samples, in parallel,
/// returning results in chunk order. `f` receives the chunk index and the
/// sample range it owns. `batch` only adjusts the minimum number of
/// chunks a thread takes at once.
pub fn par_chunk_map<T: Send, F>(n_items: usize, batch: usize, f: F) -> Vec<T>
where
    F: Fn(usize, std::ops::Range<usize>) -> T + Sync + Send,
{
    let n_chunks = n_items.div_ceil(CHUNK);
    let min_len = batch.div_ceil(CHUNK).max(1);
    (0..n_chunks)
        .into_par_iter()
        .with_min_len(min_len)
        .map(|c| {
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(n_items);
            f(c, lo..hi)
        })
        .collect()
}

/// Maps `f` over `0..n` in parallel, returning results in index order.
/// Used for per-path work; `min_len` groups paths onto threads.
pub fn par_index_map<T: Send, F>(n: usize, min_len: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n)
        .into_par_iter()
        .with_min_len(min_len.max(1))
        .map(f)
        .collect()
}

/// Mean and standard error of a slice via compensated accumulation.
/// Returns `(mean, sd, se)`; the sd uses the n−1 divisor.
pub fn mean_sd_se(values: &[f64]) -> (f64, f64, f64) {
    let n = values.len();
    assert!(n >= 2, "need at least two values");
    let mut acc = NeumaierSum::new();
    for &v in values {
        acc.add(v);
    }
    let mean = acc.sum() / n as f64;
    let mut sq = NeumaierSum::new();
    for &v in values {
        let d = v - mean;
        sq.add(d * d);
    }
    let sd = (sq.sum() / (n - 1) as f64).sqrt();
    (mean, sd, sd / (n as f64).sqrt())
}

/// Median of a slice (averages the middle pair for even lengths).
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty());
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2);
    let n = xs.len() as f64;
    let x_bar = xs.iter().sum::<f64>() / n;
    let y_bar = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        num += (x - x_bar) * (y - y_bar);
        den += (x - x_bar) * (x - x_bar);
    }
    num / den
}

/// Standard error of an empirical proportion `p_hat` from `n` trials.
pub fn binomial_se(p_hat: f64, n: usize) -> f64 {
    (p_hat * (1.0 - p_hat) / n as f64).sqrt()
}

/// Paths per parallel work unit, sized so one unit costs roughly `batch`
/// grid-node evaluations. Scheduling only — never affects results.
pub fn paths_per_unit(batch: usize, steps_per_path: usize) -> usize {
    (batch / steps_per_path.max(1)).max(1)
}
