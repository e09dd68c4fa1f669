//! Command-line front end: one subcommand per experiment plus `all`.
//!
//! Exit codes: 0 when every gated check in the invoked experiments
//! passes, 1 when a check fails, 2 on usage or configuration errors.
//! Reports go to standard output as JSON unless `--format`/`--out` say
//! otherwise. Setting `ITOCHECK_THREADS` caps the worker count; reports
//! are byte-identical across worker counts and runs, except for the
//! `wall_time_s` field.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use itocheck::config::{ConfigError, Overrides};
use itocheck::experiments;
use itocheck::report::{write_reports, ExperimentReport, Format};

#[derive(Parser)]
#[command(
    name = "itocheck",
    version,
    about = "Stochastic-calculus checks for the normal-to-heavy-tail transform",
    after_help = "Overrides apply to every invoked experiment; experiments with fixed \
                  parameters (e.g. the ito-check resolution ladder) reject overrides \
                  they cannot honor."
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Sample count for draw-based experiments.
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Path count for path-based experiments.
    #[arg(long, global = true)]
    paths: Option<usize>,

    /// Steps per path (where the experiment does not fix its own grid).
    #[arg(long, global = true)]
    steps: Option<usize>,

    /// Time horizon T (where the experiment does not fix its own).
    #[arg(long, global = true)]
    horizon: Option<f64>,

    /// Scale parameter sweep; repeat the flag for several values.
    #[arg(long = "sigma", global = true)]
    sigma: Vec<f64>,

    /// Root seed; every random stream in a run derives from it.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Hill tail-window override (default: n^(2/3)).
    #[arg(long, global = true)]
    k: Option<usize>,

    /// Scheduling granularity (samples per work unit); results are
    /// independent of this value.
    #[arg(long, global = true)]
    batch: Option<usize>,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,

    /// Output path (default: standard output). With `all --format csv`,
    /// the experiment name is inserted before the extension.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// KS test: h of a standard normal follows the heavy-tailed law.
    DistCheck,
    /// Empirical survival of h(sigma Z)^2 against the closed form.
    SurvivalCheck,
    /// Hill tail-index sweep with finite/infinite-mean verdicts.
    TailIndex,
    /// Running-mean divergence of the time integral of h(W)^2.
    Divergence,
    /// Chain-rule residual decay along a dyadic refinement ladder.
    ItoCheck,
    /// Mean-zero check for left-point stochastic sums.
    MartingaleCheck,
    /// Monotonicity of the squared-transform law in sigma.
    Gsigma,
    /// Every experiment above, in a fixed order.
    All,
}

#[derive(ValueEnum, Clone, Copy)]
enum FormatArg {
    Json,
    Csv,
}

fn overrides_from(cli: &Cli) -> Overrides {
    Overrides {
        n: cli.n,
        paths: cli.paths,
        steps: cli.steps,
        horizon: cli.horizon,
        sigmas: cli.sigma.clone(),
        seed: cli.seed,
        k: cli.k,
        batch: cli.batch,
    }
}

fn run_selected(cmd: Cmd, o: &Overrides) -> Result<Vec<ExperimentReport>, ConfigError> {
    let single = |r: Result<ExperimentReport, ConfigError>| r.map(|rep| vec![rep]);
    match cmd {
        Cmd::DistCheck => single(experiments::dist::run(o)),
        Cmd::SurvivalCheck => single(experiments::survival::run(o)),
        Cmd::TailIndex => single(experiments::tail_index::run(o)),
        Cmd::Divergence => single(experiments::divergence::run(o)),
        Cmd::ItoCheck => single(experiments::ito::run(o)),
        Cmd::MartingaleCheck => single(experiments::martingale::run(o)),
        Cmd::Gsigma => single(experiments::gsigma::run(o)),
        Cmd::All => Ok(vec![
            experiments::dist::run(o)?,
            experiments::survival::run(o)?,
            experiments::tail_index::run(o)?,
            experiments::divergence::run(o)?,
            experiments::ito::run(o)?,
            experiments::martingale::run(o)?,
            experiments::gsigma::run(o)?,
        ]),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Ok(raw) = std::env::var("ITOCHECK_THREADS") {
        let threads: usize = match raw.parse() {
            Ok(t) if t >= 1 => t,
            _ => {
                eprintln!("config error: ITOCHECK_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        };
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .expect("worker pool configured before first use");
    }

    let overrides = overrides_from(&cli);
    let reports = match run_selected(cli.command, &overrides) {
        Ok(reports) => reports,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };

    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    if let Err(e) = write_reports(&reports, format, cli.out.as_deref()) {
        eprintln!("config error: cannot write report: {e}");
        return ExitCode::from(2);
    }

    if reports.iter().all(|r| r.pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
