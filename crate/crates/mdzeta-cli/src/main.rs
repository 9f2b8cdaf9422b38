//! mdzeta: evaluate multiple Dedekind zeta values by nested series and by
//! membrane quadrature, emit divisor catalogs, and run identity checks.
//!
//! Exit codes: 0 success, 2 configuration error, 3 domain or validation
//! error, 4 comparison or check failure, 5 budget exceeded.

use clap::{Parser, Subcommand};
use mdzeta::checks::{self, Suite};
use mdzeta_cli::config::{self, Method, OutputFormat, Overrides};
use mdzeta_cli::driver::{self, CliError};
use mdzeta_cli::report::Report;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "mdzeta",
    version,
    about = "Multiple Dedekind zeta values over totally positive cones"
)]
struct Cli {
    /// TOML job configuration; defaults to the rational demo job.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Working precision for field embeddings and accumulators.
    #[arg(long, global = true, value_name = "BITS")]
    precision_bits: Option<u32>,
    /// Series truncation: coefficients range over 1..=BOUND.
    #[arg(long, global = true, value_name = "BOUND")]
    coeff_bound: Option<u64>,
    /// Abort the series when the estimated term count exceeds this.
    #[arg(long, global = true, value_name = "TERMS")]
    term_budget: Option<u64>,
    /// Quadrature scheme.
    #[arg(long, global = true, value_parser = ["nested-ordered-quadrature", "quasi-random"])]
    scheme: Option<String>,
    /// Quadrature points per reduced axis.
    #[arg(long, global = true, value_name = "N")]
    points: Option<u32>,
    /// Truncation of each unbounded integration direction.
    #[arg(long, global = true, value_name = "T")]
    cutoff: Option<f64>,
    /// Sample count for the quasi-random scheme.
    #[arg(long, global = true, value_name = "N")]
    samples: Option<u64>,
    /// Cap on worker threads; default is the available cores.
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,
    /// Report format.
    #[arg(long, global = true, value_parser = ["json", "csv"])]
    output: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the nested series only.
    ComputeSeries,
    /// Evaluate the membrane integral only.
    ComputeIntegral,
    /// Evaluate the configured method(s); default both, with comparison.
    Compute,
    /// Emit the boundary-divisor catalog as JSON.
    Catalog,
    /// Run a built-in identity check suite.
    Check {
        #[arg(value_parser = checks::SUITE_NAMES)]
        suite: String,
    },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    let mut cfg = match config::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("configuration error: {msg}");
            return 2;
        }
    };
    let overrides = Overrides {
        precision_bits: cli.precision_bits,
        coeff_bound: cli.coeff_bound,
        term_budget: cli.term_budget,
        scheme: cli.scheme.as_deref().and_then(config::parse_scheme),
        points: cli.points,
        cutoff: cli.cutoff,
        samples: cli.samples,
        workers: cli.workers,
        output: cli.output.as_deref().map(|o| match o {
            "csv" => OutputFormat::Csv,
            _ => OutputFormat::Json,
        }),
        out_path: cli.out.clone(),
    };
    config::apply_overrides(&mut cfg, &overrides);

    if let Some(workers) = cfg.workers {
        // Ignore failure: the global pool can only be set once.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build_global();
    }

    match cli.cmd {
        Cmd::ComputeSeries => compute(&cfg, Method::Series),
        Cmd::ComputeIntegral => compute(&cfg, Method::Integral),
        Cmd::Compute => compute(&cfg, cfg.method),
        Cmd::Catalog => match driver::catalog_json(&cfg) {
            Ok(text) => emit(&cfg, &text),
            Err(e) => fail(&e),
        },
        Cmd::Check { suite } => {
            let suite = Suite::parse(&suite).expect("clap validated the name");
            let reports = checks::run(suite);
            let text =
                serde_json::to_string_pretty(&reports).expect("suite reports serialize");
            let code = emit(&cfg, &text);
            if code != 0 {
                return code;
            }
            if checks::all_passed(&reports) {
                0
            } else {
                4
            }
        }
    }
}

fn compute(cfg: &mdzeta_cli::config::JobConfig, method: Method) -> i32 {
    match driver::execute(cfg, method) {
        Ok(report) => {
            let text = match cfg.output {
                OutputFormat::Json => report.to_json(),
                OutputFormat::Csv => report.to_csv(),
            };
            let code = emit(cfg, &text);
            if code != 0 {
                return code;
            }
            if report.passed() {
                0
            } else {
                summarize_failure(&report);
                4
            }
        }
        Err(e) => fail(&e),
    }
}

fn summarize_failure(report: &Report) {
    if let Some(c) = &report.comparison {
        eprintln!(
            "comparison failed: |series - integral| = {:e} exceeds combined bound {:e}",
            c.abs_diff, c.combined_bound
        );
    }
}

fn emit(cfg: &mdzeta_cli::config::JobConfig, text: &str) -> i32 {
    match &cfg.out_path {
        None => {
            println!("{text}");
            0
        }
        Some(path) => match std::fs::write(path, text.as_bytes()) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("cannot write {}: {e}", path.display());
                2
            }
        },
    }
}

fn fail(e: &CliError) -> i32 {
    eprintln!("error: {e}");
    e.exit_code()
}
