use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qhl_cli::commands::{self, emit_reports, emit_rows};
use qhl_cli::config::{parse_list, RunConfig};
use qhl_cli::suites::oscint_rows;
use qhl_cli::{run_suite, with_jobs};
use qhl_core::expsums::DiagonalForm;
use qhl_core::quadric::{Method, WeightKind};
use qhl_core::{Error, Result};

#[derive(Parser)]
#[command(name = "qhl", version, about = "Verification runner for quadric exponential sums and Hecke eigenvalue counts")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// key = value configuration file; flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Form coefficients A1,A2,A3,A4 (repeatable)
    #[arg(long = "form", global = true, allow_hyphen_values = true)]
    forms: Vec<DiagonalForm>,
    /// Comma-separated list of scales X
    #[arg(long, global = true)]
    x_list: Option<String>,
    #[arg(long, global = true)]
    tau_limit: Option<usize>,
    /// Multiplier applied to every tolerance
    #[arg(long, global = true)]
    tol_mult: Option<f64>,
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (default: stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long, global = true)]
    format: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and emit their reports
    Verify {
        /// expsums, modforms, quadric, oscint or all
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Evaluate S_q(n) in closed form, next to the brute oracle when feasible
    Expsum {
        #[arg(long)]
        q: u64,
        /// Comma-separated n values (default 1..=min(q, 64))
        #[arg(long, allow_hyphen_values = true)]
        n_list: Option<String>,
    },
    /// Emit n, τ(n), λ(n)
    Tau,
    /// Weighted zero counts on the quadric
    Count {
        /// unit, lambda or abs_lambda (default: all three)
        #[arg(long)]
        weight: Option<WeightKind>,
        /// naive or meet_in_middle
        #[arg(long, default_value = "meet_in_middle")]
        method: Method,
    },
    /// Summation-formula, Bessel, dissection and phase-integral checks
    Oscint,
    /// Time the heavy kernels
    Bench,
}

fn build_config(g: &Global) -> Result<RunConfig> {
    let mut cfg = match &g.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if !g.forms.is_empty() {
        cfg.forms = g.forms.clone();
    }
    if let Some(x) = &g.x_list {
        cfg.x_list = parse_list("--x-list", x)?;
    }
    if let Some(v) = g.tau_limit {
        cfg.tau_limit = v;
    }
    if let Some(v) = g.tol_mult {
        cfg.tol_mult = v;
    }
    if let Some(v) = g.seed {
        cfg.seed = v;
    }
    if g.jobs.is_some() {
        cfg.jobs = g.jobs;
    }
    if let Some(v) = &g.out {
        cfg.out = Some(v.clone());
    }
    if let Some(v) = &g.format {
        cfg.format = v.parse()?;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// `Ok(true)` when every check passed.
fn run(cli: Cli) -> Result<bool> {
    let cfg = build_config(&cli.global)?;
    with_jobs(cfg.jobs, || -> Result<bool> {
        match cli.command {
            Command::Verify { suite } => {
                let reports = run_suite(&suite, &cfg)?;
                emit_reports(&reports, &cfg)?;
                for r in &reports {
                    eprintln!(
                        "{}: {} cases, {} failures, max error/tolerance {:.3e}",
                        r.suite,
                        r.cases,
                        r.failures.len(),
                        r.max_error
                    );
                }
                Ok(reports.iter().all(|r| r.passed()))
            }
            Command::Expsum { q, n_list } => {
                let ns: Vec<i128> = match n_list {
                    Some(s) => parse_list("--n-list", &s)?,
                    None => (1..=q.min(64) as i128).collect(),
                };
                let mut rows = Vec::new();
                for f in &cfg.forms {
                    rows.extend(commands::expsum_command(f, q, &ns)?);
                }
                emit_rows(&rows, &cfg)?;
                Ok(true)
            }
            Command::Tau => {
                emit_rows(&commands::tau_command(&cfg)?, &cfg)?;
                Ok(true)
            }
            Command::Count { weight, method } => {
                emit_rows(&commands::count_command(&cfg, method, weight)?, &cfg)?;
                Ok(true)
            }
            Command::Oscint => {
                let table = qhl_cli::suites::load_tau(&cfg, cfg.tau_limit)?;
                let rows = oscint_rows(&cfg, &table)?;
                emit_rows(&rows, &cfg)?;
                Ok(rows.iter().all(|r| r.pass))
            }
            Command::Bench => {
                emit_rows(&commands::bench_command(&cfg)?, &cfg)?;
                Ok(true)
            }
        }
    })?
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qhl: {e}");
            ExitCode::from(match e {
                Error::Usage(_) => 2,
                _ => 3,
            })
        }
    }
}
