//! Tabular subcommands: each builds rows that serialize to CSV or JSON.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use qhl_core::arith::Factorization;
use qhl_core::expsums::{sq_closed, sq_closed_factored, AqOracle, DiagonalForm, FACTORED_LIMIT};
use qhl_core::modforms::{build_tau_table, NormalizedCoefficients, TauTable};
use qhl_core::quadric::{weighted_count, weighted_counts, Method, SmoothWeight, WeightKind, Weights};
use qhl_core::report::{self, Format, VerificationReport};
use qhl_core::{Complex64, Error, Result};

use crate::config::RunConfig;
use crate::suites::load_tau;

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |e| Error::Io { path: path.to_path_buf(), message: e.to_string() }
}

/// Rows as CSV (header + one record per row) or as `{"rows": [...]}`.
pub fn render_rows<R: Serialize>(rows: &[R], format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r).map_err(|e| Error::Consistency(format!("CSV encoding: {e}")))?;
            }
            w.into_inner().map_err(|e| Error::Consistency(format!("CSV encoding: {e}")))
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Rows<'a, R> {
                rows: &'a [R],
            }
            let mut out = serde_json::to_vec_pretty(&Rows { rows }).map_err(|e| Error::Consistency(format!("JSON encoding: {e}")))?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

/// Write to `path`, or to stdout when none is given.
pub fn write_out(bytes: &[u8], path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(io_err(p)),
        None => {
            let stdout = Path::new("<stdout>");
            let mut lock = std::io::stdout().lock();
            lock.write_all(bytes).and_then(|_| lock.flush()).map_err(io_err(stdout))
        }
    }
}

pub fn emit_reports(reports: &[VerificationReport], cfg: &RunConfig) -> Result<()> {
    match &cfg.out {
        Some(p) => report::emit(reports, cfg.format, p),
        None => write_out(&report::render(reports, cfg.format)?, None),
    }
}

pub fn emit_rows<R: Serialize>(rows: &[R], cfg: &RunConfig) -> Result<()> {
    write_out(&render_rows(rows, cfg.format)?, cfg.out.as_deref())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TauRow {
    pub n: usize,
    pub tau: i128,
    pub lambda: f64,
}

pub fn tau_rows(table: &TauTable) -> Vec<TauRow> {
    let lam = NormalizedCoefficients::<f64>::from_table(table);
    table.values().iter().zip(1..).map(|(&tau, n)| TauRow { n, tau, lambda: lam.at(n) }).collect()
}

pub fn tau_command(cfg: &RunConfig) -> Result<Vec<TauRow>> {
    Ok(tau_rows(&load_tau(cfg, cfg.tau_limit)?))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountRow {
    pub form: String,
    #[serde(rename = "X")]
    pub x: u64,
    pub zero_count: u64,
    #[serde(rename = "N_unit")]
    pub n_unit: Option<f64>,
    #[serde(rename = "N_lambda")]
    pub n_lambda: Option<f64>,
    #[serde(rename = "N_abslambda")]
    pub n_abs_lambda: Option<f64>,
    pub ratio: Option<f64>,
    pub seconds: f64,
}

/// Weighted zero counts over every form and scale. With `weight` set, only
/// that column is filled.
pub fn count_command(cfg: &RunConfig, method: Method, weight: Option<WeightKind>) -> Result<Vec<CountRow>> {
    let x_max = *cfg.x_list.last().ok_or_else(|| Error::Usage("empty x_list".into()))?;
    let need = (2 * x_max as usize).max(cfg.tau_limit);
    let lam = NormalizedCoefficients::<f64>::from_table(&load_tau(cfg, need)?);
    let w = SmoothWeight::<f64>::default();
    let mut rows = Vec::new();
    for f in &cfg.forms {
        for &x in &cfg.x_list {
            let row = match weight {
                None => {
                    let c = weighted_counts(f, x, &lam, &w, method)?;
                    let ratio = if c.abs_lambda > 0.0 { c.lambda.abs() / c.abs_lambda } else { 0.0 };
                    CountRow {
                        form: f.to_string(),
                        x,
                        zero_count: c.zero_count,
                        n_unit: Some(c.unit),
                        n_lambda: Some(c.lambda),
                        n_abs_lambda: Some(c.abs_lambda),
                        ratio: Some(ratio),
                        seconds: c.elapsed.as_secs_f64(),
                    }
                }
                Some(kind) => {
                    let weights = match kind {
                        WeightKind::Unit => Weights::Unit,
                        WeightKind::Lambda => Weights::Lambda(&lam),
                        WeightKind::AbsLambda => Weights::AbsLambda(&lam),
                    };
                    let c = weighted_count(f, x, weights, &w, method)?;
                    let mut row = CountRow {
                        form: f.to_string(),
                        x,
                        zero_count: c.zero_count,
                        n_unit: None,
                        n_lambda: None,
                        n_abs_lambda: None,
                        ratio: None,
                        seconds: c.elapsed.as_secs_f64(),
                    };
                    *match kind {
                        WeightKind::Unit => &mut row.n_unit,
                        WeightKind::Lambda => &mut row.n_lambda,
                        WeightKind::AbsLambda => &mut row.n_abs_lambda,
                    } = Some(c.weighted_value);
                    row
                }
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpsumRow {
    pub form: String,
    pub q: u64,
    pub n: i128,
    pub re: f64,
    pub im: f64,
    pub oracle_re: Option<f64>,
    pub oracle_im: Option<f64>,
    pub abs_error: Option<f64>,
}

/// `S_q(n)` from the closed form, with the brute oracle alongside when `q`
/// is small enough.
pub fn expsum_command(form: &DiagonalForm, q: u64, ns: &[i128]) -> Result<Vec<ExpsumRow>> {
    let oracle = if q <= FACTORED_LIMIT { Some(AqOracle::<f64>::new(form, q, [0, 0, 0])?) } else { None };
    ns.iter()
        .map(|&n| {
            let z: Complex64 = sq_closed(form, q, n)?;
            let o = oracle.as_ref().map(|o| o.eval(n));
            Ok(ExpsumRow {
                form: form.to_string(),
                q,
                n,
                re: z.re,
                im: z.im,
                oracle_re: o.map(|o| o.re),
                oracle_im: o.map(|o| o.im),
                abs_error: o.map(|o| (o - z).norm()),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub task: String,
    pub parameters: String,
    pub seconds: f64,
}

fn timed(rows: &mut Vec<BenchRow>, task: &str, parameters: String, f: impl FnOnce() -> Result<()>) -> Result<()> {
    let start = Instant::now();
    f()?;
    rows.push(BenchRow { task: task.into(), parameters, seconds: start.elapsed().as_secs_f64() });
    Ok(())
}

/// Wall-clock timings of the heavy kernels.
pub fn bench_command(cfg: &RunConfig) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    timed(&mut rows, "tau_table", format!("N={}", cfg.tau_limit), || build_tau_table(cfg.tau_limit).map(|_| ()))?;

    const CALLS: i128 = 10_000;
    let fq = Factorization::from_entries([(3, 5), (5, 4), (7, 3), (13, 2)])?;
    for f in cfg.forms.iter().filter(|f| f.satisfies_a0(&fq)) {
        timed(&mut rows, "sq_closed_per_call", format!("F={f} q={}", fq.value()), || {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..CALLS {
                let z: Complex64 = sq_closed_factored(f, &fq, 1 + i * 7_919_993)?;
                acc += z;
            }
            std::hint::black_box(acc);
            Ok(())
        })?;
        rows.last_mut().expect("pushed").seconds /= CALLS as f64;
    }

    let w = SmoothWeight::<f64>::default();
    for f in cfg.forms.iter().filter(|f| !f.is_definite()) {
        for &x in &cfg.x_list {
            timed(&mut rows, "enumeration", format!("F={f} X={x}"), || {
                weighted_count(f, x, Weights::Unit, &w, Method::MeetInMiddle).map(|_| ())
            })?;
        }
    }
    Ok(rows)
}
