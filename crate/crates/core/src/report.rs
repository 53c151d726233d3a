//! Verification reports and their CSV / JSON serialization.

use std::fmt::Display;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Duration;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One failed comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub parameters: String,
    pub expected: String,
    pub got: String,
    pub error: f64,
    pub tolerance: f64,
}

/// A named diagnostic value recorded alongside the checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub name: String,
    pub value: f64,
}

/// Outcome of a batch of oracle comparisons.
///
/// `max_error` is the largest `error / tolerance` seen, so the report passes
/// exactly when it is at most 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub cases: u64,
    pub failures: Vec<Failure>,
    pub max_error: f64,
    pub metrics: Vec<Metric>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ns: Option<u64>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        Self { suite: suite.into(), cases: 0, failures: Vec::new(), max_error: 0.0, metrics: Vec::new(), elapsed_ns: None }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Record a comparison with absolute `error` against `tolerance`.
    pub fn check(&mut self, parameters: impl Display, expected: impl Display, got: impl Display, error: f64, tolerance: f64) -> bool {
        self.cases += 1;
        let ratio = if error == 0.0 { 0.0 } else { error / tolerance };
        let ok = ratio.is_finite() && ratio <= 1.0;
        if ratio.is_finite() {
            self.max_error = self.max_error.max(ratio);
        } else {
            self.max_error = f64::MAX;
        }
        if !ok {
            self.failures.push(Failure {
                parameters: parameters.to_string(),
                expected: expected.to_string(),
                got: got.to_string(),
                error: if error.is_finite() { error } else { f64::MAX },
                tolerance,
            });
        }
        ok
    }

    pub fn check_complex(&mut self, parameters: impl Display, expected: Complex<f64>, got: Complex<f64>, tolerance: f64) -> bool {
        let err = (expected - got).norm();
        self.check(parameters, fmt_c(expected), fmt_c(got), if err.is_nan() { f64::INFINITY } else { err }, tolerance)
    }

    /// A pass/fail predicate with no error magnitude.
    pub fn check_that(&mut self, parameters: impl Display, ok: bool, expected: impl Display, got: impl Display) -> bool {
        self.check(parameters, expected, got, if ok { 0.0 } else { 2.0 }, 1.0)
    }

    pub fn metric(&mut self, name: impl Into<String>, value: f64) {
        self.metrics.push(Metric { name: name.into(), value });
    }

    pub fn metric_value(&self, name: &str) -> Option<f64> {
        self.metrics.iter().rev().find(|m| m.name == name).map(|m| m.value)
    }

    /// Fold another report's cases into this one.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.cases += other.cases;
        self.max_error = self.max_error.max(other.max_error);
        let prefix = other.suite;
        self.failures.extend(other.failures.into_iter().map(|mut f| {
            f.parameters = format!("{prefix}: {}", f.parameters);
            f
        }));
        self.metrics.extend(other.metrics.into_iter().map(|m| Metric { name: format!("{prefix}.{}", m.name), value: m.value }));
    }

    pub fn set_elapsed(&mut self, d: Duration) {
        self.elapsed_ns = Some(d.as_nanos() as u64);
    }
}

pub fn fmt_c(z: Complex<f64>) -> String {
    format!("{}{:+}i", z.re, z.im)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(Error::Usage(format!("unknown format {s:?} (expected csv or json)"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Bundle {
    reports: Vec<VerificationReport>,
}

const CSV_HEADER: [&str; 11] =
    ["kind", "suite", "cases", "max_error", "elapsed_ns", "parameters", "expected", "got", "error", "tolerance", "value"];

/// Serialize reports to bytes.
pub fn render(reports: &[VerificationReport], format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(&Bundle { reports: reports.to_vec() })
                .map_err(|e| Error::Consistency(format!("JSON encoding: {e}")))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
            let enc = |e: csv::Error| Error::Consistency(format!("CSV encoding: {e}"));
            w.write_record(CSV_HEADER).map_err(enc)?;
            for r in reports {
                let el = r.elapsed_ns.map(|x| x.to_string()).unwrap_or_default();
                let (cases, maxe) = (r.cases.to_string(), r.max_error.to_string());
                w.write_record(["summary", &r.suite, &cases, &maxe, &el, "", "", "", "", "", ""]).map_err(enc)?;
                for f in &r.failures {
                    let (e, t) = (f.error.to_string(), f.tolerance.to_string());
                    w.write_record(["failure", &r.suite, "", "", "", &f.parameters, &f.expected, &f.got, &e, &t, ""])
                        .map_err(enc)?;
                }
                for m in &r.metrics {
                    let v = m.value.to_string();
                    w.write_record(["metric", &r.suite, "", "", "", &m.name, "", "", "", "", &v]).map_err(enc)?;
                }
            }
            w.into_inner().map_err(|e| Error::Consistency(format!("CSV encoding: {e}")))
        }
    }
}

/// Parse what [`render`] produced.
pub fn parse(bytes: &[u8], format: Format) -> Result<Vec<VerificationReport>> {
    let bad = |m: String| Error::Consistency(format!("report parse: {m}"));
    match format {
        Format::Json => serde_json::from_slice::<Bundle>(bytes).map(|b| b.reports).map_err(|e| bad(e.to_string())),
        Format::Csv => {
            let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(bytes);
            let mut out: Vec<VerificationReport> = Vec::new();
            for rec in rd.records() {
                let rec = rec.map_err(|e| bad(e.to_string()))?;
                let f = |i: usize| rec.get(i).unwrap_or("").to_string();
                let num = |i: usize| f(i).parse::<f64>().map_err(|e| bad(format!("column {i}: {e}")));
                match rec.get(0) {
                    Some("summary") => {
                        let mut r = VerificationReport::new(f(1));
                        r.cases = f(2).parse().map_err(|e| bad(format!("cases: {e}")))?;
                        r.max_error = num(3)?;
                        let el = f(4);
                        r.elapsed_ns = if el.is_empty() { None } else { Some(el.parse().map_err(|e| bad(format!("elapsed: {e}")))?) };
                        out.push(r);
                    }
                    Some("failure") => {
                        let r = out.last_mut().ok_or_else(|| bad("failure row before summary".into()))?;
                        r.failures.push(Failure { parameters: f(5), expected: f(6), got: f(7), error: num(8)?, tolerance: num(9)? });
                    }
                    Some("metric") => {
                        let r = out.last_mut().ok_or_else(|| bad("metric row before summary".into()))?;
                        r.metrics.push(Metric { name: f(5), value: num(10)? });
                    }
                    other => return Err(bad(format!("unknown row kind {other:?}"))),
                }
            }
            Ok(out)
        }
    }
}

/// Write reports to `path`.
pub fn emit(reports: &[VerificationReport], format: Format, path: &Path) -> Result<()> {
    let bytes = render(reports, format)?;
    let io = |e: std::io::Error| Error::Io { path: path.to_path_buf(), message: e.to_string() };
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    w.write_all(&bytes).map_err(io)?;
    w.flush().map_err(io)
}
