//! Run configuration: defaults, a `key = value` file format, and validation.

use std::path::{Path, PathBuf};

use qhl_core::arith::is_prime;
use qhl_core::expsums::{standard_forms, DiagonalForm};
use qhl_core::modforms::{DEFAULT_TAU_LIMIT, TAU_LIMIT};
use qhl_core::report::Format;
use qhl_core::{Error, Result};

/// Environment variable naming the directory for the τ-table cache.
pub const CACHE_ENV: &str = "QHL_CACHE_DIR";

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub forms: Vec<DiagonalForm>,
    pub primes: Vec<u64>,
    /// Largest prime power `p^k` swept by the closed-form checks.
    pub max_prime_power: u64,
    /// Largest modulus for the Gauss-sum sweep over all `(s, t)`.
    pub gauss_max_q: u64,
    /// Largest modulus for the full four-fold brute sums.
    pub brute_max_q: u64,
    pub x_list: Vec<u64>,
    pub tol_mult: f64,
    pub tau_limit: usize,
    /// Random splittings drawn per multiplicativity check.
    pub samples: usize,
    pub seed: u64,
    pub voronoi_max_q: u64,
    pub poisson_max_q: u64,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            forms: standard_forms(),
            primes: vec![2, 3, 5, 7, 11, 13],
            max_prime_power: 500,
            gauss_max_q: 32,
            brute_max_q: 12,
            x_list: vec![50, 100, 200],
            tol_mult: 1.0,
            tau_limit: DEFAULT_TAU_LIMIT,
            samples: 50,
            seed: 1,
            voronoi_max_q: 3,
            poisson_max_q: 8,
            jobs: None,
            out: None,
            format: Format::Csv,
            cache_dir: None,
        }
    }
}

fn usage(msg: String) -> Error {
    Error::Usage(msg)
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| usage(format!("{key}: cannot parse {v:?}")))
}

pub fn parse_list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',').filter(|s| !s.trim().is_empty()).map(|s| parse_num(key, s)).collect()
}

/// Forms separated by `;`, each as four comma-separated coefficients.
pub fn parse_forms(v: &str) -> Result<Vec<DiagonalForm>> {
    v.split(';').filter(|s| !s.trim().is_empty()).map(str::parse).collect()
}

impl RunConfig {
    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "forms" | "form" => self.forms = parse_forms(v)?,
            "primes" => self.primes = parse_list(key, v)?,
            "max_prime_power" => self.max_prime_power = parse_num(key, v)?,
            "gauss_max_q" => self.gauss_max_q = parse_num(key, v)?,
            "brute_max_q" => self.brute_max_q = parse_num(key, v)?,
            "x_list" => self.x_list = parse_list(key, v)?,
            "tol_mult" => self.tol_mult = parse_num(key, v)?,
            "tau_limit" => self.tau_limit = parse_num(key, v)?,
            "samples" => self.samples = parse_num(key, v)?,
            "seed" => self.seed = parse_num(key, v)?,
            "voronoi_max_q" => self.voronoi_max_q = parse_num(key, v)?,
            "poisson_max_q" => self.poisson_max_q = parse_num(key, v)?,
            "jobs" => self.jobs = Some(parse_num(key, v)?),
            "out" => self.out = Some(PathBuf::from(v)),
            "format" => self.format = v.parse()?,
            "cache_dir" => self.cache_dir = Some(PathBuf::from(v)),
            other => return Err(usage(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Parse `key = value` lines. Blank lines and `#` comments are skipped.
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| usage(format!("line {}: expected key = value", i + 1)))?;
            cfg.set(k, v).map_err(|e| usage(format!("line {}: {e}", i + 1)))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.to_path_buf(), message: e.to_string() })?;
        Self::parse_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.forms.is_empty() {
            return Err(usage("no forms given".into()));
        }
        if self.primes.is_empty() {
            return Err(usage("no primes given".into()));
        }
        if let Some(p) = self.primes.iter().find(|&&p| !is_prime(p)) {
            return Err(usage(format!("{p} is not prime")));
        }
        if self.x_list.is_empty() {
            return Err(usage("empty x_list".into()));
        }
        if self.x_list.windows(2).any(|w| w[0] >= w[1]) || self.x_list[0] == 0 {
            return Err(usage("x_list must be positive and strictly increasing".into()));
        }
        if !(self.tol_mult.is_finite() && self.tol_mult > 0.0) {
            return Err(usage(format!("tol_mult must be positive, got {}", self.tol_mult)));
        }
        if self.tau_limit < 2 || self.tau_limit > TAU_LIMIT {
            return Err(usage(format!("tau_limit must lie in 2..={TAU_LIMIT}")));
        }
        if self.gauss_max_q == 0 || self.brute_max_q == 0 || self.max_prime_power < 2 || self.voronoi_max_q == 0 || self.poisson_max_q == 0 {
            return Err(usage("grid bounds must be positive".into()));
        }
        if self.jobs == Some(0) {
            return Err(usage("jobs must be at least 1".into()));
        }
        Ok(())
    }

    /// Cache directory from the config, else from the environment.
    pub fn resolved_cache_dir(&self) -> Option<PathBuf> {
        self.cache_dir.clone().or_else(|| std::env::var_os(CACHE_ENV).filter(|s| !s.is_empty()).map(PathBuf::from))
    }
}
