//! Ramanujan's τ(n) from `x∏(1 − xⁿ)²⁴`, in exact 128-bit arithmetic.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{capacity, Error, Result};

pub const TAU_LIMIT: usize = 100_000;
pub const DEFAULT_TAU_LIMIT: usize = 20_000;
const MAGIC: &[u8; 8] = b"TAUTBL01";

/// `τ(1..=N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauTable {
    // values[n] = τ(n); values[0] unused
    values: Vec<i128>,
}

/// Coefficients of `∏_{n≥1}(1 − xⁿ)` below `x^len`, from Euler's pentagonal
/// number theorem.
fn pentagonal(len: usize) -> Vec<i128> {
    let mut c = vec![0i128; len];
    c[0] = 1;
    for k in 1i64.. {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let g1 = (k * (3 * k - 1) / 2) as usize;
        let g2 = (k * (3 * k + 1) / 2) as usize;
        if g1 >= len {
            break;
        }
        c[g1] += sign;
        if g2 < len {
            c[g2] += sign;
        }
    }
    c
}

/// Truncated product of two series.
fn mul_trunc(a: &[i128], b: &[i128]) -> Vec<i128> {
    let len = a.len().min(b.len());
    let nz: Vec<usize> = (0..len).filter(|&i| a[i] != 0).collect();
    (0..len)
        .into_par_iter()
        .map(|n| {
            let mut s = 0i128;
            for &i in nz.iter().take_while(|&&i| i <= n) {
                s += a[i] * b[n - i];
            }
            s
        })
        .collect()
}

impl TauTable {
    /// Build `τ(1..=n_max)` by four squarings and one product.
    pub fn build(n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::Domain("table limit must be positive".into()));
        }
        if n_max > TAU_LIMIT {
            return Err(capacity("tau table limit", n_max as u64, TAU_LIMIT as u64));
        }
        let p1 = pentagonal(n_max);
        let p2 = mul_trunc(&p1, &p1);
        let p4 = mul_trunc(&p2, &p2);
        let p8 = mul_trunc(&p4, &p4);
        let p16 = mul_trunc(&p8, &p8);
        let p24 = mul_trunc(&p16, &p8);
        let mut values = Vec::with_capacity(n_max + 1);
        values.push(0);
        values.extend_from_slice(&p24);
        Ok(Self { values })
    }

    pub fn limit(&self) -> usize {
        self.values.len() - 1
    }

    /// `τ(n)` for `1 ≤ n ≤ N`.
    pub fn tau(&self, n: usize) -> Result<i128> {
        if n == 0 || n > self.limit() {
            return Err(Error::Domain(format!("τ({n}) outside table 1..={}", self.limit())));
        }
        Ok(self.values[n])
    }

    /// `τ(1..=N)` as a slice indexed from 0.
    pub fn values(&self) -> &[i128] {
        &self.values[1..]
    }

    /// Shorten the table to `n_max` entries.
    pub fn truncate(mut self, n_max: usize) -> Self {
        self.values.truncate(n_max + 1);
        self
    }

    /// Layout: magic `TAUTBL01`, `N` as little-endian u64, then `τ(1..=N)`
    /// as little-endian i128 (each a low/high pair of 64-bit words).
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + 16 * self.limit());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(self.limit() as u64).to_le_bytes());
        for v in self.values() {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |m: &str| Error::Consistency(format!("tau cache: {m}"));
        if bytes.len() < 16 || &bytes[..8] != MAGIC {
            return Err(bad("missing TAUTBL01 header"));
        }
        let n = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes")) as usize;
        if n == 0 || n > TAU_LIMIT || bytes.len() != 16 + 16 * n {
            return Err(bad("length does not match header"));
        }
        let mut values = Vec::with_capacity(n + 1);
        values.push(0);
        values.extend(bytes[16..].chunks_exact(16).map(|c| i128::from_le_bytes(c.try_into().expect("16 bytes"))));
        if values[1] != 1 {
            return Err(bad("τ(1) ≠ 1"));
        }
        Ok(Self { values })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let io = |e: std::io::Error| Error::Io { path: path.to_path_buf(), message: e.to_string() };
        let mut f = fs::File::create(path).map_err(io)?;
        f.write_all(&self.to_bytes()).map_err(io)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let io = |e: std::io::Error| Error::Io { path: path.to_path_buf(), message: e.to_string() };
        let mut buf = Vec::new();
        fs::File::open(path).map_err(io)?.read_to_end(&mut buf).map_err(io)?;
        Self::from_bytes(&buf)
    }

    /// Reuse `dir/tau-table.bin` when it covers `n_max`, otherwise build and
    /// (re)write it.
    pub fn load_or_build(dir: &Path, n_max: usize) -> Result<Self> {
        let path = dir.join("tau-table.bin");
        if let Ok(t) = Self::load(&path) {
            if t.limit() >= n_max {
                return Ok(t.truncate(n_max));
            }
        }
        let t = Self::build(n_max)?;
        fs::create_dir_all(dir).map_err(|e| Error::Io { path: dir.to_path_buf(), message: e.to_string() })?;
        t.save(&path)?;
        Ok(t)
    }
}

pub fn build_tau_table(n_max: usize) -> Result<TauTable> {
    TauTable::build(n_max)
}
