use num_complex::Complex;

use super::tau::TauTable;
use crate::arith::{factorize, gcd, mobius};
use crate::error::{capacity, Error, Result};
use crate::scalar::{e_real, ComplexSum, Real};

/// `λ(n) = τ(n)/n^{11/2}` for `1 ≤ n ≤ N`.
#[derive(Clone, Debug)]
pub struct NormalizedCoefficients<T> {
    lambda: Vec<T>,
}

impl<T: Real> NormalizedCoefficients<T> {
    pub fn from_table(table: &TauTable) -> Self {
        let mut lambda = Vec::with_capacity(table.limit() + 1);
        lambda.push(T::zero());
        for (i, &t) in table.values().iter().enumerate() {
            let n = T::from_int(i as i128 + 1);
            lambda.push(T::from_int(t) / n.powf(T::c(5.5)));
        }
        Self { lambda }
    }

    pub fn limit(&self) -> usize {
        self.lambda.len() - 1
    }

    pub fn get(&self, n: usize) -> Result<T> {
        if n == 0 || n > self.limit() {
            return Err(Error::Domain(format!("λ({n}) outside table 1..={}", self.limit())));
        }
        Ok(self.lambda[n])
    }

    /// Unchecked `λ(n)`; panics outside the table.
    #[inline]
    pub fn at(&self, n: usize) -> T {
        self.lambda[n]
    }

    pub fn ensure_covers(&self, n: usize) -> Result<()> {
        if n > self.limit() {
            return Err(capacity("λ index", n as u64, self.limit() as u64));
        }
        Ok(())
    }
}

pub fn lambda<T: Real>(table: &TauTable, n: usize) -> Result<T> {
    let t = table.tau(n)?;
    Ok(T::from_int(t) / T::from_int(n as i128).powf(T::c(5.5)))
}

/// `λ(mn) = Σ_{d | (m,n)} μ(d) λ(m/d) λ(n/d)` within `1e-9` relative.
pub fn hecke_convolution_check(table: &TauTable, m: usize, n: usize) -> Result<bool> {
    let lam = |k: usize| lambda::<f64>(table, k);
    let lhs = lam(m * n)?;
    let g = gcd(m as i128, n as i128) as u64;
    let mut rhs = 0.0;
    let mut scale = lhs.abs();
    for d in factorize(g)?.divisors() {
        let mu = mobius(d);
        if mu == 0 {
            continue;
        }
        let term = mu as f64 * lam(m / d as usize)? * lam(n / d as usize)?;
        scale = scale.max(term.abs());
        rhs += term;
    }
    Ok((lhs - rhs).abs() <= 1e-9 * scale.max(1e-300))
}

/// `Σ_{n ≤ z} λ(n) e(αn)`, with `|S|/(√z log z)` for `z ≥ 2`.
#[derive(Clone, Copy, Debug)]
pub struct TwistedSum<T> {
    pub value: Complex<T>,
    pub wilton_ratio: Option<T>,
}

pub fn twisted_sum<T: Real>(coeffs: &NormalizedCoefficients<T>, z: usize, alpha: T) -> Result<TwistedSum<T>> {
    if z > coeffs.limit() {
        return Err(capacity("z", z as u64, coeffs.limit() as u64));
    }
    let mut acc = ComplexSum::new();
    for n in 1..=z {
        acc.add(e_real(alpha * T::from_int(n as i128)) * coeffs.at(n));
    }
    let value = acc.value();
    let wilton_ratio = (z >= 2).then(|| {
        let zt = T::from_int(z as i128);
        value.norm() / (zt.sqrt() * zt.ln())
    });
    Ok(TwistedSum { value, wilton_ratio })
}
