use num_complex::Complex;

use super::quad::{integrate, integrate_real, QuadratureConfig};
use super::smooth::SmoothFunction1D;
use crate::error::{capacity, Error, Result};
use crate::scalar::{e_rational, e_real, sum_real, ComplexSum, Real};

pub const POISSON_MAX_Q: u64 = 20;
/// Integration-by-parts order behind the truncation of the dual sum.
const POISSON_IBP_ORDER: usize = 6;

#[derive(Clone, Debug, PartialEq)]
pub struct PoissonRecord<T> {
    pub q: u64,
    pub b: u64,
    pub lhs: T,
    pub rhs: Complex<T>,
    pub abs_diff: T,
    pub tolerance: T,
    /// Dual frequencies `|m| ≤ M` kept.
    pub truncation: u64,
}

impl<T: Real> PoissonRecord<T> {
    pub fn passed(&self) -> bool {
        self.abs_diff < self.tolerance
    }
}

/// `ŵ(ξ) = ∫ w(x) e(−xξ) dx`.
pub fn fourier_transform<T: Real, W: SmoothFunction1D<T> + ?Sized>(w: &W, xi: T, cfg: &QuadratureConfig<T>) -> Result<Complex<T>> {
    let (a, b) = w.support();
    Ok(integrate(|x| e_real(-x * xi) * w.eval(x), a, b, xi.abs(), cfg)?.value)
}

/// `Σ_{m ≡ b (q)} w(m) = (1/q) Σ_m ŵ(m/q) e(bm/q)`, the right side truncated
/// where `|ŵ(ξ)| ≤ ‖w⁽ˡ⁾‖₁ (2π|ξ|)^{−l}` puts the tail below a tenth of the tolerance.
pub fn poisson_check<T: Real, W: SmoothFunction1D<T> + ?Sized>(
    q: u64,
    b: u64,
    w: &W,
    tol: T,
    cfg: &QuadratureConfig<T>,
) -> Result<PoissonRecord<T>> {
    if q == 0 {
        return Err(Error::Domain("q must be positive".into()));
    }
    if q > POISSON_MAX_Q {
        return Err(capacity("q", q, POISSON_MAX_Q));
    }
    let (lo, hi) = w.support();
    let m_lo = lo.ceil().to_f64_lossy() as i64;
    let m_hi = hi.floor().to_f64_lossy() as i64;
    let lhs = sum_real((m_lo..=m_hi).filter(|m| m.rem_euclid(q as i64) == (b % q) as i64).map(|m| w.eval(T::from_int(m as i128))));
    let tolerance = tol * (T::one() + lhs.abs());

    let l = POISSON_IBP_ORDER;
    let (norm_l, _) = integrate_real(|x| w.derivative(x, l).abs(), lo, hi, T::c(4.0) / (hi - lo), cfg)?;
    // (1/q) Σ_{|m| > M} ‖w⁽ˡ⁾‖₁ (q/2πm)^l ≤ (2/q) ‖w⁽ˡ⁾‖₁ (q/2π)^l M^{1−l}/(l−1)
    let qt = T::from_int(q as i128);
    let lt = T::from_int(l as i128);
    let amp = T::c(2.0) / qt * norm_l * (qt / T::TAU()).powi(l as i32) / (lt - T::one());
    let budget = tolerance / T::c(10.0);
    let m_cut = (amp / budget).powf((lt - T::one()).recip()).ceil().max(T::one());
    let m_cut = m_cut.to_f64_lossy();
    if !(m_cut <= 1e6) {
        return Err(Error::Convergence(format!("Poisson dual sum needs {m_cut} terms")));
    }
    let m_cut = m_cut as i64;
    let mut acc = ComplexSum::new();
    for m in -m_cut..=m_cut {
        let what = fourier_transform(w, T::from_int(m as i128) / qt, cfg)?;
        acc.add(what * e_rational::<T>(b as i128 * m as i128, q));
    }
    let rhs = acc.value() / qt;
    Ok(PoissonRecord { q, b: b % q, lhs, rhs, abs_diff: (rhs - lhs).norm(), tolerance, truncation: m_cut as u64 })
}
