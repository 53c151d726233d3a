use num_complex::Complex;

use super::quad::{integrate, QuadratureConfig};
use super::smooth::{Jet, SmoothFunction1D};
use crate::error::{capacity, Error, Result};
use crate::scalar::{e_real, Real};

pub const PHASE_MAX_A: f64 = 1e6;

/// Which case of `Ψ(x) = Ax² + B log x` applies on `[1/2, 2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseRegime {
    /// `|B| ≥ 8|A|`
    LargeB,
    /// `|B| ≤ |A|/8`
    SmallB,
    /// comparable sizes, `AB > 0`
    ComparableSameSign,
    /// comparable sizes, `AB < 0`: a stationary point may sit in the support
    Stationary,
}

impl PhaseRegime {
    pub fn classify<T: Real>(a: T, b: T) -> Self {
        let (aa, bb) = (a.abs(), b.abs());
        if bb >= T::c(8.0) * aa {
            Self::LargeB
        } else if bb <= aa / T::c(8.0) {
            Self::SmallB
        } else if a * b > T::zero() {
            Self::ComparableSameSign
        } else {
            Self::Stationary
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseIntegral<T> {
    pub value: Complex<T>,
    /// Quadrature error plus the rounding floor of the integrand.
    pub error: T,
    pub regime: PhaseRegime,
    /// Integrations by parts applied before quadrature.
    pub ibp_order: usize,
    /// `|I|·|A|^{1/2}`
    pub scaled: T,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseConfig<T> {
    pub quad: QuadratureConfig<T>,
    /// Integrations by parts when `Ψ′` stays away from zero.
    pub ibp_order: usize,
    /// Smallest `min |Ψ′|` (cycles per unit length) at which they are used.
    pub ibp_threshold: T,
}

impl<T: Real> Default for PhaseConfig<T> {
    fn default() -> Self {
        Self {
            quad: QuadratureConfig::with_tolerance(T::min_positive_value(), T::c(1e-10)),
            ibp_order: 16,
            ibp_threshold: T::c(20.0),
        }
    }
}

/// `(L^N w)(x)/(i/2π)^N` where `L f = −(f/(2πiΨ′))′`, i.e. `N` applications of
/// `g ↦ (g/Ψ′)′`.
fn ibp_integrand<T: Real, W: SmoothFunction1D<T> + ?Sized>(w: &W, a: T, b: T, x: T, n: usize) -> T {
    let f = w.taylor(x, n);
    if f.c.iter().all(|&c| c == T::zero()) {
        return T::zero();
    }
    // Ψ′(x) = 2Ax + B/x
    let mut inv_x = Jet::zero(n);
    let mut p = x.recip();
    for j in 0..=n {
        inv_x.c[j] = p;
        p = -p / x;
    }
    let lin = {
        let mut v = Jet::constant(T::c(2.0) * a * x, n);
        if n > 0 {
            v.c[1] = T::c(2.0) * a;
        }
        v
    };
    let r = (&lin + &inv_x.scale(b)).recip();
    let mut g = f;
    for _ in 0..n {
        g = (&g * &r).derivative();
    }
    g.c[0]
}

/// `∫ w(x) e(Ax² + B log x) dx` for `w` supported in `[1/2, 2]`.
pub fn phase_integral<T: Real, W: SmoothFunction1D<T> + ?Sized>(a: T, b: T, w: &W, cfg: &PhaseConfig<T>) -> Result<PhaseIntegral<T>> {
    if a == T::zero() || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain("A must be finite and nonzero".into()));
    }
    if a.abs() > T::c(PHASE_MAX_A) {
        return Err(capacity("|A|", a.abs().to_f64_lossy() as u128, PHASE_MAX_A as u128));
    }
    let (lo, hi) = w.support();
    if lo < T::c(0.5) || hi > T::c(2.0) {
        return Err(Error::Domain(format!("support [{lo}, {hi}] not inside [1/2, 2]")));
    }
    let regime = PhaseRegime::classify(a, b);
    let dpsi = |x: T| T::c(2.0) * a * x + b / x;
    let max_freq = dpsi(lo).abs().max(dpsi(hi).abs());
    // Ψ′ vanishes at x² = −B/2A
    let crit = -b / (T::c(2.0) * a);
    let stationary_near = crit > T::zero() && {
        let x0 = crit.sqrt();
        x0 > lo * T::c(0.9) && x0 < hi * T::c(1.1)
    };
    let min_freq = if stationary_near {
        T::zero()
    } else {
        let mut m = dpsi(lo).abs().min(dpsi(hi).abs());
        if crit > T::zero() {
            let x0 = crit.sqrt();
            if x0 > lo && x0 < hi {
                m = T::zero();
            }
        }
        m
    };
    let n = if min_freq >= cfg.ibp_threshold { cfg.ibp_order } else { 0 };
    let pre = Complex::new(T::zero(), T::one() / T::TAU()).powu(n as u32);
    let f = |x: T| {
        let v = if n == 0 { w.eval(x) } else { ibp_integrand(w, a, b, x, n) };
        e_real(a * x * x + b * x.ln()) * v
    };
    let r = integrate(f, lo, hi, max_freq, &cfg.quad)?;
    // rounding floor: cancellation in Σ of terms of size ∫|integrand|
    let (mass, _) = super::quad::integrate_real(
        |x| if n == 0 { w.eval(x).abs() } else { ibp_integrand(w, a, b, x, n).abs() },
        lo,
        hi,
        T::zero(),
        &QuadratureConfig::with_tolerance(T::min_positive_value(), T::c(1e-3)),
    )?;
    let floor = T::c(64.0) * T::epsilon() * mass * max_freq.max(T::one()).sqrt();
    let value = r.value * pre;
    let error = (r.error + floor) * pre.norm();
    Ok(PhaseIntegral { value, error, regime, ibp_order: n, scaled: value.norm() * a.abs().sqrt() })
}
