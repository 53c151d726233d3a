use num_complex::Complex;

use super::bessel::bessel_j;
use super::quad::{integrate, QuadratureConfig};
use super::smooth::{sobolev_norm, SmoothFunction1D};
use crate::arith::factorize;
use crate::error::{Error, Result};
use crate::expsums::kloosterman;
use crate::modforms::NormalizedCoefficients;
use crate::scalar::{sum_real, Real};

pub const HANKEL_MAX_SCALE: f64 = 1e4;
/// Weight of the discriminant form.
pub const WEIGHT: u32 = 12;

fn i_pow<T: Real>(k: u32) -> Complex<T> {
    match k % 4 {
        0 => Complex::new(T::one(), T::zero()),
        1 => Complex::new(T::zero(), T::one()),
        2 => Complex::new(-T::one(), T::zero()),
        _ => Complex::new(T::zero(), -T::one()),
    }
}

/// `∫ g(x) J_{k−1}(4π√(xm)/d) dx` with its error estimate.
pub fn hankel_integral<T: Real, G: SmoothFunction1D<T> + ?Sized>(
    g: &G,
    d: u64,
    m: u64,
    k: u32,
    cfg: &QuadratureConfig<T>,
) -> Result<(T, T)> {
    if d == 0 || m == 0 || k == 0 {
        return Err(Error::Domain("d, m and k must be positive".into()));
    }
    let (a, b) = g.support();
    if !(a > T::zero()) || b > T::c(4.0 * HANKEL_MAX_SCALE) {
        return Err(Error::Domain(format!("support [{a}, {b}] outside (0, 2·10⁴]")));
    }
    let scale = T::c(4.0) * T::PI() * T::from_int(m as i128).sqrt() / T::from_int(d as i128);
    // d/dx of the Bessel argument over 2π, largest at the left end
    let freq = (T::from_int(m as i128) / a).sqrt() / T::from_int(d as i128);
    let err = std::cell::Cell::new(None);
    let f = |x: T| {
        let gx = g.eval(x);
        if gx == T::zero() {
            return Complex::new(T::zero(), T::zero());
        }
        match bessel_j(k - 1, scale * x.sqrt()) {
            Ok(j) => Complex::new(gx * j, T::zero()),
            Err(e) => {
                err.set(Some(e));
                Complex::new(T::zero(), T::zero())
            }
        }
    };
    let r = integrate(f, a, b, freq, cfg)?;
    if let Some(e) = err.take() {
        return Err(e);
    }
    Ok((r.value.re, r.error))
}

/// `ǧ_d(m) = (2π iᵏ/d) ∫ g(x) J_{k−1}(4π√(xm)/d) dx`.
pub fn hankel_transform<T: Real, G: SmoothFunction1D<T> + ?Sized>(
    g: &G,
    d: u64,
    m: u64,
    k: u32,
    cfg: &QuadratureConfig<T>,
) -> Result<Complex<T>> {
    let (v, _) = hankel_integral(g, d, m, k, cfg)?;
    Ok(i_pow::<T>(k) * (T::TAU() / T::from_int(d as i128) * v))
}

/// `I(t) = ∫ G(y) J_{k−1}(t√y) dy` for `G(y) = g(Xy)`, from the `x` integral.
fn scaled_integral<T: Real, G: SmoothFunction1D<T> + ?Sized>(
    g: &G,
    x_scale: T,
    t: T,
    k: u32,
    cfg: &QuadratureConfig<T>,
) -> Result<(T, T)> {
    let (a, b) = g.support();
    // J(t√y) with y = x/X
    let c = t / x_scale.sqrt();
    let freq = c / (T::c(4.0) * T::PI() * a.sqrt());
    let f = |x: T| {
        let gx = g.eval(x);
        if gx == T::zero() {
            return Complex::new(T::zero(), T::zero());
        }
        Complex::new(gx * bessel_j(k - 1, c * x.sqrt()).unwrap_or(T::nan()), T::zero())
    };
    let r = integrate(f, a, b, freq, cfg)?;
    if !r.value.re.is_finite() {
        return Err(Error::Domain(format!("Bessel argument out of range at t = {t}")));
    }
    Ok((r.value.re / x_scale, r.error / x_scale))
}

/// Decay of `I(t)` against `‖G‖_{1,l} t^{−(l+1/2)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct HankelDecay<T> {
    pub l: usize,
    pub sobolev: T,
    /// `sup_t |I(t)| t^{l+1/2} / ‖G‖_{1,l}` over grid points resolved above
    /// the quadrature error.
    pub constant: T,
    pub samples: Vec<(T, T)>,
}

pub fn hankel_decay<T: Real, G: SmoothFunction1D<T> + ?Sized>(
    g: &G,
    x_scale: T,
    l: usize,
    t_grid: &[T],
    cfg: &QuadratureConfig<T>,
) -> Result<HankelDecay<T>> {
    let sobolev = sobolev_norm(g, x_scale, l)?;
    let mut samples = Vec::with_capacity(t_grid.len());
    let mut constant = T::zero();
    for &t in t_grid {
        let (v, err) = scaled_integral(g, x_scale, t, WEIGHT, cfg)?;
        samples.push((t, v));
        if v.abs() > T::c(1e3) * err {
            constant = constant.max(v.abs() * t.powf(T::from_int(l as i128) + T::c(0.5)) / sobolev);
        }
    }
    Ok(HankelDecay { l, sobolev, constant, samples })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VoronoiConfig<T> {
    pub quad: QuadratureConfig<T>,
    /// Relative tolerance on `|LHS − RHS|`, scaled by `1 + |LHS|`.
    pub tol: T,
    /// Integration-by-parts order in the tail bound.
    pub l: usize,
    /// Multiplier on the fitted decay constant.
    pub safety: T,
}

impl<T: Real> Default for VoronoiConfig<T> {
    fn default() -> Self {
        Self {
            quad: QuadratureConfig::with_tolerance(T::c(1e-12), T::c(1e-11)),
            tol: T::c(1e-4),
            l: 8,
            safety: T::c(10.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VoronoiRecord<T> {
    pub q: u64,
    pub b: u64,
    pub lhs: T,
    pub rhs: T,
    pub abs_diff: T,
    pub tolerance: T,
    /// `(d, M)` truncation per divisor.
    pub truncation: Vec<(u64, u64)>,
    pub tail_bound: T,
}

impl<T: Real> VoronoiRecord<T> {
    pub fn passed(&self) -> bool {
        self.abs_diff < self.tolerance
    }
}

/// Dual-side data for one test function: `ǧ_d(m)` for `m ≤ M_d`, with `M_d`
/// set by the tail bound.
pub struct VoronoiSetup<'a, T, G: ?Sized> {
    g: &'a G,
    coeffs: &'a NormalizedCoefficients<T>,
    cfg: VoronoiConfig<T>,
    x_scale: T,
    decay: HankelDecay<T>,
    transforms: Vec<(u64, Vec<T>)>,
}

impl<'a, T: Real, G: SmoothFunction1D<T> + ?Sized> VoronoiSetup<'a, T, G> {
    /// `X` is the midpoint scale: the support must lie in `[X/2, 2X]`.
    pub fn new(g: &'a G, coeffs: &'a NormalizedCoefficients<T>, cfg: VoronoiConfig<T>) -> Result<Self> {
        let (a, b) = g.support();
        let x_scale = (a * b).sqrt();
        if x_scale > T::c(HANKEL_MAX_SCALE) || a < x_scale * T::c(0.5) - T::c(1e-9) || b > x_scale * T::c(2.0) + T::c(1e-9) {
            return Err(Error::Domain(format!("support [{a}, {b}] is not inside [X/2, 2X] with X ≤ 10⁴")));
        }
        let grid: Vec<T> = (0..48).map(|i| T::c(10f64.powf(1.0 + 3.0 * i as f64 / 47.0))).collect();
        let decay = hankel_decay(g, x_scale, cfg.l, &grid, &cfg.quad)?;
        Ok(Self { g, coeffs, cfg, x_scale, decay, transforms: Vec::new() })
    }

    pub fn decay(&self) -> &HankelDecay<T> {
        &self.decay
    }

    /// Bound on `(1/q) Σ_{m > M} |λ(m) S(b,m;d) ǧ_d(m)|` using `|λ(m)| ≤ 2√m`,
    /// `|S| ≤ d` and `|I(t)| ≤ C‖G‖ t^{−(l+1/2)}`.
    fn tail_bound(&self, q: u64, d: u64, m: u64) -> T {
        let s = (T::from_int(self.cfg.l as i128) + T::c(0.5)) * T::c(0.5) - T::c(0.5);
        if s <= T::one() {
            return T::infinity();
        }
        let t1 = T::c(4.0) * T::PI() * self.x_scale.sqrt() / T::from_int(d as i128);
        let c = self.cfg.safety * self.decay.constant * self.decay.sobolev;
        let amp = T::TAU() * self.x_scale * c * t1.powf(-(T::from_int(self.cfg.l as i128) + T::c(0.5)));
        // Σ_{m' > M} m'^{−s} ≤ M^{1−s}/(s−1)
        let mt = T::from_int(m as i128);
        T::c(2.0) * amp * mt.powf(T::one() - s) / (s - T::one()) / T::from_int(q as i128)
    }

    fn transforms_for(&mut self, q: u64, d: u64, budget: T) -> Result<(usize, T)> {
        let mut m = 1u64;
        while self.tail_bound(q, d, m) >= budget {
            m = m.checked_mul(2).ok_or_else(|| Error::Convergence("truncation point overflow".into()))?;
            if m as usize > self.coeffs.limit() {
                return Err(Error::Convergence(format!(
                    "dual sum for d = {d} needs more than {} coefficients at l = {}",
                    self.coeffs.limit(),
                    self.cfg.l
                )));
            }
        }
        // shrink back to the first m meeting the budget
        let (mut lo, mut hi) = (m / 2, m);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.tail_bound(q, d, mid) < budget {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let m_cut = hi as usize;
        let tail = self.tail_bound(q, d, hi);
        let have = self.transforms.iter().position(|t| t.0 == d);
        let known = have.map_or(0, |i| self.transforms[i].1.len());
        if known < m_cut {
            let mut vals = have.map_or_else(Vec::new, |i| std::mem::take(&mut self.transforms[i].1));
            for mm in known as u64 + 1..=m_cut as u64 {
                let (v, _) = hankel_integral(self.g, d, mm, WEIGHT, &self.cfg.quad)?;
                vals.push(T::TAU() / T::from_int(d as i128) * v * i_pow::<T>(WEIGHT).re);
            }
            match have {
                Some(i) => self.transforms[i].1 = vals,
                None => self.transforms.push((d, vals)),
            }
        }
        Ok((m_cut, tail))
    }

    pub fn check(&mut self, q: u64, b: u64) -> Result<VoronoiRecord<T>> {
        if q == 0 {
            return Err(Error::Domain("q must be positive".into()));
        }
        let (lo, hi) = self.g.support();
        let m_lo = lo.ceil().to_f64_lossy() as u64;
        let m_hi = hi.floor().to_f64_lossy() as u64;
        self.coeffs.ensure_covers(m_hi as usize)?;
        let lhs = sum_real(
            (m_lo.max(1)..=m_hi)
                .filter(|m| m % q == b % q)
                .map(|m| self.coeffs.at(m as usize) * self.g.eval(T::from_int(m as i128))),
        );
        let tolerance = self.cfg.tol * (T::one() + lhs.abs());
        let divisors = factorize(q)?.divisors();
        let budget = tolerance / T::c(10.0) / T::from_int(divisors.len() as i128);
        let mut parts = Vec::new();
        let mut truncation = Vec::new();
        let mut tail_bound = T::zero();
        for &d in &divisors {
            let (m_cut, tail) = self.transforms_for(q, d, budget)?;
            truncation.push((d, m_cut as u64));
            tail_bound += tail;
            let vals = &self.transforms.iter().find(|t| t.0 == d).expect("computed").1;
            let inner = sum_real((1..=m_cut).map(|m| {
                let s: Complex<T> = kloosterman(b as i128, m as i128, d);
                self.coeffs.at(m) * s.re * vals[m - 1]
            }));
            parts.push(inner);
        }
        let rhs = sum_real(parts) / T::from_int(q as i128);
        Ok(VoronoiRecord { q, b: b % q, lhs, rhs, abs_diff: (lhs - rhs).abs(), tolerance, truncation, tail_bound })
    }
}

/// One-shot check of `Σ_{m ≡ b (q)} λ(m) g(m) = (1/q) Σ_{d | q} Σ_m λ(m) S(b,m;d) ǧ_d(m)`.
pub fn voronoi_check<T: Real, G: SmoothFunction1D<T> + ?Sized>(
    q: u64,
    b: u64,
    g: &G,
    coeffs: &NormalizedCoefficients<T>,
    cfg: VoronoiConfig<T>,
) -> Result<VoronoiRecord<T>> {
    VoronoiSetup::new(g, coeffs, cfg)?.check(q, b)
}
