use super::quad::{integrate_real, QuadratureConfig};
use crate::error::{Error, Result};
use crate::quadric::w0;
use crate::scalar::Real;

/// `c₀ = ∫ w₀`, by quadrature.
pub fn bump_mass<T: Real>() -> Result<T> {
    let cfg = QuadratureConfig::with_tolerance(T::c(1e-15), T::c(1e-14));
    Ok(integrate_real(w0, -T::one(), T::one(), T::zero(), &cfg)?.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DissectionRecord<T> {
    pub delta: T,
    pub lhs: T,
    pub rhs: T,
    pub residual: T,
    /// `10⁻⁶ δ³`
    pub tolerance: T,
}

impl<T: Real> DissectionRecord<T> {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

/// `∫_{ℝ³} w_δ(x₁, (x′ − y′)/δ, y′) dy′` against `δ³ w(x)`, where
/// `w_δ(x₁, u, v) = c₀⁻³ w₀(u₁)w₀(u₂)w₀(u₃) w(x₁, δu + v)`.
pub fn dissection_check<T, W>(w: W, delta: T, x: [T; 4]) -> Result<DissectionRecord<T>>
where
    T: Real,
    W: Fn([T; 4]) -> T,
{
    if !(delta > T::zero() && delta <= T::one()) {
        return Err(Error::Domain(format!("δ = {delta} outside (0, 1]")));
    }
    let c0 = bump_mass::<T>()?;
    let inv_c0_3 = (c0 * c0 * c0).recip();
    let w_delta = |x1: T, u: [T; 3], v: [T; 3]| {
        let damp = w0(u[0]) * w0(u[1]) * w0(u[2]);
        if damp == T::zero() {
            return T::zero();
        }
        inv_c0_3 * damp * w([x1, delta * u[0] + v[0], delta * u[1] + v[1], delta * u[2] + v[2]])
    };
    let cfg = QuadratureConfig::with_tolerance(T::c(1e-13), T::c(1e-10));
    let inner_cfg = QuadratureConfig::with_tolerance(T::c(1e-15), T::c(1e-11));
    let span = |i: usize| (x[i + 1] - delta, x[i + 1] + delta);
    let err = std::cell::Cell::new(None);
    let keep = |r: Result<(T, T)>| match r {
        Ok(v) => v.0,
        Err(e) => {
            err.set(Some(e));
            T::zero()
        }
    };
    let integrand = |y: [T; 3]| {
        let u = [(x[1] - y[0]) / delta, (x[2] - y[1]) / delta, (x[3] - y[2]) / delta];
        w_delta(x[0], u, y)
    };
    let (a3, b3) = span(2);
    let (a2, b2) = span(1);
    let (a1, b1) = span(0);
    let outer = integrate_real(
        |y1| {
            keep(integrate_real(
                |y2| keep(integrate_real(|y3| integrand([y1, y2, y3]), a3, b3, T::zero(), &inner_cfg)),
                a2,
                b2,
                T::zero(),
                &inner_cfg,
            ))
        },
        a1,
        b1,
        T::zero(),
        &cfg,
    );
    if let Some(e) = err.take() {
        return Err(e);
    }
    let (lhs, _) = outer?;
    let rhs = delta * delta * delta * w(x);
    Ok(DissectionRecord { delta, lhs, rhs, residual: (lhs - rhs).abs(), tolerance: T::c(1e-6) * delta * delta * delta })
}
