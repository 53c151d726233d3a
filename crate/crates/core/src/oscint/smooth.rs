//! Smooth compactly supported test functions, with Taylor jets for exact
//! derivatives.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Truncated Taylor series `Σ cⱼ hʲ` about a point.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet<T> {
    pub c: Vec<T>,
}

impl<T: Real> Jet<T> {
    pub fn constant(v: T, order: usize) -> Self {
        let mut c = vec![T::zero(); order + 1];
        c[0] = v;
        Self { c }
    }

    /// The jet of `x ↦ x` at `x0`.
    pub fn variable(x0: T, order: usize) -> Self {
        let mut j = Self::constant(x0, order);
        if order > 0 {
            j.c[1] = T::one();
        }
        j
    }

    pub fn zero(order: usize) -> Self {
        Self::constant(T::zero(), order)
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn scale(&self, s: T) -> Self {
        Self { c: self.c.iter().map(|&x| x * s).collect() }
    }

    pub fn recip(&self) -> Self {
        let n = self.c.len();
        let inv0 = self.c[0].recip();
        let mut h = vec![T::zero(); n];
        h[0] = inv0;
        for i in 1..n {
            let mut s = T::zero();
            for k in 1..=i {
                s += self.c[k] * h[i - k];
            }
            h[i] = -s * inv0;
        }
        Self { c: h }
    }

    pub fn exp(&self) -> Self {
        let n = self.c.len();
        let mut f = vec![T::zero(); n];
        f[0] = self.c[0].exp();
        if f[0] == T::zero() {
            return Self { c: f };
        }
        for i in 1..n {
            let mut s = T::zero();
            for k in 1..=i {
                s += T::from_int(k as i128) * self.c[k] * f[i - k];
            }
            f[i] = s / T::from_int(i as i128);
        }
        Self { c: f }
    }

    /// Derivative, one order shorter.
    pub fn derivative(&self) -> Self {
        if self.c.len() == 1 {
            return Self::zero(0);
        }
        Self { c: (1..self.c.len()).map(|j| self.c[j] * T::from_int(j as i128)).collect() }
    }

    /// `f⁽ʲ⁾(x0)`.
    pub fn deriv(&self, j: usize) -> T {
        let fact = (1..=j).fold(T::one(), |a, i| a * T::from_int(i as i128));
        self.c[j] * fact
    }
}

impl<T: Real> Add for &Jet<T> {
    type Output = Jet<T>;
    fn add(self, o: &Jet<T>) -> Jet<T> {
        let n = self.c.len().min(o.c.len());
        Jet { c: (0..n).map(|i| self.c[i] + o.c[i]).collect() }
    }
}

impl<T: Real> Sub for &Jet<T> {
    type Output = Jet<T>;
    fn sub(self, o: &Jet<T>) -> Jet<T> {
        let n = self.c.len().min(o.c.len());
        Jet { c: (0..n).map(|i| self.c[i] - o.c[i]).collect() }
    }
}

impl<T: Real> Mul for &Jet<T> {
    type Output = Jet<T>;
    fn mul(self, o: &Jet<T>) -> Jet<T> {
        let n = self.c.len().min(o.c.len());
        let mut c = vec![T::zero(); n];
        for i in 0..n {
            if self.c[i] == T::zero() {
                continue;
            }
            for j in 0..n - i {
                c[i + j] += self.c[i] * o.c[j];
            }
        }
        Jet { c }
    }
}

/// Smooth function supported in `[a, b]`.
pub trait SmoothFunction1D<T: Real>: Sync {
    fn support(&self) -> (T, T);

    fn eval(&self, x: T) -> T;

    /// Taylor coefficients `f⁽ʲ⁾(x)/j!` for `j ≤ order`.
    fn taylor(&self, x: T, order: usize) -> Jet<T>;

    fn derivative(&self, x: T, j: usize) -> T {
        self.taylor(x, j).deriv(j)
    }
}

/// `w₀((x − mid)/half)` for the support `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bump<T> {
    lo: T,
    hi: T,
    scale: T,
}

impl<T: Real> Bump<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Domain(format!("empty bump support [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi, scale: T::one() })
    }

    /// `scale · w₀(…)`; `scale = 0` gives the zero function.
    pub fn scaled(self, scale: T) -> Self {
        Self { scale, ..self }
    }

    fn mid_half(&self) -> (T, T) {
        let half = (self.hi - self.lo) * T::c(0.5);
        (self.lo + half, half)
    }
}

impl<T: Real> SmoothFunction1D<T> for Bump<T> {
    fn support(&self) -> (T, T) {
        (self.lo, self.hi)
    }

    fn eval(&self, x: T) -> T {
        let (mid, half) = self.mid_half();
        self.scale * crate::quadric::w0((x - mid) / half)
    }

    fn taylor(&self, x: T, order: usize) -> Jet<T> {
        let (mid, half) = self.mid_half();
        let t0 = (x - mid) / half;
        if !(t0.abs() < T::one()) || self.scale == T::zero() {
            return Jet::zero(order);
        }
        let mut t = Jet::constant(t0, order);
        if order > 0 {
            t.c[1] = half.recip();
        }
        let one = Jet::constant(T::one(), order);
        let s = &one - &(&t * &t);
        s.recip().scale(-T::one()).exp().scale(self.scale)
    }
}

/// `‖f‖_{1,l} = Σ_{j ≤ l} ∫ |f⁽ʲ⁾|` for `f(y) = g(Xy)` (derivatives picking up `Xʲ`).
pub fn sobolev_norm<T: Real, G: SmoothFunction1D<T> + ?Sized>(g: &G, x_scale: T, l: usize) -> Result<T> {
    let (a, b) = g.support();
    let cfg = super::quad::QuadratureConfig::with_tolerance(T::c(1e-300), T::c(1e-8));
    let mut total = T::zero();
    for j in 0..=l {
        let f = |x: T| g.taylor(x, j).deriv(j).abs();
        let (v, _) = super::quad::integrate_real(f, a, b, T::c(4.0) / (b - a), &cfg)?;
        // ∫ |G⁽ʲ⁾(y)| dy = X^{j−1} ∫ |g⁽ʲ⁾(x)| dx
        total += v * x_scale.powi(j as i32 - 1);
    }
    Ok(total)
}
