//! Scalar abstraction shared by every floating-point routine.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real field the numerical code is generic over (`f32`, `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`; used for literals.
    #[inline]
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_int(n: i128) -> Self {
        Self::from_i128(n).expect("integer representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
}

/// `e(x) = exp(2πix)` evaluated on the exact rational `num/den`.
///
/// The numerator is reduced modulo `den` in integer arithmetic first, so the
/// angle handed to `sin_cos` always lies in `[0, 2π)`.
pub fn e_rational<T: Real>(num: i128, den: u64) -> Complex<T> {
    debug_assert!(den > 0);
    let r = num.rem_euclid(den as i128);
    let theta = T::TAU() * T::from_int(r) / T::from_int(den as i128);
    let (s, c) = theta.sin_cos();
    Complex::new(c, s)
}

/// `e(x)` for a real argument.
pub fn e_real<T: Real>(x: T) -> Complex<T> {
    let frac = x - x.floor();
    let (s, c) = (T::TAU() * frac).sin_cos();
    Complex::new(c, s)
}

/// Table of `e(j/q)` for `j = 0..q`.
#[derive(Clone, Debug)]
pub struct UnitRoots<T> {
    q: u64,
    table: Vec<Complex<T>>,
}

impl<T: Real> UnitRoots<T> {
    pub fn new(q: u64) -> Self {
        assert!(q >= 1, "modulus must be positive");
        let table = (0..q).map(|j| e_rational(j as i128, q)).collect();
        Self { q, table }
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// `e_q(x)` for any integer `x`.
    #[inline]
    pub fn e(&self, x: i128) -> Complex<T> {
        self.table[x.rem_euclid(self.q as i128) as usize]
    }

    /// `e_q(j)` for an already reduced residue.
    #[inline]
    pub fn at(&self, j: u64) -> Complex<T> {
        self.table[j as usize]
    }
}

/// Kahan–Babuška compensated complex accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexSum<T> {
    re: T,
    im: T,
    cre: T,
    cim: T,
}

impl<T: Real> ComplexSum<T> {
    pub fn new() -> Self {
        Self { re: T::zero(), im: T::zero(), cre: T::zero(), cim: T::zero() }
    }

    #[inline]
    pub fn add(&mut self, z: Complex<T>) {
        neumaier(&mut self.re, &mut self.cre, z.re);
        neumaier(&mut self.im, &mut self.cim, z.im);
    }

    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re + self.cre, self.im + self.cim)
    }
}

#[inline]
fn neumaier<T: Real>(sum: &mut T, comp: &mut T, x: T) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

/// Compensated sum of reals.
pub fn sum_real<T: Real, I: IntoIterator<Item = T>>(it: I) -> T {
    let (mut s, mut c) = (T::zero(), T::zero());
    for x in it {
        neumaier(&mut s, &mut c, x);
    }
    s + c
}
