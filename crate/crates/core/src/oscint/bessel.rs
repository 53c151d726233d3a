//! Bessel functions of the first kind, integer order.

use crate::error::{capacity, Error, Result};
use crate::scalar::Real;

pub const BESSEL_MAX_ORDER: u32 = 50;
pub const BESSEL_MAX_ARG: f64 = 1e6;
const ASYMPTOTIC_FROM: f64 = 25.0;

/// Ascending series; only used where its terms decrease from the start.
fn series<T: Real>(n: u32, x: T) -> T {
    let h = x * T::c(0.5);
    let h2 = h * h;
    let mut term = T::one();
    for k in 1..=n {
        term = term * h / T::from_int(k as i128);
    }
    let mut sum = term;
    for k in 1..200 {
        term = -term * h2 / (T::from_int(k as i128) * T::from_int((n + k) as i128));
        sum += term;
        if term.abs() <= T::epsilon() * sum.abs() * T::c(0.1) {
            break;
        }
    }
    sum
}

/// `(J₀(x), J₁(x))` from the Hankel expansion, for large `x`.
fn asymptotic_01<T: Real>(x: T) -> (T, T) {
    let pq = |nu: i32| {
        let mu = T::from_int(4 * (nu as i128) * (nu as i128));
        let eight_x = T::c(8.0) * x;
        let (mut p, mut q) = (T::one(), T::zero());
        let mut a = T::one();
        let mut last = T::infinity();
        for k in 1..200 {
            let odd = T::from_int((2 * k - 1) as i128);
            a = a * (mu - odd * odd) / (T::from_int(k as i128) * eight_x);
            if a.abs() >= last || a.abs() < T::epsilon() * T::c(1e-3) {
                break;
            }
            last = a.abs();
            // aₖ alternates between the Q (odd k) and P (even k) series
            match k % 4 {
                1 => q += a,
                2 => p -= a,
                3 => q -= a,
                _ => p += a,
            }
        }
        (p, q)
    };
    let (s, c) = x.sin_cos();
    let r = (T::c(2.0) / (T::PI() * x)).sqrt();
    let h = T::FRAC_1_SQRT_2();
    // χ₀ = x − π/4, χ₁ = x − 3π/4
    let (c0, s0) = ((c + s) * h, (s - c) * h);
    let (c1, s1) = ((s - c) * h, -(c + s) * h);
    let (p0, q0) = pq(0);
    let (p1, q1) = pq(1);
    (r * (p0 * c0 - q0 * s0), r * (p1 * c1 - q1 * s1))
}

/// Miller's backward recurrence normalized by `J₀ + 2Σ J₂ₖ = 1`.
fn miller<T: Real>(n: u32, x: T) -> T {
    let top = n.max(x.to_f64_lossy().ceil() as u32);
    let mut m = top + 20 + (40.0 * top as f64).sqrt() as u32;
    m += m % 2;
    let two_over_x = T::c(2.0) / x;
    let (mut jp, mut j) = (T::zero(), T::c(1e-30));
    let mut norm = T::zero();
    let mut want = T::zero();
    let big = T::max_value().sqrt();
    for k in (1..=m).rev() {
        // j = J_k, jp = J_{k+1}
        let jm = T::from_int(k as i128) * two_over_x * j - jp;
        jp = j;
        j = jm;
        if k - 1 == n {
            want = j;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += T::c(2.0) * j;
        }
        if j.abs() > big {
            let s = big.recip();
            j *= s;
            jp *= s;
            norm *= s;
            want *= s;
        }
    }
    norm += j;
    want / norm
}

/// `J_n(x)` for `n ≤ 50`, `0 ≤ x ≤ 10⁶`.
///
/// Regimes: the ascending series while `x²/4 ≤ (n+1)/2`; for `x ≥ 25` and
/// `n ≤ x`, the Hankel expansion of `J₀, J₁` followed by upward recurrence;
/// otherwise downward recurrence.
pub fn bessel_j<T: Real>(n: u32, x: T) -> Result<T> {
    if n > BESSEL_MAX_ORDER {
        return Err(capacity("Bessel order", n, BESSEL_MAX_ORDER));
    }
    if !(x >= T::zero()) {
        return Err(Error::Domain(format!("Bessel argument {x} must be non-negative")));
    }
    if x > T::c(BESSEL_MAX_ARG) {
        return Err(capacity("Bessel argument", x.to_f64_lossy().min(u128::MAX as f64) as u128, BESSEL_MAX_ARG as u128));
    }
    if x == T::zero() {
        return Ok(if n == 0 { T::one() } else { T::zero() });
    }
    if x * x * T::c(0.25) <= T::from_int(n as i128 + 1) * T::c(0.5) {
        return Ok(series(n, x));
    }
    let nf = T::from_int(n as i128);
    if x >= T::c(ASYMPTOTIC_FROM) && nf <= x {
        let (j0, j1) = asymptotic_01(x);
        if n == 0 {
            return Ok(j0);
        }
        let (mut a, mut b) = (j0, j1);
        for k in 1..n {
            let c = T::from_int(2 * k as i128) / x * b - a;
            a = b;
            b = c;
        }
        return Ok(b);
    }
    Ok(miller(n, x))
}

/// Residual of `d/dx (xᵏJₖ) = xᵏJₖ₋₁`, the derivative taken by a centered
/// difference of step `h = 10⁻⁴·max(x, 1)` with Richardson extrapolation.
pub fn bessel_derivative_identity(k: u32, x: f64) -> Result<f64> {
    if k == 0 || k > BESSEL_MAX_ORDER {
        return Err(Error::Domain(format!("order {k} outside 1..={BESSEL_MAX_ORDER}")));
    }
    let f = |t: f64| -> Result<f64> { Ok(t.powi(k as i32) * bessel_j(k, t)?) };
    let d = |h: f64| -> Result<f64> { Ok((f(x + h)? - f(x - h)?) / (2.0 * h)) };
    let h = 1e-3 * x.max(1e-2).min(1.0);
    let (d1, d2) = (d(h)?, d(h / 2.0)?);
    let deriv = (4.0 * d2 - d1) / 3.0;
    Ok((deriv - x.powi(k as i32) * bessel_j(k - 1, x)?).abs())
}
