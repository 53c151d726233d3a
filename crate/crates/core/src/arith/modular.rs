use std::ops::{Mul, MulAssign};

use num_complex::Complex;

use super::factor::{factorize, Factorization};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub fn gcd(a: i128, b: i128) -> u128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `v_p(n)` for `n ≠ 0`; `u32::MAX` stands in for `v_p(0) = ∞`.
pub fn valuation(n: i128, p: u64) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    let p = p as i128;
    let (mut n, mut v) = (n, 0);
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// `n / p^{v_p(n)}` for `n ≠ 0`.
pub fn strip(n: i128, p: u64) -> i128 {
    let p = p as i128;
    let mut n = n;
    while n != 0 && n % p == 0 {
        n /= p;
    }
    n
}

/// Jacobi symbol `(a/n)` for odd `n ≥ 1`.
pub fn jacobi(a: i128, n: i128) -> Result<i32> {
    if n <= 0 || n % 2 == 0 {
        return Err(Error::Domain(format!("Jacobi symbol needs odd positive modulus, got {n}")));
    }
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    Ok(if n == 1 { t } else { 0 })
}

/// Inverse of `a` modulo `q`, in `[0, q)`.
pub fn mod_inverse(a: i128, q: u64) -> Result<u64> {
    if q == 0 {
        return Err(Error::Domain("modulus must be positive".into()));
    }
    let m = q as i128;
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (s0, s1) = (s1, s0 - k * s1);
    }
    if r0 != 1 && q != 1 {
        return Err(Error::NonInvertible { a, q });
    }
    Ok(s0.rem_euclid(m) as u64)
}

/// Combine congruences `x ≡ r_i (mod m_i)` with pairwise coprime moduli.
/// Returns `(x, ∏ m_i)` with `0 ≤ x < ∏ m_i`.
pub fn crt_combine(residues: &[(i128, u64)]) -> Result<(u64, u64)> {
    let (mut x, mut m): (u128, u64) = (0, 1);
    for &(r, mi) in residues {
        if mi == 0 {
            return Err(Error::Domain("modulus must be positive".into()));
        }
        if gcd(m as i128, mi as i128) != 1 {
            return Err(Error::Domain(format!("moduli {m} and {mi} are not coprime")));
        }
        let r = r.rem_euclid(mi as i128) as u128;
        let mm = m
            .checked_mul(mi)
            .ok_or_else(|| crate::error::capacity("CRT modulus", m as u128 * mi as u128, u64::MAX))?;
        // x + m·t ≡ r (mod mi)
        let inv = mod_inverse(m as i128, mi)? as u128;
        let diff = (r + mi as u128 - x % mi as u128) % mi as u128;
        let t = diff * inv % mi as u128;
        x += m as u128 * t;
        m = mm;
    }
    Ok((x as u64 % m, m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MultiplicativeBasics {
    pub phi: u64,
    pub mobius: i32,
    pub squarefree_kernel: u64,
    pub rho: u64,
}

impl MultiplicativeBasics {
    pub fn of(f: &Factorization) -> Self {
        let mut out = Self { phi: 1, mobius: 1, squarefree_kernel: 1, rho: 1 };
        for &(p, e) in f.entries() {
            out.phi *= (p - 1) * p.pow(e - 1);
            out.mobius = if e > 1 { 0 } else { -out.mobius };
            out.squarefree_kernel *= p;
            out.rho *= p.pow(e.div_ceil(2));
        }
        out
    }
}

pub fn multiplicative_basics(n: u64) -> Result<MultiplicativeBasics> {
    Ok(MultiplicativeBasics::of(&factorize(n)?))
}

pub fn euler_phi(n: u64) -> u64 {
    multiplicative_basics(n).map(|b| b.phi).unwrap_or(0)
}

pub fn mobius(n: u64) -> i32 {
    multiplicative_basics(n).map(|b| b.mobius).unwrap_or(0)
}

/// A fourth root of unity `i^k`, kept exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct FourthRoot(u8);

impl FourthRoot {
    pub const ONE: Self = Self(0);
    pub const I: Self = Self(1);
    pub const MINUS_ONE: Self = Self(2);
    pub const MINUS_I: Self = Self(3);

    pub fn from_power(k: i64) -> Self {
        Self(k.rem_euclid(4) as u8)
    }

    pub fn from_sign(s: i32) -> Self {
        match s {
            1 => Self::ONE,
            -1 => Self::MINUS_ONE,
            _ => panic!("sign must be ±1, got {s}"),
        }
    }

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn inv(self) -> Self {
        Self((4 - self.0) % 4)
    }

    pub fn pow(self, k: u32) -> Self {
        Self(((self.0 as u32 * (k % 4)) % 4) as u8)
    }

    pub fn to_complex<T: Real>(self) -> Complex<T> {
        let (o, z) = (T::one(), T::zero());
        match self.0 {
            0 => Complex::new(o, z),
            1 => Complex::new(z, o),
            2 => Complex::new(-o, z),
            _ => Complex::new(z, -o),
        }
    }
}

impl Mul for FourthRoot {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self((self.0 + rhs.0) % 4)
    }
}

impl MulAssign for FourthRoot {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

/// `δ_n` and, for odd `n`, `ε_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnitMarker {
    pub delta: u8,
    pub epsilon: Option<FourthRoot>,
}

/// `δ_n = 1` for odd `n`, `0` for even `n`.
pub fn delta(n: i128) -> u8 {
    (n.rem_euclid(2)) as u8
}

/// `ε_n = 1` if `n ≡ 1 (mod 4)`, `i` if `n ≡ 3 (mod 4)`.
pub fn epsilon(n: i128) -> Result<FourthRoot> {
    match n.rem_euclid(4) {
        1 => Ok(FourthRoot::ONE),
        3 => Ok(FourthRoot::I),
        _ => Err(Error::Domain(format!("ε_n needs odd n, got {n}"))),
    }
}

pub fn unit_markers(n: i128) -> UnitMarker {
    UnitMarker { delta: delta(n), epsilon: epsilon(n).ok() }
}
