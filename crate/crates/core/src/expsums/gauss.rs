//! Gauss, Kloosterman and Ramanujan sums and the twisted sums `S^±`.

use num_complex::Complex;

use crate::arith::{epsilon, factorize, gcd, is_prime, jacobi, mod_inverse, mobius, valuation};
use crate::error::{Error, Result};
use crate::scalar::{ComplexSum, Real, UnitRoots};

/// `G(s,t;q) = Σ_{b mod q} e_q(sb² + tb)` by direct summation.
pub fn gauss_sum_brute<T: Real>(s: i128, t: i128, q: u64) -> Complex<T> {
    let roots = UnitRoots::new(q);
    gauss_sum_with(&roots, s, t)
}

/// Direct Gauss sum reusing a root table for the modulus.
pub fn gauss_sum_with<T: Real>(roots: &UnitRoots<T>, s: i128, t: i128) -> Complex<T> {
    let q = roots.modulus() as i128;
    let (s, t) = (s.rem_euclid(q), t.rem_euclid(q));
    let mut acc = ComplexSum::new();
    // b² s + b t, updated incrementally mod q
    let mut val = 0i128;
    for b in 0..q {
        acc.add(roots.at(val as u64));
        // (b+1)² s + (b+1) t − (b² s + b t) = (2b+1) s + t
        val = (val + ((2 * b + 1) % q) * s % q + t) % q;
    }
    acc.value()
}

/// `G(s,t;q)` from the classical evaluation, reducing to `(s,q) = 1` first.
pub fn gauss_sum_closed<T: Real>(s: i128, t: i128, q: u64) -> Complex<T> {
    assert!(q >= 1, "modulus must be positive");
    let qi = q as i128;
    let s = s.rem_euclid(qi);
    let g = gcd(s, qi) as i128;
    if g > 1 {
        if t.rem_euclid(g) != 0 {
            return Complex::new(T::zero(), T::zero());
        }
        let inner = gauss_sum_closed::<T>(s / g, t / g, q / g as u64);
        return inner * T::from_int(g);
    }
    if q == 1 {
        return Complex::new(T::one(), T::zero());
    }
    if q % 2 == 1 {
        let inv = mod_inverse(4 * s, q).expect("coprime") as i128;
        let sym = jacobi(s, qi).expect("odd modulus");
        let eps = epsilon(qi).expect("odd modulus").to_complex::<T>();
        let phase = crate::scalar::e_rational::<T>(-(inv * (t.rem_euclid(qi) * t.rem_euclid(qi) % qi)), q);
        return eps * phase * (T::from_int(qi).sqrt() * T::from_int(sym as i128));
    }
    if q % 4 == 2 {
        let v = qi / 2;
        if t.rem_euclid(2) == 0 {
            return Complex::new(T::zero(), T::zero());
        }
        let inv = mod_inverse(8 * s, v as u64).expect("coprime") as i128;
        let sym = jacobi(2 * s, v).expect("odd modulus");
        let eps = epsilon(v).expect("odd").to_complex::<T>();
        let tv = t.rem_euclid(v);
        let phase = crate::scalar::e_rational::<T>(-(inv * (tv * tv % v)), v as u64);
        return eps * phase * (T::c(2.0) * T::from_int(v).sqrt() * T::from_int(sym as i128));
    }
    // 4 | q, s odd
    if t.rem_euclid(2) != 0 {
        return Complex::new(T::zero(), T::zero());
    }
    let half = (t / 2).rem_euclid(qi);
    let inv = mod_inverse(s, q).expect("coprime") as i128;
    let phase = crate::scalar::e_rational::<T>(-(inv * (half * half % qi)), q);
    let eps_inv = epsilon(s).expect("odd").inv().to_complex::<T>();
    let sym = kronecker_q_over_odd(qi, s);
    let one_i = Complex::new(T::one(), T::one());
    one_i * eps_inv * phase * (T::from_int(qi).sqrt() * T::from_int(sym as i128))
}

/// `(q/s)` for odd positive `s`, as a Jacobi symbol.
fn kronecker_q_over_odd(q: i128, s: i128) -> i32 {
    jacobi(q, s).expect("odd positive")
}

/// `S(m,n;q) = Σ*_{x mod q} e_q(mx + n x̄)`.
pub fn kloosterman<T: Real>(m: i128, n: i128, q: u64) -> Complex<T> {
    let roots = UnitRoots::new(q);
    kloosterman_with(&roots, m, n)
}

pub fn kloosterman_with<T: Real>(roots: &UnitRoots<T>, m: i128, n: i128) -> Complex<T> {
    let q = roots.modulus();
    let qi = q as i128;
    let (m, n) = (m.rem_euclid(qi), n.rem_euclid(qi));
    let mut acc = ComplexSum::new();
    for x in 0..q {
        if gcd(x as i128, qi) == 1 {
            let xb = mod_inverse(x as i128, q).expect("unit") as i128;
            acc.add(roots.e(m * x as i128 + n * xb));
        }
    }
    acc.value()
}

/// Ramanujan's sum `c_q(m) = Σ_{d | (q,m)} d μ(q/d)`.
pub fn ramanujan_sum(q: u64, m: i128) -> i128 {
    let g = gcd(q as i128, m) as u64;
    let g = if m == 0 { q } else { g };
    factorize(g)
        .expect("positive")
        .divisors()
        .into_iter()
        .map(|d| d as i128 * mobius(q / d) as i128)
        .sum()
}

/// `c_{p^k}(m)` without factoring.
pub fn ramanujan_prime_power(p: u64, k: u32, m: i128) -> i128 {
    ramanujan_from_valuation(p, k, valuation(m, p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// `S^±_{p^k}(n) = Σ*_{a mod p^k} e_{p^k}(a n²)·(a/p)^{0 or 1}` by direct summation.
pub fn s_plus_minus_brute<T: Real>(p: u64, k: u32, n: i128, sign: Sign) -> Result<Complex<T>> {
    check_odd_prime(p)?;
    let q = checked_pow(p, k)?;
    let roots = UnitRoots::<T>::new(q);
    let qi = q as i128;
    let n2 = (n.rem_euclid(qi) * n.rem_euclid(qi)) % qi;
    let mut acc = ComplexSum::new();
    for a in 1..qi {
        if a % p as i128 == 0 {
            continue;
        }
        let chi = match sign {
            Sign::Plus => 1,
            Sign::Minus => jacobi(a, p as i128)?,
        };
        let z = roots.e(a * n2);
        acc.add(if chi == 1 { z } else { -z });
    }
    Ok(acc.value())
}

/// Closed form of `S^±_{p^k}(n)`.
pub fn s_plus_minus<T: Real>(p: u64, k: u32, n: i128, sign: Sign) -> Result<Complex<T>> {
    check_odd_prime(p)?;
    checked_pow(p, k)?;
    Ok(match sign {
        Sign::Plus => {
            let v2 = valuation(n, p).saturating_mul(2);
            Complex::new(T::from_int(ramanujan_from_valuation(p, k, v2)), T::zero())
        }
        Sign::Minus => s_minus_closed(p, k, n),
    })
}

fn s_minus_closed<T: Real>(p: u64, k: u32, n: i128) -> Complex<T> {
    let zero = Complex::new(T::zero(), T::zero());
    if k % 2 == 0 {
        return zero;
    }
    let v = valuation(n, p);
    if v == u32::MAX || 2 * v != k - 1 {
        return zero;
    }
    // n²/p^{k−1} is the square of a unit, so its symbol is 1.
    let eps = epsilon(p as i128).expect("odd").to_complex::<T>();
    eps * T::from_int(p as i128).powf(T::from_int(k as i128) - T::c(0.5))
}

/// `c_{p^k}(x)` given only `v_p(x)` (`u32::MAX` for `x = 0`).
pub(crate) fn ramanujan_from_valuation(p: u64, k: u32, v: u32) -> i128 {
    if k == 0 {
        return 1;
    }
    let pk1 = (p as i128).pow(k - 1);
    if v >= k {
        pk1 * (p as i128 - 1)
    } else if v == k - 1 {
        -pk1
    } else {
        0
    }
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not an odd prime")));
    }
    Ok(())
}

pub(crate) fn checked_pow(p: u64, k: u32) -> Result<u64> {
    p.checked_pow(k).ok_or_else(|| crate::error::capacity("p^k", u128::from(p).saturating_pow(k), u64::MAX))
}
