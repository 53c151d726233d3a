//! Brute-force evaluation of `A_q(c)`, `S_{d,q}(c)` and `T_q`.
//!
//! Two tiers: `Full` sums every term of the defining multiple sum, `Factored`
//! uses the fact that the `b_i` run independently, so the multiple sum is a
//! product of one-dimensional sums for each `a`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::form::{DiagonalForm, OffsetVector};
use super::gauss::{gauss_sum_with, kloosterman_with, ramanujan_sum};
use crate::arith::{factorize, gcd, is_prime};
use crate::error::{capacity, Error, Result};
use crate::scalar::{ComplexSum, Real, UnitRoots};

pub const FULL_LIMIT: u64 = 64;
pub const FACTORED_LIMIT: u64 = 4000;
pub const SDQ_FULL_LIMIT: u64 = 32;
pub const TQ_BRUTE_LIMIT: u64 = 64;
pub const TQ_PRIME_LIMIT: u64 = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tier {
    Full,
    Factored,
}

fn units(q: u64) -> Vec<u64> {
    (0..q).filter(|&a| gcd(a as i128, q as i128) == 1).collect()
}

fn check_tier(q: u64, tier: Tier, full: u64) -> Result<()> {
    if q == 0 {
        return Err(Error::Domain("modulus must be positive".into()));
    }
    let limit = match tier {
        Tier::Full => full,
        Tier::Factored => FACTORED_LIMIT,
    };
    if q > limit {
        return Err(capacity("q", q, limit));
    }
    Ok(())
}

/// `A_q(c) = Σ*_{a mod q} Σ_{b′ mod q} e_q(aF(c₁, b′) + b′·c′)`.
pub fn a_q_brute<T: Real>(form: &DiagonalForm, q: u64, c: &OffsetVector, tier: Tier) -> Result<Complex<T>> {
    check_tier(q, tier, FULL_LIMIT)?;
    match tier {
        Tier::Full => Ok(a_q_full(form, q, c)),
        Tier::Factored => Ok(AqOracle::new(form, q, c.c_prime)?.eval(c.c1 as i128)),
    }
}

/// Rows `(a·A·b² + t·b) mod q` for `b = 0..q`.
fn quad_row(q: u64, s: i128, t: i128) -> Vec<u64> {
    let qi = q as i128;
    (0..qi).map(|b| ((s % qi) * (b * b % qi) + t * b).rem_euclid(qi) as u64).collect()
}

fn a_q_full<T: Real>(form: &DiagonalForm, q: u64, c: &OffsetVector) -> Complex<T> {
    let roots = UnitRoots::<T>::new(q);
    let a_co = form.coeffs().map(|x| x as i128);
    let qi = q as i128;
    let c1 = c.c1 as i128;
    let mut acc = ComplexSum::new();
    for a in units(q) {
        let a = a as i128;
        let base = (a * a_co[0] % qi * (c1 * c1 % qi)).rem_euclid(qi) as u64;
        let r2 = quad_row(q, a * a_co[1], c.c_prime[0] as i128);
        let r3 = quad_row(q, a * a_co[2], c.c_prime[1] as i128);
        let r4 = quad_row(q, a * a_co[3], c.c_prime[2] as i128);
        for &x2 in &r2 {
            let s2 = (base + x2) % q;
            for &x3 in &r3 {
                let s3 = (s2 + x3) % q;
                for &x4 in &r4 {
                    acc.add(roots.at((s3 + x4) % q));
                }
            }
        }
    }
    acc.value()
}

/// `A_q(·, c′)` for fixed `(F, q, c′)`: the product of the three `b_i` sums
/// is tabulated once per unit `a`, after which each `c₁` costs `O(φ(q))`.
#[derive(Clone, Debug)]
pub struct AqOracle<T> {
    q: u64,
    a1: i128,
    roots: UnitRoots<T>,
    units: Vec<u64>,
    prod: Vec<Complex<T>>,
}

impl<T: Real> AqOracle<T> {
    pub fn new(form: &DiagonalForm, q: u64, c_prime: [i64; 3]) -> Result<Self> {
        check_tier(q, Tier::Factored, FULL_LIMIT)?;
        let roots = UnitRoots::<T>::new(q);
        let a_co = form.coeffs().map(|x| x as i128);
        let units = units(q);
        let prod = units
            .iter()
            .map(|&a| {
                let a = a as i128;
                (1..4).fold(Complex::new(T::one(), T::zero()), |acc, i| {
                    acc * gauss_sum_with(&roots, a * a_co[i], c_prime[i - 1] as i128)
                })
            })
            .collect();
        Ok(Self { q, a1: a_co[0], roots, units, prod })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn eval(&self, c1: i128) -> Complex<T> {
        let qi = self.q as i128;
        let n2 = (c1.rem_euclid(qi) * c1.rem_euclid(qi)) % qi * self.a1.rem_euclid(qi) % qi;
        let mut acc = ComplexSum::new();
        for (&a, &p) in self.units.iter().zip(&self.prod) {
            acc.add(self.roots.e(a as i128 * n2) * p);
        }
        acc.value()
    }
}

/// `S_{d,q}(c) = Σ*_{a mod q} Σ_{b mod q} e_q(aF(b) + b′·c′) S(b₁, c₁; d)`.
pub fn s_dq_brute<T: Real>(form: &DiagonalForm, d: u64, q: u64, c: &OffsetVector, tier: Tier) -> Result<Complex<T>> {
    check_tier(q, tier, SDQ_FULL_LIMIT)?;
    if d == 0 || q % d != 0 {
        return Err(Error::Domain(format!("{d} does not divide {q}")));
    }
    let roots = UnitRoots::<T>::new(q);
    let droots = UnitRoots::<T>::new(d);
    let kl: Vec<Complex<T>> = (0..d).map(|x| kloosterman_with(&droots, x as i128, c.c1 as i128)).collect();
    let a_co = form.coeffs().map(|x| x as i128);
    let mut acc = ComplexSum::new();
    for a in units(q) {
        let a = a as i128;
        let r1 = quad_row(q, a * a_co[0], 0);
        match tier {
            Tier::Factored => {
                let mut first = ComplexSum::new();
                for (b1, &x1) in r1.iter().enumerate() {
                    first.add(roots.at(x1) * kl[b1 % d as usize]);
                }
                let rest = (1..4).fold(Complex::new(T::one(), T::zero()), |acc, i| {
                    acc * gauss_sum_with(&roots, a * a_co[i], c.c_prime[i - 1] as i128)
                });
                acc.add(first.value() * rest);
            }
            Tier::Full => {
                let r2 = quad_row(q, a * a_co[1], c.c_prime[0] as i128);
                let r3 = quad_row(q, a * a_co[2], c.c_prime[1] as i128);
                let r4 = quad_row(q, a * a_co[3], c.c_prime[2] as i128);
                for (b1, &x1) in r1.iter().enumerate() {
                    let k = kl[b1 % d as usize];
                    for &x2 in &r2 {
                        let s2 = (x1 + x2) % q;
                        for &x3 in &r3 {
                            let s3 = (s2 + x3) % q;
                            for &x4 in &r4 {
                                acc.add(roots.at((s3 + x4) % q) * k);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(acc.value())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TqPath {
    Brute,
    PrimeFast,
    Multiplicative,
}

/// `T_q = Σ_{r mod q} |T_q(r)|` with the per-`r` terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TqRecord<T> {
    pub per_r: Vec<T>,
    pub total: T,
    pub path: TqPath,
}

/// `T_q(r) = Σ*_a Σ_b e_q(aF(b) + b₁r + b′·c′)` for every `r`, by summing
/// the one-dimensional Gauss sums directly.
pub fn t_q_brute<T: Real>(form: &DiagonalForm, q: u64, c_prime: [i64; 3]) -> Result<TqRecord<T>> {
    if q == 0 {
        return Err(Error::Domain("modulus must be positive".into()));
    }
    if q > TQ_BRUTE_LIMIT {
        return Err(capacity("q", q, TQ_BRUTE_LIMIT));
    }
    let roots = UnitRoots::<T>::new(q);
    let a_co = form.coeffs().map(|x| x as i128);
    let us = units(q);
    let rest: Vec<Complex<T>> = us
        .iter()
        .map(|&a| {
            (1..4).fold(Complex::new(T::one(), T::zero()), |acc, i| {
                acc * gauss_sum_with(&roots, a as i128 * a_co[i], c_prime[i - 1] as i128)
            })
        })
        .collect();
    let per_r: Vec<T> = (0..q as i128)
        .map(|r| {
            let mut acc = ComplexSum::new();
            for (&a, &p) in us.iter().zip(&rest) {
                acc.add(gauss_sum_with(&roots, a as i128 * a_co[0], r) * p);
            }
            acc.value().norm()
        })
        .collect();
    let total = crate::scalar::sum_real(per_r.iter().copied());
    Ok(TqRecord { per_r, total, path: TqPath::Brute })
}

/// `T_p = p² Σ_r |c_p(F⁻¹(r, c′))|` for a prime `p ∤ 2Δ`.
pub fn t_q_prime_fast<T: Real>(form: &DiagonalForm, p: u64, c_prime: [i64; 3]) -> Result<TqRecord<T>> {
    if !is_prime(p) || p == 2 || form.discriminant() % p as i128 == 0 {
        return Err(Error::Precondition(format!("fast path needs a prime p ∤ 2Δ, got {p}")));
    }
    if p > TQ_PRIME_LIMIT {
        return Err(capacity("p", p, TQ_PRIME_LIMIT));
    }
    let p2 = T::from_int((p * p) as i128);
    let per_r: Vec<T> = (0..p as i64)
        .map(|r| {
            let dual = form.dual(&OffsetVector::new(r, c_prime));
            p2 * T::from_int(ramanujan_sum(p, dual).abs())
        })
        .collect();
    let total = crate::scalar::sum_real(per_r.iter().copied());
    Ok(TqRecord { per_r, total, path: TqPath::PrimeFast })
}

/// `T_q` by the cheapest applicable path. Composite moduli are split into
/// prime powers: for `q = v₁v₂` coprime, `|T_q(r)| = |T_{v₁}(r)|·|T_{v₂}(r)|`
/// (unit rescalings of `(r, c′)` leave each factor unchanged).
pub fn t_q<T: Real>(form: &DiagonalForm, q: u64, c_prime: [i64; 3]) -> Result<TqRecord<T>> {
    let fq = factorize(q)?;
    if fq.entries().len() == 1 {
        let (p, k) = fq.entries()[0];
        if k == 1 && p != 2 && form.discriminant() % p as i128 != 0 && p <= TQ_PRIME_LIMIT {
            return t_q_prime_fast(form, p, c_prime);
        }
    }
    if q <= TQ_BRUTE_LIMIT || fq.entries().len() <= 1 {
        return t_q_brute(form, q, c_prime);
    }
    t_q_composed(form, q, c_prime)
}

/// `T_q` assembled from its prime-power components.
pub fn t_q_composed<T: Real>(form: &DiagonalForm, q: u64, c_prime: [i64; 3]) -> Result<TqRecord<T>> {
    if q > FACTORED_LIMIT {
        return Err(capacity("q", q, FACTORED_LIMIT));
    }
    let fq = factorize(q)?;
    let parts: Vec<(u64, TqRecord<T>)> = fq
        .prime_powers()
        .map(|(_, _, pk)| t_q(form, pk, c_prime).map(|rec| (pk, rec)))
        .collect::<Result<_>>()?;
    let per_r: Vec<T> = (0..q)
        .map(|r| parts.iter().fold(T::one(), |acc, (pk, rec)| acc * rec.per_r[(r % pk) as usize]))
        .collect();
    let total = parts.iter().fold(T::one(), |acc, (_, rec)| acc * rec.total);
    Ok(TqRecord { per_r, total, path: TqPath::Multiplicative })
}
