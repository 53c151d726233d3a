//! Identities relating the complete sums: multiplicativity in the modulus and
//! the collapse of `A_q(n, c′)` to `S_q(n)` on isotropic offsets.

use num_complex::Complex;

use super::form::{DiagonalForm, OffsetVector};
use super::oracle::{s_dq_brute, AqOracle, Tier};
use super::sq::SqEvaluator;
use crate::arith::{factorize, gcd, mod_inverse};
use crate::error::{Error, Result};
use crate::report::VerificationReport;
use crate::scalar::Real;

fn scale(c: [i64; 3], u: u64, m: u64) -> [i64; 3] {
    c.map(|x| ((x as i128 * u as i128).rem_euclid(m.max(1) as i128)) as i64)
}

fn coprime(a: u64, b: u64) -> Result<()> {
    if gcd(a as i128, b as i128) != 1 {
        return Err(Error::Domain(format!("{a} and {b} are not coprime")));
    }
    Ok(())
}

/// `A_{v₁}(c₁, v̄₂c′)·A_{v₂}(c₁, v̄₁c′)`, the split side of the
/// multiplicativity relation for `A_q`.
pub fn a_q_split<T: Real>(form: &DiagonalForm, v1: u64, v2: u64, c: &OffsetVector) -> Result<Complex<T>> {
    coprime(v1, v2)?;
    let v2b = mod_inverse(v2 as i128, v1)?;
    let v1b = mod_inverse(v1 as i128, v2)?;
    let left = AqOracle::<T>::new(form, v1, scale(c.c_prime, v2b, v1))?.eval(c.c1 as i128);
    let right = AqOracle::<T>::new(form, v2, scale(c.c_prime, v1b, v2))?.eval(c.c1 as i128);
    Ok(left * right)
}

/// `S_{u₁,v₁}(ū₂²c₁, v̄₂c′)·S_{u₂,v₂}(ū₁²c₁, v̄₁c′)` for `d = u₁u₂`,
/// `q = v₁v₂`, `u_i | v_i`, `(v₁, v₂) = 1`.
pub fn s_dq_split<T: Real>(
    form: &DiagonalForm,
    (u1, u2): (u64, u64),
    (v1, v2): (u64, u64),
    c: &OffsetVector,
    tier: Tier,
) -> Result<Complex<T>> {
    coprime(v1, v2)?;
    if v1 % u1 != 0 || v2 % u2 != 0 {
        return Err(Error::Domain(format!("need u1 | v1 and u2 | v2, got ({u1},{u2}) and ({v1},{v2})")));
    }
    let u2b = mod_inverse(u2 as i128, u1)? as i128;
    let u1b = mod_inverse(u1 as i128, u2)? as i128;
    let v2b = mod_inverse(v2 as i128, v1)?;
    let v1b = mod_inverse(v1 as i128, v2)?;
    let c1 = c.c1 as i128;
    let first = OffsetVector::new(((u2b * u2b * c1).rem_euclid(u1 as i128)) as i64, scale(c.c_prime, v2b, v1));
    let second = OffsetVector::new(((u1b * u1b * c1).rem_euclid(u2 as i128)) as i64, scale(c.c_prime, v1b, v2));
    Ok(s_dq_brute::<T>(form, u1, v1, &first, tier)? * s_dq_brute::<T>(form, u2, v2, &second, tier)?)
}

/// Compare `A_q(n, c′)` with `S_q(n)` for every `n mod q` on an offset with
/// `F⁻¹(0, c′) = 0`.
pub fn a_q_with_offset_equals_sq(form: &DiagonalForm, q: u64, c_prime: [i64; 3]) -> Result<VerificationReport> {
    let c0 = OffsetVector::new(0, c_prime);
    if c_prime == [0, 0, 0] {
        return Err(Error::Precondition("c′ must be nonzero".into()));
    }
    if form.dual(&c0) != 0 {
        return Err(Error::Precondition(format!("F⁻¹(0, c′) = {} ≠ 0", form.dual(&c0))));
    }
    let fq = factorize(q)?;
    for &(p, _) in fq.entries() {
        let a = form.valuations(p);
        for i in 1..4 {
            if c_prime[i - 1] as i128 % (p as i128).pow(a[i]) != 0 {
                return Err(Error::Precondition(format!("c_{} not divisible by {p}^{}", i + 1, a[i])));
            }
        }
    }
    let closed = SqEvaluator::new(form, &fq)?;
    let oracle = AqOracle::<f64>::new(form, q, c_prime)?;
    let tol = 1e-6 * (q as f64).powf(2.5);
    let mut rep = VerificationReport::new(format!("offset-collapse F={form} q={q} c'={c_prime:?}"));
    let mut worst = 0.0f64;
    for n in 0..q as i128 {
        let a = oracle.eval(n);
        let s: Complex<f64> = closed.eval(n)?;
        worst = worst.max((a - s).norm());
        rep.check_complex(format!("n={n}"), s, a, tol);
    }
    rep.metric("max_abs_error", worst);
    Ok(rep)
}
