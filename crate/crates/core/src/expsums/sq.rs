//! Closed-form evaluation of `S_q(n) = Σ*_{a mod q} e_q(aA₁n²) ∏_{i≥2} G(aA_i, 0; q)`
//! for moduli satisfying Condition A₀, and the `(θ, κ, s)` structure.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::form::DiagonalForm;
use super::gauss::ramanujan_from_valuation;
use crate::arith::{epsilon, factorize, gcd, jacobi, mod_inverse, valuation, Factorization, FourthRoot, MultiplicativeBasics};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Data for one prime power `p^k ∥ q`.
#[derive(Clone, Debug)]
struct Local {
    p: u64,
    k: u32,
    a: [u32; 4],
    /// `k − a₁`
    m: u32,
    /// `k − a₂ − a₃ − a₄` is even
    e_even: bool,
    /// Jacobi product `J`
    j: i32,
    /// unit phase: `ε_p^{#odd}` (odd p) or `γ(Δ)` (p = 2)
    phase: FourthRoot,
}

impl Local {
    fn new(form: &DiagonalForm, p: u64, k: u32) -> Self {
        let a = form.valuations(p);
        let u = form.units(p);
        let m = k - a[0];
        let sa: u32 = a[1] + a[2] + a[3];
        let e_even = (k as i64 - sa as i64).rem_euclid(2) == 0;
        if p == 2 {
            let inv1 = mod_inverse(u[0], 8).expect("odd unit") as i128;
            let mut j = 1;
            let mut gamma = FourthRoot::ONE;
            for i in 1..4 {
                let w = (inv1 * u[i]).rem_euclid(8);
                if (k - a[i]) % 2 == 1 {
                    j *= jacobi(2, w).expect("odd");
                }
                gamma *= epsilon(w).expect("odd").inv();
            }
            Self { p, k, a, m, e_even, j, phase: gamma }
        } else {
            let pi = p as i128;
            let mut j = 1;
            let mut nodd = 0;
            for i in 1..4 {
                if (k - a[i]) % 2 == 1 {
                    j *= jacobi(u[0] * u[i], pi).expect("odd prime");
                    nodd += 1;
                }
            }
            let eps = epsilon(pi).expect("odd prime");
            Self { p, k, a, m, e_even, j, phase: eps.pow(nodd) }
        }
    }

    fn sum_a(&self) -> u32 {
        self.a[1] + self.a[2] + self.a[3]
    }

    /// `S_{p^k}(n)` as a function of `v = v_p(n)` (`u32::MAX` for `n = 0`).
    fn eval<T: Real>(&self, v: u32) -> Result<Complex<T>> {
        let zero = Complex::new(T::zero(), T::zero());
        let p = T::from_int(self.p as i128);
        let (k, sa, m) = (self.k as i32, self.sum_a() as i32, self.m);
        let v2 = v.saturating_mul(2);
        let sign = T::from_int(self.j as i128);
        if self.p != 2 {
            let eps = epsilon(self.p as i128).expect("odd prime");
            if self.e_even {
                let c = ramanujan_from_valuation(self.p, m, v2);
                if c == 0 {
                    return Ok(zero);
                }
                let mag = p.powi((3 * k + sa) / 2 + self.a[0] as i32) * T::from_int(c);
                Ok(self.phase.to_complex::<T>() * (mag * sign))
            } else {
                if m % 2 == 0 || v2 != m - 1 {
                    return Ok(zero);
                }
                let mag = p.powi((5 * k + sa - 1) / 2);
                Ok((self.phase * eps).to_complex::<T>() * (mag * sign))
            }
        } else {
            let gamma = self.phase.to_complex::<T>();
            let gamma_inv = self.phase.inv().to_complex::<T>();
            let i = Complex::new(T::zero(), T::one());
            let pre = T::c(2.0).powf(T::from_int((5 * k + sa) as i128) / T::c(2.0)) * sign;
            if self.e_even {
                if v2 < m - 2 {
                    return Ok(zero);
                }
                let r = match v2 - (m - 2) {
                    0 => 1,
                    1 => 2,
                    _ => 0,
                };
                let d = match r {
                    0 => gamma + i * gamma_inv,
                    1 => i * (gamma - i * gamma_inv),
                    2 => -(gamma + i * gamma_inv),
                    _ => {
                        return Err(Error::Consistency(format!(
                            "residue 3 mod 4 reached for 2^{} with v_2(n) = {v}",
                            self.k
                        )))
                    }
                };
                // (1+i)³/4 = (−1+i)/2
                let c = Complex::new(-T::c(0.5), T::c(0.5));
                Ok(c * d * pre)
            } else {
                if v2 != m - 3 {
                    return Ok(zero);
                }
                Ok(-(gamma + gamma_inv) * (pre / T::SQRT_2()))
            }
        }
    }
}

/// Evaluator for `S_q(n)` with the per-prime data of `(F, q)` precomputed.
#[derive(Clone, Debug)]
pub struct SqEvaluator {
    form: DiagonalForm,
    q: Factorization,
    locals: Vec<Local>,
}

impl SqEvaluator {
    pub fn new(form: &DiagonalForm, q: &Factorization) -> Result<Self> {
        if !form.satisfies_a0(q) {
            return Err(Error::Precondition(format!("Condition A0 fails for q = {} and F = {form}", q.value())));
        }
        let locals = q.entries().iter().map(|&(p, k)| Local::new(form, p, k)).collect();
        Ok(Self { form: *form, q: q.clone(), locals })
    }

    pub fn form(&self) -> &DiagonalForm {
        &self.form
    }

    pub fn modulus(&self) -> &Factorization {
        &self.q
    }

    pub fn eval<T: Real>(&self, n: i128) -> Result<Complex<T>> {
        let mut out = Complex::new(T::one(), T::zero());
        for l in &self.locals {
            let v = l.eval::<T>(valuation(n, l.p))?;
            if v.re == T::zero() && v.im == T::zero() {
                return Ok(v);
            }
            out = out * v;
        }
        Ok(out)
    }

    /// Values of `S_{p^k}(n)` for `v_p(n) = 0, 1, …, k` (the last entry also
    /// covers `v_p(n) > k`).
    fn local_profile<T: Real>(&self, idx: usize) -> Result<Vec<Complex<T>>> {
        let l = &self.locals[idx];
        (0..=l.k).map(|j| l.eval::<T>(if j == l.k { u32::MAX } else { j })).collect()
    }

    /// `J = ∏` of the Jacobi symbols over all primes of `q`.
    pub fn jacobi_product(&self) -> i32 {
        self.locals.iter().map(|l| l.j).product()
    }
}

/// `S_q(n)` from the closed form.
pub fn sq_closed<T: Real>(form: &DiagonalForm, q: u64, n: i128) -> Result<Complex<T>> {
    SqEvaluator::new(form, &factorize(q)?)?.eval(n)
}

/// `S_q(n)` with the factorization of `q` supplied.
pub fn sq_closed_factored<T: Real>(form: &DiagonalForm, q: &Factorization, n: i128) -> Result<Complex<T>> {
    SqEvaluator::new(form, q)?.eval(n)
}

/// The Jacobi-symbol product `J` of `(F, q)`; `±1`.
pub fn jacobi_product_j(form: &DiagonalForm, q: u64) -> Result<i32> {
    Ok(SqEvaluator::new(form, &factorize(q)?)?.jacobi_product())
}

/// `S_q(n) = s·1[θ | n]·1[(n/θ, κ) = 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SqStructure {
    pub theta: u64,
    pub kappa: u64,
    pub s_re: f64,
    pub s_im: f64,
    /// `|s| / q^{5/2}`
    pub growth: f64,
    /// `ρ(q / (s(q)(q, A₁))) / θ`
    pub theta_ratio: f64,
}

impl SqStructure {
    pub fn s_value(&self) -> Complex<f64> {
        Complex::new(self.s_re, self.s_im)
    }

    /// Value the structure predicts at `n`.
    pub fn predict(&self, n: i128) -> Complex<f64> {
        let th = self.theta as i128;
        if n % th != 0 || gcd(n / th, self.kappa as i128) != 1 {
            Complex::new(0.0, 0.0)
        } else {
            self.s_value()
        }
    }
}

/// Largest `q` for which [`sq_structure`] checks every `n ∈ [1, q]`.
pub const STRUCTURE_VERIFY_LIMIT: u64 = 1_000_000;

/// Extract `(θ, κ, s)` prime by prime and verify it against the closed form
/// for every `n ∈ [1, q]`.
pub fn sq_structure(form: &DiagonalForm, q: u64) -> Result<SqStructure> {
    if q > STRUCTURE_VERIFY_LIMIT {
        return Err(crate::error::capacity("q", q, STRUCTURE_VERIFY_LIMIT));
    }
    let fq = factorize(q)?;
    let ev = SqEvaluator::new(form, &fq)?;
    let qf = q as f64;
    let tol = 1e-9 * qf.powf(2.5);
    let (mut theta, mut kappa) = (1u64, 1u64);
    let mut s = Complex::new(1.0f64, 0.0);
    let mut vanishes = false;
    for (idx, &(p, k)) in fq.entries().iter().enumerate() {
        let prof = ev.local_profile::<f64>(idx)?;
        let scale = (p as f64).powf(2.5 * k as f64);
        let nz: Vec<usize> = (0..prof.len()).filter(|&j| prof[j].norm() > 1e-9 * scale).collect();
        let Some(&t) = nz.first() else {
            vanishes = true;
            continue;
        };
        let distinct = nz.iter().any(|&j| (prof[j] - prof[t]).norm() > 1e-9 * scale);
        let contiguous_to_top = nz.len() == prof.len() - t;
        if distinct || !(nz.len() == 1 || contiguous_to_top) {
            let shown: Vec<String> = prof.iter().enumerate().map(|(j, z)| format!("v={j}: {:.6}{:+.6}i", z.re, z.im)).collect();
            return Err(Error::Consistency(format!(
                "S_{{{p}^{k}}}(n) for F = {form} has no single-valued (θ, κ, s) structure: [{}]",
                shown.join(", ")
            )));
        }
        theta *= p.pow(t as u32);
        if nz.len() == 1 && t < k as usize {
            kappa *= p;
        }
        s *= prof[t];
    }
    let (theta, kappa, s) = if vanishes { (1, 1, Complex::new(0.0, 0.0)) } else { (theta, kappa, s) };
    let basics = MultiplicativeBasics::of(&fq);
    let g = gcd(q as i128, form.coeffs()[0] as i128) as u64;
    let inner = q / gcd(q as i128, (basics.squarefree_kernel * g) as i128) as u64;
    let rho = factorize(inner.max(1)).map(|f| MultiplicativeBasics::of(&f).rho).unwrap_or(1);
    let st = SqStructure {
        theta,
        kappa,
        s_re: s.re,
        s_im: s.im,
        growth: s.norm() / qf.powf(2.5),
        theta_ratio: rho as f64 / theta as f64,
    };
    for n in 1..=q as i128 {
        let got: Complex<f64> = ev.eval(n)?;
        if (got - st.predict(n)).norm() > tol {
            return Err(Error::Consistency(format!(
                "structure (θ={}, κ={}, s={:.6}{:+.6}i) for F = {form}, q = {q} mispredicts n = {n}: closed form gives {:.6}{:+.6}i",
                st.theta, st.kappa, st.s_re, st.s_im, got.re, got.im
            )));
        }
    }
    Ok(st)
}
