use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, strip, valuation, Factorization};
use crate::error::{Error, Result};

/// `F(x) = A₁x₁² + A₂x₂² + A₃x₃² + A₄x₄²` with every `A_i ≠ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[i64; 4]", into = "[i64; 4]")]
pub struct DiagonalForm {
    a: [i64; 4],
}

impl DiagonalForm {
    pub fn new(a: [i64; 4]) -> Result<Self> {
        if a.contains(&0) {
            return Err(Error::Domain(format!("form coefficients must be nonzero, got {a:?}")));
        }
        Ok(Self { a })
    }

    pub fn coeffs(&self) -> [i64; 4] {
        self.a
    }

    /// `Δ = A₁A₂A₃A₄`.
    pub fn discriminant(&self) -> i128 {
        self.a.iter().map(|&x| x as i128).product()
    }

    /// `a_i(p) = v_p(A_i)`.
    pub fn valuations(&self, p: u64) -> [u32; 4] {
        self.a.map(|x| valuation(x as i128, p))
    }

    /// `Ā_i = A_i / p^{a_i(p)}`.
    pub fn units(&self, p: u64) -> [i128; 4] {
        self.a.map(|x| strip(x as i128, p))
    }

    pub fn eval(&self, x: [i64; 4]) -> i128 {
        (0..4).map(|i| self.a[i] as i128 * x[i] as i128 * x[i] as i128).sum()
    }

    /// Positive or negative definite.
    pub fn is_definite(&self) -> bool {
        self.a.iter().all(|&x| x > 0) || self.a.iter().all(|&x| x < 0)
    }

    /// The dual form `F⁻¹(c) = Σ_i (∏_{j≠i} A_j) c_i²`.
    pub fn dual(&self, c: &OffsetVector) -> i128 {
        let v = c.as_array();
        (0..4)
            .map(|i| {
                let cof: i128 = (0..4).filter(|&j| j != i).map(|j| self.a[j] as i128).product();
                cof * v[i] as i128 * v[i] as i128
            })
            .sum()
    }

    pub fn satisfies_a0(&self, q: &Factorization) -> bool {
        condition_a0_factored(q, self.a, self.discriminant())
    }
}

impl TryFrom<[i64; 4]> for DiagonalForm {
    type Error = Error;
    fn try_from(a: [i64; 4]) -> Result<Self> {
        Self::new(a)
    }
}

impl From<DiagonalForm> for [i64; 4] {
    fn from(f: DiagonalForm) -> Self {
        f.a
    }
}

impl fmt::Display for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.a[0], self.a[1], self.a[2], self.a[3])
    }
}

impl FromStr for DiagonalForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().trim_matches(|c| c == '(' || c == ')').split(',').collect();
        if parts.len() != 4 {
            return Err(Error::Usage(format!("expected four comma-separated coefficients, got {s:?}")));
        }
        let mut a = [0i64; 4];
        for (slot, p) in a.iter_mut().zip(parts) {
            *slot = p.trim().parse().map_err(|_| Error::Usage(format!("bad coefficient {p:?} in {s:?}")))?;
        }
        Self::new(a)
    }
}

/// `c = (c₁, c′)` with `c′ = (c₂, c₃, c₄)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct OffsetVector {
    pub c1: i64,
    pub c_prime: [i64; 3],
}

impl OffsetVector {
    pub fn new(c1: i64, c_prime: [i64; 3]) -> Self {
        Self { c1, c_prime }
    }

    pub fn from_array(c: [i64; 4]) -> Self {
        Self { c1: c[0], c_prime: [c[1], c[2], c[3]] }
    }

    pub fn as_array(&self) -> [i64; 4] {
        [self.c1, self.c_prime[0], self.c_prime[1], self.c_prime[2]]
    }

    pub fn with_c1(&self, c1: i64) -> Self {
        Self { c1, ..*self }
    }
}

/// Condition A₀ for `q` and coefficients `l`, with `Δ` deciding the odd-prime branch.
pub fn condition_a0(q: u64, l: [i64; 4], delta: i128) -> bool {
    match factorize(q) {
        Ok(f) => condition_a0_factored(&f, l, delta),
        Err(_) => false,
    }
}

pub fn condition_a0_factored(q: &Factorization, l: [i64; 4], delta: i128) -> bool {
    q.entries().iter().all(|&(p, k)| {
        let v = l.map(|x| valuation(x as i128, p));
        let vmax = *v.iter().max().expect("four entries");
        if p == 2 {
            k >= 3 + vmax
        } else if delta % p as i128 != 0 {
            k >= vmax
        } else {
            k >= (2 + v[0]).max(v[1]).max(v[2]).max(v[3])
        }
    })
}

/// `q = q_even·q₁·q₂`, `q₂ = q₃·q₄`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QDecomposition {
    pub q_even: u64,
    pub q1: u64,
    pub q2: u64,
    pub q3: u64,
    pub q4: u64,
}

pub fn decompose_q(form: &DiagonalForm, q: u64) -> Result<QDecomposition> {
    Ok(decompose_factored(form, &factorize(q)?))
}

pub fn decompose_factored(form: &DiagonalForm, q: &Factorization) -> QDecomposition {
    let mut d = QDecomposition { q_even: 1, q1: 1, q2: 1, q3: 1, q4: 1 };
    for (p, k, pk) in q.prime_powers() {
        if p == 2 {
            d.q_even *= pk;
            continue;
        }
        let a = form.valuations(p);
        let k = k as i64;
        let e = k - (a[1] + a[2] + a[3]) as i64;
        if e.rem_euclid(2) == 1 {
            d.q1 *= pk;
        } else {
            d.q2 *= pk;
            if (k - a[0] as i64).rem_euclid(2) == 1 {
                d.q3 *= pk;
            } else {
                d.q4 *= pk;
            }
        }
    }
    d
}
