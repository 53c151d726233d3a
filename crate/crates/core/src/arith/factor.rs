//! Integer factorization: trial division by a cached prime list, then
//! Miller–Rabin and Brent's variant of Pollard rho for large cofactors.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 1_000_000;

/// Prime-power decomposition of a positive integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Factorization {
    entries: Vec<(u64, u32)>,
}

impl Factorization {
    /// The empty factorization, i.e. of 1.
    pub fn one() -> Self {
        Self { entries: Vec::new() }
    }

    /// Build from `(prime, exponent)` pairs. Entries are sorted and merged;
    /// primality of each base is checked.
    pub fn from_entries(entries: impl IntoIterator<Item = (u64, u32)>) -> Result<Self> {
        let mut v: Vec<(u64, u32)> = entries.into_iter().filter(|&(_, e)| e > 0).collect();
        v.sort_unstable();
        let mut merged: Vec<(u64, u32)> = Vec::with_capacity(v.len());
        for (p, e) in v {
            if !is_prime(p) {
                return Err(Error::Domain(format!("{p} is not prime")));
            }
            match merged.last_mut() {
                Some(last) if last.0 == p => last.1 += e,
                _ => merged.push((p, e)),
            }
        }
        let f = Self { entries: merged };
        f.try_value()?;
        Ok(f)
    }

    pub fn entries(&self) -> &[(u64, u32)] {
        &self.entries
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.iter().map(|&(p, _)| p)
    }

    pub fn is_one(&self) -> bool {
        self.entries.is_empty()
    }

    /// `v_p` of the factored integer.
    pub fn valuation(&self, p: u64) -> u32 {
        self.entries.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, e)| e)
    }

    fn try_value(&self) -> Result<u64> {
        let mut n: u64 = 1;
        for &(p, e) in &self.entries {
            for _ in 0..e {
                n = n
                    .checked_mul(p)
                    .ok_or_else(|| crate::error::capacity("factored value", u128::MAX, u64::MAX))?;
            }
        }
        Ok(n)
    }

    /// The integer this factorization represents.
    pub fn value(&self) -> u64 {
        self.try_value().expect("validated on construction")
    }

    /// Prime powers `p^e`, in increasing order of `p`.
    pub fn prime_powers(&self) -> impl Iterator<Item = (u64, u32, u64)> + '_ {
        self.entries.iter().map(|&(p, e)| (p, e, p.pow(e)))
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.entries {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve(TRIAL_LIMIT as usize))
}

/// Primes up to and including `n`.
pub fn sieve(n: usize) -> Vec<u32> {
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic primality test for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A nontrivial factor of the odd composite `n`.
fn brent(n: u64) -> u64 {
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q, m) = (2u64, 1u64, 1u64, 128u64);
        let (mut x, mut ys, mut g);
        loop {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            loop {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += m;
                if k >= r || g != 1 {
                    break;
                }
            }
            r *= 2;
            if g != 1 {
                break;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g != 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn split_large(n: u64, out: &mut Vec<(u64, u32)>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push((n, 1));
        return;
    }
    let d = brent(n);
    split_large(d, out);
    split_large(n / d, out);
}

/// Factor `n ≥ 1`.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Domain("cannot factor 0".into()));
    }
    let mut m = n;
    let mut entries = Vec::new();
    for &p in small_primes() {
        let p = p as u64;
        if p * p > m {
            break;
        }
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            entries.push((p, e));
        }
    }
    if m > 1 {
        if m < TRIAL_LIMIT * TRIAL_LIMIT {
            entries.push((m, 1));
        } else {
            let mut big = Vec::new();
            split_large(m, &mut big);
            entries.extend(big);
        }
    }
    Factorization::from_entries(entries)
}

/// Smallest-prime-factor table for `0..=n`, for bulk factorization.
#[derive(Clone, Debug)]
pub struct SpfTable {
    spf: Vec<u32>,
}

impl SpfTable {
    pub fn new(n: usize) -> Self {
        let mut spf = vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] == 0 {
                let mut j = i;
                while j <= n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Self { spf }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    /// Factor `n` with `1 ≤ n ≤ limit`.
    pub fn factor(&self, mut n: usize) -> Factorization {
        assert!(n >= 1 && n <= self.limit());
        let mut entries = Vec::new();
        while n > 1 {
            let p = self.spf[n] as usize;
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            entries.push((p as u64, e));
        }
        Factorization { entries }
    }
}
