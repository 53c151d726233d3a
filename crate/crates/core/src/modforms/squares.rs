use crate::arith::{factorize, Factorization, SpfTable};

fn r_from_factorization(f: &Factorization) -> u64 {
    let mut r = 4u64;
    for &(p, e) in f.entries() {
        match p % 4 {
            1 => r *= e as u64 + 1,
            3 if e % 2 == 1 => return 0,
            _ => {}
        }
    }
    r
}

/// `r(n) = #{(a, b) ∈ ℤ² : a² + b² = n}`; `r(0) = 1`, `r(n) = 0` for `n < 0`.
pub fn r_two_squares(n: i128) -> u64 {
    if n < 0 {
        return 0;
    }
    if n == 0 {
        return 1;
    }
    let n = u64::try_from(n).expect("n fits in u64");
    r_from_factorization(&factorize(n).expect("positive"))
}

/// `r(n)` for every `0 ≤ n ≤ limit`.
#[derive(Clone, Debug)]
pub struct RTable {
    r: Vec<u32>,
}

impl RTable {
    pub fn new(limit: usize) -> Self {
        let spf = SpfTable::new(limit.max(1));
        let mut r = Vec::with_capacity(limit + 1);
        r.push(1);
        for n in 1..=limit {
            r.push(r_from_factorization(&spf.factor(n)) as u32);
        }
        Self { r }
    }

    pub fn limit(&self) -> usize {
        self.r.len() - 1
    }

    /// `r(n)` with the negative-argument convention; panics above the limit.
    #[inline]
    pub fn get(&self, n: i128) -> u32 {
        if n < 0 {
            0
        } else {
            self.r[n as usize]
        }
    }
}
