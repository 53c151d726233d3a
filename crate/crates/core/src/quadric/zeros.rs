use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{capacity, Error, Result};
use crate::expsums::DiagonalForm;

pub const NAIVE_LIMIT: u64 = 64;
pub const MEET_LIMIT: u64 = 2000;

/// Integer point `(x₁, x₂, x₃, x₄)`.
pub type Point = [i64; 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Naive,
    MeetInMiddle,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Self::Naive),
            "meet_in_middle" | "meet-in-middle" | "mim" => Ok(Self::MeetInMiddle),
            _ => Err(Error::Usage(format!("unknown method {s:?} (naive | meet_in_middle)"))),
        }
    }
}

/// `⌈X/2⌉ ..= 2X`, the integer box covering the weight's support.
pub fn box_range(x: u64) -> (i64, i64) {
    (x.div_ceil(2) as i64, 2 * x as i64)
}

fn check_scale(x: u64, method: Method) -> Result<()> {
    if x == 0 {
        return Err(Error::Domain("X must be positive".into()));
    }
    let limit = match method {
        Method::Naive => NAIVE_LIMIT,
        Method::MeetInMiddle => MEET_LIMIT,
    };
    if x > limit {
        return Err(capacity("X", x, limit));
    }
    Ok(())
}

/// Sorted `(A₁x₁² + A₂x₂², x₁ << 16 | x₂)` over the box.
struct PairIndex {
    entries: Vec<(i64, u32)>,
}

impl PairIndex {
    fn new(a1: i64, a2: i64, lo: i64, hi: i64) -> Self {
        let side = (hi - lo + 1) as usize;
        let mut entries = Vec::with_capacity(side * side);
        for x1 in lo..=hi {
            for x2 in lo..=hi {
                entries.push((a1 * x1 * x1 + a2 * x2 * x2, ((x1 as u32) << 16) | x2 as u32));
            }
        }
        entries.sort_unstable();
        Self { entries }
    }

    fn matching(&self, v: i64) -> &[(i64, u32)] {
        let start = self.entries.partition_point(|e| e.0 < v);
        let len = self.entries[start..].partition_point(|e| e.0 == v);
        &self.entries[start..start + len]
    }
}

/// Visits every zero in the box, grouped by `x₃`.
///
/// `row` is called once per `x₃` (in parallel) with that row's zeros; the
/// per-row results come back in increasing `x₃`, so any fold over them is
/// independent of scheduling.
pub(crate) fn map_zero_rows<R, F>(form: &DiagonalForm, x: u64, method: Method, row: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(&[Point]) -> R + Sync,
{
    check_scale(x, method)?;
    let (lo, hi) = box_range(x);
    if form.is_definite() {
        return Ok(Vec::new());
    }
    let [a1, a2, a3, a4] = form.coeffs();
    if [a1, a2, a3, a4].iter().any(|a| a.unsigned_abs() > 1 << 30) {
        return Err(capacity("|Aᵢ|", [a1, a2, a3, a4].iter().map(|a| a.unsigned_abs()).max().unwrap(), 1u64 << 30));
    }
    let rows: Vec<Result<R>> = match method {
        Method::Naive => (lo..=hi)
            .into_par_iter()
            .map(|x3| {
                let mut pts = Vec::new();
                for x1 in lo..=hi {
                    for x2 in lo..=hi {
                        for x4 in lo..=hi {
                            let p = [x1, x2, x3, x4];
                            if form.eval(p) == 0 {
                                pts.push(p);
                            }
                        }
                    }
                }
                pts.sort_unstable();
                Ok(row(&pts))
            })
            .collect(),
        Method::MeetInMiddle => {
            let index = PairIndex::new(a1, a2, lo, hi);
            (lo..=hi)
                .into_par_iter()
                .map(|x3| {
                    let mut pts = Vec::new();
                    for x4 in lo..=hi {
                        for &(_, packed) in index.matching(-(a3 * x3 * x3 + a4 * x4 * x4)) {
                            pts.push([(packed >> 16) as i64, (packed & 0xffff) as i64, x3, x4]);
                        }
                    }
                    pts.sort_unstable();
                    for p in &pts {
                        if form.eval(*p) != 0 || p.iter().any(|&c| c < lo || c > hi) {
                            return Err(Error::Consistency(format!("enumerated non-zero {p:?} of {form}")));
                        }
                    }
                    Ok(row(&pts))
                })
                .collect()
        }
    };
    rows.into_iter().collect()
}

/// All `x` in the box `[⌈X/2⌉, 2X]⁴` with `F(x) = 0`, sorted lexicographically.
pub fn enumerate_zeros(form: &DiagonalForm, x: u64, method: Method) -> Result<Vec<Point>> {
    let mut all: Vec<Point> = map_zero_rows(form, x, method, |pts| pts.to_vec())?.concat();
    all.sort_unstable();
    Ok(all)
}
