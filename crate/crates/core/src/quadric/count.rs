use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;

use super::weight::SmoothWeight;
use super::zeros::{box_range, map_zero_rows, Method, Point, MEET_LIMIT};
use crate::error::{capacity, Error, Result};
use crate::expsums::DiagonalForm;
use crate::modforms::{NormalizedCoefficients, RTable};
use crate::scalar::{sum_real, Real};

/// Coefficient `a(x₁)` attached to each zero.
#[derive(Clone, Copy, Debug)]
pub enum Weights<'a, T> {
    Unit,
    Lambda(&'a NormalizedCoefficients<T>),
    AbsLambda(&'a NormalizedCoefficients<T>),
}

/// Weight selector without the table, as named on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightKind {
    Unit,
    Lambda,
    AbsLambda,
}

impl FromStr for WeightKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(Self::Unit),
            "lambda" => Ok(Self::Lambda),
            "abs_lambda" | "abs-lambda" => Ok(Self::AbsLambda),
            _ => Err(Error::Usage(format!("unknown weight {s:?} (unit | lambda | abs_lambda)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CountResult<T> {
    pub x: u64,
    pub weighted_value: T,
    pub zero_count: u64,
    pub elapsed: Duration,
}

/// `N(1;X)`, `N(λ;X)` and `N(|λ|;X)` from a single enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CountTriple<T> {
    pub x: u64,
    pub zero_count: u64,
    pub unit: T,
    pub lambda: T,
    pub abs_lambda: T,
    pub elapsed: Duration,
}

/// `w(i/X)` per coordinate for `i` in the box, indexed by `i − lo`.
fn profile_table<T: Real>(w: &SmoothWeight<T>, x: u64) -> (i64, Vec<T>) {
    let (lo, hi) = box_range(x);
    let xt = T::from_int(x as i128);
    (lo, (lo..=hi).map(|i| w.profile(T::from_int(i as i128) / xt)).collect())
}

fn covers<T: Real>(coeffs: &NormalizedCoefficients<T>, x: u64) -> Result<()> {
    if (coeffs.limit() as u64) < 2 * x {
        return Err(capacity("λ table limit for 2X", 2 * x, coeffs.limit() as u64));
    }
    Ok(())
}

fn row_sums<T: Real, const K: usize>(
    pts: &[Point],
    lo: i64,
    prof: &[T],
    a: impl Fn(usize) -> [T; K],
) -> (u64, [T; K]) {
    let mut s = [T::zero(); K];
    for p in pts {
        let w = p.iter().fold(T::one(), |acc, &c| acc * prof[(c - lo) as usize]);
        let coef = a(p[0] as usize);
        for k in 0..K {
            s[k] += w * coef[k];
        }
    }
    (pts.len() as u64, s)
}

/// `N(a;X) = Σ_{F(x)=0} w(x/X) a(x₁)`.
pub fn weighted_count<T: Real>(
    form: &DiagonalForm,
    x: u64,
    weights: Weights<'_, T>,
    w: &SmoothWeight<T>,
    method: Method,
) -> Result<CountResult<T>> {
    let start = Instant::now();
    if let Weights::Lambda(c) | Weights::AbsLambda(c) = weights {
        covers(c, x)?;
    }
    let (lo, prof) = profile_table(w, x);
    let rows = map_zero_rows(form, x, method, |pts| {
        row_sums(pts, lo, &prof, |x1| match weights {
            Weights::Unit => [T::one()],
            Weights::Lambda(c) => [c.at(x1)],
            Weights::AbsLambda(c) => [c.at(x1).abs()],
        })
    })?;
    Ok(CountResult {
        x,
        zero_count: rows.iter().map(|r| r.0).sum(),
        weighted_value: sum_real(rows.iter().map(|r| r.1[0])),
        elapsed: start.elapsed(),
    })
}

pub fn weighted_counts<T: Real>(
    form: &DiagonalForm,
    x: u64,
    coeffs: &NormalizedCoefficients<T>,
    w: &SmoothWeight<T>,
    method: Method,
) -> Result<CountTriple<T>> {
    let start = Instant::now();
    covers(coeffs, x)?;
    let (lo, prof) = profile_table(w, x);
    let rows = map_zero_rows(form, x, method, |pts| {
        row_sums(pts, lo, &prof, |x1| {
            let l = coeffs.at(x1);
            [T::one(), l, l.abs()]
        })
    })?;
    Ok(CountTriple {
        x,
        zero_count: rows.iter().map(|r| r.0).sum(),
        unit: sum_real(rows.iter().map(|r| r.1[0])),
        lambda: sum_real(rows.iter().map(|r| r.1[1])),
        abs_lambda: sum_real(rows.iter().map(|r| r.1[2])),
        elapsed: start.elapsed(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CancellationRow<T> {
    pub x: u64,
    pub zero_count: u64,
    pub n_unit: T,
    pub n_lambda: T,
    pub n_abs_lambda: T,
    /// `|N(λ;X)| / N(|λ|;X)`
    pub ratio: T,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CancellationTable<T> {
    pub rows: Vec<CancellationRow<T>>,
    /// Least-squares slopes against `log X`; `None` with a single scale.
    pub exponent_lambda: Option<T>,
    pub exponent_abs_lambda: Option<T>,
    pub exponent_unit: Option<T>,
}

/// Slope of the least-squares line through `(ln xᵢ, ln yᵢ)`.
pub fn loglog_slope<T: Real>(points: &[(T, T)]) -> Option<T> {
    if points.len() < 2 {
        return None;
    }
    let n = T::from_int(points.len() as i128);
    let (lx, ly): (Vec<T>, Vec<T>) = points.iter().map(|&(x, y)| (x.ln(), y.abs().ln())).unzip();
    let mx = sum_real(lx.iter().copied()) / n;
    let my = sum_real(ly.iter().copied()) / n;
    let sxy = sum_real(lx.iter().zip(&ly).map(|(&a, &b)| (a - mx) * (b - my)));
    let sxx = sum_real(lx.iter().map(|&a| (a - mx) * (a - mx)));
    (sxx > T::zero()).then(|| sxy / sxx)
}

pub fn cancellation_experiment<T: Real>(
    form: &DiagonalForm,
    x_list: &[u64],
    coeffs: &NormalizedCoefficients<T>,
    w: &SmoothWeight<T>,
    method: Method,
) -> Result<CancellationTable<T>> {
    if x_list.is_empty() {
        return Err(Error::Domain("no scales given".into()));
    }
    if x_list.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::Domain("scales must be strictly increasing".into()));
    }
    let mut rows = Vec::with_capacity(x_list.len());
    for &x in x_list {
        let c = weighted_counts(form, x, coeffs, w, method)?;
        let ratio = if c.abs_lambda > T::zero() { c.lambda.abs() / c.abs_lambda } else { T::zero() };
        rows.push(CancellationRow {
            x,
            zero_count: c.zero_count,
            n_unit: c.unit,
            n_lambda: c.lambda,
            n_abs_lambda: c.abs_lambda,
            ratio,
            seconds: c.elapsed.as_secs_f64(),
        });
    }
    let fit = |f: fn(&CancellationRow<T>) -> T| {
        loglog_slope(&rows.iter().map(|r| (T::from_int(r.x as i128), f(r))).collect::<Vec<_>>())
    };
    Ok(CancellationTable {
        exponent_lambda: fit(|r| r.n_lambda),
        exponent_abs_lambda: fit(|r| r.n_abs_lambda),
        exponent_unit: fit(|r| r.n_unit),
        rows,
    })
}

/// Largest argument for which `theorem1_sum` tabulates `r(n)` up front.
const R_TABLE_LIMIT: u128 = 20_000_000;

/// `Σ_{m,n ≤ X} r(Am² + Bn²) λ(m)`.
pub fn theorem1_sum<T: Real>(a: i64, b: i64, x: u64, coeffs: &NormalizedCoefficients<T>) -> Result<T> {
    if a == 0 || b == 0 {
        return Err(Error::Domain("A and B must be nonzero".into()));
    }
    if x == 0 {
        return Err(Error::Domain("X must be positive".into()));
    }
    if x > MEET_LIMIT {
        return Err(capacity("X", x, MEET_LIMIT));
    }
    coeffs.ensure_covers(x as usize)?;
    let xx = x as i128 * x as i128;
    let top = (a.max(0) as i128 + b.max(0) as i128) * xx;
    let table = (top as u128 <= R_TABLE_LIMIT).then(|| RTable::new(top.max(0) as usize));
    let r = |v: i128| -> T {
        let r = match &table {
            Some(t) => t.get(v) as u64,
            None => crate::modforms::r_two_squares(v),
        };
        T::from_int(r as i128)
    };
    let terms = (1..=x as i128).map(|m| {
        let inner = sum_real((1..=x as i128).map(|n| r(a as i128 * m * m + b as i128 * n * n)));
        inner * coeffs.at(m as usize)
    });
    Ok(sum_real(terms))
}
