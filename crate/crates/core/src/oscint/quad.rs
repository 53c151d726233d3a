//! Adaptive Gauss–Kronrod (7/15) quadrature with oscillation-aware initial
//! panels.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{ComplexSum, Real};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_panels: usize,
    /// Quadrature nodes per period of the fastest oscillation present.
    pub nodes_per_period: T,
}

impl<T: Real> Default for QuadratureConfig<T> {
    fn default() -> Self {
        Self { abs_tol: T::c(1e-12), rel_tol: T::c(1e-10), max_panels: 200_000, nodes_per_period: T::c(8.0) }
    }
}

impl<T: Real> QuadratureConfig<T> {
    pub fn with_tolerance(abs_tol: T, rel_tol: T) -> Self {
        Self { abs_tol, rel_tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > T::zero()) || !(self.rel_tol >= T::zero()) {
            return Err(Error::Domain("quadrature tolerance must be positive".into()));
        }
        if !(self.nodes_per_period >= T::c(8.0)) {
            return Err(Error::Domain("need at least 8 nodes per period".into()));
        }
        if self.max_panels == 0 {
            return Err(Error::Domain("panel budget must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult<T> {
    pub value: Complex<T>,
    pub error: T,
    pub panels: usize,
    pub evals: usize,
}

struct Panel<T> {
    a: T,
    b: T,
    value: Complex<T>,
    error: T,
    /// rounding floor `50ε∫|f|` of this panel
    floor: T,
}

impl<T: Real> PartialEq for Panel<T> {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl<T: Real> Eq for Panel<T> {}
impl<T: Real> PartialOrd for Panel<T> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<T: Real> Ord for Panel<T> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.partial_cmp(&o.error).unwrap_or(Ordering::Equal)
    }
}

fn gk15<T: Real, F: Fn(T) -> Complex<T>>(f: &F, a: T, b: T) -> Panel<T> {
    let half = (b - a) * T::c(0.5);
    let mid = a + half;
    let fc = f(mid);
    let mut k = fc * T::c(WGK[7]);
    let mut g = fc * T::c(WG[3]);
    let mut abs = fc.norm() * T::c(WGK[7]);
    let mut vals = [(Complex::new(T::zero(), T::zero()), Complex::new(T::zero(), T::zero())); 7];
    for j in 0..7 {
        let dx = half * T::c(XGK[j]);
        let (f1, f2) = (f(mid - dx), f(mid + dx));
        vals[j] = (f1, f2);
        k += (f1 + f2) * T::c(WGK[j]);
        abs += (f1.norm() + f2.norm()) * T::c(WGK[j]);
        if j % 2 == 1 {
            g += (f1 + f2) * T::c(WG[j / 2]);
        }
    }
    let mean = k * T::c(0.5);
    let mut asc = (fc - mean).norm() * T::c(WGK[7]);
    for j in 0..7 {
        asc += ((vals[j].0 - mean).norm() + (vals[j].1 - mean).norm()) * T::c(WGK[j]);
    }
    let h = half.abs();
    let (resasc, resabs) = (asc * h, abs * h);
    let mut err = ((k - g) * half).norm();
    if resasc > T::zero() && err > T::zero() {
        err = resasc * T::one().min((T::c(200.0) * err / resasc).powf(T::c(1.5)));
    }
    let floor = T::c(50.0) * T::epsilon() * resabs;
    err = err.max(floor);
    Panel { a, b, value: k * half, error: err, floor }
}

/// `∫_a^b f`, where `f` oscillates at most `max_freq` cycles per unit length.
pub fn integrate<T, F>(f: F, a: T, b: T, max_freq: T, cfg: &QuadratureConfig<T>) -> Result<QuadResult<T>>
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    cfg.validate()?;
    let zero = Complex::new(T::zero(), T::zero());
    if a == b {
        return Ok(QuadResult { value: zero, error: T::zero(), panels: 0, evals: 0 });
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("integration limits must be finite".into()));
    }
    let len = (b - a).abs();
    let periods = len * max_freq.abs();
    let n0 = (periods * cfg.nodes_per_period / T::c(15.0)).ceil().to_f64_lossy().max(1.0);
    if n0 > cfg.max_panels as f64 {
        return Err(Error::Convergence(format!("{n0} initial panels exceed the budget of {}", cfg.max_panels)));
    }
    let n0 = n0 as usize;
    let step = (b - a) / T::from_int(n0 as i128);
    let mut heap = BinaryHeap::with_capacity(2 * n0);
    let mut total_err = T::zero();
    let mut total_floor = T::zero();
    for i in 0..n0 {
        let lo = a + step * T::from_int(i as i128);
        let hi = if i + 1 == n0 { b } else { a + step * T::from_int(i as i128 + 1) };
        let p = gk15(&f, lo, hi);
        total_err += p.error;
        total_floor += p.floor;
        heap.push(p);
    }
    let mut evals = 15 * n0;
    let value_of = |heap: &BinaryHeap<Panel<T>>| {
        let mut s = ComplexSum::new();
        heap.iter().for_each(|p| s.add(p.value));
        s.value()
    };
    let mut value = value_of(&heap);
    let mut refreshed = 0usize;
    loop {
        // below twice the rounding floor further splitting cannot help
        let target = cfg.abs_tol.max(cfg.rel_tol * value.norm()).max(T::c(2.0) * total_floor);
        if total_err <= target {
            break;
        }
        if heap.len() >= cfg.max_panels {
            // recompute the running sum before giving up
            total_err = heap.iter().fold(T::zero(), |s, p| s + p.error);
            if total_err <= target {
                break;
            }
            return Err(Error::Convergence(format!(
                "error estimate {} above tolerance {} after {} panels",
                total_err,
                target,
                heap.len()
            )));
        }
        let worst = heap.pop().expect("non-empty");
        let mid = worst.a + (worst.b - worst.a) * T::c(0.5);
        if mid == worst.a || mid == worst.b {
            return Err(Error::Convergence(format!("panel at {} cannot be subdivided further", worst.a)));
        }
        let (l, r) = (gk15(&f, worst.a, mid), gk15(&f, mid, worst.b));
        evals += 30;
        total_err = total_err - worst.error + l.error + r.error;
        total_floor = total_floor - worst.floor + l.floor + r.floor;
        value = value - worst.value + l.value + r.value;
        heap.push(l);
        heap.push(r);
        refreshed += 1;
        if refreshed % 256 == 0 {
            total_err = heap.iter().fold(T::zero(), |s, p| s + p.error);
            total_floor = heap.iter().fold(T::zero(), |s, p| s + p.floor);
            value = value_of(&heap);
        }
    }
    let error = heap.iter().fold(T::zero(), |s, p| s + p.error);
    Ok(QuadResult { value: value_of(&heap), error, panels: heap.len(), evals })
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<T, F>(f: F, a: T, b: T, max_freq: T, cfg: &QuadratureConfig<T>) -> Result<(T, T)>
where
    T: Real,
    F: Fn(T) -> T,
{
    let r = integrate(|x| Complex::new(f(x), T::zero()), a, b, max_freq, cfg)?;
    Ok((r.value.re, r.error))
}
