//! The registered checks of each module, gathered into reports.
//!
//! Reports carry no timing so that a fixed configuration always produces the
//! same bytes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use qhl_core::arith::{factorize, gcd, Factorization};
use qhl_core::expsums::*;
use qhl_core::modforms::*;
use qhl_core::oscint::*;
use qhl_core::quadric::*;
use qhl_core::report::{fmt_c, VerificationReport};
use qhl_core::{Complex64, Error, Result};

use crate::config::RunConfig;

pub const SUITES: [&str; 4] = ["expsums", "modforms", "quadric", "oscint"];

/// Run the named suite, or every suite for `"all"`. One report per module.
pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<Vec<VerificationReport>> {
    cfg.validate()?;
    let names: Vec<&str> = match name {
        "all" => SUITES.to_vec(),
        n if SUITES.contains(&n) => vec![n],
        other => return Err(Error::Usage(format!("unknown suite {other:?} (expsums | modforms | quadric | oscint | all)"))),
    };
    let mut table = None;
    names
        .into_iter()
        .map(|n| match n {
            "expsums" => expsums_suite(cfg),
            "modforms" => modforms_suite(cfg, tau_for(cfg, &mut table)?),
            "quadric" => quadric_suite(cfg, tau_for(cfg, &mut table)?),
            _ => oscint_suite(cfg, tau_for(cfg, &mut table)?),
        })
        .collect()
}

fn tau_for<'a>(cfg: &RunConfig, slot: &'a mut Option<TauTable>) -> Result<&'a TauTable> {
    if slot.is_none() {
        *slot = Some(load_tau(cfg, cfg.tau_limit)?);
    }
    Ok(slot.as_ref().expect("just filled"))
}

/// The τ table to `n`, through the cache directory when one is configured.
pub fn load_tau(cfg: &RunConfig, n: usize) -> Result<TauTable> {
    match cfg.resolved_cache_dir() {
        Some(dir) => TauTable::load_or_build(&dir, n),
        None => build_tau_table(n),
    }
}

fn prime_powers(cfg: &RunConfig) -> Vec<(u64, u32, u64)> {
    let mut out = Vec::new();
    for &p in &cfg.primes {
        let (mut q, mut k) = (p, 1u32);
        while q <= cfg.max_prime_power {
            out.push((p, k, q));
            q *= p;
            k += 1;
        }
    }
    out.sort_unstable_by_key(|&(p, _, q)| (q, p));
    out
}

fn merge(report: &mut VerificationReport, parts: Vec<VerificationReport>) {
    for p in parts {
        report.absorb(p);
    }
}

fn offsets() -> [OffsetVector; 4] {
    [
        OffsetVector::new(0, [0, 0, 0]),
        OffsetVector::new(1, [0, 0, 0]),
        OffsetVector::new(2, [1, -1, 3]),
        OffsetVector::new(5, [3, 4, 5]),
    ]
}

pub fn expsums_suite(cfg: &RunConfig) -> Result<VerificationReport> {
    let m = cfg.tol_mult;
    let mut report = VerificationReport::new("expsums");

    let gauss: Vec<VerificationReport> = (1..=cfg.gauss_max_q)
        .into_par_iter()
        .map(|q| {
            let mut r = VerificationReport::new("gauss");
            let tol = m * 1e-8 * (q as f64).sqrt();
            for s in 0..q as i128 {
                for t in 0..q as i128 {
                    let a: Complex64 = gauss_sum_brute(s, t, q);
                    r.check_complex(format!("s={s} t={t} q={q}"), a, gauss_sum_closed(s, t, q), tol);
                }
            }
            r
        })
        .collect();
    merge(&mut report, gauss);

    let mut ram = VerificationReport::new("ramanujan");
    for q in 1..=cfg.gauss_max_q {
        for mm in -3..=(2 * q as i128) {
            let direct: f64 = (1..=q).filter(|&a| gcd(a as i128, q as i128) == 1).map(|a| (std::f64::consts::TAU * (a as i128 * mm) as f64 / q as f64).cos()).sum();
            ram.check(format!("q={q} m={mm}"), direct, ramanujan_sum(q, mm), (direct - ramanujan_sum(q, mm) as f64).abs(), m * 1e-9 * q as f64);
        }
    }
    for p in qhl_core::arith::sieve(cfg.gauss_max_q as usize * 4).into_iter().map(u64::from) {
        for (a, b) in [(1, 1), (2, 3), (5, 7)] {
            let k: Complex64 = kloosterman(a, b, p);
            ram.check(format!("Weil bound p={p} m={a} n={b}"), 2.0 * (p as f64).sqrt(), k.norm(), (k.norm() - 2.0 * (p as f64).sqrt()).max(0.0), m * 1e-9);
        }
    }
    report.absorb(ram);

    let grid: Vec<(DiagonalForm, u64, u32, u64)> = cfg
        .forms
        .iter()
        .flat_map(|f| prime_powers(cfg).into_iter().map(move |(p, k, q)| (*f, p, k, q)))
        .filter(|&(f, p, k, _)| f.satisfies_a0(&Factorization::from_entries([(p, k)]).expect("prime")))
        .collect();
    let closed: Vec<Result<VerificationReport>> = grid
        .par_iter()
        .map(|&(f, p, k, q)| {
            let mut r = VerificationReport::new("sq_closed");
            let fq = Factorization::from_entries([(p, k)])?;
            let ev = SqEvaluator::new(&f, &fq)?;
            let oracle = AqOracle::<f64>::new(&f, q, [0, 0, 0])?;
            let tol = m * 1e-6 * (q as f64).powf(2.5);
            for n in 1..=q as i128 {
                r.check_complex(format!("F={f} q={q} n={n}"), oracle.eval(n), ev.eval(n)?, tol);
            }
            Ok(r)
        })
        .collect();
    merge(&mut report, closed.into_iter().collect::<Result<_>>()?);

    let mut st = VerificationReport::new("sq_structure");
    for &(f, _, _, q) in grid.iter().filter(|g| g.3 <= STRUCTURE_VERIFY_LIMIT) {
        match sq_structure(&f, q) {
            Ok(_) => {
                st.check_that(format!("F={f} q={q}"), true, "single-valued", "single-valued");
            }
            Err(Error::Consistency(msg)) => {
                st.check_that(format!("F={f} q={q}"), false, "single-valued", msg);
            }
            Err(e) => return Err(e),
        }
    }
    report.absorb(st);

    let mut tiers = VerificationReport::new("oracle_tiers");
    for f in &cfg.forms {
        for q in 1..=cfg.brute_max_q.min(FULL_LIMIT) {
            for c in offsets() {
                let full: Complex64 = a_q_brute(f, q, &c, Tier::Full)?;
                let fact: Complex64 = a_q_brute(f, q, &c, Tier::Factored)?;
                tiers.check_complex(format!("F={f} q={q} c={:?}", c.as_array()), full, fact, m * 1e-8 * (q * q) as f64);
            }
        }
    }
    report.absorb(tiers);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut split = VerificationReport::new("multiplicativity");
    let mut worst_rel = 0.0f64;
    for i in 0..cfg.samples {
        let f = cfg.forms[rng.gen_range(0..cfg.forms.len())];
        let (v1, v2) = loop {
            let (a, b) = (rng.gen_range(1..=30u64), rng.gen_range(1..=20u64));
            if gcd(a as i128, b as i128) == 1 {
                break (a, b);
            }
        };
        let c = OffsetVector::new(rng.gen_range(-30..30), [rng.gen_range(-9..9), rng.gen_range(-9..9), rng.gen_range(-9..9)]);
        let whole: Complex64 = a_q_brute(&f, v1 * v2, &c, Tier::Factored)?;
        let parts: Complex64 = a_q_split(&f, v1, v2, &c)?;
        worst_rel = worst_rel.max((whole - parts).norm() / whole.norm().max(1.0));
        split.check_complex(format!("#{i} A F={f} v=({v1},{v2})"), whole, parts, m * 1e-6 * whole.norm().max(1.0));
        let (u1, u2) = {
            let d1 = factorize(v1)?.divisors();
            let d2 = factorize(v2)?.divisors();
            (d1[rng.gen_range(0..d1.len())], d2[rng.gen_range(0..d2.len())])
        };
        let whole: Complex64 = s_dq_brute(&f, u1 * u2, v1 * v2, &c, Tier::Factored)?;
        let parts: Complex64 = s_dq_split(&f, (u1, u2), (v1, v2), &c, Tier::Factored)?;
        worst_rel = worst_rel.max((whole - parts).norm() / whole.norm().max(1.0));
        split.check_complex(format!("#{i} S F={f} u=({u1},{u2}) v=({v1},{v2})"), whole, parts, m * 1e-6 * whole.norm().max(1.0));
    }
    split.metric("max_relative_error", worst_rel);
    report.absorb(split);

    let mut collapse = VerificationReport::new("offset_collapse");
    let mut skipped = 0u32;
    for (a, c) in [([1, 1, 1, -1], [3, 4, 5]), ([2, 1, 1, -1], [5, 12, 13]), ([3, 1, 1, -1], [3, 4, 5])] {
        let f = DiagonalForm::new(a)?;
        for q in [5u64, 7, 9, 11, 13, 25] {
            match a_q_with_offset_equals_sq(&f, q, c) {
                Ok(r) => collapse.absorb(r),
                Err(Error::Precondition(_)) => skipped += 1,
                Err(e) => return Err(e),
            }
        }
    }
    collapse.metric("skipped_by_precondition", skipped as f64);
    report.absorb(collapse);

    let mut vanish = VerificationReport::new("vanishing");
    for f in &cfg.forms {
        for p in [3u64, 5].into_iter().filter(|&p| (2 * f.discriminant()) % p as i128 != 0) {
            let q = p * p;
            for cp in [[1i64, 0, 0], [1, 1, 0], [2, 1, 1], [1, -2, 2]] {
                let dual = f.dual(&OffsetVector::new(0, cp));
                for c1 in [0i64, 1] {
                    let c = OffsetVector::new(c1, cp);
                    let s: Complex64 = s_dq_brute(f, p, p, &c, Tier::Factored)?;
                    let cap = 3.0 * (p * p * p) as f64;
                    vanish.check(format!("|S_p,p| F={f} p={p} c={:?}", c.as_array()), cap, s.norm(), (s.norm() - cap).max(0.0), m * 1e-9 * cap);
                    if dual == 0 || dual % p as i128 == 0 {
                        continue;
                    }
                    for d in [1, p, q] {
                        let z: Complex64 = s_dq_brute(f, d, q, &c, Tier::Factored)?;
                        vanish.check(format!("F={f} d={d} q={q} c={:?}", c.as_array()), 0, fmt_c(z), z.norm(), m * 1e-6 * (q as f64).powf(3.5));
                    }
                }
            }
        }
    }
    report.absorb(vanish);

    let mut tq = VerificationReport::new("t_q");
    for f in &cfg.forms {
        for p in cfg.primes.iter().copied().filter(|&p| p > 2 && p <= 13 && f.discriminant() % p as i128 != 0) {
            for c in [[0, 0, 1], [1, 2, 3]] {
                let fast = t_q_prime_fast::<f64>(f, p, c)?;
                let brute = t_q_brute::<f64>(f, p, c)?;
                tq.check(format!("F={f} p={p} c'={c:?}"), brute.total, fast.total, (fast.total - brute.total).abs(), m * 1e-8 * (p * p * p) as f64);
            }
        }
    }
    if let Some(f) = cfg.forms.iter().find(|f| !f.is_definite()) {
        let total: f64 = (1..=TQ_BRUTE_LIMIT.min(60)).map(|q| t_q::<f64>(f, q, [1, 2, 3]).map(|r| r.total)).sum::<Result<f64>>()?;
        tq.metric("t_q_sum_normalized", total / 60f64.powi(4));
    }
    report.absorb(tq);
    Ok(report)
}

fn sigma(k: u32, n: u64) -> i128 {
    (1..=n).filter(|d| n % d == 0).map(|d| (d as i128).pow(k)).sum()
}

pub fn modforms_suite(cfg: &RunConfig, table: &TauTable) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("modforms");
    let n = table.limit();

    let mut series = VerificationReport::new("tau_divisor_sums");
    for k in 1..=n.min(40) as u64 {
        let conv: i128 = (1..k).map(|j| sigma(5, j) * sigma(5, k - j)).sum();
        let expect = (65 * sigma(11, k) + 691 * sigma(5, k) - 691 * 252 * conv) / 756;
        let got = table.tau(k as usize)?;
        series.check_that(format!("n={k}"), expect == got, expect, got);
    }
    report.absorb(series);

    let hecke: Vec<Result<VerificationReport>> = (1..=n)
        .into_par_iter()
        .filter(|&a| a * a <= n)
        .map(|a| {
            let mut r = VerificationReport::new("hecke");
            for b in a..=n / a {
                r.check_that(format!("m={a} n={b}"), hecke_convolution_check(table, a, b)?, "relation holds", "violated");
            }
            Ok(r)
        })
        .collect();
    let mut hk = VerificationReport::new("hecke");
    for r in hecke {
        let r = r?;
        hk.cases += r.cases;
        hk.max_error = hk.max_error.max(r.max_error);
        hk.failures.extend(r.failures);
    }
    report.absorb(hk);

    let lam = NormalizedCoefficients::<f64>::from_table(table);
    let mut del = VerificationReport::new("deligne");
    for k in 1..=n {
        let d: u64 = factorize(k as u64)?.entries().iter().map(|&(_, e)| e as u64 + 1).product();
        let l = lam.at(k).abs();
        del.check(format!("n={k}"), d, l, (l - d as f64).max(0.0), cfg.tol_mult * 1e-12 * d as f64);
    }
    report.absorb(del);

    let mut sq = VerificationReport::new("two_squares");
    for k in 0..=2000i128 {
        let r = (k as f64).sqrt() as i128 + 1;
        let brute = (-r..=r).flat_map(|a| (-r..=r).map(move |b| a * a + b * b)).filter(|&v| v == k).count() as u64;
        sq.check_that(format!("n={k}"), brute == r_two_squares(k), brute, r_two_squares(k));
    }
    report.absorb(sq);

    let mut tw = VerificationReport::new("twisted_sums");
    let alpha = std::f64::consts::SQRT_2;
    for z in [100usize, 1000, n].into_iter().filter(|&z| z <= n) {
        let s = twisted_sum(&lam, z, alpha)?;
        if let Some(w) = s.wilton_ratio {
            tw.metric(format!("wilton_ratio_z{z}"), w);
        }
    }
    report.absorb(tw);
    Ok(report)
}

pub fn quadric_suite(cfg: &RunConfig, table: &TauTable) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("quadric");
    let w = SmoothWeight::<f64>::default();

    let mut eq = VerificationReport::new("methods");
    for f in &cfg.forms {
        for x in 1..=24 {
            let a = enumerate_zeros(f, x, Method::Naive)?;
            let b = enumerate_zeros(f, x, Method::MeetInMiddle)?;
            if f.is_definite() {
                eq.check_that(format!("F={f} X={x} definite"), a.is_empty() && b.is_empty(), 0, a.len().max(b.len()));
            } else {
                eq.check_that(format!("F={f} X={x}"), a == b, a.len(), b.len());
            }
        }
    }
    report.absorb(eq);

    let need = 2 * *cfg.x_list.last().expect("validated");
    if table.limit() < need as usize {
        return Err(Error::Capacity { what: "tau_limit for 2·max(X)", value: need as u128, limit: table.limit() as u128 });
    }
    let lam = NormalizedCoefficients::<f64>::from_table(table);
    let mut cancel = VerificationReport::new("cancellation");
    for f in cfg.forms.iter().filter(|f| !f.is_definite()) {
        let t = cancellation_experiment(f, &cfg.x_list, &lam, &w, Method::MeetInMiddle)?;
        for r in &t.rows {
            let slack = 1e-12 * r.n_abs_lambda.max(1.0);
            cancel.check(format!("|N(λ)| ≤ N(|λ|) F={f} X={}", r.x), r.n_abs_lambda, r.n_lambda.abs(), (r.n_lambda.abs() - r.n_abs_lambda).max(0.0), slack);
            cancel.metric(format!("{f}.ratio_x{}", r.x), r.ratio);
        }
        if let (Some(a), Some(b)) = (t.exponent_lambda, t.exponent_abs_lambda) {
            cancel.metric(format!("{f}.exponent_lambda"), a);
            cancel.metric(format!("{f}.exponent_abs_lambda"), b);
        }
    }
    report.absorb(cancel);
    Ok(report)
}

/// One oscillatory-integral check: `error` against `tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OscintRow {
    pub check: String,
    pub parameters: String,
    pub value: f64,
    pub error: f64,
    pub tolerance: f64,
    pub bound_ratio: f64,
    pub pass: bool,
}

impl OscintRow {
    fn new(check: &str, parameters: String, value: f64, error: f64, tolerance: f64) -> Self {
        let bound_ratio = if error == 0.0 { 0.0 } else { error / tolerance };
        Self { check: check.into(), parameters, value, error, tolerance, bound_ratio, pass: bound_ratio.is_finite() && bound_ratio <= 1.0 }
    }
}

pub fn oscint_rows(cfg: &RunConfig, table: &TauTable) -> Result<Vec<OscintRow>> {
    let m = cfg.tol_mult;
    let mut rows = Vec::new();

    for k in [1u32, 2, 5, 12] {
        for x in [0.5, 5.0, 40.0, 150.0] {
            let r = bessel_derivative_identity(k, x)?;
            rows.push(OscintRow::new("bessel", format!("k={k} x={x}"), r, r, m * 1e-6 * (1.0 + x.powi(k as i32))));
        }
    }

    let w = Bump::new(1.3, 19.7)?;
    let qcfg = QuadratureConfig::with_tolerance(1e-14, 1e-12);
    for q in 1..=cfg.poisson_max_q.min(POISSON_MAX_Q) {
        for b in 0..q {
            let r = poisson_check(q, b, &w, m * 1e-6, &qcfg)?;
            rows.push(OscintRow::new("poisson", format!("q={q} b={b}"), r.lhs, r.abs_diff, r.tolerance));
        }
    }

    let coeffs = NormalizedCoefficients::<f64>::from_table(table);
    let g = Bump::new(500.0, 2000.0)?;
    let vcfg = VoronoiConfig { tol: m * 1e-4, ..VoronoiConfig::default() };
    let mut setup = VoronoiSetup::new(&g, &coeffs, vcfg)?;
    for q in 1..=cfg.voronoi_max_q {
        for b in 0..q {
            let r = setup.check(q, b)?;
            rows.push(OscintRow::new("voronoi", format!("q={q} b={b}"), r.lhs, r.abs_diff, r.tolerance));
        }
    }

    let sw = SmoothWeight::<f64>::default();
    for delta in [1.0, 0.5] {
        for x in [[1.25, 1.25, 1.25, 1.25], [1.0, 1.5, 0.8, 1.7]] {
            let r = dissection_check(|y| sw.eval(y), delta, x)?;
            rows.push(OscintRow::new("dissection", format!("delta={delta} x={x:?}"), r.lhs, r.residual, m * r.tolerance));
        }
    }

    let pw = Bump::new(0.5, 2.0)?;
    let pcfg = PhaseConfig::default();
    for a in [1e2, 1e3] {
        let st = phase_integral(a, -2.0 * a, &pw, &pcfg)?;
        rows.push(OscintRow::new("phase_stationary", format!("A={a} B={}", -2.0 * a), st.scaled, st.error, st.value.norm()));
        let ns = phase_integral(a, 0.0, &pw, &pcfg)?;
        rows.push(OscintRow::new("phase_flat", format!("A={a} B=0"), ns.value.norm(), ns.error, ns.value.norm().max(f64::MIN_POSITIVE)));
    }
    Ok(rows)
}

pub fn oscint_suite(cfg: &RunConfig, table: &TauTable) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("oscint");
    let rows = oscint_rows(cfg, table)?;
    let mut names: Vec<&str> = rows.iter().map(|r| r.check.as_str()).collect();
    names.dedup();
    for name in names {
        let mut sub = VerificationReport::new(name);
        for r in rows.iter().filter(|r| r.check == name) {
            sub.check(&r.parameters, "", r.value, r.error, r.tolerance);
            if name.starts_with("phase") {
                sub.metric(r.parameters.clone(), r.value);
            }
        }
        report.absorb(sub);
    }
    Ok(report)
}
