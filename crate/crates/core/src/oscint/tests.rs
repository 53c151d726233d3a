use super::*;
use crate::error::Error;
use crate::modforms::{build_tau_table, NormalizedCoefficients};
use crate::quadric::SmoothWeight;
use num_complex::Complex;
use proptest::prelude::*;
use std::sync::OnceLock;

/// `J_n(x) = (1/2π)∫₀^{2π} cos(nτ − x sin τ) dτ` by the trapezoid rule, which
/// converges geometrically for periodic integrands.
fn bessel_trapezoid(n: u32, x: f64) -> f64 {
    let k = (2.0 * (x + n as f64) + 80.0) as usize;
    let h = std::f64::consts::TAU / k as f64;
    (0..k).map(|i| (n as f64 * i as f64 * h - x * (i as f64 * h).sin()).cos()).sum::<f64>() / k as f64
}

/// 60-term ascending series with its condition number `Σ|terms| / |sum|`.
fn bessel_series(n: u32, x: f64) -> (f64, f64) {
    let mut term = (1..=n).fold(1.0, |t, k| t * (x / 2.0) / k as f64);
    let (mut sum, mut abs) = (term, term.abs());
    for k in 1..60 {
        term *= -(x * x / 4.0) / (k as f64 * (n + k) as f64);
        sum += term;
        abs += term.abs();
    }
    (sum, abs / sum.abs())
}

#[test]
fn quadrature_exact_on_polynomials() {
    let cfg = QuadratureConfig::<f64>::default();
    for k in 0..=13 {
        let (v, e) = integrate_real(|x: f64| x.powi(k), 0.0, 1.0, 0.0, &cfg).unwrap();
        assert!((v - 1.0 / (k + 1) as f64).abs() < 1e-15, "k={k}");
        assert!(e < 1e-13);
    }
    let r = integrate(|x: f64| Complex::new(0.0, x.cos()), 0.0, 1.0, 0.0, &cfg).unwrap();
    assert!((r.value.im - 1f64.sin()).abs() < 1e-15);
    assert_eq!(integrate_real(|x: f64| x, 2.0, 2.0, 0.0, &cfg).unwrap().0, 0.0);
}

#[test]
fn quadrature_oscillatory_and_budget() {
    let cfg = QuadratureConfig::<f64>::with_tolerance(1e-13, 1e-12);
    // ∫₀¹ e(500x) dx = 0 and ∫₀¹ cos(2π·500.5x) dx = sin(2π·500.5)/(2π·500.5)
    let (v, _) = integrate_real(|x: f64| (std::f64::consts::TAU * 500.5 * x).cos(), 0.0, 1.0, 500.5, &cfg).unwrap();
    let want = (std::f64::consts::TAU * 500.5f64).sin() / (std::f64::consts::TAU * 500.5);
    assert!((v - want).abs() < 1e-12);
    let tiny = QuadratureConfig { max_panels: 4, ..cfg };
    assert!(matches!(integrate_real(|x: f64| (1.0 / (x + 1e-9)).sin(), 0.0, 1.0, 0.0, &tiny), Err(Error::Convergence(_))));
    assert!(matches!(integrate_real(|x: f64| x, 0.0, 1.0, 1e6, &tiny), Err(Error::Convergence(_))));
    let bad = QuadratureConfig { nodes_per_period: 4.0, ..cfg };
    assert!(matches!(bad.validate(), Err(Error::Domain(_))));
}

#[test]
fn quadrature_halving_tolerance_is_consistent() {
    let g = Bump::new(500.0, 2000.0).unwrap();
    for (tol, m) in [(1e-6, 3u64), (1e-8, 40), (1e-9, 400)] {
        let coarse = QuadratureConfig::<f64>::with_tolerance(tol, 0.0);
        let fine = QuadratureConfig::with_tolerance(tol / 2.0, 0.0);
        let (a, _) = hankel_integral(&g, 1, m, 12, &coarse).unwrap();
        let (b, _) = hankel_integral(&g, 1, m, 12, &fine).unwrap();
        assert!((a - b).abs() < tol, "m={m}");
    }
}

#[test]
fn jets_match_finite_differences() {
    let b = Bump::new(0.5, 2.0).unwrap();
    for i in 0..20 {
        let x = 0.55 + 1.4 * (i as f64 + 0.5) / 20.0;
        let jet = b.taylor(x, 4);
        for j in 1..=4usize {
            // centered difference of the (j−1)-th derivative
            let h = 1e-5;
            let fd = (b.derivative(x + h, j - 1) - b.derivative(x - h, j - 1)) / (2.0 * h);
            let exact = jet.deriv(j);
            assert!((fd - exact).abs() <= 1e-5 * exact.abs().max(1e-3), "x={x} j={j}: {fd} vs {exact}");
        }
        assert_eq!(jet.c[0], b.eval(x));
    }
    assert_eq!(b.eval(0.4), 0.0);
    assert_eq!(b.eval(2.0), 0.0);
    assert!(b.taylor(2.5, 3).c.iter().all(|&c| c == 0.0));
}

#[test]
fn jet_algebra() {
    // exp(x) at 0.3, 1/(1 + x) at 0.5
    let x = Jet::variable(0.3f64, 6);
    let e = x.exp();
    for j in 0..=6 {
        assert!((e.deriv(j) - 0.3f64.exp()).abs() < 1e-14);
    }
    let one = Jet::constant(1.0, 6);
    let r = (&one + &Jet::variable(0.5, 6)).recip();
    for j in 0..=6 {
        let fact: f64 = (1..=j).map(|i| i as f64).product();
        let want = (-1f64).powi(j as i32) * fact / 1.5f64.powi(j as i32 + 1);
        assert!((r.deriv(j) - want).abs() < 1e-12 * want.abs());
    }
    assert_eq!((&e * &r).order(), 6);
    assert_eq!(e.derivative().order(), 5);
}

#[test]
fn bump_mass_value() {
    let c0: f64 = bump_mass().unwrap();
    assert!((c0 - 0.443_993_816_168_079_4).abs() < 1e-13, "{c0}");
}

#[test]
fn bessel_examples() {
    assert_eq!(bessel_j(11, 0.0).unwrap(), 0.0);
    assert_eq!(bessel_j(0, 0.0f64).unwrap(), 1.0);
    let (s, _) = bessel_series(11, 1.0);
    assert!((bessel_j(11, 1.0).unwrap() - s).abs() <= 1e-12 * s.abs());
    assert!(matches!(bessel_j(51, 1.0), Err(Error::Capacity { .. })));
    assert!(matches!(bessel_j(3, 2e6), Err(Error::Capacity { .. })));
    assert!(matches!(bessel_j(3, -1.0), Err(Error::Domain(_))));
    // J₀(1) and J₁(10) to published digits
    assert!((bessel_j(0, 1.0f64).unwrap() - 0.765_197_686_557_966_6).abs() < 1e-15);
    assert!((bessel_j(1, 10.0f64).unwrap() - 0.043_472_746_168_861_44).abs() < 1e-15);
}

#[test]
fn bessel_against_series_oracle() {
    for n in [0u32, 1, 2, 5, 11, 20, 35, 50] {
        for i in 1..=200 {
            let x = (n as f64 + 10.0) * i as f64 / 200.0;
            let (s, cond) = bessel_series(n, x);
            if cond > 1e3 || s == 0.0 {
                continue;
            }
            let got = bessel_j(n, x).unwrap();
            assert!((got - s).abs() <= 1e-10 * s.abs(), "n={n} x={x}: {got} vs {s}");
        }
    }
}

#[test]
fn bessel_against_integral_oracle() {
    for n in [0u32, 1, 3, 11, 24, 50] {
        for &x in &[0.01, 0.7, 3.0, 9.9, 24.9, 25.0, 25.1, 40.0, 49.5, 50.5, 77.7, 123.4, 999.0, 2500.0] {
            let want = bessel_trapezoid(n, x);
            let got = bessel_j(n, x).unwrap();
            assert!((got - want).abs() <= 2e-14 * (1.0 + x.sqrt()), "n={n} x={x}: {got} vs {want}");
        }
    }
}

#[test]
fn bessel_far_asymptotic() {
    // J₀(x) ≈ √(2/πx) cos(x − π/4) with relative correction ~1/(8x)
    for &x in &[1e4, 3.3e5, 1e6] {
        let lead = (2.0 / (std::f64::consts::PI * x)).sqrt();
        let j0 = bessel_j(0, x).unwrap();
        assert!((j0 - lead * (x - std::f64::consts::FRAC_PI_4).cos()).abs() <= lead / x);
        assert!(bessel_j(50, x).unwrap().abs() <= 1.0);
    }
}

#[test]
fn bessel_derivative_identity_holds() {
    for &(k, x) in &[(1u32, 1.0), (11, 5.0), (11, 0.1), (3, 50.0), (12, 100.0), (30, 37.0)] {
        let r = bessel_derivative_identity(k, x).unwrap();
        assert!(r <= 1e-6 * (1.0 + x.powi(k as i32)), "k={k} x={x}: {r}");
    }
    let near0 = bessel_derivative_identity(4, 1e-3).unwrap();
    assert!(near0 < 1e-12);
}

#[test]
fn hankel_transform_basics() {
    let cfg = QuadratureConfig::<f64>::default();
    let zero = Bump::new(500.0, 2000.0).unwrap().scaled(0.0);
    assert_eq!(hankel_transform(&zero, 3, 7, 12, &cfg).unwrap(), Complex::new(0.0, 0.0));
    let g = Bump::new(500.0, 2000.0).unwrap();
    let v = hankel_transform(&g, 2, 5, 12, &cfg).unwrap();
    assert_eq!(v.im, 0.0);
    let v11 = hankel_transform(&g, 2, 5, 11, &cfg).unwrap();
    assert_eq!(v11.re, 0.0);
    assert!(hankel_transform(&g, 0, 1, 12, &cfg).is_err());
}

#[test]
fn hankel_two_resolutions_agree() {
    let g = Bump::new(500.0, 2000.0).unwrap();
    let a = QuadratureConfig::with_tolerance(1e-10, 1e-10);
    let b = QuadratureConfig { nodes_per_period: 24.0, ..QuadratureConfig::with_tolerance(1e-13, 1e-13) };
    for (d, m) in [(1u64, 1u64), (3, 10), (6, 77), (1, 300)] {
        let x = hankel_transform(&g, d, m, 12, &a).unwrap();
        let y = hankel_transform(&g, d, m, 12, &b).unwrap();
        assert!((x - y).norm() < 1e-8, "d={d} m={m}");
    }
}

#[test]
fn hankel_decay_constant_is_finite() {
    let g = Bump::new(500.0, 2000.0).unwrap();
    let grid: Vec<f64> = (0..20).map(|i| 10f64.powf(1.0 + 2.5 * i as f64 / 19.0)).collect();
    let d2 = hankel_decay(&g, 1000.0, 2, &grid, &QuadratureConfig::default()).unwrap();
    assert!(d2.constant.is_finite() && d2.constant > 0.0);
    assert!(d2.sobolev > 0.0);
}

fn coeffs() -> &'static NormalizedCoefficients<f64> {
    static C: OnceLock<NormalizedCoefficients<f64>> = OnceLock::new();
    C.get_or_init(|| NormalizedCoefficients::from_table(&build_tau_table(20_000).unwrap()))
}

#[test]
fn voronoi_small_moduli() {
    let g = Bump::new(500.0, 2000.0).unwrap();
    let mut setup = VoronoiSetup::new(&g, coeffs(), VoronoiConfig::default()).unwrap();
    for (q, b) in [(1, 0), (2, 1), (4, 1), (4, 2)] {
        let r = setup.check(q, b).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.tail_bound < r.tolerance / 10.0);
    }
}

#[test]
fn voronoi_all_classes_up_to_six() {
    let g = Bump::new(500.0, 2000.0).unwrap();
    let mut setup = VoronoiSetup::new(&g, coeffs(), VoronoiConfig::default()).unwrap();
    for q in [3, 5, 6] {
        for b in 0..q {
            let r = setup.check(q, b).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }
}

#[test]
fn voronoi_thin_support_reports_truncation_failure() {
    // (1000.5, 1005.5) holds no integer ≡ 4 mod 6, but a support this thin has
    // a transform decaying too slowly for a 2·10⁴-term dual sum
    let narrow = Bump::new(1000.5, 1005.5).unwrap();
    let r = VoronoiSetup::new(&narrow, coeffs(), VoronoiConfig::default()).and_then(|mut s| s.check(6, 4));
    assert!(matches!(r, Err(Error::Convergence(_))), "{r:?}");
}

#[test]
fn voronoi_truncation_unattainable_at_low_order() {
    let g = Bump::new(500.0, 2000.0).unwrap();
    let r = voronoi_check(1, 0, &g, coeffs(), VoronoiConfig { l: 2, ..VoronoiConfig::default() });
    assert!(matches!(r, Err(Error::Convergence(_))), "{r:?}");
}

#[test]
fn poisson_identities() {
    let cfg = QuadratureConfig::<f64>::with_tolerance(1e-14, 1e-12);
    let w = Bump::new(1.3, 19.7).unwrap();
    let full = poisson_check(1, 0, &w, 1e-6, &cfg).unwrap();
    assert!(full.passed(), "{full:?}");
    let even = poisson_check(2, 0, &w, 1e-6, &cfg).unwrap();
    let odd = poisson_check(2, 1, &w, 1e-6, &cfg).unwrap();
    assert!((even.lhs + odd.lhs - full.lhs).abs() < 1e-14);
    assert!((even.rhs + odd.rhs - full.rhs).norm() < even.tolerance + odd.tolerance);
    for b in [0, 3, 5] {
        let r = poisson_check(7, b, &w, 1e-6, &cfg).unwrap();
        assert!(r.passed(), "{r:?}");
    }
    assert!(matches!(poisson_check(21, 0, &w, 1e-6, &cfg), Err(Error::Capacity { .. })));
}

#[test]
fn phase_regimes() {
    assert_eq!(PhaseRegime::classify(1.0, 10.0), PhaseRegime::LargeB);
    assert_eq!(PhaseRegime::classify(10.0, 1.0), PhaseRegime::SmallB);
    assert_eq!(PhaseRegime::classify(10.0, 20.0), PhaseRegime::ComparableSameSign);
    assert_eq!(PhaseRegime::classify(10.0, -20.0), PhaseRegime::Stationary);
    let w = Bump::new(0.5, 2.0).unwrap();
    assert!(matches!(phase_integral(0.0, 1.0, &w, &PhaseConfig::default()), Err(Error::Domain(_))));
    let wide = Bump::new(0.4, 2.0).unwrap();
    assert!(phase_integral(1.0, 0.0, &wide, &PhaseConfig::default()).is_err());
    let zero = w.scaled(0.0);
    assert_eq!(phase_integral(100.0, -200.0, &zero, &PhaseConfig::default()).unwrap().value.norm(), 0.0);
}

#[test]
fn integration_by_parts_matches_direct_quadrature() {
    let w = Bump::new(0.5, 2.0).unwrap();
    let ibp = PhaseConfig::default();
    let direct = PhaseConfig { ibp_order: 0, ..PhaseConfig::default() };
    for (a, b) in [(30.0, 0.0), (-45.0, 3.0), (5.0, 60.0), (40.0, 80.0), (25.0, -400.0)] {
        let x = phase_integral(a, b, &w, &ibp).unwrap();
        let y = phase_integral(a, b, &w, &direct).unwrap();
        assert!(x.ibp_order > 0, "A={a} B={b}");
        assert_eq!(y.ibp_order, 0);
        assert!((x.value - y.value).norm() <= 1e-13 + x.error + y.error, "A={a} B={b}: {:?} {:?}", x.value, y.value);
    }
}

#[test]
fn phase_stationary_scaling() {
    let w = Bump::new(0.5, 2.0).unwrap();
    let mut s = Vec::new();
    for a in [1e2, 1e3, 1e4] {
        let r = phase_integral(a, -2.0 * a, &w, &PhaseConfig::default()).unwrap();
        assert_eq!(r.regime, PhaseRegime::Stationary);
        assert_eq!(r.ibp_order, 0);
        assert!((0.05..=5.0).contains(&r.scaled), "A={a}: {}", r.scaled);
        s.push(r.scaled);
    }
    let (lo, hi) = s.iter().fold((f64::MAX, 0.0f64), |(l, h), &v| (l.min(v), h.max(v)));
    assert!(hi <= 1.5 * lo, "{s:?}");
}

#[test]
fn phase_nonstationary_decay() {
    let w = Bump::new(0.5, 2.0).unwrap();
    let cfg = PhaseConfig::default();
    let vals: Vec<_> = [1e2, 1e3, 1e4].iter().map(|&a| phase_integral(a, 0.0, &w, &cfg).unwrap()).collect();
    assert!(vals[2].value.norm() <= 1e-4);
    for p in vals.windows(2) {
        assert!((p[1].value.norm() + p[1].error) * 50.0 <= p[0].value.norm() - p[0].error, "{p:?}");
    }
}

#[test]
fn dissection_examples() {
    let w = SmoothWeight::<f64>::default();
    let f = |x: [f64; 4]| w.eval(x);
    for delta in [1.0, 0.5, 0.25] {
        let r = dissection_check(f, delta, [1.25; 4]).unwrap();
        assert!(r.passed(), "{r:?}");
    }
    let out = dissection_check(f, 0.5, [3.0, 1.0, 1.0, 1.0]).unwrap();
    assert_eq!((out.lhs, out.rhs), (0.0, 0.0));
    assert!(dissection_check(f, 0.0, [1.25; 4]).is_err());
    assert!(dissection_check(f, 1.5, [1.25; 4]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn bessel_is_bounded(n in 0u32..=50, x in 0.0f64..2000.0) {
        prop_assert!(bessel_j(n, x).unwrap().abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn bessel_recurrence(n in 1u32..50, x in 0.5f64..300.0) {
        // J_{n−1} + J_{n+1} = (2n/x) J_n
        let (a, b, c) = (bessel_j(n - 1, x).unwrap(), bessel_j(n, x).unwrap(), bessel_j(n + 1, x).unwrap());
        prop_assert!((a + c - 2.0 * n as f64 / x * b).abs() <= 1e-12 * (1.0 + 2.0 * n as f64 / x));
    }
}
