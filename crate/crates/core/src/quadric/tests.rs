use super::*;
use crate::error::Error;
use crate::modforms::{build_tau_table, r_two_squares, NormalizedCoefficients};
use proptest::prelude::*;
use std::sync::OnceLock;

fn coeffs() -> &'static NormalizedCoefficients<f64> {
    static C: OnceLock<NormalizedCoefficients<f64>> = OnceLock::new();
    C.get_or_init(|| NormalizedCoefficients::from_table(&build_tau_table(4100).unwrap()))
}

fn form(a: [i64; 4]) -> DiagonalForm {
    DiagonalForm::new(a).unwrap()
}

#[test]
fn weight_support_and_range() {
    let w = SmoothWeight::<f64>::default();
    assert_eq!(w.profile(0.5), 0.0);
    assert_eq!(w.profile(2.0), 0.0);
    assert!((w.profile(1.25) - (-1.0f64).exp()).abs() < 1e-15);
    assert!((w.eval([1.25; 4]) - (-4.0f64).exp()).abs() < 1e-15);
    for i in 0..=400 {
        let t = 0.4 + i as f64 * 1.7 / 400.0;
        let v = w.eval([t, 1.25, 1.0, 1.5]);
        assert!((0.0..=(-4.0f64).exp()).contains(&v));
        if (0.75..=1.75).contains(&t) {
            assert!(v > 0.0);
        }
        if !(0.5..2.0).contains(&t) {
            assert_eq!(v, 0.0);
        }
    }
    assert!(SmoothWeight::<f64>::new(1.0, 0.6).is_err());
    assert!(SmoothWeight::<f64>::new(1.25, 0.5).is_ok());
}

#[test]
fn dual_form_examples() {
    assert_eq!(dual_form(&form([1, 1, 1, -1]), &OffsetVector::new(0, [0, 0, 0])), 0);
    assert_eq!(dual_form(&form([1, 1, 1, -1]), &OffsetVector::new(0, [3, 4, 5])), 0);
    assert_eq!(dual_form(&form([1, 1, 1, 1]), &OffsetVector::new(0, [1, 0, 0])), 1);
}

#[test]
fn classify_examples() {
    let def = classify_offsets(&form([1, 1, 1, 1]), 5);
    assert!(def.c0.is_empty());
    assert_eq!(def.c1.len(), 11 * 11 * 11 - 1);
    let ind = classify_offsets(&form([1, 1, 1, -1]), 5);
    assert!(ind.c0.contains(&[3, 4, 5]));
    assert!(ind.c1.contains(&[1, 1, 1]));
    assert_eq!(ind.c0.len() + ind.c1.len(), 1330);
    assert_eq!(classify_offsets(&form([2, 3, 5, 7]), 0), OffsetClasses::default());
}

#[test]
fn enumerate_examples() {
    assert!(enumerate_zeros(&form([1, 1, 1, 1]), 30, Method::MeetInMiddle).unwrap().is_empty());
    assert!(enumerate_zeros(&form([1, 1, 1, 1]), 10, Method::Naive).unwrap().is_empty());
    let z = enumerate_zeros(&form([1, 1, 1, -1]), 2, Method::MeetInMiddle).unwrap();
    assert!(z.contains(&[1, 2, 2, 3]));
    assert!(z.contains(&[2, 2, 1, 3]));
    assert!(matches!(enumerate_zeros(&form([1, 1, 1, -1]), NAIVE_LIMIT + 1, Method::Naive), Err(Error::Capacity { .. })));
    assert!(matches!(enumerate_zeros(&form([1, 1, 1, -1]), 0, Method::Naive), Err(Error::Domain(_))));
    assert_eq!("mim".parse::<Method>().unwrap(), Method::MeetInMiddle);
    assert!("hash".parse::<Method>().is_err());
}

#[test]
fn methods_agree_up_to_40() {
    for f in indefinite_test_forms() {
        for x in [1, 2, 3, 7, 12, 25, 40] {
            let a = enumerate_zeros(&f, x, Method::Naive).unwrap();
            let b = enumerate_zeros(&f, x, Method::MeetInMiddle).unwrap();
            assert_eq!(a, b, "{f} X={x}");
            let (lo, hi) = box_range(x);
            for p in &a {
                assert_eq!(f.eval(*p), 0);
                assert!(p.iter().all(|&c| (lo..=hi).contains(&c)));
            }
        }
    }
}

fn naive_weighted(f: &DiagonalForm, x: u64, a: impl Fn(usize) -> f64) -> f64 {
    let w = SmoothWeight::<f64>::default();
    let (lo, hi) = box_range(x);
    let xt = x as f64;
    let mut s = 0.0;
    for x1 in lo..=hi {
        for x2 in lo..=hi {
            for x3 in lo..=hi {
                for x4 in lo..=hi {
                    if f.eval([x1, x2, x3, x4]) == 0 {
                        s += w.eval([x1 as f64 / xt, x2 as f64 / xt, x3 as f64 / xt, x4 as f64 / xt]) * a(x1 as usize);
                    }
                }
            }
        }
    }
    s
}

#[test]
fn weighted_count_examples() {
    let w = SmoothWeight::default();
    let f = form([1, 1, 1, -1]);
    let def = weighted_count(&form([1, 1, 1, 1]), 50, Weights::Unit, &w, Method::MeetInMiddle).unwrap();
    assert_eq!((def.weighted_value, def.zero_count), (0.0, 0));

    let unit = weighted_count(&f, 50, Weights::Unit, &w, Method::MeetInMiddle).unwrap();
    let oracle = naive_weighted(&f, 50, |_| 1.0);
    assert!(unit.weighted_value > 0.0);
    assert!((unit.weighted_value - oracle).abs() <= 1e-12 * oracle);
    assert_eq!(unit.zero_count as usize, enumerate_zeros(&f, 50, Method::MeetInMiddle).unwrap().len());

    let lam = weighted_count(&f, 50, Weights::Lambda(coeffs()), &w, Method::MeetInMiddle).unwrap();
    let abs = weighted_count(&f, 50, Weights::AbsLambda(coeffs()), &w, Method::MeetInMiddle).unwrap();
    let lam_oracle = naive_weighted(&f, 50, |n| coeffs().at(n));
    assert!((lam.weighted_value - lam_oracle).abs() <= 1e-12 * abs.weighted_value);
    assert!(lam.weighted_value.abs() < abs.weighted_value);

    let all = weighted_counts(&f, 50, coeffs(), &w, Method::MeetInMiddle).unwrap();
    assert_eq!(all.unit, unit.weighted_value);
    assert_eq!(all.lambda, lam.weighted_value);
    assert_eq!(all.abs_lambda, abs.weighted_value);
}

#[test]
fn weighted_count_needs_table() {
    let short = NormalizedCoefficients::<f64>::from_table(&build_tau_table(99).unwrap());
    let r = weighted_count(&form([1, 1, 1, -1]), 50, Weights::Lambda(&short), &SmoothWeight::default(), Method::Naive);
    assert!(matches!(r, Err(Error::Capacity { .. })));
}

#[test]
fn larger_bump_never_decreases_count() {
    let f = form([1, 1, 1, -1]);
    let inner = SmoothWeight::new(1.25, 0.5).unwrap();
    let outer = SmoothWeight::new(1.25, 0.75).unwrap();
    for x in [10, 30, 60] {
        let a = weighted_count(&f, x, Weights::Unit, &inner, Method::MeetInMiddle).unwrap();
        let b = weighted_count(&f, x, Weights::Unit, &outer, Method::MeetInMiddle).unwrap();
        assert!(a.weighted_value <= b.weighted_value, "X={x}");
    }
}

#[test]
fn cancellation_single_and_errors() {
    let f = form([1, 1, 1, -1]);
    let w = SmoothWeight::default();
    let t = cancellation_experiment(&f, &[50], coeffs(), &w, Method::MeetInMiddle).unwrap();
    assert_eq!(t.rows.len(), 1);
    assert!(t.exponent_lambda.is_none());
    assert!(cancellation_experiment(&f, &[], coeffs(), &w, Method::MeetInMiddle).is_err());
    assert!(cancellation_experiment(&f, &[100, 50], coeffs(), &w, Method::MeetInMiddle).is_err());
}

#[test]
fn unit_count_grows_quadratically() {
    let f = form([1, 1, 1, -1]);
    let t = cancellation_experiment(&f, &[50, 100, 200], coeffs(), &SmoothWeight::default(), Method::MeetInMiddle).unwrap();
    let e = t.exponent_unit.unwrap();
    assert!((e - 2.0).abs() <= 0.2, "exponent {e}");
}

#[test]
fn loglog_slope_recovers_power() {
    let pts: Vec<(f64, f64)> = [2.0, 5.0, 11.0, 30.0].iter().map(|&x: &f64| (x, 3.0 * x.powf(1.7))).collect();
    assert!((loglog_slope(&pts).unwrap() - 1.7).abs() < 1e-12);
    assert!(loglog_slope(&pts[..1]).is_none());
}

#[test]
fn theorem1_sum_examples() {
    let c = coeffs();
    assert_eq!(theorem1_sum(1, 1, 1, c).unwrap(), 4.0);
    let l2 = c.at(2);
    assert!((theorem1_sum(1, 1, 2, c).unwrap() - (12.0 + 12.0 * l2)).abs() < 1e-12);
    assert!((theorem1_sum(1, 1, 2, c).unwrap() - 5.636_038_969_321_072).abs() < 1e-9);
    // m = n terms hit r(0) = 1, m < n terms are negative and vanish
    let x = 5;
    let want: f64 = (1..=x as i128)
        .map(|m| (1..=x as i128).map(|n| r_two_squares(m * m - n * n) as f64).sum::<f64>() * c.at(m as usize))
        .sum();
    assert!((theorem1_sum(1, -1, x, c).unwrap() - want).abs() < 1e-12);
    assert_eq!(theorem1_sum(-1, -1, 7, c).unwrap(), 0.0);
    assert!(theorem1_sum(0, 1, 3, c).is_err());
}

#[test]
fn theorem1_sum_direct_path_matches_table_path() {
    let c = coeffs();
    // large coefficients skip the r table
    let big = theorem1_sum(20_000_000, 3, 2, c).unwrap();
    let want: f64 = (1..=2i128)
        .map(|m| (1..=2i128).map(|n| r_two_squares(20_000_000 * m * m + 3 * n * n) as f64).sum::<f64>() * c.at(m as usize))
        .sum();
    assert_eq!(big, want);
}

proptest! {
    #[test]
    fn dual_matches_adjugate(a in prop::array::uniform4(prop_oneof![-50i64..=-1, 1i64..=50]),
                             c in prop::array::uniform4(-100i64..=100)) {
        let f = form(a);
        // diagonal adjugate: entry i is the product of the other three coefficients
        let mut want = 0i128;
        for i in 0..4 {
            let mut cof = 1i128;
            for j in 0..4 {
                if j != i { cof *= a[j] as i128; }
            }
            want += cof * (c[i] as i128).pow(2);
        }
        prop_assert_eq!(dual_form(&f, &OffsetVector::from_array(c)), want);
    }

    #[test]
    fn theorem1_sum_at_one(a in prop_oneof![-40i64..=-1, 1i64..=40], b in prop_oneof![-40i64..=-1, 1i64..=40]) {
        prop_assert_eq!(theorem1_sum(a, b, 1, coeffs()).unwrap(), r_two_squares((a + b) as i128) as f64);
    }
}
