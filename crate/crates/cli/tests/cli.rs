use std::path::Path;
use std::process::{Command, Output};

use qhl_cli::commands::{render_rows, tau_rows};
use qhl_cli::suites::oscint_rows;
use qhl_cli::{run_suite, RunConfig};
use qhl_core::modforms::build_tau_table;
use qhl_core::report::{emit, parse, render, Format, VerificationReport};
use qhl_core::Error;

fn qhl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhl")).args(args).env_remove("QHL_CACHE_DIR").output().expect("spawn qhl")
}

fn small() -> RunConfig {
    RunConfig::parse_str(
        "# quick grid\n\
         max_prime_power = 60\n\
         gauss_max_q = 12\n\
         brute_max_q = 6\n\
         samples = 10\n\
         tau_limit = 20000\n\
         x_list = 20, 40\n\
         voronoi_max_q = 1\n\
         poisson_max_q = 3\n",
    )
    .unwrap()
}

#[test]
fn config_file_parses_and_overrides_defaults() {
    let cfg = RunConfig::parse_str("forms = 1,1,1,-1; 2,3,5,7\nprimes = 3, 5\nseed = 9  # comment\nformat = json\n").unwrap();
    assert_eq!(cfg.forms.len(), 2);
    assert_eq!(cfg.forms[1].coeffs(), [2, 3, 5, 7]);
    assert_eq!(cfg.primes, vec![3, 5]);
    assert_eq!(cfg.seed, 9);
    assert_eq!(cfg.format, Format::Json);
    assert_eq!(cfg.x_list, RunConfig::default().x_list);
    cfg.validate().unwrap();
}

#[test]
fn config_errors_are_usage_errors() {
    for text in ["bogus = 1", "seed", "seed = x", "forms = 1,1,1", "format = xml"] {
        assert!(matches!(RunConfig::parse_str(text), Err(Error::Usage(_))), "{text}");
    }
    for text in ["primes = 4", "x_list = 10, 5", "tol_mult = 0", "forms = ", "tau_limit = 1"] {
        let cfg = RunConfig::parse_str(text).unwrap();
        assert!(matches!(cfg.validate(), Err(Error::Usage(_))), "{text}");
    }
}

#[test]
fn unknown_suite_is_usage_error() {
    assert!(matches!(run_suite("bogus", &small()), Err(Error::Usage(_))));
}

#[test]
fn modforms_suite_passes() {
    let reports = run_suite("modforms", &small()).unwrap();
    assert_eq!(reports.len(), 1);
    let r = &reports[0];
    assert!(r.passed(), "{:?}", r.failures);
    assert!(r.cases > 1000);
}

#[test]
fn quadric_and_oscint_suites_pass() {
    for name in ["quadric", "oscint"] {
        let r = run_suite(name, &small()).unwrap().remove(0);
        assert!(r.passed(), "{name}: {:?}", r.failures);
    }
}

#[test]
fn expsums_failures_are_the_two_known_claims() {
    let r = run_suite("expsums", &small()).unwrap().remove(0);
    assert!(!r.failures.is_empty());
    for f in &r.failures {
        let structure = f.parameters.starts_with("sq_structure:");
        // vanishing fails only when d = q
        let full_depth = f.parameters.starts_with("vanishing:") && {
            let d = f.parameters.split(" d=").nth(1).unwrap().split(' ').next().unwrap();
            let q = f.parameters.split(" q=").nth(1).unwrap().split(' ').next().unwrap();
            d == q
        };
        assert!(structure || full_depth, "unexpected failure {f:?}");
    }
}

#[test]
fn all_runs_every_suite_in_order_and_is_deterministic() {
    let cfg = small();
    let a = run_suite("all", &cfg).unwrap();
    let names: Vec<&str> = a.iter().map(|r| r.suite.as_str()).collect();
    assert_eq!(names, ["expsums", "modforms", "quadric", "oscint"]);
    let b = run_suite("all", &cfg).unwrap();
    for fmt in [Format::Csv, Format::Json] {
        assert_eq!(render(&a, fmt).unwrap(), render(&b, fmt).unwrap());
    }
}

#[test]
fn seed_changes_only_the_random_sample() {
    let mut cfg = small();
    let a = run_suite("expsums", &cfg).unwrap();
    cfg.seed += 1;
    let b = run_suite("expsums", &cfg).unwrap();
    assert_eq!(a[0].cases, b[0].cases);
    assert_ne!(render(&a, Format::Csv).unwrap(), render(&b, Format::Csv).unwrap());
}

#[test]
fn emit_round_trips_and_reports_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    emit(&[], Format::Csv, &empty).unwrap();
    let text = std::fs::read_to_string(&empty).unwrap();
    assert_eq!(text.lines().count(), 1);

    let mut r = VerificationReport::new("sample");
    r.check("a, \"quoted\"", 1.0, 1.5, 0.5, 0.1);
    r.check("b", 1.0, 1.0, 0.0, 0.1);
    r.metric("m", 0.25);
    for fmt in [Format::Csv, Format::Json] {
        let p = dir.path().join("sample.out");
        emit(std::slice::from_ref(&r), fmt, &p).unwrap();
        let bytes = std::fs::read(&p).unwrap();
        assert_eq!(parse(&bytes, fmt).unwrap(), vec![r.clone()]);
        assert_eq!(render(&parse(&bytes, fmt).unwrap(), fmt).unwrap(), bytes);
    }
    let bad = dir.path().join("missing").join("x.csv");
    assert!(matches!(emit(&[r], Format::Csv, &bad), Err(Error::Io { .. })));
}

#[test]
fn tau_rows_match_known_values() {
    let rows = tau_rows(&build_tau_table(7).unwrap());
    let taus: Vec<i128> = rows.iter().map(|r| r.tau).collect();
    assert_eq!(taus, [1, -24, 252, -1472, 4830, -6048, -16744]);
    assert_eq!(rows[0].n, 1);
    assert_eq!(rows[0].lambda, 1.0);
    let csv = String::from_utf8(render_rows(&rows, Format::Csv).unwrap()).unwrap();
    assert!(csv.starts_with("n,tau,lambda\n1,1,1.0\n2,-24,"));
}

#[test]
fn oscint_rows_carry_ratios() {
    let cfg = small();
    let rows = oscint_rows(&cfg, &build_tau_table(cfg.tau_limit).unwrap()).unwrap();
    assert!(rows.iter().all(|r| r.pass && r.bound_ratio <= 1.0));
    for check in ["bessel", "poisson", "voronoi", "dissection", "phase_stationary", "phase_flat"] {
        assert!(rows.iter().any(|r| r.check == check), "{check}");
    }
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn binary_exit_codes() {
    let o = qhl(&["verify", "--suite", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    let o = qhl(&["verify", "--suite", "modforms", "--tau-limit", "300"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("kind,suite,cases,max_error"));
}

#[test]
fn binary_failing_suite_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.conf");
    std::fs::write(&cfg, "max_prime_power = 20\ngauss_max_q = 4\nbrute_max_q = 3\nsamples = 2\n").unwrap();
    let out = dir.path().join("r.json");
    let o = qhl(&["verify", "--suite", "expsums", "--config", cfg.to_str().unwrap(), "--format", "json", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let reports = parse(&std::fs::read(&out).unwrap(), Format::Json).unwrap();
    assert!(!reports[0].passed());
}

#[test]
fn binary_tau_uses_cache_dir() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_qhl"))
            .args(["tau", "--tau-limit", "50"])
            .env("QHL_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert!(first.status.success());
    assert!(Path::new(&dir.path().join("tau-table.bin")).exists());
    let second = run();
    assert_eq!(first.stdout, second.stdout);
    let text = stdout(&first);
    assert_eq!(text.lines().count(), 51);
    assert!(text.contains("\n4,-1472,"));
}

#[test]
fn binary_count_columns() {
    let o = qhl(&["count", "--form", "1,1,1,-1", "--x-list", "10,20", "--tau-limit", "100"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("form,X,zero_count,N_unit,N_lambda,N_abslambda,ratio,seconds"));
    assert_eq!(lines.count(), 2);

    let o = qhl(&["count", "--form", "1,1,1,-1", "--x-list", "10", "--tau-limit", "100", "--weight", "lambda", "--method", "naive"]);
    assert!(o.status.success());
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    let cols: Vec<&str> = row.split("\",").nth(1).unwrap().split(',').collect();
    assert!(cols[2].is_empty() && !cols[3].is_empty() && cols[4].is_empty(), "{row}");
}

#[test]
fn binary_expsum_json_agrees_with_oracle() {
    let o = qhl(&["expsum", "--form", "1,1,1,1", "--q", "27", "--n-list", "1,3,9,-5", "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for r in rows {
        assert!(r["abs_error"].as_f64().unwrap() < 1e-6 * 27f64.powf(2.5));
    }
}

#[test]
fn binary_oscint_and_bench() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("o.conf");
    std::fs::write(&cfg, "voronoi_max_q = 1\npoisson_max_q = 2\ntau_limit = 20000\nx_list = 10\nforms = 1,1,1,-1\n").unwrap();
    let c = cfg.to_str().unwrap();
    let o = qhl(&["oscint", "--config", c]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("check,parameters,value,error,tolerance,bound_ratio,pass\n"));
    let o = qhl(&["bench", "--config", c]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("tau_table") && text.contains("sq_closed_per_call") && text.contains("enumeration"));
}
