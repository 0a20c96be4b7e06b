mod common;

use common::*;
use hmf_cli::hmf1::serialize_hmf1;
use hmf_core::arith::Q;
use hmf_core::dictionary::GaloisAction;
use hmf_core::field::TotallyRealField;
use hmf_core::numfield::{Automorphism, NfElem};
use serde_json::Value;
use std::path::PathBuf;
use std::process::Command;

fn delta() -> String {
    data("delta.hmf1").display().to_string()
}

fn structured(args: &[&str]) -> (Value, i32) {
    let mut a = args.to_vec();
    a.extend(["--format", "structured"]);
    let out = hmf(&a);
    assert_eq!(out.stdout.matches('\n').count(), 1, "one record per run: {}", out.stdout);
    (serde_json::from_str(&out.stdout).unwrap(), out.code)
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn critical_points_of_delta() {
    let out = hmf(&["critical-points", "--in", &delta()]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("classical: [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11]"), "{}", out.stdout);
    // integers strictly between (k0 - k)/2 and (k0 + k)/2 for k0 = k = 12
    let oracle: Vec<Value> = (-50i64..50).filter(|&m| 0 < m && m < 12).map(Value::from).collect();
    let (v, _) = structured(&["critical-points", "--in", &delta()]);
    assert_eq!(v["results"]["classical"], Value::Array(oracle));
}

#[test]
fn classify_reports() {
    let out = hmf(&["classify", "--in", &data("mixed_weight.hmf1").display().to_string()]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("class: not algebraic under any twist"), "{}", out.stdout);
    let (v, _) = structured(&["classify", "--weights", "2,2"]);
    assert_eq!(v["results"]["class"], "algebraic");
    assert_eq!(v["results"]["regular"], true);
    let (v, _) = structured(&["classify", "--weights", "1,1"]);
    assert_eq!(v["results"]["class"], "algebraic after a half twist");
    assert_eq!(v["results"]["regular"], false);
}

#[test]
fn zeta_checks() {
    let out = hmf(&["zeta-check", "--type", "unramified", "--alpha", "1", "--beta", "1", "--q", "3", "--order", "30"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("identity holds to order 30"), "{}", out.stdout);
    for args in [
        vec!["--type", "steinberg", "--chi", "-2/3", "--q", "5"],
        vec!["--type", "one-ramified", "--chi", "7", "--q", "4", "--conductor", "3"],
        vec!["--type", "depthless", "--q", "9", "--conductor", "2"],
        vec!["--type", "unramified", "--alpha", "-1/2", "--beta", "3", "--q", "2", "--order", "12"],
    ] {
        let mut a = vec!["zeta-check"];
        a.extend(args);
        let (v, code) = structured(&a);
        assert_eq!(code, 0);
        assert_eq!(v["results"]["holds"], true, "{a:?}");
    }
}

/// `sum_a (a/5) e(a/5)` in floating point.
fn quadratic_gauss_oracle() -> (f64, f64) {
    let legendre = [0.0, 1.0, -1.0, -1.0, 1.0];
    (1..5).fold((0.0, 0.0), |(re, im), a| {
        let t = 2.0 * std::f64::consts::PI * a as f64 / 5.0;
        (re + legendre[a] * t.cos(), im + legendre[a] * t.sin())
    })
}

#[test]
fn gauss_sum_mod_five() {
    let (v, code) = structured(&["gauss-sum", "--modulus", "5", "--index", "2"]);
    assert_eq!(code, 0);
    let r = &v["results"];
    assert_eq!(r["order"], 2);
    let re: f64 = r["value"]["re"].as_str().unwrap().parse().unwrap();
    let im: f64 = r["value"]["im"].as_str().unwrap().parse().unwrap();
    let (ore, oim) = quadratic_gauss_oracle();
    assert!((re - ore).abs() < 1e-12 && (im - oim).abs() < 1e-12, "{re} {im}");
    assert!(r["value"]["re"].as_str().unwrap().starts_with("2.23606797"));
    let radius: f64 = r["value"]["radius"].as_str().unwrap().parse().unwrap();
    assert!(radius > 0.0 && radius < 1e-30);
    let (w, _) = structured(&["gauss-sum", "--modulus", "5", "--index", "2", "--prec", "256"]);
    let finer: f64 = w["results"]["value"]["radius"].as_str().unwrap().parse().unwrap();
    assert!(finer < radius * 1e-20);
    let text = hmf(&["gauss-sum", "--modulus", "5", "--index", "2"]).stdout;
    assert!(text.contains("value: 2.23606797749978969640"), "{text}");
    assert!(text.contains(" +/- "));
}

#[test]
fn structured_records_have_a_fixed_shape() {
    let out = hmf(&["coh-constants", "--weights", "12", "--format", "structured"]);
    assert_eq!(
        out.stdout,
        "{\"command\":\"coh-constants\",\"status\":0,\"results\":{\"mu\":[[5,-5]],\"purity_weight\":0,\"d_inf\":6,\"c\":-120960},\"warnings\":[]}\n"
    );
    let (v, _) = structured(&["attach", "--in", &delta(), "--bound", "1"]);
    assert_eq!(v["warnings"].as_array().unwrap().len(), 1);
    let (v, _) = structured(&["coh-constants", "--weights", "2,2"]);
    assert_eq!((v["results"]["d_inf"].clone(), v["results"]["c"].clone()), (Value::from(2), Value::from(16)));
}

#[test]
fn field_and_class_data() {
    let (v, _) = structured(&["field-info", "--poly=-1,-1,1"]);
    assert_eq!(v["results"]["discriminant"], 5);
    let e0: f64 = v["results"]["embeddings"][0]["mid"].as_str().unwrap().parse().unwrap();
    assert!((e0 - (1.0 - 5f64.sqrt()) / 2.0).abs() < 1e-15);
    for (d, h_plus) in [(2, 1), (3, 2), (5, 1), (6, 2), (7, 2), (10, 2)] {
        let poly = format!("--poly=-{d},0,1");
        let (v, code) = structured(&["narrow-class", &poly]);
        assert_eq!(code, 0);
        assert_eq!(v["results"]["h_plus"], h_plus, "d = {d}");
    }
}

#[test]
fn delta_euler_and_l_values() {
    let (v, _) = structured(&["euler-check", "--in", &delta()]);
    assert_eq!(v["results"]["holds"], true);
    assert_eq!(v["results"]["compared"], 100);
    // L(s, Pi) = L(s + 11/2, f)
    let (c, _) = structured(&["lvalue", "--in", &delta(), "--s", "13"]);
    let (u, _) = structured(&["lvalue", "--in", &delta(), "--s", "15/2", "--normalization", "unitary"]);
    let val = |v: &Value| -> f64 { v["results"]["value"]["re"].as_str().unwrap().parse().unwrap() };
    let tail = |v: &Value| -> f64 { v["results"]["tail_bound"].as_str().unwrap().parse().unwrap() };
    assert!((val(&c) - val(&u)).abs() <= tail(&c) + tail(&u));
    assert!((val(&c) - 0.99720986806124).abs() < 1e-9);
}

#[test]
fn galois_checks() {
    let k = TotallyRealField::new(&[-1, -1, 1]).unwrap();
    let chi = character(&k, 1, 0);
    let cf = coefficient_field("golden");
    let bound = 30;
    let f = synthetic(&k, vec![2, 2], &chi, &cf, bound, 11);
    let sigma = GaloisAction::new(Automorphism::quadratic_conjugation(&cf.field).unwrap(), vec![0, 1]).unwrap();
    let mut conj = f.galois_conjugate(&k, &sigma).unwrap();
    let form = scratch("galois_form.hmf1", &serialize_hmf1(&k, &f));
    let form = form.display().to_string();
    let out = hmf(&["galois-check", "--in", &form, "--sigma", "conjugation"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("holds: true"), "{}", out.stdout);
    // a prime too large to divide any other stored ideal
    let p = k.primes_up_to_norm(bound).unwrap().into_iter().rev().find(|p| p.norm() * 4 > bound).unwrap();
    let c = conj.eigenvalues.get_mut(&p.ideal).unwrap();
    *c = NfElem::from_coords(&cf.field, vec![c.coords()[0].clone() + Q::from_integer(1.into()), c.coords()[1].clone()]).unwrap();
    let bad = scratch("galois_bad.hmf1", &serialize_hmf1(&k, &conj));
    let (v, code) = structured(&["galois-check", "--in", &form, "--sigma", "conjugation", "--conjugate", &bad.display().to_string()]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["holds"], false);
    assert_eq!(v["results"]["offending_prime"], p.label());
    let (v, _) = structured(&["galois-check", "--in", &delta()]);
    assert_eq!(v["results"]["holds"], true);
}

#[test]
fn exit_code_contract() {
    let corrupt = scratch("corrupt.hmf1", &std::fs::read_to_string(data("delta.hmf1")).unwrap().replace("value -1472", "value 0"));
    let malformed = scratch("malformed.hmf1", &std::fs::read_to_string(data("delta.hmf1")).unwrap().replace("weights 12", "weights twelve"));
    let (corrupt, malformed) = (corrupt.display().to_string(), malformed.display().to_string());
    let d = delta();
    let cases: Vec<(Vec<&str>, i32, &str)> = vec![
        // success
        (vec!["classify", "--weights", "2,2"], 0, ""),
        (vec!["--help"], 0, ""),
        // domain errors
        (vec!["lvalue", "--in", &d, "--s", "2"], 1, "outside the region of absolute convergence"),
        (vec!["coh-constants", "--weights", "3,3"], 1, "needs all weights even"),
        (vec!["critical-points", "--weights", "2,3"], 1, "parity"),
        (vec!["zeta-check", "--type", "unramified", "--alpha", "0", "--beta", "1", "--q", "3"], 1, ""),
        (vec!["galois-check", "--in", &d, "--sigma", "conjugation"], 1, ""),
        (vec!["attach", "--in", &corrupt], 1, "invariant violated"),
        // parse errors
        (vec!["attach", "--in", &malformed], 2, "line 9, column 9"),
        // usage and unknown commands
        (vec!["frobnicate"], 2, "unknown command `frobnicate`"),
        (vec!["attach"], 2, "needs --in"),
        (vec!["attach", "--in", "/nonexistent/form.hmf1"], 2, "nonexistent"),
        (vec!["classify", "--weights", "two"], 2, "bad weight"),
        (vec!["classify", "--weights", "2", "--prec", "3"], 2, "precision"),
        (vec!["zeta-check", "--type", "steinberg", "--q", "3"], 2, "--chi"),
        (vec!["zeta-check", "--type", "unramified"], 2, ""),
        (vec!["classify", "--colour"], 2, ""),
        (vec!["gauss-sum", "--modulus", "5", "--index", "9"], 2, "out of range"),
        (vec!["galois-check", "--in", &d, "--sigma", "frobenius"], 2, "unknown automorphism"),
    ];
    for (args, code, needle) in &cases {
        let out = hmf(args);
        assert_eq!(out.code, *code, "{args:?}: {}{}", out.stdout, out.stderr);
        assert!(out.stderr.contains(needle), "{args:?}: {}", out.stderr);
        if *code != 0 && !args.contains(&"frobnicate") && !args.contains(&"--colour") && !args.contains(&"--type") {
            let (v, _) = structured(args);
            assert_eq!(v["status"], *code);
            assert!(v["error"].is_string());
        }
    }
    let bad_env = hmf_cli::run(["hmf", "classify", "--weights", "2"], Some("lots"));
    assert_eq!(bad_env.code, 2);
}

#[test]
fn output_is_deterministic() {
    let d = delta();
    for args in [
        vec!["lvalue", "--in", &d, "--s", "14,1/3"],
        vec!["gauss-sum", "--modulus", "7", "--index", "1"],
        vec!["attach", "--in", &d],
        vec!["field-info", "--poly=-3,-1,1"],
    ] {
        let (a, b) = (structured(&args).0.to_string(), structured(&args).0.to_string());
        assert_eq!(a, b, "{args:?}");
        assert_eq!(hmf(&args).stdout, hmf(&args).stdout);
    }
}

#[test]
fn precision_from_the_environment() {
    let bin = env!("CARGO_BIN_EXE_hmf");
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut c = Command::new(bin);
        c.args(["gauss-sum", "--modulus", "5", "--index", "2", "--format", "structured"]).args(extra);
        match env {
            Some(v) => c.env("HMF_PREC", v),
            None => c.env_remove("HMF_PREC"),
        };
        let out = c.output().unwrap();
        (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
    };
    let (from_env, code) = run(Some("200"), &[]);
    assert_eq!(code, 0);
    assert_eq!(from_env, run(None, &["--prec", "200"]).0);
    assert_ne!(from_env, run(None, &[]).0);
    assert_eq!(run(Some("64"), &["--prec", "200"]).0, from_env);
    assert_eq!(run(None, &[]).0, hmf(&["gauss-sum", "--modulus", "5", "--index", "2", "--format", "structured"]).stdout);
    assert_eq!(run(Some("x"), &[]).1, 2);
    let out = Command::new(bin).arg("nope").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(12))]

    #[test]
    fn random_eigendata_survives_the_file_and_euler_check(seed in 0u64..1_000_000, bound in 8u64..40, even in proptest::bool::ANY) {
        let k = TotallyRealField::new(&[-1, -1, 1]).unwrap();
        let chi = character(&k, 1, 0);
        let weights = if even { vec![2, 4] } else { vec![3, 3] };
        let f = synthetic(&k, weights, &chi, &coefficient_field("golden"), bound, seed);
        let text = serialize_hmf1(&k, &f);
        let back = hmf_cli::hmf1::parse_hmf1(&text).unwrap();
        proptest::prop_assert_eq!(serialize_hmf1(&back.field, &back.form), text.clone());
        let path = scratch(&format!("roundtrip_{seed}_{bound}.hmf1"), &text);
        let (v, code) = structured(&["euler-check", "--in", &path.display().to_string()]);
        proptest::prop_assert_eq!(code, 0);
        proptest::prop_assert_eq!(&v["results"]["holds"], &Value::Bool(true));
    }
}
