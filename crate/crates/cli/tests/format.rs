mod common;

use common::*;
use hmf_cli::hmf1::{parse_hmf1, serialize_hmf1, Document, DocumentError, ParseError};
use hmf_core::arith::Q;
use hmf_core::dictionary::CoefficientField;
use hmf_core::field::TotallyRealField;
use hmf_core::hecke::{HeckeCharacter, ResidueCharacter};
use num_bigint::BigInt;

const MINIMAL: &str = "HMF1\nFIELD\npoly 0 1\nCHAR\nmodulus 1\nextension 1\nFORM\nweights 12\nlevel 1\ncoefficient-poly 0 1\nembedding 0\nbound 1\nCOEFFS\nnorm 1 ideal 1 value 1\n";

fn parse_err(text: &str) -> ParseError {
    match parse_hmf1(text) {
        Err(DocumentError::Parse(e)) => e,
        other => panic!("expected a parse error, got {:?}", other.map(|_| ())),
    }
}

fn invariant_err(text: &str) -> String {
    match parse_hmf1(text) {
        Err(DocumentError::Invariant(s)) => s,
        other => panic!("expected an invariant violation, got {:?}", other.map(|_| ())),
    }
}

#[test]
fn minimal_document_is_a_skeleton_datum() {
    let d = parse_hmf1(MINIMAL).unwrap();
    assert_eq!(d.form.weights, vec![12]);
    assert_eq!(d.form.k0(), 12);
    assert_eq!(d.form.eigenvalues.len(), 1);
    assert!(d.character.is_trivial());
    assert_eq!(serialize_hmf1(&d.field, &d.form), MINIMAL);
}

#[test]
fn comments_and_blank_lines_are_ignored() {
    let noisy = "# header comment\n\nHMF1   # magic\nFIELD\n  poly 0 1\nCHAR\nmodulus 1\nFORM\nweights 12 # Delta\nlevel 1\nbound 1\n\nCOEFFS\nnorm 1 ideal 1 value 1 # C(O)\n";
    let d = parse_hmf1(noisy).unwrap();
    assert_eq!(serialize_hmf1(&d.field, &d.form), MINIMAL);
}

#[test]
fn wrong_value_length_is_a_parse_error() {
    let e = parse_err(&MINIMAL.replace("value 1\n", "value 1 2\n"));
    assert_eq!((e.line, e.column), (14, 24));
    assert!(e.message.contains("value needs 1 coordinates, found 2"), "{e}");
    let golden = "HMF1\nFIELD\npoly -1 -1 1\nCHAR\nmodulus 1,0|0,1\nFORM\nweights 2 2\nlevel 1,0|0,1\ncoefficient-poly -1 -1 1\nbound 1\nCOEFFS\nnorm 1 ideal 1,0|0,1 value 1\n";
    let e = parse_err(golden);
    assert_eq!((e.line, e.column), (12, 22));
    assert!(e.message.contains("found 1"));
}

#[test]
fn syntax_errors_carry_positions() {
    let cases: &[(&str, &str, (usize, usize), &str)] = &[
        ("HMF1\n", "HMF2\n", (1, 1), "header"),
        ("poly 0 1\n", "poly 0 2\n", (3, 8), "monic"),
        ("poly 0 1\n", "poly 0 x\n", (3, 8), "integer"),
        ("weights 12\n", "weights 12 12\n", (8, 12), "trailing"),
        ("weights 12\n", "weight 12\n", (8, 1), "unknown FORM key"),
        ("modulus 1\n", "modulus 1|1\n", (5, 9), "columns"),
        ("value 1\n", "value 1/0\n", (14, 22), "zero denominator"),
        ("value 1\n", "value 1/2/3\n", (14, 22), "rational"),
        ("norm 1 ideal", "nrm 1 ideal", (14, 1), "`norm`"),
        ("bound 1\n", "", (7, 1), "lacks `bound`"),
        ("FIELD\n", "", (2, 1), "expected the FIELD block"),
        ("extension 1\n", "extension 1\nextension 1\n", (7, 1), "duplicate"),
    ];
    for (from, to, at, needle) in cases {
        let text = MINIMAL.replacen(from, to, 1);
        let e = parse_err(&text);
        assert_eq!((e.line, e.column), *at, "{from:?} -> {to:?}: {e}");
        assert!(e.message.contains(needle), "{from:?} -> {to:?}: {e}");
    }
    let reordered = "HMF1\nFIELD\npoly 0 1\nFORM\nweights 12\n";
    let e = parse_err(reordered);
    assert_eq!((e.line, e.column), (4, 1));
    assert!(e.message.contains("order FIELD, CHAR, FORM, COEFFS"));
    let e = parse_err("HMF1\nFIELD\npoly 0 1\nCHAR\nmodulus 1\n");
    assert!(e.message.contains("missing FORM block"));
    assert_eq!(parse_err("").message, "empty document");
}

#[test]
fn broken_invariants_are_named() {
    let m = invariant_err(&MINIMAL.replace("value 1\n", "value 1\nnorm 3 ideal 2 value 5\n"));
    assert!(m.contains("has norm 2, not 3"), "{m}");
    let m = invariant_err(&MINIMAL.replace("bound 1\n", "bound 3\n").replace("value 1\n", "value 1\nnorm 2 ideal 2 value 1\nnorm 2 ideal 2 value 1\n"));
    assert!(m.contains("listed twice"), "{m}");
    let m = invariant_err(&MINIMAL.replace("value 1\n", "value 2\n"));
    assert!(m.contains("C(O)"), "{m}");
    let m = invariant_err(&MINIMAL.replace("value 1\n", "value 1\nnorm 2 ideal 2 value 1\n"));
    assert!(m.contains("beyond the stated bound"), "{m}");
    let m = invariant_err(&MINIMAL.replace("level 1\n", "level 2\n"));
    assert!(m.contains("level differs"), "{m}");
    let quad = |poly: &str, modulus: &str| {
        format!("HMF1\nFIELD\npoly {poly}\nCHAR\nmodulus {modulus}\nFORM\nweights 2 2\nlevel {modulus}\nbound 1\nCOEFFS\nnorm 1 ideal 1,0|0,1 value 1\n")
    };
    let m = invariant_err(&quad("-2 0 1", "2,0|3,1"));
    assert!(m.contains("Hermite normal form"), "{m}");
    let m = invariant_err(&quad("-1 -1 1", "2,0|0,1"));
    assert!(m.contains("not an ideal"), "{m}");
    let m = invariant_err(&quad("-1 -1 1", "2,0|0,2"));
    assert!(m.contains("proper subgroup"), "{m}");
    let m = invariant_err(&quad("-2 0 1", "1,0|0,1").replace("weights 2 2", "weights 2 0"));
    assert!(m.contains("weights must be positive"), "{m}");
}

#[test]
fn recursion_failures_surface_when_reading() {
    let text = std::fs::read_to_string(data("delta.hmf1")).unwrap();
    let bad = text.replace("norm 4 ideal 4 value -1472", "norm 4 ideal 4 value -1471");
    let m = invariant_err(&bad);
    assert!(m.contains("eigendata"), "{m}");
}

#[test]
fn golden_document_with_twenty_lines() {
    let k = TotallyRealField::new(&[-1, -1, 1]).unwrap();
    let ideals = k.integral_ideals_up_to(200).unwrap();
    let bound = (1..200).find(|&b| ideals.iter().filter(|(m, _)| k.ideal_norm(m).unwrap() <= Q::from_integer(b.into())).count() == 20).unwrap();
    let chi = character(&k, 1, 0);
    let f = synthetic(&k, vec![2, 2], &chi, &coefficient_field("golden"), bound, 5);
    let text = serialize_hmf1(&k, &f);
    assert_eq!(text.lines().filter(|l| l.starts_with("norm ")).count(), 20);
    let back = parse_hmf1(&text).unwrap();
    assert_eq!(back.form.bound, bound);
    assert_eq!(back.form.eigenvalues, f.eigenvalues);
    assert!(back.form.validate(&back.field).unwrap().is_valid());
}

fn quadratic(k: &TotallyRealField, modulus: i64) -> HeckeCharacter {
    let m = k.rational_ideal(&Q::from_integer(BigInt::from(modulus))).unwrap();
    // the first character of this order that is trivial on the relevant units
    ResidueCharacter::all(k, &m)
        .unwrap()
        .into_iter()
        .filter(|c| c.order() == 2)
        .find_map(|c| HeckeCharacter::adelize(k, &c, 1).ok())
        .unwrap()
}

fn quartic(k: &TotallyRealField, modulus: i64) -> HeckeCharacter {
    let m = k.rational_ideal(&Q::from_integer(BigInt::from(modulus))).unwrap();
    // the first character of this order that is trivial on the relevant units
    ResidueCharacter::all(k, &m)
        .unwrap()
        .into_iter()
        .filter(|c| c.order() == 4)
        .find_map(|c| HeckeCharacter::adelize(k, &c, 1).ok())
        .unwrap()
}

fn corpus() -> Vec<String> {
    let q = TotallyRealField::new(&[0, 1]).unwrap();
    let golden = TotallyRealField::new(&[-1, -1, 1]).unwrap();
    let sqrt2 = TotallyRealField::new(&[-2, 0, 1]).unwrap().with_unit_norm_minus_one(true);
    let sqrt3 = TotallyRealField::new(&[-3, 0, 1]).unwrap().with_unit_norm_minus_one(false);
    let disc13 = TotallyRealField::new(&[-3, -1, 1]).unwrap();
    let sqrt6 = TotallyRealField::new(&[-6, 0, 1]).unwrap();
    let sqrt7 = TotallyRealField::new(&[-7, 0, 1]).unwrap();
    let cubic = TotallyRealField::new(&[1, -2, -1, 1]).unwrap().with_class_data(1, 1);
    let rat = coefficient_field("Q");
    let gold = coefficient_field("golden");
    let gauss = coefficient_field("gaussian");
    let sqrt3_ext = {
        let triv = ResidueCharacter::trivial(&sqrt3, &sqrt3.unit_ideal()).unwrap();
        HeckeCharacter::adelize(&sqrt3, &triv, 2).unwrap()
    };
    let cases: Vec<(&TotallyRealField, Vec<i64>, HeckeCharacter, &CoefficientField, u64)> = vec![
        (&q, vec![12], character(&q, 1, 0), &rat, 30),
        (&q, vec![2], quadratic(&q, 5), &rat, 40),
        (&q, vec![3], quartic(&q, 5), &gauss, 30),
        (&q, vec![4], quadratic(&q, 8), &rat, 30),
        (&q, vec![2], quadratic(&q, 12), &rat, 25),
        (&q, vec![6], quadratic(&q, 7), &gold, 20),
        (&q, vec![1], quadratic(&q, 3), &rat, 30),
        (&q, vec![2], character(&q, 1, 0), &rat, 1),
        (&golden, vec![2, 2], character(&golden, 1, 0), &rat, 20),
        (&golden, vec![2, 4], character(&golden, 1, 0), &gold, 30),
        (&golden, vec![3, 3], character(&golden, 1, 0), &rat, 25),
        (&golden, vec![2, 2], quadratic(&golden, 5), &rat, 20),
        (&golden, vec![2, 2], quartic(&golden, 13), &gauss, 12),
        (&sqrt2, vec![2, 2], character(&sqrt2, 1, 0), &rat, 20),
        (&sqrt2, vec![4, 2], character(&sqrt2, 1, 0), &gold, 15),
        (&sqrt3, vec![2, 2], character(&sqrt3, 1, 0), &rat, 20),
        (&sqrt3, vec![3, 3], sqrt3_ext, &rat, 15),
        (&disc13, vec![2, 2], character(&disc13, 1, 0), &rat, 20),
        (&sqrt6, vec![2, 2], character(&sqrt6, 1, 0), &rat, 12),
        (&sqrt7, vec![2, 2], character(&sqrt7, 1, 0), &rat, 12),
        (&cubic, vec![2, 2, 2], character(&cubic, 1, 0), &rat, 15),
    ];
    cases
        .into_iter()
        .enumerate()
        .map(|(i, (k, w, chi, cf, b))| serialize_hmf1(k, &synthetic(k, w, &chi, cf, b, i as u64)))
        .collect()
}

#[test]
fn canonical_documents_round_trip() {
    let docs = corpus();
    assert!(docs.len() >= 20);
    for (i, text) in docs.iter().enumerate() {
        assert_eq!(Document::parse(text).unwrap().to_text(), *text, "document {i}");
        let d = parse_hmf1(text).unwrap_or_else(|e| panic!("document {i}: {e}\n{text}"));
        assert_eq!(serialize_hmf1(&d.field, &d.form), *text, "document {i}");
    }
    assert!(docs.iter().any(|t| t.contains("\nunity 4 ")));
    assert!(docs.iter().any(|t| t.contains("\nextension 2\n")));
    assert!(docs.iter().any(|t| t.contains("\nclass 1 1\n")));
    assert!(docs.iter().any(|t| t.contains("\nunit-norm-minus-one no\n")));
    assert!(docs.iter().any(|t| t.contains("\ngen ")));
}

#[test]
fn shipped_documents_read_back() {
    for name in ["delta.hmf1", "mixed_weight.hmf1"] {
        let text = std::fs::read_to_string(data(name)).unwrap();
        let d = parse_hmf1(&text).unwrap();
        let canon = serialize_hmf1(&d.field, &d.form);
        let again = parse_hmf1(&canon).unwrap();
        assert_eq!(again.form.eigenvalues, d.form.eigenvalues);
        assert_eq!(serialize_hmf1(&again.field, &again.form), canon);
    }
}

#[test]
fn explicit_integral_basis_is_read() {
    let text = "HMF1\nFIELD\npoly 1 -2 -1 1\nbasis 1 0 0\nbasis 0 1 0\nbasis 0 0 1\nclass 1 1\nCHAR\nmodulus 1,0,0|0,1,0|0,0,1\nFORM\nweights 2 2 2\nlevel 1,0,0|0,1,0|0,0,1\nbound 1\nCOEFFS\nnorm 1 ideal 1,0,0|0,1,0|0,0,1 value 1\n";
    let doc = Document::parse(text).unwrap();
    assert_eq!(doc.field.basis.as_ref().map(|b| b.len()), Some(3));
    let d = doc.ingest().unwrap();
    assert_eq!(d.field.degree(), 3);
    assert_eq!(d.field.user_class(), Some((1, 1)));
    let e = parse_err(&text.replace("basis 0 0 1\n", ""));
    assert!(e.message.contains("integral basis needs 3 elements"), "{e}");
}
