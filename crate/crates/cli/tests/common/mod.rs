#![allow(dead_code)]

use hmf_core::arith::poly::QPoly;
use hmf_core::arith::scalar::Scalar;
use hmf_core::arith::Q;
use hmf_core::dictionary::{CoefficientField, HilbertNewformData};
use hmf_core::field::TotallyRealField;
use hmf_core::hecke::{HeckeCharacter, ResidueCharacter};
use hmf_core::numfield::{NfElem, NumberField};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::path::PathBuf;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn hmf(args: &[&str]) -> hmf_cli::Outcome {
    hmf_cli::run(std::iter::once("hmf").chain(args.iter().copied()), None)
}

/// Coefficient fields used by the corpus: `Q`, `Q(sqrt 5)` and `Q(i)` with `i` as the fourth root of unity.
pub fn coefficient_field(kind: &str) -> CoefficientField {
    match kind {
        "Q" => CoefficientField::rational(),
        "golden" => CoefficientField::new(NumberField::new(QPoly::from_ints(&[-1, -1, 1])).unwrap(), 1, None).unwrap(),
        "gaussian" => {
            let f = NumberField::new(QPoly::from_ints(&[1, 0, 1])).unwrap();
            let i = NfElem::generator(&f);
            (0..2).find_map(|e| CoefficientField::new(f.clone(), e, Some((4, i.clone()))).ok()).unwrap()
        }
        _ => panic!("unknown coefficient field {kind}"),
    }
}

/// Random eigendata obeying the Hecke recursion, written out from prime values.
pub fn synthetic(
    k: &TotallyRealField,
    weights: Vec<i64>,
    chi: &HeckeCharacter,
    cf: &CoefficientField,
    bound: u64,
    seed: u64,
) -> HilbertNewformData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k0 = *weights.iter().max().unwrap();
    let d = cf.field.degree();
    let mut at_prime = BTreeMap::new();
    for p in k.primes_up_to_norm(bound).unwrap() {
        let c: Vec<Q> = (0..d).map(|_| Q::new(BigInt::from(rng.gen_range(-9i64..=9)), BigInt::from(rng.gen_range(1i64..=3)))).collect();
        let w = match chi.prime_value(k, &p).unwrap() {
            None => cf.zero(),
            Some(u) => cf.unity_value(u).unwrap(),
        };
        let nk = cf.from_q(Q::from_integer(BigInt::from(p.norm()).pow((k0 - 1) as u32)));
        at_prime.insert((p.p, p.index), (NfElem::from_coords(&cf.field, c).unwrap(), w.mul(&nk)));
    }
    let mut table = BTreeMap::new();
    for (m, fac) in k.integral_ideals_up_to(bound).unwrap() {
        let mut c = cf.one();
        for (p, e) in &fac {
            let (cp, w) = &at_prime[&(p.p, p.index)];
            let (mut prev, mut cur) = (cf.one(), cp.clone());
            for _ in 1..*e {
                let next = cp.mul(&cur).sub(&w.mul(&prev));
                prev = cur;
                cur = next;
            }
            c = c.mul(&cur);
        }
        table.insert(m, c);
    }
    HilbertNewformData::new(k, weights, chi.clone(), cf.clone(), table, bound).unwrap()
}

/// The `index`-th character modulo the rational integer `modulus`, adelized.
pub fn character(k: &TotallyRealField, modulus: i64, index: usize) -> HeckeCharacter {
    let m = k.rational_ideal(&Q::from_integer(BigInt::from(modulus))).unwrap();
    let omega = ResidueCharacter::all(k, &m).unwrap().into_iter().nth(index).unwrap();
    HeckeCharacter::adelize(k, &omega, 1).unwrap()
}
