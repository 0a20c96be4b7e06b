#![allow(dead_code)]

use hmf_core::arith::{qi, Q};
use hmf_core::dictionary::{CoefficientField, HilbertNewformData};
use hmf_core::field::{PrimeIdeal, TotallyRealField};
use hmf_core::hecke::{HeckeCharacter, ResidueCharacter};
use hmf_core::numfield::{NfElem, NumberField};
use hmf_core::arith::poly::QPoly;
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::sync::Arc;

/// tau(n) for n <= bound via Delta = (eta^3)^8 and Jacobi's eta^3 = sum (-1)^k (2k+1) q^{(2k+1)^2/8}.
pub fn tau_oracle(bound: usize) -> Vec<i128> {
    // eta^3 / q^{1/8} as a sparse series in q
    let mut sparse = Vec::new();
    let mut k = 0i128;
    loop {
        let e = ((2 * k + 1) * (2 * k + 1) - 1) / 8;
        if e as usize > bound {
            break;
        }
        sparse.push((e as usize, if k % 2 == 0 { 2 * k + 1 } else { -(2 * k + 1) }));
        k += 1;
    }
    let mut acc = vec![0i128; bound + 1];
    acc[0] = 1;
    for _ in 0..8 {
        let mut next = vec![0i128; bound + 1];
        for (i, a) in acc.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for &(e, c) in &sparse {
                if i + e > bound {
                    break;
                }
                next[i + e] += a * c;
            }
        }
        acc = next;
    }
    // Delta = q * acc
    let mut tau = vec![0i128; bound + 1];
    tau[1..].copy_from_slice(&acc[..bound]);
    tau
}

pub fn rationals() -> TotallyRealField {
    TotallyRealField::new(&[0, 1]).unwrap()
}

pub fn golden() -> TotallyRealField {
    TotallyRealField::new(&[-1, -1, 1]).unwrap()
}

pub fn trivial_character(k: &TotallyRealField) -> HeckeCharacter {
    let triv = ResidueCharacter::trivial(k, &k.unit_ideal()).unwrap();
    HeckeCharacter::adelize(k, &triv, 1).unwrap()
}

pub fn delta_datum(k: &TotallyRealField, bound: u64) -> HilbertNewformData {
    let tau = tau_oracle(bound as usize);
    let cf = CoefficientField::rational();
    let ev = (1..=bound)
        .map(|n| (k.rational_ideal(&qi(n as i64)).unwrap(), cf.from_q(Q::from_integer(BigInt::from(tau[n as usize])))))
        .collect();
    HilbertNewformData::new(k, vec![12], trivial_character(k), cf, ev, bound).unwrap()
}

pub fn golden_coefficients() -> Arc<NumberField> {
    NumberField::new(QPoly::from_ints(&[-1, -1, 1])).unwrap()
}

/// Level one eigendata over `k` with character `chi` (trivial on all primes used), `C(p)` from `prime_value` and
/// prime powers from the Hecke recursion, written out independently of the library expansion.
pub fn datum_from_primes(
    k: &TotallyRealField,
    weights: Vec<i64>,
    chi: &HeckeCharacter,
    cf: &CoefficientField,
    bound: u64,
    prime_value: impl Fn(&PrimeIdeal) -> NfElem,
) -> HilbertNewformData {
    let k0 = *weights.iter().max().unwrap();
    let field = cf.field.clone();
    let mut ev = BTreeMap::new();
    for (m, fac) in k.integral_ideals_up_to(bound).unwrap() {
        let mut c = NfElem::from_i64(&field, 1);
        for (p, e) in &fac {
            let cp = prime_value(p);
            let w = NfElem::from_q(&field, Q::from_integer(BigInt::from(p.norm()).pow((k0 - 1) as u32)));
            let (mut prev, mut cur) = (NfElem::from_i64(&field, 1), cp.clone());
            for _ in 1..*e {
                let next = sub(&mul(&cp, &cur), &mul(&w, &prev));
                prev = cur;
                cur = next;
            }
            c = mul(&c, &cur);
        }
        ev.insert(m, c);
    }
    HilbertNewformData::new(k, weights, chi.clone(), cf.clone(), ev, bound).unwrap()
}

fn mul(a: &NfElem, b: &NfElem) -> NfElem {
    use hmf_core::arith::scalar::Scalar;
    a.mul(b)
}

fn sub(a: &NfElem, b: &NfElem) -> NfElem {
    use hmf_core::arith::scalar::Scalar;
    a.sub(b)
}

/// `a + b phi` in the golden coefficient field.
pub fn golden_elem(field: &Arc<NumberField>, a: i64, b: i64) -> NfElem {
    NfElem::from_coords(field, vec![qi(a), qi(b)]).unwrap()
}
