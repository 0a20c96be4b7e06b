//! Gauss sums of finite-order Hecke characters.

use super::HeckeCharacter;
use crate::arith::ball::Complex;
use crate::arith::{Unity, Q};
use crate::field::{FieldElement, PrimeIdeal, TotallyRealField};
use crate::{Error, Result};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub struct GaussSumValue {
    pub value: Complex,
    /// The sum as a list of roots of unity.
    pub terms: Vec<Unity>,
    /// `ord_p(y_p) = -c_p - r_p` at each prime of the conductor, keyed by `(p, index)`.
    pub y_valuations: Vec<((u64, usize), i64)>,
    /// Upper bound on the radius of `value` (both parts).
    pub error_bound: Q,
    pub conductor_norm: Q,
}

/// The additive character `x -> e(lambda_p(x))` on a rational number, as a root of unity.
fn psi_p(t: &Q, p: u64) -> Result<Unity> {
    let pb = BigInt::from(p);
    let mut den = t.denom().clone();
    let mut pk = BigInt::one();
    while (&den % &pb).is_zero() {
        den /= &pb;
        pk *= &pb;
    }
    if pk.is_one() {
        return Ok(Unity::ONE);
    }
    // t = a / (pk * den) with den prime to p; the p-adic fractional part is (a den^{-1} mod pk) / pk
    let inv = den.extended_gcd(&pk).x.mod_floor(&pk);
    let num = (t.numer() * inv).mod_floor(&pk);
    let pk = pk.to_i64().ok_or(Error::InvalidInput("conductor exponent too large".into()))?;
    Ok(Unity::new(num.to_i64().unwrap(), pk))
}

/// An element with valuation exactly `v` at `pr` and integral at the other primes above `pr.p`.
fn local_scaler(k: &TotallyRealField, pr: &PrimeIdeal, v: i64) -> Result<FieldElement> {
    let others: Vec<PrimeIdeal> =
        k.factor_prime(pr.p)?.into_iter().map(|(q, _)| q).filter(|q| q.index != pr.index).collect();
    let good = |y: &FieldElement| -> Result<bool> {
        if k.element_valuation(pr, y)? != v {
            return Ok(false);
        }
        for q in &others {
            if k.element_valuation(q, y)? < 0 {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let pi = if v >= 0 { k.pow(&pr.uniformizer, v as u64) } else { k.pow(&k.inv(&pr.uniformizer)?, (-v) as u64) };
    if good(&pi)? {
        return Ok(pi);
    }
    let lattice = k.ideal_pow(&pr.ideal, v)?;
    let basis = lattice.z_basis();
    let n = basis.len();
    for radius in 1i64..=6 {
        let side = (2 * radius + 1) as usize;
        for code in 0..side.pow(n as u32) {
            let mut c = code;
            let mut y = k.zero();
            for b in &basis {
                let m = (c % side) as i64 - radius;
                c /= side;
                y = y.add(&b.scale(&crate::arith::qi(m)));
            }
            if !y.is_zero() && good(&y)? {
                return Ok(y);
            }
        }
    }
    Err(Error::InvariantViolation(format!("no local scaling element at {pr}")))
}

/// `G(chi) = prod_{p | c} sum_{x in (O_p / p^c)^x} chi_p(x)^{-1} psi_p(y_p x)` with `ord_p(y_p) = -c_p - r_p`.
///
/// Each local sum runs over residues with counting measure, so `|G|^2 = N(c)` for primitive characters.
pub fn gauss_sum(k: &TotallyRealField, chi: &HeckeCharacter, precision: u32) -> Result<GaussSumValue> {
    let omega = chi.residue().primitive(k)?;
    let cond = omega.modulus().clone();
    let ring = omega.ring();
    let mut terms = vec![Unity::ONE];
    let mut yv = Vec::new();
    for (pr, c) in k.factor_ideal(&cond)? {
        let r = k.local_different_exponent(&pr) as i64;
        let v = -c - r;
        yv.push(((pr.p, pr.index), v));
        let y = local_scaler(k, &pr, v)?;
        let rest = k.ideal_mul(&cond, &k.ideal_pow(&pr.ideal, -c)?);
        let mut local = Vec::new();
        for u in ring.units() {
            let x = ring.element(u);
            if !k.ideal_contains(&rest, &x.sub(&k.one())) {
                continue;
            }
            let w = omega.value_of_residue(u).expect("unit").inv();
            let t = k.trace(&k.mul(&y, &x));
            local.push(w.mul(&psi_p(&t, pr.p)?));
        }
        let mut next = Vec::with_capacity(terms.len() * local.len());
        for a in &terms {
            for b in &local {
                next.push(a.mul(b));
            }
        }
        terms = next;
    }
    let wp = precision + 32 + 2 * (terms.len().max(2).ilog2());
    let mut value = Complex::zero(wp);
    for t in &terms {
        value = &value + &Complex::root_of_unity(&t.as_fraction(), wp);
    }
    let value = value.with_prec(precision + 16);
    let err = value.rad_q();
    if err > Q::new(BigInt::one(), BigInt::one() << precision) {
        return Err(Error::PrecisionExhausted(format!("gauss sum radius exceeds 2^-{precision}")));
    }
    let conductor_norm = k.ideal_norm(&cond)?;
    Ok(GaussSumValue { value, terms, y_valuations: yv, error_bound: err, conductor_norm })
}
