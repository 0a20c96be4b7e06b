//! The finite ring `O / n` and its unit group.

use super::{FieldElement, Ideal, PrimeIdeal, TotallyRealField};
use crate::arith::linalg::reduce_mod_hnf;
use crate::arith::{qz, Q};
use crate::{Error, Result};
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// Canonical residues modulo an integral ideal, as coordinates in the box `0 <= v_i < h_ii`.
#[derive(Clone, Debug)]
pub struct ResidueRing {
    modulus: Ideal,
    primes: Vec<PrimeIdeal>,
    units: Vec<Vec<BigInt>>,
    index: BTreeMap<Vec<BigInt>, usize>,
}

impl ResidueRing {
    pub fn modulus(&self) -> &Ideal {
        &self.modulus
    }

    /// Primes dividing the modulus.
    pub fn primes(&self) -> &[PrimeIdeal] {
        &self.primes
    }

    /// Canonical representatives of `(O / n)^x`, sorted.
    pub fn units(&self) -> &[Vec<BigInt>] {
        &self.units
    }

    pub fn phi(&self) -> usize {
        self.units.len()
    }

    pub fn unit_index(&self, r: &[BigInt]) -> Option<usize> {
        self.index.get(r).copied()
    }

    pub fn reduce_integral(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut v = v.to_vec();
        reduce_mod_hnf(self.modulus.hnf(), &mut v);
        v
    }

    /// All residues of `O / n`.
    pub fn all_residues(&self) -> Vec<Vec<BigInt>> {
        box_points(self.modulus.hnf())
    }

    pub fn element(&self, r: &[BigInt]) -> FieldElement {
        FieldElement::from_bigints(r)
    }
}

fn box_points(h: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = h.len();
    let sizes: Vec<u64> = (0..n).map(|i| h[i][i].to_u64().expect("small modulus")).collect();
    let mut out = Vec::new();
    let mut cur = vec![0u64; n];
    loop {
        out.push(cur.iter().map(|&x| BigInt::from(x)).collect());
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            cur[i] += 1;
            if cur[i] < sizes[i] {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

impl TotallyRealField {
    pub fn residue_ring(&self, modulus: &Ideal) -> Result<ResidueRing> {
        if !modulus.is_integral() {
            return Err(Error::InvalidInput("modulus must be an integral ideal".into()));
        }
        let norm = self.ideal_norm(modulus)?.to_integer();
        if norm > BigInt::from(1u64 << 24) {
            return Err(Error::InvalidInput("modulus norm too large to enumerate".into()));
        }
        let primes: Vec<PrimeIdeal> = self.factor_ideal(modulus)?.into_iter().map(|(p, _)| p).collect();
        let mut units = Vec::new();
        for r in box_points(modulus.hnf()) {
            let x = FieldElement::from_bigints(&r);
            if primes.iter().all(|p| !self.ideal_contains(&p.ideal, &x)) {
                units.push(r);
            }
        }
        units.sort();
        let index = units.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        Ok(ResidueRing { modulus: modulus.clone(), primes, units, index })
    }

    /// Whether `x` is a unit at every prime of the modulus.
    pub fn is_unit_mod(&self, ring: &ResidueRing, x: &FieldElement) -> Result<bool> {
        for p in ring.primes() {
            if self.element_valuation(p, x)? != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Residue class of an element which is a unit at every prime of the modulus.
    pub fn residue_of(&self, ring: &ResidueRing, x: &FieldElement) -> Result<Vec<BigInt>> {
        if !self.is_unit_mod(ring, x)? {
            return Err(Error::InvalidInput("element is not prime to the modulus".into()));
        }
        if let Some(v) = x.int_coords() {
            return Ok(ring.reduce_integral(&v));
        }
        // x = (delta x) / delta with delta integral and prime to the modulus
        let delta = self.coprime_denominator(ring, x)?;
        let num = self.mul(&delta, x).int_coords().expect("denominator clears");
        let num = ring.reduce_integral(&num);
        let den = ring.reduce_integral(&delta.int_coords().expect("integral"));
        let den_inv = self.residue_inverse(ring, &den)?;
        Ok(self.residue_mul(ring, &num, &den_inv))
    }

    fn coprime_denominator(&self, ring: &ResidueRing, x: &FieldElement) -> Result<FieldElement> {
        let d = x.denominator();
        if ring.primes().iter().all(|p| !(&d % BigInt::from(p.p)).is_zero()) {
            return Ok(self.from_rational(qz(&d)));
        }
        // O intersected with x^{-1} O is prime to the modulus
        let dx = self.principal_ideal(x)?;
        let inv = self.ideal_inverse(&dx)?;
        let both = self.ideal_intersection(&inv, &self.unit_ideal())?;
        let basis = both.z_basis();
        let n = basis.len();
        for radius in 1i64..=12 {
            let side = (2 * radius + 1) as usize;
            let total = side.pow(n as u32);
            for code in 0..total {
                let mut c = code;
                let mut y = self.zero();
                for b in &basis {
                    let k = (c % side) as i64 - radius;
                    c /= side;
                    y = y.add(&b.scale(&Q::from_integer(BigInt::from(k))));
                }
                if y.is_zero() {
                    continue;
                }
                if ring.primes().iter().all(|p| !self.ideal_contains(&p.ideal, &y)) {
                    return Ok(y);
                }
            }
        }
        Err(Error::InvariantViolation("no denominator prime to the modulus".into()))
    }

    /// `a` intersected with `b` (via `(a^-1 + b^-1)^-1`).
    pub fn ideal_intersection(&self, a: &Ideal, b: &Ideal) -> Result<Ideal> {
        let s = self.ideal_add(&self.ideal_inverse(a)?, &self.ideal_inverse(b)?);
        self.ideal_inverse(&s)
    }

    pub fn residue_mul(&self, ring: &ResidueRing, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let p = self.mul(&FieldElement::from_bigints(a), &FieldElement::from_bigints(b));
        ring.reduce_integral(&p.int_coords().expect("integral product"))
    }

    pub fn residue_pow(&self, ring: &ResidueRing, a: &[BigInt], mut e: u64) -> Vec<BigInt> {
        let mut acc = ring.reduce_integral(&self.one().int_coords().unwrap());
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.residue_mul(ring, &acc, &base);
            }
            base = self.residue_mul(ring, &base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn residue_inverse(&self, ring: &ResidueRing, a: &[BigInt]) -> Result<Vec<BigInt>> {
        if ring.unit_index(a).is_none() {
            return Err(Error::InvalidInput("residue is not a unit".into()));
        }
        let phi = ring.phi() as u64;
        let r = self.residue_pow(ring, a, phi.max(1) - 1);
        let one = ring.reduce_integral(&self.one().int_coords().unwrap());
        debug_assert_eq!(self.residue_mul(ring, a, &r), one);
        if phi == 0 {
            return Ok(one);
        }
        Ok(r)
    }

    pub fn residue_one(&self, ring: &ResidueRing) -> Vec<BigInt> {
        ring.reduce_integral(&self.one().int_coords().unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qr;

    #[test]
    fn unit_counts() {
        let q = TotallyRealField::new(&[0, 1]).unwrap();
        let r = q.residue_ring(&q.rational_ideal(&crate::arith::qi(20)).unwrap()).unwrap();
        assert_eq!(r.phi(), 8);
        let k = TotallyRealField::new(&[-1, -1, 1]).unwrap();
        let two = k.rational_ideal(&crate::arith::qi(2)).unwrap();
        assert_eq!(k.residue_ring(&two).unwrap().phi(), 3);
        let p11 = &k.factor_prime(11).unwrap()[0].0;
        let m = k.ideal_mul(&p11.ideal, &two);
        let r = k.residue_ring(&m).unwrap();
        assert_eq!(r.phi(), 30);
        for u in r.units() {
            let x = FieldElement::from_bigints(u);
            assert!(r.primes().iter().all(|p| !k.ideal_contains(&p.ideal, &x)));
            let inv = k.residue_inverse(&r, u).unwrap();
            assert_eq!(k.residue_mul(&r, u, &inv), k.residue_one(&r));
        }
    }

    #[test]
    fn fractional_residues() {
        let k = TotallyRealField::new(&[-1, -1, 1]).unwrap();
        let five = k.rational_ideal(&crate::arith::qi(5)).unwrap();
        let r = k.residue_ring(&five).unwrap();
        let x = k.from_rational(qr(3, 2));
        let res = k.residue_of(&r, &x).unwrap();
        let two = k.residue_of(&r, &k.from_int(2)).unwrap();
        assert_eq!(k.residue_mul(&r, &res, &two), k.residue_of(&r, &k.from_int(3)).unwrap());
        // denominator divisible by a prime under the modulus but not by the prime itself
        let p11 = k.factor_prime(11).unwrap();
        let (a, b) = (&p11[0].0, &p11[1].0);
        let ra = k.residue_ring(&a.ideal).unwrap();
        let z = (0..40)
            .map(|c| k.basis_element(1).add(&k.from_int(c)))
            .find(|z| k.element_valuation(a, z).unwrap() == 1 && k.element_valuation(b, z).unwrap() == 0)
            .unwrap();
        let y = z.scale(&qr(1, 11));
        assert_eq!(y.denominator(), BigInt::from(11));
        let ry = k.residue_of(&ra, &y).unwrap();
        assert!(ra.unit_index(&ry).is_some());
    }
}
