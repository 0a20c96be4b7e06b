//! Fractional ideals in Hermite normal form and prime decomposition.

use super::{lift_eval, FieldElement, TotallyRealField};
use crate::arith::fp::FpPoly;
use crate::arith::linalg::{hnf, inverse_q, solve_upper_integral};
use crate::arith::poly::QPoly;
use crate::arith::{common_denominator, factor_u64, is_prime, qi, qz, Q};
use crate::{Error, Result};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `(1/den) * span(columns of hnf)` in integral-basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ideal {
    hnf: Vec<Vec<BigInt>>,
    den: BigInt,
}

impl Ideal {
    /// The unit ideal of a degree-`n` field.
    pub fn unit(n: usize) -> Ideal {
        let hnf = (0..n).map(|j| (0..n).map(|i| BigInt::from((i == j) as i64)).collect()).collect();
        Ideal { hnf, den: BigInt::one() }
    }

    fn normalized(hnf: Vec<Vec<BigInt>>, den: BigInt) -> Ideal {
        let mut g = den.clone();
        for c in &hnf {
            for x in c {
                g = g.gcd(x);
            }
        }
        if g.is_one() {
            return Ideal { hnf, den };
        }
        Ideal { hnf: hnf.into_iter().map(|c| c.into_iter().map(|x| x / &g).collect()).collect(), den: den / g }
    }

    /// Columns of the Hermite normal form (column `j` is zero below row `j`).
    pub fn hnf(&self) -> &[Vec<BigInt>] {
        &self.hnf
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn degree(&self) -> usize {
        self.hnf.len()
    }

    /// Z-basis as field elements.
    pub fn z_basis(&self) -> Vec<FieldElement> {
        let d = qz(&self.den);
        self.hnf.iter().map(|c| FieldElement::new(c.iter().map(|x| qz(x) / &d).collect())).collect()
    }

    /// Smallest positive integer in the ideal times its denominator: `hnf[0][0]`.
    pub fn min_integer(&self) -> Q {
        Q::new(self.hnf[0][0].clone(), self.den.clone())
    }

    /// Text form used in documents: columns separated by `|`, entries by `,`.
    pub fn to_text(&self) -> String {
        let cols: Vec<String> = self
            .hnf
            .iter()
            .map(|c| c.iter().map(|x| x.to_str_radix(10)).collect::<Vec<_>>().join(","))
            .collect();
        let body = cols.join("|");
        if self.den.is_one() {
            body
        } else {
            format!("{}/{}", body, self.den)
        }
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// A prime ideal with its local invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeIdeal {
    pub p: u64,
    pub e: u32,
    pub f: u32,
    /// Position among the primes above `p`, in canonical order.
    pub index: usize,
    pub uniformizer: FieldElement,
    pub ideal: Ideal,
    inverse: Ideal,
}

impl PrimeIdeal {
    pub fn norm(&self) -> u64 {
        self.p.pow(self.f)
    }

    pub fn inverse(&self) -> &Ideal {
        &self.inverse
    }

    pub fn label(&self) -> String {
        format!("({}, {})", self.p, self.index)
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}_{} [{}]", self.p, self.index, self.ideal)
    }
}

/// HNF basis of the Z-lattice spanned by rational vectors, with a common denominator.
fn lattice(n: usize, gens: &[Vec<Q>]) -> Option<(Vec<Vec<BigInt>>, BigInt)> {
    let d = common_denominator(gens.iter().flatten());
    let ints: Vec<Vec<BigInt>> = gens.iter().map(|g| g.iter().map(|x| (x * qz(&d)).to_integer()).collect()).collect();
    Some((hnf(n, ints)?, d))
}

impl TotallyRealField {
    pub fn unit_ideal(&self) -> Ideal {
        Ideal::unit(self.degree())
    }

    /// Ideal with the given Z-basis (the caller guarantees O-stability).
    pub fn ideal_from_z_basis(&self, gens: &[Vec<Q>]) -> Result<Ideal> {
        let (h, d) = lattice(self.degree(), gens).ok_or(Error::ZeroIdeal)?;
        Ok(Ideal::normalized(h, d))
    }

    /// Ideal given by HNF columns and a denominator, checked for O-stability.
    pub fn ideal_from_hnf(&self, cols: Vec<Vec<BigInt>>, den: BigInt) -> Result<Ideal> {
        let n = self.degree();
        if cols.len() != n || cols.iter().any(|c| c.len() != n) {
            return Err(Error::InvariantViolation(format!("ideal needs {n} columns of length {n}")));
        }
        if den.is_zero() || den.is_negative() {
            return Err(Error::InvariantViolation("ideal denominator must be positive".into()));
        }
        let h = hnf(n, cols.clone()).ok_or(Error::ZeroIdeal)?;
        if h != cols {
            return Err(Error::InvariantViolation("ideal matrix is not in Hermite normal form".into()));
        }
        let id = Ideal::normalized(h, den);
        let gens: Vec<FieldElement> = id.z_basis();
        let full = self.ideal_from_generators(&gens)?;
        if full != id {
            return Err(Error::InvariantViolation("lattice is not an ideal".into()));
        }
        Ok(id)
    }

    /// The O-module generated by the given elements.
    pub fn ideal_from_generators(&self, gens: &[FieldElement]) -> Result<Ideal> {
        let n = self.degree();
        let mut zg = Vec::with_capacity(gens.len() * n);
        for g in gens {
            for j in 0..n {
                zg.push(self.mul(g, &self.basis_element(j)).coords().to_vec());
            }
        }
        self.ideal_from_z_basis(&zg)
    }

    pub fn principal_ideal(&self, a: &FieldElement) -> Result<Ideal> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        self.ideal_from_generators(core::slice::from_ref(a))
    }

    pub fn rational_ideal(&self, m: &Q) -> Result<Ideal> {
        self.principal_ideal(&self.from_rational(m.clone()))
    }

    pub fn ideal_norm(&self, a: &Ideal) -> Result<Q> {
        let mut det = BigInt::one();
        for (j, c) in a.hnf.iter().enumerate() {
            det *= &c[j];
        }
        if det.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        Ok(Q::new(det, a.den.pow(self.degree() as u32)))
    }

    pub fn ideal_mul(&self, a: &Ideal, b: &Ideal) -> Ideal {
        let ab = a.z_basis();
        let bb = b.z_basis();
        let mut gens = Vec::with_capacity(ab.len() * bb.len());
        for x in &ab {
            for y in &bb {
                gens.push(self.mul(x, y).coords().to_vec());
            }
        }
        self.ideal_from_z_basis(&gens).expect("product of nonzero ideals")
    }

    /// `a + b`, the greatest common divisor.
    pub fn ideal_add(&self, a: &Ideal, b: &Ideal) -> Ideal {
        let mut gens: Vec<Vec<Q>> = a.z_basis().into_iter().map(|x| x.coords().to_vec()).collect();
        gens.extend(b.z_basis().into_iter().map(|x| x.coords().to_vec()));
        self.ideal_from_z_basis(&gens).expect("nonzero sum")
    }

    /// `{x : x a in O}`.
    pub fn ideal_inverse(&self, a: &Ideal) -> Result<Ideal> {
        let n = self.degree();
        let mut rows: Vec<Vec<Q>> = Vec::with_capacity(n * n);
        for b in a.z_basis() {
            rows.extend(self.mul_matrix(&b));
        }
        let (h, d) = lattice(n, &rows).ok_or(Error::ZeroIdeal)?;
        // dual basis: columns of (H^T)^{-1} with H = h / d
        let ht: Vec<Vec<Q>> = (0..n).map(|r| (0..n).map(|c| qz(&h[r][c]) / qz(&d)).collect()).collect();
        let inv = inverse_q(&ht).ok_or(Error::ZeroIdeal)?;
        let cols: Vec<Vec<Q>> = (0..n).map(|c| (0..n).map(|r| inv[r][c].clone()).collect()).collect();
        self.ideal_from_z_basis(&cols)
    }

    pub fn ideal_div(&self, a: &Ideal, b: &Ideal) -> Result<Ideal> {
        Ok(self.ideal_mul(a, &self.ideal_inverse(b)?))
    }

    pub fn ideal_pow(&self, a: &Ideal, e: i64) -> Result<Ideal> {
        let base = if e < 0 { self.ideal_inverse(a)? } else { a.clone() };
        let mut acc = self.unit_ideal();
        for _ in 0..e.unsigned_abs() {
            acc = self.ideal_mul(&acc, &base);
        }
        Ok(acc)
    }

    pub fn ideal_contains(&self, a: &Ideal, x: &FieldElement) -> bool {
        let v: Vec<Q> = x.coords().iter().map(|c| c * qz(&a.den)).collect();
        if v.iter().any(|c| !c.is_integer()) {
            return false;
        }
        let vi: Vec<BigInt> = v.iter().map(|c| c.to_integer()).collect();
        solve_upper_integral(&a.hnf, &vi).is_some()
    }

    /// `a | b`, i.e. `b` is contained in `a`.
    pub fn ideal_divides(&self, a: &Ideal, b: &Ideal) -> bool {
        b.z_basis().iter().all(|x| self.ideal_contains(a, x))
    }

    pub fn coprime(&self, a: &Ideal, b: &Ideal) -> bool {
        self.ideal_add(a, b) == self.unit_ideal()
    }

    /// Prime decomposition of `pO`, primes in canonical order.
    pub fn factor_prime(&self, p: u64) -> Result<Vec<(PrimeIdeal, u32)>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let n = self.degree();
        let pe = self.from_int(p as i64);
        if n == 1 {
            let ideal = self.principal_ideal(&pe)?;
            let inverse = self.ideal_inverse(&ideal)?;
            return Ok(vec![(PrimeIdeal { p, e: 1, f: 1, index: 0, uniformizer: pe, ideal, inverse }, 1)]);
        }
        let (gen, minpoly) = if n == 2 {
            let w = self.basis_element(1);
            let t = self.trace(&w);
            let nm = self.norm(&w);
            (w, QPoly::new(vec![nm, -t, qi(1)]))
        } else {
            let idx2 = Q::from_integer(self.poly().discriminant().to_integer()) / qz(self.discriminant());
            let idx2 = idx2.to_integer();
            if (idx2 % BigInt::from(p)).is_zero() {
                return Err(Error::IndexDivisor(p));
            }
            (self.from_power_coords(&[qi(0), qi(1)]), self.poly().clone())
        };
        let pb = BigInt::from(p);
        let red: Vec<i64> = minpoly
            .coeffs()
            .iter()
            .map(|c| c.to_integer().mod_floor(&pb).to_i64().unwrap())
            .collect();
        let facs = FpPoly::from_i64(p, &red).factor();
        let mut out: Vec<(PrimeIdeal, u32)> = Vec::new();
        for (h, e) in facs {
            let hq = QPoly::new(h.coeffs().iter().map(|&c| qi(c as i64)).collect());
            let hv = lift_eval(self, &hq, &gen);
            let ideal = self.ideal_from_generators(&[pe.clone(), hv.clone()])?;
            let inverse = self.ideal_inverse(&ideal)?;
            let f = h.degree().unwrap_or(0) as u32;
            let mut pr = PrimeIdeal { p, e, f, index: 0, uniformizer: pe.clone(), ideal, inverse };
            if e > 1 {
                let cands = [hv.clone(), hv.add(&pe)];
                let mut found = None;
                for c in cands {
                    if !c.is_zero() && self.element_valuation(&pr, &c)? == 1 {
                        found = Some(c);
                        break;
                    }
                }
                pr.uniformizer = found.ok_or(Error::InvariantViolation(format!("no uniformizer found above {p}")))?;
            }
            out.push((pr, e));
        }
        out.sort_by(|a, b| (a.0.f, &a.0.ideal).cmp(&(b.0.f, &b.0.ideal)));
        for (i, (pr, _)) in out.iter_mut().enumerate() {
            pr.index = i;
        }
        let total: u32 = out.iter().map(|(pr, e)| pr.f * e).sum();
        if total as usize != n {
            return Err(Error::InvariantViolation(format!("sum of e f above {p} is {total}")));
        }
        Ok(out)
    }

    /// Valuation of a fractional ideal at a prime.
    pub fn valuation(&self, pr: &PrimeIdeal, a: &Ideal) -> i64 {
        // a = (1/d) J with J integral
        let d = a.den.clone();
        let mut vd = 0i64;
        let mut dd = d.clone();
        let pb = BigInt::from(pr.p);
        while (&dd % &pb).is_zero() {
            dd /= &pb;
            vd += pr.e as i64;
        }
        let mut j = Ideal { hnf: a.hnf.clone(), den: BigInt::one() };
        let mut k = 0i64;
        loop {
            // J is divisible by P iff J P^{-1} is integral
            if !self.ideal_divides(&pr.ideal, &j) {
                break;
            }
            j = self.ideal_mul(&j, &pr.inverse);
            k += 1;
        }
        k - vd
    }

    pub fn element_valuation(&self, pr: &PrimeIdeal, a: &FieldElement) -> Result<i64> {
        Ok(self.valuation(pr, &self.principal_ideal(a)?))
    }

    /// Prime factorization of a fractional ideal.
    pub fn factor_ideal(&self, a: &Ideal) -> Result<Vec<(PrimeIdeal, i64)>> {
        let nrm = self.ideal_norm(a)?;
        let mut ps: Vec<u64> = Vec::new();
        for x in [nrm.numer(), nrm.denom()] {
            let xu = x.abs().to_u64().ok_or(Error::InvariantViolation("ideal norm too large to factor".into()))?;
            for (p, _) in factor_u64(xu) {
                if !ps.contains(&p) {
                    ps.push(p);
                }
            }
        }
        ps.sort();
        let mut out = Vec::new();
        for p in ps {
            for (pr, _) in self.factor_prime(p)? {
                let v = self.valuation(&pr, a);
                if v != 0 {
                    out.push((pr, v));
                }
            }
        }
        Ok(out)
    }

    /// `r_P = ord_P(different)`.
    pub fn local_different_exponent(&self, pr: &PrimeIdeal) -> u32 {
        self.valuation(pr, self.different()).max(0) as u32
    }

    /// All primes of norm at most `bound`, ordered by norm, then rational prime, then index.
    pub fn primes_up_to_norm(&self, bound: u64) -> Result<Vec<PrimeIdeal>> {
        let mut out = Vec::new();
        for p in crate::arith::primes_up_to(bound) {
            for (pr, _) in self.factor_prime(p)? {
                if pr.norm() <= bound {
                    out.push(pr);
                }
            }
        }
        out.sort_by(|a, b| (a.norm(), a.p, a.index).cmp(&(b.norm(), b.p, b.index)));
        Ok(out)
    }

    /// All integral ideals of norm at most `bound` with their factorizations, ordered by norm.
    pub fn integral_ideals_up_to(&self, bound: u64) -> Result<Vec<(Ideal, Vec<(PrimeIdeal, u32)>)>> {
        let primes = self.primes_up_to_norm(bound)?;
        let mut out: Vec<(u64, Ideal, Vec<(PrimeIdeal, u32)>)> = vec![(1, self.unit_ideal(), Vec::new())];
        // extend each ideal only by primes at or after its largest prime factor
        let mut frontier: Vec<(u64, Ideal, Vec<(PrimeIdeal, u32)>, usize)> = vec![(1, self.unit_ideal(), Vec::new(), 0)];
        while let Some((nrm, id, fac, from)) = frontier.pop() {
            for (i, pr) in primes.iter().enumerate().skip(from) {
                let pn = pr.norm();
                if nrm * pn > bound {
                    break;
                }
                let mut f2 = fac.clone();
                match f2.last_mut() {
                    Some((last, e)) if last == pr => *e += 1,
                    _ => f2.push((pr.clone(), 1)),
                }
                let id2 = self.ideal_mul(&id, &pr.ideal);
                out.push((nrm * pn, id2.clone(), f2.clone()));
                frontier.push((nrm * pn, id2, f2, i));
            }
        }
        let key = |f: &[(PrimeIdeal, u32)]| f.iter().map(|(p, e)| (p.norm(), p.p, p.index, *e)).collect::<Vec<_>>();
        out.sort_by(|a, b| (a.0, key(&a.2)).cmp(&(b.0, key(&b.2))));
        Ok(out.into_iter().map(|(_, i, f)| (i, f)).collect())
    }

    /// Readable name: the positive generator over the rationals, otherwise a product of prime labels.
    pub fn ideal_label(&self, a: &Ideal) -> Result<String> {
        if self.degree() == 1 {
            return Ok(format!("{}", a.min_integer()));
        }
        let fac = self.factor_ideal(a)?;
        if fac.is_empty() {
            return Ok(String::from("O"));
        }
        let parts: Vec<String> = fac
            .iter()
            .map(|(p, e)| if *e == 1 { format!("P{}_{}", p.p, p.index) } else { format!("P{}_{}^{}", p.p, p.index, e) })
            .collect();
        Ok(parts.join("*"))
    }

    /// Product of prime powers.
    pub fn ideal_from_factorization(&self, fac: &[(&PrimeIdeal, i64)]) -> Result<Ideal> {
        let mut acc = self.unit_ideal();
        for (pr, e) in fac {
            acc = self.ideal_mul(&acc, &self.ideal_pow(&pr.ideal, *e)?);
        }
        Ok(acc)
    }
}
