//! Absolute number fields in a power basis, used for coefficient fields.

use crate::arith::ball::{Complex, Real};
use crate::arith::fp::FpPoly;
use crate::arith::linalg::det_q;
use crate::arith::poly::QPoly;
use crate::arith::scalar::Scalar;
use crate::arith::{primes_up_to, qi, Q};
use crate::{Error, Result};
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, PartialEq, Eq)]
pub struct NumberField {
    poly: QPoly,
    degree: usize,
}

/// `Phi_m` over the rationals.
pub fn cyclotomic_poly(m: u64) -> QPoly {
    let mut p = QPoly::one().shift(m as usize).sub(&QPoly::one());
    for d in 1..m {
        if m % d == 0 {
            p = p.divrem(&cyclotomic_poly(d)).0;
        }
    }
    p
}

fn euler_phi(mut m: u64) -> u64 {
    let mut r = m;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if m > 1 {
        r -= r / m;
    }
    r
}

/// Returns `m` if `f` is the cyclotomic polynomial `Phi_m`.
pub fn cyclotomic_index(f: &QPoly) -> Option<u64> {
    let n = f.degree()? as u64;
    // phi(m) = n forces m <= 2 n^2 + 2 (crude but safe for small n)
    for m in 1..=(2 * n * n + 2).max(6) {
        if euler_phi(m) == n && &cyclotomic_poly(m) == f {
            return Some(m);
        }
    }
    None
}

/// Integral monic rescaling `d^n f(x / d)` of a monic rational polynomial.
fn integral_rescale(f: &QPoly) -> Vec<BigInt> {
    let n = f.degree().unwrap_or(0);
    let d = crate::arith::common_denominator(f.coeffs());
    (0..=n)
        .map(|i| (f.coeff(i) * Q::from_integer(d.pow((n - i) as u32))).to_integer())
        .collect()
}

/// Decides irreducibility of a monic squarefree polynomial.
///
/// Combines factorization patterns modulo small primes; cyclotomic
/// polynomials are recognised directly. `None` means undecided.
pub fn certify_irreducible(f: &QPoly) -> Option<bool> {
    let n = f.degree()?;
    if n <= 1 {
        return Some(true);
    }
    if n <= 3 {
        // reducible iff there is a rational root
        let c = integral_rescale(f);
        let c0 = c[0].abs();
        if c0.is_zero() {
            return Some(false);
        }
        let g = QPoly::from_bigints(&c);
        let c0u = c0.to_u64()?;
        let mut d = 1u64;
        while d * d <= c0u {
            if c0u % d == 0 {
                for r in [d, c0u / d] {
                    for s in [1i64, -1] {
                        if g.eval(&Q::from_integer(BigInt::from(r) * s)).is_zero() {
                            return Some(false);
                        }
                    }
                }
            }
            d += 1;
        }
        return Some(true);
    }
    if cyclotomic_index(f).is_some() {
        return Some(true);
    }
    let c = integral_rescale(f);
    let g = QPoly::from_bigints(&c);
    let disc = g.discriminant().to_integer();
    let mut possible: BTreeSet<usize> = (1..n).collect();
    for p in primes_up_to(400) {
        if (&disc % BigInt::from(p)).is_zero() {
            continue;
        }
        let cp: Vec<i64> = c.iter().map(|x| x.mod_floor(&BigInt::from(p)).to_i64().unwrap()).collect();
        let fp = FpPoly::from_i64(p, &cp);
        let mut sums: BTreeSet<usize> = BTreeSet::new();
        sums.insert(0);
        for (h, e) in fp.factor() {
            let d = h.degree().unwrap_or(0);
            for _ in 0..e {
                let cur: Vec<usize> = sums.iter().copied().collect();
                for s in cur {
                    sums.insert(s + d);
                }
            }
        }
        possible.retain(|d| sums.contains(d));
        if possible.is_empty() {
            return Some(true);
        }
        if possible.contains(&1) {
            // a linear factor over Q would be a rational root
            if has_rational_root(&g) {
                return Some(false);
            }
        }
    }
    None
}

fn has_rational_root(g: &QPoly) -> bool {
    let c0 = g.coeff(0).to_integer().abs();
    if c0.is_zero() {
        return true;
    }
    let Some(c0u) = c0.to_u64() else { return false };
    let mut d = 1u64;
    while d * d <= c0u {
        if c0u % d == 0 {
            for r in [d, c0u / d] {
                for s in [1i64, -1] {
                    if g.eval(&Q::from_integer(BigInt::from(r) * s)).is_zero() {
                        return true;
                    }
                }
            }
        }
        d += 1;
    }
    false
}

impl NumberField {
    /// Field defined by a monic irreducible polynomial with rational coefficients.
    pub fn new(poly: QPoly) -> Result<Arc<NumberField>> {
        let degree = poly.degree().ok_or(Error::ZeroElement)?;
        if degree == 0 {
            return Err(Error::InvariantViolation("constant defining polynomial".into()));
        }
        if !poly.lead().is_one() {
            return Err(Error::NotMonic);
        }
        if !poly.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        match certify_irreducible(&poly) {
            Some(true) => {}
            Some(false) => return Err(Error::InvariantViolation(format!("{poly} is reducible"))),
            None => {
                return Err(Error::InvariantViolation(format!("could not certify irreducibility of {poly}")))
            }
        }
        Ok(Arc::new(NumberField { poly, degree }))
    }

    /// The rationals, as `Q[x]/(x)`.
    pub fn rationals() -> Arc<NumberField> {
        Arc::new(NumberField { poly: QPoly::x(), degree: 1 })
    }

    pub fn poly(&self) -> &QPoly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Complex roots of the defining polynomial: real roots ascending, then
    /// conjugate pairs ordered by real part with positive imaginary part first.
    pub fn complex_roots(&self, prec: u32) -> Result<Vec<Complex>> {
        complex_roots(&self.poly, prec)
    }
}

/// Certified enclosures of all complex roots of a squarefree monic polynomial.
///
/// Durand-Kerner iteration on midpoints, then the Braess-Hadeler inclusion:
/// discs of radius `n |p(z_i)| / prod_{j != i} |z_i - z_j|` cover the roots,
/// and a disc disjoint from the others holds exactly one.
pub fn complex_roots(f: &QPoly, prec: u32) -> Result<Vec<Complex>> {
    let n = f.degree().ok_or(Error::ZeroElement)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![Complex::from_real(Real::from_q(&-f.coeff(0), prec))]);
    }
    let mut wp = prec + 32;
    for _attempt in 0..6 {
        if let Some(r) = try_roots(f, n, prec, wp) {
            return Ok(r);
        }
        wp *= 2;
    }
    Err(Error::PrecisionExhausted(format!("roots of {f}")))
}

fn eval_c(coeffs: &[Real], z: &Complex) -> Complex {
    let p = z.prec();
    let mut acc = Complex::zero(p);
    for c in coeffs.iter().rev() {
        acc = &(&acc * z) + &Complex::from_real(c.clone());
    }
    acc
}

fn try_roots(f: &QPoly, n: usize, prec: u32, wp: u32) -> Option<Vec<Complex>> {
    let coeffs: Vec<Real> = f.coeffs().iter().map(|c| Real::from_q(c, wp)).collect();
    let seed = Complex::from_q(&Q::new(BigInt::from(4), BigInt::from(10)), &Q::new(BigInt::from(9), BigInt::from(10)), wp);
    let scale = Real::from_q(&(f.root_bound() / qi(2) + qi(1)), wp);
    let mut z: Vec<Complex> = Vec::with_capacity(n);
    let mut acc = Complex::one(wp);
    for _ in 0..n {
        z.push(acc.mul_real(&scale).mid());
        acc = (&acc * &seed).mid();
    }
    let tol = Q::new(BigInt::one(), BigInt::one() << (wp - 16));
    for _it in 0..2000 {
        let mut maxc = Q::zero();
        for i in 0..n {
            let num = eval_c(&coeffs, &z[i]);
            let mut den = Complex::one(wp);
            for j in 0..n {
                if j != i {
                    den = (&den * &(&z[i] - &z[j])).mid();
                }
            }
            let Some(step) = num.div(&den) else { continue };
            let step = step.mid();
            let mag = step.re.abs_upper_q() + step.im.abs_upper_q();
            if mag > maxc {
                maxc = mag;
            }
            z[i] = (&z[i] - &step).mid();
        }
        if maxc < tol {
            break;
        }
    }
    // inclusion radii
    let mut radii: Vec<Q> = Vec::with_capacity(n);
    for i in 0..n {
        let num = eval_c(&coeffs, &z[i]);
        let mut den = Real::one(wp);
        for j in 0..n {
            if j != i {
                den = &den * &(&z[i] - &z[j]).abs();
            }
        }
        let lo = den.abs_lower_q();
        if lo.is_zero() {
            return None;
        }
        radii.push(num.abs().abs_upper_q() * qi(n as i64) / lo);
    }
    let limit = Q::new(BigInt::one(), BigInt::one() << prec);
    if radii.iter().any(|r| r > &limit) {
        return None;
    }
    let dist2 = |a: &Complex, b: &Complex| -> Q { (a - b).norm_sqr().lower_q() };
    for i in 0..n {
        for j in (i + 1)..n {
            let s = &radii[i] + &radii[j];
            if dist2(&z[i], &z[j]) <= &s * &s {
                return None;
            }
        }
    }
    let mut out: Vec<(bool, Complex)> = Vec::with_capacity(n);
    for i in 0..n {
        let ci = z[i].conj();
        let own = dist2(&z[i], &ci) <= (&radii[i] + &radii[i]) * (&radii[i] + &radii[i]);
        let meets_other = (0..n).any(|j| {
            j != i && {
                let s = &radii[i] + &radii[j];
                dist2(&ci, &z[j]) <= &s * &s
            }
        });
        let real = own && !meets_other && z[i].im.abs_upper_q() <= radii[i];
        let re = z[i].re.add_error(&radii[i]).with_prec(prec);
        let im = if real { Real::zero(prec) } else { z[i].im.add_error(&radii[i]).with_prec(prec) };
        out.push((real, Complex::new(re, im)));
    }
    let mut reals: Vec<Complex> = out.iter().filter(|(r, _)| *r).map(|(_, c)| c.clone()).collect();
    reals.sort_by(|a, b| a.re.mid_q().cmp(&b.re.mid_q()));
    let mut upper: Vec<Complex> = out
        .iter()
        .filter(|(r, c)| !*r && c.im.mid_q().is_positive())
        .map(|(_, c)| c.clone())
        .collect();
    upper.sort_by(|a, b| a.re.mid_q().cmp(&b.re.mid_q()));
    let lower = out.iter().filter(|(r, c)| !*r && !c.im.mid_q().is_positive()).count();
    if lower != upper.len() || reals.len() + 2 * upper.len() != n {
        return None;
    }
    let mut res = reals;
    for u in upper {
        let c = u.conj();
        res.push(u);
        res.push(c);
    }
    Some(res)
}

/// Element of a [`NumberField`] in the power basis.
#[derive(Clone)]
pub struct NfElem {
    field: Arc<NumberField>,
    c: Vec<Q>,
}

impl PartialEq for NfElem {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c && (Arc::ptr_eq(&self.field, &o.field) || self.field == o.field)
    }
}

impl Eq for NfElem {}

impl fmt::Debug for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NfElem({self})")
    }
}

impl fmt::Display for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.degree == 1 {
            return write!(f, "{}", self.c[0]);
        }
        let parts: Vec<String> = self.c.iter().map(|x| format!("{x}")).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl NfElem {
    pub fn from_coords(field: &Arc<NumberField>, mut c: Vec<Q>) -> Result<NfElem> {
        if c.len() > field.degree {
            return Err(Error::InvariantViolation(format!(
                "coordinate vector of length {} in a degree {} field",
                c.len(),
                field.degree
            )));
        }
        c.resize(field.degree, Q::zero());
        Ok(NfElem { field: field.clone(), c })
    }

    pub fn from_q(field: &Arc<NumberField>, q: Q) -> NfElem {
        let mut c = vec![Q::zero(); field.degree];
        c[0] = q;
        NfElem { field: field.clone(), c }
    }

    pub fn from_i64(field: &Arc<NumberField>, n: i64) -> NfElem {
        NfElem::from_q(field, qi(n))
    }

    /// The class of `x`.
    pub fn generator(field: &Arc<NumberField>) -> NfElem {
        NfElem::from_poly(field, &QPoly::x())
    }

    pub fn from_poly(field: &Arc<NumberField>, p: &QPoly) -> NfElem {
        let r = p.rem(&field.poly);
        let mut c: Vec<Q> = r.coeffs().to_vec();
        c.resize(field.degree, Q::zero());
        NfElem { field: field.clone(), c }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[Q] {
        &self.c
    }

    pub fn as_poly(&self) -> QPoly {
        QPoly::new(self.c.clone())
    }

    pub fn as_rational(&self) -> Option<Q> {
        if self.c[1..].iter().all(|x| x.is_zero()) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    fn mul_matrix(&self) -> Vec<Vec<Q>> {
        // column j = coordinates of self * x^j
        let n = self.field.degree;
        let mut cols = Vec::with_capacity(n);
        let mut cur = self.as_poly();
        for _ in 0..n {
            let e = NfElem::from_poly(&self.field, &cur);
            cols.push(e.c.clone());
            cur = e.as_poly().shift(1);
        }
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
    }

    pub fn norm(&self) -> Q {
        det_q(self.mul_matrix())
    }

    pub fn trace(&self) -> Q {
        let m = self.mul_matrix();
        (0..m.len()).fold(Q::zero(), |acc, i| acc + &m[i][i])
    }

    /// Image under the complex embedding sending `x` to `root`.
    pub fn embed(&self, root: &Complex) -> Complex {
        let p = root.prec();
        let mut acc = Complex::zero(p);
        for c in self.c.iter().rev() {
            acc = &(&acc * root) + &Complex::from_real(Real::from_q(c, p));
        }
        acc
    }

    /// Minimal polynomial over the rationals.
    pub fn minimal_polynomial(&self) -> QPoly {
        let n = self.field.degree;
        let mut powers: Vec<Vec<Q>> = vec![NfElem::from_i64(&self.field, 1).c];
        let mut cur = self.one_like();
        for k in 1..=n {
            cur = Scalar::mul(&cur, self);
            if let Some(rel) = linear_relation(&powers, &cur.c) {
                // cur = sum rel_i * power_i
                let mut c: Vec<Q> = rel.into_iter().map(|x| -x).collect();
                c.push(Q::one());
                let _ = k;
                return QPoly::new(c);
            }
            powers.push(cur.c.clone());
        }
        unreachable!("degree bound")
    }
}

/// Solves `target = sum a_i basis_i` if possible.
fn linear_relation(basis: &[Vec<Q>], target: &[Q]) -> Option<Vec<Q>> {
    let k = basis.len();
    let n = target.len();
    // augmented rows: n equations, k unknowns
    let mut rows: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut r: Vec<Q> = (0..k).map(|j| basis[j][i].clone()).collect();
            r.push(target[i].clone());
            r
        })
        .collect();
    let mut piv_cols = Vec::new();
    let mut r = 0;
    for col in 0..k {
        let Some(p) = (r..n).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for j in 0..=k {
                    let v = &rows[r][j] * &f;
                    rows[i][j] -= v;
                }
            }
        }
        piv_cols.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut sol = vec![Q::zero(); k];
    for (i, &c) in piv_cols.iter().enumerate() {
        sol[c] = rows[i][k].clone();
    }
    Some(sol)
}

impl Scalar for NfElem {
    fn add(&self, o: &Self) -> Self {
        NfElem { field: self.field.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }
    fn sub(&self, o: &Self) -> Self {
        NfElem { field: self.field.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }
    fn mul(&self, o: &Self) -> Self {
        if self.field.degree == 1 {
            return NfElem { field: self.field.clone(), c: vec![&self.c[0] * &o.c[0]] };
        }
        NfElem::from_poly(&self.field, &self.as_poly().mul(&o.as_poly()))
    }
    fn neg(&self) -> Self {
        NfElem { field: self.field.clone(), c: self.c.iter().map(|a| -a).collect() }
    }
    fn vanishes(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }
    fn zero_like(&self) -> Self {
        NfElem::from_q(&self.field, Q::zero())
    }
    fn one_like(&self) -> Self {
        NfElem::from_q(&self.field, Q::one())
    }
    fn from_q_like(&self, q: &Q) -> Self {
        NfElem::from_q(&self.field, q.clone())
    }
    fn inv(&self) -> Option<Self> {
        if Scalar::vanishes(self) {
            return None;
        }
        if self.field.degree == 1 {
            return Some(NfElem { field: self.field.clone(), c: vec![self.c[0].recip()] });
        }
        let (g, s, _t) = self.as_poly().xgcd(&self.field.poly);
        if g.degree() != Some(0) {
            return None;
        }
        Some(NfElem::from_poly(&self.field, &s.scale(&g.coeff(0).recip())))
    }
}

/// Field automorphism given by the image of the generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    image: NfElem,
}

impl Automorphism {
    pub fn new(image: NfElem) -> Result<Automorphism> {
        let f = image.field.poly.clone();
        let mut acc = image.zero_like();
        for c in f.coeffs().iter().rev() {
            acc = Scalar::mul(&acc, &image).add(&image.from_q_like(c));
        }
        if !Scalar::vanishes(&acc) {
            return Err(Error::InvariantViolation(format!("{image} is not a root of {f}")));
        }
        Ok(Automorphism { image })
    }

    pub fn identity(field: &Arc<NumberField>) -> Automorphism {
        Automorphism { image: NfElem::generator(field) }
    }

    /// The nontrivial automorphism of a quadratic field.
    pub fn quadratic_conjugation(field: &Arc<NumberField>) -> Result<Automorphism> {
        if field.degree != 2 {
            return Err(Error::DegreeUnsupported(field.degree));
        }
        let a1 = field.poly.coeff(1);
        let img = NfElem::from_coords(field, vec![-a1, -Q::one()])?;
        Automorphism::new(img)
    }

    /// `x -> x^a` on the cyclotomic field `Q(zeta_m)`.
    pub fn cyclotomic(field: &Arc<NumberField>, a: u64) -> Result<Automorphism> {
        let m = cyclotomic_index(&field.poly).ok_or(Error::InvariantViolation("not cyclotomic".into()))?;
        if a.gcd(&m) != 1 {
            return Err(Error::NotInvertible);
        }
        Automorphism::new(NfElem::generator(field).pow_u(a))
    }

    pub fn image_of_generator(&self) -> &NfElem {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image == NfElem::generator(&self.image.field)
    }

    pub fn apply(&self, x: &NfElem) -> NfElem {
        let mut acc = x.zero_like();
        for c in x.c.iter().rev() {
            acc = Scalar::mul(&acc, &self.image).add(&x.from_q_like(c));
        }
        acc
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism { image: self.apply(&other.image) }
    }
}

/// A subfield of a number field, as a rational basis in echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subfield {
    pub degree: usize,
    /// Minimal polynomial of a primitive element.
    pub primitive_minpoly: QPoly,
    pub primitive_element: NfElem,
}

/// Smallest subfield containing the given elements.
pub fn generated_subfield(field: &Arc<NumberField>, elems: &[NfElem]) -> Subfield {
    let one = NfElem::from_i64(field, 1);
    let mut basis: Vec<Vec<Q>> = vec![one.c.clone()];
    let mut members: Vec<NfElem> = vec![one.clone()];
    let mut queue: Vec<NfElem> = elems.to_vec();
    while let Some(e) = queue.pop() {
        if linear_relation(&basis, &e.c).is_some() {
            continue;
        }
        basis.push(e.c.clone());
        members.push(e.clone());
        let snapshot = members.clone();
        for m in &snapshot {
            queue.push(Scalar::mul(m, &e));
        }
    }
    let degree = basis.len();
    // search a primitive element among small combinations of the spanning members
    let mut candidate = one.clone();
    'search: for t in 0..64i64 {
        let mut c = one.zero_like();
        for (i, m) in members.iter().enumerate().skip(1) {
            let w = if i == 1 { 1 } else { (t + 1).pow(i as u32 - 1) % 97 + 1 };
            c = c.add(&Scalar::mul(m, &m.from_i64_like(w)));
        }
        if c.minimal_polynomial().degree() == Some(degree) {
            candidate = c;
            break 'search;
        }
    }
    Subfield { degree, primitive_minpoly: candidate.minimal_polynomial(), primitive_element: candidate }
}
