//! Totally real number fields: integral basis, elements, ideals, primes and
//! narrow class groups.

pub mod class_group;
pub mod ideal;
pub mod residue;

pub use class_group::{NarrowClassGroup, UnitData};
pub use ideal::{Ideal, PrimeIdeal};

use crate::arith::ball::Real;
use crate::arith::fp::FpPoly;
use crate::arith::linalg::{det_q, inverse_q};
use crate::arith::poly::{sign_at_root, QPoly, RootInterval};
use crate::arith::{factor_bigint, qi, qz, squarefree_decomposition, Q};
use crate::numfield::certify_irreducible;
use crate::{Error, Result};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Element of a field in coordinates over the integral basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement {
    c: Vec<Q>,
}

impl FieldElement {
    pub fn new(c: Vec<Q>) -> Self {
        FieldElement { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        FieldElement { c: c.iter().map(|&x| qi(x)).collect() }
    }

    pub fn from_bigints(c: &[BigInt]) -> Self {
        FieldElement { c: c.iter().map(qz).collect() }
    }

    pub fn coords(&self) -> &[Q] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.c.iter().all(|x| x.is_integer())
    }

    /// Integer coordinates, if integral.
    pub fn int_coords(&self) -> Option<Vec<BigInt>> {
        if self.is_integral() {
            Some(self.c.iter().map(|x| x.to_integer()).collect())
        } else {
            None
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        FieldElement { c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        FieldElement { c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> Self {
        FieldElement { c: self.c.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, q: &Q) -> Self {
        FieldElement { c: self.c.iter().map(|a| a * q).collect() }
    }

    /// Least positive integer `d` with `d * self` integral.
    pub fn denominator(&self) -> BigInt {
        crate::arith::common_denominator(&self.c)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.c.iter().map(|x| format!("{x}")).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A totally real number field with a fixed integral basis.
#[derive(Clone, Debug)]
pub struct TotallyRealField {
    poly: QPoly,
    n: usize,
    /// Integral basis in power-basis coordinates, one vector per basis element.
    basis: Vec<Vec<Q>>,
    /// Change of coordinates from the power basis to the integral basis.
    from_power: Vec<Vec<Q>>,
    /// `table[i][j]` holds the coordinates of `w_i w_j`.
    table: Vec<Vec<Vec<BigInt>>>,
    traces: Vec<BigInt>,
    roots: Vec<RootInterval>,
    disc: BigInt,
    different: Ideal,
    user_class: Option<(u64, u64)>,
    user_unit_norm_minus_one: Option<bool>,
}

fn poly_from_ints(coeffs: &[BigInt]) -> QPoly {
    QPoly::from_bigints(coeffs)
}

/// Lift of a mod-`p` polynomial to integers in `[0, p)`.
fn lift(f: &FpPoly) -> QPoly {
    QPoly::new(f.coeffs().iter().map(|&x| qi(x as i64)).collect())
}

fn reduce_mod_p(f: &QPoly, p: u64) -> FpPoly {
    let pb = BigInt::from(p);
    let c: Vec<i64> = f
        .coeffs()
        .iter()
        .map(|x| x.to_integer().mod_floor(&pb).to_i64().unwrap())
        .collect();
    FpPoly::from_i64(p, &c)
}

/// Dedekind's criterion: is `Z[x]/(f)` maximal at `p`?
pub fn dedekind_p_maximal(f: &QPoly, p: u64) -> bool {
    let fb = reduce_mod_p(f, p);
    let facs = fb.factor();
    let mut g = QPoly::one();
    let mut h = QPoly::one();
    for (gi, e) in &facs {
        let l = lift(gi);
        g = g.mul(&l);
        for _ in 1..*e {
            h = h.mul(&l);
        }
    }
    let diff = g.mul(&h).sub(f);
    let big_f = diff.scale(&Q::new(BigInt::one(), BigInt::from(p)));
    let fbar = reduce_mod_p(&big_f, p);
    let gbar = reduce_mod_p(&g, p);
    let hbar = reduce_mod_p(&h, p);
    let d = fbar.gcd(&gbar).gcd(&hbar);
    d.degree() == Some(0)
}

impl TotallyRealField {
    /// Builds the field from integer coefficients `c_0, ..., c_n` of a monic polynomial.
    pub fn new(coeffs: &[i64]) -> Result<TotallyRealField> {
        let c: Vec<BigInt> = coeffs.iter().map(|&x| BigInt::from(x)).collect();
        TotallyRealField::build(&c, None)
    }

    /// As [`TotallyRealField::new`], with an optional user integral basis
    /// (rational power-basis coordinates) for degree three and higher.
    pub fn build(coeffs: &[BigInt], user_basis: Option<Vec<Vec<Q>>>) -> Result<TotallyRealField> {
        let poly = poly_from_ints(coeffs);
        let n = poly.degree().ok_or(Error::NotMonic)?;
        if n == 0 || !poly.lead().is_one() {
            return Err(Error::NotMonic);
        }
        if !poly.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        if poly.count_real_roots() != n {
            return Err(Error::NotTotallyReal);
        }
        match certify_irreducible(&poly) {
            Some(true) => {}
            Some(false) => return Err(Error::InvariantViolation(format!("{poly} is reducible"))),
            None => return Err(Error::InvariantViolation(format!("could not certify irreducibility of {poly}"))),
        }
        let basis = if n == 1 {
            vec![vec![qi(1)]]
        } else if n == 2 {
            let b = poly.coeff(1).to_integer();
            let c0 = poly.coeff(0).to_integer();
            let d = &b * &b - BigInt::from(4) * c0;
            let (s, m) = squarefree_decomposition(&d);
            let mq = qz(&m);
            let omega = if s.mod_floor(&BigInt::from(4)) == BigInt::one() {
                vec![(&mq + qz(&b)) / (qi(2) * &mq), qi(1) / &mq]
            } else {
                vec![qz(&b) / &mq, qi(2) / &mq]
            };
            vec![vec![qi(1), qi(0)], omega]
        } else if let Some(ub) = user_basis {
            if ub.len() != n || ub.iter().any(|v| v.len() != n) {
                return Err(Error::InvariantViolation("integral basis has the wrong shape".into()));
            }
            ub
        } else {
            let disc = poly.discriminant().to_integer();
            for (p, e) in factor_bigint(&disc.abs()) {
                if e >= 2 {
                    let pu = p.to_u64().ok_or(Error::IntegralBasisRequired(0))?;
                    if !dedekind_p_maximal(&poly, pu) {
                        return Err(Error::IntegralBasisRequired(pu));
                    }
                }
            }
            (0..n).map(|i| (0..n).map(|j| if i == j { qi(1) } else { qi(0) }).collect()).collect()
        };
        // columns of the change-of-basis matrix are the basis vectors
        let to_power: Vec<Vec<Q>> = (0..n).map(|r| (0..n).map(|c| basis[c][r].clone()).collect()).collect();
        let from_power = inverse_q(&to_power).ok_or(Error::InvariantViolation("integral basis is singular".into()))?;
        let mut table = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let prod = QPoly::new(basis[i].clone()).mul(&QPoly::new(basis[j].clone())).rem(&poly);
                let mut pc: Vec<Q> = prod.coeffs().to_vec();
                pc.resize(n, Q::zero());
                let bc = crate::arith::linalg::mat_vec_q(&from_power, &pc);
                if bc.iter().any(|x| !x.is_integer()) {
                    return Err(Error::InvariantViolation("integral basis is not closed under multiplication".into()));
                }
                table[i][j] = bc.into_iter().map(|x| x.to_integer()).collect();
            }
        }
        let traces: Vec<BigInt> = (0..n).map(|i| (0..n).fold(BigInt::zero(), |acc, j| acc + &table[i][j][j])).collect();
        let roots = poly.isolate_real_roots();
        let mut field = TotallyRealField {
            poly,
            n,
            basis,
            from_power,
            table,
            traces,
            roots,
            disc: BigInt::zero(),
            different: Ideal::unit(n),
            user_class: None,
            user_unit_norm_minus_one: None,
        };
        let gram = field.trace_gram();
        let gq: Vec<Vec<Q>> = gram.iter().map(|r| r.iter().map(qz).collect()).collect();
        let disc = det_q(gq.clone()).to_integer();
        if n >= 3 {
            // the integral basis must contain Z[x]: check 1 and x are integral combinations
            let x = field.from_power_coords(&[qi(0), qi(1)]);
            if !x.is_integral() {
                return Err(Error::InvariantViolation("integral basis does not contain the generator".into()));
            }
        }
        field.disc = disc;
        // dual lattice of O under the trace form has basis given by the columns of gram^{-1}
        let ginv = inverse_q(&gq).ok_or(Error::InvariantViolation("degenerate trace form".into()))?;
        let dual_cols: Vec<Vec<Q>> = (0..n).map(|c| (0..n).map(|r| ginv[r][c].clone()).collect()).collect();
        let dual = field.ideal_from_z_basis(&dual_cols)?;
        field.different = field.ideal_inverse(&dual)?;
        Ok(field)
    }

    /// Records user class data `(h, h+)` (needed for degree three and higher).
    pub fn with_class_data(mut self, h: u64, h_plus: u64) -> Self {
        self.user_class = Some((h, h_plus));
        self
    }

    /// Records whether a unit of norm -1 exists.
    pub fn with_unit_norm_minus_one(mut self, v: bool) -> Self {
        self.user_unit_norm_minus_one = Some(v);
        self
    }

    pub fn user_class(&self) -> Option<(u64, u64)> {
        self.user_class
    }

    pub fn user_unit_norm_minus_one(&self) -> Option<bool> {
        self.user_unit_norm_minus_one
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> &QPoly {
        &self.poly
    }

    pub fn integral_basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    pub fn different(&self) -> &Ideal {
        &self.different
    }

    pub fn root_intervals(&self) -> &[RootInterval] {
        &self.roots
    }

    /// Real embeddings of the generator, ascending, as balls.
    pub fn embeddings(&self, prec: u32) -> Vec<Real> {
        let w = Q::new(BigInt::one(), BigInt::one() << (prec + 2));
        self.roots
            .iter()
            .map(|iv| {
                let mut iv = iv.clone();
                iv.refine_to(&self.poly, &w);
                let mid = (&iv.lo + &iv.hi) / qi(2);
                Real::from_q(&mid, prec).add_error(&(iv.width() / qi(2)))
            })
            .collect()
    }

    pub fn trace_gram(&self) -> Vec<Vec<BigInt>> {
        let n = self.n;
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).fold(BigInt::zero(), |acc, k| acc + &self.table[i][j][k] * &self.traces[k])).collect())
            .collect()
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { c: vec![Q::zero(); self.n] }
    }

    pub fn one(&self) -> FieldElement {
        self.from_rational(Q::one())
    }

    pub fn from_rational(&self, q: Q) -> FieldElement {
        let mut pc = vec![Q::zero(); self.n];
        pc[0] = q;
        self.from_power_coords(&pc)
    }

    pub fn from_int(&self, k: i64) -> FieldElement {
        self.from_rational(qi(k))
    }

    /// Element `sum c_i x^i` given in the power basis.
    pub fn from_power_coords(&self, c: &[Q]) -> FieldElement {
        let p = QPoly::new(c.to_vec()).rem(&self.poly);
        let mut pc: Vec<Q> = p.coeffs().to_vec();
        pc.resize(self.n, Q::zero());
        FieldElement { c: crate::arith::linalg::mat_vec_q(&self.from_power, &pc) }
    }

    /// The `i`-th integral basis element.
    pub fn basis_element(&self, i: usize) -> FieldElement {
        let mut c = vec![Q::zero(); self.n];
        c[i] = Q::one();
        FieldElement { c }
    }

    /// Power-basis polynomial of an element.
    pub fn to_poly(&self, a: &FieldElement) -> QPoly {
        let mut acc = vec![Q::zero(); self.n];
        for (i, ai) in a.c.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (k, bk) in self.basis[i].iter().enumerate() {
                acc[k] += ai * bk;
            }
        }
        QPoly::new(acc)
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let n = self.n;
        let mut out = vec![Q::zero(); n];
        for i in 0..n {
            if a.c[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if b.c[j].is_zero() {
                    continue;
                }
                let ab = &a.c[i] * &b.c[j];
                for k in 0..n {
                    let t = &self.table[i][j][k];
                    if !t.is_zero() {
                        out[k] += &ab * qz(t);
                    }
                }
            }
        }
        FieldElement { c: out }
    }

    pub fn pow(&self, a: &FieldElement, e: u64) -> FieldElement {
        let mut acc = self.one();
        let mut b = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let (g, s, _) = self.to_poly(a).xgcd(&self.poly);
        if g.degree() != Some(0) {
            return Err(Error::NotInvertible);
        }
        let s = s.scale(&g.coeff(0).recip());
        Ok(self.from_power_coords(s.coeffs()))
    }

    /// Matrix of multiplication by `a` on the integral basis (column `j` is `a w_j`).
    pub fn mul_matrix(&self, a: &FieldElement) -> Vec<Vec<Q>> {
        let n = self.n;
        let cols: Vec<Vec<Q>> = (0..n).map(|j| self.mul(a, &self.basis_element(j)).c).collect();
        (0..n).map(|r| (0..n).map(|c| cols[c][r].clone()).collect()).collect()
    }

    pub fn norm(&self, a: &FieldElement) -> Q {
        det_q(self.mul_matrix(a))
    }

    pub fn trace(&self, a: &FieldElement) -> Q {
        a.c.iter().zip(&self.traces).fold(Q::zero(), |acc, (x, t)| acc + x * qz(t))
    }

    /// Exact sign of `a` under the `j`-th real embedding (ascending order).
    pub fn sign_at(&self, a: &FieldElement, j: usize) -> i32 {
        let g = self.to_poly(a);
        let mut iv = self.roots[j].clone();
        sign_at_root(&g, &self.poly, &mut iv)
    }

    pub fn sign_vector(&self, a: &FieldElement) -> Vec<i32> {
        (0..self.n).map(|j| self.sign_at(a, j)).collect()
    }

    /// True iff every real embedding of `a` is positive.
    pub fn is_totally_positive(&self, a: &FieldElement) -> Result<bool> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(self.sign_vector(a).iter().all(|&s| s > 0))
    }

    /// Floating approximations of the embeddings of `a` (for enumeration bounds only).
    pub fn approx_embeddings(&self, a: &FieldElement) -> Vec<f64> {
        let g = self.to_poly(a);
        let w = Q::new(BigInt::one(), BigInt::one() << 60);
        self.roots
            .iter()
            .map(|iv| {
                let mut iv = iv.clone();
                iv.refine_to(&self.poly, &w);
                let v = g.eval(&iv.lo);
                q_to_f64(&v)
            })
            .collect()
    }
}

/// Evaluates a rational polynomial at a field element.
pub fn lift_eval(k: &TotallyRealField, p: &QPoly, x: &FieldElement) -> FieldElement {
    let mut acc = k.zero();
    for c in p.coeffs().iter().rev() {
        acc = k.mul(&acc, x).add(&k.from_rational(c.clone()));
    }
    acc
}

pub(crate) fn q_to_f64(q: &Q) -> f64 {
    let n = q.numer().to_f64().unwrap_or(0.0);
    let d = q.denom().to_f64().unwrap_or(1.0);
    if n.is_finite() && d.is_finite() && d != 0.0 {
        return n / d;
    }
    // scale down huge numerators and denominators together
    let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(900);
    let n2 = (q.numer() >> shift).to_f64().unwrap_or(0.0);
    let d2 = (q.denom() >> shift).to_f64().unwrap_or(1.0);
    n2 / d2
}
