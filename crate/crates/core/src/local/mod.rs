//! Local data of GL(2) representations at finite places: new-vector values,
//! L-polynomials, zeta series and the spherical Hecke eigenvalue.

pub mod arch;

pub use arch::{
    arch_L_factor, archimedean_classification, delta_matrix, gl1_branching, ArchClassification, ArchLFactor,
    ArchLocalRep, Branching, DeltaMatrix, GaussianInt,
};

use crate::arith::scalar::{HalfPow, Scalar};
use crate::{Error, Result};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// The shape of a local representation; parameters are values at the uniformizer.
#[derive(Clone, Debug, PartialEq)]
pub enum RepKind<K> {
    /// `chi_1 x chi_2` with both characters unramified.
    UnramifiedPrincipalSeries { alpha: K, beta: K },
    /// `chi_1 x chi_2` with `chi_1` unramified and `chi_2` ramified.
    OneRamifiedPrincipalSeries { chi1: K },
    /// `St (x) chi` with `chi` unramified.
    SteinbergUnramifiedTwist { chi: K },
    /// Both-ramified principal series, ramified Steinberg twists and supercuspidals.
    DepthlessOther { central: Option<K> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct NonArchLocalRep<K> {
    pub kind: RepKind<K>,
    /// Residue field size.
    pub q: i64,
    pub conductor_exponent: u32,
}

impl<K: Scalar> NonArchLocalRep<K> {
    pub fn new(kind: RepKind<K>, q: i64, conductor_exponent: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidInput(format!("residue field size {q}")));
        }
        match &kind {
            RepKind::UnramifiedPrincipalSeries { alpha, beta } => {
                if alpha.mul(beta).vanishes() {
                    return Err(Error::InvalidInput("unramified parameters must be nonzero".into()));
                }
                if conductor_exponent != 0 {
                    return Err(Error::InvalidInput("unramified representation with positive conductor".into()));
                }
            }
            RepKind::SteinbergUnramifiedTwist { .. } if conductor_exponent != 1 => {
                return Err(Error::InvalidInput("Steinberg twist by an unramified character has conductor 1".into()));
            }
            _ if conductor_exponent == 0 => {
                return Err(Error::InvalidInput("ramified representation with conductor exponent 0".into()));
            }
            _ => {}
        }
        Ok(NonArchLocalRep { kind, q, conductor_exponent })
    }

    pub fn unramified(alpha: K, beta: K, q: i64) -> Result<Self> {
        Self::new(RepKind::UnramifiedPrincipalSeries { alpha, beta }, q, 0)
    }

    pub fn steinberg(chi: K, q: i64) -> Result<Self> {
        Self::new(RepKind::SteinbergUnramifiedTwist { chi }, q, 1)
    }

    pub fn one_ramified(chi1: K, q: i64, conductor_exponent: u32) -> Result<Self> {
        Self::new(RepKind::OneRamifiedPrincipalSeries { chi1 }, q, conductor_exponent)
    }

    pub fn depthless(central: Option<K>, q: i64, conductor_exponent: u32) -> Result<Self> {
        Self::new(RepKind::DepthlessOther { central }, q, conductor_exponent)
    }

    fn one_with(&self, like: &K) -> HalfPow<K> {
        HalfPow::from_base(like.one_like(), self.q)
    }

    /// Value of the normalized new vector in the Kirillov model at `x` with `v(x) = m`.
    pub fn kirillov_new_value(&self, m: i64, like: &K) -> HalfPow<K> {
        let zero = HalfPow::from_base(like.zero_like(), self.q);
        match &self.kind {
            RepKind::DepthlessOther { .. } => {
                if m == 0 {
                    self.one_with(like)
                } else {
                    zero
                }
            }
            _ if m < 0 => zero,
            RepKind::UnramifiedPrincipalSeries { alpha, beta } => {
                let mut s = like.zero_like();
                for k in 0..=m {
                    s = s.add(&alpha.pow_u(k as u64).mul(&beta.pow_u((m - k) as u64)));
                }
                HalfPow::monomial(&s, -m, self.q)
            }
            RepKind::OneRamifiedPrincipalSeries { chi1 } => HalfPow::monomial(&chi1.pow_u(m as u64), -m, self.q),
            RepKind::SteinbergUnramifiedTwist { chi } => HalfPow::monomial(&chi.pow_u(m as u64), -2 * m, self.q),
        }
    }

    /// `P(X)` with `L(s) = 1 / P(q^{-s})`, lowest degree first.
    pub fn local_l_polynomial(&self, like: &K) -> Vec<HalfPow<K>> {
        let one = self.one_with(like);
        match &self.kind {
            RepKind::UnramifiedPrincipalSeries { alpha, beta } => vec![
                one,
                HalfPow::from_base(alpha.add(beta).neg(), self.q),
                HalfPow::from_base(alpha.mul(beta), self.q),
            ],
            RepKind::OneRamifiedPrincipalSeries { chi1 } => vec![one, HalfPow::from_base(chi1.neg(), self.q)],
            RepKind::SteinbergUnramifiedTwist { chi } => vec![one, HalfPow::monomial(&chi.neg(), -1, self.q)],
            RepKind::DepthlessOther { .. } => vec![one],
        }
    }

    /// `kirillov_new_value(m)` for `0 <= m <= upto`.
    pub fn kirillov_new_values(&self, upto: usize, like: &K) -> Vec<HalfPow<K>> {
        match &self.kind {
            RepKind::UnramifiedPrincipalSeries { alpha, beta } => {
                // h_m = alpha^m + beta h_{m-1}
                let mut out = Vec::with_capacity(upto + 1);
                let mut am = like.one_like();
                let mut h = like.one_like();
                for m in 0..=upto {
                    if m > 0 {
                        am = am.mul(alpha);
                        h = am.add(&beta.mul(&h));
                    }
                    out.push(HalfPow::monomial(&h, -(m as i64), self.q));
                }
                out
            }
            _ => (0..=upto as i64).map(|m| self.kirillov_new_value(m, like)).collect(),
        }
    }

    /// `sum_{m <= order} kappa(m) q^{m/2} X^m`.
    pub fn zeta_newvector_series(&self, order: usize, like: &K) -> TruncatedSeries<K> {
        let coeffs = self
            .kirillov_new_values(order, like)
            .into_iter()
            .enumerate()
            .map(|(m, v)| v.mul(&HalfPow::monomial(&like.one_like(), m as i64, self.q)))
            .collect();
        TruncatedSeries { coeffs, q: self.q }
    }

    /// Checks `zeta * P = 1 + O(X^{order+1})` exactly.
    pub fn zeta_identity_holds(&self, order: usize, like: &K) -> bool {
        let z = self.zeta_newvector_series(order, like);
        let p = TruncatedSeries::from_polynomial(self.local_l_polynomial(like), order, self.q);
        z.mul(&p).is_one()
    }
}

/// `sum c_m X^m + O(X^{M+1})` with coefficients in `K[q^{1/2}]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<K> {
    pub coeffs: Vec<HalfPow<K>>,
    pub q: i64,
}

impl<K: Scalar> TruncatedSeries<K> {
    pub fn from_polynomial(mut c: Vec<HalfPow<K>>, order: usize, q: i64) -> Self {
        let z = HalfPow::from_base(c[0].a.zero_like(), q);
        c.resize(order + 1, z);
        TruncatedSeries { coeffs: c, q }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = self.order().min(o.order());
        let mut out: Vec<HalfPow<K>> = (0..=m).map(|_| HalfPow::from_base(self.coeffs[0].a.zero_like(), self.q)).collect();
        for i in 0..=m {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(m - i) {
                if o.coeffs[j].is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&self.coeffs[i].mul(&o.coeffs[j]));
            }
        }
        TruncatedSeries { coeffs: out, q: self.q }
    }

    pub fn inverse(&self) -> Option<Self> {
        let c0 = self.coeffs[0].inv()?;
        let m = self.order();
        let mut out = vec![c0.clone()];
        for n in 1..=m {
            let mut s = HalfPow::from_base(c0.a.zero_like(), self.q);
            for k in 1..=n {
                s = s.add(&self.coeffs[k].mul(&out[n - k]));
            }
            out.push(s.mul(&c0).neg());
        }
        Some(TruncatedSeries { coeffs: out, q: self.q })
    }

    pub fn is_one(&self) -> bool {
        let one = HalfPow::from_base(self.coeffs[0].a.one_like(), self.q);
        self.coeffs[0] == one && self.coeffs[1..].iter().all(|c| c.is_zero())
    }
}

impl<K: Scalar + fmt::Display> TruncatedSeries<K> {
    /// `c0 + c1*X + ... + O(X^{M+1})`, with `sqrt(q)` written out.
    pub fn to_text(&self) -> String {
        let mut parts = Vec::new();
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let body = half_pow_text(c);
            parts.push(match m {
                0 => body,
                1 => format!("({body})*X"),
                _ => format!("({body})*X^{m}"),
            });
        }
        if parts.is_empty() {
            parts.push(String::from("0"));
        }
        format!("{} + O(X^{})", parts.join(" + "), self.order() + 1)
    }
}

pub fn half_pow_text<K: Scalar + fmt::Display>(c: &HalfPow<K>) -> String {
    match (c.a.vanishes(), c.b.vanishes()) {
        (_, true) => format!("{}", c.a),
        (true, false) => format!("{}*sqrt({})", c.b, c.q),
        (false, false) => format!("{} + {}*sqrt({})", c.a, c.b, c.q),
    }
}

/// The eigenvalue of the double coset of `diag(pi, 1)` on the spherical vector of
/// `chi_1 x chi_2` with `chi_1(pi) = alpha`, `chi_2(pi) = beta`, computed coset by coset.
pub fn spherical_hecke_eigenvalue<K: Scalar>(alpha: &K, beta: &K, q: i64) -> Result<HalfPow<K>> {
    // f(diag(a, d) n k) = chi_1(a) chi_2(d) |a/d|^{1/2} with |pi| = 1/q
    let f = |va: u64, vd: u64| -> HalfPow<K> {
        let c = alpha.pow_u(va).mul(&beta.pow_u(vd));
        HalfPow::monomial(&c, vd as i64 - va as i64, q)
    };
    // diag(1, pi) and (pi, u; 0, 1) for u in O/pi
    let mut sum = f(0, 1);
    for _u in 0..q {
        sum = sum.add(&f(1, 0));
    }
    let closed = HalfPow::monomial(&alpha.add(beta), 1, q);
    if sum != closed {
        return Err(Error::InvariantViolation("coset sum disagrees with the Satake form".into()));
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{qi, qr, Q};

    fn hp(a: Q, b: Q, q: i64) -> HalfPow<Q> {
        HalfPow::new(a, b, q)
    }

    #[test]
    fn batch_kirillov_values() {
        let r = NonArchLocalRep::unramified(qr(3, 7), qr(-5, 2), 9).unwrap();
        let like = qi(1);
        let all = r.kirillov_new_values(12, &like);
        for (m, v) in all.iter().enumerate() {
            assert_eq!(*v, r.kirillov_new_value(m as i64, &like));
        }
    }

    #[test]
    fn kirillov_rows() {
        let q = 7;
        let u = NonArchLocalRep::unramified(qi(1), qi(1), q).unwrap();
        assert_eq!(u.kirillov_new_value(2, &qi(1)), hp(qr(3, 7), qi(0), q));
        assert_eq!(u.kirillov_new_value(-1, &qi(1)), hp(qi(0), qi(0), q));
        let st = NonArchLocalRep::steinberg(qi(1), q).unwrap();
        assert_eq!(st.kirillov_new_value(1, &qi(1)), hp(qr(1, 7), qi(0), q));
        let d = NonArchLocalRep::depthless(Some(qi(1)), q, 2).unwrap();
        assert_eq!(d.kirillov_new_value(1, &qi(1)), hp(qi(0), qi(0), q));
        assert_eq!(d.kirillov_new_value(0, &qi(1)), hp(qi(1), qi(0), q));
        assert!(NonArchLocalRep::unramified(qi(0), qi(1), q).is_err());
        assert!(NonArchLocalRep::one_ramified(qi(1), q, 0).is_err());
    }

    #[test]
    fn l_polynomials_and_series() {
        let q = 5;
        let (a, b) = (qr(2, 3), qi(-4));
        let u = NonArchLocalRep::unramified(a.clone(), b.clone(), q).unwrap();
        let p = u.local_l_polynomial(&qi(1));
        assert_eq!(p[1], hp(-(&a + &b), qi(0), q));
        assert_eq!(p[2], hp(&a * &b, qi(0), q));
        // division oracle for 1/((1 - aX)(1 - bX))
        let z = u.zeta_newvector_series(3, &qi(1));
        let mut want = vec![qi(1)];
        for n in 1..=3usize {
            let prev1 = want[n - 1].clone();
            let prev2 = if n >= 2 { want[n - 2].clone() } else { qi(0) };
            want.push((&a + &b) * prev1 - &a * &b * prev2);
        }
        for n in 0..=3 {
            assert_eq!(z.coeffs[n], hp(want[n].clone(), qi(0), q));
        }
        let st = NonArchLocalRep::steinberg(qi(1), q).unwrap();
        let z = st.zeta_newvector_series(2, &qi(1));
        assert_eq!(z.coeffs, vec![hp(qi(1), qi(0), q), hp(qi(0), qr(1, 5), q), hp(qr(1, 5), qi(0), q)]);
        assert_eq!(z.to_text(), "1 + (1/5*sqrt(5))*X + (1/5)*X^2 + O(X^3)");
        let d = NonArchLocalRep::depthless(Some(qi(1)), q, 3).unwrap();
        assert!(d.zeta_newvector_series(5, &qi(1)).coeffs[1..].iter().all(|c| c.is_zero()));
        for rep in [u, st, d, NonArchLocalRep::one_ramified(qr(-3, 2), q, 2).unwrap()] {
            assert!(rep.zeta_identity_holds(30, &qi(1)));
        }
    }

    #[test]
    fn hecke_coset_sum() {
        assert_eq!(spherical_hecke_eigenvalue(&qi(1), &qi(1), 9).unwrap(), hp(qi(0), qi(2), 9));
        let a = qr(5, 7);
        let v = spherical_hecke_eigenvalue(&a, &a.recip(), 11).unwrap();
        assert_eq!(v, hp(qi(0), &a + a.recip(), 11));
    }

    #[test]
    fn series_inverse() {
        let q = 3;
        let rep = NonArchLocalRep::unramified(qi(2), qr(1, 2), q).unwrap();
        let p = TruncatedSeries::from_polynomial(rep.local_l_polynomial(&qi(1)), 8, q);
        assert_eq!(p.inverse().unwrap(), rep.zeta_newvector_series(8, &qi(1)));
    }
}
