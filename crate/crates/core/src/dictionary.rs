//! Classical Hilbert newform eigendata and the attached automorphic data:
//! validation, Satake parameters, cohomological weights, Galois conjugation
//! and rationality fields.

use crate::arith::ball::Complex;
use crate::arith::scalar::{HalfPow, Scalar};
use crate::arith::{qi, Unity, Q};
use crate::field::{Ideal, PrimeIdeal, TotallyRealField};
use crate::hecke::HeckeCharacter;
use crate::local::{archimedean_classification, ArchClassification, ArchLocalRep};
use crate::numfield::{generated_subfield, Automorphism, NfElem, NumberField, Subfield};
use crate::{Error, Result};
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// The coefficient field `Q(f)` with a chosen complex embedding and, optionally,
/// an element `zeta` standing for `e^{2 pi i / order}`.
#[derive(Clone, Debug)]
pub struct CoefficientField {
    pub field: Arc<NumberField>,
    /// Index into the roots of the defining polynomial (real ascending, then complex pairs).
    pub embedding: usize,
    pub unity: Option<(i64, NfElem)>,
}

impl CoefficientField {
    pub fn rational() -> Self {
        CoefficientField { field: NumberField::rationals(), embedding: 0, unity: None }
    }

    pub fn new(field: Arc<NumberField>, embedding: usize, unity: Option<(i64, NfElem)>) -> Result<Self> {
        if embedding >= field.degree() {
            return Err(Error::InvalidInput(format!("embedding {embedding} out of range")));
        }
        let cf = CoefficientField { field, embedding, unity };
        if let Some((m, z)) = &cf.unity {
            if *m < 1 || !is_primitive_root(z, *m) {
                return Err(Error::InvalidInput(format!("{z} is not a primitive root of unity of order {m}")));
            }
            let e = cf.embed(z, 64)?;
            let want = Complex::root_of_unity(&Q::new(BigInt::one(), BigInt::from(*m)), 64);
            let d = &e - &want;
            if !d.norm_sqr().upper_q().lt(&Q::new(BigInt::one(), BigInt::from(1u64 << 40))) {
                return Err(Error::InvalidInput(format!("{z} does not embed to exp(2 pi i / {m})")));
            }
        }
        Ok(cf)
    }

    pub fn zero(&self) -> NfElem {
        NfElem::from_i64(&self.field, 0)
    }

    pub fn one(&self) -> NfElem {
        NfElem::from_i64(&self.field, 1)
    }

    pub fn from_q(&self, q: Q) -> NfElem {
        NfElem::from_q(&self.field, q)
    }

    /// The root of unity as an element of the coefficient field.
    pub fn unity_value(&self, u: Unity) -> Result<NfElem> {
        match u.order() {
            1 => return Ok(self.one()),
            2 => return Ok(NfElem::from_i64(&self.field, -1)),
            _ => {}
        }
        let (m, z) = self
            .unity
            .as_ref()
            .ok_or(Error::InvalidInput(format!("coefficient field has no root of unity of order {}", u.order())))?;
        if m % u.order() != 0 {
            return Err(Error::InvalidInput(format!("order {} does not divide {m}", u.order())));
        }
        Ok(z.pow_u((u.num() * (m / u.order())) as u64))
    }

    /// The exponent `a` with `sigma(zeta) = zeta^a`.
    pub fn galois_exponent(&self, sigma: &Automorphism) -> Result<i64> {
        let Some((m, z)) = &self.unity else { return Ok(1) };
        let img = sigma.apply(z);
        (0..*m)
            .find(|&a| z.pow_u(a as u64) == img)
            .ok_or(Error::InvariantViolation("automorphism does not preserve the roots of unity".into()))
    }

    pub fn embed(&self, x: &NfElem, prec: u32) -> Result<Complex> {
        let roots = self.field.complex_roots(prec + 16)?;
        Ok(x.embed(&roots[self.embedding]).with_prec(prec))
    }
}

fn is_primitive_root(z: &NfElem, m: i64) -> bool {
    let one = z.one_like();
    if z.pow_u(m as u64) != one {
        return false;
    }
    (2..=m).filter(|p| m % p == 0 && (2..*p).all(|d| p % d != 0)).all(|p| z.pow_u((m / p) as u64) != one)
}

/// Classical eigendata: `C(m) = N(m)^{k0/2} c(m, f)` on integral ideals of norm at most `bound`.
#[derive(Clone, Debug)]
pub struct HilbertNewformData {
    pub weights: Vec<i64>,
    pub level: Ideal,
    pub nebentypus: HeckeCharacter,
    pub coefficients: CoefficientField,
    pub eigenvalues: BTreeMap<Ideal, NfElem>,
    pub bound: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

impl HilbertNewformData {
    pub fn new(
        k: &TotallyRealField,
        weights: Vec<i64>,
        nebentypus: HeckeCharacter,
        coefficients: CoefficientField,
        eigenvalues: BTreeMap<Ideal, NfElem>,
        bound: u64,
    ) -> Result<Self> {
        if weights.len() != k.degree() {
            return Err(Error::InvalidInput(format!("{} weights for a degree {} field", weights.len(), k.degree())));
        }
        if weights.iter().any(|&w| w < 1) {
            return Err(Error::InvalidInput("weights must be positive".into()));
        }
        for (m, c) in &eigenvalues {
            if !m.is_integral() {
                return Err(Error::InvalidInput(format!("non-integral ideal {m} in the eigenvalue table")));
            }
            if k.ideal_norm(m)? > qi(bound as i64) {
                return Err(Error::InvalidInput(format!("ideal {m} beyond the stated bound {bound}")));
            }
            if c.field().as_ref() != coefficients.field.as_ref() {
                return Err(Error::InvalidInput("eigenvalue outside the coefficient field".into()));
            }
        }
        let level = nebentypus.modulus().clone();
        Ok(HilbertNewformData { weights, level, nebentypus, coefficients, eigenvalues, bound })
    }

    pub fn k0(&self) -> i64 {
        *self.weights.iter().max().unwrap()
    }

    pub fn k_min(&self) -> i64 {
        *self.weights.iter().min().unwrap()
    }

    /// All weights share a parity.
    pub fn parity_ok(&self) -> bool {
        self.weights.iter().all(|w| (w - self.weights[0]) % 2 == 0)
    }

    pub fn coefficient(&self, m: &Ideal) -> Option<&NfElem> {
        self.eigenvalues.get(m)
    }

    /// `omega*(p)` in the coefficient field, zero at primes dividing the level.
    pub fn omega_star(&self, k: &TotallyRealField, p: &PrimeIdeal) -> Result<NfElem> {
        match self.nebentypus.prime_value(k, p)? {
            None => Ok(self.coefficients.zero()),
            Some(u) => self.coefficients.unity_value(u),
        }
    }

    /// Checks `C(O) = 1`, multiplicativity on coprime pairs and the Hecke recursion at unramified primes.
    pub fn validate(&self, k: &TotallyRealField) -> Result<ValidationReport> {
        let mut rep = ValidationReport::default();
        let one = self.coefficients.one();
        rep.checked += 1;
        match self.coefficient(&k.unit_ideal()) {
            Some(c) if *c == one => {}
            Some(c) => rep.failures.push(format!("C(O) = {c}, expected 1")),
            None => rep.failures.push(String::from("C(O) missing")),
        }
        let ideals = k.integral_ideals_up_to(self.bound)?;
        let fac: BTreeMap<&Ideal, &Vec<(PrimeIdeal, u32)>> = ideals.iter().map(|(i, f)| (i, f)).collect();
        // multiplicativity: split each stored ideal into its first prime power and the rest
        for (m, c) in &self.eigenvalues {
            let Some(f) = fac.get(m) else { continue };
            if f.len() < 2 {
                continue;
            }
            let (p, e) = &f[0];
            let a = k.ideal_pow(&p.ideal, *e as i64)?;
            let b = k.ideal_div(m, &a)?;
            if let (Some(ca), Some(cb)) = (self.coefficient(&a), self.coefficient(&b)) {
                rep.checked += 1;
                if ca.mul(cb) != *c {
                    rep.failures.push(format!(
                        "multiplicativity: C({}) != C({}) C({})",
                        k.ideal_label(m)?,
                        k.ideal_label(&a)?,
                        k.ideal_label(&b)?
                    ));
                }
            }
        }
        // C(p^{r+1}) = C(p) C(p^r) - omega*(p) N(p)^{k0-1} C(p^{r-1})
        for p in k.primes_up_to_norm(self.bound)? {
            if !k.coprime(&p.ideal, &self.level) {
                continue;
            }
            let Some(cp) = self.coefficient(&p.ideal) else { continue };
            let w = self.omega_star(k, &p)?;
            let nk = self.coefficients.from_q(Q::from_integer(BigInt::from(p.norm()).pow((self.k0() - 1) as u32)));
            let mut prev = one.clone();
            let mut cur = cp.clone();
            let mut r = 1i64;
            loop {
                let next_id = k.ideal_pow(&p.ideal, r + 1)?;
                let Some(next) = self.coefficient(&next_id) else { break };
                rep.checked += 1;
                let want = cp.mul(&cur).sub(&w.mul(&nk).mul(&prev));
                if *next != want {
                    rep.failures.push(format!("Hecke recursion fails at {}", k.ideal_label(&next_id)?));
                }
                prev = cur;
                cur = next.clone();
                r += 1;
            }
        }
        Ok(rep)
    }

    fn require_valid(&self, k: &TotallyRealField) -> Result<()> {
        let rep = self.validate(k)?;
        if !rep.is_valid() {
            return Err(Error::ValidationFailed(rep.failures.join("; ")));
        }
        Ok(())
    }

    pub fn attach_representation(&self, k: &TotallyRealField) -> Result<AutomorphicRepData> {
        self.require_valid(k)?;
        let arch = self.weights.iter().map(|&w| ArchLocalRep::new((w - 1).max(1), Q::zero())).collect::<Result<_>>()?;
        let k0 = self.k0();
        let mut local = BTreeMap::new();
        for p in k.primes_up_to_norm(self.bound)? {
            let q = p.norm() as i64;
            let c = self.coefficient(&p.ideal);
            let v = k.valuation(&p, &self.level);
            let comp = if v == 0 {
                let Some(c) = c else { continue };
                LocalComponent::Unramified {
                    q,
                    trace: HalfPow::monomial(c, 1 - k0, q),
                    det: self.omega_star(k, &p)?,
                }
            } else {
                LocalComponent::Ramified {
                    q,
                    conductor_exponent: v as u32,
                    linear: c.map(|c| HalfPow::monomial(c, 1 - k0, q)),
                }
            };
            local.insert((p.p, p.index), comp);
        }
        Ok(AutomorphicRepData {
            arch,
            weights: self.weights.clone(),
            conductor: self.level.clone(),
            central: self.nebentypus.clone(),
            k0,
            local,
        })
    }

    pub fn cohomological_weight(&self, twisted: bool) -> Result<CohomologicalWeight> {
        cohomological_weight(&self.weights, twisted)
    }

    pub fn classify(&self) -> Classification {
        classify(&self.weights)
    }

    /// `f^sigma`: weights permuted, `C` and the nebentypus conjugated.
    pub fn galois_conjugate(&self, k: &TotallyRealField, sigma: &GaloisAction) -> Result<HilbertNewformData> {
        let g = self.conjugate_unchecked(k, sigma)?;
        g.require_valid(k)?;
        Ok(g)
    }

    fn conjugate_unchecked(&self, k: &TotallyRealField, sigma: &GaloisAction) -> Result<HilbertNewformData> {
        if sigma.place_permutation.len() != self.weights.len() {
            return Err(Error::InvalidInput("place permutation has the wrong length".into()));
        }
        let weights = sigma.place_permutation.iter().map(|&j| self.weights[j]).collect();
        let a = self.coefficients.galois_exponent(&sigma.automorphism)?;
        let nebentypus = if a == 1 { self.nebentypus.clone() } else { self.nebentypus.power(k, a)? };
        let eigenvalues = self.eigenvalues.iter().map(|(m, c)| (m.clone(), sigma.automorphism.apply(c))).collect();
        Ok(HilbertNewformData {
            weights,
            level: self.level.clone(),
            nebentypus,
            coefficients: self.coefficients.clone(),
            eigenvalues,
            bound: self.bound,
        })
    }

    /// Compares the twisted Satake data of `f (x) |.|^{k0/2}` under `sigma` with those of the
    /// conjugate form (computed when `conjugate` is `None`) at unramified primes of norm at most `bound`.
    pub fn equivariance_check(
        &self,
        k: &TotallyRealField,
        sigma: &GaloisAction,
        conjugate: Option<&HilbertNewformData>,
        bound: u64,
    ) -> Result<EquivarianceReport> {
        if !self.parity_ok() {
            return Err(Error::ParityViolation);
        }
        let own;
        let g = match conjugate {
            Some(g) => g,
            None => {
                own = self.conjugate_unchecked(k, sigma)?;
                &own
            }
        };
        let k0 = self.k0();
        let s = &sigma.automorphism;
        let mut checked = 0;
        for p in k.primes_up_to_norm(bound)? {
            if !k.coprime(&p.ideal, &self.level) {
                continue;
            }
            let (Some(c), Some(cs)) = (self.coefficient(&p.ideal), g.coefficient(&p.ideal)) else { continue };
            let q = p.norm() as i64;
            // alpha' + beta' = q^{1/2} C q^{-k0}; alpha' beta' = omega*(p) q^{-k0}
            let trace = HalfPow::monomial(c, 1 - 2 * k0, q);
            let det = HalfPow::monomial(&self.omega_star(k, &p)?, -2 * k0, q);
            let half = HalfPow::monomial(&c.one_like(), 1, q);
            let half_inv = HalfPow::monomial(&c.one_like(), -1, q);
            let paired = trace.mul(&half_inv);
            let base = paired.as_base().ok_or(Error::InvariantViolation("unpaired half power".into()))?;
            let lhs_trace = HalfPow::from_base(s.apply(base), q).mul(&half);
            let paired = det.mul(&half_inv).mul(&half_inv);
            let base = paired.as_base().ok_or(Error::InvariantViolation("unpaired half power".into()))?;
            let lhs_det = HalfPow::from_base(s.apply(base), q).mul(&half).mul(&half);
            let rhs_trace = HalfPow::monomial(cs, 1 - 2 * k0, q);
            let rhs_det = HalfPow::monomial(&g.omega_star(k, &p)?, -2 * k0, q);
            checked += 1;
            if lhs_trace != rhs_trace || lhs_det != rhs_det {
                return Ok(EquivarianceReport { holds: false, offending: Some(p.label()), checked });
            }
        }
        Ok(EquivarianceReport { holds: true, offending: None, checked })
    }

    /// The subfield generated by `C(p)` for `N(p) <= bound`.
    pub fn rationality_field(&self, k: &TotallyRealField, bound: u64) -> Result<RationalityField> {
        let mut elems = Vec::new();
        for p in k.primes_up_to_norm(bound.min(self.bound))? {
            if let Some(c) = self.coefficient(&p.ideal) {
                elems.push(c.clone());
            }
        }
        let sub = generated_subfield(&self.coefficients.field, &elems);
        let ambient = self.coefficients.field.degree();
        Ok(RationalityField { caveat: sub.degree < ambient, ambient_degree: ambient, subfield: sub })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LocalComponent {
    /// Satake data: `alpha + beta` and `alpha beta`.
    Unramified { q: i64, trace: HalfPow<NfElem>, det: NfElem },
    /// Only the conductor exponent; `linear` is the degree-one coefficient of `P` when `C(p)` is stored.
    Ramified { q: i64, conductor_exponent: u32, linear: Option<HalfPow<NfElem>> },
}

impl LocalComponent {
    /// `P(X)` with `L_p(s) = 1 / P(q^{-s})`.
    pub fn l_polynomial(&self, one: &NfElem) -> Vec<HalfPow<NfElem>> {
        match self {
            LocalComponent::Unramified { q, trace, det } => {
                vec![HalfPow::from_base(one.clone(), *q), trace.neg(), HalfPow::from_base(det.clone(), *q)]
            }
            LocalComponent::Ramified { q, linear: Some(l), .. } => vec![HalfPow::from_base(one.clone(), *q), l.neg()],
            LocalComponent::Ramified { q, linear: None, .. } => vec![HalfPow::from_base(one.clone(), *q)],
        }
    }
}

#[derive(Clone, Debug)]
pub struct AutomorphicRepData {
    pub arch: Vec<ArchLocalRep>,
    pub weights: Vec<i64>,
    pub conductor: Ideal,
    pub central: HeckeCharacter,
    pub k0: i64,
    /// Keyed by `(p, index)`.
    pub local: BTreeMap<(u64, usize), LocalComponent>,
}

impl AutomorphicRepData {
    /// `C(p)` and `omega*(p) N(p)^{k0-1}` recovered from the local data at `p`.
    pub fn classical_euler_data(&self, key: (u64, usize)) -> Result<(NfElem, NfElem)> {
        let comp = self.local.get(&key).ok_or(Error::MissingLocalData(format!("({}, {})", key.0, key.1)))?;
        let lift = |t: &HalfPow<NfElem>, q: i64| -> Result<NfElem> {
            let v = t.mul(&HalfPow::monomial(&t.a.one_like(), self.k0 - 1, q));
            v.as_base().cloned().ok_or(Error::InvariantViolation("half power did not cancel".into()))
        };
        match comp {
            LocalComponent::Unramified { q, trace, det } => {
                let nk = det.from_q_like(&Q::from_integer(BigInt::from(*q).pow((self.k0 - 1) as u32)));
                Ok((lift(trace, *q)?, det.mul(&nk)))
            }
            LocalComponent::Ramified { q, linear: Some(l), .. } => Ok((lift(l, *q)?, l.a.zero_like())),
            LocalComponent::Ramified { linear: None, .. } => {
                Err(Error::MissingLocalData(format!("({}, {})", key.0, key.1)))
            }
        }
    }
}

/// `mu_j = (a_j, b_j)` with `a_j + b_j = w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologicalWeight {
    pub pairs: Vec<(i64, i64)>,
    pub w: i64,
}

pub fn cohomological_weight(weights: &[i64], twisted: bool) -> Result<CohomologicalWeight> {
    if weights.is_empty() || weights.iter().any(|w| (w - weights[0]) % 2 != 0) {
        return Err(Error::ParityViolation);
    }
    let k0 = *weights.iter().max().unwrap();
    if twisted {
        let pairs = weights.iter().map(|&k| ((k0 + k - 2) / 2, (k0 - k + 2) / 2)).collect();
        Ok(CohomologicalWeight { pairs, w: k0 })
    } else {
        if weights.iter().any(|k| k % 2 != 0) {
            return Err(Error::OddWeightUntwisted);
        }
        let pairs = weights.iter().map(|&k| ((k - 2) / 2, -(k - 2) / 2)).collect();
        Ok(CohomologicalWeight { pairs, w: 0 })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArchConstants {
    pub d_inf: i64,
    pub c: BigInt,
}

fn factorial(n: i64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `d_inf = sum (a_j + 1)` and `c = 4^n prod (-1)^{a_j} (a_j - b_j)! / (-b_j)!`.
pub fn archimedean_constants(mu: &CohomologicalWeight) -> Result<ArchConstants> {
    let mut d = 0i64;
    let mut c = Q::from_integer(BigInt::from(4).pow(mu.pairs.len() as u32));
    for &(a, b) in &mu.pairs {
        if -b < 0 {
            return Err(Error::NegativeFactorial(-b));
        }
        if a - b < 0 {
            return Err(Error::NegativeFactorial(a - b));
        }
        d += a + 1;
        let sign = if a.rem_euclid(2) == 1 { -1 } else { 1 };
        c = c * Q::new(factorial(a - b) * sign, factorial(-b));
    }
    if !c.is_integer() {
        return Err(Error::InvariantViolation(format!("archimedean constant {c} is not an integer")));
    }
    Ok(ArchConstants { d_inf: d, c: c.to_integer() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraicClass {
    /// All weights even.
    Algebraic,
    /// All weights odd: algebraic after a half twist.
    HalfTwistAlgebraic,
    /// Mixed parity.
    NotAlgebraic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub class: AlgebraicClass,
    /// Infinity type of the `|.|^{k0/2}` twist when it is algebraic.
    pub infinity_type: Option<Vec<(i64, i64)>>,
    pub regular: bool,
    pub twisted: ArchClassification,
}

pub fn classify(weights: &[i64]) -> Classification {
    let k0 = *weights.iter().max().unwrap_or(&1);
    let plain: Vec<ArchLocalRep> = weights.iter().map(|&k| ArchLocalRep { l: k - 1, t: Q::zero() }).collect();
    let twisted_reps: Vec<ArchLocalRep> =
        weights.iter().map(|&k| ArchLocalRep { l: k - 1, t: Q::new(BigInt::from(k0), BigInt::from(2)) }).collect();
    let base = archimedean_classification(&plain);
    let twisted = archimedean_classification(&twisted_reps);
    let class = if base.algebraic {
        AlgebraicClass::Algebraic
    } else if base.half_twist_algebraic {
        AlgebraicClass::HalfTwistAlgebraic
    } else {
        AlgebraicClass::NotAlgebraic
    };
    Classification { class, infinity_type: twisted.infinity_type.clone(), regular: weights.iter().all(|&k| k >= 2), twisted }
}

/// An automorphism of the coefficient field with a permutation of the real places.
#[derive(Clone, Debug)]
pub struct GaloisAction {
    pub automorphism: Automorphism,
    /// `weights^sigma[j] = weights[place_permutation[j]]`.
    pub place_permutation: Vec<usize>,
}

impl GaloisAction {
    pub fn new(automorphism: Automorphism, place_permutation: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; place_permutation.len()];
        for &j in &place_permutation {
            if j >= seen.len() || seen[j] {
                return Err(Error::InvalidInput("place permutation is not a bijection".into()));
            }
            seen[j] = true;
        }
        Ok(GaloisAction { automorphism, place_permutation })
    }

    pub fn identity(field: &Arc<NumberField>, n: usize) -> Self {
        GaloisAction { automorphism: Automorphism::identity(field), place_permutation: (0..n).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivarianceReport {
    pub holds: bool,
    /// Label of the first prime where the identity fails.
    pub offending: Option<String>,
    pub checked: usize,
}

#[derive(Clone, Debug)]
pub struct RationalityField {
    pub subfield: Subfield,
    pub ambient_degree: usize,
    /// Set when the generated field is smaller than the ambient field; a larger bound may enlarge it.
    pub caveat: bool,
}

/// Sign of `(-1)^a` as a helper for callers formatting constants.
pub fn parity_sign(a: i64) -> i64 {
    if a.rem_euclid(2) == 1 {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::ResidueCharacter;
    use crate::numfield::NumberField;
    use crate::arith::poly::QPoly;

    /// tau(n) for n <= bound from q prod (1 - q^n)^24.
    pub(crate) fn tau_oracle(bound: usize) -> Vec<BigInt> {
        let mut c = vec![BigInt::zero(); bound + 1];
        c[0] = BigInt::one();
        for n in 1..=bound {
            for _ in 0..24 {
                for i in (n..=bound).rev() {
                    let t = c[i - n].clone();
                    c[i] -= t;
                }
            }
        }
        // shift by q
        let mut tau = vec![BigInt::zero(); bound + 1];
        for i in 1..=bound {
            tau[i] = c[i - 1].clone();
        }
        tau
    }

    fn delta(k: &TotallyRealField, bound: u64) -> HilbertNewformData {
        let tau = tau_oracle(bound as usize);
        let cf = CoefficientField::rational();
        let mut ev = BTreeMap::new();
        for n in 1..=bound {
            ev.insert(k.rational_ideal(&qi(n as i64)).unwrap(), cf.from_q(Q::from_integer(tau[n as usize].clone())));
        }
        let triv = ResidueCharacter::trivial(k, &k.unit_ideal()).unwrap();
        let chi = HeckeCharacter::adelize(k, &triv, 1).unwrap();
        HilbertNewformData::new(k, vec![12], chi, cf, ev, bound).unwrap()
    }

    #[test]
    fn delta_validates_and_attaches() {
        let q = TotallyRealField::new(&[0, 1]).unwrap();
        let f = delta(&q, 60);
        let rep = f.validate(&q).unwrap();
        assert!(rep.is_valid(), "{:?}", rep.failures);
        assert!(rep.checked > 30);
        let pi = f.attach_representation(&q).unwrap();
        assert_eq!(pi.arch[0].l, 11);
        match &pi.local[&(2, 0)] {
            LocalComponent::Unramified { trace, det, .. } => {
                // alpha + beta = tau(2) / 2^{11/2} = -24 * 2^{-6} * sqrt 2
                assert_eq!(trace.b.as_rational(), Some(Q::new(BigInt::from(-24), BigInt::from(64))));
                assert!(trace.a.vanishes());
                assert_eq!(det.as_rational(), Some(qi(1)));
            }
            _ => panic!(),
        }
        let (c2, w2) = pi.classical_euler_data((2, 0)).unwrap();
        assert_eq!(c2.as_rational(), Some(qi(-24)));
        assert_eq!(w2.as_rational(), Some(qi(2048)));
        // corrupt C(6)
        let mut g = f.clone();
        let six = q.rational_ideal(&qi(6)).unwrap();
        g.eigenvalues.insert(six, g.coefficients.from_q(qi(1)));
        let rep = g.validate(&q).unwrap();
        assert!(rep.failures.iter().any(|s| s.contains("multiplicativity: C(6)")));
        assert!(matches!(g.attach_representation(&q), Err(Error::ValidationFailed(_))));
        // only C(O) stored
        let mut h = f.clone();
        h.eigenvalues.retain(|m, _| *m == q.unit_ideal());
        assert!(h.validate(&q).unwrap().is_valid());
    }

    #[test]
    fn weights_and_constants() {
        let mu = cohomological_weight(&[2, 4], false).unwrap();
        assert_eq!(mu, CohomologicalWeight { pairs: vec![(0, 0), (1, -1)], w: 0 });
        let mu = cohomological_weight(&[2, 4], true).unwrap();
        assert_eq!(mu, CohomologicalWeight { pairs: vec![(2, 2), (3, 1)], w: 4 });
        assert_eq!(cohomological_weight(&[3, 3], true).unwrap().pairs, vec![(2, 1), (2, 1)]);
        assert_eq!(cohomological_weight(&[3, 3], false), Err(Error::OddWeightUntwisted));
        assert_eq!(cohomological_weight(&[2, 3], true), Err(Error::ParityViolation));
        let c = archimedean_constants(&cohomological_weight(&[2, 2], false).unwrap()).unwrap();
        assert_eq!((c.d_inf, c.c), (2, BigInt::from(16)));
        let c = archimedean_constants(&cohomological_weight(&[4], false).unwrap()).unwrap();
        assert_eq!((c.d_inf, c.c), (2, BigInt::from(-8)));
        let c = archimedean_constants(&cohomological_weight(&[12], false).unwrap()).unwrap();
        assert_eq!((c.d_inf, c.c), (6, BigInt::from(-4 * 30240)));
        let bad = CohomologicalWeight { pairs: vec![(2, 2)], w: 4 };
        assert_eq!(archimedean_constants(&bad), Err(Error::NegativeFactorial(-2)));
    }

    #[test]
    fn classification_trichotomy() {
        let c = classify(&[2, 2]);
        assert_eq!(c.class, AlgebraicClass::Algebraic);
        assert!(c.regular);
        let c = classify(&[1, 1]);
        assert_eq!(c.class, AlgebraicClass::HalfTwistAlgebraic);
        assert!(!c.regular);
        assert_eq!(classify(&[2, 3]).class, AlgebraicClass::NotAlgebraic);
    }

    fn golden_datum(k: &TotallyRealField) -> HilbertNewformData {
        // synthetic eigendata with C(P) in Q(sqrt 5), extended by the Hecke recursion
        let kf = NumberField::new(QPoly::from_ints(&[-1, -1, 1])).unwrap();
        let cf = CoefficientField::new(kf.clone(), 1, None).unwrap();
        let phi = NfElem::generator(&kf);
        let triv = ResidueCharacter::trivial(k, &k.unit_ideal()).unwrap();
        let chi = HeckeCharacter::adelize(k, &triv, 1).unwrap();
        let bound = 30;
        let mut ev = BTreeMap::new();
        let ideals = k.integral_ideals_up_to(bound).unwrap();
        let prime_val = |p: &PrimeIdeal| -> NfElem {
            NfElem::from_i64(&kf, (p.p as i64 % 7) - 3).add(&phi.mul(&NfElem::from_i64(&kf, (p.index as i64) + 1)))
        };
        for (m, fac) in &ideals {
            let mut c = NfElem::from_i64(&kf, 1);
            for (p, e) in fac {
                let cp = prime_val(p);
                let nk = NfElem::from_i64(&kf, (p.norm() as i64).pow(1));
                let (mut a, mut b) = (NfElem::from_i64(&kf, 1), cp.clone());
                for _ in 1..*e {
                    let nb = cp.mul(&b).sub(&nk.mul(&a));
                    a = b;
                    b = nb;
                }
                c = c.mul(&b);
            }
            ev.insert(m.clone(), c);
        }
        HilbertNewformData::new(k, vec![2, 2], chi, cf, ev, bound).unwrap()
    }

    #[test]
    fn galois_action_on_golden_datum() {
        let k = TotallyRealField::new(&[-1, -1, 1]).unwrap();
        let f = golden_datum(&k);
        assert!(f.validate(&k).unwrap().is_valid());
        let kf = f.coefficients.field.clone();
        let sigma = GaloisAction::new(Automorphism::quadratic_conjugation(&kf).unwrap(), vec![0, 1]).unwrap();
        let g = f.galois_conjugate(&k, &sigma).unwrap();
        let p2 = k.factor_prime(2).unwrap()[0].0.clone();
        assert_eq!(g.coefficient(&p2.ideal), Some(&sigma.automorphism.apply(f.coefficient(&p2.ideal).unwrap())));
        let back = g.galois_conjugate(&k, &sigma).unwrap();
        assert_eq!(back.eigenvalues, f.eigenvalues);
        let rep = f.equivariance_check(&k, &sigma, None, 30).unwrap();
        assert!(rep.holds && rep.checked > 5);
        let id = GaloisAction::identity(&kf, 2);
        assert!(f.equivariance_check(&k, &id, None, 30).unwrap().holds);
        // corrupt the conjugate at the prime above 11 with index 1
        let p11 = k.factor_prime(11).unwrap()[1].0.clone();
        let mut bad = g.clone();
        bad.eigenvalues.insert(p11.ideal.clone(), NfElem::from_i64(&kf, 0));
        let rep = f.equivariance_check(&k, &sigma, Some(&bad), 30).unwrap();
        assert_eq!((rep.holds, rep.offending.as_deref()), (false, Some("(11, 1)")));
        let rf = f.rationality_field(&k, 30).unwrap();
        assert_eq!((rf.subfield.degree, rf.caveat), (2, false));
    }

    #[test]
    fn rational_datum_fields() {
        let q = TotallyRealField::new(&[0, 1]).unwrap();
        let f = delta(&q, 30);
        let rf = f.rationality_field(&q, 30).unwrap();
        assert_eq!(rf.subfield.degree, 1);
        let id = GaloisAction::identity(&f.coefficients.field, 1);
        let g = f.galois_conjugate(&q, &id).unwrap();
        assert_eq!(g.eigenvalues, f.eigenvalues);
        // rational values inside an ambient quadratic field
        let kf = NumberField::new(QPoly::from_ints(&[-1, -1, 1])).unwrap();
        let cf = CoefficientField::new(kf.clone(), 0, None).unwrap();
        let mut h = f.clone();
        h.eigenvalues = f.eigenvalues.iter().map(|(m, c)| (m.clone(), NfElem::from_q(&kf, c.as_rational().unwrap()))).collect();
        h.coefficients = cf;
        let rf = h.rationality_field(&q, 30).unwrap();
        assert_eq!((rf.subfield.degree, rf.caveat), (1, true));
    }
}
