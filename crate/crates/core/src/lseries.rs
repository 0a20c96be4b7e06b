//! Dirichlet series and Euler products for `L(s, f)` and `L(s, Pi(f))`: truncated
//! evaluation with certified tails, twists, the shift between the two
//! normalizations, critical points and period-normalized critical values.

use crate::arith::ball::{Complex, Real};
use crate::arith::scalar::{HalfPow, Scalar};
use crate::arith::{qi, qr, Q};
use crate::dictionary::{
    archimedean_constants, cohomological_weight, AutomorphicRepData, CoefficientField, HilbertNewformData,
    LocalComponent,
};
use crate::field::{Ideal, PrimeIdeal, TotallyRealField};
use crate::hecke::{gauss_sum, HeckeCharacter};
use crate::local::{arch_L_factor, ArchLFactor, ArchLocalRep};
use crate::numfield::NfElem;
use crate::{Error, Result};
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

/// Which Dirichlet series the coefficients describe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// `L(s, f) = sum C(m) N(m)^{-s}`.
    Classical { k0: i64 },
    /// `L(s, Pi(f)) = sum C(m) N(m)^{(1-k0)/2} N(m)^{-s}`.
    Unitary { k0: i64 },
}

impl Normalization {
    pub fn k0(&self) -> i64 {
        match self {
            Normalization::Classical { k0 } | Normalization::Unitary { k0 } => *k0,
        }
    }

    /// Exponent `e` with coefficient `= value * N(m)^{e/2}`.
    pub fn half_exponent(&self) -> i64 {
        match self {
            Normalization::Classical { .. } => 0,
            Normalization::Unitary { k0 } => 1 - k0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Euler,
    Ingested,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesTerm {
    pub ideal: Ideal,
    pub norm: u64,
    /// Prime factorization keyed by `(p, index)`.
    pub factors: Vec<((u64, usize), u32)>,
    pub value: NfElem,
}

/// Coefficients on all integral ideals of norm at most `bound`, ordered by norm.
#[derive(Clone, Debug)]
pub struct DirichletSeries {
    pub terms: Vec<SeriesTerm>,
    pub coefficients: CoefficientField,
    pub normalization: Normalization,
    pub provenance: Provenance,
    pub bound: u64,
    pub field_degree: usize,
}

impl DirichletSeries {
    pub fn coefficient(&self, m: &Ideal) -> Option<&NfElem> {
        self.terms.iter().find(|t| &t.ideal == m).map(|t| &t.value)
    }

    /// The coefficient at `m` with its formal half power, `value * Q^{e}` where `Q^2 = N(m)`.
    pub fn exact_coefficient(&self, m: &Ideal) -> Option<HalfPow<NfElem>> {
        let t = self.terms.iter().find(|t| &t.ideal == m)?;
        Some(HalfPow::monomial(&t.value, self.normalization.half_exponent(), t.norm as i64))
    }

    /// The classical coefficient table of `f` as stored, without Euler expansion.
    pub fn ingest(k: &TotallyRealField, f: &HilbertNewformData) -> Result<DirichletSeries> {
        let mut terms = Vec::new();
        for (m, fac) in k.integral_ideals_up_to(f.bound)? {
            let Some(c) = f.coefficient(&m) else { continue };
            terms.push(SeriesTerm { norm: ideal_norm_u64(k, &m)?, factors: keys(&fac), ideal: m, value: c.clone() });
        }
        Ok(DirichletSeries {
            terms,
            coefficients: f.coefficients.clone(),
            normalization: Normalization::Classical { k0: f.k0() },
            provenance: Provenance::Ingested,
            bound: f.bound,
            field_degree: k.degree(),
        })
    }

    /// Restriction to ideals of norm at most `b`.
    pub fn truncate(&self, b: u64) -> DirichletSeries {
        let mut s = self.clone();
        s.terms.retain(|t| t.norm <= b);
        s.bound = s.bound.min(b);
        s
    }
}

/// Largest `e` with `q^e <= b`.
fn max_exponent(q: u64, b: u64) -> usize {
    let (mut e, mut x) = (0, 1u64);
    while x <= b / q {
        x *= q;
        e += 1;
    }
    e
}

fn keys(fac: &[(PrimeIdeal, u32)]) -> Vec<((u64, usize), u32)> {
    fac.iter().map(|(p, e)| ((p.p, p.index), *e)).collect()
}

fn ideal_norm_u64(k: &TotallyRealField, m: &Ideal) -> Result<u64> {
    k.ideal_norm(m)?.to_integer().to_u64().ok_or(Error::InvalidInput("ideal norm too large".into()))
}

/// Expands `prod_p P_p(N(p)^{-s})^{-1}` over primes of norm at most `b`, where `factor(p)`
/// returns the coefficients of `P_p` starting with the constant term 1.
pub fn euler_product<F>(
    k: &TotallyRealField,
    coefficients: &CoefficientField,
    normalization: Normalization,
    b: u64,
    mut factor: F,
) -> Result<DirichletSeries>
where
    F: FnMut(&PrimeIdeal) -> Result<Vec<NfElem>>,
{
    let ideals = k.integral_ideals_up_to(b)?;
    // prime power coefficients from 1 / P(X) = sum a_r X^r
    let mut powers: BTreeMap<(u64, usize), Vec<NfElem>> = BTreeMap::new();
    for p in k.primes_up_to_norm(b)? {
        let poly = factor(&p)?;
        if poly.first() != Some(&coefficients.one()) {
            return Err(Error::InvalidInput(format!("Euler factor at {} does not start with 1", p.label())));
        }
        let mut a = vec![coefficients.one()];
        for r in 1..=max_exponent(p.norm(), b) {
            let mut next = coefficients.zero();
            for (j, pj) in poly.iter().enumerate().skip(1).take(r) {
                next = next.sub(&pj.mul(&a[r - j]));
            }
            a.push(next);
        }
        powers.insert((p.p, p.index), a);
    }
    let mut terms = Vec::with_capacity(ideals.len());
    for (m, fac) in ideals {
        let mut v = coefficients.one();
        for (p, e) in &fac {
            v = v.mul(&powers[&(p.p, p.index)][*e as usize]);
        }
        terms.push(SeriesTerm { norm: ideal_norm_u64(k, &m)?, factors: keys(&fac), ideal: m, value: v });
    }
    Ok(DirichletSeries {
        terms,
        coefficients: coefficients.clone(),
        normalization,
        provenance: Provenance::Euler,
        bound: b,
        field_degree: k.degree(),
    })
}

/// Classical coefficients from the Euler factors `1 - C(p) X + omega*(p) N(p)^{k0-1} X^2` of `f`.
pub fn coefficients_from_euler(k: &TotallyRealField, f: &HilbertNewformData, b: u64) -> Result<DirichletSeries> {
    let k0 = f.k0();
    euler_product(k, &f.coefficients, Normalization::Classical { k0 }, b, |p| {
        let c = f.coefficient(&p.ideal).ok_or(Error::MissingLocalData(p.label()))?;
        let w = f.omega_star(k, p)?;
        let nk = w.from_q_like(&Q::from_integer(BigInt::from(p.norm()).pow((k0 - 1) as u32)));
        Ok(vec![c.one_like(), c.neg(), w.mul(&nk)])
    })
}

/// Classical coefficients regenerated from the local components of `Pi(f)`.
pub fn coefficients_from_representation(
    k: &TotallyRealField,
    rep: &AutomorphicRepData,
    coefficients: &CoefficientField,
    b: u64,
) -> Result<DirichletSeries> {
    euler_product(k, coefficients, Normalization::Classical { k0: rep.k0 }, b, |p| {
        let (c, w) = rep.classical_euler_data((p.p, p.index)).map_err(|_| Error::MissingLocalData(p.label()))?;
        Ok(vec![c.one_like(), c.neg(), w])
    })
}

/// Unitary coefficients from the Satake data of `Pi(f)`, expanded with formal half powers.
///
/// Each prime power coefficient must come out as a single monomial `c Q^{r(1-k0)}`; `c` is stored.
pub fn unitary_from_representation(
    k: &TotallyRealField,
    rep: &AutomorphicRepData,
    coefficients: &CoefficientField,
    b: u64,
) -> Result<DirichletSeries> {
    let k0 = rep.k0;
    let one = coefficients.one();
    let mut powers: BTreeMap<(u64, usize), Vec<NfElem>> = BTreeMap::new();
    for p in k.primes_up_to_norm(b)? {
        let comp = rep.local.get(&(p.p, p.index)).ok_or(Error::MissingLocalData(p.label()))?;
        if matches!(comp, LocalComponent::Ramified { linear: None, .. }) {
            return Err(Error::MissingLocalData(p.label()));
        }
        let poly = comp.l_polynomial(&one);
        let q = p.norm() as i64;
        let mut a: Vec<HalfPow<NfElem>> = vec![HalfPow::from_base(one.clone(), q)];
        for r in 1..=max_exponent(p.norm(), b) {
            let mut next = HalfPow::from_base(coefficients.zero(), q);
            for (j, pj) in poly.iter().enumerate().skip(1).take(r) {
                next = next.sub(&pj.mul(&a[r - j]));
            }
            a.push(next);
        }
        let mut base = Vec::with_capacity(a.len());
        for (r, ar) in a.iter().enumerate() {
            let strip = ar.mul(&HalfPow::monomial(&one, -(r as i64) * (1 - k0), q));
            let c = strip.as_base().ok_or(Error::InvariantViolation(format!(
                "unitary coefficient at {}^{r} is not a pure half power",
                p.label()
            )))?;
            base.push(c.clone());
        }
        powers.insert((p.p, p.index), base);
    }
    let mut terms = Vec::new();
    for (m, fac) in k.integral_ideals_up_to(b)? {
        let mut v = one.clone();
        for (p, e) in &fac {
            v = v.mul(&powers[&(p.p, p.index)][*e as usize]);
        }
        terms.push(SeriesTerm { norm: ideal_norm_u64(k, &m)?, factors: keys(&fac), ideal: m, value: v });
    }
    Ok(DirichletSeries {
        terms,
        coefficients: coefficients.clone(),
        normalization: Normalization::Unitary { k0 },
        provenance: Provenance::Euler,
        bound: b,
        field_degree: k.degree(),
    })
}

/// Multiplies the coefficient at `m` by `chi*(m)`, or zero when `m` meets the modulus of `chi`.
pub fn twist_series(k: &TotallyRealField, series: &DirichletSeries, chi: &HeckeCharacter) -> Result<DirichletSeries> {
    let table = chi.prime_table(k, series.bound)?;
    let mut values: BTreeMap<(u64, usize), Option<NfElem>> = BTreeMap::new();
    for (key, v) in table {
        let val = match v {
            Some(u) => Some(series.coefficients.unity_value(u)?),
            None => None,
        };
        values.insert(key, val);
    }
    let mut out = series.clone();
    for t in out.terms.iter_mut() {
        let mut w = t.value.one_like();
        for (key, e) in &t.factors {
            match values.get(key).ok_or(Error::MissingLocalData(format!("({}, {})", key.0, key.1)))? {
                Some(x) => w = w.mul(&x.pow_u(*e as u64)),
                None => {
                    w = w.zero_like();
                    break;
                }
            }
        }
        t.value = t.value.mul(&w);
    }
    Ok(out)
}

/// Margin `delta` in the coefficient bound `|C(m)| <= d(m) N(m)^{(k0-1)/2 + delta}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailModel {
    pub delta: Q,
}

impl Default for TailModel {
    fn default() -> Self {
        TailModel { delta: qr(1, 2) }
    }
}

impl TailModel {
    /// Growth exponent of the coefficients of `series`.
    pub fn growth(&self, series: &DirichletSeries) -> Q {
        let n = &self.delta + qr(series.normalization.k0() - 1, 2);
        n + qr(series.normalization.half_exponent(), 2)
    }

    /// Real parts above this value converge absolutely under the model.
    pub fn abscissa(&self, series: &DirichletSeries) -> Q {
        self.growth(series) + qi(1)
    }
}

#[derive(Clone, Debug)]
pub struct LValue {
    /// Partial sum over ideals of norm at most `bound`.
    pub partial: Complex,
    /// Upper bound for the omitted tail.
    pub tail_bound: Q,
    /// The partial sum widened by the tail bound.
    pub value: Complex,
    pub bound: u64,
    pub terms: usize,
}

/// `sum_{N > b} d_r(N) N^{-sigma} <= b^{tau - sigma} zeta(tau)^r` for `1 < tau < sigma`,
/// with `zeta(tau) <= tau / (tau - 1)`; minimized over a grid of `tau`.
fn rankin_tail(sigma: &Q, r: u32, b: u64, prec: u32) -> Q {
    let ln_b = Real::from_i64(b.max(1) as i64, prec).ln().expect("positive");
    let gap = sigma - qi(1);
    let mut best: Option<Q> = None;
    for j in 1..64 {
        let tau = qi(1) + &gap * qr(j, 64);
        let zeta = &tau / (&tau - qi(1));
        let mut zr = qi(1);
        for _ in 0..r {
            zr = &zr * &zeta;
        }
        let decay = ln_b.mul_q(&(&tau - sigma)).exp();
        let bound = Real::from_q(&zr, prec);
        let t = (&decay * &bound).upper_q();
        if best.as_ref().map_or(true, |b| t < *b) {
            best = Some(t);
        }
    }
    best.unwrap()
}

/// Rounds a rational upward to a dyadic with `prec` fractional bits.
fn round_up(x: &Q, prec: u32) -> Q {
    let scaled = x * Q::from_integer(BigInt::one() << prec);
    Q::new(scaled.ceil().to_integer(), BigInt::one() << prec)
}

fn round_down(x: &Q, bits: u32) -> Q {
    let scaled = x * Q::from_integer(BigInt::one() << bits);
    Q::new(scaled.floor().to_integer(), BigInt::one() << bits)
}

fn real_part_lower(s: &Complex) -> Q {
    s.re.lower_q()
}

/// `N^{-s}` for all `N <= b`, built multiplicatively from prime values.
fn power_table(s: &Complex, b: u64, prec: u32) -> Vec<Complex> {
    let b = b as usize;
    let mut spf = vec![0usize; b + 1];
    let mut table = vec![Complex::zero(prec); b + 1];
    if b >= 1 {
        table[1] = Complex::one(prec);
    }
    let ms = s.neg();
    for n in 2..=b {
        if spf[n] == 0 {
            let mut j = n;
            while j <= b {
                if spf[j] == 0 {
                    spf[j] = n;
                }
                j += n;
            }
            let ln = Real::from_i64(n as i64, prec).ln().expect("positive");
            table[n] = (&ms * &Complex::from_real(ln)).exp().with_prec(prec);
        } else {
            let p = spf[n];
            table[n] = (&table[p] * &table[n / p]).with_prec(prec);
        }
    }
    table
}

/// Partial sum over norms at most `b` with a tail bound under the default model.
pub fn evaluate_finite_l(series: &DirichletSeries, s: &Complex, b: u64, prec: u32) -> Result<LValue> {
    evaluate_finite_l_with(series, s, b, prec, &TailModel::default())
}

pub fn evaluate_finite_l_with(
    series: &DirichletSeries,
    s: &Complex,
    b: u64,
    prec: u32,
    model: &TailModel,
) -> Result<LValue> {
    let sigma = real_part_lower(s);
    let abscissa = model.abscissa(series);
    if sigma <= abscissa {
        return Err(Error::OutOfConvergenceRegion(format!(
            "real part {} not above {}",
            s.re.to_decimal(6),
            q_text(&abscissa)
        )));
    }
    if b > series.bound {
        return Err(Error::MissingLocalData(format!("coefficients known only up to norm {}", series.bound)));
    }
    let wp = prec + 40 + (64 - b.leading_zeros()) + coefficient_bits(series);
    // N^{e/2} N^{-s} = N^{-(s - e/2)}
    let shift = qr(series.normalization.half_exponent(), 2);
    let s_eff = &s.with_prec(wp) - &Complex::from_q(&shift, &Q::zero(), wp);
    let powers = power_table(&s_eff, b, wp);
    let roots = series.coefficients.field.complex_roots(wp)?;
    let root = &roots[series.coefficients.embedding];
    let mut sum = Complex::zero(wp);
    let mut count = 0;
    let mut cache: BTreeMap<Vec<Q>, Complex> = BTreeMap::new();
    for t in series.terms.iter().filter(|t| t.norm <= b) {
        if t.value.vanishes() {
            continue;
        }
        let key = t.value.coords().to_vec();
        let c = cache.entry(key).or_insert_with(|| t.value.embed(root)).clone();
        sum = &sum + &(&c * &powers[t.norm as usize]);
        count += 1;
    }
    let partial = sum.with_prec(prec + 16);
    let reduced = round_down(&(&sigma - &model.growth(series)), 24);
    let tail = round_up(&rankin_tail(&reduced, 2 * series.field_degree as u32, b, wp), prec + 16);
    let value = partial.add_error(&tail);
    if partial.rad_q() > Q::new(BigInt::one(), BigInt::one() << prec) {
        return Err(Error::PrecisionExhausted(format!("partial sum radius exceeds 2^-{prec}")));
    }
    Ok(LValue { partial, tail_bound: tail, value, bound: b, terms: count })
}

/// Rough bit size of the largest embedded coefficient.
fn coefficient_bits(series: &DirichletSeries) -> u32 {
    let deg = series.coefficients.field.degree() as u64;
    let root_bits = series.coefficients.field.poly().coeffs().iter().map(|c| c.numer().bits()).max().unwrap_or(0) + 1;
    let mut best = 0u64;
    for t in &series.terms {
        for c in t.value.coords() {
            best = best.max(c.numer().bits().saturating_sub(c.denom().bits() - 1));
        }
    }
    (best + deg * root_bits + 4).min(1 << 16) as u32
}

fn q_text(x: &Q) -> String {
    if x.is_integer() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// A Dirichlet series with its archimedean factors, one per real place.
#[derive(Clone, Debug)]
pub struct CompletedL {
    pub series: DirichletSeries,
    pub arch: Vec<ArchLFactor>,
}

impl CompletedL {
    pub fn new(series: DirichletSeries, arch: Vec<ArchLFactor>) -> Result<Self> {
        if arch.len() != series.field_degree {
            return Err(Error::InvalidInput(format!(
                "{} archimedean factors for a degree {} field",
                arch.len(),
                series.field_degree
            )));
        }
        Ok(CompletedL { series, arch })
    }

    pub fn arch_value(&self, s: &Complex, prec: u32) -> Result<Complex> {
        let mut v = Complex::one(prec + 16);
        for f in &self.arch {
            v = &v * &f.eval(s, prec + 16)?;
        }
        Ok(v.with_prec(prec))
    }

    /// Finite part times archimedean part; the tail bound scales with `|L_inf(s)|`.
    pub fn evaluate(&self, s: &Complex, b: u64, prec: u32) -> Result<Complex> {
        let fin = evaluate_finite_l(&self.series, s, b, prec)?;
        let inf = self.arch_value(s, prec)?;
        Ok(&fin.value * &inf)
    }
}

/// The factor `(2 pi)^{-(s - (k0 - k_j)/2)} Gamma(s - (k0 - k_j)/2)` of `L(s, f)` at place `j`.
pub fn classical_arch_factor(weights: &[i64], j: usize) -> ArchLFactor {
    let k0 = *weights.iter().max().unwrap();
    ArchLFactor { shift: qr(-(k0 - weights[j]), 2), with_two: false }
}

pub fn completed_classical(k: &TotallyRealField, f: &HilbertNewformData, b: u64) -> Result<CompletedL> {
    let series = coefficients_from_euler(k, f, b)?;
    let arch = (0..f.weights.len()).map(|j| classical_arch_factor(&f.weights, j)).collect();
    CompletedL::new(series, arch)
}

pub fn completed_unitary(k: &TotallyRealField, f: &HilbertNewformData, b: u64) -> Result<CompletedL> {
    let rep = f.attach_representation(k)?;
    let series = unitary_from_representation(k, &rep, &f.coefficients, b)?;
    let arch = rep.arch.iter().map(|r| arch_L_factor(r, false)).collect();
    CompletedL::new(series, arch)
}

#[derive(Clone, Debug)]
pub struct ShiftPoint {
    pub s: Complex,
    pub unitary: LValue,
    pub classical: LValue,
    /// Upper bound for `|L(s, Pi) - L(s + (k0-1)/2, f)|` of the partial sums.
    pub discrepancy: Q,
    pub combined_tail: Q,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct ArchShiftPoint {
    pub s: Complex,
    pub place: usize,
    pub shifts_agree: bool,
    /// The two values overlap as balls.
    pub values_agree: bool,
}

#[derive(Clone, Debug)]
pub struct ShiftReport {
    pub exact_checked: usize,
    pub exact_mismatches: Vec<String>,
    pub points: Vec<ShiftPoint>,
    pub arch: Vec<ArchShiftPoint>,
}

impl ShiftReport {
    pub fn holds(&self) -> bool {
        self.exact_mismatches.is_empty()
            && self.points.iter().all(|p| p.holds)
            && self.arch.iter().all(|a| a.shifts_agree && a.values_agree)
    }
}

/// Compares `L(s, Pi(f))` with `L(s + (k0-1)/2, f)`: coefficientwise and exactly, numerically
/// on `grid`, and on the archimedean factors.
pub fn shift_relation_check(
    k: &TotallyRealField,
    f: &HilbertNewformData,
    grid: &[Complex],
    b: u64,
    prec: u32,
) -> Result<ShiftReport> {
    let k0 = f.k0();
    let classical = completed_classical(k, f, b)?;
    let unitary = completed_unitary(k, f, b)?;
    let mut exact_mismatches = Vec::new();
    let mut exact_checked = 0;
    for (u, c) in unitary.series.terms.iter().zip(&classical.series.terms) {
        exact_checked += 1;
        let lhs = unitary.series.exact_coefficient(&u.ideal).unwrap();
        let rhs = HalfPow::monomial(&c.value, 1 - k0, c.norm as i64);
        if u.ideal != c.ideal || lhs != rhs {
            exact_mismatches.push(k.ideal_label(&u.ideal)?);
        }
    }
    let shift = qr(k0 - 1, 2);
    let wp = prec + 16;
    let mut points = Vec::new();
    let mut arch = Vec::new();
    for s in grid {
        let s = s.with_prec(wp);
        let s_cl = &s + &Complex::from_q(&shift, &Q::zero(), wp);
        let lu = evaluate_finite_l(&unitary.series, &s, b, prec)?;
        let lc = evaluate_finite_l(&classical.series, &s_cl, b, prec)?;
        let diff = &lu.partial - &lc.partial;
        let d = diff.re.abs_upper_q() + diff.im.abs_upper_q();
        let combined = &lu.tail_bound + &lc.tail_bound;
        points.push(ShiftPoint { s: s.clone(), holds: d <= combined, discrepancy: d, combined_tail: combined, unitary: lu, classical: lc });
        for (j, (fu, fc)) in unitary.arch.iter().zip(&classical.arch).enumerate() {
            let shifts_agree = fu.shift == &fc.shift + &shift && fu.with_two == fc.with_two;
            let vu = fu.eval(&s, prec)?;
            let vc = fc.eval(&s_cl, prec)?;
            let values_agree = (&vu - &vc).contains_zero();
            arch.push(ArchShiftPoint { s: s.clone(), place: j, shifts_agree, values_agree });
        }
    }
    Ok(ShiftReport { exact_checked, exact_mismatches, points, arch })
}

/// Critical integers in both normalizations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalSet {
    /// Integers `m` with `(k0 - k^0)/2 < m < (k0 + k^0)/2`.
    pub classical: Vec<i64>,
    /// Values `m'` with `s = 1/2 + m'` critical for `L(s, Pi)`; half-integers when the weights are odd.
    pub cohomological: Vec<Q>,
    pub k0: i64,
}

impl CriticalSet {
    pub fn contains_cohomological(&self, m: &Q) -> bool {
        self.cohomological.contains(m)
    }
}

/// Critical points from the classical strict inequalities and from the weight box of the
/// cohomological weight, checked against each other under `m = m' + k0/2`.
pub fn critical_points(weights: &[i64]) -> Result<CriticalSet> {
    if weights.is_empty() || weights.iter().any(|w| (w - weights[0]) % 2 != 0) {
        return Err(Error::ParityViolation);
    }
    let k0 = *weights.iter().max().unwrap();
    let kmin = *weights.iter().min().unwrap();
    // 2m ranges over (k0 - kmin, k0 + kmin)
    let classical: Vec<i64> = ((k0 - kmin) / 2..=(k0 + kmin) / 2 + 1)
        .filter(|&m| k0 - kmin < 2 * m && 2 * m < k0 + kmin)
        .collect();
    let cohomological: Vec<Q> = if weights.iter().any(|&w| w < 2) {
        Vec::new()
    } else if k0 % 2 == 0 {
        weight_box(&cohomological_weight(weights, false)?.pairs).into_iter().map(qi).collect()
    } else {
        // boxes of the k0/2 twist, moved back by k0/2
        weight_box(&cohomological_weight(weights, true)?.pairs).into_iter().map(|m| qi(m) + qr(k0, 2)).collect()
    };
    let back: Vec<Q> = classical.iter().map(|&m| qi(m) - qr(k0, 2)).collect();
    if back != cohomological {
        return Err(Error::InvariantViolation(format!("critical sets disagree for weights {weights:?}")));
    }
    Ok(CriticalSet { classical, cohomological, k0 })
}

/// Integers `m` with `-a_j <= m <= -b_j` for all `j`.
pub fn weight_box(pairs: &[(i64, i64)]) -> Vec<i64> {
    let lo = pairs.iter().map(|(a, _)| -a).max().unwrap_or(0);
    let hi = pairs.iter().map(|(_, b)| -b).min().unwrap_or(-1);
    (lo..=hi).collect()
}

#[derive(Clone, Debug)]
pub struct CriticalValueReport {
    /// The cohomological point `m'`; the value is taken at `s = 1/2 + m'`.
    pub m: i64,
    /// The matching classical point `m' + k0/2`.
    pub classical_point: i64,
    /// `None` when the point lies outside the region of absolute convergence.
    pub value: Option<LValue>,
    pub out_of_reach: bool,
    pub d_inf: i64,
    /// Exponent `d_inf + n m'` of `2 pi i`.
    pub two_pi_i_exponent: i64,
    pub gauss_sum: Complex,
    /// `(2 pi i)^{d_inf + n m'} G(chi) period`.
    pub divisor: Complex,
    pub ratio: Option<Complex>,
    /// `(-1)^{m'} eps_chi`, the sign of the period to pair with.
    pub signature: Vec<i32>,
}

/// `L(1/2 + m', Pi (x) chi) / ((2 pi i)^{d_inf + n m'} G(chi) period)` for even weights.
pub fn normalized_critical_value(
    k: &TotallyRealField,
    f: &HilbertNewformData,
    chi: &HeckeCharacter,
    m: i64,
    period: &Complex,
    b: u64,
    prec: u32,
) -> Result<CriticalValueReport> {
    let crit = critical_points(&f.weights)?;
    if !crit.contains_cohomological(&qi(m)) || f.k0() % 2 != 0 {
        return Err(Error::NotCritical(format!("m = {m} for weights {:?}", f.weights)));
    }
    let n = f.weights.len() as i64;
    let k0 = f.k0();
    let consts = archimedean_constants(&cohomological_weight(&f.weights, false)?)?;
    let exponent = consts.d_inf + n * m;
    let wp = prec + 32;
    let g = gauss_sum(k, chi, wp)?.value;
    let two_pi_i = Complex::new(Real::zero(wp), Real::pi(wp).mul_i64(2));
    let mut tp = Complex::one(wp);
    for _ in 0..exponent.unsigned_abs() {
        tp = &tp * &two_pi_i;
    }
    if exponent < 0 {
        tp = tp.recip().ok_or(Error::InvariantViolation("zero power of 2 pi i".into()))?;
    }
    let divisor = &(&tp * &g) * &period.with_prec(wp);
    let sign = if m.rem_euclid(2) == 1 { -1 } else { 1 };
    let signature = chi.signature().iter().map(|e| e * sign).collect();
    let series = twist_series(k, &coefficients_from_euler(k, f, b)?, chi)?;
    // L(1/2 + m', Pi (x) chi) = L(m' + k0/2, f, chi)
    let s = Complex::from_q(&qi(m + k0 / 2), &Q::zero(), wp);
    let model = TailModel::default();
    let reachable = qi(m + k0 / 2) > model.abscissa(&series);
    let (value, ratio) = if reachable {
        let v = evaluate_finite_l(&series, &s, b, prec)?;
        let r = v.value.div(&divisor).map(|x| x.with_prec(prec + 16));
        (Some(v), r)
    } else {
        (None, None)
    };
    Ok(CriticalValueReport {
        m,
        classical_point: m + k0 / 2,
        value,
        out_of_reach: !reachable,
        d_inf: consts.d_inf,
        two_pi_i_exponent: exponent,
        gauss_sum: g.with_prec(prec + 16),
        divisor: divisor.with_prec(prec + 16),
        ratio,
        signature,
    })
}

/// Ratios for a list of conjugate data `(f^sigma, chi^sigma, period^sigma)`, for inspection by the caller.
pub fn critical_value_orbit(
    k: &TotallyRealField,
    orbit: &[(HilbertNewformData, HeckeCharacter, Complex)],
    m: i64,
    b: u64,
    prec: u32,
) -> Result<Vec<CriticalValueReport>> {
    orbit.iter().map(|(f, chi, p)| normalized_critical_value(k, f, chi, m, p, b, prec)).collect()
}

/// A symbolic instance of `p^{eps}(Pi (x) xi) ~ G(xi0) p^{eps eps_xi}(Pi)` for `xi = |.|^m xi0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodRelation {
    pub twist_exponent: i64,
    pub lhs_sign: Vec<i32>,
    pub rhs_sign: Vec<i32>,
    pub gauss_factor: bool,
    /// `sum_j (k0 - k_j)/2` relating `p^{+..+}(Pi)` to the classical period, for even weights.
    pub classical_exponent: Option<i64>,
    pub identity: bool,
}

fn sign_text(s: &[i32]) -> String {
    let parts: Vec<&str> = s.iter().map(|&e| if e > 0 { "+" } else { "-" }).collect();
    format!("({})", parts.join(","))
}

impl PeriodRelation {
    pub fn to_text(&self) -> String {
        let twist = match (self.gauss_factor, self.twist_exponent) {
            (false, 0) => String::from("Pi"),
            (false, m) => format!("Pi x |.|^{m}"),
            (true, 0) => String::from("Pi x xi0"),
            (true, m) => format!("Pi x xi0|.|^{m}"),
        };
        let rel = if self.gauss_factor { "~" } else { "=" };
        let g = if self.gauss_factor { "G(xi0) " } else { "" };
        let mut s = format!("p^{}({twist}) {rel} {g}p^{}(Pi)", sign_text(&self.lhs_sign), sign_text(&self.rhs_sign));
        if let Some(e) = self.classical_exponent {
            let plus = sign_text(&vec![1; self.lhs_sign.len()]);
            s += &format!("; p^{plus}(Pi) ~ (2 pi i)^{e} u^{plus}(f)");
        }
        s
    }
}

pub fn period_relation(weights: &[i64], eps: &[i32], xi0: Option<&HeckeCharacter>, m: i64) -> Result<PeriodRelation> {
    if eps.len() != weights.len() || eps.iter().any(|e| e.abs() != 1) {
        return Err(Error::InvalidInput("signature must be a vector of +-1 of length n".into()));
    }
    let sign = if m.rem_euclid(2) == 1 { -1 } else { 1 };
    let finite: Vec<i32> = match xi0 {
        Some(x) => x.signature().to_vec(),
        None => vec![1; eps.len()],
    };
    let gauss_factor = xi0.map_or(false, |x| !x.is_trivial());
    let rhs: Vec<i32> = eps.iter().zip(&finite).map(|(e, x)| e * x * sign).collect();
    let k0 = *weights.iter().max().unwrap();
    let classical_exponent =
        if weights.iter().all(|w| w % 2 == 0) { Some(weights.iter().map(|w| (k0 - w) / 2).sum()) } else { None };
    Ok(PeriodRelation {
        twist_exponent: m,
        identity: m == 0 && !gauss_factor,
        lhs_sign: eps.to_vec(),
        rhs_sign: rhs,
        gauss_factor,
        classical_exponent,
    })
}

/// Discrete series components `D_{k_j - 1}` for a weight vector; weight one maps to `D_1`'s limit and is rejected.
pub fn arch_components(weights: &[i64]) -> Result<Vec<ArchLocalRep>> {
    weights.iter().map(|&k| ArchLocalRep::from_weight(k)).collect()
}
