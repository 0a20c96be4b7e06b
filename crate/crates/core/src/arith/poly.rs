//! Dense univariate polynomials over the rationals, with Sturm-sequence root isolation.

use super::{qi, Q};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Coefficients in ascending order, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPoly {
    c: Vec<Q>,
}

impl QPoly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        QPoly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        QPoly::new(c.iter().map(|&x| qi(x)).collect())
    }

    pub fn from_bigints(c: &[BigInt]) -> Self {
        QPoly::new(c.iter().map(|x| Q::from_integer(x.clone())).collect())
    }

    pub fn zero() -> Self {
        QPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(Q::one())
    }

    pub fn x() -> Self {
        QPoly::new(alloc::vec![Q::zero(), Q::one()])
    }

    pub fn constant(a: Q) -> Self {
        QPoly::new(alloc::vec![a])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.c.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.c.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.c.len().max(o.c.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.c.len().max(o.c.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> QPoly {
        QPoly::new(self.c.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, a: &Q) -> QPoly {
        QPoly::new(self.c.iter().map(|x| x * a).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut r = alloc::vec![Q::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        QPoly::new(r)
    }

    pub fn shift(&self, k: usize) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut c = alloc::vec![Q::zero(); k];
        c.extend(self.c.iter().cloned());
        QPoly::new(c)
    }

    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut q = alloc::vec![Q::zero(); r.len() - dd];
        let inv = d.lead().recip();
        for i in (0..q.len()).rev() {
            let t = &r[i + dd] * &inv;
            if !t.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    r[i + j] -= &t * b;
                }
            }
            q[i] = t;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.divrem(d).1
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        self.scale(&self.lead().recip())
    }

    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn xgcd(&self, o: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lead().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * qi(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.c.iter().rev().fold(Q::zero(), |acc, a| acc * x + a)
    }

    /// Evaluates `self` at another polynomial.
    pub fn compose(&self, g: &QPoly) -> QPoly {
        self.c
            .iter()
            .rev()
            .fold(QPoly::zero(), |acc, a| acc.mul(g).add(&QPoly::constant(a.clone())))
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    pub fn is_integral_monic(&self) -> bool {
        self.lead().is_one() && self.c.iter().all(|a| a.denom().is_one())
    }

    /// Integer coefficients when every coefficient is integral.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.c
            .iter()
            .map(|a| if a.denom().is_one() { Some(a.numer().clone()) } else { None })
            .collect()
    }

    /// Determinant of the Sylvester matrix.
    pub fn resultant(&self, o: &QPoly) -> Q {
        let (m, n) = match (self.degree(), o.degree()) {
            (Some(m), Some(n)) => (m, n),
            _ => return Q::zero(),
        };
        if m == 0 && n == 0 {
            return Q::one();
        }
        let size = m + n;
        let mut mat = alloc::vec![alloc::vec![Q::zero(); size]; size];
        for i in 0..n {
            for j in 0..=m {
                mat[i][i + j] = self.c[m - j].clone();
            }
        }
        for i in 0..m {
            for j in 0..=n {
                mat[n + i][i + j] = o.c[n - j].clone();
            }
        }
        super::linalg::det_q(mat)
    }

    pub fn discriminant(&self) -> Q {
        let n = self.degree().unwrap_or(0);
        let r = self.resultant(&self.derivative()) / self.lead();
        if (n * (n.saturating_sub(1)) / 2) % 2 == 1 {
            -r
        } else {
            r
        }
    }

    /// Upper bound on the absolute value of every complex root.
    pub fn root_bound(&self) -> Q {
        let lc = self.lead().abs();
        let m = self.c[..self.c.len() - 1]
            .iter()
            .map(|a| a.abs() / &lc)
            .fold(Q::zero(), |acc, x| if x > acc { x } else { acc });
        m + Q::one()
    }

    fn sturm_chain(&self) -> Vec<QPoly> {
        let mut chain = alloc::vec![self.clone(), self.derivative()];
        loop {
            let k = chain.len();
            if chain[k - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[k - 2].rem(&chain[k - 1]).neg();
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        chain
    }

    fn sign_changes(chain: &[QPoly], x: &Q) -> usize {
        let mut last = 0i32;
        let mut changes = 0;
        for p in chain {
            let v = p.eval(x);
            let s = sign_q(&v);
            if s != 0 {
                if last != 0 && s != last {
                    changes += 1;
                }
                last = s;
            }
        }
        changes
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        let b = self.root_bound();
        let chain = self.sturm_chain();
        QPoly::sign_changes(&chain, &-b.clone()) - QPoly::sign_changes(&chain, &b)
    }

    /// Number of distinct roots in the open interval `(a, b)`; `a` and `b` must not be roots.
    pub fn count_roots_between(&self, a: &Q, b: &Q) -> usize {
        let chain = self.sturm_chain();
        QPoly::sign_changes(&chain, a) - QPoly::sign_changes(&chain, b)
    }

    /// Isolating intervals for the real roots of a squarefree polynomial, ascending.
    /// Rational roots met during bisection come back as degenerate intervals.
    pub fn isolate_real_roots(&self) -> Vec<RootInterval> {
        let chain = self.sturm_chain();
        let count = |a: &Q, b: &Q| QPoly::sign_changes(&chain, a) - QPoly::sign_changes(&chain, b);
        let b = self.root_bound();
        let mut out = Vec::new();
        let mut stack = alloc::vec![(-b.clone(), b)];
        while let Some((a, b)) = stack.pop() {
            match count(&a, &b) {
                0 => {}
                1 => out.push(RootInterval { lo: a, hi: b }),
                _ => {
                    let mid = (&a + &b) / qi(2);
                    if !self.eval(&mid).is_zero() {
                        stack.push((a, mid.clone()));
                        stack.push((mid, b));
                        continue;
                    }
                    out.push(RootInterval { lo: mid.clone(), hi: mid.clone() });
                    let mut delta = (&b - &a) / qi(4);
                    loop {
                        let l = &mid - &delta;
                        let r = &mid + &delta;
                        if !self.eval(&l).is_zero() && !self.eval(&r).is_zero() && count(&l, &r) == 1 {
                            stack.push((a, l));
                            stack.push((r, b));
                            break;
                        }
                        delta = delta / qi(2);
                    }
                }
            }
        }
        out.sort_by(|x, y| x.lo.cmp(&y.lo));
        out
    }
}

pub fn sign_q(x: &Q) -> i32 {
    match x.cmp(&Q::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

/// A closed rational interval containing exactly one root of some squarefree polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Q,
    pub hi: Q,
}

impl RootInterval {
    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    /// Halves the interval around the root of `p` (which must change sign across it).
    pub fn bisect(&mut self, p: &QPoly) {
        if self.lo == self.hi {
            return;
        }
        let mid = (&self.lo + &self.hi) / qi(2);
        let vm = p.eval(&mid);
        if vm.is_zero() {
            self.lo = mid.clone();
            self.hi = mid;
            return;
        }
        let vl = p.eval(&self.lo);
        if vl.is_zero() {
            self.hi = self.lo.clone();
        } else if sign_q(&vl) != sign_q(&vm) {
            self.hi = mid;
        } else {
            self.lo = mid;
        }
    }

    pub fn refine_to(&mut self, p: &QPoly, width: &Q) {
        while &self.width() > width {
            self.bisect(p);
        }
    }
}

/// Range of `g` over the interval, by naive interval Horner evaluation.
pub fn eval_interval(g: &QPoly, iv: &RootInterval) -> (Q, Q) {
    let mut lo = Q::zero();
    let mut hi = Q::zero();
    for a in g.coeffs().iter().rev() {
        let cands = [&lo * &iv.lo, &lo * &iv.hi, &hi * &iv.lo, &hi * &iv.hi];
        let mut mn = cands[0].clone();
        let mut mx = cands[0].clone();
        for c in &cands[1..] {
            if c < &mn {
                mn = c.clone();
            }
            if c > &mx {
                mx = c.clone();
            }
        }
        lo = mn + a;
        hi = mx + a;
    }
    (lo, hi)
}

/// Exact sign of `g` at the root of `p` isolated by `iv`; refines `iv` as needed.
/// Returns 0 only when `g` vanishes at the root.
pub fn sign_at_root(g: &QPoly, p: &QPoly, iv: &mut RootInterval) -> i32 {
    if iv.lo == iv.hi {
        return sign_q(&g.eval(&iv.lo));
    }
    let h = g.gcd(p);
    if h.is_zero() || (h.degree() != Some(0) && h.count_roots_between(&iv.lo, &iv.hi) > 0) {
        return 0;
    }
    loop {
        let (lo, hi) = eval_interval(g, iv);
        if lo > Q::zero() {
            return 1;
        }
        if hi < Q::zero() {
            return -1;
        }
        iv.bisect(p);
        if iv.lo == iv.hi {
            return sign_q(&g.eval(&iv.lo));
        }
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let abs = a.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !abs.is_one();
            if show_coeff {
                write!(f, "{}", abs)?;
                if i > 0 {
                    write!(f, "*")?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{}", i)?,
            }
        }
        Ok(())
    }
}
