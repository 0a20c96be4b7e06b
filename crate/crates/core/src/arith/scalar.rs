//! Exact scalar rings used for Hecke eigenvalues and local data.

use super::Q;
use core::fmt::Debug;
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Minimal exact field interface.
pub trait Scalar: Clone + PartialEq + Debug {
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn vanishes(&self) -> bool;
    /// Zero in the same field as `self`.
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_q_like(&self, q: &Q) -> Self;
    fn inv(&self) -> Option<Self>;

    fn from_i64_like(&self, n: i64) -> Self {
        self.from_q_like(&Q::from_integer(BigInt::from(n)))
    }

    fn pow_u(&self, mut e: u64) -> Self {
        let mut acc = self.one_like();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    fn pow_i(&self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow_u(e as u64))
        } else {
            Some(self.inv()?.pow_u(e.unsigned_abs()))
        }
    }
}

impl Scalar for Q {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        Q::zero()
    }
    fn one_like(&self) -> Self {
        Q::one()
    }
    fn from_q_like(&self, q: &Q) -> Self {
        q.clone()
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// `a + b Q` with `Q^2 = q`, `Q` a formal square root of the integer `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPow<K> {
    pub a: K,
    pub b: K,
    pub q: i64,
}

impl<K: Scalar> HalfPow<K> {
    pub fn new(a: K, b: K, q: i64) -> Self {
        HalfPow { a, b, q }
    }

    pub fn from_base(a: K, q: i64) -> Self {
        let b = a.zero_like();
        HalfPow { a, b, q }
    }

    /// `c * Q^n`.
    pub fn monomial(c: &K, n: i64, q: i64) -> Self {
        let qk = c.from_i64_like(q);
        let half = n.div_euclid(2);
        let scale = qk.pow_i(half).expect("q nonzero");
        let v = c.mul(&scale);
        if n.rem_euclid(2) == 0 {
            HalfPow::from_base(v, q)
        } else {
            HalfPow { a: c.zero_like(), b: v, q }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.vanishes() && self.b.vanishes()
    }

    /// The base-field value if the `Q` part vanishes.
    pub fn as_base(&self) -> Option<&K> {
        if self.b.vanishes() {
            Some(&self.a)
        } else {
            None
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        HalfPow { a: self.a.add(&o.a), b: self.b.add(&o.b), q: self.q }
    }

    pub fn sub(&self, o: &Self) -> Self {
        HalfPow { a: self.a.sub(&o.a), b: self.b.sub(&o.b), q: self.q }
    }

    pub fn neg(&self) -> Self {
        HalfPow { a: self.a.neg(), b: self.b.neg(), q: self.q }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let q = self.a.from_i64_like(self.q);
        HalfPow {
            a: self.a.mul(&o.a).add(&self.b.mul(&o.b).mul(&q)),
            b: self.a.mul(&o.b).add(&self.b.mul(&o.a)),
            q: self.q,
        }
    }

    pub fn scale(&self, c: &K) -> Self {
        HalfPow { a: self.a.mul(c), b: self.b.mul(c), q: self.q }
    }

    /// Conjugate `a - b Q`.
    pub fn conj(&self) -> Self {
        HalfPow { a: self.a.clone(), b: self.b.neg(), q: self.q }
    }

    pub fn inv(&self) -> Option<Self> {
        let q = self.a.from_i64_like(self.q);
        let n = self.a.mul(&self.a).sub(&self.b.mul(&self.b).mul(&q));
        let ni = n.inv()?;
        Some(self.conj().scale(&ni))
    }

    pub fn pow_u(&self, mut e: u64) -> Self {
        let mut acc = HalfPow::from_base(self.a.one_like(), self.q);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    /// Applies a map to both coordinates (for field automorphisms).
    pub fn map(&self, f: impl Fn(&K) -> K) -> Self {
        HalfPow { a: f(&self.a), b: f(&self.b), q: self.q }
    }
}
