//! Fixed-point ball arithmetic over big integers.
//!
//! A [`Real`] is `mid * 2^-prec` with absolute error at most `rad * 2^-prec`.
//! Every operation returns a ball that contains the exact result for every
//! choice of inputs inside the argument balls.

use super::{binomial, Q};
use alloc::string::String;
use alloc::vec::Vec;
use alloc::format;
use core::ops::{Add, Mul, Neg, Sub};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Extra bits carried inside elementary functions.
const GUARD: u32 = 48;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Real {
    mid: BigInt,
    rad: BigUint,
    prec: u32,
}

fn shr_round(m: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return m.clone();
    }
    (m + (BigInt::one() << (k - 1))) >> k
}

fn shr_ceil(r: &BigUint, k: u32) -> BigUint {
    if k == 0 {
        return r.clone();
    }
    (r + ((BigUint::one() << k) - BigUint::one())) >> k
}

fn abs_u(m: &BigInt) -> BigUint {
    m.magnitude().clone()
}

fn div_ceil_u(a: &BigUint, b: &BigUint) -> BigUint {
    let (q, r) = a.div_rem(b);
    if r.is_zero() {
        q
    } else {
        q + 1u32
    }
}

impl Real {
    pub fn from_parts(mid: BigInt, rad: BigUint, prec: u32) -> Self {
        Real { mid, rad, prec }
    }

    pub fn zero(prec: u32) -> Self {
        Real { mid: BigInt::zero(), rad: BigUint::zero(), prec }
    }

    pub fn one(prec: u32) -> Self {
        Real::from_i64(1, prec)
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Real { mid: BigInt::from(n) << prec, rad: BigUint::zero(), prec }
    }

    pub fn from_bigint(n: &BigInt, prec: u32) -> Self {
        Real { mid: n << prec, rad: BigUint::zero(), prec }
    }

    pub fn from_q(x: &Q, prec: u32) -> Self {
        let num = x.numer() << prec;
        let (q, r) = num.div_mod_floor(x.denom());
        if r.is_zero() {
            return Real { mid: q, rad: BigUint::zero(), prec };
        }
        Real { mid: q, rad: BigUint::one(), prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// The midpoint as an exact ball.
    pub fn mid(&self) -> Real {
        Real { mid: self.mid.clone(), rad: BigUint::zero(), prec: self.prec }
    }

    pub fn mid_raw(&self) -> &BigInt {
        &self.mid
    }

    pub fn rad_raw(&self) -> &BigUint {
        &self.rad
    }

    fn scale(&self) -> BigInt {
        BigInt::one() << self.prec
    }

    pub fn mid_q(&self) -> Q {
        Q::new(self.mid.clone(), self.scale())
    }

    pub fn rad_q(&self) -> Q {
        Q::new(BigInt::from(self.rad.clone()), self.scale())
    }

    pub fn lower_q(&self) -> Q {
        self.mid_q() - self.rad_q()
    }

    pub fn upper_q(&self) -> Q {
        self.mid_q() + self.rad_q()
    }

    /// Upper bound on the absolute value.
    pub fn abs_upper_q(&self) -> Q {
        Q::new(BigInt::from(abs_u(&self.mid) + &self.rad), self.scale())
    }

    /// Lower bound on the absolute value (zero if the ball touches zero).
    pub fn abs_lower_q(&self) -> Q {
        let m = abs_u(&self.mid);
        if m <= self.rad {
            Q::zero()
        } else {
            Q::new(BigInt::from(m - &self.rad), self.scale())
        }
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        abs_u(&self.mid) <= self.rad
    }

    pub fn is_positive(&self) -> bool {
        self.mid.is_positive() && abs_u(&self.mid) > self.rad
    }

    pub fn is_negative(&self) -> bool {
        self.mid.is_negative() && abs_u(&self.mid) > self.rad
    }

    pub fn contains_q(&self, x: &Q) -> bool {
        &self.lower_q() <= x && x <= &self.upper_q()
    }

    /// Changes the working precision; lowering it rounds and widens the radius.
    pub fn with_prec(&self, prec: u32) -> Real {
        if prec >= self.prec {
            let k = prec - self.prec;
            Real { mid: &self.mid << k, rad: &self.rad << k, prec }
        } else {
            let k = self.prec - prec;
            Real { mid: shr_round(&self.mid, k), rad: shr_ceil(&self.rad, k) + 1u32, prec }
        }
    }

    fn aligned(a: &Real, b: &Real) -> (Real, Real) {
        let p = a.prec.max(b.prec);
        (a.with_prec(p), b.with_prec(p))
    }

    /// Widens the radius by an absolute amount.
    pub fn add_error(&self, e: &Q) -> Real {
        let e = e.abs() * Q::from_integer(self.scale());
        let up = e.ceil().to_integer();
        let mut r = self.clone();
        r.rad += up.to_biguint().unwrap_or_default();
        r
    }

    pub fn neg_ball(&self) -> Real {
        Real { mid: -&self.mid, rad: self.rad.clone(), prec: self.prec }
    }

    pub fn abs(&self) -> Real {
        if self.mid.is_negative() {
            self.neg_ball()
        } else {
            self.clone()
        }
    }

    pub fn mul_i64(&self, k: i64) -> Real {
        Real {
            mid: &self.mid * k,
            rad: &self.rad * k.unsigned_abs(),
            prec: self.prec,
        }
    }

    pub fn mul_bigint(&self, k: &BigInt) -> Real {
        Real { mid: &self.mid * k, rad: &self.rad * abs_u(k), prec: self.prec }
    }

    pub fn div_i64(&self, k: i64) -> Real {
        assert!(k != 0);
        let q = (&self.mid * k.signum()).div_floor(&BigInt::from(k.unsigned_abs()));
        Real {
            mid: q,
            rad: div_ceil_u(&self.rad, &BigUint::from(k.unsigned_abs())) + 1u32,
            prec: self.prec,
        }
    }

    /// Multiplication by `2^k` (`k` may be negative).
    pub fn mul_pow2(&self, k: i32) -> Real {
        if k >= 0 {
            Real { mid: &self.mid << k as u32, rad: &self.rad << k as u32, prec: self.prec }
        } else {
            let k = (-k) as u32;
            Real { mid: shr_round(&self.mid, k), rad: shr_ceil(&self.rad, k) + 1u32, prec: self.prec }
        }
    }

    pub fn mul_q(&self, q: &Q) -> Real {
        self.mul_bigint(q.numer()).div_bigint(q.denom())
    }

    pub fn div_bigint(&self, d: &BigInt) -> Real {
        assert!(!d.is_zero());
        let s = if d.is_negative() { -BigInt::one() } else { BigInt::one() };
        let du = abs_u(d);
        Real {
            mid: (&self.mid * s).div_floor(&BigInt::from(du.clone())),
            rad: div_ceil_u(&self.rad, &du) + 1u32,
            prec: self.prec,
        }
    }

    /// Division; `None` when the divisor ball contains zero.
    pub fn div(&self, o: &Real) -> Option<Real> {
        let (a, b) = Real::aligned(self, o);
        if b.contains_zero() {
            return None;
        }
        let p = a.prec;
        let m2 = abs_u(&b.mid);
        let q = (&a.mid << p).div_floor(&b.mid);
        let num = (abs_u(&a.mid) * &b.rad + &m2 * &a.rad) << p;
        let den = &m2 * (&m2 - &b.rad);
        Some(Real { mid: q, rad: div_ceil_u(&num, &den) + 1u32, prec: p })
    }

    pub fn recip(&self) -> Option<Real> {
        Real::one(self.prec).div(self)
    }

    pub fn sqr(&self) -> Real {
        self * self
    }

    /// Square root; `None` if the ball is entirely negative.
    pub fn sqrt(&self) -> Option<Real> {
        let p = self.prec;
        if self.mid.is_negative() && abs_u(&self.mid) > self.rad {
            return None;
        }
        let m = abs_u(&self.mid);
        if self.mid.is_negative() || m <= self.rad {
            // ball touches zero: enclose [0, sqrt(upper)]
            let up = (&self.mid + BigInt::from(self.rad.clone())).max(BigInt::zero());
            let s = (abs_u(&up) << p).sqrt() + 1u32;
            let half = &s >> 1u32;
            return Some(Real { mid: BigInt::from(half.clone()), rad: s - half + 1u32, prec: p });
        }
        let s = (&m << p).sqrt();
        let low = ((&m - &self.rad) << p).sqrt();
        let prop = if self.rad.is_zero() {
            BigUint::zero()
        } else if low.is_zero() {
            &s + 1u32
        } else {
            div_ceil_u(&(&self.rad << p), &low)
        };
        Some(Real { mid: BigInt::from(s), rad: prop + 1u32, prec: p })
    }

    /// Upper bound `e` with `|x| < 2^e`.
    pub fn mag_bits(&self) -> i64 {
        (abs_u(&self.mid) + &self.rad).bits() as i64 - self.prec as i64
    }

    fn err_ulp(&self) -> Real {
        Real { mid: self.mid.clone(), rad: &self.rad + 1u32, prec: self.prec }
    }

    /// pi by Machin's formula.
    pub fn pi(prec: u32) -> Real {
        let wp = prec + GUARD;
        let a = atan_inv(5, wp).mul_i64(16);
        let b = atan_inv(239, wp).mul_i64(4);
        (&a - &b).with_prec(prec)
    }

    pub fn ln2(prec: u32) -> Real {
        let wp = prec + GUARD;
        atanh_small(&Real::from_q(&Q::new(BigInt::one(), BigInt::from(3)), wp)).mul_i64(2).with_prec(prec)
    }

    pub fn exp(&self) -> Real {
        let p = self.prec;
        let bits = self.mag_bits().max(0) as u32;
        let k = bits + 8;
        let wp = p + GUARD + 2 * k;
        let y = self.with_prec(wp).mul_pow2(-(k as i32));
        // |y| < 2^-8 so the tail after n terms is below 2 |y|^{n+1}
        let mut sum = Real::one(wp);
        let mut term = Real::one(wp);
        let mut n = 1i64;
        loop {
            term = (&term * &y).div_i64(n);
            sum = &sum + &term;
            if 8 * (n + 1) > wp as i64 + 2 {
                break;
            }
            n += 1;
        }
        let mut r = sum.err_ulp().err_ulp();
        for _ in 0..k {
            r = r.sqr();
        }
        r.with_prec(p)
    }

    /// Natural logarithm; `None` unless the ball is strictly positive.
    pub fn ln(&self) -> Option<Real> {
        if !self.is_positive() {
            return None;
        }
        let p = self.prec;
        let wp = p + GUARD + 16;
        let x = self.with_prec(wp);
        let t = abs_u(&x.mid).bits() as i64 - 1 - wp as i64;
        let y = x.mul_pow2(-(t as i32));
        let one = Real::one(wp);
        let z = (&y - &one).div(&(&y + &one))?;
        let lny = atanh_small(&z).mul_i64(2);
        let r = &lny + &Real::ln2(wp).mul_i64(t);
        Some(r.with_prec(p))
    }

    /// `(sin x, cos x)`.
    pub fn sin_cos(&self) -> (Real, Real) {
        let p = self.prec;
        let bits = self.mag_bits().max(0) as u32;
        let wp = p + GUARD + bits + 24;
        let x = self.with_prec(wp);
        let two_pi = Real::pi(wp).mul_i64(2);
        let n = shr_round(&((&x.mid << wp).div_floor(&two_pi.mid)), wp);
        let r = &x - &two_pi.mul_bigint(&n);
        let k = 10u32;
        let y = r.mul_pow2(-(k as i32));
        // |y| < 2^-7: Taylor with alternating tail bounded by the next term
        let y2 = y.sqr();
        let mut s = y.clone();
        let mut c = Real::one(wp);
        let mut ts = y.clone();
        let mut tc = Real::one(wp);
        let mut n = 1i64;
        loop {
            tc = (&tc * &y2).div_i64((2 * n - 1) * (2 * n)).neg_ball();
            ts = (&ts * &y2).div_i64((2 * n) * (2 * n + 1)).neg_ball();
            c = &c + &tc;
            s = &s + &ts;
            if 7 * (2 * n + 1) > wp as i64 + 4 {
                break;
            }
            n += 1;
        }
        s = s.err_ulp();
        c = c.err_ulp();
        let one = Real::one(wp);
        for _ in 0..k {
            let s2 = (&s * &c).mul_i64(2);
            let c2 = &(&c.sqr()).mul_i64(2) - &one;
            s = s2;
            c = c2;
        }
        (s.with_prec(p), c.with_prec(p))
    }

    pub fn atan(&self) -> Real {
        let p = self.prec;
        let wp = p + GUARD + 16;
        let x = self.with_prec(wp);
        let one = Real::one(wp);
        if x.abs_lower_q() > Q::one() {
            // atan x = sign(x) pi/2 - atan(1/x)
            let inv = x.recip().expect("nonzero");
            let half_pi = Real::pi(wp).mul_pow2(-1);
            let base = if x.is_positive() { half_pi } else { half_pi.neg_ball() };
            return (&base - &inv.atan()).with_prec(p);
        }
        // halve the argument: atan x = 2 atan(x / (1 + sqrt(1 + x^2)))
        let mut y = x;
        let mut doublings = 0;
        while y.mag_bits() > -8 {
            let d = &one + &(&one + &y.sqr()).sqrt().expect("positive");
            y = y.div(&d).expect("positive");
            doublings += 1;
        }
        atan_series(&y).mul_pow2(doublings).with_prec(p)
    }

    pub fn to_f64(&self) -> f64 {
        let m = self.mid.to_f64().unwrap_or(0.0);
        m * pow2_f64(-(self.prec as i32))
    }

    /// Decimal expansion of the midpoint with `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let ten = BigInt::from(10u32).pow(digits as u32);
        let scaled = shr_round(&(&self.mid * &ten), self.prec);
        let neg = scaled.is_negative();
        let s = scaled.abs().to_str_radix(10);
        let s = if s.len() <= digits {
            let mut z = String::new();
            for _ in 0..(digits + 1 - s.len()) {
                z.push('0');
            }
            z + &s
        } else {
            s
        };
        let (ip, fp) = s.split_at(s.len() - digits);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{ip}")
        } else {
            format!("{sign}{ip}.{fp}")
        }
    }

    /// Radius rounded up to two significant digits, scientific notation.
    pub fn rad_string(&self) -> String {
        upper_sci(&self.rad, self.prec)
    }
}

fn pow2_f64(e: i32) -> f64 {
    if e < -1022 {
        return 0.0;
    }
    f64::from_bits(((e + 1023) as u64) << 52)
}

/// `num * 2^-prec`, rounded up, as `d.de-x`.
pub fn upper_sci(num: &BigUint, prec: u32) -> String {
    if num.is_zero() {
        return String::from("0");
    }
    // find e with 10^e <= x < 10^{e+1}
    let x = Q::new(BigInt::from(num.clone()), BigInt::one() << prec);
    let ten = Q::from_integer(BigInt::from(10));
    let mut e: i64 = ((num.bits() as i64 - prec as i64) * 30103) / 100000;
    let pow10 = |k: i64| -> Q {
        if k >= 0 {
            Q::from_integer(BigInt::from(10u32).pow(k as u32))
        } else {
            Q::new(BigInt::one(), BigInt::from(10u32).pow((-k) as u32))
        }
    };
    while pow10(e) > x {
        e -= 1;
    }
    while pow10(e + 1) <= x {
        e += 1;
    }
    let mant = (&x / pow10(e - 1)).ceil().to_integer();
    let (mant, e) = if mant >= BigInt::from(100) { ((mant + 9) / 10, e + 1) } else { (mant, e) };
    let _ = ten;
    let ms = mant.to_str_radix(10);
    format!("{}.{}e{}", &ms[..1], &ms[1..], e)
}

/// atan(1/k) for an integer k >= 2.
fn atan_inv(k: i64, wp: u32) -> Real {
    let x = Real::one(wp).div_i64(k);
    atan_series(&x)
}

/// Taylor series of atan for |x| <= 1/2, with the alternating tail added to the radius.
fn atan_series(x: &Real) -> Real {
    let wp = x.prec as i64;
    let x2 = x.sqr();
    let e1 = -x.mag_bits();
    let e2 = -x2.mag_bits();
    assert!(e1 >= 1 && e2 >= 1);
    let mut pow = x.clone();
    let mut sum = x.clone();
    let mut n = 1i64;
    loop {
        pow = (&pow * &x2).neg_ball();
        sum = &sum + &pow.div_i64(2 * n + 1);
        n += 1;
        // next term is below 2^-(e1 + n e2)
        if e1 + n * e2 > wp + 1 {
            return sum.err_ulp().err_ulp();
        }
    }
}

/// atanh for |z| <= 1/2.
fn atanh_small(z: &Real) -> Real {
    let wp = z.prec as i64;
    let z2 = z.sqr();
    let e1 = -z.mag_bits();
    let e2 = -z2.mag_bits();
    assert!(e1 >= 1 && e2 >= 2);
    let mut pow = z.clone();
    let mut sum = z.clone();
    let mut n = 1i64;
    loop {
        pow = &pow * &z2;
        sum = &sum + &pow.div_i64(2 * n + 1);
        n += 1;
        // tail <= |z|^{2n+1} / (1 - z^2) <= 2 * 2^-(e1 + n e2)
        if e1 + n * e2 > wp + 2 {
            return sum.err_ulp().err_ulp();
        }
    }
}

impl Add for &Real {
    type Output = Real;
    fn add(self, o: &Real) -> Real {
        let (a, b) = Real::aligned(self, o);
        Real { mid: a.mid + b.mid, rad: a.rad + b.rad, prec: a.prec }
    }
}

impl Sub for &Real {
    type Output = Real;
    fn sub(self, o: &Real) -> Real {
        let (a, b) = Real::aligned(self, o);
        Real { mid: a.mid - b.mid, rad: a.rad + b.rad, prec: a.prec }
    }
}

impl Real {
    pub fn sub(&self, o: &Real) -> Real {
        self - o
    }
}

impl Mul for &Real {
    type Output = Real;
    fn mul(self, o: &Real) -> Real {
        let (a, b) = Real::aligned(self, o);
        let p = a.prec;
        let mid = shr_round(&(&a.mid * &b.mid), p);
        let err = abs_u(&a.mid) * &b.rad + abs_u(&b.mid) * &a.rad + &a.rad * &b.rad;
        let exact_product = a.rad.is_zero() && b.rad.is_zero() && {
            let full = &a.mid * &b.mid;
            (&full >> p) << p == full
        };
        let rad = shr_ceil(&err, p) + if exact_product { 0u32 } else { 1u32 };
        Real { mid, rad, prec: p }
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        self.neg_ball()
    }
}

/// Complex ball as a pair of real balls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn from_real(re: Real) -> Self {
        let p = re.prec;
        Complex { re, im: Real::zero(p) }
    }

    pub fn zero(prec: u32) -> Self {
        Complex::from_real(Real::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Complex::from_real(Real::one(prec))
    }

    pub fn i(prec: u32) -> Self {
        Complex { re: Real::zero(prec), im: Real::one(prec) }
    }

    pub fn from_q(re: &Q, im: &Q, prec: u32) -> Self {
        Complex { re: Real::from_q(re, prec), im: Real::from_q(im, prec) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec.max(self.im.prec)
    }

    pub fn with_prec(&self, p: u32) -> Complex {
        Complex { re: self.re.with_prec(p), im: self.im.with_prec(p) }
    }

    pub fn mid(&self) -> Complex {
        Complex { re: self.re.mid(), im: self.im.mid() }
    }

    pub fn conj(&self) -> Complex {
        Complex { re: self.re.clone(), im: self.im.neg_ball() }
    }

    pub fn neg(&self) -> Complex {
        Complex { re: self.re.neg_ball(), im: self.im.neg_ball() }
    }

    pub fn mul_real(&self, r: &Real) -> Complex {
        Complex { re: &self.re * r, im: &self.im * r }
    }

    pub fn mul_q(&self, q: &Q) -> Complex {
        Complex { re: self.re.mul_q(q), im: self.im.mul_q(q) }
    }

    pub fn mul_i64(&self, k: i64) -> Complex {
        Complex { re: self.re.mul_i64(k), im: self.im.mul_i64(k) }
    }

    /// Multiplication by `i^k`.
    pub fn mul_i_pow(&self, k: i64) -> Complex {
        match k.rem_euclid(4) {
            0 => self.clone(),
            1 => Complex { re: self.im.neg_ball(), im: self.re.clone() },
            2 => self.neg(),
            _ => Complex { re: self.im.clone(), im: self.re.neg_ball() },
        }
    }

    pub fn norm_sqr(&self) -> Real {
        &self.re.sqr() + &self.im.sqr()
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt().expect("nonnegative")
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    /// Largest radius of the two parts.
    pub fn rad_q(&self) -> Q {
        let a = self.re.rad_q();
        let b = self.im.rad_q();
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn add_error(&self, e: &Q) -> Complex {
        Complex { re: self.re.add_error(e), im: self.im.add_error(e) }
    }

    pub fn div(&self, o: &Complex) -> Option<Complex> {
        let d = o.norm_sqr();
        let num = self * &o.conj();
        Some(Complex { re: num.re.div(&d)?, im: num.im.div(&d)? })
    }

    pub fn recip(&self) -> Option<Complex> {
        Complex::one(self.prec()).div(self)
    }

    /// `e^{i theta}`.
    pub fn expi(theta: &Real) -> Complex {
        let (s, c) = theta.sin_cos();
        Complex { re: c, im: s }
    }

    /// `e^{2 pi i r}` for rational `r`.
    pub fn root_of_unity(r: &Q, prec: u32) -> Complex {
        let frac = r - r.floor();
        // exact values at quarter turns
        let four = &frac * Q::from_integer(BigInt::from(4));
        if four.is_integer() {
            let k = four.to_integer().to_i64().unwrap_or(0);
            return Complex::one(prec).mul_i_pow(k);
        }
        let wp = prec + 8;
        let theta = Real::pi(wp).mul_i64(2).mul_q(&frac);
        Complex::expi(&theta).with_prec(prec)
    }

    pub fn exp(&self) -> Complex {
        let m = self.re.exp();
        Complex::expi(&self.im).mul_real(&m)
    }

    /// Principal logarithm; `None` if the ball touches zero.
    pub fn ln(&self) -> Option<Complex> {
        if self.contains_zero() {
            return None;
        }
        let m = self.norm_sqr().ln()?.mul_pow2(-1);
        Some(Complex { re: m, im: self.arg()? })
    }

    /// Principal argument in (-pi, pi]; `None` if the ball touches zero or straddles the cut.
    pub fn arg(&self) -> Option<Real> {
        let p = self.prec();
        let (x, y) = (&self.re, &self.im);
        if x.contains_zero() && y.contains_zero() {
            return None;
        }
        let pi = Real::pi(p + 8);
        let r = if x.abs_lower_q() >= y.abs_lower_q() && !x.contains_zero() {
            let base = y.div(x)?.atan();
            if x.is_positive() {
                base
            } else if y.is_negative() {
                &base - &pi
            } else if y.is_positive() || (y.is_exact() && y.mid.is_zero()) {
                &base + &pi
            } else {
                return None;
            }
        } else {
            let base = x.div(y)?.atan();
            let half = pi.mul_pow2(-1);
            if y.is_positive() {
                &half - &base
            } else {
                &half.neg_ball() - &base
            }
        };
        Some(r.with_prec(p))
    }

    /// `self^w` on the principal branch.
    pub fn pow(&self, w: &Complex) -> Option<Complex> {
        Some((&self.ln()? * w).exp())
    }

    pub fn to_string_digits(&self, digits: usize) -> String {
        format!("{} + {}*i", self.re.to_decimal(digits), self.im.to_decimal(digits))
    }
}

impl Add for &Complex {
    type Output = Complex;
    fn add(self, o: &Complex) -> Complex {
        Complex { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &Complex {
    type Output = Complex;
    fn sub(self, o: &Complex) -> Complex {
        Complex { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &Complex {
    type Output = Complex;
    fn mul(self, o: &Complex) -> Complex {
        Complex {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }
}

/// Even-index Bernoulli numbers `B_0, B_2, ..., B_{2k}`.
pub fn bernoulli_even(k: usize) -> Vec<Q> {
    let mut b: Vec<Q> = alloc::vec![Q::one()];
    for i in 1..=k {
        let m = 2 * i as u64;
        // sum_{j<=m} C(m+1, j) B_j = 0 with B_1 = -1/2 and odd B_j = 0 beyond
        let mut s = Q::one() - Q::new(BigInt::from(m + 1), BigInt::from(2));
        for (jj, bj) in b.iter().enumerate().skip(1) {
            s += Q::from_integer(binomial(m + 1, 2 * jj as u64)) * bj;
        }
        b.push(-s / Q::from_integer(BigInt::from(m + 1)));
    }
    b
}

fn pow_q(x: &Q, e: usize) -> Q {
    let mut r = Q::one();
    for _ in 0..e {
        r *= x;
    }
    r
}

fn round_down_q(x: &Q, bits: u32) -> Q {
    let sc = BigInt::one() << bits;
    Q::new((x * Q::from_integer(sc.clone())).floor().to_integer(), sc)
}

fn round_up_q(x: &Q, bits: u32) -> Q {
    let sc = BigInt::one() << bits;
    Q::new((x * Q::from_integer(sc.clone())).ceil().to_integer(), sc)
}

/// Gamma function on complex balls: Stirling's series after an upward shift,
/// with the remainder bound for Re w > 0 added to the radius.
/// `None` if the ball meets a pole.
pub fn gamma(z: &Complex) -> Option<Complex> {
    let p = z.prec();
    let wp = p + GUARD + 16;
    let z = z.with_prec(wp);
    let target = Q::from_integer(BigInt::from((wp as i64) / 7 + 8));
    let re_lo = z.re.lower_q();
    let shift: i64 = if re_lo >= target {
        0
    } else {
        (&target - &re_lo).ceil().to_integer().to_i64()? + 1
    };
    let w = &z + &Complex::from_real(Real::from_i64(shift, wp));
    // Bounds for the remainder: |w| >= wl, sec^2(arg/2) <= 2|w| / (|w| + Re w).
    let w_re_lo = w.re.lower_q();
    let wl = {
        let a = w.re.abs_lower_q();
        let b = w.im.abs_lower_q();
        if a > b {
            a
        } else {
            b
        }
    };
    let wu = w.re.abs_upper_q() + w.im.abs_upper_q();
    let sec2 = Q::from_integer(BigInt::from(2)) * &wu / (&wl + &w_re_lo);
    let eps = Q::new(BigInt::one(), BigInt::one() << wp);
    let wl = round_down_q(&wl, 12);
    let sec2 = round_up_q(&sec2, 12);
    let mut bern = bernoulli_even(16);
    let mut kmax = 1usize;
    let rem = loop {
        let k1 = kmax + 1;
        if bern.len() <= k1 {
            bern = bernoulli_even(2 * bern.len());
        }
        let denom = Q::from_integer(BigInt::from(((2 * k1) * (2 * k1 - 1)) as u64));
        let r = bern[k1].abs() * pow_q(&sec2, k1) / (denom * pow_q(&wl, 2 * k1 - 1));
        if r < eps {
            break r;
        }
        if kmax > 2000 {
            return None;
        }
        kmax += 1;
    };
    let ln_w = w.ln()?;
    let half = Complex::from_q(&Q::new(BigInt::one(), BigInt::from(2)), &Q::zero(), wp);
    let two_pi = Real::pi(wp).mul_i64(2);
    let mut lg = &(&(&w - &half) * &ln_w) - &w;
    lg = &lg + &Complex::from_real(two_pi.ln()?.mul_pow2(-1));
    let winv = w.recip()?;
    let winv2 = &winv * &winv;
    let mut wpow = winv.clone();
    for k in 1..=kmax {
        let c = &bern[k] / Q::from_integer(BigInt::from(((2 * k) * (2 * k - 1)) as u64));
        lg = &lg + &wpow.mul_q(&c);
        wpow = &wpow * &winv2;
    }
    lg = lg.add_error(&rem);
    let mut g = lg.exp();
    let mut den = Complex::one(wp);
    for j in 0..shift {
        den = &den * &(&z + &Complex::from_real(Real::from_i64(j, wp)));
    }
    if shift > 0 {
        g = g.div(&den)?;
    }
    Some(g.with_prec(p))
}

impl Real {
    pub fn sign_of_mid(&self) -> Sign {
        self.mid.sign()
    }
}
