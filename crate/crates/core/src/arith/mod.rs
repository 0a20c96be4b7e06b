//! Integer, rational and polynomial helpers shared by the rest of the crate.

pub mod ball;
pub mod fp;
pub mod linalg;
pub mod poly;
pub mod scalar;

use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qz(n: &BigInt) -> Q {
    Q::from_integer(n.clone())
}

pub fn is_integral(x: &Q) -> bool {
    x.denom().is_one()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a, I: IntoIterator<Item = &'a Q>>(xs: I) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn isqrt_u64(n: u64) -> u64 {
    n.isqrt()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Trial-division factorisation, ascending primes.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Factorisation of a nonzero big integer by trial division; fine for desk-sized discriminants.
pub fn factor_bigint(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2u32);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            let mut e = 0;
            while (&n % &p).is_zero() {
                n /= &p;
                e += 1;
            }
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = alloc::vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i as u64)
        .collect()
}

/// Writes `n = s * m^2` with `s` squarefree (same sign as `n`); returns `(s, m)`.
pub fn squarefree_decomposition(n: &BigInt) -> (BigInt, BigInt) {
    let mut s = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut m = BigInt::one();
    for (p, e) in factor_bigint(n) {
        for _ in 0..e / 2 {
            m *= &p;
        }
        if e % 2 == 1 {
            s *= &p;
        }
    }
    (s, m)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Decomposes a finite abelian group (given by its table, identity 0) as a tower
/// `H_0 < H_1 < ...` where each step adjoins one element. Returns the adjoined
/// elements with their orders modulo the previous subgroup, and for each element
/// its mixed-radix exponents over the tower.
pub fn cyclic_tower(table: &[Vec<usize>], identity: usize) -> (Vec<(usize, u64)>, Vec<Vec<u64>>) {
    let n = table.len();
    let mut in_h = alloc::vec![false; n];
    in_h[identity] = true;
    let mut members = alloc::vec![identity];
    let mut tower = Vec::new();
    while members.len() < n {
        let g = (0..n).find(|&c| !in_h[c]).unwrap();
        let mut d = 1u64;
        let mut x = g;
        while !in_h[x] {
            x = table[x][g];
            d += 1;
        }
        tower.push((g, d));
        let mut next = Vec::new();
        let mut pw = identity;
        for _ in 0..d {
            for &m in &members {
                next.push(table[m][pw]);
            }
            pw = table[pw][g];
        }
        for &c in &next {
            in_h[c] = true;
        }
        members = next;
    }
    let mut exps = alloc::vec![Vec::new(); n];
    let total: u64 = tower.iter().map(|t| t.1).product();
    for idx in 0..total {
        let mut rem = idx;
        let mut e = Vec::with_capacity(tower.len());
        let mut c = identity;
        for &(g, d) in &tower {
            let a = rem % d;
            rem /= d;
            e.push(a);
            for _ in 0..a {
                c = table[c][g];
            }
        }
        exps[c] = e;
    }
    (tower, exps)
}

/// An element of Q/Z, read as the root of unity e^{2 pi i r}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Unity {
    num: i64,
    den: i64,
}

impl Unity {
    pub const ONE: Unity = Unity { num: 0, den: 1 };

    pub fn new(num: i64, den: i64) -> Self {
        assert!(den > 0, "root of unity needs a positive order");
        let num = num.rem_euclid(den);
        let g = num.gcd(&den);
        Unity { num: num / g, den: den / g }
    }

    pub fn minus_one() -> Self {
        Unity::new(1, 2)
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    /// Exact multiplicative order.
    pub fn order(&self) -> i64 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    /// `Some(+1)` or `Some(-1)` for real values.
    pub fn sign(&self) -> Option<i32> {
        match self.den {
            1 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn mul(&self, o: &Unity) -> Unity {
        let l = self.den.lcm(&o.den);
        Unity::new(self.num * (l / self.den) + o.num * (l / o.den), l)
    }

    pub fn inv(&self) -> Unity {
        Unity::new(-self.num, self.den)
    }

    pub fn pow(&self, e: i64) -> Unity {
        Unity::new(((self.num as i128 * e as i128).rem_euclid(self.den as i128)) as i64, self.den)
    }

    /// The `d` roots of `x^d = self`, indexed by `j` in `0..d`.
    pub fn root(&self, d: i64, j: i64) -> Unity {
        Unity::new(self.num + j * self.den, self.den * d)
    }

    pub fn as_fraction(&self) -> Q {
        qr(self.num, self.den)
    }
}

impl fmt::Display for Unity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.den {
            1 => write!(f, "1"),
            2 => write!(f, "-1"),
            _ => write!(f, "e({}/{})", self.num, self.den),
        }
    }
}
