//! Polynomials over a prime field and their factorisation (squarefree, distinct- and equal-degree).

use super::{inv_mod, mul_mod};
use alloc::vec::Vec;
use num_bigint::BigUint;
use num_traits::One;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FpPoly {
    pub p: u64,
    c: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, c: Vec<u64>) -> Self {
        let mut c: Vec<u64> = c.into_iter().map(|x| x % p).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn from_i64(p: u64, c: &[i64]) -> Self {
        FpPoly::new(p, c.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
    }

    pub fn one(p: u64) -> Self {
        FpPoly::new(p, alloc::vec![1])
    }

    pub fn x(p: u64) -> Self {
        FpPoly::new(p, alloc::vec![0, 1])
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    fn add(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        FpPoly::new(
            self.p,
            (0..n)
                .map(|i| (self.c.get(i).copied().unwrap_or(0) + o.c.get(i).copied().unwrap_or(0)) % self.p)
                .collect(),
        )
    }

    pub fn sub(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        let p = self.p;
        FpPoly::new(
            p,
            (0..n)
                .map(|i| (self.c.get(i).copied().unwrap_or(0) + p - o.c.get(i).copied().unwrap_or(0)) % p)
                .collect(),
        )
    }

    pub fn mul(&self, o: &FpPoly) -> FpPoly {
        if self.is_zero() || o.is_zero() {
            return FpPoly::new(self.p, Vec::new());
        }
        let mut r = alloc::vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in o.c.iter().enumerate() {
                r[i + j] = (r[i + j] + mul_mod(a, b, self.p)) % self.p;
            }
        }
        FpPoly::new(self.p, r)
    }

    pub fn divrem(&self, d: &FpPoly) -> (FpPoly, FpPoly) {
        let p = self.p;
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (FpPoly::new(p, Vec::new()), self.clone());
        }
        let inv = inv_mod(d.c[dd], p).expect("leading coefficient invertible");
        let mut q = alloc::vec![0u64; r.len() - dd];
        for i in (0..q.len()).rev() {
            let t = mul_mod(r[i + dd], inv, p);
            if t != 0 {
                for (j, &b) in d.c.iter().enumerate() {
                    r[i + j] = (r[i + j] + p - mul_mod(t, b, p)) % p;
                }
            }
            q[i] = t;
        }
        r.truncate(dd);
        (FpPoly::new(p, q), FpPoly::new(p, r))
    }

    pub fn rem(&self, d: &FpPoly) -> FpPoly {
        self.divrem(d).1
    }

    pub fn monic(&self) -> FpPoly {
        match self.c.last() {
            None => self.clone(),
            Some(&l) => {
                let inv = inv_mod(l, self.p).unwrap();
                FpPoly::new(self.p, self.c.iter().map(|&a| mul_mod(a, inv, self.p)).collect())
            }
        }
    }

    pub fn gcd(&self, o: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> FpPoly {
        FpPoly::new(
            self.p,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| mul_mod(a, i as u64 % self.p, self.p))
                .collect(),
        )
    }

    pub fn pow_mod(&self, e: &BigUint, m: &FpPoly) -> FpPoly {
        let mut r = FpPoly::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            r = r.mul(&r).rem(m);
            if e.bit(i) {
                r = r.mul(&base).rem(m);
            }
        }
        r
    }

    /// p-th root of a polynomial whose derivative vanishes.
    fn pth_root(&self) -> FpPoly {
        let p = self.p as usize;
        FpPoly::new(self.p, self.c.iter().step_by(p).copied().collect())
    }

    fn squarefree_factors(&self) -> Vec<(FpPoly, u32)> {
        let p = self.p;
        let mut out = Vec::new();
        let d = self.derivative();
        if d.is_zero() {
            if self.degree().unwrap_or(0) > 0 {
                for (g, e) in self.pth_root().squarefree_factors() {
                    out.push((g, e * p as u32));
                }
            }
            return out;
        }
        let mut c = self.gcd(&d);
        let mut w = self.divrem(&c).0;
        let mut i = 1;
        while !w.is_one() {
            let y = w.gcd(&c);
            let z = w.divrem(&y).0;
            if z.degree().unwrap_or(0) > 0 {
                out.push((z.monic(), i));
            }
            i += 1;
            w = y;
            c = c.divrem(&w).0;
        }
        if c.degree().unwrap_or(0) > 0 {
            for (g, e) in c.pth_root().squarefree_factors() {
                out.push((g, e * p as u32));
            }
        }
        out
    }

    fn distinct_degree(&self) -> Vec<(FpPoly, usize)> {
        let p = self.p;
        let mut out = Vec::new();
        let mut f = self.clone();
        let mut h = FpPoly::x(p);
        let mut d = 0;
        let pe = BigUint::from(p);
        while f.degree().unwrap_or(0) >= 2 * (d + 1) {
            d += 1;
            h = h.pow_mod(&pe, &f);
            let g = f.gcd(&h.sub(&FpPoly::x(p)));
            if !g.is_one() {
                f = f.divrem(&g).0;
                h = h.rem(&f);
                out.push((g, d));
            }
        }
        if f.degree().unwrap_or(0) > 0 {
            let deg = f.degree().unwrap();
            out.push((f.monic(), deg));
        }
        out
    }

    fn candidate(&self, k: u64) -> FpPoly {
        let mut c = Vec::new();
        let mut k = k;
        while k > 0 {
            c.push(k % self.p);
            k /= self.p;
        }
        FpPoly::new(self.p, c)
    }

    fn equal_degree(&self, d: usize) -> Vec<FpPoly> {
        let n = self.degree().unwrap();
        if n == d {
            return alloc::vec![self.monic()];
        }
        let p = self.p;
        let mut k = p;
        loop {
            let u = self.candidate(k);
            k += 1;
            if u.degree().unwrap_or(0) == 0 {
                continue;
            }
            let t = if p == 2 {
                let mut acc = u.rem(self);
                let mut sq = acc.clone();
                for _ in 1..d {
                    sq = sq.mul(&sq).rem(self);
                    acc = acc.add(&sq);
                }
                acc
            } else {
                let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
                u.pow_mod(&e, self).sub(&FpPoly::one(p))
            };
            let g = self.gcd(&t);
            let gd = g.degree().unwrap_or(0);
            if gd > 0 && gd < n {
                let mut out = g.equal_degree(d);
                out.extend(self.divrem(&g).0.equal_degree(d));
                return out;
            }
        }
    }

    /// Monic irreducible factors with multiplicities, sorted.
    pub fn factor(&self) -> Vec<(FpPoly, u32)> {
        let mut out = Vec::new();
        for (g, e) in self.monic().squarefree_factors() {
            for (h, d) in g.distinct_degree() {
                for f in h.equal_degree(d) {
                    out.push((f, e));
                }
            }
        }
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_small() {
        // x^2 - x - 1 mod 11 splits, mod 2 irreducible, mod 5 a square
        let f = |p| FpPoly::from_i64(p, &[-1, -1, 1]);
        assert_eq!(f(11).factor().len(), 2);
        assert_eq!(f(2).factor(), alloc::vec![(f(2), 1)]);
        let five = f(5).factor();
        assert_eq!(five, alloc::vec![(FpPoly::from_i64(5, &[2, 1]), 2)]);
    }

    #[test]
    fn factor_products_roundtrip() {
        for p in [2u64, 3, 5, 7, 13] {
            let g = FpPoly::from_i64(p, &[1, 1, 0, 1, 1, 0, 0, 1]).mul(&FpPoly::from_i64(p, &[1, 1]).mul(&FpPoly::from_i64(p, &[1, 1])));
            let fac = g.factor();
            let mut prod = FpPoly::one(p);
            for (h, e) in &fac {
                for _ in 0..*e {
                    prod = prod.mul(h);
                }
            }
            assert_eq!(prod, g.monic(), "p = {p}");
        }
    }
}
