//! Integer Hermite normal form and small rational linear algebra.

use super::Q;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Determinant by fraction-exact Gaussian elimination.
pub fn det_q(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let piv = m[c][c].clone();
        det *= &piv;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &piv;
            for k in c..n {
                let t = &f * &m[c][k];
                m[r][k] -= t;
            }
        }
    }
    det
}

/// Inverse of a square rational matrix given row-major; `None` if singular.
pub fn inverse_q(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(p, c);
        let inv = a[c][c].recip();
        for k in 0..2 * n {
            a[c][k] = &a[c][k] * &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in 0..2 * n {
                    let t = &f * &a[c][k];
                    a[r][k] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Matrix (row-major) times column vector.
pub fn mat_vec_q(m: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(Q::zero(), |acc, (a, b)| acc + a * b))
        .collect()
}

/// Column-style Hermite normal form of the lattice spanned by `gens` (each of length `n`).
///
/// The result has `n` columns; column `j` is zero below row `j`, has a positive
/// diagonal entry, and entries above the diagonal in row `i` lie in `[0, h_ii)`.
/// Returns `None` when the generators do not span a full-rank lattice.
pub fn hnf(n: usize, gens: Vec<Vec<BigInt>>) -> Option<Vec<Vec<BigInt>>> {
    let mut cols: Vec<Vec<BigInt>> = gens.into_iter().filter(|c| c.iter().any(|x| !x.is_zero())).collect();
    let mut basis: Vec<Vec<BigInt>> = alloc::vec![Vec::new(); n];
    for i in (0..n).rev() {
        loop {
            let mut best: Option<usize> = None;
            for (k, c) in cols.iter().enumerate() {
                if !c[i].is_zero() && best.map_or(true, |b| c[i].abs() < cols[b][i].abs()) {
                    best = Some(k);
                }
            }
            let b = best?;
            let mut done = true;
            let piv = cols[b].clone();
            for (k, c) in cols.iter_mut().enumerate() {
                if k == b || c[i].is_zero() {
                    continue;
                }
                let q = c[i].div_floor(&piv[i]);
                for r in 0..=i {
                    let t = &q * &piv[r];
                    c[r] -= t;
                }
                if !c[i].is_zero() {
                    done = false;
                }
            }
            if done {
                let mut p = cols.swap_remove(b);
                if p[i].is_negative() {
                    for x in p.iter_mut() {
                        *x = -x.clone();
                    }
                }
                basis[i] = p;
                cols.retain(|c| c.iter().any(|x| !x.is_zero()));
                break;
            }
        }
    }
    for j in 0..n {
        for i in (0..j).rev() {
            let q = basis[j][i].div_floor(&basis[i][i]);
            if !q.is_zero() {
                let bi = basis[i].clone();
                for r in 0..=i {
                    basis[j][r] -= &q * &bi[r];
                }
            }
        }
    }
    Some(basis)
}

/// Solves `H x = v` for an upper-triangular column basis `H`; `None` unless `x` is integral.
pub fn solve_upper_integral(h: &[Vec<BigInt>], v: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = h.len();
    let mut v = v.to_vec();
    let mut x = alloc::vec![BigInt::zero(); n];
    for i in (0..n).rev() {
        let (q, r) = v[i].div_mod_floor(&h[i][i]);
        if !r.is_zero() {
            return None;
        }
        for row in 0..=i {
            v[row] -= &q * &h[i][row];
        }
        x[i] = q;
    }
    Some(x)
}

/// Reduces an integer vector into the fundamental domain `0 <= x_i < h_ii` of the lattice.
pub fn reduce_mod_hnf(h: &[Vec<BigInt>], v: &mut [BigInt]) {
    for i in (0..h.len()).rev() {
        let q = v[i].div_floor(&h[i][i]);
        if !q.is_zero() {
            for row in 0..=i {
                v[row] -= &q * &h[i][row];
            }
        }
    }
}

pub fn gcd_all<'a, I: IntoIterator<Item = &'a BigInt>>(xs: I) -> BigInt {
    xs.into_iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}
