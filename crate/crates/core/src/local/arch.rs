//! Discrete series at the real places: L-factors, algebraicity, and the two
//! finite checks on the lowest K-types.

use crate::arith::ball::{gamma, Complex, Real};
use crate::arith::{qr, Q};
use crate::{Error, Result};
use alloc::vec::Vec;
use num_traits::Zero;

/// `D_l (x) |.|^t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArchLocalRep {
    pub l: i64,
    pub t: Q,
}

impl ArchLocalRep {
    pub fn new(l: i64, t: Q) -> Result<Self> {
        if l < 1 {
            return Err(Error::InvalidInput("discrete series parameter must be at least 1".into()));
        }
        Ok(ArchLocalRep { l, t })
    }

    /// The component of a weight-`k` form with trivial twist.
    pub fn from_weight(k: i64) -> Result<Self> {
        Self::new(k - 1, Q::zero())
    }

    /// The two exponents `t +- l/2`.
    pub fn exponents(&self) -> (Q, Q) {
        let h = qr(self.l, 2);
        (&self.t + &h, &self.t - &h)
    }
}

/// `c (2 pi)^{-(s+b)} Gamma(s+b)` with `c = 2` when `with_two` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArchLFactor {
    pub shift: Q,
    pub with_two: bool,
}

#[allow(non_snake_case)]
pub fn arch_L_factor(rep: &ArchLocalRep, with_two: bool) -> ArchLFactor {
    ArchLFactor { shift: &rep.t + qr(rep.l, 2), with_two }
}

impl ArchLFactor {
    pub fn eval(&self, s: &Complex, prec: u32) -> Result<Complex> {
        let wp = prec + 20;
        let w = &s.with_prec(wp) + &Complex::from_q(&self.shift, &Q::zero(), wp);
        let g = gamma(&w).ok_or(Error::InvalidInput("L-factor evaluated at a pole".into()))?;
        let two_pi = Real::pi(wp).mul_i64(2);
        let l2p = Complex::from_real(two_pi.ln().expect("positive"));
        let scale = (&l2p * &w.neg()).exp();
        let mut v = &g * &scale;
        if self.with_two {
            v = v.mul_i64(2);
        }
        Ok(v.with_prec(prec))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArchClassification {
    pub algebraic: bool,
    pub half_twist_algebraic: bool,
    /// `(p_j, q_j)` for the twist by `|.|^{-1/2}`, when algebraic.
    pub infinity_type: Option<Vec<(i64, i64)>>,
    pub regular: bool,
}

fn in_half_plus_z(x: &Q) -> bool {
    (x - qr(1, 2)).is_integer()
}

pub fn archimedean_classification(reps: &[ArchLocalRep]) -> ArchClassification {
    let exps: Vec<(Q, Q)> = reps.iter().map(|r| r.exponents()).collect();
    let algebraic = exps.iter().all(|(a, b)| in_half_plus_z(a) && in_half_plus_z(b));
    let half = qr(1, 2);
    let half_twist_algebraic = exps.iter().all(|(a, b)| in_half_plus_z(&(a + &half)) && in_half_plus_z(&(b + &half)));
    let infinity_type = if algebraic {
        Some(
            exps.iter()
                .map(|(a, b)| {
                    let p = (a - &half).to_integer();
                    let q = (b - &half).to_integer();
                    (i64::try_from(p).unwrap_or(i64::MAX), i64::try_from(q).unwrap_or(i64::MIN))
                })
                .collect(),
        )
    } else {
        None
    };
    let regular = exps.iter().all(|(a, b)| a != b);
    ArchClassification { algebraic, half_twist_algebraic, infinity_type, regular }
}

/// Gaussian integer `re + im i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

impl GaussianInt {
    pub const ZERO: GaussianInt = GaussianInt { re: 0, im: 0 };
    pub const ONE: GaussianInt = GaussianInt { re: 1, im: 0 };

    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => GaussianInt { re: 1, im: 0 },
            1 => GaussianInt { re: 0, im: 1 },
            2 => GaussianInt { re: -1, im: 0 },
            _ => GaussianInt { re: 0, im: -1 },
        }
    }

    pub fn add(self, o: Self) -> Self {
        GaussianInt { re: self.re + o.re, im: self.im + o.im }
    }

    pub fn mul(self, o: Self) -> Self {
        GaussianInt { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }

    pub fn scale(self, k: i64) -> Self {
        GaussianInt { re: self.re * k, im: self.im * k }
    }
}

impl core::fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match (self.re, self.im) {
            (r, 0) => write!(f, "{r}"),
            (0, 1) => write!(f, "i"),
            (0, -1) => write!(f, "-i"),
            (0, m) => write!(f, "{m}i"),
            (r, m) if m < 0 => write!(f, "{r}-{}i", -m),
            (r, m) => write!(f, "{r}+{m}i"),
        }
    }
}

type Mat2 = [[GaussianInt; 2]; 2];

fn mat_vec(m: &Mat2, v: [GaussianInt; 2]) -> [GaussianInt; 2] {
    [m[0][0].mul(v[0]).add(m[0][1].mul(v[1])), m[1][0].mul(v[0]).add(m[1][1].mul(v[1]))]
}

/// The action of `delta = diag(-1, 1)` on the two extreme vectors `(f_{-2}, f_2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaMatrix {
    /// Columns are the images of `f_{-2}` and `f_2`.
    pub matrix: Mat2,
    /// `(coordinates, eigenvalue)` for `f_2 + i^{nu_2 - nu_1} f_{-2}` and `f_2 - i^{nu_2 - nu_1} f_{-2}`.
    pub eigen: [([GaussianInt; 2], i64); 2],
}

pub fn delta_matrix(nu1: i64, nu2: i64) -> Result<DeltaMatrix> {
    if nu1 < nu2 {
        return Err(Error::WeightOrder(nu1, nu2));
    }
    let d = nu1 - nu2;
    let up = GaussianInt::i_pow(d);
    let down = GaussianInt::i_pow(-d);
    let matrix = [[GaussianInt::ZERO, down], [up, GaussianInt::ZERO]];
    let mut eigen = [([GaussianInt::ZERO; 2], 0); 2];
    for (slot, sign) in [1i64, -1].into_iter().enumerate() {
        let v = [down.scale(sign), GaussianInt::ONE];
        let w = mat_vec(&matrix, v);
        if w != [v[0].scale(sign), v[1].scale(sign)] {
            return Err(Error::InvariantViolation("delta eigenvector check failed".into()));
        }
        eigen[slot] = (v, sign);
    }
    let sq = mat_vec(&matrix, mat_vec(&matrix, [GaussianInt::ONE, GaussianInt::ZERO]));
    if sq != [GaussianInt::ONE, GaussianInt::ZERO] {
        return Err(Error::InvariantViolation("delta does not square to one".into()));
    }
    Ok(DeltaMatrix { matrix, eigen })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branching {
    pub nonzero: bool,
    pub projection_index: Option<i64>,
}

/// Whether the weight-zero line of the GL(1) restriction of `Sym^{nu1-nu2} (x) det^{nu2}` is nonzero.
pub fn gl1_branching(nu1: i64, nu2: i64) -> Result<Branching> {
    if nu1 < nu2 {
        return Err(Error::WeightOrder(nu1, nu2));
    }
    let hit = (0..=(nu1 - nu2)).find(|j| j - nu1 == 0);
    Ok(Branching { nonzero: hit.is_some(), projection_index: hit })
}
