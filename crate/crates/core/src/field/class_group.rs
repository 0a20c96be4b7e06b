//! Units of real quadratic fields and narrow class groups.

use super::{q_to_f64, FieldElement, Ideal, PrimeIdeal, TotallyRealField};
use crate::arith::{cyclic_tower, qi, qz, Q};
use crate::{Error, Result};
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Unit group data modulo totally positive units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitData {
    /// Fundamental unit with first embedding greater than one (real quadratic fields).
    pub fundamental_unit: Option<FieldElement>,
    /// Whether some unit has norm -1.
    pub norm_minus_one: bool,
    /// Sign vectors of all units, i.e. the image of `O^x` in `{+-1}^n`.
    pub sign_image: Vec<Vec<i32>>,
}

impl UnitData {
    /// `[O^x : O^x_+]`.
    pub fn positive_index(&self) -> u64 {
        self.sign_image.len() as u64
    }
}

/// Narrow class group with representatives `t_1 = O, t_2, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NarrowClassGroup {
    pub h: u64,
    pub h_plus: u64,
    pub reps: Vec<Ideal>,
    pub unit_norm_minus_one: Option<bool>,
    /// `table[a][b]` is the class of `t_a t_b`.
    pub table: Vec<Vec<usize>>,
    /// Cyclic tower: class index and its order modulo the classes before it.
    pub tower: Vec<(usize, u64)>,
    /// Exponents of each class over the tower.
    pub tower_exponents: Vec<Vec<u64>>,
}

impl NarrowClassGroup {
    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn inverse_class(&self, a: usize) -> usize {
        (0..self.order()).find(|&b| self.table[a][b] == 0).expect("group")
    }
}

fn sign_closure(gens: &[Vec<i32>], n: usize) -> Vec<Vec<i32>> {
    let mut set: BTreeSet<Vec<i32>> = BTreeSet::new();
    set.insert(vec![1; n]);
    loop {
        let cur: Vec<Vec<i32>> = set.iter().cloned().collect();
        let before = set.len();
        for a in &cur {
            for g in gens {
                set.insert(a.iter().zip(g).map(|(x, y)| x * y).collect());
            }
        }
        if set.len() == before {
            break;
        }
    }
    set.into_iter().collect()
}

fn f64_sqrt(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let mut r = if x > 1.0 { x / 2.0 } else { 1.0 };
    for _ in 0..200 {
        let nr = 0.5 * (r + x / r);
        if (nr - r).abs() <= 1e-15 * nr {
            return nr;
        }
        r = nr;
    }
    r
}

fn f64_floor(x: f64) -> i64 {
    let t = x as i64;
    if (t as f64) > x {
        t - 1
    } else {
        t
    }
}

impl TotallyRealField {
    /// Fundamental unit of a real quadratic field from the continued fraction of
    /// the larger root of the minimal polynomial of the second basis element.
    pub fn fundamental_unit(&self) -> Result<FieldElement> {
        if self.degree() != 2 {
            return Err(Error::DegreeUnsupported(self.degree()));
        }
        let w = self.basis_element(1);
        let t = self.trace(&w).to_integer();
        let m = self.norm(&w).to_integer();
        let d = &t * &t - BigInt::from(4) * &m;
        let s = d.sqrt();
        // complete quotients (P + sqrt D) / Q
        let mut pp = t.clone();
        let mut qq = BigInt::from(2);
        let (mut h1, mut h2) = (BigInt::one(), BigInt::zero());
        let (mut k1, mut k2) = (BigInt::zero(), BigInt::one());
        for _ in 0..100_000 {
            let a = if qq.is_positive() {
                (&pp + &s).div_floor(&qq)
            } else {
                (&pp + &s + 1i32).div_floor(&qq)
            };
            let h = &a * &h1 + &h2;
            let k = &a * &k1 + &k2;
            h2 = core::mem::replace(&mut h1, h.clone());
            k2 = core::mem::replace(&mut k1, k.clone());
            let nrm = &h * &h - &t * &h * &k + &m * &k * &k;
            if nrm.abs().is_one() {
                let u = self.from_int(0).add(&self.one().scale(&qz(&h))).sub(&w.scale(&qz(&k)));
                return self.normalize_unit(&u);
            }
            pp = &a * &qq - &pp;
            qq = (&d - &pp * &pp) / &qq;
        }
        Err(Error::PrecisionExhausted("continued fraction did not reach a unit".into()))
    }

    /// Among `+-u^{+-1}`, the one with first embedding greater than one.
    fn normalize_unit(&self, u: &FieldElement) -> Result<FieldElement> {
        let ui = self.inv(u)?;
        for c in [u.clone(), u.neg(), ui.clone(), ui.neg()] {
            if self.sign_at(&c.sub(&self.one()), 0) > 0 {
                return Ok(c);
            }
        }
        Err(Error::InvariantViolation("unit normalization".into()))
    }

    pub fn unit_data(&self) -> Result<UnitData> {
        let n = self.degree();
        match n {
            1 => Ok(UnitData { fundamental_unit: None, norm_minus_one: true, sign_image: vec![vec![-1], vec![1]] }),
            2 => {
                let e = self.fundamental_unit()?;
                let nm = self.norm(&e);
                let signs = sign_closure(&[vec![-1, -1], self.sign_vector(&e)], 2);
                Ok(UnitData { fundamental_unit: Some(e), norm_minus_one: nm == qi(-1), sign_image: signs })
            }
            _ => Err(Error::DegreeUnsupported(n)),
        }
    }

    /// Some generator of a principal fractional ideal, or `None` if it is not principal.
    pub fn principal_generator(&self, a: &Ideal) -> Result<Option<FieldElement>> {
        let n = self.degree();
        let d = qz(a.den());
        let j = Ideal::clone(a);
        let nj = self.ideal_norm(&j)? * Q::from_integer(a.den().pow(n as u32));
        if n == 1 {
            return Ok(Some(self.from_rational(a.min_integer())));
        }
        if n != 2 {
            return Err(Error::DegreeUnsupported(n));
        }
        let eps = self.fundamental_unit()?;
        let e1 = self.approx_embeddings(&eps)[0].abs();
        let basis: Vec<FieldElement> = j.z_basis().into_iter().map(|x| x.scale(&d)).collect();
        let nrm = nj.to_integer();
        let nf = q_to_f64(&nj);
        let r = f64_sqrt(nf * e1) * (1.0 + 1e-9) + 1e-6;
        let c1 = self.approx_embeddings(&basis[0]);
        let c2 = self.approx_embeddings(&basis[1]);
        // beta = x b0 + y b1 with |beta_i| <= r; b0 = hnf column 0 is an integer
        let det = c1[0] * c2[1] - c1[1] * c2[0];
        let ymax = r * (c1[0].abs() + c1[1].abs()) / det.abs() + 2.0;
        let ylim = f64_floor(ymax) + 1;
        for y in -ylim..=ylim {
            let yf = y as f64;
            let mut lo = f64::NEG_INFINITY;
            let mut hi = f64::INFINITY;
            for i in 0..2 {
                if c1[i].abs() < 1e-300 {
                    continue;
                }
                let a = (-r - yf * c2[i]) / c1[i];
                let b = (r - yf * c2[i]) / c1[i];
                let (a, b) = if a < b { (a, b) } else { (b, a) };
                lo = lo.max(a);
                hi = hi.min(b);
            }
            if lo > hi {
                continue;
            }
            for x in (f64_floor(lo) - 1)..=(f64_floor(hi) + 1) {
                let beta = basis[0].scale(&qi(x)).add(&basis[1].scale(&qi(y)));
                if beta.is_zero() {
                    continue;
                }
                if self.norm(&beta).abs() == Q::from_integer(nrm.clone()) {
                    return Ok(Some(beta.scale(&(Q::one() / &d))));
                }
            }
        }
        Ok(None)
    }

    /// A totally positive generator, or `None` if the ideal is not narrowly principal.
    pub fn totally_positive_generator(&self, a: &Ideal) -> Result<Option<FieldElement>> {
        let Some(g) = self.principal_generator(a)? else { return Ok(None) };
        let n = self.degree();
        if n == 1 {
            return Ok(Some(if self.sign_at(&g, 0) > 0 { g } else { g.neg() }));
        }
        let eps = self.fundamental_unit()?;
        for u in [self.one(), self.one().neg(), eps.clone(), eps.neg()] {
            let c = self.mul(&g, &u);
            if self.is_totally_positive(&c)? {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }

    fn narrowly_equivalent(&self, a: &Ideal, b: &Ideal) -> Result<Option<FieldElement>> {
        self.totally_positive_generator(&self.ideal_div(a, b)?)
    }

    fn widely_equivalent(&self, a: &Ideal, b: &Ideal) -> Result<bool> {
        Ok(self.principal_generator(&self.ideal_div(a, b)?)?.is_some())
    }

    fn minkowski_primes(&self) -> Result<Vec<PrimeIdeal>> {
        // n = 2: sqrt(d) / 2
        let d = self.discriminant().to_u64().unwrap_or(u64::MAX);
        let bound = (d.sqrt() / 2 + 1).max(2);
        self.primes_up_to_norm(bound)
    }

    fn closure(&self, gens: &[Ideal], narrow: bool) -> Result<Vec<Ideal>> {
        let mut reps = vec![self.unit_ideal()];
        let mut i = 0;
        while i < reps.len() {
            for g in gens {
                let x = self.ideal_mul(&reps[i], g);
                let mut known = false;
                for r in &reps {
                    let eq = if narrow { self.narrowly_equivalent(&x, r)?.is_some() } else { self.widely_equivalent(&x, r)? };
                    if eq {
                        known = true;
                        break;
                    }
                }
                if !known {
                    reps.push(x);
                }
            }
            i += 1;
        }
        Ok(reps)
    }

    /// Narrow class data with representatives coprime to `level`.
    pub fn narrow_class_group(&self, level: &Ideal) -> Result<NarrowClassGroup> {
        let n = self.degree();
        if n == 1 {
            return Ok(NarrowClassGroup {
                h: 1,
                h_plus: 1,
                reps: vec![self.unit_ideal()],
                unit_norm_minus_one: Some(true),
                table: vec![vec![0]],
                tower: Vec::new(),
                tower_exponents: vec![Vec::new()],
            });
        }
        if n > 2 {
            return match self.user_class() {
                Some((h, 1)) => Ok(NarrowClassGroup {
                    h,
                    h_plus: 1,
                    reps: vec![self.unit_ideal()],
                    unit_norm_minus_one: self.user_unit_norm_minus_one(),
                    table: vec![vec![0]],
                    tower: Vec::new(),
                    tower_exponents: vec![Vec::new()],
                }),
                _ => Err(Error::DegreeUnsupported(n)),
            };
        }
        let units = self.unit_data()?;
        let mut gens: Vec<Ideal> = self.minkowski_primes()?.into_iter().map(|p| p.ideal).collect();
        let wide = self.closure(&gens, false)?;
        let h = wide.len() as u64;
        // the kernel of the narrow-to-wide map is generated by ideals with mixed-sign generators
        let w = self.basis_element(1);
        for c in -50i64..50 {
            let a = w.add(&self.from_int(c));
            let sv = self.sign_vector(&a);
            if sv == vec![1, -1] || sv == vec![-1, 1] {
                gens.push(self.principal_ideal(&a)?);
                break;
            }
        }
        let classes = self.closure(&gens, true)?;
        let h_plus = classes.len() as u64;
        let expected = h * (1u64 << n) / units.positive_index();
        if expected != h_plus {
            return Err(Error::InvariantViolation(format!(
                "narrow class number {h_plus} disagrees with h 2^n / [O^x : O^x_+] = {expected}"
            )));
        }
        // smallest-norm prime representatives coprime to the level
        let mut reps: Vec<Option<Ideal>> = vec![None; classes.len()];
        reps[0] = Some(self.unit_ideal());
        let mut bound = 50u64;
        while reps.iter().any(|r| r.is_none()) {
            for p in self.primes_up_to_norm(bound)? {
                if !self.coprime(&p.ideal, level) {
                    continue;
                }
                for (ci, c) in classes.iter().enumerate() {
                    if reps[ci].is_none() && self.narrowly_equivalent(&p.ideal, c)?.is_some() {
                        reps[ci] = Some(p.ideal.clone());
                        break;
                    }
                }
            }
            bound *= 4;
            if bound > 1 << 20 {
                return Err(Error::InvariantViolation("no prime representative found".into()));
            }
        }
        let reps: Vec<Ideal> = reps.into_iter().map(|r| r.unwrap()).collect();
        let hp = reps.len();
        let mut table = vec![vec![0usize; hp]; hp];
        for a in 0..hp {
            for b in 0..hp {
                let x = self.ideal_mul(&reps[a], &reps[b]);
                let mut found = None;
                for (c, r) in reps.iter().enumerate() {
                    if self.narrowly_equivalent(&x, r)?.is_some() {
                        found = Some(c);
                        break;
                    }
                }
                table[a][b] = found.ok_or(Error::InvariantViolation("class table".into()))?;
            }
        }
        let (tower, tower_exponents) = cyclic_tower(&table, 0);
        Ok(NarrowClassGroup {
            h,
            h_plus,
            reps,
            unit_norm_minus_one: Some(units.norm_minus_one),
            table,
            tower,
            tower_exponents,
        })
    }

    pub fn narrow_class_data(&self) -> Result<NarrowClassGroup> {
        self.narrow_class_group(&self.unit_ideal())
    }

    /// `a = alpha * t_nu` with `alpha` totally positive; returns `(nu, alpha)`.
    pub fn reduce_to_class(&self, g: &NarrowClassGroup, a: &Ideal) -> Result<(usize, FieldElement)> {
        if self.degree() > 2 {
            return Err(Error::DegreeUnsupported(self.degree()));
        }
        for (i, r) in g.reps.iter().enumerate() {
            if let Some(alpha) = self.narrowly_equivalent(a, r)? {
                return Ok((i, alpha));
            }
        }
        Err(Error::InvariantViolation("ideal outside every narrow class".into()))
    }

    /// Number of narrow classes met by the unit ideal and the primes of norm at most `bound`,
    /// by pairwise equivalence tests.
    pub fn narrow_class_number_bruteforce(&self, bound: u64) -> Result<u64> {
        let mut classes: Vec<Ideal> = vec![self.unit_ideal()];
        for p in self.primes_up_to_norm(bound)? {
            let mut new = true;
            for c in &classes {
                if self.narrowly_equivalent(&p.ideal, c)?.is_some() {
                    new = false;
                    break;
                }
            }
            if new {
                classes.push(p.ideal);
            }
        }
        Ok(classes.len() as u64)
    }
}
