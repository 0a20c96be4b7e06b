//! The ten acceptance checks, each with its tolerance and time limit.
//! Prints one PASS/FAIL line per criterion and fails if any criterion fails.

mod common;

use common::*;
use hmf_core::arith::ball::Complex;
use hmf_core::arith::scalar::{HalfPow, Scalar};
use hmf_core::arith::{qi, qr, Q};
use hmf_core::dictionary::{archimedean_constants, cohomological_weight, CoefficientField, GaloisAction};
use hmf_core::field::TotallyRealField;
use hmf_core::hecke::{gauss_sum, HeckeCharacter, ResidueCharacter};
use hmf_core::local::{delta_matrix, gl1_branching, spherical_hecke_eigenvalue, GaussianInt, NonArchLocalRep};
use hmf_core::lseries::{coefficients_from_euler, critical_points, shift_relation_check};
use hmf_core::numfield::{Automorphism, NfElem};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

type Check = fn() -> Result<String, String>;

fn random_q(rng: &mut ChaCha8Rng) -> Q {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-40i64..=40);
    }
    qr(n, rng.gen_range(1i64..=12))
}

fn random_prime_power(rng: &mut ChaCha8Rng) -> i64 {
    const Q: [i64; 12] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 25, 27, 49];
    Q[rng.gen_range(0..Q.len())]
}

fn zeta_identity() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let like = qi(1);
    let mut count = 0;
    for kind in 0..4 {
        for _ in 0..200 {
            let q = random_prime_power(&mut rng);
            let rep = match kind {
                0 => NonArchLocalRep::unramified(random_q(&mut rng), random_q(&mut rng), q),
                1 => NonArchLocalRep::one_ramified(random_q(&mut rng), q, rng.gen_range(1..5)),
                2 => NonArchLocalRep::steinberg(random_q(&mut rng), q),
                _ => NonArchLocalRep::depthless(Some(random_q(&mut rng)), q, rng.gen_range(2..6)),
            }
            .map_err(|e| e.to_string())?;
            let z = rep.zeta_newvector_series(30, &like);
            let p = hmf_core::local::TruncatedSeries::from_polynomial(rep.local_l_polynomial(&like), 30, q);
            if z.order() != 30 || !z.mul(&p).is_one() {
                return Err(format!("identity fails for {rep:?}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} representations, exact to order 30"))
}

fn hecke_cosets() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let (a, b, q) = (random_q(&mut rng), random_q(&mut rng), random_prime_power(&mut rng));
        let got = spherical_hecke_eigenvalue(&a, &b, q).map_err(|e| e.to_string())?;
        // q^{1/2} (alpha + beta) as 0 + (alpha + beta) Q
        let want = HalfPow::new(qi(0), &a + &b, q);
        if got != want {
            return Err(format!("alpha={a} beta={b} q={q}"));
        }
    }
    Ok(String::from("100 draws"))
}

fn weight_vectors(n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (lo..=hi).map(move |k| [v.clone(), vec![k]].concat())).collect();
    }
    out
}

fn critical_equivalence() -> Result<String, String> {
    let mut count = 0;
    for n in 1..=4 {
        for w in weight_vectors(n, 2, 20) {
            if w.iter().any(|k| (k - w[0]) % 2 != 0) {
                continue;
            }
            let k0 = *w.iter().max().unwrap();
            let kmin = *w.iter().min().unwrap();
            // classical strict inequalities, by scanning
            let classical: Vec<i64> = (-60..60).filter(|&m| k0 - kmin < 2 * m && 2 * m < k0 + kmin).collect();
            // weight box of mu (even) or of the k0/2 twist (odd), by scanning; stored as 2 m'
            let mu = cohomological_weight(&w, k0 % 2 != 0).map_err(|e| e.to_string())?;
            let shift = if k0 % 2 == 0 { 0 } else { k0 };
            let coh2: Vec<i64> =
                (-60..60).filter(|&m| mu.pairs.iter().all(|&(a, b)| -a <= m && m <= -b)).map(|m| 2 * m + shift).collect();
            let back: Vec<i64> = classical.iter().map(|m| 2 * m - k0).collect();
            if back != coh2 {
                return Err(format!("weights {w:?}: {classical:?} vs {coh2:?}"));
            }
            let lib = critical_points(&w).map_err(|e| e.to_string())?;
            let lib2: Vec<i64> = lib.cohomological.iter().map(|m| (m * qi(2)).to_integer().try_into().unwrap()).collect();
            if lib.classical != classical || lib2 != coh2 {
                return Err(format!("library disagrees for {w:?}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} weight vectors"))
}

fn shift_relation() -> Result<String, String> {
    let e = |x: hmf_core::Error| x.to_string();
    // exact identity on several validated data
    let q = rationals();
    let k = golden();
    let cf = CoefficientField::new(golden_coefficients(), 1, None).map_err(e)?;
    let field = cf.field.clone();
    let triv = trivial_character(&k);
    let g22 = datum_from_primes(&k, vec![2, 2], &triv, &cf, 60, |p| golden_elem(&field, (p.p % 5) as i64 - 2, p.index as i64 + 1));
    let g24 = datum_from_primes(&k, vec![2, 4], &triv, &cf, 40, |p| golden_elem(&field, (p.p % 3) as i64, 1 - p.index as i64));
    let grid5: Vec<Complex> = [(3, 0), (2, 1), (4, -2), (5, 3), (7, 0)]
        .iter()
        .map(|&(a, b)| Complex::from_q(&qi(a), &qi(b), 160))
        .collect();
    for (name, f) in [("(2,2)", &g22), ("(2,4)", &g24)] {
        let r = shift_relation_check(&k, f, &grid5, f.bound, 96).map_err(e)?;
        if !r.exact_mismatches.is_empty() || r.exact_checked == 0 {
            return Err(format!("{name}: exact identity fails at {:?}", r.exact_mismatches));
        }
        if !r.arch.iter().all(|a| a.shifts_agree && a.values_agree) || r.arch.len() != 10 {
            return Err(format!("{name}: archimedean factors disagree"));
        }
    }
    let delta = delta_datum(&q, 10_000);
    let r = shift_relation_check(&q, &delta, &grid5, 10_000, 96).map_err(e)?;
    if !r.holds() || r.exact_checked != 10_000 {
        return Err(format!("delta: {:?}", r.exact_mismatches.first()));
    }
    let worst = r.points.iter().map(|p| p.discrepancy.clone()).max().unwrap();
    if worst > Q::new(BigInt::from(1), BigInt::from(10).pow(20)) {
        return Err(format!("discrepancy {worst}"));
    }
    Ok(format!("exact on 3 data, worst numeric gap {:.1e} at B = 10^4", rat_f64(&worst)))
}

fn rat_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

fn gauss_moduli() -> Result<String, String> {
    let e = |x: hmf_core::Error| x.to_string();
    let tol = Q::new(BigInt::from(1), BigInt::from(10).pow(20));
    let mut count = 0;
    for (k, bound) in [(rationals(), 50u64), (golden(), 25)] {
        for (m, _) in k.integral_ideals_up_to(bound).map_err(e)? {
            for omega in ResidueCharacter::all(&k, &m).map_err(e)? {
                if omega.conductor(&k).map_err(e)? != m {
                    continue;
                }
                let Ok(chi) = HeckeCharacter::adelize(&k, &omega, 1) else { continue };
                let g = gauss_sum(&k, &chi, 128).map_err(e)?;
                let n = k.ideal_norm(&m).map_err(e)?;
                let n2 = g.value.norm_sqr();
                let dev = std::cmp::max(&n2.upper_q() - &n, &n - &n2.lower_q());
                if dev > tol {
                    return Err(format!("|G|^2 - N = {} for modulus {m}", rat_f64(&dev)));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} primitive characters"))
}

fn galois_equivariance() -> Result<String, String> {
    let e = |x: hmf_core::Error| x.to_string();
    let q = rationals();
    let delta = delta_datum(&q, 100);
    let id = GaloisAction::identity(&delta.coefficients.field, 1);
    let r = delta.equivariance_check(&q, &id, None, 100).map_err(e)?;
    if !r.holds {
        return Err(String::from("delta fails under the identity"));
    }
    let k = golden();
    let cf = CoefficientField::new(golden_coefficients(), 1, None).map_err(e)?;
    let field = cf.field.clone();
    let sigma = Automorphism::quadratic_conjugation(&field).map_err(e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let primes = k.primes_up_to_norm(30).map_err(e)?;
    let triv = trivial_character(&k);
    for draw in 0..100 {
        let vals: Vec<(i64, i64)> = primes.iter().map(|_| (rng.gen_range(-9..=9), rng.gen_range(-9..=9))).collect();
        let lookup = |p: &hmf_core::field::PrimeIdeal| primes.iter().position(|x| x.p == p.p && x.index == p.index).unwrap();
        let f = datum_from_primes(&k, vec![2, 2], &triv, &cf, 30, |p| {
            let (a, b) = vals[lookup(p)];
            golden_elem(&field, a, b)
        });
        // conjugate built from conjugated prime values: a + b phi -> (a + b) - b phi
        let fs = datum_from_primes(&k, vec![2, 2], &triv, &cf, 30, |p| {
            let (a, b) = vals[lookup(p)];
            golden_elem(&field, a + b, -b)
        });
        let act = GaloisAction::new(sigma.clone(), vec![0, 1]).map_err(e)?;
        let r = f.equivariance_check(&k, &act, Some(&fs), 30).map_err(e)?;
        if !r.holds || r.checked != primes.len() {
            return Err(format!("draw {draw}: fails at {:?}", r.offending));
        }
        let computed = f.galois_conjugate(&k, &act).map_err(e)?;
        if computed.eigenvalues != fs.eigenvalues {
            return Err(format!("draw {draw}: conjugate mismatch"));
        }
        if draw == 0 {
            let target = &primes[4];
            let mut bad = fs.clone();
            let c = bad.eigenvalues.get(&target.ideal).unwrap().clone();
            bad.eigenvalues.insert(target.ideal.clone(), c.add(&NfElem::from_i64(&field, 1)));
            let r = f.equivariance_check(&k, &act, Some(&bad), 30).map_err(e)?;
            if r.holds || r.offending.as_deref() != Some(target.label().as_str()) {
                return Err(format!("corruption at {} reported as {:?}", target.label(), r.offending));
            }
        }
    }
    Ok(String::from("delta, 100 conjugate pairs, corruption located"))
}

fn arch_constants() -> Result<String, String> {
    let mut count = 0;
    for n in 1..=3 {
        for w in weight_vectors(n, 2, 12) {
            if w.iter().any(|k| k % 2 != 0) {
                continue;
            }
            let mu = cohomological_weight(&w, false).map_err(|e| e.to_string())?;
            let c = archimedean_constants(&mu).map_err(|e| e.to_string())?;
            // oracle: d = sum k_j / 2, c = 4^n prod (-1)^{(k-2)/2} (k-2)! / ((k-2)/2)!
            let d: i64 = w.iter().map(|k| k / 2).sum();
            let mut want: i128 = 4i128.pow(n as u32);
            for &k in &w {
                let a = (k - 2) / 2;
                let ratio: i128 = ((a + 1)..=(k - 2)).map(|i| i as i128).product();
                want *= if a % 2 == 1 { -ratio } else { ratio };
            }
            if c.d_inf != d || c.c != BigInt::from(want) || want == 0 {
                return Err(format!("weights {w:?}: got ({}, {}), want ({d}, {want})", c.d_inf, c.c));
            }
            count += 1;
        }
    }
    Ok(format!("{count} weight vectors"))
}

fn delta_and_branching() -> Result<String, String> {
    let mut count = 0;
    for nu2 in -20i64..=20 {
        for d in 0..=20 {
            let nu1 = nu2 + d;
            let m = delta_matrix(nu1, nu2).map_err(|e| e.to_string())?.matrix;
            // trace 0 and determinant -1 give eigenvalues exactly +1 and -1
            let tr = m[0][0].add(m[1][1]);
            let det = m[0][0].mul(m[1][1]).add(m[0][1].mul(m[1][0]).scale(-1));
            if tr != GaussianInt::ZERO || det != GaussianInt::ONE.scale(-1) {
                return Err(format!("delta matrix for ({nu1}, {nu2})"));
            }
            let zero_weights = (0..=d).filter(|j| j - nu1 == 0).count();
            let b = gl1_branching(nu1, nu2).map_err(|e| e.to_string())?;
            let criterion = nu1 >= 0 && 0 >= nu2;
            if b.nonzero != (zero_weights == 1) || b.nonzero != criterion {
                return Err(format!("branching for ({nu1}, {nu2})"));
            }
            if b.nonzero && b.projection_index != Some(nu1) {
                return Err(format!("projection index for ({nu1}, {nu2})"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} weights"))
}

fn narrow_class_numbers() -> Result<String, String> {
    let e = |x: hmf_core::Error| x.to_string();
    let mut got = Vec::new();
    for d in [2i64, 3, 5, 6, 7, 10] {
        let k = if d == 5 { TotallyRealField::new(&[-1, -1, 1]) } else { TotallyRealField::new(&[-d, 0, 1]) }.map_err(e)?;
        let g = k.narrow_class_data().map_err(e)?;
        let units = k.unit_data().map_err(e)?;
        let via_sequence = g.h * 4 / units.positive_index();
        let brute = k.narrow_class_number_bruteforce(100).map_err(e)?;
        if via_sequence != brute || g.h_plus != brute {
            return Err(format!("d = {d}: {via_sequence} vs {brute}"));
        }
        got.push(brute);
    }
    if got != [1, 2, 1, 2, 2, 2] {
        return Err(format!("{got:?}"));
    }
    Ok(format!("h+ = {got:?}"))
}

fn delta_regression() -> Result<String, String> {
    let q = rationals();
    let f = delta_datum(&q, 100);
    let tau = tau_oracle(100);
    let s = coefficients_from_euler(&q, &f, 100).map_err(|e| e.to_string())?;
    if s.terms.len() != 100 {
        return Err(format!("{} terms", s.terms.len()));
    }
    for t in &s.terms {
        if t.value.as_rational() != Some(Q::from_integer(BigInt::from(tau[t.norm as usize]))) {
            return Err(format!("n = {}", t.norm));
        }
    }
    let spot: Vec<i128> = [2, 3, 4, 6].iter().map(|&n| tau[n]).collect();
    if spot != [-24, 252, -1472, -6048] {
        return Err(format!("oracle spot values {spot:?}"));
    }
    Ok(String::from("100 coefficients"))
}

#[test]
fn acceptance() {
    let checks: [(&str, Check, u64); 10] = [
        ("1 new-vector zeta identity", zeta_identity, 5),
        ("2 Hecke cosets vs Satake", hecke_cosets, 1),
        ("3 critical-set equivalence", critical_equivalence, 10),
        ("4 shift relation", shift_relation, 30),
        ("5 Gauss-sum modulus", gauss_moduli, 60),
        ("6 Galois equivariance", galois_equivariance, 5),
        ("7 archimedean constants", arch_constants, 1),
        ("8 delta action and branching", delta_and_branching, 1),
        ("9 narrow class numbers", narrow_class_numbers, 30),
        ("10 delta regression", delta_regression, 5),
    ];
    let mut failed = Vec::new();
    for (name, check, limit) in checks {
        let start = Instant::now();
        let res = check();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(limit);
        match (&res, in_time) {
            (Ok(msg), true) => println!("PASS {name}: {msg} ({:.2}s, limit {limit}s)", took.as_secs_f64()),
            (Ok(msg), false) => {
                println!("FAIL {name}: {msg} but took {:.2}s, limit {limit}s", took.as_secs_f64());
                failed.push(name);
            }
            (Err(msg), _) => {
                println!("FAIL {name}: {msg} ({:.2}s)", took.as_secs_f64());
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
