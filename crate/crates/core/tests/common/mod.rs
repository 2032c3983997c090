#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use takagi_core::landsberg::solve_alpha_n;
use takagi_core::oracle::{edge_union, maximizing_edges, pair_sum_edges, Grid};
use takagi_core::scalar::{IntPoly, RInterval, Scalar};
use takagi_core::step::{classify_extrema, nonneg_check, Extremum, Location, NonnegResult};
use takagi_core::takagi::{eval_series, rademacher_of, t_map, CoefficientSequence, Sign};

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn finite(c: &[BigRational]) -> CoefficientSequence {
    CoefficientSequence::FiniteSupport(c.iter().cloned().map(Scalar::Rational).collect())
}

/// Coefficients `c_0..c_len` with at most `nonzero` nonzero small rationals.
pub fn random_coeffs(r: &mut ChaCha8Rng, max_len: usize, nonzero: usize) -> Vec<BigRational> {
    let len = r.gen_range(1..=max_len);
    let mut c = vec![BigRational::zero(); len];
    for _ in 0..nonzero.min(len) {
        let m = r.gen_range(0..len);
        c[m] = q(r.gen_range(-9..=9), r.gen_range(1..=9));
    }
    if c.iter().all(Zero::is_zero) {
        c[0] = q(1, 1);
    }
    c
}

pub fn random_signs(r: &mut ChaCha8Rng, len: usize) -> Vec<Sign> {
    (0..len).map(|_| if r.gen_bool(0.5) { Sign::Plus } else { Sign::Minus }).collect()
}

pub fn random_unit_rational(r: &mut ChaCha8Rng, max_den: i64) -> BigRational {
    let d = r.gen_range(1..=max_den);
    q(r.gen_range(0..=d), d)
}

/// The quartic parameter with `1 - a - a^2 - a^3 + a^4 = 0` in `(1/2, 1)`.
pub fn quartic_alpha() -> Scalar {
    Scalar::root(&IntPoly::from_i64s(&[1, -1, -1, -1, 1]), &q(1, 2), &q(1, 1)).unwrap()
}

pub fn alpha_n(n: usize) -> Scalar {
    solve_alpha_n(n)
}

pub fn location_interval(l: &Location) -> (BigRational, BigRational) {
    match l {
        Location::Exact(q) => (q.clone(), q.clone()),
        Location::Approx { lo, hi } => (lo.clone(), hi.clone()),
    }
}

pub fn meets_union(point: &(BigRational, BigRational), union: &[(BigRational, BigRational)]) -> bool {
    union.iter().any(|(a, b)| &point.0 <= b && a <= &point.1)
}

fn unordered(edges: &[(BigRational, BigRational)]) -> Vec<(BigRational, BigRational)> {
    let mut v: Vec<_> = edges.iter().map(|(a, b)| if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) }).collect();
    v.sort();
    v.dedup();
    v
}

/// Step engine against the grid for one finite-support sequence: smallest and
/// largest maximizers lie in `E_n` for every `n <= n_max`, the maximum value
/// equals the grid maximum once the support is covered, and the definition
/// edges coincide with the pair-sum edges.
pub fn oracle_agreement_one(c: &[BigRational], n_max: usize) -> Result<(), String> {
    let seq = finite(c);
    let r = classify_extrema(&seq, Extremum::Max, 64).map_err(|e| format!("{c:?}: {e}"))?;
    let pts = [location_interval(&r.smallest.location), location_interval(&r.largest.location)];
    for n in 0..=n_max {
        let edges = maximizing_edges(c, n).map_err(|e| e.to_string())?;
        let union = edge_union(&edges);
        for p in &pts {
            if !meets_union(p, &union) {
                return Err(format!("{c:?}: maximizer {p:?} outside E_{n}"));
            }
        }
        let def: Vec<_> = edges.iter().map(|e| (e.x.clone(), e.y.clone())).collect();
        let pair = pair_sum_edges(c, n).map_err(|e| e.to_string())?;
        if unordered(&def) != unordered(&pair) {
            return Err(format!("{c:?}: edge forms differ at generation {n}"));
        }
    }
    let top = c.len() - 1;
    let grid_max = Grid::new(c, top).map_err(|e| e.to_string())?.max_value();
    if r.value.as_rational() != Some(&grid_max) {
        return Err(format!("{c:?}: value {} against grid {grid_max}", r.value));
    }
    Ok(())
}

pub fn oracle_suite(seed: u64, samples: usize, n_max: usize) -> Result<(), String> {
    let mut r = rng(seed);
    for _ in 0..samples {
        let c = random_coeffs(&mut r, 7, 6);
        oracle_agreement_one(&c, n_max)?;
    }
    Ok(())
}

/// `sum_{m <= n} 2^m c_m rho_m` against the grid difference quotient across
/// the cell of `rho`, computed here without the oracle's own slope routine.
pub fn slope_holds(c: &[BigRational], rho: &[Sign], n: usize) -> Result<(), String> {
    let g = Grid::new(c, n).map_err(|e| e.to_string())?;
    let mut k = 0usize;
    for s in &rho[..=n] {
        k = 2 * k + usize::from(*s == Sign::Minus);
    }
    let width = BigRational::new(BigInt::one(), BigInt::one() << (n + 1));
    let quotient = (g.value(k + 1) - g.value(k)) / &width;
    let expected = (0..=n).fold(BigRational::zero(), |acc, m| {
        let cm = c.get(m).cloned().unwrap_or_else(BigRational::zero);
        acc + cm * BigRational::from_integer(BigInt::from(rho[m].value()) << m)
    });
    let reported = takagi_core::oracle::slope(c, rho, n).map_err(|e| e.to_string())?;
    if quotient != expected || reported != expected {
        return Err(format!("{c:?} {rho:?} n={n}: quotient {quotient}, sum {expected}, reported {reported}"));
    }
    Ok(())
}

pub fn slope_suite(seed: u64, triples: usize) -> Result<(), String> {
    let mut r = rng(seed);
    for _ in 0..triples {
        let n = r.gen_range(0..=10);
        let c: Vec<BigRational> = (0..=n).map(|_| q(r.gen_range(-9..=9), r.gen_range(1..=9))).collect();
        let rho = random_signs(&mut r, n + 1);
        slope_holds(&c, &rho, n)?;
    }
    Ok(())
}

/// `f(t)` and `f(1 - t)` enclosures overlap.
pub fn symmetry_suite(seed: u64, points: usize) -> Result<(), String> {
    let mut r = rng(seed);
    let cases = [
        (CoefficientSequence::geometric(Scalar::from_ratio(1, 2)), 40u32),
        (CoefficientSequence::geometric(Scalar::from_ratio(-3, 2)), 40),
        (CoefficientSequence::geometric(Scalar::sqrt2()), 40),
        (CoefficientSequence::PowerSquared, 10),
    ];
    for (c, bits) in &cases {
        let w = BigRational::new(BigInt::one(), BigInt::one() << *bits);
        for _ in 0..points / cases.len() {
            let t = random_unit_rational(&mut r, 400);
            let a = eval_series(c, &t, &w).map_err(|e| e.to_string())?;
            let b = eval_series(c, &(BigRational::one() - &t), &w).map_err(|e| e.to_string())?;
            if !a.overlaps(&b, 128) {
                return Err(format!("{c:?}: f({t}) and f(1 - {t}) disagree"));
            }
        }
    }
    Ok(())
}

/// `T(rho) = t` for every Rademacher expansion of random rationals.
pub fn round_trip_suite(seed: u64, points: usize) -> Result<(), String> {
    let mut r = rng(seed);
    for _ in 0..points {
        let t = random_unit_rational(&mut r, 1000);
        let exps = rademacher_of(&t).map_err(|e| e.to_string())?;
        for e in &exps {
            if t_map(e).exact() != Some(&t) {
                return Err(format!("round trip failed at {t}"));
            }
        }
    }
    Ok(())
}

/// The 50 points `-49/25 + 2k/25`, which include `-1`.
pub fn nonneg_grid() -> Vec<BigRational> {
    (0..50).map(|k| q(-49 + 2 * k, 25)).collect()
}

pub fn nonneg_suite() -> Result<(), String> {
    for a in nonneg_grid() {
        let c = CoefficientSequence::geometric(Scalar::Rational(a.clone()));
        let got = nonneg_check(&c, 64);
        let want_nonneg = a >= q(-1, 1);
        match (&got, want_nonneg) {
            (NonnegResult::NonnegCertified, true) | (NonnegResult::NegativeWitness(_), false) => {}
            _ => return Err(format!("alpha {a}: {got:?}")),
        }
    }
    Ok(())
}

pub fn contains(iv: &RInterval, x: f64, tol: f64) -> bool {
    let lo = BigRational::from_float(x - tol).unwrap();
    let hi = BigRational::from_float(x + tol).unwrap();
    lo <= iv.lo && iv.hi <= hi
}

pub struct StepRootReport {
    pub negative: usize,
    pub classified: usize,
}

/// Negative step roots are exactly `x_1..x_{max_degree/2}`, all from
/// `1 - x - ... - x^(2n)`; nothing lies in `[-1, 1/2]` or `(1, 2)`; every
/// distinct root in `(1/2, 1]` gives a perfect set of dimension `1/(d + 1)` with
/// `d` the least degree at which it occurs.
pub fn step_root_structure(max_degree: usize) -> Result<StepRootReport, String> {
    use takagi_core::landsberg::{maxima, solve_xn};
    use takagi_core::littlewood::{is_all_minus_tail, real_roots, scan_records, ScanConfig};
    use takagi_core::step::Cardinality;

    let mut cfg = ScanConfig::new(max_degree);
    cfg.step_roots_only = true;
    let (_, recs) = scan_records(&cfg).map_err(|e| e.to_string())?;
    let mut negative = Vec::new();
    // (value, least degree) for distinct positive roots
    let mut positive: Vec<(Scalar, usize)> = Vec::new();
    for r in recs.iter().filter(|r| r.is_step_root) {
        let mid = (r.lo + r.hi) / 2.0;
        if (-1.0..=0.5).contains(&mid) || mid > 1.0 {
            return Err(format!("step root {mid} of {} outside the allowed set", r.poly().signs_string()));
        }
        let p = r.poly();
        let alpha = real_roots(&p)
            .into_iter()
            .find(|a| {
                let x = a.to_f64();
                x >= r.lo - 1e-12 && x <= r.hi + 1e-12
            })
            .ok_or_else(|| format!("no exact root of {} in [{}, {}]", p.signs_string(), r.lo, r.hi))?;
        if mid < 0.0 {
            if !is_all_minus_tail(&p) || r.degree % 2 != 0 {
                return Err(format!("negative step root from {}", p.signs_string()));
            }
            negative.push((r.degree, alpha));
        } else if !positive.iter().any(|(b, _)| b.overlaps(&alpha, 200)) {
            positive.push((alpha, r.degree));
        }
    }
    let want = max_degree / 2;
    if negative.len() != want {
        return Err(format!("{} negative step roots, expected {want}", negative.len()));
    }
    for (i, (deg, a)) in negative.iter().enumerate() {
        let xn = solve_xn(i + 1).root;
        if *deg != 2 * (i + 1) || !a.overlaps(&xn, 200) {
            return Err(format!("negative step root {} at degree {deg} is not x_{}", a.to_f64(), i + 1));
        }
    }
    for (a, d) in &positive {
        let r = maxima(a, 64).map_err(|e| format!("alpha {}: {e}", a.to_f64()))?;
        let dim = q(1, *d as i64 + 1);
        match &r.cardinality {
            Cardinality::ContinuumPerfectSet { hausdorff_dim, .. } if *hausdorff_dim == dim => {}
            other => return Err(format!("alpha {} (degree {d}): {other:?}, expected dimension {dim}", a.to_f64())),
        }
    }
    Ok(StepRootReport { negative: negative.len(), classified: positive.len() })
}
