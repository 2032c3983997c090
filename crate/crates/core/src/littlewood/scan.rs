//! Exhaustive scans over all Littlewood polynomials with `rho_0 = +1`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::fast;
use super::LittlewoodPoly;
use crate::scalar::{decimal, AlgebraicNumber, IntPoly, Rounding, RootValue};

pub const MAX_SCAN_DEGREE: usize = 24;

/// Roots and step roots are refined at least this far before binning.
const MIN_REFINE: f64 = 1.0 / (1u64 << 30) as f64;
/// Floating-point refinement stops here and exact arithmetic takes over.
const MAX_REFINE: f64 = 1.0 / (1u64 << 50) as f64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScanError {
    #[error("max degree {0} exceeds the scan budget of {MAX_SCAN_DEGREE}")]
    Budget(usize),
    #[error("max degree must be at least 1")]
    Empty,
    #[error("could not build a thread pool: {0}")]
    Pool(String),
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub max_degree: usize,
    /// Skip polynomials that cannot have step roots and count step roots only.
    pub step_roots_only: bool,
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
    /// Histogram bins per annulus component.
    pub bins: usize,
    /// Keep the root midpoints for gap analysis.
    pub keep_roots: bool,
}

impl ScanConfig {
    pub fn new(max_degree: usize) -> Self {
        Self { max_degree, step_roots_only: false, jobs: 0, bins: 200, keep_roots: false }
    }
}

/// Counts for one degree. Roots are distinct per polynomial unless the field
/// says otherwise.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DegreeCounts {
    pub degree: usize,
    pub polynomials: u64,
    pub positive_roots: u64,
    pub positive_roots_with_multiplicity: u64,
    pub negative_roots: u64,
    pub negative_roots_with_multiplicity: u64,
    pub positive_step_roots: u64,
    pub negative_step_roots: u64,
    /// Polynomials that needed the exact isolation path.
    pub exact_fallbacks: u64,
    /// Rational roots other than `+-1` (never expected).
    pub other_rational_roots: u64,
}

impl DegreeCounts {
    fn merge(&mut self, o: &Self) {
        self.polynomials += o.polynomials;
        self.positive_roots += o.positive_roots;
        self.positive_roots_with_multiplicity += o.positive_roots_with_multiplicity;
        self.negative_roots += o.negative_roots;
        self.negative_roots_with_multiplicity += o.negative_roots_with_multiplicity;
        self.positive_step_roots += o.positive_step_roots;
        self.negative_step_roots += o.negative_step_roots;
        self.exact_fallbacks += o.exact_fallbacks;
        self.other_rational_roots += o.other_rational_roots;
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "polynomials": self.polynomials,
            "positive_roots": self.positive_roots,
            "positive_roots_with_multiplicity": self.positive_roots_with_multiplicity,
            "negative_roots": self.negative_roots,
            "negative_roots_with_multiplicity": self.negative_roots_with_multiplicity,
            "positive_step_roots": self.positive_step_roots,
            "negative_step_roots": self.negative_step_roots,
            "exact_fallbacks": self.exact_fallbacks,
            "other_rational_roots": self.other_rational_roots,
        })
    }
}

/// Uniform bins over `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub lo: BigRational,
    pub hi: BigRational,
    pub counts: Vec<u64>,
    lo_f: f64,
    scale: f64,
}

impl Histogram {
    fn new(lo: BigRational, hi: BigRational, bins: usize) -> Self {
        let lo_f = rational_f64(&lo);
        let scale = bins as f64 / (rational_f64(&hi) - lo_f);
        Self { lo, hi, counts: vec![0; bins], lo_f, scale }
    }

    /// Bin index of `x`, exact near the edges.
    fn bin_f64(&self, x: f64) -> Option<usize> {
        let n = self.counts.len();
        let t = (x - self.lo_f) * self.scale;
        let k = if (t - t.round()).abs() > 1e-6 {
            t.floor()
        } else {
            let q = BigRational::from_float(x)?;
            let t = (q - &self.lo) * BigRational::from_integer(BigInt::from(n)) / (&self.hi - &self.lo);
            let f = t.floor().to_integer();
            num_traits::ToPrimitive::to_f64(&f)?
        };
        if k < 0.0 || k >= n as f64 {
            return None;
        }
        Some(k as usize)
    }

    /// Bin edges as exact rationals, `bins + 1` of them.
    pub fn edges(&self) -> Vec<BigRational> {
        let n = self.counts.len();
        let w = (&self.hi - &self.lo) / BigRational::from_integer(BigInt::from(n));
        (0..=n).map(|k| &self.lo + &w * BigRational::from_integer(BigInt::from(k))).collect()
    }

    fn merge(&mut self, o: &Self) {
        for (a, b) in self.counts.iter_mut().zip(&o.counts) {
            *a += b;
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lo": decimal::to_fraction(&self.lo),
            "hi": decimal::to_fraction(&self.hi),
            "counts": self.counts,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanSummary {
    pub max_degree: usize,
    /// Positive roots with multiplicity, summed over all polynomials.
    pub total_roots: u64,
    /// Distinct real roots per polynomial in both components, summed.
    pub total_real_roots: u64,
    /// Distinct positive and negative step roots per polynomial, summed.
    pub total_step_roots: u64,
    pub per_degree: Vec<DegreeCounts>,
    /// Indexed negative component first, then positive.
    pub root_histograms: [Histogram; 2],
    pub step_histograms: [Histogram; 2],
    /// Sorted root midpoints when requested.
    pub roots: Vec<f64>,
    pub step_roots: Vec<f64>,
}

impl ScanSummary {
    pub fn totals(&self) -> DegreeCounts {
        let mut t = DegreeCounts::default();
        for d in &self.per_degree {
            t.merge(d);
        }
        t
    }

    pub fn to_json(&self) -> Value {
        json!({
            "max_degree": self.max_degree,
            "total_roots": self.total_roots,
            "total_real_roots": self.total_real_roots,
            "total_step_roots": self.total_step_roots,
            "totals": self.totals().to_json(),
            "per_degree": self.per_degree.iter().map(|d| d.to_json()).collect::<Vec<_>>(),
            "root_histograms": { "negative": self.root_histograms[0].to_json(), "positive": self.root_histograms[1].to_json() },
            "step_histograms": { "negative": self.step_histograms[0].to_json(), "positive": self.step_histograms[1].to_json() },
        })
    }
}

/// A root found by a scan, bracketed by `[lo, hi]` in `f64`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanRecord {
    pub degree: usize,
    pub mask: u64,
    pub lo: f64,
    pub hi: f64,
    pub multiplicity: u32,
    pub is_step_root: bool,
}

impl ScanRecord {
    pub fn poly(&self) -> LittlewoodPoly {
        LittlewoodPoly::from_mask(self.degree, self.mask)
    }

    /// The root to `digits` significant digits, refined exactly.
    pub fn root_decimal(&self, digits: u32) -> String {
        if self.lo == self.hi {
            let q = BigRational::from_float(self.lo).expect("finite");
            return decimal::to_decimal(&q, digits, Rounding::Nearest);
        }
        let p = self.poly().to_int_poly();
        let lo = BigRational::from_float(self.lo).unwrap();
        let hi = BigRational::from_float(self.hi).unwrap();
        let bits = (digits as f64 * 3.33).ceil() as u32 + 16;
        match AlgebraicNumber::isolate(&p, &lo, &hi).map(|a| match a {
            RootValue::Algebraic(a) => a.refined(bits),
            r => r,
        }) {
            Ok(RootValue::Rational(q)) => decimal::to_decimal(&q, digits, Rounding::Nearest),
            Ok(RootValue::Algebraic(a)) => {
                let m = (a.lo() + a.hi()) / BigRational::from_integer(2.into());
                decimal::to_decimal(&m, digits, Rounding::Nearest)
            }
            Err(_) => format!("{:.17}", 0.5 * (self.lo + self.hi)),
        }
    }
}

struct Found {
    lo: f64,
    hi: f64,
    mult: u32,
    step: bool,
}

/// Step test at a rational root `a` of `rho`.
fn step_at_integer(rho: &[i64], a: i64) -> bool {
    let mut p = 0i64;
    let mut pw = 1i64;
    for k in 0..rho.len() - 1 {
        p += rho[k] * pw;
        if rho[k + 1] * p > 0 {
            return false;
        }
        pw *= a;
    }
    true
}

fn to_alpha(xl: f64, xh: f64, negative: bool, high: bool) -> (f64, f64) {
    let (a, b) = if high { ((1.0 / xh).next_down(), (1.0 / xl).next_up()) } else { (xl, xh) };
    if negative {
        (-b, -a)
    } else {
        (a, b)
    }
}

/// `q(x)` rewritten so that its roots with `|x|` in `(1/2, 1)` or `(1, 2)` and the
/// given sign become roots in `(1/2, 1)`.
fn transform(q: &[i64], negative: bool, high: bool) -> Vec<i64> {
    let d = q.len() - 1;
    let mut r = vec![0i64; d + 1];
    for (i, &c) in q.iter().enumerate() {
        let v = if negative && i % 2 == 1 { -c } else { c };
        if high {
            r[d - i] = v;
        } else {
            r[i] = v;
        }
    }
    r
}

/// Decides the step property of the root bracketed by `[xl, xh]` in the
/// transformed coordinate, refining the bracket as needed.
#[allow(clippy::too_many_arguments)]
fn step_test(
    rho: &[i64],
    r: &[i64],
    q: &[i64],
    xl: &mut f64,
    xh: &mut f64,
    slo: Ordering,
    negative: bool,
    high: bool,
) -> Option<bool> {
    let n = rho.len() - 1;
    if rho[1] != -1 {
        return Some(false);
    }
    loop {
        let (al, ah) = to_alpha(*xl, *xh, negative, high);
        let signs = fast::prefix_signs(&rho[..n], al, ah);
        let mut undecided = false;
        for k in 0..n {
            match signs[k] {
                Some(s) => {
                    let bad = match s {
                        Ordering::Greater => rho[k + 1] > 0,
                        Ordering::Less => rho[k + 1] < 0,
                        Ordering::Equal => false,
                    };
                    if bad {
                        return Some(false);
                    }
                }
                None => {
                    undecided = true;
                    break;
                }
            }
        }
        if !undecided {
            return Some(true);
        }
        if *xh - *xl <= MAX_REFINE {
            return exact_step(rho, q, al, ah);
        }
        let (a, b) = fast::bisect(r, *xl, *xh, slo);
        if a == b {
            return None;
        }
        *xl = a;
        *xh = b;
    }
}

fn rational_prefixes(rho: &[i64]) -> Vec<Vec<BigRational>> {
    (1..rho.len())
        .map(|k| rho[..k].iter().map(|&c| BigRational::from_integer(c.into())).collect())
        .collect()
}

/// Exact step decision for the unique root of `q` in `[al, ah]`.
fn exact_step(rho: &[i64], q: &[i64], al: f64, ah: f64) -> Option<bool> {
    let sqf = IntPoly::from_i64s(q).squarefree();
    let lo = BigRational::from_float(al)?;
    let hi = BigRational::from_float(ah)?;
    let a = match AlgebraicNumber::isolate(&sqf, &lo, &hi).ok()? {
        RootValue::Algebraic(a) => a,
        RootValue::Rational(_) => return None,
    };
    Some(exact_step_at(rho, &a))
}

fn exact_step_at(rho: &[i64], a: &AlgebraicNumber) -> bool {
    for (k, pk) in rational_prefixes(rho).iter().enumerate() {
        let s = a.sign_of(pk);
        let bad = match s {
            Ordering::Greater => rho[k + 1] > 0,
            Ordering::Less => rho[k + 1] < 0,
            Ordering::Equal => false,
        };
        if bad {
            return false;
        }
    }
    true
}

/// Refines until `settled` accepts the bracket or floating point runs out.
fn refine(r: &[i64], xl: &mut f64, xh: &mut f64, slo: Ordering, negative: bool, high: bool, settled: &dyn Fn(f64, f64) -> bool) {
    loop {
        let (al, ah) = to_alpha(*xl, *xh, negative, high);
        if (*xh - *xl <= MIN_REFINE && settled(al, ah)) || *xh - *xl <= MAX_REFINE {
            return;
        }
        let (a, b) = fast::bisect(r, *xl, *xh, slo);
        if a == b || (a == *xl && b == *xh) {
            return;
        }
        *xl = a;
        *xh = b;
    }
}

/// Roots of `rho` in the annulus by certified floating point; `None` asks for the exact path.
fn analyze_fast(
    rho: &[i64],
    q: &[i64],
    binom: &[Vec<i128>],
    need_step: bool,
    settled: &dyn Fn(f64, f64) -> bool,
    out: &mut Vec<Found>,
) -> Option<()> {
    if q.len() <= 1 {
        return Some(());
    }
    for negative in [true, false] {
        for high in [false, true] {
            let r = transform(q, negative, high);
            for (mut xl, mut xh) in fast::isolate_upper_half(&r, binom)? {
                let slo = fast::sign_at(&r, xl);
                if slo == Ordering::Equal {
                    return None;
                }
                refine(&r, &mut xl, &mut xh, slo, negative, high, settled);
                let step = if need_step {
                    step_test(rho, &r, q, &mut xl, &mut xh, slo, negative, high)?
                } else {
                    false
                };
                let (lo, hi) = to_alpha(xl, xh, negative, high);
                out.push(Found { lo, hi, mult: 1, step });
            }
        }
    }
    Some(())
}

fn rational_f64(q: &BigRational) -> f64 {
    crate::scalar::Scalar::Rational(q.clone()).to_f64()
}

fn f64_down(q: &BigRational) -> f64 {
    rational_f64(q).next_down()
}

fn f64_up(q: &BigRational) -> f64 {
    rational_f64(q).next_up()
}

/// Roots of `q` in the annulus by exact isolation.
fn analyze_exact(rho: &[i64], q: &[i64], need_step: bool, out: &mut Vec<Found>, other_rational: &mut u64) {
    let ip = IntPoly::from_i64s(q);
    if ip.degree().unwrap_or(0) == 0 {
        return;
    }
    let sqf = ip.squarefree().primitive();
    let width = BigRational::new(BigInt::one(), BigInt::one() << 40u32);
    let q2 = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    let mut derivs = vec![ip.derivative()];
    while derivs.last().unwrap().degree().unwrap_or(0) > 0 {
        let d = derivs.last().unwrap().derivative();
        derivs.push(d);
    }
    let as_rat = |p: &IntPoly| -> Vec<BigRational> { p.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect() };
    for (lo, hi) in [(q2(-2, 1), q2(-1, 2)), (q2(1, 2), q2(2, 1))] {
        for (a, b) in sqf.isolate_roots(&lo, &hi, &width) {
            if a == b {
                *other_rational += 1;
                continue;
            }
            let alg = AlgebraicNumber::from_parts(sqf.clone(), a.clone(), b.clone());
            let mult = 1 + derivs.iter().take_while(|d| alg.sign_of(&as_rat(d)) == Ordering::Equal).count() as u32;
            let step = need_step && rho[1] == -1 && exact_step_at(rho, &alg);
            out.push(Found { lo: f64_down(&a), hi: f64_up(&b), mult, step });
        }
    }
}

/// All roots of the degree-`n` polynomial `rho` in the annulus.
fn analyze(rho: &[i64], binom: &[Vec<i128>], need_step: bool, settled: &dyn Fn(f64, f64) -> bool, counts: &mut DegreeCounts) -> Vec<Found> {
    let mut q = rho.to_vec();
    let m_plus = fast::strip_root(&mut q, 1);
    let m_minus = fast::strip_root(&mut q, -1);
    let mut out = Vec::new();
    if m_minus > 0 {
        out.push(Found { lo: -1.0, hi: -1.0, mult: m_minus, step: need_step && step_at_integer(rho, -1) });
    }
    if m_plus > 0 {
        out.push(Found { lo: 1.0, hi: 1.0, mult: m_plus, step: need_step && step_at_integer(rho, 1) });
    }
    let mut found = Vec::new();
    if analyze_fast(rho, &q, binom, need_step, settled, &mut found).is_none() {
        found.clear();
        counts.exact_fallbacks += 1;
        analyze_exact(rho, &q, need_step, &mut found, &mut counts.other_rational_roots);
    }
    out.append(&mut found);
    out
}

struct Acc {
    counts: DegreeCounts,
    hist: [Histogram; 2],
    step_hist: [Histogram; 2],
    roots: Vec<f64>,
    step_roots: Vec<f64>,
    records: Vec<ScanRecord>,
}

fn histograms(bins: usize) -> [Histogram; 2] {
    let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    [Histogram::new(q(-2, 1), q(-1, 2), bins), Histogram::new(q(1, 2), q(2, 1), bins)]
}

impl Acc {
    fn new(degree: usize, bins: usize) -> Self {
        Self {
            counts: DegreeCounts { degree, ..Default::default() },
            hist: histograms(bins),
            step_hist: histograms(bins),
            roots: Vec::new(),
            step_roots: Vec::new(),
            records: Vec::new(),
        }
    }

    fn merge(mut self, o: Self) -> Self {
        self.counts.merge(&o.counts);
        for i in 0..2 {
            self.hist[i].merge(&o.hist[i]);
            self.step_hist[i].merge(&o.step_hist[i]);
        }
        self.roots.extend(o.roots);
        self.step_roots.extend(o.step_roots);
        self.records.extend(o.records);
        self
    }
}

fn process(acc: &mut Acc, degree: usize, mask: u64, cfg: &ScanConfig, binom: &[Vec<i128>], records: bool) {
    let p = LittlewoodPoly::from_mask(degree, mask);
    let rho = p.to_i64s();
    acc.counts.polynomials += 1;
    let hist = &acc.hist;
    let settled = |lo: f64, hi: f64| {
        let c = usize::from(lo > 0.0);
        hist[c].bin_f64(lo) == hist[c].bin_f64(hi)
    };
    let found = analyze(&rho, binom, true, &settled, &mut acc.counts);
    for f in found {
        let mid = 0.5 * (f.lo + f.hi);
        let c = usize::from(mid > 0.0);
        if !cfg.step_roots_only {
            if c == 1 {
                acc.counts.positive_roots += 1;
                acc.counts.positive_roots_with_multiplicity += f.mult as u64;
            } else {
                acc.counts.negative_roots += 1;
                acc.counts.negative_roots_with_multiplicity += f.mult as u64;
            }
            if let Some(b) = acc.hist[c].bin_f64(mid) {
                acc.hist[c].counts[b] += 1;
            }
            if cfg.keep_roots {
                acc.roots.push(mid);
            }
        }
        if f.step {
            if c == 1 {
                acc.counts.positive_step_roots += 1;
            } else {
                acc.counts.negative_step_roots += 1;
            }
            if let Some(b) = acc.step_hist[c].bin_f64(mid) {
                acc.step_hist[c].counts[b] += 1;
            }
            if cfg.keep_roots {
                acc.step_roots.push(mid);
            }
        }
        if records && (f.step || !cfg.step_roots_only) {
            acc.records.push(ScanRecord { degree, mask, lo: f.lo, hi: f.hi, multiplicity: f.mult, is_step_root: f.step });
        }
    }
}

const CHUNK: u64 = 1 << 12;

fn run_degree(degree: usize, cfg: &ScanConfig, binom: &[Vec<i128>], records: bool) -> Acc {
    let total = 1u64 << degree;
    let chunks = total.div_ceil(CHUNK);
    let parts: Vec<Acc> = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let mut acc = Acc::new(degree, cfg.bins);
            for mask in ci * CHUNK..((ci + 1) * CHUNK).min(total) {
                // P_0 = 1 > 0 forces rho_1 = -1 for any step root
                if cfg.step_roots_only && mask & 1 == 0 {
                    continue;
                }
                process(&mut acc, degree, mask, cfg, binom, records);
            }
            acc
        })
        .collect();
    let mut it = parts.into_iter();
    let first = it.next().unwrap_or_else(|| Acc::new(degree, cfg.bins));
    it.fold(first, Acc::merge)
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, ScanError> {
    if jobs == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| ScanError::Pool(e.to_string()))?;
    Ok(pool.install(f))
}

fn check(cfg: &ScanConfig) -> Result<(), ScanError> {
    if cfg.max_degree == 0 {
        return Err(ScanError::Empty);
    }
    if cfg.max_degree > MAX_SCAN_DEGREE {
        return Err(ScanError::Budget(cfg.max_degree));
    }
    Ok(())
}

fn summarize(cfg: &ScanConfig, accs: Vec<Acc>) -> (ScanSummary, Vec<ScanRecord>) {
    let mut hist = histograms(cfg.bins);
    let mut step_hist = histograms(cfg.bins);
    let mut roots = Vec::new();
    let mut step_roots = Vec::new();
    let mut per_degree = Vec::new();
    let mut records = Vec::new();
    for a in accs {
        for i in 0..2 {
            hist[i].merge(&a.hist[i]);
            step_hist[i].merge(&a.step_hist[i]);
        }
        roots.extend(a.roots);
        step_roots.extend(a.step_roots);
        records.extend(a.records);
        per_degree.push(a.counts);
    }
    roots.sort_by(f64::total_cmp);
    step_roots.sort_by(f64::total_cmp);
    let total_roots = per_degree.iter().map(|d| d.positive_roots_with_multiplicity).sum();
    let total_real_roots = per_degree.iter().map(|d| d.positive_roots + d.negative_roots).sum();
    let total_step_roots = per_degree.iter().map(|d| d.positive_step_roots + d.negative_step_roots).sum();
    let summary = ScanSummary {
        max_degree: cfg.max_degree,
        total_roots,
        total_real_roots,
        total_step_roots,
        per_degree,
        root_histograms: hist,
        step_histograms: step_hist,
        roots,
        step_roots,
    };
    (summary, records)
}

/// Scans every degree from 1 to `cfg.max_degree`.
pub fn scan(cfg: &ScanConfig) -> Result<ScanSummary, ScanError> {
    check(cfg)?;
    let binom = fast::binomial_table(cfg.max_degree + 1);
    let accs = with_pool(cfg.jobs, || (1..=cfg.max_degree).map(|d| run_degree(d, cfg, &binom, false)).collect::<Vec<_>>())?;
    Ok(summarize(cfg, accs).0)
}

/// Like [`scan`], also returning every root found, ordered by degree and mask.
pub fn scan_records(cfg: &ScanConfig) -> Result<(ScanSummary, Vec<ScanRecord>), ScanError> {
    check(cfg)?;
    let binom = fast::binomial_table(cfg.max_degree + 1);
    let accs = with_pool(cfg.jobs, || (1..=cfg.max_degree).map(|d| run_degree(d, cfg, &binom, true)).collect::<Vec<_>>())?;
    Ok(summarize(cfg, accs))
}

/// Maximal subintervals of `[lo, hi]` of width at least `resolution` that
/// contain none of the sorted points `roots`.
pub fn closure_gaps(roots: &[f64], lo: f64, hi: f64, resolution: f64) -> Vec<(f64, f64)> {
    let mut gaps = Vec::new();
    let mut prev = lo;
    for &r in roots.iter().filter(|r| **r >= lo && **r <= hi) {
        if r - prev >= resolution {
            gaps.push((prev, r));
        }
        prev = prev.max(r);
    }
    if hi - prev >= resolution {
        gaps.push((prev, hi));
    }
    gaps
}
