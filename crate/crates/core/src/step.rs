//! The step-condition recursions and classification of extremizer sets.
//!
//! A sign sequence `rho` with `rho_0 = +1` describes a maximizer of
//! `f = sum c_m phi(2^m .)` in `[0, 1/2]` exactly when
//! `rho_n * S_{n-1} <= 0` for all `n >= 1`, where `S_n = sum_{m <= n} 2^m c_m rho_m`.
//! Minimizers satisfy the mirrored condition. The flat and sharp recursions
//! pick the largest and the smallest such point.
//!
//! Finite computation is turned into a statement about the whole sequence by
//! tail certificates (see [`TailCertificate`]).

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::StepError;
use crate::scalar::{decimal, Rounding, Scalar, SignResult, DECIMAL_DIGITS};
use crate::takagi::{eval_from_rademacher, eval_periodic, eval_series, eval_truncated, t_map, CoefficientSequence, Sign, SignSequence, TValue};

/// Default recursion depth.
pub const DEFAULT_DEPTH: usize = 64;

/// Largest zero set enumerated explicitly when counting extremizers.
const MAX_ENUMERATED_ZEROS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Ties at `S = 0` pick `-1`: the largest extremizer in `[0, 1/2]`.
    Flat,
    /// Ties at `S = 0` pick `+1`: the smallest extremizer in `[0, 1/2]`.
    Sharp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Extremum {
    Max,
    Min,
}

impl Extremum {
    pub fn as_str(self) -> &'static str {
        match self {
            Extremum::Max => "max",
            Extremum::Min => "min",
        }
    }
}

/// Why the computed prefix determines the whole sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TailCertificate {
    /// Geometric coefficients: the normalised residual `S_n / alpha^n` (and the
    /// parity of `n` when `alpha < 0`) at `repeat` equals the one at `first`.
    Recurrence { first: usize, repeat: usize },
    /// `|S_from|` exceeds the total weight of all later terms.
    Absorbed { from: usize },
    /// Every later term pushes `S` further from zero.
    Reinforcing { from: usize },
    /// Later weights are positive and nondecreasing and `0 < |S_from| < a_{from+1}`.
    Alternating { from: usize },
    /// Geometric coefficients with `|alpha| > 1`: the residual contracts onto a
    /// periodic orbit whose margins dominate the remaining deviation.
    Contracting { from: usize, period: usize },
    /// Coefficients vanish after `from` and `S_from = 0`.
    Flat { from: usize },
}

impl TailCertificate {
    /// Last index of the computed prefix the certificate refers to.
    fn needs_prefix(&self) -> usize {
        match *self {
            Self::Recurrence { repeat, .. } => repeat,
            Self::Contracting { from, period } => from + period,
            Self::Absorbed { from } | Self::Reinforcing { from } | Self::Alternating { from } | Self::Flat { from } => from + 1,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Recurrence { first, repeat } => format!("state recurrence {first} -> {repeat}"),
            Self::Absorbed { from } => format!("absorbed from {from}"),
            Self::Reinforcing { from } => format!("reinforcing from {from}"),
            Self::Alternating { from } => format!("alternating from {from}"),
            Self::Contracting { from, period } => format!("contracting from {from} with period {period}"),
            Self::Flat { from } => format!("flat from {from}"),
        }
    }
}

/// Indices `n` with `S_n = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroSet {
    /// Every zero, certified.
    Finite(Vec<usize>),
    /// `initial` together with `z + k * period` for `z` in `cycle`, `k >= 0`.
    Periodic { initial: Vec<usize>, cycle: Vec<usize>, period: usize },
    /// `initial` together with every index from `from` on.
    Cofinite { initial: Vec<usize>, from: usize },
    /// Only the zeros observed up to the depth.
    Unknown(Vec<usize>),
}

/// Record of one run of a recursion.
#[derive(Clone, Debug)]
pub struct StepTrace {
    pub kind: Extremum,
    pub variant: Variant,
    /// The full sequence when certified, otherwise the computed prefix.
    pub signs: SignSequence,
    /// The computed prefix: up to `depth`, or shorter once a certificate is found.
    pub observed: Vec<Sign>,
    /// `S_n`, one per observed sign.
    pub partial_sums: Vec<Scalar>,
    pub zero_indices: Vec<usize>,
    pub unresolved_indices: Vec<usize>,
    pub depth: usize,
    pub certificate: Option<TailCertificate>,
    pub zero_set: ZeroSet,
}

/// Point of `[0, 1]`, exact or bracketed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    Exact(BigRational),
    Approx { lo: BigRational, hi: BigRational },
}

impl Location {
    fn from_t(t: TValue) -> Self {
        match t {
            TValue::Exact(q) => Location::Exact(q),
            other => {
                let (lo, hi) = other.bounds();
                Location::Approx { lo, hi }
            }
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            Location::Exact(q) => Some(q),
            _ => None,
        }
    }

    pub fn bounds(&self) -> (BigRational, BigRational) {
        match self {
            Location::Exact(q) => (q.clone(), q.clone()),
            Location::Approx { lo, hi } => (lo.clone(), hi.clone()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.bounds();
        Scalar::Rational((lo + hi) / BigRational::from_integer(2.into())).to_f64()
    }

    pub fn to_json(&self) -> Value {
        match self {
            Location::Exact(q) => json!({
                "num": q.numer().to_string(),
                "den": q.denom().to_string(),
                "decimal": decimal::to_decimal(q, DECIMAL_DIGITS, Rounding::Nearest),
            }),
            Location::Approx { lo, hi } => json!({
                "lo": decimal::to_fraction(lo),
                "hi": decimal::to_fraction(hi),
                "decimal_lo": decimal::to_decimal(lo, DECIMAL_DIGITS, Rounding::Floor),
                "decimal_hi": decimal::to_decimal(hi, DECIMAL_DIGITS, Rounding::Ceil),
            }),
        }
    }
}

/// Size of an extremizer set in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cardinality {
    Finite(usize),
    ContinuumPerfectSet { block_length: usize, hausdorff_dim: BigRational },
    /// The set contains a nondegenerate interval.
    ContinuumContainsInterval,
    UnknownBeyondDepth(usize),
}

impl Cardinality {
    pub fn to_json(&self) -> Value {
        match self {
            Self::Finite(n) => json!({ "type": "finite", "count": n }),
            Self::ContinuumPerfectSet { block_length, hausdorff_dim } => json!({
                "type": "continuum_perfect_set",
                "block_length": block_length,
                "hausdorff_dim": decimal::to_fraction(hausdorff_dim),
            }),
            Self::ContinuumContainsInterval => json!({ "type": "continuum_contains_interval", "hausdorff_dim": "1" }),
            Self::UnknownBeyondDepth(d) => json!({ "type": "unknown_beyond_depth", "depth": d }),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Finite(n) => format!("finite({n})"),
            Self::ContinuumPerfectSet { block_length, .. } => format!("continuum(block {block_length})"),
            Self::ContinuumContainsInterval => "continuum(interval)".to_string(),
            Self::UnknownBeyondDepth(d) => format!("unknown(depth {d})"),
        }
    }

    /// Hausdorff dimension when known.
    pub fn dimension(&self) -> Option<BigRational> {
        match self {
            Self::Finite(_) => Some(BigRational::zero()),
            Self::ContinuumPerfectSet { hausdorff_dim, .. } => Some(hausdorff_dim.clone()),
            Self::ContinuumContainsInterval => Some(BigRational::one()),
            Self::UnknownBeyondDepth(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Extremizer {
    pub signs: SignSequence,
    pub location: Location,
}

#[derive(Clone, Debug)]
pub struct ExtremaReport {
    pub kind: Extremum,
    pub smallest: Extremizer,
    pub largest: Extremizer,
    /// All extremizers in `[0, 1]`, when the set is finite and exactly known.
    pub locations: Option<Vec<BigRational>>,
    pub value: Scalar,
    pub cardinality: Cardinality,
    /// Whether a block structure would reduce to constant blocks, producing
    /// dyadic duplicates.
    pub dyadic_degenerate: bool,
    pub evidence: StepTrace,
    pub flat_evidence: StepTrace,
}

impl ExtremaReport {
    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.as_str(),
            "smallest": { "signs": self.smallest.signs.to_json(), "location": self.smallest.location.to_json() },
            "largest": { "signs": self.largest.signs.to_json(), "location": self.largest.location.to_json() },
            "locations": self.locations.as_ref().map(|v| v.iter().map(|q| Location::Exact(q.clone()).to_json()).collect::<Vec<_>>()),
            "value": self.value.to_json(),
            "value_decimal": self.value.to_decimal(DECIMAL_DIGITS),
            "cardinality": self.cardinality.to_json(),
            "certificate": self.evidence.certificate.as_ref().map(|c| c.describe()),
            "zero_indices": self.evidence.zero_indices,
            "depth": self.evidence.depth,
        })
    }
}

/// Result of checking the step condition on a given sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepCheck {
    Holds,
    ViolatedAt(usize),
    UnresolvedAt(usize),
}

/// Result of the nonnegativity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonnegResult {
    NonnegCertified,
    NegativeWitness(Location),
    Unknown(usize),
}

fn ordering_of(s: &SignResult, index: usize) -> Result<Ordering, StepError> {
    s.as_ordering().ok_or(StepError::Unresolved { index })
}


fn times(o: Ordering, s: Sign) -> Ordering {
    match s {
        Sign::Plus => o,
        Sign::Minus => o.reverse(),
    }
}

/// Checks `rho_n * S_{n-1} <= 0` for `1 <= n <= depth`.
pub fn check_step_condition(c: &CoefficientSequence, rho: &SignSequence, depth: usize) -> StepCheck {
    check_condition(c, rho, depth, Extremum::Max)
}

/// Checks the minimizer condition `rho_n * S_{n-1} >= 0` for `1 <= n <= depth`.
pub fn check_min_step_condition(c: &CoefficientSequence, rho: &SignSequence, depth: usize) -> StepCheck {
    check_condition(c, rho, depth, Extremum::Min)
}

fn check_condition(c: &CoefficientSequence, rho: &SignSequence, depth: usize, kind: Extremum) -> StepCheck {
    let Some(r0) = rho.get(0) else {
        return StepCheck::Holds;
    };
    let mut s = c.weighted(0).mul_rational(&BigRational::from_integer(r0.value().into()));
    for n in 1..=depth {
        let Some(r) = rho.get(n) else {
            break;
        };
        let sg = match s.sign().as_ordering() {
            Some(o) => o,
            None => return StepCheck::UnresolvedAt(n),
        };
        let prod = times(sg, r);
        let bad = match kind {
            Extremum::Max => prod == Ordering::Greater,
            Extremum::Min => prod == Ordering::Less,
        };
        if bad {
            return StepCheck::ViolatedAt(n);
        }
        let a = c.weighted(n);
        s = s.add(&a.mul_rational(&BigRational::from_integer(r.value().into())));
    }
    StepCheck::Holds
}

struct GeometricState {
    alpha: Scalar,
    inv_alpha: Scalar,
    negative: bool,
    big: bool,
}

struct Recursion<'a> {
    c: &'a CoefficientSequence,
    kind: Extremum,
    variant: Variant,
    depth: usize,
    geo: Option<GeometricState>,
    zero_free: bool,
}

impl<'a> Recursion<'a> {
    fn new(c: &'a CoefficientSequence, kind: Extremum, variant: Variant, depth: usize) -> Result<Self, StepError> {
        let geo = match c.alpha() {
            Some(alpha) if alpha.is_exact() => {
                let s = alpha.sign();
                if s == SignResult::Zero {
                    None
                } else {
                    let big = alpha.abs().compare(&Scalar::one()) == SignResult::Positive;
                    Some(GeometricState {
                        alpha: alpha.clone(),
                        inv_alpha: alpha.recip()?,
                        negative: s == SignResult::Negative,
                        big,
                    })
                }
            }
            _ => None,
        };
        let zero_free = c.alpha().is_some_and(no_littlewood_root);
        Ok(Self { c, kind, variant, depth, geo, zero_free })
    }

    /// Orientation: decisions look at the sign of `S` for maxima and of `-S` for minima.
    fn oriented(&self, o: Ordering) -> Ordering {
        match self.kind {
            Extremum::Max => o,
            Extremum::Min => o.reverse(),
        }
    }

    fn decide(&self, d: Ordering) -> Sign {
        match d {
            Ordering::Less => Sign::Plus,
            Ordering::Greater => Sign::Minus,
            Ordering::Equal => match self.variant {
                Variant::Flat => Sign::Minus,
                Variant::Sharp => Sign::Plus,
            },
        }
    }

    fn run(&self) -> Result<StepTrace, StepError> {
        let c = self.c;
        let mut observed = vec![Sign::Plus];
        let mut sums = vec![c.weighted(0)];
        let mut weight = c.weighted(0);
        let mut zeros = Vec::new();
        let mut states: Vec<Scalar> = Vec::new();
        let mut cert: Option<TailCertificate> = None;
        let mut rational_states: HashMap<(BigRational, bool), usize> = HashMap::new();
        if self.geo.is_some() {
            states.push(Scalar::one());
        }
        let eventual = c.eventual_sign();
        let monotone = c.monotone_from();
        for n in 0..=self.depth {
            let s_n = sums[n].clone();
            let sg = ordering_of(&s_n.sign(), n)?;
            if sg == Ordering::Equal {
                zeros.push(n);
            }
            let d = self.oriented(sg);
            if cert.is_none() && n < self.depth {
                cert = self.certify(n, &s_n, d, &observed, &states, &mut rational_states, eventual, monotone);
            }
            if n == self.depth || cert.as_ref().is_some_and(|c| c.needs_prefix() <= n) {
                break;
            }
            let next = self.decide(d);
            observed.push(next);
            weight = match &self.geo {
                Some(g) => weight.mul(&g.alpha),
                None => c.weighted(n + 1),
            };
            let term = match next {
                Sign::Plus => weight.clone(),
                Sign::Minus => weight.neg(),
            };
            sums.push(s_n.add(&term));
            if let Some(g) = &self.geo {
                let u = states[n].mul(&g.inv_alpha).add(&Scalar::from_int(next.value()));
                states.push(u);
            }
        }
        if cert.is_none() {
            if let Some(g) = &self.geo {
                if g.big {
                    cert = self.contracting(self.depth, &observed, &states);
                }
            }
        }
        let (signs, zero_set) = self.assemble(&observed, &zeros, cert.as_ref());
        Ok(StepTrace {
            kind: self.kind,
            variant: self.variant,
            signs,
            observed,
            partial_sums: sums,
            zero_indices: zeros,
            unresolved_indices: Vec::new(),
            depth: self.depth,
            certificate: cert,
            zero_set,
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn certify(
        &self,
        n: usize,
        s_n: &Scalar,
        d: Ordering,
        observed: &[Sign],
        states: &[Scalar],
        rational_states: &mut HashMap<(BigRational, bool), usize>,
        eventual: Option<(usize, Sign)>,
        monotone: Option<usize>,
    ) -> Option<TailCertificate> {
        let c = self.c;
        if let Some(w) = c.weighted_tail(n) {
            if w.is_zero() && d == Ordering::Equal {
                return Some(TailCertificate::Flat { from: n });
            }
            if d != Ordering::Equal {
                let e = s_n.enclosure(64);
                let low = if e.lo.is_positive() { e.lo.clone() } else { -e.hi.clone() };
                if low > w {
                    return Some(TailCertificate::Absorbed { from: n });
                }
            }
        }
        if d != Ordering::Equal {
            if let Some((m, s)) = eventual {
                let o = match self.kind {
                    Extremum::Max => s,
                    Extremum::Min => s.flip(),
                };
                if n + 1 >= m && o == Sign::Minus {
                    return Some(TailCertificate::Reinforcing { from: n });
                }
            }
            if let (Some(m), Extremum::Max) = (monotone, self.kind) {
                if n + 1 >= m {
                    let next = c.weighted(n + 1);
                    if s_n.abs().compare(&next) == SignResult::Negative {
                        return Some(TailCertificate::Alternating { from: n });
                    }
                }
            }
        }
        if let Some(g) = &self.geo {
            let u = &states[n];
            let parity = g.negative && n % 2 == 1;
            if let Some(q) = u.as_rational() {
                if let Some(&k) = rational_states.get(&(q.clone(), parity)) {
                    return Some(TailCertificate::Recurrence { first: k, repeat: n });
                }
                rational_states.insert((q.clone(), parity), n);
            } else {
                let e = u.enclosure(64);
                for k in 0..n {
                    if g.negative && (k % 2 == 1) != parity {
                        continue;
                    }
                    if states[k].enclosure(64).overlaps(&e) && states[k].compare(u) == SignResult::Zero {
                        return Some(TailCertificate::Recurrence { first: k, repeat: n });
                    }
                }
            }
            if g.big && n >= 8 && n % 8 == 0 {
                if let Some(cert) = self.contracting(n, observed, states) {
                    return Some(cert);
                }
            }
        }
        None
    }

    /// Looks for a contracting periodic pattern in the signs `rho_{N+1} ..= rho_n`.
    fn contracting(&self, n: usize, observed: &[Sign], states: &[Scalar]) -> Option<TailCertificate> {
        let g = self.geo.as_ref()?;
        let step = if g.negative { 2 } else { 1 };
        let mut p = step;
        while 3 * p <= n {
            let periodic = (n + 1 - 2 * p..=n - p).all(|i| observed[i] == observed[i + p]);
            if periodic {
                let start = n - p;
                if self.verify_contracting(start, p, observed, states) {
                    return Some(TailCertificate::Contracting { from: start, period: p });
                }
            }
            p += step;
        }
        None
    }

    fn verify_contracting(&self, start: usize, p: usize, observed: &[Sign], states: &[Scalar]) -> bool {
        let g = self.geo.as_ref().unwrap();
        let alpha = &g.alpha;
        let block: Vec<Sign> = observed[start + 1..=start + p].to_vec();
        // fixed point of the p-step residual map: W_0 = sum_j beta_j alpha^j / (alpha^p - 1)
        let mut num = Scalar::zero();
        let mut pw = Scalar::one();
        for b in &block {
            pw = pw.mul(alpha);
            num = num.add(&pw.mul_rational(&BigRational::from_integer(b.value().into())));
        }
        let denom = pw.sub(&Scalar::one());
        let Ok(w0) = num.checked_div(&denom) else {
            return false;
        };
        let delta = states[start].sub(&w0).abs();
        let abs_alpha = alpha.abs();
        let mut w = w0;
        let mut scale = Scalar::one();
        for j in 0..p {
            // at index start + j the decision must produce block[j]
            let Some(ws) = w.sign().as_ordering() else {
                return false;
            };
            if ws == Ordering::Equal {
                return false;
            }
            let mut s_sign = ws;
            if g.negative && (start + j) % 2 == 1 {
                s_sign = s_sign.reverse();
            }
            let d = self.oriented(s_sign);
            if self.decide(d) != block[j] {
                return false;
            }
            let margin = w.abs().mul(&scale).sub(&delta);
            if margin.sign() != SignResult::Positive {
                return false;
            }
            w = w.mul(&g.inv_alpha).add(&Scalar::from_int(block[j].value()));
            scale = scale.mul(&abs_alpha);
        }
        true
    }

    fn assemble(&self, observed: &[Sign], zeros: &[usize], cert: Option<&TailCertificate>) -> (SignSequence, ZeroSet) {
        let finite = || SignSequence::finite(observed.to_vec());
        let before = |k: usize| zeros.iter().copied().filter(|&z| z <= k).collect::<Vec<_>>();
        let Some(cert) = cert else {
            if self.zero_free && zeros.is_empty() {
                return (finite(), ZeroSet::Finite(Vec::new()));
            }
            return (finite(), ZeroSet::Unknown(zeros.to_vec()));
        };
        match *cert {
            TailCertificate::Recurrence { first, repeat } => {
                let block = observed[first + 1..=repeat].to_vec();
                let seq = SignSequence::with_period(observed[..=repeat].to_vec(), first + 1, block).expect("consistent period");
                let initial: Vec<usize> = zeros.iter().copied().filter(|&z| z < first).collect();
                let cycle: Vec<usize> = zeros.iter().copied().filter(|&z| z >= first && z < repeat).collect();
                let zs = if cycle.is_empty() {
                    ZeroSet::Finite(initial)
                } else {
                    ZeroSet::Periodic { initial, cycle, period: repeat - first }
                };
                (seq, zs)
            }
            TailCertificate::Absorbed { from } | TailCertificate::Reinforcing { from } => {
                let s = observed[from + 1];
                let seq = SignSequence::eventually(observed[..=from].to_vec(), vec![s]);
                (seq, ZeroSet::Finite(before(from)))
            }
            TailCertificate::Alternating { from } => {
                let s = observed[from + 1];
                let seq = SignSequence::eventually(observed[..=from].to_vec(), vec![s, s.flip()]);
                (seq, ZeroSet::Finite(before(from)))
            }
            TailCertificate::Contracting { from, period } => {
                let block = observed[from + 1..=from + period].to_vec();
                let seq = SignSequence::eventually(observed[..=from].to_vec(), block);
                (seq, ZeroSet::Finite(before(from)))
            }
            TailCertificate::Flat { from } => {
                let s = self.decide(Ordering::Equal);
                let seq = SignSequence::eventually(observed[..=from].to_vec(), vec![s]);
                (seq, ZeroSet::Cofinite { initial: before(from), from })
            }
        }
    }
}

fn excludes_half(l: &Location) -> bool {
    let (lo, hi) = l.bounds();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    hi < half || lo > half
}

/// True when no polynomial with coefficients `+-1` vanishes at `alpha`, so every
/// partial sum of a geometric sequence is nonzero.
///
/// A root of such a polynomial has a primitive minimal polynomial with leading
/// and constant coefficients `+-1`. This is decided for rationals and for
/// generators of irreducible quadratics.
fn no_littlewood_root(alpha: &Scalar) -> bool {
    match alpha {
        Scalar::Rational(q) => !q.abs().is_one(),
        Scalar::Algebraic(e) if e.is_generator() => {
            let p = e.field().poly();
            if p.degree() != Some(2) {
                return false;
            }
            let [c, b, a] = [p.coeff(0), p.coeff(1), p.coeff(2)];
            let disc = &b * &b - BigInt::from(4) * &a * &c;
            let irreducible = disc.is_negative() || {
                let r = disc.sqrt();
                &r * &r != disc
            };
            irreducible && !(a.abs().is_one() && c.abs().is_one())
        }
        _ => false,
    }
}

fn run(c: &CoefficientSequence, kind: Extremum, variant: Variant, depth: usize) -> Result<StepTrace, StepError> {
    if depth < 1 {
        return Err(StepError::Unresolved { index: 0 });
    }
    if let Some(a) = c.alpha() {
        let lo = a.compare(&Scalar::from_int(-2));
        let hi = a.compare(&Scalar::from_int(2));
        if lo != SignResult::Positive || hi != SignResult::Negative {
            return Err(StepError::AlphaOutOfRange);
        }
    }
    Recursion::new(c, kind, variant, depth)?.run()
}

/// The maximizer recursion (`rho` flat or sharp) to the given depth.
pub fn build_rho(c: &CoefficientSequence, variant: Variant, depth: usize) -> Result<StepTrace, StepError> {
    run(c, Extremum::Max, variant, depth)
}

/// The minimizer recursion (`lambda` flat or sharp) to the given depth.
pub fn build_lambda(c: &CoefficientSequence, variant: Variant, depth: usize) -> Result<StepTrace, StepError> {
    run(c, Extremum::Min, variant, depth)
}

/// Replaces signs on each segment between consecutive zeros by `sigma_i` times
/// the sharp sequence.
fn segment_variant(sharp: &SignSequence, zeros: &[usize], flips: u32) -> SignSequence {
    let flip_at = |m: usize| -> bool {
        // segment i covers (z_{i-1}, z_i]; segment 0 is never flipped
        let seg = zeros.iter().filter(|&&z| z < m).count();
        seg > 0 && (flips >> (seg - 1)) & 1 == 1
    };
    let p = sharp.period().expect("certified sequence");
    let last = zeros.last().copied().unwrap_or(0);
    let horizon = (last + 1).max(p.start);
    let mut pre = Vec::with_capacity(horizon);
    for m in 0..horizon {
        let s = sharp.get(m).unwrap();
        pre.push(if flip_at(m) { s.flip() } else { s });
    }
    let tail_flip = flip_at(horizon);
    let l = p.block.len();
    let block: Vec<Sign> = (0..l)
        .map(|j| {
            let s = sharp.get(horizon + j).unwrap();
            if tail_flip {
                s.flip()
            } else {
                s
            }
        })
        .collect();
    SignSequence::eventually(pre, block)
}

fn value_at(c: &CoefficientSequence, loc: &Location, signs: &SignSequence) -> Result<Scalar, StepError> {
    let width = BigRational::new(BigInt::one(), BigInt::one() << 30u32);
    match (loc, c) {
        (Location::Exact(t), CoefficientSequence::Geometric { alpha }) => Ok(eval_periodic(alpha, t)?),
        (Location::Exact(t), CoefficientSequence::FiniteSupport(v)) => Ok(eval_truncated(c, v.len().max(1) - 1, t)?),
        (Location::Exact(t), CoefficientSequence::PowerSquared) => {
            Ok(eval_series(c, t, &BigRational::new(BigInt::one(), BigInt::from(1u64 << 20)))?)
        }
        (Location::Exact(t), _) => Ok(eval_series(c, t, &width)?),
        (Location::Approx { .. }, _) => Ok(eval_from_rademacher(c, signs, &width)?),
    }
}

/// Builds both recursions and classifies the extremizer set.
pub fn classify_extrema(c: &CoefficientSequence, kind: Extremum, depth: usize) -> Result<ExtremaReport, StepError> {
    let sharp = run(c, kind, Variant::Sharp, depth)?;
    let flat = run(c, kind, Variant::Flat, depth)?;
    let smallest = Extremizer { location: Location::from_t(t_map(&sharp.signs)), signs: sharp.signs.clone() };
    let largest = Extremizer { location: Location::from_t(t_map(&flat.signs)), signs: flat.signs.clone() };
    let mut locations = None;
    let mut dyadic_degenerate = false;
    let cardinality = match &sharp.zero_set {
        ZeroSet::Finite(z) if sharp.signs.is_periodic() && z.len() <= MAX_ENUMERATED_ZEROS => {
            let mut set: BTreeSet<BigRational> = BTreeSet::new();
            for flips in 0..(1u32 << z.len()) {
                let seq = segment_variant(&sharp.signs, z, flips);
                let t = t_map(&seq).exact().cloned().expect("periodic");
                let mirror = BigRational::one() - &t;
                set.insert(t);
                set.insert(mirror);
            }
            let all: Vec<BigRational> = set.into_iter().collect();
            let n = all.len();
            locations = Some(all);
            Cardinality::Finite(n)
        }
        // no sign choice is free: the extremizers are t and 1 - t
        ZeroSet::Finite(z) if z.is_empty() && excludes_half(&smallest.location) => Cardinality::Finite(2),
        ZeroSet::Periodic { initial, cycle, period } if initial.is_empty() && cycle.len() == 1 && cycle[0] + 1 == *period => {
            let block: Vec<Sign> = sharp.signs.take(*period);
            dyadic_degenerate = block.iter().all(|s| *s == block[0]);
            Cardinality::ContinuumPerfectSet {
                block_length: *period,
                hausdorff_dim: BigRational::new(BigInt::one(), BigInt::from(*period)),
            }
        }
        ZeroSet::Cofinite { .. } => Cardinality::ContinuumContainsInterval,
        _ => Cardinality::UnknownBeyondDepth(depth),
    };
    let value = value_at(c, &smallest.location, &smallest.signs)?;
    Ok(ExtremaReport {
        kind,
        smallest,
        largest,
        locations,
        value,
        cardinality,
        dyadic_degenerate,
        evidence: sharp,
        flat_evidence: flat,
    })
}

/// Decides whether `f >= 0` on `[0, 1]`, which holds exactly when every
/// partial sum `sum_{m <= n} 2^m c_m` is nonnegative.
pub fn nonneg_check(c: &CoefficientSequence, depth: usize) -> NonnegResult {
    let mut total = Scalar::zero();
    for n in 0..=depth {
        total = total.add(&c.weighted(n));
        match total.sign() {
            SignResult::Negative => {
                return match build_lambda(c, Variant::Sharp, depth.max(8)) {
                    Ok(tr) => NonnegResult::NegativeWitness(Location::from_t(t_map(&tr.signs))),
                    Err(_) => NonnegResult::Unknown(depth),
                };
            }
            SignResult::Unresolved(_) => return NonnegResult::Unknown(depth),
            _ => {}
        }
    }
    let certified = match c {
        // sum_{m<=n} alpha^m >= 0 for every n iff alpha >= -1
        CoefficientSequence::Geometric { alpha } => {
            return match alpha.compare(&Scalar::from_int(-1)) {
                SignResult::Positive | SignResult::Zero => NonnegResult::NonnegCertified,
                SignResult::Negative => match build_lambda(c, Variant::Sharp, depth.max(8)) {
                    Ok(tr) => NonnegResult::NegativeWitness(Location::from_t(t_map(&tr.signs))),
                    Err(_) => NonnegResult::Unknown(depth),
                },
                SignResult::Unresolved(_) => NonnegResult::Unknown(depth),
            }
        }
        CoefficientSequence::FiniteSupport(v) => v.len() <= depth + 1,
        CoefficientSequence::PowerSquared => true,
        CoefficientSequence::Custom(_) => matches!(c.eventual_sign(), Some((m, Sign::Plus)) if m <= depth + 1),
    };
    if certified {
        NonnegResult::NonnegCertified
    } else {
        NonnegResult::Unknown(depth)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::IntPoly;
    use Sign::{Minus as M, Plus as P};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn geo(a: Scalar) -> CoefficientSequence {
        CoefficientSequence::geometric(a)
    }

    #[test]
    fn step_condition_examples() {
        let t13 = SignSequence::periodic(vec![P, M]);
        assert_eq!(check_step_condition(&geo(Scalar::one()), &t13, 40), StepCheck::Holds);
        let half = SignSequence::eventually(vec![P], vec![M]);
        assert!(matches!(check_step_condition(&geo(Scalar::from_ratio(3, 4)), &half, 40), StepCheck::ViolatedAt(_)));
        let bad = SignSequence::eventually(vec![P, P], vec![M]);
        assert_eq!(check_step_condition(&geo(Scalar::from_ratio(1, 3)), &bad, 10), StepCheck::ViolatedAt(1));
    }

    #[test]
    fn power_squared_sharp() {
        let tr = build_rho(&CoefficientSequence::PowerSquared, Variant::Sharp, 40).unwrap();
        assert_eq!(tr.signs.take(9), [P, M, M, M, P, M, P, M, P]);
        assert_eq!(t_map(&tr.signs).exact(), Some(&q(11, 24)));
        assert!(matches!(tr.certificate, Some(TailCertificate::Alternating { .. })));
    }

    #[test]
    fn golden_conjugate_sharp() {
        let tr = build_rho(&geo(Scalar::golden_conjugate()), Variant::Sharp, 30).unwrap();
        assert_eq!(tr.signs, SignSequence::periodic(vec![P, M, M]));
        assert_eq!(t_map(&tr.signs).exact(), Some(&q(3, 7)));
        assert_eq!(tr.zero_indices[0], 2);
    }

    #[test]
    fn zero_alpha() {
        let tr = build_rho(&geo(Scalar::zero()), Variant::Sharp, 10).unwrap();
        assert_eq!(t_map(&tr.signs).exact(), Some(&q(1, 2)));
    }

    #[test]
    fn lambda_examples() {
        let tr = build_lambda(&geo(Scalar::from_ratio(-3, 2)), Variant::Sharp, 64).unwrap();
        assert_eq!(t_map(&tr.signs).exact(), Some(&q(1, 5)));
        let tr = build_lambda(&geo(Scalar::from_ratio(1, 2)), Variant::Flat, 16).unwrap();
        assert_eq!(t_map(&tr.signs).exact(), Some(&q(0, 1)));
        let tr = build_lambda(&geo(Scalar::from_int(-1)), Variant::Sharp, 16).unwrap();
        assert!(matches!(tr.zero_set, ZeroSet::Periodic { .. }));
        for n in 0..8 {
            assert_eq!(tr.signs.get(2 * n), tr.signs.get(2 * n + 1));
        }
    }

    #[test]
    fn classification_examples() {
        let r = classify_extrema(&geo(Scalar::one()), Extremum::Max, 32).unwrap();
        assert_eq!(r.cardinality, Cardinality::ContinuumPerfectSet { block_length: 2, hausdorff_dim: q(1, 2) });
        assert!(r.value.enclosure(40).contains(&q(2, 3)));
        let r = classify_extrema(&geo(Scalar::from_ratio(-1, 2)), Extremum::Max, 32).unwrap();
        assert_eq!(r.cardinality, Cardinality::Finite(1));
        assert_eq!(r.smallest.location, Location::Exact(q(1, 2)));
        assert_eq!(r.value.as_rational(), Some(&q(1, 2)));
        let r = classify_extrema(&CoefficientSequence::PowerSquared, Extremum::Max, 32).unwrap();
        assert_eq!(r.cardinality, Cardinality::Finite(2));
        assert_eq!(r.locations, Some(vec![q(11, 24), q(13, 24)]));
    }

    #[test]
    fn quartic_patterns() {
        let a = Scalar::root(&IntPoly::from_i64s(&[1, -1, -1, -1, 1]), &q(1, 2), &q(3, 5)).unwrap();
        let r = classify_extrema(&geo(a), Extremum::Max, 64).unwrap();
        assert_eq!(r.smallest.location, Location::Exact(q(14, 31)));
        assert_eq!(r.largest.location, Location::Exact(q(451, 992)));
        assert_eq!(r.cardinality, Cardinality::ContinuumPerfectSet { block_length: 5, hausdorff_dim: q(1, 5) });
    }

    #[test]
    fn negative_steep_contracts() {
        let r = classify_extrema(&geo(Scalar::from_ratio(-3, 2)), Extremum::Max, 64).unwrap();
        assert_eq!(r.locations, Some(vec![q(19, 40), q(21, 40)]));
        let r = classify_extrema(&geo(Scalar::from_ratio(-3, 2)), Extremum::Min, 64).unwrap();
        assert_eq!(r.locations, Some(vec![q(1, 5), q(4, 5)]));
        assert_eq!(r.value.as_rational(), Some(&q(-8, 35)));
    }

    #[test]
    fn finite_support_flat_tail() {
        // S_1 = 1 - 1 = 0 and nothing after: maximizers fill an interval
        let c = CoefficientSequence::FiniteSupport(vec![Scalar::one(), Scalar::from_ratio(1, 2)]);
        let r = classify_extrema(&c, Extremum::Max, 12).unwrap();
        assert_eq!(r.cardinality, Cardinality::ContinuumContainsInterval);
    }

    #[test]
    fn nonneg_examples() {
        assert_eq!(nonneg_check(&geo(Scalar::from_int(-1)), 32), NonnegResult::NonnegCertified);
        assert_eq!(nonneg_check(&geo(Scalar::from_ratio(-3, 2)), 32), NonnegResult::NegativeWitness(Location::Exact(q(1, 5))));
        let c = CoefficientSequence::FiniteSupport(vec![Scalar::one()]);
        assert_eq!(nonneg_check(&c, 8), NonnegResult::NonnegCertified);
    }

    #[test]
    fn littlewood_root_exclusion() {
        assert!(no_littlewood_root(&Scalar::from_ratio(5, 9)));
        assert!(!no_littlewood_root(&Scalar::one()));
        let s = |c: &[i64]| Scalar::root(&IntPoly::from_i64s(c), &q(1, 2), &q(1, 1)).unwrap();
        assert!(no_littlewood_root(&s(&[-1, 0, 2])));
        // 1 - x - x^2 has x = golden conjugate
        assert!(!no_littlewood_root(&s(&[-1, 1, 1])));
        assert!(!no_littlewood_root(&Scalar::root(&IntPoly::from_i64s(&[1, -1, -1, -1, 1]), &q(1, 2), &q(3, 5)).unwrap()));
    }

    #[test]
    fn zero_free_alpha_has_two_maximizers() {
        let r = classify_extrema(&geo(Scalar::from_ratio(5, 9)), Extremum::Max, 64).unwrap();
        assert_eq!(r.evidence.zero_set, ZeroSet::Finite(Vec::new()));
        assert_eq!(r.cardinality, Cardinality::Finite(2));
    }
}
