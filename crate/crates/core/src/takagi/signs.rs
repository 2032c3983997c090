//! Rademacher sign sequences, the map `T` from sign sequences to points of
//! `[0, 1]`, and dyadic rationals.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::EvalError;
use crate::scalar::decimal;

/// A single Rademacher sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// Binary digit `(1 - sign) / 2`.
    pub fn digit(self) -> u8 {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    pub fn from_digit(d: u8) -> Self {
        if d == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// Nonnegative dyadic rational `k / 2^n` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicRational {
    k: BigUint,
    n: u32,
}

impl DyadicRational {
    pub fn new(k: BigUint, n: u32) -> Self {
        let mut k = k;
        let mut n = n;
        while n > 0 && k.is_even() {
            if k.is_zero() {
                n = 0;
                break;
            }
            k >>= 1u32;
            n -= 1;
        }
        Self { k, n }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.k
    }

    pub fn exponent(&self) -> u32 {
        self.n
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.k.clone()), BigInt::one() << self.n)
    }

    /// Some when `q` is a nonnegative dyadic rational.
    pub fn from_rational(q: &BigRational) -> Option<Self> {
        if q.is_negative() {
            return None;
        }
        let d = q.denom();
        if d.is_zero() || (d & (d - BigInt::one())) != BigInt::zero() {
            return None;
        }
        let n = d.bits() as u32 - 1;
        Some(Self::new(q.numer().to_biguint()?, n))
    }

    pub fn to_json(&self) -> Value {
        json!({ "k": self.k.to_string(), "n": self.n })
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.to_rational().cmp(&other.to_rational())
    }
}

/// Repeating tail of an eventually periodic sign sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Period {
    pub start: usize,
    pub block: Vec<Sign>,
}

/// A sign sequence `rho_0, rho_1, ...`: an explicit prefix, optionally
/// followed by a certified periodic continuation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignSequence {
    prefix: Vec<Sign>,
    period: Option<Period>,
}

impl SignSequence {
    /// A finite known prefix with no certified continuation.
    pub fn finite(prefix: Vec<Sign>) -> Self {
        Self { prefix, period: None }
    }

    /// `pre` followed by `block` repeated forever.
    pub fn eventually(pre: Vec<Sign>, block: Vec<Sign>) -> Self {
        assert!(!block.is_empty(), "periodic block must be nonempty");
        let start = pre.len();
        Self { prefix: pre, period: Some(Period { start, block }) }.canonical()
    }

    pub fn periodic(block: Vec<Sign>) -> Self {
        Self::eventually(Vec::new(), block)
    }

    pub fn constant(s: Sign) -> Self {
        Self::periodic(vec![s])
    }

    /// Attaches a period to an existing prefix. The prefix from `start` on must
    /// agree with the repeated block.
    pub fn with_period(prefix: Vec<Sign>, start: usize, block: Vec<Sign>) -> Option<Self> {
        if block.is_empty() || start > prefix.len() {
            return None;
        }
        let l = block.len();
        if prefix[start..].iter().enumerate().any(|(i, s)| *s != block[i % l]) {
            return None;
        }
        let mut pre = prefix[..start].to_vec();
        pre.truncate(start);
        Some(Self::eventually(pre, block))
    }

    /// Shortest description: minimal period and earliest start.
    pub fn canonical(self) -> Self {
        let Some(p) = self.period else {
            return self;
        };
        let mut pre: Vec<Sign> = self.prefix.iter().copied().take(p.start).collect();
        let mut block = p.block;
        // minimal period of the block
        let l = block.len();
        for d in 1..=l {
            if l % d == 0 && (0..l).all(|i| block[i] == block[i % d]) {
                block.truncate(d);
                break;
            }
        }
        // pull the period start backwards while the prefix agrees
        while let Some(&last) = pre.last() {
            let l = block.len();
            if last == block[l - 1] {
                pre.pop();
                block.rotate_right(1);
            } else {
                break;
            }
        }
        let start = pre.len();
        Self { prefix: pre, period: Some(Period { start, block }) }
    }

    pub fn prefix(&self) -> &[Sign] {
        &self.prefix
    }

    pub fn period(&self) -> Option<&Period> {
        self.period.as_ref()
    }

    pub fn is_periodic(&self) -> bool {
        self.period.is_some()
    }

    /// Number of determined entries, `None` when infinite.
    pub fn known_len(&self) -> Option<usize> {
        if self.period.is_some() {
            None
        } else {
            Some(self.prefix.len())
        }
    }

    pub fn get(&self, i: usize) -> Option<Sign> {
        match &self.period {
            Some(p) if i >= p.start => Some(p.block[(i - p.start) % p.block.len()]),
            _ => self.prefix.get(i).copied(),
        }
    }

    /// The first `n` entries (fewer if not determined).
    pub fn take(&self, n: usize) -> Vec<Sign> {
        (0..n).map_while(|i| self.get(i)).collect()
    }

    pub fn negated(&self) -> Self {
        Self {
            prefix: self.prefix.iter().map(|s| s.flip()).collect(),
            period: self.period.as_ref().map(|p| Period {
                start: p.start,
                block: p.block.iter().map(|s| s.flip()).collect(),
            }),
        }
    }

    /// Sequence with the first `k` entries removed.
    pub fn shifted(&self, k: usize) -> Self {
        match &self.period {
            None => Self::finite(self.prefix.iter().skip(k).copied().collect()),
            Some(p) => {
                if k <= p.start {
                    Self::eventually(self.prefix[k..p.start].to_vec(), p.block.clone())
                } else {
                    let mut b = p.block.clone();
                    let l = b.len();
                    b.rotate_left((k - p.start) % l);
                    Self::periodic(b)
                }
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let enc = |v: &[Sign]| v.iter().map(|s| s.value()).collect::<Vec<_>>();
        match &self.period {
            None => json!({ "prefix": enc(&self.prefix) }),
            Some(p) => json!({
                "prefix": enc(&self.prefix[..p.start]),
                "period": enc(&p.block),
            }),
        }
    }
}

impl fmt::Display for SignSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = |s: &Sign| if *s == Sign::Plus { '+' } else { '-' };
        match &self.period {
            None => {
                let s: String = self.prefix.iter().map(sym).collect();
                write!(f, "{s}...")
            }
            Some(p) => {
                let a: String = self.prefix[..p.start].iter().map(sym).collect();
                let b: String = p.block.iter().map(sym).collect();
                write!(f, "{a}({b})")
            }
        }
    }
}

/// Value of `T(rho)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TValue {
    Exact(BigRational),
    /// `T(rho)` lies in `[lower, lower + 2^-known]`.
    Approx { lower: DyadicRational, known: usize },
}

impl TValue {
    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            TValue::Exact(q) => Some(q),
            _ => None,
        }
    }

    pub fn bounds(&self) -> (BigRational, BigRational) {
        match self {
            TValue::Exact(q) => (q.clone(), q.clone()),
            TValue::Approx { lower, known } => {
                let lo = lower.to_rational();
                let hi = &lo + BigRational::new(BigInt::one(), BigInt::one() << *known);
                (lo, hi)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            TValue::Exact(q) => json!({
                "num": q.numer().to_string(),
                "den": q.denom().to_string(),
                "decimal": decimal::to_decimal(q, crate::scalar::DECIMAL_DIGITS, decimal::Rounding::Nearest),
            }),
            TValue::Approx { .. } => {
                let (lo, hi) = self.bounds();
                json!({
                    "lo": decimal::to_fraction(&lo),
                    "hi": decimal::to_fraction(&hi),
                })
            }
        }
    }
}

fn binary_value(signs: &[Sign]) -> (BigUint, usize) {
    // sum_{n < len} 2^-(n+1) digit_n as k / 2^len
    let mut k = BigUint::zero();
    for s in signs {
        k <<= 1u32;
        if s.digit() == 1 {
            k += 1u32;
        }
    }
    (k, signs.len())
}

/// `T(rho) = sum_n 2^-(n+2) (1 - rho_n)`.
pub fn t_map(rho: &SignSequence) -> TValue {
    match rho.period() {
        None => {
            let (k, n) = binary_value(rho.prefix());
            TValue::Approx { lower: DyadicRational::new(k, n as u32), known: n }
        }
        Some(p) => {
            let (k0, s) = binary_value(&rho.prefix()[..p.start]);
            let (kb, l) = binary_value(&p.block);
            let head = BigRational::new(BigInt::from(k0), BigInt::one() << s);
            // block value kb / 2^l repeated: kb / (2^l - 1), shifted by 2^-s
            let period_den = (BigInt::one() << l) - BigInt::one();
            let tail = BigRational::new(BigInt::from(kb), period_den * (BigInt::one() << s));
            TValue::Exact(head + tail)
        }
    }
}

/// Cap on the doubling orbit explored when expanding a rational.
pub const ORBIT_CAP: usize = 1_000_000;

/// Rademacher expansions of a rational `t` in `[0, 1]`; the standard expansion
/// (infinitely many `+1`) comes first. Dyadic points of `(0, 1)` have a
/// second expansion ending in all `-1`.
pub fn rademacher_of(t: &BigRational) -> Result<Vec<SignSequence>, EvalError> {
    if t.is_negative() || t > &BigRational::one() {
        return Err(EvalError::Domain(decimal::to_fraction(t)));
    }
    if t.is_one() {
        return Ok(vec![SignSequence::constant(Sign::Minus)]);
    }
    let den = t.denom().clone();
    let mut x = t.numer().clone();
    let mut seen: HashMap<BigInt, usize> = HashMap::new();
    let mut digits: Vec<Sign> = Vec::new();
    loop {
        if let Some(&i) = seen.get(&x) {
            let block = digits[i..].to_vec();
            let pre = digits[..i].to_vec();
            let standard = SignSequence::eventually(pre, block);
            let mut out = vec![standard.clone()];
            if x.is_zero() && !t.is_zero() {
                // dyadic: last -1 becomes +1 followed by all -1
                let p = standard.period().unwrap().start;
                let mut alt = standard.prefix()[..p].to_vec();
                let last = alt.iter().rposition(|s| *s == Sign::Minus).expect("nonzero dyadic");
                alt.truncate(last);
                alt.push(Sign::Plus);
                out.push(SignSequence::eventually(alt, vec![Sign::Minus]));
            }
            return Ok(out);
        }
        if digits.len() > ORBIT_CAP {
            return Err(EvalError::InsufficientPrefix { have: digits.len() });
        }
        seen.insert(x.clone(), digits.len());
        x <<= 1u32;
        if x >= den {
            x -= &den;
            digits.push(Sign::Minus);
        } else {
            digits.push(Sign::Plus);
        }
    }
}
