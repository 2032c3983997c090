//! Exact real scalars: rationals, real algebraic numbers, and certified
//! refinable interval enclosures.
//!
//! Arithmetic is closed. Operations between rationals and elements of one
//! algebraic field stay exact; operations that mix unrelated fields or
//! involve an interval produce a lazily refinable interval.

mod algebraic;
pub mod decimal;
pub mod interval;
pub mod poly;
mod ratpoly;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

pub use algebraic::{AlgebraicNumber, FieldElement, RootValue};
pub use decimal::Rounding;
pub use interval::RInterval;
pub use poly::{IntPoly, SturmSequence};

use crate::error::ScalarError;

/// Initial working precision, in bits, for sign decisions on intervals.
pub const DEFAULT_PRECISION_BITS: u32 = 256;
/// Number of precision doublings attempted before a sign is declared unresolved.
pub const DEFAULT_SIGN_ROUNDS: u32 = 8;
/// Significant digits used when rendering decimals.
pub const DECIMAL_DIGITS: u32 = 30;

/// Closure producing an enclosure of width roughly `2^-bits`.
pub type Refiner = Arc<dyn Fn(u32) -> RInterval + Send + Sync>;

/// A certified interval enclosure, optionally refinable on demand.
#[derive(Clone)]
pub struct Enclosure {
    bounds: RInterval,
    refiner: Option<Refiner>,
}

impl Enclosure {
    pub fn fixed(lo: BigRational, hi: BigRational) -> Self {
        Self { bounds: RInterval::new(lo, hi), refiner: None }
    }

    pub fn refinable(refiner: Refiner, initial_bits: u32) -> Self {
        let bounds = refiner(initial_bits);
        Self { bounds, refiner: Some(refiner) }
    }

    /// A refinable enclosure whose current bounds are already known.
    pub fn with_bounds(bounds: RInterval, refiner: Refiner) -> Self {
        Self { bounds, refiner: Some(refiner) }
    }

    pub fn bounds(&self) -> &RInterval {
        &self.bounds
    }

    pub fn is_refinable(&self) -> bool {
        self.refiner.is_some()
    }

    pub fn at(&self, bits: u32) -> RInterval {
        match &self.refiner {
            None => self.bounds.clone(),
            Some(r) => {
                let e = r(bits);
                // never report anything wider than what is already known
                let lo = (&e.lo).max(&self.bounds.lo).clone();
                let hi = (&e.hi).min(&self.bounds.hi).clone();
                if lo <= hi {
                    RInterval::new(lo, hi)
                } else {
                    e
                }
            }
        }
    }
}

impl fmt::Debug for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Enclosure")
            .field("lo", &self.bounds.lo)
            .field("hi", &self.bounds.hi)
            .field("refinable", &self.refiner.is_some())
            .finish()
    }
}

/// Outcome of a sign decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignResult {
    Positive,
    Negative,
    Zero,
    /// The enclosure still straddles zero; carries its final width.
    Unresolved(BigRational),
}

impl SignResult {
    pub fn as_ordering(&self) -> Option<Ordering> {
        match self {
            Self::Positive => Some(Ordering::Greater),
            Self::Negative => Some(Ordering::Less),
            Self::Zero => Some(Ordering::Equal),
            Self::Unresolved(_) => None,
        }
    }

    fn from_ordering(o: Ordering) -> Self {
        match o {
            Ordering::Greater => Self::Positive,
            Ordering::Less => Self::Negative,
            Ordering::Equal => Self::Zero,
        }
    }
}

/// Exact or certified real number.
#[derive(Clone, Debug)]
pub enum Scalar {
    Rational(BigRational),
    Algebraic(FieldElement),
    Interval(Enclosure),
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

fn bits_of_magnitude(iv: &RInterval) -> u32 {
    let m = iv.lo.abs().max(iv.hi.abs());
    let c = m.ceil().to_integer();
    c.bits() as u32 + 1
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

impl Scalar {
    pub fn zero() -> Self {
        Self::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::Rational(q)
    }

    /// The unique root of `poly` in the open interval `(lo, hi)`.
    pub fn root(poly: &IntPoly, lo: &BigRational, hi: &BigRational) -> Result<Self, ScalarError> {
        Ok(match AlgebraicNumber::isolate(poly, lo, hi)? {
            RootValue::Rational(q) => Self::Rational(q),
            RootValue::Algebraic(a) => Self::from_algebraic(Arc::new(a)),
        })
    }

    /// The generator of the field defined by `a`.
    pub fn from_algebraic(a: Arc<AlgebraicNumber>) -> Self {
        if a.degree() == 1 {
            let c = a.poly().coeffs();
            return Self::Rational(BigRational::new(-c[0].clone(), c[1].clone()));
        }
        Self::Algebraic(FieldElement::generator(a))
    }

    pub fn sqrt2() -> Self {
        Self::root(&IntPoly::from_i64s(&[-2, 0, 1]), &q(1, 1), &q(2, 1)).expect("sqrt 2")
    }

    /// `(1 + sqrt 5) / 2`
    pub fn golden() -> Self {
        Self::root(&IntPoly::from_i64s(&[-1, -1, 1]), &q(1, 1), &q(2, 1)).expect("golden ratio")
    }

    /// `(sqrt 5 - 1) / 2`
    pub fn golden_conjugate() -> Self {
        Self::root(&IntPoly::from_i64s(&[-1, 1, 1]), &q(0, 1), &q(1, 1)).expect("golden conjugate")
    }

    pub fn interval(lo: BigRational, hi: BigRational) -> Self {
        if lo == hi {
            return Self::Rational(lo);
        }
        Self::Interval(Enclosure::fixed(lo, hi))
    }

    pub fn refinable(refiner: Refiner) -> Self {
        Self::Interval(Enclosure::refinable(refiner, 64))
    }

    pub fn refinable_from(bounds: RInterval, refiner: Refiner) -> Self {
        if bounds.lo == bounds.hi && bounds.lo.is_zero() {
            return Self::zero();
        }
        Self::Interval(Enclosure::with_bounds(bounds, refiner))
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Self::Interval(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Self::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// Enclosure of width at most about `2^-bits` (exact scalars give widths
    /// at most `2^-bits`; refinable intervals are best effort).
    pub fn enclosure(&self, bits: u32) -> RInterval {
        match self {
            Self::Rational(q) => RInterval::point(q.clone()),
            Self::Algebraic(e) => {
                let (lo, hi) = e.enclosure(bits);
                RInterval::new(lo, hi)
            }
            Self::Interval(e) => e.at(bits),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Self::Rational(q) => rational_to_f64(q),
            _ => {
                let e = self.enclosure(60);
                rational_to_f64(&((e.lo + e.hi) / q(2, 1)))
            }
        }
    }

    fn normalize(e: FieldElement) -> Self {
        match e.as_rational() {
            Some(c) => Self::Rational(c),
            None => Self::Algebraic(e),
        }
    }

    fn exact_op(&self, other: &Self, op: Op) -> Option<Result<Self, ScalarError>> {
        use Scalar::*;
        let r = match (self, other) {
            (Rational(a), Rational(b)) => match op {
                Op::Add => Ok(Rational(a + b)),
                Op::Sub => Ok(Rational(a - b)),
                Op::Mul => Ok(Rational(a * b)),
                Op::Div => {
                    if b.is_zero() {
                        Err(ScalarError::DivisionByZero)
                    } else {
                        Ok(Rational(a / b))
                    }
                }
            },
            (Algebraic(a), Rational(b)) => match op {
                Op::Add => Ok(Self::normalize(a.add_rational(b))),
                Op::Sub => Ok(Self::normalize(a.add_rational(&-b))),
                Op::Mul => Ok(Self::normalize(a.mul_rational(b))),
                Op::Div => {
                    if b.is_zero() {
                        Err(ScalarError::DivisionByZero)
                    } else {
                        Ok(Self::normalize(a.mul_rational(&b.recip())))
                    }
                }
            },
            (Rational(a), Algebraic(b)) => match op {
                Op::Add => Ok(Self::normalize(b.add_rational(a))),
                Op::Sub => Ok(Self::normalize(b.neg().add_rational(a))),
                Op::Mul => Ok(Self::normalize(b.mul_rational(a))),
                Op::Div => b.inverse().map(|i| Self::normalize(i.mul_rational(a))),
            },
            (Algebraic(a), Algebraic(b)) => {
                let (a, b) = FieldElement::unify(a, b)?;
                match op {
                    Op::Add => Ok(Self::normalize(a.add_same(&b))),
                    Op::Sub => Ok(Self::normalize(a.sub_same(&b))),
                    Op::Mul => Ok(Self::normalize(a.mul_same(&b))),
                    Op::Div => b.inverse().and_then(|i| {
                        let (a, i) = FieldElement::unify(&a, &i).ok_or(ScalarError::NotExact)?;
                        Ok(Self::normalize(a.mul_same(&i)))
                    }),
                }
            }
            _ => return None,
        };
        Some(r)
    }

    fn interval_op(&self, other: &Self, op: Op) -> Result<Self, ScalarError> {
        let a = self.clone();
        let b = other.clone();
        let ea = a.enclosure(32);
        let eb = b.enclosure(32);
        let ma = bits_of_magnitude(&ea);
        let mb = bits_of_magnitude(&eb);
        let mut inv_bits = 0u32;
        if let Op::Div = op {
            match other.sign() {
                SignResult::Zero => return Err(ScalarError::DivisionByZero),
                SignResult::Unresolved(_) => return Err(ScalarError::IndeterminateDivision),
                _ => {}
            }
            // smallest |b| on a resolving enclosure
            let mut bits = 32;
            let mut e = eb.clone();
            while !(e.lo.is_positive() || e.hi.is_negative()) {
                bits *= 2;
                e = b.enclosure(bits);
            }
            let bmin = e.lo.abs().min(e.hi.abs());
            inv_bits = bits_of_magnitude(&RInterval::point(bmin.recip()));
        }
        let f = move |bits: u32| -> RInterval {
            let r = match op {
                Op::Add => a.enclosure(bits + 2).add(&b.enclosure(bits + 2)),
                Op::Sub => a.enclosure(bits + 2).sub(&b.enclosure(bits + 2)),
                Op::Mul => a.enclosure(bits + 2 + mb).mul(&b.enclosure(bits + 2 + ma)),
                Op::Div => {
                    let eb = b.enclosure(bits + 4 + 2 * inv_bits + ma);
                    let ea = a.enclosure(bits + 2 + inv_bits);
                    match ea.div(&eb) {
                        Some(v) => v,
                        None => {
                            let eb = b.enclosure(bits.max(64) * 2 + 2 * inv_bits + ma);
                            ea.div(&eb).expect("divisor separated from zero")
                        }
                    }
                }
            };
            r.round_out(bits + 2)
        };
        Ok(Self::Interval(Enclosure::refinable(Arc::new(f), 64)))
    }

    fn op(&self, other: &Self, op: Op) -> Result<Self, ScalarError> {
        match self.exact_op(other, op) {
            Some(r) => r,
            None => self.interval_op(other, op),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.op(other, Op::Add).expect("addition is total")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.op(other, Op::Sub).expect("subtraction is total")
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.op(other, Op::Mul).expect("multiplication is total")
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ScalarError> {
        self.op(other, Op::Div)
    }

    pub fn neg(&self) -> Self {
        match self {
            Self::Rational(q) => Self::Rational(-q),
            Self::Algebraic(e) => Self::Algebraic(e.neg()),
            Self::Interval(_) => Self::zero().sub(self),
        }
    }

    pub fn recip(&self) -> Result<Self, ScalarError> {
        Self::one().checked_div(self)
    }

    pub fn mul_rational(&self, k: &BigRational) -> Self {
        self.mul(&Self::Rational(k.clone()))
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Sign with the default precision budget.
    pub fn sign(&self) -> SignResult {
        self.sign_with(DEFAULT_PRECISION_BITS, DEFAULT_SIGN_ROUNDS)
    }

    /// Sign decision. Exact scalars never come back unresolved; intervals are
    /// refined from `initial_bits`, doubling up to `rounds` times.
    pub fn sign_with(&self, initial_bits: u32, rounds: u32) -> SignResult {
        match self {
            Self::Rational(q) => SignResult::from_ordering(q.cmp(&BigRational::zero())),
            Self::Algebraic(e) => SignResult::from_ordering(e.sign()),
            Self::Interval(enc) => {
                let mut bits = initial_bits.max(1);
                let mut last = enc.bounds().clone();
                for _ in 0..=rounds {
                    let e = if enc.is_refinable() { enc.at(bits) } else { enc.bounds().clone() };
                    if e.lo.is_positive() {
                        return SignResult::Positive;
                    }
                    if e.hi.is_negative() {
                        return SignResult::Negative;
                    }
                    if e.lo.is_zero() && e.hi.is_zero() {
                        return SignResult::Zero;
                    }
                    last = e;
                    if !enc.is_refinable() {
                        break;
                    }
                    bits = bits.saturating_mul(2);
                }
                SignResult::Unresolved(last.width())
            }
        }
    }

    /// Sign of `self - other`.
    pub fn compare(&self, other: &Self) -> SignResult {
        self.sub(other).sign()
    }

    pub fn abs(&self) -> Self {
        match self.sign() {
            SignResult::Negative => self.neg(),
            SignResult::Positive | SignResult::Zero => self.clone(),
            SignResult::Unresolved(_) => {
                let a = self.clone();
                Self::refinable(Arc::new(move |bits| {
                    let e = a.enclosure(bits);
                    if !e.lo.is_negative() {
                        e
                    } else if !e.hi.is_positive() {
                        e.neg()
                    } else {
                        RInterval::new(BigRational::zero(), e.lo.abs().max(e.hi.abs()))
                    }
                }))
            }
        }
    }

    /// Whether the enclosures of `self` and `other` at `bits` intersect.
    pub fn overlaps(&self, other: &Self, bits: u32) -> bool {
        self.enclosure(bits).overlaps(&other.enclosure(bits))
    }

    /// Decimal rendering: exact rationals are rounded to nearest, other scalars
    /// show the midpoint of a tight enclosure.
    pub fn to_decimal(&self, digits: u32) -> String {
        match self {
            Self::Rational(q) => decimal::to_decimal(q, digits, Rounding::Nearest),
            _ => {
                let e = self.enclosure(digits * 4 + 16);
                decimal::to_decimal(&((e.lo + e.hi) / q(2, 1)), digits, Rounding::Nearest)
            }
        }
    }

    /// Outward-rounded decimal enclosure `(lo, hi)`.
    pub fn decimal_bounds(&self, digits: u32) -> (String, String) {
        let e = self.enclosure(digits * 4 + 16);
        (
            decimal::to_decimal(&e.lo, digits, Rounding::Floor),
            decimal::to_decimal(&e.hi, digits, Rounding::Ceil),
        )
    }

    /// Parses `-3/2`, `0.75`, `sqrt2`, `golden`, `golden-conjugate` (each with an
    /// optional leading `-`), or `root:<c0,c1,...>:<lo>:<hi>` for the unique root
    /// of `c0 + c1 x + ...` in `(lo, hi)`.
    pub fn parse(s: &str) -> Result<Self, ScalarError> {
        let s = s.trim();
        let bad = || ScalarError::Malformed(s.to_string());
        if let Some(rest) = s.strip_prefix("root:") {
            let parts: Vec<&str> = rest.split(':').collect();
            let [poly, lo, hi] = parts[..] else { return Err(bad()) };
            let coeffs = poly
                .split(',')
                .map(|c| c.trim().parse::<BigInt>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?;
            let lo = decimal::parse_rational(lo).ok_or_else(bad)?;
            let hi = decimal::parse_rational(hi).ok_or_else(bad)?;
            if lo >= hi {
                return Err(bad());
            }
            return Self::root(&IntPoly::new(coeffs), &lo, &hi);
        }
        if let Some(q) = decimal::parse_rational(s) {
            return Ok(Self::Rational(q));
        }
        let (neg, name) = match s.strip_prefix('-') {
            Some(n) => (true, n),
            None => (false, s),
        };
        let v = match name {
            "sqrt2" => Self::sqrt2(),
            "golden" => Self::golden(),
            "golden-conjugate" => Self::golden_conjugate(),
            _ => return Err(bad()),
        };
        Ok(if neg { v.neg() } else { v })
    }

    pub fn to_json(&self) -> Value {
        match self {
            Self::Rational(q) => json!({
                "type": "rational",
                "num": q.numer().to_string(),
                "den": q.denom().to_string(),
            }),
            Self::Algebraic(e) => {
                let f = e.field();
                let mut v = json!({
                    "type": "algebraic",
                    "poly": f.poly().coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "lo": decimal::to_fraction(f.lo()),
                    "hi": decimal::to_fraction(f.hi()),
                    "approx": self.to_decimal(DECIMAL_DIGITS),
                });
                if !e.is_generator() {
                    v["element"] = Value::from(e.coeffs().iter().map(decimal::to_fraction).collect::<Vec<_>>());
                }
                v
            }
            Self::Interval(_) => {
                let (lo, hi) = self.decimal_bounds(DECIMAL_DIGITS);
                json!({ "type": "interval", "lo": lo, "hi": hi })
            }
        }
    }

    pub fn from_json(v: &Value) -> Result<Self, ScalarError> {
        let bad = |m: &str| ScalarError::Malformed(m.to_string());
        let field = |k: &str| -> Result<&str, ScalarError> {
            v.get(k).and_then(Value::as_str).ok_or_else(|| bad(&format!("missing field {k}")))
        };
        let rat = |s: &str| decimal::parse_rational(s).ok_or_else(|| bad(&format!("bad number {s}")));
        match v.get("type").and_then(Value::as_str) {
            Some("rational") => {
                let n: BigInt = field("num")?.parse().map_err(|_| bad("num"))?;
                let d: BigInt = field("den")?.parse().map_err(|_| bad("den"))?;
                if d.is_zero() {
                    return Err(bad("zero denominator"));
                }
                Ok(Self::Rational(BigRational::new(n, d)))
            }
            Some("algebraic") => {
                let coeffs = v
                    .get("poly")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("poly"))?
                    .iter()
                    .map(|c| match c {
                        Value::String(s) => s.parse::<BigInt>().map_err(|_| bad("coefficient")),
                        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| bad("coefficient")),
                        _ => Err(bad("coefficient")),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let lo = rat(field("lo")?)?;
                let hi = rat(field("hi")?)?;
                let g = Self::root(&IntPoly::new(coeffs), &lo, &hi)?;
                match v.get("element").and_then(Value::as_array) {
                    None => Ok(g),
                    Some(el) => {
                        let mut acc = Self::zero();
                        let mut pw = Self::one();
                        for c in el {
                            let c = rat(c.as_str().ok_or_else(|| bad("element"))?)?;
                            acc = acc.add(&pw.mul_rational(&c));
                            pw = pw.mul(&g);
                        }
                        Ok(acc)
                    }
                }
            }
            Some("interval") => {
                let lo = rat(field("lo")?)?;
                let hi = rat(field("hi")?)?;
                if lo > hi {
                    return Err(bad("empty interval"));
                }
                Ok(Self::interval(lo, hi))
            }
            _ => Err(bad("unknown scalar type")),
        }
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rational(q) => write!(f, "{}", decimal::to_fraction(q)),
            Self::Algebraic(_) => write!(f, "{}", self.to_decimal(DECIMAL_DIGITS)),
            Self::Interval(_) => {
                let (lo, hi) = self.decimal_bounds(DECIMAL_DIGITS);
                write!(f, "[{lo}, {hi}]")
            }
        }
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Self::Rational(q)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                self.$f(rhs)
            }
        }
        impl std::ops::$tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$f(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Sub, sub, sub);
forward_binop!(Mul, mul, mul);

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(&self)
    }
}

/// Sign of `a` with an explicit refinement budget (number of precision doublings).
pub fn scalar_sign(a: &Scalar, precision_budget: u32) -> SignResult {
    a.sign_with(DEFAULT_PRECISION_BITS, precision_budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signs_of_examples() {
        assert_eq!(scalar_sign(&Scalar::from_ratio(3, 7), 8), SignResult::Positive);
        let g = Scalar::golden_conjugate();
        let p = Scalar::one().sub(&g).sub(&g.mul(&g));
        assert_eq!(scalar_sign(&p, 8), SignResult::Zero);
        let tiny = BigRational::new(1.into(), num_traits::pow(BigInt::from(10), 99));
        let iv = Scalar::interval(-tiny.clone(), tiny.clone());
        assert_eq!(scalar_sign(&iv, 8), SignResult::Unresolved(tiny * BigRational::from_integer(2.into())));
    }

    #[test]
    fn parses_parameter_strings() {
        assert_eq!(Scalar::parse("-3/2").unwrap().as_rational(), Some(&q(-3, 2)));
        assert_eq!(Scalar::parse("0.75").unwrap().as_rational(), Some(&q(3, 4)));
        let g = Scalar::parse("-golden").unwrap();
        assert!((g.to_f64() + 1.618033988749895).abs() < 1e-15);
        let r = Scalar::parse("root:1,-1,-1:0:1").unwrap();
        assert_eq!(r.compare(&Scalar::golden_conjugate()), SignResult::Zero);
        assert!(Scalar::parse("root:1,-1,-1:1:0").is_err());
        assert!(Scalar::parse("pi").is_err());
    }

    #[test]
    fn equal_values_from_different_polynomials() {
        let x1 = Scalar::root(&IntPoly::from_i64s(&[-1, 1, 1]), &q(-2, 1), &q(-1, 1)).unwrap();
        assert_eq!(x1.compare(&Scalar::golden().neg()), SignResult::Zero);
        assert_eq!(Scalar::golden().neg().compare(&x1), SignResult::Zero);
        let r8 = Scalar::root(&IntPoly::from_i64s(&[-8, 0, 1]), &q(2, 1), &q(3, 1)).unwrap();
        let two_sqrt2 = Scalar::sqrt2().mul_rational(&q(2, 1));
        assert_eq!(r8.compare(&two_sqrt2), SignResult::Zero);
        let shifted = Scalar::sqrt2().add(&Scalar::from_int(1));
        assert_eq!(r8.compare(&shifted), SignResult::Positive);
    }

    #[test]
    fn golden_and_sqrt2_mix_through_intervals() {
        let s = Scalar::sqrt2().add(&Scalar::golden());
        assert!(!s.is_exact());
        assert!((s.to_f64() - (2f64.sqrt() + 1.618033988749895)).abs() < 1e-15);
        let d = s.sub(&Scalar::sqrt2()).sub(&Scalar::golden());
        assert!(matches!(d.sign_with(64, 2), SignResult::Unresolved(_)));
        let e = d.enclosure(200);
        assert!(e.width() < BigRational::new(1.into(), BigInt::one() << 190u32));
    }

    #[test]
    fn division_and_inverse() {
        let t = Scalar::sqrt2();
        let inv = t.recip().unwrap();
        assert_eq!(inv.mul(&t).as_rational(), Some(&BigRational::one()));
        assert_eq!(Scalar::zero().recip().unwrap_err(), ScalarError::DivisionByZero);
        let mixed = Scalar::golden().checked_div(&t).unwrap();
        assert!((mixed.to_f64() - 1.618033988749895 / 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn json_roundtrip() {
        for s in [Scalar::from_ratio(-8, 35), Scalar::golden(), Scalar::sqrt2().add(&Scalar::from_int(1)).mul(&Scalar::sqrt2())] {
            let v = s.to_json();
            let back = Scalar::from_json(&v).unwrap();
            assert_eq!(back.compare(&s), SignResult::Zero, "{v}");
        }
    }
}
