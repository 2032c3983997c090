//! Real algebraic numbers given by a squarefree integer polynomial and an
//! isolating interval, and exact arithmetic in the field they generate.

use std::cmp::Ordering;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{refine_sign_change, IntPoly};
use super::ratpoly::{self, RatPoly};
use crate::error::ScalarError;

/// Result of isolating a root: either it turned out to be rational, or an
/// irrational algebraic number.
#[derive(Clone, Debug)]
pub enum RootValue {
    Rational(BigRational),
    Algebraic(AlgebraicNumber),
}

/// The unique root of `poly` in the open interval `(lo, hi)`, where `poly` is
/// squarefree and primitive and changes sign across the interval.
#[derive(Debug)]
pub struct AlgebraicNumber {
    poly: IntPoly,
    lo: BigRational,
    hi: BigRational,
    /// Tightest bracket found so far by refinement.
    bracket: Mutex<(BigRational, BigRational)>,
}

impl Clone for AlgebraicNumber {
    fn clone(&self) -> Self {
        Self {
            poly: self.poly.clone(),
            lo: self.lo.clone(),
            hi: self.hi.clone(),
            bracket: Mutex::new(self.bracket.lock().unwrap().clone()),
        }
    }
}

const INITIAL_BITS: u32 = 64;

fn pow2_inv(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits)
}

impl AlgebraicNumber {
    /// Isolates the unique root of `poly` in `(lo, hi)`.
    pub fn isolate(poly: &IntPoly, lo: &BigRational, hi: &BigRational) -> Result<RootValue, ScalarError> {
        if poly.degree().unwrap_or(0) == 0 {
            return Err(ScalarError::ConstantPolynomial);
        }
        let sqf = poly.squarefree();
        let roots = sqf.isolate_roots(lo, hi, &pow2_inv(INITIAL_BITS));
        if roots.len() != 1 {
            return Err(ScalarError::NotIsolating {
                lo: lo.to_string(),
                hi: hi.to_string(),
                count: roots.len(),
            });
        }
        let (a, b) = roots.into_iter().next().unwrap();
        if a == b {
            return Ok(RootValue::Rational(a));
        }
        Ok(RootValue::Algebraic(Self::from_parts(sqf, a, b)))
    }

    /// Builds an algebraic number from a primitive squarefree polynomial that
    /// changes sign across `(lo, hi)` and has exactly one root there.
    pub(crate) fn from_parts(poly: IntPoly, lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo < hi);
        let bracket = Mutex::new((lo.clone(), hi.clone()));
        Self { poly, lo, hi, bracket }
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    fn cached(&self) -> (BigRational, BigRational) {
        self.bracket.lock().unwrap().clone()
    }

    fn store(&self, lo: &BigRational, hi: &BigRational) {
        let mut b = self.bracket.lock().unwrap();
        if hi - lo < &b.1 - &b.0 {
            *b = (lo.clone(), hi.clone());
        }
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap()
    }

    /// A copy whose isolating interval has width at most `2^-bits`, or the
    /// exact value when bisection lands on it.
    pub fn refined(&self, bits: u32) -> RootValue {
        let (lo, hi) = self.cached();
        if &hi - &lo <= pow2_inv(bits) {
            return RootValue::Algebraic(Self::from_parts(self.poly.clone(), lo, hi));
        }
        let (a, b) = refine_sign_change(&self.poly, lo, hi, &pow2_inv(bits));
        if a == b {
            RootValue::Rational(a)
        } else {
            self.store(&a, &b);
            RootValue::Algebraic(Self::from_parts(self.poly.clone(), a, b))
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = match self.refined(60) {
            RootValue::Rational(q) => (q.clone(), q),
            RootValue::Algebraic(a) => (a.lo, a.hi),
        };
        super::rational_to_f64(&((lo + hi) / BigRational::from_integer(2.into())))
    }

    /// Exact sign of `r(theta)`.
    pub fn sign_of(&self, r: &[BigRational]) -> Ordering {
        let r = ratpoly::trim(r.to_vec());
        if r.is_empty() {
            return Ordering::Equal;
        }
        if r.len() == 1 {
            return r[0].cmp(&BigRational::zero());
        }
        let ri = ratpoly::to_int(&r);
        let g = ri.gcd(&self.poly);
        if g.degree().unwrap_or(0) > 0 {
            // g is squarefree and its roots are roots of poly, so at most theta lies in (lo, hi)
            let sl = g.sign_at(&self.lo);
            let sh = g.sign_at(&self.hi);
            if sl != sh {
                return Ordering::Equal;
            }
        }
        let (mut lo, mut hi) = self.cached();
        let s_lo = self.poly.sign_at(&self.lo);
        let two = BigRational::from_integer(2.into());
        loop {
            let (a, b) = ratpoly::eval_interval(&r, &lo, &hi);
            if a.is_positive() || b.is_negative() {
                self.store(&lo, &hi);
                return if a.is_positive() { Ordering::Greater } else { Ordering::Less };
            }
            let m = (&lo + &hi) / &two;
            match self.poly.sign_at(&m) {
                Ordering::Equal => return ratpoly::eval(&r, &m).cmp(&BigRational::zero()),
                s if s == s_lo => lo = m,
                _ => hi = m,
            }
        }
    }

    /// Rational enclosure of `r(theta)` of width at most `2^-bits`.
    pub fn enclosure_of(&self, r: &[BigRational], bits: u32) -> (BigRational, BigRational) {
        let r = ratpoly::trim(r.to_vec());
        if r.len() <= 1 {
            let v = r.first().cloned().unwrap_or_else(BigRational::zero);
            return (v.clone(), v);
        }
        let target = pow2_inv(bits);
        let (mut lo, mut hi) = self.cached();
        let s_lo = self.poly.sign_at(&self.lo);
        let two = BigRational::from_integer(2.into());
        loop {
            let (a, b) = ratpoly::eval_interval(&r, &lo, &hi);
            if &b - &a <= target {
                self.store(&lo, &hi);
                return (a, b);
            }
            // jump ahead several bisection steps at once
            for _ in 0..8 {
                let m = (&lo + &hi) / &two;
                match self.poly.sign_at(&m) {
                    Ordering::Equal => {
                        let v = ratpoly::eval(&r, &m);
                        return (v.clone(), v);
                    }
                    s if s == s_lo => lo = m,
                    _ => hi = m,
                }
            }
        }
    }

    /// If `self` and `other` denote the same real number, a common
    /// representation whose polynomial divides both defining polynomials.
    pub fn common_field(a: &Arc<Self>, b: &Arc<Self>) -> Option<Arc<Self>> {
        if Arc::ptr_eq(a, b) {
            return Some(a.clone());
        }
        let lo = (&a.lo).max(&b.lo).clone();
        let hi = (&a.hi).min(&b.hi).clone();
        if lo >= hi {
            return None;
        }
        let g = if a.poly == b.poly { a.poly.clone() } else { a.poly.gcd(&b.poly) };
        if g.degree().unwrap_or(0) == 0 {
            return None;
        }
        // endpoints of the intersection are never roots of g
        if g.sign_at(&lo) == g.sign_at(&hi) {
            return None;
        }
        if g == a.poly && lo == a.lo && hi == a.hi {
            return Some(a.clone());
        }
        if g == b.poly && lo == b.lo && hi == b.hi {
            return Some(b.clone());
        }
        Some(Arc::new(Self::from_parts(g, lo, hi)))
    }
}

/// Element `sum c_i theta^i` of `Q(theta)`, reduced modulo the defining polynomial.
#[derive(Clone, Debug)]
pub struct FieldElement {
    field: Arc<AlgebraicNumber>,
    coeffs: RatPoly,
}

impl FieldElement {
    pub fn generator(field: Arc<AlgebraicNumber>) -> Self {
        Self::reduce(field, vec![BigRational::zero(), BigRational::one()])
    }

    pub fn constant(field: Arc<AlgebraicNumber>, c: BigRational) -> Self {
        Self::reduce(field, vec![c])
    }

    pub(crate) fn reduce(field: Arc<AlgebraicNumber>, coeffs: RatPoly) -> Self {
        let d = ratpoly::from_int(&field.poly);
        let coeffs = ratpoly::rem(&coeffs, &d);
        Self { field, coeffs }
    }

    pub fn field(&self) -> &Arc<AlgebraicNumber> {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_generator(&self) -> bool {
        self.coeffs.len() == 2 && self.coeffs[0].is_zero() && self.coeffs[1].is_one()
    }

    /// The rational value, when the residue is constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn sign(&self) -> Ordering {
        self.field.sign_of(&self.coeffs)
    }

    pub fn enclosure(&self, bits: u32) -> (BigRational, BigRational) {
        self.field.enclosure_of(&self.coeffs, bits)
    }

    fn in_field(&self, f: &Arc<AlgebraicNumber>) -> Self {
        if Arc::ptr_eq(&self.field, f) {
            self.clone()
        } else {
            Self::reduce(f.clone(), self.coeffs.clone())
        }
    }

    /// Brings two elements into one field when their generators coincide, or
    /// when one of them is `c_0 + c_1 theta` and equals the other's generator.
    pub fn unify(a: &Self, b: &Self) -> Option<(Self, Self)> {
        if let Some(f) = AlgebraicNumber::common_field(&a.field, &b.field) {
            return Some((a.in_field(&f), b.in_field(&f)));
        }
        if let Some(f) = b.linear_value().and_then(|w| AlgebraicNumber::common_field(&a.field, &w)) {
            return Some((a.in_field(&f), Self::generator(f)));
        }
        let f = a.linear_value().and_then(|w| AlgebraicNumber::common_field(&b.field, &w))?;
        Some((Self::generator(f.clone()), b.in_field(&f)))
    }

    /// `c_0 + c_1 theta` as a root of `p((x - c_0) / c_1)`.
    fn linear_value(&self) -> Option<Arc<AlgebraicNumber>> {
        if self.coeffs.len() != 2 {
            return None;
        }
        let (c0, c1) = (&self.coeffs[0], &self.coeffs[1]);
        let y = vec![-(c0 / c1), c1.recip()];
        let p = ratpoly::from_int(&self.field.poly);
        let mut q: RatPoly = Vec::new();
        for c in p.iter().rev() {
            q = ratpoly::add(&ratpoly::mul(&q, &y), &[c.clone()]);
        }
        let q = ratpoly::to_int(&q).primitive();
        let (x0, x1) = (c0 + c1 * &self.field.lo, c0 + c1 * &self.field.hi);
        let (lo, hi) = if x0 < x1 { (x0, x1) } else { (x1, x0) };
        Some(Arc::new(AlgebraicNumber::from_parts(q, lo, hi)))
    }

    pub fn add_same(&self, other: &Self) -> Self {
        Self {
            field: self.field.clone(),
            coeffs: ratpoly::add(&self.coeffs, &other.coeffs),
        }
    }

    pub fn sub_same(&self, other: &Self) -> Self {
        Self {
            field: self.field.clone(),
            coeffs: ratpoly::sub(&self.coeffs, &other.coeffs),
        }
    }

    pub fn mul_same(&self, other: &Self) -> Self {
        Self::reduce(self.field.clone(), ratpoly::mul(&self.coeffs, &other.coeffs))
    }

    pub fn neg(&self) -> Self {
        Self {
            field: self.field.clone(),
            coeffs: ratpoly::neg(&self.coeffs),
        }
    }

    pub fn add_rational(&self, q: &BigRational) -> Self {
        Self::reduce(self.field.clone(), ratpoly::add(&self.coeffs, &[q.clone()]))
    }

    pub fn mul_rational(&self, q: &BigRational) -> Self {
        Self {
            field: self.field.clone(),
            coeffs: ratpoly::scale(&self.coeffs, q),
        }
    }

    /// Multiplicative inverse. When the defining polynomial is reducible the
    /// field is split and the result lives over the factor that vanishes at
    /// the generator.
    pub fn inverse(&self) -> Result<Self, ScalarError> {
        if self.sign() == Ordering::Equal {
            return Err(ScalarError::DivisionByZero);
        }
        let d = ratpoly::from_int(&self.field.poly);
        let (g, s) = ratpoly::gcd_ext(&self.coeffs, &d);
        if g.len() == 1 {
            return Ok(Self::reduce(self.field.clone(), s));
        }
        let gi = ratpoly::to_int(&g);
        let h = self.field.poly.primitive().exact_div(&gi.primitive()).expect("gcd divides").primitive();
        let field = Arc::new(AlgebraicNumber::from_parts(h, self.field.lo.clone(), self.field.hi.clone()));
        Self::reduce(field, self.coeffs.clone()).inverse()
    }
}
