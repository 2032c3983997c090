//! Dense univariate polynomials over the integers, with Sturm sequences and
//! real root isolation.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial with integer coefficients, stored in ascending order of degree.
/// The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

fn sign_of(x: &BigInt) -> Ordering {
    x.cmp(&BigInt::zero())
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64s(&[1])
    }

    /// `x - a`
    pub fn linear_root(a: &BigInt) -> Self {
        Self::new(vec![-a.clone(), BigInt::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Non-negative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading().is_some_and(|l| l.is_negative()) {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `p(-x)`
    pub fn negate_x(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn eval_bigint(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    /// Sign of `p(x)`, computed on the homogenised numerator so that no
    /// rational normalisation is needed.
    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        let p = x.numer();
        let q = x.denom();
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        // acc = sum c_i p^i q^(n-i), evaluated by Horner in p with q powers folded in.
        for (k, c) in self.coeffs.iter().rev().enumerate() {
            if k == 0 {
                acc = c.clone();
            } else {
                qpow *= q;
                acc = acc * p + c * &qpow;
            }
        }
        sign_of(&acc)
    }

    /// Remainder of `self` by `d` up to a positive rational factor, together with
    /// the sign of the scalar that was introduced by pseudo-division.
    fn pseudo_rem_signed(&self, d: &Self) -> (Self, Ordering) {
        let dd = d.degree().expect("pseudo-remainder by zero polynomial");
        let lc = d.leading().unwrap().clone();
        let mut r = self.clone();
        let mut iters = 0usize;
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let lr = r.leading().unwrap().clone();
            let shift = dr - dd;
            let mut next: Vec<BigInt> = r.coeffs.iter().map(|c| c * &lc).collect();
            for (i, c) in d.coeffs.iter().enumerate() {
                next[i + shift] -= &lr * c;
            }
            r = Self::new(next);
            iters += 1;
        }
        let s = if lc.is_negative() && iters % 2 == 1 {
            Ordering::Less
        } else {
            Ordering::Greater
        };
        (r, s)
    }

    /// Exact quotient `self / d` when it exists in `Z[x]`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let ds = self.degree().unwrap();
        if ds < dd {
            return None;
        }
        let lc = d.leading().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); ds - dd + 1];
        for k in (0..=ds - dd).rev() {
            let top = &r[k + dd];
            let (quo, rem) = top.div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            for (i, c) in d.coeffs.iter().enumerate() {
                r[k + i] -= &quo * c;
            }
            q[k] = quo;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(q))
    }

    /// Primitive greatest common divisor with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let (r, _) = a.pseudo_rem_signed(&b);
            a = b;
            b = r.primitive();
        }
        a.primitive()
    }

    /// Product of the distinct irreducible factors, made primitive.
    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        self.primitive().exact_div(&g).expect("gcd divides").primitive()
    }

    /// Multiplicity of `x = a` as a root, by repeated synthetic division.
    pub fn root_multiplicity_at(&self, a: &BigInt) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = Self::linear_root(a);
        let mut p = self.clone();
        let mut m = 0;
        while p.eval_bigint(a).is_zero() {
            p = p.exact_div(&lin).expect("linear factor divides");
            m += 1;
        }
        m
    }

    pub fn sturm(&self) -> SturmSequence {
        let p0 = self.primitive();
        let mut polys = vec![p0.clone()];
        if p0.degree().unwrap_or(0) == 0 {
            return SturmSequence { polys };
        }
        let mut p1 = p0.derivative().primitive();
        let mut prev = p0;
        while !p1.is_zero() {
            let (r, s) = prev.pseudo_rem_signed(&p1);
            // next = -rem(prev, p1) up to a positive factor
            let mut next = r;
            if s == Ordering::Greater {
                next = next.neg();
            }
            let g = next.content();
            if !g.is_zero() {
                next = Self::new(next.coeffs.iter().map(|c| c / &g).collect());
            }
            polys.push(p1.clone());
            prev = p1;
            p1 = next;
        }
        SturmSequence { polys }
    }

    /// Distinct real roots in the open interval `(lo, hi)`.
    pub fn count_roots_open(&self, lo: &BigRational, hi: &BigRational) -> usize {
        if lo >= hi || self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let s = self.sturm();
        s.count_open(self, lo, hi)
    }

    /// Isolating intervals for the distinct real roots in `(lo, hi)`, in
    /// increasing order. Each result is either a degenerate interval holding an
    /// exact rational root, or an open interval containing exactly one root at
    /// whose endpoints the squarefree part has opposite signs. Intervals are
    /// refined until their width is at most `max_width`.
    pub fn isolate_roots(
        &self,
        lo: &BigRational,
        hi: &BigRational,
        max_width: &BigRational,
    ) -> Vec<(BigRational, BigRational)> {
        if lo >= hi || self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let sqf = self.squarefree();
        let sturm = sqf.sturm();
        let mut out = Vec::new();
        let two = BigRational::from_integer(2.into());
        let (a0, b0, mut exact) = shrink_to_non_roots(&sqf, &sturm, lo, hi);
        out.append(&mut exact);
        let total = sturm.count_open(&sqf, &a0, &b0);
        let mut stack = vec![(a0, b0, total)];
        while let Some((a, b, c)) = stack.pop() {
            if c == 0 {
                continue;
            }
            if c == 1 {
                out.push(refine_sign_change(&sqf, a, b, max_width));
                continue;
            }
            let m = split_point(&sqf, &a, &b, &two);
            let va = sturm.variations_at(&a);
            let vm = sturm.variations_at(&m);
            let vb = sturm.variations_at(&b);
            stack.push((a, m.clone(), va - vm));
            stack.push((m, b, vm - vb));
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out
    }
}

/// Picks a point near the midpoint of `(a, b)` that is not a root of `p`.
fn split_point(p: &IntPoly, a: &BigRational, b: &BigRational, two: &BigRational) -> BigRational {
    let mid = (a + b) / two;
    if p.sign_at(&mid) != Ordering::Equal {
        return mid;
    }
    let mut k = 3u32;
    loop {
        let off = (b - a) / BigRational::from_integer(BigInt::one() << k);
        let m = &mid + &off;
        if p.sign_at(&m) != Ordering::Equal {
            return m;
        }
        k += 1;
    }
}

/// Moves endpoints that are roots inward, reporting them as exact roots when
/// they lie strictly inside the original interval.
fn shrink_to_non_roots(
    p: &IntPoly,
    s: &SturmSequence,
    lo: &BigRational,
    hi: &BigRational,
) -> (BigRational, BigRational, Vec<(BigRational, BigRational)>) {
    let mut a = lo.clone();
    let mut b = hi.clone();
    let exact = Vec::new();
    // endpoints are excluded from the open interval, so nothing is reported here
    if p.sign_at(&a) == Ordering::Equal {
        let mut k = 1u32;
        loop {
            let cand = lo + (hi - lo) / BigRational::from_integer(BigInt::one() << k);
            if p.sign_at(&cand) != Ordering::Equal && s.variations_at(lo) == s.variations_at(&cand) {
                a = cand;
                break;
            }
            k += 1;
        }
    }
    if p.sign_at(&b) == Ordering::Equal {
        let mut k = 1u32;
        loop {
            let cand = hi - (hi - &a) / BigRational::from_integer(BigInt::one() << k);
            if p.sign_at(&cand) != Ordering::Equal
                && s.variations_at(&cand) == s.variations_at(hi) + 1
            {
                b = cand;
                break;
            }
            k += 1;
        }
    }
    (a, b, exact)
}

/// Bisects an interval with a sign change of the squarefree `p` down to `max_width`.
pub(crate) fn refine_sign_change(
    p: &IntPoly,
    mut a: BigRational,
    mut b: BigRational,
    max_width: &BigRational,
) -> (BigRational, BigRational) {
    let two = BigRational::from_integer(2.into());
    let sa = p.sign_at(&a);
    while &(&b - &a) > max_width {
        let m = (&a + &b) / &two;
        match p.sign_at(&m) {
            Ordering::Equal => return (m.clone(), m),
            s if s == sa => a = m,
            _ => b = m,
        }
    }
    (a, b)
}

/// Sturm sequence of a polynomial, up to positive scalar factors.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    polys: Vec<IntPoly>,
}

impl SturmSequence {
    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn variations_at(&self, x: &BigRational) -> usize {
        count_variations(self.polys.iter().map(|p| p.sign_at(x)))
    }

    pub fn variations_at_pos_inf(&self) -> usize {
        count_variations(self.polys.iter().map(|p| sign_of(p.leading().unwrap())))
    }

    pub fn variations_at_neg_inf(&self) -> usize {
        count_variations(self.polys.iter().map(|p| {
            let s = sign_of(p.leading().unwrap());
            if p.degree().unwrap() % 2 == 1 {
                s.reverse()
            } else {
                s
            }
        }))
    }

    /// Distinct roots of `p` (the polynomial this sequence was built from) in `(lo, hi)`.
    pub fn count_open(&self, p: &IntPoly, lo: &BigRational, hi: &BigRational) -> usize {
        let v = self.variations_at(lo) - self.variations_at(hi);
        if p.sign_at(hi) == Ordering::Equal {
            v - 1
        } else {
            v
        }
    }

    /// Distinct real roots.
    pub fn count_real(&self) -> usize {
        self.variations_at_neg_inf() - self.variations_at_pos_inf()
    }
}

fn count_variations(signs: impl Iterator<Item = Ordering>) -> usize {
    let mut last = Ordering::Equal;
    let mut v = 0;
    for s in signs {
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}x^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)^2 (x+2)
        let p = IntPoly::from_i64s(&[2, -3, 0, 1]);
        assert_eq!(p.squarefree(), IntPoly::from_i64s(&[-2, 1, 1]));
        assert_eq!(p.gcd(&p.derivative()), IntPoly::from_i64s(&[-1, 1]));
        assert_eq!(p.root_multiplicity_at(&BigInt::one()), 2);
    }

    #[test]
    fn sturm_counts_golden_roots() {
        let p = IntPoly::from_i64s(&[-1, -1, 1]);
        assert_eq!(p.sturm().count_real(), 2);
        assert_eq!(p.count_roots_open(&q(1, 1), &q(2, 1)), 1);
        assert_eq!(p.count_roots_open(&q(-1, 1), &q(0, 1)), 1);
    }

    #[test]
    fn isolation_reports_rational_roots_exactly() {
        // (2x-1)(x^2-2)
        let p = IntPoly::from_i64s(&[2, -4, -1, 2]);
        let roots = p.isolate_roots(&q(-2, 1), &q(2, 1), &q(1, 1 << 20));
        assert_eq!(roots.len(), 3);
        let half = q(1, 2);
        assert_eq!(roots.iter().filter(|(a, b)| *a <= half && half <= *b).count(), 1);
        for (a, b) in &roots {
            assert!(b - a <= q(1, 1 << 20));
        }
    }

    #[test]
    fn endpoint_roots_are_excluded() {
        let p = IntPoly::from_i64s(&[-1, 0, 1]);
        assert_eq!(p.count_roots_open(&q(-1, 1), &q(1, 1)), 0);
        assert!(p.isolate_roots(&q(-1, 1), &q(1, 1), &q(1, 8)).is_empty());
        let r = p.isolate_roots(&q(-1, 1), &q(2, 1), &q(1, 8));
        assert_eq!(r.len(), 1);
        assert!(r[0].0 <= q(1, 1) && q(1, 1) <= r[0].1);
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(IntPoly::from_i64s(&[-1, -1, 1]).to_string(), "x^2 - x - 1");
    }
}
