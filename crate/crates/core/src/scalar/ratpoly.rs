//! Polynomials over the rationals, used to represent elements of a simple
//! algebraic extension `Q(theta)` as residues modulo the defining polynomial.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::IntPoly;

pub(crate) type RatPoly = Vec<BigRational>;

pub(crate) fn trim(mut p: RatPoly) -> RatPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub(crate) fn from_int(p: &IntPoly) -> RatPoly {
    p.coeffs()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect()
}

/// Positive integer multiple of `p` with coprime integer coefficients.
pub(crate) fn to_int(p: &[BigRational]) -> IntPoly {
    let l = p
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
    let poly = IntPoly::new(ints);
    let g = poly.content();
    if g.is_zero() || g.is_one() {
        poly
    } else {
        IntPoly::new(poly.coeffs().iter().map(|c| c / &g).collect())
    }
}

pub(crate) fn add(a: &[BigRational], b: &[BigRational]) -> RatPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| match (a.get(i), b.get(i)) {
                (Some(x), Some(y)) => x + y,
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => BigRational::zero(),
            })
            .collect(),
    )
}

pub(crate) fn neg(a: &[BigRational]) -> RatPoly {
    a.iter().map(|c| -c).collect()
}

pub(crate) fn sub(a: &[BigRational], b: &[BigRational]) -> RatPoly {
    add(a, &neg(b))
}

pub(crate) fn mul(a: &[BigRational], b: &[BigRational]) -> RatPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub(crate) fn scale(a: &[BigRational], k: &BigRational) -> RatPoly {
    trim(a.iter().map(|c| c * k).collect())
}

/// Quotient and remainder of `a` by nonzero `d`.
pub(crate) fn div_rem(a: &[BigRational], d: &[BigRational]) -> (RatPoly, RatPoly) {
    let d = trim(d.to_vec());
    let dd = d.len() - 1;
    let lc = d[dd].clone();
    let mut r = trim(a.to_vec());
    if r.len() <= dd {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - dd];
    while r.len() > dd {
        let k = r.len() - 1 - dd;
        let f = r.last().unwrap() / &lc;
        for (i, c) in d.iter().enumerate() {
            r[k + i] -= &f * c;
        }
        q[k] = f;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

pub(crate) fn rem(a: &[BigRational], d: &[BigRational]) -> RatPoly {
    div_rem(a, d).1
}

/// Extended Euclid: returns monic `g = gcd(a, b)` and `s` with `s*a = g (mod b)`.
pub(crate) fn gcd_ext(a: &[BigRational], b: &[BigRational]) -> (RatPoly, RatPoly) {
    let mut r0 = trim(a.to_vec());
    let mut r1 = trim(b.to_vec());
    let mut s0: RatPoly = vec![BigRational::one()];
    let mut s1: RatPoly = Vec::new();
    while !r1.is_empty() {
        let (q, r) = div_rem(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if r0.is_empty() {
        return (r0, s0);
    }
    let inv = BigRational::one() / r0.last().unwrap();
    (scale(&r0, &inv), scale(&s0, &inv))
}

/// Interval product of `[a, b]` and `[c, d]`.
pub(crate) fn imul(
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
    d: &BigRational,
) -> (BigRational, BigRational) {
    let ps = [a * c, a * d, b * c, b * d];
    let mut lo = ps[0].clone();
    let mut hi = ps[0].clone();
    for p in &ps[1..] {
        if *p < lo {
            lo = p.clone();
        }
        if *p > hi {
            hi = p.clone();
        }
    }
    (lo, hi)
}

/// Enclosure of `p([lo, hi])` by centred Horner evaluation: `p(m) + p'([lo,hi]) * [lo-m, hi-m]`.
pub(crate) fn eval_interval(
    p: &[BigRational],
    lo: &BigRational,
    hi: &BigRational,
) -> (BigRational, BigRational) {
    if p.is_empty() {
        return (BigRational::zero(), BigRational::zero());
    }
    if lo == hi {
        let v = eval(p, lo);
        return (v.clone(), v);
    }
    let two = BigRational::from_integer(2.into());
    let m = (lo + hi) / &two;
    let r = (hi - lo) / &two;
    let pm = eval(p, &m);
    let dp: RatPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(i.into()))
        .collect();
    // |p'(x)| on the interval is bounded by sum |c_i| |x|^i with |x| <= max(|lo|,|hi|)
    let xmax = lo.abs().max(hi.abs());
    let bound = dp
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * &xmax + c.abs());
    let slack = bound * r;
    (&pm - &slack, pm + slack)
}

pub(crate) fn eval(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn inverse_modulo_quadratic() {
        // in Q[x]/(x^2 - 2): (1 + x)^-1 = -1 + x
        let d = vec![r(-2), r(0), r(1)];
        let a = vec![r(1), r(1)];
        let (g, s) = gcd_ext(&a, &d);
        assert_eq!(g, vec![r(1)]);
        assert_eq!(rem(&s, &d), vec![r(-1), r(1)]);
    }

    #[test]
    fn interval_evaluation_contains_values() {
        let p = vec![r(-1), r(-1), r(1)];
        let (lo, hi) = eval_interval(&p, &r(1), &r(2));
        assert!(lo <= r(-1) && hi >= r(1));
    }
}
