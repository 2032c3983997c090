//! Evaluation of `f(t) = sum_m c_m phi(2^m t)`, exactly where the doubling
//! orbit of `t` allows it and by certified enclosure otherwise.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::sequence::CoefficientSequence;
use super::signs::{Sign, SignSequence, ORBIT_CAP};
use crate::error::EvalError;
use crate::scalar::{decimal, RInterval, Scalar};

/// Distance from `t` to the nearest integer.
pub fn tent(t: &BigRational) -> BigRational {
    let f = t - t.floor();
    let g = BigRational::one() - &f;
    if f <= g {
        f
    } else {
        g
    }
}

fn check_domain(t: &BigRational) -> Result<(), EvalError> {
    if t.is_negative() || t > &BigRational::one() {
        Err(EvalError::Domain(decimal::to_fraction(t)))
    } else {
        Ok(())
    }
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

/// Doubling orbit of `t mod 1`: the tent values `phi(2^m t)` for the
/// preperiod and for one period.
struct Orbit {
    pre: Vec<BigRational>,
    cycle: Vec<BigRational>,
}

fn orbit(t: &BigRational, cap: usize) -> Option<Orbit> {
    let den = t.denom().clone();
    let mut x = (t - t.floor()).numer().clone();
    let mut seen: HashMap<BigInt, usize> = HashMap::new();
    let mut vals = Vec::new();
    loop {
        if let Some(&i) = seen.get(&x) {
            let cycle = vals.split_off(i);
            return Some(Orbit { pre: vals, cycle });
        }
        if vals.len() >= cap {
            return None;
        }
        seen.insert(x.clone(), vals.len());
        let y = &den - &x;
        vals.push(BigRational::new(if x <= y { x.clone() } else { y }, den.clone()));
        x <<= 1u32;
        if x >= den {
            x -= &den;
        }
    }
}

impl Orbit {
    fn phi(&self, m: usize) -> &BigRational {
        if m < self.pre.len() {
            &self.pre[m]
        } else {
            &self.cycle[(m - self.pre.len()) % self.cycle.len()]
        }
    }

    fn is_eventually_zero(&self) -> bool {
        self.cycle.iter().all(Zero::is_zero)
    }
}

/// `f_n(t) = sum_{m <= n} c_m phi(2^m t)`, exactly.
pub fn eval_truncated(c: &CoefficientSequence, n: usize, t: &BigRational) -> Result<Scalar, EvalError> {
    check_domain(t)?;
    let mut acc = Scalar::zero();
    let mut x = t.clone();
    let two = BigRational::from_integer(2.into());
    let ratio = c.alpha().map(|a| a.mul_rational(&half()));
    let mut power = Scalar::one();
    for m in 0..=n {
        let p = tent(&x);
        if !p.is_zero() {
            let cm = match &ratio {
                Some(_) => power.clone(),
                None => c.coefficient(m),
            };
            acc = acc.add(&cm.mul_rational(&p));
        }
        if let Some(r) = &ratio {
            power = power.mul(r);
        }
        x = &x * &two;
        x = &x - x.floor();
    }
    Ok(acc)
}

/// Exact `f_alpha(t)` for the geometric sequence `c_m = (alpha/2)^m`, summing
/// the preperiodic part and the repeating block of the doubling orbit in
/// closed form.
pub fn eval_periodic(alpha: &Scalar, t: &BigRational) -> Result<Scalar, EvalError> {
    check_domain(t)?;
    let Some(o) = orbit(t, ORBIT_CAP) else {
        let c = CoefficientSequence::geometric(alpha.clone());
        return eval_series(&c, t, &BigRational::new(BigInt::one(), BigInt::one() << 128u32));
    };
    let r = alpha.mul_rational(&half());
    let horner = |vals: &[BigRational]| -> Scalar {
        vals.iter()
            .rev()
            .fold(Scalar::zero(), |acc, v| acc.mul(&r).add(&Scalar::Rational(v.clone())))
    };
    let head = horner(&o.pre);
    if o.is_eventually_zero() {
        return Ok(head);
    }
    let block = horner(&o.cycle);
    let rs = r.powi(o.pre.len() as u32);
    let rl = r.powi(o.cycle.len() as u32);
    let denom = Scalar::one().sub(&rl);
    let tail = rs.mul(&block).checked_div(&denom)?;
    Ok(head.add(&tail))
}

/// Running enclosures of `c_0, c_1, ...` at a fixed absolute precision.
enum Coefficients<'a> {
    Geometric { ratio: RInterval, power: RInterval, bits: u32 },
    Generic { c: &'a CoefficientSequence, m: usize, bits: u32 },
}

impl<'a> Coefficients<'a> {
    fn new(c: &'a CoefficientSequence, bits: u32, n: usize) -> Self {
        match c {
            CoefficientSequence::Geometric { alpha } => {
                let extra = 2 * (usize::BITS - n.leading_zeros()) + 16;
                let ratio = alpha.mul_rational(&half()).enclosure(bits + extra);
                Self::Geometric {
                    ratio,
                    power: RInterval::point(BigRational::one()),
                    bits: bits + extra / 2,
                }
            }
            _ => Self::Generic { c, m: 0, bits },
        }
    }

    fn next(&mut self) -> RInterval {
        match self {
            Self::Geometric { ratio, power, bits } => {
                let out = power.clone();
                *power = power.mul(ratio).round_out(*bits);
                out
            }
            Self::Generic { c, m, bits } => {
                let e = c.coefficient(*m).enclosure(*bits);
                *m += 1;
                e
            }
        }
    }
}

fn floor_scaled(q: &BigRational, bits: u32) -> BigInt {
    (q.numer() << bits).div_floor(q.denom())
}

fn ceil_scaled(q: &BigRational, bits: u32) -> BigInt {
    -((-(q.numer() << bits)).div_floor(q.denom()))
}

/// Sums `c_m * phi_m` for `m <= n` in fixed point with unit `2^-bits`, where
/// `phi_m` is given as a nonnegative interval.
fn accumulate(
    c: &CoefficientSequence,
    n: usize,
    bits: u32,
    phi: &dyn Fn(usize) -> (BigRational, BigRational),
) -> (BigInt, BigInt) {
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    if let CoefficientSequence::PowerSquared = c {
        for m in 0..=n {
            let (pl, ph) = phi(m);
            let d = BigInt::from(m as u64 + 1);
            let d2 = &d * &d;
            lo += (pl.numer() << bits).div_floor(&(pl.denom() * &d2));
            hi += -((-(ph.numer() << bits)).div_floor(&(ph.denom() * &d2)));
        }
        return (lo, hi);
    }
    let mut cs = Coefficients::new(c, bits + 4, n);
    for m in 0..=n {
        let e = cs.next();
        let (pl, ph) = phi(m);
        if ph.is_zero() {
            continue;
        }
        let (a, b) = crate::scalar::RInterval::new(e.lo, e.hi)
            .mul(&RInterval::new(pl, ph))
            .into_pair();
        lo += floor_scaled(&a, bits);
        hi += ceil_scaled(&b, bits);
    }
    (lo, hi)
}

impl RInterval {
    fn into_pair(self) -> (BigRational, BigRational) {
        (self.lo, self.hi)
    }
}

const MAX_TERMS: usize = 1 << 26;

/// Smallest `N` (up to a factor of two) with `tail_bound(N) <= target`.
fn terms_for(c: &CoefficientSequence, target: &BigRational) -> Result<usize, EvalError> {
    if let Some(end) = c.support_end() {
        return Ok(end.saturating_sub(1));
    }
    let mut n = 8usize;
    loop {
        let t = c.tail_bound(n).ok_or(EvalError::NoTailBound)?;
        if &t <= target {
            break;
        }
        if n >= MAX_TERMS {
            return Err(EvalError::NoTailBound);
        }
        n *= 2;
    }
    // tighten by bisection
    let (mut lo, mut hi) = (n / 2, n);
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if &c.tail_bound(mid).ok_or(EvalError::NoTailBound)? <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn bits_for(n: usize, width: &BigRational) -> u32 {
    // (3 n + 3) 2^-bits <= width / 4
    let need = BigRational::from_integer(BigInt::from(12 * (n as u64 + 1))) / width;
    need.ceil().to_integer().bits() as u32 + 1
}

fn series_bounds(
    c: &CoefficientSequence,
    width: &BigRational,
    phi: &dyn Fn(usize) -> (BigRational, BigRational),
    phi_sup: &BigRational,
) -> Result<RInterval, EvalError> {
    let two = BigRational::from_integer(2.into());
    // tail contributes at most phi_sup * tail_bound(N) on each side
    let target = if phi_sup.is_zero() { width.clone() } else { width / (&two * &two) / phi_sup };
    let n = terms_for(c, &target)?;
    let tail = match c.support_end() {
        Some(_) => BigRational::zero(),
        None => c.tail_bound(n).ok_or(EvalError::NoTailBound)? * phi_sup,
    };
    let bits = bits_for(n, width);
    let (lo, hi) = accumulate(c, n, bits, phi);
    let scale = BigRational::from_integer(BigInt::one() << bits);
    Ok(RInterval::new(
        BigRational::from_integer(lo) / &scale - &tail,
        BigRational::from_integer(hi) / &scale + &tail,
    ))
}

fn refinable_interval<F>(first: RInterval, f: F) -> Scalar
where
    F: Fn(&BigRational) -> Result<RInterval, EvalError> + Send + Sync + 'static,
{
    let keep = first.clone();
    let refiner = move |bits: u32| -> RInterval {
        let w = BigRational::new(BigInt::one(), BigInt::one() << bits);
        f(&w).unwrap_or_else(|_| keep.clone())
    };
    Scalar::refinable_from(first, Arc::new(refiner))
}

/// Certified enclosure of `f(t)` with width at most `target_width`.
pub fn eval_series(c: &CoefficientSequence, t: &BigRational, target_width: &BigRational) -> Result<Scalar, EvalError> {
    check_domain(t)?;
    let o = match orbit(t, ORBIT_CAP) {
        Some(o) => o,
        None => return Err(EvalError::InsufficientPrefix { have: ORBIT_CAP }),
    };
    if o.is_eventually_zero() {
        // dyadic point: the series terminates
        return eval_truncated(c, o.pre.len().saturating_sub(1), t);
    }
    let o = Arc::new(o);
    let cc = c.clone();
    let oo = o.clone();
    let run = move |w: &BigRational| -> Result<RInterval, EvalError> {
        let phi = |m: usize| {
            let p = oo.phi(m).clone();
            (p.clone(), p)
        };
        series_bounds(&cc, w, &phi, &half())
    };
    let first = run(target_width)?;
    Ok(refinable_interval(first, run))
}

/// `sum_{k >= 0} 2^-(k+1) sigma_k` for an eventually periodic sequence.
fn signed_binary(seq: &SignSequence) -> BigRational {
    let p = seq.period().expect("periodic sequence");
    let mut acc = BigRational::zero();
    let mut w = half();
    for s in &seq.prefix()[..p.start] {
        acc += &w * BigRational::from_integer(s.value().into());
        w /= BigRational::from_integer(2.into());
    }
    let mut block = BigRational::zero();
    let mut v = BigRational::one();
    for s in &p.block {
        v /= BigRational::from_integer(2.into());
        block += &v * BigRational::from_integer(s.value().into());
    }
    let l = p.block.len();
    let geo = BigRational::one() - BigRational::new(BigInt::one(), BigInt::one() << l);
    // w = 2^-(start+1); block sum is weighted from 2^-1, so shift by 2^-start
    acc + block / geo * &w * BigRational::from_integer(2.into())
}

/// Enclosure of `f(T(rho))` through the sign-sequence form
/// `f = 1/4 sum_m c_m (1 - sum_{k >= 1} 2^-k rho_m rho_{m+k})`.
pub fn eval_from_rademacher(
    c: &CoefficientSequence,
    rho: &SignSequence,
    target_width: &BigRational,
) -> Result<Scalar, EvalError> {
    let quarter = BigRational::new(1.into(), 4.into());
    let phi_sup = half();
    match rho.period() {
        Some(p) => {
            let start = p.start;
            let l = p.block.len();
            // phi_m for m < start and for one period beyond
            let count = start + l;
            let mut vals = Vec::with_capacity(count);
            for m in 0..count {
                let inner = signed_binary(&rho.shifted(m + 1));
                let r = BigRational::from_integer(rho.get(m).unwrap().value().into());
                vals.push(&quarter * (BigRational::one() - r * inner));
            }
            let vals = Arc::new(vals);
            let cc = c.clone();
            let run = move |w: &BigRational| -> Result<RInterval, EvalError> {
                let phi = |m: usize| {
                    let i = if m < start { m } else { start + (m - start) % l };
                    (vals[i].clone(), vals[i].clone())
                };
                series_bounds(&cc, w, &phi, &half())
            };
            let first = run(target_width)?;
            Ok(refinable_interval(first, run))
        }
        None => {
            let signs: Vec<Sign> = rho.prefix().to_vec();
            let len = signs.len();
            if len < 2 {
                return Err(EvalError::InsufficientPrefix { have: len });
            }
            let two = BigRational::from_integer(2.into());
            let n_tail = terms_for(c, &(target_width / (&two * &two) / &phi_sup))?;
            if n_tail + 1 >= len {
                return Err(EvalError::InsufficientPrefix { have: len });
            }
            // phi_m is known up to 2^-(len-1-m) / 4
            let mut vals = Vec::with_capacity(n_tail + 1);
            let mut err_total = BigRational::zero();
            for m in 0..=n_tail {
                let mut inner = BigRational::zero();
                let mut w = half();
                for s in &signs[m + 1..] {
                    inner += &w * BigRational::from_integer(s.value().into());
                    w /= &two;
                }
                let r = BigRational::from_integer(signs[m].value().into());
                let mid = &quarter * (BigRational::one() - r * inner);
                let slack = &quarter * &w * &two;
                let lo = (&mid - &slack).max(BigRational::zero());
                let hi = (&mid + &slack).min(half());
                let ce = c.coefficient(m).enclosure(64);
                err_total += ce.lo.abs().max(ce.hi.abs()) * (&hi - &lo);
                vals.push((lo, hi));
            }
            if err_total > target_width / &two {
                return Err(EvalError::InsufficientPrefix { have: len });
            }
            let tail = match c.support_end() {
                Some(_) => BigRational::zero(),
                None => c.tail_bound(n_tail).ok_or(EvalError::NoTailBound)? * &phi_sup,
            };
            let bits = bits_for(n_tail, target_width) + 2;
            let (lo, hi) = accumulate(c, n_tail, bits, &|m| vals[m].clone());
            let scale = BigRational::from_integer(BigInt::one() << bits);
            Ok(Scalar::interval(
                BigRational::from_integer(lo) / &scale - &tail,
                BigRational::from_integer(hi) / &scale + &tail,
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{IntPoly, SignResult};
    use crate::takagi::signs::Sign::{Minus as M, Plus as P};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn quartic() -> Scalar {
        Scalar::root(&IntPoly::from_i64s(&[1, -1, -1, -1, 1]), &q(1, 2), &q(3, 5)).unwrap()
    }

    #[test]
    fn tent_examples() {
        assert_eq!(tent(&q(3, 4)), q(1, 4));
        assert_eq!(tent(&q(14, 31)), q(14, 31));
        assert_eq!(tent(&q(8, 5)), q(2, 5));
    }

    #[test]
    fn truncated_examples() {
        let c = CoefficientSequence::geometric(Scalar::one());
        assert_eq!(eval_truncated(&c, 10, &q(1, 2)).unwrap().as_rational(), Some(&q(1, 2)));
        assert_eq!(eval_truncated(&CoefficientSequence::PowerSquared, 5, &q(0, 1)).unwrap().as_rational(), Some(&q(0, 1)));
        assert!(eval_truncated(&c, 3, &q(3, 2)).is_err());
    }

    #[test]
    fn periodic_examples() {
        let v = eval_periodic(&quartic(), &q(14, 31)).unwrap();
        assert!((v.to_f64() - 0.508155132275996).abs() < 1e-12);
        let s2 = Scalar::sqrt2();
        let v = eval_periodic(&s2, &q(1, 3)).unwrap();
        let expect = Scalar::from_int(2).add(&s2).mul_rational(&q(1, 3));
        assert_eq!(v.compare(&expect), SignResult::Zero);
        let v = eval_periodic(&Scalar::from_int(-1), &q(3, 4)).unwrap();
        assert_eq!(v.as_rational(), Some(&q(0, 1)));
    }

    #[test]
    fn series_examples() {
        let c = CoefficientSequence::geometric(Scalar::one());
        let w = q(1, 1_000_000_000);
        let e = eval_series(&c, &q(1, 3), &w).unwrap().enclosure(40);
        assert!(e.contains(&q(2, 3)) && e.width() <= w);
        let e = eval_series(&CoefficientSequence::PowerSquared, &q(1, 1), &w).unwrap().enclosure(40);
        assert!(e.contains(&q(0, 1)));
    }

    #[test]
    fn rademacher_examples() {
        let w = q(1, 1 << 30);
        let c = CoefficientSequence::geometric(Scalar::from_ratio(3, 4));
        let rho = SignSequence::eventually(vec![P], vec![M]);
        assert!(eval_from_rademacher(&c, &rho, &w).unwrap().enclosure(40).contains(&q(1, 2)));
        let zero = eval_from_rademacher(&c, &SignSequence::constant(P), &w).unwrap();
        assert!(zero.enclosure(40).contains(&q(0, 1)));
        let s2 = Scalar::sqrt2();
        let v = eval_from_rademacher(&CoefficientSequence::geometric(s2.clone()), &SignSequence::periodic(vec![P, M]), &w).unwrap();
        let expect = Scalar::from_int(2).add(&s2).mul_rational(&q(1, 3));
        assert!(v.overlaps(&expect, 60));
        // finite prefix of the same sequence
        let fin = SignSequence::finite(SignSequence::periodic(vec![P, M]).take(200));
        let v = eval_from_rademacher(&CoefficientSequence::geometric(Scalar::from_int(1)), &fin, &q(1, 1 << 20)).unwrap();
        assert!(v.enclosure(40).contains(&q(2, 3)));
    }
}
