//! Outward-rounded rational interval arithmetic, including certified
//! enclosures of `ln` and `exp`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

/// Largest multiple of `2^-bits` not above `q`.
pub fn round_down(q: &BigRational, bits: u32) -> BigRational {
    let s = pow2(bits);
    let n = (q.numer() * &s).div_floor(q.denom());
    BigRational::new(n, s)
}

/// Smallest multiple of `2^-bits` not below `q`.
pub fn round_up(q: &BigRational, bits: u32) -> BigRational {
    let s = pow2(bits);
    let n = -((-(q.numer() * &s)).div_floor(q.denom()));
    BigRational::new(n, s)
}

impl RInterval {
    pub fn point(q: BigRational) -> Self {
        Self { lo: q.clone(), hi: q }
    }

    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn overlaps(&self, o: &Self) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn round_out(&self, bits: u32) -> Self {
        Self {
            lo: round_down(&self.lo, bits),
            hi: round_up(&self.hi, bits),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.hi, -&self.lo)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (lo, hi) = super::ratpoly::imul(&self.lo, &self.hi, &o.lo, &o.hi);
        Self::new(lo, hi)
    }

    /// Reciprocal; `None` when the interval contains zero.
    pub fn recip(&self) -> Option<Self> {
        if self.lo.is_positive() || self.hi.is_negative() {
            Some(Self::new(self.hi.recip(), self.lo.recip()))
        } else {
            None
        }
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        Some(self.mul(&o.recip()?))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_negative() {
            Self::new(&self.hi * k, &self.lo * k)
        } else {
            Self::new(&self.lo * k, &self.hi * k)
        }
    }

    /// Enclosure of `ln` on a positive interval.
    pub fn ln(&self, bits: u32) -> Option<Self> {
        if !self.lo.is_positive() {
            return None;
        }
        Some(Self::new(ln_rational(&self.lo, bits).lo, ln_rational(&self.hi, bits).hi))
    }

    /// Enclosure of `exp`.
    pub fn exp(&self, bits: u32) -> Self {
        Self::new(exp_rational(&self.lo, bits).lo, exp_rational(&self.hi, bits).hi)
    }
}

/// Enclosure of `atanh(z)` for rational `|z| <= 1/2`, width about `2^-bits`.
fn atanh_small(z: &BigRational, bits: u32) -> RInterval {
    let guard = bits + 8;
    let z2 = z * z;
    let mut term = z.clone();
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    let eps = BigRational::new(BigInt::one(), pow2(bits + 4));
    let one = BigRational::one();
    let mut k: u64 = 0;
    loop {
        let t = &term / BigRational::from_integer((2 * k + 1).into());
        lo += round_down(&t, guard);
        hi += round_up(&t, guard);
        term = round_to(&(&term * &z2), guard + 16);
        k += 1;
        // remaining terms bounded by |z|^(2k+1) / ((2k+1)(1 - z^2)) plus the truncation slack in term
        let tail = (term.abs() + BigRational::new(BigInt::one(), pow2(guard + 16)))
            / BigRational::from_integer((2 * k + 1).into())
            / (&one - &z2);
        if tail < eps {
            let slack = tail + BigRational::new(BigInt::from(k + 1), pow2(guard + 12));
            return RInterval::new(lo - &slack, hi + slack);
        }
    }
}

/// Nearest multiple of `2^-bits`.
fn round_to(q: &BigRational, bits: u32) -> BigRational {
    let s = pow2(bits);
    let n: BigInt = (q.numer() * &s * BigInt::from(2) + q.denom()).div_floor(&(q.denom() * BigInt::from(2)));
    BigRational::new(n, s)
}

/// Enclosure of `ln 2 = 2 atanh(1/3)`.
pub fn ln2(bits: u32) -> RInterval {
    let a = atanh_small(&BigRational::new(1.into(), 3.into()), bits + 2);
    RInterval::new(a.lo * BigRational::from_integer(2.into()), a.hi * BigRational::from_integer(2.into()))
        .round_out(bits + 2)
}

/// Enclosure of `ln q` for rational `q > 0`.
pub fn ln_rational(q: &BigRational, bits: u32) -> RInterval {
    assert!(q.is_positive(), "ln of non-positive number");
    if q.is_one() {
        return RInterval::point(BigRational::zero());
    }
    // q = 2^k m with m in [2/3, 4/3]
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let mut k = nb - db;
    let two = BigRational::from_integer(2.into());
    let scale = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(pow2(k as u32))
        } else {
            BigRational::new(BigInt::one(), pow2((-k) as u32))
        }
    };
    let mut m = q / scale(k);
    let lower = BigRational::new(2.into(), 3.into());
    let upper = BigRational::new(4.into(), 3.into());
    while m > upper {
        m /= &two;
        k += 1;
    }
    while m < lower {
        m *= &two;
        k -= 1;
    }
    let z = (&m - BigRational::one()) / (&m + BigRational::one());
    let extra = 64 - (k.unsigned_abs().max(1)).leading_zeros();
    let at = atanh_small(&z, bits + 2);
    let lnm = RInterval::new(&at.lo * &two, &at.hi * &two);
    let l2 = ln2(bits + extra + 2);
    let kl2 = l2.scale(&BigRational::from_integer(k.into()));
    kl2.add(&lnm).round_out(bits + 2)
}

/// Enclosure of `exp q` for rational `q`.
pub fn exp_rational(q: &BigRational, bits: u32) -> RInterval {
    if q.is_zero() {
        return RInterval::point(BigRational::one());
    }
    // reduce to |r| <= 1/2, then square s times
    let mut s: u32 = 0;
    let half = BigRational::new(1.into(), 2.into());
    let mut r = q.clone();
    while r.abs() > half {
        r /= BigRational::from_integer(2.into());
        s += 1;
    }
    // magnitude of the result in bits, to keep absolute precision after scaling
    let mag = q.abs().ceil().to_integer().to_u64().unwrap_or(u64::MAX).min(1 << 20) as u32 * 2 + 2;
    let work = bits + s + mag + 8;
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    let mut term = BigRational::one();
    let mut j: u64 = 0;
    let eps = BigRational::new(BigInt::one(), pow2(work + 2));
    loop {
        lo += round_down(&term, work + 4);
        hi += round_up(&term, work + 4);
        j += 1;
        term = &term * &r / BigRational::from_integer(j.into());
        term = round_to(&term, work + 16);
        // tail after this point is at most 2 |term|
        let tail = term.abs() * BigRational::from_integer(2.into())
            + BigRational::new(BigInt::one(), pow2(work + 8));
        if tail < eps {
            let slack = tail + BigRational::new(BigInt::from(j + 1), pow2(work + 12));
            lo -= &slack;
            hi += slack;
            break;
        }
    }
    let mut iv = RInterval::new(lo, hi).round_out(work);
    if iv.lo.is_negative() {
        iv.lo = BigRational::zero();
    }
    for _ in 0..s {
        iv = iv.mul(&iv).round_out(work);
    }
    iv.round_out(bits + 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: &BigRational) -> f64 {
        q.to_f64().unwrap()
    }

    #[test]
    fn ln2_is_tight() {
        let l = ln2(100);
        assert!(l.width() < BigRational::new(1.into(), pow2(98)));
        assert!((f(&l.lo) - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn ln_and_exp_agree_with_floats() {
        for (n, d) in [(3i64, 7i64), (5, 2), (1, 1000), (999, 1000), (77, 3)] {
            let q = BigRational::new(n.into(), d.into());
            let l = ln_rational(&q, 80);
            let x = (n as f64 / d as f64).ln();
            assert!(f(&l.lo) <= x + 1e-15 && x - 1e-15 <= f(&l.hi), "ln {n}/{d}");
            assert!(l.width() < BigRational::new(1.into(), pow2(78)));
            let e = exp_rational(&q, 80);
            let y = (n as f64 / d as f64).exp();
            assert!(f(&e.lo) <= y * (1.0 + 1e-14) && y * (1.0 - 1e-14) <= f(&e.hi), "exp {n}/{d}");
            let en = exp_rational(&-q.clone(), 80);
            assert!(en.width() < BigRational::new(1.into(), pow2(78)));
        }
    }

    #[test]
    fn rounding_is_directed() {
        let q = BigRational::new(1.into(), 3.into());
        assert!(round_down(&q, 10) < q && q < round_up(&q, 10));
        let m = -q.clone();
        assert!(round_down(&m, 10) < m && m < round_up(&m, 10));
    }
}
