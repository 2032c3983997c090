//! Littlewood polynomials: real roots, step roots, and exhaustive scans.
//!
//! A step root of `P(x) = sum_{m <= n} rho_m x^m` is a real root `a` with
//! `rho_{k+1} P_k(a) <= 0` for every prefix `P_k = sum_{m <= k} rho_m x^m`, `k < n`.

mod fast;
mod scan;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::scalar::{IntPoly, Scalar, SignResult};
use crate::takagi::Sign;

pub use scan::{
    closure_gaps, scan, scan_records, DegreeCounts, Histogram, ScanConfig, ScanError, ScanRecord, ScanSummary,
    MAX_SCAN_DEGREE,
};

/// A polynomial with every coefficient in `{-1, +1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LittlewoodPoly {
    coeffs: Vec<Sign>,
}

impl LittlewoodPoly {
    pub fn new(coeffs: Vec<Sign>) -> Self {
        assert!(!coeffs.is_empty(), "a polynomial needs at least one coefficient");
        Self { coeffs }
    }

    /// Degree `n` with `rho_0 = +1` and `rho_k = -1` exactly when bit `k - 1` of `mask` is set.
    pub fn from_mask(degree: usize, mask: u64) -> Self {
        let mut c = vec![Sign::Plus];
        c.extend((1..=degree).map(|k| if mask >> (k - 1) & 1 == 1 { Sign::Minus } else { Sign::Plus }));
        Self { coeffs: c }
    }

    /// Inverse of [`LittlewoodPoly::from_mask`] for polynomials with `rho_0 = +1`.
    pub fn mask(&self) -> u64 {
        self.coeffs[1..]
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Sign::Minus)
            .fold(0u64, |m, (i, _)| m | 1 << i)
    }

    /// Parses a sign string such as `"+--"`, constant term first.
    pub fn parse(s: &str) -> Option<Self> {
        let c: Option<Vec<Sign>> = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c {
                '+' => Some(Sign::Plus),
                '-' => Some(Sign::Minus),
                _ => None,
            })
            .collect();
        c.filter(|v| !v.is_empty()).map(Self::new)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Sign] {
        &self.coeffs
    }

    pub fn to_i64s(&self) -> Vec<i64> {
        self.coeffs.iter().map(|s| s.value()).collect()
    }

    pub fn to_int_poly(&self) -> IntPoly {
        IntPoly::from_i64s(&self.to_i64s())
    }

    /// `x^n P(1/x)`
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self { coeffs: c }
    }

    pub fn signs_string(&self) -> String {
        self.coeffs.iter().map(|s| if *s == Sign::Plus { '+' } else { '-' }).collect()
    }
}

impl fmt::Display for LittlewoodPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.coeffs.iter().enumerate() {
            let op = match (k, s) {
                (0, Sign::Plus) => "",
                (0, Sign::Minus) => "-",
                (_, Sign::Plus) => " + ",
                (_, Sign::Minus) => " - ",
            };
            let mono = match k {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            write!(f, "{op}{mono}")?;
        }
        Ok(())
    }
}

/// A certified real root of a Littlewood polynomial.
#[derive(Clone, Debug)]
pub struct RootRecord {
    pub poly: LittlewoodPoly,
    pub root: Scalar,
    pub multiplicity: usize,
    pub is_step_root: bool,
    pub degree: usize,
}

fn qr(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// The roots among `{-1, +1}`.
pub fn rational_root_filter(p: &LittlewoodPoly) -> Vec<i64> {
    let c = p.to_i64s();
    [-1i64, 1].into_iter().filter(|&a| fast::eval_int(&c, a) == 0).collect()
}

/// All distinct real roots in increasing order. Irrational roots carry an
/// isolating interval of width at most `2^-40`.
pub fn real_roots(p: &LittlewoodPoly) -> Vec<Scalar> {
    let mut q = p.to_i64s();
    let plus = fast::strip_root(&mut q, 1) > 0;
    let minus = fast::strip_root(&mut q, -1) > 0;
    let ip = IntPoly::from_i64s(&q);
    let width = BigRational::new(BigInt::one(), BigInt::one() << 40u32);
    let mut out = Vec::new();
    for (lo, hi, unit) in [(qr(-2, 1), qr(-1, 2), minus.then(|| -1)), (qr(1, 2), qr(2, 1), plus.then(|| 1))] {
        let mut comp: Vec<(BigRational, Scalar)> = ip
            .isolate_roots(&lo, &hi, &width)
            .into_iter()
            .map(|(a, b)| {
                let s = if a == b { Scalar::Rational(a.clone()) } else { Scalar::root(&ip, &a, &b).expect("isolating interval") };
                (a, s)
            })
            .collect();
        if let Some(u) = unit {
            comp.push((qr(u, 1), Scalar::from_int(u)));
        }
        comp.sort_by(|x, y| x.0.cmp(&y.0));
        out.extend(comp.into_iter().map(|(_, s)| s));
    }
    out
}

/// Exact step-root test for a certified root of `p`.
pub fn is_step_root(p: &LittlewoodPoly, root: &Scalar) -> bool {
    let mut prefix = Scalar::zero();
    let mut pw = Scalar::one();
    let n = p.degree();
    for k in 0..n {
        let rho = p.coeffs[k];
        prefix = match rho {
            Sign::Plus => prefix.add(&pw),
            Sign::Minus => prefix.sub(&pw),
        };
        let next = p.coeffs[k + 1];
        let s = prefix.sign();
        let bad = match (next, s) {
            (Sign::Plus, SignResult::Positive) | (Sign::Minus, SignResult::Negative) => true,
            (_, SignResult::Unresolved(_)) => true,
            _ => false,
        };
        if bad {
            return false;
        }
        pw = pw.mul(root);
    }
    true
}

/// Multiplicity of `root` as a root of `p`.
pub fn multiplicity(p: &LittlewoodPoly, root: &Scalar) -> usize {
    let mut d = p.to_int_poly();
    let mut m = 0;
    loop {
        let v = d
            .coeffs()
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| acc.mul(root).add(&Scalar::from_rational(BigRational::from_integer(c.clone()))));
        if v.sign() != SignResult::Zero || d.is_zero() {
            return m;
        }
        m += 1;
        d = d.derivative();
    }
}

/// All real roots with multiplicity and step-root flag, by exact arithmetic.
pub fn root_records(p: &LittlewoodPoly) -> Vec<RootRecord> {
    real_roots(p)
        .into_iter()
        .map(|root| RootRecord {
            poly: p.clone(),
            is_step_root: is_step_root(p, &root),
            multiplicity: multiplicity(p, &root),
            degree: p.degree(),
            root,
        })
        .collect()
}

/// True when every coefficient is `-1` after the constant `+1`: `1 - x - ... - x^n`.
pub fn is_all_minus_tail(p: &LittlewoodPoly) -> bool {
    p.coeffs[0] == Sign::Plus && p.coeffs[1..].iter().all(|s| *s == Sign::Minus)
}
