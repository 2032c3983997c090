//! Coefficient sequences `(c_m)` of Takagi-class functions `sum c_m phi(2^m t)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::signs::Sign;
use crate::scalar::{Scalar, SignResult};

/// Caller-supplied coefficient generator.
pub type Generator = Arc<dyn Fn(usize) -> Scalar + Send + Sync>;
/// Caller-supplied bound `N -> sum_{m > N} |x_m|`.
pub type TailBound = Arc<dyn Fn(usize) -> BigRational + Send + Sync>;

/// A user-defined coefficient sequence. The tail bounds are trusted as given.
#[derive(Clone)]
pub struct CustomSequence {
    pub name: String,
    pub generator: Generator,
    /// Upper bound on `sum_{m > N} |c_m|`.
    pub tail_bound: TailBound,
    /// Upper bound on `sum_{m > N} 2^m |c_m|`, when finite.
    pub weighted_tail: Option<TailBound>,
    /// All `2^m c_m` for `m >= from` share this sign.
    pub eventual_sign: Option<(usize, Sign)>,
}

#[derive(Clone)]
pub enum CoefficientSequence {
    /// `c_m = (alpha / 2)^m`
    Geometric { alpha: Scalar },
    /// `c_m = 1 / (m + 1)^2`
    PowerSquared,
    /// `c_m = values[m]`, zero beyond
    FiniteSupport(Vec<Scalar>),
    Custom(CustomSequence),
}

impl fmt::Debug for CoefficientSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Geometric { alpha } => write!(f, "Geometric({alpha})"),
            Self::PowerSquared => write!(f, "PowerSquared"),
            Self::FiniteSupport(v) => {
                let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "FiniteSupport[{}]", s.join(", "))
            }
            Self::Custom(c) => write!(f, "Custom({})", c.name),
        }
    }
}

fn pow2(m: usize) -> BigRational {
    BigRational::from_integer(BigInt::one() << m)
}

/// Upper bound on `|x|` from a 64-bit enclosure.
fn abs_upper(x: &Scalar) -> BigRational {
    let e = x.enclosure(64);
    e.lo.abs().max(e.hi.abs())
}

/// Smallest `r` in a rational enclosure with `|x| <= r`, tightened until
/// it is below `limit` if possible.
fn abs_upper_below(x: &Scalar, limit: &BigRational) -> Option<BigRational> {
    let mut bits = 32;
    while bits <= 4096 {
        let e = x.enclosure(bits);
        let u = e.lo.abs().max(e.hi.abs());
        if &u < limit {
            return Some(u);
        }
        bits *= 2;
    }
    None
}

impl CoefficientSequence {
    pub fn geometric(alpha: Scalar) -> Self {
        Self::Geometric { alpha }
    }

    /// A geometric sequence's `alpha`, if this is one.
    pub fn alpha(&self) -> Option<&Scalar> {
        match self {
            Self::Geometric { alpha } => Some(alpha),
            _ => None,
        }
    }

    /// `c_m`
    pub fn coefficient(&self, m: usize) -> Scalar {
        match self {
            Self::Geometric { alpha } => alpha.mul_rational(&BigRational::new(1.into(), 2.into())).powi(m as u32),
            Self::PowerSquared => {
                let d = BigInt::from(m as u64 + 1);
                Scalar::Rational(BigRational::new(BigInt::one(), &d * &d))
            }
            Self::FiniteSupport(v) => v.get(m).cloned().unwrap_or_else(Scalar::zero),
            Self::Custom(c) => (c.generator)(m),
        }
    }

    /// `2^m c_m`
    pub fn weighted(&self, m: usize) -> Scalar {
        match self {
            Self::Geometric { alpha } => alpha.powi(m as u32),
            Self::PowerSquared => {
                let d = BigInt::from(m as u64 + 1);
                Scalar::Rational(BigRational::new(BigInt::one() << m, &d * &d))
            }
            _ => self.coefficient(m).mul_rational(&pow2(m)),
        }
    }

    /// Index past which all coefficients vanish, when known.
    pub fn support_end(&self) -> Option<usize> {
        match self {
            Self::FiniteSupport(v) => Some(v.len()),
            Self::Geometric { alpha } if alpha.sign() == SignResult::Zero => Some(1),
            _ => None,
        }
    }

    /// Upper bound on `sum_{m > n} |c_m|`.
    pub fn tail_bound(&self, n: usize) -> Option<BigRational> {
        match self {
            Self::Geometric { alpha } => {
                let r = alpha.mul_rational(&BigRational::new(1.into(), 2.into()));
                let u = abs_upper_below(&r, &BigRational::one())?;
                Some(num_traits::pow(u.clone(), n + 1) / (BigRational::one() - u))
            }
            Self::PowerSquared => Some(BigRational::new(1.into(), BigInt::from(n as u64 + 1))),
            Self::FiniteSupport(v) => Some(v.iter().skip(n + 1).map(abs_upper).fold(BigRational::zero(), |a, b| a + b)),
            Self::Custom(c) => Some((c.tail_bound)(n)),
        }
    }

    /// Upper bound on `sum_{m > n} 2^m |c_m|`, when that series converges.
    pub fn weighted_tail(&self, n: usize) -> Option<BigRational> {
        match self {
            Self::Geometric { alpha } => {
                if alpha.sign() == SignResult::Zero {
                    return Some(BigRational::zero());
                }
                if alpha.abs().compare(&Scalar::one()) != SignResult::Negative {
                    return None;
                }
                let u = abs_upper_below(alpha, &BigRational::one())?;
                Some(num_traits::pow(u.clone(), n + 1) / (BigRational::one() - u))
            }
            Self::PowerSquared => None,
            Self::FiniteSupport(v) => Some(
                v.iter()
                    .enumerate()
                    .skip(n + 1)
                    .map(|(m, x)| abs_upper(x) * pow2(m))
                    .fold(BigRational::zero(), |a, b| a + b),
            ),
            Self::Custom(c) => c.weighted_tail.as_ref().map(|f| f(n)),
        }
    }

    /// `(M, s)` such that every `2^m c_m` with `m >= M` is nonzero with sign `s`.
    pub fn eventual_sign(&self) -> Option<(usize, Sign)> {
        match self {
            Self::Geometric { alpha } => match alpha.sign() {
                SignResult::Positive => Some((0, Sign::Plus)),
                _ => None,
            },
            Self::PowerSquared => Some((0, Sign::Plus)),
            Self::FiniteSupport(_) => None,
            Self::Custom(c) => c.eventual_sign,
        }
    }

    /// `M` such that `a_m = 2^m c_m` is positive and nondecreasing for `m >= M`.
    pub fn monotone_from(&self) -> Option<usize> {
        match self {
            Self::Geometric { alpha } => match alpha.compare(&Scalar::one()) {
                SignResult::Positive | SignResult::Zero => Some(0),
                _ => None,
            },
            // 2^(m+1)/(m+2)^2 >= 2^m/(m+1)^2 iff 2(m+1)^2 >= (m+2)^2 iff m >= 2
            Self::PowerSquared => Some(2),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_tail_matches_closed_form() {
        let c = CoefficientSequence::geometric(Scalar::from_ratio(3, 2));
        let t = c.tail_bound(4).unwrap();
        // (3/4)^5 / (1/4)
        assert_eq!(t, BigRational::new(243.into(), 256.into()));
        assert!(c.weighted_tail(4).is_none());
        let direct: f64 = (5..200).map(|m| 0.75f64.powi(m)).sum();
        assert!((direct - 0.75f64.powi(5) / 0.25).abs() < 1e-12);
    }

    #[test]
    fn power_squared_weights() {
        let c = CoefficientSequence::PowerSquared;
        assert_eq!(c.weighted(3).as_rational(), Some(&BigRational::new(1.into(), 2.into())));
        assert_eq!(c.weighted(2).as_rational(), Some(&BigRational::new(4.into(), 9.into())));
        assert_eq!(c.monotone_from(), Some(2));
    }

    #[test]
    fn algebraic_alpha_tail() {
        let c = CoefficientSequence::geometric(Scalar::sqrt2());
        let t = c.tail_bound(10).unwrap();
        let exact = (2f64.sqrt() / 2.0).powi(11) / (1.0 - 2f64.sqrt() / 2.0);
        let tf = crate::scalar::Scalar::Rational(t).to_f64();
        assert!(tf >= exact * (1.0 - 1e-12) && tf < exact * 1.0001, "{tf} {exact}");
    }
}
