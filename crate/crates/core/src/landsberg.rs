//! The Takagi-Landsberg family `f_alpha(t) = sum_m (alpha/2)^m phi(2^m t)`,
//! `alpha` in `(-2, 2)`: regime classification, closed-form extrema and the
//! Tabor constant `C(alpha)`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::StepError;
use crate::scalar::interval::{ln2, RInterval};
use crate::scalar::{decimal, IntPoly, Rounding, Scalar, SignResult, DECIMAL_DIGITS};
use crate::step::{
    build_rho, classify_extrema, Cardinality, ExtremaReport, Extremizer, Extremum, Location, Variant,
};
use crate::takagi::{eval_periodic, rademacher_of, CoefficientSequence, SignSequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlphaRegime {
    /// `x_n <= alpha < x_{n+1}`, with `x_0 = -2`; `boundary` when `alpha = x_n`, `n >= 1`.
    NegSteep { n: usize, boundary: bool },
    /// `-1 <= alpha <= 1/2`
    Middle,
    /// `1/2 < alpha <= 1`
    Critical,
    /// `1 < alpha < 2`
    PosSteep,
}

impl AlphaRegime {
    pub fn label(&self) -> String {
        match self {
            Self::NegSteep { n, boundary: false } => format!("neg-steep(n={n})"),
            Self::NegSteep { n, boundary: true } => format!("neg-steep(n={n}, boundary)"),
            Self::Middle => "middle".into(),
            Self::Critical => "critical".into(),
            Self::PosSteep => "pos-steep".into(),
        }
    }
}

/// The unique root of `1 - 2x + x^(2n+1)` in `(-2, -1)`.
#[derive(Clone, Debug)]
pub struct LittlewoodNegRoot {
    pub n: usize,
    pub root: Scalar,
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn qi(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `-1 + x + x^2 + ... + x^(2n)`, the cofactor of `x - 1` in `1 - 2x + x^(2n+1)`.
fn neg_root_poly(n: usize) -> IntPoly {
    let mut c = vec![1i64; 2 * n + 1];
    c[0] = -1;
    IntPoly::from_i64s(&c)
}

pub fn solve_xn(n: usize) -> LittlewoodNegRoot {
    assert!(n >= 1, "x_n is defined for n >= 1");
    let root = Scalar::root(&neg_root_poly(n), &qi(-2), &qi(-1)).expect("unique root in (-2, -1)");
    LittlewoodNegRoot { n, root }
}

/// The positive root of `1 - x - x^2 - ... - x^n`, in `(1/2, 1]`.
pub fn solve_alpha_n(n: usize) -> Scalar {
    assert!(n >= 1, "alpha_n is defined for n >= 1");
    let mut c = vec![-1i64; n + 1];
    c[0] = 1;
    Scalar::root(&IntPoly::from_i64s(&c), &q(1, 2), &qi(2)).expect("unique positive root")
}

fn resolved(s: SignResult, what: &str) -> Result<SignResult, StepError> {
    match s {
        SignResult::Unresolved(_) => Err(StepError::UnresolvedComparison(what.to_string())),
        other => Ok(other),
    }
}

/// Sign of `1 - 2 alpha + alpha^(2n+1)`: nonnegative exactly when `alpha >= x_n`
/// for `alpha` in `(-2, -1)`.
fn side_of_xn(alpha: &Scalar, n: usize) -> Result<SignResult, StepError> {
    let v = Scalar::one().sub(&alpha.mul_rational(&qi(2))).add(&alpha.powi(2 * n as u32 + 1));
    resolved(v.sign(), &format!("alpha against x_{n}"))
}

fn check_range(alpha: &Scalar) -> Result<(), StepError> {
    let lo = resolved(alpha.compare(&Scalar::from_int(-2)), "alpha against -2")?;
    let hi = resolved(alpha.compare(&Scalar::from_int(2)), "alpha against 2")?;
    if lo != SignResult::Positive || hi != SignResult::Negative {
        return Err(StepError::AlphaOutOfRange);
    }
    Ok(())
}

pub fn classify_alpha(alpha: &Scalar) -> Result<AlphaRegime, StepError> {
    check_range(alpha)?;
    let vs_m1 = resolved(alpha.compare(&Scalar::from_int(-1)), "alpha against -1")?;
    if vs_m1 == SignResult::Negative {
        // the sign of 1 - 2a + a^(2m+1) decreases in m; find the last m with a >= x_m
        let below = |m: usize| -> Result<bool, StepError> { Ok(side_of_xn(alpha, m)? == SignResult::Negative) };
        if below(1)? {
            return Ok(AlphaRegime::NegSteep { n: 0, boundary: false });
        }
        let mut hi = 2;
        while !below(hi)? {
            hi *= 2;
        }
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if below(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let boundary = side_of_xn(alpha, lo)? == SignResult::Zero;
        return Ok(AlphaRegime::NegSteep { n: lo, boundary });
    }
    if resolved(alpha.compare(&Scalar::from_ratio(1, 2)), "alpha against 1/2")? != SignResult::Positive {
        return Ok(AlphaRegime::Middle);
    }
    if resolved(alpha.compare(&Scalar::one()), "alpha against 1")? != SignResult::Positive {
        return Ok(AlphaRegime::Critical);
    }
    Ok(AlphaRegime::PosSteep)
}

/// `t_n = (5 - 4^-n) / 10`
pub fn neg_steep_location(n: usize) -> BigRational {
    let p = BigRational::new(BigInt::one(), BigInt::one() << (2 * n));
    (qi(5) - p) / qi(10)
}

/// `f_alpha(t_n) = t_n + (4^-n / 10) (3 alpha^(2n+3) + alpha^3 - 4 alpha) / ((1 - alpha)(alpha^2 - 4))`
pub fn neg_steep_max_value(alpha: &Scalar, n: usize) -> Scalar {
    let a3 = alpha.powi(3);
    let num = alpha.powi(2 * n as u32 + 3).mul_rational(&qi(3)).add(&a3).sub(&alpha.mul_rational(&qi(4)));
    let den = Scalar::one().sub(alpha).mul(&alpha.powi(2).sub(&Scalar::from_int(4)));
    let frac = num.checked_div(&den).expect("alpha is neither 1 nor 2");
    let p = BigRational::new(BigInt::one(), BigInt::from(10) << (2 * n));
    Scalar::from_rational(neg_steep_location(n)).add(&frac.mul_rational(&p))
}

fn exact_extremizer(t: &BigRational) -> Extremizer {
    let signs = rademacher_of(t).expect("t in [0, 1]").remove(0);
    Extremizer { signs, location: Location::Exact(t.clone()) }
}

fn closed_report(
    alpha: &Scalar,
    kind: Extremum,
    in_half: Vec<BigRational>,
    value: Scalar,
    depth: usize,
) -> Result<ExtremaReport, StepError> {
    let c = CoefficientSequence::geometric(alpha.clone());
    let (sharp, flat) = match kind {
        Extremum::Max => (build_rho(&c, Variant::Sharp, depth)?, build_rho(&c, Variant::Flat, depth)?),
        Extremum::Min => (
            crate::step::build_lambda(&c, Variant::Sharp, depth)?,
            crate::step::build_lambda(&c, Variant::Flat, depth)?,
        ),
    };
    let mut all: Vec<BigRational> = in_half.iter().cloned().chain(in_half.iter().map(|t| BigRational::one() - t)).collect();
    all.sort();
    all.dedup();
    let smallest = exact_extremizer(in_half.first().unwrap());
    let largest = exact_extremizer(in_half.last().unwrap());
    Ok(ExtremaReport {
        kind,
        smallest,
        largest,
        cardinality: Cardinality::Finite(all.len()),
        locations: Some(all),
        value,
        dyadic_degenerate: false,
        evidence: sharp,
        flat_evidence: flat,
    })
}

/// Global maximizers of `f_alpha`.
pub fn maxima(alpha: &Scalar, depth: usize) -> Result<ExtremaReport, StepError> {
    let regime = classify_alpha(alpha)?;
    match regime {
        AlphaRegime::NegSteep { n, boundary } => {
            let t = neg_steep_location(n);
            let value = neg_steep_max_value(alpha, n);
            let ts = if boundary { vec![neg_steep_location(n - 1), t] } else { vec![t] };
            closed_report(alpha, Extremum::Max, ts, value, depth)
        }
        AlphaRegime::Middle => closed_report(alpha, Extremum::Max, vec![q(1, 2)], Scalar::from_ratio(1, 2), depth),
        AlphaRegime::PosSteep => {
            let value = Scalar::from_int(3).sub(&alpha.mul_rational(&q(3, 2))).recip()?;
            closed_report(alpha, Extremum::Max, vec![q(1, 3)], value, depth)
        }
        AlphaRegime::Critical => classify_extrema(&CoefficientSequence::geometric(alpha.clone()), Extremum::Max, depth),
    }
}

/// Global minimizers of `f_alpha`.
pub fn minima(alpha: &Scalar, depth: usize) -> Result<ExtremaReport, StepError> {
    check_range(alpha)?;
    match resolved(alpha.compare(&Scalar::from_int(-1)), "alpha against -1")? {
        SignResult::Negative => {
            // (1 + alpha) / (5 (1 - alpha^2 / 4))
            let den = Scalar::from_int(5).sub(&alpha.powi(2).mul_rational(&q(5, 4)));
            let value = Scalar::one().add(alpha).checked_div(&den)?;
            closed_report(alpha, Extremum::Min, vec![q(1, 5)], value, depth)
        }
        SignResult::Zero => classify_extrema(&CoefficientSequence::geometric(alpha.clone()), Extremum::Min, depth),
        _ => closed_report(alpha, Extremum::Min, vec![BigRational::zero()], Scalar::zero(), depth),
    }
}

/// Enclosure of `C(alpha) = 1 / (2 - 2 (2 alpha - 1)^(1 - 1/log2(alpha)))` at
/// absolute working precision `bits`, or `None` if `bits` is too coarse.
fn tabor_enclosure(a: &RInterval, bits: u32) -> Option<RInterval> {
    let b = bits + 16;
    let ln_a = a.ln(b)?;
    if !ln_a.hi.is_negative() {
        return None;
    }
    let e = RInterval::point(BigRational::one()).sub(&ln2(b).div(&ln_a)?);
    let two = qi(2);
    let base = RInterval::new(&a.lo * &two - BigRational::one(), &a.hi * &two - BigRational::one());
    let ln_base = base.ln(b)?;
    let x = e.mul(&ln_base).round_out(b).exp(b);
    let d = RInterval::point(two.clone()).sub(&x.scale(&two));
    Some(d.recip()?.round_out(bits + 2))
}

/// Tabor's constant `C(alpha)` for `alpha` in `(1/2, 1]`.
pub fn tabor_c(alpha: &Scalar) -> Result<Scalar, StepError> {
    let lo = resolved(alpha.compare(&Scalar::from_ratio(1, 2)), "alpha against 1/2")?;
    let hi = resolved(alpha.compare(&Scalar::one()), "alpha against 1")?;
    if lo != SignResult::Positive || hi == SignResult::Positive {
        return Err(StepError::Domain("C(alpha) is defined for alpha in (1/2, 1]".into()));
    }
    if hi == SignResult::Zero {
        return Ok(Scalar::from_ratio(2, 3));
    }
    let alpha = alpha.clone();
    let refiner = Arc::new(move |bits: u32| -> RInterval {
        let mut extra = 8;
        loop {
            let a = alpha.enclosure(bits + extra);
            if let Some(iv) = tabor_enclosure(&a, bits + extra) {
                return iv;
            }
            extra *= 2;
            assert!(extra < 1 << 16, "alpha enclosure does not separate from the endpoints");
        }
    });
    let first = refiner(64);
    Ok(Scalar::refinable_from(first, refiner))
}

/// One sample of the maximizer curve on `[0, 1/2]`.
#[derive(Clone, Debug)]
pub struct TauPoint {
    pub alpha: BigRational,
    pub tau_sharp: Option<Location>,
    pub tau_flat: Option<Location>,
    pub value: Option<Scalar>,
    pub cardinality: Option<Cardinality>,
    pub error: Option<String>,
}

impl TauPoint {
    pub fn csv_header() -> &'static str {
        "alpha,tau_sharp,tau_flat,max_value,cardinality,dim"
    }

    pub fn csv_row(&self) -> String {
        let loc = |l: &Option<Location>| l.as_ref().map(|l| format!("{:.17}", l.to_f64())).unwrap_or_default();
        let value = self.value.as_ref().map(|v| v.to_decimal(17)).unwrap_or_default();
        let card = match (&self.cardinality, &self.error) {
            (Some(c), _) => c.label(),
            (None, Some(e)) => format!("error: {}", e.replace(',', ";")),
            _ => String::new(),
        };
        let dim = self
            .cardinality
            .as_ref()
            .and_then(|c| c.dimension())
            .map(|d| decimal::to_fraction(&d))
            .unwrap_or_default();
        format!(
            "{},{},{},{},{},{}",
            decimal::to_decimal(&self.alpha, DECIMAL_DIGITS, Rounding::Nearest),
            loc(&self.tau_sharp),
            loc(&self.tau_flat),
            value,
            card,
            dim
        )
    }
}

/// `-2 + 4k/(points + 1)` for `k = 1 ..= points`.
pub fn default_grid(points: usize) -> Vec<BigRational> {
    let d = points as i64 + 1;
    (1..=points as i64).map(|k| q(-2 * d + 4 * k, d)).collect()
}

/// Smallest and largest maximizer in `[0, 1/2]` across a grid of `alpha`.
pub fn tau_curve(grid: &[Scalar], depth: usize) -> Vec<(Scalar, TauPoint)> {
    grid.par_iter()
        .map(|a| {
            let alpha = a.enclosure(64).lo;
            let point = match maxima(a, depth) {
                Ok(r) => TauPoint {
                    alpha: a.as_rational().cloned().unwrap_or(alpha),
                    tau_sharp: Some(r.smallest.location.clone()),
                    tau_flat: Some(r.largest.location.clone()),
                    value: Some(r.value.clone()),
                    cardinality: Some(r.cardinality.clone()),
                    error: None,
                },
                Err(e) => TauPoint {
                    alpha: a.as_rational().cloned().unwrap_or(alpha),
                    tau_sharp: None,
                    tau_flat: None,
                    value: None,
                    cardinality: None,
                    error: Some(e.to_string()),
                },
            };
            (a.clone(), point)
        })
        .collect()
}

/// `f_alpha` at a rational point of `[0, 1]`.
pub fn eval_landsberg(alpha: &Scalar, t: &BigRational) -> Result<Scalar, StepError> {
    Ok(eval_periodic(alpha, t)?)
}

/// Sign sequence of the standard binary expansion of `t`.
pub fn rademacher_standard(t: &BigRational) -> Result<SignSequence, StepError> {
    Ok(rademacher_of(t)?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f64_of(s: &Scalar) -> f64 {
        s.to_f64()
    }

    #[test]
    fn neg_roots() {
        assert!((f64_of(&solve_xn(1).root) + 1.618033988749895).abs() < 1e-12);
        assert!((f64_of(&solve_xn(2).root) + 1.29065).abs() < 1e-5);
        assert!((f64_of(&solve_xn(5).root) + 1.11231).abs() < 1e-5);
        for n in 1..8 {
            assert_eq!(solve_xn(n).root.compare(&solve_xn(n + 1).root), SignResult::Negative);
        }
    }

    #[test]
    fn alpha_n_roots() {
        assert_eq!(solve_alpha_n(1).as_rational(), Some(&qi(1)));
        assert_eq!(solve_alpha_n(2).compare(&Scalar::golden_conjugate()), SignResult::Zero);
        assert_eq!(solve_alpha_n(4).compare(&solve_alpha_n(3)), SignResult::Negative);
    }

    #[test]
    fn regimes() {
        assert_eq!(classify_alpha(&Scalar::from_ratio(-3, 2)).unwrap(), AlphaRegime::NegSteep { n: 1, boundary: false });
        assert_eq!(classify_alpha(&Scalar::from_ratio(-19, 10)).unwrap(), AlphaRegime::NegSteep { n: 0, boundary: false });
        assert_eq!(classify_alpha(&Scalar::from_ratio(1, 2)).unwrap(), AlphaRegime::Middle);
        assert_eq!(classify_alpha(&solve_xn(2).root).unwrap(), AlphaRegime::NegSteep { n: 2, boundary: true });
        assert_eq!(classify_alpha(&Scalar::from_ratio(-1001, 1000)).unwrap(), AlphaRegime::NegSteep { n: 549, boundary: false });
        assert!(classify_alpha(&Scalar::from_int(2)).is_err());
    }

    #[test]
    fn neg_steep_value_matches_series() {
        let a = Scalar::from_ratio(-3, 2);
        let r = maxima(&a, 64).unwrap();
        assert_eq!(r.locations, Some(vec![q(19, 40), q(21, 40)]));
        let direct = eval_periodic(&a, &q(19, 40)).unwrap();
        assert_eq!(direct.compare(&r.value), SignResult::Zero);
        assert_eq!(r.value.as_rational(), Some(&q(661, 1120)));
    }

    #[test]
    fn pos_steep_value() {
        let r = maxima(&Scalar::sqrt2(), 32).unwrap();
        let expect = Scalar::from_int(2).add(&Scalar::sqrt2()).mul_rational(&q(1, 3));
        assert_eq!(r.value.compare(&expect), SignResult::Zero);
        assert_eq!(r.locations, Some(vec![q(1, 3), q(2, 3)]));
    }

    #[test]
    fn minima_values() {
        let r = minima(&Scalar::from_ratio(-3, 2), 64).unwrap();
        assert_eq!(r.value.as_rational(), Some(&q(-8, 35)));
        let r = minima(&Scalar::from_int(-1), 32).unwrap();
        assert_eq!(r.cardinality.dimension(), Some(q(1, 2)));
        let r = minima(&Scalar::one(), 32).unwrap();
        assert_eq!(r.locations, Some(vec![qi(0), qi(1)]));
    }

    #[test]
    fn tabor_constant() {
        let a2 = solve_alpha_n(2);
        let c = tabor_c(&a2).unwrap();
        let m = maxima(&a2, 64).unwrap();
        assert!(c.overlaps(&m.value, 80));
        assert_eq!(tabor_c(&Scalar::one()).unwrap().as_rational(), Some(&q(2, 3)));
        assert!(tabor_c(&Scalar::from_ratio(1, 2)).is_err());
    }

    #[test]
    fn grid_shape() {
        let g = default_grid(1999);
        assert_eq!(g.len(), 1999);
        assert_eq!(g[999], qi(0));
        assert!(g[0] > qi(-2) && g[1998] < qi(2));
    }
}
