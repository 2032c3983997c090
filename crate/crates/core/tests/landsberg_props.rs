mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;

use common::*;
use takagi_core::landsberg::{classify_alpha, eval_landsberg, maxima, solve_xn, AlphaRegime};
use takagi_core::scalar::{Scalar, SignResult};
use takagi_core::step::Location;

/// 200 rationals `-2 + k/50`, `k = 1..=199`, skipping `0`.
fn alpha_grid() -> Vec<BigRational> {
    (1..=199).filter(|&k| k != 100).map(|k| q(-100 + k, 50)).collect()
}

fn is_dyadic(t: &BigRational) -> bool {
    let d = t.denom();
    (d & (d - BigInt::one())) == BigInt::from(0)
}

#[test]
fn reported_maxima_are_global() {
    let mut r = rng(31);
    for a in alpha_grid() {
        let alpha = Scalar::Rational(a.clone());
        let rep = maxima(&alpha, 64).unwrap_or_else(|e| panic!("alpha {a}: {e}"));
        for loc in [&rep.smallest.location, &rep.largest.location] {
            if let Location::Exact(t) = loc {
                let v = eval_landsberg(&alpha, t).unwrap();
                assert_eq!(v.compare(&rep.value), SignResult::Zero, "alpha {a} at {t}");
            }
        }
        for _ in 0..50 {
            let t = random_unit_rational(&mut r, 97);
            let v = eval_landsberg(&alpha, &t).unwrap();
            assert_ne!(v.compare(&rep.value), SignResult::Positive, "alpha {a}: f({t}) above the maximum");
        }
    }
}

#[test]
fn steep_negative_maximum_above_one_half() {
    for a in alpha_grid().into_iter().filter(|a| *a < q(-1, 1)) {
        let rep = maxima(&Scalar::Rational(a.clone()), 64).unwrap();
        assert_eq!(rep.value.compare(&Scalar::from_ratio(1, 2)), SignResult::Positive, "alpha {a}");
    }
}

#[test]
fn unique_maximizer_outside_critical_band() {
    for a in alpha_grid() {
        let inside = (q(-1, 1) <= a && a <= q(1, 2)) || a > q(1, 1);
        if !inside {
            continue;
        }
        let rep = maxima(&Scalar::Rational(a.clone()), 64).unwrap();
        assert_eq!(rep.smallest.location, rep.largest.location, "alpha {a}");
    }
}

#[test]
fn critical_maximizers_not_dyadic() {
    let mut alphas: Vec<Scalar> = alpha_grid().into_iter().filter(|a| q(1, 2) < *a && *a <= q(1, 1)).map(Scalar::Rational).collect();
    alphas.push(quartic_alpha());
    alphas.extend((1..=6).map(alpha_n));
    for a in alphas {
        assert_eq!(classify_alpha(&a).unwrap(), AlphaRegime::Critical);
        let rep = maxima(&a, 64).unwrap();
        for loc in [&rep.smallest.location, &rep.largest.location] {
            if let Location::Exact(t) = loc {
                assert!(!is_dyadic(t), "alpha {}: dyadic maximizer {t}", a.to_f64());
            }
        }
        if let Some(ls) = &rep.locations {
            assert!(ls.iter().all(|t| !is_dyadic(t)));
        }
    }
}

#[test]
fn boundaries_increase() {
    let xs: Vec<Scalar> = (1..=10).map(|n| solve_xn(n).root).collect();
    for x in &xs {
        assert_eq!(x.compare(&Scalar::from_int(-2)), SignResult::Positive);
        assert_eq!(x.compare(&Scalar::from_int(-1)), SignResult::Negative);
    }
    for w in xs.windows(2) {
        assert_eq!(w[0].compare(&w[1]), SignResult::Negative);
    }
}

#[test]
fn random_rational_alphas_classify() {
    let mut r = rng(32);
    for _ in 0..40 {
        let a = q(r.gen_range(-199..=199), 100);
        let rg = classify_alpha(&Scalar::Rational(a.clone())).unwrap();
        let ok = match rg {
            AlphaRegime::NegSteep { .. } => a < q(-1, 1),
            AlphaRegime::Middle => q(-1, 1) <= a && a <= q(1, 2),
            AlphaRegime::Critical => q(1, 2) < a && a <= q(1, 1),
            AlphaRegime::PosSteep => a > q(1, 1),
        };
        assert!(ok, "alpha {a}: {rg:?}");
    }
}
