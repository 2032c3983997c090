mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use common::*;
use takagi_core::scalar::Scalar;
use takagi_core::takagi::{eval_from_rademacher, eval_periodic, eval_series, eval_truncated, rademacher_of, CoefficientSequence};

fn width(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits)
}

fn alphas() -> Vec<Scalar> {
    let mut v: Vec<Scalar> = [(1, 2), (-1, 2), (1, 1), (-1, 1), (3, 2), (-3, 2)].iter().map(|&(n, d)| Scalar::from_ratio(n, d)).collect();
    v.push(quartic_alpha());
    v
}

#[test]
fn symmetric_about_one_half() {
    symmetry_suite(21, 200).unwrap();
}

#[test]
fn rademacher_round_trip() {
    round_trip_suite(22, 300).unwrap();
}

#[test]
fn three_evaluations_agree() {
    let mut r = rng(23);
    let w = width(40);
    for a in alphas() {
        let c = CoefficientSequence::geometric(a.clone());
        for _ in 0..100 {
            let t = random_unit_rational(&mut r, 200);
            let p = eval_periodic(&a, &t).unwrap();
            let s = eval_series(&c, &t, &w).unwrap();
            let rho = rademacher_of(&t).unwrap().remove(0);
            let f = eval_from_rademacher(&c, &rho, &w).unwrap();
            assert!(p.overlaps(&s, 96) && p.overlaps(&f, 96), "alpha {} at {t}", a.to_f64());
        }
    }
}

#[test]
fn quartic_value_at_fourteen_over_thirty_one() {
    let v = eval_periodic(&quartic_alpha(), &q(14, 31)).unwrap();
    assert!(contains(&v.enclosure(64), 0.508155, 1e-6));
}

#[test]
fn geometric_tail_bound_dominates() {
    for a in alphas().into_iter().filter(|a| a.to_f64().abs() < 2.0) {
        let c = CoefficientSequence::geometric(a.clone());
        let r = a.to_f64().abs() / 2.0;
        let mut prev = None;
        for n in 0..40 {
            let b = c.tail_bound(n).unwrap();
            let closed = r.powi(n as i32 + 1) / (1.0 - r);
            assert!(rat_f64(&b) >= closed * (1.0 - 1e-12));
            if let Some(p) = prev {
                assert!(b <= p);
            }
            prev = Some(b);
        }
    }
}

fn rat_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn truncation_is_affine_on_cells(
        c in prop::collection::vec((-9i64..=9, 1i64..=9), 1..8),
        k in 0u64..256,
    ) {
        let coeffs: Vec<BigRational> = c.iter().map(|&(n, d)| q(n, d)).collect();
        let n = coeffs.len() - 1;
        let cells = 1u64 << (n + 1);
        let k = k % cells;
        let seq = finite(&coeffs);
        let at = |num: u64, den: u64| {
            let t = BigRational::new(BigInt::from(num), BigInt::from(den));
            eval_truncated(&seq, n, &t).unwrap().as_rational().unwrap().clone()
        };
        let lo = at(2 * k, 2 * cells);
        let mid = at(2 * k + 1, 2 * cells);
        let hi = at(2 * k + 2, 2 * cells);
        prop_assert_eq!(mid * BigRational::from_integer(2.into()), lo + hi);
    }

    #[test]
    fn truncation_is_symmetric(c in prop::collection::vec((-9i64..=9, 1i64..=9), 1..8), num in 0i64..=1000) {
        let coeffs: Vec<BigRational> = c.iter().map(|&(n, d)| q(n, d)).collect();
        let seq = finite(&coeffs);
        let t = q(num, 1000);
        let n = coeffs.len() - 1;
        let a = eval_truncated(&seq, n, &t).unwrap();
        let b = eval_truncated(&seq, n, &(BigRational::one() - &t)).unwrap();
        prop_assert_eq!(a.as_rational(), b.as_rational());
    }

    #[test]
    fn rademacher_expansions_map_back(num in 0i64..=5000, den in 1i64..=5000) {
        let t = q(num.min(den), den);
        for e in rademacher_of(&t).unwrap() {
            let image = takagi_core::takagi::t_map(&e);
            prop_assert_eq!(image.exact(), Some(&t));
        }
    }

    #[test]
    fn out_of_domain_rejected(num in 1i64..100) {
        let c = CoefficientSequence::geometric(Scalar::one());
        prop_assert!(eval_truncated(&c, 3, &q(-num, 7)).is_err());
        prop_assert!(eval_truncated(&c, 3, &(q(num, 7) + BigRational::one())).is_err());
    }
}
