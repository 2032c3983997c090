mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use common::*;
use takagi_core::oracle::{edge_union, maximizing_edges, nested_in, Grid, MaximizingEdge};
use takagi_core::takagi::Sign;

fn ratio() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=9).prop_map(|(n, d)| q(n, d))
}

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec(ratio(), 1..=max_len)
}

fn has_edge(edges: &[MaximizingEdge], a: &BigRational, b: &BigRational) -> bool {
    edges.iter().any(|e| (&e.x == a && &e.y == b) || (&e.x == b && &e.y == a))
}

fn dyadic_level(t: &BigRational) -> usize {
    t.denom().bits() as usize - 1
}

#[test]
fn step_engine_matches_grid() {
    oracle_suite(11, 50, 12).unwrap();
}

#[test]
fn slope_lemma_exact() {
    slope_suite(12, 500).unwrap();
}

#[test]
fn zero_coefficient_is_flat() {
    // c_0 = 0: f_0 vanishes and every neighbor pair of D_1 is an edge
    let c = [q(0, 1)];
    let g = Grid::new(&c, 0).unwrap();
    assert_eq!(g.argmax_indices(), vec![0, 1, 2]);
    let e = maximizing_edges(&c, 0).unwrap();
    assert!(has_edge(&e, &q(0, 1), &q(1, 2)) && has_edge(&e, &q(1, 2), &q(1, 1)));
}

#[test]
fn flat_continuation_at_generation_one() {
    // c = (1, 0): pairs with equal largest sums are all edges
    let c = [q(1, 1), q(0, 1)];
    let e = maximizing_edges(&c, 1).unwrap();
    assert!(has_edge(&e, &q(1, 4), &q(1, 2)) && has_edge(&e, &q(1, 2), &q(3, 4)));
}

#[test]
fn classical_slopes() {
    let c: Vec<BigRational> = (0..=1).map(|m| q(1, 1 << m)).collect();
    slope_holds(&c, &[Sign::Plus, Sign::Minus], 1).unwrap();
    slope_holds(&c, &[Sign::Plus, Sign::Plus], 1).unwrap();
    assert_eq!(takagi_core::oracle::slope(&c, &[Sign::Plus, Sign::Plus], 1).unwrap(), q(2, 1));
    assert!(takagi_core::oracle::slope(&c, &[Sign::Plus], 1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edges_move_forward(c in coeffs(8), n in 0usize..8) {
        let now = maximizing_edges(&c, n).unwrap();
        let next = maximizing_edges(&c, n + 1).unwrap();
        for e in &now {
            let z = (&e.x + &e.y) / BigRational::from_integer(BigInt::from(2));
            prop_assert!(has_edge(&next, &e.x, &z), "edge {:?} has no successor", e);
        }
    }

    #[test]
    fn edges_move_backward(c in coeffs(8), n in 1usize..9) {
        let now = maximizing_edges(&c, n).unwrap();
        let prev = maximizing_edges(&c, n - 1).unwrap();
        let two = BigRational::from_integer(BigInt::from(2));
        for e in &now {
            let (a, b) = if dyadic_level(&e.x) <= n {
                (e.x.clone(), &two * &e.y - &e.x)
            } else {
                (e.y.clone(), &two * &e.x - &e.y)
            };
            prop_assert!(has_edge(&prev, &a, &b), "edge {:?} has no predecessor", e);
        }
    }

    #[test]
    fn edge_unions_nest(c in coeffs(8), n in 0usize..10) {
        let outer = edge_union(&maximizing_edges(&c, n).unwrap());
        let inner = edge_union(&maximizing_edges(&c, n + 1).unwrap());
        prop_assert!(nested_in(&inner, &outer));
    }

    #[test]
    fn edge_forms_agree(c in coeffs(6)) {
        let n = c.len() + 1;
        prop_assert!(oracle_agreement_one(&c, n).is_ok());
    }

    #[test]
    fn edge_endpoints(c in coeffs(6), n in 0usize..8) {
        let g = Grid::new(&c, n).unwrap();
        let best = g.max_value();
        let h = BigRational::new(BigInt::from(1), BigInt::from(g.cells()));
        for e in g.edges() {
            prop_assert_eq!(&e.x - &e.y, if e.x > e.y { h.clone() } else { -h.clone() });
            prop_assert_eq!(takagi_core::oracle::truncated_at(&c, n, &e.x), best.clone());
        }
    }
}
