mod common;

use common::*;
use takagi_core::landsberg::maxima;
use takagi_core::littlewood::{scan, scan_records, ScanConfig, ScanSummary};
use takagi_core::scalar::{IntPoly, Scalar};
use takagi_core::step::Cardinality;

// Exact Sturm isolation per polynomial, degrees 1..=12.
const POSITIVE_ROOTS: [u64; 12] = [1, 2, 5, 10, 26, 48, 107, 206, 472, 884, 1970, 3760];
const POSITIVE_STEP_ROOTS: [u64; 12] = [1, 1, 3, 3, 10, 9, 24, 31, 70, 93, 215, 315];

fn run(max_degree: usize, jobs: usize) -> ScanSummary {
    let mut cfg = ScanConfig::new(max_degree);
    cfg.jobs = jobs;
    cfg.keep_roots = true;
    scan(&cfg).unwrap()
}

#[test]
fn degree_twelve_fixture() {
    let s = run(12, 1);
    for (d, row) in s.per_degree.iter().enumerate() {
        assert_eq!(row.polynomials, 1u64 << (d + 1), "degree {}", d + 1);
        assert_eq!(row.positive_roots, POSITIVE_ROOTS[d], "degree {}", d + 1);
        assert_eq!(row.negative_roots, POSITIVE_ROOTS[d], "degree {}", d + 1);
        assert_eq!(row.positive_step_roots, POSITIVE_STEP_ROOTS[d], "degree {}", d + 1);
        assert_eq!(row.negative_step_roots, u64::from((d + 1) % 2 == 0), "degree {}", d + 1);
        assert_eq!(row.exact_fallbacks + row.other_rational_roots, 0);
    }
    let t = s.totals();
    assert_eq!(t.positive_roots, 7491);
    assert_eq!(t.positive_roots_with_multiplicity, 7527);
    assert_eq!(s.total_roots, 7527);
    assert_eq!(s.total_step_roots, 775 + 6);
    assert_eq!(s.root_histograms[1].total(), 7491);
    assert_eq!(s.step_histograms[1].total(), 775);
}

#[test]
fn deterministic_across_pools() {
    let a = run(14, 1);
    assert_eq!(a, run(14, 4));
    assert_eq!(a, run(14, 0));
}

#[test]
fn roots_stay_in_annulus() {
    let s = run(14, 0);
    assert!(s.roots.iter().all(|&r| r.abs() > 0.5 && r.abs() < 2.0));
    assert_eq!(s.totals().other_rational_roots, 0);
}

#[test]
fn step_root_structure_to_degree_eight() {
    let r = step_root_structure(8).unwrap();
    assert_eq!(r.negative, 4);
}

#[test]
fn step_only_scan_matches_full_scan() {
    let full = run(10, 0);
    let mut cfg = ScanConfig::new(10);
    cfg.step_roots_only = true;
    let (s, recs) = scan_records(&cfg).unwrap();
    assert_eq!(s.total_step_roots, full.total_step_roots);
    assert_eq!(recs.iter().filter(|r| r.is_step_root).count() as u64, full.total_step_roots);
}

fn non_littlewood_alphas() -> Vec<Scalar> {
    // rationals other than 1 and roots of non-monic irreducibles divide no
    // polynomial with coefficients +-1
    let mut v: Vec<Scalar> = [(5, 9), (3, 5), (2, 3), (7, 10), (3, 4), (4, 5), (5, 6), (7, 8), (9, 10), (11, 12)]
        .iter()
        .map(|&(n, d)| Scalar::from_ratio(n, d))
        .collect();
    for (a, b) in [(2, -1), (3, -2), (5, -2), (3, -1), (5, -3), (7, -3), (7, -5), (9, -5), (11, -7), (13, -8)] {
        v.push(Scalar::root(&IntPoly::from_i64s(&[b, 0, a]), &q(1, 2), &q(1, 1)).unwrap());
    }
    v
}

#[test]
fn non_step_roots_have_two_maximizers() {
    for a in non_littlewood_alphas() {
        let r = maxima(&a, 64).unwrap();
        assert!(matches!(r.cardinality, Cardinality::Finite(1) | Cardinality::Finite(2)), "alpha {}: {:?}", a.to_f64(), r.cardinality);
    }
}
