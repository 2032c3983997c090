//! Certified floating-point root isolation for small integer polynomials.
//!
//! Roots are isolated on `(1/2, 1)` by the Bernstein form of Descartes' rule
//! of signs with de Casteljau subdivision in `f64`. Every coefficient carries
//! an absolute error bound, and a sign is used only when it exceeds the bound.
//! When floating point cannot decide, callers fall back to exact arithmetic.

use std::cmp::Ordering;

use num_rational::BigRational;

use crate::scalar::IntPoly;

const U: f64 = f64::EPSILON / 2.0;
const MAX_LEVEL: u32 = 46;
const MAX_NODES: usize = 4096;

/// `p / (x - a)` for `p(a) = 0`, ascending coefficients.
pub(crate) fn deflate(p: &[i64], a: i64) -> Vec<i64> {
    let d = p.len() - 1;
    let mut q = vec![0i64; d];
    let mut acc = 0i64;
    for i in (1..=d).rev() {
        acc = acc * a + p[i];
        q[i - 1] = acc;
    }
    debug_assert_eq!(acc * a + p[0], 0);
    q
}

pub(crate) fn eval_int(p: &[i64], a: i64) -> i64 {
    p.iter().rev().fold(0i64, |acc, &c| acc * a + c)
}

/// Removes every factor `x - a` and returns the multiplicity.
pub(crate) fn strip_root(p: &mut Vec<i64>, a: i64) -> u32 {
    let mut m = 0;
    while p.len() > 1 && eval_int(p, a) == 0 {
        *p = deflate(p, a);
        m += 1;
    }
    m
}

fn binomials(n: usize) -> Vec<Vec<i128>> {
    let mut c = vec![vec![0i128; n + 1]; n + 1];
    for i in 0..=n {
        c[i][0] = 1;
        for j in 1..=i {
            c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
        }
    }
    c
}

/// Bernstein coefficients of `2^d r((1 + y)/2)` on `y` in `[0, 1]`, scaled by `C(d, k)`.
fn bernstein_on_upper_half(r: &[i64], binom: &[Vec<i128>]) -> Vec<i128> {
    let d = r.len() - 1;
    // s(y) = sum_i r_i 2^(d-i) (1 + y)^i
    let mut s = vec![0i128; d + 1];
    for (i, &ri) in r.iter().enumerate() {
        if ri == 0 {
            continue;
        }
        let w = (ri as i128) << (d - i);
        for j in 0..=i {
            s[j] += w * binom[i][j];
        }
    }
    (0..=d)
        .map(|k| (0..=k).map(|i| binom[d - i][k - i] * s[i]).sum())
        .collect()
}

#[derive(Clone)]
struct Node {
    c: Vec<f64>,
    e: Vec<f64>,
    num: u64,
    level: u32,
}

/// Least and greatest number of sign changes consistent with the error bounds.
fn variations(c: &[f64], e: &[f64]) -> (usize, usize) {
    let mut min = 0;
    let mut last: Option<bool> = None;
    // best[s]: most changes of a completion whose last nonzero sign is s
    let mut best: [Option<usize>; 2] = [None, None];
    for (v, err) in c.iter().zip(e) {
        let extend = |best: &[Option<usize>; 2], s: bool| -> usize {
            let same = best[s as usize];
            let other = best[!s as usize].map(|x| x + 1);
            same.max(other).unwrap_or(0)
        };
        if v.abs() > *err {
            let s = *v > 0.0;
            if last.is_some_and(|l| l != s) {
                min += 1;
            }
            last = Some(s);
            let n = extend(&best, s);
            best[s as usize] = Some(n);
            best[!s as usize] = None;
        } else {
            let np = extend(&best, true);
            let nn = extend(&best, false);
            best = [best[0].max(Some(nn)), best[1].max(Some(np))];
        }
    }
    (min, best[0].max(best[1]).unwrap_or(0))
}

fn split(n: &Node) -> (Node, Node) {
    let len = n.c.len();
    let mut w = n.c.clone();
    let mut we = n.e.clone();
    let mut lc = vec![0.0; len];
    let mut le = vec![0.0; len];
    let mut rc = vec![0.0; len];
    let mut re = vec![0.0; len];
    lc[0] = w[0];
    le[0] = we[0];
    rc[len - 1] = w[len - 1];
    re[len - 1] = we[len - 1];
    for j in 1..len {
        for i in 0..len - j {
            w[i] = 0.5 * (w[i] + w[i + 1]);
            we[i] = 0.5 * (we[i] + we[i + 1]) + w[i].abs() * U;
        }
        lc[j] = w[0];
        le[j] = we[0];
        rc[len - 1 - j] = w[len - 1 - j];
        re[len - 1 - j] = we[len - 1 - j];
    }
    let level = n.level + 1;
    (
        Node { c: lc, e: le, num: n.num * 2, level },
        Node { c: rc, e: re, num: n.num * 2 + 1, level },
    )
}

/// Disjoint intervals `(lo, hi)` of `(1/2, 1)`, each containing exactly one
/// simple root of `r`, covering all roots of `r` there; `None` if floating
/// point could not certify the count.
pub(crate) fn isolate_upper_half(r: &[i64], binom: &[Vec<i128>]) -> Option<Vec<(f64, f64)>> {
    let d = r.len() - 1;
    if d == 0 {
        return Some(Vec::new());
    }
    let b = bernstein_on_upper_half(r, binom);
    let c: Vec<f64> = (0..=d).map(|k| b[k] as f64 / binom[d][k] as f64).collect();
    let e: Vec<f64> = c.iter().map(|v| v.abs() * 3.0 * U).collect();
    let mut out = Vec::new();
    let mut stack = vec![Node { c, e, num: 0, level: 0 }];
    let mut nodes = 0;
    while let Some(n) = stack.pop() {
        nodes += 1;
        if nodes > MAX_NODES {
            return None;
        }
        let (lo_v, hi_v) = variations(&n.c, &n.e);
        if hi_v == 0 {
            continue;
        }
        if lo_v == 1 && hi_v == 1 {
            let scale = (-(n.level as i32)) as f64;
            let a = (n.num as f64) * scale.exp2();
            let b = ((n.num + 1) as f64) * scale.exp2();
            out.push((0.5 * (1.0 + a), 0.5 * (1.0 + b)));
            continue;
        }
        if n.level >= MAX_LEVEL {
            return None;
        }
        let (l, r) = split(&n);
        stack.push(r);
        stack.push(l);
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Some(out)
}

pub(crate) fn binomial_table(n: usize) -> Vec<Vec<i128>> {
    binomials(n)
}

/// Sign of `r(x)` for `|x| <= 1`, certified in `f64` or computed exactly.
pub(crate) fn sign_at(r: &[i64], x: f64) -> Ordering {
    let mut v = 0.0f64;
    let mut mag = 0.0f64;
    let ax = x.abs();
    for &c in r.iter().rev() {
        v = v * x + c as f64;
        mag = mag * ax + (c as f64).abs();
    }
    let bound = mag * (2.0 * r.len() as f64 + 2.0) * U * 1.01;
    if v.abs() > bound {
        return v.partial_cmp(&0.0).unwrap();
    }
    let q = BigRational::from_float(x).expect("finite");
    IntPoly::from_i64s(r).sign_at(&q)
}

/// Bisects a sign-change bracket of `r` (with `r(lo)` of sign `slo`) once.
pub(crate) fn bisect(r: &[i64], lo: f64, hi: f64, slo: Ordering) -> (f64, f64) {
    let m = 0.5 * (lo + hi);
    if m <= lo || m >= hi {
        return (lo, hi);
    }
    match sign_at(r, m) {
        Ordering::Equal => (m, m),
        s if s == slo => (m, hi),
        _ => (lo, m),
    }
}

/// Enclosures of the prefix sums `P_k(a) = sum_{m <= k} rho_m a^m` for `a`
/// in `[lo, hi]`: returns a sign per prefix, `None` where not certified.
pub(crate) fn prefix_signs(rho: &[i64], lo: f64, hi: f64) -> Vec<Option<Ordering>> {
    let m = 0.5 * (lo + hi);
    let rad = (hi - m).max(m - lo);
    let big = lo.abs().max(hi.abs());
    let am = m.abs();
    let mut out = Vec::with_capacity(rho.len());
    let mut v = 0.0f64;
    let mut pw = 1.0f64;
    let mut mag = 0.0f64;
    let mut deriv = 0.0f64;
    let mut bigpw = 1.0f64;
    let mut apw = 1.0f64;
    for (k, &c) in rho.iter().enumerate() {
        v += c as f64 * pw;
        mag += apw;
        if k > 0 {
            deriv += k as f64 * bigpw;
            bigpw *= big;
        }
        let err = mag * (2.0 * k as f64 + 3.0) * U * 1.01 + deriv * rad * (1.0 + 1e-12);
        out.push(if v.abs() > err { Some(v.partial_cmp(&0.0).unwrap()) } else { None });
        pw *= m;
        apw *= am;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deflation_strips_repeated_factors() {
        // (x - 1)^2 (x + 1) = x^3 - x^2 - x + 1
        let mut p = vec![1, -1, -1, 1];
        assert_eq!(strip_root(&mut p, 1), 2);
        assert_eq!(p, vec![1, 1]);
        assert_eq!(strip_root(&mut p, -1), 1);
        assert_eq!(p, vec![1]);
    }

    #[test]
    fn isolates_golden_conjugate() {
        let t = binomial_table(24);
        let roots = isolate_upper_half(&[1, -1, -1], &t).unwrap();
        assert_eq!(roots.len(), 1);
        let g = (5f64.sqrt() - 1.0) / 2.0;
        assert!(roots[0].0 < g && g < roots[0].1);
        assert!(isolate_upper_half(&[1, 1, 1], &t).unwrap().is_empty());
    }

    #[test]
    fn close_roots_are_separated() {
        // (3x - 2)(7x - 5) = 21x^2 - 29x + 10
        let t = binomial_table(24);
        let roots = isolate_upper_half(&[10, -29, 21], &t).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots[0].1 <= roots[1].0);
    }

    #[test]
    fn variation_bounds() {
        let (a, b) = variations(&[1.0, 1e-20, -1.0], &[0.0, 1e-10, 0.0]);
        assert_eq!((a, b), (1, 1));
        let (a, b) = variations(&[1.0, -1e-20, 1.0], &[0.0, 1e-10, 0.0]);
        assert_eq!((a, b), (0, 2));
    }
}
