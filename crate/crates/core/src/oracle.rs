//! Brute-force maximization of truncated Takagi-class functions on dyadic grids.
//!
//! Everything here works with exact rationals on the grid `D_{n+1}` and is kept
//! apart from the step engine so the two can check each other.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::takagi::{CoefficientSequence, Sign};

pub const MAX_ORACLE_GENERATION: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("generation {0} exceeds the oracle budget of {MAX_ORACLE_GENERATION}")]
    Budget(usize),
    #[error("coefficient {0} is not an exact rational")]
    NotRational(usize),
    #[error("sign prefix has {have} entries, need {need}")]
    ShortPrefix { have: usize, need: usize },
}

/// Pair `(x, y)` with `x` in `M_n` and `y` a best neighbor of `x` in `D_{n+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MaximizingEdge {
    pub x: BigRational,
    pub y: BigRational,
    pub generation: usize,
}

impl MaximizingEdge {
    /// The closed interval spanned by the edge.
    pub fn interval(&self) -> (BigRational, BigRational) {
        if self.x <= self.y {
            (self.x.clone(), self.y.clone())
        } else {
            (self.y.clone(), self.x.clone())
        }
    }

    pub fn contains(&self, t: &BigRational) -> bool {
        let (a, b) = self.interval();
        &a <= t && t <= &b
    }
}

/// The first `n + 1` coefficients of `c`, when all are exact rationals.
pub fn rational_prefix(c: &CoefficientSequence, n: usize) -> Result<Vec<BigRational>, OracleError> {
    (0..=n)
        .map(|m| c.coefficient(m).as_rational().cloned().ok_or(OracleError::NotRational(m)))
        .collect()
}

/// `f_n` on `D_{n+1}`, stored as integers `L 2^{n+1} f_n(k / 2^{n+1})`.
#[derive(Clone, Debug)]
pub struct Grid {
    generation: usize,
    scale: BigInt,
    values: Vec<BigInt>,
}

impl Grid {
    pub fn new(c: &[BigRational], n: usize) -> Result<Self, OracleError> {
        if n > MAX_ORACLE_GENERATION {
            return Err(OracleError::Budget(n));
        }
        let coeffs: Vec<BigRational> = (0..=n).map(|m| c.get(m).cloned().unwrap_or_else(BigRational::zero)).collect();
        let l = coeffs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let ints: Vec<BigInt> = coeffs.iter().map(|q| q.numer() * (&l / q.denom())).collect();
        let big_n = n + 1;
        let size = 1u64 << big_n;
        let values = (0..=size)
            .into_par_iter()
            .map(|k| {
                let mut v = BigInt::zero();
                for (m, cm) in ints.iter().enumerate() {
                    if cm.is_zero() {
                        continue;
                    }
                    // phi(k 2^m / 2^N) = min(r, 2^N - r) / 2^N with r = k 2^m mod 2^N
                    let r = (k << m) & (size - 1);
                    let d = r.min(size - r);
                    v += cm * BigInt::from(d);
                }
                v
            })
            .collect();
        Ok(Self { generation: n, scale: l << big_n, values })
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    /// Number of cells, `2^{n+1}`.
    pub fn cells(&self) -> usize {
        self.values.len() - 1
    }

    pub fn point(&self, k: usize) -> BigRational {
        BigRational::new(BigInt::from(k), BigInt::from(self.cells()))
    }

    /// `f_n(k / 2^{n+1})`
    pub fn value(&self, k: usize) -> BigRational {
        BigRational::new(self.values[k].clone(), self.scale.clone())
    }

    pub fn max_value(&self) -> BigRational {
        BigRational::new(self.values.iter().max().unwrap().clone(), self.scale.clone())
    }

    /// Indices of `M_n`.
    pub fn argmax_indices(&self) -> Vec<usize> {
        let best = self.values.iter().max().unwrap();
        (0..self.values.len()).filter(|&k| &self.values[k] == best).collect()
    }

    fn neighbors(&self, k: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(2);
        if k > 0 {
            out.push(k - 1);
        }
        if k < self.cells() {
            out.push(k + 1);
        }
        out
    }

    /// Edges by the definition: `x` in `M_n`, `y` a maximizing neighbor.
    pub fn edge_indices(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in self.argmax_indices() {
            let nb = self.neighbors(x);
            let best = nb.iter().map(|&y| &self.values[y]).max().unwrap();
            out.extend(nb.iter().filter(|&&y| &self.values[y] == best).map(|&y| (x, y)));
        }
        out
    }

    /// Neighboring pairs `(k, k + 1)` that maximize `f_n(z_0) + f_n(z_1)`.
    pub fn pair_sum_indices(&self) -> Vec<(usize, usize)> {
        let sums: Vec<BigInt> = self.values.windows(2).map(|w| &w[0] + &w[1]).collect();
        let best = sums.iter().max().unwrap();
        (0..sums.len()).filter(|&k| &sums[k] == best).map(|k| (k, k + 1)).collect()
    }

    pub fn edges(&self) -> Vec<MaximizingEdge> {
        self.edge_indices()
            .into_iter()
            .map(|(x, y)| MaximizingEdge { x: self.point(x), y: self.point(y), generation: self.generation })
            .collect()
    }
}

/// `M_n`, the maximizers of `f_n` on `D_{n+1}`.
pub fn grid_argmax(c: &[BigRational], n: usize) -> Result<Vec<BigRational>, OracleError> {
    let g = Grid::new(c, n)?;
    Ok(g.argmax_indices().into_iter().map(|k| g.point(k)).collect())
}

/// Maximizing edges of generation `n`.
pub fn maximizing_edges(c: &[BigRational], n: usize) -> Result<Vec<MaximizingEdge>, OracleError> {
    Ok(Grid::new(c, n)?.edges())
}

/// Neighbor pairs with the largest value of `f_n(z_0) + f_n(z_1)`, as intervals.
pub fn pair_sum_edges(c: &[BigRational], n: usize) -> Result<Vec<(BigRational, BigRational)>, OracleError> {
    let g = Grid::new(c, n)?;
    Ok(g.pair_sum_indices().into_iter().map(|(a, b)| (g.point(a), g.point(b))).collect())
}

/// `E_n` as a sorted list of disjoint closed intervals.
pub fn edge_union(edges: &[MaximizingEdge]) -> Vec<(BigRational, BigRational)> {
    let mut iv: Vec<_> = edges.iter().map(|e| e.interval()).collect();
    iv.sort();
    let mut out: Vec<(BigRational, BigRational)> = Vec::new();
    for (a, b) in iv {
        match out.last_mut() {
            Some(last) if a <= last.1 => {
                if b > last.1 {
                    last.1 = b;
                }
            }
            _ => out.push((a, b)),
        }
    }
    out
}

/// True when every interval of `inner` lies inside some interval of `outer`.
pub fn nested_in(inner: &[(BigRational, BigRational)], outer: &[(BigRational, BigRational)]) -> bool {
    inner.iter().all(|(a, b)| outer.iter().any(|(c, d)| c <= a && b <= d))
}

/// `t_n = sum_{m <= n} (1 - rho_m) 2^{-(m+2)}`, the left end of the cell of `rho`.
pub fn cell_start(rho: &[Sign], n: usize) -> BigRational {
    let mut k = BigInt::zero();
    for s in &rho[..=n] {
        k <<= 1;
        if *s == Sign::Minus {
            k += 1;
        }
    }
    BigRational::new(k, BigInt::one() << (n + 1))
}

/// `f_n(t)` for rational `t`, evaluated term by term.
pub fn truncated_at(c: &[BigRational], n: usize, t: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    let mut x = t.clone();
    for m in 0..=n {
        if let Some(cm) = c.get(m) {
            let frac = &x - x.floor();
            let d = if frac > BigRational::new(1.into(), 2.into()) { BigRational::one() - &frac } else { frac };
            acc += cm * d;
        }
        x = x * BigRational::from_integer(2.into());
    }
    acc
}

/// `sum_{m <= n} 2^m c_m rho_m`, checked against the difference quotient of
/// `f_n` across the cell `[t_n, t_n + 2^{-(n+1)}]`.
pub fn slope(c: &[BigRational], rho: &[Sign], n: usize) -> Result<BigRational, OracleError> {
    if rho.len() < n + 1 {
        return Err(OracleError::ShortPrefix { have: rho.len(), need: n + 1 });
    }
    let s = (0..=n).fold(BigRational::zero(), |acc, m| {
        let cm = c.get(m).cloned().unwrap_or_else(BigRational::zero);
        acc + cm * BigRational::from_integer(BigInt::from(rho[m].value()) << m)
    });
    let lo = cell_start(rho, n);
    let h = BigRational::new(BigInt::one(), BigInt::one() << (n + 1));
    let hi = &lo + &h;
    let q = (truncated_at(c, n, &hi) - truncated_at(c, n, &lo)) / h;
    assert_eq!(q, s, "slope mismatch on [{lo}, {hi}]");
    Ok(s)
}

/// Rows `(t, f_n(t))` over `D_{n+1}` as `f64`, for plotting.
pub fn grid_rows(c: &[BigRational], n: usize) -> Result<Vec<(f64, f64)>, OracleError> {
    let g = Grid::new(c, n)?;
    Ok((0..=g.cells())
        .map(|k| {
            let t = k as f64 / g.cells() as f64;
            let v = g.value(k);
            let f = v.numer().to_f64().unwrap_or(f64::NAN) / v.denom().to_f64().unwrap_or(f64::NAN);
            (t, f)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn geometric_one(n: usize) -> Vec<BigRational> {
        (0..=n).map(|m| q(1, 1 << m)).collect()
    }

    #[test]
    fn classical_generation_one() {
        let m = grid_argmax(&geometric_one(1), 1).unwrap();
        assert_eq!(m, vec![q(1, 4), q(1, 2), q(3, 4)]);
        let e = maximizing_edges(&geometric_one(1), 1).unwrap();
        assert!(e.iter().any(|e| e.contains(&q(1, 3))));
    }

    #[test]
    fn generation_zero() {
        assert_eq!(grid_argmax(&[q(-1, 1)], 0).unwrap(), vec![q(0, 1), q(1, 1)]);
        assert_eq!(grid_argmax(&[q(1, 3)], 0).unwrap(), vec![q(1, 2)]);
    }

    #[test]
    fn flat_generation() {
        // c = (1, 0): f_1 = phi, every pair touching 1/2 is an edge
        let c = [q(1, 1), q(0, 1)];
        let g = Grid::new(&c, 1).unwrap();
        assert_eq!(g.argmax_indices(), vec![2]);
        assert_eq!(g.pair_sum_indices(), vec![(1, 2), (2, 3)]);
        assert_eq!(g.edge_indices(), vec![(2, 1), (2, 3)]);
    }

    #[test]
    fn slopes() {
        use Sign::*;
        assert_eq!(slope(&[q(1, 1)], &[Plus], 0).unwrap(), q(1, 1));
        assert_eq!(slope(&geometric_one(1), &[Plus, Minus], 1).unwrap(), q(0, 1));
        assert_eq!(slope(&geometric_one(1), &[Plus, Plus], 1).unwrap(), q(2, 1));
        assert_eq!(cell_start(&[Plus, Minus], 1), q(1, 4));
    }

    #[test]
    fn budget() {
        assert_eq!(Grid::new(&[q(1, 1)], 25).unwrap_err(), OracleError::Budget(25));
    }

    #[test]
    fn grid_matches_direct_evaluation() {
        let c = [q(1, 1), q(-3, 4), q(2, 5), q(1, 7)];
        let g = Grid::new(&c, 3).unwrap();
        for k in 0..=g.cells() {
            assert_eq!(g.value(k), truncated_at(&c, 3, &g.point(k)));
        }
    }
}
