//! End-to-end sanity checks, one line per check.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use takagi_core::landsberg;
use takagi_core::littlewood::{self as lw, ScanConfig};
use takagi_core::oracle::Grid;
use takagi_core::scalar::Scalar;
use takagi_core::step::{self, Extremum};
use takagi_core::takagi::CoefficientSequence;

use crate::{Failure, RunConfig};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn takagi_max(cfg: &RunConfig) -> Result<(), String> {
    let r = landsberg::maxima(&Scalar::one(), cfg.depth()).map_err(|e| e.to_string())?;
    if r.value.as_rational() != Some(&q(2, 3)) {
        return Err(format!("value {}", r.value));
    }
    match r.cardinality.dimension() {
        Some(d) if d == q(1, 2) => Ok(()),
        d => Err(format!("dimension {d:?}")),
    }
}

fn power_squared(cfg: &RunConfig) -> Result<(), String> {
    let r = step::classify_extrema(&CoefficientSequence::PowerSquared, Extremum::Max, cfg.depth())
        .map_err(|e| e.to_string())?;
    match r.locations {
        Some(l) if l == vec![q(11, 24), q(13, 24)] => Ok(()),
        l => Err(format!("locations {l:?}")),
    }
}

fn random_finite(cfg: &RunConfig) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for i in 0..20 {
        let n = rng.gen_range(1..=8);
        let c: Vec<BigRational> = (0..=n).map(|_| q(rng.gen_range(-8..=8), rng.gen_range(1..=8))).collect();
        let seq = CoefficientSequence::FiniteSupport(c.iter().cloned().map(Scalar::Rational).collect());
        let r = step::classify_extrema(&seq, Extremum::Max, cfg.depth()).map_err(|e| format!("sample {i}: {e}"))?;
        let want = Grid::new(&c, n).map_err(|e| e.to_string())?.max_value();
        if r.value.as_rational() != Some(&want) {
            return Err(format!("sample {i}: {} against grid {want}", r.value));
        }
    }
    Ok(())
}

fn small_scan(cfg: &RunConfig) -> Result<(), String> {
    let mut sc = ScanConfig::new(8);
    sc.jobs = cfg.jobs();
    let s = lw::scan(&sc).map_err(|e| e.to_string())?;
    let pos: u64 = s.per_degree.iter().map(|d| d.positive_roots).sum();
    let step: u64 = s.per_degree.iter().map(|d| d.positive_step_roots).sum();
    if (pos, step) == (405, 82) {
        Ok(())
    } else {
        Err(format!("{pos} positive roots, {step} positive step roots"))
    }
}

pub fn run(cfg: &RunConfig) -> Result<String, Failure> {
    let checks: [(&str, fn(&RunConfig) -> Result<(), String>); 4] = [
        ("takagi maximum 2/3, dimension 1/2", takagi_max),
        ("power-squared maximizers 11/24 and 13/24", power_squared),
        ("random finite sequences against the grid", random_finite),
        ("littlewood counts through degree 8", small_scan),
    ];
    let mut out = String::new();
    let mut failed = 0;
    for (name, check) in checks {
        match check(cfg) {
            Ok(()) => {
                let _ = writeln!(out, "PASS  {name}");
            }
            Err(e) => {
                failed += 1;
                let _ = writeln!(out, "FAIL  {name}: {e}");
            }
        }
    }
    if failed > 0 {
        print!("{out}");
        return Err(Failure::Unresolved(format!("{failed} selftest check(s) failed")));
    }
    Ok(out)
}
