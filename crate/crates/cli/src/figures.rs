use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

use takagi_core::landsberg::{default_grid, eval_landsberg, tau_curve, TauPoint};
use takagi_core::littlewood::{self as lw, ScanConfig};
use takagi_core::scalar::{decimal, Rounding, Scalar, DECIMAL_DIGITS};
use takagi_core::takagi::{eval_truncated, CoefficientSequence};
use rayon::prelude::*;

use crate::commands::{scan_failure, step_failure, write_scan_files};
use crate::output::{provenance, scalar_decimal, write_with_sidecar};
use crate::{Failure, RunConfig};

fn dyadic_grid(points: usize) -> (u32, Vec<BigRational>) {
    let bits = points.max(2).next_power_of_two().trailing_zeros();
    let n = 1u64 << bits;
    (bits, (0..=n).map(|k| BigRational::new(BigInt::from(k), BigInt::from(n))).collect())
}

fn dec(q: &BigRational) -> String {
    decimal::to_decimal(q, DECIMAL_DIGITS, Rounding::Nearest)
}

pub fn figure(cfg: &RunConfig, which: u8, out: &Path, points: Option<usize>, max_degree: usize) -> Result<String, Failure> {
    match which {
        1 => {
            let n = points.unwrap_or(1999);
            let grid: Vec<Scalar> = default_grid(n).into_iter().map(Scalar::Rational).collect();
            let rows = tau_curve(&grid, cfg.depth());
            let mut csv = format!("{}\n", TauPoint::csv_header());
            for (_, p) in &rows {
                csv.push_str(&p.csv_row());
                csv.push('\n');
            }
            let meta = provenance("figure 1", json!({ "run": cfg.to_json(), "points": n }));
            let path = out.join("fig1_maximizer_curve.csv");
            write_with_sidecar(&path, &csv, &meta)?;
            Ok(format!("wrote {} ({} rows)\n", path.display(), rows.len()))
        }
        2 => {
            let (bits, ts) = dyadic_grid(points.unwrap_or(1024));
            let c = CoefficientSequence::PowerSquared;
            let values: Vec<Result<Scalar, Failure>> = ts
                .par_iter()
                .map(|t| eval_truncated(&c, bits as usize, t).map_err(|e| step_failure(e.into())))
                .collect();
            let mut csv = String::from("t,f\n");
            for (t, v) in ts.iter().zip(values) {
                let _ = writeln!(csv, "{},{}", dec(t), scalar_decimal(&v?));
            }
            let meta = provenance(
                "figure 2",
                json!({ "run": cfg.to_json(), "sequence": "power-squared", "maximizers": ["11/24", "13/24"] }),
            );
            let path = out.join("fig2_power_squared.csv");
            write_with_sidecar(&path, &csv, &meta)?;
            let lines = format!("x,label\n{},maximizer\n{},maximizer\n", dec(&q(11, 24)), dec(&q(13, 24)));
            let lpath = out.join("fig2_maximizers.csv");
            write_with_sidecar(&lpath, &lines, &meta)?;
            Ok(format!("wrote {} and {}\n", path.display(), lpath.display()))
        }
        3 => {
            let (_, ts) = dyadic_grid(points.unwrap_or(512));
            let alphas = [
                ("1/2", Scalar::from_ratio(1, 2)),
                ("4/5", Scalar::from_ratio(4, 5)),
                ("1", Scalar::one()),
                ("sqrt2", Scalar::sqrt2()),
            ];
            let mut series = Vec::new();
            for (name, a) in &alphas {
                series.push((format!("-{name}"), a.neg()));
                series.push((name.to_string(), a.clone()));
            }
            let mut csv = String::from("series,alpha,t,f\n");
            for (name, a) in &series {
                let vals: Vec<Result<Scalar, Failure>> =
                    ts.par_iter().map(|t| eval_landsberg(a, t).map_err(step_failure)).collect();
                for (t, v) in ts.iter().zip(vals) {
                    let _ = writeln!(csv, "{name},\"{}\",{},{}", scalar_decimal(a), dec(t), scalar_decimal(&v?));
                }
            }
            let meta = provenance("figure 3", json!({ "run": cfg.to_json(), "series": series.iter().map(|s| s.0.clone()).collect::<Vec<_>>() }));
            let path = out.join("fig3_landsberg.csv");
            write_with_sidecar(&path, &csv, &meta)?;
            Ok(format!("wrote {} ({} series)\n", path.display(), series.len()))
        }
        _ => {
            let mut sc = ScanConfig::new(max_degree);
            sc.jobs = cfg.jobs();
            let s = lw::scan(&sc).map_err(scan_failure)?;
            let meta = provenance("figure 4", json!({ "run": cfg.to_json(), "max_degree": max_degree, "bins": sc.bins }));
            write_scan_files(out, &s, &meta)?;
            Ok(format!(
                "wrote {} and {}: {} roots, {} step roots\n",
                out.join("summary.json").display(),
                out.join("histograms.csv").display(),
                s.total_roots,
                s.total_step_roots
            ))
        }
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}
