use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use takagi_core::error::{EvalError, StepError};
use takagi_core::landsberg::{self, classify_alpha};
use takagi_core::littlewood::{self as lw, ScanConfig, ScanError, ScanRecord, ScanSummary};
use takagi_core::scalar::{decimal, Scalar, DECIMAL_DIGITS};
use takagi_core::step::{self, ExtremaReport, Extremum, NonnegResult};
use takagi_core::takagi::eval_series;

use crate::input::{parse_alpha, parse_seq, Target};
use crate::output::{self, provenance, scalar_decimal, write_with_sidecar, Format};
use crate::{Failure, LittlewoodCommand, RunConfig, TargetArgs};

pub fn step_failure(e: StepError) -> Failure {
    match e {
        StepError::AlphaOutOfRange | StepError::Domain(_) | StepError::Eval(EvalError::Domain(_)) => {
            Failure::Usage(e.to_string())
        }
        _ => Failure::Unresolved(e.to_string()),
    }
}

pub fn scan_failure(e: ScanError) -> Failure {
    match e {
        ScanError::Budget(_) => Failure::Budget(e.to_string()),
        _ => Failure::Usage(e.to_string()),
    }
}

pub fn target(t: &TargetArgs) -> Result<Target, Failure> {
    match (&t.alpha, &t.seq) {
        (Some(a), None) => parse_alpha(a).map(Target::Alpha).map_err(Failure::Usage),
        (None, Some(s)) => parse_seq(s).map(Target::Sequence).map_err(Failure::Usage),
        _ => Err(Failure::Usage("give exactly one of --alpha and --seq".into())),
    }
}

pub fn report(cfg: &RunConfig, t: &Target, kind: Extremum) -> Result<ExtremaReport, Failure> {
    let r = match (t, kind) {
        (Target::Alpha(a), Extremum::Max) => landsberg::maxima(a, cfg.depth()),
        (Target::Alpha(a), Extremum::Min) => landsberg::minima(a, cfg.depth()),
        (Target::Sequence(c), k) => step::classify_extrema(c, k, cfg.depth()),
    };
    r.map_err(step_failure)
}

pub fn extremum(cfg: &RunConfig, t: &TargetArgs, kind: Extremum) -> Result<String, Failure> {
    let target = target(t)?;
    let r = report(cfg, &target, kind)?;
    let name = target.describe();
    Ok(match cfg.output {
        Format::Json => pretty_json(&output::report_json(&name, &r, cfg.precision_bits)),
        Format::Csv => output::report_csv(&name, &r),
        Format::Pretty => output::report_pretty(&name, &r),
    })
}

fn pretty_json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json") + "\n"
}

pub fn classify(cfg: &RunConfig, t: &TargetArgs) -> Result<String, Failure> {
    let target = target(t)?;
    let regime = match &target {
        Target::Alpha(a) => Some(classify_alpha(a).map_err(step_failure)?.label()),
        Target::Sequence(_) => None,
    };
    let max = report(cfg, &target, Extremum::Max)?;
    let min = report(cfg, &target, Extremum::Min)?;
    let nonneg = match step::nonneg_check(&target.sequence(), cfg.depth()) {
        NonnegResult::NonnegCertified => "nonnegative".to_string(),
        NonnegResult::NegativeWitness(l) => format!("negative at {}", output::location_decimal(&l)),
        NonnegResult::Unknown(d) => format!("unknown (depth {d})"),
    };
    let dim = |r: &ExtremaReport| r.cardinality.dimension().map(|d| decimal::to_fraction(&d));
    let name = target.describe();
    Ok(match cfg.output {
        Format::Json => pretty_json(&json!({
            "target": name,
            "regime": regime,
            "max": { "cardinality": max.cardinality.to_json(), "dimension": dim(&max), "value": max.value.to_decimal(DECIMAL_DIGITS) },
            "min": { "cardinality": min.cardinality.to_json(), "dimension": dim(&min), "value": min.value.to_decimal(DECIMAL_DIGITS) },
            "nonnegative": nonneg,
        })),
        Format::Csv => format!(
            "target,regime,max_cardinality,max_dim,min_cardinality,min_dim,nonnegative\n{name},{},{},{},{},{},{nonneg}\n",
            regime.clone().unwrap_or_default(),
            max.cardinality.label(),
            dim(&max).unwrap_or_default(),
            min.cardinality.label(),
            dim(&min).unwrap_or_default()
        ),
        Format::Pretty => {
            let mut s = format!("{name}\n");
            if let Some(r) = &regime {
                let _ = writeln!(s, "  regime       {r}");
            }
            let _ = writeln!(s, "  maxima       {} (dim {})", max.cardinality.label(), dim(&max).unwrap_or("?".into()));
            let _ = writeln!(s, "  minima       {} (dim {})", min.cardinality.label(), dim(&min).unwrap_or("?".into()));
            let _ = writeln!(s, "  sign         {nonneg}");
            s
        }
    })
}

pub fn eval(cfg: &RunConfig, t: &TargetArgs, point: &str, width_bits: u32) -> Result<String, Failure> {
    let target = target(t)?;
    let tq = decimal::parse_rational(point).ok_or_else(|| Failure::Usage(format!("bad point {point:?}")))?;
    let v = match &target {
        Target::Alpha(a) => landsberg::eval_landsberg(a, &tq).map_err(step_failure)?,
        Target::Sequence(c) => {
            let w = BigRational::new(BigInt::from(1), BigInt::from(1) << width_bits);
            eval_series(c, &tq, &w).map_err(|e| step_failure(e.into()))?
        }
    };
    let name = target.describe();
    let t_str = decimal::to_fraction(&tq);
    Ok(match cfg.output {
        Format::Json => pretty_json(&json!({ "target": name, "t": t_str, "value": v.to_json(), "decimal": scalar_decimal(&v) })),
        Format::Csv => format!("target,t,value\n{name},{t_str},\"{}\"\n", scalar_decimal(&v)),
        Format::Pretty => format!("f({t_str}) = {}\n", scalar_decimal(&v)),
    })
}

fn scan_config(cfg: &RunConfig, max_degree: usize) -> ScanConfig {
    let mut c = ScanConfig::new(max_degree);
    c.jobs = cfg.jobs();
    c
}

pub fn littlewood(cfg: &RunConfig, cmd: LittlewoodCommand) -> Result<String, Failure> {
    match cmd {
        LittlewoodCommand::Scan { max_degree, step_only, bins, out, roots_csv } => {
            let mut sc = scan_config(cfg, max_degree);
            sc.step_roots_only = step_only;
            sc.bins = bins.max(1);
            let meta = provenance(
                "littlewood scan",
                json!({ "run": cfg.to_json(), "max_degree": max_degree, "step_only": step_only, "bins": sc.bins }),
            );
            let summary = if roots_csv && out.is_some() {
                let (s, recs) = lw::scan_records(&sc).map_err(scan_failure)?;
                write_with_sidecar(&out.as_ref().unwrap().join("roots.csv"), &roots_csv_text(&recs), &meta)?;
                s
            } else {
                lw::scan(&sc).map_err(scan_failure)?
            };
            if let Some(dir) = &out {
                write_scan_files(dir, &summary, &meta)?;
            }
            Ok(scan_text(cfg.output, &summary))
        }
        LittlewoodCommand::Steproots { max_degree, sign } => {
            let mut sc = scan_config(cfg, max_degree);
            sc.step_roots_only = true;
            let (_, recs) = lw::scan_records(&sc).map_err(scan_failure)?;
            let keep = |r: &&ScanRecord| match sign.as_deref() {
                Some("pos") => r.lo > 0.0,
                Some("neg") => r.lo < 0.0,
                _ => true,
            };
            let recs: Vec<&ScanRecord> = recs.iter().filter(|r| r.is_step_root).filter(keep).collect();
            Ok(match cfg.output {
                Format::Json => pretty_json(&Value::from(
                    recs.iter()
                        .map(|r| {
                            json!({
                                "degree": r.degree,
                                "mask": r.mask,
                                "signs": r.poly().signs_string(),
                                "root": r.root_decimal(DECIMAL_DIGITS),
                                "multiplicity": r.multiplicity,
                            })
                        })
                        .collect::<Vec<_>>(),
                )),
                Format::Csv => {
                    let mut s = String::from("degree,mask,signs,root,multiplicity\n");
                    for r in &recs {
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{}",
                            r.degree,
                            r.mask,
                            r.poly().signs_string(),
                            r.root_decimal(DECIMAL_DIGITS),
                            r.multiplicity
                        );
                    }
                    s
                }
                Format::Pretty => {
                    let mut s = String::new();
                    for r in &recs {
                        let _ = writeln!(s, "{:>3}  {:<24} {}", r.degree, r.poly().signs_string(), r.root_decimal(DECIMAL_DIGITS));
                    }
                    let _ = writeln!(s, "{} step roots", recs.len());
                    s
                }
            })
        }
        LittlewoodCommand::Gaps { max_degree, resolution, lo, hi, step_only } => {
            let num = |s: &str| -> Result<f64, Failure> {
                decimal::parse_rational(s)
                    .map(|q| Scalar::Rational(q).to_f64())
                    .ok_or_else(|| Failure::Usage(format!("bad number {s:?}")))
            };
            let (res, lo, hi) = (num(&resolution)?, num(&lo)?, num(&hi)?);
            let mut sc = scan_config(cfg, max_degree);
            sc.keep_roots = true;
            sc.step_roots_only = step_only;
            let s = lw::scan(&sc).map_err(scan_failure)?;
            let pts = if step_only { &s.step_roots } else { &s.roots };
            let gaps = lw::closure_gaps(pts, lo, hi, res);
            Ok(match cfg.output {
                Format::Json => pretty_json(&json!({
                    "max_degree": max_degree,
                    "resolution": resolution,
                    "interval": [lo, hi],
                    "points": pts.iter().filter(|x| **x >= lo && **x <= hi).count(),
                    "gaps": gaps.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
                })),
                Format::Csv => {
                    let mut t = String::from("lo,hi,width\n");
                    for (a, b) in &gaps {
                        let _ = writeln!(t, "{a:.17},{b:.17},{:.17}", b - a);
                    }
                    t
                }
                Format::Pretty => {
                    let mut t = format!("{} gaps of width >= {resolution} in [{lo}, {hi}]\n", gaps.len());
                    for (a, b) in &gaps {
                        let _ = writeln!(t, "  [{a:.6}, {b:.6}]  width {:.6}", b - a);
                    }
                    t
                }
            })
        }
    }
}

pub fn roots_csv_text(recs: &[ScanRecord]) -> String {
    let mut s = String::from("degree,mask,root,is_step_root,multiplicity\n");
    for r in recs {
        let _ = writeln!(s, "{},{},{},{},{}", r.degree, r.mask, r.root_decimal(DECIMAL_DIGITS), r.is_step_root, r.multiplicity);
    }
    s
}

pub fn histogram_csv(s: &ScanSummary) -> String {
    let mut out = String::from("kind,component,bin,lo,hi,count\n");
    for (kind, hs) in [("roots", &s.root_histograms), ("step_roots", &s.step_histograms)] {
        for (comp, h) in ["negative", "positive"].iter().zip(hs.iter()) {
            let e = h.edges();
            for (k, c) in h.counts.iter().enumerate() {
                let _ = writeln!(out, "{kind},{comp},{k},{},{},{c}", decimal::to_fraction(&e[k]), decimal::to_fraction(&e[k + 1]));
            }
        }
    }
    out
}

pub fn write_scan_files(dir: &Path, s: &ScanSummary, meta: &Value) -> Result<(), Failure> {
    write_with_sidecar(&dir.join("summary.json"), &pretty_json(&s.to_json()), meta)?;
    write_with_sidecar(&dir.join("histograms.csv"), &histogram_csv(s), meta)?;
    Ok(())
}

fn scan_text(format: Format, s: &ScanSummary) -> String {
    match format {
        Format::Json => pretty_json(&s.to_json()),
        Format::Csv => {
            let mut t = String::from(
                "degree,polynomials,positive_roots,positive_roots_with_multiplicity,negative_roots,positive_step_roots,negative_step_roots,exact_fallbacks\n",
            );
            for d in &s.per_degree {
                let _ = writeln!(
                    t,
                    "{},{},{},{},{},{},{},{}",
                    d.degree,
                    d.polynomials,
                    d.positive_roots,
                    d.positive_roots_with_multiplicity,
                    d.negative_roots,
                    d.positive_step_roots,
                    d.negative_step_roots,
                    d.exact_fallbacks
                );
            }
            t
        }
        Format::Pretty => {
            let tot = s.totals();
            let mut t = format!("degree <= {}, constant coefficient +1\n", s.max_degree);
            let _ = writeln!(t, "  polynomials                     {}", tot.polynomials);
            let _ = writeln!(t, "  positive roots (multiplicity)   {}", s.total_roots);
            let _ = writeln!(t, "  real roots (distinct)           {}", s.total_real_roots);
            let _ = writeln!(t, "  step roots                      {}", s.total_step_roots);
            let _ = writeln!(t, "    positive                      {}", tot.positive_step_roots);
            let _ = writeln!(t, "    negative                      {}", tot.negative_step_roots);
            let _ = writeln!(t, "  exact fallbacks                 {}", tot.exact_fallbacks);
            t
        }
    }
}
