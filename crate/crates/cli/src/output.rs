//! Rendering and file output with provenance sidecars.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use takagi_core::scalar::{decimal, Rounding, Scalar, DECIMAL_DIGITS};
use takagi_core::step::{ExtremaReport, Location};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

pub const GIT_DESCRIBE: &str = env!("TAKAGI_GIT_DESCRIBE");

pub fn provenance(command: &str, config: Value) -> Value {
    json!({
        "command": command,
        "config": config,
        "version": env!("CARGO_PKG_VERSION"),
        "git_describe": GIT_DESCRIBE,
    })
}

/// Writes `contents` to `path` and the provenance record to `<path>.meta.json`.
pub fn write_with_sidecar(path: &Path, contents: &str, meta: &Value) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    fs::write(path, contents)?;
    let mut side = PathBuf::from(path);
    let name = format!("{}.meta.json", path.file_name().and_then(|n| n.to_str()).unwrap_or("out"));
    side.set_file_name(name);
    let mut meta = meta.clone();
    meta["file"] = Value::from(path.file_name().and_then(|n| n.to_str()).unwrap_or_default());
    fs::write(side, serde_json::to_string_pretty(&meta)? + "\n")
}

pub fn location_decimal(l: &Location) -> String {
    match l {
        Location::Exact(q) => decimal::to_decimal(q, DECIMAL_DIGITS, Rounding::Nearest),
        Location::Approx { lo, hi } => format!(
            "[{}, {}]",
            decimal::to_decimal(lo, DECIMAL_DIGITS, Rounding::Floor),
            decimal::to_decimal(hi, DECIMAL_DIGITS, Rounding::Ceil)
        ),
    }
}

fn location_exact(l: &Location) -> String {
    match l {
        Location::Exact(q) => decimal::to_fraction(q),
        Location::Approx { .. } => String::new(),
    }
}

pub fn scalar_decimal(s: &Scalar) -> String {
    if s.is_exact() {
        s.to_decimal(DECIMAL_DIGITS)
    } else {
        let (lo, hi) = s.decimal_bounds(DECIMAL_DIGITS);
        format!("[{lo}, {hi}]")
    }
}

pub fn report_json(target: &str, r: &ExtremaReport, precision_bits: u32) -> Value {
    let mut v = r.to_json();
    let e = r.value.enclosure(precision_bits);
    v["target"] = Value::from(target);
    v["value_enclosure"] = json!({
        "lo": decimal::to_decimal(&e.lo, DECIMAL_DIGITS, Rounding::Floor),
        "hi": decimal::to_decimal(&e.hi, DECIMAL_DIGITS, Rounding::Ceil),
    });
    v["dimension"] = r.cardinality.dimension().map(|d| Value::from(decimal::to_fraction(&d))).unwrap_or(Value::Null);
    v
}

pub fn report_csv(target: &str, r: &ExtremaReport) -> String {
    let mut out = String::from("target,kind,which,exact,decimal,value,cardinality,dim\n");
    let dim = r.cardinality.dimension().map(|d| decimal::to_fraction(&d)).unwrap_or_default();
    let value = scalar_decimal(&r.value);
    let mut row = |which: &str, exact: String, dec: String| {
        out.push_str(&format!(
            "{target},{},{which},{exact},\"{dec}\",\"{value}\",{},{dim}\n",
            r.kind.as_str(),
            r.cardinality.label()
        ));
    };
    match &r.locations {
        Some(locs) => {
            for q in locs {
                row("location", decimal::to_fraction(q), decimal::to_decimal(q, DECIMAL_DIGITS, Rounding::Nearest));
            }
        }
        None => {
            row("smallest", location_exact(&r.smallest.location), location_decimal(&r.smallest.location));
            row("largest", location_exact(&r.largest.location), location_decimal(&r.largest.location));
        }
    }
    out
}

pub fn report_pretty(target: &str, r: &ExtremaReport) -> String {
    let mut s = format!("{} of {target}\n", if r.kind.as_str() == "max" { "maximum" } else { "minimum" });
    s += &format!("  value        {}\n", scalar_decimal(&r.value));
    if r.value.is_exact() {
        s += &format!("  exact        {}\n", r.value);
    }
    match &r.locations {
        Some(locs) => {
            s += "  locations\n";
            for q in locs {
                s += &format!(
                    "    {:<12} {}\n",
                    decimal::to_fraction(q),
                    decimal::to_decimal(q, DECIMAL_DIGITS, Rounding::Nearest)
                );
            }
        }
        None => {
            s += &format!("  smallest     {}\n", location_decimal(&r.smallest.location));
            s += &format!("  largest      {}\n", location_decimal(&r.largest.location));
        }
    }
    s += &format!("  cardinality  {}\n", r.cardinality.label());
    match r.cardinality.dimension() {
        Some(d) => s += &format!("  dimension    {}\n", decimal::to_fraction(&d)),
        None => s += "  dimension    unknown\n",
    }
    if let Some(c) = &r.evidence.certificate {
        s += &format!("  certificate  {}\n", c.describe());
    }
    s
}
