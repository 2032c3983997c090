//! Coefficient-sequence descriptors from the command line.

use std::fs;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use takagi_core::scalar::{decimal, Scalar};
use takagi_core::takagi::{CoefficientSequence, CustomSequence, Sign};

/// What the user asked to analyze.
#[derive(Clone)]
pub enum Target {
    Alpha(Scalar),
    Sequence(CoefficientSequence),
}

impl Target {
    pub fn sequence(&self) -> CoefficientSequence {
        match self {
            Target::Alpha(a) => CoefficientSequence::geometric(a.clone()),
            Target::Sequence(c) => c.clone(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Target::Alpha(a) => format!("alpha={a}"),
            Target::Sequence(c) => format!("{c:?}"),
        }
    }
}

pub fn parse_alpha(s: &str) -> Result<Scalar, String> {
    Scalar::parse(s).map_err(|e| format!("cannot parse alpha {s:?}: {e}"))
}

fn rational(v: &Value) -> Result<BigRational, String> {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(format!("expected a rational, got {v}")),
    };
    decimal::parse_rational(&s).ok_or_else(|| format!("bad rational {s:?}"))
}

fn rational_list(s: &str) -> Result<Vec<BigRational>, String> {
    s.split(',')
        .map(|x| decimal::parse_rational(x).ok_or_else(|| format!("bad rational {x:?}")))
        .collect()
}

/// `power-squared`, `finite:<c0,c1,...>`, or `file:<path>`.
pub fn parse_seq(s: &str) -> Result<CoefficientSequence, String> {
    if s == "power-squared" {
        return Ok(CoefficientSequence::PowerSquared);
    }
    if let Some(list) = s.strip_prefix("finite:") {
        return Ok(finite(rational_list(list)?));
    }
    if let Some(path) = s.strip_prefix("file:") {
        let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))?;
        return from_json(&v);
    }
    Err(format!("unknown sequence descriptor {s:?}"))
}

fn finite(c: Vec<BigRational>) -> CoefficientSequence {
    CoefficientSequence::FiniteSupport(c.into_iter().map(Scalar::Rational).collect())
}

/// A bare list of rationals, or `{"coefficients": [...], "tail": ...}` where
/// `tail` is `"zero"` or `{"ratio": r}` continuing `c_m = c_{m-1} r`.
pub fn from_json(v: &Value) -> Result<CoefficientSequence, String> {
    let (list, tail) = match v {
        Value::Array(a) => (a.clone(), None),
        Value::Object(o) => {
            let a = o.get("coefficients").and_then(Value::as_array).ok_or("missing \"coefficients\" list")?;
            (a.clone(), o.get("tail").cloned())
        }
        _ => return Err("sequence file must hold a list or an object".into()),
    };
    let c: Vec<BigRational> = list.iter().map(rational).collect::<Result<_, _>>()?;
    if c.is_empty() {
        return Err("empty coefficient list".into());
    }
    match tail {
        None => Ok(finite(c)),
        Some(Value::String(s)) if s == "zero" => Ok(finite(c)),
        Some(Value::Object(o)) => {
            let r = rational(o.get("ratio").ok_or("tail object needs \"ratio\"")?)?;
            geometric_tail(c, r)
        }
        Some(t) => Err(format!("unknown tail rule {t}")),
    }
}

/// Explicit head followed by a geometric continuation with ratio `r`, `|r| < 1/2`.
fn geometric_tail(head: Vec<BigRational>, r: BigRational) -> Result<CoefficientSequence, String> {
    let half = BigRational::new(1.into(), 2.into());
    if r.abs() >= half {
        return Err("tail ratio must satisfy |r| < 1/2".into());
    }
    let k = head.len();
    let last = head[k - 1].clone();
    let coeff = {
        let head = head.clone();
        let (last, r) = (last.clone(), r.clone());
        move |m: usize| -> BigRational {
            if m < head.len() {
                head[m].clone()
            } else {
                &last * num_traits::pow(r.clone(), m + 1 - head.len())
            }
        }
    };
    let coeff = Arc::new(coeff);
    let ra = r.abs();
    let tail = {
        let coeff = coeff.clone();
        let (ra, k) = (ra.clone(), k);
        move |n: usize, w: BigRational| -> BigRational {
            // sum_{m > n} w^m |c_m|, explicit up to the head, then geometric
            let wr = &w * &ra;
            let mut s = BigRational::zero();
            let start = n + 1;
            for m in start..k.max(start) {
                s += num_traits::pow(w.clone(), m) * coeff(m).abs();
            }
            let first = k.max(start);
            // terms m >= first: w^m |c_m| = w^first |c_first| (w r)^(m - first)
            let lead = num_traits::pow(w.clone(), first) * coeff(first).abs();
            s + lead / (BigRational::one() - wr)
        }
    };
    let tail = Arc::new(tail);
    let eventual_sign = if r.is_positive() && !last.is_zero() {
        Some((k - 1, if last.is_positive() { Sign::Plus } else { Sign::Minus }))
    } else {
        None
    };
    let name = format!(
        "head[{}] ratio {}",
        head.iter().map(decimal::to_fraction).collect::<Vec<_>>().join(", "),
        decimal::to_fraction(&r)
    );
    let g = coeff.clone();
    let (t1, t2) = (tail.clone(), tail);
    let two = BigRational::from_integer(2.into());
    Ok(CoefficientSequence::Custom(CustomSequence {
        name,
        generator: Arc::new(move |m| Scalar::Rational(g(m))),
        tail_bound: Arc::new(move |n| t1(n, BigRational::one())),
        weighted_tail: Some(Arc::new(move |n| t2(n, two.clone()))),
        eventual_sign,
    }))
}
