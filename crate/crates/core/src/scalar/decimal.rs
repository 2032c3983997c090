//! Decimal rendering and parsing of rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction used when rendering a rational to a fixed number of digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Nearest,
    Floor,
    Ceil,
}

fn pow10(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), k as usize)
}

/// Renders `q` with `sig` significant digits. Plain positional notation is
/// used for moderate exponents, scientific notation otherwise.
pub fn to_decimal(q: &BigRational, sig: u32, mode: Rounding) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let neg = q.is_negative();
    let a = q.abs();
    // e = floor(log10 |q|)
    let mut e = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let ten = BigRational::from_integer(10.into());
    let scaled_by = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(pow10(k as u32))
        } else {
            BigRational::new(BigInt::one(), pow10((-k) as u32))
        }
    };
    let mut m = &a / scaled_by(e);
    while m >= ten {
        m /= &ten;
        e += 1;
    }
    while m < BigRational::one() {
        m *= &ten;
        e -= 1;
    }
    // digits = round(|q| * 10^(sig-1-e)), direction adjusted for sign
    let x = &a * scaled_by(sig as i64 - 1 - e);
    let mode = match (mode, neg) {
        (Rounding::Floor, true) => Rounding::Ceil,
        (Rounding::Ceil, true) => Rounding::Floor,
        (m, _) => m,
    };
    let mut digits = match mode {
        Rounding::Floor => x.floor().to_integer(),
        Rounding::Ceil => x.ceil().to_integer(),
        Rounding::Nearest => {
            let (n, d) = (x.numer(), x.denom());
            (n * BigInt::from(2) + d).div_floor(&(d * BigInt::from(2)))
        }
    };
    if digits == pow10(sig) {
        digits = pow10(sig - 1);
        e += 1;
    }
    let mut s = digits.to_string();
    let body = if (-7..=21).contains(&e) {
        if e < 0 {
            let zeros = "0".repeat((-e - 1) as usize);
            format!("0.{zeros}{s}")
        } else {
            let int_len = e as usize + 1;
            if s.len() <= int_len {
                s.push_str(&"0".repeat(int_len - s.len()));
                s
            } else {
                let (i, f) = s.split_at(int_len);
                format!("{i}.{f}")
            }
        }
    } else {
        let (h, t) = s.split_at(1);
        if t.is_empty() {
            format!("{h}e{e}")
        } else {
            format!("{h}.{t}e{e}")
        }
    };
    let body = trim_fraction(body);
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn trim_fraction(s: String) -> String {
    if let Some((mant, exp)) = s.split_once('e') {
        return format!("{}e{exp}", trim_fraction(mant.to_string()));
    }
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        t.to_string()
    } else {
        s
    }
}

/// Parses an integer, a fraction `p/q`, or a decimal literal with optional exponent.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{ip}{fp}0").parse::<BigInt>().ok()? / 10;
    let e = exp - fp.len() as i64;
    let mut q = if e >= 0 {
        BigRational::from_integer(digits * pow10(e.to_u32()?))
    } else {
        BigRational::new(digits, pow10((-e).to_u32()?))
    };
    if neg {
        q = -q;
    }
    Some(q)
}

/// Renders a rational exactly as `p/q` or `p`.
pub fn to_fraction(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn renders_significant_digits() {
        assert_eq!(to_decimal(&q(11, 24), 6, Rounding::Nearest), "0.458333");
        assert_eq!(to_decimal(&q(-8, 35), 5, Rounding::Nearest), "-0.22857");
        assert_eq!(to_decimal(&q(1, 3), 3, Rounding::Ceil), "0.334");
        assert_eq!(to_decimal(&q(-1, 3), 3, Rounding::Floor), "-0.334");
        assert_eq!(to_decimal(&q(2, 1), 30, Rounding::Nearest), "2");
        assert_eq!(to_decimal(&q(999, 1000), 2, Rounding::Nearest), "1");
        assert_eq!(to_decimal(&q(1, 1000000000), 3, Rounding::Nearest), "1e-9");
    }

    #[test]
    fn parses_common_forms() {
        assert_eq!(parse_rational("3/4"), Some(q(3, 4)));
        assert_eq!(parse_rational("-1.5"), Some(q(-3, 2)));
        assert_eq!(parse_rational("2.5e-1"), Some(q(1, 4)));
        assert_eq!(parse_rational(".5"), Some(q(1, 2)));
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("1/0"), None);
    }
}
