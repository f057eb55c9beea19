//! Exact rational numbers for the cost-benefit tables.

use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::DecisionError;

pub type Rational = Ratio<i128>;

/// Parses `"0.25"`, `"-0.5"`, `"3"`, or `"1/3"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational, DecisionError> {
    let t = text.trim();
    let bad = || DecisionError::Parse(text.to_string());
    if let Some((num, den)) = t.split_once('/') {
        let n = parse_rational(num)?;
        let d = parse_rational(den)?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(n / d);
    }
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    if body.is_empty() {
        return Err(bad());
    }
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
        || (int_part.is_empty() && frac_part.is_empty())
        || frac_part.len() > 30
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: i128 = digits.parse().map_err(|_| bad())?;
    let denom = 10i128.checked_pow(frac_part.len() as u32).ok_or_else(bad)?;
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// The exact decimal a float was written as (its shortest round-trip form).
pub fn rational_from_f64(x: f64) -> Result<Rational, DecisionError> {
    if !x.is_finite() {
        return Err(DecisionError::Parse(x.to_string()));
    }
    parse_rational(&format!("{x}"))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Rounds half away from zero to `decimals` places.
pub fn round_to(r: &Rational, decimals: u32) -> Rational {
    let scale = Rational::from_integer(10i128.pow(decimals));
    let scaled = r * scale;
    let rounded = if scaled.is_negative() {
        -((-scaled) + Rational::new(1, 2)).floor()
    } else {
        (scaled + Rational::new(1, 2)).floor()
    };
    rounded / scale
}

/// Fixed-point rendering of `r` with `decimals` places.
pub fn format_fixed(r: &Rational, decimals: u32) -> String {
    let rounded = round_to(r, decimals) * Rational::from_integer(10i128.pow(decimals));
    let n = rounded.to_integer();
    let sign = if n < 0 { "-" } else { "" };
    let n = n.abs();
    if decimals == 0 {
        return format!("{sign}{n}");
    }
    let p = 10i128.pow(decimals);
    format!("{sign}{}.{:0width$}", n / p, n % p, width = decimals as usize)
}

/// Serde wrapper: reads JSON numbers or `"a/b"` strings exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exact(pub Rational);

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

fn is_decimal_denominator(mut d: i128) -> bool {
    while d % 2 == 0 {
        d /= 2;
    }
    while d % 5 == 0 {
        d /= 5;
    }
    d == 1
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let value = to_f64(&self.0);
        let lossless = is_decimal_denominator(*self.0.denom())
            && rational_from_f64(value).map(|r| r == self.0).unwrap_or(false);
        if lossless {
            s.serialize_f64(value)
        } else {
            s.serialize_str(&self.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct ExactVisitor;
        impl Visitor<'_> for ExactVisitor {
            type Value = Exact;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a fraction string such as \"1/3\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Exact, E> {
                rational_from_f64(v).map(Exact).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Exact, E> {
                Ok(Exact(Rational::from_integer(v as i128)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Exact, E> {
                Ok(Exact(Rational::from_integer(v as i128)))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Exact, E> {
                parse_rational(v).map(Exact).map_err(E::custom)
            }
        }
        d.deserialize_any(ExactVisitor)
    }
}
