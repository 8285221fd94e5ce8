//! Exact rational helpers and the `"p/q"` string form used in JSON.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact conversion of a finite float.
pub fn from_f64(v: f64) -> Result<Rational> {
    Rational::from_float(v)
        .ok_or_else(|| Error::InvalidExpression(format!("non-finite number {v}")))
}

pub fn format(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p"`, `"p/q"` or a plain decimal such as `"0.25"`.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidExpression(format!("bad rational `{s}`"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::InvalidExpression(format!(
                "zero denominator in `{s}`"
            )));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ip_abs = ip.trim_start_matches(['-', '+']);
        let whole: BigInt = if ip_abs.is_empty() {
            BigInt::zero()
        } else {
            ip_abs.parse().map_err(|_| bad())?
        };
        let frac_part: BigInt = fp.parse().map_err(|_| bad())?;
        let scale = num::pow(BigInt::from(10), fp.len());
        let v = Rational::new(whole * &scale + frac_part, scale);
        return Ok(if neg { -v } else { v });
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format(r))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
    let s = String::deserialize(d)?;
    parse(&s).map_err(serde::de::Error::custom)
}
