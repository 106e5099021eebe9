//! Exact rationals used for hulls, volumes and lattice membership.

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(v as i128)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| *r.numer() as f64 / *r.denom() as f64)
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

/// Parses `"p"`, `"-p/q"` or `"p.ddd"` (finite decimals are exact).
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not an exact rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = i128::from_str(p.trim()).map_err(|_| bad())?;
        let q = i128::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 18 {
            return Err(bad());
        }
        let neg = whole.starts_with('-');
        let w = if whole.is_empty() || whole == "-" {
            0
        } else {
            i128::from_str(whole).map_err(|_| bad())?.abs()
        };
        let scale = 10i128.pow(frac.len() as u32);
        let f = i128::from_str(frac).map_err(|_| bad())?;
        let mag = Rational::new(w * scale + f, scale);
        return Ok(if neg { -mag } else { mag });
    }
    i128::from_str(s).map(Rational::from_integer).map_err(|_| bad())
}

pub fn format(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde adapter: a rational written as a JSON integer or a string.
/// JSON floats are refused because their rationality cannot be certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(pub Rational);

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            if let Ok(v) = i64::try_from(*self.0.numer()) {
                return s.serialize_i64(v);
            }
        }
        s.serialize_str(&format(&self.0))
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ExactRational;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a string \"p/q\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                Ok(ExactRational(int(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                Ok(ExactRational(Rational::from_integer(v as i128)))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Self::Value, E> {
                Err(E::custom(format!(
                    "floating-point value {v} is not accepted; write it as an exact string \"p/q\""
                )))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                parse(v).map(ExactRational).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse("3/6").unwrap(), Rational::new(1, 2));
        assert_eq!(parse("-2").unwrap(), int(-2));
        assert_eq!(parse("-0.25").unwrap(), Rational::new(-1, 4));
        assert!(parse("1/0").is_err());
        assert!(parse("sqrt(2)").is_err());
    }

    #[test]
    fn json_floats_are_rejected() {
        let ok: ExactRational = serde_json::from_str("\"1/3\"").unwrap();
        assert_eq!(ok.0, Rational::new(1, 3));
        let ok: ExactRational = serde_json::from_str("4").unwrap();
        assert_eq!(ok.0, int(4));
        assert!(serde_json::from_str::<ExactRational>("1.4142135").is_err());
    }
}
