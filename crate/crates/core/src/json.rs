//! JSON encodings for the external file formats.
//!
//! Rationals are strings `"num/den"` (or `"n"` for integers). Curves are
//! `{"f": ["c0", "c1", "c2"]}` for `y^2 = x^3 + c2 x^2 + c1 x + c0`, points
//! are `"O"` or `{"x": .., "y": ..}`, square classes are
//! `{"sign": "+"|"-", "primes": [..]}` and triples are 3-element arrays.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::{SquareClass, SquareClassTriple};
use crate::ellcurve::ECPoint;
use crate::{Curve, Error, Point, RatPoly, Rational, Result};

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

fn rational_from_value(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        _ => Err(Error::Parse(format!("expected a rational, got {v}"))),
    }
}

fn bigint_from_value(v: &Value) -> Result<BigInt> {
    match v {
        Value::String(s) => BigInt::from_str(s.trim()).map_err(|_| Error::Parse(format!("bad integer {s:?}"))),
        Value::Number(n) => BigInt::from_str(&n.to_string()).map_err(|_| Error::Parse(format!("bad integer {n}"))),
        _ => Err(Error::Parse(format!("expected an integer, got {v}"))),
    }
}

/// Integers that fit in 64 bits are plain JSON numbers, larger ones strings.
fn bigint_to_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(n.to_string()),
    }
}

/// `#[serde(with = ..)]` adapter for `BigInt` as a decimal string.
pub mod bigint_str {
    use super::*;

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        let v = Value::deserialize(d)?;
        bigint_from_value(&v).map_err(de::Error::custom)
    }
}

/// `#[serde(with = ..)]` adapter for a rational as `"num/den"`.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let v = Value::deserialize(d)?;
        rational_from_value(&v).map_err(de::Error::custom)
    }
}

/// `#[serde(with = ..)]` adapter for a list of rationals.
pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(qs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(qs.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<Value>::deserialize(d)?;
        v.iter()
            .map(rational_from_value)
            .collect::<Result<_>>()
            .map_err(de::Error::custom)
    }
}

/// `#[serde(with = ..)]` adapter for a polynomial as its coefficient list,
/// constant term first.
pub mod poly_coeffs {
    use super::*;

    pub fn serialize<S: Serializer>(p: &RatPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
        rational_vec::serialize(p.coeffs(), s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<RatPoly, D::Error> {
        rational_vec::deserialize(d).map(RatPoly::new)
    }
}

impl Serialize for SquareClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_json::json!({
            "sign": if self.is_negative() { "-" } else { "+" },
            "primes": self.primes().iter().map(bigint_to_value).collect::<Vec<_>>(),
        })
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SquareClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            sign: String,
            primes: Vec<Value>,
        }
        let raw = Raw::deserialize(d)?;
        let negative = match raw.sign.as_str() {
            "+" => false,
            "-" | "−" => true,
            other => return Err(de::Error::custom(format!("bad sign {other:?}"))),
        };
        let primes = raw
            .primes
            .iter()
            .map(bigint_from_value)
            .collect::<Result<Vec<_>>>()
            .map_err(de::Error::custom)?;
        if primes.iter().any(|p| !crate::arith::is_prime(p)) {
            return Err(de::Error::custom("square class lists a non-prime"));
        }
        Ok(SquareClass::from_parts(negative, primes))
    }
}

impl Serialize for SquareClassTriple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SquareClassTriple {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        <[SquareClass; 3]>::deserialize(d).map(SquareClassTriple)
    }
}

impl Serialize for Curve {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let [c0, c1, c2] = self.coeffs();
        serde_json::json!({ "f": [format_rational(c0), format_rational(c1), format_rational(c2)] }).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Curve {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(with = "rational_vec")]
            f: Vec<Rational>,
        }
        let raw = Raw::deserialize(d)?;
        let [c0, c1, c2]: [Rational; 3] = raw
            .f
            .try_into()
            .map_err(|_| de::Error::custom("curve needs exactly three coefficients c0, c1, c2"))?;
        Curve::new(c0, c1, c2).map_err(de::Error::custom)
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ECPoint::Infinity => s.serialize_str("O"),
            ECPoint::Affine { x, y } => {
                serde_json::json!({ "x": format_rational(x), "y": format_rational(y) }).serialize(s)
            }
        }
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        match &v {
            Value::String(s) if s == "O" => Ok(ECPoint::Infinity),
            Value::Object(m) => {
                let get = |k: &str| {
                    m.get(k)
                        .ok_or_else(|| de::Error::custom(format!("point is missing {k:?}")))
                        .and_then(|v| rational_from_value(v).map_err(de::Error::custom))
                };
                Ok(ECPoint::Affine {
                    x: get("x")?,
                    y: get("y")?,
                })
            }
            _ => Err(de::Error::custom("point must be \"O\" or {\"x\", \"y\"}")),
        }
    }
}

/// Parses any of the JSON types above from a string, mapping errors to
/// [`Error::Parse`].
pub fn from_str<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_string<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}
