//! Scalar abstraction and the canonical text form of rationals.
//!
//! Linear algebra and polynomial arithmetic are written against [`Field`], so
//! they run over `BigRational`, `Ratio<i64>` or `f64` alike. Everything that
//! issues a verdict (root location, membership, torsion) is instantiated at
//! [`Rational`] only.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored in lowest terms.
pub type Rational = BigRational;

/// Scalars the matrix and polynomial code is generic over.
pub trait Field: Num + Clone + Debug + PartialEq + std::ops::Neg<Output = Self> {}

impl<T> Field for T where T: Num + Clone + Debug + PartialEq + std::ops::Neg<Output = T> {}

/// Scalars that admit a conversion from small integers.
pub trait FromInt: Field {
    fn from_i64(n: i64) -> Self;
}

impl FromInt for Rational {
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
}

impl FromInt for num_rational::Ratio<i64> {
    fn from_i64(n: i64) -> Self {
        num_rational::Ratio::from_integer(n)
    }
}

impl FromInt for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Canonical text: `p/q` with `q > 1`, or just `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_int_token(s: &str, whole: &str) -> Result<BigInt> {
    let err = |reason: &str| Error::Parse {
        token: whole.to_string(),
        reason: reason.to_string(),
    };
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err("expected an integer or p/q"));
    }
    if digits.len() > 1 && digits.starts_with('0') {
        return Err(err("leading zeros are not canonical"));
    }
    if s.starts_with('-') && digits == "0" {
        return Err(err("negative zero is not canonical"));
    }
    BigInt::parse_bytes(s.as_bytes(), 10).ok_or_else(|| err("expected an integer"))
}

/// Parses the canonical text form. Non-canonical spellings (`2/4`, `3/1`,
/// `1/-2`, `+1`, `007`) are rejected rather than normalized.
pub fn parse_rational(token: &str) -> Result<Rational> {
    let err = |reason: &str| Error::Parse {
        token: token.to_string(),
        reason: reason.to_string(),
    };
    match token.split_once('/') {
        None => Ok(Rational::from_integer(parse_int_token(token, token)?)),
        Some((p, q)) => {
            let p = parse_int_token(p, token)?;
            if q.starts_with('-') {
                return Err(err("denominator must be positive"));
            }
            let q = parse_int_token(q, token)?;
            if q.is_zero() {
                return Err(err("denominator must be positive"));
            }
            if q.is_one() {
                return Err(err("denominator 1 must be omitted"));
            }
            if !p.gcd(&q).is_one() {
                return Err(err("fraction is not in lowest terms"));
            }
            Ok(Rational::new_raw(p, q))
        }
    }
}

/// Absolute value as an owned rational.
pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

pub mod serde_rational {
    //! `#[serde(with = ...)]` helpers for canonical rational text.
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Text(String),
        Int(i64),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Text(t) => parse_rational(&t).map_err(de::Error::custom),
            Raw::Int(n) => Ok(int(n)),
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&format_rational(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Rational>, D::Error> {
            let raw: Vec<Raw> = Vec::deserialize(d)?;
            raw.into_iter()
                .map(|r| match r {
                    Raw::Text(t) => parse_rational(&t).map_err(de::Error::custom),
                    Raw::Int(n) => Ok(int(n)),
                })
                .collect()
        }
    }
}
