//! Numeric input parsing: decimals and exact fractions such as `1/3`.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest integer every value up to which is exactly representable.
const EXACT_INT: i64 = 1 << 53;

/// Parses `"0.25"`, `"-1"`, `"1e-9"` or `"a/b"`.
///
/// A fraction of two integers below 2^53 in magnitude is converted with a
/// single division, so `"1/3"` yields the double nearest to one third.
pub fn parse_scalar(text: &str) -> Result<f64, String> {
    let text = text.trim();
    let value = match text.split_once('/') {
        Some((num, den)) => {
            let (num, den) = (num.trim(), den.trim());
            match (num.parse::<i64>(), den.parse::<i64>()) {
                (Ok(n), Ok(d)) if n.abs() <= EXACT_INT && d.abs() <= EXACT_INT => {
                    if d == 0 {
                        return Err(format!("{text:?}: zero denominator"));
                    }
                    n as f64 / d as f64
                }
                _ => {
                    let n = parse_decimal(num)?;
                    let d = parse_decimal(den)?;
                    if d == 0.0 {
                        return Err(format!("{text:?}: zero denominator"));
                    }
                    n / d
                }
            }
        }
        None => parse_decimal(text)?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("{text:?} is not a finite number"))
    }
}

fn parse_decimal(text: &str) -> Result<f64, String> {
    text.parse::<f64>()
        .map_err(|_| format!("{text:?} is not a number"))
}

/// Parses `n` comma-separated scalars.
pub fn parse_list<const N: usize>(text: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != N {
        return Err(format!(
            "{text:?}: expected {N} comma-separated values, got {}",
            parts.len()
        ));
    }
    let mut out = [0.0; N];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = parse_scalar(part)?;
    }
    Ok(out)
}

/// Parses `start:end:step`.
pub fn parse_range(text: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("{text:?}: expected start:end:step"));
    }
    Ok([
        parse_scalar(parts[0])?,
        parse_scalar(parts[1])?,
        parse_scalar(parts[2])?,
    ])
}

/// A config-file number: either a JSON number or a string accepted by
/// [`parse_scalar`]. Always written back as a number.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scalar(pub f64);

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ScalarVisitor;

        impl Visitor<'_> for ScalarVisitor {
            type Value = Scalar;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or a fraction string such as \"1/3\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Scalar, E> {
                Ok(Scalar(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Scalar, E> {
                Ok(Scalar(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Scalar, E> {
                Ok(Scalar(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Scalar, E> {
                parse_scalar(v).map(Scalar).map_err(E::custom)
            }
        }

        deserializer.deserialize_any(ScalarVisitor)
    }
}

pub(crate) fn scalars<const N: usize>(values: [f64; N]) -> [Scalar; N] {
    values.map(Scalar)
}

pub(crate) fn values<const N: usize>(scalars: [Scalar; N]) -> [f64; N] {
    scalars.map(|s| s.0)
}
