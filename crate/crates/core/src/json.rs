//! Canonical JSON helpers.
//!
//! Integers that fit in 64 bits are written as JSON numbers, larger ones as
//! decimal strings; both forms are accepted on input. Canonical output has
//! sorted object keys and no insignificant whitespace.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A non-negative integer of any size with the number-or-string encoding.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigNum(pub BigUint);

impl Serialize for BigNum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_u64() {
            Some(x) => s.serialize_u64(x),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for BigNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = BigNum;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a non-negative integer or a decimal string")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigNum, E> {
                Ok(BigNum(BigUint::from(v)))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigNum, E> {
                u64::try_from(v)
                    .map(|x| BigNum(BigUint::from(x)))
                    .map_err(|_| E::custom(format!("negative integer {v}")))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<BigNum, E> {
                if v.is_empty() || !v.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(E::custom(format!("not a decimal integer: {v:?}")));
                }
                BigUint::from_str(v).map(BigNum).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

/// Serialize any `BigUint` through [`BigNum`].
pub mod big {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        BigNum(x.clone()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        BigNum::deserialize(d).map(|b| b.0)
    }
}

/// Always a decimal string, for values that are expected to be large.
pub mod decimal_vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Vec::<BigNum>::deserialize(d).map(|v| v.into_iter().map(|b| b.0).collect())
    }
}

/// Compact JSON with sorted keys.
pub fn to_canonical_string<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let v = serde_json::to_value(value)?;
    serde_json::to_string(&v)
}
