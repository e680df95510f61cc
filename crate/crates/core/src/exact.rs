//! Serde adapters for wide integers.
//!
//! Values inside the IEEE-754 safe range (|v| ≤ 2^53 − 1) are written as JSON
//! numbers; anything larger is written as a decimal string so no consumer
//! silently rounds a coordinate. Both forms are accepted on input.

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

pub const SAFE_MAX: i128 = (1 << 53) - 1;

/// An i128 with the number-or-string JSON encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Int(pub i128);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.unsigned_abs() <= SAFE_MAX as u128 {
            s.serialize_i64(self.0 as i64)
        } else {
            s.collect_str(&self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct IntVisitor;

        impl Visitor<'_> for IntVisitor {
            type Value = Int;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Int, E> {
                Ok(Int(v as i128))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Int, E> {
                Ok(Int(v as i128))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Int, E> {
                v.parse().map(Int).map_err(E::custom)
            }
        }

        d.deserialize_any(IntVisitor)
    }
}

pub fn serialize<S: Serializer>(v: &i128, s: S) -> Result<S::Ok, S::Error> {
    Int(*v).serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<i128, D::Error> {
    Int::deserialize(d).map(|i| i.0)
}

pub mod unsigned {
    use super::*;

    pub fn serialize<S: Serializer>(v: &u128, s: S) -> Result<S::Ok, S::Error> {
        if *v <= SAFE_MAX as u128 {
            s.serialize_u64(*v as u64)
        } else {
            s.collect_str(v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u128, D::Error> {
        let v = Int::deserialize(d)?.0;
        u128::try_from(v).map_err(de::Error::custom)
    }
}

pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<i128>, s: S) -> Result<S::Ok, S::Error> {
        v.map(Int).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<i128>, D::Error> {
        Ok(Option::<Int>::deserialize(d)?.map(|i| i.0))
    }
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[i128], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|&x| Int(x)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<i128>, D::Error> {
        Ok(Vec::<Int>::deserialize(d)?.into_iter().map(|i| i.0).collect())
    }
}

pub mod nested {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<i128>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|row| row.iter().map(|&x| Int(x)).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<i128>>, D::Error> {
        Ok(Vec::<Vec<Int>>::deserialize(d)?
            .into_iter()
            .map(|row| row.into_iter().map(|i| i.0).collect())
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn safe_range_boundary() {
        assert_eq!(serde_json::to_string(&Int(SAFE_MAX)).unwrap(), "9007199254740991");
        assert_eq!(serde_json::to_string(&Int(SAFE_MAX + 1)).unwrap(), "\"9007199254740992\"");
        assert_eq!(serde_json::to_string(&Int(-SAFE_MAX - 1)).unwrap(), "\"-9007199254740992\"");
        for v in [0, -7, SAFE_MAX + 1, i128::MIN, i128::MAX] {
            let json = serde_json::to_string(&Int(v)).unwrap();
            assert_eq!(serde_json::from_str::<Int>(&json).unwrap(), Int(v));
        }
    }
}
