//! JSON encodings for the exact types.
//!
//! A rational is written as the string `"n/d"` in canonical form; readers
//! also accept the two-integer array `[n, d]`. Integers of any size are
//! written as JSON numbers (the `arbitrary_precision` feature of
//! `serde_json` keeps every digit).

use num_bigint::BigInt;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use super::{parse_rational, rat_normalize, rational_to_string, Mat3Q, Rational, SqrtRational, Vec3Q};

/// Serializes a `BigInt` as a bare JSON number.
pub fn serialize_bigint<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    let num: serde_json::Number = n.to_string().parse().map_err(serde::ser::Error::custom)?;
    num.serialize(s)
}

pub fn deserialize_bigint<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    let num = serde_json::Number::deserialize(d)?;
    num.to_string()
        .parse()
        .map_err(|_| de::Error::custom(format!("expected an integer, got {num}")))
}

/// Wrapper that gives `BigInt` the bare-number encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_bigint(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        deserialize_bigint(d).map(JsonInt)
    }
}

/// Serializes a slice of `BigInt`s as a JSON array of numbers.
pub fn serialize_int_array<S: Serializer>(values: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(values.len()))?;
    for v in values {
        seq.serialize_element(&JsonInt(v.clone()))?;
    }
    seq.end()
}

pub fn deserialize_int_vec<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
    let v: Vec<JsonInt> = Vec::deserialize(d)?;
    Ok(v.into_iter().map(|j| j.0).collect())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RationalRepr {
    Text(String),
    Pair(JsonInt, JsonInt),
    Int(JsonInt),
}

fn rational_from_repr<E: de::Error>(r: RationalRepr) -> Result<Rational, E> {
    match r {
        RationalRepr::Text(s) => parse_rational(&s).map_err(E::custom),
        RationalRepr::Pair(n, d) => rat_normalize(n.0, d.0).map_err(E::custom),
        RationalRepr::Int(n) => Ok(Rational::from_integer(n.0)),
    }
}

/// `#[serde(with = "rational")]` for `Rational` fields.
pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational_to_string(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        rational_from_repr(RationalRepr::deserialize(d)?)
    }
}

/// `[n, d]` encoding, for callers that want integers instead of strings.
pub fn rational_pair(q: &Rational) -> serde_json::Value {
    serde_json::json!([JsonInt(q.numer().clone()), JsonInt(q.denom().clone())])
}

/// A `Rational` with the string encoding, for use inside generic containers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JsonRational(#[serde(with = "rational")] pub Rational);

impl Serialize for Vec3Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(3))?;
        for c in [&self.x, &self.y, &self.z] {
            seq.serialize_element(&rational_to_string(c))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Vec3Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [x, y, z]: [JsonRational; 3] = Deserialize::deserialize(d)?;
        Ok(Vec3Q::new(x.0, y.0, z.0))
    }
}

impl Serialize for Mat3Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(3))?;
        for i in 0..3 {
            seq.serialize_element(&self.row(i))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Mat3Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [r0, r1, r2]: [Vec3Q; 3] = Deserialize::deserialize(d)?;
        Ok(Mat3Q::from_rows([r0.to_array(), r1.to_array(), r2.to_array()]))
    }
}

impl Serialize for SqrtRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let q = self.radicand();
        let mut map = s.serialize_map(Some(1))?;
        map.serialize_entry("sqrt", &[JsonInt(q.numer().clone()), JsonInt(q.denom().clone())])?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for SqrtRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            sqrt: RationalRepr,
        }
        let q = rational_from_repr(Repr::deserialize(d)?.sqrt)?;
        SqrtRational::new(q).map_err(de::Error::custom)
    }
}
