//! Exact scalar types and the JSON encoding used for them.
//!
//! Integers are written as JSON numbers when they fit in an `i64` and as
//! decimal strings otherwise. Rationals are always strings, `"p"` or `"p/q"`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

pub type Int = BigInt;
pub type Rat = BigRational;
pub type IntVec = Vec<Int>;
pub type RatVec = Vec<Rat>;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_from_int(v: &Int) -> Rat {
    Rat::from_integer(v.clone())
}

pub fn int_vec(v: &[i64]) -> IntVec {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn rat_vec(v: &[i64]) -> RatVec {
    v.iter().map(|&x| Rat::from_integer(Int::from(x))).collect()
}

pub fn to_rat_vec(v: &[Int]) -> RatVec {
    v.iter().map(rat_from_int).collect()
}

/// Returns the vector as integers if every entry is integral.
pub fn to_int_vec(v: &[Rat]) -> Option<IntVec> {
    v.iter()
        .map(|x| if x.is_integer() { Some(x.to_integer()) } else { None })
        .collect()
}

/// Greatest common divisor of all entries (zero for the zero vector).
pub fn content(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// Divides out the content. The zero vector is returned unchanged.
pub fn primitive(v: &[Int]) -> IntVec {
    let g = content(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Primitive vector with the first nonzero entry positive.
pub fn primitive_unsigned(v: &[Int]) -> IntVec {
    let mut p = primitive(v);
    if let Some(first) = p.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in p.iter_mut() {
                *x = -x.clone();
            }
        }
    }
    p
}

/// Positive rescaling of a rational vector to a primitive integer vector.
pub fn clear_denominators(v: &[Rat]) -> IntVec {
    let l = v.iter().fold(Int::one(), |l, x| l.lcm(x.denom()));
    let scaled: IntVec = v.iter().map(|x| (x * rat_from_int(&l)).to_integer()).collect();
    primitive(&scaled)
}

pub fn dot<T>(a: &[T], b: &[T]) -> T
where
    T: Clone + num_traits::Num,
{
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn is_zero_vec<T: Zero>(v: &[T]) -> bool {
    v.iter().all(|x| x.is_zero())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{0}` as an exact number")]
pub struct ParseNumberError(pub String);

pub fn parse_int(s: &str) -> Result<Int, ParseNumberError> {
    Int::from_str(s.trim()).map_err(|_| ParseNumberError(s.to_string()))
}

pub fn parse_rat(s: &str) -> Result<Rat, ParseNumberError> {
    let s = s.trim();
    let err = || ParseNumberError(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n = Int::from_str(n.trim()).map_err(|_| err())?;
            let d = Int::from_str(d.trim()).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(Int::from_str(s).map_err(|_| err())?)),
    }
}

pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde adapters. Use with `#[serde(with = "crate::num::json_int")]` and friends.
pub mod json_int {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Int, s: S) -> Result<S::Ok, S::Error> {
        JsonInt(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Int, D::Error> {
        OwnedJsonInt::deserialize(d).map(|x| x.0)
    }
}

pub mod json_int_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Int], s: S) -> Result<S::Ok, S::Error> {
        let w: Vec<JsonInt> = v.iter().map(JsonInt).collect();
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<IntVec, D::Error> {
        let w: Vec<OwnedJsonInt> = Vec::deserialize(d)?;
        Ok(w.into_iter().map(|x| x.0).collect())
    }
}

pub mod json_int_rows {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[IntVec], s: S) -> Result<S::Ok, S::Error> {
        let w: Vec<Vec<JsonInt>> = v.iter().map(|r| r.iter().map(JsonInt).collect()).collect();
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<IntVec>, D::Error> {
        let w: Vec<Vec<OwnedJsonInt>> = Vec::deserialize(d)?;
        Ok(w.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect())
    }
}

pub mod json_int_rows_nested {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<IntVec>], s: S) -> Result<S::Ok, S::Error> {
        let w: Vec<Vec<Vec<JsonInt>>> =
            v.iter().map(|rows| rows.iter().map(|r| r.iter().map(JsonInt).collect()).collect()).collect();
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<IntVec>>, D::Error> {
        let w: Vec<Vec<Vec<OwnedJsonInt>>> = Vec::deserialize(d)?;
        Ok(w.into_iter().map(|rows| rows.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect()).collect())
    }
}

pub mod json_rat {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        OwnedJsonRat::deserialize(d).map(|x| x.0)
    }
}

pub mod json_rat_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        let w: Vec<String> = v.iter().map(format_rat).collect();
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<RatVec, D::Error> {
        let w: Vec<OwnedJsonRat> = Vec::deserialize(d)?;
        Ok(w.into_iter().map(|x| x.0).collect())
    }
}

pub mod json_opt_rat_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<RatVec>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_some(&v.iter().map(format_rat).collect::<Vec<_>>()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<RatVec>, D::Error> {
        let w: Option<Vec<OwnedJsonRat>> = Option::deserialize(d)?;
        Ok(w.map(|v| v.into_iter().map(|x| x.0).collect()))
    }
}

/// Borrowed integer with the number-or-string encoding.
pub struct JsonInt<'a>(pub &'a Int);

impl Serialize for JsonInt<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

pub struct OwnedJsonInt(pub Int);

impl<'de> Deserialize<'de> for OwnedJsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = OwnedJsonInt;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(OwnedJsonInt(Int::from(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(OwnedJsonInt(Int::from(v)))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                parse_int(v).map(OwnedJsonInt).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

pub struct OwnedJsonRat(pub Rat);

impl<'de> Deserialize<'de> for OwnedJsonRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = OwnedJsonRat;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a \"p/q\" string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(OwnedJsonRat(Rat::from_integer(Int::from(v))))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(OwnedJsonRat(Rat::from_integer(Int::from(v))))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                parse_rat(v).map(OwnedJsonRat).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings_round_trip() {
        for s in ["0", "-3", "7/2", "-1/3", "123456789012345678901234567891/2"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        assert_eq!(parse_rat("4/2").unwrap(), rat(2, 1));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn primitive_normalization() {
        assert_eq!(primitive(&int_vec(&[4, -6, 0])), int_vec(&[2, -3, 0]));
        assert_eq!(primitive_unsigned(&int_vec(&[0, -4, 6])), int_vec(&[0, 2, -3]));
        assert_eq!(clear_denominators(&[rat(1, 2), rat(-1, 3)]), int_vec(&[3, -2]));
    }

    #[test]
    fn big_integers_serialize_as_strings() {
        #[derive(Serialize, Deserialize)]
        struct W {
            #[serde(with = "json_int")]
            v: Int,
        }
        let big: Int = Int::from(i64::MAX) * Int::from(10);
        let s = serde_json::to_string(&W { v: big.clone() }).unwrap();
        assert_eq!(s, format!("{{\"v\":\"{big}\"}}"));
        let back: W = serde_json::from_str(&s).unwrap();
        assert_eq!(back.v, big);
        let small: W = serde_json::from_str("{\"v\":-5}").unwrap();
        assert_eq!(small.v, int(-5));
    }
}
