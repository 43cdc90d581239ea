//! Serde helpers for exact rationals: `[num, den]`, each an integer or a
//! decimal string when it does not fit in 64 bits.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

fn to_repr(n: &BigInt) -> IntRepr {
    match n.to_i64() {
        Some(v) => IntRepr::Small(v),
        None => IntRepr::Big(n.to_string()),
    }
}

fn from_repr<E: serde::de::Error>(r: IntRepr) -> Result<BigInt, E> {
    match r {
        IntRepr::Small(v) => Ok(BigInt::from(v)),
        IntRepr::Big(s) => s.parse().map_err(|_| E::custom(format!("invalid integer `{s}`"))),
    }
}

pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    (to_repr(q.numer()), to_repr(q.denom())).serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
    let (n, m): (IntRepr, IntRepr) = Deserialize::deserialize(d)?;
    let n = from_repr(n)?;
    let m = from_repr(m)?;
    if m.is_zero() {
        return Err(D::Error::custom("zero denominator"));
    }
    Ok(BigRational::new(n, m))
}

/// Same encoding for vectors of rationals.
pub mod vec {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct W(#[serde(with = "super")] BigRational);

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        let w: Vec<W> = v.iter().cloned().map(W).collect();
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let w: Vec<W> = Deserialize::deserialize(d)?;
        Ok(w.into_iter().map(|x| x.0).collect())
    }
}

/// Grid of rationals (rows of columns).
pub mod grid {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct W(#[serde(with = "super")] BigRational);

    pub fn serialize<S: Serializer>(v: &[Vec<BigRational>], s: S) -> Result<S::Ok, S::Error> {
        let w: Vec<Vec<W>> = v.iter().map(|r| r.iter().cloned().map(W).collect()).collect();
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigRational>>, D::Error> {
        let w: Vec<Vec<W>> = Deserialize::deserialize(d)?;
        Ok(w.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect())
    }
}

/// Parse "p/q", "p" or "-p/q" into a rational; decimals are rejected.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| format!("`{s}` is not a rational of the form p/q"))?;
    let d: BigInt = d.parse().map_err(|_| format!("`{s}` is not a rational of the form p/q"))?;
    if d.is_zero() {
        return Err(format!("`{s}` has zero denominator"));
    }
    Ok(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct T(#[serde(with = "super")] BigRational);

    #[test]
    fn round_trip_small_and_big() {
        let a = T(BigRational::new(BigInt::from(-12), BigInt::from(7)));
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, "[-12,7]");
        assert_eq!(serde_json::from_str::<T>(&s).unwrap(), a);
        let big = T(BigRational::from_integer(BigInt::from(10).pow(30)));
        let s = serde_json::to_string(&big).unwrap();
        assert_eq!(serde_json::from_str::<T>(&s).unwrap(), big);
        assert!(serde_json::from_str::<T>("[1,0]").is_err());
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), BigRational::new(3.into(), 4.into()));
        assert_eq!(parse_rational("-2").unwrap(), BigRational::from_integer((-2).into()));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
    }
}
