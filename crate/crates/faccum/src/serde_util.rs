//! Serde adapters for exact rationals.
//!
//! JSON has no rational type, so rationals serialize as
//! `{"num": "...", "den": "..."}` with decimal-string parts. Deserialization
//! is permissive about the incoming shape: a JSON integer, a string like
//! `"3"`, `"-3/7"`, or `"0.25"`, a bare JSON float, or the num/den object
//! all work. A bare float is read back through its shortest round-trip
//! decimal, which is the literal the user wrote for any plainly spelled
//! input: 0.25 becomes 1/4 and 0.3 becomes 3/10, not the binary expansion
//! of the nearest double.

use crate::exact::Rational;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::de::{Error as DeError, MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

#[derive(Serialize)]
struct RationalOut {
    num: String,
    den: String,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum IntOrStr {
    Int(i64),
    Str(String),
}

fn part_to_bigint(v: IntOrStr) -> Result<BigInt, String> {
    match v {
        IntOrStr::Int(i) => Ok(BigInt::from(i)),
        IntOrStr::Str(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|e| format!("bad integer {s:?}: {e}")),
    }
}

/// Parses `"p"`, `"p/q"`, or a plain decimal like `"-1.25"`.
pub fn rational_from_str(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|e| format!("bad numerator {num:?}: {e}"))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|e| format!("bad denominator {den:?}: {e}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad decimal {s:?}"));
        }
        let digits = format!("{int_part}{frac_part}");
        let n: BigInt = digits
            .parse()
            .map_err(|e| format!("bad decimal {s:?}: {e}"))?;
        let d = BigInt::from(10u32).pow(frac_part.len() as u32);
        return Ok(Rational::new(n, d));
    }
    s.parse::<BigInt>()
        .map(Rational::from)
        .map_err(|e| format!("bad rational {s:?}: {e}"))
}

struct RationalVisitor;

impl<'de> Visitor<'de> for RationalVisitor {
    type Value = Rational;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer, a string like \"-3/7\", a decimal, or {num, den}")
    }

    fn visit_i64<E: DeError>(self, v: i64) -> Result<Rational, E> {
        Ok(Rational::from(BigInt::from(v)))
    }

    fn visit_u64<E: DeError>(self, v: u64) -> Result<Rational, E> {
        Ok(Rational::from(BigInt::from(v)))
    }

    fn visit_f64<E: DeError>(self, v: f64) -> Result<Rational, E> {
        if !v.is_finite() {
            return Err(E::custom("non-finite float cannot be a rational"));
        }
        // The shortest decimal that round-trips is the literal the user
        // wrote, for any plainly spelled input.
        rational_from_str(&v.to_string()).map_err(E::custom)
    }

    fn visit_str<E: DeError>(self, s: &str) -> Result<Rational, E> {
        rational_from_str(s).map_err(E::custom)
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Rational, A::Error> {
        let mut num: Option<IntOrStr> = None;
        let mut den: Option<IntOrStr> = None;
        while let Some(key) = map.next_key::<String>()? {
            match key.as_str() {
                "num" => num = Some(map.next_value()?),
                "den" => den = Some(map.next_value()?),
                other => {
                    return Err(A::Error::custom(format!(
                        "unexpected key {other:?} in rational object"
                    )))
                }
            }
        }
        let num = num.ok_or_else(|| A::Error::custom("rational object is missing \"num\""))?;
        let den = den.ok_or_else(|| A::Error::custom("rational object is missing \"den\""))?;
        let n = part_to_bigint(num).map_err(A::Error::custom)?;
        let d = part_to_bigint(den).map_err(A::Error::custom)?;
        if d.is_zero() {
            return Err(A::Error::custom("zero denominator"));
        }
        Ok(Rational::new(n, d))
    }
}

/// For `#[serde(with = "crate::serde_util::rational")]` on `Rational` fields.
pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, ser: S) -> Result<S::Ok, S::Error> {
        RationalOut {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
        }
        .serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rational, D::Error> {
        de.deserialize_any(RationalVisitor)
    }
}

/// Like [`rational`], for `Vec<Rational>` fields.
pub mod rational_vec {
    use super::*;

    struct Wrapper(Rational);

    impl<'de> Deserialize<'de> for Wrapper {
        fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Wrapper, D::Error> {
            de.deserialize_any(RationalVisitor).map(Wrapper)
        }
    }

    pub fn serialize<S: Serializer>(qs: &[Rational], ser: S) -> Result<S::Ok, S::Error> {
        let out: Vec<RationalOut> = qs
            .iter()
            .map(|q| RationalOut {
                num: q.numer().to_string(),
                den: q.denom().to_string(),
            })
            .collect();
        out.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<Wrapper>::deserialize(de)?;
        Ok(raw.into_iter().map(|w| w.0).collect())
    }
}
