//! Exact rationals and their `"p/q"` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in lowest terms.
pub type Rat = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

pub fn in_unit(x: &Rat) -> bool {
    !x.is_negative() && *x <= Rat::one()
}

/// `2^-k` as an exact rational.
pub fn dyadic(k: u32) -> Rat {
    Rat::new(BigInt::one(), BigInt::one() << k as usize)
}

/// Formats as `p/q`, always with an explicit denominator.
pub fn fmt(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `p/q` or a bare integer `p`. Decimal and exponent forms are rejected.
pub fn parse(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        let digits = t.strip_prefix('-').unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("`{s}` is not a rational of the form p/q")));
        }
        t.parse::<BigInt>()
            .map_err(|e| Error::Parse(format!("`{s}`: {e}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(Error::Parse(format!("`{s}` has zero denominator")));
            }
            Ok(Rat::new(parse_int(p)?, q))
        }
        None => Ok(Rat::from_integer(parse_int(s)?)),
    }
}

pub fn to_f64(x: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapter: a single rational as a `"p/q"` string.
pub mod as_str {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        fmt(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter: a list of rationals as `"p/q"` strings.
pub mod vec_as_str {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(fmt))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rat>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub fn fmt_vec(xs: &[Rat]) -> Vec<String> {
    xs.iter().map(fmt).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse(" -3 ").unwrap(), int(-3));
        assert_eq!(parse("0/7").unwrap(), zero());
    }

    #[test]
    fn rejects_floats_and_zero_denominators() {
        assert!(parse("0.5").is_err());
        assert!(parse("1e3").is_err());
        assert!(parse("1/0").is_err());
        assert!(parse("").is_err());
        assert!(parse("1/-").is_err());
    }

    #[test]
    fn formats_with_explicit_denominator() {
        assert_eq!(fmt(&int(1)), "1/1");
        assert_eq!(fmt(&rat(6, -8)), "-3/4");
    }
}
