//! Exact rationals and their `"p/q"` string form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `n / d` as an exact rational. Panics on `d == 0`.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Lowest-terms `"p/q"`, sign on `p`; integers print without a denominator.
pub fn format(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"0.125"`.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit()) || frac.is_empty() {
            return Err(bad());
        }
        let w: BigInt = if whole_digits.is_empty() {
            BigInt::zero()
        } else {
            whole_digits.parse().map_err(|_| bad())?
        };
        let f: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = Rational::new(w * &scale + f, scale);
        return Ok(if negative { -mag } else { mag });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

/// Smallest power of two `2^k` (k ≥ 0) with `1 / 2^k < bound`; `bound > 0`.
pub fn dyadic_below(bound: &Rational) -> u32 {
    let mut k = 0u32;
    let mut step = one();
    while step >= *bound {
        step /= int(2);
        k += 1;
    }
    k
}

/// Serde adapter: a rational as a `"p/q"` string.
pub mod serde_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter: `Vec<Rational>` as a list of `"p/q"` strings.
pub mod serde_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_is_lowest_terms_with_sign_on_numerator() {
        assert_eq!(format(&q(2, -4)), "-1/2");
        assert_eq!(format(&q(6, 3)), "2");
        assert_eq!(format(&q(0, 5)), "0");
    }

    #[test]
    fn parse_accepts_fractions_integers_and_decimals() {
        assert_eq!(parse("3/4").unwrap(), q(3, 4));
        assert_eq!(parse("-7").unwrap(), int(-7));
        assert_eq!(parse("0.1").unwrap(), q(1, 10));
        assert_eq!(parse("-0.25").unwrap(), q(-1, 4));
        assert_eq!(parse(".5").unwrap(), q(1, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
    }

    #[test]
    fn dyadic_below_picks_first_strictly_smaller_power() {
        assert_eq!(dyadic_below(&q(1, 4)), 3);
        assert_eq!(dyadic_below(&q(3, 10)), 2);
        assert_eq!(dyadic_below(&int(2)), 0);
    }
}
