//! Exact rationals and their `"p/q"` text form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p/q"` or a bare integer. Decimal notation is rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::Rational(text.to_string());
    let trimmed = text.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (trimmed, "1"),
    };
    let digits_ok = |s: &str| {
        let body = s.strip_prefix(['-', '+']).unwrap_or(s);
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits_ok(num) || !digits_ok(den) {
        return Err(bad());
    }
    let p: BigInt = num.parse().map_err(|_| bad())?;
    let q: BigInt = den.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

/// Always `"p/q"` with `q >= 1`, including integers (`"3/1"`).
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn floor_to_usize(value: &Rational) -> usize {
    let floor = value.floor().to_integer();
    if floor.is_negative() {
        0
    } else {
        usize::try_from(floor).unwrap_or(usize::MAX)
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
        acc = acc.div_floor(&BigInt::from(i + 1));
    }
    acc
}

pub fn pow(base: &Rational, exp: usize) -> Rational {
    (0..exp).fold(Rational::one(), |acc, _| acc * base)
}

pub mod serde_str {
    //! `#[serde(with = ...)]` adapter storing a rational as `"p/q"`.
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

pub mod serde_str_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(values.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("1/3").unwrap(), rat(1, 3));
        assert_eq!(parse_rational("2/6").unwrap(), rat(1, 3));
        assert_eq!(parse_rational("0").unwrap(), int(0));
        assert_eq!(parse_rational("-5/2").unwrap(), rat(-5, 2));
    }

    #[test]
    fn rejects_decimals_and_garbage() {
        for bad in ["0.5", "1/0", "", "/3", "1/", "a/b", "1e3", "1/3/4"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn formats_with_denominator() {
        assert_eq!(format_rational(&rat(1, 4)), "1/4");
        assert_eq!(format_rational(&int(3)), "3/1");
        assert_eq!(format_rational(&int(0)), "0/1");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(2, 0), BigInt::from(1));
        assert_eq!(binomial(2, 3), BigInt::from(0));
        assert_eq!(factorial(5), BigInt::from(120));
    }
}
