//! Exact rational scalars.
//!
//! Scalars are `num_rational::BigRational`, which keeps every value reduced
//! with a positive denominator. The text form is `"p/q"`, or `"p"` when the
//! denominator is one.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::ParseError;

pub type Scalar = BigRational;

/// A column vector of scalars.
pub type Vector = Vec<Scalar>;

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(numer: i64, denom: i64) -> Scalar {
    assert!(denom != 0, "zero denominator");
    Scalar::new(BigInt::from(numer), BigInt::from(denom))
}

fn is_integer_literal(s: &str) -> bool {
    let digits = s.strip_prefix('-').unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

/// Parses `"p"` or `"p/q"` with an optional leading `-` on either part.
///
/// Non-canonical input such as `"2/4"` is accepted and reduced.
pub fn parse_scalar(s: &str) -> Result<Scalar, ParseError> {
    let bad = || ParseError::Scalar(s.to_string());
    let (numer, denom) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    if !is_integer_literal(numer) {
        return Err(bad());
    }
    let numer = BigInt::from_str(numer).map_err(|_| bad())?;
    let denom = match denom {
        None => BigInt::one(),
        Some(d) => {
            if !is_integer_literal(d) {
                return Err(bad());
            }
            BigInt::from_str(d).map_err(|_| bad())?
        }
    };
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Scalar::new(numer, denom))
}

/// Canonical text form; inverse of [`parse_scalar`] on canonical strings.
pub fn format_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_scalar("3").unwrap(), int(3));
        assert_eq!(parse_scalar("-3").unwrap(), int(-3));
        assert_eq!(parse_scalar("2/4").unwrap(), ratio(1, 2));
        assert_eq!(parse_scalar("1/-2").unwrap(), ratio(-1, 2));
        assert_eq!(parse_scalar("-0").unwrap(), zero());
    }

    #[test]
    fn rejects_garbage() {
        for s in [
            "", "-", "1/", "/2", "1/0", "0/0", "1.5", " 1", "1_0", "+1", "1/2/3", "a",
        ] {
            assert!(parse_scalar(s).is_err(), "{s:?} should not parse");
        }
    }

    #[test]
    fn canonical_zero_is_integer_zero() {
        assert_eq!(format_scalar(&parse_scalar("0/7").unwrap()), "0");
        let z = parse_scalar("0/-7").unwrap();
        assert!(z.denom().is_one());
    }

    proptest! {
        #[test]
        fn format_parse_round_trip(n in any::<i64>(), d in any::<i64>().prop_filter("nonzero", |d| *d != 0)) {
            let x = Scalar::new(BigInt::from(n), BigInt::from(d));
            let s = format_scalar(&x);
            prop_assert_eq!(parse_scalar(&s).unwrap(), x.clone());
            prop_assert_eq!(format_scalar(&parse_scalar(&s).unwrap()), s);
        }
    }
}
