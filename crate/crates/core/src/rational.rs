//! Exact rationals and their `p/q` wire format.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Canonical `p/q` form. Integers keep the `/1` suffix.
pub fn format(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Parses `p/q` or a bare integer `p`. Leading `+` and surrounding
/// whitespace are rejected so that every accepted string has one canonical
/// spelling after normalization.
pub fn parse(text: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("not a rational: {text:?}"));
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let numer = parse_int(numer).ok_or_else(bad)?;
    let denom = parse_int(denom).ok_or_else(bad)?;
    if denom.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    if denom.is_negative() {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

fn parse_int(text: &str) -> Option<BigInt> {
    let digits = text.strip_prefix('-').unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

/// Sum of a slice of rationals.
pub fn sum<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    values.into_iter().fold(Rational::zero(), |acc, v| acc + v)
}
