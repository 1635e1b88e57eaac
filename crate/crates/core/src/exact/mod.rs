//! Exact scalars and 3-dimensional linear algebra over the rationals.
//!
//! Everything here is arbitrary precision. Products of many rotation
//! factors grow denominators multiplicatively, so there is no fixed-width
//! fast path anywhere in the crate.

mod linalg;
pub mod json;
mod surd;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub use linalg::{Mat3Q, Vec3Q};
pub use surd::SqrtRational;

/// Arbitrary-precision fraction, always kept reduced with a positive
/// denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("square root of negative rational {0}")]
    NegativeRadicand(String),
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

/// Builds the canonical fraction `n/d`.
pub fn rat_normalize(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Rational, ExactError> {
    let d = d.into();
    if d.is_zero() {
        return Err(ExactError::ZeroDenominator);
    }
    Ok(Rational::new(n.into(), d))
}

/// Shorthand for an integer-valued rational.
pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for `n/d`; panics on a zero denominator.
pub fn frac(n: i64, d: i64) -> Rational {
    rat_normalize(n, d).expect("nonzero denominator")
}

/// Exact square root of a nonnegative integer, if it is a perfect square.
pub fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact square root of a nonnegative rational, if numerator and
/// denominator are both perfect squares.
pub fn exact_sqrt(q: &Rational) -> Option<Rational> {
    let n = exact_isqrt(q.numer())?;
    let d = exact_isqrt(q.denom())?;
    Some(Rational::new(n, d))
}

/// `"n/d"`, including `"/1"` for integers.
pub fn rational_to_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `"n"`, `"n/d"` and plain decimals such as `"2.5"` or `"-0.125"`.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let err = || ExactError::Parse(s.to_string());
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        return rat_normalize(n, d);
    }
    if let Some((whole, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = whole.starts_with('-');
        let whole = whole.trim_start_matches(['-', '+']);
        let digits = format!("{}{}", if whole.is_empty() { "0" } else { whole }, frac_part);
        let mut n: BigInt = digits.parse().map_err(|_| err())?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac_part.len());
        return rat_normalize(n, d);
    }
    let n: BigInt = s.parse().map_err(|_| err())?;
    Ok(int(n))
}

/// Least common multiple of the denominators of `values` (1 for none).
pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    use num_integer::Integer;
    values
        .into_iter()
        .fold(BigInt::from(1), |acc, q| acc.lcm(q.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_reduces_and_fixes_sign() {
        assert_eq!(rat_normalize(2, 4).unwrap(), frac(1, 2));
        let q = rat_normalize(3, -6).unwrap();
        assert_eq!((q.numer().clone(), q.denom().clone()), (BigInt::from(-1), BigInt::from(2)));
        let z = rat_normalize(0, 5).unwrap();
        assert_eq!((z.numer().clone(), z.denom().clone()), (BigInt::from(0), BigInt::from(1)));
        assert_eq!(rat_normalize(1, 0), Err(ExactError::ZeroDenominator));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("125").unwrap(), int(125));
        assert_eq!(parse_rational("-44/5").unwrap(), frac(-44, 5));
        assert_eq!(parse_rational("2.5").unwrap(), frac(5, 2));
        assert_eq!(parse_rational("-0.125").unwrap(), frac(-1, 8));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.").is_err());
        assert_eq!(rational_to_string(&int(7)), "7/1");
    }

    #[test]
    fn perfect_squares() {
        assert_eq!(exact_isqrt(&BigInt::from(144)), Some(BigInt::from(12)));
        assert_eq!(exact_isqrt(&BigInt::from(2)), None);
        assert_eq!(exact_isqrt(&BigInt::from(-4)), None);
        assert_eq!(exact_sqrt(&frac(144, 25)), Some(frac(12, 5)));
        assert_eq!(exact_sqrt(&frac(2, 9)), None);
    }
}
