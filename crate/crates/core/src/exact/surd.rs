use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, ToPrimitive};

use super::{exact_sqrt, ExactError, Rational};

/// The nonnegative real `√q` for a rational `q ≥ 0`.
///
/// Only the reduced radicand is stored. Square parts are never factored
/// out, so two values are equal exactly when their radicands are equal.
/// There is deliberately no addition: `√2 + √3` is not of this form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SqrtRational {
    radicand: Rational,
}

impl SqrtRational {
    pub fn new(radicand: Rational) -> Result<Self, ExactError> {
        if radicand.is_negative() {
            return Err(ExactError::NegativeRadicand(radicand.to_string()));
        }
        Ok(Self { radicand })
    }

    /// `|q|` written as `√(q²)`.
    pub fn from_rational(q: &Rational) -> Self {
        Self { radicand: q * q }
    }

    pub fn radicand(&self) -> &Rational {
        &self.radicand
    }

    /// The squared value, which is always rational.
    pub fn square(&self) -> Rational {
        self.radicand.clone()
    }

    pub fn mul(&self, other: &SqrtRational) -> SqrtRational {
        SqrtRational { radicand: &self.radicand * &other.radicand }
    }

    /// Exact rational value, when the radicand is a perfect square.
    pub fn try_rational(&self) -> Option<Rational> {
        exact_sqrt(&self.radicand)
    }

    pub fn to_f64(&self) -> f64 {
        self.radicand.to_f64().unwrap_or(f64::NAN).sqrt()
    }
}

impl PartialOrd for SqrtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// √ is monotone on nonnegative reals.
impl Ord for SqrtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.radicand.cmp(&other.radicand)
    }
}

impl fmt::Display for SqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.try_rational() {
            Some(q) => write!(f, "{q}"),
            None => write!(f, "√({})", self.radicand),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, int};
    use proptest::prelude::*;

    fn s(q: Rational) -> SqrtRational {
        SqrtRational::new(q).unwrap()
    }

    #[test]
    fn multiplication() {
        let two = s(int(2));
        assert_eq!(two.mul(&two), s(int(4)));
        assert_eq!(two.mul(&two).try_rational(), Some(int(2)));
        let q = s(frac(4, 9)).mul(&s(int(1)));
        assert_eq!(q, s(frac(4, 9)));
        assert_eq!(q.try_rational(), Some(frac(2, 3)));
        assert_eq!(s(int(2)).mul(&s(int(3))), s(int(6)));
    }

    #[test]
    fn to_rational() {
        assert_eq!(s(frac(144, 25)).try_rational(), Some(frac(12, 5)));
        assert_eq!(s(int(2)).try_rational(), None);
        assert_eq!(s(int(0)).try_rational(), Some(int(0)));
    }

    #[test]
    fn ordering() {
        assert_eq!(s(int(2)).cmp(&s(int(3))), Ordering::Less);
        assert_eq!(s(frac(9, 4)).cmp(&s(frac(9, 4))), Ordering::Equal);
        assert_eq!(s(int(5)).cmp(&s(frac(16, 4))), Ordering::Greater);
    }

    #[test]
    fn rejects_negative() {
        assert!(SqrtRational::new(frac(-1, 2)).is_err());
    }

    fn arb_radicand() -> impl Strategy<Value = Rational> {
        (0i64..10_000, 1i64..10_000).prop_map(|(n, d)| frac(n, d))
    }

    proptest! {
        #[test]
        fn mul_commutes_and_associates(a in arb_radicand(), b in arb_radicand(), c in arb_radicand()) {
            let (a, b, c) = (s(a), s(b), s(c));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn self_product_is_radicand(a in arb_radicand()) {
            let x = s(a.clone());
            prop_assert_eq!(x.mul(&x).try_rational(), Some(a));
        }
    }
}
