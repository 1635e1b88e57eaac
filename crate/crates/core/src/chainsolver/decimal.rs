use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::Rational;

/// A decimal floating-point number `mantissa · 10^exponent`.
///
/// Every operation takes the number of significant digits to keep and
/// rounds half away from zero. Additions are exact before rounding, so
/// the only error source is the final rounding of each step.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Decimal {
    mantissa: BigInt,
    exponent: i64,
}

fn pow10(n: u64) -> BigInt {
    num_traits::pow(BigInt::from(10u8), n as usize)
}

fn digit_count(m: &BigInt) -> u64 {
    if m.is_zero() {
        0
    } else {
        m.magnitude().to_str_radix(10).len() as u64
    }
}

/// `n / d` rounded half away from zero.
fn div_round(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_rem(d);
    if (r.abs() * 2u8) >= d.abs() {
        if n.sign() == d.sign() {
            q + 1u8
        } else {
            q - 1u8
        }
    } else {
        q
    }
}

impl Decimal {
    pub fn zero() -> Self {
        Self { mantissa: BigInt::zero(), exponent: 0 }
    }

    pub fn from_int(v: i64) -> Self {
        Self { mantissa: v.into(), exponent: 0 }.normalized()
    }

    pub fn from_parts(mantissa: BigInt, exponent: i64) -> Self {
        Self { mantissa, exponent }.normalized()
    }

    /// Strips trailing zeros so equal values compare equal.
    fn normalized(mut self) -> Self {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return self;
        }
        let ten = BigInt::from(10u8);
        loop {
            let (q, r) = self.mantissa.div_rem(&ten);
            if !r.is_zero() {
                return self;
            }
            self.mantissa = q;
            self.exponent += 1;
        }
    }

    pub fn from_rational(q: &Rational, digits: u32) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        let (n, d) = (q.numer(), q.denom());
        let shift = digits as i64 + 2 + digit_count(d) as i64 - digit_count(n) as i64;
        let m = if shift >= 0 { div_round(&(n * pow10(shift as u64)), d) } else { div_round(n, &(d * pow10((-shift) as u64))) };
        Self { mantissa: m, exponent: -shift }.round(digits)
    }

    pub fn to_rational(&self) -> Rational {
        if self.exponent >= 0 {
            Rational::from_integer(&self.mantissa * pow10(self.exponent as u64))
        } else {
            Rational::new(self.mantissa.clone(), pow10((-self.exponent) as u64))
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn abs(&self) -> Self {
        Self { mantissa: self.mantissa.abs(), exponent: self.exponent }
    }

    /// Decimal position just above the leading digit.
    fn magnitude(&self) -> i64 {
        self.exponent + digit_count(&self.mantissa) as i64
    }

    /// Rounds to `digits` significant digits.
    pub fn round(&self, digits: u32) -> Self {
        let n = digit_count(&self.mantissa);
        if n <= digits as u64 {
            return self.clone().normalized();
        }
        let shift = n - digits as u64;
        let m = div_round(&self.mantissa, &pow10(shift));
        Self { mantissa: m, exponent: self.exponent + shift as i64 }.normalized()
    }

    pub fn add(&self, other: &Self, digits: u32) -> Self {
        if self.is_zero() {
            return other.round(digits);
        }
        if other.is_zero() {
            return self.round(digits);
        }
        let gap = digits as i64 + 2;
        if self.magnitude() - other.magnitude() > gap {
            return self.round(digits);
        }
        if other.magnitude() - self.magnitude() > gap {
            return other.round(digits);
        }
        let e = self.exponent.min(other.exponent);
        let lift = |x: &Self| &x.mantissa * pow10((x.exponent - e) as u64);
        Self { mantissa: lift(self) + lift(other), exponent: e }.round(digits)
    }

    pub fn sub(&self, other: &Self, digits: u32) -> Self {
        self.add(&-other, digits)
    }

    pub fn mul(&self, other: &Self, digits: u32) -> Self {
        Self { mantissa: &self.mantissa * &other.mantissa, exponent: self.exponent + other.exponent }.round(digits)
    }

    /// `None` on division by zero.
    pub fn div(&self, other: &Self, digits: u32) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let k = (digits as i64 + 2 + digit_count(&other.mantissa) as i64 - digit_count(&self.mantissa) as i64).max(0);
        let m = div_round(&(&self.mantissa * pow10(k as u64)), &other.mantissa);
        Some(Self { mantissa: m, exponent: self.exponent - k - other.exponent }.round(digits))
    }

    pub fn square(&self, digits: u32) -> Self {
        self.mul(self, digits)
    }

    /// `None` for negative arguments.
    pub fn sqrt(&self, digits: u32) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let want = 2 * (digits as i64 + 2);
        let mut k = (want - digit_count(&self.mantissa) as i64).max(0);
        if (self.exponent - k).is_odd() {
            k += 1;
        }
        let scaled = &self.mantissa * pow10(k as u64);
        let mut root = scaled.sqrt();
        // Round to nearest: bump when (root + ½)² ≤ scaled.
        let next = &root + BigInt::one();
        if (&root * &next) < scaled {
            root = next;
        }
        Some(Self { mantissa: root, exponent: (self.exponent - k) / 2 }.round(digits))
    }
}

impl std::ops::Neg for &Decimal {
    type Output = Decimal;
    fn neg(self) -> Decimal {
        Decimal { mantissa: -&self.mantissa, exponent: self.exponent }
    }
}

impl std::ops::Neg for Decimal {
    type Output = Decimal;
    fn neg(self) -> Decimal {
        -&self
    }
}

impl Ord for Decimal {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.min(other.exponent);
        let lift = |x: &Self| &x.mantissa * pow10((x.exponent - e) as u64);
        lift(self).cmp(&lift(other))
    }
}

impl PartialOrd for Decimal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Plain positional notation without exponent, trailing zeros removed.
impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.is_negative() { "-" } else { "" };
        let digits = self.mantissa.magnitude().to_str_radix(10);
        if self.exponent >= 0 {
            let zeros = if self.is_zero() { 0 } else { self.exponent as usize };
            return write!(f, "{sign}{digits}{}", "0".repeat(zeros));
        }
        let point = digits.len() as i64 + self.exponent;
        let body = if point <= 0 {
            format!("0.{}{digits}", "0".repeat((-point) as usize))
        } else {
            let (int, frac) = digits.split_at(point as usize);
            format!("{int}.{frac}")
        };
        let body = body.trim_end_matches('0').trim_end_matches('.');
        write!(f, "{sign}{body}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid decimal literal {0:?}")]
pub struct ParseDecimalError(String);

/// Accepts `-12`, `3.25`, `.5`, `1e-7`, `6.02E23`.
impl FromStr for Decimal {
    type Err = ParseDecimalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseDecimalError(s.to_string());
        let t = s.trim();
        let (body, exp) = match t.find(['e', 'E']) {
            Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| err())?),
            None => (t, 0),
        };
        let (neg, body) = match body.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, body.strip_prefix('+').unwrap_or(body)),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let m = BigInt::from_str(&format!("{int}{frac}")).map_err(|_| err())?;
        let m = if neg { -m } else { m };
        Ok(Self::from_parts(m, exp - frac.len() as i64))
    }
}

impl serde::Serialize for Decimal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Decimal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
