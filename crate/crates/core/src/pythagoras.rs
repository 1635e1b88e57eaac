//! Pythagorean triads `p1² + p2² = d²` and tetrads `p1² + p2² + p3² = d²`.
//!
//! A triad fixes an angle with rational cosine and sine, and so an exact
//! elementary rotation. A tetrad is one column of a rational orthogonal
//! matrix brought to a common denominator.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exact::json::{deserialize_int_vec, serialize_int_array};
use crate::exact::{Rational, Vec3Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PythagorasError {
    #[error("scale factor tau must be nonzero")]
    DegenerateScale,
    #[error("({0}) is not a Pythagorean triad with positive d")]
    InvalidTriad(String),
    #[error("({0}) is not a Pythagorean tetrad with positive d")]
    InvalidTetrad(String),
    #[error("tetrads are not orthogonal (dot product {0})")]
    NotOrthogonal(String),
    #[error("tetrad has zero direction")]
    Degenerate,
}

/// Integers with `p1² + p2² = d²` and `d > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PyTriad {
    p1: BigInt,
    p2: BigInt,
    d: BigInt,
}

pub fn triad_is_valid(p1: &BigInt, p2: &BigInt, d: &BigInt) -> bool {
    d.is_positive() && p1 * p1 + p2 * p2 == d * d
}

impl PyTriad {
    pub fn new(p1: impl Into<BigInt>, p2: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Self, PythagorasError> {
        let (p1, p2, d) = (p1.into(), p2.into(), d.into());
        if !triad_is_valid(&p1, &p2, &d) {
            return Err(PythagorasError::InvalidTriad(format!("{p1}, {p2}, {d}")));
        }
        Ok(Self { p1, p2, d })
    }

    /// The two-parameter family of triads with an even first leg and an odd
    /// second leg, scaled by `tau`:
    ///
    /// ```text
    /// p1 = 2(m² + m − n² − n),  p2 = 4mn + 2m + 2n + 1,  d = 2(m² + m + n² + n) + 1
    /// ```
    ///
    /// The legs carry the sign of `tau`; `d` is scaled by `|tau|`.
    pub fn from_params(m: i64, n: i64, tau: i64) -> Result<Self, PythagorasError> {
        if tau == 0 {
            return Err(PythagorasError::DegenerateScale);
        }
        let (m, n, tau) = (BigInt::from(m), BigInt::from(n), BigInt::from(tau));
        let p1 = 2 * (&m * &m + &m - &n * &n - &n);
        let p2 = 4 * &m * &n + 2 * &m + 2 * &n + 1;
        let d = 2 * (&m * &m + &m + &n * &n + &n) + 1;
        Self::new(&tau * p1, &tau * p2, tau.abs() * d)
    }

    pub fn p1(&self) -> &BigInt {
        &self.p1
    }

    pub fn p2(&self) -> &BigInt {
        &self.p2
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn cos(&self) -> Rational {
        Rational::new(self.p1.clone(), self.d.clone())
    }

    pub fn sin(&self) -> Rational {
        Rational::new(self.p2.clone(), self.d.clone())
    }

    pub fn is_primitive(&self) -> bool {
        self.p1.gcd(&self.p2).gcd(&self.d).is_one()
    }

    /// Both legs replaced by their absolute values, even leg first.
    pub fn canonical_legs(&self) -> (BigInt, BigInt, BigInt) {
        let (a, b) = (self.p1.abs(), self.p2.abs());
        if a.is_even() {
            (a, b, self.d.clone())
        } else {
            (b, a, self.d.clone())
        }
    }
}

impl fmt::Display for PyTriad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.p1, self.p2, self.d)
    }
}

impl Serialize for PyTriad {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_int_array(&[self.p1.clone(), self.p2.clone(), self.d.clone()], s)
    }
}

impl<'de> Deserialize<'de> for PyTriad {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = deserialize_int_vec(d)?;
        let [p1, p2, d]: [BigInt; 3] = v
            .try_into()
            .map_err(|_| serde::de::Error::custom("a triad is [p1, p2, d]"))?;
        PyTriad::new(p1, p2, d).map_err(serde::de::Error::custom)
    }
}

/// Every primitive triad with both legs positive and `d ≤ max_d`, found by
/// exhaustive search over the legs.
///
/// Each triad appears once, written with its even leg first. Output is sorted
/// by `d`, then by the even leg.
pub fn enumerate_primitive_triads(max_d: u64) -> Vec<PyTriad> {
    let mut out = Vec::new();
    for d in 1..=max_d {
        let d2 = u128::from(d) * u128::from(d);
        for p1 in (2..d).step_by(2) {
            let rest = d2 - u128::from(p1) * u128::from(p1);
            let p2 = isqrt_u128(rest);
            if p2 * p2 != rest || p2 == 0 {
                continue;
            }
            let p2 = p2 as u64;
            if p1.gcd(&p2) == 1 {
                out.push(PyTriad { p1: p1.into(), p2: p2.into(), d: d.into() });
            }
        }
    }
    out
}

fn isqrt_u128(n: u128) -> u128 {
    let mut r = (n as f64).sqrt() as u128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Integers with `p1² + p2² + p3² = d²` and `d > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PyTetrad {
    p: [BigInt; 3],
    d: BigInt,
}

pub fn tetrad_is_valid(p: &[BigInt; 3], d: &BigInt) -> bool {
    d.is_positive() && p.iter().map(|x| x * x).sum::<BigInt>() == d * d
}

impl PyTetrad {
    pub fn new(p: [BigInt; 3], d: impl Into<BigInt>) -> Result<Self, PythagorasError> {
        let d = d.into();
        if !tetrad_is_valid(&p, &d) {
            return Err(PythagorasError::InvalidTetrad(format!("{}, {}, {}, {d}", p[0], p[1], p[2])));
        }
        Ok(Self { p, d })
    }

    pub fn from_i64(p1: i64, p2: i64, p3: i64, d: i64) -> Result<Self, PythagorasError> {
        Self::new([p1.into(), p2.into(), p3.into()], d)
    }

    pub fn parts(&self) -> &[BigInt; 3] {
        &self.p
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn dot(&self, other: &PyTetrad) -> BigInt {
        self.p.iter().zip(&other.p).map(|(a, b)| a * b).sum()
    }

    /// The unit vector `(p1/d, p2/d, p3/d)`.
    pub fn direction(&self) -> Vec3Q {
        Vec3Q::from_array(self.p.clone().map(|x| Rational::new(x, self.d.clone())))
    }

    /// Divides out the common factor of all four integers.
    pub fn reduced(&self) -> PyTetrad {
        let g = self.p.iter().fold(self.d.clone(), |g, x| g.gcd(x));
        PyTetrad { p: self.p.clone().map(|x| x / &g), d: &self.d / &g }
    }

    pub fn negated(&self) -> PyTetrad {
        PyTetrad { p: self.p.clone().map(|x| -x), d: self.d.clone() }
    }
}

impl fmt::Display for PyTetrad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.p[0], self.p[1], self.p[2], self.d)
    }
}

impl Serialize for PyTetrad {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let [a, b, c] = self.p.clone();
        serialize_int_array(&[a, b, c, self.d.clone()], s)
    }
}

impl<'de> Deserialize<'de> for PyTetrad {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = deserialize_int_vec(d)?;
        let [a, b, c, d]: [BigInt; 4] = v
            .try_into()
            .map_err(|_| serde::de::Error::custom("a tetrad is [p1, p2, p3, d]"))?;
        PyTetrad::new([a, b, c], d).map_err(serde::de::Error::custom)
    }
}

pub fn tetrads_orthogonal(t1: &PyTetrad, t2: &PyTetrad) -> bool {
    t1.dot(t2).is_zero()
}

/// Completes two orthogonal tetrads to the third column of an orthogonal
/// matrix by signed 2×2 minors:
///
/// ```text
/// r1/d3 = −(p2 q3 − p3 q2)/(d1 d2)
/// r2/d3 = +(p1 q3 − p3 q1)/(d1 d2)
/// r3/d3 = −(p1 q2 − p2 q1)/(d1 d2)
/// ```
///
/// i.e. `r = −(p × q)`. The result is reduced to lowest terms.
pub fn third_tetrad(t1: &PyTetrad, t2: &PyTetrad) -> Result<PyTetrad, PythagorasError> {
    let zero_dir = |t: &PyTetrad| t.p.iter().all(Zero::is_zero);
    if zero_dir(t1) || zero_dir(t2) {
        return Err(PythagorasError::Degenerate);
    }
    let dot = t1.dot(t2);
    if !dot.is_zero() {
        return Err(PythagorasError::NotOrthogonal(dot.to_string()));
    }
    let [p1, p2, p3] = &t1.p;
    let [q1, q2, q3] = &t2.p;
    let r = [
        -(p2 * q3 - p3 * q2),
        p1 * q3 - p3 * q1,
        -(p1 * q2 - p2 * q1),
    ];
    // |p × q| = d1·d2 for orthogonal p, q.
    let raw = PyTetrad { p: r, d: &t1.d * &t2.d };
    debug_assert!(tetrad_is_valid(&raw.p, &raw.d));
    Ok(raw.reduced())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn triad(p1: i64, p2: i64, d: i64) -> PyTriad {
        PyTriad::new(p1, p2, d).unwrap()
    }

    fn tet(p1: i64, p2: i64, p3: i64, d: i64) -> PyTetrad {
        PyTetrad::from_i64(p1, p2, p3, d).unwrap()
    }

    #[test]
    fn parametrization_examples() {
        assert_eq!(PyTriad::from_params(0, 0, 1).unwrap(), triad(0, 1, 1));
        assert_eq!(PyTriad::from_params(1, 0, 1).unwrap(), triad(4, 3, 5));
        assert_eq!(PyTriad::from_params(0, 1, 1).unwrap(), triad(-4, 3, 5));
        assert_eq!(PyTriad::from_params(1, 0, 2).unwrap(), triad(8, 6, 10));
        assert_eq!(PyTriad::from_params(1, 0, -1).unwrap(), triad(-4, -3, 5));
        assert_eq!(PyTriad::from_params(1, 0, 0), Err(PythagorasError::DegenerateScale));
    }

    #[test]
    fn triad_validity() {
        let b = |x: i64| BigInt::from(x);
        assert!(triad_is_valid(&b(3), &b(4), &b(5)));
        assert!(triad_is_valid(&b(0), &b(1), &b(1)));
        assert!(!triad_is_valid(&b(1), &b(1), &b(1)));
        assert!(!triad_is_valid(&b(3), &b(4), &b(-5)));
        assert!(PyTriad::new(1, 1, 1).is_err());
    }

    /// Plain nested-loop search over legs and hypotenuse, kept independent
    /// of the enumeration under test.
    fn brute_force_primitive(max_d: i64) -> Vec<(i64, i64, i64)> {
        let mut v = Vec::new();
        for d in 1..=max_d {
            for a in 1..=max_d {
                for b in 1..=max_d {
                    if a * a + b * b == d * d && a % 2 == 0 && a.gcd(&b).gcd(&d) == 1 {
                        v.push((a, b, d));
                    }
                }
            }
        }
        v
    }

    #[test]
    fn enumeration_examples() {
        let as_tuples = |v: Vec<PyTriad>| -> Vec<(i64, i64, i64)> {
            v.iter().map(|t| (i64::try_from(&t.p1).unwrap(), i64::try_from(&t.p2).unwrap(), i64::try_from(&t.d).unwrap())).collect()
        };
        assert_eq!(as_tuples(enumerate_primitive_triads(5)), vec![(4, 3, 5)]);
        assert_eq!(as_tuples(enumerate_primitive_triads(4)), vec![]);
        assert_eq!(as_tuples(enumerate_primitive_triads(13)), vec![(4, 3, 5), (12, 5, 13)]);
        assert_eq!(as_tuples(enumerate_primitive_triads(60)), brute_force_primitive(60));
    }

    #[test]
    fn parametrization_covers_enumeration() {
        let bound = 60;
        let enumerated: BTreeSet<_> = enumerate_primitive_triads(bound).into_iter().map(|t| t.canonical_legs()).collect();
        let mut generated = BTreeSet::new();
        for m in -20..=20 {
            for n in -20..=20 {
                for tau in [-1, 1] {
                    let t = PyTriad::from_params(m, n, tau).unwrap();
                    if !t.p1.is_zero() && t.is_primitive() && t.d <= BigInt::from(bound) {
                        generated.insert(t.canonical_legs());
                    }
                }
            }
        }
        assert_eq!(enumerated, generated);
    }

    #[test]
    fn tetrad_validity() {
        let b = |x: i64| BigInt::from(x);
        assert!(tetrad_is_valid(&[b(1), b(2), b(2)], &b(3)));
        assert!(tetrad_is_valid(&[b(0), b(0), b(1)], &b(1)));
        assert!(!tetrad_is_valid(&[b(1), b(1), b(1)], &b(2)));
    }

    #[test]
    fn orthogonality() {
        assert!(tetrads_orthogonal(&tet(1, 0, 0, 1), &tet(0, 1, 0, 1)));
        assert!(tetrads_orthogonal(&tet(1, 2, 2, 3), &tet(2, 1, -2, 3)));
        assert!(!tetrads_orthogonal(&tet(1, 2, 2, 3), &tet(1, 2, 2, 3)));
    }

    #[test]
    fn third_tetrad_examples() {
        assert_eq!(third_tetrad(&tet(1, 0, 0, 1), &tet(0, 1, 0, 1)).unwrap(), tet(0, 0, -1, 1));
        assert_eq!(third_tetrad(&tet(1, 2, 2, 3), &tet(2, 1, -2, 3)).unwrap(), tet(2, -2, 1, 3));
        assert_eq!(third_tetrad(&tet(0, 1, 0, 1), &tet(1, 0, 0, 1)).unwrap(), tet(0, 0, 1, 1));
        assert!(matches!(
            third_tetrad(&tet(1, 2, 2, 3), &tet(1, 2, 2, 3)),
            Err(PythagorasError::NotOrthogonal(_))
        ));
    }

    /// All primitive tetrads with d ≤ bound, by brute force.
    fn all_primitive_tetrads(bound: i64) -> Vec<[i64; 4]> {
        let mut v = Vec::new();
        for d in 1..=bound {
            for a in -d..=d {
                for b in -d..=d {
                    for c in -d..=d {
                        if a * a + b * b + c * c == d * d && a.gcd(&b).gcd(&c).gcd(&d) == 1 {
                            v.push([a, b, c, d]);
                        }
                    }
                }
            }
        }
        v
    }

    #[test]
    fn third_tetrad_over_small_orthogonal_pairs() {
        let tets = all_primitive_tetrads(25);
        let mut pairs = 0;
        for x in &tets {
            for y in &tets {
                if x[0] * y[0] + x[1] * y[1] + x[2] * y[2] != 0 {
                    continue;
                }
                pairs += 1;
                let (t1, t2) = (tet(x[0], x[1], x[2], x[3]), tet(y[0], y[1], y[2], y[3]));
                let r = third_tetrad(&t1, &t2).unwrap();
                assert!(tetrad_is_valid(&r.p, &r.d));
                assert!(tetrads_orthogonal(&r, &t1) && tetrads_orthogonal(&r, &t2));
                assert_eq!(third_tetrad(&t2, &t1).unwrap(), r.negated());
            }
        }
        assert!(pairs > 1000, "only {pairs} orthogonal pairs");
    }

    proptest! {
        #[test]
        fn params_always_give_triads(m in -50i64..=50, n in -50i64..=50, tau in prop_oneof![-10i64..=-1, 1i64..=10]) {
            let t = PyTriad::from_params(m, n, tau).unwrap();
            prop_assert_eq!(&t.p1 * &t.p1 + &t.p2 * &t.p2, &t.d * &t.d);
        }
    }
}
