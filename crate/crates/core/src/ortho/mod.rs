//! Rational orthogonal matrices.
//!
//! Construction by the regular algorithm (products of triad rotations and an
//! optional inversion), the orthogonality and orientation predicates, the
//! column/tetrad correspondence, and integer matrices of Euler's class
//! `mᵗ·m = N·E` with bounded search probes.

mod euler;
mod factorize;
mod regular;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::exact::{lcm_of_denominators, Mat3Q, Rational};
use crate::pythagoras::PyTetrad;

pub use euler::{euler_norm, euler_to_rational, search_entire, IntMat3, SEARCH_ENTIRE_GUARD};
pub use factorize::{factorize_regular, FactorizeGuard};
pub use regular::{compose_regular, inversion_matrix, rotation_from_triad, Axis, RegularSpec, RotationFactor, SpecSampler};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrthoError {
    #[error("matrix is not orthogonal")]
    NotOrthogonal,
    #[error("matrix is not an entire orthogonal matrix")]
    NotEulerClass,
    #[error("norm of orthogonality {0} is not a perfect square")]
    NotASquare(String),
    #[error("{what} {got} exceeds the limit {limit}")]
    GuardExceeded { what: &'static str, limit: u64, got: u64 },
    #[error("triad pool is empty")]
    EmptyPool,
}

/// Sign of the determinant of an orthogonal matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> i8 {
        match self {
            Orientation::Positive => 1,
            Orientation::Negative => -1,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.sign())
    }
}

/// `mᵗ·m = E`, checked exactly.
pub fn is_orthogonal(m: &Mat3Q) -> bool {
    (&m.transpose() * m).is_identity()
}

pub fn orientation(m: &Mat3Q) -> Result<Orientation, OrthoError> {
    if !is_orthogonal(m) {
        return Err(OrthoError::NotOrthogonal);
    }
    let det = m.det();
    if det.is_one() {
        Ok(Orientation::Positive)
    } else {
        debug_assert_eq!(det, -Rational::one());
        Ok(Orientation::Negative)
    }
}

/// The integer tetrad of each column: the column over its least common
/// denominator.
pub fn columns_to_tetrads(m: &Mat3Q) -> Result<[PyTetrad; 3], OrthoError> {
    if !is_orthogonal(m) {
        return Err(OrthoError::NotOrthogonal);
    }
    Ok(std::array::from_fn(|j| {
        let col = m.column(j);
        let d = lcm_of_denominators([&col.x, &col.y, &col.z]);
        let scaled = col.to_array().map(|q| {
            let v = q * Rational::from_integer(d.clone());
            debug_assert!(v.is_integer());
            v.to_integer()
        });
        PyTetrad::new(scaled, d).expect("columns of an orthogonal matrix are unit vectors")
    }))
}

/// Each orthogonality relation checked on its own, for reporting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    /// `mᵗ·m = E`.
    pub transpose_times_matrix_is_identity: bool,
    /// `m·mᵗ = E`.
    pub matrix_times_transpose_is_identity: bool,
    /// Sum of squares of each row equals 1.
    pub unit_rows: [bool; 3],
    /// Sum of squares of each column equals 1.
    pub unit_columns: [bool; 3],
    /// Row pairs (0,1), (0,2), (1,2) have zero dot product.
    pub orthogonal_rows: [bool; 3],
    /// Column pairs (0,1), (0,2), (1,2) have zero dot product.
    pub orthogonal_columns: [bool; 3],
    #[serde(with = "crate::exact::json::rational")]
    pub determinant: Rational,
    /// `det² = 1`.
    pub unit_determinant: bool,
}

impl RelationReport {
    pub fn all_hold(&self) -> bool {
        self.transpose_times_matrix_is_identity
            && self.matrix_times_transpose_is_identity
            && self.unit_rows.iter().chain(&self.unit_columns).all(|b| *b)
            && self.orthogonal_rows.iter().chain(&self.orthogonal_columns).all(|b| *b)
            && self.unit_determinant
    }
}

pub fn check_relations(m: &Mat3Q) -> RelationReport {
    const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];
    let det = m.det();
    RelationReport {
        transpose_times_matrix_is_identity: is_orthogonal(m),
        matrix_times_transpose_is_identity: (m * &m.transpose()).is_identity(),
        unit_rows: std::array::from_fn(|i| m.row(i).norm_squared().is_one()),
        unit_columns: std::array::from_fn(|j| m.column(j).norm_squared().is_one()),
        orthogonal_rows: PAIRS.map(|(i, k)| m.row(i).dot(&m.row(k)).is_zero()),
        orthogonal_columns: PAIRS.map(|(i, k)| m.column(i).dot(&m.column(k)).is_zero()),
        unit_determinant: (&det * &det).is_one(),
        determinant: det,
    }
}

/// Multiplies an orthogonal rational matrix by the least common denominator
/// of its entries, giving an entire orthogonal matrix with norm `M²`.
pub fn to_entire(m: &Mat3Q) -> (IntMat3, BigInt) {
    let d = lcm_of_denominators(m.rows.iter().flatten());
    let k = Rational::from_integer(d.clone());
    let rows = m.rows.clone().map(|r| r.map(|q| (q * &k).to_integer()));
    (IntMat3 { rows }, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, int, Vec3Q};
    use crate::pythagoras::{tetrad_is_valid, tetrads_orthogonal, third_tetrad, PyTriad};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn t(p1: i64, p2: i64, d: i64) -> PyTriad {
        PyTriad::new(p1, p2, d).unwrap()
    }

    fn f(axis: Axis, p1: i64, p2: i64, d: i64) -> RotationFactor {
        RotationFactor::new(axis, t(p1, p2, d))
    }

    fn rows(r: [[(i64, i64); 3]; 3]) -> Mat3Q {
        Mat3Q::from_rows(r.map(|row| row.map(|(n, d)| frac(n, d))))
    }

    pub(crate) fn sample_spec() -> RegularSpec {
        RegularSpec::new(true, vec![f(Axis::X, 3, 4, 5), f(Axis::Y, 3, 4, 5), f(Axis::Z, -3, 4, 5)])
    }

    #[test]
    fn elementary_rotations() {
        assert!(rotation_from_triad(Axis::Z, &t(1, 0, 1)).is_identity());
        assert_eq!(
            rotation_from_triad(Axis::X, &t(3, 4, 5)),
            rows([[(3, 5), (4, 5), (0, 1)], [(-4, 5), (3, 5), (0, 1)], [(0, 1), (0, 1), (1, 1)]])
        );
        assert_eq!(
            rotation_from_triad(Axis::Y, &t(0, 1, 1)),
            rows([[(0, 1), (0, 1), (1, 1)], [(0, 1), (1, 1), (0, 1)], [(-1, 1), (0, 1), (0, 1)]])
        );
        for axis in Axis::ALL {
            let r = rotation_from_triad(axis, &t(-12, 5, 13));
            assert!(is_orthogonal(&r));
            assert_eq!(r.det(), int(1));
        }
    }

    #[test]
    fn inversion() {
        let s = inversion_matrix();
        assert_eq!(s, Mat3Q::diagonal(int(-1), int(-1), int(-1)));
        assert!((&s * &s).is_identity());
        assert_eq!(s.det(), int(-1));
    }

    #[test]
    fn compose_examples() {
        assert!(compose_regular(&RegularSpec::identity()).is_identity());
        let single = RegularSpec::new(false, vec![f(Axis::X, 3, 4, 5)]);
        assert_eq!(compose_regular(&single), rotation_from_triad(Axis::X, &t(3, 4, 5)));
        let s = compose_regular(&sample_spec());
        assert_eq!(
            s,
            rows([
                [(-9, 25), (108, 125), (-44, 125)],
                [(12, 25), (-19, 125), (-108, 125)],
                [(4, 5), (12, 25), (9, 25)],
            ])
        );
        assert!(is_orthogonal(&s));
        assert_eq!(s.det(), int(-1));
    }

    #[test]
    fn orthogonality_predicate() {
        assert!(is_orthogonal(&Mat3Q::identity()));
        assert!(!is_orthogonal(&Mat3Q::diagonal(int(2), int(1), int(1))));
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(orientation(&Mat3Q::identity()), Ok(Orientation::Positive));
        assert_eq!(orientation(&inversion_matrix()), Ok(Orientation::Negative));
        assert_eq!(orientation(&compose_regular(&sample_spec())), Ok(Orientation::Negative));
        assert_eq!(orientation(&Mat3Q::diagonal(int(2), int(1), int(1))), Err(OrthoError::NotOrthogonal));
    }

    #[test]
    fn tetrad_examples() {
        let tets = |m: &Mat3Q| columns_to_tetrads(m).unwrap().map(|x| x.to_string());
        assert_eq!(tets(&Mat3Q::identity()), ["(1, 0, 0, 1)", "(0, 1, 0, 1)", "(0, 0, 1, 1)"]);
        assert_eq!(
            tets(&rotation_from_triad(Axis::X, &t(3, 4, 5))),
            ["(3, -4, 0, 5)", "(4, 3, 0, 5)", "(0, 0, 1, 1)"]
        );
        assert_eq!(tets(&compose_regular(&sample_spec()))[2], "(-44, -108, 45, 125)");
        assert!(columns_to_tetrads(&Mat3Q::diagonal(int(2), int(1), int(1))).is_err());
    }

    #[test]
    fn relation_report() {
        let good = check_relations(&compose_regular(&sample_spec()));
        assert!(good.all_hold());
        assert_eq!(good.determinant, int(-1));
        let bad = check_relations(&Mat3Q::diagonal(int(2), int(1), int(1)));
        assert!(!bad.all_hold());
        assert_eq!(bad.unit_rows, [false, true, true]);
        assert_eq!(bad.orthogonal_rows, [true, true, true]);
        assert!(!bad.unit_determinant);
    }

    #[test]
    fn entire_round_trip() {
        let s = compose_regular(&sample_spec());
        let (m, d) = to_entire(&s);
        assert_eq!(d, BigInt::from(125));
        assert_eq!(euler_norm(&m), Some(BigInt::from(125 * 125)));
        assert_eq!(euler_to_rational(&m).unwrap(), s);
    }

    #[test]
    fn randomized_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let sampler = SpecSampler { param_bound: 20, max_factors: 6, inversion: None };
        for _ in 0..300 {
            let spec = sampler.sample(&mut rng);
            let m = compose_regular(&spec);
            assert!(is_orthogonal(&m));
            assert!((&m * &m.transpose()).is_identity());
            let o = orientation(&m).unwrap();
            assert_eq!(o == Orientation::Negative, spec.inversion);

            let [c0, c1, c2] = columns_to_tetrads(&m).unwrap();
            for c in [&c0, &c1, &c2] {
                assert!(tetrad_is_valid(c.parts(), c.d()));
            }
            assert!(tetrads_orthogonal(&c0, &c1) && tetrads_orthogonal(&c0, &c2) && tetrads_orthogonal(&c1, &c2));
            let third = third_tetrad(&c0, &c1).unwrap();
            let expected = match o {
                Orientation::Negative => c2.clone(),
                Orientation::Positive => c2.negated(),
            };
            assert_eq!(third, expected);

            let h: Vec<Vec3Q> = (0..3).map(|j| m.column(j)).collect();
            let cross = h[0].cross(&h[1]);
            assert_eq!(cross, h[2].scale(&m.det()));

            let (entire, d) = to_entire(&m);
            assert_eq!(euler_norm(&entire), Some(&d * &d));
            assert_eq!(euler_to_rational(&entire).unwrap(), m);
        }
    }

    #[test]
    fn small_entire_matrices_have_square_norms() {
        for bound in 1..=3 {
            for m in search_entire(bound).unwrap() {
                let n = euler_norm(&m).unwrap();
                assert!(crate::exact::exact_isqrt(&n).is_some(), "{m} has norm {n}");
                assert!(is_orthogonal(&euler_to_rational(&m).unwrap()));
            }
        }
    }
}
