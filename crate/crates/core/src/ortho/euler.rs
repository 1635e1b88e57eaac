use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::OrthoError;
use crate::exact::json::JsonInt;
use crate::exact::{exact_isqrt, Mat3Q, Rational};

/// Largest entry bound `search_entire` accepts.
pub const SEARCH_ENTIRE_GUARD: u32 = 5;

/// A 3×3 integer matrix, indexed `[row][column]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMat3 {
    pub rows: [[BigInt; 3]; 3],
}

impl IntMat3 {
    pub fn from_i64(rows: [[i64; 3]; 3]) -> Self {
        Self { rows: rows.map(|r| r.map(BigInt::from)) }
    }

    pub fn identity() -> Self {
        Self::from_i64([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self { rows: self.rows.clone().map(|r| r.map(|v| v * k)) }
    }

    pub fn to_rational(&self) -> Mat3Q {
        Mat3Q::from_rows(self.rows.clone().map(|r| r.map(Rational::from_integer)))
    }

    /// `mᵗ·m`.
    fn gram(&self) -> [[BigInt; 3]; 3] {
        let m = &self.rows;
        std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| &m[k][i] * &m[k][j]).sum()))
    }
}

impl fmt::Display for IntMat3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.rows;
        write!(
            f,
            "[[{}, {}, {}], [{}, {}, {}], [{}, {}, {}]]",
            r[0][0], r[0][1], r[0][2], r[1][0], r[1][1], r[1][2], r[2][0], r[2][1], r[2][2]
        )
    }
}

impl Serialize for IntMat3 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<JsonInt>> = self.rows.iter().map(|r| r.iter().cloned().map(JsonInt).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMat3 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: [[JsonInt; 3]; 3] = Deserialize::deserialize(d)?;
        Ok(Self { rows: rows.map(|r| r.map(|v| v.0)) })
    }
}

/// The norm of orthogonality `N` with `mᵗ·m = N·E`, `N > 0`.
pub fn euler_norm(m: &IntMat3) -> Option<BigInt> {
    let g = m.gram();
    let n = g[0][0].clone();
    if !n.is_positive() {
        return None;
    }
    for (i, row) in g.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let expected = if i == j { &n } else { &BigInt::zero() };
            if v != expected {
                return None;
            }
        }
    }
    Some(n)
}

/// `(1/M)·m` for an entire orthogonal matrix with norm `N = M²`.
pub fn euler_to_rational(m: &IntMat3) -> Result<Mat3Q, OrthoError> {
    let n = euler_norm(m).ok_or(OrthoError::NotEulerClass)?;
    let root = exact_isqrt(&n).ok_or_else(|| OrthoError::NotASquare(n.to_string()))?;
    Ok(m.to_rational().scale(&Rational::new(BigInt::from(1), root)))
}

/// Every entire orthogonal matrix with entries in `[−bound, bound]`, sorted
/// lexicographically (row-major).
///
/// The search is exhaustive over columns: group all nonzero integer vectors
/// in the box by squared length, then pick three pairwise orthogonal
/// columns from the same group. Equal column norms plus pairwise
/// orthogonality is exactly `mᵗ·m = N·E`.
pub fn search_entire(bound: u32) -> Result<Vec<IntMat3>, OrthoError> {
    if bound == 0 || bound > SEARCH_ENTIRE_GUARD {
        return Err(OrthoError::GuardExceeded {
            what: "search_entire bound",
            limit: u64::from(SEARCH_ENTIRE_GUARD),
            got: u64::from(bound),
        });
    }
    let b = i64::from(bound);
    let mut by_norm: BTreeMap<i64, Vec<[i64; 3]>> = BTreeMap::new();
    for x in -b..=b {
        for y in -b..=b {
            for z in -b..=b {
                let n = x * x + y * y + z * z;
                if n > 0 {
                    by_norm.entry(n).or_default().push([x, y, z]);
                }
            }
        }
    }
    let dot = |u: &[i64; 3], v: &[i64; 3]| u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    let mut found = Vec::new();
    for group in by_norm.values() {
        for c0 in group {
            for c1 in group.iter().filter(|c| dot(c0, c) == 0) {
                for c2 in group.iter().filter(|c| dot(c0, c) == 0 && dot(c1, c) == 0) {
                    found.push([[c0[0], c1[0], c2[0]], [c0[1], c1[1], c2[1]], [c0[2], c1[2], c2[2]]]);
                }
            }
        }
    }
    found.sort_unstable();
    found.dedup();
    Ok(found.into_iter().map(IntMat3::from_i64).collect())
}
