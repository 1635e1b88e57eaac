use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::exact::{Mat3Q, Rational};
use crate::pythagoras::PyTriad;

/// Label of an elementary rotation.
///
/// The labels name matrices, not geometric axes: `X` mixes coordinates
/// 1 and 2, `Y` mixes 1 and 3, `Z` mixes 2 and 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// The pair of coordinates the rotation acts on.
    fn plane(self) -> (usize, usize) {
        match self {
            Axis::X => (0, 1),
            Axis::Y => (0, 2),
            Axis::Z => (1, 2),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RotationFactor {
    pub axis: Axis,
    pub triad: PyTriad,
}

impl RotationFactor {
    pub fn new(axis: Axis, triad: PyTriad) -> Self {
        Self { axis, triad }
    }

    pub fn matrix(&self) -> Mat3Q {
        rotation_from_triad(self.axis, &self.triad)
    }
}

impl fmt::Display for RotationFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.axis, self.triad)
    }
}

/// An optional inversion followed by an ordered product of rotations:
/// `S = (S*)^ε · F₁ · F₂ ⋯ F_k`.
///
/// A factor's presence in the list stands for exponent 1; the list order is
/// the product order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct RegularSpec {
    pub inversion: bool,
    pub factors: Vec<RotationFactor>,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    epsilon: u8,
    factors: Vec<RotationFactor>,
}

impl TryFrom<RawSpec> for RegularSpec {
    type Error = String;
    fn try_from(raw: RawSpec) -> Result<Self, String> {
        let inversion = match raw.epsilon {
            0 => false,
            1 => true,
            e => return Err(format!("epsilon must be 0 or 1, got {e}")),
        };
        Ok(RegularSpec { inversion, factors: raw.factors })
    }
}

impl From<RegularSpec> for RawSpec {
    fn from(s: RegularSpec) -> Self {
        RawSpec { epsilon: s.epsilon(), factors: s.factors }
    }
}

impl RegularSpec {
    pub fn identity() -> Self {
        Self { inversion: false, factors: Vec::new() }
    }

    pub fn new(inversion: bool, factors: Vec<RotationFactor>) -> Self {
        Self { inversion, factors }
    }

    pub fn epsilon(&self) -> u8 {
        u8::from(self.inversion)
    }
}

impl fmt::Display for RegularSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ε={} [", self.epsilon())?;
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{factor}")?;
        }
        f.write_str("]")
    }
}

/// Elementary rotation with `cos φ = p1/d`, `sin φ = p2/d`; `+sin` sits
/// above the diagonal and `−sin` below it.
pub fn rotation_from_triad(axis: Axis, triad: &PyTriad) -> Mat3Q {
    let (c, s) = (triad.cos(), triad.sin());
    let (i, j) = axis.plane();
    let mut m = Mat3Q::identity();
    m.rows[i][i] = c.clone();
    m.rows[j][j] = c;
    m.rows[i][j] = s.clone();
    m.rows[j][i] = -s;
    m
}

/// `S* = diag(−1, −1, −1)`.
pub fn inversion_matrix() -> Mat3Q {
    let m1 = -Rational::one();
    Mat3Q::diagonal(m1.clone(), m1.clone(), m1)
}

pub fn compose_regular(spec: &RegularSpec) -> Mat3Q {
    let product = spec
        .factors
        .iter()
        .fold(Mat3Q::identity(), |acc, f| &acc * &f.matrix());
    if spec.inversion {
        product.scale(&-Rational::one())
    } else {
        product
    }
}

/// Random specs for sweeps and problem generation.
///
/// Triads come from the `(m, n, τ)` parametrization with `|m|, |n| ≤
/// param_bound` and `τ = ±1`, skipping the zero-leg triads `m = n`, which
/// only give trivial rotations.
#[derive(Debug, Clone)]
pub struct SpecSampler {
    pub param_bound: i64,
    pub max_factors: usize,
    /// Forces the inversion bit when set.
    pub inversion: Option<bool>,
}

impl SpecSampler {
    pub fn sample_triad<R: Rng + ?Sized>(&self, rng: &mut R) -> PyTriad {
        let b = self.param_bound.max(1);
        loop {
            let m = rng.gen_range(-b..=b);
            let n = rng.gen_range(-b..=b);
            let tau = if rng.gen_bool(0.5) { 1 } else { -1 };
            let t = PyTriad::from_params(m, n, tau).expect("tau is ±1");
            if !t.p1().is_zero() {
                return t;
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> RegularSpec {
        let inversion = self.inversion.unwrap_or_else(|| rng.gen_bool(0.5));
        let k = rng.gen_range(0..=self.max_factors);
        let factors = (0..k)
            .map(|_| {
                let axis = Axis::ALL[rng.gen_range(0..3)];
                RotationFactor::new(axis, self.sample_triad(rng))
            })
            .collect();
        RegularSpec { inversion, factors }
    }
}
