//! The pyramid problem and its generator.
//!
//! In pyramid `ABCD` the base sides `a = |BC|`, `b = |CA|`, `c = |AB|` and
//! the perpendiculars `f = |AF|` (from `A` to face `BCD`) and `g = |BG|`
//! (from `B` to face `ACD`) are given; the task is `|FG|`.
//!
//! The unit vectors along `AF, FH, HC` and along `BG, GK, KC` form two
//! orthonormal bases related by a transition matrix `S`. Choosing `S` with
//! rational entries and `det S = −1`, together with rational `ω = |BC|` and
//! `σ = |AC|`, makes every point of the construction rational:
//!
//! ```text
//! AC = σ·h₃ = α₁e₁ + α₂e₂ + α₃e₃   ⇒  αᵢ = σ·S[i][2]
//! BC = ω·e₃ = β₁h₁ + β₂h₂ + β₃h₃   ⇒  βᵢ = ω·S[2][i]
//! ```
//!
//! The answer `|FG|` is then the square root of a rational number.

mod points;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::exact::json::rational as rational_json;
use crate::exact::{lcm_of_denominators, Mat3Q, Rational, SqrtRational, Vec3Q};
use crate::ortho::{compose_regular, orientation, Orientation, OrthoError, RegularSpec, SpecSampler};

pub use points::{
    build_points, squared_lengths, validate_configuration, ConfigFlags, PointSet, RATIONAL_SEGMENTS,
    RATIONAL_SQUARE_SEGMENTS,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PyramidError {
    #[error("source matrix is not orthogonal")]
    NotOrthogonal,
    #[error("source matrix must have determinant -1")]
    WrongOrientation,
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("coefficient {0} is zero, so a named segment collapses")]
    DegenerateCoefficient(&'static str),
    #[error("configuration outside the solvable case: {0:?}")]
    Configuration(ConfigFlags),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// A generated problem: the published data `a, b, c², f, g` plus the matrix
/// and coefficients it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PyramidInstance {
    #[serde(with = "rational_json")]
    pub a: Rational,
    #[serde(with = "rational_json")]
    pub b: Rational,
    #[serde(with = "rational_json")]
    pub c_squared: Rational,
    #[serde(with = "rational_json")]
    pub f: Rational,
    #[serde(with = "rational_json")]
    pub g: Rational,
    #[serde(with = "rational_json")]
    pub omega: Rational,
    #[serde(with = "rational_json")]
    pub sigma: Rational,
    #[serde(rename = "matrix")]
    pub source_matrix: Mat3Q,
    pub alpha: Vec3Q,
    pub beta: Vec3Q,
    pub flags: ConfigFlags,
}

impl PyramidInstance {
    /// `c = |AB|` in surd form.
    pub fn c(&self) -> SqrtRational {
        SqrtRational::new(self.c_squared.clone()).expect("c² is a squared length")
    }
}

/// Whether non-solvable configurations are rejected or only flagged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Reject anything outside the acute, above-base, feet-inside case.
    #[default]
    Strict,
    /// Accept and report flags.
    Permissive,
}

/// Computes the coefficients and published data for `(S, ω, σ)`.
///
/// Zero coefficients are always rejected; configuration flags are recorded
/// but not enforced (see [`generate`]).
pub fn generate_instance(s: &Mat3Q, omega: &Rational, sigma: &Rational) -> Result<PyramidInstance, PyramidError> {
    match orientation(s) {
        Err(OrthoError::NotOrthogonal) => return Err(PyramidError::NotOrthogonal),
        Err(e) => return Err(PyramidError::Internal(e.to_string())),
        Ok(Orientation::Positive) => return Err(PyramidError::WrongOrientation),
        Ok(Orientation::Negative) => {}
    }
    if !omega.is_positive() {
        return Err(PyramidError::NonPositive("omega"));
    }
    if !sigma.is_positive() {
        return Err(PyramidError::NonPositive("sigma"));
    }
    let alpha = s.column(2).scale(sigma);
    let beta = s.row(2).scale(omega);
    const NAMES: [[&str; 3]; 2] = [["alpha1", "alpha2", "alpha3"], ["beta1", "beta2", "beta3"]];
    for (vec, names) in [&alpha, &beta].into_iter().zip(NAMES) {
        for (i, name) in names.into_iter().enumerate() {
            if vec.get(i).is_zero() {
                return Err(PyramidError::DegenerateCoefficient(name));
            }
        }
    }
    let two = Rational::from_integer(2.into());
    let c_squared = sigma * sigma + omega * omega - two * sigma * omega * s.get(2, 2);
    let mut inst = PyramidInstance {
        a: omega.clone(),
        b: sigma.clone(),
        c_squared,
        f: alpha.x.abs(),
        g: beta.x.abs(),
        omega: omega.clone(),
        sigma: sigma.clone(),
        source_matrix: s.clone(),
        alpha,
        beta,
        flags: ConfigFlags { acute: false, above_base: false, feet_in_segments: false, nondegenerate: false },
    };
    inst.flags = validate_configuration(&build_points(&inst)?);
    Ok(inst)
}

/// An instance together with its exact construction and answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub instance: PyramidInstance,
    pub points: PointSet,
    pub answer: SqrtRational,
}

pub fn generate(s: &Mat3Q, omega: &Rational, sigma: &Rational, mode: Mode) -> Result<Generated, PyramidError> {
    if mode == Mode::Strict && omega.is_positive() && sigma.is_positive() {
        // Cheap rejection before any point is built: the angle at C has
        // cosine S[2][2], the other two are checked from the side lengths.
        let two = Rational::from_integer(2.into());
        let c2 = sigma * sigma + omega * omega - two * sigma * omega * s.get(2, 2);
        if !sides_acute(&(omega * omega), &(sigma * sigma), &c2) {
            let flags = ConfigFlags { acute: false, above_base: false, feet_in_segments: false, nondegenerate: false };
            return Err(PyramidError::Configuration(flags));
        }
    }
    let instance = generate_instance(s, omega, sigma)?;
    if mode == Mode::Strict && !instance.flags.chain_ready() {
        return Err(PyramidError::Configuration(instance.flags));
    }
    let points = build_points(&instance)?;
    let answer = fg_exact(&points);
    Ok(Generated { instance, points, answer })
}

fn sides_acute(a2: &Rational, b2: &Rational, c2: &Rational) -> bool {
    a2 + b2 > *c2 && b2 + c2 > *a2 && c2 + a2 > *b2
}

/// `|FG|` from the exact coordinates.
pub fn fg_exact(pts: &PointSet) -> SqrtRational {
    SqrtRational::new(pts.f.dist_squared(&pts.g)).expect("squared distance is nonnegative")
}

/// The line of admissible apex positions: faces `BCD` and `ACD` are the
/// planes through `C` with normals `F − A` and `G − B`, and `D` can be any
/// point of their intersection off the base plane.
pub fn apex_line(pts: &PointSet) -> Result<(Vec3Q, Vec3Q), PyramidError> {
    let n1 = &pts.f - &pts.a;
    let n2 = &pts.g - &pts.b;
    let dir = n1.cross(&n2);
    if dir.is_zero() {
        return Err(PyramidError::Internal("faces BCD and ACD are parallel".into()));
    }
    Ok((pts.c.clone(), dir))
}

/// Multiplies every length by `t > 0`; the source matrix is unchanged.
pub fn scale_instance(inst: &PyramidInstance, t: &Rational) -> Result<PyramidInstance, PyramidError> {
    if !t.is_positive() {
        return Err(PyramidError::NonPositive("scale factor"));
    }
    Ok(PyramidInstance {
        a: &inst.a * t,
        b: &inst.b * t,
        c_squared: &inst.c_squared * t * t,
        f: &inst.f * t,
        g: &inst.g * t,
        omega: &inst.omega * t,
        sigma: &inst.sigma * t,
        source_matrix: inst.source_matrix.clone(),
        alpha: inst.alpha.scale(t),
        beta: inst.beta.scale(t),
        flags: inst.flags,
    })
}

/// The smallest `t > 0` for which `t·a, t·b, t·f, t·g` are all integers.
pub fn integer_scale(inst: &PyramidInstance) -> Rational {
    let vals = [&inst.a, &inst.b, &inst.f, &inst.g];
    let l = lcm_of_denominators(vals);
    let g = vals.iter().fold(BigInt::zero(), |g, q| g.gcd(q.numer()));
    Rational::new(l, g)
}

/// Batch generation of problems with integer data.
///
/// Each attempt samples a regular-algorithm matrix with the inversion bit
/// set, tries every `(ω, σ)` pair of the grid, and rescales accepted
/// instances to the smallest integer values of `a, b, f, g`.
#[derive(Debug, Clone)]
pub struct ProblemGenerator {
    pub sampler: SpecSampler,
    pub grid: Vec<(Rational, Rational)>,
    pub mode: Mode,
    /// Upper bound on every scaled value of `a, b, f, g`, if any.
    pub max_value: Option<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedProblem {
    pub spec: RegularSpec,
    pub problem: Generated,
}

impl ProblemGenerator {
    /// `(ω, σ)` for all `1 ≤ ω, σ ≤ n`.
    pub fn square_grid(n: u32) -> Vec<(Rational, Rational)> {
        let r = |v: u32| Rational::from_integer(v.into());
        (1..=n).flat_map(|w| (1..=n).map(move |s| (r(w), r(s)))).collect()
    }

    /// Tries the grid for one spec and returns the accepted problems.
    pub fn from_spec(&self, spec: &RegularSpec) -> Vec<GeneratedProblem> {
        let s = compose_regular(spec);
        let mut out = Vec::new();
        for (omega, sigma) in &self.grid {
            let Ok(g) = generate(&s, omega, sigma, self.mode) else { continue };
            let t = integer_scale(&g.instance);
            let Ok(problem) = rescale(&g, &t) else { continue };
            if let Some(limit) = &self.max_value {
                let inst = &problem.instance;
                if [&inst.a, &inst.b, &inst.f, &inst.g].iter().any(|v| v.numer() > limit) {
                    continue;
                }
            }
            out.push(GeneratedProblem { spec: spec.clone(), problem });
        }
        out
    }

    /// Samples until `count` problems are found or `max_attempts` specs have
    /// been tried.
    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R, count: usize, max_attempts: usize) -> Vec<GeneratedProblem> {
        let mut sampler = self.sampler.clone();
        sampler.inversion = Some(true);
        let mut out = Vec::new();
        for _ in 0..max_attempts {
            if out.len() >= count {
                break;
            }
            let spec = sampler.sample(rng);
            for p in self.from_spec(&spec) {
                if out.len() < count {
                    out.push(p);
                }
            }
        }
        out
    }
}

fn rescale(g: &Generated, t: &Rational) -> Result<Generated, PyramidError> {
    if t.is_one() {
        return Ok(g.clone());
    }
    let instance = scale_instance(&g.instance, t)?;
    let points = build_points(&instance)?;
    let answer = fg_exact(&points);
    Ok(Generated { instance, points, answer })
}

#[cfg(test)]
mod tests;
