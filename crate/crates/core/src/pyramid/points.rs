use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use num_traits::{Signed, Zero};

use super::{PyramidError, PyramidInstance};
use crate::exact::{Rational, Vec3Q};

/// Exact coordinates of every named point, in the frame `e₁, e₂, e₃` with
/// `A` at the origin.
///
/// `f_proj` and `g_proj` are the orthogonal projections of `F` and `G` onto
/// the base plane `ABC`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    pub a: Vec3Q,
    pub b: Vec3Q,
    pub c: Vec3Q,
    pub f: Vec3Q,
    pub g: Vec3Q,
    pub h: Vec3Q,
    pub k: Vec3Q,
    pub m: Vec3Q,
    pub l: Vec3Q,
    pub f_proj: Vec3Q,
    pub g_proj: Vec3Q,
}

impl PointSet {
    pub fn named(&self) -> [(&'static str, &Vec3Q); 11] {
        [
            ("A", &self.a),
            ("B", &self.b),
            ("C", &self.c),
            ("F", &self.f),
            ("G", &self.g),
            ("H", &self.h),
            ("K", &self.k),
            ("M", &self.m),
            ("L", &self.l),
            ("Fp", &self.f_proj),
            ("Gp", &self.g_proj),
        ]
    }

    /// A normal of the base plane, `(B − A) × (C − A)`.
    pub fn base_normal(&self) -> Vec3Q {
        (&self.b - &self.a).cross(&(&self.c - &self.a))
    }
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(11))?;
        for (name, p) in self.named() {
            map.serialize_entry(name, p)?;
        }
        map.end()
    }
}

/// Foot of the perpendicular from `p` to the line through `x` and `y`.
fn foot_on_line(p: &Vec3Q, x: &Vec3Q, y: &Vec3Q) -> Vec3Q {
    let dir = y - x;
    let t = (p - x).dot(&dir) / dir.norm_squared();
    x + &dir.scale(&t)
}

fn project_to_plane(p: &Vec3Q, origin: &Vec3Q, normal: &Vec3Q) -> Vec3Q {
    let t = (p - origin).dot(normal) / normal.norm_squared();
    p - &normal.scale(&t)
}

/// Intersection of the coplanar lines `p + s·u` and `q + t·v`.
fn intersect_lines(p: &Vec3Q, u: &Vec3Q, q: &Vec3Q, v: &Vec3Q) -> Option<Vec3Q> {
    // Normal equations for s·u − t·v = q − p.
    let w = q - p;
    let (uu, uv, vv) = (u.dot(u), u.dot(v), v.dot(v));
    let (uw, vw) = (u.dot(&w), v.dot(&w));
    let det = &uv * &uv - &uu * &vv;
    if det.is_zero() {
        return None;
    }
    let s = (&uv * &vw - &vv * &uw) / &det;
    let t = (&uu * &vw - &uv * &uw) / &det;
    let x = p + &u.scale(&s);
    (x == q + &v.scale(&t)).then_some(x)
}

/// Places every point by exact rational arithmetic.
///
/// The `e`-chain `A → F → H → C` uses the coefficients `α`, the `h`-chain
/// `B → G → K → C` uses `β` and the columns of the source matrix. Both
/// chains must end at `C`, and the chain points `H` and `K` must coincide
/// with the altitude feet computed by projection.
pub fn build_points(inst: &PyramidInstance) -> Result<PointSet, PyramidError> {
    let zero = Rational::zero;
    let (al, be) = (&inst.alpha, &inst.beta);
    let a = Vec3Q::zero();
    let f = Vec3Q::new(al.x.clone(), zero(), zero());
    let h = &f + &Vec3Q::new(zero(), al.y.clone(), zero());
    let c = &h + &Vec3Q::new(zero(), zero(), al.z.clone());
    let b = &c - &Vec3Q::new(zero(), zero(), inst.omega.clone());

    let s = &inst.source_matrix;
    let hvec: [Vec3Q; 3] = std::array::from_fn(|j| s.column(j));
    let g = &b + &hvec[0].scale(&be.x);
    let k = &g + &hvec[1].scale(&be.y);
    let end = &k + &hvec[2].scale(&be.z);
    if end != c {
        return Err(PyramidError::Internal(format!("h-chain ends at {end}, expected C = {c}")));
    }
    if foot_on_line(&a, &b, &c) != h {
        return Err(PyramidError::Internal("H is not the foot of the altitude from A".into()));
    }
    if foot_on_line(&b, &a, &c) != k {
        return Err(PyramidError::Internal("K is not the foot of the altitude from B".into()));
    }
    let m = foot_on_line(&c, &a, &b);
    let l = intersect_lines(&a, &(&h - &a), &b, &(&k - &b))
        .ok_or_else(|| PyramidError::Internal("altitudes AH and BK do not meet".into()))?;
    let normal = (&b - &a).cross(&(&c - &a));
    if normal.is_zero() {
        return Err(PyramidError::Internal("A, B, C are collinear".into()));
    }
    let f_proj = project_to_plane(&f, &a, &normal);
    let g_proj = project_to_plane(&g, &a, &normal);
    Ok(PointSet { a, b, c, f, g, h, k, m, l, f_proj, g_proj })
}

/// The configuration assumptions behind the closed-form solution chain,
/// each decided by exact sign tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct ConfigFlags {
    /// All three angles of `ABC` are acute.
    pub acute: bool,
    /// `F` and `G` lie strictly on the same side of the base plane.
    pub above_base: bool,
    /// `F̃` is strictly inside `(H, L)` and `G̃` strictly inside `(K, L)`.
    pub feet_in_segments: bool,
    /// No two named points coincide.
    pub nondegenerate: bool,
}

impl ConfigFlags {
    pub fn chain_ready(&self) -> bool {
        self.acute && self.above_base && self.feet_in_segments && self.nondegenerate
    }
}

/// `p` lies strictly between `x` and `y`.
fn strictly_between(p: &Vec3Q, x: &Vec3Q, y: &Vec3Q) -> bool {
    let dir = y - x;
    let len2 = dir.norm_squared();
    if len2.is_zero() {
        return false;
    }
    let t = (p - x).dot(&dir) / len2;
    t.is_positive() && t < Rational::from_integer(1.into()) && *p == x + &dir.scale(&t)
}

pub fn validate_configuration(pts: &PointSet) -> ConfigFlags {
    let (ab2, bc2, ca2) = (pts.a.dist_squared(&pts.b), pts.b.dist_squared(&pts.c), pts.c.dist_squared(&pts.a));
    let acute = &bc2 + &ca2 > ab2 && &ca2 + &ab2 > bc2 && &ab2 + &bc2 > ca2;

    let n = pts.base_normal();
    let side_f = (&pts.f - &pts.a).dot(&n);
    let side_g = (&pts.g - &pts.a).dot(&n);
    let above_base = !side_f.is_zero() && side_f.signum() == side_g.signum();

    let feet_in_segments =
        strictly_between(&pts.f_proj, &pts.h, &pts.l) && strictly_between(&pts.g_proj, &pts.k, &pts.l);

    let named = pts.named();
    let nondegenerate = named
        .iter()
        .enumerate()
        .all(|(i, (_, p))| named[i + 1..].iter().all(|(_, q)| p != q));

    ConfigFlags { acute, above_base, feet_in_segments, nondegenerate }
}

/// Every segment the solution chain touches, as an exact squared length.
///
/// Names follow the solution trace: `Fp`, `Gp` stand for the projections of
/// `F`, `G` onto the base.
pub fn squared_lengths(pts: &PointSet) -> Vec<(&'static str, Rational)> {
    let d = |p: &Vec3Q, q: &Vec3Q| p.dist_squared(q);
    vec![
        ("AB", d(&pts.a, &pts.b)),
        ("BC", d(&pts.b, &pts.c)),
        ("AC", d(&pts.a, &pts.c)),
        ("AF", d(&pts.a, &pts.f)),
        ("BG", d(&pts.b, &pts.g)),
        ("AM", d(&pts.a, &pts.m)),
        ("BM", d(&pts.b, &pts.m)),
        ("AK", d(&pts.a, &pts.k)),
        ("CK", d(&pts.c, &pts.k)),
        ("BH", d(&pts.b, &pts.h)),
        ("CH", d(&pts.c, &pts.h)),
        ("CM", d(&pts.c, &pts.m)),
        ("AH", d(&pts.a, &pts.h)),
        ("BK", d(&pts.b, &pts.k)),
        ("KL", d(&pts.k, &pts.l)),
        ("HL", d(&pts.h, &pts.l)),
        ("FH", d(&pts.f, &pts.h)),
        ("GK", d(&pts.g, &pts.k)),
        ("GGp", d(&pts.g, &pts.g_proj)),
        ("FFp", d(&pts.f, &pts.f_proj)),
        ("KGp", d(&pts.k, &pts.g_proj)),
        ("HFp", d(&pts.h, &pts.f_proj)),
        ("LFp", d(&pts.l, &pts.f_proj)),
        ("LGp", d(&pts.l, &pts.g_proj)),
        ("FpGp", d(&pts.f_proj, &pts.g_proj)),
        ("FG", d(&pts.f, &pts.g)),
    ]
}

/// Segments whose lengths are rational for every generated instance.
pub const RATIONAL_SEGMENTS: [&str; 10] = ["AC", "BC", "AK", "CK", "BH", "CH", "BG", "GK", "AF", "FH"];

/// Segments whose squared lengths are rational (their lengths are, in
/// general, square roots of rationals).
pub const RATIONAL_SQUARE_SEGMENTS: [&str; 13] =
    ["AB", "AM", "BM", "CM", "KL", "HL", "AH", "BK", "FFp", "HFp", "GGp", "KGp", "FG"];
