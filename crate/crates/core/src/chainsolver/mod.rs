//! The closed-form solution of the pyramid problem, evaluated in decimal
//! floating point with a full worked trace.
//!
//! From the base sides the altitude feet `M, H, K` and the orthocenter `L`
//! are located by plane trigonometry. The perpendicular feet `F, G` are then
//! projected onto the base (`F̃` on `HL`, `G̃` on `KL`), `|F̃G̃|` follows from
//! the law of cosines at `L`, and `|FG|` from the height difference.
//!
//! ```
//! use rational_ortho::chainsolver::{solve_chain, ChainInput, Placement, Side};
//! use rational_ortho::exact::int;
//!
//! let input = ChainInput::new(int(125), int(125), Side::Squared(int(20000)), int(44), int(100)).unwrap();
//! let trace = solve_chain(&input, 50, Placement::Signed).unwrap();
//! assert_eq!(trace.value("FH").unwrap().to_string(), "108");
//! assert_eq!(trace.fg_squared().round(45).to_string(), "4896");
//! ```

mod decimal;

use num_traits::Signed;
use serde::Serialize;

pub use decimal::{Decimal, ParseDecimalError};

use crate::exact::{rational_to_string, Rational};
use crate::pyramid::PyramidInstance;

/// Extra digits carried internally beyond the requested precision.
pub const GUARD_DIGITS: u32 = 10;
pub const MIN_PRECISION: u32 = 30;
pub const DEFAULT_PRECISION: u32 = 50;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChainFailure {
    #[error("precision {0} is below the minimum of {MIN_PRECISION} digits")]
    PrecisionTooLow(u32),
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("sides violate the strict triangle inequality")]
    DegenerateTriangle,
    #[error("triangle is not acute")]
    NotAcute,
    #[error("radicand of {0} is not positive")]
    NonPositiveRadicand(&'static str),
    #[error("perpendicular foot does not exist for these data ({0} radicand is not positive)")]
    NoPerpendicularFoot(&'static str),
    #[error("{0} is zero")]
    ZeroDivisor(&'static str),
    #[error("projection outside its segment: {name} = {value}")]
    OutsideSegment { name: &'static str, value: String },
}

/// A solver failure tagged with the stage that raised it.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{stage}: {failure}")]
pub struct ChainError {
    pub stage: &'static str,
    pub failure: ChainFailure,
}

fn fail(stage: &'static str, failure: ChainFailure) -> ChainError {
    ChainError { stage, failure }
}

/// How the third side is supplied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Side {
    Length(Rational),
    Squared(Rational),
}

/// The published data: `a = |BC|`, `b = |CA|`, `c = |AB|`, `f = |AF|`,
/// `g = |BG|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainInput {
    pub a: Rational,
    pub b: Rational,
    pub c: Side,
    pub f: Rational,
    pub g: Rational,
}

impl ChainInput {
    /// Checks positivity and the strict triangle inequality exactly.
    pub fn new(a: Rational, b: Rational, c: Side, f: Rational, g: Rational) -> Result<Self, ChainError> {
        let stage = "input";
        for (name, v) in [("a", &a), ("b", &b), ("f", &f), ("g", &g)] {
            if !v.is_positive() {
                return Err(fail(stage, ChainFailure::NonPositive(name)));
            }
        }
        let c2 = match &c {
            Side::Length(c) if c.is_positive() => c * c,
            Side::Squared(c2) if c2.is_positive() => c2.clone(),
            _ => return Err(fail(stage, ChainFailure::NonPositive("c"))),
        };
        // |a − b| < c < a + b, squared.
        let (lo, hi) = (&a - &b, &a + &b);
        if !(lo.clone() * lo < c2 && c2 < hi.clone() * hi) {
            return Err(fail(stage, ChainFailure::DegenerateTriangle));
        }
        Ok(Self { a, b, c, f, g })
    }

    pub fn from_instance(inst: &PyramidInstance) -> Result<Self, ChainError> {
        Self::new(
            inst.a.clone(),
            inst.b.clone(),
            Side::Squared(inst.c_squared.clone()),
            inst.f.clone(),
            inst.g.clone(),
        )
    }

    pub fn c_squared(&self) -> Rational {
        match &self.c {
            Side::Length(c) => c * c,
            Side::Squared(c2) => c2.clone(),
        }
    }
}

/// Whether `F̃` and `G̃` must fall inside `HL` and `KL`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Placement {
    /// Negative `LF̃` or `LG̃` is an error.
    #[default]
    Inside,
    /// `LF̃` and `LG̃` are signed distances along the altitudes; the same
    /// formulas then cover projections beyond `L`.
    Signed,
}

/// Decimal arithmetic at a fixed working precision.
#[derive(Debug, Clone, Copy)]
pub struct Ctx {
    pub digits: u32,
}

impl Ctx {
    fn add(&self, x: &Decimal, y: &Decimal) -> Decimal {
        x.add(y, self.digits)
    }
    fn sub(&self, x: &Decimal, y: &Decimal) -> Decimal {
        x.sub(y, self.digits)
    }
    fn mul(&self, x: &Decimal, y: &Decimal) -> Decimal {
        x.mul(y, self.digits)
    }
    fn sq(&self, x: &Decimal) -> Decimal {
        x.square(self.digits)
    }
    fn div(&self, x: &Decimal, y: &Decimal, stage: &'static str, name: &'static str) -> Result<Decimal, ChainError> {
        x.div(y, self.digits).ok_or(fail(stage, ChainFailure::ZeroDivisor(name)))
    }
    fn half(&self, x: &Decimal) -> Decimal {
        x.mul(&"0.5".parse().expect("literal"), self.digits)
    }
    /// `x − y`, flushed to zero when it is within rounding noise of the
    /// operands.
    fn cancel(&self, x: &Decimal, y: &Decimal) -> Decimal {
        let d = self.sub(x, y);
        let floor = Decimal::from_parts(1.into(), 5 - self.digits as i64);
        if d.abs() <= self.mul(&x.abs().max(y.abs()), &floor) {
            Decimal::zero()
        } else {
            d
        }
    }
    /// `(p² + q² − r²) / (2s)`
    fn projection(&self, p: &Decimal, q: &Decimal, r: &Decimal, s: &Decimal, stage: &'static str) -> Result<Decimal, ChainError> {
        let num = self.sub(&self.add(&self.sq(p), &self.sq(q)), &self.sq(r));
        self.div(&num, &self.add(s, s), stage, "side")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Feet {
    pub am: Decimal,
    pub bm: Decimal,
    pub ak: Decimal,
    pub ck: Decimal,
    pub bh: Decimal,
    pub ch: Decimal,
}

/// Distances from the vertices to the altitude feet `M ∈ AB`, `K ∈ AC`,
/// `H ∈ BC`. Negative values mean the foot lies beyond the vertex.
pub fn foot_lengths(ctx: &Ctx, a: &Decimal, b: &Decimal, c: &Decimal) -> Result<Feet, ChainError> {
    let stage = "foot lengths";
    let strict = |x: &Decimal, y: &Decimal, z: &Decimal| ctx.add(x, y) > *z;
    if !(strict(a, b, c) && strict(b, c, a) && strict(c, a, b)) {
        return Err(fail(stage, ChainFailure::DegenerateTriangle));
    }
    Ok(Feet {
        am: ctx.projection(c, b, a, c, stage)?,
        bm: ctx.projection(c, a, b, c, stage)?,
        ak: ctx.projection(b, c, a, b, stage)?,
        ck: ctx.projection(b, a, c, b, stage)?,
        bh: ctx.projection(a, c, b, a, stage)?,
        ch: ctx.projection(a, b, c, a, stage)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Heights {
    pub cm: Decimal,
    pub ah: Decimal,
    pub bk: Decimal,
}

/// The three altitudes, each from the two right triangles sharing it.
pub fn heights(ctx: &Ctx, a: &Decimal, b: &Decimal, c: &Decimal, feet: &Feet) -> Result<Heights, ChainError> {
    let stage = "heights";
    let alt = |p: &Decimal, q: &Decimal, u: &Decimal, v: &Decimal, name| {
        let r = ctx.half(&ctx.sub(&ctx.add(&ctx.sq(p), &ctx.sq(q)), &ctx.add(&ctx.sq(u), &ctx.sq(v))));
        if !r.is_positive() {
            return Err(fail(stage, ChainFailure::NonPositiveRadicand(name)));
        }
        Ok(r.sqrt(ctx.digits).expect("positive"))
    };
    Ok(Heights {
        cm: alt(b, a, &feet.am, &feet.bm, "CM")?,
        ah: alt(c, b, &feet.ch, &feet.bh, "AH")?,
        bk: alt(c, a, &feet.ak, &feet.ck, "BK")?,
    })
}

/// `(KL, HL)` by similarity of `KLC ~ MAC` and `HLC ~ MBC`.
pub fn orthocenter_segments(ctx: &Ctx, feet: &Feet, cm: &Decimal) -> Result<(Decimal, Decimal), ChainError> {
    let stage = "orthocenter segments";
    let kl = ctx.div(&ctx.mul(&feet.am, &feet.ck), cm, stage, "CM")?;
    let hl = ctx.div(&ctx.mul(&feet.bm, &feet.ch), cm, stage, "CM")?;
    Ok((kl, hl))
}

/// `(FH, GK)`: `FH² = b² − CH² − f²`, `GK² = a² − CK² − g²`.
pub fn perp_feet_lengths(
    ctx: &Ctx,
    a: &Decimal,
    b: &Decimal,
    f: &Decimal,
    g: &Decimal,
    ch: &Decimal,
    ck: &Decimal,
) -> Result<(Decimal, Decimal), ChainError> {
    let stage = "perpendicular feet";
    let leg = |side: &Decimal, foot: &Decimal, perp: &Decimal, name| {
        let r = ctx.sub(&ctx.sub(&ctx.sq(side), &ctx.sq(foot)), &ctx.sq(perp));
        if !r.is_positive() {
            return Err(fail(stage, ChainFailure::NoPerpendicularFoot(name)));
        }
        Ok(r.sqrt(ctx.digits).expect("positive"))
    };
    Ok((leg(b, ch, f, "FH")?, leg(a, ck, g, "GK")?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Offsets {
    /// `|GG̃|`, the height of `G` above the base.
    pub gg: Decimal,
    pub ff: Decimal,
    /// `|KG̃|`
    pub kg: Decimal,
    pub hf: Decimal,
}

/// Heights of `F, G` above the base and the positions of their
/// projections along the altitudes, by similarity of right triangles.
pub fn projection_offsets(
    ctx: &Ctx,
    f: &Decimal,
    g: &Decimal,
    fh: &Decimal,
    gk: &Decimal,
    ah: &Decimal,
    bk: &Decimal,
) -> Result<Offsets, ChainError> {
    let stage = "projection offsets";
    Ok(Offsets {
        gg: ctx.div(&ctx.mul(g, gk), bk, stage, "BK")?,
        ff: ctx.div(&ctx.mul(f, fh), ah, stage, "AH")?,
        kg: ctx.div(&ctx.sq(gk), bk, stage, "BK")?,
        hf: ctx.div(&ctx.sq(fh), ah, stage, "AH")?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaseDistance {
    pub cos_kch: Decimal,
    pub cos_klh: Decimal,
    pub lf: Decimal,
    pub lg: Decimal,
    pub fg: Decimal,
}

/// `|F̃G̃|` by the law of cosines in triangle `G̃LF̃`, using that the
/// angles at `L` and `C` of quadrilateral `CKLH` are supplementary.
#[allow(clippy::too_many_arguments)]
pub fn base_distance(
    ctx: &Ctx,
    kl: &Decimal,
    hl: &Decimal,
    kg: &Decimal,
    hf: &Decimal,
    a: &Decimal,
    b: &Decimal,
    c: &Decimal,
    placement: Placement,
) -> Result<BaseDistance, ChainError> {
    let stage = "base distance";
    let num = ctx.sub(&ctx.add(&ctx.sq(b), &ctx.sq(a)), &ctx.sq(c));
    let cos_kch = ctx.div(&num, &ctx.mul(&ctx.add(b, b), a), stage, "side")?;
    let cos_klh = -&cos_kch;
    let lf = ctx.cancel(hl, hf);
    let lg = ctx.cancel(kl, kg);
    if placement == Placement::Inside {
        for (name, v) in [("LFp", &lf), ("LGp", &lg)] {
            if v.is_negative() {
                return Err(fail(stage, ChainFailure::OutsideSegment { name, value: v.round(12).to_string() }));
            }
        }
    }
    let cross = ctx.mul(&ctx.mul(&ctx.add(&lg, &lg), &lf), &cos_klh);
    let r = ctx.sub(&ctx.add(&ctx.sq(&lg), &ctx.sq(&lf)), &cross);
    // The form is positive semidefinite since |cos| < 1, so a negative
    // value is rounding noise around zero.
    let fg = if r.is_negative() { Decimal::zero() } else { r.sqrt(ctx.digits).expect("nonnegative") };
    Ok(BaseDistance { cos_kch, cos_klh, lf, lg, fg })
}

/// One line of the worked solution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEntry {
    pub name: &'static str,
    pub formula: &'static str,
    pub value: Decimal,
    /// The exact squared length, when known from the construction.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt_rational")]
    pub exact_sq: Option<Rational>,
}

fn ser_opt_rational<S: serde::Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.collect_str(&rational_to_string(q)),
        None => s.serialize_none(),
    }
}

/// Every intermediate quantity in solution order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionTrace {
    pub precision: u32,
    pub entries: Vec<TraceEntry>,
    /// `|FG|²` before rounding to the output precision.
    #[serde(skip)]
    fg_squared: Decimal,
}

impl SolutionTrace {
    pub fn get(&self, name: &str) -> Option<&TraceEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn value(&self, name: &str) -> Option<&Decimal> {
        self.get(name).map(|e| &e.value)
    }

    pub fn fg(&self) -> &Decimal {
        self.value("FG").expect("every trace ends with FG")
    }

    /// `|FG|²` at working precision.
    pub fn fg_squared(&self) -> &Decimal {
        &self.fg_squared
    }

    /// Attaches exact squared lengths by segment name.
    pub fn attach_exact<'a>(&mut self, exact: impl IntoIterator<Item = (&'a str, Rational)>) {
        for (name, q) in exact {
            if let Some(e) = self.entries.iter_mut().find(|e| e.name == name) {
                e.exact_sq = Some(q);
            }
        }
    }
}

/// Names and formulas in solution order.
pub const TRACE_FORMULAS: [(&str, &str); 23] = [
    ("AM", "(c² + b² − a²) / 2c"),
    ("BM", "(c² + a² − b²) / 2c"),
    ("AK", "(b² + c² − a²) / 2b"),
    ("CK", "(b² + a² − c²) / 2b"),
    ("BH", "(a² + c² − b²) / 2a"),
    ("CH", "(a² + b² − c²) / 2a"),
    ("CM", "√((b² + a² − AM² − BM²) / 2)"),
    ("AH", "√((c² + b² − CH² − BH²) / 2)"),
    ("BK", "√((c² + a² − AK² − CK²) / 2)"),
    ("KL", "AM · CK / CM"),
    ("HL", "BM · CH / CM"),
    ("FH", "√(b² − CH² − f²)"),
    ("GK", "√(a² − CK² − g²)"),
    ("GGp", "g · GK / BK"),
    ("FFp", "f · FH / AH"),
    ("KGp", "GK² / BK"),
    ("HFp", "FH² / AH"),
    ("cosKCH", "(b² + a² − c²) / 2ab"),
    ("cosKLH", "−cosKCH"),
    ("LFp", "HL − HFp"),
    ("LGp", "KL − KGp"),
    ("FpGp", "√(LGp² + LFp² − 2 · LGp · LFp · cosKLH)"),
    ("FG", "√(FpGp² + (GGp − FFp)²)"),
];

/// Runs every stage at `precision + GUARD_DIGITS` digits and reports
/// values rounded to `precision` significant digits.
pub fn solve_chain(input: &ChainInput, precision: u32, placement: Placement) -> Result<SolutionTrace, ChainError> {
    if precision < MIN_PRECISION {
        return Err(fail("input", ChainFailure::PrecisionTooLow(precision)));
    }
    let ctx = Ctx { digits: precision + GUARD_DIGITS };
    let dec = |q: &Rational| Decimal::from_rational(q, ctx.digits);
    let (a, b, f, g) = (dec(&input.a), dec(&input.b), dec(&input.f), dec(&input.g));
    let c = match &input.c {
        Side::Length(c) => dec(c),
        Side::Squared(c2) => dec(c2).sqrt(ctx.digits).expect("c² checked positive"),
    };

    let feet = foot_lengths(&ctx, &a, &b, &c)?;
    if [&feet.am, &feet.bm, &feet.ck, &feet.ch].iter().any(|v| !v.is_positive()) {
        return Err(fail("foot lengths", ChainFailure::NotAcute));
    }
    let h = heights(&ctx, &a, &b, &c, &feet)?;
    let (kl, hl) = orthocenter_segments(&ctx, &feet, &h.cm)?;
    let (fh, gk) = perp_feet_lengths(&ctx, &a, &b, &f, &g, &feet.ch, &feet.ck)?;
    let off = projection_offsets(&ctx, &f, &g, &fh, &gk, &h.ah, &h.bk)?;
    let base = base_distance(&ctx, &kl, &hl, &off.kg, &off.hf, &a, &b, &c, placement)?;
    let rise = ctx.sub(&off.gg, &off.ff);
    let fg_squared = ctx.add(&ctx.sq(&base.fg), &ctx.sq(&rise));
    let fg = fg_squared.sqrt(ctx.digits).expect("sum of squares");

    let values = [
        feet.am, feet.bm, feet.ak, feet.ck, feet.bh, feet.ch, h.cm, h.ah, h.bk, kl, hl, fh, gk, off.gg, off.ff, off.kg,
        off.hf, base.cos_kch, base.cos_klh, base.lf, base.lg, base.fg, fg,
    ];
    let entries = TRACE_FORMULAS
        .iter()
        .zip(values)
        .map(|(&(name, formula), v)| TraceEntry { name, formula, value: v.round(precision), exact_sq: None })
        .collect();
    Ok(SolutionTrace { precision, entries, fg_squared })
}
