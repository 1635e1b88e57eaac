use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use rational_ortho::chainsolver::{solve_chain, ChainInput, Decimal, Placement, Side, SolutionTrace, GUARD_DIGITS};
use rational_ortho::exact::json::JsonInt;
use rational_ortho::exact::{int, parse_rational, rational_to_string, Mat3Q, Rational};
use rational_ortho::ortho::{
    check_relations, columns_to_tetrads, compose_regular, euler_norm, euler_to_rational, factorize_regular, is_orthogonal,
    search_entire, to_entire, FactorizeGuard, OrthoError, RegularSpec, SpecSampler,
};
use rational_ortho::pyramid::{
    build_points, fg_exact, generate, generate_instance, squared_lengths, Generated, Mode, ProblemGenerator, PyramidInstance,
};
use rational_ortho::pythagoras::{enumerate_primitive_triads, PyTriad};

use crate::args::{Command, CommandRequest, Format};

/// Largest hypotenuse bound accepted by the triad enumerations.
pub const MAX_TRIAD_D: u64 = 20_000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONFIGURATION: i32 = 3;
pub const EXIT_GUARD: i32 = 4;

/// The result of one command: exit code, JSON payload, a text rendering of
/// the same content, and notes for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub exit_code: i32,
    pub payload: Value,
    pub text: String,
    pub diagnostics: Vec<String>,
}

impl RunReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.payload).expect("JSON values serialize") + "\n",
            Format::Text => self.text.clone(),
        }
    }
}

enum Failure {
    Usage(String),
    Configuration(String),
    Guard(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Configuration(_) => EXIT_CONFIGURATION,
            Failure::Guard(_) => EXIT_GUARD,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Configuration(m) | Failure::Guard(m) => m,
        }
    }

    fn class(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "bad input",
            Failure::Configuration(_) => "configuration rejected",
            Failure::Guard(_) => "guard exceeded",
        }
    }
}

impl From<OrthoError> for Failure {
    fn from(e: OrthoError) -> Self {
        match e {
            OrthoError::GuardExceeded { .. } => Failure::Guard(e.to_string()),
            OrthoError::EmptyPool => Failure::Usage(e.to_string()),
            _ => Failure::Configuration(e.to_string()),
        }
    }
}

struct Outcome {
    code: i32,
    payload: Value,
    text: String,
}

impl Outcome {
    fn ok(payload: Value, text: String) -> Self {
        Self { code: EXIT_OK, payload, text }
    }
}

pub fn run(req: &CommandRequest) -> RunReport {
    let mut notes = Vec::new();
    let result = match &req.command {
        Command::Triads { max_d } => triads(*max_d),
        Command::MatrixGen { seed, count, param_bound, max_factors, epsilon, spec } => {
            matrix_gen(*seed, *count, *param_bound, *max_factors, *epsilon, spec.as_ref())
        }
        Command::MatrixVerify { matrix, instance, index } => match (matrix, instance) {
            (Some(m), _) => Ok(matrix_verify(m)),
            (None, Some(path)) => instance_verify(path, *index),
            (None, None) => Err(Failure::Usage("matrix-verify needs --matrix or --instance".into())),
        },
        Command::ProblemGen {
            seed,
            strict,
            count,
            param_bound,
            max_factors,
            grid,
            omega,
            sigma,
            spec,
            max_value,
            max_attempts,
            precision,
        } => {
            let opts = GenOptions {
                seed: *seed,
                mode: if *strict { Mode::Strict } else { Mode::Permissive },
                count: *count,
                sampler: SpecSampler { param_bound: *param_bound, max_factors: *max_factors, inversion: Some(true) },
                grid: *grid,
                pair: omega.clone().zip(sigma.clone()),
                spec: spec.clone(),
                max_value: max_value.map(|v| int(v).to_integer()),
                max_attempts: *max_attempts,
                precision: *precision,
            };
            problem_gen(&opts, &mut notes)
        }
        Command::Solve { instance, index, a, b, c, c_squared, f, g, precision, allow_outside } => {
            let placement = if *allow_outside { Placement::Signed } else { Placement::Inside };
            match instance {
                Some(path) => load_problem(path, *index).and_then(|(inst, answer)| {
                    let input = ChainInput::from_instance(&inst).map_err(|e| Failure::Usage(e.to_string()))?;
                    solve(&input, Some(&inst), answer, *precision, placement)
                }),
                None => {
                    let side = match (c, c_squared) {
                        (Some(c), _) => Side::Length(c.clone()),
                        (None, Some(c2)) => Side::Squared(c2.clone()),
                        (None, None) => unreachable!("checked by parse_args"),
                    };
                    let value = |v: &Option<Rational>| v.clone().expect("checked by parse_args");
                    ChainInput::new(value(a), value(b), side, value(f), value(g))
                        .map_err(|e| Failure::Usage(e.to_string()))
                        .and_then(|input| solve(&input, None, None, *precision, placement))
                }
            }
        }
        Command::EulerSearch { bound } => euler(*bound),
        Command::Factorize { matrix, spec, pool_max_d, depth } => {
            let m = matrix.clone().unwrap_or_else(|| compose_regular(spec.as_ref().expect("checked by clap")));
            factorize(&m, *pool_max_d, *depth)
        }
    };
    match result {
        Ok(o) => RunReport { exit_code: o.code, payload: o.payload, text: o.text, diagnostics: notes },
        Err(f) => {
            notes.push(f.message().to_string());
            RunReport {
                exit_code: f.code(),
                payload: json!({ "error": { "class": f.class(), "message": f.message() } }),
                text: format!("error ({}): {}\n", f.class(), f.message()),
                diagnostics: notes,
            }
        }
    }
}

fn matrix_text(m: &Mat3Q) -> String {
    let cells: Vec<Vec<String>> =
        (0..3).map(|i| (0..3).map(|j| m.get(i, j).to_string()).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    cells
        .iter()
        .map(|row| format!("  [ {} ]\n", row.iter().map(|c| format!("{c:>width$}")).collect::<Vec<_>>().join("  ")))
        .collect()
}

fn triads(max_d: u64) -> Result<Outcome, Failure> {
    if max_d > MAX_TRIAD_D {
        return Err(Failure::Guard(format!("--max-d {max_d} exceeds the limit {MAX_TRIAD_D}")));
    }
    let list = enumerate_primitive_triads(max_d);
    let mut text = format!("{} primitive triads with d ≤ {max_d} (p1 even)\n", list.len());
    for t in &list {
        let _ = writeln!(text, "{:>8} {:>8} {:>8}", t.p1(), t.p2(), t.d());
    }
    Ok(Outcome::ok(json!({ "max_d": max_d, "count": list.len(), "triads": list }), text))
}

fn matrix_entry(spec: &RegularSpec) -> (Value, String) {
    let m = compose_regular(spec);
    let (entire, scale) = to_entire(&m);
    let tetrads = columns_to_tetrads(&m).ok();
    let payload = json!({
        "spec": spec,
        "matrix": m,
        "determinant": rational_to_string(&m.det()),
        "orthogonal": is_orthogonal(&m),
        "tetrads": tetrads,
        "entire": { "scale": JsonInt(scale.clone()), "matrix": entire },
    });
    let mut text = format!("spec {spec}\n{}", matrix_text(&m));
    let _ = writeln!(text, "  det = {}, common denominator {scale}", m.det());
    (payload, text)
}

fn matrix_gen(
    seed: Option<u64>,
    count: usize,
    param_bound: i64,
    max_factors: usize,
    epsilon: Option<u8>,
    spec: Option<&RegularSpec>,
) -> Result<Outcome, Failure> {
    let specs = match (spec, seed) {
        (Some(s), _) => vec![s.clone()],
        (None, Some(seed)) => {
            let sampler = SpecSampler { param_bound, max_factors, inversion: epsilon.map(|e| e == 1) };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| sampler.sample(&mut rng)).collect()
        }
        (None, None) => return Err(Failure::Usage("matrix-gen needs --seed or --spec".into())),
    };
    let (entries, texts): (Vec<Value>, Vec<String>) = specs.iter().map(matrix_entry).unzip();
    Ok(Outcome::ok(json!({ "seed": seed, "matrices": entries }), texts.join("\n")))
}

fn relations_text(m: &Mat3Q) -> (rational_ortho::ortho::RelationReport, String) {
    let r = check_relations(m);
    let mark = |b: bool| if b { "ok" } else { "FAIL" };
    let marks = |bs: &[bool; 3]| bs.map(mark).join(" ");
    let mut text = matrix_text(m);
    let _ = writeln!(text, "SᵗS = E          {}", mark(r.transpose_times_matrix_is_identity));
    let _ = writeln!(text, "SSᵗ = E          {}", mark(r.matrix_times_transpose_is_identity));
    let _ = writeln!(text, "unit columns     {}", marks(&r.unit_columns));
    let _ = writeln!(text, "unit rows        {}", marks(&r.unit_rows));
    let _ = writeln!(text, "orthogonal cols  {}", marks(&r.orthogonal_columns));
    let _ = writeln!(text, "orthogonal rows  {}", marks(&r.orthogonal_rows));
    let _ = writeln!(text, "det = {}        {}", r.determinant, mark(r.unit_determinant));
    (r, text)
}

fn matrix_verify(m: &Mat3Q) -> Outcome {
    let (report, text) = relations_text(m);
    let code = if report.all_hold() { EXIT_OK } else { EXIT_CONFIGURATION };
    let tetrads = columns_to_tetrads(m).ok();
    let payload = json!({ "matrix": m, "all_hold": report.all_hold(), "relations": report, "tetrads": tetrads });
    Outcome { code, payload, text }
}

/// Reads a bare instance, one `problems` entry, or an entry's `instance`.
fn load_problem(path: &Path, index: usize) -> Result<(PyramidInstance, Option<Rational>), Failure> {
    let bad = |e: String| Failure::Usage(format!("{}: {e}", path.display()));
    let text = std::fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    let entry = match doc.get("problems") {
        Some(list) => list.get(index).ok_or_else(|| bad(format!("no problem at index {index}")))?,
        None => &doc,
    };
    let (inst, answer) = match entry.get("instance") {
        Some(inst) => (inst, entry.get("answer_sq")),
        None => (entry, None),
    };
    let inst: PyramidInstance = serde_json::from_value(inst.clone()).map_err(|e| bad(e.to_string()))?;
    let answer = match answer {
        Some(Value::String(s)) => Some(parse_rational(s).map_err(|e| bad(e.to_string()))?),
        Some(other) => return Err(bad(format!("answer_sq must be a string, got {other}"))),
        None => None,
    };
    Ok((inst, answer))
}

fn instance_verify(path: &Path, index: usize) -> Result<Outcome, Failure> {
    let (inst, answer) = load_problem(path, index)?;
    let (report, mut text) = relations_text(&inst.source_matrix);
    let regenerated = generate_instance(&inst.source_matrix, &inst.omega, &inst.sigma);
    let consistent = regenerated.as_ref() == Ok(&inst);
    let exact = build_points(&inst).ok().map(|p| fg_exact(&p).radicand().clone());
    let answer_matches = answer.as_ref().map(|a| exact.as_ref() == Some(a));
    let mark = |b: bool| if b { "ok" } else { "FAIL" };
    let _ = writeln!(text, "data regenerate from (S, ω, σ)  {}", mark(consistent));
    if let Some(m) = answer_matches {
        let _ = writeln!(text, "stored |FG|² reproduced        {}", mark(m));
    }
    let all = report.all_hold() && consistent && answer_matches != Some(false);
    let payload = json!({
        "matrix": inst.source_matrix,
        "all_hold": all,
        "relations": report,
        "instance_consistent": consistent,
        "answer_matches": answer_matches,
    });
    Ok(Outcome { code: if all { EXIT_OK } else { EXIT_CONFIGURATION }, payload, text })
}

struct GenOptions {
    seed: u64,
    mode: Mode,
    count: usize,
    sampler: SpecSampler,
    grid: u32,
    pair: Option<(Rational, Rational)>,
    spec: Option<RegularSpec>,
    max_value: Option<BigInt>,
    max_attempts: usize,
    precision: u32,
}

fn exact_decimal(q: &Rational, precision: u32) -> Decimal {
    let w = precision + GUARD_DIGITS;
    Decimal::from_rational(q, w).sqrt(w).expect("squared lengths are nonnegative").round(precision)
}

fn problem_entry(n: usize, spec: Option<&RegularSpec>, g: &Generated, precision: u32, notes: &mut Vec<String>) -> (Value, String) {
    let inst = &g.instance;
    let placement = if inst.flags.chain_ready() { Placement::Inside } else { Placement::Signed };
    let trace = ChainInput::from_instance(inst).and_then(|input| solve_chain(&input, precision, placement));
    let trace = match trace {
        Ok(mut t) => {
            t.attach_exact(squared_lengths(&g.points));
            Some(t)
        }
        Err(e) => {
            notes.push(format!("problem {n}: no worked solution ({e})"));
            None
        }
    };
    let answer_sq = g.answer.radicand();
    let answer = exact_decimal(answer_sq, precision);
    let payload = json!({
        "spec": spec,
        "instance": inst,
        "answer_sq": rational_to_string(answer_sq),
        "answer": answer,
        "placement": placement_name(placement),
        "trace": trace,
    });
    let mut text = format!("Problem {n}\n");
    let _ = writeln!(
        text,
        "  a = |BC| = {}, b = |CA| = {}, |AB|² = {}, f = |AF| = {}, g = |BG| = {}",
        inst.a, inst.b, inst.c_squared, inst.f, inst.g
    );
    if let Some(s) = spec {
        let _ = writeln!(text, "  built from {s} with ω = {}, σ = {}", inst.omega, inst.sigma);
    }
    if !inst.flags.chain_ready() {
        let _ = writeln!(text, "  configuration: {:?}", inst.flags);
    }
    if let Some(t) = &trace {
        text.push_str(&worked_solution(t));
    }
    let _ = writeln!(text, "  Answer: |FG|² = {answer_sq}, |FG| ≈ {}", answer.round(20));
    (payload, text)
}

fn placement_name(p: Placement) -> &'static str {
    match p {
        Placement::Inside => "inside",
        Placement::Signed => "signed",
    }
}

/// The trace as numbered steps, with exact squares where known.
pub fn worked_solution(t: &SolutionTrace) -> String {
    let mut text = String::new();
    for (i, e) in t.entries.iter().enumerate() {
        let _ = write!(text, "  {:>2}. {} = {} = {}", i + 1, e.name, e.formula, e.value);
        if let Some(q) = &e.exact_sq {
            let _ = write!(text, "   [{}² = {q}]", e.name);
        }
        text.push('\n');
    }
    text
}

fn problem_gen(o: &GenOptions, notes: &mut Vec<String>) -> Result<Outcome, Failure> {
    let mut found: Vec<(Option<RegularSpec>, Generated)> = Vec::new();
    match (&o.spec, &o.pair) {
        (Some(spec), Some((omega, sigma))) => {
            let g = generate(&compose_regular(spec), omega, sigma, o.mode).map_err(|e| Failure::Configuration(e.to_string()))?;
            found.push((Some(spec.clone()), g));
        }
        _ => {
            let grid = match &o.pair {
                Some(p) => vec![p.clone()],
                None => ProblemGenerator::square_grid(o.grid),
            };
            let gen = ProblemGenerator { sampler: o.sampler.clone(), grid, mode: o.mode, max_value: o.max_value.clone() };
            let problems = match &o.spec {
                Some(spec) => gen.from_spec(spec).into_iter().take(o.count).collect(),
                None => gen.generate(&mut ChaCha8Rng::seed_from_u64(o.seed), o.count, o.max_attempts),
            };
            found.extend(problems.into_iter().map(|p| (Some(p.spec), p.problem)));
        }
    }
    if found.is_empty() {
        return Err(Failure::Configuration("no instance passed the configuration filter".into()));
    }
    if found.len() < o.count && o.pair.is_none() {
        notes.push(format!("found {} of {} requested problems", found.len(), o.count));
    }
    let mut entries = Vec::new();
    let mut text = String::new();
    for (i, (spec, g)) in found.iter().enumerate() {
        let (p, t) = problem_entry(i + 1, spec.as_ref(), g, o.precision, notes);
        entries.push(p);
        text.push_str(&t);
        text.push('\n');
    }
    let payload = json!({
        "seed": o.seed,
        "strict": o.mode == Mode::Strict,
        "precision": o.precision,
        "count": entries.len(),
        "problems": entries,
    });
    Ok(Outcome::ok(payload, text))
}

fn solve(
    input: &ChainInput,
    inst: Option<&PyramidInstance>,
    answer: Option<Rational>,
    precision: u32,
    placement: Placement,
) -> Result<Outcome, Failure> {
    let mut trace = solve_chain(input, precision, placement).map_err(|e| Failure::Configuration(e.to_string()))?;
    if let Some(pts) = inst.and_then(|i| build_points(i).ok()) {
        trace.attach_exact(squared_lengths(&pts));
    }
    let c = match &input.c {
        Side::Length(c) => json!({ "c": rational_to_string(c) }),
        Side::Squared(c2) => json!({ "c_squared": rational_to_string(c2) }),
    };
    let mut text = format!(
        "a = {}, b = {}, {}, f = {}, g = {}\n",
        input.a,
        input.b,
        match &input.c {
            Side::Length(c) => format!("c = {c}"),
            Side::Squared(c2) => format!("c² = {c2}"),
        },
        input.f,
        input.g
    );
    text.push_str(&worked_solution(&trace));
    let fg_squared = trace.fg_squared().round(precision);
    let _ = writeln!(text, "Answer: |FG| = {}, |FG|² = {fg_squared}", trace.fg());
    let mut payload = json!({
        "input": {
            "a": rational_to_string(&input.a),
            "b": rational_to_string(&input.b),
            "f": rational_to_string(&input.f),
            "g": rational_to_string(&input.g),
        },
        "precision": precision,
        "placement": placement_name(placement),
        "fg": trace.fg(),
        "fg_squared": fg_squared,
        "trace": trace,
    });
    payload["input"].as_object_mut().expect("object").extend(c.as_object().expect("object").clone());
    let mut code = EXIT_OK;
    if let Some(want) = answer {
        let diff = (trace.fg_squared().to_rational() - &want).abs();
        let rel = if want.is_zero() { diff } else { diff / want.abs() };
        let tolerance = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), (precision - 5) as usize));
        let ok = rel <= tolerance;
        let rel_f = Decimal::from_rational(&rel, 3).to_f64();
        let _ = writeln!(text, "Stored |FG|² = {want}; relative difference {rel_f:.3e} ({})", if ok { "ok" } else { "FAIL" });
        payload["check"] = json!({
            "answer_sq": rational_to_string(&want),
            "relative_error": format!("{rel_f:.3e}"),
            "tolerance": format!("1e-{}", precision - 5),
            "within_tolerance": ok,
        });
        if !ok {
            code = EXIT_CONFIGURATION;
        }
    }
    Ok(Outcome { code, payload, text })
}

fn euler(bound: u32) -> Result<Outcome, Failure> {
    let found = search_entire(bound)?;
    let mut entries = Vec::new();
    let mut text = format!("{} entire orthogonal matrices with entries in [-{bound}, {bound}]\n", found.len());
    for m in &found {
        let norm = euler_norm(m);
        let rational = euler_to_rational(m).ok();
        entries.push(json!({
            "entries": m,
            "norm": norm.clone().map(JsonInt),
            "orthogonal": rational.as_ref().is_some_and(is_orthogonal),
        }));
        let rows: Vec<String> = m.rows.iter().map(|r| format!("{} {} {}", r[0], r[1], r[2])).collect();
        let _ = writeln!(text, "  [{}]  N = {}", rows.join(" | "), norm.map_or("-".into(), |n| n.to_string()));
    }
    Ok(Outcome::ok(json!({ "bound": bound, "count": found.len(), "matrices": entries }), text))
}

/// Every primitive triad with `d ≤ max_d`, in all sign and leg-order variants.
fn triad_pool(max_d: u64) -> Vec<PyTriad> {
    let mut pool = BTreeSet::new();
    for t in enumerate_primitive_triads(max_d) {
        let (p1, p2, d) = (t.p1().clone(), t.p2().clone(), t.d().clone());
        for (x, y) in [(p1.clone(), p2.clone()), (p2, p1)] {
            for (sx, sy) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                pool.insert(PyTriad::new(&x * sx, &y * sy, d.clone()).expect("sign changes keep the triad"));
            }
        }
    }
    pool.into_iter().collect()
}

fn factorize(m: &Mat3Q, pool_max_d: u64, depth: usize) -> Result<Outcome, Failure> {
    if pool_max_d > MAX_TRIAD_D {
        return Err(Failure::Guard(format!("--pool-max-d {pool_max_d} exceeds the limit {MAX_TRIAD_D}")));
    }
    let pool = triad_pool(pool_max_d);
    let found = factorize_regular(m, &pool, depth, FactorizeGuard::default())?;
    let mut text = matrix_text(m);
    match &found {
        Some(spec) => {
            let _ = writeln!(text, "expansion: {spec}");
        }
        None => {
            let _ = writeln!(text, "no expansion with at most {depth} factors from {} pool triads", pool.len());
        }
    }
    let payload = json!({
        "matrix": m,
        "pool_size": pool.len(),
        "depth": depth,
        "found": found.is_some(),
        "spec": found,
    });
    Ok(Outcome::ok(payload, text))
}
