use super::*;
use crate::exact::{exact_sqrt, frac, int};
use crate::ortho::{inversion_matrix, Axis, RotationFactor};
use crate::pythagoras::PyTriad;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn factor(axis: Axis, p1: i64, p2: i64, d: i64) -> RotationFactor {
    RotationFactor::new(axis, PyTriad::new(p1, p2, d).unwrap())
}

fn sample_matrix() -> Mat3Q {
    compose_regular(&RegularSpec::new(
        true,
        vec![factor(Axis::X, 3, 4, 5), factor(Axis::Y, 3, 4, 5), factor(Axis::Z, -3, 4, 5)],
    ))
}

fn sample() -> PyramidInstance {
    generate_instance(&sample_matrix(), &int(125), &int(125)).unwrap()
}

fn v(x: i64, y: i64, z: i64) -> Vec3Q {
    Vec3Q::new(int(x), int(y), int(z))
}

/// Rebuilds the pyramid from the published data alone in `f64`: the base
/// triangle in the plane `z = 0`, then each face plane through a base edge
/// tilted until its distance to the opposite vertex equals the given
/// perpendicular, keeping the foot above the base.
fn float_reconstruction(a: f64, b: f64, c: f64, f: f64, g: f64) -> f64 {
    type P = [f64; 3];
    let sub = |p: P, q: P| [p[0] - q[0], p[1] - q[1], p[2] - q[2]];
    let dot = |p: P, q: P| p[0] * q[0] + p[1] * q[1] + p[2] * q[2];
    let pa = [0.0, 0.0, 0.0];
    let pb = [c, 0.0, 0.0];
    let x = (b * b + c * c - a * a) / (2.0 * c);
    let pc = [x, (b * b - x * x).sqrt(), 0.0];
    let foot = |p: P, q1: P, q2: P, dist: f64| -> P {
        let e = sub(q2, q1);
        let len = dot(e, e).sqrt();
        let u = [e[0] / len, e[1] / len, e[2] / len];
        let w = sub(p, q1);
        let w = [w[0] - dot(w, u) * u[0], w[1] - dot(w, u) * u[1], w[2] - dot(w, u) * u[2]];
        let h = dot(w, w).sqrt();
        let vv = [w[0] / h, w[1] / h, w[2] / h];
        let (ct, st) = (dist / h, (1.0 - (dist / h).powi(2)).sqrt());
        // Normal tilted downwards puts the foot above the base.
        let n = [ct * vv[0], ct * vv[1], ct * vv[2] - st];
        [p[0] - dist * n[0], p[1] - dist * n[1], p[2] - dist * n[2]]
    };
    let pf = foot(pa, pb, pc, f);
    let pg = foot(pb, pa, pc, g);
    let d = sub(pf, pg);
    dot(d, d)
}

#[test]
fn sample_instance_values() {
    let inst = sample();
    assert_eq!((inst.a.clone(), inst.b.clone()), (int(125), int(125)));
    assert_eq!(inst.f, int(44));
    assert_eq!(inst.g, int(100));
    assert_eq!(inst.c_squared, int(20000));
    assert_eq!(inst.alpha, v(-44, -108, 45));
    assert_eq!(inst.beta, v(100, 60, 45));
    assert_eq!(inst.alpha.norm_squared(), &inst.sigma * &inst.sigma);
    assert_eq!(inst.beta.norm_squared(), &inst.omega * &inst.omega);
    // G̃ lands exactly on the orthocenter and F̃ falls beyond it, so this
    // instance is outside the strict configuration.
    assert!(inst.flags.acute && inst.flags.above_base);
    assert!(!inst.flags.feet_in_segments && !inst.flags.nondegenerate);
}

#[test]
fn rejections() {
    assert_eq!(
        generate_instance(&inversion_matrix(), &int(1), &int(1)),
        Err(PyramidError::DegenerateCoefficient("alpha1"))
    );
    let two_factor = compose_regular(&RegularSpec::new(true, vec![factor(Axis::X, 3, 4, 5), factor(Axis::Y, 3, 4, 5)]));
    assert_eq!(generate_instance(&two_factor, &int(7), &int(3)), Err(PyramidError::DegenerateCoefficient("beta2")));
    let rotation = compose_regular(&RegularSpec::new(false, vec![factor(Axis::X, 3, 4, 5)]));
    assert_eq!(generate_instance(&rotation, &int(1), &int(1)), Err(PyramidError::WrongOrientation));
    assert_eq!(
        generate_instance(&Mat3Q::diagonal(int(2), int(1), int(1)), &int(1), &int(1)),
        Err(PyramidError::NotOrthogonal)
    );
    assert_eq!(generate_instance(&sample_matrix(), &int(0), &int(1)), Err(PyramidError::NonPositive("omega")));
    assert_eq!(generate_instance(&sample_matrix(), &int(1), &frac(-1, 2)), Err(PyramidError::NonPositive("sigma")));
}

#[test]
fn sample_points() {
    let pts = build_points(&sample()).unwrap();
    assert_eq!(pts.b, v(-44, -108, -80));
    assert_eq!(pts.c, v(-44, -108, 45));
    assert_eq!(pts.g, v(-80, -60, 0));
    assert_eq!(pts.a.dist_squared(&pts.b), int(20000));
    assert!((&pts.f - &pts.h).dot(&(&pts.c - &pts.b)).is_zero());
    assert!((&pts.g - &pts.k).dot(&(&pts.c - &pts.a)).is_zero());
    let n = pts.base_normal();
    for p in [&pts.m, &pts.h, &pts.k, &pts.l, &pts.f_proj, &pts.g_proj] {
        assert!((p - &pts.a).dot(&n).is_zero());
    }
    let lengths: std::collections::HashMap<_, _> = squared_lengths(&pts).into_iter().collect();
    assert_eq!(lengths["CH"], int(45 * 45));
    assert_eq!(lengths["CK"], int(45 * 45));
    assert_eq!(lengths["BH"], int(80 * 80));
    assert_eq!(lengths["AK"], int(80 * 80));
    assert_eq!(lengths["FH"], int(108 * 108));
    assert_eq!(lengths["GK"], int(60 * 60));
    assert_eq!(lengths["AH"], int(13600));
    assert_eq!(lengths["BK"], int(13600));
    assert_eq!(lengths["HFp"], frac(108i64.pow(4), 13600));
}

#[test]
fn sample_flags() {
    let pts = build_points(&sample()).unwrap();
    let flags = validate_configuration(&pts);
    assert!(flags.acute && flags.above_base);
    assert_eq!(pts.l, Vec3Q::new(frac(-550, 17), frac(-1350, 17), int(0)));
    assert_eq!(pts.g_proj, pts.l);
    assert!(!flags.feet_in_segments && !flags.nondegenerate);
    assert!(matches!(generate(&sample_matrix(), &int(125), &int(125), Mode::Strict), Err(PyramidError::Configuration(_))));

    let variant = generate_instance(&sample_matrix(), &int(25), &int(125)).unwrap();
    assert_eq!(variant.c_squared, int(14000));
    assert!(!variant.flags.acute);
    assert!(matches!(
        generate(&sample_matrix(), &int(25), &int(125), Mode::Strict),
        Err(PyramidError::Configuration(_))
    ));
    assert!(generate(&sample_matrix(), &int(25), &int(125), Mode::Permissive).is_ok());
}

#[test]
fn sample_answer() {
    let pts = build_points(&sample()).unwrap();
    assert_eq!(&pts.g - &pts.f, v(-36, -60, 0));
    let fg = fg_exact(&pts);
    assert_eq!(fg, SqrtRational::new(int(4896)).unwrap());
    let oracle = float_reconstruction(125.0, 125.0, 20000f64.sqrt(), 44.0, 100.0);
    assert!((oracle - 4896.0).abs() < 1e-9, "float reconstruction gave {oracle}");
}

#[test]
fn apex_line_lies_in_both_faces() {
    let pts = build_points(&sample()).unwrap();
    let (p, dir) = apex_line(&pts).unwrap();
    let e1 = v(1, 0, 0);
    let h1 = sample_matrix().column(0);
    assert!(dir.dot(&e1).is_zero() && dir.dot(&h1).is_zero());
    // C lies on both face planes.
    assert!((&p - &pts.f).dot(&e1).is_zero());
    assert!((&p - &pts.g).dot(&h1).is_zero());
    assert!((&pts.c - &pts.b).dot(&e1).is_zero());
    assert!((&pts.c - &pts.a).dot(&h1).is_zero());
}

#[test]
fn scaling() {
    let inst = sample();
    assert_eq!(scale_instance(&inst, &int(1)).unwrap(), inst);
    let fifth = scale_instance(&inst, &frac(1, 5)).unwrap();
    assert_eq!((fifth.a.clone(), fifth.b.clone(), fifth.f.clone()), (int(25), int(25), frac(44, 5)));
    assert_eq!(fifth.c_squared, int(800));
    assert!(scale_instance(&inst, &int(0)).is_err());
    assert_eq!(integer_scale(&inst), int(1));
    assert_eq!(integer_scale(&fifth), int(5));

    let t = frac(3, 7);
    let scaled = scale_instance(&inst, &t).unwrap();
    let fg = fg_exact(&build_points(&inst).unwrap());
    let fg_scaled = fg_exact(&build_points(&scaled).unwrap());
    assert_eq!(fg_scaled.square(), fg.square() * &t * &t);

    let unit = generate_instance(&sample_matrix(), &int(1), &int(1)).unwrap();
    assert_eq!(integer_scale(&unit), int(125));
    assert_eq!(scale_instance(&unit, &integer_scale(&unit)).unwrap(), inst);
}

#[test]
fn instance_json_round_trip() {
    let inst = sample();
    let text = serde_json::to_string(&inst).unwrap();
    assert!(text.starts_with(r#"{"a":"125/1","b":"125/1","c_squared":"20000/1","f":"44/1","g":"100/1""#));
    let back: PyramidInstance = serde_json::from_str(&text).unwrap();
    assert_eq!(back, inst);
    let pts = serde_json::to_value(build_points(&inst).unwrap()).unwrap();
    assert_eq!(pts["G"], serde_json::json!(["-80/1", "-60/1", "0/1"]));
}

fn random_problems(seed: u64, count: usize) -> Vec<GeneratedProblem> {
    let gen = ProblemGenerator {
        sampler: SpecSampler { param_bound: 6, max_factors: 4, inversion: Some(true) },
        grid: ProblemGenerator::square_grid(3),
        mode: Mode::Permissive,
        max_value: None,
    };
    gen.generate(&mut ChaCha8Rng::seed_from_u64(seed), count, 10 * count)
}

#[test]
fn generated_instances_are_consistent() {
    let problems = random_problems(3, 80);
    assert_eq!(problems.len(), 80);
    for p in &problems {
        let (inst, pts) = (&p.problem.instance, &p.problem.points);
        // Two-expansion consistency and norm identities.
        assert_eq!(&pts.a + &Vec3Q::new(inst.alpha.x.clone(), inst.alpha.y.clone(), inst.alpha.z.clone()), pts.c);
        assert_eq!(inst.alpha.norm_squared(), &inst.sigma * &inst.sigma);
        assert_eq!(inst.beta.norm_squared(), &inst.omega * &inst.omega);
        assert_eq!(pts.a.dist_squared(&pts.b), inst.c_squared);
        // Angle at C.
        let ca = &pts.a - &pts.c;
        let cb = &pts.b - &pts.c;
        assert_eq!(ca.dot(&cb), &inst.sigma * &inst.omega * inst.source_matrix.get(2, 2));
        let lengths: std::collections::HashMap<_, _> = squared_lengths(pts).into_iter().collect();
        for name in RATIONAL_SEGMENTS {
            assert!(exact_sqrt(&lengths[name]).is_some(), "|{name}|² = {} is not a square", lengths[name]);
        }
        for name in RATIONAL_SQUARE_SEGMENTS {
            assert!(lengths.contains_key(name));
        }
        assert_eq!(fg_exact(pts).square(), lengths["FG"]);
        assert_eq!(validate_configuration(pts), inst.flags);
        // Regenerating from the stored matrix is deterministic.
        let again = generate_instance(&inst.source_matrix, &inst.omega, &inst.sigma).unwrap();
        assert_eq!(&again, inst);
    }
}

#[test]
fn strict_instances_match_float_reconstruction() {
    let gen = ProblemGenerator {
        sampler: SpecSampler { param_bound: 20, max_factors: 6, inversion: Some(true) },
        grid: ProblemGenerator::square_grid(3),
        mode: Mode::Strict,
        max_value: None,
    };
    let problems = gen.generate(&mut ChaCha8Rng::seed_from_u64(11), 25, 5000);
    assert_eq!(problems.len(), 25);
    for p in problems {
        let inst = &p.problem.instance;
        assert!(inst.flags.chain_ready());
        let f = |q: &Rational| q.to_f64().unwrap();
        let oracle = float_reconstruction(f(&inst.a), f(&inst.b), f(&inst.c_squared).sqrt(), f(&inst.f), f(&inst.g));
        let exact = f(p.problem.answer.radicand());
        assert!((oracle - exact).abs() <= 1e-7 * exact, "{oracle} vs {exact}");
    }
}
