//! Acceptance criteria, one line per criterion.
//!
//! Runs without the libtest harness so the verdict lines are always printed.

use std::f64::consts::{PI, SQRT_2};
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use anglespace::axioms::{check_all_axioms, AxiomId};
use anglespace::embed::{
    embeddable_angles, embeddable_metric, flatness_and_dimension, simplex_volume_sq, Volume,
};
use anglespace::linalg::determinant;
use anglespace::{
    admits_metric, build_angle_space, check_angle_axioms, check_euclidean,
    check_global_compatibility, check_second_axiom, check_stewart, check_tetragon_metrizability,
    conformal_embed, fixtures, gen_euclidean, metrize, serialize_metric, serialize_space,
    AngleEntry, AngleSpace, BasePair, DistanceMatrix, Error, GeneratedInstance, ToleranceConfig,
};

type Verdict = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

/// Angle at `b` as `atan2(|u ^ v|, u . v)`, independent of the library's formula.
fn oracle_angle(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let u: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let v: Vec<f64> = c.iter().zip(b).map(|(x, y)| x - y).collect();
    let dot: f64 = u.iter().zip(&v).map(|(x, y)| x * y).sum();
    let mut wedge = 0.0;
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            wedge += (u[i] * v[j] - u[j] * v[i]).powi(2);
        }
    }
    wedge.sqrt().atan2(dot)
}

/// Instance `i` of the round-trip suite: every (m, N, k) combination appears.
fn instance(i: usize) -> (usize, usize, usize, u64) {
    (1 + i % 3, 4 + i % 5, (i / 15) % 2, 1000 + i as u64)
}

fn rel_dev(a: &DistanceMatrix, b: &DistanceMatrix) -> f64 {
    a.pairs()
        .map(|(i, j, d)| (d - b.get(i, j)).abs() / d)
        .fold(0.0, f64::max)
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let metric = fixtures::stewart_metric();
    let report = check_stewart(&metric, &tol());

    // Angle table of the same lengths, built here by the law of cosines.
    let names = ["A", "B", "C", "D"];
    let cos = |a: usize, b: usize, c: usize| {
        let (ab, cb, ac) = (metric.get(a, b), metric.get(c, b), metric.get(a, c));
        (ab * ab + cb * cb - ac * ac) / (2.0 * ab * cb)
    };
    let mut entries = Vec::new();
    for b in 0..4 {
        for a in 0..4 {
            for c in a + 1..4 {
                if a != b && c != b {
                    entries.push(AngleEntry::new(
                        names[a],
                        names[b],
                        names[c],
                        cos(a, b, c).acos(),
                    ));
                }
            }
        }
    }
    let space =
        build_angle_space(names, &[["B", "D", "C"]], &entries, tol()).map_err(|e| e.to_string())?;
    let axioms = check_angle_axioms(&space);
    let elapsed = start.elapsed();

    ensure!(!report.passed, "stewart check passed");
    let v = report
        .violations
        .iter()
        .find(|v| v.points.iter().map(|p| p.as_str()).collect::<Vec<_>>() == ["A", "B", "C", "D"])
        .ok_or("no violation for A over B-D-C")?;
    ensure!(
        (v.lhs - 64.0).abs() <= 1e-12 && (v.rhs - 116.0).abs() <= 1e-12,
        "lhs {} rhs {}",
        v.lhs,
        v.rhs
    );

    let at_c = axioms
        .violations
        .iter()
        .find(|v| {
            v.axiom == AxiomId::FirstCollinearity
                && v.tuple[0].as_str() == "A"
                && v.tuple[1].as_str() == "C"
        })
        .ok_or("no first-axiom violation at C")?;
    let (cd, cb) = (
        space.angle("A", "C", "D").unwrap().cos(),
        space.angle("A", "C", "B").unwrap().cos(),
    );
    ensure!((cd + 5.0 / 16.0).abs() <= 1e-12, "cos ACD = {cd}");
    ensure!((cb - 0.5).abs() <= 1e-12, "cos ACB = {cb}");
    let expected = (-5.0f64 / 16.0).acos() - 0.5f64.acos();
    ensure!(
        (at_c.residual.unwrap() - expected).abs() <= 1e-12,
        "residual {:?}",
        at_c.residual
    );
    ensure!(elapsed < Duration::from_millis(1), "took {elapsed:?}");
    Ok(format!(
        "lhs {} rhs {}; cosines at C {cd:.12} vs {cb:.12}; {elapsed:?}",
        v.lhs, v.rhs
    ))
}

struct RoundTrip {
    instances: Vec<(usize, GeneratedInstance)>,
}

fn generate_suite() -> Result<RoundTrip, String> {
    let mut instances = Vec::new();
    for i in 0..50 {
        let (m, n, k, seed) = instance(i);
        instances.push((
            m,
            gen_euclidean(m, n, seed, k).map_err(|e| format!("gen {i}: {e}"))?,
        ));
    }
    Ok(RoundTrip { instances })
}

fn criterion_2(suite: &RoundTrip) -> Verdict {
    let start = Instant::now();
    let (mut worst_metric, mut worst_angle, mut trivial) = (0.0f64, 0.0f64, 0);
    for (i, (m, g)) in suite.instances.iter().enumerate() {
        let space = &g.space;
        let axioms = check_all_axioms(space);
        ensure!(
            axioms.passed,
            "instance {i}: axioms {:?}",
            axioms.violations.first()
        );
        for r in [
            check_euclidean(space),
            check_second_axiom(space),
            check_tetragon_metrizability(space),
            check_global_compatibility(space),
        ] {
            ensure!(
                r.passed,
                "instance {i}: {} failed ({:e})",
                r.condition,
                r.max_residual()
            );
        }

        let a = space.label(0).as_str();
        let b = space.label(1).as_str();
        let lambda = g.metric.distance(a, b).unwrap();
        if *m == 1 {
            ensure!(
                matches!(
                    metrize(space, &BasePair::new(a, b, lambda).unwrap()),
                    Err(Error::TrivialSpace)
                ),
                "instance {i}: trivial space metrized"
            );
            trivial += 1;
        } else {
            let recovered = metrize(space, &BasePair::new(a, b, lambda).unwrap())
                .map_err(|e| format!("instance {i}: {e}"))?;
            let dev = rel_dev(&g.metric, &recovered);
            ensure!(dev <= 1e-9, "instance {i}: metric deviation {dev:e}");
            worst_metric = worst_metric.max(dev);
        }

        let coords =
            conformal_embed(space, *m, lambda).map_err(|e| format!("instance {i}: embed {e}"))?;
        let n = space.len();
        for bv in 0..n {
            for av in 0..n {
                for cv in av + 1..n {
                    if av == bv || cv == bv {
                        continue;
                    }
                    let truth = oracle_angle(
                        g.coordinates.row(av),
                        g.coordinates.row(bv),
                        g.coordinates.row(cv),
                    );
                    let got = oracle_angle(coords.row(av), coords.row(bv), coords.row(cv));
                    let err = (truth - got).abs();
                    ensure!(err <= 1e-8, "instance {i}: angle error {err:e}");
                    worst_angle = worst_angle.max(err);
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(format!(
        "50 instances ({trivial} on a line, metric not unique); max metric dev {worst_metric:.1e}, max angle err {worst_angle:.1e}; {elapsed:?}"
    ))
}

fn criterion_3(suite: &RoundTrip) -> Verdict {
    let mut worst = 0.0f64;
    let mut checked = 0;
    for (i, (_, g)) in suite.instances.iter().enumerate() {
        let space = &g.space;
        if admits_metric(space).trivial {
            continue;
        }
        let n = space.len();
        let first = BasePair::new(space.label(0).as_str(), space.label(1).as_str(), 1.0).unwrap();
        let last = BasePair::new(
            space.label(n - 2).as_str(),
            space.label(n - 1).as_str(),
            1.0,
        )
        .unwrap();
        let m1 = metrize(space, &first).map_err(|e| format!("instance {i}: {e}"))?;
        let m2 = metrize(space, &last).map_err(|e| format!("instance {i}: {e}"))?;
        let c = m1.get(n - 2, n - 1) / m2.get(n - 2, n - 1);
        let dev = rel_dev(&m1, &m2.scaled(c).unwrap());
        ensure!(dev <= 1e-9, "instance {i}: bases disagree by {dev:e}");
        worst = worst.max(dev);
        checked += 1;
    }
    Ok(format!(
        "{checked} non-trivial instances; max disagreement {worst:.1e}"
    ))
}

fn criterion_4() -> Verdict {
    let ri =
        simplex_volume_sq(&fixtures::right_isoceles_metric(), &["A", "B", "C"], &tol()).unwrap();
    ensure!(
        (ri.det - 1.0).abs() <= 1e-12,
        "right-isoceles D_2 = {}",
        ri.det
    );
    ensure!(
        matches!(ri.volume, Volume::Real(v) if (v - 0.5).abs() <= 1e-12),
        "right-isoceles volume"
    );

    let sq = simplex_volume_sq(
        &fixtures::unit_square_metric(),
        &["A", "B", "C", "D"],
        &tol(),
    )
    .unwrap();
    ensure!(sq.det.abs() <= 1e-12, "square D_3 = {}", sq.det);

    let tet = simplex_volume_sq(
        &fixtures::regular_tetrahedron_metric(),
        &["A", "B", "C", "D"],
        &tol(),
    )
    .unwrap();
    ensure!(
        (tet.det - 0.5).abs() <= 1e-12,
        "tetrahedron D_3 = {}",
        tet.det
    );
    ensure!(
        matches!(tet.volume, Volume::Real(v) if (v - SQRT_2 / 12.0).abs() <= 1e-12),
        "tetrahedron volume {:?}",
        tet.volume
    );

    let c = (PI / 3.0).cos();
    let tet_cos = determinant(3, &[1.0, c, c, c, 1.0, c, c, c, 1.0]);
    ensure!(
        (tet_cos - 0.5).abs() <= 1e-12,
        "tetrahedron cosine det {tet_cos}"
    );
    ensure!(
        !embeddable_angles(&fixtures::regular_tetrahedron_space(), 2).unwrap(),
        "tetrahedron accepted in E^2"
    );

    let square = fixtures::unit_square_space();
    let cos = |a, b, c| square.angle(a, b, c).unwrap().cos();
    let sq_cos = determinant(
        3,
        &[
            1.0,
            cos("B", "A", "C"),
            cos("B", "A", "D"),
            cos("C", "A", "B"),
            1.0,
            cos("C", "A", "D"),
            cos("D", "A", "B"),
            cos("D", "A", "C"),
            1.0,
        ],
    );
    ensure!(sq_cos.abs() <= 1e-12, "square cosine det {sq_cos}");
    ensure!(
        embeddable_angles(&square, 2).unwrap(),
        "square rejected in E^2"
    );
    Ok(format!(
        "D_2 {} D_3(square) {:.1e} D_3(tet) {} Vol_3 {:?}; cosine dets {tet_cos:.3} / {sq_cos:.1e}",
        ri.det, sq.det, tet.det, tet.volume
    ))
}

fn criterion_5(suite: &RoundTrip) -> Verdict {
    let (mut planar, mut spatial, mut compared) = (0, 0, 0);
    for seed in 0..10u64 {
        for n in [5, 6, 7] {
            let g = gen_euclidean(2, n, seed, 0).map_err(|e| e.to_string())?;
            let f = flatness_and_dimension(&g.metric, n - 1, &tol()).unwrap();
            ensure!(
                f.dimension == 2,
                "planar seed {seed}: dimension {}",
                f.dimension
            );
            for dim in 1..=4 {
                ensure!(
                    embeddable_metric(&g.metric, dim, &tol()) == (dim >= 2),
                    "planar seed {seed} n={dim}"
                );
            }
            planar += 1;

            let g = gen_euclidean(3, n, seed, 0).map_err(|e| e.to_string())?;
            let f = flatness_and_dimension(&g.metric, n - 1, &tol()).unwrap();
            ensure!(
                f.dimension == 3,
                "spatial seed {seed}: dimension {}",
                f.dimension
            );
            ensure!(
                !embeddable_metric(&g.metric, 2, &tol()),
                "spatial seed {seed} accepted in E^2"
            );
            ensure!(
                embeddable_metric(&g.metric, 3, &tol()),
                "spatial seed {seed} rejected in E^3"
            );
            spatial += 1;
        }
    }

    let mut spaces: Vec<AngleSpace> = suite
        .instances
        .iter()
        .map(|(_, g)| g.space.clone())
        .collect();
    spaces.extend([
        fixtures::equilateral_trigon(),
        fixtures::right_isoceles_trigon(),
        fixtures::unit_square_space(),
        fixtures::regular_pentagon_space(),
        fixtures::regular_tetrahedron_space(),
        fixtures::collinear_points(5),
    ]);
    for (i, space) in spaces.iter().enumerate() {
        ensure!(
            admits_metric(space).admits_metric,
            "space {i} not admissible"
        );
        let metric = if admits_metric(space).trivial {
            conformal_embed(space, 1, 1.0).and_then(|c| c.to_metric())
        } else {
            metrize(space, &BasePair::canonical(space, 1.0).unwrap())
        }
        .map_err(|e| format!("space {i}: {e}"))?;
        for dim in 1..=4 {
            let by_metric = embeddable_metric(&metric, dim, space.tolerance());
            let by_angles = embeddable_angles(space, dim).unwrap();
            ensure!(
                by_metric == by_angles,
                "space {i} n={dim}: metric {by_metric} vs angles {by_angles}"
            );
            compared += 1;
        }
    }
    Ok(format!(
        "{planar} planar and {spatial} spatial samples; {compared}/{compared} embeddability decisions agree"
    ))
}

fn tripped(space: &AngleSpace) -> Vec<Vec<String>> {
    [
        check_euclidean(space),
        check_second_axiom(space),
        check_tetragon_metrizability(space),
        check_global_compatibility(space),
    ]
    .into_iter()
    .flat_map(|r| r.violations)
    .map(|v| v.point_set().iter().map(|p| p.to_string()).collect())
    .collect()
}

fn criterion_6() -> Verdict {
    let mut trials = 0;
    for seed in 0..5u64 {
        let g = gen_euclidean(2, 6, 500 + seed, 0).map_err(|e| e.to_string())?;
        ensure!(
            admits_metric(&g.space).admits_metric,
            "seed {seed} not admissible"
        );
        for (a, b, c) in [("A", "B", "C"), ("C", "E", "F"), ("B", "F", "D")] {
            let theta = g.space.angle(a, b, c).unwrap();
            let delta = if theta + 0.01 <= PI { 0.01 } else { -0.01 };
            let bent = g.space.with_angle(a, b, c, theta + delta).unwrap();
            let hits = tripped(&bent);
            ensure!(
                !hits.is_empty(),
                "seed {seed}: 0.01 at ({a},{b},{c}) tripped nothing"
            );
            ensure!(
                hits.iter().all(|set| set.iter().any(|p| p == b)),
                "seed {seed}: violation away from vertex {b}"
            );
            let nudged = g.space.with_angle(a, b, c, theta + 1e-12).unwrap();
            ensure!(
                tripped(&nudged).is_empty(),
                "seed {seed}: 1e-12 at ({a},{b},{c}) tripped a check"
            );
            trials += 1;
        }
    }
    Ok(format!(
        "{trials} perturbations: 0.01 rad always caught at the vertex, 1e-12 rad never"
    ))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anglespace"))
        .args(args)
        .env_remove("ANGLESPACE_TOLERANCE")
        .output()
        .expect("binary runs")
}

fn criterion_7() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    };
    let square = write(
        "square.json",
        &serialize_space(&fixtures::unit_square_space()),
    );
    let stewart = write("stewart.json", &serialize_space(&fixtures::stewart_space()));
    let line = write(
        "line.json",
        &serialize_space(&fixtures::collinear_points(4)),
    );
    let tet = write(
        "tet.json",
        &serialize_space(&fixtures::regular_tetrahedron_space()),
    );
    let square_metric = write(
        "square-metric.json",
        &serialize_metric(&fixtures::unit_square_metric()),
    );
    let stewart_metric = write(
        "stewart-metric.json",
        &serialize_metric(&fixtures::stewart_metric()),
    );
    let malformed = write(
        "malformed.json",
        "{\"schema_version\": 1, \"points\": [\"A\"",
    );
    let bad_angle = write(
        "bad-angle.json",
        &serialize_space(&fixtures::equilateral_trigon()).replacen("1.0471975511965979", "3.5", 1),
    );
    let missing_pair = write(
        "missing.json",
        r#"{"schema_version":1,"points":["A","B","C"],"distances":[{"p":"A","q":"B","d":1.0}]}"#,
    );

    let cases: Vec<(&str, Vec<&str>, u8, Option<&str>)> = vec![
        ("validate pass", vec!["validate", &square], 0, None),
        (
            "validate fail",
            vec!["validate", &stewart],
            1,
            Some("first-axiom-of-collinearity"),
        ),
        ("validate malformed", vec!["validate", &malformed], 2, None),
        ("validate range", vec!["validate", &bad_angle], 2, None),
        (
            "metrize pass",
            vec!["metrize", &square, "--base", "A,B", "--scale", "2"],
            0,
            None,
        ),
        (
            "metrize trivial",
            vec!["metrize", &line],
            1,
            Some("trivial space: metric not unique"),
        ),
        ("metrize malformed", vec!["metrize", &malformed], 2, None),
        (
            "metrize bad base",
            vec!["metrize", &square, "--base", "A"],
            2,
            None,
        ),
        (
            "embed pass",
            vec!["embed", &square, "--dim", "2"],
            0,
            Some("\"coordinates\""),
        ),
        ("embed fail", vec!["embed", &tet, "--dim", "2"], 1, None),
        (
            "embed malformed",
            vec!["embed", &malformed, "--dim", "2"],
            2,
            None,
        ),
        (
            "from-metric pass",
            vec!["from-metric", &square_metric],
            0,
            Some("\"angles\""),
        ),
        (
            "from-metric fail",
            vec!["from-metric", &stewart_metric],
            1,
            Some("\"stewart\""),
        ),
        (
            "from-metric malformed",
            vec!["from-metric", &missing_pair],
            2,
            None,
        ),
        (
            "gen pass",
            vec![
                "gen",
                "--dim",
                "2",
                "--points",
                "6",
                "--seed",
                "9",
                "--collinear",
                "1",
            ],
            0,
            None,
        ),
        (
            "gen infeasible",
            vec![
                "gen",
                "--dim",
                "2",
                "--points",
                "4",
                "--seed",
                "9",
                "--collinear",
                "3",
            ],
            2,
            None,
        ),
        ("usage", vec!["frobnicate"], 2, None),
    ];
    for (name, args, code, needle) in &cases {
        let out = run(args);
        let got = out.status.code();
        ensure!(
            got == Some(i32::from(*code)),
            "{name}: exit {got:?}, expected {code}; stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        if let Some(needle) = needle {
            let stdout = String::from_utf8_lossy(&out.stdout);
            ensure!(stdout.contains(needle), "{name}: stdout lacks {needle}");
        }
    }
    let embed = run(&["embed", &square, "--dim", "2"]);
    let doc: serde_json::Value =
        serde_json::from_slice(&embed.stdout).map_err(|e| e.to_string())?;
    ensure!(
        doc["coordinates"].as_array().map(Vec::len) == Some(4),
        "square embedding lacks 4 coordinates"
    );

    let gen = [
        "gen",
        "--dim",
        "3",
        "--points",
        "7",
        "--seed",
        "77",
        "--collinear",
        "1",
    ];
    let (x, y) = (run(&gen), run(&gen));
    ensure!(
        x.stdout == y.stdout && !x.stdout.is_empty(),
        "gen output differs between runs"
    );
    let out_dir = dir.path().join("gen");
    let z = run(&[&gen[..], &["--out-dir", out_dir.to_str().unwrap()]].concat());
    ensure!(z.stdout == x.stdout, "gen --out-dir changed stdout");
    for f in ["coordinates.json", "metric.json", "space.json"] {
        ensure!(Path::new(&out_dir.join(f)).exists(), "missing {f}");
    }
    Ok(format!(
        "{} exit-code cases; gen byte-deterministic",
        cases.len()
    ))
}

fn main() {
    let suite = generate_suite();
    let with_suite = |f: fn(&RoundTrip) -> Verdict| match &suite {
        Ok(s) => f(s),
        Err(e) => Err(e.clone()),
    };
    let results = [
        ("1 Stewart rejection", criterion_1()),
        ("2 oracle round trip", with_suite(criterion_2)),
        ("3 uniqueness up to scale", with_suite(criterion_3)),
        ("4 determinant golden values", criterion_4()),
        ("5 dimension discrimination", with_suite(criterion_5)),
        ("6 negative controls", criterion_6()),
        ("7 CLI contract", criterion_7()),
    ];
    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({why})");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
