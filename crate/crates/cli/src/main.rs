//! `anglespace` command-line tool.
//!
//! Documents go to stdout, diagnostics and summaries to stderr.
//! Exit codes: 0 success, 1 a check failed, 2 invalid input or usage.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anglespace::axioms::{check_all_axioms, AxiomReport};
use anglespace::io::{to_json, CoordinatesDocument, MetricDocument, SpaceDocument};
use anglespace::{
    admits_metric, angles_from_metric, conformal_embed, gen_euclidean, metrize, AngleSpace,
    BasePair, CheckReport, DistanceMatrix, Error, ToleranceConfig,
};
use anyhow::Context;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "anglespace",
    version,
    about = "Check, metrize and embed finite angle spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms and compatibility conditions of a space document.
    Validate {
        /// Space document, or `-` for stdin.
        input: PathBuf,
    },
    /// Reconstruct the distance from the angles of a space document.
    Metrize {
        input: PathBuf,
        /// Base pair `A,B`; defaults to the first two points.
        #[arg(long, value_parser = parse_base)]
        base: Option<(String, String)>,
        /// Distance assigned to the base pair.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
    /// Realize a space document in `E^dim`.
    Embed {
        input: PathBuf,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
    /// Derive the angle space of a metric document.
    FromMetric { input: PathBuf },
    /// Generate a seeded euclidean instance.
    Gen {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        points: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        collinear: usize,
        /// Also write `coordinates.json`, `metric.json` and `space.json` here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn parse_base(raw: &str) -> Result<(String, String), String> {
    match raw.split(',').map(str::trim).collect::<Vec<_>>()[..] {
        [a, b] if !a.is_empty() && !b.is_empty() => Ok((a.to_string(), b.to_string())),
        _ => Err(format!("expected two labels `A,B`, got `{raw}`")),
    }
}

enum Failure {
    /// Malformed input or arguments: exit 2.
    Input(anyhow::Error),
    /// A check failed: exit 1, after printing `report` to stdout.
    Check { message: String, report: Value },
}

type Outcome = Result<(), Failure>;

fn input_err(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Input(e.into())
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .context("reading stdin")
            .map_err(input_err)?;
        Ok(s)
    } else {
        fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(input_err)
    }
}

fn tolerance() -> Result<ToleranceConfig, Failure> {
    ToleranceConfig::from_env()
        .context("ANGLESPACE_TOLERANCE")
        .map_err(input_err)
}

fn load_space(path: &Path) -> Result<AngleSpace, Failure> {
    let text = read_input(path)?;
    let defaults = tolerance()?;
    SpaceDocument::parse(&text)
        .and_then(|doc| doc.to_space(defaults))
        .with_context(|| format!("invalid space document {}", path.display()))
        .map_err(input_err)
}

fn emit(text: &str) {
    let mut out = io::stdout().lock();
    // A closed pipe is not worth a panic.
    let _ = out.write_all(text.as_bytes());
}

fn summarize(name: &str, passed: bool, count: usize) {
    let verdict = if passed { "pass" } else { "FAIL" };
    eprintln!(
        "{verdict:>4}  {name} ({count} violation{})",
        if count == 1 { "" } else { "s" }
    );
}

fn summarize_checks(axioms: &AxiomReport, reports: &[CheckReport]) {
    summarize("axioms", axioms.passed, axioms.violations.len());
    for v in axioms.violations.iter().take(5) {
        let tuple: Vec<&str> = v.tuple.iter().map(|p| p.as_str()).collect();
        eprintln!("      {}: ({}) {}", v.axiom, tuple.join(","), v.detail);
    }
    for r in reports {
        summarize(&r.condition.to_string(), r.passed, r.violations.len());
        for v in r.violations.iter().take(5) {
            let pts: Vec<&str> = v.points.iter().map(|p| p.as_str()).collect();
            eprintln!(
                "      ({}) lhs {} rhs {} residual {:e}",
                pts.join(","),
                v.lhs,
                v.rhs,
                v.residual
            );
        }
    }
}

fn validate(input: &Path) -> Outcome {
    let space = load_space(input)?;
    let axioms = check_all_axioms(&space);
    let decision = admits_metric(&space);
    let passed = axioms.passed && decision.reports.iter().all(|r| r.passed);
    summarize_checks(&axioms, &decision.reports);
    let report = json!({
        "command": "validate",
        "passed": passed,
        "axioms": axioms,
        "admits_metric": decision.admits_metric,
        "unique_up_to_scale": decision.unique_up_to_scale,
        "trivial": decision.trivial,
        "conditions": decision.reports,
    });
    if passed {
        emit(&to_json(&report));
        Ok(())
    } else {
        Err(Failure::Check {
            message: "space failed validation".into(),
            report,
        })
    }
}

fn check_failure(command: &str, e: Error) -> Failure {
    let mut report = json!({ "command": command, "passed": false, "error": e.to_string() });
    match &e {
        Error::NotMetrizable(d) => report["decision"] = json!(d),
        Error::Stewart(r) => report["stewart"] = json!(r),
        _ => {}
    }
    Failure::Check {
        message: e.to_string(),
        report,
    }
}

fn run_metrize(input: &Path, base: Option<(String, String)>, scale: f64) -> Outcome {
    let space = load_space(input)?;
    let base = match base {
        Some((a, b)) => {
            space
                .index_of(&a)
                .and_then(|_| space.index_of(&b))
                .map_err(input_err)?;
            BasePair::new(&a, &b, scale)
        }
        None => BasePair::canonical(&space, scale),
    }
    .map_err(input_err)?;
    let metric = metrize(&space, &base).map_err(|e| check_failure("metrize", e))?;
    eprintln!(
        "metrized {} points from base ({},{}) = {}",
        space.len(),
        base.a,
        base.b,
        base.lambda
    );
    emit(&MetricDocument::from_metric(&metric).to_json());
    Ok(())
}

fn run_embed(input: &Path, dim: usize, scale: f64) -> Outcome {
    let space = load_space(input)?;
    if !(scale.is_finite() && scale > 0.0) {
        return Err(input_err(Error::InvalidScale(scale)));
    }
    let coords = conformal_embed(&space, dim, scale).map_err(|e| check_failure("embed", e))?;
    eprintln!("embedded {} points in E^{dim}", space.len());
    emit(&CoordinatesDocument::from_coordinates(&coords).to_json());
    Ok(())
}

fn run_from_metric(input: &Path) -> Outcome {
    let text = read_input(input)?;
    let metric: DistanceMatrix = MetricDocument::parse(&text)
        .and_then(|d| d.to_metric())
        .with_context(|| format!("invalid metric document {}", input.display()))
        .map_err(input_err)?;
    let space =
        angles_from_metric(&metric, &tolerance()?).map_err(|e| check_failure("from-metric", e))?;
    eprintln!(
        "derived angles for {} points ({} collinear triples)",
        space.len(),
        space.betweenness().canonical_triples().count()
    );
    emit(&SpaceDocument::from_space(&space).to_json());
    Ok(())
}

fn run_gen(
    dim: usize,
    points: usize,
    seed: u64,
    collinear: usize,
    out_dir: Option<PathBuf>,
) -> Outcome {
    let instance = gen_euclidean(dim, points, seed, collinear).map_err(|e| match e {
        Error::InfeasibleGenerator(_) => input_err(e),
        e => check_failure("gen", e),
    })?;
    let docs = instance.documents();
    if let Some(dir) = out_dir {
        fs::create_dir_all(&dir)
            .with_context(|| format!("creating {}", dir.display()))
            .map_err(input_err)?;
        for (name, text) in [
            ("coordinates.json", docs.coordinates.to_json()),
            ("metric.json", docs.metric.to_json()),
            ("space.json", docs.space.to_json()),
        ] {
            let path = dir.join(name);
            fs::write(&path, text)
                .with_context(|| format!("writing {}", path.display()))
                .map_err(input_err)?;
            eprintln!("wrote {}", path.display());
        }
    }
    emit(&to_json(&docs));
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Validate { input } => validate(&input),
        Command::Metrize { input, base, scale } => run_metrize(&input, base, scale),
        Command::Embed { input, dim, scale } => run_embed(&input, dim, scale),
        Command::FromMetric { input } => run_from_metric(&input),
        Command::Gen {
            dim,
            points,
            seed,
            collinear,
            out_dir,
        } => run_gen(dim, points, seed, collinear, out_dir),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check { message, report }) => {
            emit(&to_json(&report));
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
