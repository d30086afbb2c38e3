use std::io::Write;
use std::process::ExitCode;

use alpha_futaki::ampleness::{infeasibility_scan, nakai_check_m};
use alpha_futaki::character::{kf_pipeline_ratio, kf_ruled_ratio, CharacterReport, RequiredRatio};
use alpha_futaki::exactnum::{parse_poly, parse_radial};
use alpha_futaki::family::{solvability_value, FamilySpec};
use alpha_futaki::integrate::{
    integrate_poly, integrate_poly_boundary, integrate_poly_facet, integrate_radial, volume,
};
use alpha_futaki::polytope::{standard_blowup_polytope, Polytope};
use alpha_futaki::verify::{self, RunManifest, DEFAULT_SEED};
use alpha_futaki::{Error, Rational};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

const EXIT_ERROR: u8 = 1;
const EXIT_HYPOTHESIS: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "alpha-futaki", version, about = "Exact alpha-Futaki character computations on blow-ups of P^n")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every stochastic step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Compute even when the J-equation solvability hypothesis fails.
    #[arg(long, global = true)]
    force: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct ClassArgs {
    /// Complex dimension n of the blow-up of P^n.
    #[arg(long)]
    n: usize,
    /// Coefficient of [H] in the bundle class a[H] - [E].
    #[arg(long)]
    a: Rational,
    /// Coefficient of [H] in the Kahler class b[H] - [E].
    #[arg(long)]
    b: Rational,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Boundary and bulk terms, required ratio and verdict for one class pair.
    Character {
        #[command(flatten)]
        class: ClassArgs,
        /// Coefficient of the boundary term (needs --alpha1).
        #[arg(long, requires = "alpha1", allow_hyphen_values = true)]
        alpha0: Option<Rational>,
        /// Coefficient of the bulk term (needs --alpha0).
        #[arg(long, requires = "alpha0", allow_hyphen_values = true)]
        alpha1: Option<Rational>,
    },
    /// Required ratio over a grid of (a, b), as CSV.
    Scan {
        /// Complex dimension n.
        #[arg(long)]
        n: usize,
        /// First value of a (inclusive).
        #[arg(long)]
        a_from: Rational,
        /// Last value of a (inclusive).
        #[arg(long)]
        a_to: Rational,
        /// First value of b (inclusive).
        #[arg(long)]
        b_from: Rational,
        /// Last value of b (inclusive).
        #[arg(long)]
        b_to: Rational,
        /// Grid spacing for both a and b.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        step: Rational,
    },
    /// Runs the self-check suite.
    #[command(visible_alias = "verify-paper")]
    Verify {
        /// Restrict to these check groups.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
    },
    /// Vertices, facets and volume of a polytope.
    Polytope {
        /// JSON file `{"n": .., "halfspaces": [{"v": [..], "lam": ".."}]}`.
        #[arg(long, conflicts_with_all = ["n", "b"])]
        file: Option<String>,
        /// Dimension of the slab P_n(b).
        #[arg(long, requires = "b")]
        n: Option<usize>,
        /// Outer level b > 1 of the slab.
        #[arg(long, requires = "n")]
        b: Option<Rational>,
    },
    /// Family constants, solvability and vertex images.
    Family {
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Exact integral of an expression in x1..xn (and X for slabs).
    Integrate {
        /// Polynomial in x1..xn, with X and negative powers of X allowed on slabs.
        #[arg(long)]
        expr: String,
        /// Dimension of the slab P_n(b).
        #[arg(long, requires = "b")]
        n: Option<usize>,
        /// Outer level b > 1 of the slab.
        #[arg(long)]
        b: Option<Rational>,
        /// Polytope JSON file instead of a slab.
        #[arg(long, conflicts_with_all = ["n", "b"])]
        polytope: Option<String>,
        /// Integrate over this facet (0-based) with the lattice measure.
        #[arg(long, conflicts_with = "boundary")]
        facet: Option<usize>,
        /// Integrate over the whole boundary.
        #[arg(long)]
        boundary: bool,
    },
    /// Keller-Friedman ratio on a ruled surface and its pipeline cross-check.
    KfCheck {
        /// Genus of the base curve.
        #[arg(long, default_value_t = 0)]
        genus: i64,
        /// Kähler class parameter k.
        #[arg(long, default_value_t = 1)]
        k: i64,
        /// Kähler class parameter k'.
        #[arg(long, default_value_t = 1)]
        kprime: i64,
        /// Bundle class parameter k1.
        #[arg(long, allow_hyphen_values = true)]
        k1: i64,
        /// Bundle class parameter k2.
        #[arg(long, allow_hyphen_values = true)]
        k2: i64,
    },
    /// Nakai-Moishezon check for a single (m1, m2) or a whole grid.
    AmpleCheck {
        /// First coordinate of (m1, m2).
        #[arg(long, requires = "m2", conflicts_with = "grid", allow_hyphen_values = true)]
        m1: Option<Rational>,
        /// Second coordinate of (m1, m2).
        #[arg(long, requires = "m1", allow_hyphen_values = true)]
        m2: Option<Rational>,
        /// Scan every integer pair in [-N, N]^2 plus random rationals.
        #[arg(long)]
        grid: Option<i64>,
    },
}

enum Failure {
    Error(String),
    Hypothesis(String),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotSolvable { .. } => Failure::Hypothesis(e.to_string()),
            other => Failure::Error(other.to_string()),
        }
    }
}

type CliResult = Result<(), Failure>;

/// `println!` that tolerates a closed stdout (e.g. piping into `head`).
macro_rules! out {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

fn print_json<T: Serialize>(value: &T) -> CliResult {
    let s = serde_json::to_string_pretty(value).map_err(|e| Failure::Error(e.to_string()))?;
    out!("{s}");
    Ok(())
}

fn load_polytope(path: &str) -> Result<Polytope, Failure> {
    let src = std::fs::read_to_string(path).map_err(|e| Failure::Error(format!("{path}: {e}")))?;
    Ok(Polytope::from_json(&src)?)
}

fn family_spec(class: &ClassArgs, force: bool) -> Result<FamilySpec, Failure> {
    if force {
        Ok(FamilySpec::new_unchecked(class.n, class.a.clone(), class.b.clone())?)
    } else {
        Ok(FamilySpec::new(class.n, class.a.clone(), class.b.clone())?)
    }
}

fn cmd_character(cli: &Cli, class: &ClassArgs, alpha0: &Option<Rational>, alpha1: &Option<Rational>) -> CliResult {
    let spec = family_spec(class, cli.force)?;
    let coupling = alpha0.clone().zip(alpha1.clone());
    let report = CharacterReport::compute(&spec, coupling)?;
    if report.hypothesis_violated {
        eprintln!("warning: hypothesis violated, the J-equation has no Calabi-symmetric solution for these classes");
    }
    print_json(&report)
}

#[derive(Serialize)]
struct ScanRow {
    n: usize,
    a: Rational,
    b: Rational,
    solvable: bool,
    #[serde(rename = "F_boundary")]
    f_boundary: Option<Rational>,
    #[serde(rename = "F_bulk")]
    f_bulk: Option<Rational>,
    ratio: Option<String>,
    verdict: &'static str,
}

fn range(from: &Rational, to: &Rational, step: &Rational) -> Result<Vec<Rational>, Failure> {
    if !step.is_positive() {
        return Err(Failure::Error("step must be positive".into()));
    }
    if from > to {
        return Err(Failure::Error(format!("empty range {from}..{to}")));
    }
    let mut out = Vec::new();
    let mut v = from.clone();
    while &v <= to {
        out.push(v.clone());
        v += step;
    }
    Ok(out)
}

fn scan_row(n: usize, a: Rational, b: Rational, force: bool) -> Result<ScanRow, Error> {
    let spec = FamilySpec::new_unchecked(n, a.clone(), b.clone())?;
    let solvable = spec.is_solvable();
    let mut row =
        ScanRow { n, a, b, solvable, f_boundary: None, f_bulk: None, ratio: None, verdict: "HypothesisViolated" };
    if !solvable && !force {
        return Ok(row);
    }
    let report = CharacterReport::compute(&spec, None)?;
    row.f_boundary = Some(report.boundary[0].exact.clone());
    row.f_bulk = Some(report.bulk[0].exact.clone());
    row.ratio = Some(report.required_ratio.to_string());
    if solvable {
        row.verdict = match &report.required_ratio {
            RequiredRatio::Value(r) if r.is_negative() => "ObstructedForPositiveAlpha",
            RequiredRatio::Value(_) => "ObstructedAtRatio",
            RequiredRatio::Undefined => "NoVanishingPossible",
            RequiredRatio::Unconstrained => "VanishesAtRatio",
        };
    }
    Ok(row)
}

#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    cli: &Cli,
    n: usize,
    a_from: &Rational,
    a_to: &Rational,
    b_from: &Rational,
    b_to: &Rational,
    step: &Rational,
) -> CliResult {
    let a_values = range(a_from, a_to, step)?;
    let b_values = range(b_from, b_to, step)?;
    let grid: Vec<(Rational, Rational)> =
        a_values.iter().flat_map(|a| b_values.iter().map(move |b| (a.clone(), b.clone()))).collect();
    let mut rows = grid.into_par_iter().map(|(a, b)| scan_row(n, a, b, cli.force)).collect::<Result<Vec<_>, _>>()?;
    rows.sort_by(|x, y| (&x.a, &x.b).cmp(&(&y.a, &y.b)));
    if cli.json {
        return print_json(&rows);
    }
    let mut writer = csv::Writer::from_writer(std::io::stdout().lock());
    for row in &rows {
        writer.serialize(row).map_err(|e| Failure::Error(e.to_string()))?;
    }
    // A closed stdout is not an error.
    let _ = writer.flush();
    Ok(())
}

#[derive(Serialize)]
struct VerifyOutput {
    manifest: RunManifest,
    report: verify::VerifyReport,
}

fn cmd_verify(cli: &Cli, only: &[String]) -> CliResult {
    let report = verify::run(cli.seed, only)?;
    let ok = report.all_passed();
    if cli.json {
        let manifest = RunManifest {
            command: "verify".into(),
            arguments: only.to_vec(),
            seed: Some(cli.seed),
            version: env!("CARGO_PKG_VERSION").into(),
            checks: report.checks.iter().map(|c| (format!("{}: {}", c.group, c.name), c.passed)).collect(),
        };
        print_json(&VerifyOutput { manifest, report })?;
    } else {
        for c in &report.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            out!("{mark}  {:<16} {:<28} {}  [{}]", c.group, c.name, c.formula, c.detail);
        }
        out!("{} passed, {} failed (seed {})", report.passed, report.failed, report.seed);
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

#[derive(Serialize)]
struct PolytopeSummary {
    n: usize,
    facets: Vec<alpha_futaki::polytope::HalfSpace>,
    pruned: usize,
    vertices: Vec<Vec<Rational>>,
    volume: Rational,
    delzant: bool,
}

fn cmd_polytope(file: &Option<String>, slab: Option<(usize, Rational)>) -> CliResult {
    let p = match (file, slab) {
        (Some(path), _) => load_polytope(path)?,
        (None, Some((n, b))) => standard_blowup_polytope(n, &b)?,
        (None, None) => return Err(Failure::Error("give --file or --n/--b".into())),
    };
    print_json(&PolytopeSummary {
        n: p.dim(),
        facets: p.halfspaces().to_vec(),
        pruned: p.pruned_count(),
        vertices: p.vertices().to_vec(),
        volume: volume(&p),
        delzant: p.is_delzant(),
    })
}

#[derive(Serialize)]
struct FamilySummary {
    spec: FamilySpec,
    solvability_value: Rational,
    bound: usize,
    minor_sum: String,
    vertex_images: Vec<(Vec<Rational>, Vec<Rational>)>,
}

fn cmd_family(cli: &Cli, class: &ClassArgs) -> CliResult {
    let spec = family_spec(class, cli.force)?;
    print_json(&FamilySummary {
        solvability_value: solvability_value(spec.n(), spec.a(), spec.b())?,
        bound: spec.n() - 1,
        minor_sum: spec.minor_sum_radial().to_string(),
        vertex_images: spec.vertex_images()?,
        spec,
    })
}

#[derive(Serialize)]
struct IntegralOutput {
    value: Rational,
    log_coeff: Rational,
    approx: f64,
}

fn cmd_integrate(
    cli: &Cli,
    expr: &str,
    slab: Option<(usize, Rational)>,
    polytope: &Option<String>,
    facet: Option<usize>,
    boundary: bool,
) -> CliResult {
    let (out, base) = match (slab, polytope) {
        (Some((n, b)), _) if facet.is_none() && !boundary => {
            let v = integrate_radial(n, &b, &parse_radial(n, expr)?)?;
            let approx = v.to_f64(&b);
            (IntegralOutput { value: v.rational, log_coeff: v.log_coeff, approx }, Some(b))
        }
        (slab, path) => {
            let p = match (slab, path) {
                (Some((n, b)), _) => standard_blowup_polytope(n, &b)?,
                (None, Some(path)) => load_polytope(path)?,
                (None, None) => return Err(Failure::Error("give --n/--b or --polytope".into())),
            };
            let f = parse_poly(p.dim(), expr)?;
            let v = match (facet, boundary) {
                (Some(i), _) => integrate_poly_facet(&p, i, &f)?,
                (None, true) => integrate_poly_boundary(&p, &f)?,
                (None, false) => integrate_poly(&p, &f)?,
            };
            let approx = v.to_f64();
            (IntegralOutput { value: v, log_coeff: Rational::zero(), approx }, None)
        }
    };
    if cli.json {
        return print_json(&out);
    }
    match base {
        Some(b) if !out.log_coeff.is_zero() && out.value.is_zero() => out!("{} log({b})", out.log_coeff),
        Some(b) if !out.log_coeff.is_zero() => out!("{} + {} log({b})", out.value, out.log_coeff),
        _ => out!("{}", out.value),
    }
    Ok(())
}

#[derive(Serialize)]
struct KfOutput {
    keller_friedman: alpha_futaki::character::KfRuled,
    pipeline_ratio: Option<Rational>,
    agrees: Option<bool>,
}

fn cmd_kf(genus: i64, k: i64, kprime: i64, k1: i64, k2: i64) -> CliResult {
    let kf = kf_ruled_ratio(genus, k, kprime, k1, k2)?;
    let pipeline = kf.bundle_plane.as_ref().and_then(|_| kf_pipeline_ratio(&kf).ok());
    let agrees = pipeline.as_ref().map(|p| p == &kf.ratio);
    print_json(&KfOutput { keller_friedman: kf, pipeline_ratio: pipeline, agrees })
}

fn cmd_ample(cli: &Cli, m1: &Option<Rational>, m2: &Option<Rational>, grid: Option<i64>) -> CliResult {
    match (m1, m2, grid) {
        (Some(m1), Some(m2), _) => print_json(&nakai_check_m(m1, m2)?),
        (_, _, Some(bound)) => print_json(&infeasibility_scan(bound, cli.seed)?),
        _ => Err(Failure::Error("give --m1 and --m2, or --grid".into())),
    }
}

fn dispatch(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Character { class, alpha0, alpha1 } => cmd_character(cli, class, alpha0, alpha1),
        Command::Scan { n, a_from, a_to, b_from, b_to, step } => cmd_scan(cli, *n, a_from, a_to, b_from, b_to, step),
        Command::Verify { only } => cmd_verify(cli, only),
        Command::Polytope { file, n, b } => cmd_polytope(file, n.zip(b.clone())),
        Command::Family { class } => cmd_family(cli, class),
        Command::Integrate { expr, n, b, polytope, facet, boundary } => {
            let slab = n.zip(b.clone());
            cmd_integrate(cli, expr, slab, polytope, *facet, *boundary)
        }
        Command::KfCheck { genus, k, kprime, k1, k2 } => cmd_kf(*genus, *k, *kprime, *k1, *k2),
        Command::AmpleCheck { m1, m2, grid } => cmd_ample(cli, m1, m2, *grid),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Error(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
        Err(Failure::Hypothesis(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("hint: pass --force to compute the formula anyway");
            ExitCode::from(EXIT_HYPOTHESIS)
        }
        Err(Failure::Verify) => ExitCode::from(EXIT_VERIFY),
    }
}
