//! The `origami` command line: runs construction scripts, exposes the
//! solvers and classifiers, and renders SVG figures.

pub mod svg;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use origami_core::conics::{common_tangents, dual, Conic, ConicError};
use origami_core::exactnum::{parse_literal, ExactError, ExactReal, Rational, Root};
use origami_core::fields::{self, FieldError};
use origami_core::folds::{Level, Trace};
use origami_core::geom::{Line, ProjLine};
use origami_core::script::{self, EvalError};
use origami_core::solvers::{self, SolveError};

use svg::{RenderError, Scene, Viewport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_EVAL: i32 = 3;
pub const EXIT_ASSERT: i32 = 4;
pub const EXIT_PRECISION: i32 = 5;
pub const EXIT_USAGE: i32 = 64;

/// Expressions longer than this many nodes are not printed in full.
const TREE_LIMIT: usize = 20_000;

#[derive(Parser, Debug)]
#[command(name = "origami", version, about = "Exact origami constructions, solvers and figures")]
struct Cli {
    /// Significant digits of decimal approximations.
    #[arg(long, global = true, default_value_t = 30)]
    digits: usize,
    /// Write the construction trace as JSON.
    #[arg(long, global = true, value_name = "PATH")]
    trace: Option<PathBuf>,
    /// Write an SVG figure.
    #[arg(long, global = true, value_name = "PATH")]
    svg: Option<PathBuf>,
    /// Figure viewport `xmin,ymin,xmax,ymax` (exact rationals).
    #[arg(long, global = true, value_name = "A,B,C,D", allow_hyphen_values = true)]
    viewport: Option<String>,
    /// Axiom level (thalian, pythagorean, euclidean, origami, reduced).
    #[arg(long, global = true, value_name = "NAME")]
    level: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a construction script.
    Run { script: PathBuf },
    /// Real roots of x^3 + a x + b by a single fold.
    SolveCubic {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Real roots of x^4 + a x^2 + b x + c from a conic pencil.
    SolveQuartic {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(allow_hyphen_values = true)]
        c: String,
    },
    /// The cosines of the thirds of the angle with cosine c.
    Trisect {
        #[arg(allow_hyphen_values = true)]
        c: String,
    },
    /// Whether the regular n-gon is constructible by folding.
    Ngon { n: u64 },
    /// Field classifiers.
    Classify {
        #[command(subcommand)]
        what: Classify,
    },
    /// Dual of the conic a x^2 + b xy + c y^2 + d x + e y + f = 0.
    Dual {
        #[command(flatten)]
        conic: ConicArgs,
    },
    /// Common tangents of two conics given by six coefficients each.
    Tangents {
        #[command(flatten)]
        first: ConicArgs,
        #[command(flatten)]
        second: SecondConicArgs,
    },
}

/// Coefficients of a x^2 + b xy + c y^2 + d x + e y + f.
#[derive(clap::Args, Debug)]
struct ConicArgs {
    #[arg(allow_hyphen_values = true)]
    a: String,
    #[arg(allow_hyphen_values = true)]
    b: String,
    #[arg(allow_hyphen_values = true)]
    c: String,
    #[arg(allow_hyphen_values = true)]
    d: String,
    #[arg(allow_hyphen_values = true)]
    e: String,
    #[arg(allow_hyphen_values = true)]
    f: String,
}

#[derive(clap::Args, Debug)]
struct SecondConicArgs {
    #[arg(allow_hyphen_values = true)]
    a2: String,
    #[arg(allow_hyphen_values = true)]
    b2: String,
    #[arg(allow_hyphen_values = true)]
    c2: String,
    #[arg(allow_hyphen_values = true)]
    d2: String,
    #[arg(allow_hyphen_values = true)]
    e2: String,
    #[arg(allow_hyphen_values = true)]
    f2: String,
}

impl ConicArgs {
    fn coeffs(&self) -> [&str; 6] {
        [&self.a, &self.b, &self.c, &self.d, &self.e, &self.f].map(String::as_str)
    }
}

impl SecondConicArgs {
    fn coeffs(&self) -> [&str; 6] {
        [&self.a2, &self.b2, &self.c2, &self.d2, &self.e2, &self.f2].map(String::as_str)
    }
}

#[derive(Subcommand, Debug)]
enum Classify {
    /// Whether a + b i (b^2 = BSQ) is Thalian.
    Thalian {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        bsq: String,
        /// b is given as a rational number.
        #[arg(long)]
        b_rational: bool,
    },
    /// Whether exp(2 pi i / m) is Thalian.
    Unity { m: u64 },
    /// Whether sqrt(p + q sqrt(r)) is totally real.
    TotallyReal {
        #[arg(allow_hyphen_values = true)]
        p: String,
        #[arg(allow_hyphen_values = true)]
        q: String,
        #[arg(allow_hyphen_values = true)]
        r: String,
    },
    /// The degree condition for a minimal polynomial, leading coefficient
    /// first (options go before the coefficients).
    Degree {
        #[arg(num_args = 2.., allow_hyphen_values = true)]
        coeffs: Vec<String>,
    },
}

/// Exit code and captured output of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }

    fn usage(message: impl Into<String>) -> Failure {
        Failure::new(EXIT_USAGE, message)
    }
}

fn exact_failure(e: ExactError) -> Failure {
    match e {
        ExactError::PrecisionExhausted { .. } => Failure::new(EXIT_PRECISION, e.to_string()),
        _ => Failure::new(EXIT_EVAL, e.to_string()),
    }
}

impl From<ExactError> for Failure {
    fn from(e: ExactError) -> Self {
        exact_failure(e)
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Exact(x) => exact_failure(x),
            other => Failure::new(EXIT_EVAL, other.to_string()),
        }
    }
}

impl From<FieldError> for Failure {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::Exact(x) => exact_failure(x),
            other => Failure::new(EXIT_EVAL, other.to_string()),
        }
    }
}

impl From<ConicError> for Failure {
    fn from(e: ConicError) -> Self {
        match e {
            ConicError::Exact(x) => exact_failure(x),
            other => Failure::new(EXIT_EVAL, other.to_string()),
        }
    }
}

impl From<RenderError> for Failure {
    fn from(e: RenderError) -> Self {
        match e {
            RenderError::Exact(x) => exact_failure(x),
            RenderError::EmptyViewport => Failure::usage(e.to_string()),
        }
    }
}

type Res<T> = Result<T, Failure>;

/// Run the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    let mut out = String::new();
    match execute(&cli, &mut out) {
        Ok(code) => Outcome { code, stdout: out, stderr: String::new() },
        Err(f) => Outcome { code: f.code, stdout: out, stderr: format!("error: {}\n", f.message) },
    }
}

fn literal(s: &str) -> Res<ExactReal> {
    parse_literal(s).map_err(|e| Failure::usage(format!("bad number '{s}': {e}")))
}

fn rational(s: &str) -> Res<Rational> {
    literal(s)?.as_rational().cloned().ok_or_else(|| Failure::usage(format!("'{s}' is not rational")))
}

fn parse_viewport(s: &str) -> Res<Viewport> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(Failure::usage("viewport needs four values xmin,ymin,xmax,ymax"));
    }
    let q = parts.iter().map(|p| rational(p.trim())).collect::<Res<Vec<_>>>()?;
    Ok(Viewport::new(q[0].clone(), q[1].clone(), q[2].clone(), q[3].clone())?)
}

fn conic(coeffs: [&str; 6]) -> Res<Conic> {
    let c = coeffs.iter().map(|s| literal(s)).collect::<Res<Vec<_>>>()?;
    let c: [ExactReal; 6] = c.try_into().map_err(|_| Failure::usage("a conic needs six coefficients"))?;
    Ok(Conic::from_coeffs(c)?)
}

fn expr_text(x: &ExactReal) -> String {
    if x.tree_size(TREE_LIMIT + 1) > TREE_LIMIT {
        format!("<expression with more than {TREE_LIMIT} nodes>")
    } else {
        x.expr_string()
    }
}

fn approx(x: &ExactReal, digits: usize) -> Res<String> {
    Ok(format!("≈ {}", x.to_decimal(digits)?))
}

fn print_roots(out: &mut String, roots: &[Root], digits: usize) -> Res<()> {
    if roots.is_empty() {
        writeln!(out, "no real roots").unwrap();
    }
    for r in roots {
        write!(out, "root: {} {}", expr_text(&r.value), approx(&r.value, digits)?).unwrap();
        if r.multiplicity > 1 {
            write!(out, " (multiplicity {})", r.multiplicity).unwrap();
        }
        writeln!(out).unwrap();
    }
    Ok(())
}

/// Exact coefficients printed in full up to this length.
const SHORT_LINE: usize = 120;

/// `y ≈ m x + k` (or `x ≈ k`), followed by the exact coefficients when short.
fn print_line(l: &Line, digits: usize) -> Res<String> {
    let mut text = match l.slope().map_err(|e| Failure::new(EXIT_EVAL, e.to_string()))? {
        Some(m) => {
            let k = l.c().div(l.b())?.neg();
            let (op, k) = if k.sign()? == origami_core::exactnum::Sign::Negative { ("-", k.neg()) } else { ("+", k) };
            format!("y ≈ {} x {op} {}", m.to_decimal(digits)?, k.to_decimal(digits)?)
        }
        None => format!("x ≈ {}", l.c().neg().to_decimal(digits)?),
    };
    let exact = l.to_string();
    if exact.chars().count() <= SHORT_LINE {
        text.push_str(&format!("  exact {exact}"));
    }
    Ok(text)
}

fn write_file(path: &Path, text: &str) -> Res<()> {
    fs::write(path, text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn outputs(cli: &Cli, trace: Option<&Trace>, scene: Option<Scene>) -> Res<()> {
    if let Some(path) = &cli.trace {
        let trace = trace.ok_or_else(|| Failure::usage("this command produces no trace"))?;
        write_file(path, &trace.to_json())?;
    }
    if let Some(path) = &cli.svg {
        let scene = scene.ok_or_else(|| Failure::usage("this command produces no figure"))?;
        let vp = match &cli.viewport {
            Some(v) => parse_viewport(v)?,
            None => scene.auto_viewport(),
        };
        write_file(path, &svg::render(&scene, &vp, svg::DEFAULT_SIZE)?)?;
    }
    Ok(())
}

fn execute(cli: &Cli, out: &mut String) -> Res<i32> {
    let digits = cli.digits.max(1);
    if let Some(v) = &cli.viewport {
        parse_viewport(v)?;
    }
    let level: Option<Level> = match &cli.level {
        Some(s) => Some(s.parse().map_err(Failure::usage)?),
        None => None,
    };
    match &cli.command {
        Command::Run { script } => return run_script(cli, script, level, out),
        Command::SolveCubic { a, b } => {
            let (roots, trace) = solvers::cubic_by_fold(&literal(a)?, &literal(b)?)?;
            print_roots(out, &roots, digits)?;
            outputs(cli, Some(&trace), Some(Scene::from_trace(&trace)))?;
        }
        Command::SolveQuartic { a, b, c } => {
            let roots = solvers::quartic_roots(&literal(a)?, &literal(b)?, &literal(c)?)?;
            print_roots(out, &roots, digits)?;
            outputs(cli, None, None)?;
        }
        Command::Trisect { c } => {
            let (roots, trace) = solvers::trisect_with_trace(&literal(c)?)?;
            print_roots(out, &roots, digits)?;
            outputs(cli, Some(&trace), Some(Scene::from_trace(&trace)))?;
        }
        Command::Ngon { n } => {
            let (_, cert) = fields::ngon_constructible(*n)?;
            writeln!(out, "{cert}").unwrap();
        }
        Command::Classify { what } => classify(what, digits, out)?,
        Command::Dual { conic: args } => {
            let d = dual(&conic(args.coeffs())?)?;
            writeln!(out, "dual: {}", normalized(&d)?.equation_in("u", "v")).unwrap();
            writeln!(out, "(tangent lines u x + v y + 1 = 0)").unwrap();
        }
        Command::Tangents { first, second } => {
            let (a, b) = (conic(first.coeffs())?, conic(second.coeffs())?);
            let tangents = common_tangents(&a, &b)?;
            let mut scene = Scene { conics: vec![a, b], ..Scene::default() };
            for (i, t) in tangents.iter().enumerate() {
                match t {
                    ProjLine::Infinity => writeln!(out, "tangent: line at infinity").unwrap(),
                    ProjLine::Finite(l) => {
                        writeln!(out, "tangent: {}", print_line(l, digits)?).unwrap();
                        scene.lines.push((Some(format!("t{}", i + 1)), l.clone()));
                    }
                }
            }
            outputs(cli, None, Some(scene))?;
        }
    }
    Ok(EXIT_OK)
}

/// The conic scaled so its first nonzero coefficient is 1.
fn normalized(c: &Conic) -> Res<Conic> {
    let coeffs = c.coeffs();
    for k in &coeffs {
        if k.sign()? != origami_core::exactnum::Sign::Zero {
            let scaled = coeffs.clone().map(|x| x.div(k));
            let scaled: Vec<ExactReal> = scaled.into_iter().collect::<Result<_, _>>()?;
            return Ok(Conic::from_coeffs(scaled.try_into().unwrap())?);
        }
    }
    Ok(c.clone())
}

fn classify(what: &Classify, digits: usize, out: &mut String) -> Res<()> {
    match what {
        Classify::Thalian { a, bsq, b_rational } => {
            let c = fields::thalian_classify(&rational(a)?, &rational(bsq)?, *b_rational)?;
            writeln!(out, "{c}").unwrap();
        }
        Classify::Unity { m } => {
            let t = fields::root_of_unity_thalian(*m)?;
            let verdict = if t { "Thalian (4 divides m)" } else { "non-Thalian (4 does not divide m)" };
            writeln!(out, "exp(2πi/{m}): {verdict}").unwrap();
        }
        Classify::TotallyReal { p, q, r } => {
            let c = fields::totally_real_quadratic(&rational(p)?, &rational(q)?, &rational(r)?)?;
            writeln!(out, "{c}").unwrap();
            if let fields::Certificate::Conjugates { conjugate, .. } = &c.certificate {
                writeln!(out, "conjugate {}", approx(conjugate, digits)?).unwrap();
            }
        }
        Classify::Degree { coeffs } => {
            let c = coeffs.iter().map(|s| rational(s)).collect::<Res<Vec<_>>>()?;
            let class = fields::origami_degree_check(&c)?;
            writeln!(out, "{class}").unwrap();
        }
    }
    Ok(())
}

fn run_script(cli: &Cli, path: &Path, level: Option<Level>, out: &mut String) -> Res<i32> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let program = script::parse(&text).map_err(|e| Failure::new(EXIT_PARSE, format!("{}:{e}", path.display())))?;
    let ev = script::eval_at(&program, level).map_err(|e| {
        let code = match e {
            EvalError::PrecisionExhausted { .. } => EXIT_PRECISION,
            _ => EXIT_EVAL,
        };
        Failure::new(code, format!("{}: {e}", path.display()))
    })?;
    for (a, failure) in ev.assertions.iter().zip(assertion_failures(&ev)) {
        match failure {
            None => writeln!(out, "ok   {}: {}", a.line, a.text).unwrap(),
            Some(e) => writeln!(out, "FAIL {e}").unwrap(),
        }
    }
    let failed = ev.failures().len();
    writeln!(out, "{} assertion(s), {} failed", ev.assertions.len(), failed).unwrap();
    let trace = ev.construction.trace();
    outputs(cli, Some(trace), Some(Scene::from_trace(trace)))?;
    Ok(if failed > 0 { EXIT_ASSERT } else { EXIT_OK })
}

/// The failure matching each assertion report, in order.
fn assertion_failures(ev: &script::Evaluation) -> Vec<Option<&EvalError>> {
    let mut failures = ev.failures().iter();
    ev.assertions.iter().map(|a| if a.passed { None } else { failures.next() }).collect()
}
