//! Command-line surface: input resolution (files or `builtin:` names), JSON
//! run reports and the exit-code contract (0 success, 2 input error,
//! 3 obstruction detected).

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cecoh::{cohomology_dim, Representation};
use crate::dyncoh::{
    harmonic_dims, hodge_decompose, random_closed_one_form, roundtrip_error, AbelianCocycle, Cochain, DynError,
};
use crate::heis::{
    attempt_solve_multiplication, heisenberg_gh_check, multiplication_symbol, HeisVerdict, HeisenbergAction,
    MultiplicationOutcome, SchrodingerModel, DEFAULT_RADIUS, DEFAULT_STEP, DEFAULT_TOL,
};
use crate::liealg::{
    classify_2step_dim1, classify_codim1_coordinate, counterexample_g23, Codim1Verdict, LieAlgebra, Subspace,
};
use crate::rational::{format_q, parse_q, Q};
use crate::torus::{
    diophantine_scan, laplacian_symbol, solve_laplacian, solve_vectorfield, tame_constant_estimate, ActionFile,
    FourierSeries, ScanVerdict, TorusError, TranslationAction,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_OBSTRUCTION: i32 = 3;

/// Largest parameter accepted in `builtin:name:p`.
const BUILTIN_PARAM_MAX: usize = 64;

#[derive(Debug, Parser)]
#[command(name = "hypolab", version, about = "Computations around globally hypoelliptic R^k-actions")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Diophantine exponent.
    #[arg(long, global = true)]
    pub tau: Option<f64>,
    /// Frequency radius (scan radius, or cochain support for random inputs).
    #[arg(long, global = true)]
    pub radius: Option<u64>,
    /// Cochain degree.
    #[arg(long, global = true)]
    pub degree: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Add wall-clock time to the report (makes it run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lower central series, center and classification of a Lie algebra.
    Algebra { sub: AlgebraSub, input: String },
    /// Chevalley–Eilenberg cohomology dimensions.
    Cohomology { rep: RepKind, input: String },
    /// Diophantine scan, small-divisor solver and tame constants on a torus.
    Torus {
        sub: TorusSub,
        action: String,
        /// Fourier series `v` for `solve`.
        series: Option<String>,
        /// Solve `X_j u = v` instead of `Δ u = v` (0-based).
        #[arg(long)]
        generator: Option<usize>,
        /// Random trials per row of the tame table.
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Hodge decomposition and cocycle round trip for cochains.
    Cochain {
        sub: CochainSub,
        action: String,
        /// Cochain file; a seeded random cochain is used when absent.
        cochain: Option<String>,
        /// Modes per component of random cochains.
        #[arg(long, default_value_t = 4)]
        modes: usize,
    },
    /// Necessary GH conditions and the Schrödinger-model obstruction.
    Heisenberg {
        sub: HeisSub,
        /// Heisenberg action for `check`.
        action: Option<String>,
        #[arg(long, default_value_t = 1)]
        g: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Grid half-width.
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        extent: f64,
        /// Grid step.
        #[arg(long, default_value_t = DEFAULT_STEP)]
        step: f64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Profile::Gaussian)]
        profile: Profile,
    },
    /// The bracket of lifts in the free 3-step nilpotent algebra on two generators.
    Counterexample {
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        beta: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgebraSub {
    Info,
    Classify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RepKind {
    Trivial,
    Adjoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TorusSub {
    Scan,
    Solve,
    Tame,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CochainSub {
    Hodge,
    Roundtrip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HeisSub {
    Check,
    Witness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Profile {
    /// `e^{-|x|²}`, nonzero at the origin.
    Gaussian,
    /// `4π²(x_1² + .. + x_k²) e^{-|x|²}`, whose quotient is `e^{-|x|²}`.
    Cancellation,
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{0}")]
pub struct CliError(pub String);

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError(e.to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<Value>,
    pub parameters: Value,
    pub results: Value,
    pub summary: Vec<String>,
    pub verdict: String,
    pub exit_code: i32,
    pub wall_clock_seconds: Option<f64>,
}

impl RunReport {
    fn new(parameters: Value, results: Value, summary: Vec<String>, verdict: impl Into<String>, exit_code: i32) -> Self {
        RunReport {
            command: String::new(),
            inputs: Vec::new(),
            parameters,
            results,
            summary,
            verdict: verdict.into(),
            exit_code,
            wall_clock_seconds: None,
        }
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        m.insert("inputs".into(), json!(self.inputs));
        m.insert("parameters".into(), self.parameters.clone());
        m.insert("results".into(), self.results.clone());
        m.insert("summary".into(), json!(self.summary));
        m.insert("verdict".into(), json!(self.verdict));
        m.insert("exit_code".into(), json!(self.exit_code));
        if let Some(t) = self.wall_clock_seconds {
            m.insert("wall_clock_seconds".into(), json!(t));
        }
        Value::Object(m)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Parses `args` (program name first) without running anything.
pub fn parse_args<I, T>(args: I) -> Result<Cli, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(args).map_err(|e| CliError(e.render().to_string().trim_end().to_string()))
}

/// Parses `args` (program name first), runs the command, writes the report
/// and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let mut report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    report.command = std::iter::once("hypolab".to_string()).chain(echo).collect::<Vec<_>>().join(" ");
    if cli.common.timing {
        report.wall_clock_seconds = Some(start.elapsed().as_secs_f64());
    }
    let text = report.to_json();
    match &cli.common.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_INPUT;
            }
        }
        None => print!("{text}"),
    }
    report.exit_code
}

/// Runs a parsed command. The `command` field is left for the caller.
pub fn execute(cli: &Cli) -> Result<RunReport, CliError> {
    let c = &cli.common;
    let mut inputs = Vec::new();
    let mut report = match &cli.command {
        Command::Algebra { sub, input } => {
            let alg = load_algebra(input, &mut inputs)?;
            match sub {
                AlgebraSub::Info => algebra_info(&alg),
                AlgebraSub::Classify => algebra_classify(&alg),
            }
        }
        Command::Cohomology { rep, input } => {
            let alg = load_algebra(input, &mut inputs)?;
            cohomology(alg, *rep, c.degree)?
        }
        Command::Torus { sub, action, series, generator, trials } => {
            let act = load_torus(action, &mut inputs)?;
            match sub {
                TorusSub::Scan => torus_scan(&act, c)?,
                TorusSub::Solve => {
                    let source = series.as_deref().ok_or_else(|| CliError("torus solve needs a series input".into()))?;
                    let v = load_series(source, act.d(), &mut inputs)?;
                    torus_solve(&act, &v, *generator)?
                }
                TorusSub::Tame => torus_tame(&act, c, *trials)?,
            }
        }
        Command::Cochain { sub, action, cochain, modes } => {
            let act = load_torus(action, &mut inputs)?;
            let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
            let radius = c.radius.unwrap_or(3) as i64;
            let omega = match cochain {
                Some(source) => load_cochain(source, &act, &mut inputs)?,
                None => {
                    let (w, label) = match sub {
                        CochainSub::Hodge => {
                            let degree = c.degree.unwrap_or(1);
                            if degree > act.k() {
                                return Err(CliError(format!("degree {degree} exceeds k = {}", act.k())));
                            }
                            (
                                Cochain::random(&act, degree, radius, *modes, &mut rng),
                                format!("random(degree={degree}, radius={radius}, modes={modes}, seed={})", c.seed),
                            )
                        }
                        CochainSub::Roundtrip => (
                            random_closed_one_form(&act, radius, *modes, &mut rng),
                            format!("random-closed(radius={radius}, modes={modes}, seed={})", c.seed),
                        ),
                    };
                    record(&mut inputs, &label, w.to_json().as_bytes());
                    w
                }
            };
            match sub {
                CochainSub::Hodge => cochain_hodge(&omega)?,
                CochainSub::Roundtrip => cochain_roundtrip(&omega, &mut rng)?,
            }
        }
        Command::Heisenberg { sub, action, g, k, extent, step, tol, profile } => match sub {
            HeisSub::Check => {
                let source = action.as_deref().ok_or_else(|| CliError("heisenberg check needs an action".into()))?;
                let act = load_heis(source, &mut inputs)?;
                heis_check(&act, c)?
            }
            HeisSub::Witness => {
                let model = SchrodingerModel::new(*g, *k, *extent, *step, *tol).map_err(input_err)?;
                heis_witness(&model, *profile)?
            }
        },
        Command::Counterexample { beta } => {
            let beta = parse_q(beta).map_err(|e| CliError(format!("--beta: {e}")))?;
            counterexample(&beta, c.seed)
        }
    };
    report.inputs = inputs;
    Ok(report)
}

fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn record(inputs: &mut Vec<Value>, source: &str, bytes: &[u8]) {
    inputs.push(json!({ "input": source, "sha256": digest(bytes) }));
}

fn read_input(path: &str, inputs: &mut Vec<Value>) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError(format!("cannot read {path}: {e}")))?;
    record(inputs, path, &bytes);
    String::from_utf8(bytes).map_err(|_| CliError(format!("{path} is not UTF-8")))
}

/// `builtin:name` or `builtin:name:param`.
fn builtin(source: &str) -> Option<(&str, Option<&str>)> {
    let rest = source.strip_prefix("builtin:")?;
    Some(match rest.split_once(':') {
        Some((name, p)) => (name, Some(p)),
        None => (rest, None),
    })
}

fn builtin_param(source: &str, p: Option<&str>, min: usize) -> Result<usize, CliError> {
    let p = p.ok_or_else(|| CliError(format!("{source}: missing parameter")))?;
    match p.parse::<usize>() {
        Ok(v) if (min..=BUILTIN_PARAM_MAX).contains(&v) => Ok(v),
        _ => Err(CliError(format!("{source}: parameter must be an integer in {min}..={BUILTIN_PARAM_MAX}"))),
    }
}

fn unknown_builtin(source: &str, known: &str) -> CliError {
    CliError(format!("unknown builtin {source}; expected one of {known}"))
}

fn load_algebra(source: &str, inputs: &mut Vec<Value>) -> Result<LieAlgebra, CliError> {
    let alg = match builtin(source) {
        Some((name, p)) => {
            let alg = match (name, p) {
                ("heisenberg", _) => LieAlgebra::heisenberg(builtin_param(source, p, 1)?),
                ("filiform", _) => LieAlgebra::filiform(builtin_param(source, p, 1)?),
                ("abelian", _) => LieAlgebra::abelian(builtin_param(source, p, 1)?),
                ("g23", None) => LieAlgebra::free_nilpotent_2_3(),
                _ => return Err(unknown_builtin(source, "heisenberg:g, filiform:g, abelian:n, g23")),
            };
            record(inputs, source, alg.to_json().as_bytes());
            alg
        }
        None => LieAlgebra::from_json(&read_input(source, inputs)?).map_err(input_err)?,
    };
    let jacobi = alg.jacobi_check();
    if let Some(&(a, b, c)) = jacobi.violations.first() {
        let n = alg.names();
        return Err(CliError(format!(
            "Jacobi identity fails on ({}, {}, {}) = basis indices ({a}, {b}, {c})",
            n[a], n[b], n[c]
        )));
    }
    Ok(alg)
}

fn load_torus(source: &str, inputs: &mut Vec<Value>) -> Result<TranslationAction, CliError> {
    match builtin(source) {
        Some((name, p)) => {
            let act = match (name, p) {
                ("golden", None) => TranslationAction::golden(),
                ("golden-2d", None) => TranslationAction::golden_2d(),
                ("golden-k", _) => TranslationAction::golden_k(builtin_param(source, p, 1)?),
                ("rational-half", None) => TranslationAction::rational_half(),
                ("liouville", _) => {
                    let terms = builtin_param(source, p, 1)?;
                    if terms > 6 {
                        return Err(CliError(format!("{source}: at most 6 terms")));
                    }
                    TranslationAction::liouville(terms as u32)
                }
                _ => return Err(unknown_builtin(source, "golden, golden-2d, golden-k:k, rational-half, liouville:m")),
            };
            let canonical = serde_json::to_string(&ActionFile::from(&act)).expect("action serializes");
            record(inputs, source, canonical.as_bytes());
            Ok(act)
        }
        None => TranslationAction::from_json(&read_input(source, inputs)?).map_err(input_err),
    }
}

fn load_series(source: &str, d: usize, inputs: &mut Vec<Value>) -> Result<FourierSeries, CliError> {
    match builtin(source) {
        Some(("mode", Some(p))) => {
            let n = p
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| CliError(format!("{source}: expected comma-separated integers")))?;
            if n.len() != d {
                return Err(CliError(format!("{source}: frequency has {} entries, torus dimension is {d}", n.len())));
            }
            let v = FourierSeries::mode(n, Complex64::new(1.0, 0.0));
            record(inputs, source, v.to_json().as_bytes());
            Ok(v)
        }
        Some(_) => Err(unknown_builtin(source, "mode:n1,..,nd")),
        None => FourierSeries::from_json(&read_input(source, inputs)?, Some(d)).map_err(input_err),
    }
}

fn load_cochain(source: &str, act: &TranslationAction, inputs: &mut Vec<Value>) -> Result<Cochain, CliError> {
    if builtin(source).is_some() {
        return Err(CliError(format!("{source}: cochains are read from files; omit the argument for a random one")));
    }
    Cochain::from_json(&read_input(source, inputs)?, act).map_err(input_err)
}

fn load_heis(source: &str, inputs: &mut Vec<Value>) -> Result<HeisenbergAction, CliError> {
    match builtin(source) {
        Some((name, None)) => {
            let act = match name {
                "no-center" => HeisenbergAction::xy(),
                "center-golden" => HeisenbergAction::golden_with_center(),
                "x-flow" => HeisenbergAction::x_flow(),
                _ => return Err(unknown_builtin(source, "no-center, center-golden, x-flow")),
            };
            record(inputs, source, act.to_json().as_bytes());
            Ok(act)
        }
        Some(_) => Err(unknown_builtin(source, "no-center, center-golden, x-flow")),
        None => HeisenbergAction::from_json(&read_input(source, inputs)?).map_err(input_err),
    }
}

fn subspace_json(alg: &LieAlgebra, s: &Subspace) -> Value {
    json!({
        "dim": s.dim(),
        "basis": s.basis().iter().map(|v| alg.format_element(v)).collect::<Vec<_>>(),
    })
}

fn q_list(v: &[Q]) -> Vec<String> {
    v.iter().map(format_q).collect()
}

fn algebra_info(alg: &LieAlgebra) -> RunReport {
    let dims = alg.lower_central_dims();
    let results = json!({
        "dim": alg.dim(),
        "basis": alg.names(),
        "abelian": alg.is_abelian(),
        "lower_central_dims": dims,
        "nilpotent": alg.is_nilpotent(),
        "step": alg.step(),
        "center": subspace_json(alg, &alg.center()),
        "derived": subspace_json(alg, &alg.derived_subalgebra()),
    });
    let summary = vec![
        format!("series dims {dims:?}"),
        match alg.step() {
            Some(s) => format!("{s}-step nilpotent"),
            None => "not nilpotent".to_string(),
        },
    ];
    RunReport::new(json!({}), results, summary, "ok", EXIT_OK)
}

fn codim1_json(v: &Codim1Verdict) -> Value {
    match v {
        Codim1Verdict::Abelian => json!({ "kind": "abelian" }),
        Codim1Verdict::Filiform { g, n } => json!({ "kind": "filiform", "g": g, "euclidean": n }),
        Codim1Verdict::MultiBlockNilpotent { blocks } => json!({ "kind": "multi-block-nilpotent", "blocks": blocks }),
        Codim1Verdict::SolvableNonNilpotent => json!({ "kind": "solvable-non-nilpotent" }),
    }
}

fn describe(v: &Codim1Verdict) -> String {
    match v {
        Codim1Verdict::Abelian => "abelian".into(),
        Codim1Verdict::Filiform { g, n } => format!("f^{g} x R^{n}"),
        Codim1Verdict::MultiBlockNilpotent { blocks } => format!("nilpotent, Jordan blocks {blocks:?}"),
        Codim1Verdict::SolvableNonNilpotent => "solvable, not nilpotent".into(),
    }
}

fn algebra_classify(alg: &LieAlgebra) -> RunReport {
    let mut summary = Vec::new();
    let two_step = match classify_2step_dim1(alg) {
        Ok(p) => {
            summary.push(format!("2-step, dim [g,g] = 1: h^{} x R^{}", p.genus, p.euclidean));
            json!({ "applicable": true, "genus": p.genus, "euclidean": p.euclidean })
        }
        Err(e) => json!({ "applicable": false, "reason": e.to_string() }),
    };
    let mut codim1 = json!({ "applicable": false, "reason": "no coordinate hyperplane is an abelian ideal" });
    if let Some((m, c)) = classify_codim1_coordinate(alg) {
        let eigen: Vec<Value> = c
            .profile
            .eigenvalues
            .iter()
            .map(|e| json!({ "value": format_q(&e.value), "multiplicity": e.algebraic_multiplicity, "blocks": e.blocks }))
            .collect();
        summary.push(format!("codimension-one abelian ideal with Z = {}: {}", alg.names()[m], describe(&c.verdict)));
        codim1 = json!({
            "applicable": true,
            "transversal": alg.names()[m],
            "verdict": codim1_json(&c.verdict),
            "charpoly": q_list(&c.profile.charpoly),
            "eigenvalues": eigen,
            "irrational_factor": q_list(&c.profile.irrational_factor),
        });
    }
    if summary.is_empty() {
        summary.push("no classification routine applies".into());
    }
    RunReport::new(json!({}), json!({ "two_step_dim1": two_step, "codim1_abelian": codim1 }), summary, "ok", EXIT_OK)
}

fn cohomology(alg: LieAlgebra, kind: RepKind, degree: Option<usize>) -> Result<RunReport, CliError> {
    let n = alg.dim();
    let (rep, name) = match kind {
        RepKind::Trivial => (Representation::trivial(alg, 1), "trivial"),
        RepKind::Adjoint => (Representation::adjoint(alg), "adjoint"),
    };
    let degrees: Vec<usize> = match degree {
        Some(l) => vec![l],
        None => (0..=n).collect(),
    };
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for l in degrees {
        let d = cohomology_dim(&rep, l).map_err(input_err)?;
        summary.push(format!("H^{l} dim {}", d.cohomology));
        rows.push(json!({
            "degree": l,
            "cochains": d.cochains,
            "cocycles": d.cocycles,
            "coboundaries": d.coboundaries,
            "cohomology": d.cohomology,
        }));
    }
    Ok(RunReport::new(json!({ "representation": name, "degree": degree }), json!({ "degrees": rows }), summary, "ok", EXIT_OK))
}

fn tau_of(c: &Common, default: f64) -> Result<f64, CliError> {
    let tau = c.tau.unwrap_or(default);
    if !tau.is_finite() || tau < 0.0 {
        return Err(CliError(format!("--tau must be finite and nonnegative, got {tau}")));
    }
    Ok(tau)
}

fn radius_of(c: &Common, default: u64) -> Result<u64, CliError> {
    match c.radius.unwrap_or(default) {
        0 => Err(CliError("--radius must be at least 1".into())),
        r => Ok(r),
    }
}

fn torus_scan(act: &TranslationAction, c: &Common) -> Result<RunReport, CliError> {
    let tau = tau_of(c, 1.0)?;
    let radius = radius_of(c, 1000)?;
    let rep = diophantine_scan(act, tau, radius);
    let mut checkpoints = Vec::new();
    let mut r = 1u64;
    'outer: loop {
        for m in [1, 2, 5] {
            let v = r * m;
            if v > radius {
                break 'outer;
            }
            checkpoints.push(json!([v, rep.k_hat_at(v)]));
        }
        r *= 10;
    }
    if checkpoints.last().and_then(|v| v[0].as_u64()) != Some(radius) {
        checkpoints.push(json!([radius, rep.k_hat]));
    }
    let verdict = scan_verdict_name(rep.verdict);
    let mut summary = vec![format!("K_hat = {} at radius {radius}, argmin {:?}", rep.k_hat, rep.argmin)];
    let code = match &rep.resonance {
        Some(n) => {
            summary.push(format!("resonance at {n:?}"));
            EXIT_OBSTRUCTION
        }
        None => EXIT_OK,
    };
    let results = json!({
        "d": act.d(),
        "k": act.k(),
        "exact": act.is_exact(),
        "k_hat": rep.k_hat,
        "argmin": rep.argmin,
        "resonance": rep.resonance,
        "near_resonances": rep.near_resonances,
        "decay_checkpoints": checkpoints,
        "verdict": rep.verdict,
    });
    Ok(RunReport::new(json!({ "tau": tau, "radius": radius }), results, summary, verdict, code))
}

fn scan_verdict_name(v: ScanVerdict) -> &'static str {
    match v {
        ScanVerdict::Resonant => "resonant",
        ScanVerdict::DiophantineConsistent => "diophantine-consistent",
        ScanVerdict::Failing => "failing",
    }
}

fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn torus_solve(act: &TranslationAction, v: &FourierSeries, generator: Option<usize>) -> Result<RunReport, CliError> {
    let equation = match generator {
        Some(j) => format!("X_{j} u = v"),
        None => "laplacian u = v".to_string(),
    };
    let params = json!({ "equation": equation, "generator": generator });
    let solved = match generator {
        Some(j) => solve_vectorfield(act, j, v),
        None => solve_laplacian(act, v),
    };
    let solved = match solved {
        Ok(s) => s,
        Err(TorusError::Resonance { frequency }) => {
            let summary = vec![format!("resonance at {frequency:?}")];
            return Ok(RunReport::new(params, json!({ "resonance": frequency }), summary, "resonance", EXIT_OBSTRUCTION));
        }
        Err(e) => return Err(input_err(e)),
    };
    let applied = match generator {
        Some(j) => solved
            .solution
            .map_multiplier(|n| Complex64::new(0.0, 2.0 * std::f64::consts::PI * act.generator_dot(j, n))),
        None => solved.solution.map_multiplier(|n| Complex64::new(laplacian_symbol(act, n).expect("same d"), 0.0)),
    };
    let residual =
        applied.sub(&v.without_mean()).map_err(input_err)?.l2_norm() / v.l2_norm().max(f64::MIN_POSITIVE);
    let mut summary = vec![format!("forward residual {residual:e}")];
    if !solved.obstruction.is_zero() {
        summary.push(format!("mean v(0) = {} removed (cokernel)", solved.obstruction));
    }
    if !solved.warnings.is_empty() {
        summary.push(format!("{} near-resonant frequencies", solved.warnings.len()));
    }
    let results = json!({
        "solution": solved.solution.to_records(),
        "obstruction": complex_json(solved.obstruction),
        "residual": residual,
        "near_resonances": solved.warnings,
    });
    Ok(RunReport::new(params, results, summary, "solved", EXIT_OK))
}

fn torus_tame(act: &TranslationAction, c: &Common, trials: usize) -> Result<RunReport, CliError> {
    let tau = tau_of(c, 1.0)?;
    let radius = radius_of(c, 200)?;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut rows = Vec::new();
    let mut first = None;
    for r in 0..=3 {
        let est = match tame_constant_estimate(act, tau, r as f64, trials, radius, &mut rng) {
            Ok(e) => e,
            Err(TorusError::Resonance { frequency }) => {
                let summary = vec![format!("resonance at {frequency:?}")];
                let params = json!({ "tau": tau, "radius": radius, "trials": trials, "seed": c.seed });
                return Ok(RunReport::new(params, json!({ "resonance": frequency }), summary, "resonance", EXIT_OBSTRUCTION));
            }
            Err(e) => return Err(input_err(e)),
        };
        rows.push(json!({
            "r": r,
            "random_max": est.random_max,
            "single_mode_max": est.single_mode_max,
            "empirical": est.empirical,
        }));
        first.get_or_insert(est);
    }
    let est = first.expect("four rows");
    let bounded = rows.iter().all(|row| row["empirical"].as_f64().expect("number") <= est.analytic_bound);
    let summary = vec![
        format!("r_0 = {}, C_0 = {} against analytic bound {}", est.r0, est.empirical, est.analytic_bound),
        format!("bounded: {bounded}"),
    ];
    let results = json!({
        "r0": est.r0,
        "k_hat": est.k_hat,
        "analytic_bound": est.analytic_bound,
        "table": rows,
        "bounded": bounded,
    });
    let params = json!({ "tau": tau, "radius": radius, "trials": trials, "seed": c.seed });
    Ok(RunReport::new(params, results, summary, if bounded { "bounded" } else { "exceeds-bound" }, EXIT_OK))
}

fn dyn_failure(e: DynError) -> Result<RunReport, CliError> {
    match e {
        DynError::Torus(TorusError::Resonance { frequency }) => Ok(RunReport::new(
            json!({}),
            json!({ "resonance": frequency }),
            vec![format!("resonance at {frequency:?}")],
            "resonance",
            EXIT_OBSTRUCTION,
        )),
        other => Err(input_err(other)),
    }
}

fn cochain_hodge(omega: &Cochain) -> Result<RunReport, CliError> {
    let parts = match hodge_decompose(omega) {
        Ok(p) => p,
        Err(e) => return dyn_failure(e),
    };
    let orth = parts.orthogonality();
    let recon = parts.reconstruction_error(omega);
    let harmonic: Vec<Value> = parts
        .harmonic
        .terms()
        .map(|(i, z)| json!({ "index": i.indices(), "re": z.re, "im": z.im }))
        .collect();
    let dims = harmonic_dims(omega.action(), omega.radius().max(1));
    let results = json!({
        "norms": {
            "omega": omega.l2_norm(),
            "exact": parts.exact.l2_norm(),
            "coexact": parts.coexact.l2_norm(),
            "harmonic": parts.harmonic_cochain().l2_norm(),
        },
        "orthogonality": orth,
        "reconstruction_error": recon,
        "harmonic": harmonic,
        "harmonic_dims": dims,
    });
    let summary = vec![
        format!("harmonic dims {dims:?}"),
        format!("orthogonality {:e}, reconstruction {recon:e}", orth.max()),
    ];
    Ok(RunReport::new(json!({ "degree": omega.degree(), "k": omega.k() }), results, summary, "ok", EXIT_OK))
}

fn cochain_roundtrip(omega: &Cochain, rng: &mut ChaCha8Rng) -> Result<RunReport, CliError> {
    let err = match roundtrip_error(omega) {
        Ok(e) => e,
        Err(e) => return dyn_failure(e),
    };
    let k = omega.k();
    let d = omega.action().d();
    let t: Vec<f64> = (0..k).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let s: Vec<f64> = (0..k).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let x: Vec<f64> = (0..d).map(|_| rng.gen_range(0.0..1.0)).collect();
    let beta = AbelianCocycle::new(omega.action(), vec![omega.clone()]).map_err(input_err)?;
    let identity = beta.identity_residual(&t, &s, &x).map_err(input_err)?;
    let results = json!({
        "roundtrip_error": err,
        "identity_residual": identity,
        "sample": { "t": t, "s": s, "x": x },
    });
    let summary = vec![format!("T(S(omega)) - omega = {err:e}"), format!("cocycle identity residual {identity:e}")];
    Ok(RunReport::new(json!({ "k": k }), results, summary, "ok", EXIT_OK))
}

fn heis_check(act: &HeisenbergAction, c: &Common) -> Result<RunReport, CliError> {
    let tau = tau_of(c, 1.0)?;
    let radius = radius_of(c, 1000)?;
    let rep = heisenberg_gh_check(act, tau, radius);
    let pf = |b: bool| if b { "PASS" } else { "FAIL" };
    let mut summary = vec![
        format!("abelian: {}", pf(rep.abelian)),
        format!("center test: {}", pf(rep.center_test)),
        format!(
            "base test: {} (K_hat = {}, {})",
            pf(rep.base_test),
            rep.base_scan.k_hat,
            scan_verdict_name(rep.base_scan.verdict)
        ),
    ];
    let (verdict, code) = match rep.verdict {
        HeisVerdict::PassesNecessaryConditions => {
            (format!("passes necessary conditions at (tau = {tau}, N = {radius})"), EXIT_OK)
        }
        HeisVerdict::FailsNecessaryConditions => ("fails GH necessary conditions".to_string(), EXIT_OBSTRUCTION),
    };
    summary.push(verdict.clone());
    let vecs = |vs: &[Vec<Q>]| vs.iter().map(|v| q_list(v)).collect::<Vec<_>>();
    let results = json!({
        "g": rep.g,
        "k": rep.k,
        "abelian": rep.abelian,
        "center_test": rep.center_test,
        "base_test": rep.base_test,
        "base_generators": rep.base_generators,
        "base_scan": {
            "k_hat": rep.base_scan.k_hat,
            "argmin": rep.base_scan.argmin,
            "resonance": rep.base_scan.resonance,
            "verdict": rep.base_scan.verdict,
        },
        "symplectic_completion": {
            "image_dim": rep.completion.image_dim,
            "isotropic": rep.completion.isotropic,
            "e": vecs(&rep.completion.e),
            "f": vecs(&rep.completion.f),
        },
        "reasons": rep.reasons,
    });
    Ok(RunReport::new(json!({ "tau": tau, "radius": radius }), results, summary, verdict, code))
}

fn heis_witness(model: &SchrodingerModel, profile: Profile) -> Result<RunReport, CliError> {
    let gaussian = |x: &[f64]| (-x.iter().map(|v| v * v).sum::<f64>()).exp();
    let v = match profile {
        Profile::Gaussian => model.sample(gaussian),
        Profile::Cancellation => model.sample(|x| multiplication_symbol(model, x) * gaussian(x)),
    };
    let params = json!({
        "g": model.g(),
        "k": model.k(),
        "extent": model.radius(),
        "step": model.step(),
        "tol": model.tol(),
        "profile": match profile { Profile::Gaussian => "gaussian", Profile::Cancellation => "cancellation" },
    });
    let outcome = attempt_solve_multiplication(model, &v).map_err(input_err)?;
    Ok(match outcome {
        MultiplicationOutcome::Obstruction { value, point } => {
            let at = if point.iter().all(|x| *x == 0.0) { "0".to_string() } else { format!("{point:?}") };
            RunReport::new(
                params,
                json!({ "outcome": "obstruction", "value": value, "point": point }),
                vec![format!("obstruction: v({at})={value}"), "v is not in the image of the laplacian".into()],
                "obstruction",
                EXIT_OBSTRUCTION,
            )
        }
        MultiplicationOutcome::Solved { u, residual, fit_condition, filled } => {
            let exact = match profile {
                Profile::Cancellation => {
                    let target = model.sample(gaussian);
                    Some(u.iter().zip(&target).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
                }
                Profile::Gaussian => None,
            };
            let u0 = u[model.origin()];
            let mut summary = vec![format!("solved: residual {residual:e}, u(0) = {u0}")];
            if let Some(e) = exact {
                summary.push(format!("max |u - e^(-|x|^2)| = {e:e}"));
            }
            RunReport::new(
                params,
                json!({
                    "outcome": "solved",
                    "residual": residual,
                    "fit_condition": fit_condition,
                    "filled": filled,
                    "u_at_origin": u0,
                    "max_error_vs_exact": exact,
                }),
                summary,
                "solved",
                EXIT_OK,
            )
        }
    })
}

fn random_small_q(rng: &mut ChaCha8Rng) -> Q {
    Q::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=9).into())
}

fn counterexample(beta: &Q, seed: u64) -> RunReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y = [random_small_q(&mut rng), random_small_q(&mut rng)];
    let y_prime = [random_small_q(&mut rng), random_small_q(&mut rng)];
    let w = counterexample_g23(beta, &y, &y_prime);
    let g = LieAlgebra::free_nilpotent_2_3();
    let bracket = g.format_element(&w.bracket);
    let verdict = if w.lift_is_nonabelian() { "abelian lift impossible" } else { "lift is abelian" };
    let results = json!({
        "r_lift": g.format_element(&w.r_lift),
        "s_lift": g.format_element(&w.s_lift),
        "bracket": bracket,
        "bracket_coordinates": q_list(&w.bracket),
        "matches_expected": w.matches_expected(),
        "lift_is_nonabelian": w.lift_is_nonabelian(),
        "lower_central_dims": g.lower_central_dims(),
        "center": subspace_json(&g, &g.center()),
    });
    let summary = vec![format!("bracket [S', R'] = {bracket}"), verdict.to_string()];
    RunReport::new(json!({ "beta": format_q(beta), "seed": seed }), results, summary, verdict, EXIT_OK)
}
