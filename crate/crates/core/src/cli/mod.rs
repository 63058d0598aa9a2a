//! Command-line front end.
//!
//! Four commands share one contract: text or JSON on stdout, messages on
//! stderr, and exit code 0 for a verdict, 1 for bad input, 2 when the numerics
//! give no verdict and 3 for unsupported configurations.

mod input;
mod render;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::classifier::{
    decomposability_report, default_s_values, degeneration_experiment, monodromy_report, random_degeneration_input,
    uniform_sweep, validate_sweep, ClassifierError, DecomposabilityCertificate, DegenerationExperiment,
    MonodromyReport, SweepSummary,
};
use crate::fibration::FibrationError;
use crate::permgroup::PermGroup;
use crate::poly::PolyError;
use crate::tolerances::Tolerances;
use crate::tracker::TrackOptions;

pub use input::{classify_input, degeneration_input, group_input};

/// Environment variable that supplies the seed when `--seed` is absent.
pub const SEED_ENV: &str = "MONODROMY_SEED";
/// Seed used when neither `--seed` nor the environment gives one.
pub const DEFAULT_SEED: u64 = 1;

pub const EXIT_VERDICT: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_DEGENERATE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "monodromy", version, about = "Monodromy groups of projections of complex hypersurfaces")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Seed for every random choice; defaults to $MONODROMY_SEED, then 1.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Tolerance override, repeatable: --tol collision=1e-7.
    #[arg(long = "tol", value_name = "NAME=VALUE", global = true)]
    pub tolerances: Vec<String>,
    /// Worker threads for parallel stages; 0 lets the runtime decide.
    #[arg(long, default_value_t = 0, global = true)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monodromy group and uniformity verdict for one hypersurface and center.
    Classify {
        /// File with `poly:` and `point:` lines.
        input: PathBuf,
    },
    /// Verdicts for random outer and inner centers on random hypersurfaces.
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 10)]
        trials: usize,
    },
    /// Containment of the special member's monodromy in the general member's.
    Degenerate {
        /// File with `Y:`, `H:`, `F:` and `point:` lines; random input otherwise.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        d: u32,
    },
    /// Order, orbits, transitivity and blocks of a permutation group.
    Group {
        /// File with `degree:` and one `perm:` line per generator.
        input: PathBuf,
        /// Overrides the degree given in the file.
        #[arg(long)]
        degree: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("no verdict: {0}")]
    Degenerate(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Degenerate(_) => EXIT_DEGENERATE,
            CliError::Unsupported(_) => EXIT_UNSUPPORTED,
        }
    }
}

impl From<ClassifierError> for CliError {
    fn from(e: ClassifierError) -> Self {
        let msg = e.to_string();
        match e {
            ClassifierError::Input(m) => CliError::Input(m),
            ClassifierError::Unsupported(m) => CliError::Unsupported(m),
            ClassifierError::Fibration(f) => match f {
                FibrationError::ZeroForm
                | FibrationError::ZeroCenter
                | FibrationError::Poly(PolyError::DimensionMismatch { .. }) => CliError::Input(msg),
                FibrationError::SingularCenter { .. } => CliError::Unsupported(msg),
                _ => CliError::Degenerate(msg),
            },
            ClassifierError::Group(_) => CliError::Input(msg),
            ClassifierError::Degenerate(_) | ClassifierError::NoVerdict { .. } => CliError::Degenerate(msg),
        }
    }
}

/// What a run prints and how it exits.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Settings shared by every command after flag and environment resolution.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub format: Format,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub jobs: usize,
}

impl RunConfig {
    pub fn resolve(cli: &Cli, env_seed: Option<&str>) -> Result<Self, CliError> {
        let seed = match (cli.seed, env_seed) {
            (Some(s), _) => s,
            (None, Some(text)) => text
                .trim()
                .parse()
                .map_err(|_| CliError::Input(format!("{SEED_ENV} must be an unsigned 64-bit integer, got {text:?}")))?,
            (None, None) => DEFAULT_SEED,
        };
        let mut tolerances = Tolerances::default();
        for item in &cli.tolerances {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| CliError::Input(format!("--tol expects NAME=VALUE, got {item:?}")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| CliError::Input(format!("--tol {name}: not a number: {value:?}")))?;
            tolerances
                .set(name.trim(), value)
                .map_err(|e| CliError::Input(e.to_string()))?;
        }
        Ok(RunConfig {
            format: cli.format,
            seed,
            tolerances,
            jobs: cli.jobs,
        })
    }

    /// Fields every structured report starts with.
    fn header(&self, command: &str) -> serde_json::Map<String, Value> {
        let mut m = serde_json::Map::new();
        m.insert("tool".into(), json!(env!("CARGO_PKG_NAME")));
        m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        m.insert("command".into(), json!(command));
        m.insert("seed".into(), json!(self.seed));
        m.insert("tolerances".into(), json!(self.tolerances));
        m
    }
}

/// Parses `args` (program name first) and runs the command. `env_seed` is the
/// value of `MONODROMY_SEED`, passed in so that runs are reproducible in tests.
pub fn run<I, T>(args: I, env_seed: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_VERDICT };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let result = RunConfig::resolve(&cli, env_seed).and_then(|config| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| CliError::Input(format!("--jobs: {e}")))?;
        pool.install(|| dispatch(&cli.command, &config))
    });
    match result {
        Ok(outcome) => outcome,
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("{e}\n"),
        },
    }
}

fn dispatch(command: &Command, config: &RunConfig) -> Result<Outcome, CliError> {
    match command {
        Command::Classify { input } => cmd_classify(&read(input)?, config),
        Command::Sweep { n, d, trials } => cmd_sweep(*n, *d, *trials, config),
        Command::Degenerate { input, n, d } => {
            let text = input.as_ref().map(read).transpose()?;
            cmd_degenerate(text.as_deref(), *n, *d, config)
        }
        Command::Group { input, degree } => cmd_group(&read(input)?, *degree, config),
    }
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn emit(config: &RunConfig, code: i32, doc: Value, text: String) -> Outcome {
    let stdout = match config.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => text,
    };
    Outcome {
        code,
        stdout,
        stderr: String::new(),
    }
}

fn merge<T: Serialize>(mut head: serde_json::Map<String, Value>, body: &T) -> Value {
    if let Value::Object(fields) = serde_json::to_value(body).expect("report serializes") {
        head.extend(fields);
    }
    Value::Object(head)
}

/// Classifies one hypersurface and center from the text of an input file.
pub fn cmd_classify(text: &str, config: &RunConfig) -> Result<Outcome, CliError> {
    let (f, p) = classify_input(text)?;
    let report = monodromy_report(&f, &p, config.seed, &config.tolerances, &TrackOptions::default())?;
    let cert = decomposability_report(&report);
    let doc = classify_document(config, &report, &cert);
    Ok(emit(config, EXIT_VERDICT, doc, render::classify(&report, &cert)))
}

fn classify_document(config: &RunConfig, report: &MonodromyReport, cert: &DecomposabilityCertificate) -> Value {
    let mut head = config.header("classify");
    head.insert("verdict".into(), json!(report.verdict_line()));
    let mut doc = merge(head, report);
    doc["decomposability"] = json!(cert);
    doc
}

/// Runs a sweep; exits 0 exactly when every center is uniform.
pub fn cmd_sweep(n: usize, d: u32, trials: usize, config: &RunConfig) -> Result<Outcome, CliError> {
    validate_sweep(n, d, trials)?;
    let summary = uniform_sweep(n, d, trials, config.seed, &config.tolerances, &TrackOptions::default())?;
    let code = if summary.all_uniform() { EXIT_VERDICT } else { EXIT_DEGENERATE };
    let doc = sweep_document(config, &summary);
    Ok(emit(config, code, doc, render::sweep(&summary)))
}

fn sweep_document(config: &RunConfig, summary: &SweepSummary) -> Value {
    let mut head = config.header("sweep");
    head.insert("all_uniform".into(), json!(summary.all_uniform()));
    merge(head, summary)
}

/// Runs the degeneration experiment on explicit or random input; exits 0
/// exactly when every containment holds.
pub fn cmd_degenerate(text: Option<&str>, n: usize, d: u32, config: &RunConfig) -> Result<Outcome, CliError> {
    let input = match text {
        Some(t) => degeneration_input(t)?,
        None => {
            if !(1..=2).contains(&n) {
                return Err(CliError::Input(format!("--n must be 1 or 2, got {n}")));
            }
            if !(3..=6).contains(&d) {
                return Err(CliError::Input(format!("--d must lie in 3..=6, got {d}")));
            }
            random_degeneration_input(n, d, config.seed)?
        }
    };
    let s_values = default_s_values(config.seed);
    let exp = degeneration_experiment(&input, &s_values, config.seed, &config.tolerances, &TrackOptions::default())?;
    let code = if exp.all_contained() { EXIT_VERDICT } else { EXIT_DEGENERATE };
    let doc = degenerate_document(config, &exp);
    Ok(emit(config, code, doc, render::degenerate(&exp)))
}

fn degenerate_document(config: &RunConfig, exp: &DegenerationExperiment) -> Value {
    let mut head = config.header("degenerate");
    head.insert("all_contained".into(), json!(exp.all_contained()));
    merge(head, exp)
}

#[derive(Debug, Serialize)]
struct GroupAnalysis {
    degree: usize,
    order: String,
    generators: Vec<String>,
    orbits: Vec<Vec<usize>>,
    transitive: bool,
    transitivity_degree: usize,
    primitive: bool,
    block_systems: Vec<Vec<Vec<usize>>>,
    labels: Vec<String>,
}

/// Analyses the group generated by the permutations in an input file.
pub fn cmd_group(text: &str, degree: Option<usize>, config: &RunConfig) -> Result<Outcome, CliError> {
    let (degree, gens) = group_input(text, degree)?;
    let g = PermGroup::generate(degree, gens).map_err(|e| CliError::Input(e.to_string()))?;
    let transitive = g.is_transitive();
    let analysis = GroupAnalysis {
        degree,
        order: g.order().to_string(),
        generators: g.generators().iter().map(|p| p.to_string()).collect(),
        orbits: g.orbits(),
        transitive,
        transitivity_degree: if transitive { g.transitivity_degree() } else { 0 },
        primitive: transitive && g.is_primitive(),
        block_systems: if transitive { g.block_systems() } else { Vec::new() },
        labels: g.classify().iter().map(|l| l.to_string()).collect(),
    };
    let doc = merge(config.header("group"), &analysis);
    let text = render::group(
        &analysis.order,
        &analysis.orbits,
        analysis.transitivity_degree,
        analysis.primitive,
        &analysis.block_systems,
        &analysis.labels,
        degree,
    );
    Ok(emit(config, EXIT_VERDICT, doc, text))
}
