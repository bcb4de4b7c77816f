//! Command-line front end.
//!
//! Flags and `--config` files both land in a [`RunConfig`]; flags win over
//! the file. [`run`] executes one command, writes the report to `--out` (or
//! hands it back for stdout) and reports the exit status:
//! 0 success, 2 invalid configuration, 3 failed check, 4 I/O error.

pub mod parse;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use self::parse::{parse_list, parse_range, parse_scalar, scalars, values, Scalar};
use self::report::*;
use crate::diet::{diet_profile, fairness_residual, DEFAULT_FAIRNESS_TOLERANCE};
use crate::election::to_election_report;
use crate::simulator::{check_convergence, simulate, simulate_logged, RngSeed, DEFAULT_Z};
use crate::solver::{
    residual_system, solve_chooser_given_cutter, solve_joint, verify_uniqueness, GridSearchConfig,
    SELF_CHECK_SAMPLES,
};
use crate::strategy::{
    classify_preferences, make_chooser, symmetric_chooser, ChooserStrategy, CutterStrategy,
    TParams,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG_INVALID: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Seed taken from the environment when `--seed` is absent.
pub const SEED_ENV: &str = "CUT_CHOOSE_SEED";

const DEFAULT_ROUNDS: u64 = 100_000;
const DEFAULT_LABELS: [&str; 3] = ["A", "B", "C"];
const DEFAULT_T_RANGE: [f64; 3] = [-1.0, 1.0, 0.1];
const NEAR_UNIFORM_WARNING: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ConfigInvalid(_) => EXIT_CONFIG_INVALID,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::ConfigInvalid(e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::ConfigInvalid(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Diet,
    Classify,
    Solve,
    Feasible,
    Simulate,
    Sweep,
    VerifyUniqueness,
    Election,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Diet => "diet",
            Command::Classify => "classify",
            Command::Solve => "solve",
            Command::Feasible => "feasible",
            Command::Simulate => "simulate",
            Command::Sweep => "sweep",
            Command::VerifyUniqueness => "verify-uniqueness",
            Command::Election => "election",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Everything a command can be told, as read from flags or a JSON file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    /// Rejection probabilities `p0, p1, p2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutter: Option<[Scalar; 3]>,
    /// Conditionals `c[1|0], c[0|1], c[1|2]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chooser: Option<[Scalar; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<[Scalar; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_rounds: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simplex_step: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_step: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_tol: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family_tol: Option<Scalar>,
    /// `start, end, step` of a sweep over the symmetric chooser family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_range: Option<[Scalar; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<[String; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Per-round CSV log for `simulate`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
    }

    /// Field-wise `self.or(fallback)`.
    pub fn or(self, fallback: RunConfig) -> RunConfig {
        RunConfig {
            command: self.command.or(fallback.command),
            cutter: self.cutter.or(fallback.cutter),
            chooser: self.chooser.or(fallback.chooser),
            t: self.t.or(fallback.t),
            n_rounds: self.n_rounds.or(fallback.n_rounds),
            seed: self.seed.or(fallback.seed),
            tol: self.tol.or(fallback.tol),
            eps: self.eps.or(fallback.eps),
            z: self.z.or(fallback.z),
            simplex_step: self.simplex_step.or(fallback.simplex_step),
            t_step: self.t_step.or(fallback.t_step),
            residual_tol: self.residual_tol.or(fallback.residual_tol),
            family_tol: self.family_tol.or(fallback.family_tol),
            t_range: self.t_range.or(fallback.t_range),
            labels: self.labels.or(fallback.labels),
            format: self.format.or(fallback.format),
            out: self.out.or(fallback.out),
            log: self.log.or(fallback.log),
        }
    }

    fn cutter_strategy(&self) -> Result<Option<CutterStrategy>, CliError> {
        self.cutter
            .map(|p| {
                let [p0, p1, p2] = values(p);
                CutterStrategy::new(p0, p1, p2).map_err(CliError::from)
            })
            .transpose()
    }

    fn require_cutter(&self) -> Result<CutterStrategy, CliError> {
        self.cutter_strategy()?
            .ok_or_else(|| invalid("--cutter is required for this command"))
    }

    fn chooser_strategy(&self) -> Result<Option<ChooserStrategy>, CliError> {
        match (self.chooser, self.t) {
            (Some(_), Some(_)) => Err(invalid("give the chooser as --chooser or --t, not both")),
            (Some(c), None) => {
                let [c10, c01, c12] = values(c);
                Ok(Some(make_chooser(c10, c01, c12)?))
            }
            (None, Some(t)) => {
                let [t0, t1, t2] = values(t);
                Ok(Some(ChooserStrategy::from_t_params(TParams::new(t0, t1, t2)?)))
            }
            (None, None) => Ok(None),
        }
    }

    fn require_chooser(&self) -> Result<ChooserStrategy, CliError> {
        self.chooser_strategy()?
            .ok_or_else(|| invalid("one of --chooser or --t is required for this command"))
    }

    fn scalar(field: Option<Scalar>, default: f64) -> f64 {
        field.map_or(default, |s| s.0)
    }
}

/// Result of a successful [`run`].
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub command: Command,
    /// The rendered report.
    pub text: String,
    pub format: Format,
    /// Set when the report was written to this path instead of stdout.
    pub written_to: Option<PathBuf>,
    /// The command ran but its check did not hold (exit 3).
    pub check_failed: bool,
    pub warnings: Vec<String>,
}

impl RunOutput {
    pub fn exit_code(&self) -> i32 {
        if self.check_failed {
            EXIT_CHECK_FAILED
        } else {
            EXIT_OK
        }
    }
}

struct Rendered {
    text: String,
    check_failed: bool,
}

fn json<R: Serialize>(
    command: Command,
    inputs: &RunConfig,
    results: R,
) -> Result<String, CliError> {
    let envelope = Envelope {
        command,
        inputs: inputs.clone(),
        results,
        versions: Versions::current(),
    };
    serde_json::to_string_pretty(&envelope).map_err(|e| invalid(format!("json: {e}")))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Format requested explicitly, else inferred from the output extension.
fn output_format(config: &RunConfig) -> Format {
    config.format.unwrap_or_else(|| match &config.out {
        Some(path) if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) => Format::Csv,
        _ => Format::Json,
    })
}

/// Resolves defaults, runs the command and writes its report.
pub fn run(config: &RunConfig) -> Result<RunOutput, CliError> {
    let command = config
        .command
        .ok_or_else(|| invalid("no command given"))?;
    let format = output_format(config);
    let mut inputs = config.clone();
    inputs.format = Some(format);
    let mut warnings = Vec::new();

    if let Some(cutter) = config.cutter_strategy()? {
        let gap = cutter.distance_from_uniform();
        if gap > 0.0 && gap < NEAR_UNIFORM_WARNING {
            warnings.push(format!(
                "cutter is {gap:e} away from uniform; it is not the uniform cutter and cannot be fair. Enter 1/3 as a fraction to get the exact point"
            ));
        }
    }

    let rendered = match command {
        Command::Diet => run_diet(&mut inputs, format)?,
        Command::Classify => run_classify(&mut inputs, format)?,
        Command::Solve => run_solve(&mut inputs, format)?,
        Command::Feasible => run_feasible(&mut inputs, format)?,
        Command::Simulate => run_simulate(&mut inputs, format)?,
        Command::Sweep => run_sweep(&mut inputs, format)?,
        Command::VerifyUniqueness => run_verify(&mut inputs, format)?,
        Command::Election => run_election(&mut inputs, format)?,
    };

    if let Some(path) = &config.out {
        write_file(path, &rendered.text)?;
    }
    Ok(RunOutput {
        command,
        text: rendered.text,
        format,
        written_to: config.out.clone(),
        check_failed: rendered.check_failed,
        warnings,
    })
}

fn json_only(command: Command, format: Format) -> Result<(), CliError> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(invalid(format!(
            "{} has no CSV form; use --format json",
            command.name()
        ))),
    }
}

fn ok(text: String) -> Rendered {
    Rendered {
        text,
        check_failed: false,
    }
}

fn run_diet(inputs: &mut RunConfig, format: Format) -> Result<Rendered, CliError> {
    let cutter = inputs.require_cutter()?;
    let chooser = inputs.require_chooser()?;
    let tol = RunConfig::scalar(inputs.tol, DEFAULT_FAIRNESS_TOLERANCE);
    if tol.is_nan() || tol < 0.0 {
        return Err(invalid("--tol must be nonnegative"));
    }
    inputs.tol = Some(Scalar(tol));
    let profile = diet_profile(&cutter, &chooser);
    let p = cutter.probabilities();
    let conservation_error = (0..3)
        .map(|j| (profile.lambda[j] + profile.omega[j] - (1.0 - p[j])).abs())
        .fold(0.0, f64::max);
    let results = DietResults {
        cutter,
        chooser_t: chooser.t_params(),
        conditionals: conditional_map(&chooser),
        profile,
        fairness: fairness_residual(&profile, tol),
        conservation_error,
    };
    Ok(ok(match format {
        Format::Json => json(Command::Diet, inputs, results)?,
        Format::Csv => diet_csv(&results)?,
    }))
}

fn run_classify(inputs: &mut RunConfig, format: Format) -> Result<Rendered, CliError> {
    json_only(Command::Classify, format)?;
    let chooser = inputs.require_chooser()?;
    let eps = RunConfig::scalar(inputs.eps, 0.0);
    inputs.eps = Some(Scalar(eps));
    let (relation, class) = classify_preferences(&chooser, eps)?;
    let results = ClassifyResults {
        chooser_t: chooser.t_params(),
        conditionals: conditional_map(&chooser),
        relation,
        class,
        intransitive: class.is_intransitive(),
    };
    Ok(ok(json(Command::Classify, inputs, results)?))
}

fn run_solve(inputs: &mut RunConfig, format: Format) -> Result<Rendered, CliError> {
    json_only(Command::Solve, format)?;
    let family = solve_joint();
    let samples = family
        .sample_parameters(SELF_CHECK_SAMPLES)
        .into_iter()
        .map(|t| {
            let chooser = symmetric_chooser(t)?;
            let (_, class) = classify_preferences(&chooser, 0.0)?;
            Ok(FamilySample {
                t,
                class,
                max_abs_residual: residual_system(&family.cutter, &chooser.t_params()).max_abs(),
            })
        })
        .collect::<Result<Vec<_>, crate::Error>>()?;
    let check_failed = family.self_check_max_residual > 1e-12;
    Ok(Rendered {
        text: json(Command::Solve, inputs, SolveResults { family, samples })?,
        check_failed,
    })
}

fn run_feasible(inputs: &mut RunConfig, format: Format) -> Result<Rendered, CliError> {
    json_only(Command::Feasible, format)?;
    let cutter = inputs.require_cutter()?;
    let tol = RunConfig::scalar(inputs.tol, 0.0);
    if tol.is_nan() || tol < 0.0 {
        return Err(invalid("--tol must be nonnegative"));
    }
    inputs.tol = Some(Scalar(tol));
    let result = solve_chooser_given_cutter(&cutter, tol);
    let results = FeasibleResults {
        cutter,
        tolerance: tol,
        feasible: result.is_feasible(),
        result,
    };
    Ok(ok(json(Command::Feasible, inputs, results)?))
}

fn run_simulate(inputs: &mut RunConfig, format: Format) -> Result<Rendered, CliError> {
    let cutter = inputs.require_cutter()?;
    let chooser = inputs.require_chooser()?;
    let n_rounds = inputs.n_rounds.unwrap_or(DEFAULT_ROUNDS);
    if n_rounds == 0 {
        return Err(invalid("-n must be at least 1"));
    }
    let seed = inputs.seed.unwrap_or(0);
    let z = RunConfig::scalar(inputs.z, DEFAULT_Z);
    if z.is_nan() || z <= 0.0 {
        return Err(invalid("--z must be positive"));
    }
    inputs.n_rounds = Some(n_rounds);
    inputs.seed = Some(seed);
    inputs.z = Some(Scalar(z));

    let simulation = match &inputs.log {
        Some(path) => {
            let (result, log) = simulate_logged(&cutter, &chooser, n_rounds, RngSeed(seed));
            write_file(path, &round_log_csv(&log)?)?;
            result
        }
        None => simulate(&cutter, &chooser, n_rounds, RngSeed(seed)),
    };
    let exact = diet_profile(&cutter, &chooser);
    let convergence = check_convergence(&simulation, &exact, z);
    let results = SimulateResults {
        cutter,
        chooser_t: chooser.t_params(),
        simulation,
        exact,
        convergence,
    };
    Ok(ok(match format {
        Format::Json => json(Command::Simulate, inputs, results)?,
        Format::Csv => simulate_csv(&results)?,
    }))
}

/// Sweep parameters `start + (end - start) * i / count`, `i = 0..=count`.
pub fn sweep_parameters(range: [f64; 3]) -> Result<Vec<f64>, CliError> {
    let [start, end, step] = range;
    if !(-1.0..=1.0).contains(&start) || !(-1.0..=1.0).contains(&end) || start > end {
        return Err(invalid(format!(
            "t range {start}:{end} must satisfy -1 <= start <= end <= 1"
        )));
    }
    if start == end {
        return Ok(vec![start]);
    }
    if step.is_nan() || step <= 0.0 {
        return Err(invalid("t range step must be positive"));
    }
    let ratio = (end - start) / step;
    let count = ratio.round();
    if count < 1.0 || (ratio - count).abs() > 1e-9 * ratio.max(1.0) || count > 1e7 {
        return Err(invalid(format!(
            "t range step {step} does not divide [{start}, {end}] into whole steps"
        )));
    }
    let count = count as u64;
    Ok((0..=count)
        .map(|i| {
            let t = (start * (count - i) as f64 + end * i as f64) / count as f64;
            t.clamp(start, end)
        })
        .collect())
}

fn sweep_row(cutter: &CutterStrategy, eps: f64, t: f64) -> Result<SweepRow, crate::Error> {
    let chooser = symmetric_chooser(t)?;
    let (_, class) = classify_preferences(&chooser, eps)?;
    let fairness = fairness_residual(&diet_profile(cutter, &chooser), 0.0);
    Ok(SweepRow {
        t,
        class,
        lambda_residuals: fairness.lambda_residuals,
        omega_residuals: fairness.omega_residuals,
        max_abs_residual: fairness.max_abs_residual,
    })
}

fn run_sweep(inputs: &mut RunConfig, format: Format) -> Result<Rendered, CliError> {
    if inputs.chooser.is_some() || inputs.t.is_some() {
        return Err(invalid(
            "sweep varies the chooser along t0 = t1 = t2; drop --chooser/--t",
        ));
    }
    let cutter = inputs.cutter_strategy()?.unwrap_or_else(CutterStrategy::uniform);
    let range = inputs.t_range.map(values).unwrap_or(DEFAULT_T_RANGE);
    let eps = RunConfig::scalar(inputs.eps, 0.0);
    inputs.cutter = Some(scalars(cutter.probabilities()));
    inputs.t_range = Some(scalars(range));
    inputs.eps = Some(Scalar(eps));
    let ts = sweep_parameters(range)?;

    #[cfg(feature = "parallel")]
    let rows = {
        use rayon::prelude::*;
        ts.par_iter()
            .map(|&t| sweep_row(&cutter, eps, t))
            .collect::<Result<Vec<_>, _>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let rows = ts
        .iter()
        .map(|&t| sweep_row(&cutter, eps, t))
        .collect::<Result<Vec<_>, _>>()?;

    let results = SweepResults { cutter, eps, rows };
    Ok(ok(match format {
        Format::Json => json(Command::Sweep, inputs, results)?,
        Format::Csv => sweep_csv(&results)?,
    }))
}

fn run_verify(inputs: &mut RunConfig, format: Format) -> Result<Rendered, CliError> {
    json_only(Command::VerifyUniqueness, format)?;
    let grid = GridSearchConfig::new(
        RunConfig::scalar(inputs.simplex_step, 1.0 / 24.0),
        RunConfig::scalar(inputs.t_step, 0.1),
        RunConfig::scalar(inputs.residual_tol, 1e-9),
    )?;
    let family_tol = RunConfig::scalar(inputs.family_tol, 1e-9);
    inputs.simplex_step = Some(Scalar(grid.simplex_step));
    inputs.t_step = Some(Scalar(grid.t_step));
    inputs.residual_tol = Some(Scalar(grid.residual_tol));
    inputs.family_tol = Some(Scalar(family_tol));
    let report = verify_uniqueness(&grid, family_tol)?;
    let check_failed = !report.pass;
    Ok(Rendered {
        text: json(Command::VerifyUniqueness, inputs, VerifyResults { grid, report })?,
        check_failed,
    })
}

fn run_election(inputs: &mut RunConfig, format: Format) -> Result<Rendered, CliError> {
    json_only(Command::Election, format)?;
    let cutter = inputs.require_cutter()?;
    let chooser = inputs.require_chooser()?;
    let labels = inputs
        .labels
        .clone()
        .unwrap_or_else(|| DEFAULT_LABELS.map(String::from));
    inputs.labels = Some(labels.clone());
    let report = to_election_report(
        &cutter,
        &chooser,
        [labels[0].as_str(), labels[1].as_str(), labels[2].as_str()],
    )?;
    let results = ElectionResults {
        chooser_t: chooser.t_params(),
        report,
    };
    Ok(ok(json(Command::Election, inputs, results)?))
}

/// `cut-choose` command line.
#[derive(Debug, Parser)]
#[command(name = "cut-choose", version, about = "Repeated three-goods \"I cut, you choose\" game")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Exact diet shares of both players and their fairness residuals.
    Diet(CommonArgs),
    /// Pairwise preferences of a chooser and whether they are transitive.
    Classify(CommonArgs),
    /// Closed-form solution of the joint fairness conditions.
    Solve(CommonArgs),
    /// Whether any chooser makes a given cutter fair.
    Feasible(CommonArgs),
    /// Seeded Monte Carlo play, compared against the exact diet.
    Simulate(CommonArgs),
    /// Fairness and preference class along the symmetric chooser family.
    Sweep(CommonArgs),
    /// Brute-force grid check that only the solution family is fair.
    VerifyUniqueness(CommonArgs),
    /// The game read as a two-phase election.
    Election(CommonArgs),
}

impl CliCommand {
    fn split(&self) -> (Command, &CommonArgs) {
        match self {
            CliCommand::Diet(a) => (Command::Diet, a),
            CliCommand::Classify(a) => (Command::Classify, a),
            CliCommand::Solve(a) => (Command::Solve, a),
            CliCommand::Feasible(a) => (Command::Feasible, a),
            CliCommand::Simulate(a) => (Command::Simulate, a),
            CliCommand::Sweep(a) => (Command::Sweep, a),
            CliCommand::VerifyUniqueness(a) => (Command::VerifyUniqueness, a),
            CliCommand::Election(a) => (Command::Election, a),
        }
    }
}

/// Numbers accept fractions such as `1/3`.
#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// JSON file with RunConfig fields; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Cutter rejection probabilities p0,p1,p2.
    #[arg(long, allow_hyphen_values = true)]
    pub cutter: Option<String>,
    /// Chooser conditionals c[1|0],c[0|1],c[1|2].
    #[arg(long, allow_hyphen_values = true)]
    pub chooser: Option<String>,
    /// Chooser t-parameters t0,t1,t2.
    #[arg(long = "t", allow_hyphen_values = true)]
    pub t: Option<String>,
    #[arg(short = 'n', long = "rounds")]
    pub n_rounds: Option<u64>,
    #[arg(long, env = SEED_ENV)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tol: Option<String>,
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long)]
    pub z: Option<String>,
    #[arg(long)]
    pub simplex_step: Option<String>,
    #[arg(long)]
    pub t_step: Option<String>,
    #[arg(long)]
    pub residual_tol: Option<String>,
    #[arg(long)]
    pub family_tol: Option<String>,
    /// Sweep range start:end:step.
    #[arg(long, allow_hyphen_values = true)]
    pub t_range: Option<String>,
    /// Candidate labels, comma-separated.
    #[arg(long)]
    pub labels: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the per-round log of `simulate` as CSV.
    #[arg(long)]
    pub log: Option<PathBuf>,
}

fn opt<T>(
    value: &Option<String>,
    flag: &str,
    parse: impl Fn(&str) -> Result<T, String>,
) -> Result<Option<T>, CliError> {
    value
        .as_deref()
        .map(|v| parse(v).map_err(|e| invalid(format!("--{flag}: {e}"))))
        .transpose()
}

impl CommonArgs {
    fn to_config(&self, command: Command) -> Result<RunConfig, CliError> {
        let scalar = |v: &Option<String>, flag: &str| opt(v, flag, |s| parse_scalar(s).map(Scalar));
        let triple = |v: &Option<String>, flag: &str| opt(v, flag, |s| parse_list::<3>(s).map(scalars));
        let labels = opt(&self.labels, "labels", |s| {
            let parts: Vec<String> = s.split(',').map(|p| p.trim().to_string()).collect();
            <[String; 3]>::try_from(parts).map_err(|p| format!("expected 3 labels, got {}", p.len()))
        })?;
        Ok(RunConfig {
            command: Some(command),
            cutter: triple(&self.cutter, "cutter")?,
            chooser: triple(&self.chooser, "chooser")?,
            t: triple(&self.t, "t")?,
            n_rounds: self.n_rounds,
            seed: self.seed,
            tol: scalar(&self.tol, "tol")?,
            eps: scalar(&self.eps, "eps")?,
            z: scalar(&self.z, "z")?,
            simplex_step: scalar(&self.simplex_step, "simplex-step")?,
            t_step: scalar(&self.t_step, "t-step")?,
            residual_tol: scalar(&self.residual_tol, "residual-tol")?,
            family_tol: scalar(&self.family_tol, "family-tol")?,
            t_range: opt(&self.t_range, "t-range", |s| parse_range(s).map(scalars))?,
            labels,
            format: self.format,
            out: self.out.clone(),
            log: self.log.clone(),
        })
    }
}

impl Cli {
    /// Flags merged over the `--config` file, if any.
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let (command, args) = self.command.split();
        let from_flags = args.to_config(command)?;
        let Some(path) = &args.config else {
            return Ok(from_flags);
        };
        let from_file = RunConfig::from_json_file(path)?;
        if let Some(other) = from_file.command {
            if other != command {
                return Err(invalid(format!(
                    "{} names command {:?}, but {:?} was requested",
                    path.display(),
                    other.name(),
                    command.name()
                )));
            }
        }
        Ok(from_flags.or(from_file))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(args: &[&str]) -> Result<RunConfig, CliError> {
        let mut argv = vec!["cut-choose"];
        argv.extend_from_slice(args);
        Cli::try_parse_from(argv).unwrap().into_config()
    }

    #[test]
    fn chooser_forms_are_exclusive() {
        let c = config(&["diet", "--cutter", "1/3,1/3,1/3", "--t", "0,0,0", "--chooser", "0.5,0.5,0.5"]).unwrap();
        assert!(matches!(run(&c), Err(CliError::ConfigInvalid(_))));
        let c = config(&["diet", "--cutter", "1/3,1/3,1/3"]).unwrap();
        assert_eq!(run(&c).unwrap_err().exit_code(), EXIT_CONFIG_INVALID);
    }

    #[test]
    fn bad_numbers_are_config_errors() {
        let err = config(&["diet", "--cutter", "1/3,1/3"]).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_CONFIG_INVALID);
        let c = config(&["diet", "--cutter", "0.5,0.5,0.5", "--t", "0,0,0"]).unwrap();
        assert_eq!(run(&c).unwrap_err().exit_code(), EXIT_CONFIG_INVALID);
    }

    #[test]
    fn negative_t_values_parse() {
        let c = config(&["classify", "--t", "-0.5,-0.5,-0.5"]).unwrap();
        let out = run(&c).unwrap();
        let env: Envelope<ClassifyResults> = serde_json::from_str(&out.text).unwrap();
        assert_eq!(env.results.class, crate::PreferenceClass::IntransitiveCycleCondition2);
    }

    #[test]
    fn sweep_parameters_are_evenly_spaced() {
        let ts = sweep_parameters([-1.0, 1.0, 0.1]).unwrap();
        assert_eq!(ts.len(), 21);
        assert_eq!((ts[0], ts[10], ts[20]), (-1.0, 0.0, 1.0));
        assert_eq!(sweep_parameters([0.5, 0.5, 0.1]).unwrap(), vec![0.5]);
        assert!(sweep_parameters([-1.0, 1.0, 0.3]).is_err());
        assert!(sweep_parameters([-2.0, 1.0, 0.1]).is_err());
    }

    #[test]
    fn csv_is_refused_where_there_is_no_table() {
        let c = config(&["solve", "--format", "csv"]).unwrap();
        assert_eq!(run(&c).unwrap_err().exit_code(), EXIT_CONFIG_INVALID);
    }

    #[test]
    fn near_uniform_cutter_warns() {
        let c = config(&["feasible", "--cutter", "0.3333333333,0.3333333333,0.3333333334"]).unwrap();
        let out = run(&c).unwrap();
        assert_eq!(out.warnings.len(), 1);
        let env: Envelope<FeasibleResults> = serde_json::from_str(&out.text).unwrap();
        assert!(!env.results.feasible);

        let c = config(&["feasible", "--cutter", "1/3,1/3,1/3"]).unwrap();
        let out = run(&c).unwrap();
        assert!(out.warnings.is_empty());
        let env: Envelope<FeasibleResults> = serde_json::from_str(&out.text).unwrap();
        assert!(env.results.feasible);
    }
}
