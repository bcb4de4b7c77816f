//! Report payloads, the JSON envelope and CSV rendering.
//!
//! Every JSON report has the shape
//!
//! ```text
//! { "command": ..., "inputs": { RunConfig }, "results": { ... },
//!   "versions": { "artifact": ..., "generator": ... } }
//! ```
//!
//! CSV output is UTF-8, comma-delimited, with a header row and LF line
//! endings. Floats are written with 17 significant digits.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{CliError, Command, RunConfig};
use crate::diet::{DietProfile, FairnessReport};
use crate::election::ElectionReport;
use crate::simulator::{ConvergenceReport, RoundRecord, SimulationResult, GENERATOR};
use crate::solver::{FeasibilityResult, GridSearchConfig, SolutionFamily, UniquenessReport};
use crate::strategy::{ChooserStrategy, CutterStrategy, FoodIndex, PreferenceClass, PreferenceRelation, TParams};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Versions {
    pub artifact: String,
    pub generator: String,
}

impl Versions {
    pub fn current() -> Self {
        Versions {
            artifact: format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
            generator: GENERATOR.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope<R> {
    pub command: Command,
    pub inputs: RunConfig,
    pub results: R,
    pub versions: Versions,
}

/// `"c[k|j]" -> value` for the six conditionals.
pub fn conditional_map(chooser: &ChooserStrategy) -> BTreeMap<String, f64> {
    let mut map = BTreeMap::new();
    for k in FoodIndex::ALL {
        for j in FoodIndex::ALL {
            if k != j {
                map.insert(format!("c[{k}|{j}]"), chooser.prob(k, j));
            }
        }
    }
    map
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DietResults {
    pub cutter: CutterStrategy,
    pub chooser_t: TParams,
    pub conditionals: BTreeMap<String, f64>,
    pub profile: DietProfile,
    pub fairness: FairnessReport,
    /// `max_j |lambda_j + omega_j - (1 - p_j)|`
    pub conservation_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyResults {
    pub chooser_t: TParams,
    pub conditionals: BTreeMap<String, f64>,
    pub relation: PreferenceRelation,
    pub class: PreferenceClass,
    pub intransitive: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySample {
    pub t: f64,
    pub class: PreferenceClass,
    pub max_abs_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResults {
    pub family: SolutionFamily,
    pub samples: Vec<FamilySample>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeasibleResults {
    pub cutter: CutterStrategy,
    pub tolerance: f64,
    pub feasible: bool,
    pub result: FeasibilityResult,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulateResults {
    pub cutter: CutterStrategy,
    pub chooser_t: TParams,
    pub simulation: SimulationResult,
    pub exact: DietProfile,
    pub convergence: ConvergenceReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub t: f64,
    pub class: PreferenceClass,
    pub lambda_residuals: [f64; 3],
    pub omega_residuals: [f64; 3],
    pub max_abs_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResults {
    pub cutter: CutterStrategy,
    pub eps: f64,
    pub rows: Vec<SweepRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyResults {
    pub grid: GridSearchConfig,
    pub report: UniquenessReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElectionResults {
    pub chooser_t: TParams,
    pub report: ElectionReport,
}

/// Column order of the sweep CSV.
pub const SWEEP_COLUMNS: [&str; 9] = [
    "t",
    "class",
    "lambda_residual_0",
    "lambda_residual_1",
    "lambda_residual_2",
    "omega_residual_0",
    "omega_residual_1",
    "omega_residual_2",
    "max_abs_residual",
];

/// Column order of the per-food diet CSV.
pub const DIET_COLUMNS: [&str; 6] = [
    "food",
    "rejection",
    "lambda",
    "omega",
    "lambda_residual",
    "omega_residual",
];

/// Column order of the per-food simulation CSV.
pub const SIMULATE_COLUMNS: [&str; 8] = [
    "food",
    "rejected_count",
    "lambda_count",
    "omega_count",
    "empirical_lambda",
    "empirical_omega",
    "exact_lambda",
    "exact_omega",
];

/// Column order of the round log CSV.
pub const ROUND_LOG_COLUMNS: [&str; 4] = ["round", "rejected", "chosen", "leftover"];

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, CliError> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let to_cli = |e: csv::Error| CliError::ConfigInvalid(format!("csv: {e}"));
    writer.write_record(header).map_err(to_cli)?;
    for row in rows {
        writer.write_record(&row).map_err(to_cli)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::ConfigInvalid(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn sweep_csv(results: &SweepResults) -> Result<String, CliError> {
    csv_text(
        &SWEEP_COLUMNS,
        results.rows.iter().map(|row| {
            let mut cells = vec![fmt_f64(row.t), row.class.to_string()];
            cells.extend(row.lambda_residuals.iter().map(|&v| fmt_f64(v)));
            cells.extend(row.omega_residuals.iter().map(|&v| fmt_f64(v)));
            cells.push(fmt_f64(row.max_abs_residual));
            cells
        }),
    )
}

pub fn diet_csv(results: &DietResults) -> Result<String, CliError> {
    let p = results.cutter.probabilities();
    csv_text(
        &DIET_COLUMNS,
        (0..3).map(|k| {
            vec![
                k.to_string(),
                fmt_f64(p[k]),
                fmt_f64(results.profile.lambda[k]),
                fmt_f64(results.profile.omega[k]),
                fmt_f64(results.fairness.lambda_residuals[k]),
                fmt_f64(results.fairness.omega_residuals[k]),
            ]
        }),
    )
}

pub fn simulate_csv(results: &SimulateResults) -> Result<String, CliError> {
    let s = &results.simulation;
    csv_text(
        &SIMULATE_COLUMNS,
        (0..3).map(|k| {
            vec![
                k.to_string(),
                s.counts_rejected[k].to_string(),
                s.counts_lambda[k].to_string(),
                s.counts_omega[k].to_string(),
                fmt_f64(s.empirical_lambda[k]),
                fmt_f64(s.empirical_omega[k]),
                fmt_f64(results.exact.lambda[k]),
                fmt_f64(results.exact.omega[k]),
            ]
        }),
    )
}

pub fn round_log_csv(log: &[RoundRecord]) -> Result<String, CliError> {
    csv_text(
        &ROUND_LOG_COLUMNS,
        log.iter().map(|r| {
            vec![
                r.round_index.to_string(),
                r.rejected.to_string(),
                r.chosen.to_string(),
                r.leftover.to_string(),
            ]
        }),
    )
}
