//! Result files: JSON provenance and plot-ready CSV.
//!
//! Every file is byte-deterministic for a fixed master seed except the
//! `timestamp` JSON field. CSV files carry no timestamp at all, and axis
//! columns are pre-transformed (log10) wherever the matching study plots a
//! log axis.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, Result};
use crate::solve::{CostModeChoice, SolveOutcome, SolveSettings};
use crate::sweeps::{plot_x, SweepKind, SweepReport};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Which artifact families a command writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    Csv,
    Json,
    #[default]
    Both,
}

impl OutputFormat {
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        match text {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "both" => Ok(OutputFormat::Both),
            other => Err(format!("expected csv, json or both, got {other:?}")),
        }
    }

    pub fn wants_csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }

    pub fn wants_json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }
}

/// File-name fragment from a problem label: lowercase alphanumerics with
/// single underscores.
pub fn slug(label: &str) -> String {
    let mut out = String::with_capacity(label.len());
    for ch in label.chars() {
        if ch.is_ascii_alphanumeric() {
            out.push(ch.to_ascii_lowercase());
        } else if !out.ends_with('_') && !out.is_empty() {
            out.push('_');
        }
    }
    out.trim_end_matches('_').to_string()
}

/// Optimizer settings echoed into result files.
#[derive(Debug, Clone, Serialize)]
pub struct SettingsEcho {
    pub method: &'static str,
    pub learning_rate: f64,
    /// `null` means the family default budget.
    pub max_iterations: Option<usize>,
    /// `null` means the family default damping.
    pub momentum_beta: Option<f64>,
    pub cost_kind: &'static str,
    pub cost_mode: String,
    pub ansatz_layers_override: Option<usize>,
    pub restarts: usize,
}

impl SettingsEcho {
    pub fn from_settings(settings: &SolveSettings) -> Self {
        Self {
            method: match settings.method {
                vqls_core::optimizer::OptimizerMethod::Momentum => "momentum",
                vqls_core::optimizer::OptimizerMethod::Adam => "adam",
            },
            learning_rate: settings.effective_learning_rate(),
            max_iterations: settings.max_iterations,
            momentum_beta: settings.momentum_beta,
            cost_kind: match settings.cost_kind {
                vqls_core::cost::CostKind::Local => "local",
                vqls_core::cost::CostKind::Global => "global",
            },
            cost_mode: match settings.cost_mode {
                CostModeChoice::Analytic => "analytic".to_string(),
                CostModeChoice::Shots(shots) => format!("shots:{shots}"),
            },
            ansatz_layers_override: settings.layers,
            restarts: settings.restarts,
        }
    }
}

/// Full record of one solve, as serialized to JSON.
#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub label: String,
    pub timestamp: String,
    pub tool_version: &'static str,
    pub converged: bool,
    pub iterations: usize,
    pub cost_evaluations: usize,
    pub gradient_evaluations: usize,
    pub final_cost: f64,
    /// Requested solution precision.
    pub epsilon: f64,
    /// Cost value the run had to reach to certify that precision.
    pub cost_threshold: f64,
    pub kappa: f64,
    pub fidelity: f64,
    pub seed: u64,
    pub restart_seed: u64,
    pub restarts_used: usize,
    pub ansatz_layers: usize,
    pub param_count: usize,
    pub params: Vec<f64>,
    pub trace: Vec<f64>,
    pub optimizer: SettingsEcho,
}

pub fn timestamp_now() -> String {
    chrono::Utc::now().to_rfc3339()
}

pub fn solve_report(label: &str, settings: &SolveSettings, outcome: &SolveOutcome) -> SolveReport {
    SolveReport {
        label: label.to_string(),
        timestamp: timestamp_now(),
        tool_version: TOOL_VERSION,
        converged: outcome.result.converged,
        iterations: outcome.result.iterations,
        cost_evaluations: outcome.result.cost_evaluations,
        gradient_evaluations: outcome.result.gradient_evaluations,
        final_cost: outcome.result.final_cost,
        epsilon: settings.precision,
        cost_threshold: outcome.cost_threshold,
        kappa: outcome.kappa,
        fidelity: outcome.fidelity,
        seed: settings.seed,
        restart_seed: outcome.restart_seed,
        restarts_used: outcome.restarts_used,
        ansatz_layers: outcome.spec.layers(),
        param_count: outcome.spec.param_count(),
        params: outcome.result.params.clone(),
        trace: outcome.result.cost_trace.clone(),
        optimizer: SettingsEcho::from_settings(settings),
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut body = serde_json::to_vec_pretty(value).map_err(|e| CliError::Serialize {
        context: path.display().to_string(),
        source: e,
    })?;
    body.push(b'\n');
    fs::write(path, body).map_err(CliError::io(path.display().to_string()))?;
    Ok(())
}

fn float_cell(value: f64) -> String {
    format!("{value}")
}

fn optional_cell(value: Option<f64>) -> String {
    value.map(float_cell).unwrap_or_default()
}

/// Writes the solve JSON and, when solution vectors are attached, the
/// side-by-side solution CSV. Returns the created paths.
pub fn write_solve_outputs(
    dir: &Path,
    report: &SolveReport,
    outcome: &SolveOutcome,
    with_solution_table: bool,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(CliError::io(dir.display().to_string()))?;
    let stem = format!("solve_{}", slug(&report.label));
    let mut written = Vec::new();

    let json_path = dir.join(format!("{stem}.json"));
    write_json(&json_path, report)?;
    written.push(json_path);

    if with_solution_table {
        let csv_path = dir.join(format!("solution_{}.csv", slug(&report.label)));
        let mut rows = Vec::with_capacity(outcome.rescaled.len() + 2);
        rows.push("index,vqls,classical".to_string());
        for (i, (v, c)) in outcome.rescaled.iter().zip(&outcome.classical).enumerate() {
            rows.push(format!("{i},{},{}", float_cell(*v), float_cell(*c)));
        }
        rows.push(String::new());
        fs::write(&csv_path, rows.join("\n"))
            .map_err(CliError::io(csv_path.display().to_string()))?;
        written.push(csv_path);
    }
    Ok(written)
}

/// CSV column headers for each sweep kind; the x column is pre-transformed
/// to match the corresponding plot axis.
fn sweep_headers(kind: SweepKind) -> [&'static str; 4] {
    match kind {
        SweepKind::Shots => ["shots_log10", "tv_log10", "std", "n"],
        SweepKind::Epsilon => ["inv_epsilon_log10", "mean_evals", "std", "n"],
        SweepKind::Qubits => ["n_qubits", "mean_evals", "std", "n"],
        SweepKind::Condition => ["kappa", "mean_evals", "std", "n"],
    }
}

/// y cell for the plot CSV; shots sweeps plot log10 of the mean distance.
fn sweep_y_cell(kind: SweepKind, mean: Option<f64>) -> String {
    match (kind, mean) {
        (SweepKind::Shots, Some(m)) if m > 0.0 => float_cell(m.log10()),
        (SweepKind::Shots, _) => String::new(),
        (_, m) => optional_cell(m),
    }
}

/// Provenance wrapper serialized to the sweep JSON file.
#[derive(Serialize)]
struct SweepFile<'a> {
    timestamp: String,
    tool_version: &'static str,
    settings: SettingsEcho,
    #[serde(flatten)]
    report: &'a SweepReport,
}

/// Writes the sweep's plot CSV and/or provenance JSON under `stem`.
pub fn write_sweep_outputs(
    dir: &Path,
    format: OutputFormat,
    stem: &str,
    settings: &SolveSettings,
    report: &SweepReport,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(CliError::io(dir.display().to_string()))?;
    let mut written = Vec::new();

    if format.wants_csv() {
        let csv_path = dir.join(format!("{stem}.csv"));
        let mut rows = Vec::with_capacity(report.records.len() + 1);
        rows.push(sweep_headers(report.kind).join(","));
        for record in &report.records {
            rows.push(
                [
                    float_cell(plot_x(report.kind, record.point)),
                    sweep_y_cell(report.kind, record.mean_metric),
                    optional_cell(record.std_metric),
                    record.converged_count.to_string(),
                ]
                .join(","),
            );
        }
        rows.push(String::new());
        fs::write(&csv_path, rows.join("\n"))
            .map_err(CliError::io(csv_path.display().to_string()))?;
        written.push(csv_path);
    }

    if format.wants_json() {
        let json_path = dir.join(format!("{stem}.json"));
        let file = SweepFile {
            timestamp: timestamp_now(),
            tool_version: TOOL_VERSION,
            settings: SettingsEcho::from_settings(settings),
            report,
        };
        write_json(&json_path, &file)?;
        written.push(json_path);
    }
    Ok(written)
}
