//! Repetition-averaged sweeps over shots, precision, register size and
//! conditioning.
//!
//! Each sweep point runs `repetitions` independent single solves with seeds
//! derived from `(master seed, point index, repetition index)`; aggregates
//! average over converged runs only. Points with zero converged runs keep a
//! record with empty aggregates rather than disappearing from the output.

use rayon::prelude::*;
use serde::Serialize;

use vqls_core::optimizer::{minimize, OptimizerConfig};
use vqls_core::seeding;

use crate::error::{CliError, Result};
use crate::fit::{linear_fit, LinearFit};
use crate::labels::ProblemFamily;
use crate::solve::SolveSettings;

/// Which quantity the sweep walks over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Shots,
    Epsilon,
    Qubits,
    Condition,
}

/// Qubit ceiling for heat-problem sweeps; the reference studies stop at a
/// 256-point 1D rod and a 16x16 2D plate.
pub const HEAT_SWEEP_MAX_QUBITS: usize = 8;

/// Coefficient ladder behind the published condition numbers
/// {14.3333, 9, 5, 2.3333, 1.5}.
pub const CONDITION_COEFFICIENTS: [f64; 5] = [0.03, 0.05, 0.1, 1.0, 2.0];

/// Default shot counts: 100 doubled ten times, bracketing the study's
/// 3000-shot snapshot.
pub fn default_shot_points() -> Vec<f64> {
    (0..=10).map(|k| (100u64 << k) as f64).collect()
}

/// Default precision ladders for 1/epsilon scaling plots. Heat thresholds
/// steepen with the condition number, so the heat ladder stops sooner.
pub fn default_precision_points(family: &ProblemFamily) -> Vec<f64> {
    if family.is_heat() {
        vec![0.3, 0.2, 0.1, 0.05]
    } else {
        vec![0.3, 0.1, 0.03, 0.01, 0.003, 0.001]
    }
}

/// Default register ladders for size scaling plots, in total qubits.
pub fn default_qubit_points(family: &ProblemFamily) -> Vec<f64> {
    match family {
        ProblemFamily::Test { .. } => vec![3.0, 4.0, 5.0, 6.0, 7.0, 8.0],
        ProblemFamily::Heat1d { .. } => vec![3.0, 4.0, 5.0],
        ProblemFamily::Heat2d { .. } => vec![4.0, 6.0],
    }
}

/// A sweep request: points to visit plus the shared solve settings.
///
/// `settings.seed` acts as the master seed; `settings.precision` is the fixed
/// precision for sweeps that do not walk the precision axis. Scaling sweeps
/// feed the precision to the optimizer as the raw cost threshold, mirroring
/// how the reference studies count evaluations to a cost of epsilon. The
/// solve path's stricter condition-number mapping would push heat thresholds
/// orders of magnitude lower and swamp the trend plots.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub kind: SweepKind,
    pub points: Vec<f64>,
    pub repetitions: usize,
    pub label: String,
    pub settings: SolveSettings,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(CliError::Usage("sweep needs at least one point".into()));
        }
        let increasing = self.points.windows(2).all(|w| w[0] < w[1]);
        let decreasing = self.points.windows(2).all(|w| w[0] > w[1]);
        if !(increasing || decreasing) {
            return Err(CliError::Usage(
                "sweep points must be strictly monotone".into(),
            ));
        }
        if self.repetitions < 1 {
            return Err(CliError::Usage("repetitions must be at least 1".into()));
        }
        match self.kind {
            SweepKind::Epsilon => {
                if self.points.iter().any(|&e| e <= 0.0 || e >= 0.5) {
                    return Err(CliError::Usage(
                        "precision points must lie in (0, 0.5)".into(),
                    ));
                }
            }
            SweepKind::Qubits | SweepKind::Shots => {
                if self
                    .points
                    .iter()
                    .any(|&p| p < 1.0 || p.fract() != 0.0 || !p.is_finite())
                {
                    return Err(CliError::Usage(
                        "points on this axis must be positive integers".into(),
                    ));
                }
            }
            SweepKind::Condition => {}
        }
        if matches!(self.kind, SweepKind::Qubits | SweepKind::Condition) {
            let fixed = self.settings.precision;
            if fixed <= 0.0 || fixed >= 0.5 {
                return Err(CliError::Usage(
                    "the fixed precision must lie in (0, 0.5)".into(),
                ));
            }
        }
        Ok(())
    }
}

/// One solve inside a sweep, summarized for provenance.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub point: f64,
    pub repetition: usize,
    pub seed: u64,
    pub converged: bool,
    /// Metric value; absent for runs excluded from aggregation.
    pub metric: Option<f64>,
    pub iterations: usize,
    pub final_cost: f64,
}

/// Aggregate for a single sweep point.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    /// Emitted x value (condition sweeps report the condition number, not the
    /// raw coefficient that produced it).
    pub point: f64,
    pub metric_name: &'static str,
    /// Mean over converged runs; absent when none converged.
    pub mean_metric: Option<f64>,
    /// Sample standard deviation over converged runs.
    pub std_metric: Option<f64>,
    pub converged_count: usize,
    pub runs: Vec<RunSummary>,
}

/// A completed sweep ready for emission.
#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub kind: SweepKind,
    pub label: String,
    pub metric_name: &'static str,
    pub master_seed: u64,
    pub repetitions: usize,
    /// Fixed precision for sweeps that hold it constant.
    pub precision: Option<f64>,
    pub records: Vec<SweepRecord>,
    /// Least-squares line through the plot axes, when the reference figure
    /// draws one.
    pub fit: Option<LinearFit>,
}

const METRIC_EVALUATIONS: &str = "cost_evaluations_to_solution";
const METRIC_TV: &str = "tv_distance";

/// Total-variation distance between an empirical shot histogram and an exact
/// basis-state distribution.
pub fn tv_distance(counts: &[u64], shots: u64, exact: &[f64]) -> f64 {
    0.5 * counts
        .iter()
        .zip(exact)
        .map(|(&c, &p)| (c as f64 / shots as f64 - p).abs())
        .sum::<f64>()
}

/// Mean and sample standard deviation over the present values.
pub fn aggregate(metrics: &[Option<f64>]) -> (Option<f64>, Option<f64>, usize) {
    let values: Vec<f64> = metrics.iter().flatten().copied().collect();
    let count = values.len();
    if count == 0 {
        return (None, None, 0);
    }
    let mean = values.iter().sum::<f64>() / count as f64;
    let std = if count == 1 {
        0.0
    } else {
        let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
        (ss / (count - 1) as f64).sqrt()
    };
    (Some(mean), Some(std), count)
}

fn record_from_runs(point: f64, metric_name: &'static str, runs: Vec<RunSummary>) -> SweepRecord {
    let metrics: Vec<Option<f64>> = runs.iter().map(|r| r.metric).collect();
    let (mean_metric, std_metric, converged_count) = aggregate(&metrics);
    SweepRecord {
        point,
        metric_name,
        mean_metric,
        std_metric,
        converged_count,
        runs,
    }
}

/// x coordinate each sweep kind plots against, matching the reference
/// figure's axis transform.
pub fn plot_x(kind: SweepKind, point: f64) -> f64 {
    match kind {
        SweepKind::Shots => point.log10(),
        SweepKind::Epsilon => (1.0 / point).log10(),
        SweepKind::Qubits | SweepKind::Condition => point,
    }
}

/// y coordinate for the fit; shots sweeps are fitted log-log.
fn plot_y(kind: SweepKind, mean: f64) -> f64 {
    match kind {
        SweepKind::Shots => mean.log10(),
        _ => mean,
    }
}

fn fit_over_records(kind: SweepKind, records: &[SweepRecord]) -> Option<LinearFit> {
    if kind == SweepKind::Condition {
        return None;
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = records
        .iter()
        .filter_map(|r| r.mean_metric.map(|m| (plot_x(kind, r.point), plot_y(kind, m))))
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .unzip();
    linear_fit(&xs, &ys)
}

struct PointTask {
    index: usize,
    emitted_point: f64,
    problem: vqls_core::LinearProblem64,
    threshold: f64,
    spec: vqls_core::ansatz::AnsatzSpec,
}

/// Sweeps where the metric is evaluations-to-solution of fresh solves:
/// precision, register size and conditioning.
pub fn run_scaling_sweep(config: &SweepConfig) -> Result<SweepReport> {
    config.validate()?;
    let (family, size) = crate::labels::parse_family(&config.label)?;
    let settings = &config.settings;
    let master = settings.seed;

    let fixed_precision = (config.kind != SweepKind::Epsilon).then_some(settings.precision);
    let mut tasks = Vec::with_capacity(config.points.len());
    for (index, &point) in config.points.iter().enumerate() {
        let task = match config.kind {
            SweepKind::Epsilon => {
                let size = size.ok_or_else(|| {
                    CliError::Usage(format!(
                        "label {:?} needs an explicit size for a precision sweep",
                        config.label
                    ))
                })?;
                let problem = family.instantiate(size)?;
                let spec = settings.ansatz_for(&family, problem.n_qubits())?;
                PointTask {
                    index,
                    emitted_point: point,
                    problem,
                    threshold: point,
                    spec,
                }
            }
            SweepKind::Qubits => {
                let n = point as usize;
                if family.is_heat() && n > HEAT_SWEEP_MAX_QUBITS {
                    return Err(CliError::Usage(format!(
                        "heat sweeps stop at {HEAT_SWEEP_MAX_QUBITS} qubits, got {n}"
                    )));
                }
                let problem = family.instantiate_total(n)?;
                let spec = settings.ansatz_for(&family, problem.n_qubits())?;
                PointTask {
                    index,
                    emitted_point: problem.n_qubits() as f64,
                    problem,
                    threshold: settings.precision,
                    spec,
                }
            }
            SweepKind::Condition => {
                let conditioned = ProblemFamily::Test { c0: point };
                let problem = conditioned.instantiate(size.unwrap_or(4))?;
                let spec = settings.ansatz_for(&conditioned, problem.n_qubits())?;
                PointTask {
                    index,
                    emitted_point: problem.condition_number()?,
                    problem,
                    threshold: settings.precision,
                    spec,
                }
            }
            SweepKind::Shots => {
                return Err(CliError::Usage(
                    "shot sweeps use run_shots_sweep".into(),
                ))
            }
        };
        tasks.push(task);
    }

    let jobs: Vec<(usize, usize)> = (0..tasks.len())
        .flat_map(|i| (0..config.repetitions).map(move |r| (i, r)))
        .collect();
    let summaries: Vec<RunSummary> = jobs
        .par_iter()
        .map(|&(i, r)| -> Result<RunSummary> {
            let task = &tasks[i];
            let seed = seeding::derive2(master, i as u64, r as u64);
            let optimizer = OptimizerConfig {
                method: settings.method,
                learning_rate: settings.effective_learning_rate(),
                momentum_beta: settings.effective_momentum_beta(&family),
                epsilon: task.threshold,
                max_iterations: settings
                    .effective_max_iterations(&family, task.problem.n_qubits()),
                seed,
                cost_kind: settings.cost_kind,
                ..OptimizerConfig::default()
            };
            let result = minimize(&task.problem, &task.spec, &optimizer)?;
            Ok(RunSummary {
                point: task.emitted_point,
                repetition: r,
                seed,
                converged: result.converged,
                metric: result
                    .converged
                    .then_some(result.cost_evaluations as f64),
                iterations: result.iterations,
                final_cost: result.final_cost,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let records: Vec<SweepRecord> = tasks
        .iter()
        .map(|task| {
            let runs: Vec<RunSummary> = jobs
                .iter()
                .zip(&summaries)
                .filter(|(&(i, _), _)| i == task.index)
                .map(|(_, s)| s.clone())
                .collect();
            record_from_runs(task.emitted_point, METRIC_EVALUATIONS, runs)
        })
        .collect();

    let fit = fit_over_records(config.kind, &records);
    Ok(SweepReport {
        kind: config.kind,
        label: config.label.clone(),
        metric_name: METRIC_EVALUATIONS,
        master_seed: master,
        repetitions: config.repetitions,
        precision: fixed_precision,
        records,
        fit,
    })
}

/// Shot-count sweep: solves the instance once analytically, then measures
/// how far finite-shot sampling of the solved state sits from its exact
/// distribution, in total-variation distance.
pub fn run_shots_sweep(config: &SweepConfig) -> Result<SweepReport> {
    config.validate()?;
    let (family, size) = crate::labels::parse_family(&config.label)?;
    let size = size.ok_or_else(|| {
        CliError::Usage(format!(
            "label {:?} needs an explicit size for a shots sweep",
            config.label
        ))
    })?;
    let problem = family.instantiate(size)?;
    let settings = SolveSettings {
        cost_mode: crate::solve::CostModeChoice::Analytic,
        ..config.settings.clone()
    };
    let outcome = crate::solve::solve_with_restarts(&problem, &family, &settings)?;
    if !outcome.result.converged {
        return Err(CliError::NonConverged(format!(
            "base solve for {:?} did not converge; cannot sample its state",
            config.label
        )));
    }
    let state = &outcome.result.state;
    let exact = state.probabilities();
    let master = settings.seed;

    let jobs: Vec<(usize, usize)> = (0..config.points.len())
        .flat_map(|i| (0..config.repetitions).map(move |r| (i, r)))
        .collect();
    let summaries: Vec<RunSummary> = jobs
        .par_iter()
        .map(|&(i, r)| -> Result<RunSummary> {
            let shots = config.points[i] as u64;
            let seed = seeding::derive2(master, i as u64, r as u64);
            let counts = state.sample_counts(shots, seed)?;
            let tv = tv_distance(&counts, shots, &exact);
            Ok(RunSummary {
                point: config.points[i],
                repetition: r,
                seed,
                converged: true,
                metric: Some(tv),
                iterations: 0,
                final_cost: outcome.result.final_cost,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let records: Vec<SweepRecord> = config
        .points
        .iter()
        .enumerate()
        .map(|(i, &point)| {
            let runs: Vec<RunSummary> = summaries
                .iter()
                .zip(&jobs)
                .filter(|(_, &(ji, _))| ji == i)
                .map(|(s, _)| s.clone())
                .collect();
            record_from_runs(point, METRIC_TV, runs)
        })
        .collect();

    let fit = fit_over_records(SweepKind::Shots, &records);
    Ok(SweepReport {
        kind: SweepKind::Shots,
        label: config.label.clone(),
        metric_name: METRIC_TV,
        master_seed: master,
        repetitions: config.repetitions,
        precision: Some(settings.precision),
        records,
        fit,
    })
}
