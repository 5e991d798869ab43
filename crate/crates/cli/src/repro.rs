//! One-command presets for the reference scaling studies.
//!
//! Each preset bundles the study's stated parameters (shot snapshots,
//! precision targets, size ranges) at desk scale: sizes default to registers
//! that finish in minutes on a laptop, and the largest published registers
//! stay available through explicit size overrides. Heat presets cap at 8
//! qubits like the studies themselves.

use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};
use crate::labels::{parse_family, ProblemFamily};
use crate::report::{self, OutputFormat};
use crate::solve::{solve_with_restarts, SolveSettings};
use crate::sweeps::{
    default_precision_points, default_shot_points, run_scaling_sweep, run_shots_sweep,
    SweepConfig, SweepKind, CONDITION_COEFFICIENTS,
};

/// Reproduction target; names follow the study's figure numbering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    ShotsPrecision,     // fig9
    TestEpsilon,        // fig10
    TestQubits,         // fig11
    TestCondition,      // fig12
    Rod1dSolution,      // fig13
    RodEpsilon,         // fig14
    RodQubits,          // fig15
    PlateSolutionSmall, // fig16
    PlateSolutionLarge, // fig17
    PlateEpsilon,       // fig18
    PlateQubits,        // fig19
}

impl Figure {
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        Ok(match text {
            "fig9" => Figure::ShotsPrecision,
            "fig10" => Figure::TestEpsilon,
            "fig11" => Figure::TestQubits,
            "fig12" => Figure::TestCondition,
            "fig13" => Figure::Rod1dSolution,
            "fig14" => Figure::RodEpsilon,
            "fig15" => Figure::RodQubits,
            "fig16" => Figure::PlateSolutionSmall,
            "fig17" => Figure::PlateSolutionLarge,
            "fig18" => Figure::PlateEpsilon,
            "fig19" => Figure::PlateQubits,
            other => return Err(format!("unknown figure preset {other:?}")),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Figure::ShotsPrecision => "fig9",
            Figure::TestEpsilon => "fig10",
            Figure::TestQubits => "fig11",
            Figure::TestCondition => "fig12",
            Figure::Rod1dSolution => "fig13",
            Figure::RodEpsilon => "fig14",
            Figure::RodQubits => "fig15",
            Figure::PlateSolutionSmall => "fig16",
            Figure::PlateSolutionLarge => "fig17",
            Figure::PlateEpsilon => "fig18",
            Figure::PlateQubits => "fig19",
        }
    }
}

fn sweep(
    kind: SweepKind,
    label: String,
    points: Vec<f64>,
    precision: f64,
    settings: &SolveSettings,
) -> SweepConfig {
    SweepConfig {
        kind,
        points,
        repetitions: 10,
        label,
        settings: SolveSettings {
            precision,
            ..settings.clone()
        },
    }
}

fn run_preset_sweep(
    dir: &Path,
    format: OutputFormat,
    stem: &str,
    config: &SweepConfig,
) -> Result<Vec<PathBuf>> {
    let report = if config.kind == SweepKind::Shots {
        run_shots_sweep(config)?
    } else {
        run_scaling_sweep(config)?
    };
    report::write_sweep_outputs(dir, format, stem, &config.settings, &report)
}

fn run_preset_solve(
    dir: &Path,
    label: &str,
    precision: f64,
    settings: &SolveSettings,
) -> Result<Vec<PathBuf>> {
    let (family, size) = parse_family(label)?;
    let size = size.ok_or_else(|| CliError::Usage(format!("label {label:?} needs a size")))?;
    let problem = family.instantiate(size)?;
    let settings = SolveSettings {
        precision,
        ..settings.clone()
    };
    let outcome = solve_with_restarts(&problem, &family, &settings)?;
    let report = report::solve_report(label, &settings, &outcome);
    let written = report::write_solve_outputs(dir, &report, &outcome, family.is_heat())?;
    if !outcome.result.converged {
        return Err(CliError::NonConverged(format!(
            "{label:?} stayed above its threshold after {} restarts; best cost {:.3e} \
             (results written anyway)",
            outcome.restarts_used, outcome.result.final_cost
        )));
    }
    Ok(written)
}

/// Runs one figure preset, writing its artifacts under `dir`.
///
/// `sizes` overrides the preset's register list (1D and benchmark sizes count
/// qubits; plate solution presets count qubits per direction; plate sweep
/// presets count total qubits).
pub fn run_figure(
    figure: Figure,
    dir: &Path,
    format: OutputFormat,
    settings: &SolveSettings,
    sizes: Option<Vec<usize>>,
) -> Result<Vec<PathBuf>> {
    let fig = figure.name();
    let sized = |defaults: &[usize]| -> Vec<usize> {
        sizes.clone().unwrap_or_else(|| defaults.to_vec())
    };
    let mut written = Vec::new();
    match figure {
        Figure::ShotsPrecision => {
            let config = sweep(
                SweepKind::Shots,
                "test:c0=1,n=3".into(),
                default_shot_points(),
                0.001,
                settings,
            );
            written.extend(run_preset_sweep(dir, format, &format!("{fig}_shots"), &config)?);
        }
        Figure::TestEpsilon => {
            let ladder = default_precision_points(&ProblemFamily::Test { c0: 1.0 });
            for n in sized(&[3, 4, 5]) {
                let config = sweep(
                    SweepKind::Epsilon,
                    format!("test:c0=1,n={n}"),
                    ladder.clone(),
                    0.001,
                    settings,
                );
                let stem = format!("{fig}_epsilon_test_n_{n}");
                written.extend(run_preset_sweep(dir, format, &stem, &config)?);
            }
        }
        Figure::TestQubits => {
            let points = sized(&[3, 4, 5, 6, 7, 8]);
            let config = sweep(
                SweepKind::Qubits,
                "test:c0=1".into(),
                points.iter().map(|&n| n as f64).collect(),
                0.001,
                settings,
            );
            written.extend(run_preset_sweep(dir, format, &format!("{fig}_qubits_test"), &config)?);
        }
        Figure::TestCondition => {
            for precision in [0.01, 0.03] {
                let config = sweep(
                    SweepKind::Condition,
                    "test:c0=1,n=4".into(),
                    CONDITION_COEFFICIENTS.to_vec(),
                    precision,
                    settings,
                );
                let tag = if precision == 0.01 { "eps_0_01" } else { "eps_0_03" };
                let stem = format!("{fig}_condition_{tag}");
                written.extend(run_preset_sweep(dir, format, &stem, &config)?);
            }
        }
        Figure::Rod1dSolution => {
            for n in sized(&[5]) {
                written.extend(run_preset_solve(
                    dir,
                    &format!("heat1d:n={n}"),
                    0.05,
                    settings,
                )?);
            }
        }
        Figure::RodEpsilon => {
            let ladder = default_precision_points(&ProblemFamily::Heat1d { t1: 0.0, t2: 1.0 });
            for n in sized(&[3, 4]) {
                let config = sweep(
                    SweepKind::Epsilon,
                    format!("heat1d:n={n}"),
                    ladder.clone(),
                    0.05,
                    settings,
                );
                let stem = format!("{fig}_epsilon_heat1d_n_{n}");
                written.extend(run_preset_sweep(dir, format, &stem, &config)?);
            }
        }
        Figure::RodQubits => {
            let points = sized(&[3, 4, 5]);
            let config = sweep(
                SweepKind::Qubits,
                "heat1d".into(),
                points.iter().map(|&n| n as f64).collect(),
                0.05,
                settings,
            );
            written.extend(run_preset_sweep(
                dir,
                format,
                &format!("{fig}_qubits_heat1d"),
                &config,
            )?);
        }
        Figure::PlateSolutionSmall => {
            for npd in sized(&[3]) {
                written.extend(run_preset_solve(
                    dir,
                    &format!("heat2d:npd={npd}"),
                    0.05,
                    settings,
                )?);
            }
        }
        Figure::PlateSolutionLarge => {
            for npd in sized(&[4]) {
                written.extend(run_preset_solve(
                    dir,
                    &format!("heat2d:npd={npd}"),
                    0.05,
                    settings,
                )?);
            }
        }
        Figure::PlateEpsilon => {
            let ladder = default_precision_points(&ProblemFamily::Heat2d {
                t1: 0.0,
                t2: 1.0,
                lateral: vqls_core::problems::LateralBoundary::Dirichlet,
            });
            for npd in sized(&[2]) {
                let config = sweep(
                    SweepKind::Epsilon,
                    format!("heat2d:npd={npd}"),
                    ladder.clone(),
                    0.05,
                    settings,
                );
                let stem = format!("{fig}_epsilon_heat2d_npd_{npd}");
                written.extend(run_preset_sweep(dir, format, &stem, &config)?);
            }
        }
        Figure::PlateQubits => {
            let points = sized(&[4, 6]);
            let config = sweep(
                SweepKind::Qubits,
                "heat2d".into(),
                points.iter().map(|&n| n as f64).collect(),
                0.05,
                settings,
            );
            written.extend(run_preset_sweep(
                dir,
                format,
                &format!("{fig}_qubits_heat2d"),
                &config,
            )?);
        }
    }
    Ok(written)
}
