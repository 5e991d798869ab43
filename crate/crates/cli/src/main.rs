//! `vqls-heat`: variational solves of heat-conduction linear systems and
//! reproduction of the associated scaling studies.

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use vqls_cli::config::ConfigFile;
use vqls_cli::error::{CliError, Result};
use vqls_cli::labels::parse_family;
use vqls_cli::report::{self, OutputFormat};
use vqls_cli::repro::{run_figure, Figure};
use vqls_cli::solve::{solve_with_restarts, CostModeChoice, SolveSettings};
use vqls_cli::sweeps::{
    default_precision_points, default_qubit_points, default_shot_points, run_scaling_sweep,
    run_shots_sweep, SweepConfig, SweepKind, CONDITION_COEFFICIENTS,
};
use vqls_core::optimizer::OptimizerMethod;

fn parse_method(text: &str) -> std::result::Result<OptimizerMethod, String> {
    match text {
        "momentum" => Ok(OptimizerMethod::Momentum),
        "adam" => Ok(OptimizerMethod::Adam),
        other => Err(format!("expected momentum or adam, got {other:?}")),
    }
}

#[derive(Parser)]
#[command(
    name = "vqls-heat",
    version,
    about = "Variational quantum linear solver for heat-conduction systems",
    after_help = "Problem labels: test:c0=<v>,n=<q> | heat1d:n=<q>[,t1=,t2=] | \
                  heat2d:npd=<q>[,t1=,t2=,lateral=dirichlet|periodic]. \
                  Sweeps over register size drop the size key (e.g. heat1d). \
                  A --config file holds the global flags as key=value lines; \
                  explicit flags win."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Master seed; every random draw in a command derives from it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for result files.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Worker threads for sweep runs (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Artifact formats for sweeps: csv, json or both.
    #[arg(long, global = true, value_parser = OutputFormat::parse)]
    format: Option<OutputFormat>,
    /// Ansatz depth override (entangling layers).
    #[arg(long, global = true)]
    ansatz_layers: Option<usize>,
    /// Update rule: momentum or adam.
    #[arg(long, global = true, value_parser = parse_method)]
    optimizer: Option<OptimizerMethod>,
    /// Learning rate override.
    #[arg(long, global = true)]
    lr: Option<f64>,
    /// Iteration budget per optimization run; default scales with the
    /// problem family and size.
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    /// Cost evaluation: analytic or shots:<count>.
    #[arg(long, global = true, value_parser = CostModeChoice::parse)]
    cost_mode: Option<CostModeChoice>,
    /// Key=value file supplying any of the global flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one labeled instance and write its result files.
    ///
    /// Emits the solve JSON, plus a side-by-side solution CSV for heat
    /// problems. Exit code 3 if no restart reaches the threshold.
    Solve {
        label: String,
        /// Target solution precision; the stopping threshold is derived from
        /// it through the system's condition number.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Independent seeded attempts before giving up.
        #[arg(long, default_value_t = 5)]
        restarts: usize,
    },
    /// Print the Pauli decomposition of a labeled system.
    Decompose { label: String },
    /// Sampling-precision sweep: TV distance of finite-shot histograms of
    /// the solved state, per shot count.
    SweepShots {
        label: String,
        /// Shot counts (comma separated); default 100 doubled ten times.
        #[arg(long, value_delimiter = ',')]
        points: Option<Vec<f64>>,
        #[arg(long, default_value_t = 10)]
        repetitions: usize,
    },
    /// Evaluations-to-solution versus target precision.
    SweepEpsilon {
        label: String,
        /// Precision points in (0, 0.5), strictly monotone.
        #[arg(long, value_delimiter = ',')]
        points: Option<Vec<f64>>,
        #[arg(long, default_value_t = 10)]
        repetitions: usize,
    },
    /// Evaluations-to-solution versus register size.
    SweepQubits {
        /// Family label without a size key, e.g. heat1d or test:c0=1.
        label: String,
        /// Register sizes in total qubits.
        #[arg(long, value_delimiter = ',')]
        points: Option<Vec<f64>>,
        /// Fixed target precision (default: family preset).
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = 10)]
        repetitions: usize,
    },
    /// Evaluations-to-solution versus condition number over the benchmark
    /// family at four qubits.
    SweepCondition {
        /// Coefficient values that set the conditioning.
        #[arg(long, value_delimiter = ',')]
        points: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        #[arg(long, default_value_t = 10)]
        repetitions: usize,
    },
    /// Run a bundled study preset: fig9 through fig19.
    ///
    /// fig13/fig16 solve showcase instances; fig17 solves the largest plate
    /// and runs for many hours. Sweep presets default to desk-scale sizes;
    /// --sizes widens them.
    Repro {
        figure: String,
        /// Register sizes to use instead of the preset's defaults.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
    },
}

/// Global options after merging flags over the optional config file.
struct Globals {
    seed: u64,
    output_dir: PathBuf,
    workers: Option<usize>,
    format: OutputFormat,
    ansatz_layers: Option<usize>,
    optimizer: OptimizerMethod,
    lr: Option<f64>,
    max_iter: Option<usize>,
    cost_mode: CostModeChoice,
}

impl Globals {
    fn resolve(cli: &Cli) -> Result<Self> {
        let file = match &cli.config {
            Some(path) => Some(ConfigFile::load(path)?),
            None => None,
        };
        let file = file.as_ref();
        let from_file = |key: &str| file.and_then(|f| f.get(key));
        let parse_key = |key: &str, text: &str, what: &str| -> Result<f64> {
            text.parse::<f64>().map_err(|_| {
                CliError::Usage(format!("config key {key}: {what} expected, got {text:?}"))
            })
        };

        let seed = match (cli.seed, from_file("seed")) {
            (Some(s), _) => s,
            (None, Some(text)) => text.parse().map_err(|_| {
                CliError::Usage(format!("config key seed: integer expected, got {text:?}"))
            })?,
            (None, None) => 0,
        };
        let output_dir = cli
            .output_dir
            .clone()
            .or_else(|| from_file("output-dir").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("results"));
        let workers = match (cli.workers, from_file("workers")) {
            (Some(w), _) => Some(w),
            (None, Some(text)) => Some(text.parse().map_err(|_| {
                CliError::Usage(format!("config key workers: integer expected, got {text:?}"))
            })?),
            (None, None) => None,
        };
        let format = match (cli.format, from_file("format")) {
            (Some(f), _) => f,
            (None, Some(text)) => OutputFormat::parse(text)
                .map_err(|e| CliError::Usage(format!("config key format: {e}")))?,
            (None, None) => OutputFormat::Both,
        };
        let ansatz_layers = match (cli.ansatz_layers, from_file("ansatz-layers")) {
            (Some(l), _) => Some(l),
            (None, Some(text)) => Some(text.parse().map_err(|_| {
                CliError::Usage(format!(
                    "config key ansatz-layers: integer expected, got {text:?}"
                ))
            })?),
            (None, None) => None,
        };
        let optimizer = match (cli.optimizer, from_file("optimizer")) {
            (Some(m), _) => m,
            (None, Some(text)) => parse_method(text)
                .map_err(|e| CliError::Usage(format!("config key optimizer: {e}")))?,
            (None, None) => OptimizerMethod::Momentum,
        };
        let lr = match (cli.lr, from_file("lr")) {
            (Some(v), _) => Some(v),
            (None, Some(text)) => Some(parse_key("lr", text, "number")?),
            (None, None) => None,
        };
        let max_iter = match (cli.max_iter, from_file("max-iter")) {
            (Some(v), _) => Some(v),
            (None, Some(text)) => Some(text.parse().map_err(|_| {
                CliError::Usage(format!("config key max-iter: integer expected, got {text:?}"))
            })?),
            (None, None) => None,
        };
        let cost_mode = match (cli.cost_mode, from_file("cost-mode")) {
            (Some(m), _) => m,
            (None, Some(text)) => CostModeChoice::parse(text)
                .map_err(|e| CliError::Usage(format!("config key cost-mode: {e}")))?,
            (None, None) => CostModeChoice::Analytic,
        };
        if let Some(file) = file {
            const KNOWN: [&str; 9] = [
                "seed",
                "output-dir",
                "workers",
                "format",
                "ansatz-layers",
                "optimizer",
                "lr",
                "max-iter",
                "cost-mode",
            ];
            for key in file.keys() {
                if !KNOWN.contains(&key) {
                    return Err(CliError::Usage(format!("config key {key:?} is not a flag")));
                }
            }
        }
        Ok(Self {
            seed,
            output_dir,
            workers,
            format,
            ansatz_layers,
            optimizer,
            lr,
            max_iter,
            cost_mode,
        })
    }

    fn settings(&self, precision: f64, restarts: usize) -> SolveSettings {
        SolveSettings {
            precision,
            layers: self.ansatz_layers,
            method: self.optimizer,
            learning_rate: self.lr,
            max_iterations: self.max_iter,
            cost_mode: self.cost_mode,
            restarts,
            seed: self.seed,
            ..SolveSettings::default()
        }
    }
}

fn print_paths(paths: &[PathBuf]) {
    for path in paths {
        println!("wrote {}", path.display());
    }
}

fn run(cli: &Cli) -> Result<()> {
    let globals = Globals::resolve(cli)?;
    if let Some(workers) = globals.workers {
        if workers < 1 {
            return Err(CliError::Usage("workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .map_err(|e| CliError::Usage(format!("worker pool: {e}")))?;
    }
    let dir = &globals.output_dir;

    match &cli.command {
        Command::Solve {
            label,
            epsilon,
            restarts,
        } => {
            let (family, size) = parse_family(label)?;
            let size = size
                .ok_or_else(|| CliError::Usage(format!("label {label:?} needs a size key")))?;
            let problem = family.instantiate(size)?;
            let precision = epsilon.unwrap_or_else(|| family.default_precision());
            let settings = globals.settings(precision, *restarts);
            let outcome = solve_with_restarts(&problem, &family, &settings)?;
            let report = report::solve_report(label, &settings, &outcome);
            let written = report::write_solve_outputs(dir, &report, &outcome, family.is_heat())?;
            println!(
                "{label}: converged={} iterations={} final_cost={:.3e} fidelity={:.6} \
                 restarts_used={}",
                report.converged,
                report.iterations,
                report.final_cost,
                report.fidelity,
                report.restarts_used
            );
            print_paths(&written);
            if !report.converged {
                return Err(CliError::NonConverged(format!(
                    "{label} stayed above {:.3e} after {} restarts",
                    outcome.cost_threshold, outcome.restarts_used
                )));
            }
        }
        Command::Decompose { label } => {
            let (family, size) = parse_family(label)?;
            let size = size
                .ok_or_else(|| CliError::Usage(format!("label {label:?} needs a size key")))?;
            let problem = family.instantiate(size)?;
            let decomposition = problem.decomposition();
            println!(
                "{label}: {} qubits, {} terms",
                decomposition.n_qubits(),
                decomposition.len()
            );
            for term in decomposition.terms() {
                let c = term.coefficient;
                if c.im.abs() > 1e-12 {
                    println!("{:+.12}{:+.12}i  {}", c.re, c.im, term.string);
                } else {
                    println!("{:+.12}  {}", c.re, term.string);
                }
            }
        }
        Command::SweepShots {
            label,
            points,
            repetitions,
        } => {
            let (family, _) = parse_family(label)?;
            let settings = globals.settings(family.default_precision(), 5);
            let config = SweepConfig {
                kind: SweepKind::Shots,
                points: points.clone().unwrap_or_else(default_shot_points),
                repetitions: *repetitions,
                label: label.clone(),
                settings,
            };
            let report_data = run_shots_sweep(&config)?;
            let stem = format!("sweep_shots_{}", report::slug(label));
            let written =
                report::write_sweep_outputs(dir, globals.format, &stem, &config.settings, &report_data)?;
            print_fit(&report_data);
            print_paths(&written);
        }
        Command::SweepEpsilon {
            label,
            points,
            repetitions,
        } => {
            let (family, _) = parse_family(label)?;
            let settings = globals.settings(family.default_precision(), 5);
            let config = SweepConfig {
                kind: SweepKind::Epsilon,
                points: points
                    .clone()
                    .unwrap_or_else(|| default_precision_points(&family)),
                repetitions: *repetitions,
                label: label.clone(),
                settings,
            };
            let report_data = run_scaling_sweep(&config)?;
            let stem = format!("sweep_epsilon_{}", report::slug(label));
            let written =
                report::write_sweep_outputs(dir, globals.format, &stem, &config.settings, &report_data)?;
            print_fit(&report_data);
            print_paths(&written);
        }
        Command::SweepQubits {
            label,
            points,
            epsilon,
            repetitions,
        } => {
            let (family, _) = parse_family(label)?;
            let precision = epsilon.unwrap_or_else(|| family.default_precision());
            let settings = globals.settings(precision, 5);
            let config = SweepConfig {
                kind: SweepKind::Qubits,
                points: points
                    .clone()
                    .unwrap_or_else(|| default_qubit_points(&family)),
                repetitions: *repetitions,
                label: label.clone(),
                settings,
            };
            let report_data = run_scaling_sweep(&config)?;
            let stem = format!("sweep_qubits_{}", report::slug(label));
            let written =
                report::write_sweep_outputs(dir, globals.format, &stem, &config.settings, &report_data)?;
            print_fit(&report_data);
            print_paths(&written);
        }
        Command::SweepCondition {
            points,
            epsilon,
            repetitions,
        } => {
            let settings = globals.settings(*epsilon, 5);
            let config = SweepConfig {
                kind: SweepKind::Condition,
                points: points
                    .clone()
                    .unwrap_or_else(|| CONDITION_COEFFICIENTS.to_vec()),
                repetitions: *repetitions,
                label: "test:c0=1,n=4".into(),
                settings,
            };
            let report_data = run_scaling_sweep(&config)?;
            let stem = format!(
                "sweep_condition_{}",
                report::slug(&format!("eps={epsilon}"))
            );
            let written =
                report::write_sweep_outputs(dir, globals.format, &stem, &config.settings, &report_data)?;
            print_paths(&written);
        }
        Command::Repro { figure, sizes } => {
            let figure = Figure::parse(figure).map_err(CliError::Usage)?;
            let settings = globals.settings(0.05, 5);
            let written = run_figure(figure, dir, globals.format, &settings, sizes.clone())?;
            print_paths(&written);
        }
    }
    Ok(())
}

fn print_fit(report: &vqls_cli::sweeps::SweepReport) {
    if let Some(fit) = &report.fit {
        println!(
            "fit: slope={:.4} intercept={:.4} r_squared={:.4}",
            fit.slope, fit.intercept, fit.r_squared
        );
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                err.exit();
            }
            eprintln!("{err}");
            std::process::exit(1);
        }
    };
    if let Err(err) = run(&cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
