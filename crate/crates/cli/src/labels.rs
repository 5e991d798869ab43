//! Problem labels.
//!
//! A label names a benchmark instance: `test:c0=1,n=3`, `heat1d:n=4`,
//! `heat2d:npd=2` or `heat2d:npd=2,lateral=periodic`. Heat labels accept
//! optional boundary temperatures `t1`/`t2` (defaults 0 and 1). Sweeps over
//! register size reuse the same syntax without the size key, e.g.
//! `test:c0=1` or `heat1d`.

use vqls_core::problems::{
    build_test_instance, laplacian_1d, laplacian_2d_with_lateral, BoundarySpec, LateralBoundary,
};
use vqls_core::LinearProblem64;

use crate::error::{CliError, Result};

/// Parsed label with the size left open.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemFamily {
    Test { c0: f64 },
    Heat1d { t1: f64, t2: f64 },
    Heat2d { t1: f64, t2: f64, lateral: LateralBoundary },
}

impl ProblemFamily {
    /// Builds the instance at a concrete register size.
    ///
    /// For `Heat2d` the size counts qubits per spatial direction, matching
    /// the `npd` label key; the register holds twice that.
    pub fn instantiate(&self, size: usize) -> Result<LinearProblem64> {
        let problem = match self {
            ProblemFamily::Test { c0 } => build_test_instance(*c0, size)?,
            ProblemFamily::Heat1d { t1, t2 } => {
                laplacian_1d(size, BoundarySpec::new(*t1, *t2)?)?
            }
            ProblemFamily::Heat2d { t1, t2, lateral } => {
                laplacian_2d_with_lateral(size, BoundarySpec::new(*t1, *t2)?, *lateral)?
            }
        };
        Ok(problem)
    }

    /// Builds the instance sized by total register qubits.
    pub fn instantiate_total(&self, n_qubits: usize) -> Result<LinearProblem64> {
        match self {
            ProblemFamily::Heat2d { .. } => {
                if n_qubits % 2 != 0 {
                    return Err(CliError::Usage(format!(
                        "the plate splits its register evenly across two directions; \
                         got {n_qubits} qubits"
                    )));
                }
                self.instantiate(n_qubits / 2)
            }
            _ => self.instantiate(n_qubits),
        }
    }

    /// Default solve precision for the family's scaling studies.
    pub fn default_precision(&self) -> f64 {
        match self {
            ProblemFamily::Test { .. } => 0.001,
            ProblemFamily::Heat1d { .. } | ProblemFamily::Heat2d { .. } => 0.05,
        }
    }

    /// Ansatz depth used when the caller does not override it.
    ///
    /// The benchmark family solves inside a fixed low-dimensional subspace at
    /// every register size, so the library baseline is enough. Heat solutions
    /// are generic real vectors: below `n(layers+1) >= 2^n - 1` parameters the
    /// reachable set provably misses them, so depth scales with the register
    /// until the count clears that bound.
    pub fn default_layers(&self, n_qubits: usize) -> usize {
        let baseline = vqls_core::ansatz::default_layers(n_qubits);
        if !self.is_heat() {
            return baseline;
        }
        let dim = (1usize << n_qubits) - 1;
        let needed = dim.div_ceil(n_qubits).saturating_sub(1).max(1);
        baseline.max(needed)
    }

    pub fn is_heat(&self) -> bool {
        !matches!(self, ProblemFamily::Test { .. })
    }
}

fn usage(label: &str, reason: &str) -> CliError {
    CliError::Usage(format!("bad problem label {label:?}: {reason}"))
}

fn parse_pairs<'a>(label: &str, body: &'a str) -> Result<Vec<(&'a str, &'a str)>> {
    if body.is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|item| {
            item.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| usage(label, "expected key=value entries after the colon"))
        })
        .collect()
}

fn parse_f64(label: &str, key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| usage(label, &format!("{key} must be a number, got {value:?}")))
}

fn parse_usize(label: &str, key: &str, value: &str) -> Result<usize> {
    value
        .parse::<usize>()
        .map_err(|_| usage(label, &format!("{key} must be a positive integer, got {value:?}")))
}

/// Splits a label into its family and, when present, its size key.
pub fn parse_family(label: &str) -> Result<(ProblemFamily, Option<usize>)> {
    let (head, body) = match label.split_once(':') {
        Some((head, body)) => (head, body),
        None => (label, ""),
    };
    let pairs = parse_pairs(label, body)?;
    let mut size = None;
    match head {
        "test" => {
            let mut c0 = None;
            for (k, v) in pairs {
                match k {
                    "c0" => c0 = Some(parse_f64(label, k, v)?),
                    "n" => size = Some(parse_usize(label, k, v)?),
                    other => return Err(usage(label, &format!("unknown key {other:?}"))),
                }
            }
            let c0 = c0.ok_or_else(|| usage(label, "test labels need c0=<value>"))?;
            Ok((ProblemFamily::Test { c0 }, size))
        }
        "heat1d" | "heat2d" => {
            let (mut t1, mut t2) = (0.0, 1.0);
            let mut lateral = LateralBoundary::Dirichlet;
            let size_key = if head == "heat1d" { "n" } else { "npd" };
            for (k, v) in pairs {
                match k {
                    "t1" => t1 = parse_f64(label, k, v)?,
                    "t2" => t2 = parse_f64(label, k, v)?,
                    "lateral" if head == "heat2d" => {
                        lateral = match v {
                            "dirichlet" => LateralBoundary::Dirichlet,
                            "periodic" => LateralBoundary::Periodic,
                            other => {
                                return Err(usage(
                                    label,
                                    &format!("lateral must be dirichlet or periodic, got {other:?}"),
                                ))
                            }
                        };
                    }
                    k if k == size_key => size = Some(parse_usize(label, k, v)?),
                    other => return Err(usage(label, &format!("unknown key {other:?}"))),
                }
            }
            if head == "heat1d" {
                Ok((ProblemFamily::Heat1d { t1, t2 }, size))
            } else {
                Ok((ProblemFamily::Heat2d { t1, t2, lateral }, size))
            }
        }
        other => Err(usage(
            label,
            &format!("unknown family {other:?}; expected test, heat1d or heat2d"),
        )),
    }
}

/// Builds the fully specified instance a label names.
pub fn parse_label(label: &str) -> Result<LinearProblem64> {
    let (family, size) = parse_family(label)?;
    let size = size.ok_or_else(|| {
        usage(
            label,
            "missing register size (n=<qubits>, or npd=<qubits per direction> for heat2d)",
        )
    })?;
    family.instantiate(size)
}
