//! Gradient-descent minimization of the variational cost.
//!
//! Gradients come from the parameter-shift rule: every parameter feeds one
//! `Ry`, so the numerator and denominator of the cost ratio are exact
//! trigonometric polynomials of each angle and their derivatives equal
//! half the difference of the `+pi/2` and `-pi/2` shifted evaluations. The
//! quotient rule then gives the cost gradient without finite differencing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ansatz::{ansatz_state, AnsatzSpec};
use crate::cost::{cost, CostKind, CostMode};
use crate::error::{Error, Result};
use crate::problems::LinearProblem;
use crate::scalar::Scalar;
use crate::seeding;
use crate::statevector::Statevector;

/// Update rule for the descent step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OptimizerMethod {
    #[default]
    Momentum,
    Adam,
}

/// Full solver configuration.
///
/// Defaults are the settings that converged across this crate's benchmark
/// instances at desk scale; they are not tuned per problem.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig<T: Scalar> {
    pub method: OptimizerMethod,
    pub learning_rate: T,
    pub momentum_beta: T,
    pub adam_beta1: T,
    pub adam_beta2: T,
    pub adam_epsilon: T,
    pub max_iterations: usize,
    /// Convergence threshold on the cost value, in (0, 0.5); the cost starts
    /// at or below 1, so larger thresholds would be vacuous.
    pub epsilon: T,
    /// Master seed: initial parameters and, in shots mode, all estimator
    /// streams derive from it.
    pub seed: u64,
    pub cost_kind: CostKind,
    pub cost_mode: CostMode,
}

impl<T: Scalar> Default for OptimizerConfig<T> {
    fn default() -> Self {
        Self {
            method: OptimizerMethod::Momentum,
            learning_rate: T::from_f64_lossy(0.1),
            momentum_beta: T::from_f64_lossy(0.9),
            adam_beta1: T::from_f64_lossy(0.9),
            adam_beta2: T::from_f64_lossy(0.999),
            adam_epsilon: T::from_f64_lossy(1e-8),
            max_iterations: 50_000,
            epsilon: T::from_f64_lossy(0.01),
            seed: 0,
            cost_kind: CostKind::Local,
            cost_mode: CostMode::Analytic,
        }
    }
}

impl<T: Scalar> OptimizerConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: T, name: &str| {
            if v < T::zero() || v >= T::one() {
                Err(Error::InvalidArgument(format!(
                    "{name} must lie in [0, 1), got {v}"
                )))
            } else {
                Ok(())
            }
        };
        if !(self.learning_rate > T::zero()) || !self.learning_rate.is_finite() {
            return Err(Error::InvalidArgument(
                "learning rate must be positive and finite".into(),
            ));
        }
        unit(self.momentum_beta, "momentum decay")?;
        unit(self.adam_beta1, "first-moment decay")?;
        unit(self.adam_beta2, "second-moment decay")?;
        if !(self.adam_epsilon > T::zero()) {
            return Err(Error::InvalidArgument(
                "denominator floor must be positive".into(),
            ));
        }
        if self.max_iterations < 1 {
            return Err(Error::InvalidArgument(
                "iteration budget must be at least 1".into(),
            ));
        }
        if !(self.epsilon > T::zero() && self.epsilon < T::from_f64_lossy(0.5)) {
            return Err(Error::InvalidArgument(
                "convergence threshold must lie in (0, 0.5)".into(),
            ));
        }
        Ok(())
    }
}

/// Outcome of one optimization run.
///
/// `cost_trace` holds the cost after initialization and after every step, so
/// its length is `iterations + 1`. `cost_evaluations` counts exactly those
/// entries; gradient work is tallied separately in `gradient_evaluations`
/// (one per descent step).
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult<T: Scalar> {
    pub converged: bool,
    pub iterations: usize,
    pub cost_evaluations: usize,
    pub gradient_evaluations: usize,
    pub final_cost: T,
    pub params: Vec<T>,
    pub cost_trace: Vec<T>,
    pub state: Statevector<T>,
}

/// Uniform draw from `[0, 2 pi)` per parameter.
///
/// Always samples `f64` internally so `f32` and `f64` runs of the same seed
/// start from the same angles.
pub fn initial_parameters<T: Scalar>(spec: &AnsatzSpec, seed: u64) -> Vec<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..spec.param_count())
        .map(|_| T::from_f64_lossy(rng.random_range(0.0..std::f64::consts::TAU)))
        .collect()
}

/// Seed streams under the optimizer's master seed.
const STREAM_LINE_EVAL: u64 = 1;
const STREAM_GRADIENT: u64 = 2;

fn derived_mode(mode: &CostMode, purpose: u64, index: u64) -> CostMode {
    match mode {
        CostMode::Analytic => CostMode::Analytic,
        CostMode::Shots { shots, seed } => CostMode::Shots {
            shots: *shots,
            seed: seeding::derive2(*seed, purpose, index),
        },
    }
}

/// Parameter-shift gradient of the selected cost.
///
/// In shots mode each shifted evaluation draws from a distinct stream
/// derived from `mode`'s seed, so the gradient is reproducible.
pub fn gradient<T: Scalar>(
    problem: &LinearProblem<T>,
    spec: &AnsatzSpec,
    params: &[T],
    kind: CostKind,
    mode: &CostMode,
) -> Result<Vec<T>> {
    let base = cost(problem, spec, params, kind, mode)?;
    let n = problem.n_qubits();
    let prefactor = match kind {
        CostKind::Local => T::one() / T::from_usize(2 * n).unwrap(),
        CostKind::Global => T::one(),
    };
    let half = T::from_f64_lossy(0.5);
    let shift = T::FRAC_PI_2();
    let den_sq = base.denominator * base.denominator;
    let mut grad = Vec::with_capacity(params.len());
    let mut shifted = params.to_vec();
    for k in 0..params.len() {
        let original = shifted[k];
        shifted[k] = original + shift;
        let plus = cost(
            problem,
            spec,
            &shifted,
            kind,
            &derived_mode(mode, 2, k as u64),
        )?;
        shifted[k] = original - shift;
        let minus = cost(
            problem,
            spec,
            &shifted,
            kind,
            &derived_mode(mode, 3, k as u64),
        )?;
        shifted[k] = original;
        let d_num = (plus.numerator - minus.numerator) * half;
        let d_den = (plus.denominator - minus.denominator) * half;
        let value = -prefactor * (d_num * base.denominator - base.numerator * d_den) / den_sq;
        grad.push(value);
    }
    Ok(grad)
}

/// Runs gradient descent from seeded random angles until the cost drops to
/// the threshold or the iteration budget runs out.
pub fn minimize<T: Scalar>(
    problem: &LinearProblem<T>,
    spec: &AnsatzSpec,
    config: &OptimizerConfig<T>,
) -> Result<SolveResult<T>> {
    config.validate()?;
    let mut params = initial_parameters::<T>(spec, config.seed);
    let p = params.len();
    let mut first_moment = vec![T::zero(); p];
    let mut second_moment = vec![T::zero(); p];
    let one = T::one();

    let line_mode = |iteration: usize| {
        derived_mode(&config.cost_mode, STREAM_LINE_EVAL, iteration as u64)
    };
    let grad_mode = |iteration: usize| {
        derived_mode(&config.cost_mode, STREAM_GRADIENT, iteration as u64)
    };

    let first = cost(problem, spec, &params, config.cost_kind, &line_mode(0))?;
    if !first.value.is_finite() {
        return Err(Error::NumericalFailure {
            quantity: "cost",
            iteration: 0,
        });
    }
    let mut trace = vec![first.value];
    let mut cost_evaluations = 1usize;
    let mut gradient_evaluations = 0usize;
    let mut converged = first.value <= config.epsilon;
    let mut iterations = 0usize;

    if !converged {
        for it in 1..=config.max_iterations {
            let g = gradient(problem, spec, &params, config.cost_kind, &grad_mode(it))?;
            gradient_evaluations += 1;
            if g.iter().any(|v| !v.is_finite()) {
                return Err(Error::NumericalFailure {
                    quantity: "gradient",
                    iteration: it,
                });
            }
            match config.method {
                OptimizerMethod::Momentum => {
                    for k in 0..p {
                        first_moment[k] = config.momentum_beta * first_moment[k] + g[k];
                        params[k] = params[k] - config.learning_rate * first_moment[k];
                    }
                }
                OptimizerMethod::Adam => {
                    let t = it as i32;
                    let bias1 = one - config.adam_beta1.powi(t);
                    let bias2 = one - config.adam_beta2.powi(t);
                    for k in 0..p {
                        first_moment[k] =
                            config.adam_beta1 * first_moment[k] + (one - config.adam_beta1) * g[k];
                        second_moment[k] = config.adam_beta2 * second_moment[k]
                            + (one - config.adam_beta2) * g[k] * g[k];
                        let m_hat = first_moment[k] / bias1;
                        let v_hat = second_moment[k] / bias2;
                        params[k] = params[k]
                            - config.learning_rate * m_hat / (v_hat.sqrt() + config.adam_epsilon);
                    }
                }
            }
            let eval = cost(problem, spec, &params, config.cost_kind, &line_mode(it))?;
            if !eval.value.is_finite() {
                return Err(Error::NumericalFailure {
                    quantity: "cost",
                    iteration: it,
                });
            }
            trace.push(eval.value);
            cost_evaluations += 1;
            iterations = it;
            if eval.value <= config.epsilon {
                converged = true;
                break;
            }
        }
    }

    let final_cost = *trace.last().expect("trace holds at least one entry");
    let state = ansatz_state(spec, &params)?;
    Ok(SolveResult {
        converged,
        iterations,
        cost_evaluations,
        gradient_evaluations,
        final_cost,
        params,
        cost_trace: trace,
        state,
    })
}
