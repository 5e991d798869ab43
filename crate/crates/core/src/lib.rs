//! Variational solver for linear systems on an embedded statevector
//! simulator.
//!
//! The crate models a linear system `A x = b` as a weighted sum of Pauli
//! strings plus a short preparation circuit for `b`, then drives a layered
//! `Ry`/`CZ` ansatz with gradient descent until the ansatz state solves the
//! system up to normalization. Cost functions come in two flavors (global
//! overlap and a qubit-local variant) and two evaluation modes: exact
//! expectation values, or simulated measurement with a finite shot budget
//! routed through ancilla interference circuits.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases at the crate root pick the double-precision instantiation
//! used by the command-line tools.

pub mod ansatz;
pub mod cost;
pub mod dense;
pub mod error;
pub mod optimizer;
pub mod pauli;
pub mod problems;
pub mod scalar;
pub mod seeding;
pub mod statevector;

pub use error::{Error, Result};
pub use scalar::{Complex, Scalar};

/// Double-precision instantiations of the generic building blocks.
pub type Matrix64 = dense::Matrix<f64>;
pub type ComplexMatrix64 = dense::Matrix<Complex<f64>>;
pub type PauliTerm64 = pauli::PauliTerm<f64>;
pub type PauliDecomposition64 = pauli::PauliDecomposition<f64>;
pub type Gate64 = statevector::Gate<f64>;
pub type Circuit64 = statevector::Circuit<f64>;
pub type Statevector64 = statevector::Statevector<f64>;
pub type AnsatzSpec64 = ansatz::AnsatzSpec;
pub type LinearProblem64 = problems::LinearProblem<f64>;
pub type BoundarySpec64 = problems::BoundarySpec<f64>;
pub type CostEvaluation64 = cost::CostEvaluation<f64>;
pub type OptimizerConfig64 = optimizer::OptimizerConfig<f64>;
pub type SolveResult64 = optimizer::SolveResult<f64>;
