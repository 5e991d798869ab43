//! Error type shared across the crate.

/// Errors surfaced by simulator, algebra and solver operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Qubit count outside the supported range for the requesting operation.
    #[error("qubit count {n} outside supported range {min}..={max}")]
    QubitCountOutOfRange { n: usize, min: usize, max: usize },

    /// Qubit index does not address a qubit of the register.
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitIndexOutOfRange { index: usize, n_qubits: usize },

    /// Two objects that must share a size do not.
    #[error("size mismatch in {context}: {left} vs {right}")]
    SizeMismatch {
        context: &'static str,
        left: usize,
        right: usize,
    },

    /// Vector or matrix dimension is not a power of two.
    #[error("dimension {dim} is not a power of two")]
    NotPowerOfTwo { dim: usize },

    /// Catch-all for invalid caller input with a specific message.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Matrix is singular (or numerically so) where an inverse is required.
    #[error("matrix is singular to working precision (pivot {pivot:e})")]
    Singular { pivot: f64 },

    /// The variational state was annihilated by the system operator, so the
    /// cost denominator vanished.
    #[error("cost denominator {denom:e} below degeneracy threshold")]
    DegenerateState { denom: f64 },

    /// A non-finite value appeared during optimization.
    #[error("non-finite {quantity} at iteration {iteration}")]
    NumericalFailure {
        quantity: &'static str,
        iteration: usize,
    },

    /// Text failed to parse as a Pauli string.
    #[error("invalid Pauli string {text:?}: {reason}")]
    PauliParse { text: String, reason: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
