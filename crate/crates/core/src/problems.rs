//! Problem instances: the variational benchmark operator and heat-conduction
//! Laplacians, plus classical oracles for validating solver output.
//!
//! A [`LinearProblem`] carries the same operator in two forms, a Pauli-term
//! decomposition driving the quantum cost and a dense matrix driving the
//! classical reference path. The constructor cross-checks them against each
//! other, so a builder bug cannot produce a self-consistent-looking instance.

use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliDecomposition, PauliString, PauliTerm, MAX_DECOMPOSE_QUBITS};
use crate::scalar::{Complex, Scalar};
use crate::statevector::{Circuit, Gate, Statevector};

/// Boundary temperatures driving a heat problem: `t_first` enters at the
/// low-index end of the grid, `t_last` at the high-index end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySpec<T: Scalar> {
    pub t_first: T,
    pub t_last: T,
}

impl<T: Scalar> BoundarySpec<T> {
    pub fn new(t_first: T, t_last: T) -> Result<Self> {
        if !t_first.is_finite() || !t_last.is_finite() {
            return Err(Error::InvalidArgument(
                "boundary temperatures must be finite".into(),
            ));
        }
        if t_first == T::zero() && t_last == T::zero() {
            return Err(Error::InvalidArgument(
                "at least one boundary temperature must be nonzero".into(),
            ));
        }
        Ok(Self { t_first, t_last })
    }
}

/// Lateral (x-direction) closure of the 2D plate.
///
/// `Dirichlet` clamps both side walls and is the default; `Periodic` wraps
/// them and makes the plate translation-invariant in x, which collapses the
/// solution to a pure ramp.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LateralBoundary {
    #[default]
    Dirichlet,
    Periodic,
}

/// Linear system `A x = b` in solver-ready form.
#[derive(Debug, Clone)]
pub struct LinearProblem<T: Scalar> {
    label: String,
    n_qubits: usize,
    decomposition: PauliDecomposition<T>,
    dense: Matrix<T>,
    b_raw: Vec<T>,
    b_prep: Circuit<T>,
}

impl<T: Scalar> LinearProblem<T> {
    /// Assembles and validates a problem.
    ///
    /// Checks that the decomposition reconstructs the dense matrix and that
    /// `b_prep|0>` equals `b_raw` normalized up to global phase, at 1e-10
    /// scale for `f64` (loosened with the scalar's epsilon for `f32`).
    pub fn new(
        label: String,
        decomposition: PauliDecomposition<T>,
        dense: Matrix<T>,
        b_raw: Vec<T>,
        b_prep: Circuit<T>,
    ) -> Result<Self> {
        let n = decomposition.n_qubits();
        let dim = 1usize << n;
        if dense.rows() != dim || dense.cols() != dim {
            return Err(Error::SizeMismatch {
                context: "problem dense matrix",
                left: dense.rows(),
                right: dim,
            });
        }
        if b_raw.len() != dim {
            return Err(Error::SizeMismatch {
                context: "problem right-hand side",
                left: b_raw.len(),
                right: dim,
            });
        }
        if b_prep.n_qubits() != n {
            return Err(Error::SizeMismatch {
                context: "preparation circuit register",
                left: b_prep.n_qubits(),
                right: n,
            });
        }
        let tol = T::from_f64_lossy(1e-10).max(T::epsilon() * T::from_f64_lossy(1e3));

        let rebuilt = decomposition.reconstruct()?;
        let max_im = rebuilt
            .data()
            .iter()
            .map(|z| z.im.abs())
            .fold(T::zero(), T::max);
        if max_im > tol {
            return Err(Error::InvalidArgument(
                "decomposition reconstructs a non-real operator".into(),
            ));
        }
        let diff = rebuilt.map(|z| z.re).max_abs_diff(&dense);
        if diff > tol {
            return Err(Error::InvalidArgument(format!(
                "decomposition disagrees with dense matrix (max deviation {diff:e})"
            )));
        }

        let b_norm = b_raw
            .iter()
            .map(|&v| v * v)
            .fold(T::zero(), |acc, e| acc + e)
            .sqrt();
        if b_norm < T::from_f64_lossy(1e-14) {
            return Err(Error::InvalidArgument(
                "right-hand side must be nonzero".into(),
            ));
        }
        let mut prepared = Statevector::zero(n)?;
        prepared.apply_circuit(&b_prep)?;
        let mut overlap = Complex::new(T::zero(), T::zero());
        for (amp, &b) in prepared.amplitudes().iter().zip(&b_raw) {
            overlap += amp.conj() * Complex::new(b / b_norm, T::zero());
        }
        if (overlap.norm() - T::one()).abs() > tol {
            return Err(Error::InvalidArgument(format!(
                "preparation circuit does not produce the normalized right-hand side \
                 (overlap magnitude {})",
                overlap.norm()
            )));
        }

        Ok(Self {
            label,
            n_qubits: n,
            decomposition,
            dense,
            b_raw,
            b_prep,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn decomposition(&self) -> &PauliDecomposition<T> {
        &self.decomposition
    }

    pub fn dense(&self) -> &Matrix<T> {
        &self.dense
    }

    pub fn b_raw(&self) -> &[T] {
        &self.b_raw
    }

    pub fn b_prep(&self) -> &Circuit<T> {
        &self.b_prep
    }

    /// True when every operator term and preparation gate is a real matrix.
    /// Real problems have exactly real Hadamard-test outcomes, so the
    /// imaginary estimation circuit can be skipped.
    pub fn is_real(&self) -> bool {
        self.decomposition.all_strings_real() && self.b_prep.is_real_valued()
    }

    /// Normalized right-hand side as a state.
    pub fn b_state(&self) -> Result<Statevector<T>> {
        let mut state = Statevector::zero(self.n_qubits)?;
        state.apply_circuit(&self.b_prep)?;
        Ok(state)
    }

    /// Reference solution of `A x = b` by Gaussian elimination.
    pub fn classical_solve(&self) -> Result<Vec<T>> {
        self.dense.solve(&self.b_raw)
    }

    /// `sigma_max / sigma_min` of the dense operator.
    pub fn condition_number(&self) -> Result<T> {
        let sv = self.dense.singular_values()?;
        let smax = sv[0];
        let smin = *sv.last().expect("matrix is non-empty");
        if smin < T::from_f64_lossy(1e-12) {
            return Err(Error::Singular {
                pivot: smin.to_f64().unwrap_or(0.0),
            });
        }
        Ok(smax / smin)
    }

    /// Cost threshold under which a converged state is within `precision`
    /// of the true normalized solution.
    ///
    /// The cost measures the angle between `A|x>` and `|b>`; inverting `A`
    /// amplifies that angle by up to the condition number, so driving the
    /// cost below `(precision / kappa)^2` bounds the solution-state error
    /// by `precision`. Stopping at the raw cost value instead admits
    /// converged states arbitrarily far from the solution on
    /// ill-conditioned systems.
    pub fn precision_threshold(&self, precision: T) -> Result<T> {
        if !(precision > T::zero() && precision < T::one()) {
            return Err(Error::InvalidArgument(format!(
                "precision must lie in (0, 1), got {precision}"
            )));
        }
        let kappa = self.condition_number()?;
        let ratio = precision / kappa;
        Ok(ratio * ratio)
    }

    /// Maps a normalized solver state back to physical units.
    ///
    /// Returns `alpha * x_hat` with the real scalar `alpha` minimizing
    /// `|| alpha A x_hat - b ||_2`. Global phase is stripped first, so any
    /// overall sign or phase the variational state picked up is absorbed.
    pub fn rescale_solution(&self, state: &Statevector<T>) -> Result<Vec<T>> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::SizeMismatch {
                context: "solution state register",
                left: state.n_qubits(),
                right: self.n_qubits,
            });
        }
        let amps = state.amplitudes();
        let lead = amps
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| {
                a.norm_sqr()
                    .partial_cmp(&b.norm_sqr())
                    .expect("amplitudes are finite")
            })
            .map(|(i, _)| i)
            .expect("state is non-empty");
        let lead_norm = amps[lead].norm();
        if lead_norm < T::from_f64_lossy(1e-14) {
            return Err(Error::DegenerateState {
                denom: lead_norm.to_f64().unwrap_or(0.0),
            });
        }
        let rotate = amps[lead].conj() / Complex::new(lead_norm, T::zero());
        let x_hat: Vec<T> = amps.iter().map(|a| (a * rotate).re).collect();

        let ax = self.dense.matvec(&x_hat)?;
        let ax_norm_sqr = ax
            .iter()
            .map(|&v| v * v)
            .fold(T::zero(), |acc, e| acc + e);
        if ax_norm_sqr < T::from_f64_lossy(1e-14) {
            return Err(Error::DegenerateState {
                denom: ax_norm_sqr.to_f64().unwrap_or(0.0),
            });
        }
        let dot = ax
            .iter()
            .zip(&self.b_raw)
            .map(|(&a, &b)| a * b)
            .fold(T::zero(), |acc, e| acc + e);
        let alpha = dot / ax_norm_sqr;
        Ok(x_hat.iter().map(|&v| alpha * v).collect())
    }

    /// Max-norm residual `||A x - b||_inf` of a candidate solution.
    pub fn residual_inf(&self, x: &[T]) -> Result<T> {
        let ax = self.dense.matvec(x)?;
        Ok(ax
            .iter()
            .zip(&self.b_raw)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max))
    }
}

/// `|<x_hat | r>|^2` between a solver state and a normalized real reference.
pub fn fidelity<T: Scalar>(state: &Statevector<T>, reference: &[T]) -> Result<T> {
    if state.dim() != reference.len() {
        return Err(Error::SizeMismatch {
            context: "fidelity reference length",
            left: reference.len(),
            right: state.dim(),
        });
    }
    let ref_norm = reference
        .iter()
        .map(|&v| v * v)
        .fold(T::zero(), |acc, e| acc + e)
        .sqrt();
    if ref_norm < T::from_f64_lossy(1e-14) {
        return Err(Error::InvalidArgument(
            "fidelity reference must be nonzero".into(),
        ));
    }
    let mut overlap = Complex::new(T::zero(), T::zero());
    for (amp, &r) in state.amplitudes().iter().zip(reference) {
        overlap += amp.conj() * Complex::new(r / ref_norm, T::zero());
    }
    Ok(overlap.norm_sqr())
}

fn real_term<T: Scalar>(coefficient: f64, string: PauliString) -> PauliTerm<T> {
    PauliTerm {
        coefficient: Complex::new(T::from_f64_lossy(coefficient), T::zero()),
        string,
    }
}

/// Benchmark instance `A = c0 I + 0.2 X0 Z1 + 0.2 X0`, `b = H^n |0>`.
///
/// The spectrum is `c0 + {0.4, 0, 0, -0.4}` (each with multiplicity), so
/// `c0` tunes the condition number directly; values `0` and `+-0.4` make the
/// operator singular and are rejected.
pub fn build_test_instance<T: Scalar>(c0: T, n_qubits: usize) -> Result<LinearProblem<T>> {
    if !(2..=MAX_DECOMPOSE_QUBITS).contains(&n_qubits) {
        return Err(Error::QubitCountOutOfRange {
            n: n_qubits,
            min: 2,
            max: MAX_DECOMPOSE_QUBITS,
        });
    }
    let c0_f = c0.to_f64().ok_or_else(|| {
        Error::InvalidArgument("coefficient must be a finite number".into())
    })?;
    if !c0_f.is_finite() {
        return Err(Error::InvalidArgument(
            "coefficient must be a finite number".into(),
        ));
    }
    let tol = 1e-12;
    for singular in [0.0, 0.4, -0.4] {
        if (c0_f - singular).abs() < tol {
            return Err(Error::Singular {
                pivot: (c0_f - singular).abs(),
            });
        }
    }

    let mut x0z1 = vec![Pauli::I; n_qubits];
    x0z1[0] = Pauli::X;
    x0z1[1] = Pauli::Z;
    let mut x0 = vec![Pauli::I; n_qubits];
    x0[0] = Pauli::X;
    let terms = vec![
        PauliTerm {
            coefficient: Complex::new(c0, T::zero()),
            string: PauliString::identity(n_qubits),
        },
        real_term(0.2, PauliString::new(x0z1)?),
        real_term(0.2, PauliString::new(x0)?),
    ];
    let decomposition = PauliDecomposition::new(n_qubits, terms)?;
    let dense = decomposition.reconstruct()?.map(|z| z.re);

    let dim = 1usize << n_qubits;
    let b_raw = vec![T::one(); dim];
    let mut b_prep = Circuit::new(n_qubits);
    for q in 0..n_qubits {
        b_prep.push(Gate::H(q))?;
    }

    LinearProblem::new(
        format!("test:c0={c0_f},n={n_qubits}"),
        decomposition,
        dense,
        b_raw,
        b_prep,
    )
}

fn tridiagonal<T: Scalar>(size: usize) -> Matrix<T> {
    let two = T::one() + T::one();
    let mut m = Matrix::zeros(size, size);
    for i in 0..size {
        m[(i, i)] = two;
        if i + 1 < size {
            m[(i, i + 1)] = -T::one();
            m[(i + 1, i)] = -T::one();
        }
    }
    m
}

fn circulant_laplacian<T: Scalar>(size: usize) -> Matrix<T> {
    let two = T::one() + T::one();
    let mut m = Matrix::zeros(size, size);
    for i in 0..size {
        m[(i, i)] = two;
        m[(i, (i + 1) % size)] = m[(i, (i + 1) % size)] - T::one();
        m[(i, (i + size - 1) % size)] = m[(i, (i + size - 1) % size)] - T::one();
    }
    m
}

/// Two-point superposition `cos(a/2)|0..0> + sin(a/2)|1..1>` on `qubits`,
/// with `a = 2 atan2(t_last, t_first)`: one rotation plus a CNOT fan-out.
fn push_two_point_prep<T: Scalar>(
    circuit: &mut Circuit<T>,
    qubits: &[usize],
    t_first: T,
    t_last: T,
) -> Result<()> {
    let pivot = *qubits.last().expect("register is non-empty");
    if t_first == T::zero() {
        for &q in qubits {
            circuit.push(Gate::X(q))?;
        }
        return Ok(());
    }
    if t_last == T::zero() {
        return Ok(());
    }
    let angle = (T::one() + T::one()) * t_last.atan2(t_first);
    circuit.push(Gate::Ry {
        target: pivot,
        angle,
    })?;
    for &q in qubits.iter().rev().skip(1) {
        circuit.push(Gate::Cnot {
            control: pivot,
            target: q,
        })?;
    }
    Ok(())
}

/// 1D rod conduction: `A = tridiag(-1, 2, -1)` over `2^n` interior nodes,
/// `b = t_first e_0 + t_last e_(N-1)`.
pub fn laplacian_1d<T: Scalar>(
    n_qubits: usize,
    boundary: BoundarySpec<T>,
) -> Result<LinearProblem<T>> {
    if !(1..=MAX_DECOMPOSE_QUBITS).contains(&n_qubits) {
        return Err(Error::QubitCountOutOfRange {
            n: n_qubits,
            min: 1,
            max: MAX_DECOMPOSE_QUBITS,
        });
    }
    let dim = 1usize << n_qubits;
    let dense = tridiagonal::<T>(dim);
    let decomposition =
        PauliDecomposition::decompose(&dense.to_complex(), T::from_f64_lossy(1e-12))?;

    let mut b_raw = vec![T::zero(); dim];
    b_raw[0] = boundary.t_first;
    b_raw[dim - 1] = b_raw[dim - 1] + boundary.t_last;
    let mut b_prep = Circuit::new(n_qubits);
    let qubits: Vec<usize> = (0..n_qubits).collect();
    push_two_point_prep(&mut b_prep, &qubits, boundary.t_first, boundary.t_last)?;

    LinearProblem::new(
        format!("heat1d:n={n_qubits}"),
        decomposition,
        dense,
        b_raw,
        b_prep,
    )
}

/// 2D plate conduction on a `2^npd x 2^npd` grid.
///
/// Operator `T (x) I + I (x) L` with `T` the Dirichlet tridiagonal in y and
/// `L` the lateral closure in x. Heat enters through the first and last grid
/// rows, uniformly in x: `b = t_first (e_0 (x) 1) + t_last (e_(N-1) (x) 1)`.
/// Qubits `0..npd` address y, `npd..2npd` address x.
pub fn laplacian_2d_with_lateral<T: Scalar>(
    n_per_dim: usize,
    boundary: BoundarySpec<T>,
    lateral: LateralBoundary,
) -> Result<LinearProblem<T>> {
    if !(1..=MAX_DECOMPOSE_QUBITS / 2).contains(&n_per_dim) {
        return Err(Error::QubitCountOutOfRange {
            n: n_per_dim,
            min: 1,
            max: MAX_DECOMPOSE_QUBITS / 2,
        });
    }
    let side = 1usize << n_per_dim;
    let ty = tridiagonal::<T>(side);
    let lx = match lateral {
        LateralBoundary::Dirichlet => tridiagonal::<T>(side),
        LateralBoundary::Periodic => circulant_laplacian::<T>(side),
    };
    let eye = Matrix::<T>::identity(side);
    let dense = ty.kron(&eye).add(&eye.kron(&lx))?;
    let decomposition =
        PauliDecomposition::decompose(&dense.to_complex(), T::from_f64_lossy(1e-12))?;

    let mut b_raw = vec![T::zero(); side * side];
    for x in 0..side {
        b_raw[x] = b_raw[x] + boundary.t_first;
        b_raw[(side - 1) * side + x] = b_raw[(side - 1) * side + x] + boundary.t_last;
    }
    let n_qubits = 2 * n_per_dim;
    let mut b_prep = Circuit::new(n_qubits);
    let y_qubits: Vec<usize> = (0..n_per_dim).collect();
    push_two_point_prep(&mut b_prep, &y_qubits, boundary.t_first, boundary.t_last)?;
    for q in n_per_dim..n_qubits {
        b_prep.push(Gate::H(q))?;
    }

    let label = match lateral {
        LateralBoundary::Dirichlet => format!("heat2d:npd={n_per_dim}"),
        LateralBoundary::Periodic => format!("heat2d:npd={n_per_dim},lateral=periodic"),
    };
    LinearProblem::new(label, decomposition, dense, b_raw, b_prep)
}

/// 2D plate with the default Dirichlet closure on all four walls.
pub fn laplacian_2d<T: Scalar>(
    n_per_dim: usize,
    boundary: BoundarySpec<T>,
) -> Result<LinearProblem<T>> {
    laplacian_2d_with_lateral(n_per_dim, boundary, LateralBoundary::Dirichlet)
}

/// Wraps a custom dense system, synthesizing the preparation circuit.
///
/// Synthesis only covers the structured right-hand sides the solver knows how
/// to prepare: uniform, single basis vector, or a two-point load on the first
/// and last components. Anything else errors with a pointer to the presets.
pub fn from_dense<T: Scalar>(
    label: String,
    dense: Matrix<T>,
    b_raw: Vec<T>,
) -> Result<LinearProblem<T>> {
    if !dense.is_square() {
        return Err(Error::SizeMismatch {
            context: "custom matrix shape",
            left: dense.rows(),
            right: dense.cols(),
        });
    }
    let dim = dense.rows();
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo { dim });
    }
    let n_qubits = dim.trailing_zeros() as usize;
    if b_raw.len() != dim {
        return Err(Error::SizeMismatch {
            context: "custom right-hand side",
            left: b_raw.len(),
            right: dim,
        });
    }
    let decomposition =
        PauliDecomposition::decompose(&dense.to_complex(), T::from_f64_lossy(1e-12))?;

    let support: Vec<usize> = b_raw
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != T::zero())
        .map(|(i, _)| i)
        .collect();
    if support.is_empty() {
        return Err(Error::InvalidArgument(
            "right-hand side must be nonzero".into(),
        ));
    }
    let mut b_prep = Circuit::new(n_qubits);
    let uniform = !support.is_empty()
        && support.len() == dim
        && b_raw.iter().all(|&v| (v - b_raw[0]).abs() < T::epsilon());
    if uniform {
        for q in 0..n_qubits {
            b_prep.push(Gate::H(q))?;
        }
    } else if support.len() == 1 {
        let index = support[0];
        for q in 0..n_qubits {
            if index & (1 << (n_qubits - 1 - q)) != 0 {
                b_prep.push(Gate::X(q))?;
            }
        }
    } else if support == [0, dim - 1] {
        let qubits: Vec<usize> = (0..n_qubits).collect();
        push_two_point_prep(&mut b_prep, &qubits, b_raw[0], b_raw[dim - 1])?;
    } else {
        return Err(Error::InvalidArgument(
            "no preparation circuit for this right-hand side; use a uniform vector, \
             a single basis vector, a first+last two-point load, or a structured preset"
                .into(),
        ));
    }

    LinearProblem::new(label, decomposition, dense, b_raw, b_prep)
}
