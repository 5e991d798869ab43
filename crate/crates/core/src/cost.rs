//! Variational cost functions.
//!
//! Both costs compare `A|x(params)>` against the target state `|b>` through
//! the ratio of two expectation-valued quantities, a numerator `N` and the
//! normalization `D = <x|A'A|x>`:
//!
//! * global: `1 - |<b|A|x>|^2 / D`, zero exactly when `A|x>` is parallel
//!   to `|b>`;
//! * local: `1/2 - sum_l <Z_l-sandwich> / (2 n D)`, same zero set but with
//!   gradients that survive to larger registers.
//!
//! Analytic evaluation factorizes through `phi = sum_m c_m A_m |x>` and costs
//! `O(M 2^n)`. Shot-based evaluation estimates each pairwise coefficient
//! `u(m, m', .) = <x| A_m' U Z U' A_m |x>` with an ancilla Hadamard test in
//! which only Pauli strings are ever controlled; the preparation unitary and
//! the ansatz run uncontrolled.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ansatz::{ansatz_state, AnsatzSpec};
use crate::error::{Error, Result};
use crate::pauli::{MaskedPauli, PauliString};
use crate::problems::LinearProblem;
use crate::scalar::{Complex, Scalar};
use crate::seeding;
use crate::statevector::{Circuit, Gate, Statevector, DEFAULT_MAX_QUBITS};

/// Which cost functional to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CostKind {
    #[default]
    Local,
    Global,
}

/// How expectation values are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostMode {
    /// Exact statevector arithmetic.
    Analytic,
    /// Finite-shot Hadamard-test estimates, deterministic in `seed`.
    Shots { shots: u64, seed: u64 },
}

/// Cost value together with the ratio it was assembled from.
///
/// For the local cost `numerator` is the summed `Z`-sandwich term and the
/// value is `1/2 - numerator / (2 n denominator)`; for the global cost
/// `numerator` is `|<b|A|x>|^2` and the value is `1 - numerator/denominator`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostEvaluation<T: Scalar> {
    pub value: T,
    pub numerator: T,
    pub denominator: T,
}

/// Threshold under which `D` counts as numerically zero.
const DEGENERACY_TOL: f64 = 1e-14;

/// Seed stream tags, one per estimator family.
const STREAM_U_ENTRY: u64 = 1;
const STREAM_GLOBAL_SUBSET: u64 = 2;
const STREAM_NORM: u64 = 3;

fn check_shapes<T: Scalar>(problem: &LinearProblem<T>, spec: &AnsatzSpec) -> Result<()> {
    if problem.n_qubits() != spec.n_qubits() {
        return Err(Error::SizeMismatch {
            context: "ansatz register vs problem register",
            left: spec.n_qubits(),
            right: problem.n_qubits(),
        });
    }
    Ok(())
}

fn check_degenerate<T: Scalar>(denominator: T) -> Result<()> {
    if denominator.abs() <= T::from_f64_lossy(DEGENERACY_TOL) {
        return Err(Error::DegenerateState {
            denom: denominator.to_f64().unwrap_or(0.0),
        });
    }
    Ok(())
}

/// `<a| P |b>` for two states over the same register.
fn cross_pauli<T: Scalar>(
    a: &Statevector<T>,
    b: &Statevector<T>,
    string: &PauliString,
) -> Result<Complex<T>> {
    if a.n_qubits() != b.n_qubits() || string.len() != a.n_qubits() {
        return Err(Error::SizeMismatch {
            context: "cross expectation register",
            left: a.n_qubits(),
            right: b.n_qubits(),
        });
    }
    let masks = MaskedPauli::full_register(string);
    let mut acc = Complex::new(T::zero(), T::zero());
    for j in 0..b.dim() {
        let amp = b.amplitude(j);
        let moved = match masks.phase_quarter_turns(j) {
            0 => amp,
            1 => Complex::new(-amp.im, amp.re),
            2 => -amp,
            _ => Complex::new(amp.im, -amp.re),
        };
        acc += a.amplitude(j ^ masks.x_mask).conj() * moved;
    }
    Ok(acc)
}

/// States shared by the analytic evaluation paths.
struct Prepared<T: Scalar> {
    /// `A_m |x>` per decomposition term.
    psi: Vec<Statevector<T>>,
    /// `phi = sum_m c_m psi_m = A |x>`.
    phi: Statevector<T>,
}

fn prepare<T: Scalar>(
    problem: &LinearProblem<T>,
    spec: &AnsatzSpec,
    params: &[T],
) -> Result<Prepared<T>> {
    let x = ansatz_state(spec, params)?;
    let n = problem.n_qubits();
    let mut psi = Vec::with_capacity(problem.decomposition().len());
    let mut phi = Statevector::null(n)?;
    for term in problem.decomposition().terms() {
        let mut state = x.clone();
        state.apply_pauli_string(&term.string)?;
        phi.add_scaled(&state, term.coefficient)?;
        psi.push(state);
    }
    Ok(Prepared { psi, phi })
}

/// Analytic `u(m, m', z)`; `z = None` omits the sandwiched operator.
pub fn u_coefficient_analytic<T: Scalar>(
    problem: &LinearProblem<T>,
    spec: &AnsatzSpec,
    params: &[T],
    m: usize,
    mp: usize,
    z: Option<usize>,
) -> Result<Complex<T>> {
    check_shapes(problem, spec)?;
    let n_terms = problem.decomposition().len();
    if m >= n_terms || mp >= n_terms {
        return Err(Error::InvalidArgument(format!(
            "term index out of range: ({m}, {mp}) with {n_terms} terms"
        )));
    }
    let x = ansatz_state(spec, params)?;
    let mut psi_m = x.clone();
    psi_m.apply_pauli_string(&problem.decomposition().terms()[m].string)?;
    let mut psi_mp = x;
    psi_mp.apply_pauli_string(&problem.decomposition().terms()[mp].string)?;
    match z {
        None => psi_mp.inner_product(&psi_m),
        Some(l) => {
            let n = problem.n_qubits();
            let z_string = PauliString::single_z(n, l)?;
            let mut y_m = psi_m;
            y_m.apply_circuit_adjoint(problem.b_prep())?;
            let mut y_mp = psi_mp;
            y_mp.apply_circuit_adjoint(problem.b_prep())?;
            cross_pauli(&y_mp, &y_m, &z_string)
        }
    }
}

/// One ancilla Hadamard-test estimate of
/// `<x| A_mp (U Z U') A_m |x>` with the middle operator optional.
///
/// Uncontrolled pieces (`V`, `U'`, `U`) act on both ancilla branches; on the
/// ancilla-0 branch the `U' .. U` pair cancels, which is what makes leaving
/// them uncontrolled legitimate. Real and imaginary parts come from separate
/// circuit runs; `im_shots = 0` skips the imaginary run entirely.
fn hadamard_estimate<T: Scalar>(
    problem: &LinearProblem<T>,
    v_circuit: &Circuit<T>,
    a_m: &PauliString,
    a_mp: &PauliString,
    middle: Option<&PauliString>,
    re_shots: u64,
    im_shots: u64,
    rng: &mut impl RngCore,
) -> Result<Complex<T>> {
    let n = problem.n_qubits();
    let ancilla = n;
    let mut state = Statevector::zero_with_cap(n + 1, DEFAULT_MAX_QUBITS + 1)?;
    state.apply_gate(&Gate::H(ancilla))?;
    // The ansatz circuit addresses qubits 0..n of the larger register, so its
    // gates are applied one by one instead of through apply_circuit.
    for gate in v_circuit.gates() {
        state.apply_gate(gate)?;
    }
    let targets: Vec<usize> = (0..n).collect();
    state.apply_gate(&Gate::ControlledPauli {
        control: ancilla,
        targets: targets.clone(),
        string: a_m.clone(),
    })?;
    if let Some(mid) = middle {
        if !mid.is_identity() {
            for gate in problem.b_prep().gates().iter().rev() {
                state.apply_gate(&gate.adjoint())?;
            }
            state.apply_gate(&Gate::ControlledPauli {
                control: ancilla,
                targets: targets.clone(),
                string: mid.clone(),
            })?;
            for gate in problem.b_prep().gates() {
                state.apply_gate(gate)?;
            }
        }
    }
    state.apply_gate(&Gate::ControlledPauli {
        control: ancilla,
        targets,
        string: a_mp.clone(),
    })?;

    let mut re_state = state.clone();
    re_state.apply_gate(&Gate::H(ancilla))?;
    let (zeros, ones) = re_state.sample_qubit_with(ancilla, re_shots, rng)?;
    let re = (zeros as f64 - ones as f64) / re_shots as f64;

    let im = if im_shots > 0 {
        let mut im_state = state;
        im_state.apply_gate(&Gate::Sdg(ancilla))?;
        im_state.apply_gate(&Gate::H(ancilla))?;
        let (zeros, ones) = im_state.sample_qubit_with(ancilla, im_shots, rng)?;
        (zeros as f64 - ones as f64) / im_shots as f64
    } else {
        0.0
    };
    Ok(Complex::new(T::from_f64_lossy(re), T::from_f64_lossy(im)))
}

fn shot_split<T: Scalar>(problem: &LinearProblem<T>, shots: u64) -> Result<(u64, u64)> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shot count must be positive".into()));
    }
    if problem.is_real() {
        Ok((shots, 0))
    } else {
        let im = shots / 2;
        Ok((shots - im, im))
    }
}

/// Shot-based `u(m, m', z)`; deterministic in `seed`.
pub fn u_coefficient_hadamard<T: Scalar>(
    problem: &LinearProblem<T>,
    spec: &AnsatzSpec,
    params: &[T],
    m: usize,
    mp: usize,
    z: Option<usize>,
    shots: u64,
    seed: u64,
) -> Result<Complex<T>> {
    check_shapes(problem, spec)?;
    let n_terms = problem.decomposition().len();
    if m >= n_terms || mp >= n_terms {
        return Err(Error::InvalidArgument(format!(
            "term index out of range: ({m}, {mp}) with {n_terms} terms"
        )));
    }
    let n = problem.n_qubits();
    let middle = match z {
        None => None,
        Some(l) => Some(PauliString::single_z(n, l)?),
    };
    let (re_shots, im_shots) = shot_split(problem, shots)?;
    let v_circuit = spec.circuit(params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    hadamard_estimate(
        problem,
        &v_circuit,
        &problem.decomposition().terms()[m].string,
        &problem.decomposition().terms()[mp].string,
        middle.as_ref(),
        re_shots,
        im_shots,
        &mut rng,
    )
}

/// Pairwise coefficient table `u(m, m', z)` with `z` ranging over the
/// identity slot and each single-qubit `Z`.
///
/// Hermitian in the term indices: `u(m', m, z) = conj(u(m, m', z))`. Builders
/// compute the lower triangle and mirror.
#[derive(Debug, Clone, PartialEq)]
pub struct UTable<T: Scalar> {
    n_qubits: usize,
    n_terms: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> UTable<T> {
    fn empty(n_qubits: usize, n_terms: usize) -> Self {
        Self {
            n_qubits,
            n_terms,
            data: vec![Complex::new(T::zero(), T::zero()); n_terms * n_terms * (n_qubits + 1)],
        }
    }

    fn slot(&self, m: usize, mp: usize, z: Option<usize>) -> usize {
        let offset = match z {
            None => 0,
            Some(l) => l + 1,
        };
        (m * self.n_terms + mp) * (self.n_qubits + 1) + offset
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_terms(&self) -> usize {
        self.n_terms
    }

    pub fn get(&self, m: usize, mp: usize, z: Option<usize>) -> Complex<T> {
        self.data[self.slot(m, mp, z)]
    }

    fn set(&mut self, m: usize, mp: usize, z: Option<usize>, value: Complex<T>) {
        let slot = self.slot(m, mp, z);
        self.data[slot] = value;
    }
}

/// Exact u-table via pairwise state overlaps.
pub fn u_table_analytic<T: Scalar>(
    problem: &LinearProblem<T>,
    spec: &AnsatzSpec,
    params: &[T],
) -> Result<UTable<T>> {
    check_shapes(problem, spec)?;
    let n = problem.n_qubits();
    let prepared = prepare(problem, spec, params)?;
    let rotated: Vec<Statevector<T>> = prepared
        .psi
        .iter()
        .map(|psi| {
            let mut y = psi.clone();
            y.apply_circuit_adjoint(problem.b_prep())?;
            Ok(y)
        })
        .collect::<Result<_>>()?;
    let m_count = prepared.psi.len();
    let mut table = UTable::empty(n, m_count);
    for m in 0..m_count {
        for mp in 0..=m {
            let ident = prepared.psi[mp].inner_product(&prepared.psi[m])?;
            table.set(m, mp, None, ident);
            table.set(mp, m, None, ident.conj());
            for l in 0..n {
                let z_string = PauliString::single_z(n, l)?;
                let value = cross_pauli(&rotated[mp], &rotated[m], &z_string)?;
                table.set(m, mp, Some(l), value);
                table.set(mp, m, Some(l), value.conj());
            }
        }
    }
    Ok(table)
}

/// Shot-based u-table; every entry draws from its own derived seed stream, so
/// the table is reproducible and entries are independent.
pub fn u_table_sampled<T: Scalar>(
    problem: &LinearProblem<T>,
    spec: &AnsatzSpec,
    params: &[T],
    shots: u64,
    seed: u64,
) -> Result<UTable<T>> {
    check_shapes(problem, spec)?;
    let n = problem.n_qubits();
    let (re_shots, im_shots) = shot_split(problem, shots)?;
    let v_circuit = spec.circuit(params)?;
    let terms = problem.decomposition().terms();
    let m_count = terms.len();
    let mut table = UTable::empty(n, m_count);
    for m in 0..m_count {
        for mp in 0..=m {
            for slot in 0..=n {
                let z = if slot == 0 { None } else { Some(slot - 1) };
                let entry_index = ((m * m_count + mp) * (n + 1) + slot) as u64;
                let entry_seed = seeding::derive2(seed, STREAM_U_ENTRY, entry_index);
                let mut rng = ChaCha8Rng::seed_from_u64(entry_seed);
                let middle = match z {
                    None => None,
                    Some(l) => Some(PauliString::single_z(n, l)?),
                };
                let value = hadamard_estimate(
                    problem,
                    &v_circuit,
                    &terms[m].string,
                    &terms[mp].string,
                    middle.as_ref(),
                    re_shots,
                    im_shots,
                    &mut rng,
                )?;
                table.set(m, mp, z, value);
                if mp != m {
                    table.set(mp, m, z, value.conj());
                }
            }
        }
    }
    Ok(table)
}

/// Assembles the local cost from a u-table and the term coefficients.
pub fn local_cost_from_table<T: Scalar>(
    problem: &LinearProblem<T>,
    table: &UTable<T>,
) -> Result<CostEvaluation<T>> {
    let terms = problem.decomposition().terms();
    if table.n_terms() != terms.len() || table.n_qubits() != problem.n_qubits() {
        return Err(Error::SizeMismatch {
            context: "u-table shape",
            left: table.n_terms(),
            right: terms.len(),
        });
    }
    let n = problem.n_qubits();
    let mut numerator = Complex::new(T::zero(), T::zero());
    let mut denominator = Complex::new(T::zero(), T::zero());
    for (m, tm) in terms.iter().enumerate() {
        for (mp, tmp) in terms.iter().enumerate() {
            let weight = tm.coefficient * tmp.coefficient.conj();
            denominator += weight * table.get(m, mp, None);
            for l in 0..n {
                numerator += weight * table.get(m, mp, Some(l));
            }
        }
    }
    let num = numerator.re;
    let den = denominator.re;
    check_degenerate(den)?;
    let two_n = T::from_usize(2 * n).unwrap();
    Ok(CostEvaluation {
        value: T::from_f64_lossy(0.5) - num / (two_n * den),
        numerator: num,
        denominator: den,
    })
}

/// Local cost `1/2 - sum_l <Z_l> / (2 n D)`.
///
/// Analytic mode runs the factorized `O(M 2^n)` path; shots mode builds a
/// sampled u-table first.
pub fn local_cost<T: Scalar>(
    problem: &LinearProblem<T>,
    spec: &AnsatzSpec,
    params: &[T],
    mode: &CostMode,
) -> Result<CostEvaluation<T>> {
    check_shapes(problem, spec)?;
    match mode {
        CostMode::Analytic => {
            let n = problem.n_qubits();
            let prepared = prepare(problem, spec, params)?;
            let den = prepared.phi.norm_sqr();
            check_degenerate(den)?;
            let mut w = prepared.phi;
            w.apply_circuit_adjoint(problem.b_prep())?;
            let mut num = T::zero();
            for l in 0..n {
                let z_string = PauliString::single_z(n, l)?;
                num += w.expectation_pauli_string(&z_string)?.re;
            }
            let two_n = T::from_usize(2 * n).unwrap();
            Ok(CostEvaluation {
                value: T::from_f64_lossy(0.5) - num / (two_n * den),
                numerator: num,
                denominator: den,
            })
        }
        CostMode::Shots { shots, seed } => {
            let table = u_table_sampled(problem, spec, params, *shots, *seed)?;
            local_cost_from_table(problem, &table)
        }
    }
}

/// Global cost `1 - |<b|A|x>|^2 / D`.
///
/// Shots mode expands the `|b><b|` projector into `2^n` Z-subset strings so
/// the numerator reduces to the same controlled-Pauli estimator the local
/// cost uses; the run count scales with `2^n M^2`, which is the reason the
/// local cost exists.
pub fn global_cost<T: Scalar>(
    problem: &LinearProblem<T>,
    spec: &AnsatzSpec,
    params: &[T],
    mode: &CostMode,
) -> Result<CostEvaluation<T>> {
    check_shapes(problem, spec)?;
    let n = problem.n_qubits();
    match mode {
        CostMode::Analytic => {
            let prepared = prepare(problem, spec, params)?;
            let den = prepared.phi.norm_sqr();
            check_degenerate(den)?;
            let b = problem.b_state()?;
            let overlap = b.inner_product(&prepared.phi)?;
            let num = overlap.norm_sqr();
            Ok(CostEvaluation {
                value: T::one() - num / den,
                numerator: num,
                denominator: den,
            })
        }
        CostMode::Shots { shots, seed } => {
            let (re_shots, im_shots) = shot_split(problem, *shots)?;
            let v_circuit = spec.circuit(params)?;
            let terms = problem.decomposition().terms();
            let m_count = terms.len();
            let dim = 1usize << n;
            let mut numerator = Complex::new(T::zero(), T::zero());
            let mut denominator = Complex::new(T::zero(), T::zero());
            for m in 0..m_count {
                for mp in 0..=m {
                    let pair = (m * m_count + mp) as u64;
                    let weight = terms[m].coefficient * terms[mp].coefficient.conj();
                    let mirrored =
                        terms[mp].coefficient * terms[m].coefficient.conj();

                    let seed_ident =
                        seeding::derive2(*seed, STREAM_NORM, pair);
                    let mut rng = ChaCha8Rng::seed_from_u64(seed_ident);
                    let ident = hadamard_estimate(
                        problem,
                        &v_circuit,
                        &terms[m].string,
                        &terms[mp].string,
                        None,
                        re_shots,
                        im_shots,
                        &mut rng,
                    )?;
                    denominator += weight * ident;
                    if mp != m {
                        denominator += mirrored * ident.conj();
                    }

                    for subset in 0..dim {
                        let qubits: Vec<usize> =
                            (0..n).filter(|q| subset & (1 << q) != 0).collect();
                        let z_string = PauliString::z_subset(n, &qubits)?;
                        let subset_seed = seeding::derive2(
                            *seed,
                            STREAM_GLOBAL_SUBSET,
                            pair * dim as u64 + subset as u64,
                        );
                        let mut rng = ChaCha8Rng::seed_from_u64(subset_seed);
                        let value = hadamard_estimate(
                            problem,
                            &v_circuit,
                            &terms[m].string,
                            &terms[mp].string,
                            Some(&z_string),
                            re_shots,
                            im_shots,
                            &mut rng,
                        )?;
                        numerator += weight * value;
                        if mp != m {
                            numerator += mirrored * value.conj();
                        }
                    }
                }
            }
            let inv_dim = T::one() / T::from_usize(dim).unwrap();
            let num = numerator.re * inv_dim;
            let den = denominator.re;
            check_degenerate(den)?;
            Ok(CostEvaluation {
                value: T::one() - num / den,
                numerator: num,
                denominator: den,
            })
        }
    }
}

/// Evaluates the selected cost functional.
pub fn cost<T: Scalar>(
    problem: &LinearProblem<T>,
    spec: &AnsatzSpec,
    params: &[T],
    kind: CostKind,
    mode: &CostMode,
) -> Result<CostEvaluation<T>> {
    match kind {
        CostKind::Local => local_cost(problem, spec, params, mode),
        CostKind::Global => global_cost(problem, spec, params, mode),
    }
}

/// `||A |x(params)>||^2`, the shared cost denominator.
pub fn norm_phi_squared<T: Scalar>(
    problem: &LinearProblem<T>,
    spec: &AnsatzSpec,
    params: &[T],
    mode: &CostMode,
) -> Result<T> {
    check_shapes(problem, spec)?;
    match mode {
        CostMode::Analytic => {
            let prepared = prepare(problem, spec, params)?;
            Ok(prepared.phi.norm_sqr())
        }
        CostMode::Shots { shots, seed } => {
            let (re_shots, im_shots) = shot_split(problem, *shots)?;
            let v_circuit = spec.circuit(params)?;
            let terms = problem.decomposition().terms();
            let mut acc = Complex::new(T::zero(), T::zero());
            for m in 0..terms.len() {
                for mp in 0..=m {
                    let pair = (m * terms.len() + mp) as u64;
                    let entry_seed = seeding::derive2(*seed, STREAM_NORM, pair);
                    let mut rng = ChaCha8Rng::seed_from_u64(entry_seed);
                    let value = hadamard_estimate(
                        problem,
                        &v_circuit,
                        &terms[m].string,
                        &terms[mp].string,
                        None,
                        re_shots,
                        im_shots,
                        &mut rng,
                    )?;
                    let weight = terms[m].coefficient * terms[mp].coefficient.conj();
                    acc += weight * value;
                    if mp != m {
                        let mirrored = terms[mp].coefficient * terms[m].coefficient.conj();
                        acc += mirrored * value.conj();
                    }
                }
            }
            Ok(acc.re)
        }
    }
}
