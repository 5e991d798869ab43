//! Dense statevector simulator.
//!
//! Basis indices read qubit 0 as the most significant bit: `|q0 q1 .. >`
//! maps to index `q0 * 2^(n-1) + q1 * 2^(n-2) + ..`. Gate kernels update
//! amplitude pairs in place through bit masks, after the style of mainstream
//! statevector engines.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::pauli::{MaskedPauli, PauliString};
use crate::scalar::{Complex, Scalar};

/// Desk-scale qubit cap for the default constructors.
pub const DEFAULT_MAX_QUBITS: usize = 12;

/// One gate of the supported set.
///
/// `Ry` and `Cz` generate the ansatz; `H`, `X`, `Ry`, `Cnot` appear in state
/// preparation; `S`/`Sdg` and `ControlledPauli` exist for Hadamard-test
/// circuits. `ControlledPauli` places `string` letter `k` on `targets[k]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate<T: Scalar> {
    H(usize),
    X(usize),
    Y(usize),
    Z(usize),
    S(usize),
    Sdg(usize),
    Ry { target: usize, angle: T },
    Cz { a: usize, b: usize },
    Cnot { control: usize, target: usize },
    ControlledPauli {
        control: usize,
        targets: Vec<usize>,
        string: PauliString,
    },
}

impl<T: Scalar> Gate<T> {
    fn validate(&self, n_qubits: usize) -> Result<()> {
        let check = |q: usize| {
            if q >= n_qubits {
                Err(Error::QubitIndexOutOfRange {
                    index: q,
                    n_qubits,
                })
            } else {
                Ok(())
            }
        };
        match self {
            Gate::H(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) | Gate::S(q) | Gate::Sdg(q) => {
                check(*q)
            }
            Gate::Ry { target, .. } => check(*target),
            Gate::Cz { a, b } => {
                check(*a)?;
                check(*b)?;
                if a == b {
                    return Err(Error::InvalidArgument("CZ qubits must differ".into()));
                }
                Ok(())
            }
            Gate::Cnot { control, target } => {
                check(*control)?;
                check(*target)?;
                if control == target {
                    return Err(Error::InvalidArgument("CNOT qubits must differ".into()));
                }
                Ok(())
            }
            Gate::ControlledPauli {
                control,
                targets,
                string,
            } => {
                check(*control)?;
                if targets.len() != string.len() {
                    return Err(Error::SizeMismatch {
                        context: "controlled pauli targets",
                        left: targets.len(),
                        right: string.len(),
                    });
                }
                for (i, &t) in targets.iter().enumerate() {
                    check(t)?;
                    if t == *control || targets[..i].contains(&t) {
                        return Err(Error::InvalidArgument(
                            "controlled pauli qubits must be distinct".into(),
                        ));
                    }
                }
                Ok(())
            }
        }
    }

    /// Hermitian adjoint; everything except `S`/`Sdg` and `Ry` is self-adjoint.
    pub fn adjoint(&self) -> Self {
        match self {
            Gate::S(q) => Gate::Sdg(*q),
            Gate::Sdg(q) => Gate::S(*q),
            Gate::Ry { target, angle } => Gate::Ry {
                target: *target,
                angle: -*angle,
            },
            other => other.clone(),
        }
    }

    /// True when the gate matrix has no imaginary entries.
    pub fn is_real_valued(&self) -> bool {
        match self {
            Gate::Y(_) | Gate::S(_) | Gate::Sdg(_) => false,
            Gate::ControlledPauli { string, .. } => string.is_real_valued(),
            _ => true,
        }
    }
}

/// Ordered gate list for a register of fixed size.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit<T: Scalar> {
    n_qubits: usize,
    gates: Vec<Gate<T>>,
}

impl<T: Scalar> Circuit<T> {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate<T>) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend_from(&mut self, other: &Circuit<T>) -> Result<()> {
        for gate in &other.gates {
            self.push(gate.clone())?;
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate<T>] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn is_real_valued(&self) -> bool {
        self.gates.iter().all(Gate::is_real_valued)
    }
}

/// Complex amplitudes of an `n`-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector<T: Scalar> {
    n_qubits: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Scalar> Statevector<T> {
    /// `|0..0>` on `n` qubits, capped at `max_qubits`.
    pub fn zero_with_cap(n: usize, max_qubits: usize) -> Result<Self> {
        if n < 1 || n > max_qubits {
            return Err(Error::QubitCountOutOfRange {
                n,
                min: 1,
                max: max_qubits,
            });
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << n];
        amps[0] = Complex::new(T::one(), T::zero());
        Ok(Self { n_qubits: n, amps })
    }

    /// `|0..0>` on `n` qubits with the default cap.
    pub fn zero(n: usize) -> Result<Self> {
        Self::zero_with_cap(n, DEFAULT_MAX_QUBITS)
    }

    /// Basis state `|index>`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        let mut state = Self::zero(n)?;
        if index >= state.dim() {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {}",
                state.dim()
            )));
        }
        state.amps[0] = Complex::new(T::zero(), T::zero());
        state.amps[index] = Complex::new(T::one(), T::zero());
        Ok(state)
    }

    /// All-zero amplitudes; accumulator for linear combinations of states.
    pub fn null(n: usize) -> Result<Self> {
        let mut state = Self::zero(n)?;
        state.amps[0] = Complex::new(T::zero(), T::zero());
        Ok(state)
    }

    pub fn from_amplitudes(amps: Vec<Complex<T>>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo { dim });
        }
        Ok(Self {
            n_qubits: dim.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex<T> {
        self.amps[index]
    }

    pub fn probability(&self, index: usize) -> T {
        self.amps[index].norm_sqr()
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// Rescales to unit norm; errors when the norm is numerically zero.
    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm();
        if norm < T::from_f64_lossy(1e-14) {
            return Err(Error::DegenerateState {
                denom: norm.to_f64().unwrap_or(0.0),
            });
        }
        let inv = T::one() / norm;
        for a in &mut self.amps {
            *a = a.scale(inv);
        }
        Ok(self)
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &Self, factor: Complex<T>) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::SizeMismatch {
                context: "statevector add",
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += factor * b;
        }
        Ok(())
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex<T>> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::SizeMismatch {
                context: "inner product",
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        let mut acc = Complex::new(T::zero(), T::zero());
        for (a, b) in self.amps.iter().zip(&other.amps) {
            acc += a.conj() * b;
        }
        Ok(acc)
    }

    fn bit_mask(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    /// Applies a 2x2 unitary to `target`, iterating amplitude pairs.
    fn apply_single(&mut self, target: usize, m: [[Complex<T>; 2]; 2]) {
        let step = self.bit_mask(target);
        let dim = self.dim();
        for block in (0..dim).step_by(2 * step) {
            for j in block..block + step {
                let k = j + step;
                let a = self.amps[j];
                let b = self.amps[k];
                self.amps[j] = m[0][0] * a + m[0][1] * b;
                self.amps[k] = m[1][0] * a + m[1][1] * b;
            }
        }
    }

    /// Multiplies amplitudes with the target bit set by `factor`.
    fn apply_phase_on_one(&mut self, target: usize, factor: Complex<T>) {
        let mask = self.bit_mask(target);
        for (j, a) in self.amps.iter_mut().enumerate() {
            if j & mask != 0 {
                *a = factor * *a;
            }
        }
    }

    fn apply_masked_pauli(&mut self, masks: &MaskedPauli, control_mask: usize) {
        let dim = self.dim();
        let x = masks.x_mask;
        if x == 0 {
            for j in 0..dim {
                if j & control_mask == control_mask {
                    let turns = masks.phase_quarter_turns(j);
                    self.amps[j] = phase_times(turns, self.amps[j]);
                }
            }
            return;
        }
        for j in 0..dim {
            let k = j ^ x;
            // Visit each swap orbit once; x never touches the control bit.
            if j < k && j & control_mask == control_mask {
                let t = self.amps[j];
                self.amps[j] = phase_times(masks.phase_quarter_turns(k), self.amps[k]);
                self.amps[k] = phase_times(masks.phase_quarter_turns(j), t);
            }
        }
    }

    pub fn apply_gate(&mut self, gate: &Gate<T>) -> Result<()> {
        gate.validate(self.n_qubits)?;
        match gate {
            Gate::H(q) => {
                let h = T::from_f64_lossy(std::f64::consts::FRAC_1_SQRT_2);
                let hc = Complex::new(h, T::zero());
                self.apply_single(*q, [[hc, hc], [hc, -hc]]);
            }
            Gate::X(q) => {
                let step = self.bit_mask(*q);
                let dim = self.dim();
                for block in (0..dim).step_by(2 * step) {
                    for j in block..block + step {
                        self.amps.swap(j, j + step);
                    }
                }
            }
            Gate::Y(q) => {
                let i = Complex::new(T::zero(), T::one());
                let z = Complex::new(T::zero(), T::zero());
                self.apply_single(*q, [[z, -i], [i, z]]);
            }
            Gate::Z(q) => {
                self.apply_phase_on_one(*q, Complex::new(-T::one(), T::zero()));
            }
            Gate::S(q) => {
                self.apply_phase_on_one(*q, Complex::new(T::zero(), T::one()));
            }
            Gate::Sdg(q) => {
                self.apply_phase_on_one(*q, Complex::new(T::zero(), -T::one()));
            }
            Gate::Ry { target, angle } => {
                let half = *angle / (T::one() + T::one());
                let c = Complex::new(half.cos(), T::zero());
                let s = Complex::new(half.sin(), T::zero());
                self.apply_single(*target, [[c, -s], [s, c]]);
            }
            Gate::Cz { a, b } => {
                let mask = self.bit_mask(*a) | self.bit_mask(*b);
                for (j, amp) in self.amps.iter_mut().enumerate() {
                    if j & mask == mask {
                        *amp = -*amp;
                    }
                }
            }
            Gate::Cnot { control, target } => {
                let cmask = self.bit_mask(*control);
                let tmask = self.bit_mask(*target);
                for j in 0..self.dim() {
                    if j & cmask != 0 && j & tmask == 0 {
                        self.amps.swap(j, j | tmask);
                    }
                }
            }
            Gate::ControlledPauli {
                control,
                targets,
                string,
            } => {
                let masks = MaskedPauli::new(string, targets, self.n_qubits)?;
                let cmask = self.bit_mask(*control);
                self.apply_masked_pauli(&masks, cmask);
            }
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit<T>) -> Result<()> {
        if circuit.n_qubits() != self.n_qubits {
            return Err(Error::SizeMismatch {
                context: "circuit register size",
                left: circuit.n_qubits(),
                right: self.n_qubits,
            });
        }
        for gate in circuit.gates() {
            self.apply_gate(gate)?;
        }
        Ok(())
    }

    /// Applies the inverse circuit: adjoint gates in reverse order.
    pub fn apply_circuit_adjoint(&mut self, circuit: &Circuit<T>) -> Result<()> {
        if circuit.n_qubits() != self.n_qubits {
            return Err(Error::SizeMismatch {
                context: "circuit register size",
                left: circuit.n_qubits(),
                right: self.n_qubits,
            });
        }
        for gate in circuit.gates().iter().rev() {
            self.apply_gate(&gate.adjoint())?;
        }
        Ok(())
    }

    /// Applies a full-register Pauli string.
    pub fn apply_pauli_string(&mut self, string: &PauliString) -> Result<()> {
        if string.len() != self.n_qubits {
            return Err(Error::SizeMismatch {
                context: "pauli string length",
                left: string.len(),
                right: self.n_qubits,
            });
        }
        let masks = MaskedPauli::full_register(string);
        self.apply_masked_pauli(&masks, 0);
        Ok(())
    }

    /// `<self| P |self>` without mutating the state.
    pub fn expectation_pauli_string(&self, string: &PauliString) -> Result<Complex<T>> {
        if string.len() != self.n_qubits {
            return Err(Error::SizeMismatch {
                context: "pauli string length",
                left: string.len(),
                right: self.n_qubits,
            });
        }
        let masks = MaskedPauli::full_register(string);
        let mut acc = Complex::new(T::zero(), T::zero());
        for j in 0..self.dim() {
            let contrib = phase_times(masks.phase_quarter_turns(j), self.amps[j]);
            acc += self.amps[j ^ masks.x_mask].conj() * contrib;
        }
        Ok(acc)
    }

    /// Probability of reading `1` on `qubit`.
    pub fn probability_of_one(&self, qubit: usize) -> Result<T> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitIndexOutOfRange {
                index: qubit,
                n_qubits: self.n_qubits,
            });
        }
        let mask = self.bit_mask(qubit);
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(j, _)| j & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Samples `shots` basis-state readouts, returning a histogram indexed by
    /// basis state. Deterministic in `seed`.
    ///
    /// Draws sequential conditional binomials, which reproduces the
    /// multinomial distribution without per-shot loops.
    pub fn sample_counts(&self, shots: u64, seed: u64) -> Result<Vec<u64>> {
        if shots == 0 {
            return Err(Error::InvalidArgument("shot count must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_counts_with(shots, &mut rng)
    }

    pub(crate) fn sample_counts_with(
        &self,
        shots: u64,
        rng: &mut impl RngCore,
    ) -> Result<Vec<u64>> {
        let total = self.norm_sqr().to_f64().unwrap_or(0.0);
        if total <= 0.0 {
            return Err(Error::DegenerateState { denom: total });
        }
        let dim = self.dim();
        let mut counts = vec![0u64; dim];
        let mut remaining = shots;
        let mut rest = 1.0f64;
        for j in 0..dim {
            if remaining == 0 {
                break;
            }
            if j == dim - 1 {
                counts[j] = remaining;
                break;
            }
            let p = self.amps[j].norm_sqr().to_f64().unwrap_or(0.0) / total;
            let conditional = if rest > 0.0 { (p / rest).clamp(0.0, 1.0) } else { 1.0 };
            let draw = Binomial::new(remaining, conditional)
                .expect("conditional probability clamped to [0, 1]")
                .sample(rng);
            counts[j] = draw;
            remaining -= draw;
            rest -= p;
        }
        Ok(counts)
    }

    /// Samples `shots` readouts of one qubit, returning `(zeros, ones)`.
    pub(crate) fn sample_qubit_with(
        &self,
        qubit: usize,
        shots: u64,
        rng: &mut impl RngCore,
    ) -> Result<(u64, u64)> {
        let p1 = self.probability_of_one(qubit)?.to_f64().unwrap_or(0.0);
        let total = self.norm_sqr().to_f64().unwrap_or(1.0);
        let p1 = (p1 / total).clamp(0.0, 1.0);
        let ones = Binomial::new(shots, p1)
            .expect("probability clamped to [0, 1]")
            .sample(rng);
        Ok((shots - ones, ones))
    }
}

fn phase_times<T: Scalar>(quarter_turns: u32, amp: Complex<T>) -> Complex<T> {
    match quarter_turns {
        0 => amp,
        1 => Complex::new(-amp.im, amp.re),
        2 => -amp,
        _ => Complex::new(amp.im, -amp.re),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::Matrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type Sv = Statevector<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn random_state(n: usize, rng: &mut ChaCha8Rng) -> Sv {
        let amps: Vec<Complex<f64>> = (0..1usize << n)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        Statevector::from_amplitudes(amps).unwrap().normalized().unwrap()
    }

    fn random_gate(n: usize, rng: &mut ChaCha8Rng) -> Gate<f64> {
        let q = rng.random_range(0..n);
        match rng.random_range(0..10) {
            0 => Gate::H(q),
            1 => Gate::X(q),
            2 => Gate::Y(q),
            3 => Gate::Z(q),
            4 => Gate::S(q),
            5 => Gate::Sdg(q),
            6 => Gate::Ry {
                target: q,
                angle: rng.random_range(-3.0..3.0),
            },
            7 if n >= 2 => {
                let mut b = rng.random_range(0..n);
                while b == q {
                    b = rng.random_range(0..n);
                }
                Gate::Cz { a: q, b }
            }
            8 if n >= 2 => {
                let mut t = rng.random_range(0..n);
                while t == q {
                    t = rng.random_range(0..n);
                }
                Gate::Cnot {
                    control: q,
                    target: t,
                }
            }
            _ if n >= 2 => {
                let letters = [crate::pauli::Pauli::X, crate::pauli::Pauli::Y, crate::pauli::Pauli::Z];
                let mut t = rng.random_range(0..n);
                while t == q {
                    t = rng.random_range(0..n);
                }
                Gate::ControlledPauli {
                    control: q,
                    targets: vec![t],
                    string: PauliString::new(vec![letters[rng.random_range(0..3)]]).unwrap(),
                }
            }
            _ => Gate::H(q),
        }
    }

    #[test]
    fn zero_state_has_unit_amplitude_at_index_zero() {
        let s = Sv::zero(3).unwrap();
        assert_eq!(s.dim(), 8);
        assert_eq!(s.amplitude(0), c(1.0, 0.0));
        assert!((s.norm() - 1.0).abs() < 1e-15);
        assert!(Sv::zero(0).is_err());
        assert!(Sv::zero(13).is_err());
        assert!(Sv::zero_with_cap(13, 16).is_ok());
    }

    #[test]
    fn qubit_zero_is_most_significant_bit() {
        let mut s = Sv::zero(3).unwrap();
        s.apply_gate(&Gate::X(0)).unwrap();
        assert_eq!(s.amplitude(0b100), c(1.0, 0.0));

        let mut s = Sv::zero(3).unwrap();
        for q in 0..3 {
            s.apply_gate(&Gate::X(q)).unwrap();
        }
        assert_eq!(s.amplitude(7), c(1.0, 0.0));
    }

    #[test]
    fn hadamard_splits_amplitude() {
        let mut s = Sv::zero(3).unwrap();
        s.apply_gate(&Gate::H(0)).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitude(0) - c(r, 0.0)).norm() < 1e-15);
        assert!((s.amplitude(4) - c(r, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn ry_rotation_convention() {
        // Ry(theta)|0> = cos(theta/2)|0> + sin(theta/2)|1>.
        let mut s = Sv::zero(1).unwrap();
        s.apply_gate(&Gate::Ry {
            target: 0,
            angle: std::f64::consts::PI,
        })
        .unwrap();
        assert!((s.amplitude(1) - c(1.0, 0.0)).norm() < 1e-15);

        let mut s = Sv::zero(1).unwrap();
        s.apply_gate(&Gate::Ry {
            target: 0,
            angle: std::f64::consts::FRAC_PI_2,
        })
        .unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitude(0) - c(r, 0.0)).norm() < 1e-15);
        assert!((s.amplitude(1) - c(r, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn phase_gates_act_on_one_component() {
        let mut s = Sv::basis(1, 1).unwrap();
        s.apply_gate(&Gate::S(0)).unwrap();
        assert_eq!(s.amplitude(1), c(0.0, 1.0));
        s.apply_gate(&Gate::Sdg(0)).unwrap();
        assert_eq!(s.amplitude(1), c(1.0, 0.0));
        s.apply_gate(&Gate::Z(0)).unwrap();
        assert_eq!(s.amplitude(1), c(-1.0, 0.0));
    }

    #[test]
    fn cz_flips_sign_of_doubly_excited_component() {
        let mut s = Sv::basis(2, 0b11).unwrap();
        s.apply_gate(&Gate::Cz { a: 0, b: 1 }).unwrap();
        assert_eq!(s.amplitude(3), c(-1.0, 0.0));

        let mut s = Sv::basis(2, 0b10).unwrap();
        s.apply_gate(&Gate::Cz { a: 0, b: 1 }).unwrap();
        assert_eq!(s.amplitude(2), c(1.0, 0.0));
    }

    #[test]
    fn cnot_flips_target_when_control_set() {
        let mut s = Sv::basis(2, 0b10).unwrap();
        s.apply_gate(&Gate::Cnot {
            control: 0,
            target: 1,
        })
        .unwrap();
        assert_eq!(s.amplitude(0b11), c(1.0, 0.0));

        let mut s = Sv::basis(2, 0b01).unwrap();
        s.apply_gate(&Gate::Cnot {
            control: 0,
            target: 1,
        })
        .unwrap();
        assert_eq!(s.amplitude(0b01), c(1.0, 0.0));
    }

    #[test]
    fn controlled_pauli_matches_projector_assembled_matrix() {
        // Independent oracle: C-P = (I - Pi1) + Pi1 * P built from Kronecker
        // factors, with Pi1 the control-bit projector.
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let letters = [
            crate::pauli::Pauli::I,
            crate::pauli::Pauli::X,
            crate::pauli::Pauli::Y,
            crate::pauli::Pauli::Z,
        ];
        for _ in 0..50 {
            let n = rng.random_range(2..=4usize);
            let control = rng.random_range(0..n);
            let targets: Vec<usize> = (0..n).filter(|&q| q != control).collect();
            let string = PauliString::new(
                (0..targets.len())
                    .map(|_| letters[rng.random_range(0..4)])
                    .collect(),
            )
            .unwrap();

            let single = |p: crate::pauli::Pauli| {
                PauliString::new(vec![p]).unwrap().dense::<f64>().unwrap()
            };
            let proj1 = Matrix::from_rows(vec![
                vec![c(0.0, 0.0), c(0.0, 0.0)],
                vec![c(0.0, 0.0), c(1.0, 0.0)],
            ])
            .unwrap();
            let mut on_branch = Matrix::identity(1);
            let mut identity = Matrix::identity(1);
            for q in 0..n {
                let factor = if q == control {
                    proj1.clone()
                } else {
                    let pos = targets.iter().position(|&t| t == q).unwrap();
                    single(string.letters()[pos])
                };
                on_branch = on_branch.kron(&factor);
                identity = identity.kron(&Matrix::identity(2));
            }
            let mut off_branch = identity.clone();
            // off branch: identity minus the control projector times identity
            let mut proj_full = Matrix::identity(1);
            for q in 0..n {
                let factor = if q == control {
                    proj1.clone()
                } else {
                    Matrix::identity(2)
                };
                proj_full = proj_full.kron(&factor);
            }
            off_branch = off_branch.add(&proj_full.scaled(c(-1.0, 0.0))).unwrap();
            let dense = off_branch.add(&on_branch).unwrap();

            let state = random_state(n, &mut rng);
            let expected = dense.matvec(state.amplitudes()).unwrap();
            let mut applied = state.clone();
            applied
                .apply_gate(&Gate::ControlledPauli {
                    control,
                    targets: targets.clone(),
                    string: string.clone(),
                })
                .unwrap();
            for (a, e) in applied.amplitudes().iter().zip(&expected) {
                assert!((a - e).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn pauli_string_application_matches_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let letters = [
            crate::pauli::Pauli::I,
            crate::pauli::Pauli::X,
            crate::pauli::Pauli::Y,
            crate::pauli::Pauli::Z,
        ];
        for _ in 0..100 {
            let n = rng.random_range(1..=3usize);
            let string =
                PauliString::new((0..n).map(|_| letters[rng.random_range(0..4)]).collect())
                    .unwrap();
            let state = random_state(n, &mut rng);
            let expected = string
                .dense::<f64>()
                .unwrap()
                .matvec(state.amplitudes())
                .unwrap();
            let mut applied = state.clone();
            applied.apply_pauli_string(&string).unwrap();
            for (a, e) in applied.amplitudes().iter().zip(&expected) {
                assert!((a - e).norm() < 1e-12);
            }
            let direct = state.expectation_pauli_string(&string).unwrap();
            let via_dense: Complex<f64> = state
                .amplitudes()
                .iter()
                .zip(&expected)
                .map(|(a, e)| a.conj() * e)
                .sum();
            assert!((direct - via_dense).norm() < 1e-12);
        }
    }

    #[test]
    fn random_circuits_preserve_norm_and_invert() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let n = rng.random_range(1..=5usize);
            let mut circuit = Circuit::new(n);
            for _ in 0..rng.random_range(1..=30) {
                circuit.push(random_gate(n, &mut rng)).unwrap();
            }
            let initial = random_state(n, &mut rng);
            let mut state = initial.clone();
            state.apply_circuit(&circuit).unwrap();
            assert!((state.norm() - 1.0).abs() < 1e-10);
            state.apply_circuit_adjoint(&circuit).unwrap();
            let overlap = initial.inner_product(&state).unwrap();
            assert!((overlap - c(1.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn inner_product_is_conjugate_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let a = random_state(3, &mut rng);
        let b = random_state(3, &mut rng);
        let ab = a.inner_product(&b).unwrap();
        let ba = b.inner_product(&a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-14);
        assert!((a.inner_product(&a).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn expectation_of_z_on_plus_state_vanishes() {
        let mut s = Sv::zero(1).unwrap();
        s.apply_gate(&Gate::H(0)).unwrap();
        let z: PauliString = "Z".parse().unwrap();
        assert!(s.expectation_pauli_string(&z).unwrap().norm() < 1e-15);
        let s0 = Sv::zero(1).unwrap();
        assert!((s0.expectation_pauli_string(&z).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn sampling_is_deterministic_in_seed() {
        let mut s = Sv::zero(2).unwrap();
        s.apply_gate(&Gate::H(0)).unwrap();
        s.apply_gate(&Gate::H(1)).unwrap();
        let a = s.sample_counts(1000, 42).unwrap();
        let b = s.sample_counts(1000, 42).unwrap();
        let c_counts = s.sample_counts(1000, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c_counts);
        assert_eq!(a.iter().sum::<u64>(), 1000);
    }

    #[test]
    fn sampling_a_basis_state_is_exact() {
        let s = Sv::basis(3, 5).unwrap();
        let counts = s.sample_counts(1_000, 9).unwrap();
        assert_eq!(counts[5], 1_000);
        assert_eq!(counts.iter().sum::<u64>(), 1_000);
    }

    #[test]
    fn sampling_frequencies_approach_probabilities() {
        let mut s = Sv::zero(2).unwrap();
        s.apply_gate(&Gate::H(0)).unwrap();
        s.apply_gate(&Gate::H(1)).unwrap();
        let shots = 1_000_000u64;
        let counts = s.sample_counts(shots, 3).unwrap();
        for &count in &counts {
            let freq = count as f64 / shots as f64;
            assert!((freq - 0.25).abs() < 0.005, "frequency {freq}");
        }
    }

    #[test]
    fn zero_shots_rejected() {
        let s = Sv::zero(1).unwrap();
        assert!(s.sample_counts(0, 1).is_err());
    }

    #[test]
    fn from_amplitudes_requires_power_of_two() {
        let bad = vec![c(1.0, 0.0); 3];
        assert!(matches!(
            Sv::from_amplitudes(bad),
            Err(Error::NotPowerOfTwo { dim: 3 })
        ));
    }

    #[test]
    fn f32_register_smoke() {
        let mut s = Statevector::<f32>::zero(2).unwrap();
        s.apply_gate(&Gate::H(0)).unwrap();
        s.apply_gate(&Gate::H(0)).unwrap();
        assert!((s.amplitude(0).re - 1.0).abs() < 1e-6);
        assert!((s.norm() - 1.0).abs() < 1e-6);
    }
}
