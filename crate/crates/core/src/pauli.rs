//! Pauli string algebra: parsing, products, dense oracles and operator
//! decomposition.
//!
//! A Pauli string is a permutation-with-phase operator: it maps basis state
//! `|j>` to `phase(j) |j ^ x_mask>`. Every routine here works off that fact,
//! so traces and matrix actions never materialize the 2^n x 2^n operator
//! unless a dense oracle is explicitly requested.
//!
//! Qubit 0 is the most significant bit of a basis index throughout.

use std::fmt;
use std::str::FromStr;

use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::scalar::{Complex, Scalar};

/// Hard cap for dense-oracle and decomposition routines (4^n enumeration).
pub const MAX_DECOMPOSE_QUBITS: usize = 8;

/// Default magnitude below which decomposition coefficients are dropped.
pub const DEFAULT_PRUNE_TOL: f64 = 1e-12;

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn to_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    /// Product of two letters as (quarter turns of i, resulting letter).
    fn product(self, rhs: Self) -> (u32, Self) {
        use Pauli::*;
        match (self, rhs) {
            (I, p) | (p, I) => (0, p),
            (X, X) | (Y, Y) | (Z, Z) => (0, I),
            (X, Y) => (1, Z),
            (Y, X) => (3, Z),
            (Y, Z) => (1, X),
            (Z, Y) => (3, X),
            (Z, X) => (1, Y),
            (X, Z) => (3, Y),
        }
    }
}

/// Unit phase `i^k`, the only phases Pauli products can produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    PlusOne,
    PlusI,
    MinusOne,
    MinusI,
}

impl Phase {
    pub fn from_quarter_turns(k: u32) -> Self {
        match k % 4 {
            0 => Phase::PlusOne,
            1 => Phase::PlusI,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    pub fn to_complex<T: Scalar>(self) -> Complex<T> {
        let (re, im) = match self {
            Phase::PlusOne => (1.0, 0.0),
            Phase::PlusI => (0.0, 1.0),
            Phase::MinusOne => (-1.0, 0.0),
            Phase::MinusI => (0.0, -1.0),
        };
        Complex::new(T::from_f64_lossy(re), T::from_f64_lossy(im))
    }
}

fn unit_phase<T: Scalar>(quarter_turns: u32) -> Complex<T> {
    Phase::from_quarter_turns(quarter_turns).to_complex()
}

/// Tensor product of Pauli letters, one per qubit, index 0 first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::PauliParse {
                text: String::new(),
                reason: "string must cover at least one qubit",
            });
        }
        Ok(Self { letters })
    }

    /// All-identity string on `n` qubits.
    pub fn identity(n: usize) -> Self {
        Self {
            letters: vec![Pauli::I; n],
        }
    }

    /// Single `Z` on qubit `l`, identity elsewhere.
    pub fn single_z(n: usize, l: usize) -> Result<Self> {
        if l >= n {
            return Err(Error::QubitIndexOutOfRange {
                index: l,
                n_qubits: n,
            });
        }
        let mut letters = vec![Pauli::I; n];
        letters[l] = Pauli::Z;
        Ok(Self { letters })
    }

    /// `Z` on every qubit in `qubits`, identity elsewhere.
    pub fn z_subset(n: usize, qubits: &[usize]) -> Result<Self> {
        let mut letters = vec![Pauli::I; n];
        for &q in qubits {
            if q >= n {
                return Err(Error::QubitIndexOutOfRange {
                    index: q,
                    n_qubits: n,
                });
            }
            letters[q] = Pauli::Z;
        }
        Ok(Self { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I)
    }

    pub fn y_count(&self) -> usize {
        self.letters.iter().filter(|&&p| p == Pauli::Y).count()
    }

    /// True when the string is a real matrix (even number of `Y` letters).
    pub fn is_real_valued(&self) -> bool {
        self.y_count() % 2 == 0
    }

    /// Product `self * rhs` as a global phase and a new string.
    pub fn multiply(&self, rhs: &Self) -> Result<(Phase, Self)> {
        if self.len() != rhs.len() {
            return Err(Error::SizeMismatch {
                context: "pauli product length",
                left: self.len(),
                right: rhs.len(),
            });
        }
        let mut turns = 0u32;
        let mut letters = Vec::with_capacity(self.len());
        for (&a, &b) in self.letters.iter().zip(&rhs.letters) {
            let (t, p) = a.product(b);
            turns += t;
            letters.push(p);
        }
        Ok((Phase::from_quarter_turns(turns), Self { letters }))
    }

    /// Dense matrix oracle. Capped at [`MAX_DECOMPOSE_QUBITS`].
    pub fn dense<T: Scalar>(&self) -> Result<Matrix<Complex<T>>> {
        let n = self.len();
        if n > MAX_DECOMPOSE_QUBITS {
            return Err(Error::QubitCountOutOfRange {
                n,
                min: 1,
                max: MAX_DECOMPOSE_QUBITS,
            });
        }
        let dim = 1usize << n;
        let masks = MaskedPauli::full_register(self);
        let mut m = Matrix::zeros(dim, dim);
        for j in 0..dim {
            let phase = unit_phase::<T>(masks.phase_quarter_turns(j));
            m[(j ^ masks.x_mask, j)] = phase;
        }
        Ok(m)
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::PauliParse {
                text: s.into(),
                reason: "empty string",
            });
        }
        s.chars()
            .map(|c| {
                Pauli::from_char(c).ok_or(Error::PauliParse {
                    text: s.into(),
                    reason: "letters must be one of I, X, Y, Z",
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(|letters| Self { letters })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.letters {
            write!(f, "{}", p.to_char())?;
        }
        Ok(())
    }
}

/// Bit masks describing a Pauli string's action on basis indices of an
/// `n_qubits` register, with the string letters placed on `targets`.
///
/// `phase_quarter_turns(j)` gives `k` with `P|j> = i^k |j ^ x_mask>`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct MaskedPauli {
    pub x_mask: usize,
    y_mask: usize,
    z_mask: usize,
    y_count: u32,
}

impl MaskedPauli {
    pub fn new(string: &PauliString, targets: &[usize], n_qubits: usize) -> Result<Self> {
        if string.len() != targets.len() {
            return Err(Error::SizeMismatch {
                context: "pauli targets",
                left: string.len(),
                right: targets.len(),
            });
        }
        let mut x_mask = 0usize;
        let mut y_mask = 0usize;
        let mut z_mask = 0usize;
        for (&p, &q) in string.letters.iter().zip(targets) {
            if q >= n_qubits {
                return Err(Error::QubitIndexOutOfRange {
                    index: q,
                    n_qubits,
                });
            }
            let bit = 1usize << (n_qubits - 1 - q);
            match p {
                Pauli::I => {}
                Pauli::X => x_mask |= bit,
                Pauli::Y => {
                    x_mask |= bit;
                    y_mask |= bit;
                }
                Pauli::Z => z_mask |= bit,
            }
        }
        Ok(Self {
            x_mask,
            y_mask,
            z_mask,
            y_count: y_mask.count_ones(),
        })
    }

    pub fn full_register(string: &PauliString) -> Self {
        let n = string.len();
        let targets: Vec<usize> = (0..n).collect();
        Self::new(string, &targets, n).expect("full-register masks are always valid")
    }

    /// `i` exponent of the amplitude factor for source basis index `j`.
    ///
    /// Per letter: Y contributes `i` when its bit of `j` is 0 and `-i` when 1;
    /// Z contributes `-1` when its bit is 1.
    pub fn phase_quarter_turns(&self, j: usize) -> u32 {
        let y_on = (j & self.y_mask).count_ones();
        let y_off = self.y_count - y_on;
        let z_on = (j & self.z_mask).count_ones();
        (y_off + 3 * y_on + 2 * z_on) % 4
    }
}

/// One weighted string of a linear combination of unitaries.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm<T: Scalar> {
    pub coefficient: Complex<T>,
    pub string: PauliString,
}

/// Operator expressed as a sum of weighted Pauli strings.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliDecomposition<T: Scalar> {
    n_qubits: usize,
    terms: Vec<PauliTerm<T>>,
}

impl<T: Scalar> PauliDecomposition<T> {
    /// Validates string lengths and rejects duplicate strings.
    pub fn new(n_qubits: usize, terms: Vec<PauliTerm<T>>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::QubitCountOutOfRange {
                n: 0,
                min: 1,
                max: MAX_DECOMPOSE_QUBITS,
            });
        }
        for term in &terms {
            if term.string.len() != n_qubits {
                return Err(Error::SizeMismatch {
                    context: "decomposition term length",
                    left: term.string.len(),
                    right: n_qubits,
                });
            }
        }
        for (i, a) in terms.iter().enumerate() {
            for b in terms.iter().skip(i + 1) {
                if a.string == b.string {
                    return Err(Error::InvalidArgument(format!(
                        "duplicate Pauli string {} in decomposition",
                        a.string
                    )));
                }
            }
        }
        Ok(Self { n_qubits, terms })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm<T>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every string is a real-valued matrix; with real coefficients
    /// this makes the represented operator real.
    pub fn all_strings_real(&self) -> bool {
        self.terms.iter().all(|t| t.string.is_real_valued())
    }

    pub fn all_coefficients_real(&self, tol: T) -> bool {
        self.terms.iter().all(|t| t.coefficient.im.abs() <= tol)
    }

    /// Projects a dense operator onto the Pauli basis.
    ///
    /// Coefficients are `tr(P A) / 2^n`, computed through the permutation
    /// structure of each string: only the 2^n entries `A[j, j ^ x_mask]`
    /// contribute. Terms with magnitude at most `tolerance` are dropped.
    /// Enumeration order (I, X, Y, Z per qubit, qubit 0 slowest) fixes the
    /// term order deterministically.
    pub fn decompose(matrix: &Matrix<Complex<T>>, tolerance: T) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::SizeMismatch {
                context: "decompose requires square matrix",
                left: matrix.rows(),
                right: matrix.cols(),
            });
        }
        let dim = matrix.rows();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo { dim });
        }
        let n = dim.trailing_zeros() as usize;
        if n > MAX_DECOMPOSE_QUBITS {
            return Err(Error::QubitCountOutOfRange {
                n,
                min: 1,
                max: MAX_DECOMPOSE_QUBITS,
            });
        }
        if tolerance < T::zero() {
            return Err(Error::InvalidArgument(
                "pruning tolerance must be non-negative".into(),
            ));
        }
        let letters_for = |code: usize| match code {
            0 => Pauli::I,
            1 => Pauli::X,
            2 => Pauli::Y,
            _ => Pauli::Z,
        };
        let inv_dim = T::one() / T::from_usize(dim).unwrap();
        let mut terms = Vec::new();
        for string_index in 0..(1usize << (2 * n)) {
            let mut letters = vec![Pauli::I; n];
            for (q, letter) in letters.iter_mut().enumerate() {
                let shift = 2 * (n - 1 - q);
                *letter = letters_for((string_index >> shift) & 0b11);
            }
            let string = PauliString { letters };
            let masks = MaskedPauli::full_register(&string);
            let mut trace = Complex::new(T::zero(), T::zero());
            for j in 0..dim {
                // tr(P A) = sum_j P[j ^ x, j] * A[j, j ^ x]
                let p = unit_phase::<T>(masks.phase_quarter_turns(j));
                trace += p * matrix[(j, j ^ masks.x_mask)];
            }
            let coefficient = trace * inv_dim;
            if coefficient.norm() > tolerance {
                terms.push(PauliTerm {
                    coefficient,
                    string,
                });
            }
        }
        Ok(Self { n_qubits: n, terms })
    }

    /// Dense matrix of the represented operator.
    pub fn reconstruct(&self) -> Result<Matrix<Complex<T>>> {
        if self.n_qubits > MAX_DECOMPOSE_QUBITS {
            return Err(Error::QubitCountOutOfRange {
                n: self.n_qubits,
                min: 1,
                max: MAX_DECOMPOSE_QUBITS,
            });
        }
        let dim = 1usize << self.n_qubits;
        let mut m = Matrix::zeros(dim, dim);
        for term in &self.terms {
            let masks = MaskedPauli::full_register(&term.string);
            for j in 0..dim {
                let p = unit_phase::<T>(masks.phase_quarter_turns(j));
                m[(j ^ masks.x_mask, j)] += term.coefficient * p;
            }
        }
        Ok(m)
    }

    /// Sum of squared coefficient magnitudes; equals `||A||_F^2 / 2^n` when
    /// nothing was pruned (Pauli strings are an orthogonal basis).
    pub fn coefficient_power(&self) -> T {
        self.terms
            .iter()
            .map(|t| t.coefficient.norm_sqr())
            .fold(T::zero(), |acc, e| acc + e)
    }
}
