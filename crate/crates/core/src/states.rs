//! Constructors for the state families used throughout the crate.
//!
//! Qubit convention: `|0⟩ = (1, 0)ᵀ`, `|1⟩ = (0, 1)ᵀ`; multi-qubit indices are
//! first-qubit major, so `|q₀ q₁ … ⟩` sits at index `q₀·2ⁿ⁻¹ + q₁·2ⁿ⁻² + …`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{kron, unitary_conjugate, ComplexMatrix, DensityMatrix, MatrixError, UnitaryMatrix};

/// Normalization tolerance for amplitude vectors and probability lists.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Largest GHZ register built by [`ghz`].
pub const MAX_GHZ_QUBITS: usize = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("not normalized: squared norm is {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },
    #[error("probability {index} is negative: {value}")]
    NegativeProbability { index: usize, value: f64 },
    #[error("ensemble needs at least one phase")]
    EmptyPhaseList,
    #[error("{what} = {value} is outside [{min}, {max}]")]
    OutOfRange { what: &'static str, value: f64, min: f64, max: f64 },
    #[error("state has no components")]
    Empty,
    #[error("non-finite value in {what}")]
    NonFinite { what: &'static str },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Unit-norm amplitude vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, StateError> {
        if amplitudes.is_empty() {
            return Err(StateError::Empty);
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(StateError::NonFinite { what: "amplitudes" });
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(StateError::NotNormalized { norm_sqr });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales `amplitudes` to unit norm. Only a zero vector is rejected.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self, StateError> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(StateError::NotNormalized { norm_sqr: norm * norm });
        }
        Self::new(amplitudes.into_iter().map(|a| a / norm).collect())
    }

    /// `√p |0⟩ + √(1-p) e^{iφ} |1⟩`.
    pub fn qubit(p0: f64, phase: f64) -> Result<Self, StateError> {
        check_probability("a1_sq", p0)?;
        Self::new(vec![Complex64::new(p0.sqrt(), 0.0), Complex64::from_polar((1.0 - p0).sqrt(), phase)])
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self, StateError> {
        if index >= dim {
            return Err(StateError::OutOfRange {
                what: "basis index",
                value: index as f64,
                min: 0.0,
                max: dim.saturating_sub(1) as f64,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Self::new(amps)
    }

    /// Equal-amplitude superposition over all `dim` basis states.
    pub fn uniform(dim: usize) -> Result<Self, StateError> {
        if dim == 0 {
            return Err(StateError::Empty);
        }
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Self::normalized(vec![a; dim])
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Tensor product of two pure states (first factor major).
    pub fn tensor(&self, other: &PureState) -> PureState {
        let amplitudes = self.amplitudes.iter().flat_map(|a| other.amplitudes.iter().map(move |b| a * b)).collect();
        PureState { amplitudes }
    }
}

impl TryFrom<Vec<Complex64>> for PureState {
    type Error = StateError;

    fn try_from(amplitudes: Vec<Complex64>) -> Result<Self, Self::Error> {
        Self::new(amplitudes)
    }
}

impl From<PureState> for Vec<Complex64> {
    fn from(psi: PureState) -> Self {
        psi.amplitudes
    }
}

fn check_probability(what: &'static str, p: f64) -> Result<(), StateError> {
    if !p.is_finite() {
        return Err(StateError::NonFinite { what });
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(StateError::OutOfRange { what, value: p, min: 0.0, max: 1.0 });
    }
    Ok(())
}

/// `ρ_ij = a_i · conj(a_j)`.
pub fn pure_density(psi: &PureState) -> DensityMatrix {
    DensityMatrix::from_trusted(ComplexMatrix::outer(&psi.amplitudes))
}

/// `diag(p_1, …, p_N)`.
pub fn diagonal_mixture(probabilities: &[f64]) -> Result<DensityMatrix, StateError> {
    if probabilities.is_empty() {
        return Err(StateError::Empty);
    }
    if probabilities.iter().any(|p| !p.is_finite()) {
        return Err(StateError::NonFinite { what: "probabilities" });
    }
    if let Some((index, &value)) = probabilities.iter().enumerate().find(|(_, &p)| p < 0.0) {
        return Err(StateError::NegativeProbability { index, value });
    }
    let total: f64 = probabilities.iter().sum();
    if (total - 1.0).abs() > NORM_TOLERANCE {
        return Err(StateError::NotNormalized { norm_sqr: total });
    }
    Ok(DensityMatrix::from_trusted(ComplexMatrix::from_real_diagonal(probabilities)))
}

/// Re-expresses a qubit density matrix in the σ_x eigenbasis.
///
/// The result is the full `H ρ H†`. Printed versions of this matrix that put
/// the conjugation on different factors in the two off-diagonal entries are
/// not Hermitian in general; the conjugation here is the one forced by `H ρ H†`.
pub fn rebasis_x(rho_z: &DensityMatrix) -> Result<DensityMatrix, StateError> {
    if rho_z.dim() != 2 {
        return Err(MatrixError::DimensionMismatch { expected: 2, found: rho_z.dim() }.into());
    }
    Ok(unitary_conjugate(rho_z, &UnitaryMatrix::hadamard())?)
}

/// `(|01⟩ − |10⟩)/√2`.
pub fn epr_singlet_state() -> PureState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let zero = Complex64::new(0.0, 0.0);
    PureState { amplitudes: vec![zero, Complex64::new(h, 0.0), Complex64::new(-h, 0.0), zero] }
}

/// Density matrix of the singlet: `½ [[0,0,0,0],[0,1,-1,0],[0,-1,1,0],[0,0,0,0]]`.
pub fn epr_singlet() -> DensityMatrix {
    pure_density(&epr_singlet_state())
}

/// `(|0…0⟩ + |1…1⟩)/√2` on `n_qubits` qubits, `2 <= n_qubits <= 6`.
pub fn ghz_state(n_qubits: usize) -> Result<PureState, StateError> {
    if !(2..=MAX_GHZ_QUBITS).contains(&n_qubits) {
        return Err(StateError::OutOfRange {
            what: "n_qubits",
            value: n_qubits as f64,
            min: 2.0,
            max: MAX_GHZ_QUBITS as f64,
        });
    }
    let dim = 1usize << n_qubits;
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
    amplitudes[0] = h;
    amplitudes[dim - 1] = h;
    Ok(PureState { amplitudes })
}

pub fn ghz(n_qubits: usize) -> Result<DensityMatrix, StateError> {
    Ok(pure_density(&ghz_state(n_qubits)?))
}

/// `n` identical photons `a₁|0⟩ + a₂ e^{-iφ_k}|1⟩` with individual phases.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    a1: f64,
    a2: f64,
    phases: Vec<f64>,
}

impl EnsembleSpec {
    pub fn new(a1: f64, a2: f64, phases: Vec<f64>) -> Result<Self, StateError> {
        for (what, a) in [("a1", a1), ("a2", a2)] {
            if !a.is_finite() {
                return Err(StateError::NonFinite { what });
            }
            if a < 0.0 {
                return Err(StateError::OutOfRange { what, value: a, min: 0.0, max: 1.0 });
            }
        }
        let norm_sqr = a1 * a1 + a2 * a2;
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(StateError::NotNormalized { norm_sqr });
        }
        if phases.is_empty() {
            return Err(StateError::EmptyPhaseList);
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(StateError::NonFinite { what: "phases" });
        }
        Ok(Self { a1, a2, phases })
    }

    /// Builds from the first-level probability `a₁²`.
    pub fn from_probability(a1_sq: f64, phases: Vec<f64>) -> Result<Self, StateError> {
        check_probability("a1_sq", a1_sq)?;
        Self::new(a1_sq.sqrt(), (1.0 - a1_sq).sqrt(), phases)
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn members(&self) -> usize {
        self.phases.len()
    }
}

/// `(1/n) Σ_k ρ_k` with `ρ_k = [[a₁², a₁a₂e^{iφ_k}], [a₁a₂e^{-iφ_k}, a₂²]]`.
pub fn ensemble_density(spec: &EnsembleSpec) -> DensityMatrix {
    let n = spec.phases.len() as f64;
    let phase_sum: Complex64 = spec.phases.iter().map(|&p| Complex64::from_polar(1.0, p)).sum();
    let off = phase_sum * (spec.a1 * spec.a2 / n);
    let m = ComplexMatrix::new(
        2,
        2,
        vec![Complex64::new(spec.a1 * spec.a1, 0.0), off, off.conj(), Complex64::new(spec.a2 * spec.a2, 0.0)],
    )
    .expect("finite 2x2");
    DensityMatrix::from_trusted(m)
}

/// Compound state `ρ_a ⊗ ρ_b`.
pub fn product(rho_a: &DensityMatrix, rho_b: &DensityMatrix) -> DensityMatrix {
    kron(rho_a, rho_b)
}
