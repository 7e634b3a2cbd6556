//! Information content of a density matrix, in bits.
//!
//! With `C = log₂ N` for an N-dimensional state:
//!
//! * quantum information `I_Q = C · tr ρ²`
//! * classical part `Ĩ_Q = C · tr ρ̃²`, where `ρ̃` keeps only the diagonal
//! * surplus knowledge `K_Q = C · tr (ρ − ρ̃)²`, the off-diagonal share
//!
//! Since `tr(ρ ρ̃) = tr ρ̃²`, the split `I_Q = Ĩ_Q + K_Q` holds for every
//! state. `I_Q` is invariant under unitary conjugation; `K_Q` and `Ĩ_Q`
//! depend on the basis the matrix is written in.
//!
//! `I_Q` is bounded below by `C / N` (uniform mixture), so the value 0 is
//! never reached.

use serde::{Deserialize, Serialize};

use crate::matrix::{diagonal_part, kron, trace, DensityMatrix};

/// Default tolerance for [`classify`].
pub const DEFAULT_CLASSIFY_TOLERANCE: f64 = 1e-9;

/// Surplus knowledge at or above this many bits is not classical.
pub const CLASSICALITY_THRESHOLD: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    /// `ρ² = ρ`.
    Type1Pure,
    /// No off-diagonal entries: an ensemble with fixed but unknown values.
    Type2Diagonal,
    Intermediate,
}

/// All information quantities of one state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InformationReport {
    pub capacity_c: f64,
    pub i_q: f64,
    pub i_tilde: f64,
    pub k_q: f64,
    pub purity: f64,
    pub classification: Classification,
    pub is_classical: bool,
}

impl InformationReport {
    pub fn of(rho: &DensityMatrix) -> Self {
        Self {
            capacity_c: total_capacity(rho.dim()),
            i_q: quantum_information(rho),
            i_tilde: classical_information(rho),
            k_q: surplus_knowledge(rho),
            purity: rho.purity(),
            classification: classify(rho, DEFAULT_CLASSIFY_TOLERANCE),
            is_classical: is_classical(rho),
        }
    }
}

/// `C = log₂ N`.
pub fn total_capacity(n_dim: usize) -> f64 {
    assert!(n_dim >= 1, "dimension must be positive");
    (n_dim as f64).log2()
}

/// `I_Q = C · tr ρ²`.
pub fn quantum_information(rho: &DensityMatrix) -> f64 {
    total_capacity(rho.dim()) * rho.purity()
}

/// `Ĩ_Q = C · Σ_i ρ_ii²`.
pub fn classical_information(rho: &DensityMatrix) -> f64 {
    total_capacity(rho.dim()) * rho.diagonal().iter().map(|p| p * p).sum::<f64>()
}

/// `K_Q = C · tr (ρ − ρ̃)²`, computed from the squared off-diagonal matrix.
pub fn surplus_knowledge(rho: &DensityMatrix) -> f64 {
    let off = rho.matrix().sub(diagonal_part(rho).matrix()).expect("same shape");
    let sq = off.matmul(&off).expect("square");
    total_capacity(rho.dim()) * trace(&sq).expect("square").re
}

/// `I_Q^I = (C_S + C_M) · tr (ρ_S ⊗ ρ_M)²`.
pub fn interaction_information(rho_s: &DensityMatrix, rho_m: &DensityMatrix) -> f64 {
    let compound = kron(rho_s, rho_m);
    (total_capacity(rho_s.dim()) + total_capacity(rho_m.dim())) * compound.purity()
}

/// Pure if `ρ² = ρ`, diagonal if every off-diagonal entry vanishes, both
/// within `tolerance`. A pure basis state counts as pure.
pub fn classify(rho: &DensityMatrix, tolerance: f64) -> Classification {
    let sq = rho.matrix().matmul(rho.matrix()).expect("square");
    if sq.max_abs_diff(rho.matrix()) <= tolerance {
        return Classification::Type1Pure;
    }
    if is_diagonal(rho, tolerance) {
        Classification::Type2Diagonal
    } else {
        Classification::Intermediate
    }
}

/// Every off-diagonal entry has modulus at most `tolerance`.
pub fn is_diagonal(rho: &DensityMatrix, tolerance: f64) -> bool {
    let n = rho.dim();
    (0..n).all(|i| (0..n).all(|j| i == j || rho.get(i, j).norm() <= tolerance))
}

/// `K_Q < 1` (strict). A state at exactly one bit of surplus, such as the
/// singlet, is not classical.
pub fn is_classical(rho: &DensityMatrix) -> bool {
    surplus_knowledge(rho) < CLASSICALITY_THRESHOLD
}

/// `n (1 − 2⁻ⁿ)`: surplus of `n` qubits with all outcomes equally likely.
pub fn max_surplus(n_qubits: u32) -> f64 {
    assert!(n_qubits >= 1, "need at least one qubit");
    let n = f64::from(n_qubits);
    n * (1.0 - 0.5f64.powi(n_qubits as i32))
}
