//! Measurement model: diagonal apparatus, reduction of the measured system,
//! outcome sampling and the which-way interferometer.
//!
//! A measurement is read as an exclusion rule. When an apparatus outcome
//! is ruled out after the measurement, the [`ReductionMap`] says which system
//! amplitudes are ruled out with it; those are set to zero and the rest is
//! renormalized. A quantum eraser is the case where the apparatus collapses
//! but the system amplitudes are left alone.

use std::collections::BTreeSet;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::matrix::{kron, DensityMatrix};
use crate::measures::{
    interaction_information, is_diagonal, surplus_knowledge, InformationReport, CLASSICALITY_THRESHOLD,
    DEFAULT_CLASSIFY_TOLERANCE,
};
use crate::states::{diagonal_mixture, pure_density, PureState, StateError, NORM_TOLERANCE};

/// Squared amplitudes below this count as already excluded.
const ZERO_AMPLITUDE_SQR: f64 = 1e-24;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasurementError {
    #[error("every system amplitude is excluded; the measurement is not fruitful")]
    AllAmplitudesExcluded,
    #[error("reduction map entry for outcome {outcome} names system index {index} outside 0..{system_dim}")]
    InvalidMap { outcome: usize, index: usize, system_dim: usize },
    #[error("apparatus outcome {outcome} is not one of the {outcomes} outcomes")]
    InvalidOutcome { outcome: usize, outcomes: usize },
    #[error("system has dimension {found}, reduction map expects {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("apparatus probabilities {alpha_sq} + {beta_sq} do not sum to one")]
    ApparatusNotNormalized { alpha_sq: f64, beta_sq: f64 },
    #[error(transparent)]
    State(#[from] StateError),
}

/// A 64-bit seed plus a stream index. Splitting derives independent streams,
/// so concurrent work can draw reproducibly regardless of scheduling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedStream {
    seed: u64,
    stream: u64,
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        Self { seed, stream: 0 }
    }

    pub fn split(&self, index: u64) -> Self {
        Self { seed: splitmix64(self.seed ^ splitmix64(self.stream)), stream: index }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// For each apparatus outcome, the system indices ruled out when that
/// outcome is ruled out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionMap {
    correlations: Vec<BTreeSet<usize>>,
    system_dim: usize,
}

impl ReductionMap {
    pub fn new(correlations: Vec<BTreeSet<usize>>, system_dim: usize) -> Result<Self, MeasurementError> {
        for (outcome, set) in correlations.iter().enumerate() {
            if let Some(&index) = set.iter().find(|&&i| i >= system_dim) {
                return Err(MeasurementError::InvalidMap { outcome, index, system_dim });
            }
        }
        Ok(Self { correlations, system_dim })
    }

    /// Two-way interferometer: ruling out way 2 (β) rules out the photon's
    /// first amplitude, ruling out way 1 (α) rules out the second.
    pub fn interferometer() -> Self {
        Self { correlations: vec![BTreeSet::from([1]), BTreeSet::from([0])], system_dim: 2 }
    }

    /// Apparatus reading the first qubit of an `n_qubits` register: ruling out
    /// reading `j` rules out every basis state whose first qubit is `j`.
    pub fn first_qubit(n_qubits: u32) -> Self {
        let dim = 1usize << n_qubits;
        let half = dim / 2;
        Self { correlations: vec![(0..half).collect(), (half..dim).collect()], system_dim: dim }
    }

    pub fn outcomes(&self) -> usize {
        self.correlations.len()
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    /// Union of the system indices tied to `excluded` apparatus outcomes.
    pub fn excluded_system_indices(&self, excluded: &BTreeSet<usize>) -> Result<BTreeSet<usize>, MeasurementError> {
        let mut out = BTreeSet::new();
        for &outcome in excluded {
            let set = self
                .correlations
                .get(outcome)
                .ok_or(MeasurementError::InvalidOutcome { outcome, outcomes: self.outcomes() })?;
            out.extend(set.iter().copied());
        }
        Ok(out)
    }

    /// Every single observed outcome leaves at least one system index alive.
    pub fn is_fruitful(&self) -> bool {
        (0..self.outcomes()).all(|observed| {
            let others = (0..self.outcomes()).filter(|&k| k != observed).collect();
            self.excluded_system_indices(&others).map(|set| set.len() < self.system_dim).unwrap_or(false)
        })
    }
}

/// `true` when `rho_m` is diagonal and so can serve as an apparatus. A sharp
/// pointer such as `diag(1, 0)` qualifies, though it cannot be fruitful.
pub fn check_apparatus(rho_m: &DensityMatrix) -> bool {
    is_diagonal(rho_m, DEFAULT_CLASSIFY_TOLERANCE)
}

/// Draws a basis index with the probabilities on the diagonal of `rho`.
pub fn sample_outcome<R: Rng + ?Sized>(rho: &DensityMatrix, rng: &mut R) -> usize {
    let weights: Vec<f64> = rho.diagonal().into_iter().map(|p| p.max(0.0)).collect();
    WeightedIndex::new(&weights).expect("unit trace leaves a positive weight").sample(rng)
}

/// Zeroes the amplitudes tied to the `excluded` apparatus outcomes and
/// renormalizes what is left.
pub fn apply_reduction(
    psi: &PureState,
    map: &ReductionMap,
    excluded: &BTreeSet<usize>,
) -> Result<PureState, MeasurementError> {
    if psi.dim() != map.system_dim {
        return Err(MeasurementError::DimensionMismatch { expected: map.system_dim, found: psi.dim() });
    }
    let dropped = map.excluded_system_indices(excluded)?;
    if dropped.len() == psi.dim() {
        return Err(MeasurementError::AllAmplitudesExcluded);
    }
    let amps: Vec<_> =
        psi.amplitudes().iter().enumerate().map(|(i, &a)| if dropped.contains(&i) { a * 0.0 } else { a }).collect();
    let remaining: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if remaining <= ZERO_AMPLITUDE_SQR {
        return Err(MeasurementError::AllAmplitudesExcluded);
    }
    Ok(PureState::normalized(amps)?)
}

/// Reduction after reading `observed`: every other outcome is ruled out.
pub fn reduce_on_outcome(psi: &PureState, map: &ReductionMap, observed: usize) -> Result<PureState, MeasurementError> {
    if observed >= map.outcomes() {
        return Err(MeasurementError::InvalidOutcome { outcome: observed, outcomes: map.outcomes() });
    }
    let excluded = (0..map.outcomes()).filter(|&k| k != observed).collect();
    apply_reduction(psi, map, &excluded)
}

/// A photon sent through a two-way interferometer with way probabilities
/// `α²` and `β²`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferometerScenario {
    photon: PureState,
    alpha_sq: f64,
    beta_sq: f64,
    eraser: bool,
    map: ReductionMap,
}

impl InterferometerScenario {
    pub fn new(photon: PureState, alpha_sq: f64, beta_sq: f64, eraser: bool) -> Result<Self, MeasurementError> {
        if photon.dim() != 2 {
            return Err(MeasurementError::DimensionMismatch { expected: 2, found: photon.dim() });
        }
        let in_range = |p: f64| p.is_finite() && (0.0..=1.0).contains(&p);
        if !in_range(alpha_sq) || !in_range(beta_sq) || (alpha_sq + beta_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(MeasurementError::ApparatusNotNormalized { alpha_sq, beta_sq });
        }
        Ok(Self { photon, alpha_sq, beta_sq, eraser, map: ReductionMap::interferometer() })
    }

    /// Replaces the default way-to-amplitude pairing.
    pub fn with_reduction_map(mut self, map: ReductionMap) -> Result<Self, MeasurementError> {
        if map.system_dim != 2 || map.outcomes() != 2 {
            return Err(MeasurementError::DimensionMismatch { expected: 2, found: map.system_dim });
        }
        self.map = map;
        Ok(self)
    }

    pub fn photon(&self) -> &PureState {
        &self.photon
    }

    pub fn alpha_sq(&self) -> f64 {
        self.alpha_sq
    }

    pub fn beta_sq(&self) -> f64 {
        self.beta_sq
    }

    pub fn eraser(&self) -> bool {
        self.eraser
    }

    pub fn reduction_map(&self) -> &ReductionMap {
        &self.map
    }

    pub fn apparatus(&self) -> DensityMatrix {
        diagonal_mixture(&[self.alpha_sq, self.beta_sq]).expect("validated at construction")
    }
}

/// Compound state before the photon is read out, with its information values.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferometerBefore {
    /// `ρ_M ⊗ ρ_S`: one photon block per way, weighted by `α²` and `β²`.
    pub compound: DensityMatrix,
    /// `2 (α⁴ + β⁴)`.
    pub i_q_i: f64,
    /// `4 (α⁴ + β⁴) |a₁a₂|²`.
    pub k_q_i: f64,
}

pub fn interferometer_before(s: &InterferometerScenario) -> InterferometerBefore {
    let photon = pure_density(&s.photon);
    let apparatus = s.apparatus();
    let compound = kron(&apparatus, &photon);
    let k_q_i = surplus_knowledge(&compound);
    InterferometerBefore { i_q_i: interaction_information(&photon, &apparatus), k_q_i, compound }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub outcome_index: usize,
    pub pre_state: DensityMatrix,
    pub post_state: DensityMatrix,
    pub post_system: PureState,
    pub pre_report: InformationReport,
    pub post_report: InformationReport,
    /// Every photon amplitude tied to a ruled-out way is zero afterwards.
    pub reduction_respected: bool,
}

/// Reads out which way the photon took.
///
/// The way is drawn from `diag(α², β²)` and the apparatus collapses onto it.
/// Without an eraser the other way is ruled out and the reduction map is
/// applied to the photon; a photon that already has a single nonzero
/// amplitude has nothing left to reduce and passes through unchanged. With an
/// eraser the photon is never reduced. Both compounds are laid out
/// apparatus-major, matching [`interferometer_before`].
pub fn measure_which_way<R: Rng + ?Sized>(
    s: &InterferometerScenario,
    rng: &mut R,
) -> Result<MeasurementRecord, MeasurementError> {
    let before = interferometer_before(s);
    let outcome = sample_outcome(&s.apparatus(), rng);
    let excluded: BTreeSet<usize> = (0..2).filter(|&k| k != outcome).collect();

    let live = s.photon.amplitudes().iter().filter(|a| a.norm_sqr() > ZERO_AMPLITUDE_SQR).count();
    let post_system =
        if s.eraser || live < 2 { s.photon.clone() } else { apply_reduction(&s.photon, &s.map, &excluded)? };

    let dropped = s.map.excluded_system_indices(&excluded)?;
    let reduction_respected = dropped.iter().all(|&i| post_system.amplitudes()[i].norm_sqr() <= ZERO_AMPLITUDE_SQR);

    let collapsed = pure_density(&PureState::basis(2, outcome)?);
    let post_state = kron(&collapsed, &pure_density(&post_system));
    Ok(MeasurementRecord {
        outcome_index: outcome,
        pre_report: InformationReport::of(&before.compound),
        post_report: InformationReport::of(&post_state),
        pre_state: before.compound,
        post_state,
        post_system,
        reduction_respected,
    })
}

/// The readout counts as complete once the post-measurement surplus is
/// below one bit.
pub fn is_measurement_complete(record: &MeasurementRecord) -> bool {
    record.post_report.k_q < CLASSICALITY_THRESHOLD
}
