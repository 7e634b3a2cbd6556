//! Random-phase ensembles: how coherence disappears as members are added.

use std::f64::consts::TAU;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::measurement::SeedStream;
use crate::measures::{quantum_information, surplus_knowledge};
use crate::states::{ensemble_density, EnsembleSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepStatistics {
    pub a1_sq: f64,
    pub spread: f64,
    pub n_members: usize,
    pub trials: usize,
    pub seed: u64,
    pub mean_i_q: f64,
    pub mean_k_q: f64,
    pub std_i_q: f64,
    pub std_k_q: f64,
    /// Expected `I_Q − (a₁⁴ + a₂⁴)` for fully random phases: `2a₁²a₂²/n`.
    pub theoretical_mean_excess: f64,
}

/// Builds `trials` ensembles of `n_members` photons with phases drawn
/// uniformly from `[0, 2π·spread)` and aggregates `I_Q` and `K_Q`.
///
/// Trial `t` draws from `SeedStream::new(seed).split(t)`, so the result does
/// not depend on how trials are scheduled.
pub fn decoherence_sweep(
    a1_sq: f64,
    n_members: usize,
    trials: usize,
    seed: u64,
    spread: f64,
) -> Result<SweepStatistics, HarnessError> {
    if !(a1_sq.is_finite() && (0.0..=1.0).contains(&a1_sq)) {
        return Err(HarnessError::bad("a1_sq", "must lie in [0, 1]"));
    }
    if n_members == 0 {
        return Err(HarnessError::bad("n", "need at least one member"));
    }
    if trials == 0 {
        return Err(HarnessError::bad("trials", "need at least one trial"));
    }
    if !(spread.is_finite() && (0.0..=1.0).contains(&spread)) {
        return Err(HarnessError::bad("spread", "must lie in [0, 1]"));
    }

    let root = SeedStream::new(seed);
    let samples: Vec<(f64, f64)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = root.split(t).rng();
            let phases = (0..n_members).map(|_| spread * TAU * rng.gen::<f64>()).collect();
            let spec = EnsembleSpec::from_probability(a1_sq, phases).expect("validated above");
            let rho = ensemble_density(&spec);
            (quantum_information(&rho), surplus_knowledge(&rho))
        })
        .collect();

    let (mean_i_q, std_i_q) = mean_std(samples.iter().map(|s| s.0));
    let (mean_k_q, std_k_q) = mean_std(samples.iter().map(|s| s.1));
    let a2_sq = 1.0 - a1_sq;
    Ok(SweepStatistics {
        a1_sq,
        spread,
        n_members,
        trials,
        seed,
        mean_i_q,
        mean_k_q,
        std_i_q,
        std_k_q,
        theoretical_mean_excess: 2.0 * a1_sq * a2_sq / n_members as f64,
    })
}

/// Mean and sample standard deviation; the deviation is zero for one sample.
fn mean_std(xs: impl ExactSizeIterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.clone().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
