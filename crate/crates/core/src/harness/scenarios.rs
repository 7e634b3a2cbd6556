//! Named, parameterized scenarios. Each one builds its states, reports the
//! information values and records closed-form expressions next to the
//! matrix-level numbers they should match.

use std::collections::BTreeMap;

use super::{HarnessError, ScenarioResult};
use crate::matrix::{diagonalizing_unitary_for_pure, partial_trace, unitary_conjugate, Subsystem};
use crate::measurement::{
    interferometer_before, is_measurement_complete, measure_which_way, reduce_on_outcome, InterferometerScenario,
    ReductionMap, SeedStream,
};
use crate::measures::{interaction_information, max_surplus, quantum_information, total_capacity, InformationReport};
use crate::states::{
    diagonal_mixture, ensemble_density, epr_singlet, epr_singlet_state, ghz_state, product, pure_density, rebasis_x,
    EnsembleSpec, PureState,
};

/// Tolerance for closed-form checks.
const EXACT: f64 = 1e-12;

/// Largest ensemble for the `ensemble` scenario; its closed form is a double sum.
const MAX_ENSEMBLE_MEMBERS: usize = 2000;

/// Registered scenarios with a one-line description.
pub const SCENARIOS: &[(&str, &str)] = &[
    ("single-photon", "one qubit in the measurement basis and in its own eigenbasis (a1_sq, phase)"),
    ("rebasis", "one qubit written in the sigma_z and sigma_x eigenbases (a1_sq, phase)"),
    ("product-pair", "product of two photons (a1_sq, phase_a, b1_sq, phase_b)"),
    ("max-surplus", "equal-amplitude state of n qubits (n)"),
    ("epr", "singlet pair and a readout of the first qubit (outcome)"),
    ("ghz", "GHZ state of n qubits and a readout of the first qubit (n, outcome)"),
    ("ensemble", "n photons with phases k * phase_step (a1_sq, n, phase_step)"),
    ("two-photon-ensemble", "two photons with relative phase phi (a1_sq, phi)"),
    ("interferometer", "photon and two-way apparatus before readout (alpha_sq, a1_sq, phase)"),
    ("which-way", "sampled which-way readout with reduction (alpha_sq, a1_sq, phase; seeded)"),
    ("eraser", "sampled which-way readout without reduction (alpha_sq, a1_sq, phase; seeded)"),
    ("interaction-cases", "pure/pure, diagonal/diagonal and pure/diagonal compounds (a1_sq, b1_sq, alpha_sq)"),
];

/// Reads parameters with defaults and rejects any key nobody asked for.
struct Params<'a> {
    given: &'a BTreeMap<String, f64>,
    resolved: BTreeMap<String, f64>,
}

impl<'a> Params<'a> {
    fn new(given: &'a BTreeMap<String, f64>) -> Self {
        Self { given, resolved: BTreeMap::new() }
    }

    fn real(&mut self, key: &str, default: f64) -> Result<f64, HarnessError> {
        let v = self.given.get(key).copied().unwrap_or(default);
        if !v.is_finite() {
            return Err(HarnessError::bad(key, "must be finite"));
        }
        self.resolved.insert(key.to_string(), v);
        Ok(v)
    }

    fn probability(&mut self, key: &str, default: f64) -> Result<f64, HarnessError> {
        let v = self.real(key, default)?;
        if !(0.0..=1.0).contains(&v) {
            return Err(HarnessError::bad(key, format!("{v} is not a probability in [0, 1]")));
        }
        Ok(v)
    }

    fn count(&mut self, key: &str, default: usize, min: usize, max: usize) -> Result<usize, HarnessError> {
        let v = self.real(key, default as f64)?;
        if v.fract() != 0.0 || v < min as f64 || v > max as f64 {
            return Err(HarnessError::bad(key, format!("{v} is not an integer in [{min}, {max}]")));
        }
        Ok(v as usize)
    }

    fn finish(self) -> Result<BTreeMap<String, f64>, HarnessError> {
        if let Some(key) = self.given.keys().find(|k| !self.resolved.contains_key(*k)) {
            return Err(HarnessError::bad(key, "unknown parameter for this scenario"));
        }
        Ok(self.resolved)
    }
}

/// Runs the scenario `name`. Sampling scenarios draw from `seed` (0 when
/// absent); all others ignore it.
pub fn run_scenario(
    name: &str,
    params: &BTreeMap<String, f64>,
    seed: Option<u64>,
) -> Result<ScenarioResult, HarnessError> {
    let mut p = Params::new(params);
    let mut result = match name {
        "single-photon" => single_photon(&mut p)?,
        "rebasis" => rebasis(&mut p)?,
        "product-pair" => product_pair(&mut p)?,
        "max-surplus" => max_surplus_scenario(&mut p)?,
        "epr" => epr(&mut p)?,
        "ghz" => ghz_scenario(&mut p)?,
        "ensemble" => ensemble(&mut p)?,
        "two-photon-ensemble" => two_photon_ensemble(&mut p)?,
        "interferometer" => interferometer(&mut p)?,
        "which-way" => which_way(&mut p, false, seed.unwrap_or(0))?,
        "eraser" => which_way(&mut p, true, seed.unwrap_or(0))?,
        "interaction-cases" => interaction_cases(&mut p)?,
        other => return Err(HarnessError::UnknownScenario(other.to_string())),
    };
    result.parameters = p.finish()?;
    Ok(result)
}

fn photon(p: &mut Params, prob_key: &str, phase_key: &str) -> Result<PureState, HarnessError> {
    let a1_sq = p.probability(prob_key, 0.5)?;
    let phase = p.real(phase_key, 0.0)?;
    Ok(PureState::qubit(a1_sq, phase)?)
}

/// `|a₁ a₂|²` of a qubit.
fn overlap_sqr(psi: &PureState) -> f64 {
    psi.amplitudes()[0].norm_sqr() * psi.amplitudes()[1].norm_sqr()
}

fn single_photon(p: &mut Params) -> Result<ScenarioResult, HarnessError> {
    let psi = photon(p, "a1_sq", "phase")?;
    let rho = pure_density(&psi);
    let u = diagonalizing_unitary_for_pure(&psi)?;
    let eigen = unitary_conjugate(&rho, &u)?;

    let mut r = ScenarioResult::new("single-photon");
    let z = InformationReport::of(&rho);
    let e = InformationReport::of(&eigen);
    r.derive("i_q", 1.0, z.i_q, EXACT);
    r.derive("k_q", 2.0 * overlap_sqr(&psi), z.k_q, EXACT);
    r.derive("k_q_eigenbasis", 0.0, e.k_q, EXACT);
    r.derive("i_q_eigenbasis", 1.0, e.i_q, EXACT);
    r.report("measurement-basis", z);
    r.report("eigenbasis", e);
    r.note("the surplus is relative to the basis; in the photon's own eigenbasis it vanishes");
    Ok(r)
}

fn rebasis(p: &mut Params) -> Result<ScenarioResult, HarnessError> {
    let psi = photon(p, "a1_sq", "phase")?;
    let (a1, a2) = (psi.amplitudes()[0], psi.amplitudes()[1]);
    let rho_z = pure_density(&psi);
    let rho_x = rebasis_x(&rho_z)?;

    let mut r = ScenarioResult::new("rebasis");
    let z = InformationReport::of(&rho_z);
    let x = InformationReport::of(&rho_x);
    // off-diagonal of ρ_x is (a₁+a₂)(a₁−a₂)*/2
    let k_x = (a1 + a2).norm_sqr() * (a1 - a2).norm_sqr() / 2.0;
    r.derive("k_q_z", 2.0 * overlap_sqr(&psi), z.k_q, EXACT);
    r.derive("k_q_x", k_x, x.k_q, EXACT);
    r.derive("purity_x", z.purity, x.purity, EXACT);
    r.derive("i_q_x", 1.0, x.i_q, EXACT);
    r.report("z-basis", z);
    r.report("x-basis", x);
    r.note("x-basis matrix is H rho H^dagger with H rows (1, 1)/sqrt2 and (1, -1)/sqrt2");
    Ok(r)
}

fn product_pair(p: &mut Params) -> Result<ScenarioResult, HarnessError> {
    let a = photon(p, "a1_sq", "phase_a")?;
    let b = photon(p, "b1_sq", "phase_b")?;
    let rho = product(&pure_density(&a), &pure_density(&b));
    let [a1, a2] = [a.amplitudes()[0].norm_sqr(), a.amplitudes()[1].norm_sqr()];
    let [b1, b2] = [b.amplitudes()[0].norm_sqr(), b.amplitudes()[1].norm_sqr()];
    let closed = 4.0 * ((a1 * b1 + a2 * b2) * (a1 * b2 + a2 * b1) + 2.0 * a1 * a2 * b1 * b2);

    let mut r = ScenarioResult::new("product-pair");
    let report = InformationReport::of(&rho);
    r.derive("i_q", 2.0, report.i_q, EXACT);
    r.derive("k_q", closed, report.k_q, EXACT);
    r.report("compound", report);
    r.note("upper bound on k_q for two qubits is 1.5");
    Ok(r)
}

fn max_surplus_scenario(p: &mut Params) -> Result<ScenarioResult, HarnessError> {
    let n = p.count("n", 3, 1, 6)?;
    let rho = pure_density(&PureState::uniform(1 << n)?);
    let mut r = ScenarioResult::new("max-surplus");
    let report = InformationReport::of(&rho);
    r.derive("i_q", n as f64, report.i_q, EXACT);
    r.derive("k_q", max_surplus(n as u32), report.k_q, EXACT);
    r.report("equal-amplitude", report);
    Ok(r)
}

/// Report of the register after reading `outcome` on its first qubit.
fn first_qubit_readout(psi: &PureState, n_qubits: u32, outcome: usize) -> Result<InformationReport, HarnessError> {
    let post = reduce_on_outcome(psi, &ReductionMap::first_qubit(n_qubits), outcome)?;
    Ok(InformationReport::of(&pure_density(&post)))
}

fn epr(p: &mut Params) -> Result<ScenarioResult, HarnessError> {
    let outcome = p.count("outcome", 0, 0, 1)?;
    let rho = epr_singlet();
    let reduced = partial_trace(&rho, (2, 2), Subsystem::First)?;

    let mut r = ScenarioResult::new("epr");
    let report = InformationReport::of(&rho);
    let after = first_qubit_readout(&epr_singlet_state(), 2, outcome)?;
    let first = InformationReport::of(&reduced);
    r.derive("i_q", 2.0, report.i_q, EXACT);
    r.derive("k_q", 1.0, report.k_q, EXACT);
    r.derive("i_tilde", 1.0, report.i_tilde, EXACT);
    r.derive("k_q_after_readout", 0.0, after.k_q, EXACT);
    r.derive("i_q_first_qubit", 0.5, first.i_q, EXACT);
    r.report("singlet", report);
    r.report("first-qubit", first);
    r.report("after-first-qubit-readout", after);
    r.note("k_q = 1 is not below the classicality threshold; one readout brings it to 0");
    r.note("readout on qubit 1 rules out every component whose first qubit disagrees");
    Ok(r)
}

fn ghz_scenario(p: &mut Params) -> Result<ScenarioResult, HarnessError> {
    let n = p.count("n", 3, 2, 6)?;
    let outcome = p.count("outcome", 0, 0, 1)?;
    let psi = ghz_state(n)?;
    let rho = pure_density(&psi);
    let nf = n as f64;

    let mut r = ScenarioResult::new("ghz");
    let report = InformationReport::of(&rho);
    let after = first_qubit_readout(&psi, n as u32, outcome)?;
    r.derive("i_q", nf, report.i_q, EXACT);
    r.derive("k_q", nf / 2.0, report.k_q, EXACT);
    r.derive("i_tilde", nf / 2.0, report.i_tilde, EXACT);
    r.derive("k_q_after_readout", 0.0, after.k_q, EXACT);
    r.report("ghz", report);
    r.report("after-first-qubit-readout", after);
    Ok(r)
}

/// `Σ_{i,j} cos(φ_i − φ_j)`, which equals `|Σ_k e^{iφ_k}|²`.
fn phase_coherence(phases: &[f64]) -> f64 {
    phases.iter().flat_map(|a| phases.iter().map(move |b| (a - b).cos())).sum()
}

fn ensemble(p: &mut Params) -> Result<ScenarioResult, HarnessError> {
    let a1_sq = p.probability("a1_sq", 0.5)?;
    let n = p.count("n", 4, 1, MAX_ENSEMBLE_MEMBERS)?;
    let step = p.real("phase_step", 0.0)?;
    let phases: Vec<f64> = (0..n).map(|k| k as f64 * step).collect();
    let spec = EnsembleSpec::from_probability(a1_sq, phases.clone())?;
    let rho = ensemble_density(&spec);
    let single = ensemble_density(&EnsembleSpec::from_probability(a1_sq, vec![0.0])?);

    let a2_sq = 1.0 - a1_sq;
    let nn = (n * n) as f64;
    let coherence = phase_coherence(&phases);
    let mut r = ScenarioResult::new("ensemble");
    let report = InformationReport::of(&rho);
    r.derive("k_q", 2.0 * a1_sq * a2_sq * coherence / nn, report.k_q, EXACT);
    r.derive("i_q", a1_sq * a1_sq + a2_sq * a2_sq + 2.0 * a1_sq * a2_sq * coherence / nn, report.i_q, EXACT);
    r.report("ensemble", report);
    r.report("single-photon", InformationReport::of(&single));
    if step == 0.0 {
        r.derive("max_entry_difference_to_single_photon", 0.0, rho.matrix().max_abs_diff(single.matrix()), EXACT);
        r.note("equal phases: the ensemble is indistinguishable from one photon");
    }
    Ok(r)
}

fn two_photon_ensemble(p: &mut Params) -> Result<ScenarioResult, HarnessError> {
    let a1_sq = p.probability("a1_sq", 0.5)?;
    let phi = p.real("phi", 0.0)?;
    let spec = EnsembleSpec::from_probability(a1_sq, vec![0.0, phi])?;
    let rho = ensemble_density(&spec);
    let a2_sq = 1.0 - a1_sq;
    let overlap = a1_sq * a2_sq;

    // entry-by-entry sum, independent of the matrix product used by the measures
    let brute_k = 2.0 * rho.get(0, 1).norm_sqr();
    let brute_i = rho.get(0, 0).re.powi(2) + rho.get(1, 1).re.powi(2) + brute_k;

    let mut r = ScenarioResult::new("two-photon-ensemble");
    let report = InformationReport::of(&rho);
    let k_closed = overlap * (1.0 + phi.cos());
    let i_closed = a1_sq * a1_sq + a2_sq * a2_sq + overlap * (1.0 + phi.cos());
    r.derive("k_q", k_closed, report.k_q, EXACT);
    r.derive("k_q_entrywise", k_closed, brute_k, EXACT);
    r.derive("i_q", i_closed, report.i_q, EXACT);
    r.derive("i_q_entrywise", i_closed, brute_i, EXACT);
    r.report("ensemble", report);

    let halved_k = (overlap.sqrt() / 2.0).powi(2) * (1.0 + phi.cos());
    let halved_i = a1_sq * a1_sq + a2_sq * a2_sq + overlap / 2.0 * (1.0 + phi.cos());
    r.note(format!(
        "closed forms with an extra factor, k = (|a1 a2|/2)^2 (1 + cos phi) = {} and \
         i = a1^4 + a2^4 + |a1 a2|^2 (1 + cos phi)/2 = {}, disagree with the matrix values \
         and with the phi = 0 single-photon limit k = 2|a1 a2|^2 = {}",
        super::format_real(halved_k),
        super::format_real(halved_i),
        super::format_real(2.0 * overlap),
    ));
    Ok(r)
}

fn interferometer_scenario(p: &mut Params, eraser: bool) -> Result<InterferometerScenario, HarnessError> {
    let alpha_sq = p.probability("alpha_sq", 0.5)?;
    let psi = photon(p, "a1_sq", "phase")?;
    Ok(InterferometerScenario::new(psi, alpha_sq, 1.0 - alpha_sq, eraser)?)
}

fn interferometer(p: &mut Params) -> Result<ScenarioResult, HarnessError> {
    let s = interferometer_scenario(p, false)?;
    let before = interferometer_before(&s);
    let (alpha_sq, beta_sq) = (s.alpha_sq(), s.beta_sq());
    let weight = alpha_sq * alpha_sq + beta_sq * beta_sq;
    let photon = pure_density(s.photon());
    let k_s = InformationReport::of(&photon).k_q;

    let mut r = ScenarioResult::new("interferometer");
    r.derive("i_q_i", 2.0 * weight, before.i_q_i, EXACT);
    r.derive("k_q_i", 4.0 * weight * overlap_sqr(s.photon()), before.k_q_i, EXACT);
    r.derive("k_q_i_over_i_q_i", k_s, before.k_q_i / before.i_q_i, EXACT);
    r.report("photon", InformationReport::of(&photon));
    r.report("apparatus", InformationReport::of(&s.apparatus()));
    r.report("compound", InformationReport::of(&before.compound));
    Ok(r)
}

fn which_way(p: &mut Params, eraser: bool, seed: u64) -> Result<ScenarioResult, HarnessError> {
    let s = interferometer_scenario(p, eraser)?;
    let record = measure_which_way(&s, &mut SeedStream::new(seed).rng())?;

    let name = if eraser { "eraser" } else { "which-way" };
    let mut r = ScenarioResult::new(name);
    r.seed = Some(seed);
    let post_k = if eraser { 4.0 * overlap_sqr(s.photon()) } else { 0.0 };
    r.derive("i_q_after", 2.0, record.post_report.i_q, EXACT);
    r.derive("k_q_after", post_k, record.post_report.k_q, EXACT);
    r.report("before", record.pre_report.clone());
    r.report("after", record.post_report.clone());
    r.note(format!("observed way {}", record.outcome_index + 1));
    r.note(format!("reduction rule satisfied: {}", record.reduction_respected));
    r.note(format!("measurement complete: {}", is_measurement_complete(&record)));
    Ok(r)
}

fn interaction_cases(p: &mut Params) -> Result<ScenarioResult, HarnessError> {
    let a1_sq = p.probability("a1_sq", 0.3)?;
    let b1_sq = p.probability("b1_sq", 0.6)?;
    let alpha_sq = p.probability("alpha_sq", 0.7)?;

    let s_pure = pure_density(&PureState::qubit(a1_sq, 0.0)?);
    let m_pure = pure_density(&PureState::qubit(b1_sq, 0.0)?);
    let s_diag = diagonal_mixture(&[a1_sq, 1.0 - a1_sq])?;
    let m_diag = diagonal_mixture(&[b1_sq, 1.0 - b1_sq])?;
    let apparatus = diagonal_mixture(&[alpha_sq, 1.0 - alpha_sq])?;
    let (c_s, c_m) = (total_capacity(2), total_capacity(2));

    let mut r = ScenarioResult::new("interaction-cases");
    r.derive("case1_pure_pure", c_s + c_m, interaction_information(&s_pure, &m_pure), EXACT);
    let product_law = (c_s + c_m) / (c_s * c_m) * quantum_information(&s_diag) * quantum_information(&m_diag);
    r.derive("case2_diagonal_diagonal", product_law, interaction_information(&s_diag, &m_diag), EXACT);
    let case3 = interaction_information(&s_pure, &apparatus);
    r.derive("case3_pure_apparatus", quantum_information(&apparatus) * (1.0 + c_s / c_m), case3, EXACT);
    r.report("case1-compound", InformationReport::of(&product(&s_pure, &m_pure)));
    r.report("case2-compound", InformationReport::of(&product(&s_diag, &m_diag)));
    r.report("case3-compound", InformationReport::of(&product(&s_pure, &apparatus)));
    r.note(format!("case 3 below C_S + C_M: {}", case3 < c_s + c_m));
    Ok(r)
}
