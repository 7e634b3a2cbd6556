//! JSON state-spec documents.
//!
//! ```json
//! {"kind": "pure", "amplitudes": [[0.7071, 0], [0.7071, 0]]}
//! {"kind": "diag", "probs": [0.5, 0.5]}
//! {"kind": "ensemble", "a1": 0.8944, "a2": 0.4472, "phases": [0.0, 3.1416]}
//! {"kind": "matrix", "entries": [[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]]}
//! ```
//!
//! Complex numbers are `[re, im]` pairs. Inputs within
//! [`SPEC_NORM_TOLERANCE`] of normalized are rescaled exactly on load;
//! anything farther off is a validation error.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::matrix::{ComplexMatrix, DensityMatrix};
use crate::measures::is_diagonal;
use crate::states::{diagonal_mixture, EnsembleSpec, PureState};

pub const SPEC_NORM_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Pure(PureState),
    Density(DensityMatrix),
    Ensemble(EnsembleSpec),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum Document {
    Pure { amplitudes: Vec<[f64; 2]> },
    Diag { probs: Vec<f64> },
    Ensemble { a1: f64, a2: f64, phases: Vec<f64> },
    Matrix { entries: Vec<Vec<[f64; 2]>> },
}

fn check_near_one(what: &str, value: f64) -> Result<(), HarnessError> {
    let deviation = (value - 1.0).abs();
    if deviation.is_nan() || deviation > SPEC_NORM_TOLERANCE {
        return Err(HarnessError::Validation { invariant: what.to_string(), magnitude: deviation });
    }
    Ok(())
}

fn complex(pair: &[f64; 2]) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

pub fn parse_state_spec(text: &str) -> Result<StateSpec, HarnessError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| HarnessError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    match doc {
        Document::Pure { amplitudes } => {
            let amps: Vec<Complex64> = amplitudes.iter().map(complex).collect();
            let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
            check_near_one("unit norm", norm_sqr)?;
            let psi = if norm_sqr == 1.0 { PureState::new(amps)? } else { PureState::normalized(amps)? };
            Ok(StateSpec::Pure(psi))
        }
        Document::Diag { probs } => {
            let total: f64 = probs.iter().sum();
            check_near_one("probabilities sum to one", total)?;
            let probs: Vec<f64> = if total == 1.0 { probs } else { probs.iter().map(|p| p / total).collect() };
            Ok(StateSpec::Density(diagonal_mixture(&probs)?))
        }
        Document::Ensemble { a1, a2, phases } => {
            let norm_sqr = a1 * a1 + a2 * a2;
            check_near_one("unit norm", norm_sqr)?;
            let scale = if norm_sqr == 1.0 { 1.0 } else { norm_sqr.sqrt() };
            Ok(StateSpec::Ensemble(EnsembleSpec::new(a1 / scale, a2 / scale, phases)?))
        }
        Document::Matrix { entries } => {
            let rows: Vec<Vec<Complex64>> = entries.iter().map(|row| row.iter().map(complex).collect()).collect();
            let m = ComplexMatrix::from_rows(rows)?;
            if !m.is_square() {
                return Err(HarnessError::Validation {
                    invariant: "square".to_string(),
                    magnitude: m.rows().abs_diff(m.cols()) as f64,
                });
            }
            let tr: Complex64 = (0..m.rows()).map(|i| m.get(i, i)).sum();
            check_near_one("unit trace", tr.re)?;
            let m = if tr.re == 1.0 { m } else { m.scale(Complex64::new(1.0 / tr.re, 0.0)) };
            Ok(StateSpec::Density(DensityMatrix::new(m)?))
        }
    }
}

/// Writes a spec back out; diagonal density matrices use the `diag` kind.
pub fn render_state_spec(spec: &StateSpec) -> String {
    let pair = |z: &Complex64| [z.re, z.im];
    let doc = match spec {
        StateSpec::Pure(psi) => Document::Pure { amplitudes: psi.amplitudes().iter().map(pair).collect() },
        StateSpec::Density(rho) if is_diagonal(rho, 0.0) => Document::Diag { probs: rho.diagonal() },
        StateSpec::Density(rho) => Document::Matrix {
            entries: (0..rho.dim()).map(|i| (0..rho.dim()).map(|j| pair(&rho.get(i, j))).collect()).collect(),
        },
        StateSpec::Ensemble(e) => Document::Ensemble { a1: e.a1(), a2: e.a2(), phases: e.phases().to_vec() },
    };
    serde_json::to_string(&doc).expect("plain numbers serialize")
}

impl StateSpec {
    /// The density matrix this spec describes.
    pub fn density(&self) -> DensityMatrix {
        match self {
            StateSpec::Pure(psi) => crate::states::pure_density(psi),
            StateSpec::Density(rho) => rho.clone(),
            StateSpec::Ensemble(e) => crate::states::ensemble_density(e),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            StateSpec::Pure(_) => "pure",
            StateSpec::Density(rho) if is_diagonal(rho, 0.0) => "diag",
            StateSpec::Density(_) => "matrix",
            StateSpec::Ensemble(_) => "ensemble",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn uniform_qubit() {
        let spec = parse_state_spec(r#"{"kind":"pure","amplitudes":[[0.7071,0],[0.7071,0]]}"#).unwrap();
        let StateSpec::Pure(psi) = spec else { panic!("expected pure") };
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for a in psi.amplitudes() {
            assert!((a - h).norm() < 1e-15);
        }
    }

    #[test]
    fn maximally_mixed_qubit() {
        let spec = parse_state_spec(r#"{"kind":"diag","probs":[0.5,0.5]}"#).unwrap();
        assert_eq!(spec, StateSpec::Density(diagonal_mixture(&[0.5, 0.5]).unwrap()));
    }

    #[test]
    fn ensemble_is_renormalized() {
        let spec = parse_state_spec(r#"{"kind":"ensemble","a1":0.8944,"a2":0.4472,"phases":[0.0,3.1416]}"#).unwrap();
        let StateSpec::Ensemble(e) = spec else { panic!("expected ensemble") };
        assert_eq!(e.members(), 2);
        assert!((e.a1() * e.a1() + e.a2() * e.a2() - 1.0).abs() < 1e-15);
        assert!((e.a1() * e.a1() - 0.8).abs() < 1e-4);
    }

    #[test]
    fn matrix_kind() {
        let text = r#"{"kind":"matrix","entries":[[[0.5,0],[0,-0.5]],[[0,0.5],[0.5,0]]]}"#;
        let spec = parse_state_spec(text).unwrap();
        assert_eq!(spec.kind(), "matrix");
        assert!((spec.density().purity() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_state_spec("{\"kind\":\"pure\",\n \"amplitudes\": [[1, 0],]}") {
            Err(HarnessError::Parse { line, column, .. }) => {
                assert_eq!(line, 2);
                assert!(column > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_state_spec(r#"{"kind":"qutrit"}"#), Err(HarnessError::Parse { .. })));
        assert!(matches!(
            parse_state_spec(r#"{"kind":"diag","probs":[1.0],"extra":1}"#),
            Err(HarnessError::Parse { .. })
        ));
    }

    #[test]
    fn far_from_normalized_is_a_validation_error() {
        match parse_state_spec(r#"{"kind":"pure","amplitudes":[[0.8,0],[0.8,0]]}"#) {
            Err(HarnessError::Validation { invariant, magnitude }) => {
                assert_eq!(invariant, "unit norm");
                assert!((magnitude - 0.28).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_state_spec(r#"{"kind":"diag","probs":[1.2,-0.2]}"#),
            Err(HarnessError::Validation { .. })
        ));
        assert!(matches!(
            parse_state_spec(r#"{"kind":"ensemble","a1":0.6,"a2":0.8,"phases":[]}"#),
            Err(HarnessError::Validation { .. })
        ));
        let not_hermitian = r#"{"kind":"matrix","entries":[[[0.5,0],[0.3,0]],[[0.1,0],[0.5,0]]]}"#;
        match parse_state_spec(not_hermitian) {
            Err(HarnessError::Validation { invariant, .. }) => assert_eq!(invariant, "Hermitian"),
            other => panic!("unexpected {other:?}"),
        }
    }

    fn assert_close(a: &StateSpec, b: &StateSpec) {
        assert_eq!(a.kind(), b.kind());
        let diff = a.density().matrix().max_abs_diff(b.density().matrix());
        assert!(diff < 1e-14, "diff {diff}");
        if let (StateSpec::Ensemble(x), StateSpec::Ensemble(y)) = (a, b) {
            assert_eq!(x.phases(), y.phases());
        }
    }

    proptest! {
        #[test]
        fn render_then_parse_is_identity(
            re in prop::collection::vec(-1.0f64..1.0, 1..6),
            im in prop::collection::vec(-1.0f64..1.0, 1..6),
            probs in prop::collection::vec(0.0f64..1.0, 1..6),
            a1_sq in 0.0f64..=1.0,
            phases in prop::collection::vec(-10.0f64..10.0, 1..8),
        ) {
            let amps: Vec<Complex64> = re.iter().zip(&im).map(|(&r, &i)| Complex64::new(r, i)).collect();
            prop_assume!(amps.iter().map(|a| a.norm_sqr()).sum::<f64>() > 1e-6);
            let pure = StateSpec::Pure(PureState::normalized(amps).unwrap());

            let total: f64 = probs.iter().sum();
            prop_assume!(total > 1e-6);
            let normalized: Vec<f64> = probs.iter().map(|p| p / total).collect();
            let diag = StateSpec::Density(diagonal_mixture(&normalized).unwrap());
            let ens = StateSpec::Ensemble(EnsembleSpec::from_probability(a1_sq, phases).unwrap());

            for spec in [pure, diag, ens] {
                let back = parse_state_spec(&render_state_spec(&spec)).unwrap();
                assert_close(&spec, &back);
            }
        }
    }

    #[test]
    fn general_matrix_round_trip() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for dim in [2, 3, 4] {
            let spec = StateSpec::Density(crate::random::random_density(dim, &mut rng));
            let back = parse_state_spec(&render_state_spec(&spec)).unwrap();
            assert_close(&spec, &back);
        }
    }
}
