//! Quantum information `I_Q` and surplus knowledge `K_Q` of finite-dimensional
//! density matrices, together with the state families, measurement model and
//! scenario harness built on top of them.

pub mod eigen;
pub mod harness;
pub mod matrix;
pub mod measurement;
pub mod measures;
pub mod random;
pub mod states;

pub use matrix::{ComplexMatrix, DensityMatrix, MatrixError, UnitaryMatrix};
pub use measurement::{InterferometerScenario, MeasurementError, MeasurementRecord, ReductionMap, SeedStream};
pub use measures::{Classification, InformationReport};
pub use states::{EnsembleSpec, PureState, StateError};
