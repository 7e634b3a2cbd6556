//! Dense complex matrices and the validated density-matrix wrapper.
//!
//! Everything here is row-major and sized for small Hilbert spaces
//! (N <= 64). Tensor products use the "first factor major" index order:
//! entry `(i_a * n_b + i_b, j_a * n_b + j_b)` of `a ⊗ b` is `a[i_a, j_a] * b[i_b, j_b]`.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::eigen::hermitian_eigenvalues;
use crate::states::PureState;

/// Default tolerance used when validating density matrices.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Eigenvalues below this are reported as a positivity violation.
pub const EIGENVALUE_FLOOR: f64 = -1e-8;

/// Largest dimension for which positivity is checked via the spectrum.
pub const PSD_CHECK_MAX_DIM: usize = 8;

const UNITARY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("expected {expected} entries, found {found}")]
    EntryCount { expected: usize, found: usize },
    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("not Hermitian: |m[{row},{col}] - conj(m[{col},{row}])| = {deviation:e}")]
    NotHermitian { row: usize, col: usize, deviation: f64 },
    #[error("trace is not one: |tr - 1| = {deviation:e}")]
    TraceNotOne { deviation: f64 },
    #[error("diagonal entry {index} is negative: {value:e}")]
    NegativeDiagonal { index: usize, value: f64 },
    #[error("negative eigenvalue {value:e}")]
    NegativeEigenvalue { value: f64 },
    #[error("not unitary: max |U U^dagger - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("zero vector has no direction")]
    ZeroVector,
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::EntryCount { expected: rows * cols, found: data.len() });
        }
        if let Some(k) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(MatrixError::NonFinite { row: k / cols, col: k % cols });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self, MatrixError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            if row.len() != n_cols {
                return Err(MatrixError::EntryCount { expected: n_cols, found: row.len() });
            }
            data.extend(row);
        }
        Self::new(n_rows, n_cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = Complex64::new(d, 0.0);
        }
        m
    }

    /// `v v^dagger` for a column vector `v`.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        let data = v.iter().flat_map(|a| v.iter().map(move |b| a * b.conj())).collect();
        Self { rows: n, cols: n, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::DimensionMismatch { expected: self.cols, found: rhs.rows });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn kron(&self, rhs: &Self) -> Self {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = Self::zeros(rows, cols);
        for ia in 0..self.rows {
            for ja in 0..self.cols {
                let a = self.get(ia, ja);
                for ib in 0..rhs.rows {
                    for jb in 0..rhs.cols {
                        let r = ia * rhs.rows + ib;
                        let c = ja * rhs.cols + jb;
                        out.data[r * cols + c] = a * rhs.get(ib, jb);
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, MatrixError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(MatrixError::DimensionMismatch { expected: self.rows * self.cols, found: rhs.rows * rhs.cols });
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * factor).collect() }
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - rhs`. Panics on shape mismatch.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        self.data.iter().zip(&rhs.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `(M + M^dagger) / 2`; used to strip roundoff after a conjugation.
    fn hermitian_part(&self) -> Self {
        let n = self.rows;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = (self.get(i, j) + self.get(j, i).conj()) * 0.5;
            }
        }
        out
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| {
                    let z = self.get(i, j);
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Sum of the diagonal entries.
pub fn trace(m: &ComplexMatrix) -> Result<Complex64, MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NotSquare { rows: m.rows, cols: m.cols });
    }
    Ok((0..m.rows).map(|i| m.get(i, i)).sum())
}

/// A Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    tolerance: f64,
}

/// Checks every density-matrix invariant and wraps `m` on success.
///
/// Positivity is verified through the spectrum only up to
/// [`PSD_CHECK_MAX_DIM`]; larger matrices are checked for Hermiticity, unit
/// trace and a nonnegative diagonal.
pub fn validate_density(m: ComplexMatrix, tolerance: f64) -> Result<DensityMatrix, MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    let mut worst = (0, 0, 0.0);
    for i in 0..n {
        for j in i..n {
            let dev = (m.get(i, j) - m.get(j, i).conj()).norm();
            if dev > worst.2 {
                worst = (i, j, dev);
            }
        }
    }
    if worst.2 > tolerance {
        return Err(MatrixError::NotHermitian { row: worst.0, col: worst.1, deviation: worst.2 });
    }
    let deviation = (trace(&m)? - 1.0).norm();
    if deviation > tolerance {
        return Err(MatrixError::TraceNotOne { deviation });
    }
    if let Some((index, value)) =
        (0..n).map(|i| (i, m.get(i, i).re)).filter(|&(_, v)| v < -tolerance).min_by(|a, b| a.1.total_cmp(&b.1))
    {
        return Err(MatrixError::NegativeDiagonal { index, value });
    }
    if n <= PSD_CHECK_MAX_DIM {
        let lowest = hermitian_eigenvalues(&m)[0];
        if lowest < EIGENVALUE_FLOOR {
            return Err(MatrixError::NegativeEigenvalue { value: lowest });
        }
    }
    Ok(DensityMatrix { matrix: m, tolerance })
}

impl DensityMatrix {
    /// Validates with [`DEFAULT_TOLERANCE`].
    pub fn new(m: ComplexMatrix) -> Result<Self, MatrixError> {
        validate_density(m, DEFAULT_TOLERANCE)
    }

    /// Wraps a matrix that is a density matrix by construction.
    pub(crate) fn from_trusted(m: ComplexMatrix) -> Self {
        debug_assert!(m.is_square());
        Self { matrix: m, tolerance: DEFAULT_TOLERANCE }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.matrix.get(i, j)
    }

    /// Real parts of the diagonal, i.e. the outcome probabilities.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.get(i, i).re).collect()
    }

    /// `tr ρ²`, taken from the matrix product.
    pub fn purity(&self) -> f64 {
        let sq = self.matrix.matmul(&self.matrix).expect("square");
        trace(&sq).expect("square").re
    }
}

/// A matrix with `U U^dagger = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    matrix: ComplexMatrix,
}

impl UnitaryMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self, MatrixError> {
        if !m.is_square() {
            return Err(MatrixError::NotSquare { rows: m.rows, cols: m.cols });
        }
        let deviation = m.matmul(&m.dagger())?.max_abs_diff(&ComplexMatrix::identity(m.rows));
        if deviation > UNITARY_TOLERANCE {
            return Err(MatrixError::NotUnitary { deviation });
        }
        Ok(Self { matrix: m })
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(n) }
    }

    /// The σ_z to σ_x change of basis, rows `(1, 1)/√2` and `(1, -1)/√2`.
    pub fn hadamard() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self { matrix: ComplexMatrix { rows: 2, cols: 2, data: vec![h, h, h, -h] } }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dagger(&self) -> Self {
        Self { matrix: self.matrix.dagger() }
    }
}

/// Tensor product of two density matrices (first factor major).
pub fn kron(a: &DensityMatrix, b: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::from_trusted(a.matrix.kron(&b.matrix))
}

/// `U ρ U^dagger`.
pub fn unitary_conjugate(rho: &DensityMatrix, u: &UnitaryMatrix) -> Result<DensityMatrix, MatrixError> {
    if rho.dim() != u.dim() {
        return Err(MatrixError::DimensionMismatch { expected: rho.dim(), found: u.dim() });
    }
    let out = u.matrix.matmul(&rho.matrix)?.matmul(&u.matrix.dagger())?;
    Ok(DensityMatrix { matrix: out.hermitian_part(), tolerance: rho.tolerance })
}

/// Keeps the diagonal and zeroes everything else (the ρ̃ of the measures).
pub fn diagonal_part(rho: &DensityMatrix) -> DensityMatrix {
    DensityMatrix { matrix: ComplexMatrix::from_real_diagonal(&rho.diagonal()), tolerance: rho.tolerance }
}

/// Which factor of a bipartite space survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Reduced density matrix of one factor of an `n_a x n_b` bipartition.
pub fn partial_trace(rho: &DensityMatrix, dims: (usize, usize), keep: Subsystem) -> Result<DensityMatrix, MatrixError> {
    let (n_a, n_b) = dims;
    if n_a * n_b != rho.dim() {
        return Err(MatrixError::DimensionMismatch { expected: rho.dim(), found: n_a * n_b });
    }
    let out = match keep {
        Subsystem::First => {
            let mut out = ComplexMatrix::zeros(n_a, n_a);
            for i in 0..n_a {
                for j in 0..n_a {
                    out.data[i * n_a + j] = (0..n_b).map(|k| rho.get(i * n_b + k, j * n_b + k)).sum();
                }
            }
            out
        }
        Subsystem::Second => {
            let mut out = ComplexMatrix::zeros(n_b, n_b);
            for i in 0..n_b {
                for j in 0..n_b {
                    out.data[i * n_b + j] = (0..n_a).map(|k| rho.get(k * n_b + i, k * n_b + j)).sum();
                }
            }
            out
        }
    };
    Ok(DensityMatrix { matrix: out, tolerance: rho.tolerance })
}

/// A unitary `U` with `U ψ = e_0`, so `U ρ_ψ U^dagger = diag(1, 0, ..., 0)`.
///
/// Built as a Householder reflection after removing the phase of the first
/// amplitude; the first column of `U^dagger` is `ψ` itself.
pub fn diagonalizing_unitary_for_pure(psi: &PureState) -> Result<UnitaryMatrix, MatrixError> {
    let amps = psi.amplitudes();
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(MatrixError::ZeroVector);
    }
    let n = amps.len();
    let phase = if amps[0].norm() > 0.0 { amps[0] / amps[0].norm() } else { Complex64::new(1.0, 0.0) };
    // w = e^{-iθ} ψ has a real nonnegative first entry
    let mut v: Vec<Complex64> = amps.iter().map(|a| a / (phase * norm)).collect();
    v[0] -= 1.0;
    let v_norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let householder = if v_norm_sqr < 1e-30 {
        ComplexMatrix::identity(n)
    } else {
        ComplexMatrix::identity(n)
            .sub(&ComplexMatrix::outer(&v).scale(Complex64::new(2.0 / v_norm_sqr, 0.0)))
            .expect("same shape")
    };
    UnitaryMatrix::new(householder.scale(phase.conj()))
}
