//! Eigenvalues of small Hermitian matrices.
//!
//! A Hermitian `A + iB` is embedded into the real symmetric matrix
//! `[[A, -B], [B, A]]`, whose spectrum is the Hermitian spectrum with every
//! eigenvalue doubled. The embedding is diagonalized by cyclic Jacobi
//! rotations, which is plenty for the N <= 8 cases this is used on.

use crate::matrix::ComplexMatrix;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// Only the Hermitian part of `m` is looked at; callers are expected to have
/// checked Hermiticity already.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    debug_assert!(m.is_square());
    let n = m.rows();
    let size = 2 * n;
    let mut a = vec![0.0; size * size];
    for i in 0..n {
        for j in 0..n {
            // symmetrize so roundoff in the input cannot break the embedding
            let z = (m.get(i, j) + m.get(j, i).conj()) * 0.5;
            a[i * size + j] = z.re;
            a[(i + n) * size + (j + n)] = z.re;
            a[i * size + (j + n)] = -z.im;
            a[(i + n) * size + j] = z.im;
        }
    }
    let mut values = symmetric_eigenvalues(a, size);
    values.sort_by(|x, y| x.total_cmp(y));
    values.into_iter().step_by(2).collect()
}

/// Cyclic Jacobi on a dense row-major real symmetric matrix.
fn symmetric_eigenvalues(mut a: Vec<f64>, n: usize) -> Vec<f64> {
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().max(f64::MIN_POSITIVE);
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off <= 1e-32 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta == 0.0 { 1.0 } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_spectrum_is_the_diagonal() {
        let m = ComplexMatrix::from_real_diagonal(&[0.7, -0.2, 0.5]);
        let ev = hermitian_eigenvalues(&m);
        let expected = [-0.2, 0.5, 0.7];
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn pauli_y_has_plus_minus_one() {
        let m =
            ComplexMatrix::from_rows(vec![vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]]).unwrap();
        let ev = hermitian_eigenvalues(&m);
        assert!((ev[0] + 1.0).abs() < 1e-13);
        assert!((ev[1] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn complex_hermitian_three_by_three() {
        // [[2, i, 0], [-i, 2, 0], [0, 0, 1]] has spectrum {1, 1, 3}
        let m = ComplexMatrix::from_rows(vec![
            vec![c(2.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)],
            vec![c(0.0, -1.0), c(2.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        let ev = hermitian_eigenvalues(&m);
        for (a, b) in ev.iter().zip([1.0, 1.0, 3.0]) {
            assert!((a - b).abs() < 1e-12, "{ev:?}");
        }
    }

    #[test]
    fn eigenvalue_sum_matches_trace() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(0.4, 0.0), c(0.1, 0.2), c(-0.05, 0.0)],
            vec![c(0.1, -0.2), c(0.35, 0.0), c(0.0, 0.1)],
            vec![c(-0.05, 0.0), c(0.0, -0.1), c(0.25, 0.0)],
        ])
        .unwrap();
        let ev = hermitian_eigenvalues(&m);
        let sum: f64 = ev.iter().sum();
        assert!((sum - 1.0).abs() < 1e-13);
    }
}
