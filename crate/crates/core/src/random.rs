//! Random states and unitaries for property checks and sweeps.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::matrix::{ComplexMatrix, DensityMatrix, UnitaryMatrix};
use crate::states::PureState;

fn gaussian_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    (0..dim).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect()
}

/// Haar-random pure state.
pub fn random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    loop {
        if let Ok(psi) = PureState::normalized(gaussian_vector(dim, rng)) {
            return psi;
        }
    }
}

/// Random mixed state `G G† / tr(G G†)` with a random rank between 1 and `dim`.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let rank = rng.gen_range(1..=dim);
    let mut acc = ComplexMatrix::zeros(dim, dim);
    let mut total = 0.0;
    for _ in 0..rank {
        let v = gaussian_vector(dim, rng);
        let w: f64 = rng.gen_range(0.05..1.0);
        let norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let term = ComplexMatrix::outer(&v).scale(Complex64::new(w / norm_sqr, 0.0));
        acc = add(&acc, &term);
        total += w;
    }
    let rho = acc.scale(Complex64::new(1.0 / total, 0.0));
    DensityMatrix::new(rho).expect("convex combination of projectors")
}

/// Unitary from Gram–Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> UnitaryMatrix {
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while columns.len() < dim {
        let mut v = gaussian_vector(dim, rng);
        for q in &columns {
            let overlap: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= overlap * qi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            columns.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    let data = (0..dim).flat_map(|i| columns.iter().map(move |col| col[i])).collect();
    UnitaryMatrix::new(ComplexMatrix::new(dim, dim, data).expect("finite")).expect("orthonormal columns")
}

fn add(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let data = a.entries().iter().zip(b.entries()).map(|(x, y)| x + y).collect();
    ComplexMatrix::new(a.rows(), a.cols(), data).expect("same shape")
}
