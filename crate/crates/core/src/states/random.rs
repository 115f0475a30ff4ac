use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use super::QuantumState;
use crate::error::Result;
use crate::tensor::{ComplexMatrix, SubsystemShape};

/// Identifier of the sampling algorithm, recorded next to seeded outputs.
pub const HAAR_ALGORITHM: &str = "chacha20/complex-gaussian-normalized/v1";

pub fn seeded_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub(crate) fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar-distributed pure state: a normalized vector of i.i.d. standard
/// complex Gaussians, deterministic in `seed`.
pub fn haar_random_pure(shape: &SubsystemShape, seed: u64) -> Result<QuantumState> {
    let mut rng = seeded_rng(seed);
    let v: Vec<Complex64> = (0..shape.total_dim()).map(|_| complex_gaussian(&mut rng)).collect();
    QuantumState::pure_normalized(v, shape.clone())
}

/// Modified Gram-Schmidt on the columns, applied twice. Returns false if a
/// column collapses.
pub(crate) fn orthonormalize_columns(m: &mut ComplexMatrix) -> bool {
    let (rows, cols) = (m.rows(), m.cols());
    for _pass in 0..2 {
        for c in 0..cols {
            for p in 0..c {
                let proj: Complex64 = (0..rows).map(|r| m[(r, p)].conj() * m[(r, c)]).sum();
                for r in 0..rows {
                    let v = m[(r, p)];
                    m[(r, c)] -= proj * v;
                }
            }
            let norm = (0..rows).map(|r| m[(r, c)].norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-300 {
                return false;
            }
            for r in 0..rows {
                m[(r, c)] /= norm;
            }
        }
    }
    true
}

/// Haar-random `rows x cols` isometry (`cols <= rows`).
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    assert!(cols <= rows, "isometry needs cols <= rows");
    loop {
        let mut m = ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng));
        if orthonormalize_columns(&mut m) {
            return m;
        }
    }
}

pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    random_isometry(dim, dim, rng)
}
