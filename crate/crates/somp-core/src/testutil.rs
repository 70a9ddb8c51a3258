//! Seeded data generators shared by the unit tests. Kept independent of the
//! experiment harness so oracle tests do not lean on the code they check.

use crate::matrix::DenseMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn test_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with independent standard normal entries.
pub fn seeded_matrix(seed: u64, rows: usize, cols: usize) -> DenseMatrix {
    let mut rng = test_rng(seed);
    let data: Vec<f64> = (0..rows * cols)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    DenseMatrix::from_rows(rows, cols, data).unwrap()
}

/// Gaussian matrix with every column scaled to unit Euclidean norm.
pub fn seeded_unit_columns(seed: u64, rows: usize, cols: usize) -> DenseMatrix {
    let mut m = seeded_matrix(seed, rows, cols);
    for j in 0..cols {
        let norm = m.column_norm(j);
        assert!(norm > 0.0);
        m.scale_column(j, 1.0 / norm);
    }
    m
}
