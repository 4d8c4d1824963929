//! Fixed inputs shared by the benchmarks.

use nalgebra::DMatrix;
use rand::Rng;
use zerolab::correlations::PointConfiguration;
use zerolab::gef::standard_complex;
use zerolab::rng::seeded;
use zerolab::Complex64;

/// `G G*` for a standard complex Gaussian `G`: Hermitian positive semidefinite,
/// the shape of matrix the intensity code feeds to the permanent.
pub fn gram_matrix(n: usize, seed: u64) -> DMatrix<Complex64> {
    let mut rng = seeded(seed);
    let g = DMatrix::from_fn(n, n, |_, _| standard_complex(&mut rng));
    &g * g.adjoint()
}

/// `k` points drawn uniformly from a square of side `side`.
pub fn random_configuration(k: usize, side: f64, seed: u64) -> PointConfiguration {
    let mut rng = seeded(seed);
    let pts = (0..k)
        .map(|_| Complex64::new(rng.random::<f64>() * side, rng.random::<f64>() * side))
        .collect();
    PointConfiguration::new(pts).expect("distinct points")
}
