use std::ops::Deref;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result};

/// Independent standard complex Gaussians, density `(1/π) e^{-|ζ|²}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexGaussianVector(pub Vec<Complex64>);

impl Deref for ComplexGaussianVector {
    type Target = [Complex64];

    fn deref(&self) -> &[Complex64] {
        &self.0
    }
}

/// One standard complex Gaussian: real and imaginary parts are `N(0, 1/2)`.
#[inline]
pub fn standard_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn sample_complex_gaussian<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
) -> Result<ComplexGaussianVector> {
    if n == 0 {
        return Err(Error::EmptyRequest("sample_complex_gaussian called with n = 0"));
    }
    Ok(ComplexGaussianVector(
        (0..n).map(|_| standard_complex(rng)).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn unit_variance_and_circular_symmetry() {
        let v = sample_complex_gaussian(100_000, &mut seeded(11)).unwrap();
        let n = v.len() as f64;
        let second: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>() / n;
        let mean: Complex64 = v.iter().sum::<Complex64>() / n;
        let pseudo: Complex64 = v.iter().map(|z| z * z).sum::<Complex64>() / n;
        assert!((second - 1.0).abs() < 0.02, "E|ζ|² = {second}");
        assert!(mean.norm() < 0.02);
        assert!(pseudo.norm() < 0.02, "E ζ² = {pseudo}");
    }

    #[test]
    fn coordinates_are_uncorrelated() {
        let v = sample_complex_gaussian(200_000, &mut seeded(5)).unwrap();
        let pairs = v.len() / 2;
        let cross: Complex64 = (0..pairs)
            .map(|i| v[2 * i] * v[2 * i + 1].conj())
            .sum::<Complex64>()
            / pairs as f64;
        assert!(cross.norm() < 0.02);
    }

    #[test]
    fn deterministic_given_seed() {
        let a = sample_complex_gaussian(64, &mut seeded(99)).unwrap();
        let b = sample_complex_gaussian(64, &mut seeded(99)).unwrap();
        assert!(a.iter().zip(b.iter()).all(|(x, y)| x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits()));
    }

    #[test]
    fn zero_count_is_rejected() {
        assert!(matches!(
            sample_complex_gaussian(0, &mut seeded(1)),
            Err(Error::EmptyRequest(_))
        ));
    }
}
