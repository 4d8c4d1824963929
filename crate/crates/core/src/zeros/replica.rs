use num_complex::Complex64;
use rand::Rng;
use statrs::function::gamma::ln_gamma;

use crate::gef::sample_complex_gaussian;
use crate::rng::{replica_seed, seeded};
use crate::{Error, Result};

/// `⌈(R + 3)² + 6(R + 3)⌉`: the truncation degree used for a trusted radius `R`.
pub fn truncation_degree(r_trust: f64) -> usize {
    let s = r_trust.max(0.0) + 3.0;
    (s * s + 6.0 * s).ceil() as usize
}

/// A polynomial `Σ_{n≤N} ζ_n w_n z^n` stored as mantissas `ζ_n` and log
/// weights `ln w_n`.
///
/// For GEF replicas `w_n = 1/√(n!)`, which spans hundreds of orders of
/// magnitude over the degrees in use; keeping the weight separate lets
/// evaluation and root finding rescale without overflow.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedGef {
    seed: Option<u64>,
    zeta: Vec<Complex64>,
    log_weight: Vec<f64>,
}

impl TruncatedGef {
    /// The degree-`N` truncation of the GEF whose coefficients are drawn from
    /// the stream seeded by `seed`. Replicas of different degree built from the
    /// same seed share their leading coefficients.
    pub fn from_seed(seed: u64, degree: usize) -> Self {
        let mut rng = seeded(seed);
        let zeta = sample_complex_gaussian(degree + 1, &mut rng)
            .expect("degree + 1 ≥ 1")
            .0;
        let log_weight = (0..=degree).map(|n| -0.5 * ln_gamma(n as f64 + 1.0)).collect();
        Self {
            seed: Some(seed),
            zeta,
            log_weight,
        }
    }

    /// Replica `index` of the ensemble keyed by `base_seed`.
    pub fn replica(base_seed: u64, index: u64, degree: usize) -> Self {
        Self::from_seed(replica_seed(base_seed, index), degree)
    }

    /// An explicit polynomial with coefficients `coefficients[n]` of `z^n`.
    pub fn from_coefficients(coefficients: &[Complex64]) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::EmptyRequest("polynomial without coefficients"));
        }
        Ok(Self {
            seed: None,
            zeta: coefficients.to_vec(),
            log_weight: vec![0.0; coefficients.len()],
        })
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn degree(&self) -> usize {
        self.zeta.len() - 1
    }

    /// The same seeded replica truncated at another degree.
    pub fn with_degree(&self, degree: usize) -> Option<Self> {
        self.seed.map(|s| Self::from_seed(s, degree))
    }

    pub fn coefficient(&self, n: usize) -> Complex64 {
        self.zeta[n] * self.log_weight[n].exp()
    }

    pub(crate) fn mantissas(&self) -> &[Complex64] {
        &self.zeta
    }

    pub(crate) fn log_weights(&self) -> &[f64] {
        &self.log_weight
    }

    /// `F_N(z)` by Horner's rule; overflows for large `|z|`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        (0..=self.degree())
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, n| acc * z + self.coefficient(n))
    }

    /// `F_N(z) e^{-|z|²/2}`, evaluated term by term in log form; `O(1)` in
    /// magnitude for GEF replicas anywhere inside the trusted disk.
    pub fn eval_rescaled(&self, z: Complex64) -> Complex64 {
        let r2 = z.norm_sqr();
        if r2 == 0.0 {
            return self.coefficient(0);
        }
        let (lr, theta) = (0.5 * r2.ln(), z.arg());
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, (zeta, lw)) in self.zeta.iter().zip(&self.log_weight).enumerate() {
            let log_mag = n as f64 * lr + lw - 0.5 * r2;
            acc += zeta * Complex64::from_polar(log_mag.exp(), n as f64 * theta);
        }
        acc
    }

    /// The projective shift `T_w F(z) = F(w + z) e^{-z w̄} e^{-|w|²/2}`.
    pub fn eval_shifted(&self, w: Complex64, z: Complex64) -> Complex64 {
        let phase = Complex64::new(0.5 * z.norm_sqr(), -(z * w.conj()).im);
        self.eval_rescaled(w + z) * phase.exp()
    }
}

/// Draw a replica for trusted radius `r_trust`; its seed is taken from `rng`
/// and recorded, so the replica can be rebuilt from the seed alone.
pub fn sample_truncated_gef<R: Rng + ?Sized>(r_trust: f64, rng: &mut R) -> TruncatedGef {
    TruncatedGef::from_seed(rng.random(), truncation_degree(r_trust))
}
