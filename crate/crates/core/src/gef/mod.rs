//! Gaussian entire function primitives.
//!
//! The GEF `F(z) = Σ ζ_j z^j/√(j!)` has covariance kernel
//! `E{F(z) F̄(w)} = e^{z w̄}`. Everything downstream (intensities, clustering,
//! variance) is driven by this kernel and its first mixed derivatives.

mod covariance;
mod kernel;
mod sampling;

pub use covariance::{build_covariance, functional_variance, BlockCovariance, FunctionalCoefficients};
pub use kernel::{kernel_eval, normalized_kernel_modulus, shifted_pair_covariance, KernelSpec};
pub use sampling::{sample_complex_gaussian, standard_complex, ComplexGaussianVector};
