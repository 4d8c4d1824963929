//! Numerical laboratory for the zero process of the Gaussian entire function
//! `F(z) = Σ ζ_j z^j / √(j!)`.
//!
//! The crate is organised by subsystem:
//!
//! * [`gef`]: complex Gaussian sampling, the covariance kernel `e^{z w̄}` and its
//!   derivatives, block covariance matrices of `(F(z_i), F'(z_i))`, the
//!   projective shift.
//! * [`zeros`]: truncated replicas, certified zero extraction inside a trusted
//!   disk, linear statistics.
//! * [`correlations`]: exact k-point intensities through the Kac–Rice
//!   reduction to a permanent, truncated correlations, clustering and
//!   repulsion diagnostics, the Gaussian-polynomial joint zero density and the
//!   covering construction.
//! * [`partitions`]: set partitions and the moment/cumulant transforms.
//! * [`spectral`]: radial Fourier transforms and the spectral variance
//!   machinery for linear statistics.
//! * [`clt`]: ensembles of linear statistics, empirical cumulants and
//!   normality diagnostics.
//! * [`table`]: the columnar text format shared by every on-disk artifact.
//!
//! Natural units are used throughout: the zero intensity is `1/π`.

pub mod clt;
pub mod correlations;
pub mod error;
pub mod gef;
mod linalg;
pub mod partitions;
pub mod quadrature;
pub mod rng;
pub mod spectral;
pub mod table;
pub mod zeros;

pub use error::{Error, Result};
pub use num_complex::Complex64;
