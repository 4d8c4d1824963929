use num_complex::Complex64;

use crate::{Error, Result};

/// Which Gaussian analytic function the covariance kernel belongs to.
#[derive(Clone, Debug, PartialEq)]
pub enum KernelSpec {
    /// `K(z, w) = e^{z w̄}`.
    Gef,
    /// `f(z) = Σ_{n ≤ N} ζ_n c_n z^n`, `K(z, w) = Σ c_n² (z w̄)^n`.
    /// `coefficients[n]` holds `c_n`; the degree is `len - 1`.
    GaussianPolynomial { coefficients: Vec<f64> },
}

impl KernelSpec {
    /// Gaussian polynomial with all `c_n = 1`, e.g. `f_{2k-1}`.
    pub fn flat_polynomial(degree: usize) -> Self {
        KernelSpec::GaussianPolynomial {
            coefficients: vec![1.0; degree + 1],
        }
    }

    /// `ln K(z, z)`.
    pub fn log_diagonal(&self, z: Complex64) -> f64 {
        match self {
            KernelSpec::Gef => z.norm_sqr(),
            KernelSpec::GaussianPolynomial { coefficients } => {
                let t = z.norm_sqr();
                let mut acc = 0.0;
                let mut pow = 1.0;
                for c in coefficients {
                    acc += c * c * pow;
                    pow *= t;
                }
                acc.ln()
            }
        }
    }

    /// `∂_z^{dz} ∂_{w̄}^{dw} K(z, w) · e^{-ln K(z,z)/2 - ln K(w,w)/2}`.
    ///
    /// The exponential part of the GEF kernel is combined before
    /// exponentiation, so the result stays finite for any `|z|`, `|w|`.
    pub(crate) fn normalized(&self, z: Complex64, w: Complex64, dz: u8, dw: u8) -> Complex64 {
        match self {
            KernelSpec::Gef => {
                let exponent = z * w.conj() - 0.5 * (z.norm_sqr() + w.norm_sqr());
                exponent.exp() * gef_factor(z, w, dz, dw)
            }
            KernelSpec::GaussianPolynomial { .. } => {
                let scale = (-0.5 * (self.log_diagonal(z) + self.log_diagonal(w))).exp();
                self.raw_polynomial(z, w, dz, dw) * scale
            }
        }
    }

    fn raw_polynomial(&self, z: Complex64, w: Complex64, dz: u8, dw: u8) -> Complex64 {
        let KernelSpec::GaussianPolynomial { coefficients } = self else {
            unreachable!("raw_polynomial on a non-polynomial kernel")
        };
        let wb = w.conj();
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, c) in coefficients.iter().enumerate() {
            let weight = c * c;
            if weight == 0.0 {
                continue;
            }
            let (pz, pw) = (n as i32 - dz as i32, n as i32 - dw as i32);
            if pz < 0 || pw < 0 {
                continue;
            }
            let mut term = Complex64::new(weight, 0.0) * z.powi(pz) * wb.powi(pw);
            if dz == 1 {
                term *= n as f64;
            }
            if dw == 1 {
                term *= n as f64;
            }
            acc += term;
        }
        acc
    }
}

fn gef_factor(z: Complex64, w: Complex64, dz: u8, dw: u8) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    match (dz, dw) {
        (0, 0) => one,
        (1, 0) => w.conj(),
        (0, 1) => z,
        _ => one + z * w.conj(),
    }
}

/// Mixed derivative `∂_z^{dz} ∂_{w̄}^{dw} K(z, w)` in closed form.
///
/// For the GEF: `e^{zw̄}`, `w̄e^{zw̄}`, `z e^{zw̄}`, `(1+zw̄)e^{zw̄}`.
pub fn kernel_eval(spec: &KernelSpec, z: Complex64, w: Complex64, dz: u8, dw: u8) -> Result<Complex64> {
    if dz > 1 || dw > 1 {
        return Err(Error::UnsupportedOrder { dz, dw });
    }
    Ok(match spec {
        KernelSpec::Gef => (z * w.conj()).exp() * gef_factor(z, w, dz, dw),
        KernelSpec::GaussianPolynomial { .. } => spec.raw_polynomial(z, w, dz, dw),
    })
}

/// `|K(z,w)| / √(K(z,z) K(w,w))`; equals `e^{-|z-w|²/2}` for the GEF.
pub fn normalized_kernel_modulus(spec: &KernelSpec, z: Complex64, w: Complex64) -> f64 {
    spec.normalized(z, w, 0, 0).norm()
}

/// `|E{T_{w1}F(λ1) · conj(T_{w2}F(λ2))}|` for the projective shifts
/// `T_w F(z) = F(w+z) e^{-z w̄} e^{-|w|²/2}` of the GEF.
pub fn shifted_pair_covariance(w1: Complex64, w2: Complex64, l1: Complex64, l2: Complex64) -> f64 {
    (0.5 * l1.norm_sqr() + 0.5 * l2.norm_sqr() - 0.5 * ((w1 + l1) - (w2 + l2)).norm_sqr()).exp()
}
