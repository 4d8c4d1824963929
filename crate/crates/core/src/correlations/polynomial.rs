//! Joint density of the zeros of Gaussian polynomials with i.i.d. standard
//! complex coefficients.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::gef::standard_complex;
use crate::quadrature::rqmc_mean;
use crate::zeros::{aberth, polish};
use crate::{Error, Result};

/// Coefficients `σ_0, ..., σ_n` of `∏ (z − z_i)` (so `σ_n = 1`).
fn elementary_coefficients(zeros: &[Complex64]) -> Vec<Complex64> {
    let mut sigma = vec![Complex64::new(1.0, 0.0)];
    for z in zeros {
        let mut next = vec![Complex64::new(0.0, 0.0); sigma.len() + 1];
        for (k, s) in sigma.iter().enumerate() {
            next[k + 1] += s;
            next[k] -= s * z;
        }
        sigma = next;
    }
    sigma
}

/// `C_k = π^{-(2k-1)}`: the Jacobian of `(a_n, z_1..z_n) ↦ a_n ∏(z − z_i)` is
/// `|a_n|^{2n} |Δ(z)|²`, and integrating out `a_n` against `π^{-(n+1)} e^{-|a|²}`
/// gives `π^{-n} |Δ|² (Σ|σ_j|²)^{-(n+1)}` for the density of the zeros listed
/// in uniformly random order.
pub fn polynomial_zero_density_constant(k: usize) -> f64 {
    PI.powi(-(2 * k as i32 - 1))
}

/// Joint density of the zeros of a degree-`n` polynomial with i.i.d.
/// standard complex coefficients, zeros in uniformly random order:
/// `π^{-n} ∏_{i<j} |z_i − z_j|² (Σ_j |σ_j|²)^{-(n+1)}`.
///
/// Coincident points give exactly zero.
pub fn gaussian_polynomial_zero_density(zeros: &[Complex64]) -> f64 {
    let n = zeros.len();
    let mut log_vdm = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (zeros[i] - zeros[j]).norm_sqr();
            if d == 0.0 {
                return 0.0;
            }
            log_vdm += d.ln();
        }
    }
    let s: f64 = elementary_coefficients(zeros).iter().map(|c| c.norm_sqr()).sum();
    (log_vdm - (n + 1) as f64 * s.ln() - n as f64 * PI.ln()).exp()
}

/// Joint density of the `2k − 1` zeros of `f_{2k−1}`.
pub fn polynomial_zero_density(zeros: &[Complex64], k: usize) -> Result<f64> {
    if k == 0 || zeros.len() != 2 * k - 1 {
        return Err(Error::Shape {
            expected: (2 * k).saturating_sub(1),
            found: zeros.len(),
        });
    }
    Ok(gaussian_polynomial_zero_density(zeros))
}

/// `H · ∏_{i=k+1}^{2k-1} (1 + |z_i|)^4` where `H = p / ∏_{1≤i<j≤k} |z_i − z_j|²`.
/// Bounded when `z_1..z_k` stay in a compact set.
pub fn h_bound_ratio(zeros: &[Complex64], k: usize) -> Result<f64> {
    if k == 0 || zeros.len() != 2 * k - 1 {
        return Err(Error::Shape {
            expected: (2 * k).saturating_sub(1),
            found: zeros.len(),
        });
    }
    let n = zeros.len();
    let mut log_h = -(n as f64) * PI.ln();
    for i in 0..n {
        for j in (i + 1)..n {
            if j < k {
                continue;
            }
            log_h += (zeros[i] - zeros[j]).norm_sqr().ln();
        }
    }
    let s: f64 = elementary_coefficients(zeros).iter().map(|c| c.norm_sqr()).sum();
    log_h -= (n + 1) as f64 * s.ln();
    let weight: f64 = zeros[k..].iter().map(|z| 4.0 * (1.0 + z.norm()).ln()).sum();
    Ok((log_h + weight).exp())
}

/// Expected number of zeros of `Σ_{j≤n} ζ_j z^j` in `|z|² ≤ t`, which is
/// `t K'(t)/K(t)` for `K(t) = Σ_{j≤n} t^j` (the flux of `∇ log K` through the
/// circle). Degree one gives `t/(1+t)`.
pub fn expected_zeros_within(degree: usize, t: f64) -> f64 {
    if t.is_infinite() {
        return degree as f64;
    }
    // weights t^j relative to the largest term
    let (num, den) = if t <= 1.0 {
        (0..=degree).fold((0.0, 0.0), |(a, b), j| {
            let w = t.powi(j as i32);
            (a + j as f64 * w, b + w)
        })
    } else {
        let s = 1.0 / t;
        (0..=degree).fold((0.0, 0.0), |(a, b), j| {
            let w = s.powi((degree - j) as i32);
            (a + j as f64 * w, b + w)
        })
    };
    num / den
}

/// Zeros of `Σ_{j≤n} ζ_j z^j` with i.i.d. standard complex `ζ_j`, in random
/// order (Aberth's output order carries no information about the law).
pub fn sample_polynomial_zeros<R: Rng + ?Sized>(degree: usize, rng: &mut R) -> Result<Vec<Complex64>> {
    if degree == 0 {
        return Err(Error::NoZeros);
    }
    let a: Vec<Complex64> = (0..=degree).map(|_| standard_complex(rng)).collect();
    let mut roots = if degree == 1 {
        vec![-a[0] / a[1]]
    } else {
        let r = aberth(&a);
        if !r.converged.iter().all(|c| *c) {
            return Err(Error::RootFinder {
                seed: None,
                reason: format!("Aberth did not converge for degree {degree}"),
            });
        }
        r.roots.into_iter().map(|u| polish(&a, u)).collect()
    };
    // Fisher–Yates, so labelled zeros are exchangeable
    for i in (1..roots.len()).rev() {
        roots.swap(i, rng.random_range(0..=i));
    }
    Ok(roots)
}

/// Randomised-QMC estimate of `∫_{ℂ^n} p dA` for `n = 2k − 1`, mapping each
/// coordinate through `|z|² = u/(1 − u)`, `arg z = 2πv` (so
/// `dA = π du dv / (1 − u)²`). Returns `(estimate, standard error)`.
pub fn normalization_check(k: usize, points: u64, seed: u64) -> (f64, f64) {
    let n = 2 * k - 1;
    rqmc_mean(2 * n, points, 16, seed, |x| {
        let mut zs = [Complex64::new(0.0, 0.0); 16];
        let mut jac = 1.0;
        for i in 0..n {
            let (u, v) = (x[2 * i], x[2 * i + 1]);
            if u >= 1.0 {
                return 0.0;
            }
            let r = (u / (1.0 - u)).sqrt();
            zs[i] = Complex64::from_polar(r, 2.0 * PI * v);
            jac *= PI / ((1.0 - u) * (1.0 - u));
        }
        gaussian_polynomial_zero_density(&zs[..n]) * jac
    })
}
