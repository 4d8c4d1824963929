//! Small dense complex linear algebra used by the covariance code.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub(crate) type CMat = DMatrix<Complex64>;

/// Lower-triangular Cholesky factor `L` with `M = L L*`.
pub(crate) struct Cholesky {
    pub l: CMat,
}

/// Hermitian Cholesky factorisation. Returns `Err(min_pivot)` when a pivot
/// drops to or below `threshold` (pivots are the diagonal of `L`, squared).
pub(crate) fn cholesky(m: &CMat, threshold: f64) -> Result<Cholesky, f64> {
    let n = m.nrows();
    let mut l = CMat::zeros(n, n);
    let mut min_pivot = f64::INFINITY;
    for j in 0..n {
        let mut diag = m[(j, j)].re;
        for p in 0..j {
            diag -= l[(j, p)].norm_sqr();
        }
        min_pivot = min_pivot.min(diag);
        if !(diag > threshold) {
            return Err(min_pivot);
        }
        let ljj = diag.sqrt();
        l[(j, j)] = Complex64::new(ljj, 0.0);
        for i in (j + 1)..n {
            let mut s = m[(i, j)];
            for p in 0..j {
                s -= l[(i, p)] * l[(j, p)].conj();
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(Cholesky { l })
}

impl Cholesky {
    pub fn log_det(&self) -> f64 {
        (0..self.l.nrows()).map(|i| 2.0 * self.l[(i, i)].re.ln()).sum()
    }

    /// Solves `M X = B` column by column.
    pub fn solve(&self, b: &CMat) -> CMat {
        let n = self.l.nrows();
        let mut x = b.clone();
        for c in 0..b.ncols() {
            // forward: L y = b
            for i in 0..n {
                let mut s = x[(i, c)];
                for p in 0..i {
                    s -= self.l[(i, p)] * x[(p, c)];
                }
                x[(i, c)] = s / self.l[(i, i)].re;
            }
            // backward: L* x = y
            for i in (0..n).rev() {
                let mut s = x[(i, c)];
                for p in (i + 1)..n {
                    s -= self.l[(p, i)].conj() * x[(p, c)];
                }
                x[(i, c)] = s / self.l[(i, i)].re;
            }
        }
        x
    }

    pub fn inverse(&self) -> CMat {
        self.solve(&CMat::identity(self.l.nrows(), self.l.nrows()))
    }
}

/// Smallest eigenvalue of a Hermitian matrix.
pub(crate) fn min_eigenvalue(m: &CMat) -> f64 {
    let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    sym.symmetric_eigenvalues()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// Generalised Hermitian eigenvalues of the pencil `(m, base)`, i.e. the
/// spectrum of `base^{-1/2} m base^{-1/2}`, with `base` positive definite.
#[cfg(test)]
pub(crate) fn generalized_eigenvalues(m: &CMat, base: &CMat) -> Option<Vec<f64>> {
    let chol = cholesky(base, 0.0).ok()?;
    let n = m.nrows();
    // W = L^{-1} M L^{-*}
    let linv = chol.l.clone().try_inverse()?;
    let w = &linv * m * linv.adjoint();
    let w = (&w + w.adjoint()) * Complex64::new(0.5, 0.0);
    let mut ev: Vec<f64> = w.symmetric_eigenvalues().iter().cloned().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    debug_assert_eq!(ev.len(), n);
    Some(ev)
}

/// `det(I - M) - 1` without cancellation for small `M`: the alternating sum of
/// principal minors over non-empty index subsets.
pub(crate) fn det_identity_minus_minus_one(m: &CMat) -> Complex64 {
    let n = m.nrows();
    assert!(n <= 16, "principal-minor expansion limited to small matrices");
    let mut total = Complex64::new(0.0, 0.0);
    for mask in 1u32..(1u32 << n) {
        let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let sub = CMat::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])]);
        let minor = sub.determinant();
        if idx.len() % 2 == 1 {
            total -= minor;
        } else {
            total += minor;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cholesky_reconstructs_hermitian_matrix() {
        let m = CMat::from_row_slice(
            3,
            3,
            &[
                c(4.0, 0.0),
                c(1.0, 1.0),
                c(0.0, -0.5),
                c(1.0, -1.0),
                c(3.0, 0.0),
                c(0.2, 0.0),
                c(0.0, 0.5),
                c(0.2, 0.0),
                c(2.0, 0.0),
            ],
        );
        let ch = cholesky(&m, 1e-12).unwrap();
        let back = &ch.l * ch.l.adjoint();
        assert!((back - &m).norm() < 1e-12);
        let inv = ch.inverse();
        assert!((&inv * &m - CMat::identity(3, 3)).norm() < 1e-12);
        assert!((ch.log_det() - m.determinant().re.ln()).abs() < 1e-12);
    }

    #[test]
    fn cholesky_rejects_singular_matrix() {
        let m = CMat::from_element(2, 2, c(1.0, 0.0));
        assert!(cholesky(&m, 1e-12).is_err());
    }

    #[test]
    fn principal_minor_expansion_matches_determinant() {
        let m = CMat::from_fn(3, 3, |i, j| c(0.01 * (i + 2 * j) as f64, 0.003 * (i as f64 - j as f64)));
        let direct = (CMat::identity(3, 3) - &m).determinant() - c(1.0, 0.0);
        assert!((direct - det_identity_minus_minus_one(&m)).norm() < 1e-15);
    }
}
