use nalgebra::DMatrix;
use num_complex::Complex64;

use super::KernelSpec;
use crate::linalg::{self, CMat};
use crate::{Error, Result};

/// Relative pivot threshold for the positive-definiteness check: a pivot must
/// exceed `PD_RELATIVE_THRESHOLD · trace(Γ)/(2k)`.
pub const PD_RELATIVE_THRESHOLD: f64 = 1e-12;

/// Covariance of `(F(z_1), F'(z_1), ..., F(z_k), F'(z_k))`.
///
/// Blocks are stored normalised: row/column `i` (value or derivative) is
/// multiplied by `e^{-s_i}` with `s_i = ½ ln K(z_i, z_i)`. The normalisation is
/// a congruence by a positive diagonal matrix, so it cancels in the Kac–Rice
/// ratio `per(Λ)/det A` and keeps every entry `O(1)` in magnitude. The raw
/// blocks are available through [`a`](Self::a), [`b`](Self::b),
/// [`d`](Self::d).
///
/// Block layout: `A_ij = K(z_i, z_j)`, `B_ij = ∂_{w̄}K(z_i, w)|_{w=z_j}`,
/// `D_ij = ∂_z∂_{w̄}K(z, w)|_{z_i, z_j}`; the assembled matrix in block order is
/// `[[A, B], [B*, D]]`. The interleaved order is obtained by the fixed
/// permutation `value i → 2i`, `derivative i → 2i+1`.
#[derive(Clone, Debug)]
pub struct BlockCovariance {
    points: Vec<Complex64>,
    log_scale: Vec<f64>,
    a: CMat,
    b: CMat,
    d: CMat,
}

impl BlockCovariance {
    pub fn k(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// `s_i = ½ ln K(z_i, z_i)`.
    pub fn log_scale(&self) -> &[f64] {
        &self.log_scale
    }

    pub fn normalized_a(&self) -> &CMat {
        &self.a
    }

    pub fn normalized_b(&self) -> &CMat {
        &self.b
    }

    pub fn normalized_d(&self) -> &CMat {
        &self.d
    }

    fn unscale(&self, m: &CMat) -> CMat {
        CMat::from_fn(m.nrows(), m.ncols(), |i, j| {
            m[(i, j)] * (self.log_scale[i] + self.log_scale[j]).exp()
        })
    }

    /// Raw value-value block. Overflows for `|z| ≳ 26`; prefer the normalised blocks.
    pub fn a(&self) -> CMat {
        self.unscale(&self.a)
    }

    pub fn b(&self) -> CMat {
        self.unscale(&self.b)
    }

    pub fn d(&self) -> CMat {
        self.unscale(&self.d)
    }

    /// Normalised `2k × 2k` matrix in block order (values first).
    pub fn assembled(&self) -> CMat {
        let k = self.k();
        let mut g = CMat::zeros(2 * k, 2 * k);
        g.view_mut((0, 0), (k, k)).copy_from(&self.a);
        g.view_mut((0, k), (k, k)).copy_from(&self.b);
        g.view_mut((k, 0), (k, k)).copy_from(&self.b.adjoint());
        g.view_mut((k, k), (k, k)).copy_from(&self.d);
        g
    }

    /// Normalised matrix in interleaved order `(F(z_1), F'(z_1), ...)`.
    pub fn assembled_interleaved(&self) -> CMat {
        let k = self.k();
        let g = self.assembled();
        let perm = |i: usize| if i % 2 == 0 { i / 2 } else { k + i / 2 };
        CMat::from_fn(2 * k, 2 * k, |i, j| g[(perm(i), perm(j))])
    }

    /// Raw (unnormalised) matrix in interleaved order.
    pub fn assembled_raw_interleaved(&self) -> CMat {
        let g = self.assembled_interleaved();
        let s = &self.log_scale;
        CMat::from_fn(g.nrows(), g.ncols(), |i, j| g[(i, j)] * (s[i / 2] + s[j / 2]).exp())
    }
}

/// Assemble the block covariance of `(F(z_i), F'(z_i))` and check positive
/// definiteness by attempted Cholesky factorisation.
pub fn build_covariance(spec: &KernelSpec, points: &[Complex64]) -> Result<BlockCovariance> {
    let k = points.len();
    if k == 0 {
        return Err(Error::EmptyRequest("build_covariance needs at least one point"));
    }
    for i in 0..k {
        for j in (i + 1)..k {
            if points[i] == points[j] {
                return Err(Error::DegenerateConfiguration(i, j));
            }
        }
    }
    let log_scale: Vec<f64> = points.iter().map(|&z| 0.5 * spec.log_diagonal(z)).collect();
    let mut a = CMat::zeros(k, k);
    let mut d = CMat::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let av = spec.normalized(points[i], points[j], 0, 0);
            let dv = spec.normalized(points[i], points[j], 1, 1);
            if i == j {
                a[(i, i)] = Complex64::new(av.re, 0.0);
                d[(i, i)] = Complex64::new(dv.re, 0.0);
            } else {
                a[(i, j)] = av;
                a[(j, i)] = av.conj();
                d[(i, j)] = dv;
                d[(j, i)] = dv.conj();
            }
        }
    }
    let b = DMatrix::from_fn(k, k, |i, j| spec.normalized(points[i], points[j], 0, 1));
    let cov = BlockCovariance {
        points: points.to_vec(),
        log_scale,
        a,
        b,
        d,
    };
    if cov.a.iter().chain(cov.b.iter()).chain(cov.d.iter()).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("covariance blocks"));
    }
    let g = cov.assembled();
    let threshold = pd_threshold(&g);
    if linalg::cholesky(&g, threshold).is_err() {
        return Err(Error::IllConditioned {
            smallest_eigenvalue: linalg::min_eigenvalue(&g),
            threshold,
        });
    }
    Ok(cov)
}

pub(crate) fn pd_threshold(g: &CMat) -> f64 {
    let trace: f64 = (0..g.nrows()).map(|i| g[(i, i)].re).sum();
    PD_RELATIVE_THRESHOLD * trace / g.nrows() as f64
}

/// Coefficients of `L f = Σ_j [α_j f(z_j) + β_j f'(z_j)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionalCoefficients {
    alpha: Vec<Complex64>,
    beta: Vec<Complex64>,
}

impl FunctionalCoefficients {
    pub fn new(alpha: Vec<Complex64>, beta: Vec<Complex64>) -> Result<Self> {
        if alpha.len() != beta.len() {
            return Err(Error::Shape {
                expected: alpha.len(),
                found: beta.len(),
            });
        }
        if alpha.iter().chain(beta.iter()).all(|c| *c == Complex64::new(0.0, 0.0)) {
            return Err(Error::EmptyRequest("functional with all coefficients zero"));
        }
        Ok(Self { alpha, beta })
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn alpha(&self) -> &[Complex64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Complex64] {
        &self.beta
    }

    /// `δ = (α_1, β_1, ..., α_k, β_k)`.
    pub fn interleaved(&self) -> Vec<Complex64> {
        self.alpha
            .iter()
            .zip(&self.beta)
            .flat_map(|(a, b)| [*a, *b])
            .collect()
    }
}

/// `E|Lf|² = Σ_{a,b} δ_a δ̄_b Γ_ab` with `Γ_ab = E{X_a X̄_b}` in interleaved order.
pub fn functional_variance(cov: &BlockCovariance, delta: &FunctionalCoefficients) -> Result<f64> {
    if delta.len() != cov.k() {
        return Err(Error::Shape {
            expected: cov.k(),
            found: delta.len(),
        });
    }
    let g = cov.assembled_interleaved();
    // absorb the normalisation into δ
    let scaled: Vec<Complex64> = delta
        .interleaved()
        .into_iter()
        .enumerate()
        .map(|(i, x)| x * cov.log_scale[i / 2].exp())
        .collect();
    let mut q = Complex64::new(0.0, 0.0);
    for (a, da) in scaled.iter().enumerate() {
        for (b, db) in scaled.iter().enumerate() {
            q += da * db.conj() * g[(a, b)];
        }
    }
    Ok(q.re.max(0.0))
}
