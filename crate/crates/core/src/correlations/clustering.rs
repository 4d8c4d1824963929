use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{centred, permanent, PointConfiguration};
use crate::gef::{build_covariance, KernelSpec};
use crate::linalg::{self, CMat};
use crate::{Error, Result};

pub const MAX_CLUSTER_POINTS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClusteringGap {
    /// `ρ(Z) − ρ(Z_I) ρ(Z_J)`.
    pub additive_gap: f64,
    /// `ρ(Z) / (ρ(Z_I) ρ(Z_J))`.
    pub ratio: f64,
    /// `d(Z_I, Z_J)`.
    pub distance: f64,
}

/// Clustering gap for a configuration split into `I` and `J`.
///
/// Computed as a perturbation of the block-diagonal (independent-groups)
/// covariance so that no term is a difference of nearly equal numbers; the
/// gap stays accurate to full relative precision even when it is `~1e-20`.
/// With `A₀ = diag(A_II, A_JJ)` and `E = A − A₀` (likewise for `B`, `D`):
///
/// * `det A / det A₀ − 1 = det(I − A_II⁻¹ A_IJ A_JJ⁻¹ A_JI) − 1`, expanded in
///   principal minors;
/// * `Λ − Λ₀ = E_D − B*(A⁻¹ − A₀⁻¹)B − E_B*A₀⁻¹B₀ − B₀*A₀⁻¹E_B − E_B*A₀⁻¹E_B`
///   with `A⁻¹ − A₀⁻¹ = −A₀⁻¹ E A⁻¹`;
/// * `per(Λ₀ + δΛ) − per(Λ₀)` summed over non-empty row subsets taken from `δΛ`.
pub fn clustering_gap(spec: &KernelSpec, cfg: &PointConfiguration) -> Result<ClusteringGap> {
    let (gi, gj) = cfg
        .partition()
        .ok_or_else(|| Error::IncompleteInput("clustering gap needs a partition I, J".into()))?;
    let k = cfg.k();
    if k > MAX_CLUSTER_POINTS {
        return Err(Error::SizeLimit {
            what: "clustering gap",
            limit: MAX_CLUSTER_POINTS,
            requested: k,
        });
    }
    let distance = cfg.group_distance().expect("partition present");
    let order: Vec<usize> = gi.iter().chain(gj).cloned().collect();
    let pts = centred(spec, &cfg.subset(&order));
    let p = gi.len();
    let q = k - p;

    let cov = build_covariance(spec, &pts)?;
    let (a, b, d) = (cov.normalized_a(), cov.normalized_b(), cov.normalized_d());
    let block_diag = |m: &CMat| {
        let mut out = CMat::zeros(k, k);
        out.view_mut((0, 0), (p, p)).copy_from(&m.view((0, 0), (p, p)));
        out.view_mut((p, p), (q, q)).copy_from(&m.view((p, p), (q, q)));
        out
    };
    let ill = |piv: f64| Error::IllConditioned {
        smallest_eigenvalue: piv,
        threshold: 0.0,
    };
    let chol_a = linalg::cholesky(a, 0.0).map_err(ill)?;
    let a_ii = a.view((0, 0), (p, p)).into_owned();
    let a_jj = a.view((p, p), (q, q)).into_owned();
    let chol_i = linalg::cholesky(&a_ii, 0.0).map_err(ill)?;
    let chol_j = linalg::cholesky(&a_jj, 0.0).map_err(ill)?;
    let (inv_i, inv_j) = (chol_i.inverse(), chol_j.inverse());
    let mut a0_inv = CMat::zeros(k, k);
    a0_inv.view_mut((0, 0), (p, p)).copy_from(&inv_i);
    a0_inv.view_mut((p, p), (q, q)).copy_from(&inv_j);

    let x = a.view((0, p), (p, q)).into_owned();
    let m = &inv_i * &x * &inv_j * x.adjoint();
    let delta = linalg::det_identity_minus_minus_one(&m).re; // det A/det A₀ − 1

    let (a0, b0, d0) = (block_diag(a), block_diag(b), block_diag(d));
    let (ea, eb, ed) = (a - &a0, b - &b0, d - &d0);
    let a_inv = chol_a.inverse();
    let d_ainv = -(&a0_inv * &ea * &a_inv);
    let d_lambda = &ed
        - (b.adjoint() * &d_ainv * b
            + eb.adjoint() * &a0_inv * &b0
            + b0.adjoint() * &a0_inv * &eb
            + eb.adjoint() * &a0_inv * &eb);
    let lambda0 = &d0 - b0.adjoint() * &a0_inv * &b0;

    let per0 = permanent(&lambda0)?.re;
    let mut d_per = Complex64::new(0.0, 0.0);
    for mask in 1u32..(1u32 << k) {
        let mixed = DMatrix::from_fn(k, k, |r, c| if mask & (1 << r) != 0 { d_lambda[(r, c)] } else { lambda0[(r, c)] });
        d_per += permanent(&mixed)?;
    }
    let d_per = d_per.re;

    let det_ratio = 1.0 / (1.0 + delta); // det A₀ / det A
    let det_a0 = (chol_i.log_det() + chol_j.log_det()).exp();
    let norm = PI.powi(k as i32) * det_a0;
    let additive_gap = (d_per * det_ratio - per0 * delta / (1.0 + delta)) / norm;
    let product = per0 / norm;
    if !additive_gap.is_finite() || !product.is_finite() {
        return Err(Error::NonFinite("clustering gap"));
    }
    Ok(ClusteringGap {
        additive_gap,
        ratio: 1.0 + additive_gap / product,
        distance,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{hannay, kac_rice};
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn split(points: Vec<Complex64>, i: Vec<usize>, j: Vec<usize>) -> PointConfiguration {
        PointConfiguration::new(points).unwrap().with_partition(i, j).unwrap()
    }

    #[test]
    fn matches_direct_difference_at_short_range() {
        let spec = KernelSpec::Gef;
        for pts in [vec![c(0.0, 0.0), c(1.2, 0.5)], vec![c(0.0, 0.0), c(0.6, 0.1), c(1.5, -0.7)]] {
            let k = pts.len();
            let cfg = split(pts.clone(), (0..k - 1).collect(), vec![k - 1]);
            let g = clustering_gap(&spec, &cfg).unwrap();
            let direct = kac_rice(&spec, &pts).unwrap() - kac_rice(&spec, &pts[..k - 1]).unwrap() * kac_rice(&spec, &pts[k - 1..]).unwrap();
            assert!((g.additive_gap - direct).abs() < 1e-13, "{} vs {direct}", g.additive_gap);
        }
    }

    #[test]
    fn pair_gap_matches_hannay_tail() {
        // (g(d²/2) − 1)/π², evaluated at 60 digits with mpmath
        let frozen = [
            (4.0, 2.2120273904342359e-6),
            (5.0, 7.4156431401366073e-10),
            (6.0, 2.712093856371424e-14),
            (7.0, 1.1723923461173387e-19),
        ];
        for (d, want) in frozen {
            let g = clustering_gap(&KernelSpec::Gef, &split(vec![c(0.0, 0.0), c(d, 0.0)], vec![0], vec![1])).unwrap();
            assert!((g.additive_gap / want - 1.0).abs() < 1e-8, "d={d}: {} vs {want}", g.additive_gap);
            assert_eq!(g.distance, d);
        }
        let near = clustering_gap(&KernelSpec::Gef, &split(vec![c(0.0, 0.0), c(2.0, 0.0)], vec![0], vec![1])).unwrap();
        assert!((near.additive_gap - (hannay::rho2(2.0) - 1.0 / (PI * PI))).abs() < 1e-12);
    }

    #[test]
    fn far_pair_ratio_is_one() {
        let g = clustering_gap(&KernelSpec::Gef, &split(vec![c(0.0, 0.0), c(8.0, 0.0)], vec![0], vec![1])).unwrap();
        assert!((g.ratio - 1.0).abs() < 1e-10);
    }

    #[test]
    fn translation_leaves_outputs_unchanged() {
        let a = clustering_gap(&KernelSpec::Gef, &split(vec![c(0.0, 0.0), c(3.0, 1.0)], vec![0], vec![1])).unwrap();
        let b = clustering_gap(&KernelSpec::Gef, &split(vec![c(10.0, -5.0), c(13.0, -4.0)], vec![0], vec![1])).unwrap();
        assert!((a.additive_gap - b.additive_gap).abs() <= 1e-10 * a.additive_gap.abs());
        assert!((a.distance - b.distance).abs() < 1e-14);
    }

    #[test]
    fn three_point_gap_decays_superlinearly() {
        let mut logs = Vec::new();
        for d in [3.0, 4.0, 5.0, 6.0, 7.0] {
            let cfg = split(vec![c(0.0, 0.0), c(0.8, 0.3), c(0.8 + d, 0.3)], vec![0, 1], vec![2]);
            let g = clustering_gap(&KernelSpec::Gef, &cfg).unwrap();
            assert!((g.distance - d).abs() < 1e-12);
            logs.push(g.additive_gap.abs().ln());
        }
        let slopes: Vec<f64> = logs.windows(2).map(|w| w[1] - w[0]).collect();
        assert!(slopes.windows(2).all(|s| s[1] < s[0]), "{logs:?}");
    }

    #[test]
    fn requires_partition_and_small_k() {
        let cfg = PointConfiguration::new(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(clustering_gap(&KernelSpec::Gef, &cfg), Err(Error::IncompleteInput(_))));
        let five = split((0..5).map(|i| c(i as f64, 0.0)).collect(), vec![0, 1], vec![2, 3, 4]);
        assert!(matches!(clustering_gap(&KernelSpec::Gef, &five), Err(Error::SizeLimit { .. })));
    }
}
