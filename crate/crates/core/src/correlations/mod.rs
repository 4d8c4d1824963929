//! k-point intensities of GEF zeros and their diagnostics.
//!
//! The closed form conditions the derivatives on vanishing values: with the
//! block covariance `[[A, B], [B*, D]]` of `(F(z_i), F'(z_i))`, the conditional
//! covariance of the derivatives is `Λ = D − B*A⁻¹B`, the complex Wick formula
//! gives `E ∏|η_i|² = per(Λ)`, and
//!
//! ```text
//! ρ_k(z_1, ..., z_k) = per(Λ) / (π^k det A).
//! ```
//!
//! With this normalisation `ρ_1 = 1/π`.

mod clustering;
mod covering;
mod permanent;
mod polynomial;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::gef::{build_covariance, standard_complex, KernelSpec};
use crate::linalg::{self, CMat};
use crate::{Error, Result};

pub use clustering::{clustering_gap, ClusteringGap, MAX_CLUSTER_POINTS};
pub use covering::{covering, CoveringResult};
pub use permanent::{permanent, MAX_PERMANENT_SIZE};
pub use polynomial::{
    expected_zeros_within, gaussian_polynomial_zero_density, h_bound_ratio, normalization_check, polynomial_zero_density,
    polynomial_zero_density_constant, sample_polynomial_zeros,
};

/// Ordered distinct points, optionally split into two groups `I`, `J`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointConfiguration {
    points: Vec<Complex64>,
    partition: Option<(Vec<usize>, Vec<usize>)>,
}

impl PointConfiguration {
    pub fn new(points: Vec<Complex64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyRequest("point configuration without points"));
        }
        for i in 0..points.len() {
            if !points[i].re.is_finite() || !points[i].im.is_finite() {
                return Err(Error::NonFinite("point configuration"));
            }
            for j in (i + 1)..points.len() {
                if points[i] == points[j] {
                    return Err(Error::DegenerateConfiguration(i, j));
                }
            }
        }
        Ok(Self {
            points,
            partition: None,
        })
    }

    /// Attach the split `I ∪ J = {0, ..., k-1}` (zero-based indices).
    pub fn with_partition(mut self, i: Vec<usize>, j: Vec<usize>) -> Result<Self> {
        let k = self.points.len();
        if i.is_empty() || j.is_empty() {
            return Err(Error::IncompleteInput("both groups of a partition must be non-empty".into()));
        }
        let mut seen = vec![false; k];
        for &idx in i.iter().chain(&j) {
            if idx >= k || seen[idx] {
                return Err(Error::IncompleteInput(format!("partition index {idx} out of range or repeated")));
            }
            seen[idx] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::IncompleteInput("partition does not cover every point".into()));
        }
        self.partition = Some((i, j));
        Ok(self)
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn k(&self) -> usize {
        self.points.len()
    }

    pub fn partition(&self) -> Option<(&[usize], &[usize])> {
        self.partition.as_ref().map(|(i, j)| (i.as_slice(), j.as_slice()))
    }

    /// `d(Z_I, Z_J) = min |z_i − z_j|` over the two groups.
    pub fn group_distance(&self) -> Option<f64> {
        let (i, j) = self.partition()?;
        Some(
            i.iter()
                .flat_map(|&a| j.iter().map(move |&b| (a, b)))
                .map(|(a, b)| (self.points[a] - self.points[b]).norm())
                .fold(f64::INFINITY, f64::min),
        )
    }

    pub fn diameter(&self) -> f64 {
        let p = &self.points;
        let mut d: f64 = 0.0;
        for a in 0..p.len() {
            for b in (a + 1)..p.len() {
                d = d.max((p[a] - p[b]).norm());
            }
        }
        d
    }

    pub fn subset(&self, indices: &[usize]) -> Vec<Complex64> {
        indices.iter().map(|&i| self.points[i]).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntensityMethod {
    ClosedForm,
    MonteCarlo,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntensityValue {
    pub rho: f64,
    pub method: IntensityMethod,
    pub mc_std_error: f64,
}

/// GEF intensities are invariant under translation; evaluating at the
/// centroid keeps `Im(z w̄)` small and the phases exact.
pub(crate) fn centred(spec: &KernelSpec, points: &[Complex64]) -> Vec<Complex64> {
    match spec {
        KernelSpec::Gef => {
            let c = points.iter().sum::<Complex64>() / points.len() as f64;
            points.iter().map(|z| z - c).collect()
        }
        KernelSpec::GaussianPolynomial { .. } => points.to_vec(),
    }
}

/// `per(Λ)/(π^k det A)` for an explicit point list.
pub(crate) fn kac_rice(spec: &KernelSpec, points: &[Complex64]) -> Result<f64> {
    let k = points.len();
    if k > MAX_PERMANENT_SIZE {
        return Err(Error::SizeLimit {
            what: "k-point intensity",
            limit: MAX_PERMANENT_SIZE,
            requested: k,
        });
    }
    let pts = centred(spec, points);
    let cov = build_covariance(spec, &pts)?;
    let a = cov.normalized_a();
    let chol = linalg::cholesky(a, 0.0).map_err(|p| Error::IllConditioned {
        smallest_eigenvalue: p,
        threshold: 0.0,
    })?;
    let lambda = schur_complement(cov.normalized_d(), cov.normalized_b(), &chol);
    let per = permanent(&lambda)?.re;
    let rho = per / (PI.powi(k as i32) * chol.log_det().exp());
    if !rho.is_finite() {
        return Err(Error::NonFinite("k-point intensity"));
    }
    Ok(rho.max(0.0))
}

fn schur_complement(d: &CMat, b: &CMat, chol_a: &linalg::Cholesky) -> CMat {
    let lambda = d - b.adjoint() * chol_a.solve(b);
    // exact Hermitian symmetry for the permanent
    (&lambda + lambda.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Closed-form k-point intensity.
pub fn rho_k_closed_form(spec: &KernelSpec, cfg: &PointConfiguration) -> Result<IntensityValue> {
    Ok(IntensityValue {
        rho: kac_rice(spec, cfg.points())?,
        method: IntensityMethod::ClosedForm,
        mc_std_error: 0.0,
    })
}

/// Monte Carlo estimate of the Kac–Rice Gaussian integral.
///
/// Independent of the Schur-complement/permanent route: the precision matrix
/// `P = Γ⁻¹` is formed from a factorisation of the full covariance, the
/// conditioned derivatives `η ~ CN(0, P_DD⁻¹)` are sampled directly, and
/// `ρ = E ∏|η_i|² / (π^k det Γ det P_DD)`.
pub fn rho_k_monte_carlo<R: Rng + ?Sized>(
    spec: &KernelSpec,
    cfg: &PointConfiguration,
    samples: usize,
    rng: &mut R,
) -> Result<IntensityValue> {
    if samples == 0 {
        return Err(Error::EmptyRequest("rho_k_monte_carlo needs at least one sample"));
    }
    let k = cfg.k();
    let pts = centred(spec, cfg.points());
    let cov = build_covariance(spec, &pts)?;
    let g = cov.assembled();
    let chol_g = linalg::cholesky(&g, 0.0).map_err(|p| Error::IllConditioned {
        smallest_eigenvalue: p,
        threshold: 0.0,
    })?;
    let p = chol_g.inverse();
    let pdd = p.view((k, k), (k, k)).into_owned();
    let pdd = (&pdd + pdd.adjoint()) * Complex64::new(0.5, 0.0);
    let chol_p = linalg::cholesky(&pdd, 0.0).map_err(|p| Error::IllConditioned {
        smallest_eigenvalue: p,
        threshold: 0.0,
    })?;
    let l = &chol_p.l;
    let mut xi = vec![Complex64::new(0.0, 0.0); k];
    let (mut mean, mut m2) = (0.0, 0.0);
    for s in 0..samples {
        for x in xi.iter_mut() {
            *x = standard_complex(rng);
        }
        // η = L^{-*} ξ by back substitution
        for i in (0..k).rev() {
            let mut v = xi[i];
            for j in (i + 1)..k {
                v -= l[(j, i)].conj() * xi[j];
            }
            xi[i] = v / l[(i, i)].re;
        }
        let prod: f64 = xi.iter().map(|e| e.norm_sqr()).product();
        let delta = prod - mean;
        mean += delta / (s + 1) as f64;
        m2 += delta * (prod - mean);
    }
    let scale = 1.0 / (PI.powi(k as i32) * (chol_g.log_det() + chol_p.log_det()).exp());
    let var = if samples > 1 { m2 / (samples - 1) as f64 } else { 0.0 };
    Ok(IntensityValue {
        rho: mean * scale,
        method: IntensityMethod::MonteCarlo,
        mc_std_error: (var / samples as f64).sqrt() * scale,
    })
}

pub const MAX_TRUNCATED_POINTS: usize = 5;

/// Truncated correlation `ρ_k^T`.
///
/// For `k = 2` this is the clustering gap with `I = {1}`, `J = {2}`, computed
/// without cancellation; for larger `k` the closed-form intensities of all
/// sub-configurations are combined over set partitions.
pub fn rho_truncated(spec: &KernelSpec, cfg: &PointConfiguration) -> Result<f64> {
    let k = cfg.k();
    if k > MAX_TRUNCATED_POINTS {
        return Err(Error::SizeLimit {
            what: "truncated correlation",
            limit: MAX_TRUNCATED_POINTS,
            requested: k,
        });
    }
    match k {
        1 => kac_rice(spec, cfg.points()),
        2 => {
            let split = cfg.clone().with_partition(vec![0], vec![1])?;
            Ok(clustering_gap(spec, &split)?.additive_gap)
        }
        _ => {
            let values = subset_intensities(spec, cfg)?;
            crate::partitions::truncated_from_correlations(k, &values)
        }
    }
}

/// `ρ(Z_S)` for every non-empty subset `S`, keyed by bit mask.
pub fn subset_intensities(spec: &KernelSpec, cfg: &PointConfiguration) -> Result<BTreeMap<u32, f64>> {
    let k = cfg.k();
    let mut out = BTreeMap::new();
    for mask in 1u32..(1u32 << k) {
        let idx: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        out.insert(mask, kac_rice(spec, &cfg.subset(&idx))?);
    }
    Ok(out)
}

/// Like [`subset_intensities`], but a subset whose covariance is too
/// ill-conditioned to factor (two points within about `1e-3`) is given the
/// value `0`, the coincidence limit of any `ρ_j` with `j ≥ 2`.
pub fn subset_intensities_tolerant(spec: &KernelSpec, cfg: &PointConfiguration) -> Result<BTreeMap<u32, f64>> {
    let k = cfg.k();
    let mut out = BTreeMap::new();
    for mask in 1u32..(1u32 << k) {
        let idx: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        let v = match kac_rice(spec, &cfg.subset(&idx)) {
            Err(Error::IllConditioned { .. }) if idx.len() >= 2 => 0.0,
            other => other?,
        };
        out.insert(mask, v);
    }
    Ok(out)
}

/// `ℓ(t) = min(t², 1)`.
pub fn ell(t: f64) -> f64 {
    (t * t).min(1.0)
}

pub const MAX_PRODUCT_BOUND_POINTS: usize = 4;

/// `ρ(Z) / ∏_{i<j} ℓ(|z_i − z_j|)`.
pub fn product_bound_ratio(spec: &KernelSpec, cfg: &PointConfiguration) -> Result<f64> {
    if cfg.k() > MAX_PRODUCT_BOUND_POINTS {
        return Err(Error::SizeLimit {
            what: "product bound ratio",
            limit: MAX_PRODUCT_BOUND_POINTS,
            requested: cfg.k(),
        });
    }
    let rho = kac_rice(spec, cfg.points())?;
    let p = cfg.points();
    let mut denom = 1.0;
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            denom *= ell((p[i] - p[j]).norm());
        }
    }
    Ok(rho / denom)
}

#[cfg(test)]
pub(crate) mod hannay {
    /// Two-point function of GEF zeros at separation `r` (natural units):
    /// `ρ_2 = g(r²/2)/π²`, `g(t) = ((sinh²t + t²) cosh t − 2t sinh t)/sinh³t`.
    pub fn rho2(r: f64) -> f64 {
        let t = 0.5 * r * r;
        let g = if t < 0.1 {
            let t2 = t * t;
            t * (1.0 + t2 * (-2.0 / 9.0 + t2 * (2.0 / 45.0 + t2 * (-4.0 / 525.0 + t2 * 2.0 / 1701.0))))
        } else if t > 30.0 {
            1.0 + 4.0 * t * t * (-2.0 * t).exp()
        } else {
            let (s, c) = (t.sinh(), t.cosh());
            ((s * s + t * t) * c - 2.0 * t * s) / (s * s * s)
        };
        g / (std::f64::consts::PI * std::f64::consts::PI)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cfg(points: &[Complex64]) -> PointConfiguration {
        PointConfiguration::new(points.to_vec()).unwrap()
    }

    #[test]
    fn one_point_intensity_is_one_over_pi() {
        for z in [c(0.0, 0.0), c(3.0, -4.0), c(25.0, 10.0)] {
            let v = rho_k_closed_form(&KernelSpec::Gef, &cfg(&[z])).unwrap();
            assert!((v.rho - 1.0 / PI).abs() < 1e-12, "{z}: {}", v.rho);
            assert_eq!(v.method, IntensityMethod::ClosedForm);
        }
    }

    #[test]
    fn two_point_matches_hannay() {
        for r in [0.05, 0.3, 1.0, 1.7, 2.5, 4.0] {
            let rho = rho_k_closed_form(&KernelSpec::Gef, &cfg(&[c(0.2, 0.1), c(0.2 + r, 0.1)])).unwrap().rho;
            let want = hannay::rho2(r);
            assert!((rho - want).abs() < 1e-9 * want.max(1e-6), "r={r}: {rho} vs {want}");
        }
    }

    #[test]
    fn two_point_far_apart_factorises() {
        let rho = rho_k_closed_form(&KernelSpec::Gef, &cfg(&[c(0.0, 0.0), c(6.0, 0.0)])).unwrap().rho;
        assert!((rho * PI * PI - 1.0).abs() < 1e-6);
    }

    #[test]
    fn quadratic_vanishing_at_short_range() {
        let vals: Vec<f64> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&e| rho_k_closed_form(&KernelSpec::Gef, &cfg(&[c(0.0, 0.0), c(e, 0.0)])).unwrap().rho / (e * e))
            .collect();
        for w in vals.windows(2) {
            assert!((w[1] / w[0] - 1.0).abs() < 0.05, "{vals:?}");
        }
        // g ≈ r²/2 gives ρ_2/ε² → 1/(2π²)
        assert!((vals[2] * 2.0 * PI * PI - 1.0).abs() < 1e-3, "{vals:?}");
    }

    #[test]
    fn monte_carlo_oracle_k1_and_errors() {
        let mut rng = seeded(1);
        let v = rho_k_monte_carlo(&KernelSpec::Gef, &cfg(&[c(0.5, 0.5)]), 200_000, &mut rng).unwrap();
        assert!((v.rho - 1.0 / PI).abs() < 3.0 * v.mc_std_error, "{v:?}");
        assert!(matches!(
            rho_k_monte_carlo(&KernelSpec::Gef, &cfg(&[c(0.5, 0.5)]), 0, &mut rng),
            Err(Error::EmptyRequest(_))
        ));
        assert!(matches!(
            PointConfiguration::new(vec![c(1.0, 0.0), c(1.0, 0.0)]),
            Err(Error::DegenerateConfiguration(0, 1))
        ));
        let near = cfg(&[c(1.0, 0.0), c(1.0 + 1e-9, 0.0)]);
        assert!(matches!(
            rho_k_monte_carlo(&KernelSpec::Gef, &near, 10, &mut rng),
            Err(Error::IllConditioned { .. })
        ));
        assert!(matches!(rho_k_closed_form(&KernelSpec::Gef, &near), Err(Error::IllConditioned { .. })));
    }

    #[test]
    fn monte_carlo_oracle_k2_k3() {
        let mut rng = seeded(2);
        for pts in [vec![c(0.0, 0.0), c(0.8, 0.3)], vec![c(0.0, 0.0), c(1.1, 0.2), c(0.4, -0.9)]] {
            let exact = rho_k_closed_form(&KernelSpec::Gef, &cfg(&pts)).unwrap().rho;
            let mc = rho_k_monte_carlo(&KernelSpec::Gef, &cfg(&pts), 300_000, &mut rng).unwrap();
            assert!((mc.rho - exact).abs() < 3.0 * mc.mc_std_error, "{exact} vs {mc:?}");
        }
    }

    #[test]
    fn truncated_low_orders() {
        let spec = KernelSpec::Gef;
        let one = rho_truncated(&spec, &cfg(&[c(0.3, 0.0)])).unwrap();
        assert!((one - 1.0 / PI).abs() < 1e-12);
        let pair = [c(0.0, 0.0), c(0.9, -0.4)];
        let t2 = rho_truncated(&spec, &cfg(&pair)).unwrap();
        let direct = kac_rice(&spec, &pair).unwrap() - 1.0 / (PI * PI);
        assert!((t2 - direct).abs() < 1e-13, "{t2} {direct}");
        let z = [c(0.0, 0.0), c(0.9, -0.4), c(-0.3, 1.0)];
        let r = |idx: &[usize]| kac_rice(&spec, &idx.iter().map(|&i| z[i]).collect::<Vec<_>>()).unwrap();
        let want = r(&[0, 1, 2]) - (r(&[0, 1]) * r(&[2]) + r(&[0, 2]) * r(&[1]) + r(&[1, 2]) * r(&[0]))
            + 2.0 * r(&[0]) * r(&[1]) * r(&[2]);
        let t3 = rho_truncated(&spec, &cfg(&z)).unwrap();
        assert!((t3 - want).abs() < 1e-14, "{t3} {want}");
    }

    #[test]
    fn truncated_correlations_decay_fast() {
        // pair: successive log-ratios grow, so the decay beats any power
        let mut logs = Vec::new();
        for d in [2.0, 4.0, 6.0, 8.0] {
            logs.push(rho_truncated(&KernelSpec::Gef, &cfg(&[c(0.0, 0.0), c(d, 0.0)])).unwrap().abs().ln());
        }
        let steps: Vec<f64> = logs.windows(2).map(|w| w[0] - w[1]).collect();
        assert!(steps.windows(2).all(|s| s[1] > s[0]), "{logs:?}");
        // triple: below a Gaussian envelope once the far point leaves the
        // pair (the partition sum bottoms out near 1e-16, so d stays small)
        for d in [3.0, 3.5, 4.0, 4.5] {
            let t = rho_truncated(&KernelSpec::Gef, &cfg(&[c(0.0, 0.0), c(0.7, 0.2), c(d, 0.0)])).unwrap();
            assert!(t.abs() < (-d * d / 4.0).exp() * 1e-2, "d={d}: {t:e}");
        }
    }

    #[test]
    fn product_bound_cases() {
        let v = product_bound_ratio(&KernelSpec::Gef, &cfg(&[c(1.0, 1.0)])).unwrap();
        assert!((v - 1.0 / PI).abs() < 1e-12);
        let v = product_bound_ratio(&KernelSpec::Gef, &cfg(&[c(0.0, 0.0), c(3.0, 0.0)])).unwrap();
        assert!((v * PI * PI - 1.0).abs() < 0.01, "{v}");
    }

    #[test]
    fn pair_count_estimator_matches_closed_form() {
        use crate::zeros::{find_zeros, truncation_degree, TruncatedGef};
        let (r_trust, r0, half_width) = (8.5, 4.0, 0.1);
        let radii = [0.5, 1.0, 2.0, 4.0];
        let replicas = 1500;
        let mut counts = vec![Vec::with_capacity(replicas); radii.len()];
        for i in 0..replicas {
            let zs = find_zeros(&TruncatedGef::replica(4242, i as u64, truncation_degree(r_trust)), r_trust).unwrap();
            let mut c_i = vec![0.0; radii.len()];
            for a in zs.zeros.iter().filter(|a| a.norm() <= r0) {
                for b in &zs.zeros {
                    let d = (a - b).norm();
                    for (bin, r) in radii.iter().enumerate() {
                        if d > 0.0 && (d - r).abs() < half_width {
                            c_i[bin] += 1.0;
                        }
                    }
                }
            }
            for (bin, v) in c_i.into_iter().enumerate() {
                counts[bin].push(v);
            }
        }
        for (bin, r) in radii.iter().enumerate() {
            let ann = PI * ((r + half_width).powi(2) - (r - half_width).powi(2));
            let norm = PI * r0 * r0 * ann;
            let xs = &counts[bin];
            let mean = xs.iter().sum::<f64>() / replicas as f64;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (replicas - 1) as f64;
            let est = mean / norm;
            let se = (var / replicas as f64).sqrt() / norm;
            // annulus average of the closed form
            let rule = crate::quadrature::CompositeRule::new(r - half_width, r + half_width, 4, 8);
            let want = rule.integrate(|s| 2.0 * PI * s * kac_rice(&KernelSpec::Gef, &[c(0.0, 0.0), c(s, 0.0)]).unwrap()) / ann;
            assert!((est - want).abs() < 4.0 * se, "r={r}: {est} ± {se} vs {want}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn permutation_and_isometry_invariance(
            xs in proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 2..4),
            shift in (-20.0f64..20.0, -20.0f64..20.0),
            angle in 0.0f64..6.28,
        ) {
            let pts: Vec<Complex64> = xs.iter().map(|&(x, y)| c(x, y)).collect();
            let min_gap = (0..pts.len())
                .flat_map(|i| ((i + 1)..pts.len()).map(move |j| (i, j)))
                .map(|(i, j)| (pts[i] - pts[j]).norm())
                .fold(f64::INFINITY, f64::min);
            prop_assume!(min_gap > 0.05);
            let Ok(base) = PointConfiguration::new(pts.clone()) else { return Ok(()) };
            let Ok(rho) = kac_rice(&KernelSpec::Gef, base.points()) else { return Ok(()) };
            prop_assume!(rho > 1e-12);
            let rot = Complex64::from_polar(1.0, angle);
            let moved: Vec<Complex64> = pts.iter().map(|z| z * rot + c(shift.0, shift.1)).collect();
            let rho_moved = kac_rice(&KernelSpec::Gef, &moved).unwrap();
            prop_assert!((rho_moved - rho).abs() <= 1e-10 * rho, "{} vs {}", rho, rho_moved);
            let mut perm = pts.clone();
            perm.reverse();
            let rho_perm = kac_rice(&KernelSpec::Gef, &perm).unwrap();
            prop_assert!((rho_perm - rho).abs() <= 1e-12 * rho);
        }
    }
}
