use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use zerolab::clt::{
    chi_square_test, empirical_cumulants, kolmogorov_critical, normality_report, run_ensemble, scaling_fit,
};
use zerolab::correlations::{
    clustering_gap, covering, expected_zeros_within, rho_k_closed_form, rho_k_monte_carlo, rho_truncated,
    sample_polynomial_zeros, CoveringResult, PointConfiguration,
};
use zerolab::gef::KernelSpec;
use zerolab::rng::{replica_seed, substream};
use zerolab::spectral::{
    indicator_variance_growth, mollified_indicator, natural_to_unit, superhomogeneity_integral, variance_exact,
    variance_lower_bound, RadialKernel, RadialProfile,
};
use zerolab::table::Table;
use zerolab::zeros::TestFunction;
use zerolab::Complex64;

use crate::config::{positive, positive_list, Params, Resolved, StatisticSpec};
use crate::manifest::Output;
use crate::CliError;

type Outputs = Result<Vec<Output>, CliError>;

fn no_replicas(section: &str) -> Result<(), String> {
    Err(format!("--replicas does not apply to {section}"))
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// Least-squares slope and intercept of `y` on `x`.
fn line_fit(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    if x.len() < 2 {
        return None;
    }
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    (sxx > 0.0).then(|| (sxy / sxx, my - sxy / sxx * mx))
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// ---------------------------------------------------------------- intensity

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntensityParams {
    /// Orders k; the configuration is a regular k-gon of side r (k = 1: the point r).
    pub orders: Vec<usize>,
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
    /// Side lengths at which the Monte Carlo oracle is run.
    pub oracle_radii: Vec<f64>,
    pub mc_samples: usize,
}

impl Default for IntensityParams {
    fn default() -> Self {
        Self {
            orders: vec![1, 2, 3],
            r_min: 0.05,
            r_max: 8.0,
            points: 80,
            oracle_radii: vec![0.5, 1.0, 2.0, 4.0],
            mc_samples: 200_000,
        }
    }
}

impl Params for IntensityParams {
    const SECTION: &'static str = "intensity";

    fn set_replicas(&mut self, n: usize) -> Result<(), String> {
        self.mc_samples = n;
        Ok(())
    }

    fn validate(&self) -> Result<(), String> {
        if self.orders.is_empty() || self.orders.iter().any(|k| !(1..=4).contains(k)) {
            return Err(format!("orders must be a non-empty list within 1..=4, got {:?}", self.orders));
        }
        positive("r_min", self.r_min)?;
        positive("r_max", self.r_max)?;
        if self.r_max <= self.r_min || self.points < 2 {
            return Err("need r_max > r_min and at least 2 points".into());
        }
        positive_list("oracle_radii", &self.oracle_radii)?;
        if self.mc_samples == 0 {
            return Err("mc_samples must be positive".into());
        }
        Ok(())
    }
}

fn polygon(k: usize, side: f64) -> Vec<Complex64> {
    if k == 1 {
        return vec![c(side, 0.0)];
    }
    let rad = side / (2.0 * (PI / k as f64).sin());
    (0..k).map(|j| Complex64::from_polar(rad, 2.0 * PI * j as f64 / k as f64)).collect()
}

pub fn intensity(cfg: &Resolved<IntensityParams>) -> Outputs {
    let p = &cfg.params;
    let spec = KernelSpec::Gef;
    let mut out = Vec::new();
    for &k in &p.orders {
        // Tight clusters of three or more points fall below the covariance
        // conditioning threshold; such rows are counted, not emitted.
        let rows: Vec<Option<Vec<f64>>> = linspace(p.r_min, p.r_max, p.points)
            .into_par_iter()
            .map(|r| -> zerolab::Result<Option<Vec<f64>>> {
                let conf = PointConfiguration::new(polygon(k, r))?;
                let eval = || -> zerolab::Result<Vec<f64>> {
                    let rho = rho_k_closed_form(&spec, &conf)?.rho;
                    let trunc = rho_truncated(&spec, &conf)?;
                    Ok(vec![r, rho, trunc, rho * PI.powi(k as i32)])
                };
                match eval() {
                    Ok(row) => Ok(Some(row)),
                    Err(zerolab::Error::IllConditioned { .. }) => Ok(None),
                    Err(e) => Err(e),
                }
            })
            .collect::<zerolab::Result<_>>()?;
        let mut t = Table::new(["r", "rho", "rho_truncated", "rho_over_rho1_pow_k"])
            .with_meta("k", k)
            .with_meta("configuration", if k == 1 { "point_at_r" } else { "regular_polygon_side_r" })
            .with_meta("skipped_ill_conditioned", rows.iter().filter(|r| r.is_none()).count());
        for row in rows.into_iter().flatten() {
            t.push(row)?;
        }
        out.push(Output::new(format!("intensity_k{k}.tsv"), t));

        let rows: Vec<Vec<f64>> = p
            .oracle_radii
            .par_iter()
            .enumerate()
            .map(|(i, &r)| -> zerolab::Result<Vec<f64>> {
                let conf = PointConfiguration::new(polygon(k, r))?;
                let exact = rho_k_closed_form(&spec, &conf)?.rho;
                let mut rng = substream(cfg.seed, (k * 1000 + i) as u64);
                let mc = rho_k_monte_carlo(&spec, &conf, p.mc_samples, &mut rng)?;
                Ok(vec![r, exact, mc.rho, mc.mc_std_error, (mc.rho - exact) / mc.mc_std_error])
            })
            .collect::<zerolab::Result<_>>()?;
        let mut t = Table::new(["r", "closed_form", "monte_carlo", "mc_std_error", "z_score"])
            .with_meta("k", k)
            .with_meta("samples", p.mc_samples);
        for row in rows {
            t.push(row)?;
        }
        out.push(Output::new(format!("oracle_k{k}.tsv"), t));
    }
    Ok(out)
}

// ------------------------------------------------------------- cluster-scan

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClusterScanParams {
    pub orders: Vec<usize>,
    pub d_min: f64,
    pub d_max: f64,
    pub points: usize,
    /// Spacing of the points inside a group.
    pub group_spacing: f64,
    /// Rows with `d < 2Δ` are flagged as outside the clustering regime.
    pub delta_estimate: f64,
}

impl Default for ClusterScanParams {
    fn default() -> Self {
        Self {
            orders: vec![2, 3, 4],
            d_min: 3.0,
            d_max: 7.0,
            points: 17,
            group_spacing: 0.7,
            delta_estimate: 1.5,
        }
    }
}

impl Params for ClusterScanParams {
    const SECTION: &'static str = "cluster_scan";

    fn set_replicas(&mut self, _: usize) -> Result<(), String> {
        no_replicas(Self::SECTION)
    }

    fn validate(&self) -> Result<(), String> {
        if self.orders.is_empty() || self.orders.iter().any(|k| !(2..=4).contains(k)) {
            return Err(format!("orders must be a non-empty list within 2..=4, got {:?}", self.orders));
        }
        positive("d_min", self.d_min)?;
        positive("group_spacing", self.group_spacing)?;
        if !(self.delta_estimate >= 0.0) {
            return Err("delta_estimate must be nonnegative".into());
        }
        if self.d_max <= self.d_min || self.points < 2 {
            return Err("need d_max > d_min and at least 2 points".into());
        }
        Ok(())
    }
}

/// Groups of sizes `⌈k/2⌉` and `⌊k/2⌋`, each a vertical segment, the second
/// shifted right by `d`; the group distance is exactly `d`.
fn separated_groups(k: usize, d: f64, s: f64) -> zerolab::Result<PointConfiguration> {
    let left = k.div_ceil(2);
    let mut pts: Vec<Complex64> = (0..left).map(|j| c(0.0, s * j as f64)).collect();
    pts.extend((0..k - left).map(|j| c(d, s * j as f64)));
    PointConfiguration::new(pts)?.with_partition((0..left).collect(), (left..k).collect())
}

pub fn cluster_scan(cfg: &Resolved<ClusterScanParams>) -> Outputs {
    let p = &cfg.params;
    let spec = KernelSpec::Gef;
    let ds = linspace(p.d_min, p.d_max, p.points);
    let pair: Vec<f64> = ds
        .par_iter()
        .map(|&d| clustering_gap(&spec, &separated_groups(2, d, p.group_spacing)?).map(|g| g.additive_gap.abs()))
        .collect::<zerolab::Result<_>>()?;
    let mut out = Vec::new();
    for &k in &p.orders {
        let gaps: Vec<_> = ds
            .par_iter()
            .map(|&d| clustering_gap(&spec, &separated_groups(k, d, p.group_spacing)?))
            .collect::<zerolab::Result<_>>()?;
        let mut t = Table::new(["d", "additive_gap", "ratio_minus_one", "in_regime", "pair_envelope", "gap_over_envelope"])
            .with_meta("k", k)
            .with_meta("delta_estimate", p.delta_estimate);
        let (mut x, mut y) = (Vec::new(), Vec::new());
        for ((d, g), env) in ds.iter().zip(&gaps).zip(&pair) {
            let in_regime = *d >= 2.0 * p.delta_estimate;
            if in_regime && g.additive_gap != 0.0 {
                x.push(d * d);
                y.push(g.additive_gap.abs().ln());
            }
            let rel = if *env > 0.0 { g.additive_gap.abs() / env } else { 0.0 };
            t.push(vec![*d, g.additive_gap, g.ratio - 1.0, f64::from(u8::from(in_regime)), *env, rel])?;
        }
        if let Some((slope, intercept)) = line_fit(&x, &y) {
            t.set_meta("log_gap_slope_vs_d2", zerolab::table::format_f64(slope));
            t.set_meta("log_gap_intercept", zerolab::table::format_f64(intercept));
        }
        out.push(Output::new(format!("cluster_k{k}.tsv"), t));
    }
    Ok(out)
}

// ---------------------------------------------------------------------- clt

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct CltParams {
    pub scales: Vec<f64>,
    pub replicas: usize,
    pub statistic: StatisticSpec,
    /// Also write the per-replica values of every scale.
    pub emit_values: bool,
}

impl Default for CltParams {
    fn default() -> Self {
        Self {
            scales: vec![5.0, 10.0, 20.0],
            replicas: 2000,
            statistic: StatisticSpec::default(),
            emit_values: true,
        }
    }
}

impl Params for CltParams {
    const SECTION: &'static str = "clt";

    fn set_replicas(&mut self, n: usize) -> Result<(), String> {
        self.replicas = n;
        Ok(())
    }

    fn validate(&self) -> Result<(), String> {
        positive_list("scales", &self.scales)?;
        if self.replicas < zerolab::clt::MIN_REPLICAS {
            return Err(format!("replicas must be at least {}", zerolab::clt::MIN_REPLICAS));
        }
        self.statistic.to_test_function().validate().map_err(|e| e.to_string())
    }
}

pub fn clt(cfg: &Resolved<CltParams>) -> Outputs {
    let p = &cfg.params;
    let h = p.statistic.to_test_function();
    let mut out = Vec::new();
    let mut t = Table::new([
        "R",
        "replicas",
        "mean",
        "variance",
        "variance_se",
        "skewness",
        "skewness_se",
        "excess_kurtosis",
        "excess_kurtosis_se",
        "ks_distance",
        "ks_lattice",
        "ks_critical_01",
        "s3_star",
        "s4_star",
        "s5_star",
        "s6_star",
    ]);
    let mut variances = Vec::new();
    for (i, &r) in p.scales.iter().enumerate() {
        let run = run_ensemble(&h, r, p.replicas, replica_seed(cfg.seed, i as u64))?;
        let cum = empirical_cumulants(&run, 2)?;
        let rep = normality_report(&run)?;
        variances.push(run.summary.variance);
        let mut row = vec![
            r,
            p.replicas as f64,
            run.summary.mean,
            run.summary.variance,
            cum.std_errors[1],
            rep.skewness,
            rep.skewness_se,
            rep.excess_kurtosis,
            rep.excess_kurtosis_se,
            rep.ks_distance,
            rep.ks_lattice.unwrap_or(rep.ks_distance),
            kolmogorov_critical(p.replicas, 0.01),
        ];
        row.extend(&rep.cumulant_decay);
        t.push(row)?;
        if p.emit_values {
            let mut v = Table::new(["replica", "value"]).with_meta("R", r);
            for (j, x) in run.values.iter().enumerate() {
                v.push(vec![j as f64, *x])?;
            }
            out.push(Output::new(format!("clt_values_R{r}.tsv"), v));
        }
    }
    if p.scales.len() >= 3 {
        let fit = scaling_fit(&variances, &p.scales)?;
        t.set_meta("variance_exponent", zerolab::table::format_f64(fit.exponent));
        t.set_meta("variance_constant", zerolab::table::format_f64(fit.constant));
        t.set_meta("variance_fit_residual", zerolab::table::format_f64(fit.residual));
    }
    out.insert(0, Output::new("clt_normality.tsv", t));
    Ok(out)
}

// ----------------------------------------------------------------- variance

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct VarianceParams {
    /// Scales R in natural units (the disk statistic counts zeros in `|z| ≤ R·radius`).
    pub scales: Vec<f64>,
    pub disk_radius: f64,
    pub gaussian_width: f64,
    pub kernel_step: f64,
    pub kernel_r_max: f64,
    pub mollifier_scales: Vec<f64>,
    /// Replicas for the empirical disk-count variance; 0 skips the ensemble.
    pub replicas: usize,
}

impl Default for VarianceParams {
    fn default() -> Self {
        Self {
            scales: vec![5.0, 10.0, 20.0, 40.0],
            disk_radius: 1.0,
            gaussian_width: 1.0,
            kernel_step: 0.01,
            kernel_r_max: 8.0,
            mollifier_scales: vec![4.0, 8.0, 16.0],
            replicas: 0,
        }
    }
}

impl Params for VarianceParams {
    const SECTION: &'static str = "variance";

    fn set_replicas(&mut self, n: usize) -> Result<(), String> {
        self.replicas = n;
        Ok(())
    }

    fn validate(&self) -> Result<(), String> {
        positive_list("scales", &self.scales)?;
        positive_list("mollifier_scales", &self.mollifier_scales)?;
        positive("disk_radius", self.disk_radius)?;
        positive("gaussian_width", self.gaussian_width)?;
        positive("kernel_step", self.kernel_step)?;
        positive("kernel_r_max", self.kernel_r_max)?;
        if self.replicas != 0 && self.replicas < zerolab::clt::MIN_REPLICAS {
            return Err(format!("replicas must be 0 or at least {}", zerolab::clt::MIN_REPLICAS));
        }
        Ok(())
    }
}

pub fn variance(cfg: &Resolved<VarianceParams>) -> Outputs {
    let p = &cfg.params;
    let natural = RadialKernel::gef(p.kernel_step, p.kernel_r_max)?;
    let kappa = natural.to_unit_intensity();
    let mut out = Vec::new();

    let mut t = Table::new(["r", "kappa"]).with_meta("units", "natural");
    for (i, v) in natural.values().iter().enumerate() {
        t.push(vec![i as f64 * natural.step(), *v])?;
    }
    out.push(Output::new("variance_kernel.tsv", t));

    // Natural-unit profiles, evaluated at the unit-intensity scale R/√π.
    let profiles = [
        RadialProfile::Disk { radius: p.disk_radius },
        RadialProfile::Gaussian {
            width: p.gaussian_width,
        },
    ];
    let mut t = Table::new(["profile", "R", "exact", "lower_bound", "bound_frequency", "exact_over_R2", "exact_over_R"])
        .with_meta("profile_ids", "0=disk,1=gaussian");
    let mut disk_exact = Vec::new();
    let mut bound_holds = true;
    for (id, h) in profiles.iter().enumerate() {
        for &r in &p.scales {
            let ru = natural_to_unit(r);
            let exact = variance_exact(h, ru, &kappa)?;
            let lb = variance_lower_bound(h, ru, &kappa)?;
            bound_holds &= lb.value <= exact;
            if id == 0 {
                disk_exact.push(exact);
            }
            t.push(vec![id as f64, r, exact, lb.value, lb.c, exact / (r * r), exact / r])?;
        }
    }
    out.push(Output::new("variance_scales.tsv", t));

    let shi = superhomogeneity_integral(&kappa)?;
    let disk = TestFunction::Disk {
        center: c(0.0, 0.0),
        radius: p.disk_radius,
    };
    let mut t = Table::new(["superhomogeneity", "relative_error", "lower_bound_holds"]);
    let mut row = vec![shi, (shi + 1.0).abs(), f64::from(u8::from(bound_holds))];
    if p.scales.len() >= 3 {
        let g = indicator_variance_growth(&disk, &p.scales, &disk_exact)?;
        t.columns.extend(["growth_exponent".to_string(), "growth_c".to_string()]);
        row.extend([g.exponent, g.c]);
    }
    t.push(row)?;
    out.push(Output::new("variance_summary.tsv", t));

    let mut t = Table::new(["R", "grad_max", "grad_over_R", "l2_error", "area_half", "ratio_to_previous"])
        .with_meta("set", "disk")
        .with_meta("first_row_ratio", "0");
    let mut prev: Option<f64> = None;
    for &r in &p.mollifier_scales {
        let m = mollified_indicator(&disk, r)?;
        let ratio = prev.map_or(0.0, |g| m.grad_max / g);
        prev = Some(m.grad_max);
        t.push(vec![r, m.grad_max, m.grad_max / r, m.l2_error, m.area_half, ratio])?;
    }
    out.push(Output::new("mollifier.tsv", t));

    if p.replicas > 0 {
        let mut t = Table::new(["R", "exact", "empirical", "empirical_se", "z_score"]).with_meta("replicas", p.replicas);
        for (i, (&r, exact)) in p.scales.iter().zip(&disk_exact).enumerate() {
            let run = run_ensemble(&disk, r, p.replicas, replica_seed(cfg.seed, i as u64))?;
            let se = empirical_cumulants(&run, 2)?.std_errors[1];
            let emp = run.summary.variance;
            t.push(vec![r, *exact, emp, se, (emp - exact) / se])?;
        }
        out.push(Output::new("variance_empirical.tsv", t));
    }
    Ok(out)
}

// ------------------------------------------------------------ density-check

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct DensityCheckParams {
    pub degree: usize,
    pub samples: usize,
    /// Bins uniform in `u = |z|²/(1 + |z|²)`.
    pub bins: usize,
    pub alpha: f64,
}

impl Default for DensityCheckParams {
    fn default() -> Self {
        Self {
            degree: 1,
            samples: 100_000,
            bins: 20,
            alpha: 0.01,
        }
    }
}

impl Params for DensityCheckParams {
    const SECTION: &'static str = "density_check";

    fn set_replicas(&mut self, n: usize) -> Result<(), String> {
        self.samples = n;
        Ok(())
    }

    fn validate(&self) -> Result<(), String> {
        if !(1..=64).contains(&self.degree) {
            return Err("degree must be within 1..=64".into());
        }
        if self.samples == 0 || self.bins < 2 {
            return Err("need positive samples and at least 2 bins".into());
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err("alpha must lie in (0, 1)".into());
        }
        Ok(())
    }
}

pub fn density_check(cfg: &Resolved<DensityCheckParams>) -> Outputs {
    let p = &cfg.params;
    let per_sample: Vec<Vec<usize>> = (0..p.samples as u64)
        .into_par_iter()
        .map(|i| -> zerolab::Result<Vec<usize>> {
            let mut rng = substream(cfg.seed, i);
            let zs = sample_polynomial_zeros(p.degree, &mut rng)?;
            Ok(zs
                .iter()
                .map(|z| {
                    let t = z.norm_sqr();
                    ((t / (1.0 + t) * p.bins as f64) as usize).min(p.bins - 1)
                })
                .collect())
        })
        .collect::<zerolab::Result<_>>()?;
    let mut counts = vec![0u64; p.bins];
    for b in per_sample.iter().flatten() {
        counts[*b] += 1;
    }
    let edges = linspace(0.0, 1.0, p.bins + 1);
    let cdf = |u: f64| {
        let t = if u >= 1.0 { f64::INFINITY } else { u / (1.0 - u) };
        expected_zeros_within(p.degree, t) / p.degree as f64
    };
    let probs: Vec<f64> = edges.windows(2).map(|w| cdf(w[1]) - cdf(w[0])).collect();
    let test = chi_square_test(&counts, &probs)?;
    let total: u64 = counts.iter().sum();
    let mut t = Table::new(["u_lo", "u_hi", "observed", "expected", "pearson_residual"])
        .with_meta("degree", p.degree)
        .with_meta("chi_square", zerolab::table::format_f64(test.statistic))
        .with_meta("dof", test.dof)
        .with_meta("p_value", zerolab::table::format_f64(test.p_value))
        .with_meta("pass", test.p_value >= p.alpha);
    for (i, w) in edges.windows(2).enumerate() {
        let e = probs[i] * total as f64;
        t.push(vec![w[0], w[1], counts[i] as f64, e, (counts[i] as f64 - e) / e.sqrt()])?;
    }
    Ok(vec![Output::new("density_bins.tsv", t)])
}

// ------------------------------------------------------------ covering-demo

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoveringDemoParams {
    pub sets: usize,
    pub max_points: usize,
    pub box_side: f64,
    /// `d̲(ρ) = d_constant + d_slope · ρ`.
    pub d_constant: f64,
    pub d_slope: f64,
}

impl Default for CoveringDemoParams {
    fn default() -> Self {
        Self {
            sets: 1000,
            max_points: 10,
            box_side: 10.0,
            d_constant: 2.0,
            d_slope: 0.5,
        }
    }
}

impl Params for CoveringDemoParams {
    const SECTION: &'static str = "covering_demo";

    fn set_replicas(&mut self, n: usize) -> Result<(), String> {
        self.sets = n;
        Ok(())
    }

    fn validate(&self) -> Result<(), String> {
        if self.sets == 0 || self.max_points == 0 {
            return Err("sets and max_points must be positive".into());
        }
        positive("box_side", self.box_side)?;
        positive("d_constant", self.d_constant)?;
        if !(self.d_slope >= 0.0) {
            return Err("d_slope must be nonnegative".into());
        }
        Ok(())
    }
}

pub fn covering_demo(cfg: &Resolved<CoveringDemoParams>) -> Outputs {
    let p = &cfg.params;
    let d_low = |rho: f64| p.d_constant + p.d_slope * rho;
    let rows: Vec<Vec<f64>> = (0..p.sets as u64)
        .into_par_iter()
        .map(|i| -> zerolab::Result<Vec<f64>> {
            let mut rng = substream(cfg.seed, i);
            let k = rng.random_range(1..=p.max_points);
            let pts: Vec<Complex64> = (0..k)
                .map(|_| c(rng.random::<f64>() * p.box_side, rng.random::<f64>() * p.box_side))
                .collect();
            let res = covering(&pts, d_low)?;
            res.verify(&pts, d_low)?;
            Ok(vec![
                i as f64,
                k as f64,
                res.centers.len() as f64,
                res.radius,
                CoveringResult::recursion_bound(k, d_low),
                d_low(res.radius),
                (res.radius_history.len() - 1) as f64,
            ])
        })
        .collect::<zerolab::Result<_>>()?;
    let mut t = Table::new(["set", "points", "centers", "radius", "recursion_bound", "d_low_at_radius", "merges"])
        .with_meta("d_low", format!("{}+{}*rho", p.d_constant, p.d_slope));
    for row in rows {
        t.push(row)?;
    }
    Ok(vec![Output::new("covering.tsv", t)])
}
