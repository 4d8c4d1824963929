//! Ensembles of linear statistics and the empirical side of the cumulant
//! method: moments, cumulants with jackknife errors, normality diagnostics
//! and power-law fits across scales.

use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::partitions::{moments_to_cumulants, CompensatedSum};
use crate::zeros::{find_zeros, linear_statistic, truncation_degree, TestFunction, TruncatedGef};
use crate::{Error, Result};

pub const MIN_REPLICAS: usize = 100;
pub const JACKKNIFE_BLOCKS: usize = 50;
pub const MAX_CUMULANT_ORDER: usize = 6;

/// Mean and central moments `μ_2..μ_6` of an ensemble, summed in index order.
#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub variance: f64,
    /// `central[k]` is `(1/n) Σ (x − mean)^k`, for `k = 0..=6`.
    pub central: [f64; 7],
}

impl Summary {
    pub fn from_values(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mut s = CompensatedSum::default();
        for v in values {
            s.add(*v);
        }
        let mean = s.value() / n;
        let mut central = [0.0; 7];
        central[0] = 1.0;
        for (k, c) in central.iter_mut().enumerate().skip(1) {
            let mut acc = CompensatedSum::default();
            for v in values {
                acc.add((v - mean).powi(k as i32));
            }
            *c = acc.value() / n;
        }
        let variance = if values.len() > 1 { central[2] * n / (n - 1.0) } else { 0.0 };
        Self { mean, variance, central }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleRun {
    pub base_seed: u64,
    pub replicas: usize,
    pub r: f64,
    pub h: TestFunction,
    pub values: Vec<f64>,
    pub summary: Summary,
}

impl EnsembleRun {
    /// Wrap externally produced values (synthetic samples, stored runs).
    pub fn from_values(values: Vec<f64>, r: f64, h: TestFunction, base_seed: u64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyRequest("ensemble has no values"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("ensemble values"));
        }
        Ok(Self {
            base_seed,
            replicas: values.len(),
            r,
            summary: Summary::from_values(&values),
            h,
            values,
        })
    }

    pub fn standard_error_of_mean(&self) -> f64 {
        (self.summary.variance / self.replicas as f64).sqrt()
    }
}

/// `n(R; h)` over `replicas` independent GEF replicas; replica `i` uses the
/// substream `(base_seed, i)`, so runs are reproducible bit for bit.
pub fn run_ensemble(h: &TestFunction, r: f64, replicas: usize, base_seed: u64) -> Result<EnsembleRun> {
    let mut runs = run_ensemble_multi(std::slice::from_ref(h), r, replicas, base_seed)?;
    Ok(runs.pop().expect("one statistic"))
}

/// Several statistics evaluated on the same replicas.
pub fn run_ensemble_multi(hs: &[TestFunction], r: f64, replicas: usize, base_seed: u64) -> Result<Vec<EnsembleRun>> {
    if replicas == 0 {
        return Err(Error::EmptyRequest("ensemble needs replicas"));
    }
    if replicas < MIN_REPLICAS {
        return Err(Error::Domain(format!("ensemble needs at least {MIN_REPLICAS} replicas, got {replicas}")));
    }
    if hs.is_empty() {
        return Err(Error::EmptyRequest("ensemble needs a statistic"));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("scale R = {r} must be positive")));
    }
    for h in hs {
        h.validate()?;
    }
    let r_trust = r * hs.iter().map(TestFunction::support_radius).fold(0.0, f64::max);
    let degree = truncation_degree(r_trust);
    let rows: Vec<Vec<f64>> = (0..replicas as u64)
        .into_par_iter()
        .map(|i| {
            let poly = TruncatedGef::replica(base_seed, i, degree);
            let zs = find_zeros(&poly, r_trust)?;
            hs.iter().map(|h| linear_statistic(&zs, h, r).map(|s| s.value)).collect()
        })
        .collect::<Result<_>>()?;
    hs.iter()
        .enumerate()
        .map(|(j, h)| EnsembleRun::from_values(rows.iter().map(|row| row[j]).collect(), r, h.clone(), base_seed))
        .collect()
}

/// Cumulant estimates with delete-one-block jackknife standard errors.
#[derive(Clone, Debug, PartialEq)]
pub struct CumulantEstimates {
    /// `s_1, ..., s_K`.
    pub values: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub warning: Option<String>,
}

fn cumulants_of(values: &[f64], order: usize) -> Result<Vec<f64>> {
    let s = Summary::from_values(values);
    let mut central = s.central[1..=order].to_vec();
    central[0] = 0.0;
    let mut out = moments_to_cumulants(&central)?;
    out[0] = s.mean;
    Ok(out)
}

/// Delete-one-block jackknife of a vector-valued estimator. Returns the
/// standard error of each component.
pub fn jackknife<F>(values: &[f64], blocks: usize, f: F) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let blocks = blocks.min(values.len());
    if blocks < 2 {
        return Err(Error::Domain("jackknife needs at least two blocks".into()));
    }
    let n = values.len();
    let mut estimates = Vec::with_capacity(blocks);
    let mut kept = Vec::with_capacity(n);
    for b in 0..blocks {
        let (lo, hi) = (b * n / blocks, (b + 1) * n / blocks);
        kept.clear();
        kept.extend_from_slice(&values[..lo]);
        kept.extend_from_slice(&values[hi..]);
        estimates.push(f(&kept)?);
    }
    let dim = estimates[0].len();
    let g = blocks as f64;
    Ok((0..dim)
        .map(|k| {
            let m = estimates.iter().map(|e| e[k]).sum::<f64>() / g;
            ((g - 1.0) / g * estimates.iter().map(|e| (e[k] - m).powi(2)).sum::<f64>()).sqrt()
        })
        .collect())
}

/// `s_1..s_K` from central moments, with jackknife errors over 50 blocks.
pub fn empirical_cumulants(run: &EnsembleRun, max_order: usize) -> Result<CumulantEstimates> {
    if max_order == 0 || max_order > MAX_CUMULANT_ORDER {
        return Err(Error::SizeLimit {
            what: "empirical cumulant order",
            limit: MAX_CUMULANT_ORDER,
            requested: max_order,
        });
    }
    let values = cumulants_of(&run.values, max_order)?;
    let std_errors = jackknife(&run.values, JACKKNIFE_BLOCKS, |v| cumulants_of(v, max_order))?;
    let warning = (max_order >= 4 && run.replicas < 1000).then(|| {
        format!(
            "order {max_order} cumulants from {} replicas are imprecise; use at least 1000",
            run.replicas
        )
    });
    Ok(CumulantEstimates {
        values,
        std_errors,
        warning,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalityReport {
    pub skewness: f64,
    pub skewness_se: f64,
    pub excess_kurtosis: f64,
    pub excess_kurtosis_se: f64,
    /// `sup |F_n − Φ|` of the standardised values.
    pub ks_distance: f64,
    /// For integer-valued data: distance between the empirical CDF and the
    /// normal CDF evaluated half-way between lattice points.
    pub ks_lattice: Option<f64>,
    /// `s_k* = s_k / σ^k` for `k = 3..=6`.
    pub cumulant_decay: Vec<f64>,
    pub cumulant_decay_se: Vec<f64>,
}

fn normalized_cumulants(values: &[f64]) -> Result<Vec<f64>> {
    let s = cumulants_of(values, MAX_CUMULANT_ORDER)?;
    let sd = s[1].sqrt();
    Ok((3..=MAX_CUMULANT_ORDER).map(|k| s[k - 1] / sd.powi(k as i32)).collect())
}

/// Asymptotic Kolmogorov critical value `c(α)/√n`, `c(α) = √(−½ ln(α/2))`.
pub fn kolmogorov_critical(n: usize, alpha: f64) -> f64 {
    (-0.5 * (alpha / 2.0).ln()).sqrt() / (n as f64).sqrt()
}

pub fn normality_report(run: &EnsembleRun) -> Result<NormalityReport> {
    let n = run.values.len();
    let s = &run.summary;
    if !(s.central[2] > 0.0) {
        return Err(Error::DegenerateDistribution);
    }
    let sd = s.variance.sqrt();
    let normal = Normal::standard();
    let mut z: Vec<f64> = run.values.iter().map(|v| (v - s.mean) / sd).collect();
    z.sort_by(f64::total_cmp);
    let nf = n as f64;
    let mut ks: f64 = 0.0;
    for (i, &x) in z.iter().enumerate() {
        let p = normal.cdf(x);
        ks = ks.max((i + 1) as f64 / nf - p).max(p - i as f64 / nf);
    }
    let ks_lattice = run.values.iter().all(|v| v.fract() == 0.0).then(|| {
        let mut sorted = run.values.clone();
        sorted.sort_by(f64::total_cmp);
        let (lo, hi) = (sorted[0], sorted[n - 1]);
        let mut d: f64 = 0.0;
        let mut idx = 0;
        let mut k = lo - 1.0;
        while k <= hi {
            while idx < n && sorted[idx] <= k {
                idx += 1;
            }
            let fe = idx as f64 / nf;
            d = d.max((fe - normal.cdf((k + 0.5 - s.mean) / sd)).abs());
            k += 1.0;
        }
        d
    });
    let decay = normalized_cumulants(&run.values)?;
    let decay_se = jackknife(&run.values, JACKKNIFE_BLOCKS, normalized_cumulants)?;
    let report = NormalityReport {
        skewness: decay[0],
        skewness_se: decay_se[0],
        excess_kurtosis: decay[1],
        excess_kurtosis_se: decay_se[1],
        ks_distance: ks,
        ks_lattice,
        cumulant_decay: decay,
        cumulant_decay_se: decay_se,
    };
    let finite = [report.skewness, report.excess_kurtosis, report.ks_distance]
        .iter()
        .chain(&report.cumulant_decay)
        .all(|v| v.is_finite());
    if !finite {
        return Err(Error::NonFinite("normality report"));
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson goodness of fit of binned counts against expected probabilities
/// (rescaled to sum to one). Bins with expectation below 5 are pooled into
/// their right neighbour.
pub fn chi_square_test(counts: &[u64], probabilities: &[f64]) -> Result<ChiSquareTest> {
    if counts.len() != probabilities.len() {
        return Err(Error::Shape {
            expected: probabilities.len(),
            found: counts.len(),
        });
    }
    if probabilities.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
        return Err(Error::Domain("bin probabilities must be nonnegative".into()));
    }
    let total_p: f64 = probabilities.iter().sum();
    let n: u64 = counts.iter().sum();
    if n == 0 || !(total_p > 0.0) {
        return Err(Error::EmptyRequest("chi-square test needs counts and probability mass"));
    }
    let mut pooled: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    for (c, p) in counts.iter().zip(probabilities) {
        obs += *c as f64;
        exp += n as f64 * p / total_p;
        if exp >= 5.0 {
            pooled.push((obs, exp));
            (obs, exp) = (0.0, 0.0);
        }
    }
    match pooled.last_mut() {
        Some(last) => {
            last.0 += obs;
            last.1 += exp;
        }
        None => pooled.push((obs, exp)),
    }
    if pooled.len() < 2 {
        return Err(Error::Domain("fewer than two bins after pooling".into()));
    }
    let statistic: f64 = pooled.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let dof = pooled.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(ChiSquareTest {
        statistic,
        dof,
        p_value: dist.sf(statistic),
    })
}

/// Least-squares fit `log y = log C + p log R`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingFit {
    pub exponent: f64,
    pub constant: f64,
    /// Root-mean-square residual in log coordinates.
    pub residual: f64,
}

pub fn scaling_fit(values: &[f64], scales: &[f64]) -> Result<ScalingFit> {
    if values.len() != scales.len() {
        return Err(Error::Shape {
            expected: scales.len(),
            found: values.len(),
        });
    }
    if scales.len() < 3 {
        return Err(Error::Fit(format!("need at least 3 scales, got {}", scales.len())));
    }
    if values.iter().chain(scales).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::Domain("scaling fit needs positive finite values and scales".into()));
    }
    let x: Vec<f64> = scales.iter().map(|r| r.ln()).collect();
    let y: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all scales coincide".into()));
    }
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x.iter().zip(&y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    Ok(ScalingFit {
        exponent: slope,
        constant: intercept.exp(),
        residual: (rss / n).sqrt(),
    })
}
