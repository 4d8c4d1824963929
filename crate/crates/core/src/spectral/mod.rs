//! Fourier-side variance machinery for linear statistics of a
//! translation-invariant point process with radial two-point function.
//!
//! Transforms follow `ĥ(ξ) = ∫ h(x) e^{−2πi x·ξ} dA(x)`; for radial `h` this
//! is `2π ∫ h(r) J_0(2πrξ) r dr`, which is its own inverse.
//!
//! Two coordinate systems appear. In natural units the GEF zero intensity is
//! `1/π`; in unit-intensity units (`x = z/√π`) it is 1. The variance formulas
//! assume unit intensity, and every kernel carries a [`Units`] flag so the
//! two are never mixed silently.

mod bessel;
mod mollifier;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::correlations::{clustering_gap, PointConfiguration};
use crate::gef::KernelSpec;
use crate::quadrature::CompositeRule;
use crate::zeros::TestFunction;
use crate::{Error, Result};

pub use bessel::{j0, j0_j1, j1};
pub use mollifier::{mollified_indicator, smooth_cutoff, MollifiedIndicator};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Units {
    Natural,
    UnitIntensity,
}

impl Units {
    pub fn name(self) -> &'static str {
        match self {
            Units::Natural => "natural",
            Units::UnitIntensity => "unit-intensity",
        }
    }
}

/// Radius in unit-intensity coordinates of a natural-units radius.
pub fn natural_to_unit(r: f64) -> f64 {
    r / PI.sqrt()
}

/// Weights of the composite Simpson rule on `n` equispaced points, with a
/// 3/8 panel at the end when the number of intervals is odd.
pub(crate) fn simpson_weights(n: usize, step: f64) -> Vec<f64> {
    let mut w = vec![0.0; n];
    match n {
        0 => {}
        1 => {}
        2 => {
            w[0] = 0.5 * step;
            w[1] = 0.5 * step;
        }
        _ => {
            let intervals = n - 1;
            let simpson_end = if intervals % 2 == 0 { n - 1 } else { n - 4 };
            let mut i = 0;
            while i + 2 <= simpson_end {
                w[i] += step / 3.0;
                w[i + 1] += 4.0 * step / 3.0;
                w[i + 2] += step / 3.0;
                i += 2;
            }
            if intervals % 2 == 1 {
                let s = n - 4;
                for (k, c) in [1.0, 3.0, 3.0, 1.0].iter().enumerate() {
                    w[s + k] += 3.0 * step / 8.0 * c;
                }
            }
        }
    }
    w
}

fn check_grid(step: f64, values: &[f64]) -> Result<()> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::Domain(format!("grid step must be positive, got {step}")));
    }
    if values.len() < 4 {
        return Err(Error::Shape {
            expected: 4,
            found: values.len(),
        });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("radial grid values"));
    }
    Ok(())
}

/// `2π ∫ f(r) J_0(2πrξ) r dr` on a uniform grid starting at `r = 0`.
fn hankel_on_grid(step: f64, values: &[f64], weights: &[f64], xi: f64) -> f64 {
    let mut acc = 0.0;
    for (i, (v, w)) in values.iter().zip(weights).enumerate() {
        let r = i as f64 * step;
        acc += w * v * j0(2.0 * PI * r * xi) * r;
    }
    2.0 * PI * acc
}

/// `κ(r) = ρ_2(0, r)/ρ_1² − 1` sampled at `r_i = i · step`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialKernel {
    step: f64,
    values: Vec<f64>,
    units: Units,
}

impl RadialKernel {
    /// Tail level below which the kernel counts as decayed.
    pub const TAIL_TOLERANCE: f64 = 1e-8;

    pub fn new(step: f64, values: Vec<f64>, units: Units) -> Result<Self> {
        check_grid(step, &values)?;
        Ok(Self { step, values, units })
    }

    /// The GEF kernel in natural units, `κ = π² ρ_2^T` from the exact
    /// two-point function, on `[0, r_max]`.
    pub fn gef(step: f64, r_max: f64) -> Result<Self> {
        let n = (r_max / step).round() as usize + 1;
        let mut values = Vec::with_capacity(n);
        for i in 0..n {
            let r = i as f64 * step;
            let v = if r == 0.0 {
                -1.0
            } else {
                let cfg = PointConfiguration::new(vec![Complex64::new(0.0, 0.0), Complex64::new(r, 0.0)])?
                    .with_partition(vec![0], vec![1])?;
                match clustering_gap(&KernelSpec::Gef, &cfg) {
                    Ok(g) => PI * PI * g.additive_gap,
                    Err(Error::IllConditioned { .. }) => -1.0,
                    Err(e) => return Err(e),
                }
            };
            values.push(v);
        }
        Self::new(step, values, Units::Natural)
    }

    /// `κ ≡ 0`.
    pub fn poisson(step: f64, r_max: f64, units: Units) -> Result<Self> {
        let n = (r_max / step).round() as usize + 1;
        Self::new(step, vec![0.0; n], units)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn units(&self) -> Units {
        self.units
    }

    pub fn r_max(&self) -> f64 {
        self.step * (self.values.len() - 1) as f64
    }

    /// Same kernel in unit-intensity coordinates: `κ_unit(x) = κ_nat(x√π)`,
    /// so only the grid step changes.
    pub fn to_unit_intensity(&self) -> Self {
        match self.units {
            Units::UnitIntensity => self.clone(),
            Units::Natural => Self {
                step: self.step / PI.sqrt(),
                values: self.values.clone(),
                units: Units::UnitIntensity,
            },
        }
    }

    pub fn to_natural(&self) -> Self {
        match self.units {
            Units::Natural => self.clone(),
            Units::UnitIntensity => Self {
                step: self.step * PI.sqrt(),
                values: self.values.clone(),
                units: Units::Natural,
            },
        }
    }

    pub fn require_units(&self, units: Units) -> Result<()> {
        if self.units != units {
            return Err(Error::Units {
                expected: units.name(),
                found: self.units.name(),
            });
        }
        Ok(())
    }

    pub fn certify_tail(&self) -> Result<()> {
        let tail = self.values.last().copied().unwrap_or(0.0).abs();
        if tail > Self::TAIL_TOLERANCE {
            return Err(Error::Truncation(format!(
                "|κ| = {tail:e} at r = {} exceeds {:e}",
                self.r_max(),
                Self::TAIL_TOLERANCE
            )));
        }
        Ok(())
    }

    /// `κ̂(ξ)` by Simpson–Hankel quadrature over the grid.
    pub fn transform(&self, xi: f64) -> f64 {
        let w = simpson_weights(self.values.len(), self.step);
        hankel_on_grid(self.step, &self.values, &w, xi)
    }

    fn transformer(&self) -> impl Fn(f64) -> f64 + '_ {
        let w = simpson_weights(self.values.len(), self.step);
        move |xi| hankel_on_grid(self.step, &self.values, &w, xi)
    }

    /// First frequency beyond which `|κ̂|` stays below `level` on a grid of
    /// spacing `d_xi` up to `xi_max`; `None` if `|κ̂| > level` at `xi_max`.
    pub fn decay_frequency(&self, level: f64, d_xi: f64, xi_max: f64) -> Option<f64> {
        let f = self.transformer();
        let n = (xi_max / d_xi).ceil() as usize;
        let mut last_above = None;
        for i in 0..=n {
            if f(i as f64 * d_xi).abs() > level {
                last_above = Some(i);
            }
        }
        match last_above {
            None => Some(0.0),
            Some(i) if i == n => None,
            Some(i) => Some((i + 1) as f64 * d_xi),
        }
    }
}

/// Radially symmetric test functions with known or computable transforms.
#[derive(Clone, Debug, PartialEq)]
pub enum RadialProfile {
    /// Indicator of `|x| ≤ radius`.
    Disk { radius: f64 },
    /// `e^{−π|x|²/w²}`, with transform `w² e^{−π w² |ξ|²}`.
    Gaussian { width: f64 },
    /// Samples at `r_i = i · step`.
    Sampled { step: f64, values: Vec<f64> },
}

impl RadialProfile {
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            RadialProfile::Disk { radius } => {
                if r <= *radius {
                    1.0
                } else {
                    0.0
                }
            }
            RadialProfile::Gaussian { width } => (-PI * r * r / (width * width)).exp(),
            RadialProfile::Sampled { step, values } => {
                let x = r / step;
                let i = x.floor() as usize;
                if i + 1 >= values.len() {
                    return if i + 1 == values.len() { values[i] } else { 0.0 };
                }
                let t = x - i as f64;
                values[i] * (1.0 - t) + values[i + 1] * t
            }
        }
    }

    /// Largest radius where the profile is non-negligible.
    pub fn extent(&self) -> f64 {
        match self {
            RadialProfile::Disk { radius } => *radius,
            RadialProfile::Gaussian { width } => 3.5 * width,
            RadialProfile::Sampled { step, values } => step * (values.len() - 1) as f64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            RadialProfile::Disk { radius: a } | RadialProfile::Gaussian { width: a } => {
                if !(*a > 0.0) || !a.is_finite() {
                    return Err(Error::Domain(format!("profile scale must be positive, got {a}")));
                }
                Ok(())
            }
            RadialProfile::Sampled { step, values } => check_grid(*step, values),
        }
    }

    /// `ĥ(ξ)`.
    pub fn transform(&self, xi: f64) -> f64 {
        match self {
            RadialProfile::Disk { radius } => {
                if xi == 0.0 {
                    PI * radius * radius
                } else {
                    radius * j1(2.0 * PI * radius * xi) / xi
                }
            }
            RadialProfile::Gaussian { width } => width * width * (-PI * width * width * xi * xi).exp(),
            RadialProfile::Sampled { step, values } => {
                let w = simpson_weights(values.len(), *step);
                hankel_on_grid(*step, values, &w, xi)
            }
        }
    }

    /// `‖h‖²_{L²}`.
    pub fn l2_norm_sq(&self) -> f64 {
        match self {
            RadialProfile::Disk { radius } => PI * radius * radius,
            RadialProfile::Gaussian { width } => 0.5 * width * width,
            RadialProfile::Sampled { step, values } => {
                let w = simpson_weights(values.len(), *step);
                2.0 * PI * values.iter().zip(&w).enumerate().map(|(i, (v, w))| w * v * v * i as f64 * step).sum::<f64>()
            }
        }
    }

    /// Oscillation scale of `ĥ`, used to size quadrature panels.
    fn frequency_panel(&self) -> f64 {
        0.1 / self.extent().max(0.1)
    }
}

/// Samples `ĥ(ξ_j)` at `ξ_j = j · step`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralProfile {
    pub step: f64,
    pub values: Vec<f64>,
}

/// Hankel transform of radial samples onto `n` frequencies spaced `freq_step`.
///
/// Fails with a truncation error unless the samples have decayed to
/// `1e-8 · max|h|` at the end of the grid.
pub fn radial_fourier(step: f64, values: &[f64], freq_step: f64, n: usize) -> Result<SpectralProfile> {
    check_grid(step, values)?;
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tail = values.last().unwrap().abs();
    if tail > 1e-8 * peak {
        return Err(Error::Truncation(format!(
            "radial samples end at {tail:e}, above 1e-8 of the peak {peak:e}"
        )));
    }
    let w = simpson_weights(values.len(), step);
    Ok(SpectralProfile {
        step: freq_step,
        values: (0..n).map(|j| hankel_on_grid(step, values, &w, j as f64 * freq_step)).collect(),
    })
}

/// Inverse of [`radial_fourier`]: the same transform applied to `ĥ`.
pub fn inverse_radial_fourier(profile: &SpectralProfile, r_step: f64, n: usize) -> Result<SpectralProfile> {
    radial_fourier(profile.step, &profile.values, r_step, n)
}

fn kappa_support(kappa: &RadialKernel) -> f64 {
    // κ̂ of a smooth kernel decays fast; find where it is negligible
    kappa
        .decay_frequency(1e-12, 0.05, 40.0)
        .unwrap_or(40.0)
        .max(0.5)
}

/// `σ(R; h)² = R² ∫ |ĥ(ξ)|² [1 + κ̂(ξ/R)] dA(ξ)` for the statistic
/// `Σ h(x/R)` of a unit-intensity process.
///
/// Split as `R²‖h‖² + R² ∫ |ĥ|² κ̂(ξ/R) dA`; the second integrand is cut off
/// where `κ̂` becomes negligible, so slowly decaying `ĥ` costs nothing extra.
pub fn variance_exact(h: &RadialProfile, r: f64, kappa: &RadialKernel) -> Result<f64> {
    h.validate()?;
    kappa.require_units(Units::UnitIntensity)?;
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("scale R must be positive, got {r}")));
    }
    let eta_max = kappa_support(kappa);
    let upper = r * eta_max;
    let panel = h.frequency_panel().min(0.05 * r);
    let panels = ((upper / panel).ceil() as usize).max(16);
    let rule = CompositeRule::new(0.0, upper, panels, 8);
    let kh = kappa.transformer();
    let correction = 2.0 * PI * rule.integrate(|xi| {
        let hh = h.transform(xi);
        hh * hh * kh(xi / r) * xi
    });
    let v = r * r * (h.l2_norm_sq() + correction);
    if !v.is_finite() {
        return Err(Error::NonFinite("variance_exact"));
    }
    Ok(v.max(0.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VarianceLowerBound {
    pub value: f64,
    /// Frequency beyond which `|κ̂| ≤ ½`.
    pub c: f64,
}

/// `(R²/2) ∫_{|ξ| ≥ CR} |ĥ(ξ)|² dA(ξ)` with `C` the first grid frequency
/// beyond which `|κ̂| ≤ ½`.
pub fn variance_lower_bound(h: &RadialProfile, r: f64, kappa: &RadialKernel) -> Result<VarianceLowerBound> {
    h.validate()?;
    kappa.require_units(Units::UnitIntensity)?;
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("scale R must be positive, got {r}")));
    }
    let c = kappa.decay_frequency(0.5, 0.005, 20.0).ok_or(Error::BoundUndefined)?;
    let cut = c * r;
    let inner = if cut > 0.0 {
        let panels = ((cut / h.frequency_panel()).ceil() as usize).max(8);
        2.0 * PI * CompositeRule::new(0.0, cut, panels, 8).integrate(|xi| h.transform(xi).powi(2) * xi)
    } else {
        0.0
    };
    let tail = (h.l2_norm_sq() - inner).max(0.0);
    Ok(VarianceLowerBound {
        value: 0.5 * r * r * tail,
        c,
    })
}

/// `2π ∫ κ(r) r dr`, which is `−1` for a superhomogeneous process in
/// unit-intensity coordinates.
pub fn superhomogeneity_integral(kappa: &RadialKernel) -> Result<f64> {
    kappa.require_units(Units::UnitIntensity)?;
    kappa.certify_tail()?;
    let w = simpson_weights(kappa.values.len(), kappa.step);
    Ok(2.0
        * PI
        * kappa
            .values
            .iter()
            .zip(&w)
            .enumerate()
            .map(|(i, (v, w))| w * v * i as f64 * kappa.step)
            .sum::<f64>())
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthFit {
    /// Slope of `log σ²` against `log R`.
    pub exponent: f64,
    pub log_prefactor: f64,
    pub residual: f64,
    /// Largest `c` with `σ(R)² ≥ c min{A R², √A R}` at every sampled scale.
    pub c: f64,
}

/// Fit the growth of indicator-statistic variances over several scales.
pub fn indicator_variance_growth(set: &TestFunction, scales: &[f64], variances: &[f64]) -> Result<GrowthFit> {
    let area = set
        .area()
        .ok_or_else(|| Error::UnsupportedShape("variance growth needs a set with known area".into()))?;
    let fit = crate::clt::scaling_fit(variances, scales)?;
    let c = scales
        .iter()
        .zip(variances)
        .map(|(r, v)| v / (area * r * r).min(area.sqrt() * r))
        .fold(f64::INFINITY, f64::min);
    Ok(GrowthFit {
        exponent: fit.exponent,
        log_prefactor: fit.constant.ln(),
        residual: fit.residual,
        c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gef_unit() -> RadialKernel {
        RadialKernel::gef(0.02, 10.0).unwrap().to_unit_intensity()
    }

    #[test]
    fn simpson_weights_integrate_cubics() {
        for n in [5usize, 6, 7, 10] {
            let step = 2.0 / (n - 1) as f64;
            let w = simpson_weights(n, step);
            let i: f64 = w.iter().enumerate().map(|(k, w)| w * (k as f64 * step).powi(3)).sum();
            assert!((i - 4.0).abs() < 1e-12, "n={n}: {i}");
        }
    }

    #[test]
    fn disk_transform_at_zero_is_area() {
        let h = RadialProfile::Disk { radius: 1.0 };
        assert!((h.transform(0.0) - PI).abs() < 1e-15);
        assert!((h.transform(1e-9) - PI).abs() < 1e-9);
        let sampled: Vec<f64> = (0..=2000).map(|i| if i as f64 * 0.001 <= 1.0 { 1.0 } else { 0.0 }).collect();
        let p = radial_fourier(0.001, &sampled, 0.5, 1).unwrap();
        assert!((p.values[0] - PI).abs() < 1e-2);
    }

    #[test]
    fn gaussian_is_self_dual_and_roundtrips() {
        let step = 0.0025;
        let values: Vec<f64> = (0..=2400).map(|i| (-PI * (i as f64 * step).powi(2)).exp()).collect();
        let hat = radial_fourier(step, &values, step, 1601).unwrap();
        for (j, v) in hat.values.iter().enumerate() {
            let xi = j as f64 * step;
            assert!((v - (-PI * xi * xi).exp()).abs() < 1e-6, "ξ={xi}");
        }
        let back = inverse_radial_fourier(&hat, step, 1200).unwrap();
        for (i, v) in back.values.iter().enumerate() {
            assert!((v - values[i]).abs() < 1e-6);
        }
        // Parseval on the grid
        let w = simpson_weights(values.len(), step);
        let norm = |v: &[f64]| 2.0 * PI * v.iter().zip(&w).enumerate().map(|(i, (a, w))| w * a * a * i as f64 * step).sum::<f64>();
        assert!((norm(&values) / norm(&hat.values) - 1.0).abs() < 1e-6);
        assert!((norm(&values) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn slow_decay_is_reported() {
        let values = vec![1.0; 100];
        assert!(matches!(radial_fourier(0.01, &values, 0.1, 4), Err(Error::Truncation(_))));
    }

    #[test]
    fn gef_kernel_properties() {
        let nat = RadialKernel::gef(0.02, 10.0).unwrap();
        assert_eq!(nat.values()[0], -1.0);
        assert!(nat.values().iter().all(|&v| v >= -1.0));
        let at8 = nat.values()[400];
        assert!(at8.abs() < 1e-8, "{at8}");
        nat.certify_tail().unwrap();
        assert!(matches!(superhomogeneity_integral(&nat), Err(Error::Units { .. })));
        let unit = nat.to_unit_intensity();
        assert_eq!(unit.to_natural(), nat);
        let s = superhomogeneity_integral(&unit).unwrap();
        assert!((s + 1.0).abs() < 1e-6, "{s}");
    }

    #[test]
    fn superhomogeneity_reference_kernels() {
        let p = RadialKernel::poisson(0.01, 5.0, Units::UnitIntensity).unwrap();
        assert_eq!(superhomogeneity_integral(&p).unwrap(), 0.0);
        let step = 0.0005;
        let values: Vec<f64> = (0..=4000).map(|i| if i as f64 * step <= 1.0 { -1.0 / PI } else { 0.0 }).collect();
        let k = RadialKernel::new(step, values, Units::UnitIntensity).unwrap();
        assert!((superhomogeneity_integral(&k).unwrap() + 1.0).abs() < 2e-3);
        let wide = RadialKernel::new(0.1, vec![0.1; 10], Units::UnitIntensity).unwrap();
        assert!(matches!(superhomogeneity_integral(&wide), Err(Error::Truncation(_))));
    }

    #[test]
    fn poisson_variance_is_r2_norm() {
        let p = RadialKernel::poisson(0.01, 5.0, Units::UnitIntensity).unwrap();
        for h in [RadialProfile::Disk { radius: 1.0 }, RadialProfile::Gaussian { width: 0.7 }] {
            for r in [1.0, 3.0] {
                let v = variance_exact(&h, r, &p).unwrap();
                assert!((v - r * r * h.l2_norm_sq()).abs() < 1e-12 * v);
            }
        }
        let nat = RadialKernel::poisson(0.01, 5.0, Units::Natural).unwrap();
        assert!(matches!(variance_exact(&RadialProfile::Disk { radius: 1.0 }, 1.0, &nat), Err(Error::Units { .. })));
    }

    /// `∬ h(x)h(y)κ(x−y)` for a Gaussian profile: the autocorrelation of
    /// `e^{−a|x|²}` is `(π/2a) e^{−a r²/2}`.
    #[test]
    fn variance_matches_direct_double_integral() {
        let kappa = gef_unit();
        let width = 0.8;
        let a = PI / (width * width);
        let h = RadialProfile::Gaussian { width };
        let w = simpson_weights(kappa.values().len(), kappa.step());
        let double: f64 = kappa
            .values()
            .iter()
            .zip(&w)
            .enumerate()
            .map(|(i, (k, w))| {
                let r = i as f64 * kappa.step();
                w * k * (PI / (2.0 * a)) * (-a * r * r / 2.0).exp() * 2.0 * PI * r
            })
            .sum();
        let direct = h.l2_norm_sq() + double;
        let v = variance_exact(&h, 1.0, &kappa).unwrap();
        assert!((v / direct - 1.0).abs() < 1e-6, "{v} vs {direct}");
    }

    #[test]
    fn scaling_substitution() {
        // σ(R; h)² equals the R = 1 variance of the dilated profile h(·/R)
        let kappa = gef_unit();
        let r = 2.5;
        let a = variance_exact(&RadialProfile::Gaussian { width: 0.6 }, r, &kappa).unwrap();
        let b = variance_exact(&RadialProfile::Gaussian { width: 0.6 * r }, 1.0, &kappa).unwrap();
        assert!((a / b - 1.0).abs() < 1e-8, "{a} vs {b}");
        let a = variance_exact(&RadialProfile::Disk { radius: 1.0 }, r, &kappa).unwrap();
        let b = variance_exact(&RadialProfile::Disk { radius: r }, 1.0, &kappa).unwrap();
        assert!((a / b - 1.0).abs() < 1e-8, "{a} vs {b}");
    }

    #[test]
    fn lower_bound_below_exact() {
        let kappa = gef_unit();
        for h in [RadialProfile::Disk { radius: 1.0 }, RadialProfile::Gaussian { width: 1.0 }] {
            for r in [1.0, 5.0, 10.0, 20.0] {
                let lb = variance_lower_bound(&h, r, &kappa).unwrap();
                let v = variance_exact(&h, r, &kappa).unwrap();
                assert!(lb.value <= v, "{h:?} R={r}: {} > {v}", lb.value);
                if matches!(h, RadialProfile::Disk { .. }) {
                    assert!(lb.value > 0.0);
                }
            }
        }
        // a narrow spike whose transform stays near its mass well past ξ = 20
        let spike: Vec<f64> = (0..40).map(|i| if i <= 5 { 2.0e4 } else { 0.0 }).collect();
        let flat = RadialKernel::new(0.001, spike, Units::UnitIntensity).unwrap();
        assert!(matches!(
            variance_lower_bound(&RadialProfile::Disk { radius: 1.0 }, 1.0, &flat),
            Err(Error::BoundUndefined)
        ));
    }

    #[test]
    fn gef_disk_variance_is_suppressed() {
        let kappa = gef_unit();
        let h = RadialProfile::Disk { radius: 1.0 };
        let v20 = variance_exact(&h, 20.0, &kappa).unwrap();
        let v40 = variance_exact(&h, 40.0, &kappa).unwrap();
        assert!(v40 / 1600.0 < v20 / 400.0);
        // perimeter law: doubling R roughly doubles the variance
        assert!((v40 / v20 - 2.0).abs() < 0.1, "{v20} {v40}");
    }

    #[test]
    fn growth_fit_for_poisson_surrogate() {
        let set = TestFunction::unit_disk();
        let scales = [5.0, 10.0, 20.0];
        let vars: Vec<f64> = scales.iter().map(|r| PI * r * r).collect();
        let fit = indicator_variance_growth(&set, &scales, &vars).unwrap();
        assert!((fit.exponent - 2.0).abs() < 1e-9);
        assert!(fit.c > 0.0);
        assert!(matches!(indicator_variance_growth(&set, &scales[..2], &vars[..2]), Err(Error::Fit(_))));
    }
}
