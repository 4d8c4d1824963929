use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::sync::Mutex;

use num_complex::Complex64;

use super::{enumerate_partitions, size_multisets, BlockSizeMultiset, CompensatedSum};
use crate::correlations::{clustering_gap, subset_intensities_tolerant, PointConfiguration};
use crate::gef::KernelSpec;
use crate::quadrature::{rqmc_mean, CompositeRule};
use crate::{Error, Result};

/// Supplies truncated brackets `⟨h^{a_1}, ..., h^{a_j}⟩^T`, the integral of
/// `∏ h(x_i)^{a_i}` against `ρ_j^T`.
pub trait CorrelationIntegrator {
    fn truncated_bracket(&self, powers: &BlockSizeMultiset) -> Result<f64>;

    /// Non-truncated bracket, the same integral against `ρ_j`. Expanding
    /// `ρ_j = Σ_π ∏ ρ^T` factorises the integral over the blocks of `π`.
    fn bracket(&self, powers: &BlockSizeMultiset) -> Result<f64> {
        let a = powers.sizes();
        let mut acc = CompensatedSum::default();
        for p in enumerate_partitions(a.len())? {
            let mut prod = 1.0;
            for block in p.blocks() {
                let sub = BlockSizeMultiset::new(block.iter().map(|&i| a[i]).collect());
                prod *= self.truncated_bracket(&sub)?;
            }
            acc.add(prod);
        }
        Ok(acc.value())
    }
}

fn assemble(k: usize, f: impl Fn(&BlockSizeMultiset) -> Result<f64>) -> Result<f64> {
    if k == 0 || k > 4 {
        return Err(Error::SizeLimit {
            what: "linear-statistic cumulant order",
            limit: 4,
            requested: k,
        });
    }
    let mut acc = CompensatedSum::default();
    for ms in size_multisets(k) {
        let v = f(&ms).map_err(|e| match e {
            Error::Integrator { .. } => e,
            other => Error::Integrator {
                sizes: ms.sizes().to_vec(),
                reason: other.to_string(),
            },
        })?;
        acc.add(ms.partition_count() as f64 * v);
    }
    Ok(acc.value())
}

/// `s_k(h) = Σ_{γ ∈ Π(k)} ⟨h^{|γ_1|}, ..., h^{|γ_j|}⟩^T`.
pub fn statistic_cumulant(k: usize, integrator: &dyn CorrelationIntegrator) -> Result<f64> {
    assemble(k, |ms| integrator.truncated_bracket(ms))
}

/// `m_k(h) = Σ_{γ ∈ Π(k)} ⟨h^{|γ_1|}, ..., h^{|γ_j|}⟩`.
pub fn statistic_moment(k: usize, integrator: &dyn CorrelationIntegrator) -> Result<f64> {
    assemble(k, |ms| integrator.bracket(ms))
}

/// Brackets of the indicator of the disk `|z| ≤ radius` against the GEF zero
/// correlations (natural units, `ρ_1 = 1/π`).
///
/// Since `h^a = h`, a bracket depends only on the number of variables `j`:
/// `j = 1` is exact, `j = 2` is a radial integral weighted by the lens area
/// of two disks, and `j = 3, 4` use randomised QMC with Gaussian importance
/// sampling of the offsets `x_i − x_1`. Configurations with diameter above
/// [`GefDiskIntegrator::CUTOFF_DIAMETER`] are dropped.
pub struct GefDiskIntegrator {
    radius: f64,
    qmc_points: u64,
    seed: u64,
    cache: Mutex<HashMap<usize, (f64, f64)>>,
}

impl GefDiskIntegrator {
    pub const CUTOFF_DIAMETER: f64 = 10.0;
    const OFFSET_SIGMA: f64 = 1.2;
    const SHIFTS: usize = 16;

    pub fn new(radius: f64, qmc_points: u64, seed: u64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Domain(format!("disk radius must be positive, got {radius}")));
        }
        if qmc_points == 0 {
            return Err(Error::EmptyRequest("QMC point count must be positive"));
        }
        Ok(Self {
            radius,
            qmc_points,
            seed,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    #[cfg(test)]
    fn lens_area(&self, r: f64) -> f64 {
        let big = self.radius;
        if r >= 2.0 * big {
            return 0.0;
        }
        2.0 * big * big * (r / (2.0 * big)).acos() - 0.5 * r * (4.0 * big * big - r * r).sqrt()
    }

    /// `∫_0^{2R} ρ_2^T(r) L(r) 2πr dr` in the variable `r = 2R cos φ`, in
    /// which the lens area `2R²(φ − sin φ cos φ)` is smooth up to `r = 2R`.
    fn pair_integral(&self) -> Result<f64> {
        let big = self.radius;
        let phi_min = (Self::CUTOFF_DIAMETER / (2.0 * big)).min(1.0).acos();
        let span = std::f64::consts::FRAC_PI_2 - phi_min;
        let panels = ((span * 2.0 * big / 0.125).ceil() as usize).max(8);
        let rule = CompositeRule::new(phi_min, std::f64::consts::FRAC_PI_2, panels, 8);
        let err = Mutex::new(None);
        let v = rule.integrate(|phi| {
            let (s, c) = phi.sin_cos();
            let r = 2.0 * big * c;
            let jac = 2.0 * big * s;
            let lens = 2.0 * big * big * (phi - s * c);
            let cfg = PointConfiguration::new(vec![Complex64::new(0.0, 0.0), Complex64::new(r, 0.0)])
                .and_then(|c| c.with_partition(vec![0], vec![1]));
            match cfg.and_then(|c| clustering_gap(&KernelSpec::Gef, &c)) {
                Ok(g) => g.additive_gap * lens * 2.0 * PI * r * jac,
                // coincidence limit: ρ_2 → 0
                Err(Error::IllConditioned { .. }) | Err(Error::DegenerateConfiguration(..)) => {
                    -lens * 2.0 * r * jac / PI
                }
                Err(e) => {
                    err.lock().unwrap().get_or_insert(e);
                    0.0
                }
            }
        });
        match err.into_inner().unwrap() {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }

    fn cluster_integral(&self, j: usize) -> Result<(f64, f64)> {
        let big = self.radius;
        let sigma = Self::OFFSET_SIGMA;
        let err = Mutex::new(None);
        let (mean, se) = rqmc_mean(2 * j, self.qmc_points, Self::SHIFTS, self.seed ^ j as u64, |u| {
            let mut pts = [Complex64::new(0.0, 0.0); 4];
            pts[0] = Complex64::from_polar(big * u[0].sqrt(), 2.0 * PI * u[1]);
            // density of the proposal, without the uniform factor 1/(πR²)
            let mut log_q = 0.0;
            for i in 1..j {
                let s = 1.0 - u[2 * i];
                if s <= 0.0 {
                    return 0.0;
                }
                let r2 = -2.0 * sigma * sigma * s.ln();
                let off = Complex64::from_polar(r2.sqrt(), 2.0 * PI * u[2 * i + 1]);
                pts[i] = pts[0] + off;
                log_q += -r2 / (2.0 * sigma * sigma) - (2.0 * PI * sigma * sigma).ln();
                if pts[i].norm() > big {
                    return 0.0;
                }
            }
            let pts = &pts[..j];
            for a in 0..j {
                for b in (a + 1)..j {
                    if (pts[a] - pts[b]).norm() > Self::CUTOFF_DIAMETER {
                        return 0.0;
                    }
                }
            }
            let truncated = PointConfiguration::new(pts.to_vec())
                .and_then(|cfg| subset_intensities_tolerant(&KernelSpec::Gef, &cfg))
                .and_then(|v| super::truncated_from_correlations(j, &v));
            match truncated {
                Ok(t) => t * PI * big * big * (-log_q).exp(),
                Err(Error::DegenerateConfiguration(..)) => 0.0,
                Err(e) => {
                    err.lock().unwrap().get_or_insert(e);
                    0.0
                }
            }
        });
        match err.into_inner().unwrap() {
            Some(e) => Err(e),
            None => Ok((mean, se)),
        }
    }

    /// Bracket over `j` variables with its QMC standard error (zero for the
    /// deterministic `j ≤ 2` rules).
    pub fn bracket_by_arity(&self, j: usize) -> Result<(f64, f64)> {
        if let Some(v) = self.cache.lock().unwrap().get(&j) {
            return Ok(*v);
        }
        let v = match j {
            1 => (self.radius * self.radius, 0.0),
            2 => (self.pair_integral()?, 0.0),
            3 | 4 => self.cluster_integral(j)?,
            _ => {
                return Err(Error::SizeLimit {
                    what: "disk bracket arity",
                    limit: 4,
                    requested: j,
                })
            }
        };
        self.cache.lock().unwrap().insert(j, v);
        Ok(v)
    }
}

impl CorrelationIntegrator for GefDiskIntegrator {
    fn truncated_bracket(&self, powers: &BlockSizeMultiset) -> Result<f64> {
        self.bracket_by_arity(powers.sizes().len()).map(|v| v.0).map_err(|e| Error::Integrator {
            sizes: powers.sizes().to_vec(),
            reason: e.to_string(),
        })
    }
}

/// Fixed bracket values, mainly for testing the assembly formulas.
pub struct TabulatedBrackets(pub BTreeMap<Vec<usize>, f64>);

impl CorrelationIntegrator for TabulatedBrackets {
    fn truncated_bracket(&self, powers: &BlockSizeMultiset) -> Result<f64> {
        self.0.get(powers.sizes()).copied().ok_or_else(|| Error::Integrator {
            sizes: powers.sizes().to_vec(),
            reason: "no tabulated value".into(),
        })
    }
}
