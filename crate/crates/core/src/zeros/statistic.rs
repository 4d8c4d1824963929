use num_complex::Complex64;

use super::ZeroSet;
use crate::{Error, Result};

/// Bounded, compactly supported test function `h` for `n(R; h) = Σ h(a/R)`.
#[derive(Clone, Debug, PartialEq)]
pub enum TestFunction {
    Disk { center: Complex64, radius: f64 },
    /// Axis-aligned half-open rectangle `[x0, x1) × [y0, y1)`.
    Rectangle { x0: f64, y0: f64, x1: f64, y1: f64 },
    /// Indicator of a union of indicator sets.
    Union(Vec<TestFunction>),
    /// Radial profile `h(|x|)` sampled at `r_i = i · step`, linearly
    /// interpolated, zero beyond the last sample.
    Radial { step: f64, values: Vec<f64> },
}

impl TestFunction {
    pub fn unit_disk() -> Self {
        TestFunction::Disk {
            center: Complex64::new(0.0, 0.0),
            radius: 1.0,
        }
    }

    pub fn eval(&self, x: Complex64) -> f64 {
        match self {
            TestFunction::Disk { center, radius } => f64::from((x - center).norm() <= *radius),
            TestFunction::Rectangle { x0, y0, x1, y1 } => {
                f64::from(x.re >= *x0 && x.re < *x1 && x.im >= *y0 && x.im < *y1)
            }
            TestFunction::Union(parts) => f64::from(parts.iter().any(|p| p.eval(x) > 0.0)),
            TestFunction::Radial { step, values } => {
                let t = x.norm() / step;
                let i = t.floor() as usize;
                if i + 1 >= values.len() {
                    return if i + 1 == values.len() && t == i as f64 { values[i] } else { 0.0 };
                }
                let f = t - i as f64;
                values[i] * (1.0 - f) + values[i + 1] * f
            }
        }
    }

    /// Radius of the smallest origin-centred disk containing the support.
    pub fn support_radius(&self) -> f64 {
        match self {
            TestFunction::Disk { center, radius } => center.norm() + radius,
            TestFunction::Rectangle { x0, y0, x1, y1 } => [(*x0, *y0), (*x0, *y1), (*x1, *y0), (*x1, *y1)]
                .iter()
                .map(|&(x, y)| x.hypot(y))
                .fold(0.0, f64::max),
            TestFunction::Union(parts) => parts.iter().map(|p| p.support_radius()).fold(0.0, f64::max),
            TestFunction::Radial { step, values } => step * (values.len().max(1) - 1) as f64,
        }
    }

    /// Area of the support set for indicators; components of a union are
    /// assumed disjoint.
    pub fn area(&self) -> Option<f64> {
        match self {
            TestFunction::Disk { radius, .. } => Some(std::f64::consts::PI * radius * radius),
            TestFunction::Rectangle { x0, y0, x1, y1 } => Some((x1 - x0) * (y1 - y0)),
            TestFunction::Union(parts) => parts.iter().map(|p| p.area()).sum(),
            TestFunction::Radial { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            TestFunction::Disk { radius, .. } if !(*radius > 0.0) => {
                Err(Error::UnsupportedShape(format!("disk radius {radius}")))
            }
            TestFunction::Rectangle { x0, y0, x1, y1 } if !(x1 > x0 && y1 > y0) => {
                Err(Error::UnsupportedShape("empty rectangle".into()))
            }
            TestFunction::Union(parts) => {
                if parts.is_empty() {
                    return Err(Error::UnsupportedShape("empty union".into()));
                }
                for p in parts {
                    if matches!(p, TestFunction::Radial { .. }) {
                        return Err(Error::UnsupportedShape("unions take indicator sets only".into()));
                    }
                    p.validate()?;
                }
                Ok(())
            }
            TestFunction::Radial { step, values } if !(*step > 0.0) || values.len() < 2 => {
                Err(Error::UnsupportedShape("radial profile needs step > 0 and two samples".into()))
            }
            TestFunction::Radial { values, .. } if values.iter().any(|v| !v.is_finite()) => {
                Err(Error::NonFinite("radial profile"))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearStatistic {
    pub h: TestFunction,
    pub r: f64,
    pub value: f64,
}

/// `n(R; h) = Σ_{a ∈ Z} h(a/R)` over the zeros of one replica.
pub fn linear_statistic(zs: &ZeroSet, h: &TestFunction, r: f64) -> Result<LinearStatistic> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("scale R = {r} must be positive")));
    }
    h.validate()?;
    let support = r * h.support_radius();
    if support > zs.r_trust * (1.0 + 1e-12) {
        return Err(Error::UntrustedRegion {
            support,
            trusted: zs.r_trust,
        });
    }
    let value = zs.zeros.iter().map(|a| h.eval(a / r)).sum();
    Ok(LinearStatistic {
        h: h.clone(),
        r,
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(zeros: Vec<Complex64>, r_trust: f64) -> ZeroSet {
        ZeroSet {
            zeros,
            r_trust,
            degree: 10,
            residual_max: 0.0,
            seed: None,
        }
    }

    #[test]
    fn empty_set_gives_zero() {
        let s = linear_statistic(&set(vec![], 5.0), &TestFunction::unit_disk(), 5.0).unwrap();
        assert_eq!(s.value, 0.0);
    }

    #[test]
    fn unit_disk_counts_all_zeros() {
        let zs = set(vec![Complex64::new(1.0, 2.0), Complex64::new(-3.0, 0.5), Complex64::new(0.0, 0.0)], 4.0);
        let s = linear_statistic(&zs, &TestFunction::unit_disk(), 4.0).unwrap();
        assert_eq!(s.value, 3.0);
    }

    #[test]
    fn untrusted_support_is_rejected() {
        let zs = set(vec![], 4.0);
        assert!(matches!(
            linear_statistic(&zs, &TestFunction::unit_disk(), 4.5),
            Err(Error::UntrustedRegion { .. })
        ));
    }

    #[test]
    fn radial_profile_interpolates() {
        let h = TestFunction::Radial {
            step: 0.5,
            values: vec![1.0, 0.5, 0.0],
        };
        assert_eq!(h.eval(Complex64::new(0.25, 0.0)), 0.75);
        assert_eq!(h.eval(Complex64::new(0.0, 2.0)), 0.0);
        assert_eq!(h.support_radius(), 1.0);
    }

    #[test]
    fn union_and_rectangle_shapes() {
        let u = TestFunction::Union(vec![
            TestFunction::Rectangle { x0: 0.0, y0: 0.0, x1: 1.0, y1: 1.0 },
            TestFunction::Disk { center: Complex64::new(-3.0, 0.0), radius: 0.5 },
        ]);
        u.validate().unwrap();
        assert_eq!(u.eval(Complex64::new(0.5, 0.5)), 1.0);
        assert_eq!(u.eval(Complex64::new(-3.2, 0.1)), 1.0);
        assert_eq!(u.eval(Complex64::new(-1.0, 0.0)), 0.0);
        assert!((u.support_radius() - 3.5).abs() < 1e-15);
        assert!((u.area().unwrap() - (1.0 + std::f64::consts::PI * 0.25)).abs() < 1e-15);
    }
}
