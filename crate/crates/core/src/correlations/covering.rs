use num_complex::Complex64;

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct CoveringResult {
    pub centers: Vec<Complex64>,
    pub radius: f64,
    /// `assignment[i]` is the index of the center whose disk holds point `i`.
    pub assignment: Vec<usize>,
    /// Radii visited by the merge procedure, starting at 1.
    pub radius_history: Vec<f64>,
}

impl CoveringResult {
    /// `ρ_1 = 1`, `ρ_{j+1} = ρ_j + ½ d̲(ρ_j)` up to index `k`.
    pub fn recursion_bound(k: usize, d_low: impl Fn(f64) -> f64) -> f64 {
        let mut rho = 1.0;
        for _ in 1..k {
            rho += 0.5 * d_low(rho);
        }
        rho
    }

    /// Check every structural guarantee against the input points; the error
    /// lists all violations found.
    pub fn verify(&self, points: &[Complex64], d_low: impl Fn(f64) -> f64) -> Result<()> {
        let mut bad = Vec::new();
        if self.assignment.len() != points.len() {
            bad.push(format!("{} assignments for {} points", self.assignment.len(), points.len()));
        }
        if self.centers.is_empty() || self.centers.len() > points.len() {
            bad.push(format!("{} centers for {} points", self.centers.len(), points.len()));
        }
        for (i, (z, &c)) in points.iter().zip(&self.assignment).enumerate() {
            match self.centers.get(c) {
                Some(w) if (z - w).norm() <= self.radius * (1.0 + 1e-12) => {}
                _ => bad.push(format!("point {i} is not in the disk of center {c}")),
            }
        }
        let d = d_low(self.radius);
        for a in 0..self.centers.len() {
            for b in (a + 1)..self.centers.len() {
                if (self.centers[a] - self.centers[b]).norm() < d {
                    bad.push(format!("centers {a} and {b} are closer than d̲(ρ) = {d}"));
                }
            }
        }
        let bound = Self::recursion_bound(points.len(), &d_low);
        if self.radius > bound * (1.0 + 1e-12) {
            bad.push(format!("radius {} exceeds the recursion bound {bound}", self.radius));
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::ContractViolation(bad.join("; ")))
        }
    }
}

/// Cover `points` by disks of a common radius with well-separated centers.
///
/// Start with unit disks around the points. While two centers are closer than
/// `d̲(ρ)`, replace the closest pair by its midpoint and grow the radius to
/// `ρ + ½ d̲(ρ)`. Points stay covered because the midpoint moves each center
/// by less than `½ d̲(ρ)`.
pub fn covering(points: &[Complex64], d_low: impl Fn(f64) -> f64) -> Result<CoveringResult> {
    if points.is_empty() {
        return Err(Error::EmptyRequest("covering needs at least one point"));
    }
    let mut centers: Vec<Complex64> = points.to_vec();
    let mut assignment: Vec<usize> = (0..points.len()).collect();
    let mut rho = 1.0;
    let mut d = checked(&d_low, rho, None)?;
    let mut history = vec![rho];
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for a in 0..centers.len() {
            for b in (a + 1)..centers.len() {
                let dist = (centers[a] - centers[b]).norm();
                if dist < d && best.is_none_or(|(_, _, bd)| dist < bd) {
                    best = Some((a, b, dist));
                }
            }
        }
        let Some((a, b, _)) = best else { break };
        centers[a] = 0.5 * (centers[a] + centers[b]);
        centers.remove(b);
        for slot in assignment.iter_mut() {
            if *slot == b {
                *slot = a;
            } else if *slot > b {
                *slot -= 1;
            }
        }
        rho += 0.5 * d;
        d = checked(&d_low, rho, Some(d))?;
        history.push(rho);
    }
    Ok(CoveringResult {
        centers,
        radius: rho,
        assignment,
        radius_history: history,
    })
}

fn checked(d_low: &impl Fn(f64) -> f64, rho: f64, previous: Option<f64>) -> Result<f64> {
    let d = d_low(rho);
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::ContractViolation(format!("d̲({rho}) = {d} is not strictly positive")));
    }
    if let Some(p) = previous {
        if d < p {
            return Err(Error::ContractViolation(format!(
                "d̲ is not monotone: d̲({rho}) = {d} < {p}"
            )));
        }
    }
    Ok(d)
}
