//! Truncated GEF replicas, certified zero extraction and linear statistics.

mod polynomial;
mod replica;
mod statistic;

use num_complex::Complex64;

use crate::table::Table;
use crate::{Error, Result};

pub use polynomial::{aberth, companion_roots, polish, Roots};
pub use replica::{sample_truncated_gef, truncation_degree, TruncatedGef};
pub use statistic::{linear_statistic, LinearStatistic, TestFunction};

/// Certification threshold on `|F_N(z)|` relative to the largest rescaled
/// coefficient.
pub const RESIDUAL_THRESHOLD: f64 = 1e-8;

/// Separation below which two extracted zeros are reported as a multiple zero.
/// A double root only resolves to about `√ε` in double precision, so the cut
/// sits well above the `1e-8` coincidence scale.
pub const MIN_SEPARATION: f64 = 1e-6;

/// Zeros of one replica inside its trusted disk.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroSet {
    pub zeros: Vec<Complex64>,
    pub r_trust: f64,
    pub degree: usize,
    pub residual_max: f64,
    pub seed: Option<u64>,
}

impl ZeroSet {
    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn count_in_disk(&self, center: Complex64, radius: f64) -> usize {
        self.zeros.iter().filter(|z| (*z - center).norm() <= radius).count()
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["re", "im"])
            .with_meta("seed", self.seed.map_or("none".to_string(), |s| s.to_string()))
            .with_meta("degree", self.degree)
            .with_meta("r_trust", crate::table::format_f64(self.r_trust))
            .with_meta("residual_max", crate::table::format_f64(self.residual_max));
        t.rows = self.zeros.iter().map(|z| vec![z.re, z.im]).collect();
        t
    }

    pub fn from_table(t: &Table) -> Result<Self> {
        let field = |key: &str| {
            t.meta(key).ok_or_else(|| Error::Parse {
                line: 1,
                msg: format!("missing header field {key}"),
            })
        };
        let bad = |key: &str, v: &str| Error::Parse {
            line: 1,
            msg: format!("bad {key} value {v:?}"),
        };
        let seed = match field("seed")? {
            "none" => None,
            s => Some(s.parse().map_err(|_| bad("seed", s))?),
        };
        let degree = field("degree")?;
        let r_trust = field("r_trust")?;
        let residual_max = field("residual_max")?;
        if t.columns != ["re", "im"] {
            return Err(Error::Parse {
                line: 2,
                msg: format!("expected columns re, im; found {:?}", t.columns),
            });
        }
        Ok(Self {
            zeros: t.rows.iter().map(|r| Complex64::new(r[0], r[1])).collect(),
            r_trust: r_trust.parse().map_err(|_| bad("r_trust", r_trust))?,
            degree: degree.parse().map_err(|_| bad("degree", degree))?,
            residual_max: residual_max.parse().map_err(|_| bad("residual_max", residual_max))?,
            seed,
        })
    }
}

/// All zeros of `poly` in `|z| ≤ r_trust`, polished and certified.
///
/// The polynomial is rescaled to `u = z/S` with `S = r_trust` and its
/// coefficients normalised so the largest has modulus one; roots are found by
/// Aberth–Ehrlich iteration started from Newton-polygon radii, polished by
/// Newton's method and accepted only if `|p(u)| < RESIDUAL_THRESHOLD`.
pub fn find_zeros(poly: &TruncatedGef, r_trust: f64) -> Result<ZeroSet> {
    let seed = poly.seed();
    let zeta = poly.mantissas();
    let lw = poly.log_weights();
    let top = (0..zeta.len()).rev().find(|&n| zeta[n].norm() > 0.0);
    let top = match top {
        None => return Err(Error::Domain("zero polynomial".into())),
        Some(0) => return Err(Error::NoZeros),
        Some(t) => t,
    };
    let low = (0..=top).find(|&n| zeta[n].norm() > 0.0).unwrap();
    if low >= 2 {
        return Err(Error::MultipleZero {
            location: format!("0 (multiplicity {low})"),
            seed,
        });
    }
    let scale = if r_trust > 0.0 { r_trust } else { 1.0 };
    let log_mag: Vec<f64> = (low..=top)
        .map(|n| lw[n] + n as f64 * scale.ln() + zeta[n].norm().ln())
        .collect();
    let max_log = log_mag.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let a: Vec<Complex64> = (low..=top)
        .map(|n| {
            if zeta[n].norm() == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                zeta[n] / zeta[n].norm() * (log_mag[n - low] - max_log).exp()
            }
        })
        .collect();

    let mut zeros = Vec::new();
    let mut residual_max: f64 = 0.0;
    if low == 1 {
        zeros.push(Complex64::new(0.0, 0.0));
    }
    if a.len() > 1 {
        let found = polynomial::aberth(&a);
        let trusted_u = r_trust / scale;
        for (u, ok) in found.roots.iter().zip(&found.converged) {
            if u.norm() > trusted_u * (1.0 + 1e-9) {
                continue;
            }
            if !ok {
                return Err(Error::RootFinder {
                    seed,
                    reason: format!("no convergence after {} iterations at |z| = {:.4}", found.iterations, u.norm() * scale),
                });
            }
            let u = polynomial::polish(&a, *u);
            let res = polynomial::residual(&a, u);
            if !(res < RESIDUAL_THRESHOLD) {
                return Err(Error::RootFinder {
                    seed,
                    reason: format!("residual {res:e} at z = {} exceeds certification threshold", u * scale),
                });
            }
            residual_max = residual_max.max(res);
            let z = u * scale;
            if z.norm() <= r_trust {
                zeros.push(z);
            }
        }
    }
    zeros.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    check_separation(&zeros, seed)?;
    Ok(ZeroSet {
        zeros,
        r_trust,
        degree: poly.degree(),
        residual_max,
        seed,
    })
}

fn check_separation(sorted: &[Complex64], seed: Option<u64>) -> Result<()> {
    for i in 0..sorted.len() {
        for j in (i + 1)..sorted.len() {
            if sorted[j].re - sorted[i].re > MIN_SEPARATION {
                break;
            }
            if (sorted[j] - sorted[i]).norm() < MIN_SEPARATION {
                return Err(Error::MultipleZero {
                    location: format!("{}", sorted[i]),
                    seed,
                });
            }
        }
    }
    Ok(())
}
