use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::zeros::TestFunction;
use crate::{Error, Result};

/// Smooth radial cutoff: 1 on `t ≤ 1`, 0 on `t ≥ 2`, built from
/// `ψ(u) = e^{−1/u}` in between.
pub fn smooth_cutoff(t: f64) -> f64 {
    let psi = |u: f64| if u > 0.0 { (-1.0 / u).exp() } else { 0.0 };
    if t <= 1.0 {
        1.0
    } else if t >= 2.0 {
        0.0
    } else {
        let (a, b) = (psi(2.0 - t), psi(t - 1.0));
        a / (a + b)
    }
}

/// `φ_{E,R}`: the indicator of `E` with its spectrum multiplied by
/// `m(|ξ|/R)`, sampled on a square grid.
#[derive(Clone, Debug)]
pub struct MollifiedIndicator {
    pub origin: (f64, f64),
    pub spacing: f64,
    pub n: usize,
    /// Row-major, `values[iy * n + ix]` at `origin + spacing·(ix, iy)`.
    pub values: Vec<f64>,
    pub grad_max: f64,
    /// `‖1_E − φ_{E,R}‖_{L²}` on the grid.
    pub l2_error: f64,
    /// Area of `{φ ≥ ½}`.
    pub area_half: f64,
    pub area: f64,
}

fn bounding_box(set: &TestFunction) -> Result<(f64, f64, f64, f64)> {
    match set {
        TestFunction::Disk { center, radius } => Ok((center.re - radius, center.im - radius, center.re + radius, center.im + radius)),
        TestFunction::Rectangle { x0, y0, x1, y1 } => Ok((*x0, *y0, *x1, *y1)),
        TestFunction::Union(parts) if !parts.is_empty() => {
            let mut bb = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
            for p in parts {
                if !matches!(p, TestFunction::Rectangle { .. }) {
                    return Err(Error::UnsupportedShape("unions may contain only axis-aligned rectangles".into()));
                }
                let b = bounding_box(p)?;
                bb = (bb.0.min(b.0), bb.1.min(b.1), bb.2.max(b.2), bb.3.max(b.3));
            }
            Ok(bb)
        }
        other => Err(Error::UnsupportedShape(format!("{other:?} is not a disk or a union of rectangles"))),
    }
}

fn fft2(data: &mut [Complex64], n: usize, inverse: bool) {
    let mut planner = FftPlanner::new();
    let fft = if inverse { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
    for row in data.chunks_mut(n) {
        fft.process(row);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for x in 0..n {
        for y in 0..n {
            col[y] = data[y * n + x];
        }
        fft.process(&mut col);
        for y in 0..n {
            data[y * n + x] = col[y];
        }
    }
    if inverse {
        let s = 1.0 / (n * n) as f64;
        data.iter_mut().for_each(|v| *v *= s);
    }
}

/// Build `φ_{E,R}` for a disk or a finite union of axis-aligned rectangles.
///
/// The grid spacing `1/(8R)` resolves the pass band `|ξ| ≤ 2R` four times
/// over; the indicator is cell-averaged on a 4×4 sub-grid before the FFT.
pub fn mollified_indicator(set: &TestFunction, r: f64) -> Result<MollifiedIndicator> {
    set.validate()?;
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("mollifier scale must be positive, got {r}")));
    }
    let (x0, y0, x1, y1) = bounding_box(set)?;
    let area = set.area().ok_or_else(|| Error::UnsupportedShape("set area unavailable".into()))?;
    let pad = 12.0 / r;
    let spacing = 1.0 / (8.0 * r);
    let side = (x1 - x0).max(y1 - y0) + 2.0 * pad;
    let n = ((side / spacing).ceil() as usize).next_multiple_of(2);
    let origin = (0.5 * (x0 + x1) - 0.5 * n as f64 * spacing, 0.5 * (y0 + y1) - 0.5 * n as f64 * spacing);

    let sub = 4;
    let mut indicator = vec![0.0; n * n];
    for iy in 0..n {
        for ix in 0..n {
            let mut hits = 0;
            for sy in 0..sub {
                for sx in 0..sub {
                    let x = origin.0 + spacing * (ix as f64 + (sx as f64 + 0.5) / sub as f64 - 0.5);
                    let y = origin.1 + spacing * (iy as f64 + (sy as f64 + 0.5) / sub as f64 - 0.5);
                    if set.eval(Complex64::new(x, y)) > 0.0 {
                        hits += 1;
                    }
                }
            }
            indicator[iy * n + ix] = hits as f64 / (sub * sub) as f64;
        }
    }

    let mut spec: Vec<Complex64> = indicator.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft2(&mut spec, n, false);
    let freq = |k: usize| {
        let k = if k < n / 2 { k as f64 } else { k as f64 - n as f64 };
        k / (n as f64 * spacing)
    };
    let mut gx = spec.clone();
    let mut gy = spec.clone();
    for ky in 0..n {
        for kx in 0..n {
            let (fx, fy) = (freq(kx), freq(ky));
            let m = smooth_cutoff((fx * fx + fy * fy).sqrt() / r);
            let i = ky * n + kx;
            spec[i] *= m;
            gx[i] = spec[i] * Complex64::new(0.0, 2.0 * PI * fx);
            gy[i] = spec[i] * Complex64::new(0.0, 2.0 * PI * fy);
        }
    }
    fft2(&mut spec, n, true);
    fft2(&mut gx, n, true);
    fft2(&mut gy, n, true);

    let values: Vec<f64> = spec.iter().map(|v| v.re).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("mollified indicator"));
    }
    let grad_max = gx.iter().zip(&gy).map(|(a, b)| a.re.hypot(b.re)).fold(0.0, f64::max);
    let cell = spacing * spacing;
    let l2_error = (values.iter().zip(&indicator).map(|(p, e)| (e - p).powi(2)).sum::<f64>() * cell).sqrt();
    let area_half = values.iter().filter(|&&v| v >= 0.5).count() as f64 * cell;
    Ok(MollifiedIndicator {
        origin,
        spacing,
        n,
        values,
        grad_max,
        l2_error,
        area_half,
        area,
    })
}
