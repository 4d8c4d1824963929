//! Quadrature rules shared by the intensity, cumulant and spectral code.

use rayon::prelude::*;

use crate::rng::substream;
use rand::Rng;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre rule on `[a, b]` with `panels` equal panels.
pub struct CompositeRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CompositeRule {
    pub fn new(a: f64, b: f64, panels: usize, order: usize) -> Self {
        let (x, w) = gauss_legendre(order);
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * h;
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(mid + 0.5 * h * xi);
                weights.push(0.5 * h * wi);
            }
        }
        Self { nodes, weights }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).sum()
    }
}

/// Additive-recurrence (Kronecker) low-discrepancy sequence in `[0,1)^dim`,
/// using powers of the inverse of the generalised golden ratio.
pub struct Kronecker {
    alpha: Vec<f64>,
}

impl Kronecker {
    pub fn new(dim: usize) -> Self {
        // φ_d solves x^{d+1} = x + 1
        let mut phi = 2.0f64;
        for _ in 0..64 {
            phi = (1.0 + phi).powf(1.0 / (dim as f64 + 1.0));
        }
        let alpha = (1..=dim).map(|j| (1.0 / phi.powi(j as i32)).fract()).collect();
        Self { alpha }
    }

    pub fn point(&self, i: u64, shift: &[f64], out: &mut [f64]) {
        for ((o, a), s) in out.iter_mut().zip(&self.alpha).zip(shift) {
            // (i+1)·α mod 1 without losing precision for large i
            let v = ((i + 1) as f64 * a).fract() + s;
            *o = v - v.floor();
        }
    }
}

/// Randomised quasi-Monte Carlo mean of `f` over `[0,1)^dim`:
/// `shifts` independent Cranley–Patterson rotations of `n` Kronecker points.
/// Returns the mean and its standard error across rotations.
pub fn rqmc_mean<F>(dim: usize, n: u64, shifts: usize, seed: u64, f: F) -> (f64, f64)
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    assert!(shifts >= 2);
    let seq = Kronecker::new(dim);
    let estimates: Vec<f64> = (0..shifts)
        .into_par_iter()
        .map(|s| {
            let mut rng = substream(seed, s as u64);
            let shift: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
            let mut x = vec![0.0; dim];
            let mut acc = 0.0;
            let mut comp = 0.0;
            for i in 0..n {
                seq.point(i, &shift, &mut x);
                // Kahan summation keeps the mean exact to rounding at n ~ 1e7
                let y = f(&x) - comp;
                let t = acc + y;
                comp = (t - acc) - y;
                acc = t;
            }
            acc / n as f64
        })
        .collect();
    let m = estimates.iter().sum::<f64>() / shifts as f64;
    let var = estimates.iter().map(|e| (e - m).powi(2)).sum::<f64>() / (shifts - 1) as f64;
    (m, (var / shifts as f64).sqrt())
}
