//! Simultaneous root finding for dense complex polynomials.

use nalgebra::DMatrix;
use num_complex::Complex64;

const EPS: f64 = f64::EPSILON;
const MAX_ITERATIONS: usize = 400;

/// Output of [`aberth`]: approximations to every root, with per-root
/// convergence flags.
#[derive(Clone, Debug)]
pub struct Roots {
    pub roots: Vec<Complex64>,
    pub converged: Vec<bool>,
    pub iterations: usize,
}

/// Value, Newton correction `p/p'`, and a flag for "|p| is at the rounding level".
///
/// For `|u| > 1` the reversed polynomial is evaluated at `1/u`, which keeps
/// Horner's recurrence stable outside the unit disk.
#[inline]
fn newton_step(a: &[Complex64], u: Complex64) -> (Complex64, bool) {
    let n = a.len() - 1;
    let zero = Complex64::new(0.0, 0.0);
    if u.norm_sqr() <= 1.0 {
        let r = u.norm();
        let (mut p, mut dp, mut bound) = (a[n], zero, a[n].norm());
        for k in (0..n).rev() {
            dp = dp * u + p;
            p = p * u + a[k];
            bound = bound * r + a[k].norm();
        }
        let small = p.norm() <= 4.0 * EPS * bound;
        (p / dp, small)
    } else {
        let v = u.inv();
        let r = v.norm();
        let (mut q, mut dq, mut bound) = (a[0], zero, a[0].norm());
        for c in &a[1..] {
            dq = dq * v + q;
            q = q * v + c;
            bound = bound * r + c.norm();
        }
        let small = q.norm() <= 4.0 * EPS * bound;
        let denom = v * (q * n as f64 - v * dq);
        (q / denom, small)
    }
}

/// `|p(u)|` evaluated stably (reversed polynomial outside the unit disk,
/// rescaled back by `|u|^N`).
pub fn residual(a: &[Complex64], u: Complex64) -> f64 {
    let n = a.len() - 1;
    if u.norm_sqr() <= 1.0 {
        a.iter().rev().fold(Complex64::new(0.0, 0.0), |p, c| p * u + c).norm()
    } else {
        let v = u.inv();
        let q = a.iter().fold(Complex64::new(0.0, 0.0), |q, c| q * v + c);
        // |p(u)| = |u|^N |q(1/u)|, computed in logs to avoid overflow
        (q.norm().ln() + n as f64 * u.norm().ln()).exp()
    }
}

/// Initial approximations from the upper convex hull of `(k, ln|a_k|)`:
/// each hull edge of width `m` contributes `m` points on a circle whose radius
/// is the edge's slope.
fn newton_polygon_guesses(a: &[Complex64]) -> Vec<Complex64> {
    let n = a.len() - 1;
    let pts: Vec<(usize, f64)> = a
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(k, c)| (k, c.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while hull.len() >= 2 {
            let (o, a1) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a1.0 as f64 - o.0 as f64) * (p.1 - o.1) - (a1.1 - o.1) * (p.0 as f64 - o.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut guesses = Vec::with_capacity(n);
    let offset = 0.7;
    for w in hull.windows(2) {
        let (k0, l0) = w[0];
        let (k1, l1) = w[1];
        let m = k1 - k0;
        let radius = ((l0 - l1) / m as f64).exp();
        for j in 0..m {
            let theta = std::f64::consts::TAU * (j as f64 / m as f64) + offset + k0 as f64 * 0.1;
            guesses.push(Complex64::from_polar(radius, theta));
        }
    }
    debug_assert_eq!(guesses.len(), n);
    guesses
}

/// All roots of `Σ a_k u^k` by Aberth–Ehrlich iteration.
///
/// Requires `a[0] ≠ 0` and `a[N] ≠ 0`. Roots whose value reaches the rounding
/// level are frozen; the remaining ones keep iterating until they converge or
/// the iteration budget runs out.
pub fn aberth(a: &[Complex64]) -> Roots {
    let n = a.len() - 1;
    assert!(n >= 1 && a[0].norm() > 0.0 && a[n].norm() > 0.0);
    let mut z = newton_polygon_guesses(a);
    let mut converged = vec![false; n];
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS && converged.iter().any(|c| !c) {
        iterations += 1;
        for i in 0..n {
            if converged[i] {
                continue;
            }
            let (corr, small) = newton_step(a, z[i]);
            if small || !corr.re.is_finite() || !corr.im.is_finite() {
                converged[i] = small;
                continue;
            }
            let zi = z[i];
            let mut s = Complex64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    s += (zi - zj).inv();
                }
            }
            let w = corr / (Complex64::new(1.0, 0.0) - corr * s);
            z[i] = zi - w;
            if w.norm() <= EPS * z[i].norm() {
                converged[i] = true;
            }
        }
    }
    Roots {
        roots: z,
        converged,
        iterations,
    }
}

/// A few Newton steps, each accepted only if the residual drops.
pub fn polish(a: &[Complex64], mut u: Complex64) -> Complex64 {
    let mut res = residual(a, u);
    for _ in 0..3 {
        let (corr, _) = newton_step(a, u);
        let cand = u - corr;
        let r = residual(a, cand);
        if r < res {
            u = cand;
            res = r;
        } else {
            break;
        }
    }
    u
}

/// Eigenvalues of the balanced companion matrix. Cubic cost; kept as an
/// independent cross-check on the iterative path.
pub fn companion_roots(a: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = a.len() - 1;
    if n == 0 || a[n].norm() == 0.0 {
        return None;
    }
    let mut c = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        c[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        c[(i, n - 1)] = -a[i] / a[n];
    }
    balance(&mut c);
    let schur = nalgebra::linalg::Schur::try_new(c, EPS, 10_000)?;
    Some(schur.eigenvalues()?.iter().cloned().collect())
}

/// Diagonal similarity scaling by powers of two (Parlett–Reinsch).
fn balance(m: &mut DMatrix<Complex64>) {
    let n = m.nrows();
    let radix = 2.0f64;
    loop {
        let mut done = true;
        for i in 0..n {
            let (mut c, mut r) = (0.0, 0.0);
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].norm();
                    r += m[(i, j)].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let (mut cc, mut rr) = (c, r);
            while cc < rr / radix {
                cc *= radix;
                rr /= radix;
                f *= radix;
            }
            while cc >= rr * radix {
                cc /= radix;
                rr *= radix;
                f /= radix;
            }
            if (cc + rr) < 0.95 * s {
                done = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}
