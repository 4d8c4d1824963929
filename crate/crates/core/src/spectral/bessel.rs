//! Bessel functions `J_0` and `J_1` of real argument.
//!
//! Below [`ASYMPTOTIC_FROM`] Miller's backward recurrence normalised by
//! `J_0 + 2 Σ J_{2k} = 1`; above it the Hankel asymptotic expansion, whose
//! smallest term there is far below double precision.

const ASYMPTOTIC_FROM: f64 = 25.0;

/// `(J_0(x), J_1(x))`.
pub fn j0_j1(x: f64) -> (f64, f64) {
    let ax = x.abs();
    let (j0, j1) = if ax < 1e-8 {
        (1.0 - 0.25 * ax * ax, 0.5 * ax)
    } else if ax < ASYMPTOTIC_FROM {
        miller(ax)
    } else {
        (hankel(0, ax), hankel(1, ax))
    };
    (j0, if x < 0.0 { -j1 } else { j1 })
}

pub fn j0(x: f64) -> f64 {
    j0_j1(x).0
}

pub fn j1(x: f64) -> f64 {
    j0_j1(x).1
}

fn miller(x: f64) -> (f64, f64) {
    let m = 2 * ((x as usize + 20 + (40.0 * x).sqrt() as usize) / 2);
    let (mut next, mut cur) = (0.0f64, 1e-30f64); // J_{n+1}, J_n at n = m
    let mut even_sum = cur; // m is even
    let (mut j0, mut j1) = (0.0, 0.0);
    for n in (1..=m).rev() {
        let prev = 2.0 * n as f64 / x * cur - next;
        next = cur;
        cur = prev;
        if n - 1 == 1 {
            j1 = cur;
        }
        if n - 1 == 0 {
            j0 = cur;
        } else if (n - 1) % 2 == 0 {
            even_sum += cur;
        }
        if cur.abs() > 1e250 {
            next *= 1e-250;
            cur *= 1e-250;
            even_sum *= 1e-250;
            j1 *= 1e-250;
        }
    }
    let norm = j0 + 2.0 * even_sum;
    (j0 / norm, j1 / norm)
}

fn hankel(nu: u32, x: f64) -> f64 {
    let mu = 4.0 * (nu * nu) as f64;
    let (mut p, mut q) = (1.0, 0.0);
    let mut term = 1.0;
    for k in 1..40 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 1 {
            q += sign * term;
        } else {
            p += sign * term;
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * nu as f64 + 0.25) * std::f64::consts::PI;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}
