use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

pub const MAX_PERMANENT_SIZE: usize = 20;

/// Permanent by dynamic programming over column subsets: `f(S)` is the
/// permanent of the leading `|S|` rows restricted to the columns `S`, and
/// `f(S) = Σ_{j ∈ S} a_{|S|−1, j} f(S ∖ {j})`.
///
/// Same `O(n 2^n)` cost as Ryser's formula, but a sum of products with no
/// inclusion–exclusion signs, so small entries are not swamped by large
/// alternating terms.
pub fn permanent(m: &DMatrix<Complex64>) -> Result<Complex64> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::Shape {
            expected: n,
            found: m.ncols(),
        });
    }
    if n > MAX_PERMANENT_SIZE {
        return Err(Error::SizeLimit {
            what: "permanent",
            limit: MAX_PERMANENT_SIZE,
            requested: n,
        });
    }
    let mut f = vec![Complex64::new(0.0, 0.0); 1 << n];
    f[0] = Complex64::new(1.0, 0.0);
    for mask in 1usize..(1 << n) {
        let row = mask.count_ones() as usize - 1;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut rest = mask;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            acc += m[(row, j)] * f[mask ^ (1 << j)];
        }
        f[mask] = acc;
    }
    Ok(f[(1 << n) - 1])
}
