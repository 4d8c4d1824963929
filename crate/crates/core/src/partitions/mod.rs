//! Set partitions and the moment/cumulant transforms built on them.
//!
//! Ground sets are `{0, ..., k-1}`. Partitions are produced in
//! restricted-growth-string order and blocks are listed by smallest element,
//! so every transform visits terms in a fixed order.

mod integrator;

use std::collections::BTreeMap;

use crate::{Error, Result};

pub use integrator::{
    statistic_cumulant, statistic_moment, CorrelationIntegrator, GefDiskIntegrator, TabulatedBrackets,
};

pub const MAX_PARTITION_SIZE: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetPartition {
    k: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn ground_size(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_sizes(&self) -> BlockSizeMultiset {
        BlockSizeMultiset::new(self.blocks.iter().map(Vec::len).collect())
    }

    /// Blocks as bit masks over the ground set.
    pub fn masks(&self) -> impl Iterator<Item = u32> + '_ {
        self.blocks.iter().map(|b| b.iter().fold(0u32, |m, &i| m | (1 << i)))
    }

    fn from_rgs(rgs: &[usize]) -> Self {
        let nblocks = rgs.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); nblocks];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(i);
        }
        Self { k: rgs.len(), blocks }
    }
}

/// Multiset of block sizes, kept sorted in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockSizeMultiset {
    sizes: Vec<usize>,
}

impl BlockSizeMultiset {
    pub fn new(mut sizes: Vec<usize>) -> Self {
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        Self { sizes }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Number of set partitions of `{0..n-1}` with these block sizes:
    /// `n! / (∏ p_i! ∏ m_j!)` with `m_j` the multiplicity of size `j`.
    pub fn partition_count(&self) -> u64 {
        let n = self.total();
        let mut num = factorial(n) as u128;
        for &p in &self.sizes {
            num /= factorial(p) as u128;
        }
        let mut i = 0;
        while i < self.sizes.len() {
            let mut j = i;
            while j < self.sizes.len() && self.sizes[j] == self.sizes[i] {
                j += 1;
            }
            num /= factorial(j - i) as u128;
            i = j;
        }
        num as u64
    }
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn check_size(k: usize) -> Result<()> {
    if k == 0 || k > MAX_PARTITION_SIZE {
        return Err(Error::SizeLimit {
            what: "set partition ground set",
            limit: MAX_PARTITION_SIZE,
            requested: k,
        });
    }
    Ok(())
}

/// Restricted growth strings `a_0 = 0`, `a_i ≤ 1 + max(a_0..a_{i-1})`, in
/// lexicographic order.
struct RgsIter {
    a: Vec<usize>,
    max_prefix: Vec<usize>,
    done: bool,
}

impl RgsIter {
    fn new(k: usize) -> Self {
        Self {
            a: vec![0; k],
            max_prefix: vec![0; k],
            done: false,
        }
    }
}

impl Iterator for RgsIter {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        let out = SetPartition::from_rgs(&self.a);
        let k = self.a.len();
        // advance: rightmost position that can still grow
        let mut i = k;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.a[i] <= self.max_prefix[i - 1] {
                self.a[i] += 1;
                self.max_prefix[i] = self.max_prefix[i - 1].max(self.a[i]);
                for j in (i + 1)..k {
                    self.a[j] = 0;
                    self.max_prefix[j] = self.max_prefix[i];
                }
                break;
            }
        }
        Some(out)
    }
}

/// Every partition of `{0..k-1}`, each exactly once.
pub fn enumerate_partitions(k: usize) -> Result<impl Iterator<Item = SetPartition>> {
    check_size(k)?;
    Ok(RgsIter::new(k))
}

/// Partitions of `{0..k-1}` into exactly `j` blocks; empty when `j > k`.
pub fn enumerate_partitions_into(k: usize, j: usize) -> Result<impl Iterator<Item = SetPartition>> {
    check_size(k)?;
    Ok(RgsIter::new(k).filter(move |p| p.len() == j))
}

pub fn bell(k: usize) -> u64 {
    (0..=k).map(|j| stirling2(k, j)).sum()
}

pub fn stirling2(n: usize, k: usize) -> u64 {
    let mut row = vec![0u64; k + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = j as u64 * row[j] + row[j - 1];
        }
        row[0] = 0;
    }
    row[k]
}

/// Integer partitions of `n` (as decreasing size lists).
pub fn size_multisets(n: usize) -> Vec<BlockSizeMultiset> {
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<BlockSizeMultiset>) {
        if n == 0 {
            out.push(BlockSizeMultiset { sizes: cur.clone() });
            return;
        }
        for p in (1..=n.min(max)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Neumaier-compensated sum.
#[derive(Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `(−1)^{ℓ−1} (ℓ−1)!`, the Möbius weight of a partition with `ℓ` blocks.
pub fn mobius_weight(blocks: usize) -> f64 {
    let f = factorial(blocks - 1) as f64;
    if blocks % 2 == 1 {
        f
    } else {
        -f
    }
}

fn check_sequence(v: &[f64]) -> Result<()> {
    if v.len() > MAX_PARTITION_SIZE {
        return Err(Error::SizeLimit {
            what: "moment sequence",
            limit: MAX_PARTITION_SIZE,
            requested: v.len(),
        });
    }
    Ok(())
}

/// `s_n = Σ_{π ∈ Π(n)} (−1)^{ℓ−1}(ℓ−1)! ∏ m_{|π_t|}`, for `n = 1..len`.
pub fn moments_to_cumulants(m: &[f64]) -> Result<Vec<f64>> {
    check_sequence(m)?;
    Ok((1..=m.len())
        .map(|n| {
            let mut acc = CompensatedSum::default();
            for ms in size_multisets(n) {
                let prod: f64 = ms.sizes.iter().map(|&p| m[p - 1]).product();
                acc.add(ms.partition_count() as f64 * mobius_weight(ms.sizes.len()) * prod);
            }
            acc.value()
        })
        .collect())
}

/// `m_n = Σ_{π ∈ Π(n)} ∏ s_{|π_t|}`.
pub fn cumulants_to_moments(s: &[f64]) -> Result<Vec<f64>> {
    check_sequence(s)?;
    Ok((1..=s.len())
        .map(|n| {
            let mut acc = CompensatedSum::default();
            for ms in size_multisets(n) {
                let prod: f64 = ms.sizes.iter().map(|&p| s[p - 1]).product();
                acc.add(ms.partition_count() as f64 * prod);
            }
            acc.value()
        })
        .collect())
}

/// Subset values keyed by bit mask over `{0..k-1}`.
pub type SubsetValues = BTreeMap<u32, f64>;

fn lookup(values: &SubsetValues, mask: u32) -> Result<f64> {
    values
        .get(&mask)
        .copied()
        .ok_or_else(|| Error::IncompleteInput(format!("no value for subset mask {mask:#b}")))
}

/// `ρ_k^T(Z) = Σ_ℓ (−1)^{ℓ−1}(ℓ−1)! Σ_{π ∈ Π(k,ℓ)} ∏_t ρ(Z_{π_t})`.
pub fn truncated_from_correlations(k: usize, values: &SubsetValues) -> Result<f64> {
    let mut acc = CompensatedSum::default();
    for p in enumerate_partitions(k)? {
        let mut prod = mobius_weight(p.len());
        for mask in p.masks() {
            prod *= lookup(values, mask)?;
        }
        acc.add(prod);
    }
    Ok(acc.value())
}

/// `ρ_k(Z) = Σ_{π ∈ Π(k)} ∏_t ρ^T(Z_{π_t})`.
pub fn correlations_from_truncated(k: usize, truncated: &SubsetValues) -> Result<f64> {
    let mut acc = CompensatedSum::default();
    for p in enumerate_partitions(k)? {
        let mut prod = 1.0;
        for mask in p.masks() {
            prod *= lookup(truncated, mask)?;
        }
        acc.add(prod);
    }
    Ok(acc.value())
}

/// Apply [`truncated_from_correlations`] to every non-empty subset.
pub fn truncated_subset_values(k: usize, values: &SubsetValues) -> Result<SubsetValues> {
    let mut out = SubsetValues::new();
    for mask in 1u32..(1u32 << k) {
        let idx: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        // restrict the map to the subset, re-indexed to 0..|S|
        let mut sub = SubsetValues::new();
        for smask in 1u32..(1u32 << idx.len()) {
            let full = idx
                .iter()
                .enumerate()
                .filter(|(b, _)| smask & (1 << b) != 0)
                .fold(0u32, |m, (_, &i)| m | (1 << i));
            sub.insert(smask, lookup(values, full)?);
        }
        out.insert(mask, truncated_from_correlations(idx.len(), &sub)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn counts_match_bell_and_stirling() {
        let bells = [1u64, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975, 678570, 4213597];
        for k in 1..=12 {
            let n = enumerate_partitions(k).unwrap().count() as u64;
            assert_eq!(n, bells[k - 1], "k={k}");
            assert_eq!(bell(k), bells[k - 1]);
            if k <= 9 {
                for j in 1..=k {
                    let c = enumerate_partitions_into(k, j).unwrap().count() as u64;
                    assert_eq!(c, stirling2(k, j), "S({k},{j})");
                }
            }
        }
        assert_eq!(stirling2(4, 2), 7);
        assert_eq!(enumerate_partitions_into(4, 2).unwrap().count(), 7);
        assert_eq!(enumerate_partitions_into(5, 5).unwrap().count(), 1);
        assert_eq!(enumerate_partitions_into(5, 1).unwrap().count(), 1);
        assert_eq!(enumerate_partitions_into(3, 4).unwrap().count(), 0);
        assert!(enumerate_partitions(13).is_err());
        assert!(enumerate_partitions(0).is_err());
    }

    #[test]
    fn partitions_are_valid_and_distinct() {
        let all: Vec<SetPartition> = enumerate_partitions(6).unwrap().collect();
        let mut seen = std::collections::HashSet::new();
        for p in &all {
            let mut covered: Vec<usize> = p.blocks().iter().flatten().cloned().collect();
            covered.sort();
            assert_eq!(covered, (0..6).collect::<Vec<_>>());
            assert!(p.blocks().windows(2).all(|w| w[0][0] < w[1][0]));
            assert!(seen.insert(p.blocks().to_vec()));
        }
    }

    #[test]
    fn multiset_counts_sum_to_bell() {
        for n in 1..=12 {
            let total: u64 = size_multisets(n).iter().map(|m| m.partition_count()).sum();
            assert_eq!(total, bell(n));
        }
        assert_eq!(BlockSizeMultiset::new(vec![1, 2, 1]).partition_count(), 6);
    }

    #[test]
    fn low_order_cumulants() {
        let (m1, m2, m3) = (0.7, 1.9, -0.4);
        let s = moments_to_cumulants(&[m1, m2, m3]).unwrap();
        assert!((s[1] - (m2 - m1 * m1)).abs() < 1e-15);
        assert!((s[2] - (m3 - 3.0 * m1 * m2 + 2.0 * m1.powi(3))).abs() < 1e-14);
        let gauss = moments_to_cumulants(&[0.0, 1.0, 0.0, 3.0, 0.0, 15.0]).unwrap();
        for (i, v) in gauss.iter().enumerate() {
            assert!((v - if i == 1 { 1.0 } else { 0.0 }).abs() < 1e-13, "{gauss:?}");
        }
        assert_eq!(cumulants_to_moments(&[0.0, 1.0]).unwrap()[1], 1.0);
        assert_eq!(cumulants_to_moments(&[2.5]).unwrap(), vec![2.5]);
        assert!(moments_to_cumulants(&[]).unwrap().is_empty());
        // Poisson: all cumulants λ
        let lambda: f64 = 4.0;
        let m = cumulants_to_moments(&[lambda; 4]).unwrap();
        assert_eq!(m, vec![4.0, 20.0, 116.0, 756.0]);
    }

    #[test]
    fn truncated_two_and_three() {
        let mut v = SubsetValues::new();
        v.insert(0b01, 0.3);
        v.insert(0b10, 0.5);
        v.insert(0b11, 0.2);
        assert!((truncated_from_correlations(2, &v).unwrap() - (0.2 - 0.15)).abs() < 1e-16);
        v.remove(&0b11);
        assert!(matches!(truncated_from_correlations(2, &v), Err(Error::IncompleteInput(_))));

        let mut rng = crate::rng::seeded(5);
        let mut w = SubsetValues::new();
        for mask in 1..8u32 {
            w.insert(mask, rng.random_range(0.1..1.0));
        }
        let r = |m: u32| w[&m];
        let want = r(7) - (r(3) * r(4) + r(5) * r(2) + r(6) * r(1)) + 2.0 * r(1) * r(2) * r(4);
        assert!((truncated_from_correlations(3, &w).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn multilinearity_matches_partition_counting() {
        // ∂ρ^T/∂ρ(full set) = 1; ∂ρ^T/∂ρ({0}) = Σ over partitions containing {0}
        let k = 4;
        let mut v = SubsetValues::new();
        for mask in 1u32..16 {
            v.insert(mask, 0.1 + 0.05 * mask as f64);
        }
        let base = truncated_from_correlations(k, &v).unwrap();
        let h = 1e-6;
        let mut bumped = v.clone();
        *bumped.get_mut(&0b1111).unwrap() += h;
        assert!(((truncated_from_correlations(k, &bumped).unwrap() - base) / h - 1.0).abs() < 1e-6);
        let mut bumped = v.clone();
        *bumped.get_mut(&0b0001).unwrap() += h;
        let fd = (truncated_from_correlations(k, &bumped).unwrap() - base) / h;
        let mut want = 0.0;
        for p in enumerate_partitions(k).unwrap() {
            let masks: Vec<u32> = p.masks().collect();
            if masks.contains(&1) {
                want += mobius_weight(p.len()) * masks.iter().filter(|&&m| m != 1).map(|m| v[m]).product::<f64>();
            }
        }
        assert!((fd - want).abs() < 1e-6 * want.abs().max(1.0), "{fd} vs {want}");
    }

    proptest! {
        #[test]
        fn moment_cumulant_roundtrip(xs in proptest::collection::vec(-2.0f64..2.0, 1..=8)) {
            let m = cumulants_to_moments(&xs).unwrap();
            let back = moments_to_cumulants(&m).unwrap();
            // relative to the size of the terms being cancelled
            for (n, (a, b)) in xs.iter().zip(&back).enumerate() {
                let scale: f64 = size_multisets(n + 1)
                    .iter()
                    .map(|ms| {
                        let prod: f64 = ms.sizes().iter().map(|&p| m[p - 1].abs()).product();
                        ms.partition_count() as f64 * mobius_weight(ms.sizes().len()).abs() * prod
                    })
                    .sum();
                prop_assert!((a - b).abs() <= 1e-12 * scale.max(a.abs()), "{} vs {}", a, b);
            }
        }

        #[test]
        fn truncated_roundtrip(k in 1usize..=5, seed in any::<u64>()) {
            let mut rng = crate::rng::seeded(seed);
            let mut v = SubsetValues::new();
            for mask in 1u32..(1u32 << k) {
                v.insert(mask, rng.random_range(-1.0..1.0));
            }
            let t = truncated_subset_values(k, &v).unwrap();
            let full = (1u32 << k) - 1;
            let back = correlations_from_truncated(k, &t).unwrap();
            prop_assert!((back - v[&full]).abs() <= 1e-12 * v[&full].abs().max(1.0));
        }
    }
}
