//! Subset enumeration in colex order, binomials, and a small fixed-width
//! bitset.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::One;

/// `C(n, k)`, or `None` on `u128` overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after the multiplication.
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

pub fn binomial_big(n: &BigUint, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    let kk = BigUint::from(k);
    if &kk > n {
        return BigUint::default();
    }
    for i in 0..k {
        acc *= n - BigUint::from(i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

/// Compares two equal-size sorted sets in colex order: the set with the
/// smaller largest differing element comes first.
pub fn colex_cmp(a: &[usize], b: &[usize]) -> Ordering {
    debug_assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// The `rank`-th `k`-subset of the naturals in colex order (combinatorial
/// number system: rank = Σ C(c_i, i + 1)).
pub fn colex_unrank(mut rank: u128, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for i in (1..=k).rev() {
        // Largest c with C(c, i) <= rank.
        let mut lo = i - 1;
        let mut hi = lo + 1;
        while binomial(hi as u64, i as u64).is_some_and(|v| v <= rank) {
            hi *= 2;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if binomial(mid as u64, i as u64).is_some_and(|v| v <= rank) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out[i - 1] = lo;
        rank -= binomial(lo as u64, i as u64).unwrap();
    }
    out
}

/// Advances a sorted `k`-subset of `0..n` to its colex successor. Returns
/// `false` (leaving the subset unspecified) after the last one.
pub fn next_colex(set: &mut [usize], n: usize) -> bool {
    let k = set.len();
    for i in 0..k {
        let limit = if i + 1 < k { set[i + 1] } else { n };
        if set[i] + 1 < limit {
            set[i] += 1;
            for (j, v) in set[..i].iter_mut().enumerate() {
                *v = j;
            }
            return true;
        }
    }
    false
}

/// Iterator over all `k`-subsets of `0..n` in colex order.
pub struct ColexSubsets {
    current: Option<Vec<usize>>,
    n: usize,
}

pub fn colex_subsets(n: usize, k: usize) -> ColexSubsets {
    ColexSubsets {
        current: (k <= n).then(|| (0..k).collect()),
        n,
    }
}

impl Iterator for ColexSubsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().unwrap();
        if cur.is_empty() || !next_colex(cur, self.n) {
            self.current = None;
        }
        Some(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// Bits `0..len` set.
    pub fn prefix(capacity: usize, len: usize) -> Self {
        let mut s = BitSet::new(capacity);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `self ∩ other ∩ [0, below)`.
    pub fn intersect_below(&self, other: &BitSet, below: usize) -> BitSet {
        let mut words: Vec<u64> = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        let full = below / 64;
        let rem = below % 64;
        for (i, w) in words.iter_mut().enumerate() {
            if i > full || (i == full && rem == 0) {
                *w = 0;
            } else if i == full {
                *w &= (1u64 << rem) - 1;
            }
        }
        BitSet { words }
    }

    pub fn intersect(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    /// Set bits in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + t)
                }
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(12800, 2), Some(81_913_600));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(300, 150), None);
        assert_eq!(binomial_big(&BigUint::from(12800u32), 2), BigUint::from(81_913_600u32));
    }

    #[test]
    fn colex_order_small() {
        let all: Vec<_> = colex_subsets(4, 2).collect();
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 3], vec![1, 3], vec![2, 3]]);
        for w in all.windows(2) {
            assert_eq!(colex_cmp(&w[0], &w[1]), Ordering::Less);
        }
        assert_eq!(colex_subsets(3, 0).count(), 1);
        assert_eq!(colex_subsets(2, 3).count(), 0);
    }

    #[test]
    fn unrank_matches_iteration() {
        for (n, k) in [(7, 3), (9, 1), (10, 4)] {
            for (rank, s) in colex_subsets(n, k).enumerate() {
                assert_eq!(colex_unrank(rank as u128, k), s);
            }
            assert_eq!(colex_subsets(n, k).count() as u128, binomial(n as u64, k as u64).unwrap());
        }
    }

    #[test]
    fn bitset_ops() {
        let mut a = BitSet::new(130);
        for i in [0, 5, 64, 100, 129] {
            a.insert(i);
        }
        let full = BitSet::prefix(130, 130);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![0, 5, 64, 100, 129]);
        assert_eq!(a.intersect_below(&full, 100).iter().collect::<Vec<_>>(), vec![0, 5, 64]);
        assert_eq!(a.intersect_below(&full, 64).count(), 2);
        assert_eq!(a.intersect(&full).count(), 5);
        assert!(a.contains(129) && !a.contains(128));
    }
}
