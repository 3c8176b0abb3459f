//! Small-set plumbing: a `u64` bitset over carrier elements, binomials, and
//! colex ranking of k-subsets.
//!
//! Every carrier in this crate has at most [`MAX_CARRIER`] elements, so a
//! subset is a single machine word and k-subsets are enumerated in colex order
//! with Gosper's hack (colex order on k-subsets is numeric order on masks).

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest supported carrier size.
pub const MAX_CARRIER: usize = 64;

/// A subset of `{0, …, 63}`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElemSet(pub u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    /// `{0, …, m-1}`.
    pub fn full(m: usize) -> Self {
        debug_assert!(m <= MAX_CARRIER);
        if m >= 64 {
            ElemSet(u64::MAX)
        } else {
            ElemSet((1u64 << m) - 1)
        }
    }

    pub fn singleton(x: usize) -> Self {
        ElemSet(1u64 << x)
    }

    /// Elements `lo..hi` (half open).
    pub fn range(lo: usize, hi: usize) -> Self {
        if lo >= hi {
            return ElemSet::EMPTY;
        }
        ElemSet(ElemSet::full(hi).0 & !ElemSet::full(lo).0)
    }

    #[inline]
    pub fn contains(self, x: usize) -> bool {
        x < 64 && (self.0 >> x) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: usize) {
        self.0 |= 1u64 << x;
    }

    #[inline]
    pub fn remove(&mut self, x: usize) {
        self.0 &= !(1u64 << x);
    }

    #[inline]
    pub fn with(self, x: usize) -> Self {
        ElemSet(self.0 | (1u64 << x))
    }

    #[inline]
    pub fn without(self, x: usize) -> Self {
        ElemSet(self.0 & !(1u64 << x))
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        ElemSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        ElemSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        ElemSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    /// Elements in ascending order.
    pub fn iter(self) -> Elems {
        Elems(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Lexicographic comparison of the sorted element sequences.
    pub fn lex_cmp(self, other: Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl FromIterator<usize> for ElemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = ElemSet::EMPTY;
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for ElemSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ElemSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = v.iter().find(|&&x| x >= MAX_CARRIER) {
            return Err(serde::de::Error::custom(format!(
                "element {bad} exceeds the carrier limit {MAX_CARRIER}"
            )));
        }
        Ok(v.into_iter().collect())
    }
}

pub struct Elems(u64);

impl Iterator for Elems {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let x = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(x)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Elems {}

static BINOM: [[u64; 65]; 65] = {
    let mut t = [[0u64; 65]; 65];
    let mut n = 0;
    while n < 65 {
        t[n][0] = 1;
        let mut k = 1;
        while k <= n {
            // C(64, 32) < 2^63, so nothing here overflows.
            t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            k += 1;
        }
        n += 1;
    }
    t
};

/// `C(n, k)` for `n ≤ 64`; zero when `k > n`.
#[inline]
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n || n > 64 {
        0
    } else {
        BINOM[n][k]
    }
}

/// Index of the pair `{x, y}` (x ≠ y) in colex order: `C(max, 2) + min`.
#[inline]
pub fn pair_index(x: usize, y: usize) -> usize {
    let (lo, hi) = if x < y { (x, y) } else { (y, x) };
    debug_assert!(lo != hi);
    hi * (hi - 1) / 2 + lo
}

/// Inverse of [`pair_index`], returning `(lo, hi)`.
pub fn pair_from_index(idx: usize) -> (usize, usize) {
    let mut hi = 1;
    while (hi + 1) * hi / 2 <= idx {
        hi += 1;
    }
    (idx - hi * (hi - 1) / 2, hi)
}

/// Colex rank of a subset among subsets of the same size.
#[inline]
pub fn colex_rank(set: ElemSet) -> usize {
    set.iter()
        .enumerate()
        .map(|(i, x)| binomial(x, i + 1) as usize)
        .sum()
}

/// All `k`-subsets of `{0, …, m-1}` in colex order.
pub fn k_subsets(m: usize, k: usize) -> KSubsets {
    KSubsets::of(ElemSet::full(m), k)
}

/// Iterates the `k`-subsets of an arbitrary base set, in colex order of the
/// base set's own indexing (which agrees with colex order in the carrier).
pub struct KSubsets {
    base: [u8; 64],
    base_len: usize,
    mask: u64,
    done: bool,
}

impl KSubsets {
    pub fn of(base: ElemSet, k: usize) -> Self {
        let mut b = [0u8; 64];
        let mut n = 0;
        for x in base.iter() {
            b[n] = x as u8;
            n += 1;
        }
        let done = k > n;
        let mask = if k == 0 { 0 } else { ElemSet::full(k).0 };
        KSubsets {
            base: b,
            base_len: n,
            mask,
            done,
        }
    }

    fn expand(&self, local: u64) -> ElemSet {
        let mut out = 0u64;
        let mut l = local;
        while l != 0 {
            let i = l.trailing_zeros() as usize;
            out |= 1u64 << self.base[i];
            l &= l - 1;
        }
        ElemSet(out)
    }
}

impl Iterator for KSubsets {
    type Item = ElemSet;

    fn next(&mut self) -> Option<ElemSet> {
        if self.done {
            return None;
        }
        let current = self.expand(self.mask);
        if self.mask == 0 {
            self.done = true;
            return Some(current);
        }
        // Gosper's hack; stop once the top bit leaves the base.
        let c = self.mask & self.mask.wrapping_neg();
        let r = self.mask.wrapping_add(c);
        if r == 0 {
            self.done = true;
        } else {
            let next = (((r ^ self.mask) >> 2) / c) | r;
            if self.base_len < 64 && next >> self.base_len != 0 {
                self.done = true;
            } else {
                self.mask = next;
            }
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials_match_pascal() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(10, 4), 210);
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
        assert_eq!(binomial(3, 4), 0);
    }

    #[test]
    fn k_subsets_are_colex_and_ranked() {
        let all: Vec<ElemSet> = k_subsets(6, 3).collect();
        assert_eq!(all.len(), 20);
        for (i, s) in all.iter().enumerate() {
            assert_eq!(s.len(), 3);
            assert_eq!(colex_rank(*s), i);
        }
        assert_eq!(all[0].to_vec(), vec![0, 1, 2]);
        assert_eq!(all[1].to_vec(), vec![0, 1, 3]);
        assert_eq!(all[19].to_vec(), vec![3, 4, 5]);
    }

    #[test]
    fn k_subsets_of_sparse_base() {
        let base: ElemSet = [1, 4, 6, 9].into_iter().collect();
        let got: Vec<Vec<usize>> = KSubsets::of(base, 2).map(|s| s.to_vec()).collect();
        assert_eq!(
            got,
            vec![
                vec![1, 4],
                vec![1, 6],
                vec![4, 6],
                vec![1, 9],
                vec![4, 9],
                vec![6, 9]
            ]
        );
        assert_eq!(KSubsets::of(base, 0).count(), 1);
        assert_eq!(KSubsets::of(base, 5).count(), 0);
        assert_eq!(KSubsets::of(ElemSet::full(64), 63).count(), 64);
    }

    #[test]
    fn pair_index_roundtrip() {
        let mut idx = 0;
        for hi in 1..20 {
            for lo in 0..hi {
                assert_eq!(pair_index(lo, hi), idx);
                assert_eq!(pair_index(hi, lo), idx);
                assert_eq!(pair_from_index(idx), (lo, hi));
                idx += 1;
            }
        }
    }

    #[test]
    fn set_ops() {
        let s: ElemSet = [3, 1, 7].into_iter().collect();
        assert_eq!(s.to_vec(), vec![1, 3, 7]);
        assert_eq!(s.min(), Some(1));
        assert_eq!(s.max(), Some(7));
        assert_eq!(ElemSet::range(2, 5).to_vec(), vec![2, 3, 4]);
        assert!(ElemSet::range(5, 5).is_empty());
        assert_eq!(ElemSet::full(64).len(), 64);
        let a: ElemSet = [0, 5].into_iter().collect();
        let b: ElemSet = [0, 2, 9].into_iter().collect();
        assert_eq!(a.lex_cmp(b), std::cmp::Ordering::Greater);
    }
}
