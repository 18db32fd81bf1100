//! Fixed-universe bitsets over host or guest vertex ids.

use std::fmt;

/// A subset of `0..universe`, stored as packed 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: usize,
    words: Vec<u64>,
}

pub(crate) fn words_for(universe: usize) -> usize {
    universe.div_ceil(64)
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        Self {
            universe,
            words: vec![0; words_for(universe)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = Self {
            universe,
            words: vec![u64::MAX; words_for(universe)],
        };
        set.trim();
        set
    }

    pub fn from_iter_in<I: IntoIterator<Item = u32>>(universe: usize, items: I) -> Self {
        let mut set = Self::empty(universe);
        for v in items {
            set.insert(v);
        }
        set
    }

    fn trim(&mut self) {
        let rem = self.universe % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        let v = v as usize;
        v < self.universe && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: u32) {
        let v = v as usize;
        assert!(v < self.universe, "vertex {v} outside universe {}", self.universe);
        self.words[v / 64] |= 1 << (v % 64);
    }

    #[inline]
    pub fn remove(&mut self, v: u32) {
        let v = v as usize;
        if v < self.universe {
            self.words[v / 64] &= !(1 << (v % 64));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn fill(&mut self) {
        self.words.iter_mut().for_each(|w| *w = u64::MAX);
        self.trim();
    }

    /// `self &= other`, word by word. `other` must have the same word count.
    #[inline]
    pub fn intersect_words(&mut self, other: &[u64]) {
        debug_assert_eq!(self.words.len(), other.len());
        for (a, b) in self.words.iter_mut().zip(other) {
            *a &= *b;
        }
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.intersect_words(&other.words);
    }

    /// `self &= !other`.
    pub fn difference_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !*b;
        }
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    /// Size of `self ∖ other` without materializing it.
    pub fn count_difference(&self, other: &VertexSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & !b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// The `k`-th smallest member (0-based), if there are more than `k`.
    pub fn nth(&self, mut k: usize) -> Option<u32> {
        for (i, &w) in self.words.iter().enumerate() {
            let c = w.count_ones() as usize;
            if k < c {
                let mut w = w;
                for _ in 0..k {
                    w &= w - 1;
                }
                return Some((i * 64) as u32 + w.trailing_zeros());
            }
            k -= c;
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let base = (i * 64) as u32;
            BitIter(w).map(move |b| base + b)
        })
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(b)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_set_respects_universe() {
        let s = VertexSet::full(70);
        assert_eq!(s.len(), 70);
        assert!(s.contains(69));
        assert!(!s.contains(70));
        assert_eq!(VertexSet::full(64).len(), 64);
        assert_eq!(VertexSet::full(0).len(), 0);
    }

    #[test]
    fn nth_walks_members_in_order() {
        let s = VertexSet::from_iter_in(200, [3, 64, 65, 130, 199]);
        let got: Vec<_> = (0..6).map(|k| s.nth(k)).collect();
        assert_eq!(
            got,
            vec![Some(3), Some(64), Some(65), Some(130), Some(199), None]
        );
    }

    #[test]
    fn set_algebra() {
        let mut a = VertexSet::from_iter_in(10, [1, 2, 3, 4]);
        let b = VertexSet::from_iter_in(10, [3, 4, 5]);
        assert_eq!(a.count_difference(&b), 2);
        a.difference_with(&b);
        assert_eq!(a.to_vec(), vec![1, 2]);
        a.union_with(&b);
        assert_eq!(a.to_vec(), vec![1, 2, 3, 4, 5]);
        a.intersect_with(&b);
        assert_eq!(a, b);
        assert!(b.is_subset(&a));
    }
}
