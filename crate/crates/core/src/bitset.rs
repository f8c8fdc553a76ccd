//! Fixed-width bit sets over the element indices of a group.

use smallvec::SmallVec;
use std::fmt;

const WORD_BITS: usize = u64::BITS as usize;

/// A subset of `[0, universe)`. Groups of order up to 128 stay inline.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet {
    words: SmallVec<[u64; 2]>,
    universe: u32,
}

impl ElementSet {
    pub fn new(universe: usize) -> Self {
        let n_words = universe.div_ceil(WORD_BITS).max(1);
        ElementSet {
            words: SmallVec::from_elem(0, n_words),
            universe: universe as u32,
        }
    }

    pub fn universe(&self) -> usize {
        self.universe as usize
    }

    #[inline]
    pub fn contains(&self, idx: u32) -> bool {
        let i = idx as usize;
        debug_assert!(i < self.universe as usize);
        self.words[i / WORD_BITS] & (1u64 << (i % WORD_BITS)) != 0
    }

    /// Returns `true` if the bit was newly set.
    #[inline]
    pub fn insert(&mut self, idx: u32) -> bool {
        let i = idx as usize;
        debug_assert!(i < self.universe as usize);
        let w = &mut self.words[i / WORD_BITS];
        let mask = 1u64 << (i % WORD_BITS);
        let fresh = *w & mask == 0;
        *w |= mask;
        fresh
    }

    pub fn remove(&mut self, idx: u32) {
        let i = idx as usize;
        self.words[i / WORD_BITS] &= !(1u64 << (i % WORD_BITS));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &ElementSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a |= *b;
        }
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            word_idx: 0,
            current: self.words[0],
        }
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some((self.word_idx * WORD_BITS + bit) as u32);
            }
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_contains_iter() {
        let mut s = ElementSet::new(130);
        assert!(s.is_empty());
        for i in [0u32, 5, 63, 64, 127, 129] {
            assert!(s.insert(i));
            assert!(!s.insert(i));
        }
        assert_eq!(s.len(), 6);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 5, 63, 64, 127, 129]);
        s.remove(64);
        assert!(!s.contains(64));
        assert_eq!(s.len(), 5);
    }

    #[test]
    fn union_and_subset() {
        let mut a = ElementSet::new(10);
        let mut b = ElementSet::new(10);
        a.insert(1);
        b.insert(1);
        b.insert(7);
        assert!(a.is_subset(&b));
        assert!(!b.is_subset(&a));
        a.union_with(&b);
        assert_eq!(a, b);
    }
}
