//! Fixed-width bit vectors over predicate ids.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

const WORD_BITS: usize = 64;

#[inline]
pub(crate) fn word_count(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// A set of predicate ids drawn from `0..capacity`.
///
/// Used both for evidence sets (`Sat(t, t')`) and for candidate hitting sets.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredicateSet {
    capacity: usize,
    words: Vec<u64>,
}

impl PredicateSet {
    pub fn new(capacity: usize) -> Self {
        PredicateSet {
            capacity,
            words: vec![0; word_count(capacity)],
        }
    }

    pub fn full(capacity: usize) -> Self {
        let mut s = Self::new(capacity);
        for i in 0..capacity {
            s.insert(i);
        }
        s
    }

    pub fn from_ids<I: IntoIterator<Item = usize>>(capacity: usize, ids: I) -> Self {
        let mut s = Self::new(capacity);
        for i in ids {
            s.insert(i);
        }
        s
    }

    /// Builds a set from raw little-endian words. Bits beyond `capacity` are
    /// cleared.
    pub fn from_words(capacity: usize, words: &[u64]) -> Self {
        let mut s = Self::new(capacity);
        let n = s.words.len().min(words.len());
        s.words[..n].copy_from_slice(&words[..n]);
        let tail = capacity % WORD_BITS;
        if tail != 0 {
            if let Some(last) = s.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        s
    }

    #[inline]
    pub fn capacity(&self) -> usize {
        self.capacity
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, id: usize) -> bool {
        id < self.capacity && self.words[id / WORD_BITS] >> (id % WORD_BITS) & 1 == 1
    }

    /// Returns `true` if the id was not present.
    #[inline]
    pub fn insert(&mut self, id: usize) -> bool {
        assert!(id < self.capacity, "predicate id {id} out of range");
        let (w, b) = (id / WORD_BITS, id % WORD_BITS);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] |= 1 << b;
        !was
    }

    /// Returns `true` if the id was present.
    #[inline]
    pub fn remove(&mut self, id: usize) -> bool {
        if id >= self.capacity {
            return false;
        }
        let (w, b) = (id / WORD_BITS, id % WORD_BITS);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] &= !(1 << b);
        was
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn intersects(&self, other: &PredicateSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .any(|(a, b)| a & b != 0)
    }

    pub fn intersection_len(&self, other: &PredicateSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &PredicateSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &PredicateSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &PredicateSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn intersection(&self, other: &PredicateSet) -> PredicateSet {
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        out
    }

    /// Ids in increasing order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for PredicateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD_BITS + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

impl<'a> IntoIterator for &'a PredicateSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}
