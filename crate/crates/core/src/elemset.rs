//! Subsets of a finite carrier, stored as a bitset over element indices.

use std::fmt;

use smallvec::SmallVec;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElemSet {
    words: SmallVec<[u64; 4]>,
    universe: usize,
}

fn word_count(universe: usize) -> usize {
    universe.div_ceil(64)
}

impl ElemSet {
    pub fn empty(universe: usize) -> Self {
        ElemSet {
            words: SmallVec::from_elem(0, word_count(universe)),
            universe,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = ElemSet {
            words: SmallVec::from_elem(u64::MAX, word_count(universe)),
            universe,
        };
        s.trim();
        s
    }

    pub fn singleton(universe: usize, elem: usize) -> Self {
        let mut s = Self::empty(universe);
        s.insert(elem);
        s
    }

    pub fn from_indices(universe: usize, elems: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(universe);
        for e in elems {
            s.insert(e);
        }
        s
    }

    /// The subset whose members are the set bits of `mask` (universe < 64).
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        debug_assert!(universe <= 64);
        let mut s = Self::empty(universe);
        if universe > 0 {
            s.words[0] = mask;
            s.trim();
        }
        s
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

    pub fn insert(&mut self, elem: usize) {
        assert!(elem < self.universe, "element {elem} outside carrier");
        self.words[elem / 64] |= 1 << (elem % 64);
    }

    pub fn remove(&mut self, elem: usize) {
        if elem < self.universe {
            self.words[elem / 64] &= !(1 << (elem % 64));
        }
    }

    pub fn contains(&self, elem: usize) -> bool {
        elem < self.universe && self.words[elem / 64] & (1 << (elem % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe
    }

    pub fn union_with(&mut self, other: &ElemSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &ElemSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &ElemSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &ElemSet) -> ElemSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &ElemSet) -> ElemSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn complement(&self) -> ElemSet {
        let mut s = self.clone();
        for w in s.words.iter_mut() {
            *w = !*w;
        }
        s.trim();
        s
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * 64 + tz)
            })
        })
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
