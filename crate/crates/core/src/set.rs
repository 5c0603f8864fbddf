//! Compact bitsets over dense ids.
//!
//! Every set the engines manipulate — edge sets, vertex sets, matroid grounds —
//! is an [`IdSet`] keyed by a dense id type. The representation is a trimmed
//! `Vec<u64>` (no trailing zero blocks), so structural equality and hashing are
//! canonical and sets can serve as search-state keys.

use std::fmt;
use std::hash::Hash;
use std::marker::PhantomData;

/// A dense id that can index into a bitset.
pub trait Id: Copy + Eq + Ord + Hash + fmt::Debug {
    fn from_index(index: usize) -> Self;
    fn index(self) -> usize;
}

/// A set of ids, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IdSet<T> {
    blocks: Vec<u64>,
    _marker: PhantomData<T>,
}

impl<T: Id> IdSet<T> {
    pub fn new() -> Self {
        IdSet { blocks: Vec::new(), _marker: PhantomData }
    }

    pub fn singleton(id: T) -> Self {
        let mut set = Self::new();
        set.insert(id);
        set
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn contains(&self, id: T) -> bool {
        let (block, bit) = split(id.index());
        self.blocks.get(block).is_some_and(|b| b & (1 << bit) != 0)
    }

    /// Inserts `id`; returns true if it was not already present.
    pub fn insert(&mut self, id: T) -> bool {
        let (block, bit) = split(id.index());
        if block >= self.blocks.len() {
            self.blocks.resize(block + 1, 0);
        }
        let fresh = self.blocks[block] & (1 << bit) == 0;
        self.blocks[block] |= 1 << bit;
        fresh
    }

    /// Removes `id`; returns true if it was present.
    pub fn remove(&mut self, id: T) -> bool {
        let (block, bit) = split(id.index());
        let Some(b) = self.blocks.get_mut(block) else { return false };
        let present = *b & (1 << bit) != 0;
        *b &= !(1 << bit);
        self.trim();
        present
    }

    pub fn union_with(&mut self, other: &Self) {
        if other.blocks.len() > self.blocks.len() {
            self.blocks.resize(other.blocks.len(), 0);
        }
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &Self) {
        self.blocks.truncate(other.blocks.len());
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= b;
        }
        self.trim();
    }

    pub fn difference_with(&mut self, other: &Self) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= !b;
        }
        self.trim();
    }

    pub fn symmetric_difference_with(&mut self, other: &Self) {
        if other.blocks.len() > self.blocks.len() {
            self.blocks.resize(other.blocks.len(), 0);
        }
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a ^= b;
        }
        self.trim();
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.symmetric_difference_with(other);
        out
    }

    /// `self` plus one element, by value.
    pub fn with(&self, id: T) -> Self {
        let mut out = self.clone();
        out.insert(id);
        out
    }

    /// `self` minus one element, by value.
    pub fn without(&self, id: T) -> Self {
        let mut out = self.clone();
        out.remove(id);
        out
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.blocks
            .iter()
            .enumerate()
            .all(|(i, b)| b & !other.blocks.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & b == 0)
    }

    pub fn first(&self) -> Option<T> {
        self.iter().next()
    }

    /// Ascending iteration over the members.
    pub fn iter(&self) -> impl Iterator<Item = T> + '_ {
        self.blocks.iter().enumerate().flat_map(|(i, &block)| {
            let mut rest = block;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(T::from_index(i * 64 + bit))
            })
        })
    }

    /// Total order on the numeric encoding (bit i worth 2^i); used wherever a
    /// deterministic "smallest set" witness or enumeration order is needed.
    pub fn encoding_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.blocks
            .len()
            .cmp(&other.blocks.len())
            .then_with(|| self.blocks.iter().rev().cmp(other.blocks.iter().rev()))
    }

    fn trim(&mut self) {
        while self.blocks.last() == Some(&0) {
            self.blocks.pop();
        }
    }
}

fn split(index: usize) -> (usize, usize) {
    (index / 64, index % 64)
}

impl<T: Id> FromIterator<T> for IdSet<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut set = Self::new();
        for id in iter {
            set.insert(id);
        }
        set
    }
}

impl<T: Id> Extend<T> for IdSet<T> {
    fn extend<I: IntoIterator<Item = T>>(&mut self, iter: I) {
        for id in iter {
            self.insert(id);
        }
    }
}

impl<T: Id> fmt::Debug for IdSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    impl Id for u32 {
        fn from_index(index: usize) -> Self {
            index as u32
        }
        fn index(self) -> usize {
            self as usize
        }
    }

    #[test]
    fn insert_remove_contains() {
        let mut s: IdSet<u32> = IdSet::new();
        assert!(s.insert(3));
        assert!(s.insert(70));
        assert!(!s.insert(3));
        assert!(s.contains(3) && s.contains(70) && !s.contains(4));
        assert_eq!(s.len(), 2);
        assert!(s.remove(70));
        assert!(!s.remove(70));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3]);
    }

    #[test]
    fn trimming_keeps_equality_canonical() {
        let mut a: IdSet<u32> = [100].into_iter().collect();
        a.remove(100);
        assert_eq!(a, IdSet::new());
        let mut h1 = std::collections::hash_map::DefaultHasher::new();
        let mut h2 = h1.clone();
        use std::hash::Hasher;
        std::hash::Hash::hash(&a, &mut h1);
        std::hash::Hash::hash(&IdSet::<u32>::new(), &mut h2);
        assert_eq!(h1.finish(), h2.finish());
    }

    #[test]
    fn set_algebra() {
        let a: IdSet<u32> = [0, 1, 2, 65].into_iter().collect();
        let b: IdSet<u32> = [1, 65, 90].into_iter().collect();
        assert_eq!(a.union(&b).iter().collect::<Vec<_>>(), vec![0, 1, 2, 65, 90]);
        assert_eq!(a.intersection(&b).iter().collect::<Vec<_>>(), vec![1, 65]);
        assert_eq!(a.difference(&b).iter().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(
            a.symmetric_difference(&b).iter().collect::<Vec<_>>(),
            vec![0, 2, 90]
        );
        assert!(a.intersection(&b).is_subset(&a));
        assert!(!a.is_disjoint(&b));
        assert!(a.difference(&b).is_disjoint(&b));
    }

    #[test]
    fn encoding_order_is_numeric() {
        let small: IdSet<u32> = [4].into_iter().collect(); // 16
        let large: IdSet<u32> = [3, 4].into_iter().collect(); // 24
        assert_eq!(small.encoding_cmp(&large), std::cmp::Ordering::Less);
        let wide: IdSet<u32> = [64].into_iter().collect();
        assert_eq!(large.encoding_cmp(&wide), std::cmp::Ordering::Less);
    }
}
