//! Fixed-width bit vectors over the curve universe.

use std::fmt;

use serde::{Serialize, Serializer};
use smallvec::{smallvec, SmallVec};

const WORD: usize = 64;

/// A subset of the curve universe, stored as a fixed-width bit vector.
///
/// All binary operations require both operands to have the same width; mixing
/// sets from different universes is a programming error and panics.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveSet {
    width: usize,
    // Universes up to 128 curves stay inline.
    words: SmallVec<[u64; 2]>,
}

impl CurveSet {
    pub fn empty(width: usize) -> Self {
        CurveSet {
            width,
            words: smallvec![0; width.div_ceil(WORD)],
        }
    }

    pub fn full(width: usize) -> Self {
        let mut s = Self::empty(width);
        for i in 0..width {
            s.insert(i);
        }
        s
    }

    pub fn from_indices(width: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(width);
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.width, "curve index {i} out of range {}", self.width);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    pub fn remove(&mut self, i: usize) {
        assert!(i < self.width);
        self.words[i / WORD] &= !(1 << (i % WORD));
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.width && self.words[i / WORD] & (1 << (i % WORD)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + b)
            })
        })
    }

    /// Smallest member in canonical curve order.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    fn zip(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.width, other.width, "curve sets from different universes");
        CurveSet {
            width: self.width,
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & !b)
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a ^ b)
    }

    /// Complement relative to `carrier`.
    pub fn complement_in(&self, carrier: &Self) -> Self {
        carrier.difference(self)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        assert_eq!(self.width, other.width, "curve sets from different universes");
        self.words.iter().zip(&other.words).all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        assert_eq!(self.width, other.width, "curve sets from different universes");
        self.words.iter().zip(&other.words).all(|(&a, &b)| a & b == 0)
    }
}

impl fmt::Debug for CurveSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for CurveSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// An ordered list of curve indices whose subsets are addressed by `u64` masks.
///
/// Bit `j` of a mask selects `members()[j]`. Used wherever a powerset has to be
/// enumerated, so a basis is limited to 63 members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis {
    width: usize,
    members: Vec<usize>,
}

pub const MAX_BASIS: usize = 63;

impl Basis {
    pub fn new(set: &CurveSet) -> Option<Self> {
        let members: Vec<usize> = set.iter().collect();
        if members.len() > MAX_BASIS {
            return None;
        }
        Some(Basis {
            width: set.width(),
            members,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Number of subsets, `2^len`.
    pub fn subset_count(&self) -> u64 {
        1u64 << self.members.len()
    }

    pub fn subset(&self, mask: u64) -> CurveSet {
        let mut s = CurveSet::empty(self.width);
        let mut m = mask;
        while m != 0 {
            let j = m.trailing_zeros() as usize;
            s.insert(self.members[j]);
            m &= m - 1;
        }
        s
    }

    /// Mask of `set`, or `None` when `set` is not contained in the basis.
    pub fn mask_of(&self, set: &CurveSet) -> Option<u64> {
        let mut mask = 0u64;
        let mut seen = 0;
        for (j, &c) in self.members.iter().enumerate() {
            if set.contains(c) {
                mask |= 1 << j;
                seen += 1;
            }
        }
        (seen == set.len()).then_some(mask)
    }

    pub fn subsets(&self) -> impl Iterator<Item = CurveSet> + '_ {
        (0..self.subset_count()).map(move |m| self.subset(m))
    }
}
