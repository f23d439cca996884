use std::collections::HashMap;

use serde::Serialize;

use crate::bits::{Basis, CurveSet};
use crate::spacetime::RegionSet;

pub(crate) struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        match self.rank[a].cmp(&self.rank[b]) {
            std::cmp::Ordering::Less => self.parent[a] = b as u32,
            std::cmp::Ordering::Greater => self.parent[b] = a as u32,
            std::cmp::Ordering::Equal => {
                self.parent[b] = a as u32;
                self.rank[a] += 1;
            }
        }
    }
}

/// Factor bases at one tuple of middle objects, packed into a single mask.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    pub(crate) objects: Vec<RegionSet>,
    pub(crate) bases: Vec<CurveSet>,
    packed: Vec<Basis>,
    starts: Vec<u32>,
    bits: u32,
}

impl Layout {
    pub(crate) fn new(objects: Vec<RegionSet>, bases: Vec<CurveSet>) -> Option<Self> {
        let packed: Vec<Basis> = bases.iter().map(Basis::new).collect::<Option<_>>()?;
        let mut starts = Vec::with_capacity(packed.len());
        let mut bits = 0u32;
        for b in &packed {
            starts.push(bits);
            bits += b.len() as u32;
        }
        (bits < 48).then_some(Layout {
            objects,
            bases,
            packed,
            starts,
            bits,
        })
    }

    pub(crate) fn size(&self) -> usize {
        1usize << self.bits
    }

    pub(crate) fn curves(&self) -> impl Iterator<Item = usize> + '_ {
        self.packed.iter().flat_map(|b| b.members().iter().copied())
    }

    /// Mask position of curve `g` in factor `j`.
    pub(crate) fn bit(&self, j: usize, g: usize) -> Option<u32> {
        self.packed[j].members().binary_search(&g).ok().map(|k| self.starts[j] + k as u32)
    }

    /// Mask bits owned by factor `j`.
    pub(crate) fn factor_mask(&self, j: usize) -> u64 {
        ((1u64 << self.packed[j].len()) - 1) << self.starts[j]
    }

    pub(crate) fn values(&self, mask: u64) -> Vec<CurveSet> {
        self.packed
            .iter()
            .zip(&self.starts)
            .map(|(b, &s)| b.subset((mask >> s) & ((1u64 << b.len()) - 1)))
            .collect()
    }

    pub(crate) fn mask_of(&self, values: &[CurveSet]) -> Option<u64> {
        if values.len() != self.packed.len() {
            return None;
        }
        let mut mask = 0u64;
        for ((b, &s), v) in self.packed.iter().zip(&self.starts).zip(values) {
            mask |= b.mask_of(v)? << s;
        }
        Some(mask)
    }
}

/// An element of a coend summand: middle objects and one value per factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Element {
    pub middle: Vec<RegionSet>,
    pub values: Vec<CurveSet>,
}

/// Elements of a coend with their equivalence classes.
///
/// Element ids run through the middle tuples in canonical order and, within
/// a tuple, through value masks; classes are numbered by their least element,
/// which is also their representative.
#[derive(Clone, Debug)]
pub struct QuotientSet {
    layouts: Vec<Layout>,
    offsets: Vec<usize>,
    by_middle: HashMap<Vec<RegionSet>, usize>,
    class: Vec<u32>,
    reps: Vec<usize>,
    relations: u64,
    complete: bool,
}

impl QuotientSet {
    pub(crate) fn new(layouts: Vec<Layout>, offsets: Vec<usize>, mut uf: UnionFind, relations: u64, complete: bool) -> Self {
        let total = *offsets.last().unwrap_or(&0);
        let mut class = vec![0u32; total];
        let mut reps = Vec::new();
        let mut root_class: HashMap<usize, u32> = HashMap::new();
        for (id, slot) in class.iter_mut().enumerate() {
            let root = uf.find(id);
            *slot = *root_class.entry(root).or_insert_with(|| {
                reps.push(id);
                (reps.len() - 1) as u32
            });
        }
        let by_middle = layouts.iter().enumerate().map(|(i, l)| (l.objects.clone(), i)).collect();
        QuotientSet {
            layouts,
            offsets,
            by_middle,
            class,
            reps,
            relations,
            complete,
        }
    }

    pub fn len(&self) -> usize {
        self.class.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.reps.len()
    }

    pub fn class_of(&self, id: usize) -> usize {
        self.class[id] as usize
    }

    pub fn representative(&self, class: usize) -> usize {
        self.reps[class]
    }

    /// Generator instances merged (one per tuple pair in factored mode).
    pub fn relations(&self) -> u64 {
        self.relations
    }

    /// The view enumerated every object of the graph.
    pub fn complete(&self) -> bool {
        self.complete
    }

    fn tuple_of(&self, id: usize) -> usize {
        self.offsets.partition_point(|&o| o <= id) - 1
    }

    pub fn element(&self, id: usize) -> Element {
        let t = self.tuple_of(id);
        let lay = &self.layouts[t];
        Element {
            middle: lay.objects.clone(),
            values: lay.values((id - self.offsets[t]) as u64),
        }
    }

    pub fn id_of(&self, e: &Element) -> Option<usize> {
        let t = *self.by_middle.get(&e.middle)?;
        Some(self.offsets[t] + self.layouts[t].mask_of(&e.values)? as usize)
    }

    /// All elements at a middle tuple, by id.
    pub fn ids_at(&self, middle: &[RegionSet]) -> std::ops::Range<usize> {
        match self.by_middle.get(middle) {
            Some(&t) => self.offsets[t]..self.offsets[t + 1],
            None => 0..0,
        }
    }
}
