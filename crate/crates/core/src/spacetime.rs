//! Discrete causal sites: event graphs, causal curves and the curve sets `C[A,B]`.
//!
//! A site replaces a time-oriented manifold by a finite directed graph. Events
//! are vertices, edges are elementary future-directed steps, and a causal curve
//! is a nonempty directed simple path. Cycles are allowed; they model closed
//! timelike curves and are traversed by the simple arcs around them.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::bits::CurveSet;
use crate::error::{Error, Result};

/// Hard limit on the number of events, fixed by the `u64` region encoding.
pub const MAX_EVENTS: usize = 64;

/// Enumeration limits. Exceeding any of them is an error, never a truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Caps {
    /// Maximum size of the curve universe.
    pub curves: usize,
    /// Maximum number of objects in an enumerated view.
    pub objects: usize,
    /// Maximum `|C[X,Y]|` for which powersets are swept exhaustively.
    pub hom: usize,
    /// Maximum number of coend elements in one quotient.
    pub elements: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            curves: 4096,
            objects: 1024,
            hom: 12,
            elements: 1 << 18,
        }
    }
}

pub type EventId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Event {
    pub label: String,
    /// `(t, x)` for lattice-generated events.
    pub coords: Option<(i64, i64)>,
}

/// A set of events, one bit per event index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct RegionSet(pub u64);

impl RegionSet {
    pub const EMPTY: RegionSet = RegionSet(0);

    pub fn from_events(events: impl IntoIterator<Item = EventId>) -> Self {
        RegionSet(events.into_iter().fold(0, |acc, e| acc | (1 << e)))
    }

    pub fn singleton(e: EventId) -> Self {
        RegionSet(1 << e)
    }

    pub fn contains(self, e: EventId) -> bool {
        e < MAX_EVENTS && self.0 & (1 << e) != 0
    }

    pub fn union(self, other: Self) -> Self {
        RegionSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        RegionSet(self.0 & other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn events(self) -> impl Iterator<Item = EventId> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                return None;
            }
            let e = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(e)
        })
    }
}

impl fmt::Debug for RegionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.events()).finish()
    }
}

/// Finite event graph with a fixed event order.
#[derive(Clone, Debug)]
pub struct CausalGraph {
    events: Vec<Event>,
    edges: BTreeSet<(EventId, EventId)>,
    succ: Vec<Vec<EventId>>,
    /// `reach[x]` holds every `y` with `x ≺ y`, including `x` itself.
    reach: Vec<u64>,
    by_label: HashMap<String, EventId>,
}

impl CausalGraph {
    pub fn new(events: Vec<Event>, edges: impl IntoIterator<Item = (EventId, EventId)>) -> Result<Self> {
        let n = events.len();
        if n > MAX_EVENTS {
            return Err(Error::CapExceeded {
                what: "event",
                limit: MAX_EVENTS,
            });
        }
        let mut by_label = HashMap::new();
        for (i, e) in events.iter().enumerate() {
            if by_label.insert(e.label.clone(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate label `{}`", e.label)));
            }
        }
        let edges: BTreeSet<_> = edges.into_iter().collect();
        let mut succ = vec![Vec::new(); n];
        for &(s, d) in &edges {
            if s >= n || d >= n {
                return Err(Error::InvalidGraph(format!("edge ({s},{d}) names an undeclared event")));
            }
            if s == d {
                return Err(Error::InvalidGraph(format!("self-edge on `{}`", events[s].label)));
            }
            succ[s].push(d);
        }
        let reach = (0..n)
            .map(|x| {
                let mut seen = 1u64 << x;
                let mut stack = vec![x];
                while let Some(v) = stack.pop() {
                    for &w in &succ[v] {
                        if seen & (1 << w) == 0 {
                            seen |= 1 << w;
                            stack.push(w);
                        }
                    }
                }
                seen
            })
            .collect();
        Ok(CausalGraph {
            events,
            edges,
            succ,
            reach,
            by_label,
        })
    }

    /// Events labelled by `labels`, no coordinates.
    pub fn from_labels(labels: &[&str], edges: &[(&str, &str)]) -> Result<Self> {
        let events: Vec<Event> = labels
            .iter()
            .map(|l| Event {
                label: l.to_string(),
                coords: None,
            })
            .collect();
        let idx = |l: &str| {
            labels
                .iter()
                .position(|x| *x == l)
                .ok_or_else(|| Error::InvalidGraph(format!("unknown event `{l}`")))
        };
        let edges = edges.iter().map(|(s, d)| Ok((idx(s)?, idx(d)?))).collect::<Result<Vec<_>>>()?;
        Self::new(events, edges)
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn edges(&self) -> impl Iterator<Item = (EventId, EventId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn successors(&self, x: EventId) -> &[EventId] {
        &self.succ[x]
    }

    pub fn event(&self, label: &str) -> Option<EventId> {
        self.by_label.get(label).copied()
    }

    pub fn label(&self, x: EventId) -> &str {
        &self.events[x].label
    }

    pub fn all_events(&self) -> RegionSet {
        if self.events.len() == MAX_EVENTS {
            RegionSet(u64::MAX)
        } else {
            RegionSet((1u64 << self.events.len()) - 1)
        }
    }

    /// `x ≺ y`: `x = y` or `y` is reachable from `x`.
    pub fn precedes(&self, x: EventId, y: EventId) -> bool {
        self.reach[x] & (1 << y) != 0
    }

    /// No distinct `x, y` in `s` with `x ≺ y`.
    pub fn is_spacelike(&self, s: RegionSet) -> bool {
        s.events().all(|x| self.reach[x] & s.0 & !(1u64 << x) == 0)
    }

    pub fn jointly_spacelike(&self, x: RegionSet, y: RegionSet) -> bool {
        self.is_spacelike(x.union(y))
    }

    /// All antichains (including ∅), ordered by bitmask.
    pub fn enumerate_slices(&self, cap: usize) -> Result<Vec<RegionSet>> {
        let n = self.events.len();
        // comparable[x]: events distinct from x that are causally related to it
        let comparable: Vec<u64> = (0..n)
            .map(|x| {
                let back = (0..n).filter(|&y| self.precedes(y, x)).fold(0u64, |m, y| m | (1 << y));
                (self.reach[x] | back) & !(1u64 << x)
            })
            .collect();
        let mut out = Vec::new();
        // Depth-first over events in index order; each antichain is produced once.
        fn go(start: usize, current: u64, blocked: u64, comparable: &[u64], cap: usize, out: &mut Vec<RegionSet>) -> Result<()> {
            if out.len() >= cap {
                return Err(Error::CapExceeded {
                    what: "object",
                    limit: cap,
                });
            }
            out.push(RegionSet(current));
            for x in start..comparable.len() {
                if blocked & (1 << x) == 0 {
                    go(x + 1, current | (1 << x), blocked | comparable[x], comparable, cap, out)?;
                }
            }
            Ok(())
        }
        go(0, 0, 0, &comparable, cap, &mut out)?;
        out.sort();
        Ok(out)
    }

    /// Every event subset, for `Space`-mode views.
    pub fn enumerate_regions(&self, cap: usize) -> Result<Vec<RegionSet>> {
        let n = self.events.len();
        if n >= usize::BITS as usize - 1 || (1usize << n) > cap {
            return Err(Error::CapExceeded {
                what: "object",
                limit: cap,
            });
        }
        Ok((0..1u64 << n).map(RegionSet).collect())
    }
}

/// Directed simple path, listed by event index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Curve(pub Vec<EventId>);

impl Curve {
    pub fn events(&self) -> &[EventId] {
        &self.0
    }

    /// Index of the first visit to a region.
    pub fn first_visit(&self, region: RegionSet) -> Option<usize> {
        self.0.iter().position(|&e| region.contains(e))
    }

    pub fn visits(&self, region: RegionSet) -> bool {
        self.first_visit(region).is_some()
    }

    /// Number of indices at which the curve is inside `region`.
    pub fn visit_count(&self, region: RegionSet) -> usize {
        self.0.iter().filter(|&&e| region.contains(e)).count()
    }

    /// Passes through `a` and then `b`: some index lies in `b`, and every such
    /// index has an index at or before it lying in `a`. Equivalent to `b` being
    /// visited with the first `a`-visit no later than the first `b`-visit.
    pub fn passes_through(&self, a: RegionSet, b: RegionSet) -> bool {
        match (self.first_visit(a), self.first_visit(b)) {
            (Some(p), Some(q)) => p <= q,
            _ => false,
        }
    }

    pub fn render(&self, graph: &CausalGraph) -> String {
        let labels: Vec<&str> = self.0.iter().map(|&e| graph.label(e)).collect();
        format!("[{}]", labels.join(","))
    }
}

/// All causal curves of a graph in canonical (lexicographic) order.
#[derive(Clone, Debug)]
pub struct CurveUniverse {
    curves: Vec<Curve>,
    index: HashMap<Curve, usize>,
}

impl CurveUniverse {
    pub fn enumerate(graph: &CausalGraph, cap: usize) -> Result<Self> {
        let mut curves = Vec::new();
        let mut path = Vec::new();
        fn extend(graph: &CausalGraph, path: &mut Vec<EventId>, visited: u64, cap: usize, out: &mut Vec<Curve>) -> Result<()> {
            if out.len() >= cap {
                return Err(Error::CapExceeded { what: "curve", limit: cap });
            }
            out.push(Curve(path.clone()));
            let last = *path.last().expect("nonempty path");
            for &next in graph.successors(last) {
                if visited & (1 << next) == 0 {
                    path.push(next);
                    extend(graph, path, visited | (1 << next), cap, out)?;
                    path.pop();
                }
            }
            Ok(())
        }
        for start in 0..graph.len() {
            path.push(start);
            extend(graph, &mut path, 1 << start, cap, &mut curves)?;
            path.pop();
        }
        curves.sort();
        let index = curves.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        Ok(CurveUniverse { curves, index })
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn curve(&self, i: usize) -> &Curve {
        &self.curves[i]
    }

    pub fn position(&self, curve: &Curve) -> Option<usize> {
        self.index.get(curve).copied()
    }

    pub fn empty_set(&self) -> CurveSet {
        CurveSet::empty(self.curves.len())
    }

    /// `C[A,B]`.
    pub fn curves_through(&self, a: RegionSet, b: RegionSet) -> CurveSet {
        CurveSet::from_indices(
            self.curves.len(),
            self.curves
                .iter()
                .enumerate()
                .filter(|(_, c)| c.passes_through(a, b))
                .map(|(i, _)| i),
        )
    }

    /// `C[A] = C[A,A]`: curves visiting `A`.
    pub fn through(&self, a: RegionSet) -> CurveSet {
        self.curves_through(a, a)
    }
}

/// A graph together with its curve universe.
#[derive(Clone, Debug)]
pub struct Site {
    pub graph: CausalGraph,
    pub universe: CurveUniverse,
}

impl Site {
    pub fn new(graph: CausalGraph, caps: &Caps) -> Result<Self> {
        let universe = CurveUniverse::enumerate(&graph, caps.curves)?;
        Ok(Site { graph, universe })
    }

    pub fn width(&self) -> usize {
        self.universe.len()
    }

    pub fn curves_through(&self, a: RegionSet, b: RegionSet) -> CurveSet {
        self.universe.curves_through(a, b)
    }

    pub fn through(&self, a: RegionSet) -> CurveSet {
        self.universe.through(a)
    }

    pub fn region(&self, labels: &[&str]) -> Result<RegionSet> {
        labels
            .iter()
            .map(|l| self.graph.event(l).ok_or_else(|| Error::NotInView(format!("unknown event `{l}`"))))
            .collect::<Result<Vec<_>>>()
            .map(RegionSet::from_events)
    }

    /// Curve set from paths written as label lists.
    pub fn curve_set(&self, paths: &[&[&str]]) -> Result<CurveSet> {
        let mut s = self.universe.empty_set();
        for p in paths {
            let ids = p
                .iter()
                .map(|l| self.graph.event(l).ok_or_else(|| Error::NotInView(format!("unknown event `{l}`"))))
                .collect::<Result<Vec<_>>>()?;
            let i = self
                .universe
                .position(&Curve(ids))
                .ok_or_else(|| Error::NotInView(format!("no curve {p:?}")))?;
            s.insert(i);
        }
        Ok(s)
    }

    pub fn render_region(&self, r: RegionSet) -> String {
        let labels: Vec<&str> = r.events().map(|e| self.graph.label(e)).collect();
        format!("{{{}}}", labels.join(","))
    }

    pub fn render_curves(&self, s: &CurveSet) -> String {
        let parts: Vec<String> = s.iter().map(|i| self.universe.curve(i).render(&self.graph)).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// Lattice `{(t,x) : 0≤t<T, 0≤x<W}` with steps `(t,x) → (t+1, x+d)`, `d ∈ {-1,0,1}`.
pub fn minkowski_lattice(times: usize, positions: usize) -> Result<CausalGraph> {
    if times == 0 || positions == 0 {
        return Err(Error::InvalidGraph("lattice dimensions must be positive".into()));
    }
    if times.saturating_mul(positions) > MAX_EVENTS {
        return Err(Error::CapExceeded {
            what: "event",
            limit: MAX_EVENTS,
        });
    }
    let id = |t: usize, x: usize| t * positions + x;
    let mut events = Vec::new();
    let mut edges = Vec::new();
    for t in 0..times {
        for x in 0..positions {
            events.push(Event {
                label: format!("p{t}_{x}"),
                coords: Some((t as i64, x as i64)),
            });
            if t + 1 < times {
                for d in [-1i64, 0, 1] {
                    let nx = x as i64 + d;
                    if (0..positions as i64).contains(&nx) {
                        edges.push((id(t, x), id(t + 1, nx as usize)));
                    }
                }
            }
        }
    }
    CausalGraph::new(events, edges)
}

fn letter_labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("e{i}")
            }
        })
        .collect()
}

fn labelled(n: usize, edges: Vec<(usize, usize)>) -> Result<CausalGraph> {
    let events = letter_labels(n).into_iter().map(|label| Event { label, coords: None }).collect();
    CausalGraph::new(events, edges)
}

/// `a → b → … ` on `n` events.
pub fn chain(n: usize) -> Result<CausalGraph> {
    labelled(n, (1..n).map(|i| (i - 1, i)).collect())
}

/// Directed `n`-cycle, `n ≥ 2`.
pub fn cycle(n: usize) -> Result<CausalGraph> {
    labelled(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
}

pub fn edgeless(n: usize) -> Result<CausalGraph> {
    labelled(n, Vec::new())
}

/// Graph on letter-labelled events with explicit index edges.
pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<CausalGraph> {
    labelled(n, edges.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn site(g: CausalGraph) -> Site {
        Site::new(g, &Caps::default()).unwrap()
    }

    /// Literal two-quantifier reading: some index in B, and for every such index
    /// an index at or before it in A.
    fn passes_oracle(c: &Curve, a: RegionSet, b: RegionSet) -> bool {
        let path = c.events();
        let qs: Vec<usize> = (0..path.len()).filter(|&q| b.contains(path[q])).collect();
        !qs.is_empty() && qs.iter().all(|&q| (0..=q).any(|p| a.contains(path[p])))
    }

    #[test]
    fn lattice_counts() {
        let g = minkowski_lattice(2, 3).unwrap();
        assert_eq!((g.len(), g.edge_count()), (6, 7));
        let g = minkowski_lattice(1, 4).unwrap();
        assert_eq!((g.len(), g.edge_count()), (4, 0));
        let g = minkowski_lattice(2, 1).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(g.events()[1].coords, Some((1, 0)));
    }

    #[test]
    fn lattice_cap() {
        assert!(minkowski_lattice(9, 8).unwrap_err().is_cap());
    }

    #[test]
    fn precedence() {
        let c2 = chain(2).unwrap();
        assert!(c2.precedes(0, 1));
        assert!(!c2.precedes(1, 0));
        assert!(c2.precedes(1, 1));
        let tri = cycle(3).unwrap();
        assert!(tri.precedes(1, 0));
    }

    #[test]
    fn curve_enumeration() {
        let s = site(chain(2).unwrap());
        let listed: Vec<Vec<usize>> = s.universe.curves().iter().map(|c| c.0.clone()).collect();
        assert_eq!(listed, vec![vec![0], vec![0, 1], vec![1]]);

        let s = site(cycle(3).unwrap());
        assert_eq!(s.universe.len(), 9);
        let by_len = |k| s.universe.curves().iter().filter(|c| c.0.len() == k).count();
        assert_eq!((by_len(1), by_len(2), by_len(3)), (3, 3, 3));

        let s = site(edgeless(5).unwrap());
        assert_eq!(s.universe.len(), 5);
    }

    #[test]
    fn curve_cap_is_hard_error() {
        let caps = Caps {
            curves: 5,
            ..Caps::default()
        };
        assert!(Site::new(cycle(3).unwrap(), &caps).unwrap_err().is_cap());
    }

    #[test]
    fn curves_through_examples() {
        let s = site(chain(2).unwrap());
        let (a, b) = (RegionSet::singleton(0), RegionSet::singleton(1));
        assert_eq!(s.curves_through(a, b), s.curve_set(&[&["a", "b"]]).unwrap());
        assert_eq!(s.through(a), s.curve_set(&[&["a"], &["a", "b"]]).unwrap());
        assert!(s.curves_through(RegionSet::EMPTY, b).is_empty());
        assert!(s.curves_through(a, RegionSet::EMPTY).is_empty());

        let s = site(cycle(3).unwrap());
        let (a, b) = (RegionSet::singleton(0), RegionSet::singleton(1));
        let ab = s.curve_set(&[&["a", "b"]]).unwrap();
        let bca = s.curve_set(&[&["b", "c", "a"]]).unwrap();
        assert!(ab.is_subset(&s.curves_through(a, b)));
        assert!(bca.is_subset(&s.curves_through(b, a)));
    }

    #[test]
    fn spacelike_and_slices() {
        let c2 = chain(2).unwrap();
        assert!(!c2.is_spacelike(RegionSet(0b11)));
        assert_eq!(c2.enumerate_slices(1024).unwrap(), vec![RegionSet(0), RegionSet(1), RegionSet(2)]);
        let ml = minkowski_lattice(2, 3).unwrap();
        assert!(ml.is_spacelike(RegionSet::from_events([0, 2])));
        let tri = cycle(3).unwrap();
        assert!(tri.is_spacelike(RegionSet(1)));
        assert_eq!(tri.enumerate_slices(1024).unwrap().len(), 4);
        assert_eq!(edgeless(4).unwrap().enumerate_slices(1024).unwrap().len(), 16);
        assert!(edgeless(4).unwrap().enumerate_slices(15).unwrap_err().is_cap());
    }

    #[test]
    fn slices_match_brute_force() {
        for g in [minkowski_lattice(2, 3).unwrap(), cycle(4).unwrap(), chain(5).unwrap()] {
            let brute: Vec<RegionSet> = (0..1u64 << g.len()).map(RegionSet).filter(|&r| g.is_spacelike(r)).collect();
            assert_eq!(g.enumerate_slices(1024).unwrap(), brute);
        }
    }

    #[test]
    fn fast_passes_through_matches_quantifier_form() {
        for g in [cycle(3).unwrap(), chain(4).unwrap(), minkowski_lattice(3, 2).unwrap()] {
            let s = site(g);
            let n = s.graph.len();
            for a in 0..1u64 << n {
                for b in 0..1u64 << n {
                    for c in s.universe.curves() {
                        assert_eq!(
                            c.passes_through(RegionSet(a), RegionSet(b)),
                            passes_oracle(c, RegionSet(a), RegionSet(b))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn single_visit_on_spacelike_sets() {
        for g in [cycle(3).unwrap(), chain(4).unwrap(), minkowski_lattice(2, 3).unwrap()] {
            let s = site(g);
            for x in s.graph.enumerate_slices(1024).unwrap() {
                for c in s.universe.curves() {
                    assert!(c.visit_count(x) <= 1, "{c:?} visits {x:?} twice");
                }
            }
        }
    }

    #[test]
    fn tiny_curves() {
        let s = site(minkowski_lattice(2, 3).unwrap());
        let n = s.graph.len();
        for x in 0..n {
            let tiny = s.universe.position(&Curve(vec![x])).unwrap();
            assert!(s.through(RegionSet::singleton(x)).contains(tiny));
            for a in 0..1u64 << n {
                if !RegionSet(a).contains(x) {
                    assert!(!s.through(RegionSet(a)).contains(tiny));
                }
            }
        }
    }
}
