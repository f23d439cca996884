//! The ⊛ and ⩔ presheaves, their intersection-shaped natural maps,
//! representability, and the premonoidal operations on regions.
//!
//! Every presheaf here is `Z ↦ 𝒫(β(Z))` acting by intersection, so only the
//! basis `β` is stored.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet};
use std::hash::{Hash, Hasher};

use serde::Serialize;

use crate::bits::{Basis, CurveSet};
use crate::category::{CategoryView, Mode, Morphism};
use crate::error::{Error, Result};
use crate::report::{LawReport, Witness};
use crate::spacetime::{RegionSet, Site};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum PresheafKind {
    Wedge { x: RegionSet, y: RegionSet },
    Vee { x: RegionSet, y: RegionSet },
    Unit,
    Yoneda { w: RegionSet },
}

impl PresheafKind {
    /// `β(Z)` computed directly on the site, without a view's hom cache.
    pub fn basis_on(&self, site: &Site, z: RegionSet) -> CurveSet {
        match *self {
            PresheafKind::Wedge { x, y } => site.curves_through(z, x).intersection(&site.curves_through(z, y)),
            PresheafKind::Vee { x, y } => site.curves_through(z, x).union(&site.curves_through(z, y)),
            PresheafKind::Unit => site.through(z),
            PresheafKind::Yoneda { w } => site.curves_through(z, w),
        }
    }

    /// `β(Z)` for an arbitrary region `Z`.
    pub fn basis_at(&self, view: &CategoryView, z: RegionSet) -> CurveSet {
        match *self {
            PresheafKind::Wedge { x, y } => view.hom_of(z, x).intersection(&view.hom_of(z, y)),
            PresheafKind::Vee { x, y } => view.hom_of(z, x).union(&view.hom_of(z, y)),
            PresheafKind::Unit => view.through(z),
            PresheafKind::Yoneda { w } => view.hom_of(z, w),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presheaf {
    pub kind: PresheafKind,
    /// `β(Z)` indexed like the view's objects.
    pub basis: Vec<CurveSet>,
}

impl Presheaf {
    pub fn new(view: &CategoryView, kind: PresheafKind) -> Result<Self> {
        match kind {
            PresheafKind::Wedge { x, y } | PresheafKind::Vee { x, y } => {
                view.require(x)?;
                view.require(y)?;
            }
            PresheafKind::Yoneda { w } => {
                view.require(w)?;
            }
            PresheafKind::Unit => {}
        }
        let basis = view.objects().iter().map(|&z| kind.basis_at(view, z)).collect();
        Ok(Presheaf { kind, basis })
    }

    pub fn wedge(view: &CategoryView, x: RegionSet, y: RegionSet) -> Result<Self> {
        Self::new(view, PresheafKind::Wedge { x, y })
    }

    pub fn vee(view: &CategoryView, x: RegionSet, y: RegionSet) -> Result<Self> {
        Self::new(view, PresheafKind::Vee { x, y })
    }

    pub fn unit(view: &CategoryView) -> Self {
        Self::new(view, PresheafKind::Unit).expect("unit needs no objects")
    }

    pub fn yoneda(view: &CategoryView, w: RegionSet) -> Result<Self> {
        Self::new(view, PresheafKind::Yoneda { w })
    }

    pub fn basis_of(&self, view: &CategoryView, z: RegionSet) -> Result<&CurveSet> {
        Ok(&self.basis[view.require(z)?])
    }

    /// `F(1_Z) = id` and `F(S)` lands in `F(Z')` for every `S: Z' → Z`.
    ///
    /// Both are monotone in `C` and `S`, so checking the largest element and
    /// the full hom covers every instance.
    pub fn check_laws(&self, view: &CategoryView) -> LawReport {
        let mut report = LawReport::new("presheaf laws");
        let objs = view.objects();
        for (z, b) in self.basis.iter().enumerate() {
            report.examined += 1;
            let id = b.intersection(view.hom(z, z));
            if &id != b {
                report.violate(Witness {
                    objects: vec![("Z".into(), objs[z])],
                    morphisms: vec![("1_Z".into(), view.hom(z, z).clone())],
                    probe: Some(objs[z]),
                    element: Some(b.clone()),
                    lhs: id,
                    rhs: b.clone(),
                });
            }
            for (z2, b2) in self.basis.iter().enumerate() {
                report.examined += 1;
                let image = b.intersection(view.hom(z2, z));
                if !image.is_subset(b2) {
                    report.violate(Witness {
                        objects: vec![("Z".into(), objs[z]), ("Z'".into(), objs[z2])],
                        morphisms: vec![("S".into(), view.hom(z2, z).clone())],
                        probe: Some(objs[z2]),
                        element: Some(b.clone()),
                        lhs: image,
                        rhs: b2.clone(),
                    });
                }
            }
        }
        report
    }
}

/// A natural transformation whose every component is `C ↦ C ∩ K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectNat {
    pub k: CurveSet,
    pub domain: Presheaf,
    pub codomain: Presheaf,
}

impl IntersectNat {
    pub fn apply(&self, c: &CurveSet) -> CurveSet {
        c.intersection(&self.k)
    }

    /// Componentwise typing (`β_F(Z) ∩ K ⊆ β_G(Z)`) and naturality squares
    /// against the full hom `U = C[Z',Z]`, evaluated on the largest element.
    pub fn check(&self, view: &CategoryView) -> Vec<LawReport> {
        let objs = view.objects();
        let mut typing = LawReport::new("component typing");
        let mut natural = LawReport::new("naturality");
        for (z, b) in self.domain.basis.iter().enumerate() {
            typing.examined += 1;
            let image = self.apply(b);
            if !image.is_subset(&self.codomain.basis[z]) {
                let stray = image.difference(&self.codomain.basis[z]);
                let first = CurveSet::from_indices(stray.width(), stray.first());
                typing.violate(Witness {
                    objects: vec![("Z".into(), objs[z])],
                    morphisms: vec![("K".into(), self.k.clone())],
                    probe: Some(objs[z]),
                    element: Some(first.clone()),
                    lhs: first,
                    rhs: self.codomain.basis[z].intersection(&image),
                });
            }
            for z2 in 0..objs.len() {
                natural.examined += 1;
                let u = view.hom(z2, z);
                let lhs = self.apply(b).intersection(u);
                let rhs = self.apply(&b.intersection(u));
                if lhs != rhs {
                    natural.violate(Witness {
                        objects: vec![("Z".into(), objs[z]), ("Z'".into(), objs[z2])],
                        morphisms: vec![("K".into(), self.k.clone()), ("U".into(), u.clone())],
                        probe: Some(objs[z]),
                        element: Some(b.clone()),
                        lhs,
                        rhs,
                    });
                }
            }
        }
        vec![typing, natural]
    }
}

fn require_morphism(view: &CategoryView, m: &Morphism) -> Result<()> {
    view.require(m.src)?;
    view.require(m.dst)?;
    view.morphism(m.src, m.dst, m.curves.clone()).map(|_| ())
}

/// `S ⊛ T` for `S: X→X'`, `T: Y→Y'`: `K = S ∩ T`.
pub fn wedge_map(view: &CategoryView, s: &Morphism, t: &Morphism) -> Result<IntersectNat> {
    require_morphism(view, s)?;
    require_morphism(view, t)?;
    Ok(IntersectNat {
        k: s.curves.intersection(&t.curves),
        domain: Presheaf::wedge(view, s.src, t.src)?,
        codomain: Presheaf::wedge(view, s.dst, t.dst)?,
    })
}

/// `S ⩔ Y`: `K = S ∪ C[Y]`.
pub fn vee_left(view: &CategoryView, s: &Morphism, y: RegionSet) -> Result<IntersectNat> {
    require_morphism(view, s)?;
    Ok(IntersectNat {
        k: s.curves.union(&view.through(y)),
        domain: Presheaf::vee(view, s.src, y)?,
        codomain: Presheaf::vee(view, s.dst, y)?,
    })
}

/// `X ⩔ T`: `K = C[X] ∪ T`.
pub fn vee_right(view: &CategoryView, x: RegionSet, t: &Morphism) -> Result<IntersectNat> {
    require_morphism(view, t)?;
    Ok(IntersectNat {
        k: view.through(x).union(&t.curves),
        domain: Presheaf::vee(view, x, t.src)?,
        codomain: Presheaf::vee(view, x, t.dst)?,
    })
}

/// `vee_left(S',Y) ∘ vee_left(S,Y) = vee_left(S'∘S,Y)` and the right-hand
/// analogue, over candidate composable pairs.
pub fn vee_functoriality(view: &CategoryView) -> LawReport {
    let mut report = LawReport::new("vee functoriality");
    let objs = view.objects();
    let n = objs.len();
    for (y, &oy) in objs.iter().enumerate() {
        let cy = view.hom(y, y);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for s in view.candidates(a, b) {
                        for s2 in view.candidates(b, c) {
                            report.examined += 1;
                            let lhs = s2.union(cy).intersection(&s.union(cy));
                            let rhs = s2.intersection(&s).union(cy);
                            if lhs != rhs {
                                report.violate(Witness {
                                    objects: vec![("Y".into(), oy)],
                                    morphisms: vec![("S".into(), s.clone()), ("S'".into(), s2)],
                                    probe: None,
                                    element: None,
                                    lhs,
                                    rhs,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Interchange {
    Wedge,
    Vee,
    SpaceUnion,
}

impl Interchange {
    /// The two composites as single `K`s: `(S·Y')∘(X·T)` and `(X'·T)∘(S·Y)`.
    fn composites(self, view: &CategoryView, o: [RegionSet; 4], s: &CurveSet, t: &CurveSet) -> (CurveSet, CurveSet) {
        let [x, x2, y, y2] = o;
        match self {
            Interchange::Wedge => (
                view.through(x).intersection(t).intersection(&s.intersection(&view.through(y2))),
                s.intersection(&view.through(y)).intersection(&view.through(x2).intersection(t)),
            ),
            Interchange::Vee | Interchange::SpaceUnion => (
                view.through(x).union(t).intersection(&s.union(&view.through(y2))),
                s.union(&view.through(y)).intersection(&view.through(x2).union(t)),
            ),
        }
    }

    fn basis(self, view: &CategoryView, x: RegionSet, y: RegionSet, z: RegionSet) -> CurveSet {
        match self {
            Interchange::Wedge => PresheafKind::Wedge { x, y }.basis_at(view, z),
            _ => PresheafKind::Vee { x, y }.basis_at(view, z),
        }
    }
}

/// Sweeps `X, X', Y, Y'` and `S: X→X'`, `T: Y→Y'` for interchange failures.
///
/// For ⩔ and the region union, the two factors are kept on disjoint regions
/// (`(X∪X') ∩ (Y∪Y') = ∅`); overlapping factors trivially mix. Morphisms are
/// tried in tiers: ∅, full homs and singletons everywhere first, then the
/// remaining subsets. The first witness in that order is reported; with
/// `stop_at_first` the sweep ends there.
pub fn interchange_sweep(view: &CategoryView, law: Interchange, stop_at_first: bool) -> Result<LawReport> {
    if law == Interchange::SpaceUnion && view.mode() != Mode::Space {
        return Err(Error::WrongMode("space"));
    }
    let name = match law {
        Interchange::Wedge => "wedge interchange",
        Interchange::Vee => "vee interchange",
        Interchange::SpaceUnion => "union interchange",
    };
    let mut report = LawReport::new(name);
    let objs = view.objects();
    let n = objs.len();
    let cap = view.caps().hom;
    let mut over_cap = false;

    for tier in 0..2 {
        let tiered = |a: usize, b: usize| -> Option<Vec<CurveSet>> {
            let all = view.candidates(a, b);
            let hom = view.hom(a, b);
            let head = 2 + hom.len();
            match tier {
                0 => Some(all.into_iter().take(head).collect()),
                _ if hom.len() > cap => None,
                _ => Some(all.into_iter().skip(head).collect()),
            }
        };
        for xi in 0..n {
            for x2i in 0..n {
                let Some(ss) = tiered(xi, x2i) else {
                    over_cap = true;
                    continue;
                };
                for yi in 0..n {
                    for y2i in 0..n {
                        let o = [objs[xi], objs[x2i], objs[yi], objs[y2i]];
                        if law != Interchange::Wedge && !o[0].union(o[1]).is_disjoint(o[2].union(o[3])) {
                            continue;
                        }
                        let Some(ts) = tiered(yi, y2i) else {
                            over_cap = true;
                            continue;
                        };
                        for s in &ss {
                            for t in &ts {
                                let (k1, k2) = law.composites(view, o, s, t);
                                let diff = k1.symmetric_difference(&k2);
                                let mut morphisms = vec![("S".into(), s.clone()), ("T".into(), t.clone())];
                                let objects = vec![("X".into(), o[0]), ("X'".into(), o[1]), ("Y".into(), o[2]), ("Y'".into(), o[3])];
                                if law == Interchange::SpaceUnion {
                                    report.examined += 1;
                                    if !diff.is_empty() {
                                        morphisms.push(("K1".into(), k1.clone()));
                                        morphisms.push(("K2".into(), k2.clone()));
                                        report.violate(Witness {
                                            objects,
                                            morphisms,
                                            probe: None,
                                            element: None,
                                            lhs: k1,
                                            rhs: k2,
                                        });
                                        if stop_at_first {
                                            return Ok(report);
                                        }
                                    }
                                    continue;
                                }
                                for &z in objs {
                                    report.examined += 1;
                                    let beta = law.basis(view, o[0], o[2], z);
                                    let bad = beta.intersection(&diff);
                                    if let Some(first) = bad.first() {
                                        let c = CurveSet::from_indices(beta.width(), [first]);
                                        report.violate(Witness {
                                            objects: objects.clone(),
                                            morphisms: morphisms.clone(),
                                            probe: Some(z),
                                            lhs: c.intersection(&k1),
                                            rhs: c.intersection(&k2),
                                            element: Some(c),
                                        });
                                        if stop_at_first {
                                            return Ok(report);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    if over_cap && report.holds() {
        return Err(Error::CapExceeded { what: "hom", limit: cap });
    }
    Ok(report)
}

/// The first interchange witness in search order, if any.
pub fn interchange_witness(view: &CategoryView, law: Interchange) -> Result<Option<Witness>> {
    Ok(interchange_sweep(view, law, true)?.witness)
}

/// Recomputes the two sides of an interchange witness from its objects,
/// morphisms and (for presheaf laws) element.
pub fn replay_interchange(view: &CategoryView, law: Interchange, w: &Witness) -> Option<(CurveSet, CurveSet)> {
    let o = [w.object("X")?, w.object("X'")?, w.object("Y")?, w.object("Y'")?];
    let (k1, k2) = law.composites(view, o, w.morphism("S")?, w.morphism("T")?);
    match law {
        Interchange::SpaceUnion => Some((k1, k2)),
        _ => {
            let c = w.element.as_ref()?;
            Some((c.intersection(&k1), c.intersection(&k2)))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Oracle {
    Fast,
    Slow,
}

fn column_hash<'a>(sets: impl Iterator<Item = &'a CurveSet>) -> u64 {
    let mut h = DefaultHasher::new();
    for s in sets {
        s.hash(&mut h);
    }
    h.finish()
}

/// Hashes of every representable `𝕐_W` on a complete slice view.
pub struct YonedaIndex {
    by_hash: HashMap<u64, Vec<usize>>,
}

impl YonedaIndex {
    pub fn new(view: &CategoryView) -> Result<Self> {
        if !view.is_complete() {
            return Err(Error::NotExhaustive("the view omits objects of the graph".into()));
        }
        let n = view.objects().len();
        let mut by_hash: HashMap<u64, Vec<usize>> = HashMap::new();
        for w in 0..n {
            by_hash.entry(column_hash((0..n).map(|z| view.hom(z, w)))).or_default().push(w);
        }
        Ok(YonedaIndex { by_hash })
    }

    /// The `W` with `C[Z,W] = β(Z)` for every `Z`.
    pub fn lookup(&self, view: &CategoryView, f: &Presheaf) -> Option<RegionSet> {
        let n = view.objects().len();
        self.by_hash
            .get(&column_hash(f.basis.iter()))?
            .iter()
            .copied()
            .find(|&w| (0..n).all(|z| view.hom(z, w) == &f.basis[z]))
            .map(|w| view.objects()[w])
    }
}

/// Searches `e ∈ F(W)` such that `g ↦ e ∩ g` is a bijection
/// `𝒫(C[Z,W]) → F(Z)` at every object.
fn slow_representability(view: &CategoryView, f: &Presheaf) -> Result<Option<RegionSet>> {
    let n = view.objects().len();
    let cap = view.caps().hom;
    let too_big = Error::CapExceeded { what: "hom", limit: cap };
    'w: for w in 0..n {
        // Equal cardinality is necessary for any bijection.
        if (0..n).any(|z| view.hom(z, w).len() != f.basis[z].len()) {
            continue;
        }
        let bw = &f.basis[w];
        let es = Basis::new(bw).filter(|b| b.len() <= cap).ok_or(too_big.clone())?;
        'e: for e in es.subsets() {
            for z in 0..n {
                let hom = view.hom(z, w);
                let gs = Basis::new(hom).filter(|b| b.len() <= cap).ok_or(too_big.clone())?;
                let mut seen = HashSet::new();
                for g in gs.subsets() {
                    let img = e.intersection(&g);
                    if !img.is_subset(&f.basis[z]) || !seen.insert(img) {
                        continue 'e;
                    }
                }
                if seen.len() as u64 != 1u64 << f.basis[z].len() {
                    continue 'e;
                }
            }
            return Ok(Some(view.objects()[w]));
        }
        continue 'w;
    }
    Ok(None)
}

/// The representing slice of `f`, if any. Needs the complete slice view.
pub fn representability(view: &CategoryView, f: &Presheaf, oracle: Oracle) -> Result<Option<RegionSet>> {
    if !view.is_complete() {
        return Err(Error::NotExhaustive("the view omits objects of the graph".into()));
    }
    match oracle {
        Oracle::Fast => Ok(YonedaIndex::new(view)?.lookup(view, f)),
        Oracle::Slow => slow_representability(view, f),
    }
}

/// `X ∩ Y` (wedge) or `X ∪ Y` (vee) when the slices are jointly spacelike.
pub fn partial_tensor(view: &CategoryView, x: RegionSet, y: RegionSet, law: Interchange) -> Option<RegionSet> {
    if !view.site().graph.jointly_spacelike(x, y) {
        return None;
    }
    match law {
        Interchange::Wedge => Some(x.intersection(y)),
        _ => Some(x.union(y)),
    }
}

fn require_space(view: &CategoryView) -> Result<()> {
    if view.mode() != Mode::Space {
        return Err(Error::WrongMode("space"));
    }
    Ok(())
}

/// `X ⋊ T = C[X] ∪ T : X∪Y → X∪Y'`. The curve set is not re-typed; see
/// [`premonoidal_check`].
pub fn rtimes(view: &CategoryView, x: RegionSet, t: &Morphism) -> Result<Morphism> {
    require_space(view)?;
    Ok(Morphism {
        src: x.union(t.src),
        dst: x.union(t.dst),
        curves: view.through(x).union(&t.curves),
    })
}

/// `S ⋉ Y = S ∪ C[Y] : X∪Y → X'∪Y`.
pub fn ltimes(view: &CategoryView, s: &Morphism, y: RegionSet) -> Result<Morphism> {
    require_space(view)?;
    Ok(Morphism {
        src: s.src.union(y),
        dst: s.dst.union(y),
        curves: s.curves.union(&view.through(y)),
    })
}

/// Both interchange squares of `f: A→B` against every `g: C→D`.
pub fn central_check(view: &CategoryView, f: &Morphism) -> Result<LawReport> {
    central_against(view, f, false)
}

/// ∅, the full hom and singletons: the first search tier.
fn head_candidates(view: &CategoryView, a: usize, b: usize) -> Vec<CurveSet> {
    let mut all = view.candidates(a, b);
    all.truncate(2 + view.hom(a, b).len());
    all
}

fn central_against(view: &CategoryView, f: &Morphism, head_only: bool) -> Result<LawReport> {
    require_space(view)?;
    let mut report = LawReport::new("centrality");
    let objs = view.objects();
    let (ca, cb) = (view.through(f.src), view.through(f.dst));
    let f = &f.curves;
    for c in 0..objs.len() {
        let cc = view.hom(c, c);
        for d in 0..objs.len() {
            let cd = view.hom(d, d);
            let gs = if head_only {
                head_candidates(view, c, d)
            } else {
                view.candidates(c, d)
            };
            for g in gs {
                report.examined += 1;
                // (B⋊g)∘(f⋉C) = (f⋉D)∘(A⋊g)
                let l1 = cb.union(&g).intersection(&f.union(cc));
                let r1 = f.union(cd).intersection(&ca.union(&g));
                // (g⋉B)∘(C⋊f) = (D⋊f)∘(g⋉A)
                let l2 = g.union(&cb).intersection(&cc.union(f));
                let r2 = cd.union(f).intersection(&g.union(&ca));
                for (lhs, rhs) in [(l1, r1), (l2, r2)] {
                    if lhs != rhs {
                        report.violate(Witness {
                            objects: vec![("C".into(), objs[c]), ("D".into(), objs[d])],
                            morphisms: vec![("f".into(), f.clone()), ("g".into(), g.clone())],
                            probe: None,
                            element: None,
                            lhs,
                            rhs,
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Functoriality of each `X ⋊ −` and `− ⋉ Y`, strict unit `∅`, centrality of
/// identities, and (separately) whether `X ⋊ T` is typed `X∪Y → X∪Y'`.
/// Morphisms range over the first search tier.
pub fn premonoidal_check(view: &CategoryView) -> Result<Vec<LawReport>> {
    require_space(view)?;
    let objs = view.objects();
    let n = objs.len();
    let mut functor = LawReport::new("premonoidal functoriality");
    let mut unit = LawReport::new("premonoidal unit");
    let mut typing = LawReport::new("rtimes typing");
    let wit = |objects: Vec<(String, RegionSet)>, morphisms: Vec<(String, CurveSet)>, lhs, rhs| Witness {
        objects,
        morphisms,
        probe: None,
        element: None,
        lhs,
        rhs,
    };

    for x in 0..n {
        let cx = view.hom(x, x);
        for a in 0..n {
            // X ⋊ 1_A = 1_{X∪A}
            functor.examined += 1;
            let lhs = cx.union(view.hom(a, a));
            let rhs = view.through(objs[x].union(objs[a]));
            if lhs != rhs {
                functor.violate(wit(vec![("X".into(), objs[x]), ("A".into(), objs[a])], vec![], lhs, rhs));
            }
            for b in 0..n {
                for f in &head_candidates(view, a, b) {
                    let m = Morphism {
                        src: objs[a],
                        dst: objs[b],
                        curves: f.clone(),
                    };
                    let r = rtimes(view, objs[x], &m)?;
                    let l = ltimes(view, &m, objs[x])?;
                    typing.examined += 1;
                    for side in [&r, &l] {
                        let hom = view.hom_of(side.src, side.dst);
                        if !side.curves.is_subset(&hom) {
                            typing.violate(wit(
                                vec![("X".into(), objs[x]), ("A".into(), objs[a]), ("B".into(), objs[b])],
                                vec![("T".into(), f.clone())],
                                side.curves.difference(&hom),
                                side.curves.intersection(&hom).difference(&side.curves),
                            ));
                        }
                    }
                    if x == 0 {
                        unit.examined += 1;
                        let e = RegionSet::EMPTY;
                        let ru = rtimes(view, e, &m)?.curves;
                        let lu = ltimes(view, &m, e)?.curves;
                        if &ru != f || &lu != f {
                            unit.violate(wit(vec![("A".into(), objs[a])], vec![("f".into(), f.clone())], ru, f.clone()));
                        }
                    }
                    for c in 0..n {
                        for f2 in head_candidates(view, b, c) {
                            functor.examined += 1;
                            let lhs = cx.union(&f2).intersection(&cx.union(f));
                            let rhs = cx.union(&f2.intersection(f));
                            let lhs2 = f2.union(cx).intersection(&f.union(cx));
                            if lhs != rhs || lhs2 != rhs {
                                functor.violate(wit(
                                    vec![("X".into(), objs[x])],
                                    vec![("f".into(), f.clone()), ("f'".into(), f2)],
                                    lhs,
                                    rhs,
                                ));
                            }
                        }
                    }
                }
            }
        }
    }

    let mut central = LawReport::new("identity centrality");
    for &x in objs {
        let r = central_against(view, &view.identity(x), true)?;
        central.examined += r.examined;
        if let Some(w) = r.witness {
            central.violate(w);
        }
    }
    Ok(vec![functor, unit, central, typing])
}
