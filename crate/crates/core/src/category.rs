//! Finite full subcategories of `Slice` and `Space`.
//!
//! Homsets are powersets `𝒫(C[X,Y])`, composition is intersection and the
//! identity on `X` is `C[X]`.

use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits::{Basis, CurveSet};
use crate::error::{Error, Result};
use crate::report::{LawReport, Witness};
use crate::spacetime::{Caps, RegionSet, Site};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Objects must be spacelike.
    Slice,
    /// Arbitrary regions.
    Space,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Morphism {
    pub src: RegionSet,
    pub dst: RegionSet,
    pub curves: CurveSet,
}

#[derive(Clone, Debug)]
pub struct CategoryView {
    site: Arc<Site>,
    objects: Vec<RegionSet>,
    index: HashMap<RegionSet, usize>,
    mode: Mode,
    caps: Caps,
    complete: bool,
    homs: Vec<CurveSet>,
}

impl CategoryView {
    /// Every slice of the graph.
    pub fn slices(site: Arc<Site>, caps: Caps) -> Result<Self> {
        let objects = site.graph.enumerate_slices(caps.objects)?;
        Self::build(site, objects, Mode::Slice, caps, true)
    }

    /// Every region of the graph.
    pub fn regions(site: Arc<Site>, caps: Caps) -> Result<Self> {
        let objects = site.graph.enumerate_regions(caps.objects)?;
        Self::build(site, objects, Mode::Space, caps, true)
    }

    /// A view on listed objects; duplicates are dropped and order made canonical.
    pub fn with_objects(site: Arc<Site>, mut objects: Vec<RegionSet>, mode: Mode, caps: Caps) -> Result<Self> {
        objects.sort();
        objects.dedup();
        if objects.len() > caps.objects {
            return Err(Error::CapExceeded {
                what: "object",
                limit: caps.objects,
            });
        }
        let all = site.graph.all_events();
        for &o in &objects {
            if o.0 & !all.0 != 0 {
                return Err(Error::NotInView(format!("{o:?} names undeclared events")));
            }
            if mode == Mode::Slice && !site.graph.is_spacelike(o) {
                return Err(Error::HypothesisViolation(format!("{} is not spacelike", site.render_region(o))));
            }
        }
        let complete = match mode {
            Mode::Slice => site.graph.enumerate_slices(caps.objects).map(|s| s == objects).unwrap_or(false),
            Mode::Space => objects.len() as u128 == 1u128 << site.graph.len(),
        };
        Self::build(site, objects, mode, caps, complete)
    }

    fn build(site: Arc<Site>, objects: Vec<RegionSet>, mode: Mode, caps: Caps, complete: bool) -> Result<Self> {
        let index = objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        let homs = objects
            .iter()
            .flat_map(|&x| objects.iter().map(move |&y| (x, y)))
            .map(|(x, y)| site.curves_through(x, y))
            .collect();
        Ok(CategoryView {
            site,
            objects,
            index,
            mode,
            caps,
            complete,
            homs,
        })
    }

    pub fn site(&self) -> &Arc<Site> {
        &self.site
    }

    pub fn objects(&self) -> &[RegionSet] {
        &self.objects
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    /// The objects are the complete slice (or region) enumeration.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn index_of(&self, x: RegionSet) -> Option<usize> {
        self.index.get(&x).copied()
    }

    pub fn require(&self, x: RegionSet) -> Result<usize> {
        self.index_of(x).ok_or_else(|| Error::NotInView(self.site.render_region(x)))
    }

    /// `C[X,Y]` by object index.
    pub fn hom(&self, x: usize, y: usize) -> &CurveSet {
        &self.homs[x * self.objects.len() + y]
    }

    /// `C[X,Y]` for arbitrary regions (cached when both are objects).
    pub fn hom_of(&self, x: RegionSet, y: RegionSet) -> CurveSet {
        match (self.index_of(x), self.index_of(y)) {
            (Some(i), Some(j)) => self.hom(i, j).clone(),
            _ => self.site.curves_through(x, y),
        }
    }

    pub fn through(&self, x: RegionSet) -> CurveSet {
        self.hom_of(x, x)
    }

    pub fn empty(&self) -> CurveSet {
        self.site.universe.empty_set()
    }

    /// Checked morphism constructor: `curves ⊆ C[src,dst]`.
    pub fn morphism(&self, src: RegionSet, dst: RegionSet, curves: CurveSet) -> Result<Morphism> {
        if !curves.is_subset(&self.hom_of(src, dst)) {
            return Err(Error::IllTyped(format!(
                "{} is not contained in C[{},{}]",
                self.site.render_curves(&curves),
                self.site.render_region(src),
                self.site.render_region(dst)
            )));
        }
        Ok(Morphism { src, dst, curves })
    }

    pub fn identity(&self, x: RegionSet) -> Morphism {
        Morphism {
            src: x,
            dst: x,
            curves: self.through(x),
        }
    }

    /// `T ∘ S = T ∩ S`.
    pub fn compose(&self, t: &Morphism, s: &Morphism) -> Result<Morphism> {
        if s.dst != t.src {
            return Err(Error::EndpointMismatch(format!(
                "cannot compose {} → {} after {} → {}",
                self.site.render_region(t.src),
                self.site.render_region(t.dst),
                self.site.render_region(s.src),
                self.site.render_region(s.dst)
            )));
        }
        let curves = t.curves.intersection(&s.curves);
        // Passing X then Y and Y then Z implies passing X then Z.
        debug_assert!(curves.is_subset(&self.hom_of(s.src, t.dst)));
        Ok(Morphism {
            src: s.src,
            dst: t.dst,
            curves,
        })
    }

    fn parallel(&self, f: &Morphism, g: &Morphism) -> Result<()> {
        if f.src != g.src || f.dst != g.dst {
            return Err(Error::EndpointMismatch("morphisms are not parallel".into()));
        }
        Ok(())
    }

    /// `(f△g)ᶜ` relative to `C[A,B]`, typed `A → A`.
    pub fn equalizer(&self, f: &Morphism, g: &Morphism) -> Result<Morphism> {
        self.parallel(f, g)?;
        let carrier = self.hom_of(f.src, f.dst);
        let curves = f.curves.symmetric_difference(&g.curves).complement_in(&carrier);
        Ok(Morphism {
            src: f.src,
            dst: f.src,
            curves,
        })
    }

    /// `(f△g)ᶜ` relative to `C[A,B]`, typed `B → B`.
    pub fn coequalizer(&self, f: &Morphism, g: &Morphism) -> Result<Morphism> {
        self.parallel(f, g)?;
        let carrier = self.hom_of(f.src, f.dst);
        let curves = f.curves.symmetric_difference(&g.curves).complement_in(&carrier);
        Ok(Morphism {
            src: f.dst,
            dst: f.dst,
            curves,
        })
    }

    /// Candidate morphisms in witness-search order: ∅, the full hom (the
    /// identity when `x = y`), singletons, then the remaining subsets when the
    /// hom is within the cap.
    pub fn candidates(&self, x: usize, y: usize) -> Vec<CurveSet> {
        let hom = self.hom(x, y);
        let mut out = vec![self.empty()];
        if !hom.is_empty() {
            out.push(hom.clone());
        }
        for c in hom.iter() {
            let single = CurveSet::from_indices(hom.width(), [c]);
            if &single != hom {
                out.push(single);
            }
        }
        if hom.len() <= self.caps.hom && hom.len() > 1 {
            let basis = Basis::new(hom).expect("hom within cap");
            for m in 1..basis.subset_count() - 1 {
                if m.count_ones() > 1 {
                    out.push(basis.subset(m));
                }
            }
        }
        out
    }
}

/// Enumeration budget for law sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Morphism tuples examined per object tuple before switching to sampling.
    pub per_tuple: usize,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { per_tuple: 64, seed: 0 }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All subsets of `hom` when within cap, otherwise `None`.
fn powerset(hom: &CurveSet, cap: usize) -> Option<Vec<CurveSet>> {
    if hom.len() > cap {
        return None;
    }
    Basis::new(hom).map(|b| b.subsets().collect())
}

fn random_subset(hom: &CurveSet, rng: &mut ChaCha8Rng) -> CurveSet {
    let mut s = CurveSet::empty(hom.width());
    for c in hom.iter() {
        if rng.gen_bool(0.5) {
            s.insert(c);
        }
    }
    s
}

/// Associativity, both unit laws and endomorphism commutativity, with
/// composition supplied by the caller so the sweep itself can be tested.
pub fn check_category_laws_with(view: &CategoryView, budget: Budget, compose: impl Fn(&CurveSet, &CurveSet) -> CurveSet) -> Vec<LawReport> {
    let n = view.objects().len();
    let obj = |i: usize| view.objects()[i];
    let mut rng = rng(budget.seed);

    let mut units = LawReport::new("unit laws");
    for x in 0..n {
        let id_x = view.hom(x, x);
        for y in 0..n {
            let id_y = view.hom(y, y);
            let hom = view.hom(x, y);
            let fs = match powerset(hom, view.caps().hom) {
                Some(all) => all,
                None => {
                    units.sampled = true;
                    (0..budget.per_tuple).map(|_| random_subset(hom, &mut rng)).collect()
                }
            };
            for f in fs {
                units.examined += 1;
                let right = compose(&f, id_x);
                let left = compose(id_y, &f);
                if right != f || left != f {
                    let bad = if right != f { right } else { left };
                    units.violate(Witness {
                        objects: vec![("X".into(), obj(x)), ("Y".into(), obj(y))],
                        morphisms: vec![("f".into(), f.clone())],
                        probe: None,
                        element: None,
                        lhs: bad,
                        rhs: f,
                    });
                }
            }
        }
    }

    let mut assoc = LawReport::new("associativity");
    for w in 0..n {
        for x in 0..n {
            let fs = view.candidates(w, x);
            for y in 0..n {
                let gs = view.candidates(x, y);
                for z in 0..n {
                    let hs = view.candidates(y, z);
                    let total = fs.len() * gs.len() * hs.len();
                    let (nf, ng, nh) = (fs.len(), gs.len(), hs.len());
                    let triples: Vec<(usize, usize, usize)> = if total <= budget.per_tuple {
                        (0..nf)
                            .flat_map(|a| (0..ng).flat_map(move |b| (0..nh).map(move |c| (a, b, c))))
                            .collect()
                    } else {
                        assoc.sampled = true;
                        (0..budget.per_tuple)
                            .map(|_| (rng.gen_range(0..fs.len()), rng.gen_range(0..gs.len()), rng.gen_range(0..hs.len())))
                            .collect()
                    };
                    for (a, b, c) in triples {
                        assoc.examined += 1;
                        let (f, g, h) = (&fs[a], &gs[b], &hs[c]);
                        let lhs = compose(&compose(h, g), f);
                        let rhs = compose(h, &compose(g, f));
                        if lhs != rhs {
                            assoc.violate(Witness {
                                objects: vec![
                                    ("W".into(), obj(w)),
                                    ("X".into(), obj(x)),
                                    ("Y".into(), obj(y)),
                                    ("Z".into(), obj(z)),
                                ],
                                morphisms: vec![("f".into(), f.clone()), ("g".into(), g.clone()), ("h".into(), h.clone())],
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

    let mut commute = LawReport::new("endomorphism commutativity");
    for x in 0..n {
        let mut cands = view.candidates(x, x);
        if cands.len() > budget.per_tuple {
            commute.sampled = true;
            cands.shuffle(&mut rng);
            cands.truncate(budget.per_tuple);
        }
        for f in &cands {
            for g in &cands {
                commute.examined += 1;
                let lhs = compose(f, g);
                let rhs = compose(g, f);
                if lhs != rhs {
                    commute.violate(Witness {
                        objects: vec![("X".into(), obj(x))],
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

    vec![assoc, units, commute]
}

pub fn check_category_laws(view: &CategoryView, budget: Budget) -> Vec<LawReport> {
    check_category_laws_with(view, budget, |t, s| t.intersection(s))
}

/// Compositions of the equalizer/coequalizer and the factorization count.
///
/// Equalizer: `f ∘ e = g ∘ e`, and every `h: H → A` with `f ∘ h = g ∘ h`
/// equals `e ∘ k` for exactly one `k: H → A`. Coequalizer dually with
/// `h: B → H` and `h = k ∘ c`.
pub fn verify_equalizers(view: &CategoryView, f: &Morphism, g: &Morphism) -> Result<Vec<LawReport>> {
    let e = view.equalizer(f, g)?;
    let c = view.coequalizer(f, g)?;
    let mut eq = LawReport::new("equalizer universality");
    let mut coeq = LawReport::new("coequalizer universality");
    let (a, b) = (f.src, f.dst);

    eq.examined += 1;
    let (fe, ge) = (f.curves.intersection(&e.curves), g.curves.intersection(&e.curves));
    if fe != ge {
        eq.violate(Witness {
            objects: vec![("A".into(), a), ("B".into(), b)],
            morphisms: vec![
                ("f".into(), f.curves.clone()),
                ("g".into(), g.curves.clone()),
                ("e".into(), e.curves.clone()),
            ],
            probe: None,
            element: None,
            lhs: fe,
            rhs: ge,
        });
    }
    coeq.examined += 1;
    let (cf, cg) = (c.curves.intersection(&f.curves), c.curves.intersection(&g.curves));
    if cf != cg {
        coeq.violate(Witness {
            objects: vec![("A".into(), a), ("B".into(), b)],
            morphisms: vec![
                ("f".into(), f.curves.clone()),
                ("g".into(), g.curves.clone()),
                ("c".into(), c.curves.clone()),
            ],
            probe: None,
            element: None,
            lhs: cf,
            rhs: cg,
        });
    }

    for &h_obj in view.objects() {
        for (report, universal, hom, tag) in [
            (&mut eq, &e, view.hom_of(h_obj, a), "e"),
            (&mut coeq, &c, view.hom_of(b, h_obj), "c"),
        ] {
            let Some(all) = powerset(&hom, view.caps().hom) else {
                return Err(Error::CapExceeded {
                    what: "hom",
                    limit: view.caps().hom,
                });
            };
            // factorizations[h] = number of k with universal ∩ k = h
            let mut factorizations: HashMap<&CurveSet, u64> = HashMap::new();
            let images: Vec<CurveSet> = all.iter().map(|k| universal.curves.intersection(k)).collect();
            for img in &images {
                *factorizations.entry(img).or_default() += 1;
            }
            for h in &all {
                if f.curves.intersection(h) != g.curves.intersection(h) {
                    continue;
                }
                report.examined += 1;
                let count = factorizations.get(h).copied().unwrap_or(0);
                if count != 1 {
                    let k_example = all
                        .iter()
                        .zip(&images)
                        .filter(|(_, img)| *img == h)
                        .map(|(k, _)| k.clone())
                        .nth(1)
                        .unwrap_or_else(|| view.empty());
                    report.violate(Witness {
                        objects: vec![("A".into(), a), ("B".into(), b), ("H".into(), h_obj)],
                        morphisms: vec![
                            ("f".into(), f.curves.clone()),
                            ("g".into(), g.curves.clone()),
                            (tag.into(), universal.curves.clone()),
                            ("h".into(), h.clone()),
                            ("k".into(), k_example.clone()),
                        ],
                        probe: None,
                        element: None,
                        lhs: universal.curves.intersection(&k_example),
                        rhs: h.clone(),
                    });
                }
            }
        }
    }
    Ok(vec![eq, coeq])
}

/// Sweeps every parallel pair `f, g` between view objects; with
/// `stop_at_first`, ends once both laws have a witness.
pub fn sweep_equalizers(view: &CategoryView, stop_at_first: bool) -> Result<Vec<LawReport>> {
    let mut eq = LawReport::new("equalizer universality");
    let mut coeq = LawReport::new("coequalizer universality");
    let n = view.objects().len();
    for x in 0..n {
        for y in 0..n {
            let hom = view.hom(x, y);
            let all = powerset(hom, view.caps().hom).ok_or(Error::CapExceeded {
                what: "hom",
                limit: view.caps().hom,
            })?;
            let (a, b) = (view.objects()[x], view.objects()[y]);
            for f in &all {
                for g in &all {
                    let fm = Morphism {
                        src: a,
                        dst: b,
                        curves: f.clone(),
                    };
                    let gm = Morphism {
                        src: a,
                        dst: b,
                        curves: g.clone(),
                    };
                    let [e_rep, c_rep]: [LawReport; 2] = verify_equalizers(view, &fm, &gm)?.try_into().unwrap();
                    for (acc, r) in [(&mut eq, e_rep), (&mut coeq, c_rep)] {
                        acc.examined += r.examined;
                        if let Some(w) = r.witness {
                            acc.violate(w);
                        }
                    }
                    if stop_at_first && !eq.holds() && !coeq.holds() {
                        return Ok(vec![eq, coeq]);
                    }
                }
            }
        }
    }
    Ok(vec![eq, coeq])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Product {
    pub object: RegionSet,
    /// Projections `C[X]: X∪Y → X` and `C[Y]: X∪Y → Y`; as coproduct, the
    /// same sets are the injections.
    pub left: Morphism,
    pub right: Morphism,
}

fn product_hypotheses(view: &CategoryView, x: RegionSet, y: RegionSet) -> Result<()> {
    let site = view.site();
    if !x.is_disjoint(y) {
        return Err(Error::HypothesisViolation(format!(
            "{} and {} intersect",
            site.render_region(x),
            site.render_region(y)
        )));
    }
    if !site.graph.jointly_spacelike(x, y) {
        return Err(Error::HypothesisViolation(format!(
            "{} and {} are not jointly spacelike",
            site.render_region(x),
            site.render_region(y)
        )));
    }
    Ok(())
}

pub fn product(view: &CategoryView, x: RegionSet, y: RegionSet) -> Result<Product> {
    product_hypotheses(view, x, y)?;
    let u = x.union(y);
    Ok(Product {
        object: u,
        left: Morphism {
            src: u,
            dst: x,
            curves: view.through(x),
        },
        right: Morphism {
            src: u,
            dst: y,
            curves: view.through(y),
        },
    })
}

pub fn coproduct(view: &CategoryView, x: RegionSet, y: RegionSet) -> Result<Product> {
    product_hypotheses(view, x, y)?;
    let u = x.union(y);
    Ok(Product {
        object: u,
        left: Morphism {
            src: x,
            dst: u,
            curves: view.through(x),
        },
        right: Morphism {
            src: y,
            dst: u,
            curves: view.through(y),
        },
    })
}

/// `⟨f, f'⟩ = f ∪ f'`.
pub fn pair(view: &CategoryView, f: &Morphism, f2: &Morphism) -> Result<Morphism> {
    if f.src != f2.src {
        return Err(Error::EndpointMismatch("cone legs have different sources".into()));
    }
    product_hypotheses(view, f.dst, f2.dst)?;
    Ok(Morphism {
        src: f.src,
        dst: f.dst.union(f2.dst),
        curves: f.curves.union(&f2.curves),
    })
}

/// `[g, g'] = g ∪ g'`.
pub fn copair(view: &CategoryView, g: &Morphism, g2: &Morphism) -> Result<Morphism> {
    if g.dst != g2.dst {
        return Err(Error::EndpointMismatch("cocone legs have different targets".into()));
    }
    product_hypotheses(view, g.src, g2.src)?;
    Ok(Morphism {
        src: g.src.union(g2.src),
        dst: g.dst,
        curves: g.curves.union(&g2.curves),
    })
}

/// Exhaustive universal-property check of the (co)product of `x` and `y`
/// against every view object `Z`: each cone has a mediating arrow making the
/// diagram commute, and each arrow into (out of) `X∪Y` is the mediator of
/// its own legs.
pub fn verify_products(view: &CategoryView, x: RegionSet, y: RegionSet) -> Result<Vec<LawReport>> {
    let p = product(view, x, y)?;
    let q = coproduct(view, x, y)?;
    let u = p.object;
    let cap = view.caps().hom;
    let too_big = || Error::CapExceeded { what: "hom", limit: cap };
    let mut prod = LawReport::new("product universality");
    let mut coprod = LawReport::new("coproduct universality");

    for &z in view.objects() {
        // product: legs f: Z→X, f': Z→Y
        let (hx, hy, hu) = (view.hom_of(z, x), view.hom_of(z, y), view.hom_of(z, u));
        let (fs, f2s, us) = (
            powerset(&hx, cap).ok_or_else(too_big)?,
            powerset(&hy, cap).ok_or_else(too_big)?,
            powerset(&hu, cap).ok_or_else(too_big)?,
        );
        let wit = |lhs: CurveSet, rhs: CurveSet, ms: Vec<(String, CurveSet)>| Witness {
            objects: vec![("X".into(), x), ("Y".into(), y), ("Z".into(), z)],
            morphisms: ms,
            probe: None,
            element: None,
            lhs,
            rhs,
        };
        for f in &fs {
            for f2 in &f2s {
                prod.examined += 1;
                let m = f.union(f2);
                let typed = m.is_subset(&hu);
                let l = p.left.curves.intersection(&m);
                let r = p.right.curves.intersection(&m);
                if !typed || &l != f || &r != f2 {
                    prod.violate(wit(
                        l.union(&r),
                        f.union(f2),
                        vec![("f".into(), f.clone()), ("f'".into(), f2.clone())],
                    ));
                }
            }
        }
        for m in &us {
            prod.examined += 1;
            let l = p.left.curves.intersection(m);
            let r = p.right.curves.intersection(m);
            if &l.union(&r) != m {
                prod.violate(wit(l.union(&r), m.clone(), vec![("u".into(), m.clone())]));
            }
        }

        // coproduct: legs g: X→Z, g': Y→Z
        let (hx, hy, hu) = (view.hom_of(x, z), view.hom_of(y, z), view.hom_of(u, z));
        let (gs, g2s, us) = (
            powerset(&hx, cap).ok_or_else(too_big)?,
            powerset(&hy, cap).ok_or_else(too_big)?,
            powerset(&hu, cap).ok_or_else(too_big)?,
        );
        for g in &gs {
            for g2 in &g2s {
                coprod.examined += 1;
                let m = g.union(g2);
                let typed = m.is_subset(&hu);
                let l = m.intersection(&q.left.curves);
                let r = m.intersection(&q.right.curves);
                if !typed || &l != g || &r != g2 {
                    coprod.violate(wit(
                        l.union(&r),
                        g.union(g2),
                        vec![("g".into(), g.clone()), ("g'".into(), g2.clone())],
                    ));
                }
            }
        }
        for m in &us {
            coprod.examined += 1;
            let l = m.intersection(&q.left.curves);
            let r = m.intersection(&q.right.curves);
            if &l.union(&r) != m {
                coprod.violate(wit(l.union(&r), m.clone(), vec![("u".into(), m.clone())]));
            }
        }
    }
    Ok(vec![prod, coprod])
}

/// Searches for `S: X→Y, S': Y→Z, T: X'→Y', T': Y'→Z'` with
/// `(S'∪T') ∩ (S∪T) ⊋ (S'∩S) ∪ (T'∩T)`.
///
/// The two tensor factors are kept on disjoint regions (`X∩X' = Y∩Y' =
/// Z∩Z' = ∅`). Search order: `S = T' = ∅` with `S', T` the full homs, over
/// `(Y, Z, X', Y')` in canonical order, `X` and `Z'` the first objects
/// disjoint from `X'` and `Z`. A seeded sample of arbitrary tuples also
/// confirms the `⊇` inclusion.
pub fn union_bifunctoriality_gap(view: &CategoryView, samples: usize, seed: u64) -> Result<LawReport> {
    let mut report = LawReport::new("union bifunctoriality");
    let objs = view.objects();
    let n = objs.len();
    let first_disjoint = |r: RegionSet| objs.iter().copied().find(|o| o.is_disjoint(r));

    'search: for yi in 0..n {
        for zi in 0..n {
            let s2 = view.hom(yi, zi);
            if s2.is_empty() {
                continue;
            }
            for x2i in 0..n {
                for y2i in 0..n {
                    let (y, z, x2, y2) = (objs[yi], objs[zi], objs[x2i], objs[y2i]);
                    if !y.is_disjoint(y2) {
                        continue;
                    }
                    let (Some(x), Some(z2)) = (first_disjoint(x2), first_disjoint(z)) else {
                        continue;
                    };
                    report.examined += 1;
                    let t = view.hom(x2i, y2i);
                    let (s, t2) = (view.empty(), view.empty());
                    let lhs = s2.union(&t2).intersection(&s.union(t));
                    let rhs = s2.intersection(&s).union(&t2.intersection(t));
                    if lhs != rhs {
                        report.violate(Witness {
                            objects: vec![
                                ("X".into(), x),
                                ("Y".into(), y),
                                ("Z".into(), z),
                                ("X'".into(), x2),
                                ("Y'".into(), y2),
                                ("Z'".into(), z2),
                            ],
                            morphisms: vec![
                                ("S".into(), s),
                                ("S'".into(), s2.clone()),
                                ("T".into(), t.clone()),
                                ("T'".into(), t2),
                            ],
                            probe: None,
                            element: None,
                            lhs,
                            rhs,
                        });
                        break 'search;
                    }
                }
            }
        }
    }

    let mut rng = rng(seed);
    let mut inclusion = LawReport::new("union inclusion");
    if n > 0 {
        for _ in 0..samples {
            let pick: Vec<usize> = (0..6).map(|_| rng.gen_range(0..n)).collect();
            let (x, y, z, x2, y2, z2) = (pick[0], pick[1], pick[2], pick[3], pick[4], pick[5]);
            let s = random_subset(view.hom(x, y), &mut rng);
            let s2 = random_subset(view.hom(y, z), &mut rng);
            let t = random_subset(view.hom(x2, y2), &mut rng);
            let t2 = random_subset(view.hom(y2, z2), &mut rng);
            inclusion.examined += 1;
            let lhs = s2.union(&t2).intersection(&s.union(&t));
            let rhs = s2.intersection(&s).union(&t2.intersection(&t));
            if !rhs.is_subset(&lhs) {
                inclusion.violate(Witness {
                    objects: vec![],
                    morphisms: vec![("S".into(), s), ("S'".into(), s2), ("T".into(), t), ("T'".into(), t2)],
                    probe: None,
                    element: None,
                    lhs,
                    rhs,
                });
            }
        }
    }
    // A failed inclusion would be an engine bug; surface it over the gap.
    if !inclusion.holds() {
        return Ok(inclusion);
    }
    report.examined += inclusion.examined;
    report.sampled = samples > 0;
    Ok(report)
}

/// Replays a union-bifunctoriality witness: `((S'∪T')∩(S∪T), (S'∩S)∪(T'∩T))`.
pub fn replay_union_gap(w: &Witness) -> Option<(CurveSet, CurveSet)> {
    let (s, s2, t, t2) = (w.morphism("S")?, w.morphism("S'")?, w.morphism("T")?, w.morphism("T'")?);
    Some((
        s2.union(t2).intersection(&s.union(t)),
        s2.intersection(s).union(&t2.intersection(t)),
    ))
}

/// Searches for objects with `1_X ∩ 1_Y ≠ 1_{X∩Y}`.
pub fn intersection_unit_gap(view: &CategoryView) -> LawReport {
    let mut report = LawReport::new("intersection unit");
    let objs = view.objects();
    for (i, &x) in objs.iter().enumerate() {
        for &y in &objs[i + 1..] {
            report.examined += 1;
            let lhs = view.through(x).intersection(&view.through(y));
            let rhs = view.through(x.intersection(y));
            if lhs != rhs {
                report.violate(Witness {
                    objects: vec![("X".into(), x), ("Y".into(), y)],
                    morphisms: vec![],
                    probe: None,
                    element: None,
                    lhs,
                    rhs,
                });
                return report;
            }
        }
    }
    report
}
