//! Coherence checks phrased as bijections from coends onto powersets.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{profunctor_compose, profunctor_compose_vars, CoendSpec, Element, Engine, Factor, Policy, QuotientSet, Variance};
use crate::bits::{Basis, CurveSet};
use crate::category::CategoryView;
use crate::error::{Error, Result};
use crate::spacetime::{RegionSet, Site};
use crate::tensors::Presheaf;

use Variance::{Contra, Cov};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoWitness {
    /// Fixed (non-middle) objects of the failing instance.
    pub outer: Vec<(String, RegionSet)>,
    pub elements: Vec<Element>,
    pub images: Vec<CurveSet>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    pub check: String,
    /// The comparison map, as a formula.
    pub forward: String,
    pub instances: u64,
    /// Instances not run because a cap was exceeded.
    pub skipped: u64,
    /// Summed over instances: coend classes and target-set sizes.
    pub classes: u64,
    pub target: u64,
    pub bijective: bool,
    pub witness: Option<IsoWitness>,
}

impl IsoReport {
    pub fn new(check: impl Into<String>, forward: impl Into<String>) -> Self {
        IsoReport {
            check: check.into(),
            forward: forward.into(),
            instances: 0,
            skipped: 0,
            classes: 0,
            target: 0,
            bijective: true,
            witness: None,
        }
    }

    pub fn fail(&mut self, w: IsoWitness) {
        self.bijective = false;
        if self.witness.is_none() {
            self.witness = Some(w);
        }
    }

    fn absorb(&mut self, r: Result<(u64, u64, Option<IsoWitness>)>, outer: &[(String, RegionSet)]) -> Result<()> {
        match r {
            Ok((classes, target, failure)) => {
                self.instances += 1;
                self.classes += classes;
                self.target += target;
                if let Some(w) = failure {
                    self.fail(w);
                }
            }
            Err(e) if e.is_cap() => self.skipped += 1,
            Err(Error::IllTyped(msg)) => {
                self.instances += 1;
                self.fail(IsoWitness {
                    outer: outer.to_vec(),
                    elements: vec![],
                    images: vec![],
                    reason: format!("ill-typed action: {msg}"),
                });
            }
            Err(e) => return Err(e),
        }
        Ok(())
    }
}

/// Checks that `forward` descends to a bijection from classes onto `𝒫(target)`,
/// and that `inverse` is a section of it.
pub fn iso_instance(
    q: &QuotientSet,
    outer: &[(String, RegionSet)],
    target: &CurveSet,
    forward: impl Fn(&Element) -> CurveSet,
    inverse: impl Fn(&CurveSet) -> Element,
) -> Result<(u64, u64, Option<IsoWitness>)> {
    let cap = Basis::new(target).filter(|b| b.len() <= 24).ok_or(Error::CapExceeded {
        what: "coend target",
        limit: 24,
    })?;
    let size = cap.subset_count();
    let classes = q.class_count() as u64;
    let wit = |elements: Vec<Element>, images: Vec<CurveSet>, reason: &str| IsoWitness {
        outer: outer.to_vec(),
        elements,
        images,
        reason: reason.into(),
    };

    let mut class_image: Vec<Option<CurveSet>> = vec![None; q.class_count()];
    for id in 0..q.len() {
        let e = q.element(id);
        let img = forward(&e);
        if !img.is_subset(target) {
            return Ok((classes, size, Some(wit(vec![e], vec![img], "image leaves the target"))));
        }
        let c = q.class_of(id);
        match &class_image[c] {
            None => class_image[c] = Some(img),
            Some(prev) if *prev != img => {
                let rep = q.element(q.representative(c));
                return Ok((
                    classes,
                    size,
                    Some(wit(vec![rep, e], vec![prev.clone(), img], "map is not constant on a class")),
                ));
            }
            Some(_) => {}
        }
    }

    let mut by_image: HashMap<&CurveSet, usize> = HashMap::new();
    for (c, img) in class_image.iter().enumerate() {
        let img = img.as_ref().expect("every class has an element");
        if let Some(&other) = by_image.get(img) {
            let (a, b) = (q.element(q.representative(other)), q.element(q.representative(c)));
            return Ok((
                classes,
                size,
                Some(wit(vec![a, b], vec![img.clone()], "two classes share an image")),
            ));
        }
        by_image.insert(img, c);
    }

    for s in cap.subsets() {
        let e = inverse(&s);
        let Some(id) = q.id_of(&e) else {
            return Ok((classes, size, Some(wit(vec![e], vec![s], "inverse leaves the coend"))));
        };
        let back = class_image[q.class_of(id)].clone().unwrap();
        if back != s {
            return Ok((classes, size, Some(wit(vec![e], vec![s, back], "inverse is not a section"))));
        }
    }
    // A section exists and classes inject, so the map is onto.
    debug_assert_eq!(classes, size);
    Ok((classes, size, None))
}

fn hom(
    site: &Arc<Site>,
    label: &str,
    vars: Vec<(usize, Variance)>,
    pick: impl Fn(&[RegionSet]) -> [RegionSet; 2] + Send + Sync + 'static,
) -> Factor {
    let site = site.clone();
    Factor::new(label, vars, move |m| {
        let [z, x] = pick(m);
        site.curves_through(z, x)
    })
}

fn wedge(
    site: &Arc<Site>,
    label: &str,
    vars: Vec<(usize, Variance)>,
    pick: impl Fn(&[RegionSet]) -> [RegionSet; 3] + Send + Sync + 'static,
) -> Factor {
    let site = site.clone();
    Factor::new(label, vars, move |m| {
        let [z, x, y] = pick(m);
        site.curves_through(z, x).intersection(&site.curves_through(z, y))
    })
}

fn vee(
    site: &Arc<Site>,
    label: &str,
    vars: Vec<(usize, Variance)>,
    pick: impl Fn(&[RegionSet]) -> [RegionSet; 3] + Send + Sync + 'static,
) -> Factor {
    let site = site.clone();
    Factor::new(label, vars, move |m| {
        let [z, x, y] = pick(m);
        site.curves_through(z, x).union(&site.curves_through(z, y))
    })
}

fn unit(
    site: &Arc<Site>,
    label: &str,
    vars: Vec<(usize, Variance)>,
    pick: impl Fn(&[RegionSet]) -> RegionSet + Send + Sync + 'static,
) -> Factor {
    let site = site.clone();
    Factor::new(label, vars, move |m| site.through(pick(m)))
}

/// Outer tuples: all of them, or `k` seeded draws.
pub fn outer_tuples(view: &CategoryView, arity: usize, sample: Option<(usize, u64)>) -> Vec<Vec<RegionSet>> {
    let objs = view.objects();
    let n = objs.len();
    match sample {
        Some((k, seed)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..k).map(|_| (0..arity).map(|_| objs[rng.gen_range(0..n)]).collect()).collect()
        }
        None => {
            let count = n.pow(arity as u32);
            (0..count)
                .map(|mut k| {
                    let mut t = vec![RegionSet::EMPTY; arity];
                    for slot in t.iter_mut().rev() {
                        *slot = objs[k % n];
                        k /= n;
                    }
                    t
                })
                .collect()
        }
    }
}

fn named(names: &[&str], objs: &[RegionSet]) -> Vec<(String, RegionSet)> {
    names.iter().zip(objs).map(|(n, o)| (n.to_string(), *o)).collect()
}

/// `∫^c Hom(Z,c) × F(c) ≅ F(Z)` via `(g, s) ↦ s ∩ g`, at every `Z`.
pub fn ninja_yoneda_check(view: &CategoryView, f: &Presheaf, engine: Engine) -> Result<IsoReport> {
    ninja_yoneda_with(view, f, engine, |s, g| s.intersection(g))
}

/// Ninja Yoneda with the comparison map supplied; used to test the check.
pub fn ninja_yoneda_with(
    view: &CategoryView,
    f: &Presheaf,
    engine: Engine,
    act: impl Fn(&CurveSet, &CurveSet) -> CurveSet,
) -> Result<IsoReport> {
    let site = view.site();
    let mut report = IsoReport::new("ninja yoneda", "(g, s) -> s & g");
    let kind = f.kind;
    for &z in view.objects() {
        let site2 = site.clone();
        let spec = CoendSpec {
            vars: 1,
            factors: vec![
                hom(site, "Hom(Z,c)", vec![(0, Cov)], move |m| [z, m[0]]),
                Factor::new("F(c)", vec![(0, Contra)], move |m| kind.basis_on(&site2, m[0])),
            ],
        };
        let outer = named(&["Z"], &[z]);
        let target = f.basis_of(view, z)?.clone();
        let id_z = view.through(z);
        let r = profunctor_compose(view, &spec, engine).and_then(|q| {
            iso_instance(
                &q,
                &outer,
                &target,
                |e| act(&e.values[1], &e.values[0]),
                |s| Element {
                    middle: vec![z],
                    values: vec![id_z.clone(), s.clone()],
                },
            )
        });
        report.absorb(r, &outer)?;
    }
    Ok(report)
}

fn triple(view: &CategoryView, w: RegionSet, x: RegionSet, y: RegionSet, z: RegionSet) -> CurveSet {
    view.hom_of(w, x).intersection(&view.hom_of(w, y)).intersection(&view.hom_of(w, z))
}

/// Both bracketings of `⊛` at `(W; X, Y, Z)` against `Λ = 𝒫(C[W,X] ∩ C[W,Y] ∩ C[W,Z])`,
/// and the associator `(S,T)@A ↦ (S∩T, S∩T)@W` on classes.
pub fn associativity_check(
    view: &CategoryView,
    w: RegionSet,
    x: RegionSet,
    y: RegionSet,
    z: RegionSet,
    engine: Engine,
) -> Result<IsoReport> {
    let mut report = IsoReport::new("associativity", "(S, T) -> S & T");
    associativity_into(&mut report, view, [w, x, y, z], engine)?;
    Ok(report)
}

fn associativity_into(report: &mut IsoReport, view: &CategoryView, o: [RegionSet; 4], engine: Engine) -> Result<()> {
    let [w, x, y, z] = o;
    view.require(w)?;
    let site = view.site();
    let outer = named(&["W", "X", "Y", "Z"], &o);
    let lambda = triple(view, w, x, y, z);
    let left = CoendSpec {
        vars: 1,
        factors: vec![
            wedge(site, "⊛(W;A,Z)", vec![(0, Cov)], move |m| [w, m[0], z]),
            wedge(site, "⊛(A;X,Y)", vec![(0, Contra)], move |m| [m[0], x, y]),
        ],
    };
    let right = CoendSpec {
        vars: 1,
        factors: vec![
            wedge(site, "⊛(W;X,A)", vec![(0, Cov)], move |m| [w, x, m[0]]),
            wedge(site, "⊛(A;Y,Z)", vec![(0, Contra)], move |m| [m[0], y, z]),
        ],
    };
    let fwd = |e: &Element| e.values[0].intersection(&e.values[1]);
    let inv = |s: &CurveSet| Element {
        middle: vec![w],
        values: vec![s.clone(), s.clone()],
    };
    let ql = profunctor_compose(view, &left, engine);
    let qr = profunctor_compose(view, &right, engine);
    let (ql, qr) = match (ql, qr) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(e), _) | (_, Err(e)) => return report.absorb(Err(e), &outer),
    };
    report.absorb(iso_instance(&ql, &outer, &lambda, fwd, inv), &outer)?;
    report.absorb(iso_instance(&qr, &outer, &lambda, fwd, inv), &outer)?;

    // The associator on elements must respect classes on both sides.
    let mut image: Vec<Option<usize>> = vec![None; ql.class_count()];
    for id in 0..ql.len() {
        let e = ql.element(id);
        let u = e.values[0].intersection(&e.values[1]);
        let target = Element {
            middle: vec![w],
            values: vec![u.clone(), u],
        };
        let Some(tid) = qr.id_of(&target) else {
            report.fail(IsoWitness {
                outer: outer.clone(),
                elements: vec![e, target],
                images: vec![],
                reason: "associator leaves the coend".into(),
            });
            return Ok(());
        };
        let c = ql.class_of(id);
        let tc = qr.class_of(tid);
        match image[c] {
            None => image[c] = Some(tc),
            Some(prev) if prev != tc => {
                report.fail(IsoWitness {
                    outer: outer.clone(),
                    elements: vec![ql.element(ql.representative(c)), e],
                    images: vec![],
                    reason: "associator is not constant on a class".into(),
                });
                return Ok(());
            }
            Some(_) => {}
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoherenceOptions {
    pub engine: Engine,
    /// `None`: every outer tuple; otherwise `k` seeded tuples per check.
    pub sample: Option<(usize, u64)>,
}

impl Default for CoherenceOptions {
    fn default() -> Self {
        CoherenceOptions {
            engine: Engine::Factored,
            sample: None,
        }
    }
}

/// Associativity, pentagon, triangle, both units and symmetry for `⊛`.
pub fn coherence_check(view: &CategoryView, opts: CoherenceOptions) -> Result<Vec<IsoReport>> {
    let engine = opts.engine;
    let site = view.site();

    let mut assoc = IsoReport::new("associativity", "(S, T) -> S & T");
    for t in outer_tuples(view, 4, opts.sample) {
        associativity_into(&mut assoc, view, [t[0], t[1], t[2], t[3]], engine)?;
    }

    let mut pentagon = IsoReport::new("pentagon", "(S, T, V) -> S & T & V");
    for t in outer_tuples(view, 5, opts.sample) {
        let [a, b, c, d, e] = [t[0], t[1], t[2], t[3], t[4]];
        let outer = named(&["a", "b", "c", "d", "e"], &t);
        // ((bc)d)e, middles (x, y)
        let start = CoendSpec {
            vars: 2,
            factors: vec![
                wedge(site, "⊛(a;x,e)", vec![(0, Cov)], move |m| [a, m[0], e]),
                wedge(site, "⊛(x;y,d)", vec![(0, Contra), (1, Cov)], move |m| [m[0], m[1], d]),
                wedge(site, "⊛(y;b,c)", vec![(1, Contra)], move |m| [m[1], b, c]),
            ],
        };
        // b(c(de)), middles (x, y)
        let end = CoendSpec {
            vars: 2,
            factors: vec![
                wedge(site, "⊛(a;b,x)", vec![(0, Cov)], move |m| [a, b, m[0]]),
                wedge(site, "⊛(x;c,y)", vec![(0, Contra), (1, Cov)], move |m| [m[0], c, m[1]]),
                wedge(site, "⊛(y;d,e)", vec![(1, Contra)], move |m| [m[1], d, e]),
            ],
        };
        let (qs, qe) = match (profunctor_compose(view, &start, engine), profunctor_compose(view, &end, engine)) {
            (Ok(s), Ok(e)) => (s, e),
            (Err(err), _) | (_, Err(err)) => {
                pentagon.absorb(Err(err), &outer)?;
                continue;
            }
        };
        let lambda = view.hom_of(a, b).intersection(&triple(view, a, c, d, e));
        let fwd = |el: &Element| el.values[0].intersection(&el.values[1]).intersection(&el.values[2]);
        let inv = |s: &CurveSet| Element {
            middle: vec![a, a],
            values: vec![s.clone(), s.clone(), s.clone()],
        };
        pentagon.absorb(iso_instance(&qs, &outer, &lambda, fwd, inv), &outer)?;
        pentagon.absorb(iso_instance(&qe, &outer, &lambda, fwd, inv), &outer)?;
        for id in 0..qs.len() {
            let el = qs.element(id);
            let (s, t, v) = (&el.values[0], &el.values[1], &el.values[2]);
            let st = s.intersection(t);
            let stv = st.intersection(v);
            let anticlockwise = Element {
                middle: vec![a, a],
                values: vec![stv.clone(), stv.clone(), stv.clone()],
            };
            let clockwise = Element {
                middle: vec![a, a],
                values: vec![stv.clone(), stv, st],
            };
            match (qe.id_of(&clockwise), qe.id_of(&anticlockwise)) {
                (Some(i), Some(j)) if qe.class_of(i) == qe.class_of(j) => {}
                (ci, cj) => {
                    let reason = if ci.is_none() || cj.is_none() {
                        "pentagon route leaves the coend"
                    } else {
                        "pentagon routes land in different classes"
                    };
                    pentagon.fail(IsoWitness {
                        outer: outer.clone(),
                        elements: vec![el, clockwise, anticlockwise],
                        images: vec![],
                        reason: reason.into(),
                    });
                    break;
                }
            }
        }
    }

    let mut triangle = IsoReport::new("triangle", "(S, T, U) -> S & T & U");
    for t in outer_tuples(view, 3, opts.sample) {
        let [z, x, y] = [t[0], t[1], t[2]];
        let outer = named(&["Z", "X", "Y"], &t);
        let target = view.hom_of(z, x).intersection(&view.hom_of(z, y));
        let routes = [
            CoendSpec {
                vars: 2,
                factors: vec![
                    wedge(site, "⊛(Z;A,Y)", vec![(0, Cov)], move |m| [z, m[0], y]),
                    wedge(site, "⊛(A;X,B)", vec![(0, Contra), (1, Cov)], move |m| [m[0], x, m[1]]),
                    unit(site, "I(B)", vec![(1, Contra)], |m| m[1]),
                ],
            },
            CoendSpec {
                vars: 2,
                factors: vec![
                    wedge(site, "⊛(Z;X,A)", vec![(0, Cov)], move |m| [z, x, m[0]]),
                    wedge(site, "⊛(A;B,Y)", vec![(0, Contra), (1, Cov)], move |m| [m[0], m[1], y]),
                    unit(site, "I(B)", vec![(1, Contra)], |m| m[1]),
                ],
            },
        ];
        for spec in &routes {
            let r = profunctor_compose(view, spec, engine).and_then(|q| {
                // unit-then-compose and associate-then-unit agree elementwise
                for id in 0..q.len() {
                    let el = q.element(id);
                    let (s, t, u) = (&el.values[0], &el.values[1], &el.values[2]);
                    if s.intersection(&t.intersection(u)) != s.intersection(t).intersection(u) {
                        return Ok((
                            0,
                            0,
                            Some(IsoWitness {
                                outer: outer.clone(),
                                elements: vec![el],
                                images: vec![],
                                reason: "triangle routes differ".into(),
                            }),
                        ));
                    }
                }
                iso_instance(
                    &q,
                    &outer,
                    &target,
                    |e| e.values[0].intersection(&e.values[1]).intersection(&e.values[2]),
                    |s| Element {
                        middle: vec![z, z],
                        values: vec![s.clone(), s.clone(), s.clone()],
                    },
                )
            });
            triangle.absorb(r, &outer)?;
        }
    }

    let mut left_unit = IsoReport::new("left unit", "(S, T) -> S & T");
    let mut right_unit = IsoReport::new("right unit", "(S, T) -> S & T");
    let mut symmetry = IsoReport::new("symmetry", "identity");
    for t in outer_tuples(view, 2, opts.sample) {
        let [z, x] = [t[0], t[1]];
        let outer = named(&["Z", "X"], &t);
        let target = view.hom_of(z, x);
        for (report, left) in [(&mut left_unit, true), (&mut right_unit, false)] {
            let spec = CoendSpec {
                vars: 1,
                factors: vec![
                    if left {
                        wedge(site, "⊛(Z;B,X)", vec![(0, Cov)], move |m| [z, m[0], x])
                    } else {
                        wedge(site, "⊛(Z;X,B)", vec![(0, Cov)], move |m| [z, x, m[0]])
                    },
                    unit(site, "I(B)", vec![(0, Contra)], |m| m[0]),
                ],
            };
            let r = profunctor_compose(view, &spec, engine).and_then(|q| {
                iso_instance(
                    &q,
                    &outer,
                    &target,
                    |e| e.values[0].intersection(&e.values[1]),
                    |s| Element {
                        middle: vec![z],
                        values: vec![s.clone(), s.clone()],
                    },
                )
            });
            report.absorb(r, &outer)?;
        }
    }
    for t in outer_tuples(view, 3, opts.sample) {
        let [z, x, y] = [t[0], t[1], t[2]];
        let (xy, yx) = (
            view.hom_of(z, x).intersection(&view.hom_of(z, y)),
            view.hom_of(z, y).intersection(&view.hom_of(z, x)),
        );
        symmetry.instances += 1;
        let size = 1u64 << xy.len().min(63);
        symmetry.classes += size;
        symmetry.target += size;
        if xy != yx {
            symmetry.fail(IsoWitness {
                outer: named(&["Z", "X", "Y"], &t),
                elements: vec![],
                images: vec![xy, yx],
                reason: "bases differ".into(),
            });
        }
    }

    Ok(vec![assoc, pentagon, triangle, left_unit, right_unit, symmetry])
}

/// Curves a covariant `A ⩔ −` action keeps regardless of the morphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Keep {
    /// `C[A]`: the action `S ↦ S ∩ (f ∪ C[A])`.
    Through,
    /// `C[Z,A]` at the fixed outer object: always well-typed.
    Hom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KernelOptions {
    pub engine: Engine,
    /// Action of the covariant `A ⩔ −` factor when it leaves its basis.
    pub policy: Policy,
    pub sample: Option<(usize, u64)>,
    /// A single `(X, Y, W)` probe instead of every tuple; the unit runs at `Z = W`.
    pub probe: Option<(RegionSet, RegionSet, RegionSet)>,
    pub keep: Keep,
    /// Replace `∪` by `∩` in the target; the bijections must then break.
    pub mutate_target: bool,
}

impl Default for KernelOptions {
    fn default() -> Self {
        KernelOptions {
            engine: Engine::Factored,
            policy: Policy::Strict,
            keep: Keep::Hom,
            sample: None,
            probe: None,
            mutate_target: false,
        }
    }
}

/// Unit and both multiplication sides of `A ⩔ −` as a kernel for `⊛`, plus the
/// Fubini comparison for the double coend.
pub fn kernel_check(view: &CategoryView, a: RegionSet, opts: KernelOptions) -> Result<Vec<IsoReport>> {
    view.require(a)?;
    let site = view.site();
    let engine = opts.engine;
    let keep = |z: RegionSet| match opts.keep {
        Keep::Through => view.through(a),
        Keep::Hom => view.hom_of(z, a),
    };

    let mut unit_r = IsoReport::new("kernel unit", "(S, T) -> S & (T | C[A])");
    let probes = match opts.probe {
        Some((x, y, w)) => vec![vec![x, y, w]],
        None => outer_tuples(view, 3, opts.sample),
    };
    let units = match opts.probe {
        Some((_, _, w)) => vec![vec![w]],
        None => outer_tuples(view, 1, opts.sample),
    };
    for t in units {
        let z = t[0];
        let outer = named(&["A", "Z"], &[a, z]);
        let k = keep(z);
        let spec = CoendSpec {
            vars: 1,
            factors: vec![
                vee(site, "⩔(Z;A,X)", vec![(0, Cov)], move |m| [z, a, m[0]]).keeping(k.clone(), opts.policy),
                unit(site, "I(X)", vec![(0, Contra)], |m| m[0]),
            ],
        };
        let target = view.through(z);
        let r = profunctor_compose(view, &spec, engine).and_then(|q| {
            iso_instance(
                &q,
                &outer,
                &target,
                |e| e.values[0].intersection(&e.values[1].union(&k)),
                |s| Element {
                    middle: vec![z],
                    values: vec![s.clone(), s.clone()],
                },
            )
        });
        unit_r.absorb(r, &outer)?;
    }

    let mut left = IsoReport::new("kernel multiplication (single coend)", "(S, T) -> S & (T | C[A])");
    let mut right = IsoReport::new("kernel multiplication (double coend)", "(S, T, V) -> S & T & V");
    let mut fubini = IsoReport::new("kernel fubini", "joint vs iterated quotient");
    for t in probes {
        let [x, y, w] = [t[0], t[1], t[2]];
        let outer = named(&["A", "X", "Y", "W"], &[a, x, y, w]);
        let k = keep(w);
        let wedge_w = view.hom_of(w, x).intersection(&view.hom_of(w, y));
        let target = if opts.mutate_target {
            view.hom_of(w, a).intersection(&wedge_w)
        } else {
            view.hom_of(w, a).union(&wedge_w)
        };

        let single = CoendSpec {
            vars: 1,
            factors: vec![
                vee(site, "⩔(W;A,Z)", vec![(0, Cov)], move |m| [w, a, m[0]]).keeping(k.clone(), opts.policy),
                wedge(site, "⊛(Z;X,Y)", vec![(0, Contra)], move |m| [m[0], x, y]),
            ],
        };
        let r = profunctor_compose(view, &single, engine).and_then(|q| {
            iso_instance(
                &q,
                &outer,
                &target,
                |e| e.values[0].intersection(&e.values[1].union(&k)),
                |s| Element {
                    middle: vec![w],
                    values: vec![s.clone(), s.intersection(&wedge_w)],
                },
            )
        });
        left.absorb(r, &outer)?;

        let double = CoendSpec {
            vars: 2,
            factors: vec![
                vee(site, "⩔(Z;A,X)", vec![(0, Contra)], move |m| [m[0], a, x]),
                vee(site, "⩔(Z';A,Y)", vec![(1, Contra)], move |m| [m[1], a, y]),
                wedge(site, "⊛(W;Z,Z')", vec![(0, Cov), (1, Cov)], move |m| [w, m[0], m[1]]),
            ],
        };
        let q = match profunctor_compose(view, &double, engine) {
            Ok(q) => q,
            Err(e) => {
                right.absorb(Err(e), &outer)?;
                continue;
            }
        };
        let r = iso_instance(
            &q,
            &outer,
            &target,
            |e| e.values[0].intersection(&e.values[1]).intersection(&e.values[2]),
            |s| Element {
                middle: vec![w, w],
                values: vec![s.clone(), s.clone(), s.clone()],
            },
        );
        right.absorb(r, &outer)?;

        let r = fubini_instance(view, &double, &q, engine).map(|ok| {
            let n = q.class_count() as u64;
            (
                n,
                n,
                (!ok).then(|| IsoWitness {
                    outer: outer.clone(),
                    elements: vec![],
                    images: vec![],
                    reason: "iterated quotient differs from the joint one".into(),
                }),
            )
        });
        fubini.absorb(r, &outer)?;
    }
    Ok(vec![unit_r, left, right, fubini])
}

/// Joins the partitions of each single-variable quotient, in both orders, and
/// compares with the joint quotient.
fn fubini_instance(view: &CategoryView, spec: &CoendSpec, joint: &QuotientSet, engine: Engine) -> Result<bool> {
    let parts: Vec<QuotientSet> = (0..spec.vars)
        .map(|v| profunctor_compose_vars(view, spec, engine, &[v]))
        .collect::<Result<_>>()?;
    let sequential = |order: &[usize]| -> Result<QuotientSet> { profunctor_compose_vars(view, spec, engine, order) };
    let forward: Vec<usize> = (0..spec.vars).collect();
    let backward: Vec<usize> = forward.iter().rev().copied().collect();
    let (f, b) = (sequential(&forward)?, sequential(&backward)?);

    // Join of the single-variable partitions.
    let n = joint.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn root(label: &mut [usize], mut x: usize) -> usize {
        while label[x] != x {
            label[x] = label[label[x]];
            x = label[x];
        }
        x
    }
    for p in &parts {
        for id in 0..n {
            let rep = p.representative(p.class_of(id));
            let (ra, rb) = (root(&mut label, id), root(&mut label, rep));
            if ra != rb {
                label[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let joined: Vec<usize> = (0..n).map(|id| root(&mut label, id)).collect();
    Ok((0..n).all(|id| {
        let same = |q: &QuotientSet| q.class_of(id) == q.class_of(joined[id]);
        same(joint) && same(&f) && same(&b)
    }) && [&f, &b].iter().all(|q| q.class_count() == joint.class_count()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::CategoryView;
    use crate::spacetime::{chain, cycle, edgeless, minkowski_lattice, Caps, CausalGraph, Site};
    use crate::tensors::PresheafKind;

    fn slices(g: CausalGraph) -> CategoryView {
        let site = Arc::new(Site::new(g, &Caps::default()).unwrap());
        CategoryView::slices(site, Caps::default()).unwrap()
    }

    fn r(v: &CategoryView, l: &[&str]) -> RegionSet {
        v.site().region(l).unwrap()
    }

    fn all_kinds(v: &CategoryView) -> Vec<Presheaf> {
        let objs = v.objects().to_vec();
        let mut out = vec![Presheaf::unit(v)];
        for &x in &objs {
            out.push(Presheaf::yoneda(v, x).unwrap());
            for &y in &objs {
                out.push(Presheaf::wedge(v, x, y).unwrap());
                out.push(Presheaf::vee(v, x, y).unwrap());
            }
        }
        out
    }

    #[test]
    fn yoneda_composed_with_yoneda_at_empty() {
        let v = slices(chain(2).unwrap());
        let site = v.site();
        let spec = CoendSpec {
            vars: 1,
            factors: vec![
                hom(site, "Hom(∅,c)", vec![(0, Cov)], |m| [RegionSet::EMPTY, m[0]]),
                hom(site, "Hom(c,∅)", vec![(0, Contra)], |m| [m[0], RegionSet::EMPTY]),
            ],
        };
        let q = profunctor_compose(&v, &spec, Engine::Factored).unwrap();
        assert_eq!(q.len(), 3);
        assert_eq!(q.class_count(), 1);
    }

    #[test]
    fn ninja_on_chain2_wedge() {
        let v = slices(chain(2).unwrap());
        let (a, b) = (r(&v, &["a"]), r(&v, &["b"]));
        let f = Presheaf::wedge(&v, a, b).unwrap();
        let rep = ninja_yoneda_check(&v, &f, Engine::Factored).unwrap();
        assert!(rep.bijective, "{rep:?}");
        assert_eq!(rep.instances, 3);
        // 𝒫({[a,b]}) at {a}, 𝒫(∅) at ∅ and {b}.
        assert_eq!(rep.classes, 4);
    }

    #[test]
    fn ninja_for_every_kind_and_both_engines() {
        for (g, engines) in [
            (chain(2).unwrap(), &[Engine::Factored, Engine::Exhaustive][..]),
            (cycle(3).unwrap(), &[Engine::Factored][..]),
        ] {
            let v = slices(g);
            for f in all_kinds(&v) {
                for &engine in engines {
                    let rep = ninja_yoneda_check(&v, &f, engine).unwrap();
                    assert!(rep.bijective, "{:?} {engine:?}: {rep:?}", f.kind);
                }
            }
        }
    }

    #[test]
    fn engines_agree_on_partitions() {
        let v = slices(chain(3).unwrap());
        let site = v.site().clone();
        let (a, c) = (r(&v, &["a"]), r(&v, &["c"]));
        let spec = CoendSpec {
            vars: 2,
            factors: vec![
                wedge(&site, "⊛(a;x,c)", vec![(0, Cov)], move |m| [a, m[0], c]),
                wedge(&site, "⊛(x;y,c)", vec![(0, Contra), (1, Cov)], move |m| [m[0], m[1], c]),
                unit(&site, "I(y)", vec![(1, Contra)], |m| m[1]),
            ],
        };
        let f = profunctor_compose(&v, &spec, Engine::Factored).unwrap();
        let e = profunctor_compose(&v, &spec, Engine::Exhaustive).unwrap();
        assert_eq!(f.len(), e.len());
        assert_eq!(f.class_count(), e.class_count());
        for id in 0..f.len() {
            assert_eq!(f.representative(f.class_of(id)), e.representative(e.class_of(id)));
        }
    }

    #[test]
    fn mutations_are_caught() {
        let v = slices(chain(2).unwrap());
        let f = Presheaf::new(&v, PresheafKind::Unit).unwrap();
        assert!(!ninja_yoneda_check(&v, &f, Engine::Dropped).unwrap().bijective);
        assert!(!ninja_yoneda_with(&v, &f, Engine::Factored, |s, g| s.union(g)).unwrap().bijective);
    }

    #[test]
    fn associativity_examples() {
        let v = slices(minkowski_lattice(2, 3).unwrap());
        let p = |t: usize, x: usize| RegionSet::singleton(t * 3 + x);
        let rep = associativity_check(&v, p(1, 1), p(0, 0), p(0, 1), p(0, 2), Engine::Factored).unwrap();
        assert!(rep.bijective, "{rep:?}");
        assert_eq!((rep.classes, rep.target), (2, 2));

        let v = slices(chain(4).unwrap());
        let (a, b, c, d) = (r(&v, &["a"]), r(&v, &["b"]), r(&v, &["c"]), r(&v, &["d"]));
        let rep = associativity_check(&v, a, b, c, d, Engine::Factored).unwrap();
        assert!(rep.bijective, "{rep:?}");
        assert_eq!((rep.classes, rep.target), (4, 4));
        let rep = associativity_check(&v, b, b, b, b, Engine::Factored).unwrap();
        assert!(rep.bijective);
        assert_eq!(rep.target, 2 << v.through(b).len());
    }

    #[test]
    fn coherence_on_small_graphs() {
        for g in [chain(2).unwrap(), edgeless(2).unwrap()] {
            let v = slices(g);
            for rep in coherence_check(&v, CoherenceOptions::default()).unwrap() {
                assert!(rep.bijective, "{rep:?}");
                assert_eq!(rep.skipped, 0);
            }
        }
    }

    #[test]
    fn kernel_degenerate_and_mutated() {
        let v = slices(chain(3).unwrap());
        for rep in kernel_check(&v, RegionSet::EMPTY, KernelOptions::default()).unwrap() {
            assert!(rep.bijective, "{rep:?}");
        }
        let opts = KernelOptions {
            mutate_target: true,
            ..KernelOptions::default()
        };
        let reps = kernel_check(&v, r(&v, &["b"]), opts).unwrap();
        assert!(!reps[2].bijective);
    }

    #[test]
    fn kernel_example_on_chain4() {
        let v = slices(chain(4).unwrap());
        let (a, b, c) = (r(&v, &["a"]), r(&v, &["b"]), r(&v, &["c"]));
        let lambda = v.hom_of(b, a).union(&v.hom_of(b, c).intersection(&v.hom_of(b, c)));
        assert_eq!(lambda.len(), 4);
        for (policy, keep) in [
            (Policy::Strict, Keep::Through),
            (Policy::Clip, Keep::Through),
            (Policy::Strict, Keep::Hom),
        ] {
            let opts = KernelOptions {
                policy,
                keep,
                probe: Some((c, c, b)),
                ..KernelOptions::default()
            };
            let reps = kernel_check(&v, a, opts).unwrap();
            let verdicts: Vec<bool> = reps.iter().map(|r| r.bijective).collect();
            if keep == Keep::Hom {
                assert_eq!(verdicts, [true; 4]);
                assert_eq!((reps[1].classes, reps[2].classes), (16, 16));
            } else {
                assert_eq!(verdicts, [false, false, true, true], "{policy:?}");
            }
        }
    }
}
