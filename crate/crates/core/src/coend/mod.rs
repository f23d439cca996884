//! Finite coends of curve-set profunctors.
//!
//! A coend is described by a number of middle variables ranging over the
//! view's objects and a list of factors. Each factor is the powerset of a
//! basis that depends on the middle objects, and acts by intersection: a
//! covariant factor moves along `f: d → d'` by `∩ (f ∪ K)`, a contravariant
//! one along `f` by `∩ f`. The coend is the disjoint union of all factor
//! products, quotiented by the sliding relations.

mod checks;
mod quotient;

pub use checks::*;
pub use quotient::{Element, QuotientSet};

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::bits::{Basis, CurveSet};
use crate::category::CategoryView;
use crate::error::{Error, Result};
use crate::spacetime::RegionSet;
use quotient::{Layout, UnionFind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    Contra,
    Cov,
}

/// What to do when a covariant action leaves the target basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Policy {
    /// Report the instance as an error.
    Strict,
    /// Intersect the image with the target basis.
    Clip,
}

pub type BasisFn = Arc<dyn Fn(&[RegionSet]) -> CurveSet + Send + Sync>;

#[derive(Clone)]
pub struct Factor {
    pub label: String,
    pub basis: BasisFn,
    /// Middle variables the basis depends on, with the variance of each.
    pub vars: Vec<(usize, Variance)>,
    /// Extra curves kept by every covariant action (`C[A]` for `A ⩔ −`).
    pub keep: Option<CurveSet>,
    pub policy: Policy,
}

impl fmt::Debug for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Factor")
            .field("label", &self.label)
            .field("vars", &self.vars)
            .field("keep", &self.keep)
            .field("policy", &self.policy)
            .finish()
    }
}

impl Factor {
    pub fn new(
        label: impl Into<String>,
        vars: Vec<(usize, Variance)>,
        basis: impl Fn(&[RegionSet]) -> CurveSet + Send + Sync + 'static,
    ) -> Self {
        Factor {
            label: label.into(),
            basis: Arc::new(basis),
            vars,
            keep: None,
            policy: Policy::Strict,
        }
    }

    pub fn keeping(mut self, keep: CurveSet, policy: Policy) -> Self {
        self.keep = Some(keep);
        self.policy = policy;
        self
    }

    fn variance(&self, var: usize) -> Option<Variance> {
        self.vars.iter().find(|(v, _)| *v == var).map(|(_, s)| *s)
    }
}

#[derive(Clone, Debug)]
pub struct CoendSpec {
    pub vars: usize,
    pub factors: Vec<Factor>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// One product relation per generator pair, merged curve by curve.
    Factored,
    /// Every morphism and every element pair, explicitly.
    Exhaustive,
    /// No relations at all; for testing the checks themselves.
    Dropped,
}

/// A role-tagged factor at one generator: which side its bits come from.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    /// Covariant in the generator's variable.
    P,
    /// Contravariant in it.
    Q,
    /// Independent of it.
    O,
}

const MAX_FACTORS: usize = 8;
const NONE: u32 = u32::MAX;

/// One nontrivial curve coordinate of a generator pair.
#[derive(Default)]
struct Coord {
    bits_l: [u32; MAX_FACTORS],
    bits_r: [u32; MAX_FACTORS],
    kl: usize,
    kr: usize,
    /// Start of this coordinate's component ids in `Scratch::comps`: left codes, then right.
    comp_at: usize,
    radix: u64,
}

/// Buffers reused across generator pairs.
#[derive(Default)]
struct Scratch {
    coords: Vec<usize>,
    plan: Vec<Coord>,
    comps: Vec<u32>,
    cuf: Vec<u16>,
    edge: Vec<bool>,
    remap: Vec<u32>,
    first: Vec<(u32, u32)>,
    stamp: u32,
}

fn find(parent: &mut [u16], mut x: usize) -> usize {
    while parent[x] as usize != x {
        let p = parent[x] as usize;
        parent[x] = parent[p];
        x = p;
    }
    x
}

struct Ctx<'a> {
    view: &'a CategoryView,
    spec: &'a CoendSpec,
    layouts: Vec<Layout>,
    tuples: Vec<Vec<usize>>,
    offsets: Vec<usize>,
}

impl<'a> Ctx<'a> {
    #[inline(never)]
    fn new(view: &'a CategoryView, spec: &'a CoendSpec) -> Result<Self> {
        let n = view.objects().len();
        let count = n.checked_pow(spec.vars as u32).unwrap_or(usize::MAX);
        if count > view.caps().elements {
            return Err(Error::CapExceeded {
                what: "coend element",
                limit: view.caps().elements,
            });
        }
        let mut tuples = Vec::with_capacity(count);
        for k in 0..count {
            let mut t = vec![0; spec.vars];
            let mut r = k;
            for slot in t.iter_mut().rev() {
                *slot = r % n;
                r /= n;
            }
            tuples.push(t);
        }
        let mut layouts = Vec::with_capacity(count);
        let mut offsets = Vec::with_capacity(count + 1);
        let mut total = 0usize;
        for t in &tuples {
            let objs: Vec<RegionSet> = t.iter().map(|&i| view.objects()[i]).collect();
            let bases: Vec<CurveSet> = spec.factors.iter().map(|f| (f.basis)(&objs)).collect();
            let layout = Layout::new(objs, bases).ok_or(Error::CapExceeded {
                what: "coend element",
                limit: view.caps().elements,
            })?;
            offsets.push(total);
            total = total.saturating_add(layout.size());
            if total > view.caps().elements {
                return Err(Error::CapExceeded {
                    what: "coend element",
                    limit: view.caps().elements,
                });
            }
            layouts.push(layout);
        }
        offsets.push(total);
        Ok(Ctx {
            view,
            spec,
            layouts,
            tuples,
            offsets,
        })
    }

    fn roles(&self, var: usize) -> Vec<Role> {
        self.spec
            .factors
            .iter()
            .map(|f| match f.variance(var) {
                Some(Variance::Cov) => Role::P,
                Some(Variance::Contra) => Role::Q,
                None => Role::O,
            })
            .collect()
    }

    fn ill_typed(&self, j: usize, curve: usize, from: usize, to: usize) -> Error {
        let site = self.view.site();
        let show = |t: usize| {
            self.layouts[t]
                .objects
                .iter()
                .map(|&o| site.render_region(o))
                .collect::<Vec<_>>()
                .join(",")
        };
        Error::IllTyped(format!(
            "factor {} sends curve {} from ({}) outside its basis at ({})",
            self.spec.factors[j].label,
            site.universe.curve(curve).render(&site.graph),
            show(from),
            show(to)
        ))
    }

    /// Generator pairs `(R, L)`: tuples differing only in `var`, with
    /// `R[var] = d`, `L[var] = d'` for every `d, d'`.
    fn pairs(&self, var: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.view.objects().len();
        let stride = n.pow((self.spec.vars - 1 - var) as u32);
        (0..self.tuples.len()).flat_map(move |r| {
            let base = r - self.tuples[r][var] * stride;
            (0..n).map(move |d2| (r, base + d2 * stride))
        })
    }

    fn factored(&self, uf: &mut UnionFind, vars: &[usize]) -> Result<u64> {
        if self.spec.factors.len() > MAX_FACTORS {
            return Err(Error::CapExceeded {
                what: "coend factor",
                limit: MAX_FACTORS,
            });
        }
        let mut relations = 0u64;
        let mut scratch = Scratch::default();
        for &var in vars {
            let roles = self.roles(var);
            for (r, l) in self.pairs(var) {
                let (d, d2) = (self.tuples[r][var], self.tuples[l][var]);
                let hom = self.view.hom(d, d2);
                relations += 1;
                self.merge_product(uf, &mut scratch, &roles, r, l, hom)?;
            }
        }
        Ok(relations)
    }

    /// Merges the classes generated by every `f ⊆ hom` between tuples `r` and `l`.
    ///
    /// The union over `f` of the product relations is itself a product over
    /// curves, so the components of the relation graph are products of
    /// per-curve components; nodes are grouped by that signature.
    #[inline(never)]
    fn merge_product(&self, uf: &mut UnionFind, sc: &mut Scratch, roles: &[Role], r: usize, l: usize, hom: &CurveSet) -> Result<()> {
        let (lay_r, lay_l) = (&self.layouts[r], &self.layouts[l]);
        if lay_r.size() == 1 && lay_l.size() == 1 {
            // Only empty tuples on both sides, and f = ∅ relates them.
            uf.union(self.offsets[r], self.offsets[l]);
            return Ok(());
        }
        let nf = roles.len();
        sc.coords.clear();
        sc.coords.extend(lay_r.curves().chain(lay_l.curves()));
        sc.coords.sort_unstable();
        sc.coords.dedup();
        sc.plan.clear();
        sc.comps.clear();

        for ci in 0..sc.coords.len() {
            let g = sc.coords[ci];
            let mut c = Coord::default();
            let mut in_l = [false; MAX_FACTORS];
            let mut in_r = [false; MAX_FACTORS];
            // Position of factor j inside each side's code.
            let mut at_l = [0u8; MAX_FACTORS];
            let mut at_r = [0u8; MAX_FACTORS];
            for j in 0..nf {
                if let Some(b) = lay_l.bit(j, g) {
                    in_l[j] = true;
                    at_l[j] = c.kl as u8;
                    c.bits_l[c.kl] = b;
                    c.kl += 1;
                }
                if let Some(b) = lay_r.bit(j, g) {
                    in_r[j] = true;
                    at_r[j] = c.kr as u8;
                    c.bits_r[c.kr] = b;
                    c.kr += 1;
                }
            }
            let (nl, nr) = (1usize << c.kl, 1usize << c.kr);
            let codes = nl + nr;
            sc.cuf.clear();
            sc.cuf.extend(0..codes as u16);
            sc.edge.clear();
            sc.edge.resize(codes, false);

            // Free bits: P from R, Q from L, O from either (same presence).
            let mut free_at = [u8::MAX; MAX_FACTORS];
            let mut nfree = 0u8;
            for j in 0..nf {
                let present = match roles[j] {
                    Role::P => in_r[j],
                    Role::Q | Role::O => in_l[j],
                };
                if present {
                    free_at[j] = nfree;
                    nfree += 1;
                }
            }
            let f_options: &[bool] = if hom.contains(g) { &[false, true] } else { &[false] };
            for assign in 0u32..1 << nfree {
                let val = |j: usize| free_at[j] != u8::MAX && assign >> free_at[j] & 1 == 1;
                for &fg in f_options {
                    let mut left = 0usize;
                    let mut right = 0usize;
                    for j in 0..nf {
                        let (lb, rb) = match roles[j] {
                            Role::P => {
                                let p = val(j);
                                let keep = self.spec.factors[j].keep.as_ref().is_some_and(|k| k.contains(g));
                                let mut moved = p && (fg || keep);
                                if moved && !in_l[j] {
                                    match self.spec.factors[j].policy {
                                        Policy::Strict => return Err(self.ill_typed(j, g, r, l)),
                                        Policy::Clip => moved = false,
                                    }
                                }
                                (moved, p)
                            }
                            Role::Q => {
                                let q = val(j);
                                let moved = q && fg;
                                if moved && !in_r[j] {
                                    return Err(self.ill_typed(j, g, l, r));
                                }
                                (q, moved)
                            }
                            Role::O => (val(j), val(j)),
                        };
                        if lb {
                            left |= 1 << at_l[j];
                        }
                        if rb {
                            right |= 1 << at_r[j];
                        }
                    }
                    let (a, b) = (left, nl + right);
                    sc.edge[a] = true;
                    sc.edge[b] = true;
                    let (ra, rb) = (find(&mut sc.cuf, a), find(&mut sc.cuf, b));
                    if ra != rb {
                        sc.cuf[ra.max(rb)] = ra.min(rb) as u16;
                    }
                }
            }

            // Dense component ids; isolated codes get NONE.
            c.comp_at = sc.comps.len();
            sc.remap.clear();
            sc.remap.resize(codes, NONE);
            let mut dense = 0u32;
            let mut isolated = false;
            for code in 0..codes {
                if !sc.edge[code] {
                    isolated = true;
                    sc.comps.push(NONE);
                    continue;
                }
                let root = find(&mut sc.cuf, code);
                if sc.remap[root] == NONE {
                    sc.remap[root] = dense;
                    dense += 1;
                }
                sc.comps.push(sc.remap[root]);
            }
            c.radix = dense as u64;
            if dense == 1 && !isolated {
                sc.comps.truncate(c.comp_at);
            } else {
                sc.plan.push(c);
            }
        }

        let space = sc.plan.iter().try_fold(1u64, |acc, c| acc.checked_mul(c.radix));
        let plan = &sc.plan;
        let comps = &sc.comps;
        // Packed signature of a node, or None when some coordinate is isolated.
        let key = |mask: u64, left_side: bool| -> Option<u64> {
            let mut k = 0u64;
            for c in plan {
                let (bits, n, off) = if left_side {
                    (&c.bits_l, c.kl, 0)
                } else {
                    (&c.bits_r, c.kr, 1usize << c.kl)
                };
                let mut code = 0usize;
                for (i, &b) in bits[..n].iter().enumerate() {
                    code |= (((mask >> b) & 1) as usize) << i;
                }
                let comp = comps[c.comp_at + off + code];
                if comp == NONE {
                    return None;
                }
                k = k.wrapping_mul(c.radix).wrapping_add(comp as u64);
            }
            Some(k)
        };

        match space {
            Some(n) if n <= 1 << 20 => {
                sc.stamp = sc.stamp.wrapping_add(1);
                if sc.stamp == 0 {
                    sc.first.iter_mut().for_each(|e| e.0 = 0);
                    sc.stamp = 1;
                }
                if sc.first.len() < n as usize {
                    sc.first.resize(n as usize, (0, 0));
                }
                for (tuple, left_side) in [(l, true), (r, false)] {
                    let base = self.offsets[tuple];
                    for mask in 0..self.layouts[tuple].size() as u64 {
                        let Some(k) = key(mask, left_side) else { continue };
                        let id = base + mask as usize;
                        let slot = &mut sc.first[k as usize];
                        if slot.0 == sc.stamp {
                            uf.union(slot.1 as usize, id);
                        } else {
                            *slot = (sc.stamp, id as u32);
                        }
                    }
                }
            }
            _ => {
                // Signatures too wide to pack: key on the component vector.
                let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
                for (tuple, left_side) in [(l, true), (r, false)] {
                    let base = self.offsets[tuple];
                    'node: for mask in 0..self.layouts[tuple].size() as u64 {
                        let mut sig = Vec::with_capacity(plan.len());
                        for c in plan {
                            let (bits, n, off) = if left_side {
                                (&c.bits_l, c.kl, 0)
                            } else {
                                (&c.bits_r, c.kr, 1usize << c.kl)
                            };
                            let code = bits[..n]
                                .iter()
                                .enumerate()
                                .fold(0usize, |acc, (i, &b)| acc | (((mask >> b) & 1) as usize) << i);
                            match comps[c.comp_at + off + code] {
                                NONE => continue 'node,
                                comp => sig.push(comp),
                            }
                        }
                        let id = base + mask as usize;
                        match seen.get(&sig) {
                            Some(&other) => uf.union(other, id),
                            None => {
                                seen.insert(sig, id);
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn exhaustive(&self, uf: &mut UnionFind, vars: &[usize]) -> Result<u64> {
        let cap = self.view.caps().hom;
        let mut relations = 0u64;
        for &var in vars {
            let roles = self.roles(var);
            for (r, l) in self.pairs(var) {
                let (d, d2) = (self.tuples[r][var], self.tuples[l][var]);
                let hom = self.view.hom(d, d2);
                let fs = Basis::new(hom)
                    .filter(|b| b.len() <= cap)
                    .ok_or(Error::CapExceeded { what: "hom", limit: cap })?;
                let (lay_r, lay_l) = (&self.layouts[r], &self.layouts[l]);
                let q_bases: Vec<Basis> = (0..roles.len())
                    .filter(|&j| roles[j] == Role::Q)
                    .map(|j| Basis::new(&lay_l.bases[j]).expect("within layout"))
                    .collect();
                let q_count: u64 = q_bases.iter().map(|b| b.subset_count()).product();
                // Q values at R are the image of those at L, so only P and O bits vary.
                let free = (0..roles.len())
                    .filter(|&j| roles[j] != Role::Q)
                    .fold(0u64, |m, j| m | lay_r.factor_mask(j));
                let nodes: Vec<u64> = std::iter::successors(Some(0u64), |&m| {
                    let next = (m.wrapping_sub(free)) & free;
                    (next != 0).then_some(next)
                })
                .collect();
                for f in fs.subsets() {
                    for &node in &nodes {
                        let vals_r = lay_r.values(node);
                        for qm in 0..q_count {
                            relations += 1;
                            let mut qs = Vec::with_capacity(q_bases.len());
                            let mut rest = qm;
                            for b in &q_bases {
                                qs.push(b.subset(rest % b.subset_count()));
                                rest /= b.subset_count();
                            }
                            let mut left = Vec::with_capacity(roles.len());
                            let mut right = Vec::with_capacity(roles.len());
                            let mut qi = 0;
                            for (j, role) in roles.iter().enumerate() {
                                match role {
                                    Role::P => {
                                        let p = &vals_r[j];
                                        let mask = match &self.spec.factors[j].keep {
                                            Some(k) => f.union(k),
                                            None => f.clone(),
                                        };
                                        let mut moved = p.intersection(&mask);
                                        if !moved.is_subset(&lay_l.bases[j]) {
                                            match self.spec.factors[j].policy {
                                                Policy::Strict => {
                                                    let g = moved.difference(&lay_l.bases[j]).first().unwrap();
                                                    return Err(self.ill_typed(j, g, r, l));
                                                }
                                                Policy::Clip => moved = moved.intersection(&lay_l.bases[j]),
                                            }
                                        }
                                        left.push(moved);
                                        right.push(p.clone());
                                    }
                                    Role::Q => {
                                        let q = &qs[qi];
                                        qi += 1;
                                        let moved = q.intersection(&f);
                                        if !moved.is_subset(&lay_r.bases[j]) {
                                            let g = moved.difference(&lay_r.bases[j]).first().unwrap();
                                            return Err(self.ill_typed(j, g, l, r));
                                        }
                                        left.push(q.clone());
                                        right.push(moved);
                                    }
                                    Role::O => {
                                        left.push(vals_r[j].clone());
                                        right.push(vals_r[j].clone());
                                    }
                                }
                            }
                            let a = self.offsets[l] + lay_l.mask_of(&left).expect("typed left") as usize;
                            let b = self.offsets[r] + lay_r.mask_of(&right).expect("typed right") as usize;
                            uf.union(a, b);
                        }
                    }
                }
            }
        }
        Ok(relations)
    }
}

/// Computes the coend of `spec` over the view.
pub fn profunctor_compose(view: &CategoryView, spec: &CoendSpec, engine: Engine) -> Result<QuotientSet> {
    let all: Vec<usize> = (0..spec.vars).collect();
    profunctor_compose_vars(view, spec, engine, &all)
}

/// As [`profunctor_compose`], with sliding relations only for the listed
/// middle variables, applied in that order.
pub fn profunctor_compose_vars(view: &CategoryView, spec: &CoendSpec, engine: Engine, vars: &[usize]) -> Result<QuotientSet> {
    if let Some(&v) = vars.iter().find(|&&v| v >= spec.vars) {
        return Err(Error::NotInView(format!("middle variable {v}")));
    }
    let ctx = Ctx::new(view, spec)?;
    let total = *ctx.offsets.last().unwrap();
    let mut uf = UnionFind::new(total);
    let relations = match engine {
        Engine::Factored => ctx.factored(&mut uf, vars)?,
        Engine::Exhaustive => ctx.exhaustive(&mut uf, vars)?,
        Engine::Dropped => 0,
    };
    Ok(QuotientSet::new(ctx.layouts, ctx.offsets, uf, relations, view.is_complete()))
}
