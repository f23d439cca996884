use std::collections::BTreeMap;
use std::sync::Arc;

use slicecat::category::{check_category_laws, intersection_unit_gap, sweep_equalizers, union_bifunctoriality_gap, verify_products};
use slicecat::coend::{
    associativity_check, coherence_check, kernel_check, ninja_yoneda_check, outer_tuples, CoherenceOptions, Engine, IsoReport, Keep,
    KernelOptions, Policy,
};
use slicecat::spacetime::minkowski_lattice;
use slicecat::tensors::{interchange_sweep, partial_tensor, representability, Interchange, Oracle, Presheaf, PresheafKind, YonedaIndex};
use slicecat::{parse_spacetime, render_spacetime, Budget, Caps, CategoryView, Error, LawReport, Mode, RegionSet, Site, SpacetimeDoc};

use crate::report::{Expect, GraphSummary, Outcome, Record, Report};
use crate::{Check, Cli, Command, EngineArg, Format, Global, KeepArg, Kind, Law, PolicyArg};

enum Fail {
    Lib(Error),
    Input(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

impl Fail {
    fn code(&self) -> u8 {
        match self {
            Fail::Lib(e) if e.is_cap() => 3,
            Fail::Lib(Error::IllTyped(_)) => 1,
            _ => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Fail::Lib(e) => e.to_string(),
            Fail::Input(s) => s.clone(),
        }
    }
}

type Out<T> = std::result::Result<T, Fail>;

/// Runs a parsed command line; returns stdout text and the exit code.
pub fn run(cli: &Cli) -> (String, u8) {
    let result = match &cli.command {
        Command::Lattice { times, positions } => return lattice(*times, *positions),
        cmd => dispatch(cmd, &cli.global),
    };
    match result {
        Ok(report) => {
            let report = report.finish();
            let text = match cli.global.format {
                Format::Text => report.render_text(),
                Format::Json => report.render_json(),
            };
            (text, report.exit as u8)
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            (String::new(), f.code())
        }
    }
}

fn lattice(times: usize, positions: usize) -> (String, u8) {
    match minkowski_lattice(times, positions) {
        Ok(g) => {
            let layers: Vec<(String, RegionSet)> = (0..times)
                .map(|t| (format!("t{t}"), RegionSet::from_events(t * positions..(t + 1) * positions)))
                .collect();
            (render_spacetime(&g, &layers), 0)
        }
        Err(e) => {
            let f = Fail::Lib(e);
            eprintln!("error: {}", f.message());
            (String::new(), f.code())
        }
    }
}

struct Input<'a> {
    doc: SpacetimeDoc,
    site: Arc<Site>,
    caps: Caps,
    g: &'a Global,
}

impl<'a> Input<'a> {
    fn load(path: &std::path::Path, g: &'a Global) -> Out<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))?;
        let doc = parse_spacetime(&text)?;
        let caps = Caps {
            curves: g.curve_cap,
            objects: g.object_cap,
            hom: g.hom_cap,
            elements: g.element_cap,
        };
        let site = Arc::new(Site::new(doc.graph.clone(), &caps)?);
        Ok(Input { doc, site, caps, g })
    }

    /// A named slice, `{a,b}` or a bare event label.
    fn region(&self, name: &str) -> Out<RegionSet> {
        if let Some(r) = self.doc.slice(name) {
            return Ok(r);
        }
        let labels: Vec<&str> = match name.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
            Some(inner) => inner.split(',').map(str::trim).filter(|s| !s.is_empty()).collect(),
            None => vec![name],
        };
        self.site
            .region(&labels)
            .map_err(|_| Fail::Input(format!("unknown slice or event `{name}`")))
    }

    fn regions(&self, list: &str, n: usize) -> Out<Vec<RegionSet>> {
        let parts = split_top(list);
        if parts.len() != n {
            return Err(Fail::Input(format!("expected {n} comma-separated names, found `{list}`")));
        }
        parts.iter().map(|p| self.region(p)).collect()
    }

    fn view(&self, mode: Mode) -> Out<CategoryView> {
        let site = self.site.clone();
        let view = if self.g.objects == "all" {
            match mode {
                Mode::Slice => CategoryView::slices(site, self.caps)?,
                Mode::Space => CategoryView::regions(site, self.caps)?,
            }
        } else {
            let objs = split_top(&self.g.objects).iter().map(|p| self.region(p)).collect::<Out<Vec<_>>>()?;
            CategoryView::with_objects(site, objs, mode, self.caps)?
        };
        Ok(view)
    }

    fn show(&self, r: RegionSet) -> String {
        self.site.render_region(r)
    }

    fn four_chain(&self) -> bool {
        self.site.universe.curves().iter().any(|c| c.events().len() >= 4)
    }
}

/// Splits on commas outside braces.
fn split_top(s: &str) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut depth = 0;
    for ch in s.chars() {
        match ch {
            '{' => depth += 1,
            '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(String::new());
                continue;
            }
            _ => {}
        }
        out.last_mut().unwrap().push(ch);
    }
    out.into_iter().map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect()
}

fn dispatch(cmd: &Command, g: &Global) -> Out<Report> {
    match cmd {
        Command::Lattice { .. } => unreachable!("handled before loading"),
        Command::Curves { file } => curves(&Input::load(file, g)?),
        Command::Laws { file } => laws(&Input::load(file, g)?),
        Command::Tensor {
            file, wedge, x, y, probe, ..
        } => tensor(&Input::load(file, g)?, *wedge, x, y, probe.as_deref()),
        Command::Representability { file, pairs } => repr(&Input::load(file, g)?, pairs),
        Command::Coend { file, check, .. } => {
            let inp = Input::load(file, g)?;
            match check {
                Check::Ninja => ninja(&inp, cmd),
                Check::Assoc => assoc(&inp, cmd),
                Check::Coherence => coherence(&inp, cmd),
                Check::Kernel => kernel(&inp, cmd),
            }
        }
        Command::Witness { file, interchange } => witness(&Input::load(file, g)?, *interchange),
        Command::Logic { file, x, y, z } => logic(&Input::load(file, g)?, x, y, z),
    }
}

fn curves(inp: &Input) -> Out<Report> {
    let mut rep = Report::new("curves", GraphSummary::of(&inp.site, None));
    for (i, c) in inp.site.universe.curves().iter().enumerate() {
        rep.line(format!("{i:>4} {}", c.render(&inp.site.graph)));
    }
    Ok(rep)
}

/// A check that ran out of budget as a whole.
fn skipped(name: &str, e: &Error, complete: bool) -> Record {
    let mut r = Record::new(name, Expect::Holds, complete).detail("error", e);
    r.skipped = 1;
    r.status = Outcome::Skipped;
    r
}

fn laws(inp: &Input) -> Out<Report> {
    let view = inp.view(Mode::Slice)?;
    let site = &inp.site;
    let complete = view.is_complete();
    let mut rep = Report::new("laws", GraphSummary::of(site, Some(&view)));

    for r in check_category_laws(
        &view,
        Budget {
            per_tuple: 64,
            seed: inp.g.seed,
        },
    ) {
        rep.push(Record::from_law(&r, site, Expect::Holds, false, complete));
    }
    match sweep_equalizers(&view, true) {
        Ok(rs) => rs
            .iter()
            .for_each(|r| rep.push(Record::from_law(r, site, Expect::Holds, false, complete).detail("sweep", "until first witness"))),
        Err(e) if e.is_cap() => {
            rep.push(skipped("equalizer universality", &e, complete));
            rep.push(skipped("coequalizer universality", &e, complete));
        }
        Err(e) => return Err(e.into()),
    }

    let mut prod = LawReport::new("product universality");
    let mut coprod = LawReport::new("coproduct universality");
    let mut over = 0u64;
    let objs = view.objects();
    for (i, &x) in objs.iter().enumerate() {
        for &y in &objs[i + 1..] {
            if !x.is_disjoint(y) || !site.graph.jointly_spacelike(x, y) {
                continue;
            }
            match verify_products(&view, x, y) {
                Ok(rs) => {
                    for (acc, r) in [&mut prod, &mut coprod].into_iter().zip(rs) {
                        acc.examined += r.examined;
                        if let Some(w) = r.witness {
                            acc.violate(w);
                        }
                    }
                }
                Err(e) if e.is_cap() => over += 1,
                Err(e) => return Err(e.into()),
            }
        }
    }
    for r in [prod, coprod] {
        let mut rec = Record::from_law(&r, site, Expect::Holds, false, complete);
        rec.skipped = over;
        rec.settle(r.holds(), false);
        rep.push(rec);
    }

    let gap = union_bifunctoriality_gap(&view, 64, inp.g.seed)?;
    rep.push(Record::from_law(
        &gap,
        site,
        Expect::Witness,
        complete && inp.four_chain(),
        complete,
    ));
    let unit = intersection_unit_gap(&view);
    rep.push(Record::from_law(
        &unit,
        site,
        Expect::Witness,
        complete && site.graph.edge_count() > 0,
        complete,
    ));
    Ok(rep)
}

fn tensor(inp: &Input, wedge: bool, x: &str, y: &str, probe: Option<&str>) -> Out<Report> {
    let view = inp.view(Mode::Slice)?;
    let site = &inp.site;
    let complete = view.is_complete();
    let (x, y) = (inp.region(x)?, inp.region(y)?);
    let (f, law) = if wedge {
        (Presheaf::wedge(&view, x, y)?, Interchange::Wedge)
    } else {
        (Presheaf::vee(&view, x, y)?, Interchange::Vee)
    };
    let name = if wedge { "wedge" } else { "vee" };
    let mut rep = Report::new("tensor", GraphSummary::of(site, Some(&view)));
    rep.line(format!("{name}({}, {})", inp.show(x), inp.show(y)));
    let probes = match probe {
        Some(z) => vec![inp.region(z)?],
        None => view.objects().to_vec(),
    };
    for z in probes {
        rep.line(format!("Z={} basis={}", inp.show(z), site.render_curves(&f.kind.basis_on(site, z))));
    }
    rep.push(Record::from_law(&f.check_laws(&view), site, Expect::Holds, false, complete));
    if complete {
        let got = representability(&view, &f, Oracle::Fast)?;
        let want = partial_tensor(&view, x, y, law);
        let mut rec = Record::new("representability", Expect::Holds, complete)
            .detail("representable", got.map_or("none".into(), |r| inp.show(r)))
            .detail("jointly spacelike", site.graph.jointly_spacelike(x, y));
        rec.examined = 1;
        rec.settle(got == want, false);
        rep.push(rec);
    }
    Ok(rep)
}

fn show_opt(inp: &Input, r: Option<RegionSet>) -> String {
    r.map_or("none".into(), |r| inp.show(r))
}

fn repr(inp: &Input, pairs: &str) -> Out<Report> {
    let view = inp.view(Mode::Slice)?;
    if !view.is_complete() {
        return Err(Error::NotExhaustive("representability needs every slice of the graph".into()).into());
    }
    let site = &inp.site;
    let objs = view.objects().to_vec();
    let todo: Vec<(RegionSet, RegionSet)> = if pairs == "all" {
        objs.iter()
            .enumerate()
            .flat_map(|(i, &x)| objs[i..].iter().map(move |&y| (x, y)))
            .collect()
    } else {
        let r = inp.regions(pairs, 2)?;
        vec![(r[0], r[1])]
    };
    let mut rep = Report::new("representability", GraphSummary::of(site, Some(&view)));
    let mut recs = [
        Record::new("wedge dichotomy", Expect::Holds, true),
        Record::new("vee dichotomy", Expect::Holds, true),
        Record::new("oracle agreement", Expect::Holds, true),
    ];
    let mut ok = [true; 3];
    let index = YonedaIndex::new(&view)?;
    for (x, y) in todo {
        let mut cols = Vec::new();
        for (k, law) in [Interchange::Wedge, Interchange::Vee].into_iter().enumerate() {
            let f = match law {
                Interchange::Wedge => Presheaf::wedge(&view, x, y)?,
                _ => Presheaf::vee(&view, x, y)?,
            };
            let fast = index.lookup(&view, &f);
            let want = partial_tensor(&view, x, y, law);
            recs[k].examined += 1;
            if fast != want && ok[k] {
                ok[k] = false;
                recs[k].witness = Some(pair_witness(inp, x, y, fast, want));
            }
            match representability(&view, &f, Oracle::Slow) {
                Ok(slow) => {
                    recs[2].examined += 1;
                    if slow != fast && ok[2] {
                        ok[2] = false;
                        recs[2].witness = Some(pair_witness(inp, x, y, slow, fast));
                    }
                }
                Err(e) if e.is_cap() => recs[2].skipped += 1,
                Err(e) => return Err(e.into()),
            }
            cols.push(show_opt(inp, fast));
        }
        rep.line(format!("X={} Y={} wedge={} vee={}", inp.show(x), inp.show(y), cols[0], cols[1]));
    }
    for (rec, ok) in recs.iter_mut().zip(ok) {
        rec.settle(ok, false);
    }
    rep.records.extend(recs);

    let unit = representability(&view, &Presheaf::unit(&view), Oracle::Fast)?;
    let want = (site.graph.edge_count() == 0).then(|| site.graph.all_events());
    let mut rec = Record::new("unit representability", Expect::Holds, true).detail("representable", show_opt(inp, unit));
    rec.examined = 1;
    rec.settle(unit == want, false);
    rep.push(rec);
    Ok(rep)
}

fn pair_witness(inp: &Input, x: RegionSet, y: RegionSet, got: Option<RegionSet>, want: Option<RegionSet>) -> BTreeMap<String, String> {
    BTreeMap::from([
        ("X".to_string(), inp.show(x)),
        ("Y".to_string(), inp.show(y)),
        ("lhs".to_string(), show_opt(inp, got)),
        ("rhs".to_string(), show_opt(inp, want)),
    ])
}

struct CoendArgs {
    engine: Engine,
    sample: Option<(usize, u64)>,
}

fn coend_args(inp: &Input, cmd: &Command) -> CoendArgs {
    let Command::Coend { engine, sample, .. } = cmd else {
        unreachable!()
    };
    CoendArgs {
        engine: match engine {
            EngineArg::Factored => Engine::Factored,
            EngineArg::Exhaustive => Engine::Exhaustive,
        },
        sample: sample.map(|k| (k, inp.g.seed)),
    }
}

fn merge(acc: &mut Option<IsoReport>, r: IsoReport) {
    match acc {
        None => *acc = Some(r),
        Some(a) => {
            a.instances += r.instances;
            a.skipped += r.skipped;
            a.classes += r.classes;
            a.target += r.target;
            if let Some(w) = r.witness {
                a.fail(w);
            }
        }
    }
}

fn ninja(inp: &Input, cmd: &Command) -> Out<Report> {
    let Command::Coend { kind, .. } = cmd else { unreachable!() };
    let args = coend_args(inp, cmd);
    let view = inp.view(Mode::Slice)?;
    let objs = view.objects().to_vec();
    let mut pairs: Vec<(RegionSet, RegionSet)> = objs
        .iter()
        .enumerate()
        .flat_map(|(i, &x)| objs[i..].iter().map(move |&y| (x, y)))
        .collect();
    if let Some((k, seed)) = args.sample {
        pairs = outer_tuples(&view, 2, Some((k, seed))).into_iter().map(|t| (t[0], t[1])).collect();
    }
    let mut rep = Report::new("coend ninja", GraphSummary::of(&inp.site, Some(&view)));
    let want = |k: Kind| *kind == Kind::All || *kind == k;
    let mut families: Vec<(&str, Vec<PresheafKind>)> = Vec::new();
    if want(Kind::Unit) {
        families.push(("ninja yoneda: unit", vec![PresheafKind::Unit]));
    }
    if want(Kind::Yoneda) {
        families.push((
            "ninja yoneda: representable",
            objs.iter().map(|&w| PresheafKind::Yoneda { w }).collect(),
        ));
    }
    if want(Kind::Wedge) {
        families.push((
            "ninja yoneda: wedge",
            pairs.iter().map(|&(x, y)| PresheafKind::Wedge { x, y }).collect(),
        ));
    }
    if want(Kind::Vee) {
        families.push((
            "ninja yoneda: vee",
            pairs.iter().map(|&(x, y)| PresheafKind::Vee { x, y }).collect(),
        ));
    }
    for (name, kinds) in families {
        let mut acc = None;
        for k in &kinds {
            let f = Presheaf::new(&view, *k)?;
            merge(&mut acc, ninja_yoneda_check(&view, &f, args.engine)?);
        }
        if let Some(mut r) = acc {
            r.check = name.into();
            let rec = Record::from_iso(&r, &inp.site, view.is_complete(), args.sample.is_some()).detail("presheaves", kinds.len());
            rep.push(rec);
        }
    }
    Ok(rep)
}

fn assoc(inp: &Input, cmd: &Command) -> Out<Report> {
    let Command::Coend { at, .. } = cmd else { unreachable!() };
    let args = coend_args(inp, cmd);
    let view = inp.view(Mode::Slice)?;
    let tuples = match at {
        Some(s) => vec![inp.regions(s, 4)?],
        None => outer_tuples(&view, 4, args.sample),
    };
    let mut acc = None;
    for t in &tuples {
        merge(&mut acc, associativity_check(&view, t[0], t[1], t[2], t[3], args.engine)?);
    }
    let mut rep = Report::new("coend assoc", GraphSummary::of(&inp.site, Some(&view)));
    if let Some(r) = acc {
        rep.push(Record::from_iso(&r, &inp.site, view.is_complete(), args.sample.is_some()));
    }
    Ok(rep)
}

fn coherence(inp: &Input, cmd: &Command) -> Out<Report> {
    let args = coend_args(inp, cmd);
    let view = inp.view(Mode::Slice)?;
    let mut rep = Report::new("coend coherence", GraphSummary::of(&inp.site, Some(&view)));
    let opts = CoherenceOptions {
        engine: args.engine,
        sample: args.sample,
    };
    for r in coherence_check(&view, opts)? {
        rep.push(Record::from_iso(&r, &inp.site, view.is_complete(), args.sample.is_some()));
    }
    Ok(rep)
}

fn kernel(inp: &Input, cmd: &Command) -> Out<Report> {
    let Command::Coend {
        a, probe, keep, policy, ..
    } = cmd
    else {
        unreachable!()
    };
    let args = coend_args(inp, cmd);
    let view = inp.view(Mode::Slice)?;
    let probe = match probe {
        Some(p) => {
            let r = inp.regions(p, 3)?;
            Some((r[0], r[1], r[2]))
        }
        None => None,
    };
    let opts = KernelOptions {
        engine: args.engine,
        policy: match policy {
            PolicyArg::Strict => Policy::Strict,
            PolicyArg::Clip => Policy::Clip,
        },
        sample: args.sample,
        probe,
        keep: match keep {
            KeepArg::Hom => Keep::Hom,
            KeepArg::Through => Keep::Through,
        },
        mutate_target: false,
    };
    let slices = match a {
        Some(name) => vec![inp.region(name)?],
        None => view.objects().to_vec(),
    };
    let mut accs: Vec<Option<IsoReport>> = Vec::new();
    for &s in &slices {
        for (i, r) in kernel_check(&view, s, opts)?.into_iter().enumerate() {
            if accs.len() <= i {
                accs.push(None);
            }
            merge(&mut accs[i], r);
        }
    }
    let mut rep = Report::new("coend kernel", GraphSummary::of(&inp.site, Some(&view)));
    for r in accs.into_iter().flatten() {
        let rec = Record::from_iso(&r, &inp.site, view.is_complete(), args.sample.is_some())
            .detail("slices", slices.len())
            .detail("keep", format!("{:?}", opts.keep).to_lowercase());
        rep.push(rec);
    }
    Ok(rep)
}

fn witness(inp: &Input, law: Law) -> Out<Report> {
    let (mode, il, name, expect) = match law {
        Law::Vee => (Mode::Slice, Interchange::Vee, "vee interchange", Expect::Witness),
        Law::Space => (Mode::Space, Interchange::SpaceUnion, "space union interchange", Expect::Witness),
        Law::Wedge => (Mode::Slice, Interchange::Wedge, "wedge interchange", Expect::Holds),
    };
    let view = inp.view(mode)?;
    let complete = view.is_complete();
    let mut rep = Report::new("witness", GraphSummary::of(&inp.site, Some(&view)));
    match interchange_sweep(&view, il, expect == Expect::Witness) {
        Ok(mut r) => {
            r.check = name.into();
            rep.push(Record::from_law(&r, &inp.site, expect, complete && inp.four_chain(), complete));
        }
        Err(e) if e.is_cap() => {
            let mut rec = skipped(name, &e, complete);
            rec.expect = expect;
            rep.push(rec);
        }
        Err(e) => return Err(e.into()),
    }
    Ok(rep)
}

/// `(t, positions)` when every event of `r` carries coordinates on one layer.
fn layer(site: &Site, r: RegionSet) -> Option<(i64, Vec<i64>)> {
    let coords: Vec<(i64, i64)> = r.events().map(|e| site.graph.events()[e].coords).collect::<Option<_>>()?;
    let t = coords.first()?.0;
    coords.iter().all(|c| c.0 == t).then(|| (t, coords.iter().map(|c| c.1).collect()))
}

fn fmt_layer(t: i64, xs: &[i64]) -> String {
    let xs: Vec<String> = xs.iter().map(i64::to_string).collect();
    format!("{{{t}}}x{{{}}}", xs.join(","))
}

fn logic(inp: &Input, x: &str, y: &str, z: &str) -> Out<Report> {
    let view = inp.view(Mode::Slice)?;
    let site = &inp.site;
    let complete = view.is_complete();
    let (x, y, z) = (inp.region(x)?, inp.region(y)?, inp.region(z)?);
    let mut rep = Report::new("logic", GraphSummary::of(site, Some(&view)));
    rep.line(format!("X={} Y={} Z={}", inp.show(x), inp.show(y), inp.show(z)));

    let mut reps = Vec::new();
    for (name, kind, law) in [
        ("wedge", PresheafKind::Wedge { x, y }, Interchange::Wedge),
        ("vee", PresheafKind::Vee { x, y }, Interchange::Vee),
    ] {
        let basis = kind.basis_on(site, z);
        rep.line(format!("{name}(Z) basis={}", site.render_curves(&basis)));
        let by = if complete {
            let r = representability(&view, &Presheaf::new(&view, kind)?, Oracle::Fast)?;
            rep.line(format!("{name} representable by {}", show_opt(inp, r)));
            Some(r)
        } else {
            None
        };
        let mut rec = Record::new(format!("{name} at probe"), Expect::Info, complete)
            .detail("basis", site.render_curves(&basis))
            .detail("size", basis.len());
        if let Some(r) = by {
            rec = rec
                .detail("representable", show_opt(inp, r))
                .detail("expected", show_opt(inp, partial_tensor(&view, x, y, law)));
        }
        rec.examined = 1;
        rep.push(rec);
        reps.push(by);
    }

    if let (Some((t1, p)), Some((t2, q))) = (layer(site, x), layer(site, y)) {
        if t1 == t2 {
            let meet: Vec<i64> = p.iter().copied().filter(|v| q.contains(v)).collect();
            let mut join: Vec<i64> = p.iter().chain(&q).copied().collect();
            join.sort();
            join.dedup();
            rep.line(format!("X={} Y={}", fmt_layer(t1, &p), fmt_layer(t2, &q)));
            rep.line(format!("wedge ~ {}  vee ~ {}", fmt_layer(t1, &meet), fmt_layer(t1, &join)));
            if let [Some(w), Some(v)] = reps[..] {
                let at = |xs: &[i64]| {
                    RegionSet::from_events(
                        site.graph
                            .events()
                            .iter()
                            .enumerate()
                            .filter(|(_, e)| matches!(e.coords, Some((t, p)) if t == t1 && xs.contains(&p)))
                            .map(|(i, _)| i),
                    )
                };
                let mut rec = Record::new("same-layer reading", Expect::Holds, complete);
                rec.examined = 2;
                rec.settle(w == Some(at(&meet)) && v == Some(at(&join)), false);
                rep.push(rec);
            }
        } else {
            rep.line(format!("X at t={t1}, Y at t={t2}: wedge reads both, in causal order, through Z"));
        }
    }
    Ok(rep)
}
