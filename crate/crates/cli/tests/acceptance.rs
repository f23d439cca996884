//! One line per acceptance criterion. Run a subset with
//! `cargo test -p slicecat-cli --test acceptance -- 3 7`.

use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use slicecat::category::{
    check_category_laws, intersection_unit_gap, replay_union_gap, sweep_equalizers, union_bifunctoriality_gap, verify_products,
};
use slicecat::coend::{
    coherence_check, kernel_check, ninja_yoneda_check, ninja_yoneda_with, CoherenceOptions, Engine, IsoReport, KernelOptions,
};
use slicecat::spacetime::{chain, cycle, edgeless, from_edges, minkowski_lattice};
use slicecat::tensors::{
    interchange_sweep, partial_tensor, replay_interchange, representability, Interchange, Oracle, Presheaf, PresheafKind, YonedaIndex,
};
use slicecat::{Budget, Caps, CategoryView, CausalGraph, CurveSet, LawReport, RegionSet, Site, Witness};

const BUDGET: Duration = Duration::from_secs(60);

type Verdict = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Verdict);
type Shaped = (&'static str, usize, &'static [(usize, usize)]);

fn slices_with(g: CausalGraph, caps: Caps) -> CategoryView {
    CategoryView::slices(Arc::new(Site::new(g, &caps).unwrap()), caps).unwrap()
}

fn slices(g: CausalGraph) -> CategoryView {
    slices_with(g, Caps::default())
}

fn chain2() -> CausalGraph {
    chain(2).unwrap()
}
fn chain4() -> CausalGraph {
    chain(4).unwrap()
}
fn tri() -> CausalGraph {
    cycle(3).unwrap()
}
fn ml23() -> CausalGraph {
    minkowski_lattice(2, 3).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn law_ok(tag: &str, r: &LawReport, site: &Site) -> Result<(), String> {
    ensure(r.holds(), || {
        format!("{tag}: {} violated: {}", r.check, r.witness.as_ref().unwrap().render(site))
    })
}

fn iso_ok(tag: &str, r: &IsoReport) -> Result<(), String> {
    ensure(r.bijective, || {
        format!("{tag}: {} not bijective: {:?}", r.check, r.witness.as_ref().map(|w| &w.reason))
    })
}

fn c1() -> Verdict {
    let mut notes = Vec::new();
    // Every composable triple on the small graphs; ML23 samples its largest homs.
    for (tag, g, per_tuple) in [
        ("CHAIN2", chain2(), 1 << 18),
        ("CHAIN4", chain4(), 1 << 18),
        ("TRI", tri(), 1 << 18),
        ("ML23", ml23(), 1 << 12),
    ] {
        let view = slices(g);
        let reports = check_category_laws(&view, Budget { per_tuple, seed: 7 });
        let mut counts = Vec::new();
        for r in &reports {
            law_ok(tag, r, view.site())?;
            counts.push(format!("{}{}", r.examined, if r.sampled { "~" } else { "" }));
        }
        notes.push(format!("{tag} {}", counts.join("/")));
    }
    Ok(format!("assoc/unit/endo instances: {} (~ = sampled past budget)", notes.join(", ")))
}

fn c2() -> Verdict {
    let mut notes = Vec::new();
    let mut failure = None;
    for (tag, g) in [("CHAIN2", chain2()), ("CHAIN4", chain4())] {
        let view = slices(g);
        for r in sweep_equalizers(&view, false).map_err(|e| e.to_string())? {
            notes.push(format!("{tag} {} {}", r.check, r.examined));
            if failure.is_none() {
                if let Some(w) = &r.witness {
                    failure = Some(format!("{tag} {}: {}", r.check, w.render(view.site())));
                }
            }
        }
    }
    match failure {
        None => Ok(notes.join(", ")),
        Some(f) => Err(format!("universality fails in the discrete model; first witness {f}")),
    }
}

fn c3() -> Verdict {
    let view = slices(ml23());
    let objs = view.objects().to_vec();
    let (mut pairs, mut instances) = (0, 0);
    for (i, &x) in objs.iter().enumerate() {
        for &y in &objs[i + 1..] {
            if !x.is_disjoint(y) || !view.site().graph.jointly_spacelike(x, y) {
                continue;
            }
            pairs += 1;
            for r in verify_products(&view, x, y).map_err(|e| e.to_string())? {
                law_ok("ML23", &r, view.site())?;
                instances += r.examined;
            }
        }
    }
    Ok(format!("ML23: {pairs} disjoint jointly spacelike pairs, {instances} cones"))
}

fn c4() -> Verdict {
    let v4 = slices(chain4());
    let gap = union_bifunctoriality_gap(&v4, 256, 3).map_err(|e| e.to_string())?;
    let w = gap.witness.as_ref().ok_or("no union witness on CHAIN4")?;
    let (l, r) = replay_union_gap(w).ok_or("union witness incomplete")?;
    ensure(l == w.lhs && r == w.rhs && l != r, || "union witness does not replay".into())?;

    let s = v4.site();
    let known = Witness {
        objects: vec![],
        morphisms: vec![
            ("S".into(), s.curve_set(&[]).unwrap()),
            ("S'".into(), s.curves_through(s.region(&["b"]).unwrap(), s.region(&["c"]).unwrap())),
            ("T".into(), s.curves_through(s.region(&["c"]).unwrap(), s.region(&["d"]).unwrap())),
            ("T'".into(), s.curve_set(&[]).unwrap()),
        ],
        probe: None,
        element: None,
        lhs: s.curve_set(&[]).unwrap(),
        rhs: s.curve_set(&[]).unwrap(),
    };
    let (l, r) = replay_union_gap(&known).unwrap();
    let bcd = s.curve_set(&[&["b", "c", "d"]]).unwrap();
    ensure(bcd.is_subset(&l) && r.is_empty(), || {
        format!("known union witness: lhs={} rhs={}", s.render_curves(&l), s.render_curves(&r))
    })?;

    let v2 = slices(chain2());
    let unit = intersection_unit_gap(&v2);
    let w2 = unit.witness.as_ref().ok_or("no intersection-unit witness on CHAIN2")?;
    let s2 = v2.site();
    let ab = s2.curve_set(&[&["a", "b"]]).unwrap();
    ensure(w2.lhs == ab && w2.rhs.is_empty(), || format!("unit witness {}", w2.render(s2)))?;

    for n in 1..=4 {
        let ve = slices(edgeless(n).unwrap());
        let g = union_bifunctoriality_gap(&ve, 64, 3).map_err(|e| e.to_string())?;
        let u = intersection_unit_gap(&ve);
        ensure(g.holds() && u.holds(), || format!("edgeless({n}) produced a witness"))?;
    }
    Ok(format!(
        "CHAIN4 union: {}; CHAIN2 unit: {}; edgeless 1..4: none",
        w.render(s),
        w2.render(s2)
    ))
}

/// Graphs on at most eight events.
fn suite_graphs() -> Vec<(String, CausalGraph)> {
    let mut out: Vec<(String, CausalGraph)> = Vec::new();
    for n in 1..=8 {
        out.push((format!("edgeless{n}"), edgeless(n).unwrap()));
    }
    for n in 2..=8 {
        out.push((format!("chain{n}"), chain(n).unwrap()));
        out.push((format!("cycle{n}"), cycle(n).unwrap()));
    }
    for (t, w) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2)] {
        out.push((format!("lattice{t}x{w}"), minkowski_lattice(t, w).unwrap()));
    }
    let shaped: [Shaped; 9] = [
        ("diamond", 4, &[(0, 1), (0, 2), (1, 3), (2, 3)]),
        ("fork", 3, &[(0, 1), (0, 2)]),
        ("join", 3, &[(1, 0), (2, 0)]),
        ("two-edges", 4, &[(0, 1), (2, 3)]),
        ("chord", 3, &[(0, 1), (1, 2), (0, 2)]),
        ("two-cycle", 2, &[(0, 1), (1, 0)]),
        ("tree7", 7, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]),
        ("lasso", 5, &[(0, 1), (1, 2), (2, 3), (3, 1), (3, 4)]),
        ("zigzag", 6, &[(0, 3), (1, 3), (1, 4), (2, 4), (2, 5)]),
    ];
    for (name, n, edges) in shaped {
        out.push((name.into(), from_edges(n, edges).unwrap()));
    }
    out
}

fn c5() -> Verdict {
    let graphs = suite_graphs();
    let (mut pairs, mut slow_runs, mut slow_skips) = (0u64, 0u64, 0u64);
    for (name, g) in &graphs {
        let view = slices(g.clone());
        let objs = view.objects().to_vec();
        let index = YonedaIndex::new(&view).map_err(|e| e.to_string())?;
        // The slow oracle on edgeless8 (256 slices) alone costs ~30s.
        let run_slow = objs.len() <= 128;
        for (i, &x) in objs.iter().enumerate() {
            for &y in &objs[i..] {
                pairs += 1;
                for law in [Interchange::Wedge, Interchange::Vee] {
                    let kind = match law {
                        Interchange::Wedge => PresheafKind::Wedge { x, y },
                        _ => PresheafKind::Vee { x, y },
                    };
                    let f = Presheaf::new(&view, kind).unwrap();
                    let fast = index.lookup(&view, &f);
                    let want = partial_tensor(&view, x, y, law);
                    let s = view.site();
                    ensure(fast == want, || {
                        format!(
                            "{name} {law:?} X={} Y={}: got {:?}, want {:?}",
                            s.render_region(x),
                            s.render_region(y),
                            fast.map(|r| s.render_region(r)),
                            want.map(|r| s.render_region(r))
                        )
                    })?;
                    if !run_slow {
                        slow_skips += 1;
                        continue;
                    }
                    match representability(&view, &f, Oracle::Slow) {
                        Ok(slow) => {
                            slow_runs += 1;
                            ensure(slow == fast, || {
                                format!(
                                    "{name} {law:?}: oracles disagree at X={} Y={}",
                                    s.render_region(x),
                                    s.render_region(y)
                                )
                            })?;
                        }
                        Err(e) if e.is_cap() => slow_skips += 1,
                        Err(e) => return Err(e.to_string()),
                    }
                }
            }
        }
    }
    Ok(format!(
        "{} graphs, {pairs} slice pairs; slow oracle agreed on {slow_runs}, not run on {slow_skips}",
        graphs.len()
    ))
}

fn c6() -> Verdict {
    let graphs = suite_graphs();
    let mut edged = 0;
    for (name, g) in &graphs {
        let view = slices(g.clone());
        let got = representability(&view, &Presheaf::unit(&view), Oracle::Fast).map_err(|e| e.to_string())?;
        let want = (g.edge_count() == 0).then(|| g.all_events());
        ensure(got == want, || format!("{name}: unit representable by {got:?}, want {want:?}"))?;
        edged += usize::from(g.edge_count() > 0);
    }
    Ok(format!(
        "{edged} graphs with edges: none; {} edgeless: all events",
        graphs.len() - edged
    ))
}

fn c7() -> Verdict {
    let mut examined = Vec::new();
    let ml22 = minkowski_lattice(2, 2).unwrap();
    for (tag, g) in [("CHAIN2", chain2()), ("CHAIN4", chain4()), ("TRI", tri()), ("ML22", ml22)] {
        let view = slices(g);
        let r = interchange_sweep(&view, Interchange::Wedge, false).map_err(|e| e.to_string())?;
        law_ok(tag, &r, view.site())?;
        examined.push(format!("{tag} {}", r.examined));
    }

    let view = slices(chain4());
    let s = view.site().clone();
    let reg = |l: &str| s.region(&[l]).unwrap();
    let empty = s.curve_set(&[]).unwrap();
    let found = interchange_sweep(&view, Interchange::Vee, true).map_err(|e| e.to_string())?;
    let w = found.witness.ok_or("no vee witness on CHAIN4")?;
    ensure(
        replay_interchange(&view, Interchange::Vee, &w) == Some((w.lhs.clone(), w.rhs.clone())),
        || "vee witness does not replay".into(),
    )?;

    let four = |s_: CurveSet, t_: CurveSet, probe, element, lhs, rhs| Witness {
        objects: vec![
            ("X".into(), reg("a")),
            ("X'".into(), reg("b")),
            ("Y".into(), reg("c")),
            ("Y'".into(), reg("d")),
        ],
        morphisms: vec![("S".into(), s_), ("T".into(), t_)],
        probe,
        element,
        lhs,
        rhs,
    };
    let bc = s.curve_set(&[&["b", "c"]]).unwrap();
    let vee_doc = four(
        empty.clone(),
        empty.clone(),
        Some(reg("b")),
        Some(bc.clone()),
        empty.clone(),
        bc.clone(),
    );
    let got = replay_interchange(&view, Interchange::Vee, &vee_doc);
    ensure(got == Some((empty.clone(), bc.clone())), || {
        format!("known vee witness replays to {got:?}")
    })?;

    let space = CategoryView::regions(s.clone(), Caps::default()).unwrap();
    let found = interchange_sweep(&space, Interchange::SpaceUnion, true).map_err(|e| e.to_string())?;
    let ws = found.witness.ok_or("no space witness on CHAIN4")?;
    ensure(
        replay_interchange(&space, Interchange::SpaceUnion, &ws) == Some((ws.lhs.clone(), ws.rhs.clone())),
        || "space witness does not replay".into(),
    )?;
    let (k1, k2) = replay_interchange(
        &space,
        Interchange::SpaceUnion,
        &four(empty.clone(), empty.clone(), None, None, empty.clone(), empty.clone()),
    )
    .unwrap();
    let abcd = s.curve_set(&[&["a", "b", "c", "d"]]).unwrap();
    ensure(k1 == abcd && bc.is_subset(&k2) && k1 != k2, || {
        format!("known space witness: {} vs {}", s.render_curves(&k1), s.render_curves(&k2))
    })?;

    Ok(format!(
        "wedge holds ({}); vee witness {}; space witness {}; known witnesses replay",
        examined.join(", "),
        w.render(&s),
        ws.render(&s)
    ))
}

fn ninja_all(view: &CategoryView, engine: Engine, kinds: &[PresheafKind]) -> Result<(u64, u64), String> {
    let (mut inst, mut skipped) = (0, 0);
    for &k in kinds {
        let f = Presheaf::new(view, k).map_err(|e| e.to_string())?;
        let r = ninja_yoneda_check(view, &f, engine).map_err(|e| e.to_string())?;
        iso_ok(&format!("{k:?}"), &r)?;
        inst += r.instances;
        skipped += r.skipped;
    }
    Ok((inst, skipped))
}

fn every_kind(view: &CategoryView) -> Vec<PresheafKind> {
    let objs = view.objects();
    let mut kinds = vec![PresheafKind::Unit];
    kinds.extend(objs.iter().map(|&w| PresheafKind::Yoneda { w }));
    for (i, &x) in objs.iter().enumerate() {
        for &y in &objs[i..] {
            kinds.push(PresheafKind::Wedge { x, y });
            kinds.push(PresheafKind::Vee { x, y });
        }
    }
    kinds
}

fn c8() -> Verdict {
    let mut notes = Vec::new();
    let v2 = slices(chain2());
    for engine in [Engine::Factored, Engine::Exhaustive] {
        let (i, _) = ninja_all(&v2, engine, &every_kind(&v2))?;
        notes.push(format!("CHAIN2 {engine:?} {i}"));
    }
    let vt = slices(tri());
    let (i, _) = ninja_all(&vt, Engine::Factored, &every_kind(&vt))?;
    notes.push(format!("TRI {i}"));

    // Every presheaf kind on ML23; wedge and vee on a fixed spread of pairs.
    let vm = slices_with(
        ml23(),
        Caps {
            elements: 1 << 22,
            ..Caps::default()
        },
    );
    let objs = vm.objects().to_vec();
    let mut kinds = vec![PresheafKind::Unit];
    kinds.extend(objs.iter().map(|&w| PresheafKind::Yoneda { w }));
    let n = objs.len();
    for k in 0..16 {
        let (x, y) = (objs[k % n], objs[(3 * k + 2) % n]);
        kinds.push(PresheafKind::Wedge { x, y });
        kinds.push(PresheafKind::Vee { x, y });
    }
    let (i, sk) = ninja_all(&vm, Engine::Factored, &kinds)?;
    ensure(sk == 0, || format!("ML23: {sk} instances over cap"))?;
    notes.push(format!("ML23 {} presheaves {i}", kinds.len()));

    let f = Presheaf::wedge(&v2, v2.objects()[1], v2.objects()[1]).unwrap();
    let dropped = ninja_yoneda_check(&v2, &f, Engine::Dropped).map_err(|e| e.to_string())?;
    let swapped = ninja_yoneda_with(&v2, &f, Engine::Factored, |s, g| s.union(g)).map_err(|e| e.to_string())?;
    ensure(!dropped.bijective && !swapped.bijective, || "a mutation went undetected".into())?;
    notes.push("mutations caught".into());
    Ok(notes.join(", "))
}

fn coherence_ok(tag: &str, view: &CategoryView, sample: Option<(usize, u64)>) -> Result<String, String> {
    let reports = coherence_check(
        view,
        CoherenceOptions {
            engine: Engine::Factored,
            sample,
        },
    )
    .map_err(|e| e.to_string())?;
    let mut counts = Vec::new();
    for r in &reports {
        iso_ok(tag, r)?;
        counts.push(if r.skipped > 0 {
            format!("{}+{}skip", r.instances, r.skipped)
        } else {
            r.instances.to_string()
        });
    }
    Ok(format!("{tag} {}", counts.join("/")))
}

fn c9() -> Verdict {
    let a = coherence_ok("CHAIN2", &slices(chain2()), None)?;
    let b = coherence_ok("edgeless3", &slices(edgeless(3).unwrap()), None)?;
    let c = coherence_ok("CHAIN4 sampled", &slices(chain4()), Some((60, 11)))?;
    Ok(format!("assoc/pentagon/triangle/units/symmetry: {a}; {b}; {c}"))
}

fn kernel_ok(tag: &str, view: &CategoryView, sample: Option<(usize, u64)>) -> Result<String, String> {
    let (mut inst, mut skipped) = (0, 0);
    let objs = view.objects().to_vec();
    ensure(objs.contains(&RegionSet::EMPTY), || format!("{tag}: no empty slice"))?;
    for (k, &a) in objs.iter().enumerate() {
        let opts = KernelOptions {
            sample: sample.map(|(n, seed)| (n, seed + k as u64)),
            ..KernelOptions::default()
        };
        for r in kernel_check(view, a, opts).map_err(|e| e.to_string())? {
            iso_ok(&format!("{tag} A={}", view.site().render_region(a)), &r)?;
            inst += r.instances;
            skipped += r.skipped;
        }
    }
    Ok(format!("{tag}: {} slices, {inst} instances, {skipped} over cap", objs.len()))
}

fn c10() -> Verdict {
    let t = Instant::now();
    let a = kernel_ok("CHAIN4", &slices(chain4()), None)?;
    let split = t.elapsed().as_secs_f64();
    let vm = slices_with(
        ml23(),
        Caps {
            elements: 1 << 19,
            ..Caps::default()
        },
    );
    let b = kernel_ok("ML23 sampled", &vm, Some((2, 5)))?;
    Ok(format!("{a} ({split:.1}s); {b}"))
}

fn suite_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("suite")
}

fn cli(args: &[&str]) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_slicecat"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.stdout, out.status.code().unwrap_or(-1))
}

fn c11() -> Verdict {
    let dir = suite_dir();
    let files = ["chain2", "chain4", "tri", "edge3", "ml23"];
    let mut runs = 0;
    for f in files {
        let path = dir.join(format!("{f}.st"));
        let p = path.to_str().unwrap();
        let commands: Vec<Vec<&str>> = vec![
            vec!["curves", p],
            vec!["laws", p],
            vec!["tensor", p, "--wedge", "{}", "{}"],
            vec!["tensor", p, "--vee", "{}", "{}"],
            vec!["representability", p],
            vec!["coend", p, "--check", "ninja", "--sample", "2"],
            vec!["coend", p, "--check", "assoc", "--sample", "3"],
            vec!["coend", p, "--check", "coherence", "--sample", "2"],
            vec!["coend", p, "--check", "kernel", "--a", "{}", "--sample", "2"],
            vec!["witness", p, "--interchange", "vee"],
            vec!["witness", p, "--interchange", "space"],
            vec!["logic", p, "{}", "{}", "{}"],
        ];
        for cmd in commands {
            for format in ["text", "json"] {
                let mut args = vec!["--format", format, "--seed", "9"];
                args.extend(&cmd);
                let first = cli(&args);
                let second = cli(&args);
                ensure(first == second, || format!("{f}: `{}` differs between runs", cmd.join(" ")))?;
                runs += 2;
            }
        }
    }
    let (_, l) = cli(&["lattice", "2", "3"]);

    let chain2 = dir.join("chain2.st");
    let chain4 = dir.join("chain4.st");
    let c2 = chain2.to_str().unwrap();
    let c4 = chain4.to_str().unwrap();
    let tmp = std::env::temp_dir().join(format!("slicecat-bad-{}.st", std::process::id()));
    std::fs::write(&tmp, "event a\nedge a b\n").unwrap();
    let cases: [(&[&str], i32); 7] = [
        (&["representability", c2], 0),
        (&["witness", c4, "--interchange", "vee"], 0),
        (&["coend", c4, "--check", "kernel", "--a", "B", "--keep", "through"], 1),
        (&["laws", c2], 1),
        (&["curves", tmp.to_str().unwrap()], 2),
        (&["tensor", c2, "--wedge", "A", "nowhere"], 2),
        (&["curves", c4, "--curve-cap", "3"], 3),
    ];
    let mut codes = vec![l];
    for (args, want) in cases {
        let (_, code) = cli(args);
        ensure(code == want, || format!("`{}` exited {code}, want {want}", args.join(" ")))?;
        codes.push(code);
    }
    let _ = std::fs::remove_file(&tmp);
    ensure(l == 0, || "lattice failed".into())?;
    Ok(format!("{runs} runs byte-identical; exit codes {codes:?}"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "category laws", c1),
        (2, "(co)equalizer universality", c2),
        (3, "(co)products", c3),
        (4, "non-monoidality witnesses", c4),
        (5, "representability dichotomy", c5),
        (6, "unit non-representability", c6),
        (7, "wedge interchange holds, vee and space fail", c7),
        (8, "coend engine and ninja yoneda", c8),
        (9, "promonoidal coherence", c9),
        (10, "kernel bijections", c10),
        (11, "cli determinism and exit codes", c11),
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    for (n, name, run) in criteria {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let verdict = run();
        let took = start.elapsed();
        let slow = if took > BUDGET { " OVER BUDGET" } else { "" };
        match verdict {
            Ok(note) if took <= BUDGET => println!("criterion {n:>2} PASS {name} [{:.1}s]: {note}", took.as_secs_f64()),
            Ok(note) => {
                println!("criterion {n:>2} FAIL {name} [{:.1}s{slow}]: {note}", took.as_secs_f64());
                failed.push(n);
            }
            Err(why) => {
                println!("criterion {n:>2} FAIL {name} [{:.1}s{slow}]: {why}", took.as_secs_f64());
                failed.push(n);
            }
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
