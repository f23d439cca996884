use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use slicecat::coend::{IsoReport, IsoWitness};
use slicecat::{CategoryView, LawReport, Site, Witness};

/// Bumped whenever a field is renamed, removed or changes meaning.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    /// The law should hold; a witness is a failure.
    Holds,
    /// A witness should exist; finding one is a pass.
    Witness,
    /// Informational; never affects the exit code.
    Info,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    /// Nothing was examined because every instance exceeded a cap.
    Skipped,
    Info,
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub check: String,
    pub expect: Expect,
    pub status: Outcome,
    pub examined: u64,
    pub skipped: u64,
    pub sampled: bool,
    pub complete: bool,
    pub detail: BTreeMap<String, String>,
    pub witness: Option<BTreeMap<String, String>>,
}

impl Record {
    pub fn new(check: impl Into<String>, expect: Expect, complete: bool) -> Self {
        Record {
            check: check.into(),
            expect,
            status: if expect == Expect::Info { Outcome::Info } else { Outcome::Pass },
            examined: 0,
            skipped: 0,
            sampled: false,
            complete,
            detail: BTreeMap::new(),
            witness: None,
        }
    }

    pub fn detail(mut self, key: &str, value: impl ToString) -> Self {
        self.detail.insert(key.into(), value.to_string());
        self
    }

    /// Sets the outcome from whether the property held and whether a witness
    /// was required (`guaranteed`) for witness-expected checks.
    pub fn settle(&mut self, held: bool, guaranteed: bool) {
        self.status = match self.expect {
            Expect::Info => Outcome::Info,
            Expect::Holds if !held => Outcome::Fail,
            Expect::Witness if held && guaranteed => Outcome::Fail,
            _ if self.examined == 0 && self.skipped > 0 => Outcome::Skipped,
            _ => Outcome::Pass,
        };
    }

    pub fn from_law(r: &LawReport, site: &Site, expect: Expect, guaranteed: bool, complete: bool) -> Self {
        let mut rec = Record::new(&r.check, expect, complete);
        rec.examined = r.examined;
        rec.sampled = r.sampled;
        rec.witness = r.witness.as_ref().map(|w| law_witness(w, site));
        rec.settle(r.holds(), guaranteed);
        rec
    }

    pub fn from_iso(r: &IsoReport, site: &Site, complete: bool, sampled: bool) -> Self {
        let mut rec = Record::new(&r.check, Expect::Holds, complete)
            .detail("forward", &r.forward)
            .detail("classes", r.classes)
            .detail("target", r.target);
        rec.examined = r.instances;
        rec.skipped = r.skipped;
        rec.sampled = sampled;
        rec.witness = r.witness.as_ref().map(|w| iso_witness(w, site));
        rec.settle(r.bijective, false);
        rec
    }
}

fn law_witness(w: &Witness, site: &Site) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    for (role, o) in &w.objects {
        m.insert(role.clone(), site.render_region(*o));
    }
    for (role, s) in &w.morphisms {
        m.insert(role.clone(), site.render_curves(s));
    }
    if let Some(z) = w.probe {
        m.insert("Z".into(), site.render_region(z));
    }
    if let Some(c) = &w.element {
        m.insert("C".into(), site.render_curves(c));
    }
    m.insert("lhs".into(), site.render_curves(&w.lhs));
    m.insert("rhs".into(), site.render_curves(&w.rhs));
    m
}

fn iso_witness(w: &IsoWitness, site: &Site) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    for (role, o) in &w.outer {
        m.insert(role.clone(), site.render_region(*o));
    }
    for (i, e) in w.elements.iter().enumerate() {
        let middle: Vec<String> = e.middle.iter().map(|&o| site.render_region(o)).collect();
        let values: Vec<String> = e.values.iter().map(|v| site.render_curves(v)).collect();
        m.insert(format!("element{i}"), format!("({}) @ {}", values.join(", "), middle.join(",")));
    }
    for (i, s) in w.images.iter().enumerate() {
        m.insert(format!("image{i}"), site.render_curves(s));
    }
    m.insert("reason".into(), w.reason.clone());
    m
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphSummary {
    pub events: usize,
    pub edges: usize,
    pub curves: usize,
    pub objects: Option<usize>,
    pub mode: Option<String>,
    pub complete: Option<bool>,
}

impl GraphSummary {
    pub fn of(site: &Site, view: Option<&CategoryView>) -> Self {
        GraphSummary {
            events: site.graph.len(),
            edges: site.graph.edge_count(),
            curves: site.universe.len(),
            objects: view.map(|v| v.objects().len()),
            mode: view.map(|v| format!("{:?}", v.mode()).to_lowercase()),
            complete: view.map(|v| v.is_complete()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub format: u32,
    pub tool: String,
    pub command: String,
    pub graph: GraphSummary,
    pub lines: Vec<String>,
    pub records: Vec<Record>,
    pub exit: i32,
}

impl Report {
    pub fn new(command: &str, graph: GraphSummary) -> Self {
        Report {
            format: FORMAT_VERSION,
            tool: format!("slicecat {}", env!("CARGO_PKG_VERSION")),
            command: command.into(),
            graph,
            lines: Vec::new(),
            records: Vec::new(),
            exit: 0,
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    /// 1 on any failure, else 3 when some check could not run at all.
    pub fn finish(mut self) -> Self {
        let st = |o| self.records.iter().any(|r| r.status == o);
        self.exit = if st(Outcome::Fail) {
            1
        } else if st(Outcome::Skipped) {
            3
        } else {
            0
        };
        self
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let g = &self.graph;
        writeln!(out, "{} {}", self.tool, self.command).unwrap();
        write!(out, "graph: events={} edges={} curves={}", g.events, g.edges, g.curves).unwrap();
        if let (Some(n), Some(m), Some(c)) = (g.objects, &g.mode, g.complete) {
            write!(out, " objects={n} mode={m} complete={c}").unwrap();
        }
        out.push('\n');
        for l in &self.lines {
            writeln!(out, "  {l}").unwrap();
        }
        for r in &self.records {
            let tag = match r.status {
                Outcome::Pass => "PASS",
                Outcome::Fail => "FAIL",
                Outcome::Skipped => "SKIP",
                Outcome::Info => "INFO",
            };
            write!(
                out,
                "{tag:<4}  {}  expect={} examined={}",
                r.check,
                format!("{:?}", r.expect).to_lowercase(),
                r.examined
            )
            .unwrap();
            if r.skipped > 0 {
                write!(out, " skipped={}", r.skipped).unwrap();
            }
            if r.sampled {
                out.push_str(" sampled");
            }
            if !r.complete {
                out.push_str(" partial-view");
            }
            out.push('\n');
            for (k, v) in &r.detail {
                writeln!(out, "      {k}: {v}").unwrap();
            }
            if let Some(w) = &r.witness {
                let parts: Vec<String> = w.iter().map(|(k, v)| format!("{k}={v}")).collect();
                writeln!(out, "      witness: {}", parts.join(" ")).unwrap();
            }
        }
        writeln!(out, "exit {}", self.exit).unwrap();
        out
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
