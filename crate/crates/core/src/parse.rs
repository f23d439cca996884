//! Line-oriented spacetime description format.
//!
//! ```text
//! # comment
//! event a
//! event p0_1 t=0 x=1
//! edge a p0_1
//! slice S = a p0_1
//! slice Empty =
//! ```
//!
//! Events must be declared before edges or slices mention them.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::spacetime::{CausalGraph, Event, RegionSet, MAX_EVENTS};

#[derive(Clone, Debug)]
pub struct SpacetimeDoc {
    pub graph: CausalGraph,
    /// Named regions in declaration order.
    pub slices: Vec<(String, RegionSet)>,
}

impl SpacetimeDoc {
    pub fn slice(&self, name: &str) -> Option<RegionSet> {
        self.slices.iter().find(|(n, _)| n == name).map(|(_, r)| *r)
    }
}

fn parse_coord(line: usize, tok: &str, key: &str) -> Result<i64> {
    tok.strip_prefix(key).and_then(|v| v.parse().ok()).ok_or_else(|| Error::Parse {
        line,
        message: format!("expected `{key}<int>`, found `{tok}`"),
    })
}

pub fn parse_spacetime(text: &str) -> Result<SpacetimeDoc> {
    let mut events: Vec<Event> = Vec::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut slices: Vec<(String, RegionSet)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = content.split_whitespace().collect();
        let Some((&kw, rest)) = toks.split_first() else {
            continue;
        };
        let lookup = |label: &str| {
            ids.get(label).copied().ok_or_else(|| Error::UnknownEvent {
                line,
                label: label.to_string(),
            })
        };
        match kw {
            "event" => {
                let (label, coords) = match rest {
                    [label] => (*label, None),
                    [label, t, x] => (*label, Some((parse_coord(line, t, "t=")?, parse_coord(line, x, "x=")?))),
                    _ => {
                        return Err(Error::Parse {
                            line,
                            message: "expected `event <label> [t=<int> x=<int>]`".into(),
                        })
                    }
                };
                if ids.contains_key(label) {
                    return Err(Error::DuplicateLabel { line, label: label.into() });
                }
                if events.len() == MAX_EVENTS {
                    return Err(Error::CapExceeded {
                        what: "event",
                        limit: MAX_EVENTS,
                    });
                }
                ids.insert(label.to_string(), events.len());
                events.push(Event {
                    label: label.to_string(),
                    coords,
                });
            }
            "edge" => {
                let [src, dst] = rest else {
                    return Err(Error::Parse {
                        line,
                        message: "expected `edge <src> <dst>`".into(),
                    });
                };
                let (s, d) = (lookup(src)?, lookup(dst)?);
                if s == d {
                    return Err(Error::SelfEdge {
                        line,
                        label: src.to_string(),
                    });
                }
                edges.push((s, d));
            }
            "slice" => {
                let [name, "=", members @ ..] = rest else {
                    return Err(Error::Parse {
                        line,
                        message: "expected `slice <name> = <label> ...`".into(),
                    });
                };
                if slices.iter().any(|(n, _)| n == name) {
                    return Err(Error::Parse {
                        line,
                        message: format!("duplicate slice name `{name}`"),
                    });
                }
                let ids = members.iter().map(|m| lookup(m)).collect::<Result<Vec<_>>>()?;
                slices.push((name.to_string(), RegionSet::from_events(ids)));
            }
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown directive `{other}`"),
                })
            }
        }
    }
    let graph = CausalGraph::new(events, edges)?;
    Ok(SpacetimeDoc { graph, slices })
}

/// Renders a graph (and optional named regions) in the description format.
pub fn render_spacetime(graph: &CausalGraph, slices: &[(String, RegionSet)]) -> String {
    let mut out = String::new();
    for e in graph.events() {
        match e.coords {
            Some((t, x)) => writeln!(out, "event {} t={t} x={x}", e.label),
            None => writeln!(out, "event {}", e.label),
        }
        .unwrap();
    }
    for (s, d) in graph.edges() {
        writeln!(out, "edge {} {}", graph.label(s), graph.label(d)).unwrap();
    }
    for (name, r) in slices {
        let labels: Vec<&str> = r.events().map(|e| graph.label(e)).collect();
        if labels.is_empty() {
            writeln!(out, "slice {name} =").unwrap();
        } else {
            writeln!(out, "slice {name} = {}", labels.join(" ")).unwrap();
        }
    }
    out
}
