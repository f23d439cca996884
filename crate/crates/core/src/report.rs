//! Check outcomes shared by the law, tensor and coend layers.

use serde::Serialize;

use crate::bits::CurveSet;
use crate::spacetime::{RegionSet, Site};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// The law held on every examined instance.
    Holds,
    /// An instance violates the law; the report carries a witness.
    Violated,
}

/// A concrete instance exhibiting a law failure or a strict inequality.
///
/// `lhs` and `rhs` are the two sides that differ; the replay functions in the
/// owning module recompute them from the other fields.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub objects: Vec<(String, RegionSet)>,
    pub morphisms: Vec<(String, CurveSet)>,
    pub probe: Option<RegionSet>,
    pub element: Option<CurveSet>,
    pub lhs: CurveSet,
    pub rhs: CurveSet,
}

impl Witness {
    pub fn object(&self, role: &str) -> Option<RegionSet> {
        self.objects.iter().find(|(r, _)| r == role).map(|(_, o)| *o)
    }

    pub fn morphism(&self, role: &str) -> Option<&CurveSet> {
        self.morphisms.iter().find(|(r, _)| r == role).map(|(_, m)| m)
    }

    pub fn render(&self, site: &Site) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (role, o) in &self.objects {
            parts.push(format!("{role}={}", site.render_region(*o)));
        }
        for (role, m) in &self.morphisms {
            parts.push(format!("{role}={}", site.render_curves(m)));
        }
        if let Some(z) = self.probe {
            parts.push(format!("Z={}", site.render_region(z)));
        }
        if let Some(c) = &self.element {
            parts.push(format!("C={}", site.render_curves(c)));
        }
        parts.push(format!("lhs={}", site.render_curves(&self.lhs)));
        parts.push(format!("rhs={}", site.render_curves(&self.rhs)));
        parts.join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub check: String,
    pub status: Status,
    /// Instances examined.
    pub examined: u64,
    /// Some instances were sampled rather than enumerated.
    pub sampled: bool,
    pub witness: Option<Witness>,
}

impl LawReport {
    pub fn new(check: impl Into<String>) -> Self {
        LawReport {
            check: check.into(),
            status: Status::Holds,
            examined: 0,
            sampled: false,
            witness: None,
        }
    }

    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }

    /// Records a violation; only the first witness in search order is kept.
    pub fn violate(&mut self, w: Witness) {
        if self.witness.is_none() {
            self.witness = Some(w);
        }
        self.status = Status::Violated;
    }
}
