//! Causal-curve categories on finite event graphs: slices and regions with
//! curve-set morphisms, the intersection and union tensors, and a finite
//! coend engine for checking their coherence.

pub mod bits;
pub mod category;
pub mod coend;
pub mod error;
pub mod parse;
pub mod report;
pub mod spacetime;
pub mod tensors;

pub use bits::{Basis, CurveSet};
pub use category::{Budget, CategoryView, Mode, Morphism};
pub use error::{Error, Result};
pub use parse::{parse_spacetime, render_spacetime, SpacetimeDoc};
pub use report::{LawReport, Status, Witness};
pub use spacetime::{Caps, CausalGraph, Curve, CurveUniverse, Event, EventId, RegionSet, Site};
