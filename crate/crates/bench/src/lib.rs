//! Shared fixtures for the engine benchmarks.

use std::sync::Arc;

use slicecat::spacetime::minkowski_lattice;
use slicecat::{Caps, Site};

/// Lattice site used across benchmarks.
pub fn lattice_site(times: usize, positions: usize) -> Arc<Site> {
    let g = minkowski_lattice(times, positions).expect("lattice within caps");
    Arc::new(Site::new(g, &Caps::default()).expect("curves within caps"))
}
