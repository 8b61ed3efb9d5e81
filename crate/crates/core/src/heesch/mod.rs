//! Layers, Heesch numbers and the bounded-radius surround search.
//!
//! Layer counting: `N` is the number of complete layers around the central
//! copy, so a tile that cannot be surrounded once has Heesch number 0.

mod cert;
mod periodic;
mod search;

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::group::{Element, ElementSet, GroupSpec};
use crate::tiling::{placement, PartialTiling, Tile};

pub use cert::{verify_certificate, HeeschCertificate, Verdict, Verification, CERT_FORMAT};
pub use periodic::find_periodic_tiling;
pub use search::{heesch_ge, Exhausted, GeOutcome, SearchOptions, SearchStats};

/// `{ x not in covered : x has a neighbour in covered }`.
pub fn frontier(spec: &GroupSpec, covered: &ElementSet) -> Result<ElementSet> {
    if covered.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut out = ElementSet::new();
    for x in covered {
        for y in spec.neighbors(x) {
            if !covered.contains(&y) {
                out.insert(y);
            }
        }
    }
    Ok(out)
}

/// Center sets `C_0 = {1}, C_1, ..., C_N`, each in shortlex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerDecomposition {
    pub layers: Vec<Vec<Element>>,
}

impl LayerDecomposition {
    /// Number of complete layers around `C_0`.
    pub fn count(&self) -> usize {
        self.layers.len().saturating_sub(1)
    }

    pub fn centers(&self) -> impl Iterator<Item = &Element> {
        self.layers.iter().flatten()
    }
}

/// Peels layers off a partial tiling: `C_n` is the set of owners of the
/// frontier of the union of earlier layers. Stops at the first frontier point
/// that no placement covers (or when the frontier is empty, i.e. the group is
/// finite and fully covered).
pub fn decompose_layers(spec: &GroupSpec, pi: &PartialTiling) -> LayerDecomposition {
    let one = Element::identity();
    let mut layers = vec![vec![one.clone()]];
    let mut covered: ElementSet = placement(spec, &one, pi.tile());
    loop {
        let Ok(front) = frontier(spec, &covered) else {
            break;
        };
        if front.is_empty() {
            break;
        }
        let mut owners: HashSet<&Element> = HashSet::new();
        let mut complete = true;
        for x in &front {
            match pi.owner(x) {
                Some(c) => {
                    owners.insert(c);
                }
                None => {
                    complete = false;
                    break;
                }
            }
        }
        if !complete {
            break;
        }
        let mut layer: Vec<Element> = owners.into_iter().cloned().collect();
        layer.sort();
        for c in &layer {
            covered.extend(placement(spec, c, pi.tile()));
        }
        layers.push(layer);
    }
    LayerDecomposition { layers }
}

/// `R_0 = (N+1)(diam K + 1) + max |K|`: every placement taking part in
/// layers `<= N` lies inside `B_{R_0}(1)`.
pub fn containment_radius(spec: &GroupSpec, tile: &Tile, n: usize) -> usize {
    (n + 1) * (spec.diameter(tile.cells()) + 1) + tile.max_length()
}

/// Options for [`heesch_eval`].
#[derive(Clone, Debug)]
pub struct EvalOptions {
    pub max_n: usize,
    pub search: SearchOptions,
    /// Largest diagonal entry of candidate period lattices (grid models).
    pub period_bound: i64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            max_n: 3,
            search: SearchOptions::default(),
            period_bound: 8,
        }
    }
}

/// Heesch number evaluation: a periodic witness on grid models, otherwise
/// `heesch_ge` for `N = 1, 2, ..` until a conclusive refutation or `max_n`.
pub fn heesch_eval(spec: &GroupSpec, tile: &Tile, opts: &EvalOptions) -> Result<HeeschCertificate> {
    if spec.is_grid() {
        if let Some(w) = find_periodic_tiling(spec, tile, opts.period_bound)? {
            return Ok(HeeschCertificate::periodic(spec, tile, w));
        }
    }
    let mut best = HeeschCertificate::trivial(spec, tile);
    let mut n = 1;
    while n <= opts.max_n {
        match heesch_ge(spec, tile, n, &opts.search)? {
            GeOutcome::Found(cert) => {
                n = cert.layer_count() + 1;
                best = cert;
            }
            GeOutcome::Exhausted(ex) => {
                return Ok(if ex.conclusive {
                    best.into_exact(spec, tile, ex.search_radius, ex.stats)
                } else {
                    best.into_inconclusive(ex.stats)
                });
            }
        }
    }
    Ok(best)
}
