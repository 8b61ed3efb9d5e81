use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{containment_radius, HeeschCertificate};
use crate::error::{Error, Result};
use crate::group::{Cayley, GroupSpec, NodeId, Symbol};
use crate::tiling::{PartialTiling, Tile};

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Upper bound on the search radius; below the containment radius an
    /// exhausted search is not a refutation.
    pub radius_cap: Option<usize>,
    /// Sequential search in shortlex branch order (byte-stable certificates).
    pub deterministic: bool,
    /// Worker threads for the parallel root split (`None`: rayon default).
    pub threads: Option<usize>,
    /// Abort after this many placements tried.
    pub node_limit: Option<u64>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            radius_cap: None,
            deterministic: true,
            threads: None,
            node_limit: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Placements tried.
    pub nodes: u64,
    /// Root branches explored.
    pub root_branches: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exhausted {
    pub target: usize,
    pub search_radius: usize,
    pub containment_radius: usize,
    /// True iff the search radius reached the containment radius, making the
    /// exhaustion a proof that `Heesch(K) < target`.
    pub conclusive: bool,
    pub stats: SearchStats,
}

#[derive(Clone, Debug)]
pub enum GeOutcome {
    Found(HeeschCertificate),
    Exhausted(Exhausted),
}

const FREE: u32 = u32::MAX;

/// Search state over Cayley-graph node ids.
#[derive(Clone)]
struct Searcher<'g> {
    cayley: Cayley<'g>,
    tile: Vec<Vec<Symbol>>,
    tile_inv: Vec<Vec<Symbol>>,
    /// Placement index owning each node, or FREE.
    owner: Vec<u32>,
    centers: Vec<NodeId>,
    cells: Vec<Vec<NodeId>>,
    radius: usize,
    target: usize,
}

struct Shared<'a> {
    cancel: &'a AtomicBool,
    nodes: &'a AtomicU64,
    limit: Option<u64>,
}

enum Step {
    Found,
    Exhausted,
    Cancelled,
}

impl<'g> Searcher<'g> {
    fn new(spec: &'g GroupSpec, tile: &Tile, radius: usize, target: usize) -> Self {
        let words: Vec<Vec<Symbol>> = tile.cells().iter().map(|f| f.word().to_vec()).collect();
        let inv = words
            .iter()
            .map(|w| spec.inverse(&spec.normal_form(w)).word().to_vec())
            .collect();
        Searcher {
            cayley: Cayley::new(spec),
            tile: words,
            tile_inv: inv,
            owner: Vec::new(),
            centers: Vec::new(),
            cells: Vec::new(),
            radius,
            target,
        }
    }

    fn is_free(&self, x: NodeId) -> bool {
        self.owner.get(x as usize).is_none_or(|&o| o == FREE)
    }

    fn place(&mut self, c: NodeId, cells: Vec<NodeId>) {
        let idx = self.centers.len() as u32;
        for &x in &cells {
            if self.owner.len() <= x as usize {
                self.owner.resize(x as usize + 1, FREE);
            }
            self.owner[x as usize] = idx;
        }
        self.centers.push(c);
        self.cells.push(cells);
    }

    fn unplace(&mut self) {
        let cells = self.cells.pop().expect("placement to undo");
        self.centers.pop();
        for x in cells {
            self.owner[x as usize] = FREE;
        }
    }

    /// Cells of `c·K` if the placement is disjoint from the current family
    /// and inside the search ball.
    fn fits(&mut self, c: NodeId) -> Result<Option<Vec<NodeId>>> {
        let mut out = Vec::with_capacity(self.tile.len());
        for i in 0..self.tile.len() {
            let x = self.cayley.walk(c, &self.tile[i])?;
            if !self.is_free(x) || self.cayley.length(x) > self.radius {
                return Ok(None);
            }
            out.push(x);
        }
        Ok(Some(out))
    }

    /// Distinct centers `x·f^{-1}` of placements covering `x`, in shortlex order.
    fn candidates(&mut self, x: NodeId) -> Result<Vec<NodeId>> {
        let mut cs = Vec::with_capacity(self.tile_inv.len());
        for i in 0..self.tile_inv.len() {
            let c = self.cayley.walk(x, &self.tile_inv[i])?;
            if !cs.contains(&c) {
                cs.push(c);
            }
        }
        cs.sort_by(|&a, &b| self.cayley.element(a).cmp(self.cayley.element(b)));
        Ok(cs)
    }

    /// Frontier of everything covered, shortlex-sorted.
    fn frontier(&mut self) -> Result<Vec<NodeId>> {
        let mut out = Vec::new();
        let all: Vec<NodeId> = self.cells.iter().flatten().copied().collect();
        for x in all {
            for y in self.cayley.neighbors(x)? {
                if self.is_free(y) && !out.contains(&y) {
                    out.push(y);
                }
            }
        }
        out.sort_by(|&a, &b| self.cayley.element(a).cmp(self.cayley.element(b)));
        Ok(out)
    }

    /// DFS: cover every point of `required` (the frontier of layers
    /// `< layer`), then move to the next layer.
    fn dfs(&mut self, layer: usize, required: &[NodeId], from: usize, shared: &Shared<'_>) -> Result<Step> {
        if shared.cancel.load(Ordering::Relaxed) {
            return Ok(Step::Cancelled);
        }
        let Some(pos) = (from..required.len()).find(|&i| self.is_free(required[i])) else {
            if layer == self.target {
                return Ok(Step::Found);
            }
            let next = self.frontier()?;
            return self.dfs(layer + 1, &next, 0, shared);
        };
        let x = required[pos];
        for c in self.candidates(x)? {
            let n = shared.nodes.fetch_add(1, Ordering::Relaxed) + 1;
            if shared.limit.is_some_and(|l| n > l) {
                return Err(Error::ResourceCap(format!("search node limit {} reached", n - 1)));
            }
            let Some(cells) = self.fits(c)? else {
                continue;
            };
            self.place(c, cells);
            match self.dfs(layer, required, pos + 1, shared)? {
                Step::Exhausted => self.unplace(),
                done => return Ok(done),
            }
        }
        Ok(Step::Exhausted)
    }

    fn tiling(&self, spec: &GroupSpec, tile: &Tile) -> Result<PartialTiling> {
        let centers = self.centers.iter().map(|&c| self.cayley.element(c).clone()).collect();
        PartialTiling::new(spec, tile.clone(), centers)
    }
}

/// Decides "Heesch(K) >= n" by forced-point DFS inside the containment
/// radius. A found tiling is returned as a certificate whose verdict is the
/// number of layers the tiling actually has.
pub fn heesch_ge<'g>(spec: &'g GroupSpec, tile: &Tile, n: usize, opts: &SearchOptions) -> Result<GeOutcome> {
    let r0 = containment_radius(spec, tile, n);
    let radius = opts.radius_cap.map_or(r0, |cap| cap.min(r0));
    if n == 0 {
        return Ok(GeOutcome::Found(HeeschCertificate::trivial(spec, tile)));
    }
    let cancel = AtomicBool::new(false);
    let nodes = AtomicU64::new(0);
    let shared = Shared {
        cancel: &cancel,
        nodes: &nodes,
        limit: opts.node_limit,
    };

    let mut root = Searcher::new(spec, tile, radius, n);
    let one = root.cayley.identity();
    let Some(cells) = root.fits(one)? else {
        return Err(Error::ResourceCap("the tile does not fit in the search radius".into()));
    };
    root.place(one, cells);
    let required = root.frontier()?;
    let Some(&x0) = required.first() else {
        // a finite group tiled by a single copy
        return found(spec, tile, &root, SearchStats::default());
    };
    let roots = root.candidates(x0)?;

    let run = |c: NodeId, mut s: Searcher<'g>| -> Result<Option<Searcher<'g>>> {
        let Some(cells) = s.fits(c)? else {
            return Ok(None);
        };
        s.place(c, cells);
        match s.dfs(1, &required, 1, &shared)? {
            Step::Found => Ok(Some(s)),
            _ => Ok(None),
        }
    };

    let mut explored = 0u64;
    let winner = if opts.deterministic {
        let mut w = None;
        for &c in &roots {
            explored += 1;
            if let Some(s) = run(c, root.clone())? {
                w = Some(s);
                break;
            }
        }
        w
    } else {
        let body = || {
            roots
                .par_iter()
                .map(|&c| {
                    if cancel.load(Ordering::Relaxed) {
                        return Ok(None);
                    }
                    let r = run(c, root.clone());
                    if matches!(r, Ok(Some(_)) | Err(_)) {
                        cancel.store(true, Ordering::Relaxed);
                    }
                    r
                })
                .collect::<Vec<Result<Option<Searcher<'g>>>>>()
        };
        let results = match opts.threads {
            Some(t) => rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::ResourceCap(format!("thread pool: {e}")))?
                .install(body),
            None => body(),
        };
        explored = roots.len() as u64;
        let mut w = None;
        for r in results {
            if let Some(s) = r? {
                w.get_or_insert(s);
            }
        }
        w
    };
    let stats = SearchStats {
        nodes: nodes.load(Ordering::Relaxed),
        root_branches: explored,
    };
    match winner {
        Some(s) => found(spec, tile, &s, stats),
        None => Ok(GeOutcome::Exhausted(Exhausted {
            target: n,
            search_radius: radius,
            containment_radius: r0,
            conclusive: radius >= r0,
            stats,
        })),
    }
}

fn found(spec: &GroupSpec, tile: &Tile, s: &Searcher<'_>, stats: SearchStats) -> Result<GeOutcome> {
    let pi = s.tiling(spec, tile)?;
    Ok(GeOutcome::Found(HeeschCertificate::from_tiling(
        spec, tile, &pi, s.radius, stats,
    )))
}
