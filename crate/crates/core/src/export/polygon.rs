use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One closed rectilinear boundary loop. Vertices are corners of unit
/// squares centred on lattice points, so every coordinate is a half-integer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Loop {
    /// Counterclockwise outer boundary (`true`) or clockwise hole.
    pub outer: bool,
    pub vertices: Vec<[f64; 2]>,
}

impl Loop {
    /// Shoelace area, positive for counterclockwise loops.
    pub fn signed_area(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let [x0, y0] = self.vertices[i];
                let [x1, y1] = self.vertices[(i + 1) % n];
                x0 * y1 - x1 * y0
            })
            .sum::<f64>()
            / 2.0
    }
}

/// The union of unit squares centred on a finite set of lattice points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticePolygon {
    pub loops: Vec<Loop>,
    /// Number of outer loops; more than one means the set is not a polygon.
    pub components: usize,
}

impl LatticePolygon {
    pub fn area(&self) -> f64 {
        self.loops.iter().map(Loop::signed_area).sum()
    }

    pub fn holes(&self) -> usize {
        self.loops.iter().filter(|l| !l.outer).count()
    }

    /// Lattice points whose squares lie inside (even-odd rule over all loops).
    pub fn cells(&self) -> Vec<(i64, i64)> {
        let xs = self.loops.iter().flat_map(|l| l.vertices.iter().map(|v| v[0]));
        let ys = self.loops.iter().flat_map(|l| l.vertices.iter().map(|v| v[1]));
        let (x0, x1) = bounds(xs);
        let (y0, y1) = bounds(ys);
        let mut out = Vec::new();
        for u in x0..=x1 {
            for v in y0..=y1 {
                let crossings: usize = self.loops.iter().map(|l| crossings(l, u as f64, v as f64)).sum();
                if crossings % 2 == 1 {
                    out.push((u, v));
                }
            }
        }
        out
    }
}

fn bounds(it: impl Iterator<Item = f64>) -> (i64, i64) {
    it.fold((i64::MAX, i64::MIN), |(lo, hi), x| (lo.min(x.ceil() as i64), hi.max(x.floor() as i64)))
}

/// Vertical edges of `l` crossed by the ray from `(x, y)` towards `+x`.
fn crossings(l: &Loop, x: f64, y: f64) -> usize {
    let n = l.vertices.len();
    (0..n)
        .filter(|&i| {
            let [ax, ay] = l.vertices[i];
            let [bx, by] = l.vertices[(i + 1) % n];
            ax == bx && ax > x && (ay.min(by) < y) && (y < ay.max(by))
        })
        .count()
}

const DIRS: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

/// Traces the boundary of `P(K)` by walking unit edges with the set on the
/// left. At a corner shared by two diagonal cells the walk turns left, which
/// keeps every loop simple.
pub fn polygonize(cells: &[(i64, i64)]) -> Result<LatticePolygon> {
    if cells.is_empty() {
        return Err(Error::EmptySet);
    }
    let set: BTreeSet<(i64, i64)> = cells.iter().copied().collect();
    // Corners in doubled coordinates; an edge is (start corner, direction).
    let mut edges: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for &(u, v) in &set {
        let (cx, cy) = (2 * u, 2 * v);
        let sides = [
            ((u, v - 1), (cx - 1, cy - 1), 0),
            ((u + 1, v), (cx + 1, cy - 1), 1),
            ((u, v + 1), (cx + 1, cy + 1), 2),
            ((u - 1, v), (cx - 1, cy + 1), 3),
        ];
        for (nb, start, dir) in sides {
            if !set.contains(&nb) {
                edges.entry(start).or_default().push(dir);
            }
        }
    }
    let mut loops = Vec::new();
    while let Some((&start, dirs)) = edges.iter().next() {
        let mut dir = dirs[0];
        let mut at = start;
        let mut corners: Vec<(i64, i64)> = Vec::new();
        loop {
            take(&mut edges, at, dir);
            let (dx, dy) = DIRS[dir];
            let next = (at.0 + 2 * dx, at.1 + 2 * dy);
            if next == start {
                corners.push(start);
                break;
            }
            let out = edges.get(&next).cloned().unwrap_or_default();
            let Some(d) = [(dir + 1) % 4, dir, (dir + 3) % 4].into_iter().find(|d| out.contains(d)) else {
                unreachable!("boundary edges always close up");
            };
            at = next;
            if d != dir {
                corners.push(at);
            }
            dir = d;
        }
        // Start at the corner where the walk closes so the first vertex is a turn.
        corners.rotate_right(1);
        let vertices: Vec<[f64; 2]> = corners.iter().map(|&(x, y)| [x as f64 / 2.0, y as f64 / 2.0]).collect();
        let mut l = Loop { outer: true, vertices };
        l.outer = l.signed_area() > 0.0;
        loops.push(l);
    }
    let components = loops.iter().filter(|l| l.outer).count();
    Ok(LatticePolygon { loops, components })
}

fn take(edges: &mut BTreeMap<(i64, i64), Vec<usize>>, at: (i64, i64), dir: usize) {
    if let Some(v) = edges.get_mut(&at) {
        v.retain(|&d| d != dir);
        if v.is_empty() {
            edges.remove(&at);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_and_domino() {
        let p = polygonize(&[(0, 0)]).unwrap();
        assert_eq!(p.loops.len(), 1);
        let mut vs = p.loops[0].vertices.clone();
        vs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(vs, vec![[-0.5, -0.5], [-0.5, 0.5], [0.5, -0.5], [0.5, 0.5]]);
        let d = polygonize(&[(0, 0), (1, 0)]).unwrap();
        assert_eq!(d.loops[0].vertices.len(), 4);
        assert_eq!(d.area(), 2.0);
        assert!(d.loops[0].vertices.contains(&[1.5, 0.5]));
    }

    #[test]
    fn ring_has_one_hole() {
        let ring: Vec<(i64, i64)> = (-1..=1)
            .flat_map(|u| (-1..=1).map(move |v| (u, v)))
            .filter(|&c| c != (0, 0))
            .collect();
        let p = polygonize(&ring).unwrap();
        assert_eq!((p.components, p.holes(), p.area()), (1, 1, 8.0));
        let hole = p.loops.iter().find(|l| !l.outer).unwrap();
        assert_eq!(hole.signed_area(), -1.0);
        let mut back = p.cells();
        back.sort();
        let mut want = ring.clone();
        want.sort();
        assert_eq!(back, want);
    }

    #[test]
    fn diagonal_cells_stay_separate() {
        let p = polygonize(&[(0, 0), (1, 1)]).unwrap();
        assert_eq!(p.components, 2);
        assert!(p.loops.iter().all(|l| l.vertices.len() == 4));
        assert!(polygonize(&[]).is_err());
    }
}
