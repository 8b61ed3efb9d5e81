use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::tiling::{residue_box, PeriodicWitness, Tile};

/// Searches lattice tilings of `Z^d` (`d <= 3`): for every upper-triangular
/// HNF lattice with diagonal entries `<= bound` and index divisible by `|K|`
/// (smallest index first), an exact cover of the torus `Z^d / L` by
/// translates of `K`.
pub fn find_periodic_tiling(spec: &GroupSpec, tile: &Tile, bound: i64) -> Result<Option<PeriodicWitness>> {
    let d = spec
        .grid_dim()
        .ok_or_else(|| Error::Unsupported("periodic search needs a grid model".into()))?;
    if d > 3 || bound < 1 {
        return Ok(None);
    }
    let cells: Vec<Vec<i64>> = tile
        .cells()
        .iter()
        .map(|f| spec.grid_coords(f).expect("grid model"))
        .collect();
    let k = cells.len() as i64;
    let mut lattices = enumerate_hnf(d, bound);
    lattices.retain(|h| det(h) % k == 0);
    lattices.sort_by_key(|h| (det(h), h.clone()));
    for h in &lattices {
        if let Some(centers) = torus_cover(h, &cells) {
            return Ok(Some(PeriodicWitness {
                periods: h.clone(),
                centers,
            }));
        }
    }
    Ok(None)
}

fn det(h: &[Vec<i64>]) -> i64 {
    (0..h.len()).map(|i| h[i][i]).product()
}

/// All upper-triangular bases with `1 <= h_ii <= bound` and
/// `0 <= h_ij < h_jj` for `i < j`.
fn enumerate_hnf(d: usize, bound: i64) -> Vec<Vec<Vec<i64>>> {
    let mut out = vec![vec![vec![0i64; d]; d]];
    for i in 0..d {
        out = out
            .into_iter()
            .flat_map(|h| {
                (1..=bound).map(move |v| {
                    let mut h = h.clone();
                    h[i][i] = v;
                    h
                })
            })
            .collect();
    }
    for i in 0..d {
        for j in i + 1..d {
            out = out
                .into_iter()
                .flat_map(|h| {
                    (0..h[j][j]).map(move |v| {
                        let mut h = h.clone();
                        h[i][j] = v;
                        h
                    })
                })
                .collect();
        }
    }
    out
}

/// Exact cover of the torus by translates of the cells; the returned center
/// set contains the origin.
fn torus_cover(h: &[Vec<i64>], cells: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let d = h.len();
    let diag: Vec<i64> = (0..d).map(|i| h[i][i]).collect();
    let size = det(h) as usize;
    let index = |v: &[i64]| -> usize {
        let r = residue_box(h, v);
        let mut idx = 0usize;
        for i in (0..d).rev() {
            idx = idx * diag[i] as usize + r[i] as usize;
        }
        idx
    };
    let point = |mut idx: usize| -> Vec<i64> {
        let mut v = vec![0i64; d];
        for i in 0..d {
            v[i] = (idx % diag[i] as usize) as i64;
            idx /= diag[i] as usize;
        }
        v
    };
    // placements by center residue; skip those that overlap themselves
    let mut placements: Vec<Option<Vec<usize>>> = Vec::with_capacity(size);
    for c in 0..size {
        let cv = point(c);
        let mut cov: Vec<usize> = cells
            .iter()
            .map(|f| index(&(0..d).map(|i| cv[i] + f[i]).collect::<Vec<_>>()))
            .collect();
        cov.sort_unstable();
        cov.dedup();
        placements.push((cov.len() == cells.len()).then_some(cov));
    }
    let mut by_cell: Vec<Vec<usize>> = vec![Vec::new(); size];
    for (c, p) in placements.iter().enumerate() {
        if let Some(p) = p {
            for &x in p {
                by_cell[x].push(c);
            }
        }
    }
    let mut covered = vec![false; size];
    let mut chosen = Vec::new();
    if !cover(&placements, &by_cell, &mut covered, &mut chosen) {
        return None;
    }
    let origin = point(chosen[0]);
    let mut centers: Vec<Vec<i64>> = chosen
        .iter()
        .map(|&c| {
            let v = point(c);
            residue_box(h, &(0..d).map(|i| v[i] - origin[i]).collect::<Vec<_>>())
        })
        .collect();
    centers.sort();
    Some(centers)
}

fn cover(placements: &[Option<Vec<usize>>], by_cell: &[Vec<usize>], covered: &mut [bool], chosen: &mut Vec<usize>) -> bool {
    let Some(x) = covered.iter().position(|&b| !b) else {
        return true;
    };
    for &c in &by_cell[x] {
        let cells = placements[c].as_ref().unwrap();
        if cells.iter().any(|&y| covered[y]) {
            continue;
        }
        for &y in cells {
            covered[y] = true;
        }
        chosen.push(c);
        if cover(placements, by_cell, covered, chosen) {
            return true;
        }
        chosen.pop();
        for &y in cells {
            covered[y] = false;
        }
    }
    false
}
