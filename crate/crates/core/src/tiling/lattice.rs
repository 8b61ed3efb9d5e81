use serde::{Deserialize, Serialize};

use super::Tile;
use crate::error::{Error, Result};
use crate::group::GroupSpec;

/// Period lattice plus fundamental centers (grid coordinates) of a periodic
/// tiling of `Z^d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicWitness {
    pub periods: Vec<Vec<i64>>,
    pub centers: Vec<Vec<i64>>,
}

/// Upper-triangular Hermite normal form of the row lattice: row `i` is zero
/// before column `i`, diagonal entries positive, entries above the diagonal
/// reduced into `[0, h_jj)`. Fails on a singular basis.
pub fn hermite_normal_form(rows: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let d = rows.len();
    if rows.iter().any(|r| r.len() != d) {
        return Err(Error::InvalidSpec("period matrix must be square".into()));
    }
    let mut m: Vec<Vec<i64>> = rows.to_vec();
    for col in 0..d {
        loop {
            let nonzero: Vec<usize> = (col..d).filter(|&r| m[r][col] != 0).collect();
            let Some(&pivot) = nonzero.iter().min_by_key(|&&r| m[r][col].abs()) else {
                return Err(Error::InvalidSpec("period vectors are linearly dependent".into()));
            };
            m.swap(col, pivot);
            if nonzero.len() == 1 {
                break;
            }
            for r in col + 1..d {
                let q = m[r][col].div_euclid(m[col][col]);
                if q != 0 {
                    for c in col..d {
                        m[r][c] -= q * m[col][c];
                    }
                }
            }
        }
        if m[col][col] < 0 {
            for c in col..d {
                m[col][c] = -m[col][c];
            }
        }
        for r in 0..col {
            let q = m[r][col].div_euclid(m[col][col]);
            for c in col..d {
                m[r][c] -= q * m[col][c];
            }
        }
    }
    Ok(m)
}

/// Reduces `x` into the residue box `prod [0, h_ii)` of an HNF basis.
pub fn residue_box(hnf: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    let mut v = x.to_vec();
    for (i, row) in hnf.iter().enumerate() {
        let q = v[i].div_euclid(row[i]);
        if q != 0 {
            for (c, &r) in row.iter().enumerate().skip(i) {
                v[c] -= q * r;
            }
        }
    }
    v
}

/// Checks that the periodic extension of the witness partitions a block of
/// `3^d` fundamental domains: every cell of the block is covered by exactly
/// one translate `c + l + F` (`l` in the period lattice).
pub fn verify_periodic(spec: &GroupSpec, tile: &Tile, w: &PeriodicWitness) -> Result<bool> {
    let d = spec
        .grid_dim()
        .ok_or_else(|| Error::Unsupported("periodic witnesses need a grid model".into()))?;
    if w.periods.len() != d || w.centers.iter().any(|c| c.len() != d) {
        return Ok(false);
    }
    if !w.centers.iter().any(|c| c.iter().all(|&x| x == 0)) {
        return Ok(false);
    }
    let Ok(hnf) = hermite_normal_form(&w.periods) else {
        return Ok(false);
    };
    let cells: Vec<Vec<i64>> = tile
        .cells()
        .iter()
        .map(|f| spec.grid_coords(f).expect("grid model"))
        .collect();
    let diag: Vec<i64> = (0..d).map(|i| hnf[i][i]).collect();

    let mut block = Vec::new();
    let mut offset = vec![-1i64; d];
    loop {
        let shift: Vec<i64> = (0..d)
            .map(|c| (0..d).map(|r| offset[r] * w.periods[r][c]).sum())
            .collect();
        let mut x = vec![0i64; d];
        loop {
            block.push((0..d).map(|i| x[i] + shift[i]).collect::<Vec<i64>>());
            if !odometer(&mut x, &vec![0; d], &diag.iter().map(|h| h - 1).collect::<Vec<_>>()) {
                break;
            }
        }
        if !odometer(&mut offset, &vec![-1; d], &vec![1; d]) {
            break;
        }
    }
    for x in &block {
        let mut count = 0;
        for c in &w.centers {
            for f in &cells {
                let y: Vec<i64> = (0..d).map(|i| x[i] - c[i] - f[i]).collect();
                if residue_box(&hnf, &y).iter().all(|&v| v == 0) {
                    count += 1;
                }
            }
        }
        if count != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Advances `x` within `[lo, hi]` coordinatewise; false when it wraps around.
fn odometer(x: &mut [i64], lo: &[i64], hi: &[i64]) -> bool {
    for i in 0..x.len() {
        if x[i] < hi[i] {
            x[i] += 1;
            return true;
        }
        x[i] = lo[i];
    }
    false
}
