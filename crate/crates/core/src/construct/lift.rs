//! Lifting a tiling of a finite quotient back to the group.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::group::{Element, ElementSet, GroupSpec};
use crate::subgroup::CosetTable;
use crate::tiling::{verify_partition, PartialTiling, Tile};

/// If `π(F)` has `|F|` points and the translates `π(c') π(F)` (`c'` in
/// `image_centers`, given by representatives in the group) partition the
/// quotient, then `{ c f : π(c) ∈ π(C') }` partitions the group. Returns the
/// placements meeting `region`, checked with [`verify_partition`].
pub fn lift_tiling(
    spec: &GroupSpec,
    table: &CosetTable,
    tile: &Tile,
    image_centers: &[Element],
    region: &ElementSet,
) -> Result<PartialTiling> {
    let image: HashSet<u32> = tile.cells().iter().map(|f| table.coset(f)).collect();
    if image.len() < tile.len() {
        return Err(Error::InvalidTiling(format!(
            "the quotient map is not injective on the tile ({} cells, {} images)",
            tile.len(),
            image.len()
        )));
    }
    let mut covered = vec![false; table.index()];
    let mut wanted: HashSet<u32> = HashSet::new();
    for c in image_centers {
        for f in tile.cells() {
            let p = table.coset(&spec.mul(c, f)) as usize;
            if covered[p] {
                return Err(Error::InvalidTiling("image placements overlap in the quotient".into()));
            }
            covered[p] = true;
        }
        wanted.insert(table.coset(c));
    }
    if covered.iter().any(|&b| !b) {
        return Err(Error::InvalidTiling("image placements do not cover the quotient".into()));
    }
    if !wanted.contains(&0) {
        return Err(Error::InvalidTiling("the identity coset must be an image center".into()));
    }

    let mut centers: Vec<Element> = Vec::new();
    let mut seen = HashSet::new();
    for x in region {
        for f in tile.cells() {
            let c = spec.mul(x, &spec.inverse(f));
            if wanted.contains(&table.coset(&c)) && seen.insert(c.clone()) {
                centers.push(c);
            }
        }
    }
    if !seen.contains(&Element::identity()) {
        centers.push(Element::identity());
    }
    centers.sort();
    let pi = PartialTiling::new(spec, tile.clone(), centers)?;
    if !verify_partition(&pi, region) {
        return Err(Error::InvalidTiling("the lifted placements do not partition the region".into()));
    }
    Ok(pi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroup::{build_coset_table, FiniteHom};

    #[test]
    fn line_onto_z2() {
        let z = GroupSpec::grid(1).unwrap();
        let hom = FiniteHom::from_perms(&z, &[("a", vec![1, 0])]).unwrap();
        let t = build_coset_table(&hom);
        let tile = Tile::from_words(&z, &["", "a"]).unwrap();
        let region: ElementSet = (-10..=10).map(|x| z.grid_element(&[x]).unwrap()).collect();
        let pi = lift_tiling(&z, &t, &tile, &[Element::identity()], &region).unwrap();
        assert!(pi.centers().iter().all(|c| z.grid_coords(c).unwrap()[0] % 2 == 0));
        let bad = Tile::from_words(&z, &["", "aa"]).unwrap();
        assert!(lift_tiling(&z, &t, &bad, &[Element::identity()], &region).is_err());
    }
}
