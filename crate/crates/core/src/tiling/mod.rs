//! Tiles, left-translated placements and partial tilings.

mod lattice;

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, ElementSet, GroupDoc, GroupSpec};

pub use lattice::{hermite_normal_form, residue_box, PeriodicWitness, verify_periodic};

/// A finite set of at least two elements. Tiles need not contain 1 and need
/// not be connected; the connectivity flag is cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tile {
    cells: ElementSet,
    connected: bool,
}

impl Tile {
    pub fn new(spec: &GroupSpec, cells: ElementSet) -> Result<Self> {
        if cells.len() < 2 {
            return Err(Error::InvalidTile(format!(
                "a tile needs at least 2 cells, got {}",
                cells.len()
            )));
        }
        let connected = spec.is_connected(&cells);
        Ok(Tile { cells, connected })
    }

    pub fn from_words(spec: &GroupSpec, words: &[&str]) -> Result<Self> {
        Self::new(spec, spec.element_set(words.iter().copied())?)
    }

    /// Tile of a `Grid(2)` model from `(x, y)` coordinates.
    pub fn from_coords(spec: &GroupSpec, coords: &[(i64, i64)]) -> Result<Self> {
        let cells = coords
            .iter()
            .map(|&(x, y)| spec.grid_element(&[x, y]))
            .collect::<Result<ElementSet>>()?;
        Self::new(spec, cells)
    }

    pub fn cells(&self) -> &ElementSet {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    /// `max { |f| : f in F }`.
    pub fn max_length(&self) -> usize {
        self.cells.iter().map(|f| f.len()).max().unwrap_or(0)
    }

    /// `gF`.
    pub fn translate(&self, spec: &GroupSpec, g: &Element) -> Tile {
        Tile {
            cells: placement(spec, g, self),
            connected: self.connected,
        }
    }
}

/// `c·F = { c f : f in F }`.
pub fn placement(spec: &GroupSpec, c: &Element, tile: &Tile) -> ElementSet {
    tile.cells.iter().map(|f| spec.mul(c, f)).collect()
}

/// A family of left translates `cF` with `1` among the centers. [`PartialTiling::new`]
/// enforces disjointness; [`PartialTiling::unchecked`] admits arbitrary
/// center lists so they can be verified.
#[derive(Clone, Debug)]
pub struct PartialTiling {
    tile: Tile,
    centers: Vec<Element>,
    owner: HashMap<Element, usize>,
    overlap: bool,
}

impl PartialTiling {
    pub fn new(spec: &GroupSpec, tile: Tile, centers: Vec<Element>) -> Result<Self> {
        let pi = Self::unchecked(spec, tile, centers);
        if !pi.centers.iter().any(|c| c.is_identity()) {
            return Err(Error::InvalidTiling("the identity must be a center".into()));
        }
        if pi.overlap {
            return Err(Error::InvalidTiling("placements overlap".into()));
        }
        Ok(pi)
    }

    pub fn unchecked(spec: &GroupSpec, tile: Tile, centers: Vec<Element>) -> Self {
        let mut owner = HashMap::new();
        let mut overlap = false;
        let mut seen = std::collections::HashSet::new();
        for (i, c) in centers.iter().enumerate() {
            if !seen.insert(c.clone()) {
                overlap = true;
            }
            for x in placement(spec, c, &tile) {
                if owner.insert(x, i).is_some() {
                    overlap = true;
                }
            }
        }
        PartialTiling {
            tile,
            centers,
            owner,
            overlap,
        }
    }

    pub fn tile(&self) -> &Tile {
        &self.tile
    }

    pub fn centers(&self) -> &[Element] {
        &self.centers
    }

    pub fn is_disjoint(&self) -> bool {
        !self.overlap
    }

    /// The center whose placement contains `x`, if any.
    pub fn owner(&self, x: &Element) -> Option<&Element> {
        self.owner.get(x).map(|&i| &self.centers[i])
    }

    pub fn covers(&self, x: &Element) -> bool {
        self.owner.contains_key(x)
    }

    pub fn covered(&self) -> impl Iterator<Item = &Element> {
        self.owner.keys()
    }

    /// Extends by one more placement (no disjointness check).
    pub fn with(&self, spec: &GroupSpec, c: Element) -> Self {
        let mut centers = self.centers.clone();
        centers.push(c);
        Self::unchecked(spec, self.tile.clone(), centers)
    }
}

/// Whether `cF` misses every placement of `pi`.
pub fn disjoint(spec: &GroupSpec, pi: &PartialTiling, c: &Element) -> bool {
    placement(spec, c, &pi.tile).iter().all(|x| !pi.covers(x))
}

/// Placements pairwise disjoint and covering `region`.
pub fn verify_partition(pi: &PartialTiling, region: &ElementSet) -> bool {
    pi.is_disjoint() && region.iter().all(|x| pi.covers(x))
}

/// Tile file: `{"group": <inline spec or path>, "cells": [..]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TileDoc {
    pub group: GroupRef,
    pub cells: Vec<String>,
}

/// A group given inline or as a path to a spec file (relative paths resolve
/// against the referring file's directory).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Inline(GroupDoc),
    Path(String),
}

impl GroupRef {
    pub fn resolve(&self, base: Option<&Path>) -> Result<GroupSpec> {
        match self {
            GroupRef::Inline(doc) => GroupSpec::from_doc(doc.clone()),
            GroupRef::Path(p) => {
                let path = match base {
                    Some(dir) => dir.join(p),
                    None => p.into(),
                };
                GroupSpec::from_json(&std::fs::read_to_string(path)?)
            }
        }
    }
}

impl TileDoc {
    pub fn new(spec: &GroupSpec, tile: &Tile) -> Self {
        TileDoc {
            group: GroupRef::Inline(spec.doc().clone()),
            cells: spec.format_set(tile.cells()),
        }
    }

    pub fn load(path: &Path) -> Result<(GroupSpec, Tile)> {
        let doc: TileDoc = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        doc.resolve(path.parent())
    }

    pub fn resolve(&self, base: Option<&Path>) -> Result<(GroupSpec, Tile)> {
        let spec = self.group.resolve(base)?;
        let cells = spec.element_set(self.cells.iter().map(String::as_str))?;
        if cells.len() != self.cells.len() {
            return Err(Error::InvalidTile("duplicate cells".into()));
        }
        let tile = Tile::new(&spec, cells)?;
        Ok((spec, tile))
    }
}
