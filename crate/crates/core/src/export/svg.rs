use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::polygon::{polygonize, LatticePolygon, Loop};
use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};
use crate::heesch::HeeschCertificate;
use crate::tiling::Tile;

/// Something drawable on the square lattice.
#[derive(Clone, Debug, PartialEq)]
pub enum Scene {
    Tile(Vec<(i64, i64)>),
    /// Placements of `tile` grouped by layer; layer 0 holds the central copy.
    Layers {
        tile: Vec<(i64, i64)>,
        layers: Vec<Vec<(i64, i64)>>,
    },
    Polygon(LatticePolygon),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct Style {
    /// Pixels per lattice cell; must be even so corners land on integers.
    pub cell: u32,
    /// Fill colour of layer `n` is `palette[n % len]`.
    pub palette: Vec<String>,
    pub stroke: String,
    /// Stroke colour and width for layer 0.
    pub highlight: String,
    pub highlight_width: u32,
}

impl Default for Style {
    fn default() -> Self {
        Style {
            cell: 24,
            palette: ["#e4572e", "#76b041", "#4c86a8", "#f2c14e", "#8e6c8a", "#5fad9b", "#d18b47", "#9aa0a6"]
                .map(String::from)
                .to_vec(),
            stroke: "#333333".into(),
            highlight: "#000000".into(),
            highlight_width: 3,
        }
    }
}

fn coords(spec: &GroupSpec, g: &Element) -> Result<(i64, i64)> {
    match spec.grid_coords(g).as_deref() {
        Some(&[u, v]) => Ok((u, v)),
        _ => Err(Error::Unsupported("only Grid(2) scenes can be rendered".into())),
    }
}

impl Scene {
    pub fn from_tile(spec: &GroupSpec, tile: &Tile) -> Result<Self> {
        Ok(Scene::Tile(tile.cells().iter().map(|g| coords(spec, g)).collect::<Result<_>>()?))
    }

    pub fn from_certificate(cert: &HeeschCertificate) -> Result<Self> {
        let spec = GroupSpec::from_doc(cert.group.clone())?;
        let parse = |w: &String| spec.parse(w).and_then(|g| coords(&spec, &g));
        let tile = cert.tile.iter().map(parse).collect::<Result<Vec<_>>>()?;
        let layers = cert
            .layers
            .iter()
            .map(|l| l.iter().map(parse).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Scene::Layers { tile, layers })
    }

    /// `(path loops, layer)` per drawn shape.
    fn shapes(&self) -> Result<Vec<(Vec<Loop>, usize)>> {
        Ok(match self {
            Scene::Tile(cells) => vec![(polygonize(cells)?.loops, 0)],
            Scene::Layers { tile, layers } => {
                let mut out = Vec::new();
                for (n, centers) in layers.iter().enumerate() {
                    for &(cu, cv) in centers {
                        let placed: Vec<(i64, i64)> = tile.iter().map(|&(u, v)| (cu + u, cv + v)).collect();
                        out.push((polygonize(&placed)?.loops, n));
                    }
                }
                out
            }
            Scene::Polygon(p) => p.loops.iter().map(|l| (vec![l.clone()], 0)).collect(),
        })
    }
}

/// Deterministic SVG 1.1: one `path` per shape (per loop for polygon
/// scenes), filled by layer, with a one-cell margin around the content.
pub fn render_svg(scene: &Scene, style: &Style) -> Result<String> {
    if style.cell == 0 || style.cell % 2 == 1 || style.palette.is_empty() {
        return Err(Error::InvalidSpec("style needs an even cell size and a nonempty palette".into()));
    }
    let shapes = scene.shapes()?;
    // Doubled coordinates: every vertex is an odd integer.
    let pts = shapes
        .iter()
        .flat_map(|(ls, _)| ls.iter())
        .flat_map(|l| l.vertices.iter())
        .map(|v| ((2.0 * v[0]) as i64, (2.0 * v[1]) as i64));
    let (mut x0, mut x1, mut y0, mut y1) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
    for (x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x0 > x1 {
        return Err(Error::EmptySet);
    }
    let half = i64::from(style.cell / 2);
    let margin = 2 * half;
    let px = |x: i64| (x - x0) * half + margin;
    let py = |y: i64| (y1 - y) * half + margin;
    let (w, h) = ((x1 - x0) * half + 2 * margin, (y1 - y0) * half + 2 * margin);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    // Layer 0 last so its highlighted outline sits on top.
    let mut order: Vec<usize> = (0..shapes.len()).collect();
    order.sort_by_key(|&i| (shapes[i].1 == 0, i));
    for i in order {
        let (loops, layer) = &shapes[i];
        let mut d = String::new();
        for l in loops {
            for (k, v) in l.vertices.iter().enumerate() {
                let (x, y) = ((2.0 * v[0]) as i64, (2.0 * v[1]) as i64);
                let _ = write!(d, "{}{} {} ", if k == 0 { "M" } else { "L" }, px(x), py(y));
            }
            d.push('Z');
        }
        let fill = &style.palette[layer % style.palette.len()];
        let (stroke, width) = if *layer == 0 {
            (&style.highlight, style.highlight_width)
        } else {
            (&style.stroke, 1)
        };
        let _ = writeln!(
            out,
            "  <path d=\"{d}\" fill=\"{fill}\" fill-rule=\"evenodd\" stroke=\"{stroke}\" stroke-width=\"{width}\" data-layer=\"{layer}\"/>"
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
