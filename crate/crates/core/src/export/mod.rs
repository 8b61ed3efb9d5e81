//! Lattice polygons `P(K)` for tiles of `Z^2` and SVG rendering.

pub mod polygon;
pub mod svg;

pub use polygon::{polygonize, LatticePolygon, Loop};
pub use svg::{render_svg, Scene, Style};
