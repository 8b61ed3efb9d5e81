//! Boundary polygons and SVG pictures of tiles and certificate layers.
//! Writes `target/heesch-examples/*.svg`.

use std::path::Path;

use heesch::export::{polygonize, render_svg, Scene, Style};
use heesch::{heesch_ge, GeOutcome, GroupSpec, Result, SearchOptions, Tile};

fn main() -> Result<()> {
    let dir = Path::new("target/heesch-examples");
    std::fs::create_dir_all(dir)?;
    let g = GroupSpec::grid(2)?;

    let ring = [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)];
    let poly = polygonize(&ring)?;
    println!("ring: area {}, {} hole(s)", poly.area(), poly.holes());
    for l in &poly.loops {
        println!("  {} loop: {:?}", if l.outer { "outer" } else { "hole" }, l.vertices);
    }
    std::fs::write(dir.join("ring.svg"), render_svg(&Scene::Polygon(poly), &Style::default())?)?;

    let ell = Tile::from_coords(&g, &[(0, 0), (1, 0), (0, 1)])?;
    if let GeOutcome::Found(cert) = heesch_ge(&g, &ell, 2, &SearchOptions::default())? {
        let svg = render_svg(&Scene::from_certificate(&cert)?, &Style::default())?;
        std::fs::write(dir.join("l-tromino-layers.svg"), &svg)?;
        println!("L-tromino, two layers: {} shapes drawn", svg.matches("<path").count());
    }
    println!("pictures written to {}", dir.display());
    Ok(())
}
