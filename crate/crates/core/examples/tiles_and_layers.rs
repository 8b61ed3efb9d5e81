//! Tiles, placements and the layer decomposition of a partial tiling.

use heesch::heesch::{containment_radius, decompose_layers, frontier};
use heesch::tiling::disjoint;
use heesch::{GroupSpec, PartialTiling, Result, Tile};

fn main() -> Result<()> {
    let g = GroupSpec::grid(2)?;
    let square = Tile::from_coords(&g, &[(0, 0), (1, 0), (0, 1), (1, 1)])?;
    println!(
        "square tetromino: {} cells, frontier of {} cells, containment radius for two layers = {}",
        square.len(),
        frontier(&g, square.cells())?.len(),
        containment_radius(&g, &square, 2)
    );

    // Copies on the lattice 2Z x 2Z inside a box, listed in scrambled order.
    let mut centers = vec![g.identity()];
    for i in [3, -1, 0, 2, -2, 1, -3] {
        for j in [0, 2, -3, 1, -1, 3, -2] {
            if (i, j) != (0, 0) {
                centers.push(g.grid_element(&[2 * i, 2 * j])?);
            }
        }
    }
    let pi = PartialTiling::new(&g, square.clone(), centers)?;
    let layers = decompose_layers(&g, &pi);
    println!("{} copies, {} complete layer(s) around the central copy", pi.centers().len(), layers.count());
    for (n, layer) in layers.layers.iter().enumerate() {
        let coords: Vec<Vec<i64>> = layer.iter().filter_map(|c| g.grid_coords(c)).collect();
        println!("  layer {n}: {} copies, first {:?}", layer.len(), coords.first());
    }

    // A placement that would overlap is rejected.
    let clash = g.grid_element(&[1, 1])?;
    println!("copy at (1, 1) fits: {}", disjoint(&g, &pi, &clash));

    // The same questions in a free group.
    let f2 = GroupSpec::free(2)?;
    let t = Tile::from_words(&f2, &["", "a", "ab"])?;
    println!("F2 tile {{1, a, ab}}: frontier of {} elements", frontier(&f2, t.cells())?.len());
    Ok(())
}
