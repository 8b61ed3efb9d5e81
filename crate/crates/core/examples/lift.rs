//! Lifting a tiling of a finite quotient back to Z^2.

use heesch::construct::lift_tiling;
use heesch::subgroup::{build_coset_table, FiniteHom};
use heesch::tiling::verify_partition;
use heesch::{ElementSet, GroupSpec, Result, Tile};

fn main() -> Result<()> {
    let g = GroupSpec::grid(2)?;
    // Z^2 -> Z2 x Z2, (u, v) -> (u mod 2, v mod 2).
    let hom = FiniteHom::from_perms(&g, &[("a", vec![1, 0, 3, 2]), ("b", vec![2, 3, 0, 1])])?;
    let table = build_coset_table(&hom);
    // Two diagonal cells: a disconnected tile that still tiles the quotient.
    let tile = Tile::from_coords(&g, &[(0, 0), (1, 1)])?;
    let centers = [g.identity(), g.parse("a")?];
    let region: ElementSet = (-4..=5)
        .flat_map(|u| (-4..=5).map(move |v| (u, v)))
        .map(|(u, v)| g.grid_element(&[u, v]))
        .collect::<Result<_>>()?;
    let pi = lift_tiling(&g, &table, &tile, &centers, &region)?;
    println!(
        "tile connected = {}; {} copies cover the {}-cell box exactly: {}",
        tile.is_connected(),
        pi.centers().len(),
        region.len(),
        verify_partition(&pi, &region)
    );
    for v in (-4..=5).rev() {
        let row: String = (-4..=5)
            .map(|u| {
                let x = g.grid_element(&[u, v]).unwrap();
                let owner = pi.owner(&x).and_then(|c| pi.centers().iter().position(|d| d == c)).unwrap_or(0);
                char::from(b'!' + (owner % 90) as u8)
            })
            .collect();
        println!("  {row}");
    }
    Ok(())
}
