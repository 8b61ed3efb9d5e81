//! Heesch number evaluation with certificates that verify without search.

use std::time::Instant;

use heesch::{heesch_eval, heesch_ge, verify_certificate, EvalOptions, GeOutcome, GroupSpec, Result, SearchOptions, Tile, Verdict};

fn main() -> Result<()> {
    let g = GroupSpec::grid(2)?;
    let tiles = [
        ("domino", vec![(0, 0), (1, 0)]),
        ("L-tetromino", vec![(0, 0), (1, 0), (2, 0), (0, 1)]),
        ("ring octomino", vec![(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)]),
    ];
    for (name, coords) in &tiles {
        let tile = Tile::from_coords(&g, coords)?;
        let t = Instant::now();
        let cert = heesch_eval(&g, &tile, &EvalOptions::default())?;
        let verdict = match &cert.verdict {
            Verdict::TilesPeriodic { .. } => "tiles the plane".to_string(),
            Verdict::ExactlyWithinRadius { n, radius } => format!("Heesch number {n} (refuted {} within radius {radius})", n + 1),
            Verdict::AtLeast { n } => format!("at least {n}"),
        };
        let check = verify_certificate(Some(&g), &cert)?;
        println!("{name:>14}: {verdict}; certificate valid = {} ({:.1?})", check.valid, t.elapsed());
    }

    // A direct lower-bound query, here in a free group.
    let f2 = GroupSpec::free(2)?;
    let tile = Tile::from_words(&f2, &["", "a"])?;
    match heesch_ge(&f2, &tile, 2, &SearchOptions::default())? {
        GeOutcome::Found(cert) => {
            println!("F2 tile {{1, a}}: {} layers found, digest {}", cert.layer_count(), &cert.digest[..16]);
            // Tampering with any field is caught.
            let mut bad = cert.clone();
            bad.tile.pop();
            println!("  tampered copy: {:?}", verify_certificate(None, &bad)?.reason);
        }
        GeOutcome::Exhausted(ex) => println!("F2 tile {{1, a}}: exhausted, conclusive = {}", ex.conclusive),
    }
    Ok(())
}
