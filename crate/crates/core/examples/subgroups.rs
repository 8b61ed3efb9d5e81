//! Finite quotients, coset tables, Schreier generators and injectivity radii.

use heesch::subgroup::{build_coset_table, check_c2, injectivity_radius, min_kernel_element, schreier_generators, FiniteHom};
use heesch::{GroupSpec, Result};

fn main() -> Result<()> {
    // F2 onto the symmetric group S3, acting on cosets of the identity.
    let f2 = GroupSpec::free(2)?;
    let s3 = [vec![1, 0, 3, 2, 5, 4], vec![2, 4, 0, 5, 1, 3]];
    let hom = FiniteHom::from_perms(&f2, &[("a", s3[0].clone()), ("b", s3[1].clone())])?;
    let table = build_coset_table(&hom);
    let basis = schreier_generators(&f2, &table)?;
    println!("F2 -> S3: index {}, kernel is free of rank {}", table.index(), basis.len());
    for g in &basis.generators {
        let back = basis.evaluate(&f2, &basis.rewrite(&f2, &table, g.word())?);
        assert_eq!(&back, g);
        print!("{} ", f2.format(g));
    }
    println!();
    let short = min_kernel_element(&f2, &table, 8)?;
    println!(
        "shortest kernel element: {} (length {}); basis contains it: {}",
        f2.format(&short),
        short.len(),
        check_c2(&f2, &table, &basis.generators, 8)?
    );

    // How far the quotient map F2 -> Z_m * Z_m is injective.
    for m in [3, 4, 5, 6, 7] {
        let target = GroupSpec::free_product_cyclic(&[m, m])?;
        println!("F2 -> Z{m} * Z{m}: injective on balls of radius {:?}", injectivity_radius(&f2, &target, 6)?);
    }
    Ok(())
}
