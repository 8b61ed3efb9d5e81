//! The four group models: normal forms, products, balls and spec documents.

use heesch::{GroupSpec, Result};

fn show(name: &str, spec: &GroupSpec, words: &[&str]) -> Result<()> {
    println!("{name}  ({})", spec.to_json());
    let xs = words.iter().map(|w| spec.parse(w)).collect::<Result<Vec<_>>>()?;
    for (w, x) in words.iter().zip(&xs) {
        println!("  {w:>8} -> {:<8} |x| = {}", spec.format(x), spec.length(x));
    }
    let prod = xs.iter().fold(spec.identity(), |acc, x| spec.mul(&acc, x));
    println!("  product of all: {}", spec.format(&prod));
    let sizes: Vec<usize> = spec.spheres(4)?.iter().map(Vec::len).collect();
    println!("  sphere sizes r = 0..4: {sizes:?}");
    println!("  digest {}", &spec.digest()[..16]);
    Ok(())
}

fn main() -> Result<()> {
    show("Z^2", &GroupSpec::grid(2)?, &["ab'a", "ba'b'", "aab"])?;
    show("F2", &GroupSpec::free(2)?, &["abb'a", "ba'", "a'a'"])?;
    show("Z2 * Z3", &GroupSpec::free_product_cyclic(&[2, 3])?, &["aa", "bbbb", "ab'"])?;

    // The Klein four-group as a confluent rewriting system.
    let v4 = GroupSpec::rewriting(&["a", "b"], &["a", "b"], &[("aa", ""), ("bb", ""), ("ba", "ab")])?;
    let report = v4.validate_rewriting()?;
    println!("V4 rewriting system: {} rules, {} critical pairs resolved", report.rules, report.critical_pairs);
    show("V4", &v4, &["abab", "bab", "ba"])?;

    // Specs round-trip through their JSON documents.
    let again = GroupSpec::from_json(&v4.to_json())?;
    assert_eq!(again.digest(), v4.digest());
    Ok(())
}
