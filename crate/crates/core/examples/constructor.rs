//! The transversal construction: premise search, one pipeline run on a
//! finite quotient, and the bookkeeping of one stage of the quotient tower.
//! Failures are reported step by step rather than hidden.

use heesch::construct::{check_premises, premise_search, run_pipeline, run_stage, PipelineOptions, PremiseSearchOptions, StageOptions};
use heesch::subgroup::{build_coset_table, FiniteHom};
use heesch::{Error, GroupSpec, Result};

fn main() -> Result<()> {
    let f2 = GroupSpec::free(2)?;
    let r = check_premises(&f2, 8)?;
    println!("F2: girth ok = {}, triple paths within 8 = {:?}", r.girth_ok, r.s);

    let found = premise_search(&PremiseSearchOptions { limit: 3, ..PremiseSearchOptions::default() })?;
    for c in &found {
        println!("premises hold for <a, b | {}> with s = {}", c.relator, c.s);
    }
    let Some(first) = found.first() else { return Ok(()) };
    let spec = GroupSpec::from_doc(first.group.clone())?;

    // Try every cyclic quotient a -> 1, b -> j of order up to 12.
    let opts = PipelineOptions { rho: Some(1), ..PipelineOptions::default() };
    'outer: for q in 3..=12usize {
        for j in 0..q {
            let shift = |k: usize| (0..q).map(|p| (p + k) % q).collect::<Vec<_>>();
            let Ok(hom) = FiniteHom::from_perms(&spec, &[("a", shift(1)), ("b", shift(j))]) else { continue };
            match run_pipeline(&spec, &build_coset_table(&hom), &opts) {
                Ok(out) => {
                    println!("Z{q} (b -> {j}): tile of {} cells, certificate {}", out.tile.len(), &out.certificate.digest[..16]);
                    break 'outer;
                }
                Err(Error::Step { step, source, report }) => {
                    let rejected = report["rejected"].as_array().map_or(0, Vec::len);
                    println!("Z{q} (b -> {j}): stopped at {step}: {source} ({rejected} candidates rejected)");
                }
                Err(e) => println!("Z{q} (b -> {j}): {e}"),
            }
        }
    }

    // Stage bookkeeping survives a failed pipeline.
    let trivial = FiniteHom::from_perms(&f2, &[("a", vec![0]), ("b", vec![0])])?;
    let opts = StageOptions { injectivity_cap: 5, ..StageOptions::default() };
    match run_stage(&f2, &trivial, 0, 7, &[], &opts) {
        Ok(rec) => println!("stage 0: {}", serde_json::to_string(&rec)?),
        Err(Error::Step { step, report, .. }) => println!(
            "stage 0 stopped at {step}; radii r = {}, required radius {}, injectivity {}",
            report["r"], report["required_radius"], report["injectivity"]
        ),
        Err(e) => return Err(e),
    }
    Ok(())
}
