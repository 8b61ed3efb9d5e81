use std::collections::HashMap;

use super::{kernel_contains, CosetTable};
use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec, Model, Symbol};

/// A word in the Schreier generators: `(index, inverted)` letters.
pub type BasisWord = Vec<(usize, bool)>;

/// Schreier generators `t_p s t_{p·s}^{-1}` for non-tree edges `(p, s)`
/// with `s` a positive generator. For an involution `s`, the edges `(p, s)`
/// and `(p·s, s)` give mutually inverse elements and only the one with the
/// smaller point is kept.
#[derive(Clone, Debug)]
pub struct SchreierBasis {
    pub generators: Vec<Element>,
    words: Vec<Vec<Symbol>>,
    edges: Vec<(u32, Symbol)>,
    index: HashMap<(u32, Symbol), usize>,
}

pub fn schreier_generators(spec: &GroupSpec, table: &CosetTable) -> Result<SchreierBasis> {
    match spec.model() {
        Model::Free { .. } | Model::FreeProductCyclic { .. } => {}
        _ => {
            return Err(Error::Unsupported(
                "Schreier generators need a free or free-product domain".into(),
            ))
        }
    }
    let alphabet = spec.alphabet();
    let mut basis = SchreierBasis {
        generators: Vec::new(),
        words: Vec::new(),
        edges: Vec::new(),
        index: HashMap::new(),
    };
    let gens: Vec<Symbol> = alphabet.generators().collect();
    for p in 0..table.index() as u32 {
        for &s in &gens {
            let q = table.step(p, s);
            let keep = if alphabet.inverse(s) == s {
                !table.is_tree_edge(p, s) && !table.is_tree_edge(q, s) && p <= q
            } else {
                // The BFS tree may reach `q` from `p` through an inverse letter.
                !table.is_tree_edge(p, s) && !table.is_tree_edge(q, alphabet.inverse(s))
            };
            if !keep {
                continue;
            }
            let mut w = table.transversal()[p as usize].clone();
            w.push(s);
            w.extend(alphabet.invert_word(&table.transversal()[q as usize]));
            basis.index.insert((p, s), basis.words.len());
            basis.generators.push(spec.normal_form(&w));
            basis.words.push(w);
            basis.edges.push((p, s));
        }
    }
    debug_assert!(basis.generators.iter().all(|h| kernel_contains(table, h)));
    Ok(basis)
}

impl SchreierBasis {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Unreduced defining word `t_p s t_q^{-1}` of generator `i`.
    pub fn word(&self, i: usize) -> &[Symbol] {
        &self.words[i]
    }

    /// Index of the generator equal to `h` or `h^{-1}`, with the inversion flag.
    pub fn position(&self, spec: &GroupSpec, h: &Element) -> Option<(usize, bool)> {
        if let Some(i) = self.generators.iter().position(|g| g == h) {
            return Some((i, false));
        }
        let hi = spec.inverse(h);
        self.generators.iter().position(|g| *g == hi).map(|i| (i, true))
    }

    /// Schreier rewriting: expresses a kernel word in the basis.
    pub fn rewrite(&self, spec: &GroupSpec, table: &CosetTable, word: &[Symbol]) -> Result<BasisWord> {
        let alphabet = spec.alphabet();
        let mut out = Vec::new();
        let mut p = 0u32;
        for &x in word {
            let (letter, inv) = alphabet.letter_of(x);
            let s = alphabet.symbol(letter, false);
            let q = table.step(p, x);
            if alphabet.inverse(s) == s {
                let (from, flip) = if p <= q { (p, false) } else { (q, true) };
                if let Some(&i) = self.index.get(&(from, s)) {
                    out.push((i, flip));
                }
            } else if inv {
                if let Some(&i) = self.index.get(&(q, s)) {
                    out.push((i, true));
                }
            } else if let Some(&i) = self.index.get(&(p, s)) {
                out.push((i, false));
            }
            p = q;
        }
        if p != 0 {
            return Err(Error::InvalidHom(format!(
                "{} is not in the kernel",
                alphabet.format_word(word)
            )));
        }
        Ok(out)
    }

    /// The element named by a basis word.
    pub fn evaluate(&self, spec: &GroupSpec, word: &[(usize, bool)]) -> Element {
        let alphabet = spec.alphabet();
        let mut w = Vec::new();
        for &(i, inv) in word {
            if inv {
                w.extend(alphabet.invert_word(&self.words[i]));
            } else {
                w.extend_from_slice(&self.words[i]);
            }
        }
        spec.normal_form(&w)
    }
}

/// Free reduction of a basis word.
pub fn free_reduce(word: &[(usize, bool)]) -> BasisWord {
    let mut out: BasisWord = Vec::with_capacity(word.len());
    for &(i, inv) in word {
        if out.last() == Some(&(i, !inv)) {
            out.pop();
        } else {
            out.push((i, inv));
        }
    }
    out
}

/// Syllable normal form in the free product of cyclic groups `<h_i | h_i^m>`
/// over the indices with `torsion(i)`, other basis letters free. Exponents of
/// torsion letters are kept in `1..m`.
fn syllables(word: &[(usize, bool)], m: i64, torsion: impl Fn(usize) -> bool) -> Vec<(usize, i64)> {
    let mut out: Vec<(usize, i64)> = Vec::new();
    for &(i, inv) in word {
        let step = if inv { -1 } else { 1 };
        match out.last_mut() {
            Some((j, e)) if *j == i => {
                *e += step;
                if torsion(i) {
                    *e = e.rem_euclid(m);
                }
                if *e == 0 {
                    out.pop();
                }
            }
            _ => {
                let e = if torsion(i) { step.rem_euclid(m) } else { step };
                out.push((i, e));
            }
        }
    }
    out
}

fn require_free(spec: &GroupSpec, m: i64) -> Result<()> {
    if !matches!(spec.model(), Model::Free { .. }) {
        return Err(Error::Unsupported("closure invariance needs a free domain".into()));
    }
    if m < 2 {
        return Err(Error::InvalidSpec(format!("exponent {m} < 2")));
    }
    Ok(())
}

fn conjugate_power(spec: &GroupSpec, t: &[Symbol], h: &[Symbol], m: i64) -> Vec<Symbol> {
    let mut w = t.to_vec();
    for _ in 0..m {
        w.extend_from_slice(h);
    }
    w.extend(spec.alphabet().invert_word(t));
    w
}

/// Whether every conjugate `t h_i^m t^{-1}` (t over the transversal) lies in
/// the normal closure of `{h_j^m}` inside the kernel, decided by Schreier
/// rewriting followed by syllable reduction with exponents mod `m`.
pub fn check_closure_invariance(spec: &GroupSpec, table: &CosetTable, basis: &SchreierBasis, m: i64) -> Result<bool> {
    let all: Vec<usize> = (0..basis.len()).collect();
    closure_invariance(spec, table, basis, m, &all)
}

/// Diagnostic variant: only the basis letters in `probe` are given the
/// relation `h^m = 1`, and only their conjugates are tested.
pub fn check_closure_invariance_probe(
    spec: &GroupSpec,
    table: &CosetTable,
    basis: &SchreierBasis,
    m: i64,
    probe: &[usize],
) -> Result<bool> {
    if let Some(&i) = probe.iter().find(|&&i| i >= basis.len()) {
        return Err(Error::InvalidSpec(format!("probe index {i} out of range")));
    }
    closure_invariance(spec, table, basis, m, probe)
}

fn closure_invariance(
    spec: &GroupSpec,
    table: &CosetTable,
    basis: &SchreierBasis,
    m: i64,
    set: &[usize],
) -> Result<bool> {
    require_free(spec, m)?;
    for t in table.transversal() {
        for &i in set {
            let w = conjugate_power(spec, t, basis.word(i), m);
            let rewritten = basis.rewrite(spec, table, &w)?;
            if !syllables(&rewritten, m, |j| set.contains(&j)).is_empty() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The quotient `F / <<h_i^p>>` of a free group by powers of a Schreier
/// basis of a finite-index normal subgroup. Valid only when closure
/// invariance holds; then the kernel image is the free product of `Z_p`
/// over the basis and equality is decided by [`KernelPowerQuotient::key`].
#[derive(Clone, Debug)]
pub struct KernelPowerQuotient {
    table: CosetTable,
    basis: SchreierBasis,
    p: i64,
}

/// Equality key: the coset, then the reduced syllables of `w t^{-1}`.
pub type QuotientKey = (u32, Vec<(usize, i64)>);

impl KernelPowerQuotient {
    pub fn new(spec: &GroupSpec, table: &CosetTable, basis: &SchreierBasis, p: i64) -> Result<Self> {
        if !check_closure_invariance(spec, table, basis, p)? {
            return Err(Error::Unsupported(format!(
                "the quotient by {p}-th powers of this basis is not expressible (closure invariance fails)"
            )));
        }
        Ok(KernelPowerQuotient {
            table: table.clone(),
            basis: basis.clone(),
            p,
        })
    }

    pub fn exponent(&self) -> i64 {
        self.p
    }

    pub fn key(&self, spec: &GroupSpec, word: &[Symbol]) -> Result<QuotientKey> {
        let q = self.table.point(word);
        let mut w = word.to_vec();
        w.extend(spec.alphabet().invert_word(&self.table.transversal()[q as usize]));
        let rewritten = self.basis.rewrite(spec, &self.table, &w)?;
        Ok((q, syllables(&rewritten, self.p, |_| true)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroup::{build_coset_table, FiniteHom};

    fn names(spec: &GroupSpec, b: &SchreierBasis) -> Vec<String> {
        b.generators.iter().map(|g| spec.format(g)).collect()
    }

    #[test]
    fn f2_onto_z2() {
        let f2 = GroupSpec::free(2).unwrap();
        let hom = FiniteHom::from_perms(&f2, &[("a", vec![1, 0]), ("b", vec![0, 1])]).unwrap();
        let t = build_coset_table(&hom);
        let b = schreier_generators(&f2, &t).unwrap();
        let mut got = names(&f2, &b);
        got.sort();
        assert_eq!(got, ["aa", "aba'", "b"]);
    }

    #[test]
    fn inverse_tree_edges_are_not_generators() {
        // Z3 is reached as 0 -a-> 1 and 0 -a'-> 2; the edge 2 -a-> 0 is a tree edge.
        let f2 = GroupSpec::free(2).unwrap();
        let hom = FiniteHom::from_perms(&f2, &[("a", vec![1, 2, 0]), ("b", vec![0, 1, 2])]).unwrap();
        let table = build_coset_table(&hom);
        let basis = schreier_generators(&f2, &table).unwrap();
        assert_eq!(basis.len(), 4);
        assert!(basis.generators.iter().all(|g| !g.is_identity()));
    }

    #[test]
    fn trivial_quotient_gives_the_alphabet() {
        let f3 = GroupSpec::free(3).unwrap();
        let hom = FiniteHom::from_perms(&f3, &[("a", vec![0]), ("b", vec![0]), ("c", vec![0])]).unwrap();
        let t = build_coset_table(&hom);
        assert_eq!(names(&f3, &schreier_generators(&f3, &t).unwrap()), ["a", "b", "c"]);
    }

    #[test]
    fn closure_invariance_examples() {
        let f2 = GroupSpec::free(2).unwrap();
        let hom = FiniteHom::from_perms(&f2, &[("a", vec![1, 0]), ("b", vec![0, 1])]).unwrap();
        let t = build_coset_table(&hom);
        let b = schreier_generators(&f2, &t).unwrap();
        assert!(check_closure_invariance(&f2, &t, &b, 2).unwrap());
        let (ib, _) = b.position(&f2, &f2.parse("b").unwrap()).unwrap();
        assert!(!check_closure_invariance_probe(&f2, &t, &b, 2, &[ib]).unwrap());
        // a b^2 a^{-1} rewrites to (aba')^2
        let w = f2.alphabet().parse_word("abba'").unwrap();
        let (iaba, _) = b.position(&f2, &f2.parse("aba'").unwrap()).unwrap();
        assert_eq!(b.rewrite(&f2, &t, &w).unwrap(), vec![(iaba, false), (iaba, false)]);
    }

    #[test]
    fn involution_pairs_in_free_products() {
        let fpc = GroupSpec::free_product_cyclic(&[2, 3]).unwrap();
        let hom = FiniteHom::from_perms(&fpc, &[("a", vec![1, 0]), ("b", vec![0, 1])]).unwrap();
        let t = build_coset_table(&hom);
        let b = schreier_generators(&fpc, &t).unwrap();
        // edge (0,a) is the tree edge; (1,a) returns along it, so only b-loops remain
        let mut got = names(&fpc, &b);
        got.sort();
        assert_eq!(got, ["aba", "b"]);
        for w in ["abab'", "bb", "ab'a"] {
            let word = fpc.alphabet().parse_word(w).unwrap();
            let bw = b.rewrite(&fpc, &t, &word).unwrap();
            assert_eq!(b.evaluate(&fpc, &bw), fpc.normal_form(&word));
        }
    }

    #[test]
    fn power_quotient_key_matches_cyclic_product() {
        // index 1: F2 / <<a^5, b^5>> is Z5 * Z5
        let f2 = GroupSpec::free(2).unwrap();
        let hom = FiniteHom::from_perms(&f2, &[("a", vec![0]), ("b", vec![0])]).unwrap();
        let t = build_coset_table(&hom);
        let b = schreier_generators(&f2, &t).unwrap();
        let kq = KernelPowerQuotient::new(&f2, &t, &b, 5).unwrap();
        let fpc = GroupSpec::free_product_cyclic(&[5, 5]).unwrap();
        let r1 = crate::subgroup::injectivity_radius(&f2, &fpc, 6).unwrap();
        let r2 = crate::subgroup::injectivity_radius_by(&f2, 6, |w| kq.key(&f2, w)).unwrap();
        assert_eq!(r1, r2);
    }
}
