//! Finite-index normal subgroups, given as kernels of homomorphisms onto
//! finite groups acting regularly on `{0, .., q-1}`.
//!
//! The coset table uses the right action: point `p · s` is `images[s][p]`,
//! and a word acts letter by letter from the left.

mod schreier;

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Cayley, Element, GroupSpec, Symbol};

pub use schreier::{
    check_closure_invariance, check_closure_invariance_probe, free_reduce, schreier_generators, BasisWord,
    KernelPowerQuotient, QuotientKey, SchreierBasis,
};

/// Structured-text form: `{"degree": q, "images": {"a": [..], ..}}`.
/// Images of inverse symbols (`"a'"`) may be given and are then checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomDoc {
    pub degree: usize,
    pub images: BTreeMap<String, Vec<usize>>,
}

/// A homomorphism from a group model onto a finite permutation group whose
/// action on points is regular (so the kernel is normal of index `degree`).
#[derive(Clone, Debug)]
pub struct FiniteHom {
    degree: usize,
    /// One permutation per alphabet symbol.
    perms: Vec<Vec<u32>>,
    doc: HomDoc,
}

impl FiniteHom {
    pub fn from_json(spec: &GroupSpec, text: &str) -> Result<Self> {
        Self::from_doc(spec, serde_json::from_str(text)?)
    }

    pub fn from_doc(spec: &GroupSpec, doc: HomDoc) -> Result<Self> {
        let q = doc.degree;
        if q == 0 {
            return Err(Error::InvalidHom("degree must be positive".into()));
        }
        let alphabet = spec.alphabet();
        for key in doc.images.keys() {
            let sym = alphabet.parse_word(key)?;
            if sym.len() != 1 {
                return Err(Error::InvalidHom(format!("image key {key:?} is not a single symbol")));
            }
        }
        let mut perms: Vec<Option<Vec<u32>>> = vec![None; alphabet.len()];
        for (key, img) in &doc.images {
            let s = alphabet.parse_word(key)?[0];
            perms[s as usize] = Some(check_perm(key, img, q)?);
        }
        for s in alphabet.symbols() {
            let inv = alphabet.inverse(s);
            match (perms[s as usize].clone(), perms[inv as usize].clone()) {
                (Some(p), Some(pi)) => {
                    if invert(&p) != pi {
                        return Err(Error::InvalidHom(format!(
                            "image of {} is not the inverse of the image of {}",
                            alphabet.name(inv),
                            alphabet.name(s)
                        )));
                    }
                }
                (Some(p), None) => perms[inv as usize] = Some(invert(&p)),
                (None, Some(_)) => {}
                (None, None) => {
                    return Err(Error::InvalidHom(format!(
                        "no image for generator {}",
                        alphabet.name(s)
                    )))
                }
            }
        }
        let perms: Vec<Vec<u32>> = perms.into_iter().map(|p| p.unwrap()).collect();
        let hom = FiniteHom { degree: q, perms, doc };
        for r in spec.relators() {
            if !hom.is_identity_word(&r) {
                return Err(Error::InvalidHom(format!(
                    "relator {} does not map to the identity",
                    alphabet.format_word(&r)
                )));
            }
        }
        hom.check_regular()?;
        Ok(hom)
    }

    /// Builds the regular representation from arbitrary permutation images,
    /// e.g. a map onto `Z_m` given by residues.
    pub fn from_perms(spec: &GroupSpec, images: &[(&str, Vec<usize>)]) -> Result<Self> {
        let degree = images.first().map_or(0, |(_, p)| p.len());
        Self::from_doc(
            spec,
            HomDoc {
                degree,
                images: images.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            },
        )
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn doc(&self) -> &HomDoc {
        &self.doc
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.doc).expect("hom doc serializes")
    }

    pub fn act(&self, p: u32, word: &[Symbol]) -> u32 {
        word.iter().fold(p, |p, &s| self.perms[s as usize][p as usize])
    }

    fn is_identity_word(&self, word: &[Symbol]) -> bool {
        (0..self.degree as u32).all(|p| self.act(p, word) == p)
    }

    /// Transitive, and the generated group has exactly `degree` elements.
    fn check_regular(&self) -> Result<()> {
        let q = self.degree;
        let mut seen = vec![false; q];
        seen[0] = true;
        let mut queue = VecDeque::from([0u32]);
        while let Some(p) = queue.pop_front() {
            for perm in &self.perms {
                let t = perm[p as usize];
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    queue.push_back(t);
                }
            }
        }
        if seen.iter().any(|&b| !b) {
            return Err(Error::InvalidHom("action is not transitive".into()));
        }
        let identity: Vec<u32> = (0..q as u32).collect();
        let mut group: HashSet<Vec<u32>> = HashSet::from([identity.clone()]);
        let mut queue = VecDeque::from([identity]);
        while let Some(g) = queue.pop_front() {
            for perm in &self.perms {
                let h: Vec<u32> = g.iter().map(|&x| perm[x as usize]).collect();
                if group.insert(h.clone()) {
                    if group.len() > q {
                        return Err(Error::InvalidHom(
                            "action is not regular (kernel would not be normal)".into(),
                        ));
                    }
                    queue.push_back(h);
                }
            }
        }
        Ok(())
    }
}

fn check_perm(key: &str, img: &[usize], q: usize) -> Result<Vec<u32>> {
    if img.len() != q {
        return Err(Error::InvalidHom(format!("image of {key:?} has length {} != {q}", img.len())));
    }
    let mut seen = vec![false; q];
    for &x in img {
        if x >= q || seen[x] {
            return Err(Error::InvalidHom(format!("image of {key:?} is not a permutation")));
        }
        seen[x] = true;
    }
    Ok(img.iter().map(|&x| x as u32).collect())
}

fn invert(p: &[u32]) -> Vec<u32> {
    let mut out = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        out[x as usize] = i as u32;
    }
    out
}

/// Coset table with a shortlex BFS Schreier transversal.
#[derive(Clone, Debug)]
pub struct CosetTable {
    hom: FiniteHom,
    /// `table[p][s] = p · s`.
    table: Vec<Vec<u32>>,
    transversal: Vec<Vec<Symbol>>,
    /// BFS tree edge that first reached each point (`None` for point 0).
    tree_parent: Vec<Option<(u32, Symbol)>>,
}

pub fn build_coset_table(hom: &FiniteHom) -> CosetTable {
    let q = hom.degree;
    let nsym = hom.perms.len();
    let table: Vec<Vec<u32>> = (0..q)
        .map(|p| (0..nsym).map(|s| hom.perms[s][p]).collect())
        .collect();
    let mut transversal: Vec<Option<Vec<Symbol>>> = vec![None; q];
    let mut tree_parent = vec![None; q];
    transversal[0] = Some(Vec::new());
    let mut queue = VecDeque::from([0u32]);
    while let Some(p) = queue.pop_front() {
        for s in 0..nsym as Symbol {
            let t = table[p as usize][s as usize];
            if transversal[t as usize].is_none() {
                let mut w = transversal[p as usize].clone().unwrap();
                w.push(s);
                transversal[t as usize] = Some(w);
                tree_parent[t as usize] = Some((p, s));
                queue.push_back(t);
            }
        }
    }
    CosetTable {
        hom: hom.clone(),
        table,
        transversal: transversal.into_iter().map(|w| w.expect("transitive")).collect(),
        tree_parent,
    }
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.table.len()
    }

    pub fn hom(&self) -> &FiniteHom {
        &self.hom
    }

    pub fn step(&self, p: u32, s: Symbol) -> u32 {
        self.table[p as usize][s as usize]
    }

    /// `0 · word`: the coset of the element.
    pub fn point(&self, word: &[Symbol]) -> u32 {
        word.iter().fold(0, |p, &s| self.step(p, s))
    }

    /// The image `ε(g)`, identified with the point it sends 0 to.
    pub fn coset(&self, g: &Element) -> u32 {
        self.point(g.word())
    }

    pub fn transversal(&self) -> &[Vec<Symbol>] {
        &self.transversal
    }

    pub fn table(&self) -> &[Vec<u32>] {
        &self.table
    }

    pub(crate) fn is_tree_edge(&self, p: u32, s: Symbol) -> bool {
        let t = self.step(p, s);
        self.tree_parent[t as usize] == Some((p, s))
    }
}

/// Membership in the kernel. By regularity, fixing point 0 means fixing every point.
pub fn kernel_contains(table: &CosetTable, g: &Element) -> bool {
    table.point(g.word()) == 0
}

/// BFS over spheres in shortlex order: the shortlex-least element of minimal
/// length in `N \ {1}`.
pub fn min_kernel_element(spec: &GroupSpec, table: &CosetTable, cap: usize) -> Result<Element> {
    Ok(min_kernel_elements(spec, table, cap)?.remove(0))
}

/// Every element of minimal length in `N \ {1}`, in shortlex order.
pub fn min_kernel_elements(spec: &GroupSpec, table: &CosetTable, cap: usize) -> Result<Vec<Element>> {
    if cap == 0 {
        return Err(Error::CapExhausted("cap must be at least 1".into()));
    }
    let mut cayley = Cayley::new(spec);
    let mut seen: HashSet<u32> = HashSet::from([cayley.identity()]);
    let mut sphere = vec![cayley.identity()];
    for r in 1..=cap {
        let mut next = Vec::new();
        for &x in &sphere {
            for y in cayley.neighbors(x)? {
                if seen.insert(y) {
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            return Err(Error::TrivialKernel);
        }
        let mut found: Vec<Element> = next
            .iter()
            .map(|&id| cayley.element(id))
            .filter(|e| kernel_contains(table, e))
            .cloned()
            .collect();
        if !found.is_empty() {
            found.sort();
            return Ok(found);
        }
        if seen.len() > spec.max_ball() {
            return Err(Error::ResourceCap(format!("ball of radius {r} exceeds the cap")));
        }
        sphere = next;
    }
    Err(Error::CapExhausted(format!("no kernel element of length <= {cap}")))
}

/// The minimal-generator property: the shortest listed generator is as short
/// as the shortest nontrivial kernel element.
pub fn check_c2(spec: &GroupSpec, table: &CosetTable, generators: &[Element], cap: usize) -> Result<bool> {
    if let Some(g) = generators.iter().find(|g| !kernel_contains(table, g)) {
        return Err(Error::InvalidHom(format!("{} is not in the kernel", spec.format(g))));
    }
    let shortest = generators
        .iter()
        .filter(|g| !g.is_identity())
        .map(|g| g.len())
        .min()
        .ok_or(Error::EmptySet)?;
    let min = min_kernel_element(spec, table, cap)?;
    Ok(shortest == min.len())
}

/// Result of an injectivity-radius measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InjectivityRadius {
    /// The largest radius on which the map is injective.
    Exact(usize),
    /// No collision up to and including the cap.
    AtLeast(usize),
}

impl InjectivityRadius {
    pub fn at_least(&self, r: usize) -> bool {
        match *self {
            InjectivityRadius::Exact(x) | InjectivityRadius::AtLeast(x) => x >= r,
        }
    }
}

impl std::fmt::Display for InjectivityRadius {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InjectivityRadius::Exact(r) => write!(f, "{r}"),
            InjectivityRadius::AtLeast(r) => write!(f, ">= {r}"),
        }
    }
}

/// Largest `r <= cap` such that the quotient map `before -> after`
/// (identifying generators by name) is injective on `B_r(1)`.
pub fn injectivity_radius(before: &GroupSpec, after: &GroupSpec, cap: usize) -> Result<InjectivityRadius> {
    injectivity_radius_by(before, cap, |w| {
        Ok(after.normal_form(&after.translate_word(before, w)?).word().to_vec())
    })
}

/// Same as [`injectivity_radius`], with the quotient given by an equality
/// key: two words are equal in the quotient iff their keys are equal.
pub fn injectivity_radius_by<K, F>(before: &GroupSpec, cap: usize, mut key: F) -> Result<InjectivityRadius>
where
    K: std::hash::Hash + Eq,
    F: FnMut(&[Symbol]) -> Result<K>,
{
    let mut cayley = Cayley::new(before);
    let mut images: HashMap<K, u32> = HashMap::new();
    images.insert(key(&[])?, cayley.identity());
    let mut seen: HashSet<u32> = HashSet::from([cayley.identity()]);
    let mut sphere = vec![cayley.identity()];
    for r in 1..=cap {
        let mut next = Vec::new();
        for &x in &sphere {
            for y in cayley.neighbors(x)? {
                if seen.insert(y) {
                    next.push(y);
                }
            }
        }
        for &y in &next {
            let k = key(cayley.element(y).word())?;
            if images.insert(k, y).is_some() {
                return Ok(InjectivityRadius::Exact(r - 1));
            }
        }
        if next.is_empty() {
            break;
        }
        sphere = next;
    }
    Ok(InjectivityRadius::AtLeast(cap))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn f2_to_z2(spec: &GroupSpec) -> FiniteHom {
        FiniteHom::from_perms(spec, &[("a", vec![1, 0]), ("b", vec![0, 1])]).unwrap()
    }

    #[test]
    fn coset_tables() {
        let f2 = GroupSpec::free(2).unwrap();
        let t = build_coset_table(&f2_to_z2(&f2));
        assert_eq!(t.index(), 2);
        let words: Vec<String> = t.transversal().iter().map(|w| f2.alphabet().format_word(w)).collect();
        assert_eq!(words, ["", "a"]);

        let v4 = FiniteHom::from_perms(&f2, &[("a", vec![1, 0, 3, 2]), ("b", vec![2, 3, 0, 1])]).unwrap();
        let t = build_coset_table(&v4);
        let words: Vec<String> = t.transversal().iter().map(|w| f2.alphabet().format_word(w)).collect();
        assert_eq!(words, ["", "a", "b", "ab"]);

        let z2 = GroupSpec::grid(2).unwrap();
        let z3z3 = z3_squared(&z2);
        assert_eq!(build_coset_table(&z3z3).index(), 9);
    }

    pub(crate) fn z3_squared(z2: &GroupSpec) -> FiniteHom {
        // point 3i + j <-> (i, j)
        let a: Vec<usize> = (0..9).map(|p| (p / 3 + 1) % 3 * 3 + p % 3).collect();
        let b: Vec<usize> = (0..9).map(|p| p / 3 * 3 + (p % 3 + 1) % 3).collect();
        FiniteHom::from_perms(z2, &[("a", a), ("b", b)]).unwrap()
    }

    #[test]
    fn hom_validation() {
        let f2 = GroupSpec::free(2).unwrap();
        // non-transitive
        let err = FiniteHom::from_perms(&f2, &[("a", vec![1, 0, 2]), ("b", vec![0, 1, 2])]).unwrap_err();
        assert!(err.to_string().contains("transitive"));
        // transitive but not regular (S3 on 3 points)
        let err = FiniteHom::from_perms(&f2, &[("a", vec![1, 2, 0]), ("b", vec![1, 0, 2])]).unwrap_err();
        assert!(err.to_string().contains("regular"));
        // relator violation: a^3 = 1 cannot map to a transposition
        let fpc = GroupSpec::free_product_cyclic(&[3, 3]).unwrap();
        let err = FiniteHom::from_perms(&fpc, &[("a", vec![1, 0]), ("b", vec![0, 1])]).unwrap_err();
        assert!(err.to_string().contains("relator"));
        // an involution must map to an involution
        let fpc = GroupSpec::free_product_cyclic(&[2, 2]).unwrap();
        assert!(FiniteHom::from_perms(&fpc, &[("a", vec![1, 2, 0]), ("b", vec![0, 1, 2])]).is_err());
        // inconsistent inverse image
        let doc = HomDoc {
            degree: 3,
            images: [("a".to_string(), vec![1, 2, 0]), ("a'".to_string(), vec![1, 2, 0]), ("b".to_string(), vec![0, 1, 2])]
                .into_iter()
                .collect(),
        };
        assert!(FiniteHom::from_doc(&f2, doc).is_err());
        // json round trip
        let hom = f2_to_z2(&f2);
        let again = FiniteHom::from_json(&f2, &hom.to_json()).unwrap();
        assert_eq!(again.doc(), hom.doc());
    }

    #[test]
    fn kernel_membership() {
        let f2 = GroupSpec::free(2).unwrap();
        let t = build_coset_table(&f2_to_z2(&f2));
        assert!(kernel_contains(&t, &f2.parse("aa").unwrap()));
        assert!(!kernel_contains(&t, &f2.parse("a").unwrap()));
        assert!(kernel_contains(&t, &f2.parse("baab'").unwrap()));
    }

    #[test]
    fn minimal_kernel_elements() {
        let f2 = GroupSpec::free(2).unwrap();
        let v4 = FiniteHom::from_perms(&f2, &[("a", vec![1, 0, 3, 2]), ("b", vec![2, 3, 0, 1])]).unwrap();
        let t = build_coset_table(&v4);
        assert_eq!(f2.format(&min_kernel_element(&f2, &t, 4).unwrap()), "aa");

        let z2 = GroupSpec::grid(2).unwrap();
        let t = build_coset_table(&z3_squared(&z2));
        assert_eq!(f2.format(&min_kernel_element(&z2, &t, 4).unwrap()), "aaa");
        assert!(matches!(min_kernel_element(&z2, &t, 2), Err(Error::CapExhausted(_))));

        let fpc = GroupSpec::free_product_cyclic(&[2]).unwrap();
        let hom = FiniteHom::from_perms(&fpc, &[("a", vec![1, 0])]).unwrap();
        let t = build_coset_table(&hom);
        assert!(matches!(min_kernel_element(&fpc, &t, 5), Err(Error::TrivialKernel)));
    }

    #[test]
    fn c2_examples() {
        let f2 = GroupSpec::free(2).unwrap();
        let t = build_coset_table(&f2_to_z2(&f2));
        let good = f2.element_set(["b", "aa", "aba'"]).unwrap();
        let good: Vec<Element> = good.into_iter().collect();
        assert!(check_c2(&f2, &t, &good, 4).unwrap());
        let bad: Vec<Element> = ["baa", "aa", "aba'"].iter().map(|w| f2.parse(w).unwrap()).collect();
        assert!(!check_c2(&f2, &t, &bad, 4).unwrap());

        let trivial = FiniteHom::from_perms(&f2, &[("a", vec![0]), ("b", vec![0])]).unwrap();
        let t = build_coset_table(&trivial);
        let ab: Vec<Element> = ["a", "b"].iter().map(|w| f2.parse(w).unwrap()).collect();
        assert!(check_c2(&f2, &t, &ab, 4).unwrap());
    }

    #[test]
    fn injectivity_examples() {
        let z = GroupSpec::free(1).unwrap();
        let c7 = GroupSpec::free_product_cyclic(&[7]).unwrap();
        assert_eq!(injectivity_radius(&z, &c7, 10).unwrap(), InjectivityRadius::Exact(3));
        let f2 = GroupSpec::free(2).unwrap();
        let fpc = GroupSpec::free_product_cyclic(&[6, 6]).unwrap();
        assert_eq!(injectivity_radius(&f2, &fpc, 10).unwrap(), InjectivityRadius::Exact(2));
        assert_eq!(injectivity_radius(&f2, &f2, 5).unwrap(), InjectivityRadius::AtLeast(5));
    }
}
