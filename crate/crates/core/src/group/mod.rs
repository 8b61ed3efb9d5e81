//! Group models with canonical normal forms over a fixed symmetric
//! generating set, plus the word metric and set-level operations built on it.
//!
//! Every element is stored as its shortlex-least geodesic word, so equality of
//! [`Element`]s is equality of group elements and `|g|` is the word length.

mod alphabet;
mod cayley;
mod rewriting;

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub use alphabet::{Alphabet, Symbol};
pub use cayley::{Cayley, NodeId};
pub use rewriting::{complete, RewritingReport, RewritingSystem};

/// Default cap on the number of elements a single ball enumeration may produce.
pub const DEFAULT_MAX_BALL: usize = 5_000_000;

/// A group element, held as its canonical (shortlex-least geodesic) word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Element(Vec<Symbol>);

impl Element {
    pub fn identity() -> Self {
        Element(Vec::new())
    }

    pub fn word(&self) -> &[Symbol] {
        &self.0
    }

    /// Word length, which is the Cayley-metric length `|g|`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        shortlex(&self.0, &other.0)
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex comparison of symbol sequences: shorter first, then lexicographic.
pub fn shortlex(a: &[Symbol], b: &[Symbol]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// A finite set of elements, iterated in shortlex order.
pub type ElementSet = BTreeSet<Element>;

/// Structured-text form of a group spec.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum GroupDoc {
    Grid {
        dim: usize,
    },
    Free {
        rank: usize,
    },
    FreeProductCyclic {
        orders: Vec<u32>,
    },
    Rewriting {
        generators: Vec<String>,
        inverses: Vec<String>,
        rules: Vec<(String, String)>,
    },
}

#[derive(Clone, Debug)]
pub enum Model {
    /// `Z^d` with generators `±e_i`.
    Grid { dim: usize },
    /// Free group of the given rank.
    Free { rank: usize },
    /// Free product of cyclic groups `Z_{m_1} * ... * Z_{m_k}`.
    FreeProductCyclic { orders: Vec<u32> },
    /// A user-supplied complete rewriting system.
    Rewriting(RewritingSystem),
}

#[derive(Clone, Debug)]
pub struct GroupSpec {
    model: Model,
    alphabet: Alphabet,
    doc: GroupDoc,
    max_ball: usize,
}

impl PartialEq for GroupSpec {
    fn eq(&self, other: &Self) -> bool {
        self.doc == other.doc
    }
}

impl GroupSpec {
    pub fn grid(dim: usize) -> Result<Self> {
        Self::from_doc(GroupDoc::Grid { dim })
    }

    pub fn free(rank: usize) -> Result<Self> {
        Self::from_doc(GroupDoc::Free { rank })
    }

    pub fn free_product_cyclic(orders: &[u32]) -> Result<Self> {
        Self::from_doc(GroupDoc::FreeProductCyclic {
            orders: orders.to_vec(),
        })
    }

    /// Builds a rewriting model. Rules are written in the element notation
    /// (`"ab'"`); inverse-cancellation rules are added automatically. The
    /// system is validated (termination and local confluence) before use.
    pub fn rewriting(generators: &[&str], inverses: &[&str], rules: &[(&str, &str)]) -> Result<Self> {
        Self::from_doc(GroupDoc::Rewriting {
            generators: generators.iter().map(|s| s.to_string()).collect(),
            inverses: inverses.iter().map(|s| s.to_string()).collect(),
            rules: rules
                .iter()
                .map(|(l, r)| (l.to_string(), r.to_string()))
                .collect(),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_doc(serde_json::from_str(text)?)
    }

    pub fn from_doc(doc: GroupDoc) -> Result<Self> {
        let (model, alphabet) = match &doc {
            GroupDoc::Grid { dim } => {
                check_rank(*dim, "dim")?;
                (Model::Grid { dim: *dim }, Alphabet::standard(*dim, &vec![false; *dim])?)
            }
            GroupDoc::Free { rank } => {
                check_rank(*rank, "rank")?;
                (Model::Free { rank: *rank }, Alphabet::standard(*rank, &vec![false; *rank])?)
            }
            GroupDoc::FreeProductCyclic { orders } => {
                check_rank(orders.len(), "number of factors")?;
                if let Some(m) = orders.iter().find(|&&m| m < 2) {
                    return Err(Error::InvalidSpec(format!("cyclic order {m} < 2")));
                }
                let invol: Vec<bool> = orders.iter().map(|&m| m == 2).collect();
                (
                    Model::FreeProductCyclic {
                        orders: orders.clone(),
                    },
                    Alphabet::standard(orders.len(), &invol)?,
                )
            }
            GroupDoc::Rewriting {
                generators,
                inverses,
                rules,
            } => {
                let alphabet = Alphabet::from_names(generators, inverses)?;
                let mut parsed = Vec::with_capacity(rules.len());
                for (l, r) in rules {
                    parsed.push((alphabet.parse_word(l)?, alphabet.parse_word(r)?));
                }
                let system = RewritingSystem::new(&alphabet, parsed);
                system.validate(&alphabet)?;
                (Model::Rewriting(system), alphabet)
            }
        };
        Ok(GroupSpec {
            model,
            alphabet,
            doc,
            max_ball: DEFAULT_MAX_BALL,
        })
    }

    /// Overrides the maximum ball size (hard error beyond it).
    pub fn with_max_ball(mut self, max_ball: usize) -> Self {
        self.max_ball = max_ball;
        self
    }

    pub fn max_ball(&self) -> usize {
        self.max_ball
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn doc(&self) -> &GroupDoc {
        &self.doc
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.doc).expect("group doc serializes")
    }

    /// Hex SHA-256 of the compact JSON form of the spec.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    pub fn is_grid(&self) -> bool {
        matches!(self.model, Model::Grid { .. })
    }

    pub fn grid_dim(&self) -> Option<usize> {
        match self.model {
            Model::Grid { dim } => Some(dim),
            _ => None,
        }
    }

    /// Number of symbols in the (symmetric) alphabet.
    pub fn num_symbols(&self) -> usize {
        self.alphabet.len()
    }

    pub fn normal_form(&self, word: &[Symbol]) -> Element {
        let n = self.alphabet.len();
        debug_assert!(word.iter().all(|&s| (s as usize) < n));
        match &self.model {
            Model::Grid { dim } => {
                let mut v = vec![0i64; *dim];
                for &s in word {
                    let i = (s / 2) as usize;
                    v[i] += if s % 2 == 0 { 1 } else { -1 };
                }
                grid_word(&v)
            }
            Model::Free { .. } => {
                let mut out: Vec<Symbol> = Vec::with_capacity(word.len());
                for &s in word {
                    if out.last() == Some(&self.alphabet.inverse(s)) {
                        out.pop();
                    } else {
                        out.push(s);
                    }
                }
                Element(out)
            }
            Model::FreeProductCyclic { orders } => self.fpc_normal_form(orders, word),
            Model::Rewriting(system) => Element(system.reduce(word)),
        }
    }

    fn fpc_normal_form(&self, orders: &[u32], word: &[Symbol]) -> Element {
        let mut syllables: Vec<(usize, u32)> = Vec::new();
        for &s in word {
            let (factor, inv) = self.alphabet.letter_of(s);
            let m = orders[factor];
            let step = if inv { m - 1 } else { 1 };
            match syllables.last_mut() {
                Some((f, e)) if *f == factor => {
                    *e = (*e + step) % m;
                    if *e == 0 {
                        syllables.pop();
                    }
                }
                _ => syllables.push((factor, step)),
            }
        }
        let mut out = Vec::new();
        for (factor, e) in syllables {
            let m = orders[factor];
            let gen = self.alphabet.symbol(factor, false);
            if e <= m - e {
                out.extend(std::iter::repeat_n(gen, e as usize));
            } else {
                let inv = self.alphabet.symbol(factor, true);
                out.extend(std::iter::repeat_n(inv, (m - e) as usize));
            }
        }
        Element(out)
    }

    pub fn parse(&self, text: &str) -> Result<Element> {
        Ok(self.normal_form(&self.alphabet.parse_word(text)?))
    }

    pub fn format(&self, g: &Element) -> String {
        self.alphabet.format_word(&g.0)
    }

    pub fn identity(&self) -> Element {
        Element::identity()
    }

    pub fn generator(&self, sym: Symbol) -> Element {
        self.normal_form(&[sym])
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        if y.is_identity() {
            return x.clone();
        }
        if x.is_identity() {
            return y.clone();
        }
        let mut w = Vec::with_capacity(x.len() + y.len());
        w.extend_from_slice(&x.0);
        w.extend_from_slice(&y.0);
        self.normal_form(&w)
    }

    pub fn inverse(&self, x: &Element) -> Element {
        let w: Vec<Symbol> = self.alphabet.invert_word(&x.0);
        self.normal_form(&w)
    }

    pub fn length(&self, g: &Element) -> usize {
        g.len()
    }

    /// `d(x, y) = |x^{-1} y|`.
    pub fn distance(&self, x: &Element, y: &Element) -> usize {
        self.mul(&self.inverse(x), y).len()
    }

    /// Right-multiplication neighbours `x s` over the alphabet, deduplicated,
    /// in symbol order.
    pub fn neighbors(&self, x: &Element) -> Vec<Element> {
        let mut out: Vec<Element> = Vec::with_capacity(self.alphabet.len());
        let mut w = x.0.clone();
        for s in self.alphabet.symbols() {
            w.push(s);
            let y = self.normal_form(&w);
            w.pop();
            if !out.contains(&y) {
                out.push(y);
            }
        }
        out
    }

    /// Spheres of radius `0..=r` around the identity, each in shortlex order.
    pub fn spheres(&self, r: usize) -> Result<Vec<Vec<Element>>> {
        let mut seen: HashSet<Element> = HashSet::new();
        seen.insert(Element::identity());
        let mut layers = vec![vec![Element::identity()]];
        for _ in 0..r {
            let mut next = Vec::new();
            for x in layers.last().unwrap() {
                for y in self.neighbors(x) {
                    if seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            if seen.len() > self.max_ball {
                return Err(Error::ResourceCap(format!(
                    "ball of radius {r} exceeds {} elements",
                    self.max_ball
                )));
            }
            next.sort();
            if next.is_empty() {
                break;
            }
            layers.push(next);
        }
        Ok(layers)
    }

    /// `B_center(r) = { x : d(center, x) <= r }`.
    pub fn ball(&self, center: &Element, r: usize) -> Result<ElementSet> {
        let spheres = self.spheres(r)?;
        Ok(spheres
            .into_iter()
            .flatten()
            .map(|x| self.mul(center, &x))
            .collect())
    }

    /// Inner boundary: members of `a` with at least one neighbour outside `a`.
    pub fn boundary(&self, a: &ElementSet) -> ElementSet {
        a.iter()
            .filter(|x| self.neighbors(x).iter().any(|y| !a.contains(y)))
            .cloned()
            .collect()
    }

    /// `min { d(x, y) : x in a, y in b }`.
    pub fn set_distance(&self, a: &ElementSet, b: &ElementSet) -> Result<usize> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptySet);
        }
        if a.iter().any(|x| b.contains(x)) {
            return Ok(0);
        }
        Ok(a.iter()
            .flat_map(|x| {
                let xi = self.inverse(x);
                b.iter().map(move |y| (xi.clone(), y))
            })
            .map(|(xi, y)| self.mul(&xi, y).len())
            .min()
            .unwrap())
    }

    /// Distance from a point to a set (`None` for the empty set).
    pub fn point_set_distance(&self, x: &Element, a: &ElementSet) -> Option<usize> {
        let xi = self.inverse(x);
        a.iter().map(|y| self.mul(&xi, y).len()).min()
    }

    /// Connectivity of the subgraph induced on `a` by distance-1 adjacency.
    pub fn is_connected(&self, a: &ElementSet) -> bool {
        let Some(start) = a.iter().next() else {
            return true;
        };
        let mut seen: HashSet<&Element> = HashSet::new();
        seen.insert(start);
        let mut queue = VecDeque::from([start.clone()]);
        while let Some(x) = queue.pop_front() {
            for y in self.neighbors(&x) {
                if let Some(member) = a.get(&y) {
                    if seen.insert(member) {
                        queue.push_back(y);
                    }
                }
            }
        }
        seen.len() == a.len()
    }

    /// `max { d(x, y) : x, y in a }` (0 for sets of size < 2).
    pub fn diameter(&self, a: &ElementSet) -> usize {
        let items: Vec<&Element> = a.iter().collect();
        let mut best = 0;
        for (i, x) in items.iter().enumerate() {
            let xi = self.inverse(x);
            for y in &items[i + 1..] {
                best = best.max(self.mul(&xi, y).len());
            }
        }
        best
    }

    /// Checks the rewriting system for termination and local confluence.
    pub fn validate_rewriting(&self) -> Result<RewritingReport> {
        match &self.model {
            Model::Rewriting(system) => system.validate(&self.alphabet),
            _ => Err(Error::Unsupported(
                "validate_rewriting requires a rewriting model".into(),
            )),
        }
    }

    /// Defining relators of the model (words equal to the identity), used to
    /// validate homomorphisms.
    pub fn relators(&self) -> Vec<Vec<Symbol>> {
        let a = &self.alphabet;
        match &self.model {
            Model::Grid { dim } => {
                let mut out = Vec::new();
                for i in 0..*dim {
                    for j in i + 1..*dim {
                        let (x, y) = (a.symbol(i, false), a.symbol(j, false));
                        out.push(vec![x, y, a.inverse(x), a.inverse(y)]);
                    }
                }
                out
            }
            Model::Free { .. } => Vec::new(),
            Model::FreeProductCyclic { orders } => orders
                .iter()
                .enumerate()
                .map(|(i, &m)| vec![a.symbol(i, false); m as usize])
                .collect(),
            Model::Rewriting(system) => system
                .rules()
                .iter()
                .map(|(l, r)| {
                    let mut w = l.clone();
                    w.extend(a.invert_word(r));
                    w
                })
                .collect(),
        }
    }

    /// Grid coordinates of an element (`None` off the grid model).
    pub fn grid_coords(&self, g: &Element) -> Option<Vec<i64>> {
        let dim = self.grid_dim()?;
        let mut v = vec![0i64; dim];
        for &s in &g.0 {
            v[(s / 2) as usize] += if s % 2 == 0 { 1 } else { -1 };
        }
        Some(v)
    }

    /// Grid element with the given coordinates.
    pub fn grid_element(&self, coords: &[i64]) -> Result<Element> {
        match self.grid_dim() {
            Some(d) if d == coords.len() => Ok(grid_word(coords)),
            Some(d) => Err(Error::InvalidSpec(format!(
                "expected {d} coordinates, got {}",
                coords.len()
            ))),
            None => Err(Error::Unsupported("grid coordinates on a non-grid model".into())),
        }
    }

    /// Rewrites a word of `from`'s alphabet into this spec's alphabet by
    /// generator name.
    pub fn translate_word(&self, from: &GroupSpec, word: &[Symbol]) -> Result<Vec<Symbol>> {
        word.iter()
            .map(|&s| {
                let (letter, inv) = from.alphabet.letter_of(s);
                let ch = from.alphabet.letter_char(letter);
                self.alphabet.lookup(ch, inv).ok_or_else(|| {
                    Error::UnknownSymbol(from.alphabet.name(s))
                })
            })
            .collect()
    }

    pub fn element_set<'a, I>(&self, words: I) -> Result<ElementSet>
    where
        I: IntoIterator<Item = &'a str>,
    {
        words.into_iter().map(|w| self.parse(w)).collect()
    }

    pub fn format_set(&self, set: &ElementSet) -> Vec<String> {
        set.iter().map(|g| self.format(g)).collect()
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.model {
            Model::Grid { dim } => write!(f, "Z^{dim}"),
            Model::Free { rank } => write!(f, "F_{rank}"),
            Model::FreeProductCyclic { orders } => {
                let parts: Vec<String> = orders.iter().map(|m| format!("Z_{m}")).collect();
                write!(f, "{}", parts.join(" * "))
            }
            Model::Rewriting(system) => write!(
                f,
                "<{} | {} rules>",
                self.alphabet.generator_names().join(","),
                system.rules().len()
            ),
        }
    }
}

fn check_rank(n: usize, what: &str) -> Result<()> {
    if n == 0 || n > alphabet::MAX_LETTERS {
        return Err(Error::InvalidSpec(format!(
            "{what} must be in 1..={}",
            alphabet::MAX_LETTERS
        )));
    }
    Ok(())
}

fn grid_word(v: &[i64]) -> Element {
    let mut out = Vec::with_capacity(v.iter().map(|x| x.unsigned_abs() as usize).sum());
    for (i, &x) in v.iter().enumerate() {
        let sym = (2 * i + usize::from(x < 0)) as Symbol;
        out.extend(std::iter::repeat_n(sym, x.unsigned_abs() as usize));
    }
    Element(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(spec: &GroupSpec, words: &[&str]) -> ElementSet {
        spec.element_set(words.iter().copied()).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        let z2 = GroupSpec::grid(2).unwrap();
        assert_eq!(z2.format(&z2.parse("aba'").unwrap()), "b");
        let f2 = GroupSpec::free(2).unwrap();
        assert_eq!(f2.format(&f2.parse("abb'a").unwrap()), "aa");
        let c33 = GroupSpec::free_product_cyclic(&[3, 3]).unwrap();
        assert_eq!(c33.format(&c33.parse("aaaa").unwrap()), "a");
    }

    #[test]
    fn fpc_tie_prefers_generator() {
        let c44 = GroupSpec::free_product_cyclic(&[4, 4]).unwrap();
        assert_eq!(c44.format(&c44.parse("a'a'").unwrap()), "aa");
        assert_eq!(c44.format(&c44.parse("aaa").unwrap()), "a'");
        let c2 = GroupSpec::free_product_cyclic(&[2, 3]).unwrap();
        assert_eq!(c2.format(&c2.parse("a'ba").unwrap()), "aba");
        assert_eq!(c2.alphabet().len(), 3);
    }

    #[test]
    fn lengths_and_distances() {
        let z2 = GroupSpec::grid(2).unwrap();
        assert_eq!(z2.parse("aab").unwrap().len(), 3);
        assert_eq!(z2.identity().len(), 0);
        let f2 = GroupSpec::free(2).unwrap();
        assert_eq!(f2.parse("aba'").unwrap().len(), 3);

        let o = z2.identity();
        assert_eq!(z2.distance(&o, &o), 0);
        assert_eq!(z2.distance(&o, &z2.parse("ab").unwrap()), 2);
        assert_eq!(
            f2.distance(&f2.parse("a").unwrap(), &f2.parse("b").unwrap()),
            2
        );
    }

    #[test]
    fn ball_sizes() {
        let z2 = GroupSpec::grid(2).unwrap();
        let o = z2.identity();
        assert_eq!(z2.ball(&o, 1).unwrap().len(), 5);
        assert_eq!(z2.ball(&o, 2).unwrap().len(), 13);
        let f2 = GroupSpec::free(2).unwrap();
        assert_eq!(f2.ball(&f2.identity(), 2).unwrap().len(), 17);
    }

    #[test]
    fn ball_cap_is_a_hard_error() {
        let f2 = GroupSpec::free(2).unwrap().with_max_ball(100);
        assert!(matches!(
            f2.ball(&f2.identity(), 5),
            Err(Error::ResourceCap(_))
        ));
    }

    #[test]
    fn boundary_and_set_distance() {
        let z2 = GroupSpec::grid(2).unwrap();
        let b1 = z2.ball(&z2.identity(), 1).unwrap();
        assert_eq!(z2.boundary(&b1), set(&z2, &["a", "a'", "b", "b'"]));

        let f2 = GroupSpec::free(2).unwrap();
        let a = set(&f2, &["", "a"]);
        assert_eq!(f2.boundary(&a), a);

        let p = set(&z2, &[""]);
        let q = ElementSet::from([z2.grid_element(&[3, 4]).unwrap()]);
        assert_eq!(z2.set_distance(&p, &q).unwrap(), 7);
        assert_eq!(z2.set_distance(&p, &p).unwrap(), 0);
        assert!(matches!(
            z2.set_distance(&p, &ElementSet::new()),
            Err(Error::EmptySet)
        ));
    }

    #[test]
    fn connectivity() {
        let z2 = GroupSpec::grid(2).unwrap();
        assert!(z2.is_connected(&set(&z2, &["", "a"])));
        assert!(!z2.is_connected(&set(&z2, &["", "ab"])));
        assert!(z2.is_connected(&ElementSet::new()));
        assert!(z2.is_connected(&set(&z2, &["ab"])));
        let f2 = GroupSpec::free(2).unwrap();
        assert!(f2.is_connected(&set(&f2, &["", "a", "ab"])));
    }

    #[test]
    fn unknown_symbol_is_rejected() {
        let z2 = GroupSpec::grid(2).unwrap();
        assert!(matches!(z2.parse("ac"), Err(Error::UnknownSymbol(_))));
    }

    #[test]
    fn json_round_trip_and_digest() {
        let spec = GroupSpec::from_json(r#"{"model":"free_product_cyclic","orders":[4,4]}"#).unwrap();
        assert_eq!(spec.to_json(), r#"{"model":"free_product_cyclic","orders":[4,4]}"#);
        let again = GroupSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(spec.digest(), again.digest());
        assert_ne!(spec.digest(), GroupSpec::grid(2).unwrap().digest());
    }

    #[test]
    fn grid_coordinates() {
        let z2 = GroupSpec::grid(2).unwrap();
        let g = z2.grid_element(&[2, -1]).unwrap();
        assert_eq!(z2.format(&g), "aab'");
        assert_eq!(z2.grid_coords(&g).unwrap(), vec![2, -1]);
    }

    #[test]
    fn translate_between_free_and_cyclic_product() {
        let f2 = GroupSpec::free(2).unwrap();
        let c = GroupSpec::free_product_cyclic(&[2, 6]).unwrap();
        let w = f2.alphabet().parse_word("a'b'").unwrap();
        let t = c.translate_word(&f2, &w).unwrap();
        assert_eq!(c.format(&c.normal_form(&t)), "ab'");
    }
}
