//! The connected transversal `A`: a geodesic chain to the shortest kernel
//! element `g`, a head around `x_n` with a hole at `{x_n, g}`, connector
//! paths back to the tail, then a notch-preserving extension until `A`
//! meets every coset once.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, ElementSet, GroupSpec, Symbol};
use crate::subgroup::CosetTable;

/// Search limits for the construction. Every choice point is tried in
/// shortlex order; these caps bound the backtracking.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct ConstructOptions {
    /// Longest connector path considered.
    pub path_cap: usize,
    /// Shortest paths tried per connector.
    pub path_choices: usize,
    /// Extension states visited before giving up on one `V`.
    pub extension_limit: u64,
    /// Head/connector combinations tried.
    pub max_attempts: usize,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            path_cap: 12,
            path_choices: 16,
            extension_limit: 200_000,
            max_attempts: 512,
        }
    }
}

/// `x_0 = 1, ..., x_{n+1} = g` with `|x_i| = i`, shortlex-least at each step
/// (the prefixes of the normal form of `g`).
pub fn geodesic_chain(spec: &GroupSpec, g: &Element) -> Result<Vec<Element>> {
    if g.is_identity() {
        return Err(Error::Construction("the chain needs g != 1".into()));
    }
    Ok((0..=g.len()).map(|i| spec.normal_form(&g.word()[..i])).collect())
}

/// The head of the construction: `U_1`, `U_2` with the selection `y(x)`, and
/// `V_0 = {1, ..., x_{n-1}} ∪ U_1 ∪ U_2`.
#[derive(Clone, Debug)]
pub struct Head {
    /// `a = x_n^{-1} g`.
    pub a: Symbol,
    /// `b = x_1`.
    pub b: Element,
    pub u1: ElementSet,
    pub u2: ElementSet,
    pub selection: Vec<(Element, Element)>,
    pub v0: ElementSet,
}

struct Ends<'c> {
    chain: &'c [Element],
    n: usize,
}

impl<'c> Ends<'c> {
    fn new(chain: &'c [Element]) -> Result<Self> {
        if chain.len() < 3 {
            return Err(Error::Construction("the construction needs |g| >= 2 (x_{n-1} must exist)".into()));
        }
        Ok(Ends { chain, n: chain.len() - 2 })
    }
    fn xn(&self) -> &Element {
        &self.chain[self.n]
    }
    fn prev(&self) -> &Element {
        &self.chain[self.n - 1]
    }
    fn g(&self) -> &Element {
        &self.chain[self.n + 1]
    }
    fn hole(&self) -> [&Element; 2] {
        [self.xn(), self.g()]
    }
}

fn last_step(spec: &GroupSpec, x: &Element, y: &Element) -> Option<Symbol> {
    let d = spec.mul(&spec.inverse(x), y);
    (d.len() == 1).then(|| d.word()[0])
}

/// Every valid head, in shortlex order of the selections. A selection picks,
/// for each `x` in `U_1`, a neighbour `y(x)` at distance 2 from `x_n` with
/// `x^{-1} y(x)` not `a^{±1}`, such that `y(x)` is the only member of `U_2`
/// adjacent to `x`.
pub fn head_choices(spec: &GroupSpec, table: &CosetTable, chain: &[Element]) -> Result<Vec<Head>> {
    let ends = Ends::new(chain)?;
    let alphabet = spec.alphabet();
    let a = last_step(spec, ends.xn(), ends.g()).ok_or_else(|| Error::Construction("chain is not a path".into()))?;
    let a_inv = alphabet.inverse(a);
    let b = chain[1].clone();
    if b == spec.generator(a_inv) {
        return Err(Error::Premise("b = a^{-1}; g is not a shortest kernel element".into()));
    }
    let u1: ElementSet = spec.neighbors(ends.xn()).into_iter().filter(|x| x != ends.g()).collect();
    let u1v: Vec<Element> = u1.iter().cloned().collect();
    let options: Vec<Vec<Element>> = u1v
        .iter()
        .map(|x| {
            let mut ys: Vec<Element> = alphabet
                .symbols()
                .filter(|&s| s != a && s != a_inv)
                .map(|s| spec.mul(x, &spec.generator(s)))
                .filter(|y| spec.distance(y, ends.xn()) == 2)
                .collect();
            ys.sort();
            ys.dedup();
            ys
        })
        .collect();

    let tail: ElementSet = chain[..ends.n].iter().cloned().collect();
    let mut out = Vec::new();
    let mut pick = Vec::new();
    fn rec(options: &[Vec<Element>], pick: &mut Vec<Element>, out: &mut Vec<Vec<Element>>) {
        if pick.len() == options.len() {
            out.push(pick.clone());
            return;
        }
        for y in &options[pick.len()] {
            pick.push(y.clone());
            rec(options, pick, out);
            pick.pop();
        }
    }
    let mut picks = Vec::new();
    rec(&options, &mut pick, &mut picks);
    for pick in picks {
        let u2: ElementSet = pick.iter().cloned().collect();
        let singleton = u1v.iter().zip(&pick).all(|(x, y)| {
            let adj: Vec<Element> = spec.neighbors(x).into_iter().filter(|z| u2.contains(z)).collect();
            adj.len() == 1 && adj[0] == *y
        });
        if !singleton {
            continue;
        }
        let mut v0 = tail.clone();
        v0.extend(u1.iter().cloned());
        v0.extend(u2.iter().cloned());
        if v0.len() >= table.index() {
            return Err(Error::Construction(format!(
                "|V_0| = {} is not below the index {}",
                v0.len(),
                table.index()
            )));
        }
        if transversal_clash(table, &v0).is_some() {
            continue;
        }
        out.push(Head {
            a,
            b: b.clone(),
            selection: u1v.iter().cloned().zip(pick).collect(),
            u1: u1.clone(),
            u2,
            v0,
        });
    }
    if out.is_empty() {
        return Err(Error::Premise("no selection y(x) gives a valid head injective mod N".into()));
    }
    Ok(out)
}

/// The first (shortlex) valid head.
pub fn build_v0(spec: &GroupSpec, table: &CosetTable, chain: &[Element]) -> Result<Head> {
    Ok(head_choices(spec, table, chain)?.remove(0))
}

/// Two members of `set` in the same coset, if any.
pub fn transversal_clash(table: &CosetTable, set: &ElementSet) -> Option<(Element, Element)> {
    let mut seen: HashMap<u32, &Element> = HashMap::new();
    for x in set {
        if let Some(y) = seen.insert(table.coset(x), x) {
            return Some((y.clone(), x.clone()));
        }
    }
    None
}

/// Up to `limit` shortest paths from `from` to `to` avoiding `blocked`, in
/// shortlex order of their vertex sequences.
pub fn shortest_paths(
    spec: &GroupSpec,
    from: &Element,
    to: &Element,
    blocked: &[&Element],
    cap: usize,
    limit: usize,
) -> Vec<Vec<Element>> {
    if blocked.contains(&from) || blocked.contains(&to) {
        return Vec::new();
    }
    // distances to `to`
    let mut dist: HashMap<Element, usize> = HashMap::from([(to.clone(), 0)]);
    let mut queue = VecDeque::from([to.clone()]);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if x == *from || d >= cap {
            continue;
        }
        for y in spec.neighbors(&x) {
            if blocked.contains(&&y) || dist.contains_key(&y) {
                continue;
            }
            dist.insert(y.clone(), d + 1);
            queue.push_back(y);
        }
    }
    let Some(&total) = dist.get(from) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let mut path = vec![from.clone()];
    fn walk(
        spec: &GroupSpec,
        dist: &HashMap<Element, usize>,
        path: &mut Vec<Element>,
        left: usize,
        limit: usize,
        out: &mut Vec<Vec<Element>>,
    ) {
        if out.len() >= limit {
            return;
        }
        if left == 0 {
            out.push(path.clone());
            return;
        }
        let mut next: Vec<Element> = spec
            .neighbors(path.last().unwrap())
            .into_iter()
            .filter(|y| dist.get(y) == Some(&(left - 1)))
            .collect();
        next.sort();
        for y in next {
            path.push(y);
            walk(spec, dist, path, left - 1, limit, out);
            path.pop();
        }
    }
    walk(spec, &dist, &mut path, total, limit, &mut out);
    out
}

/// Connector paths `R_j` from `x_n g_j` (`g_j` in `S \ {a}`) to `x_{n-1}`
/// avoiding the hole, and `V = V_0 ∪ ⋃ R_j`.
#[derive(Clone, Debug)]
pub struct Connected {
    pub paths: Vec<Vec<Element>>,
    pub v: ElementSet,
}

/// All combinations of connector paths keeping `V` injective mod `N`, in
/// order, at most `limit` of them.
pub fn connect_choices(
    spec: &GroupSpec,
    table: &CosetTable,
    head: &Head,
    chain: &[Element],
    opts: &ConstructOptions,
    limit: usize,
) -> Result<Vec<Connected>> {
    let ends = Ends::new(chain)?;
    let hole = ends.hole();
    let mut per_gen = Vec::new();
    for s in spec.alphabet().symbols().filter(|&s| s != head.a) {
        let start = spec.mul(ends.xn(), &spec.generator(s));
        let paths = shortest_paths(spec, &start, ends.prev(), &hole, opts.path_cap, opts.path_choices);
        if paths.is_empty() {
            return Err(Error::Premise(format!(
                "no path from {} to {} avoiding the hole within {} steps",
                spec.format(&start),
                spec.format(ends.prev()),
                opts.path_cap
            )));
        }
        per_gen.push(paths);
    }
    let mut out = Vec::new();
    let mut picked: Vec<Vec<Element>> = Vec::new();
    fn rec(
        table: &CosetTable,
        per_gen: &[Vec<Vec<Element>>],
        v: &ElementSet,
        picked: &mut Vec<Vec<Element>>,
        limit: usize,
        out: &mut Vec<Connected>,
    ) {
        if out.len() >= limit {
            return;
        }
        let j = picked.len();
        if j == per_gen.len() {
            out.push(Connected {
                paths: picked.clone(),
                v: v.clone(),
            });
            return;
        }
        for p in &per_gen[j] {
            let mut w = v.clone();
            w.extend(p.iter().cloned());
            if transversal_clash(table, &w).is_some() {
                continue;
            }
            picked.push(p.clone());
            rec(table, per_gen, &w, picked, limit, out);
            picked.pop();
        }
    }
    rec(table, &per_gen, &head.v0, &mut picked, limit, &mut out);
    if out.is_empty() {
        return Err(Error::Construction("every choice of connector paths breaks injectivity mod N".into()));
    }
    Ok(out)
}

/// The first (shortlex) connected `V`.
pub fn connect_v(
    spec: &GroupSpec,
    table: &CosetTable,
    head: &Head,
    chain: &[Element],
    opts: &ConstructOptions,
) -> Result<Connected> {
    Ok(connect_choices(spec, table, head, chain, opts, 1)?.remove(0))
}

/// A boundary point `x != a^{-1}` of `set` with `x·a` in `set`, if any.
pub fn notch_violation(spec: &GroupSpec, a: Symbol, set: &ElementSet) -> Option<Element> {
    let ga = spec.generator(a);
    let a_inv = spec.inverse(&ga);
    spec.boundary(set)
        .into_iter()
        .find(|x| *x != a_inv && set.contains(&spec.mul(x, &ga)))
}

/// Elements added at each extension step (one or two per step).
pub type Extension = Vec<Vec<Element>>;

/// Extends `V` until it meets every coset of `N`, keeping it connected, off
/// the hole, free of notch violations, and adding 1–2 elements per step.
/// Depth-first over candidate steps in shortlex order with memoized dead
/// states.
pub fn extend_to_a(
    spec: &GroupSpec,
    table: &CosetTable,
    v: &ElementSet,
    chain: &[Element],
    a: Symbol,
    opts: &ConstructOptions,
) -> Result<Extension> {
    let ends = Ends::new(chain)?;
    let hole: Vec<Element> = ends.hole().into_iter().cloned().collect();
    if let Some(x) = notch_violation(spec, a, v) {
        return Err(Error::Construction(format!(
            "the connected head already has a notch at {}",
            spec.format(&x)
        )));
    }
    if let Some((x, y)) = transversal_clash(table, v) {
        return Err(Error::Construction(format!(
            "{} and {} lie in the same coset",
            spec.format(&x),
            spec.format(&y)
        )));
    }
    let mut ext = Extender {
        spec,
        table,
        a,
        hole,
        dead: HashSet::new(),
        visited: 0,
        limit: opts.extension_limit,
    };
    let mut steps = Vec::new();
    let mut set = v.clone();
    if ext.dfs(&mut set, &mut steps)? {
        Ok(steps)
    } else {
        Err(Error::Construction(format!(
            "no notch-free extension of V (|V| = {}, index {}, {} states)",
            v.len(),
            table.index(),
            ext.visited
        )))
    }
}

struct Extender<'a> {
    spec: &'a GroupSpec,
    table: &'a CosetTable,
    a: Symbol,
    hole: Vec<Element>,
    dead: HashSet<Vec<Element>>,
    visited: u64,
    limit: u64,
}

impl Extender<'_> {
    fn moves(&self, set: &ElementSet) -> Vec<Vec<Element>> {
        let spec = self.spec;
        let t = self.table;
        let cosets: HashSet<u32> = set.iter().map(|x| t.coset(x)).collect();
        let syms: Vec<Symbol> = spec.alphabet().symbols().collect();
        let outer: ElementSet = set
            .iter()
            .flat_map(|x| spec.neighbors(x))
            .filter(|y| !set.contains(y) && !self.hole.contains(y))
            .collect();
        let mut singles = Vec::new();
        let mut pairs = Vec::new();
        for y in &outer {
            let z = t.coset(y);
            if cosets.contains(&z) {
                continue;
            }
            // some neighbour u of z in B' with z != u·a^{-1}, i.e. u != z·a
            let za = t.step(z, self.a);
            if syms.iter().any(|&s| {
                let u = t.step(z, s);
                cosets.contains(&u) && u != za
            }) {
                singles.push(vec![y.clone()]);
            }
            for y2 in spec.neighbors(y) {
                let z2 = t.coset(&y2);
                if set.contains(&y2) || self.hole.contains(&y2) || z2 == z || cosets.contains(&z2) {
                    continue;
                }
                if z2 == za {
                    continue;
                }
                pairs.push(vec![y.clone(), y2]);
            }
        }
        singles.extend(pairs);
        singles
    }

    fn dfs(&mut self, set: &mut ElementSet, steps: &mut Extension) -> Result<bool> {
        if set.len() == self.table.index() {
            return Ok(true);
        }
        let key: Vec<Element> = set.iter().cloned().collect();
        if self.dead.contains(&key) {
            return Ok(false);
        }
        self.visited += 1;
        if self.visited > self.limit {
            return Err(Error::CapExhausted(format!("extension search exceeded {} states", self.limit)));
        }
        for m in self.moves(set) {
            for y in &m {
                set.insert(y.clone());
            }
            if notch_violation(self.spec, self.a, set).is_none() {
                steps.push(m.clone());
                if self.dfs(set, steps)? {
                    return Ok(true);
                }
                steps.pop();
            }
            for y in &m {
                set.remove(y);
            }
        }
        self.dead.insert(key);
        Ok(false)
    }
}

/// Full record of one construction run, as formatted words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    pub g: String,
    pub chain: Vec<String>,
    pub a: String,
    pub b: String,
    pub u1: Vec<String>,
    pub u2: Vec<String>,
    /// `(x, y(x))` for `x` in `U_1`.
    pub selection: Vec<(String, String)>,
    pub v0: Vec<String>,
    pub connectors: Vec<Vec<String>>,
    pub v: Vec<String>,
    /// Elements added per extension step.
    pub steps: Vec<Vec<String>>,
    #[serde(rename = "A")]
    pub set: Vec<String>,
    /// Head/connector combinations tried before this one succeeded.
    pub attempts: usize,
}

/// Result of [`construct_a`] with the working sets as elements.
#[derive(Clone, Debug)]
pub struct Construction {
    pub chain: Vec<Element>,
    pub head: Head,
    pub connected: Connected,
    pub steps: Extension,
    pub set: ElementSet,
    pub attempts: usize,
}

impl Construction {
    pub fn g(&self) -> &Element {
        self.chain.last().expect("nonempty chain")
    }

    pub fn trace(&self, spec: &GroupSpec) -> ConstructionTrace {
        let f = |xs: &ElementSet| spec.format_set(xs);
        let fv = |xs: &[Element]| xs.iter().map(|x| spec.format(x)).collect::<Vec<_>>();
        ConstructionTrace {
            g: spec.format(self.g()),
            chain: fv(&self.chain),
            a: spec.alphabet().name(self.head.a),
            b: spec.format(&self.head.b),
            u1: f(&self.head.u1),
            u2: f(&self.head.u2),
            selection: self
                .head
                .selection
                .iter()
                .map(|(x, y)| (spec.format(x), spec.format(y)))
                .collect(),
            v0: f(&self.head.v0),
            connectors: self.connected.paths.iter().map(|p| fv(p)).collect(),
            v: f(&self.connected.v),
            steps: self.steps.iter().map(|s| fv(s)).collect(),
            set: f(&self.set),
            attempts: self.attempts,
        }
    }
}

/// Runs head selection, connection and extension with backtracking across
/// all three stages. Every intermediate invariant is re-checked here.
pub fn construct_a(spec: &GroupSpec, table: &CosetTable, g: &Element, opts: &ConstructOptions) -> Result<Construction> {
    let chain = geodesic_chain(spec, g)?;
    let heads = head_choices(spec, table, &chain)?;
    let mut attempts = 0;
    let mut last_err = None;
    for head in heads {
        let choices = match connect_choices(spec, table, &head, &chain, opts, opts.max_attempts) {
            Ok(c) => c,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        for connected in choices {
            attempts += 1;
            if attempts > opts.max_attempts {
                return Err(Error::CapExhausted(format!(
                    "{} head/connector combinations tried; last failure: {}",
                    opts.max_attempts,
                    last_err.map_or_else(|| "none".into(), |e: Error| e.to_string())
                )));
            }
            check_v(spec, &chain, &connected.v)?;
            match extend_to_a(spec, table, &connected.v, &chain, head.a, opts) {
                Ok(steps) => {
                    let mut set = connected.v.clone();
                    for s in &steps {
                        set.extend(s.iter().cloned());
                    }
                    return Ok(Construction {
                        chain,
                        head,
                        connected,
                        steps,
                        set,
                        attempts,
                    });
                }
                Err(e) => last_err = Some(e),
            }
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Construction("no head admits a construction".into())))
}

fn check_v(spec: &GroupSpec, chain: &[Element], v: &ElementSet) -> Result<()> {
    let ends = Ends::new(chain)?;
    if !spec.is_connected(v) {
        return Err(Error::Construction("V is not connected".into()));
    }
    if ends.hole().iter().any(|h| v.contains(*h)) {
        return Err(Error::Construction("V meets the hole {x_n, g}".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroup::{build_coset_table, FiniteHom};

    #[test]
    fn chains() {
        let z2 = GroupSpec::grid(2).unwrap();
        let g = z2.grid_element(&[2, 1]).unwrap();
        let chain = geodesic_chain(&z2, &g).unwrap();
        let coords: Vec<Vec<i64>> = chain.iter().map(|x| z2.grid_coords(x).unwrap()).collect();
        assert_eq!(coords, vec![vec![0, 0], vec![1, 0], vec![2, 0], vec![2, 1]]);
        let f2 = GroupSpec::free(2).unwrap();
        let chain = geodesic_chain(&f2, &f2.parse("ab").unwrap()).unwrap();
        assert_eq!(f2.format_set(&chain.iter().cloned().collect()), vec!["", "a", "ab"]);
        let short = geodesic_chain(&f2, &f2.parse("b").unwrap()).unwrap();
        assert_eq!(short.len(), 2);
        assert!(geodesic_chain(&f2, &Element::identity()).is_err());
    }

    #[test]
    fn grid_head_is_blocked_by_four_cycles() {
        // Z^2 onto Z_5 x Z_5 keeps the 2-ball injective, but every choice of
        // y((2,-1)) = (2±1,-1) is also adjacent to (2±1,0) in U_1.
        let z2 = GroupSpec::grid(2).unwrap();
        let cyc = (0..25).map(|p| (p / 5) * 5 + (p % 5 + 1) % 5).collect::<Vec<usize>>();
        let up = (0..25).map(|p| ((p / 5 + 1) % 5) * 5 + p % 5).collect::<Vec<usize>>();
        let hom = FiniteHom::from_perms(&z2, &[("a", cyc), ("b", up)]).unwrap();
        let table = build_coset_table(&hom);
        let g = z2.grid_element(&[2, 1]).unwrap();
        let chain = geodesic_chain(&z2, &g).unwrap();
        let xn = &chain[2];
        let mut u1: Vec<Vec<i64>> = z2
            .neighbors(xn)
            .iter()
            .filter(|x| **x != g)
            .map(|x| z2.grid_coords(x).unwrap())
            .collect();
        u1.sort();
        assert_eq!(u1, vec![vec![1, 0], vec![2, -1], vec![3, 0]]);
        assert!(matches!(build_v0(&z2, &table, &chain), Err(Error::Premise(_))));
        let short = geodesic_chain(&z2, &z2.grid_element(&[1, 0]).unwrap()).unwrap();
        assert!(matches!(build_v0(&z2, &table, &short), Err(Error::Construction(_))));
    }

    #[test]
    fn notch_predicate() {
        let z = GroupSpec::grid(1).unwrap();
        let a = z.alphabet().lookup('a', false).unwrap();
        let set = |xs: &[i64]| xs.iter().map(|&x| z.grid_element(&[x]).unwrap()).collect::<ElementSet>();
        // -1 -> 0 is the allowed a-edge
        assert!(notch_violation(&z, a, &set(&[-1, 0])).is_none());
        assert!(notch_violation(&z, a, &set(&[0, 1])).is_some());
        assert!(notch_violation(&z, a, &set(&[0, 2])).is_none());
    }
}
