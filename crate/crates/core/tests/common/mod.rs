//! Oracles and fixtures shared by the integration tests. Everything here is
//! written against plain coordinates / letter vectors so it does not reuse
//! the library code it checks.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

pub type Cell = (i64, i64);

// ---------------------------------------------------------------------------
// Z^2 shapes

pub fn ring_octomino() -> Vec<Cell> {
    (-1..=1).flat_map(|u| (-1..=1).map(move |v| (u, v))).filter(|&c| c != (0, 0)).collect()
}

fn normalize(cells: &[Cell]) -> Vec<Cell> {
    let mu = cells.iter().map(|c| c.0).min().unwrap();
    let mv = cells.iter().map(|c| c.1).min().unwrap();
    let mut out: Vec<Cell> = cells.iter().map(|&(u, v)| (u - mu, v - mv)).collect();
    out.sort();
    out
}

fn rotations(cells: &[Cell]) -> Vec<Vec<Cell>> {
    let mut out = Vec::new();
    let mut cur = cells.to_vec();
    for _ in 0..4 {
        cur = cur.iter().map(|&(u, v)| (-v, u)).collect();
        out.push(normalize(&cur));
    }
    out
}

fn connected(cells: &BTreeSet<Cell>) -> bool {
    let Some(&start) = cells.iter().next() else { return false };
    let mut seen = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some((u, v)) = stack.pop() {
        for n in [(u + 1, v), (u - 1, v), (u, v + 1), (u, v - 1)] {
            if cells.contains(&n) && seen.insert(n) {
                stack.push(n);
            }
        }
    }
    seen.len() == cells.len()
}

/// All polyominoes of `n` cells up to translation, grown cell by cell.
fn fixed_polyominoes(n: usize) -> BTreeSet<Vec<Cell>> {
    let mut cur: BTreeSet<Vec<Cell>> = BTreeSet::from([vec![(0, 0)]]);
    for _ in 1..n {
        let mut next = BTreeSet::new();
        for p in &cur {
            let set: BTreeSet<Cell> = p.iter().copied().collect();
            for &(u, v) in p {
                for c in [(u + 1, v), (u - 1, v), (u, v + 1), (u, v - 1)] {
                    if !set.contains(&c) {
                        let mut q = p.clone();
                        q.push(c);
                        next.insert(normalize(&q));
                    }
                }
            }
        }
        cur = next;
    }
    cur.retain(|p| connected(&p.iter().copied().collect()));
    cur
}

/// Polyominoes up to rotation (`mirror = false`) or rotation and reflection.
pub fn polyominoes(n: usize, mirror: bool) -> Vec<Vec<Cell>> {
    let mut seen: HashSet<Vec<Cell>> = HashSet::new();
    let mut out = Vec::new();
    for p in fixed_polyominoes(n) {
        if seen.contains(&p) {
            continue;
        }
        let mut class = rotations(&p);
        if mirror {
            let m: Vec<Cell> = p.iter().map(|&(u, v)| (-u, v)).collect();
            class.extend(rotations(&m));
        }
        seen.extend(class);
        out.push(p);
    }
    out
}

// ---------------------------------------------------------------------------
// Naive surround enumerator on Z^2

fn translate(cells: &[Cell], c: Cell) -> Vec<Cell> {
    cells.iter().map(|&(u, v)| (u + c.0, v + c.1)).collect()
}

/// Whether `K` (cells containing no particular point) admits one complete
/// layer: pairwise disjoint translates `cK`, `c != 0`, disjoint from `K`,
/// covering every cell adjacent to `K`. Candidates are all translates inside
/// the box of radius `radius`; no pruning beyond disjointness.
pub fn naive_surroundable(k: &[Cell], radius: i64) -> bool {
    let kset: HashSet<Cell> = k.iter().copied().collect();
    let mut front: Vec<Cell> = Vec::new();
    for &(u, v) in k {
        for n in [(u + 1, v), (u - 1, v), (u, v + 1), (u, v - 1)] {
            if !kset.contains(&n) && !front.contains(&n) {
                front.push(n);
            }
        }
    }
    front.sort();
    let mut candidates: Vec<Vec<Cell>> = Vec::new();
    for cu in -radius..=radius {
        for cv in -radius..=radius {
            if (cu, cv) == (0, 0) {
                continue;
            }
            let p = translate(k, (cu, cv));
            if p.iter().all(|x| !kset.contains(x)) && p.iter().any(|x| front.contains(x)) {
                candidates.push(p);
            }
        }
    }
    let mut used: HashSet<Cell> = HashSet::new();
    cover(&front, &candidates, &mut used)
}

fn cover(front: &[Cell], candidates: &[Vec<Cell>], used: &mut HashSet<Cell>) -> bool {
    let Some(&target) = front.iter().find(|x| !used.contains(x)) else {
        return true;
    };
    for p in candidates {
        if p.contains(&target) && p.iter().all(|x| !used.contains(x)) {
            used.extend(p.iter().copied());
            if cover(front, candidates, used) {
                return true;
            }
            for x in p {
                used.remove(x);
            }
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Layer oracle over an abstract group given by `mul` and `neighbors`

/// Layers by frontier ownership: each layer is the set of centers owning a
/// cell adjacent to what is already covered; stop at the first frontier cell
/// nobody owns. Returns the layers (layer 0 first), each sorted.
pub fn oracle_layers<E, M, N>(tile: &[E], centers: &[E], identity: &E, mul: M, neighbors: N) -> Vec<Vec<E>>
where
    E: Clone + Ord + std::hash::Hash,
    M: Fn(&E, &E) -> E,
    N: Fn(&E) -> Vec<E>,
{
    let mut owner: HashMap<E, E> = HashMap::new();
    for c in centers {
        for f in tile {
            owner.insert(mul(c, f), c.clone());
        }
    }
    let mut covered: HashSet<E> = tile.iter().map(|f| mul(identity, f)).collect();
    let mut layers = vec![vec![identity.clone()]];
    loop {
        let mut front: BTreeSet<E> = BTreeSet::new();
        for x in &covered {
            for y in neighbors(x) {
                if !covered.contains(&y) {
                    front.insert(y);
                }
            }
        }
        if front.is_empty() {
            return layers;
        }
        let mut layer: BTreeSet<E> = BTreeSet::new();
        for x in &front {
            match owner.get(x) {
                Some(c) => {
                    layer.insert(c.clone());
                }
                None => return layers,
            }
        }
        for c in &layer {
            covered.extend(tile.iter().map(|f| mul(c, f)));
        }
        layers.push(layer.into_iter().collect());
    }
}

/// Free-group words as letters `±1, ±2, ..`, freely reduced.
pub type FreeWord = Vec<i8>;

pub fn free_mul(x: &FreeWord, y: &FreeWord) -> FreeWord {
    let mut out = x.clone();
    for &l in y {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn free_neighbors(x: &FreeWord, rank: i8) -> Vec<FreeWord> {
    (1..=rank).flat_map(|l| [l, -l]).map(|l| free_mul(x, &vec![l])).collect()
}

/// Parses the library's word notation (`a`, `b'`, ..) into letters.
pub fn parse_free(text: &str) -> FreeWord {
    let mut out: FreeWord = Vec::new();
    for ch in text.chars() {
        if ch == '\'' {
            let l = out.pop().unwrap();
            out.push(-l);
        } else {
            out.push((ch as u8 - b'a' + 1) as i8);
        }
    }
    out
}

/// Every freely reduced word of length `<= r` over `rank` letters.
pub fn free_ball(rank: i8, r: usize) -> Vec<FreeWord> {
    let mut out = vec![Vec::new()];
    let mut sphere: Vec<FreeWord> = vec![Vec::new()];
    for _ in 0..r {
        let mut next = Vec::new();
        for w in &sphere {
            for y in free_neighbors(w, rank) {
                if y.len() > w.len() {
                    next.push(y);
                }
            }
        }
        out.extend(next.iter().cloned());
        sphere = next;
    }
    out
}

/// Normal form in `Z_m * .. * Z_m`: syllables `(letter, exponent mod m)`.
pub fn free_product_image(w: &FreeWord, m: i64) -> Vec<(i8, i64)> {
    let mut out: Vec<(i8, i64)> = Vec::new();
    for &l in w {
        let (g, e) = (l.abs(), if l > 0 { 1 } else { -1 });
        match out.last_mut() {
            Some((h, x)) if *h == g => {
                *x = (*x + e).rem_euclid(m);
                if *x == 0 {
                    out.pop();
                }
            }
            _ => out.push((g, e.rem_euclid(m))),
        }
    }
    out
}

/// Largest `r <= cap` with the map injective on the ball of radius `r`.
pub fn oracle_injectivity<K: std::hash::Hash + Eq>(rank: i8, cap: usize, key: impl Fn(&FreeWord) -> K) -> usize {
    for r in 1..=cap {
        let mut seen = HashSet::new();
        if !free_ball(rank, r).iter().all(|w| seen.insert(key(w))) {
            return r - 1;
        }
    }
    cap
}

// ---------------------------------------------------------------------------
// Small finite groups by multiplication table

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub name: String,
    pub mul: Vec<Vec<usize>>,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.mul.len()
    }

    fn from_fn(name: String, n: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        let mul = (0..n).map(|x| (0..n).map(|y| f(x, y)).collect()).collect();
        FiniteGroup { name, mul }
    }

    /// `<x, y | x^m, y^n = x^t, y x y^{-1} = x^k>`, elements `x^i y^j`.
    pub fn metacyclic(name: &str, m: usize, n: usize, t: usize, k: usize) -> Self {
        let pow = |j: usize| (0..j).fold(1usize, |acc, _| acc * k % m);
        Self::from_fn(name.into(), m * n, |p, q| {
            let (i, j) = (p / n, p % n);
            let (a, b) = (q / n, q % n);
            let mut e = i + a * pow(j);
            let mut f = j + b;
            if f >= n {
                f -= n;
                e += t;
            }
            (e % m) * n + f
        })
    }

    /// `(Z_4 × Z_2) ⋊ Z_2` with `c a c^{-1} = a b`: elements `a^i b^j c^l`.
    pub fn g16_3() -> Self {
        let enc = |i: usize, j: usize, l: usize| (i * 2 + j) * 2 + l;
        Self::from_fn("(Z4xZ2):Z2".into(), 16, |p, q| {
            let (i, j, l) = (p / 4, p / 2 % 2, p % 2);
            let (a, b, c) = (q / 4, q / 2 % 2, q % 2);
            enc((i + a) % 4, (j + b + l * a) % 2, (l + c) % 2)
        })
    }

    pub fn from_perms(name: &str, gens: &[Vec<usize>]) -> Self {
        let id: Vec<usize> = (0..gens[0].len()).collect();
        let mut els = vec![id];
        let mut i = 0;
        while i < els.len() {
            for g in gens {
                let c: Vec<usize> = els[i].iter().map(|&k| g[k]).collect();
                if !els.contains(&c) {
                    els.push(c);
                }
            }
            i += 1;
        }
        let index: HashMap<Vec<usize>, usize> = els.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Self::from_fn(name.into(), els.len(), |x, y| {
            let c: Vec<usize> = els[x].iter().map(|&k| els[y][k]).collect();
            index[&c]
        })
    }

    /// Right multiplication by `x` as a permutation of the elements.
    pub fn right_regular(&self, x: usize) -> Vec<usize> {
        (0..self.order()).map(|i| self.mul[i][x]).collect()
    }

    pub fn generated_by(&self, gens: &[usize]) -> usize {
        let mut seen = HashSet::from([0usize]);
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul[x][g];
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen.len()
    }
}

/// Every two-generated group of order `2..=16` up to isomorphism.
pub fn two_generated_groups() -> Vec<FiniteGroup> {
    let mut v = Vec::new();
    for n in 2..=16 {
        v.push(FiniteGroup::metacyclic(&format!("Z{n}"), n, 1, 0, 1));
    }
    for (m, n) in [(2, 2), (2, 4), (3, 3), (2, 6), (2, 8), (4, 4)] {
        v.push(FiniteGroup::metacyclic(&format!("Z{m}xZ{n}"), m, n, 0, 1));
    }
    for n in 3..=8 {
        v.push(FiniteGroup::metacyclic(&format!("D{}", 2 * n), n, 2, 0, n - 1));
    }
    v.push(FiniteGroup::metacyclic("Q8", 4, 2, 2, 3));
    v.push(FiniteGroup::metacyclic("Dic12", 6, 2, 3, 5));
    v.push(FiniteGroup::metacyclic("Q16", 8, 2, 4, 7));
    v.push(FiniteGroup::metacyclic("SD16", 8, 2, 0, 3));
    v.push(FiniteGroup::metacyclic("M16", 8, 2, 0, 5));
    v.push(FiniteGroup::metacyclic("Z4:Z4", 4, 4, 0, 3));
    v.push(FiniteGroup::g16_3());
    v.push(FiniteGroup::from_perms("A4", &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]));
    v
}

/// Whether the permutations generate a transitive action.
pub fn transitive(perms: &[&Vec<usize>]) -> bool {
    let n = perms[0].len();
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(p) = stack.pop() {
        for g in perms {
            if !seen[g[p]] {
                seen[g[p]] = true;
                stack.push(g[p]);
            }
        }
    }
    seen.into_iter().all(|s| s)
}
