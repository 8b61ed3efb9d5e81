//! Premise checks on the generating set: girth (no relation of length < 4)
//! and the triple-path condition, plus a scanner over single-relator
//! presentations looking for groups that satisfy both.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Alphabet, Cayley, Element, GroupDoc, GroupSpec, NodeId, Symbol};

/// Shortest path from `x` to `y` in the Cayley graph minus `{1, z}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TriplePath {
    pub x: String,
    pub y: String,
    pub z: String,
    pub length: Option<usize>,
    pub path: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PremiseReport {
    pub girth_ok: bool,
    /// Two distinct reduced words of length <= 2 naming the same element.
    pub girth_witness: Option<(String, String)>,
    pub paths: Vec<TriplePath>,
    /// Maximum over triples of the shortest path length; absent if any
    /// triple has no path within the cap.
    pub s: Option<usize>,
}

impl PremiseReport {
    pub fn passed(&self) -> bool {
        self.girth_ok && self.s.is_some()
    }
}

/// Girth and triple-path checks for the symmetric generating set of `spec`.
pub fn check_premises(spec: &GroupSpec, s_cap: usize) -> Result<PremiseReport> {
    let alphabet = spec.alphabet();
    if alphabet.len() < 4 {
        return Err(Error::Premise(format!(
            "generating set has {} elements, need at least 4",
            alphabet.len()
        )));
    }
    let girth_witness = girth_collision(spec);

    let mut cayley = Cayley::new(spec);
    let one = cayley.identity();
    let gens: Vec<(Symbol, NodeId)> = alphabet
        .symbols()
        .map(|s| Ok((s, cayley.step(one, s)?)))
        .collect::<Result<_>>()?;
    let mut paths = Vec::new();
    let mut s_max = Some(0usize);
    for (i, &(sx, x)) in gens.iter().enumerate() {
        for &(sy, y) in &gens[i + 1..] {
            for &(sz, z) in &gens {
                if z == x || z == y {
                    continue;
                }
                let found = avoiding_path(&mut cayley, x, y, &[one, z], s_cap)?;
                let length = found.as_ref().map(|p| p.len() - 1);
                s_max = match (s_max, length) {
                    (Some(m), Some(l)) => Some(m.max(l)),
                    _ => None,
                };
                paths.push(TriplePath {
                    x: alphabet.name(sx),
                    y: alphabet.name(sy),
                    z: alphabet.name(sz),
                    length,
                    path: found
                        .unwrap_or_default()
                        .into_iter()
                        .map(|id| spec.format(cayley.element(id)))
                        .collect(),
                });
            }
        }
    }
    Ok(PremiseReport {
        girth_ok: girth_witness.is_none(),
        girth_witness,
        paths,
        s: s_max,
    })
}

/// A relation of length <= 3 is exactly a collision between a reduced word
/// of length <= 1 and a distinct reduced word of length <= 2. (Two length-2
/// words colliding is a length-4 relation, which is allowed.)
fn girth_collision(spec: &GroupSpec) -> Option<(String, String)> {
    let alphabet = spec.alphabet();
    let mut short: Vec<Vec<Symbol>> = vec![Vec::new()];
    short.extend(alphabet.symbols().map(|s| vec![s]));
    let mut long = short.clone();
    for s in alphabet.symbols() {
        for t in alphabet.symbols() {
            if t != alphabet.inverse(s) {
                long.push(vec![s, t]);
            }
        }
    }
    let short_forms: Vec<Element> = short.iter().map(|w| spec.normal_form(w)).collect();
    for (u, fu) in short.iter().zip(&short_forms) {
        for v in &long {
            if u != v && spec.normal_form(v) == *fu {
                return Some((alphabet.format_word(u), alphabet.format_word(v)));
            }
        }
    }
    None
}

/// BFS path of at most `cap` edges from `from` to `to` avoiding `blocked`.
pub(crate) fn avoiding_path(
    cayley: &mut Cayley<'_>,
    from: NodeId,
    to: NodeId,
    blocked: &[NodeId],
    cap: usize,
) -> Result<Option<Vec<NodeId>>> {
    let mut parent: HashMap<NodeId, NodeId> = HashMap::new();
    parent.insert(from, from);
    let mut frontier = vec![from];
    for _ in 0..cap {
        let mut next = Vec::new();
        for &u in &frontier {
            for v in cayley.neighbors(u)? {
                if blocked.contains(&v) || parent.contains_key(&v) {
                    continue;
                }
                parent.insert(v, u);
                if v == to {
                    let mut path = vec![v];
                    let mut cur = v;
                    while cur != from {
                        cur = parent[&cur];
                        path.push(cur);
                    }
                    path.reverse();
                    return Ok(Some(path));
                }
                next.push(v);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(None)
}

/// One candidate found by [`premise_search`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PremiseCandidate {
    pub relator: String,
    pub group: GroupDoc,
    pub s: usize,
}

#[derive(Clone, Debug)]
pub struct PremiseSearchOptions {
    pub min_len: usize,
    pub max_len: usize,
    pub s_cap: usize,
    /// Stop after this many passing candidates.
    pub limit: usize,
    /// Rule budget for completing each candidate presentation.
    pub max_rules: usize,
}

impl Default for PremiseSearchOptions {
    fn default() -> Self {
        PremiseSearchOptions {
            min_len: 4,
            max_len: 8,
            s_cap: 8,
            limit: usize::MAX,
            max_rules: 48,
        }
    }
}

/// Scans two-generator single-relator presentations `<a, b | r>` with
/// `min_len <= |r| <= max_len`. For each relator (up to cyclic permutation
/// and inversion) the candidate rewriting system consists of every
/// shortlex-decreasing split `u -> v^{-1}` of the cyclic conjugates of `r`
/// and `r^{-1}`. Candidates whose system validates and whose generating set
/// passes [`check_premises`] are reported, in shortlex order of `r`.
pub fn premise_search(opts: &PremiseSearchOptions) -> Result<Vec<PremiseCandidate>> {
    let alphabet = Alphabet::standard(2, &[false, false])?;
    let mut found = Vec::new();
    for len in opts.min_len..=opts.max_len {
        for r in canonical_relators(&alphabet, len) {
            let Some(doc) = relator_system(&alphabet, &r, opts.max_rules) else {
                continue;
            };
            let Ok(spec) = GroupSpec::from_doc(doc.clone()) else {
                continue;
            };
            let spec = spec.with_max_ball(200_000);
            let Ok(report) = check_premises(&spec, opts.s_cap) else {
                continue;
            };
            if let (true, Some(s)) = (report.girth_ok, report.s) {
                found.push(PremiseCandidate {
                    relator: alphabet.format_word(&r),
                    group: doc,
                    s,
                });
                if found.len() >= opts.limit {
                    return Ok(found);
                }
            }
        }
    }
    Ok(found)
}

/// Cyclically reduced words of length `len` using both letters, one
/// representative per class under cyclic permutation and inversion.
pub(crate) fn canonical_relators(alphabet: &Alphabet, len: usize) -> Vec<Vec<Symbol>> {
    let syms: Vec<Symbol> = alphabet.symbols().collect();
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(len);
    fn rec(
        alphabet: &Alphabet,
        syms: &[Symbol],
        len: usize,
        word: &mut Vec<Symbol>,
        out: &mut Vec<Vec<Symbol>>,
    ) {
        if word.len() == len {
            if alphabet.inverse(word[len - 1]) == word[0] {
                return;
            }
            let letters: HashSet<usize> = word.iter().map(|&s| alphabet.letter_of(s).0).collect();
            if letters.len() < alphabet.num_letters() {
                return;
            }
            let inv = alphabet.invert_word(word);
            let is_min = (0..len).all(|k| {
                let mut rot = word[k..].to_vec();
                rot.extend_from_slice(&word[..k]);
                let mut irot = inv[k..].to_vec();
                irot.extend_from_slice(&inv[..k]);
                *word <= rot && *word <= irot
            });
            if is_min {
                out.push(word.clone());
            }
            return;
        }
        for &s in syms {
            if let Some(&last) = word.last() {
                if alphabet.inverse(last) == s {
                    continue;
                }
            }
            word.push(s);
            rec(alphabet, syms, len, word, out);
            word.pop();
        }
    }
    rec(alphabet, &syms, len, &mut word, &mut out);
    out
}

/// Candidate rewriting system for `<a, b | r>`: bounded shortlex completion
/// of `r = 1`.
pub(crate) fn relator_system(alphabet: &Alphabet, r: &[Symbol], max_rules: usize) -> Option<GroupDoc> {
    let rules = crate::group::complete(alphabet, &[(r.to_vec(), Vec::new())], max_rules, 4 * r.len())?;
    Some(GroupDoc::Rewriting {
        generators: alphabet.generator_names(),
        inverses: alphabet
            .generator_names()
            .iter()
            .map(|g| format!("{g}'"))
            .collect(),
        rules: rules
            .iter()
            .map(|(l, r)| (alphabet.format_word(l), alphabet.format_word(r)))
            .collect(),
    })
}
