use super::alphabet::{Alphabet, Symbol};
use super::shortlex;
use crate::error::{Error, Result};
use std::cmp::Ordering;

/// A string rewriting system over an [`Alphabet`], always including the
/// inverse-cancellation rules `s s' -> ε`.
#[derive(Clone, Debug)]
pub struct RewritingSystem {
    rules: Vec<(Vec<Symbol>, Vec<Symbol>)>,
    by_last: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewritingReport {
    pub rules: usize,
    pub critical_pairs: usize,
}

impl RewritingSystem {
    pub fn new(alphabet: &Alphabet, user_rules: Vec<(Vec<Symbol>, Vec<Symbol>)>) -> Self {
        let mut rules: Vec<(Vec<Symbol>, Vec<Symbol>)> = Vec::new();
        for s in alphabet.symbols() {
            let r = (vec![s, alphabet.inverse(s)], Vec::new());
            if !rules.contains(&r) {
                rules.push(r);
            }
        }
        for r in user_rules {
            if !rules.contains(&r) {
                rules.push(r);
            }
        }
        let mut by_last = vec![Vec::new(); alphabet.len()];
        for (i, (lhs, _)) in rules.iter().enumerate() {
            if let Some(&last) = lhs.last() {
                by_last[last as usize].push(i);
            }
        }
        RewritingSystem { rules, by_last }
    }

    pub fn rules(&self) -> &[(Vec<Symbol>, Vec<Symbol>)] {
        &self.rules
    }

    /// Reduces to an irreducible word. The output buffer is kept irreducible,
    /// so a new redex can only end at its last symbol.
    pub fn reduce(&self, word: &[Symbol]) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = Vec::with_capacity(word.len());
        let mut pending: Vec<Symbol> = word.iter().rev().copied().collect();
        while let Some(s) = pending.pop() {
            out.push(s);
            if let Some(i) = self.by_last[s as usize]
                .iter()
                .copied()
                .find(|&i| out.ends_with(&self.rules[i].0))
            {
                let (lhs, rhs) = &self.rules[i];
                out.truncate(out.len() - lhs.len());
                pending.extend(rhs.iter().rev());
            }
        }
        out
    }

    /// All critical pairs `(overlap word, left reduct, right reduct)`:
    /// suffix/prefix overlaps of left-hand sides and inclusions of one
    /// left-hand side in another.
    pub fn critical_pairs(&self) -> Vec<(Vec<Symbol>, Vec<Symbol>, Vec<Symbol>)> {
        let mut out = Vec::new();
        for (i, (li, ri)) in self.rules.iter().enumerate() {
            for (j, (lj, rj)) in self.rules.iter().enumerate() {
                for k in 1..li.len().min(lj.len()) {
                    if li[li.len() - k..] != lj[..k] {
                        continue;
                    }
                    let mut left = ri.clone();
                    left.extend_from_slice(&lj[k..]);
                    let mut right = li[..li.len() - k].to_vec();
                    right.extend_from_slice(rj);
                    let mut overlap = li.clone();
                    overlap.extend_from_slice(&lj[k..]);
                    out.push((overlap, left, right));
                }
                if i != j && lj.len() <= li.len() {
                    for p in 0..=li.len() - lj.len() {
                        if li[p..p + lj.len()] != lj[..] {
                            continue;
                        }
                        let mut right = li[..p].to_vec();
                        right.extend_from_slice(rj);
                        right.extend_from_slice(&li[p + lj.len()..]);
                        out.push((li.clone(), ri.clone(), right));
                    }
                }
            }
        }
        out
    }

    /// Termination (every rule shortlex-decreasing) and resolution of every
    /// critical pair. Together these give confluence.
    pub fn validate(&self, alphabet: &Alphabet) -> Result<RewritingReport> {
        for (lhs, rhs) in &self.rules {
            if lhs.is_empty() || shortlex(lhs, rhs) != Ordering::Greater {
                return Err(Error::NonTerminating {
                    lhs: alphabet.format_word(lhs),
                    rhs: alphabet.format_word(rhs),
                });
            }
        }
        let mut pairs = 0;
        for (overlap, left, right) in self.critical_pairs() {
            pairs += 1;
            self.check_pair(alphabet, &overlap, &left, &right)?;
        }
        Ok(RewritingReport {
            rules: self.rules.len(),
            critical_pairs: pairs,
        })
    }

    fn check_pair(
        &self,
        alphabet: &Alphabet,
        overlap: &[Symbol],
        left: &[Symbol],
        right: &[Symbol],
    ) -> Result<()> {
        let (l, r) = (self.reduce(left), self.reduce(right));
        if l != r {
            return Err(Error::UnresolvedCriticalPair {
                overlap: alphabet.format_word(overlap),
                left: alphabet.format_word(&l),
                right: alphabet.format_word(&r),
            });
        }
        Ok(())
    }
}

/// Bounded shortlex Knuth-Bendix completion of `equations`. Returns `None`
/// when the rule count exceeds `max_rules` or a rule longer than `max_len`
/// appears. The rewriting model itself never completes; this only generates
/// candidate systems, which are then validated like any user input.
pub fn complete(
    alphabet: &Alphabet,
    equations: &[(Vec<Symbol>, Vec<Symbol>)],
    max_rules: usize,
    max_len: usize,
) -> Option<Vec<(Vec<Symbol>, Vec<Symbol>)>> {
    let mut rules: Vec<(Vec<Symbol>, Vec<Symbol>)> = Vec::new();
    for (l, r) in equations {
        push_oriented(&mut rules, l.clone(), r.clone());
    }
    loop {
        rules = interreduce(alphabet, rules);
        if rules.len() > max_rules || rules.iter().any(|(l, _)| l.len() > max_len) {
            return None;
        }
        let system = RewritingSystem::new(alphabet, rules.clone());
        let mut fresh: Vec<(Vec<Symbol>, Vec<Symbol>)> = Vec::new();
        for (_, left, right) in system.critical_pairs() {
            let (l, r) = (system.reduce(&left), system.reduce(&right));
            if l != r {
                push_oriented(&mut fresh, l, r);
            }
        }
        if fresh.is_empty() {
            return Some(rules);
        }
        fresh.sort_by(|a, b| shortlex(&a.0, &b.0));
        fresh.truncate(max_rules);
        for (l, r) in fresh {
            push_oriented(&mut rules, l, r);
        }
    }
}

fn push_oriented(rules: &mut Vec<(Vec<Symbol>, Vec<Symbol>)>, a: Vec<Symbol>, b: Vec<Symbol>) {
    let rule = match shortlex(&a, &b) {
        Ordering::Greater => (a, b),
        Ordering::Less => (b, a),
        Ordering::Equal => return,
    };
    if !rules.contains(&rule) {
        rules.push(rule);
    }
}

fn interreduce(
    alphabet: &Alphabet,
    mut rules: Vec<(Vec<Symbol>, Vec<Symbol>)>,
) -> Vec<(Vec<Symbol>, Vec<Symbol>)> {
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < rules.len() {
            let others: Vec<_> = rules
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, r)| r.clone())
                .collect();
            let system = RewritingSystem::new(alphabet, others);
            let (l, r) = rules[i].clone();
            let l2 = system.reduce(&l);
            if l2 != l {
                rules.remove(i);
                let r2 = system.reduce(&r);
                push_oriented(&mut rules, l2, r2);
                changed = true;
                continue;
            }
            let r2 = system.reduce(&r);
            if r2 != r {
                rules[i].1 = r2;
                changed = true;
            }
            i += 1;
        }
        if !changed {
            return rules;
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::error::Error;
    use crate::group::GroupSpec;

    #[test]
    fn free_reduction_rules_are_valid() {
        let spec = GroupSpec::rewriting(&["a", "b"], &["a'", "b'"], &[("aa'", ""), ("bb'", "")]).unwrap();
        assert!(spec.validate_rewriting().is_ok());
        assert_eq!(spec.format(&spec.parse("abb'a").unwrap()), "aa");
    }

    #[test]
    fn involution_rules_are_valid() {
        let spec = GroupSpec::rewriting(&["a", "b"], &["a", "b"], &[("aa", ""), ("bb", "")]).unwrap();
        assert_eq!(spec.format(&spec.parse("abba").unwrap()), "");
        assert_eq!(spec.format(&spec.parse("aba").unwrap()), "aba");
    }

    #[test]
    fn swap_rules_do_not_terminate() {
        let err = GroupSpec::rewriting(&["a", "b"], &["a'", "b'"], &[("ab", "ba"), ("ba", "ab")]).unwrap_err();
        assert!(matches!(err, Error::NonTerminating { .. }));
    }

    #[test]
    fn incomplete_system_reports_overlap() {
        // a^3 = 1 alone: the overlap a'a' vs a is not resolved without a'a' -> a.
        let err = GroupSpec::rewriting(&["a"], &["a'"], &[("aaa", "")]).unwrap_err();
        assert!(matches!(err, Error::UnresolvedCriticalPair { .. }), "{err}");
        let ok = GroupSpec::rewriting(&["a"], &["a'"], &[("aa", "a'"), ("a'a'", "a")]).unwrap();
        assert_eq!(ok.format(&ok.parse("aaaa").unwrap()), "a");
    }

    #[test]
    fn commutation_system_for_z2() {
        let spec = GroupSpec::rewriting(
            &["a", "b"],
            &["a'", "b'"],
            &[("ba", "ab"), ("ba'", "a'b"), ("b'a", "ab'"), ("b'a'", "a'b'")],
        )
        .unwrap();
        let report = spec.validate_rewriting().unwrap();
        assert!(report.critical_pairs > 0);
        assert_eq!(spec.format(&spec.parse("bab'a").unwrap()), "aa");
    }
}
