//! Shortlex-decreasing string rewriting over a group alphabet.
//!
//! Free cancellation `x x⁻¹ → 1` is always part of the system, so the explicit
//! rules only need to carry the relators.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::word::{free_reduce, inverse, shortlex_cmp, Letter, Word};
use super::GroupError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewritingSystem {
    rank: u32,
    rules: Vec<(Word, Word)>,
}

impl RewritingSystem {
    /// Validates orientation and local confluence of the given rules.
    pub fn new(rank: u32, rules: Vec<(Word, Word)>) -> Result<Self, GroupError> {
        let sys = Self::unchecked(rank, rules)?;
        if let Some((x, y)) = sys.unresolved_critical_pair() {
            return Err(GroupError::NotConfluent { left: x, right: y });
        }
        Ok(sys)
    }

    fn unchecked(rank: u32, rules: Vec<(Word, Word)>) -> Result<Self, GroupError> {
        for (l, r) in &rules {
            if l.iter().chain(r).any(|x| x.gen >= rank) {
                return Err(GroupError::GeneratorOutOfRange);
            }
            if shortlex_cmp(r, l) != Ordering::Less {
                return Err(GroupError::NotShortlexDecreasing { lhs: l.clone(), rhs: r.clone() });
            }
        }
        Ok(Self { rank, rules })
    }

    /// Knuth–Bendix completion of the relators `r = 1` under shortlex order.
    ///
    /// Every split `r = u v` of every cyclic conjugate of `r^±1` seeds an equation
    /// `u = v⁻¹`, and critical pairs are resolved a full round at a time so that
    /// no overlap family starves the others.
    pub fn complete(rank: u32, relators: &[Word], max_rules: usize) -> Result<Self, GroupError> {
        if relators.iter().flatten().any(|x| x.gen >= rank) {
            return Err(GroupError::GeneratorOutOfRange);
        }
        let mut pending: Vec<(Word, Word)> = Vec::new();
        for r in relators {
            for r in [free_reduce(r), inverse(&free_reduce(r))] {
                let r = super::word::cyclic_reduce(&r);
                for shift in 0..r.len().max(1) {
                    let c: Word = r[shift..].iter().chain(&r[..shift]).copied().collect();
                    for k in 0..=c.len() {
                        pending.push((c[..k].to_vec(), inverse(&c[k..])));
                    }
                }
            }
        }
        let mut sys = Self { rank, rules: Vec::new() };
        loop {
            for (a, b) in pending.drain(..) {
                let (a, b) = (sys.reduce(&a), sys.reduce(&b));
                let rule = match shortlex_cmp(&a, &b) {
                    Ordering::Equal => continue,
                    Ordering::Greater => (a, b),
                    Ordering::Less => (b, a),
                };
                sys.rules.push(rule);
                sys.interreduce();
                if sys.rules.len() > max_rules {
                    return Err(GroupError::CompletionDiverged(max_rules));
                }
            }
            pending = sys.critical_pairs(true);
            if pending.is_empty() {
                return Ok(sys);
            }
        }
    }

    /// Drops rules whose left side is reducible by another rule and normalizes right sides.
    fn interreduce(&mut self) {
        let mut i = 0;
        while i < self.rules.len() {
            let lhs = self.rules[i].0.clone();
            let others = Self {
                rank: self.rank,
                rules: self.rules.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, r)| r.clone()).collect(),
            };
            if others.reduce(&lhs) != lhs {
                let (l, r) = self.rules.remove(i);
                let (l, r) = (others.reduce(&l), others.reduce(&r));
                if l != r {
                    let rule = if shortlex_cmp(&l, &r) == Ordering::Greater { (l, r) } else { (r, l) };
                    self.rules.push(rule);
                }
                i = 0;
                continue;
            }
            self.rules[i].1 = others.reduce(&self.rules[i].1);
            i += 1;
        }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn rules(&self) -> &[(Word, Word)] {
        &self.rules
    }

    /// Relators `l r⁻¹` equivalent to the rules.
    pub fn relators(&self) -> Vec<Word> {
        self.rules.iter().map(|(l, r)| free_reduce(&[l.clone(), inverse(r)].concat())).collect()
    }

    /// Irreducible form: a left-to-right stack scan that re-feeds right sides.
    pub fn reduce(&self, w: &[Letter]) -> Word {
        let mut out: Word = Vec::with_capacity(w.len());
        let mut input: Vec<Letter> = w.iter().rev().copied().collect();
        while let Some(l) = input.pop() {
            if out.last() == Some(&l.inverse()) {
                out.pop();
                continue;
            }
            out.push(l);
            if let Some((lhs, rhs)) = self.rules.iter().find(|(lhs, _)| out.ends_with(lhs)) {
                out.truncate(out.len() - lhs.len());
                input.extend(rhs.iter().rev());
            }
        }
        out
    }

    fn all_rules(&self) -> Vec<(Word, Word)> {
        let mut rules = self.rules.clone();
        for g in 0..self.rank {
            for l in [Letter::pos(g), Letter::neg(g)] {
                rules.push((vec![l, l.inverse()], Word::new()));
            }
        }
        rules
    }

    /// First critical pair (overlap or inclusion) whose two reducts differ.
    pub fn unresolved_critical_pair(&self) -> Option<(Word, Word)> {
        self.critical_pairs(false).pop()
    }

    fn critical_pairs(&self, all: bool) -> Vec<(Word, Word)> {
        let rules = self.all_rules();
        let mut out = Vec::new();
        for (l1, r1) in &rules {
            for (l2, r2) in &rules {
                let mut candidates = Vec::new();
                for k in 1..l1.len().min(l2.len()) {
                    if l1[l1.len() - k..] == l2[..k] {
                        candidates.push(([r1.as_slice(), &l2[k..]].concat(), [&l1[..l1.len() - k], r2.as_slice()].concat()));
                    }
                }
                if l2.len() < l1.len() {
                    for start in 0..=l1.len() - l2.len() {
                        if l1[start..start + l2.len()] == l2[..] {
                            candidates.push((r1.clone(), [&l1[..start], r2.as_slice(), &l1[start + l2.len()..]].concat()));
                        }
                    }
                }
                for (a, b) in candidates {
                    let (a, b) = (self.reduce(&a), self.reduce(&b));
                    if a != b {
                        out.push((a, b));
                        if !all {
                            return out;
                        }
                    }
                }
            }
        }
        out
    }
}
