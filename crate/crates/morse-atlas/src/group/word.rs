use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::GroupError;

/// A generator or its inverse. Ordering is `g0 < g0⁻¹ < g1 < g1⁻¹ < …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub gen: u32,
    pub inv: bool,
}

pub type Word = Vec<Letter>;

impl Letter {
    pub const fn pos(gen: u32) -> Self {
        Self { gen, inv: false }
    }

    pub const fn neg(gen: u32) -> Self {
        Self { gen, inv: true }
    }

    pub fn inverse(self) -> Self {
        Self { gen: self.gen, inv: !self.inv }
    }

    /// Dense index `2·gen + inv`, handy for lookup tables.
    pub fn index(self) -> usize {
        2 * self.gen as usize + self.inv as usize
    }
}

pub fn inverse(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| l.inverse()).collect()
}

/// `g^k` as a word.
pub fn power(gen: u32, k: i64) -> Word {
    let l = if k >= 0 { Letter::pos(gen) } else { Letter::neg(gen) };
    vec![l; k.unsigned_abs() as usize]
}

pub fn commutator(a: u32, b: u32) -> Word {
    vec![Letter::pos(a), Letter::pos(b), Letter::neg(a), Letter::neg(b)]
}

pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Free and cyclic reduction.
pub fn cyclic_reduce(w: &[Letter]) -> Word {
    let w = free_reduce(w);
    let mut lo = 0;
    let mut hi = w.len();
    while hi - lo >= 2 && w[lo] == w[hi - 1].inverse() {
        lo += 1;
        hi -= 1;
    }
    w[lo..hi].to_vec()
}

pub fn shortlex_cmp(a: &[Letter], b: &[Letter]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Exponent sum of every generator among the first `rank`.
pub fn exponent_sums(w: &[Letter], rank: usize) -> Vec<i64> {
    let mut v = vec![0i64; rank];
    for l in w {
        if let Some(x) = v.get_mut(l.gen as usize) {
            *x += if l.inv { -1 } else { 1 };
        }
    }
    v
}

/// Canonical generator names: `a..z`, then `x26, x27, …`.
pub fn default_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| if i < 26 { ((b'a' + i as u8) as char).to_string() } else { format!("x{i}") })
        .collect()
}

/// Renders a word with the given generator names; inverses print as `name^-1`,
/// except single lowercase names which print in uppercase.
pub fn format_word(w: &[Letter], names: &[String]) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    let compact = names.iter().all(|n| n.len() == 1 && n.chars().all(|c| c.is_ascii_lowercase()));
    let name = |g: u32| names.get(g as usize).cloned().unwrap_or_else(|| format!("g{g}"));
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let l = w[i];
        let mut run = 1;
        while i + run < w.len() && w[i + run] == l {
            run += 1;
        }
        let n = name(l.gen);
        let part = if compact {
            let base = if l.inv { n.to_uppercase() } else { n };
            base.repeat(run)
        } else {
            let exp = if l.inv { -(run as i64) } else { run as i64 };
            if exp == 1 { n } else { format!("{n}^{exp}") }
        };
        parts.push(part);
        i += run;
    }
    if compact { parts.concat() } else { parts.join(" ") }
}

pub struct WordDisplay<'a>(pub &'a [Letter], pub &'a [String]);

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_word(self.0, self.1))
    }
}

/// Parses a word over `names`.
///
/// Tokens are separated by whitespace, `*` or `.`; each is `name`, `name^k`, or a run of
/// single-character names where an uppercase letter denotes the inverse of its lowercase
/// generator. `1` and the empty string denote the identity.
pub fn parse_word(s: &str, names: &[String]) -> Result<Word, GroupError> {
    let lookup = |n: &str| names.iter().position(|x| x == n).map(|i| i as u32);
    let bad = |tok: &str| GroupError::BadWord { word: s.to_string(), token: tok.to_string() };
    let mut out = Word::new();
    for tok in s.split(|c: char| c.is_whitespace() || c == '*' || c == '.').filter(|t| !t.is_empty()) {
        if tok == "1" {
            continue;
        }
        if let Some((base, exp)) = tok.split_once('^') {
            let g = lookup(base).ok_or_else(|| bad(tok))?;
            let k: i64 = exp.trim_matches(|c| c == '(' || c == ')').parse().map_err(|_| bad(tok))?;
            out.extend(power(g, k));
        } else if let Some(g) = lookup(tok) {
            out.push(Letter::pos(g));
        } else {
            for c in tok.chars() {
                let lower = c.to_ascii_lowercase().to_string();
                let exact = lookup(&c.to_string());
                match (exact, c.is_ascii_uppercase()) {
                    (Some(g), _) => out.push(Letter::pos(g)),
                    (None, true) => out.push(Letter::neg(lookup(&lower).ok_or_else(|| bad(tok))?)),
                    (None, false) => return Err(bad(tok)),
                }
            }
        }
    }
    Ok(out)
}
