//! Normal-form engines: the word problem for the groups we can build balls in.

use serde::{Deserialize, Serialize};

use super::rewrite::RewritingSystem;
use super::word::{exponent_sums, free_reduce, power, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormalForm {
    Trivial,
    /// ℤ/n on one generator; exponents in the balanced range (−n/2, n/2].
    Cyclic(u64),
    /// ℤⁿ; normal forms list exponents in generator order.
    FreeAbelian(usize),
    Free(usize),
    Rewriting(RewritingSystem),
    /// Free product; factor `i` owns generators `offset_i .. offset_i + rank_i`.
    FreeProduct(Vec<NormalForm>),
}

impl NormalForm {
    pub fn rank(&self) -> usize {
        match self {
            NormalForm::Trivial => 0,
            NormalForm::Cyclic(_) => 1,
            NormalForm::FreeAbelian(n) | NormalForm::Free(n) => *n,
            NormalForm::Rewriting(sys) => sys.rank() as usize,
            NormalForm::FreeProduct(fs) => fs.iter().map(|f| f.rank()).sum(),
        }
    }

    pub fn normalize(&self, w: &[Letter]) -> Word {
        match self {
            NormalForm::Trivial => Word::new(),
            NormalForm::Cyclic(n) => {
                let n = *n as i64;
                let k = exponent_sums(w, 1)[0].rem_euclid(n);
                let k = if 2 * k > n { k - n } else { k };
                power(0, k)
            }
            NormalForm::FreeAbelian(n) => {
                exponent_sums(w, *n).iter().enumerate().flat_map(|(g, &k)| power(g as u32, k)).collect()
            }
            NormalForm::Free(_) => free_reduce(w),
            NormalForm::Rewriting(sys) => sys.reduce(w),
            NormalForm::FreeProduct(fs) => normalize_free_product(fs, w),
        }
    }

    pub fn is_identity(&self, w: &[Letter]) -> bool {
        self.normalize(w).is_empty()
    }

    pub fn mul(&self, a: &[Letter], b: &[Letter]) -> Word {
        self.normalize(&[a, b].concat())
    }
}

fn normalize_free_product(factors: &[NormalForm], w: &[Letter]) -> Word {
    let mut bounds = Vec::with_capacity(factors.len());
    let mut off = 0u32;
    for f in factors {
        bounds.push(off);
        off += f.rank() as u32;
    }
    let owner = |l: &Letter| bounds.iter().rposition(|&b| b <= l.gen).unwrap_or(0);
    // Syllables as (factor, word). A new run merges into the top syllable when the
    // factors agree; a syllable that normalizes to 1 is dropped, which lets the next
    // run merge with whatever is below it.
    let mut stack: Vec<(usize, Word)> = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let f = owner(&w[i]);
        let mut j = i;
        while j < w.len() && owner(&w[j]) == f {
            j += 1;
        }
        let merged = match stack.last() {
            Some((g, prev)) if *g == f => {
                let s = [prev.as_slice(), &w[i..j]].concat();
                stack.pop();
                s
            }
            _ => w[i..j].to_vec(),
        };
        let local: Word = merged.iter().map(|l| Letter { gen: l.gen - bounds[f], inv: l.inv }).collect();
        let nf: Word =
            factors[f].normalize(&local).into_iter().map(|l| Letter { gen: l.gen + bounds[f], inv: l.inv }).collect();
        if !nf.is_empty() {
            stack.push((f, nf));
        }
        i = j;
    }
    stack.into_iter().flat_map(|(_, s)| s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::word::inverse;

    #[test]
    fn cyclic_balanced_exponents() {
        let c4 = NormalForm::Cyclic(4);
        assert_eq!(c4.normalize(&power(0, 3)), power(0, -1));
        assert_eq!(c4.normalize(&power(0, 2)), power(0, 2));
        assert_eq!(c4.normalize(&power(0, -2)), power(0, 2));
        assert!(c4.is_identity(&power(0, 8)));
    }

    #[test]
    fn free_abelian_sorts() {
        let z2 = NormalForm::FreeAbelian(2);
        let (a, b) = (Letter::pos(0), Letter::pos(1));
        assert_eq!(z2.normalize(&[b, a, b, a.inverse()]), vec![b, b]);
    }

    #[test]
    fn free_product_merges_across_cancelled_syllables() {
        // ℤ ∗ ℤ² with generators a | b, c.
        let fp = NormalForm::FreeProduct(vec![NormalForm::FreeAbelian(1), NormalForm::FreeAbelian(2)]);
        let (a, b, c) = (Letter::pos(0), Letter::pos(1), Letter::pos(2));
        let w = vec![b, a, c, c.inverse(), a, b];
        assert_eq!(fp.normalize(&w), vec![b, a, a, b]);
        let x = vec![a, c, a, b];
        assert!(fp.is_identity(&[x.clone(), inverse(&x)].concat()));
    }
}
