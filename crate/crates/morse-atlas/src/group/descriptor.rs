use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::engine::NormalForm;
use super::rewrite::RewritingSystem;
use super::snf::{abelianize, AbelianInvariants};
use super::word::{commutator, default_names, format_word, free_reduce, cyclic_reduce, inverse, power, Letter, Word};
use super::GroupError;

/// Groups known only by name: fundamental groups of geometric pieces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SymbolicKind {
    ClosedHyperbolic3Mfld,
    FiniteVolumeHyperbolic3Mfld,
    SeifertFibered,
    Sol,
    Nil,
    H2xR,
    PSL2Rtilde,
    S2xR,
}

impl SymbolicKind {
    pub const ALL: [SymbolicKind; 8] = [
        SymbolicKind::ClosedHyperbolic3Mfld,
        SymbolicKind::FiniteVolumeHyperbolic3Mfld,
        SymbolicKind::SeifertFibered,
        SymbolicKind::Sol,
        SymbolicKind::Nil,
        SymbolicKind::H2xR,
        SymbolicKind::PSL2Rtilde,
        SymbolicKind::S2xR,
    ];

    pub fn tag_name(self) -> &'static str {
        match self {
            SymbolicKind::ClosedHyperbolic3Mfld => "ClosedHyperbolic3MfldGroup",
            SymbolicKind::FiniteVolumeHyperbolic3Mfld => "FiniteVolumeHyperbolic3MfldGroup",
            SymbolicKind::SeifertFibered => "SeifertFiberedGroup",
            SymbolicKind::Sol => "SolGroup",
            SymbolicKind::Nil => "NilGroup",
            SymbolicKind::H2xR => "H2xRGroup",
            SymbolicKind::PSL2Rtilde => "PSL2RtildeGroup",
            SymbolicKind::S2xR => "S2xRGroup",
        }
    }

    pub fn from_tag_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.tag_name() == s)
    }
}

/// A finite presentation. `relators_complete = false` marks a partial presentation of a
/// group containing symbolic pieces whose relations are not known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
    pub rewriting: Option<RewritingSystem>,
    pub relators_complete: bool,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Self {
        Self { generators, relators, rewriting: None, relators_complete: true }
    }

    /// Attaches a rewriting system after checking that every relator reduces to 1.
    pub fn with_rewriting(mut self, sys: RewritingSystem) -> Result<Self, GroupError> {
        if sys.rank() as usize != self.generators.len() {
            return Err(GroupError::GeneratorOutOfRange);
        }
        if let Some(r) = self.relators.iter().find(|r| !sys.reduce(r).is_empty()) {
            return Err(GroupError::RelatorNotTrivial(format_word(r, &self.generators)));
        }
        self.rewriting = Some(sys);
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn abelianization(&self) -> Result<AbelianInvariants, GroupError> {
        if !self.relators_complete {
            return Err(GroupError::IncompletePresentation);
        }
        abelianize(self.rank(), &self.relators)
    }

    /// Tietze moves: drop trivial relators, and eliminate a generator occurring exactly once
    /// in some relator. Deterministic: lowest relator index, then lowest generator.
    pub fn tietze_simplify(&self) -> Presentation {
        let mut gens: Vec<Option<String>> = self.generators.iter().cloned().map(Some).collect();
        let mut rels: Vec<Word> = self.relators.iter().map(|r| cyclic_reduce(r)).filter(|r| !r.is_empty()).collect();
        'outer: loop {
            for (ri, r) in rels.iter().enumerate() {
                let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
                for l in r {
                    *counts.entry(l.gen).or_default() += 1;
                }
                if let Some((&g, _)) = counts.iter().find(|(_, &c)| c == 1) {
                    // r = u x^{±1} v  ⇒  x = (u⁻¹ v⁻¹)^{±1}.
                    let pos = r.iter().position(|l| l.gen == g).unwrap();
                    let (u, v) = (&r[..pos], &r[pos + 1..]);
                    let mut solved = [inverse(u), inverse(v)].concat();
                    // u x v = 1 ⇒ x = u⁻¹ v⁻¹ (as words: inverse(u) then inverse(v)).
                    if r[pos].inv {
                        solved = inverse(&solved);
                    }
                    let rel = rels.remove(ri);
                    debug_assert!(!rel.is_empty());
                    rels = rels
                        .iter()
                        .map(|w| {
                            let sub: Word = w
                                .iter()
                                .flat_map(|l| {
                                    if l.gen != g {
                                        vec![*l]
                                    } else if l.inv {
                                        inverse(&solved)
                                    } else {
                                        solved.clone()
                                    }
                                })
                                .collect();
                            cyclic_reduce(&sub)
                        })
                        .filter(|w| !w.is_empty())
                        .collect();
                    gens[g as usize] = None;
                    continue 'outer;
                }
            }
            break;
        }
        // Renumber surviving generators.
        let mut map = vec![u32::MAX; gens.len()];
        let mut names = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            if let Some(n) = g {
                map[i] = names.len() as u32;
                names.push(n.clone());
            }
        }
        let rels = rels
            .into_iter()
            .map(|w| w.into_iter().map(|l| Letter { gen: map[l.gen as usize], inv: l.inv }).collect())
            .collect();
        Presentation { generators: names, relators: rels, rewriting: None, relators_complete: self.relators_complete }
    }

    /// Splits the presentation into free factors that are built-in groups, when the
    /// relators are syntactically the standard ones. Returns the factors with the
    /// generator indices they own, ordered by least generator.
    pub fn recognize_free_factors(&self) -> Option<Vec<(GroupDescriptor, Vec<u32>)>> {
        if !self.relators_complete {
            return None;
        }
        let n = self.rank();
        // Union generators co-occurring in a relator.
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        let rels: Vec<Word> = self.relators.iter().map(|r| free_reduce(r)).filter(|r| !r.is_empty()).collect();
        for r in &rels {
            let first = r[0].gen as usize;
            for l in r {
                let (a, b) = (find(&mut parent, first), find(&mut parent, l.gen as usize));
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
        for g in 0..n {
            let root = find(&mut parent, g);
            groups.entry(root).or_default().push(g as u32);
        }
        let mut out = Vec::new();
        for gens in groups.into_values() {
            let mine: Vec<&Word> = rels.iter().filter(|r| gens.contains(&r[0].gen)).collect();
            let local = |w: &Word| -> Word {
                w.iter().map(|l| Letter { gen: gens.iter().position(|&g| g == l.gen).unwrap() as u32, inv: l.inv }).collect()
            };
            let local_rels: Vec<Word> = mine.iter().map(|w| cyclic_reduce(&local(w))).collect();
            let d = match (gens.len(), local_rels.len()) {
                (1, 0) => GroupDescriptor::Z,
                (1, 1) => {
                    let r = &local_rels[0];
                    if r.iter().all(|l| *l == r[0]) {
                        GroupDescriptor::FiniteCyclic(r.len() as u32)
                    } else {
                        return None;
                    }
                }
                (k, m) if m == k * (k - 1) / 2 => {
                    let all = (0..k as u32).all(|i| {
                        (i + 1..k as u32).all(|j| local_rels.iter().any(|r| is_commutator_of(r, i, j)))
                    });
                    if !all {
                        return None;
                    }
                    GroupDescriptor::ZPow(k as u32)
                }
                _ => return None,
            };
            out.push((d, gens));
        }
        Some(out)
    }
}

fn is_commutator_of(r: &Word, i: u32, j: u32) -> bool {
    if r.len() != 4 {
        return false;
    }
    let c = cyclic_reduce(&commutator(i, j));
    // Any cyclic permutation of [x,y]^{±1}.
    let variants = [c.clone(), inverse(&c)];
    variants.iter().any(|v| (0..4).any(|s| r.iter().enumerate().all(|(t, l)| *l == v[(t + s) % 4])))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupDescriptor {
    Trivial,
    FiniteCyclic(u32),
    Z,
    ZPow(u32),
    Free(u32),
    /// A named group with optional marked elements (e.g. peripheral curves) that edge
    /// injections may refer to. Its relations are unknown.
    Symbolic { kind: SymbolicKind, marked: Vec<String> },
    Presentation(Presentation),
}

impl GroupDescriptor {
    pub fn symbolic(kind: SymbolicKind) -> Self {
        GroupDescriptor::Symbolic { kind, marked: Vec::new() }
    }

    pub fn tag_name(&self) -> &'static str {
        match self {
            GroupDescriptor::Trivial => "Trivial",
            GroupDescriptor::FiniteCyclic(_) => "FiniteCyclic",
            GroupDescriptor::Z => "Z",
            GroupDescriptor::ZPow(_) => "ZPow",
            GroupDescriptor::Free(_) => "Free",
            GroupDescriptor::Symbolic { kind, .. } => kind.tag_name(),
            GroupDescriptor::Presentation(_) => "Presentation",
        }
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        let bad = |m: &str| Err(GroupError::InvalidParameter(m.to_string()));
        match self {
            GroupDescriptor::FiniteCyclic(0) => bad("FiniteCyclic needs n >= 1"),
            GroupDescriptor::ZPow(n) if *n < 2 => bad("ZPow needs n >= 2"),
            GroupDescriptor::Free(k) if *k < 2 => bad("Free needs rank >= 2"),
            GroupDescriptor::Presentation(p) => {
                if p.relators.iter().flatten().any(|l| l.gen as usize >= p.rank()) {
                    return Err(GroupError::GeneratorOutOfRange);
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn is_trivial_tag(&self) -> bool {
        matches!(self, GroupDescriptor::Trivial | GroupDescriptor::FiniteCyclic(1))
    }

    pub fn generator_names(&self) -> Vec<String> {
        match self {
            GroupDescriptor::Trivial => Vec::new(),
            GroupDescriptor::FiniteCyclic(_) | GroupDescriptor::Z => default_names(1),
            GroupDescriptor::ZPow(n) | GroupDescriptor::Free(n) => default_names(*n as usize),
            GroupDescriptor::Symbolic { marked, .. } => marked.clone(),
            GroupDescriptor::Presentation(p) => p.generators.clone(),
        }
    }

    pub fn rank(&self) -> usize {
        self.generator_names().len()
    }

    /// The standard presentation; partial for symbolic groups.
    pub fn presentation(&self) -> Presentation {
        let names = self.generator_names();
        match self {
            GroupDescriptor::Trivial | GroupDescriptor::Z | GroupDescriptor::Free(_) => Presentation::new(names, vec![]),
            GroupDescriptor::FiniteCyclic(n) => Presentation::new(names, vec![power(0, *n as i64)]),
            GroupDescriptor::ZPow(n) => {
                let n = *n;
                let rels = (0..n).flat_map(|i| (i + 1..n).map(move |j| commutator(i, j))).collect();
                Presentation::new(names, rels)
            }
            GroupDescriptor::Symbolic { .. } => {
                Presentation { generators: names, relators: vec![], rewriting: None, relators_complete: false }
            }
            GroupDescriptor::Presentation(p) => p.clone(),
        }
    }

    pub fn normal_form(&self) -> Result<NormalForm, GroupError> {
        match self {
            GroupDescriptor::Trivial | GroupDescriptor::FiniteCyclic(1) => Ok(NormalForm::Trivial),
            GroupDescriptor::FiniteCyclic(n) => Ok(NormalForm::Cyclic(*n as u64)),
            GroupDescriptor::Z => Ok(NormalForm::FreeAbelian(1)),
            GroupDescriptor::ZPow(n) => Ok(NormalForm::FreeAbelian(*n as usize)),
            GroupDescriptor::Free(k) => Ok(NormalForm::Free(*k as usize)),
            GroupDescriptor::Symbolic { kind, .. } => {
                Err(GroupError::WordProblemUnavailable(format!("{} is symbolic", kind.tag_name())))
            }
            GroupDescriptor::Presentation(p) => {
                if let Some(sys) = &p.rewriting {
                    return Ok(NormalForm::Rewriting(sys.clone()));
                }
                presentation_free_product_engine(p)
            }
        }
    }
}

/// A free-product engine for presentations recognized as free products of built-ins,
/// with generators permuted into factor order. Only valid when the recognized factors
/// own contiguous generator ranges in presentation order.
fn presentation_free_product_engine(p: &Presentation) -> Result<NormalForm, GroupError> {
    let unavailable = || GroupError::WordProblemUnavailable("presentation has no rewriting system".into());
    let factors = p.recognize_free_factors().ok_or_else(unavailable)?;
    let mut next = 0u32;
    let mut engines = Vec::new();
    for (d, gens) in &factors {
        if gens.iter().enumerate().any(|(i, &g)| g != next + i as u32) {
            return Err(unavailable());
        }
        next += gens.len() as u32;
        engines.push(d.normal_form()?);
    }
    if engines.len() == 1 {
        return Ok(engines.pop().unwrap());
    }
    Ok(NormalForm::FreeProduct(engines))
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Trivial => f.write_str("1"),
            GroupDescriptor::FiniteCyclic(n) => write!(f, "Z/{n}"),
            GroupDescriptor::Z => f.write_str("Z"),
            GroupDescriptor::ZPow(n) => write!(f, "Z^{n}"),
            GroupDescriptor::Free(k) => write!(f, "F_{k}"),
            GroupDescriptor::Symbolic { kind, .. } => f.write_str(kind.tag_name()),
            GroupDescriptor::Presentation(p) => {
                let rels: Vec<String> = p.relators.iter().map(|r| format_word(r, &p.generators)).collect();
                write!(f, "<{} | {}>", p.generators.join(", "), rels.join(", "))?;
                if !p.relators_complete {
                    f.write_str(" (partial)")?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recognizes_free_products() {
        let names = default_names(4);
        // ⟨a, b, c, d | [b, c]⟩ ≅ ℤ ∗ ℤ² ∗ ℤ.
        let p = Presentation::new(names, vec![commutator(1, 2)]);
        let f = p.recognize_free_factors().unwrap();
        let kinds: Vec<_> = f.iter().map(|(d, _)| d.clone()).collect();
        assert_eq!(kinds, vec![GroupDescriptor::Z, GroupDescriptor::ZPow(2), GroupDescriptor::Z]);
        assert!(matches!(GroupDescriptor::Presentation(p).normal_form(), Ok(NormalForm::FreeProduct(_))));
    }

    #[test]
    fn tietze_eliminates_identified_generators() {
        // ⟨a, b, b', c | [a,b], [b',c], b b'⁻¹⟩ → three generators, two relators.
        let names: Vec<String> = ["a", "b", "b'", "c"].iter().map(|s| s.to_string()).collect();
        let rels = vec![commutator(0, 1), commutator(2, 3), vec![Letter::pos(1), Letter::neg(2)]];
        let p = Presentation::new(names, rels);
        let s = p.tietze_simplify();
        assert_eq!(s.rank(), 3);
        assert_eq!(s.relators.len(), 2);
        assert_eq!(s.abelianization().unwrap(), p.abelianization().unwrap());
    }

    #[test]
    fn rewriting_must_kill_relators() {
        let p = GroupDescriptor::ZPow(2).presentation();
        let bogus = RewritingSystem::new(2, vec![]).unwrap();
        assert!(matches!(p.clone().with_rewriting(bogus), Err(GroupError::RelatorNotTrivial(_))));
        let good = RewritingSystem::complete(2, &p.relators, 20).unwrap();
        assert!(p.with_rewriting(good).is_ok());
    }

    #[test]
    fn parameters_validated() {
        assert!(GroupDescriptor::ZPow(1).validate().is_err());
        assert!(GroupDescriptor::Free(1).validate().is_err());
        assert!(GroupDescriptor::FiniteCyclic(0).validate().is_err());
        assert!(GroupDescriptor::ZPow(3).validate().is_ok());
    }
}
