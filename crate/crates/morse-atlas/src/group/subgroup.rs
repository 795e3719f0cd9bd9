//! Left-coset transversals for edge-group images inside vertex groups.
//!
//! `split(h)` writes `h = k · f(x)` with `k` the canonical representative of `h·H`
//! and `x` an element of the edge group, so that walking along an edge of the
//! Bass–Serre space can be computed on normal forms.

use serde::{Deserialize, Serialize};

use super::engine::NormalForm;
use super::word::{exponent_sums, power, Letter, Word};
use super::GroupError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CosetSplitter {
    /// `H = 1`: every element is its own coset representative.
    Trivial,
    /// `H ≤ ℤⁿ` spanned by the rows of `images`. `basis = U · images` is in row echelon
    /// form with positive pivots.
    Lattice { ambient: usize, basis: Vec<Vec<i64>>, pivots: Vec<usize>, unimodular: Vec<Vec<i64>> },
}

impl CosetSplitter {
    /// Splitter for the image of an edge group with the given generator images.
    /// `edge_engine` must be `Trivial` or `FreeAbelian`.
    pub fn new(vertex: &NormalForm, edge: &NormalForm, images: &[Word]) -> Result<Self, GroupError> {
        match (vertex, edge) {
            (_, NormalForm::Trivial) => Ok(CosetSplitter::Trivial),
            (NormalForm::FreeAbelian(n), NormalForm::FreeAbelian(m)) if images.len() == *m => {
                let rows: Vec<Vec<i64>> = images.iter().map(|w| exponent_sums(w, *n)).collect();
                lattice(*n, rows)
            }
            _ => Err(GroupError::WordProblemUnavailable(
                "coset transversal needs a trivial edge group or a lattice in a free abelian vertex group".into(),
            )),
        }
    }

    /// `(k, x)` with `h = k · f(x)`; `k` is a vertex-group normal form, `x` an edge-group word.
    pub fn split(&self, vertex: &NormalForm, h: &[Letter]) -> (Word, Word) {
        match self {
            CosetSplitter::Trivial => (vertex.normalize(h), Word::new()),
            CosetSplitter::Lattice { ambient, basis, pivots, unimodular } => {
                let mut v = exponent_sums(h, *ambient);
                let mut y = vec![0i64; basis.len()];
                for (r, (row, &p)) in basis.iter().zip(pivots).enumerate() {
                    let q = v[p].div_euclid(row[p]);
                    y[r] = q;
                    for (vj, bj) in v.iter_mut().zip(row) {
                        *vj -= q * bj;
                    }
                }
                let k: Word = v.iter().enumerate().flat_map(|(g, &e)| power(g as u32, e)).collect();
                let m = unimodular.len();
                let x: Word = (0..m)
                    .flat_map(|s| {
                        let coeff: i64 = (0..m).map(|r| y[r] * unimodular[r][s]).sum();
                        power(s as u32, coeff)
                    })
                    .collect();
                (k, x)
            }
        }
    }
}

/// Integer row echelon form tracking the unimodular transform.
fn lattice(ambient: usize, rows: Vec<Vec<i64>>) -> Result<CosetSplitter, GroupError> {
    let m = rows.len();
    let mut b = rows;
    let mut u: Vec<Vec<i64>> = (0..m).map(|i| (0..m).map(|j| (i == j) as i64).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ambient {
        if r == m {
            break;
        }
        // Euclid on column `col` among rows r.. until one nonzero entry remains.
        loop {
            let nz: Vec<usize> = (r..m).filter(|&i| b[i][col] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&i| b[i][col].abs()).unwrap();
            for &i in &nz {
                if i != piv {
                    let q = b[i][col] / b[piv][col];
                    for j in 0..ambient {
                        b[i][j] -= q * b[piv][j];
                    }
                    for j in 0..m {
                        u[i][j] -= q * u[piv][j];
                    }
                }
            }
        }
        let Some(i) = (r..m).find(|&i| b[i][col] != 0) else { continue };
        b.swap(r, i);
        u.swap(r, i);
        if b[r][col] < 0 {
            b[r].iter_mut().for_each(|x| *x = -*x);
            u[r].iter_mut().for_each(|x| *x = -*x);
        }
        pivots.push(col);
        r += 1;
    }
    if r < m {
        return Err(GroupError::NotInjective);
    }
    Ok(CosetSplitter::Lattice { ambient, basis: b, pivots, unimodular: u })
}
