//! Smith normal form over ℤ and abelianization of presentations.

use serde::{Deserialize, Serialize};

use super::word::{exponent_sums, Word};
use super::GroupError;

/// `ℤ^free_rank ⊕ ℤ/t₁ ⊕ … ⊕ ℤ/t_k` with `t₁ | t₂ | …` and every `tᵢ > 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl std::fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".to_string() } else { format!("Z^{}", self.free_rank) });
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Nonzero diagonal entries of the Smith normal form, each dividing the next.
pub fn smith_diagonal(matrix: &[Vec<i64>]) -> Result<Vec<u64>, GroupError> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<i128>> = matrix.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // Pivot: smallest nonzero magnitude in the remaining block.
        let Some((pr, pc)) = smallest_entry(&a, t) else { break };
        a.swap(t, pr);
        for row in a.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a[i][t].div_euclid(a[t][t]);
                if q != 0 {
                    for j in t..cols {
                        a[i][j] = checked(a[i][j].checked_sub(checked(q.checked_mul(a[t][j]))?))?;
                    }
                }
                if a[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j].div_euclid(a[t][t]);
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] = checked(row[j].checked_sub(checked(q.checked_mul(row[t]))?))?;
                    }
                }
                if a[t][j] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                // Divisibility: fold a non-multiple into the pivot row and continue.
                let p = a[t][t];
                let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
                match bad {
                    None => break,
                    Some(i) => {
                        for j in t..cols {
                            a[t][j] = checked(a[t][j].checked_add(a[i][j]))?;
                        }
                        continue;
                    }
                }
            }
            let (pr, pc) = smallest_entry(&a, t).expect("block still has a nonzero entry");
            a.swap(t, pr);
            for row in a.iter_mut() {
                row.swap(t, pc);
            }
        }
        diag.push(u64::try_from(a[t][t].unsigned_abs()).map_err(|_| GroupError::Overflow)?);
    }
    Ok(diag)
}

fn checked(x: Option<i128>) -> Result<i128, GroupError> {
    x.ok_or(GroupError::Overflow)
}

fn smallest_entry(a: &[Vec<i128>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(u128, usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, &x) in row.iter().enumerate().skip(t) {
            if x != 0 && best.is_none_or(|(m, _, _)| x.unsigned_abs() < m) {
                best = Some((x.unsigned_abs(), i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Abelianization of `⟨rank generators | relators⟩`.
pub fn abelianize(rank: usize, relators: &[Word]) -> Result<AbelianInvariants, GroupError> {
    let matrix: Vec<Vec<i64>> = relators.iter().map(|r| exponent_sums(r, rank)).collect();
    let diag = smith_diagonal(&matrix)?;
    let nonzero = diag.iter().filter(|&&d| d != 0).count();
    Ok(AbelianInvariants {
        free_rank: rank - nonzero,
        torsion: diag.into_iter().filter(|&d| d > 1).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_diagonals() {
        assert_eq!(smith_diagonal(&[vec![2, 4], vec![6, 8]]).unwrap(), vec![2, 4]);
        assert_eq!(smith_diagonal(&[vec![2, 0], vec![0, 3]]).unwrap(), vec![1, 6]);
        assert_eq!(smith_diagonal(&[vec![0, 0]]).unwrap(), Vec::<u64>::new());
    }

    #[test]
    fn abelianization_display() {
        let inv = AbelianInvariants { free_rank: 3, torsion: vec![] };
        assert_eq!(inv.to_string(), "Z^3");
        assert_eq!(AbelianInvariants { free_rank: 0, torsion: vec![] }.to_string(), "1");
    }
}
