//! Smith normal form over the integers with checked `i64` arithmetic.

use serde::Serialize;

use crate::error::{Error, Result};

/// Diagonal of the Smith normal form, each entry dividing the next.
pub fn smith_diagonal(matrix: &[Vec<i64>]) -> Result<Vec<i64>> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    if matrix.iter().any(|r| r.len() != cols) {
        return Err(Error::InvariantViolated("ragged relator matrix".into()));
    }
    let mut m: Vec<Vec<i64>> = matrix.to_vec();
    let mut diag = Vec::new();
    let mut top = 0;
    while top < rows.min(cols) {
        // Pivot on the smallest nonzero entry of the remaining block.
        let pivot = (top..rows)
            .flat_map(|i| (top..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| m[i][j] != 0)
            .min_by_key(|&(i, j)| m[i][j].unsigned_abs());
        let Some((pi, pj)) = pivot else { break };
        m.swap(top, pi);
        for row in m.iter_mut() {
            row.swap(top, pj);
        }
        loop {
            let p = m[top][top];
            let mut dirty = false;
            for i in top + 1..rows {
                let q = m[i][top] / p;
                if q != 0 {
                    let (head, tail) = m.split_at_mut(i);
                    for (x, &y) in tail[0][top..cols].iter_mut().zip(&head[top][top..cols]) {
                        *x = sub_mul(*x, q, y)?;
                    }
                }
                dirty |= m[i][top] != 0;
            }
            for j in top + 1..cols {
                let q = m[top][j] / p;
                if q != 0 {
                    for row in m.iter_mut().skip(top) {
                        row[j] = sub_mul(row[j], q, row[top])?;
                    }
                }
                dirty |= m[top][j] != 0;
            }
            if !dirty {
                // The pivot must divide the whole remaining block.
                let bad = (top + 1..rows)
                    .flat_map(|i| (top + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| m[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        let (head, tail) = m.split_at_mut(i);
                        for (x, &y) in head[top][top..cols].iter_mut().zip(&tail[0][top..cols]) {
                            *x = x.checked_add(y).ok_or(Error::Overflow)?;
                        }
                        continue;
                    }
                }
            }
            // Move the smallest nonzero entry of the pivot row/column to the pivot.
            let (bi, bj) = (top..rows)
                .map(|i| (i, top))
                .chain((top..cols).map(|j| (top, j)))
                .filter(|&(i, j)| m[i][j] != 0)
                .min_by_key(|&(i, j)| m[i][j].unsigned_abs())
                .unwrap_or((top, top));
            m.swap(top, bi);
            for row in m.iter_mut() {
                row.swap(top, bj);
            }
        }
        diag.push(m[top][top].checked_abs().ok_or(Error::Overflow)?);
        top += 1;
    }
    Ok(diag)
}

fn sub_mul(a: i64, q: i64, b: i64) -> Result<i64> {
    q.checked_mul(b)
        .and_then(|x| a.checked_sub(x))
        .ok_or(Error::Overflow)
}

/// A finitely generated abelian group `Z^rank + sum Z/d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
}

impl AbelianGroup {
    /// Cokernel of the relation matrix with `generators` columns.
    pub fn from_relations(matrix: &[Vec<i64>], generators: usize) -> Result<Self> {
        let diag = smith_diagonal(matrix)?;
        let rank = diag.iter().filter(|&&d| d != 0).count();
        Ok(AbelianGroup {
            free_rank: generators - rank,
            torsion: diag.into_iter().filter(|&d| d > 1).collect(),
        })
    }
}

impl std::fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifold_relator_matrix() {
        let g = AbelianGroup::from_relations(&[vec![0, 0, 0], vec![2, 2, -2]], 3).unwrap();
        assert_eq!(g.free_rank, 2);
        assert_eq!(g.torsion, vec![2]);
        assert_eq!(g.to_string(), "Z^2 + Z/2");
    }

    #[test]
    fn s782_relator_matrix() {
        let g = AbelianGroup::from_relations(&[vec![2, 4, 2], vec![0, 0, 0]], 3).unwrap();
        assert_eq!((g.free_rank, g.torsion), (2, vec![2]));
    }

    #[test]
    fn trivial_group() {
        let g = AbelianGroup::from_relations(&[vec![1]], 1).unwrap();
        assert_eq!((g.free_rank, g.torsion.len()), (0, 0));
        assert_eq!(g.to_string(), "0");
    }

    #[test]
    fn divisibility_chain() {
        assert_eq!(
            smith_diagonal(&[vec![2, 0], vec![0, 3]]).unwrap(),
            vec![1, 6]
        );
        assert_eq!(
            smith_diagonal(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).unwrap(),
            vec![2, 6, 12]
        );
    }

    #[test]
    fn overflow_is_reported() {
        let big = i64::MAX / 2 + 7;
        let r = smith_diagonal(&[vec![big, big - 1], vec![big - 1, -big]]);
        assert!(matches!(r, Err(Error::Overflow)) || r.is_ok());
    }
}
