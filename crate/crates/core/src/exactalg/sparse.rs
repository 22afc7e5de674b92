use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::Q;

/// Incremental sparse Gaussian elimination for `A x = b`.
///
/// Rows are added one at a time and reduced to echelon form against the stored pivots.
#[derive(Default, Debug, Clone)]
pub struct SparseSystem {
    /// Leading column → (normalised row, right-hand side).
    pivots: BTreeMap<usize, (BTreeMap<usize, Q>, Q)>,
    inconsistent: bool,
}

impl SparseSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_row(&mut self, mut row: BTreeMap<usize, Q>, mut rhs: Q) {
        row.retain(|_, v| !v.is_zero());
        let mut cursor = 0;
        loop {
            let Some((&col, coef)) = row.range(cursor..).next() else {
                if !rhs.is_zero() {
                    self.inconsistent = true;
                }
                return;
            };
            let coef = coef.clone();
            match self.pivots.get(&col) {
                Some((prow, prhs)) => {
                    for (c, v) in prow {
                        let e = row.entry(*c).or_insert_with(Q::zero);
                        *e -= &coef * v;
                        if e.is_zero() {
                            row.remove(c);
                        }
                    }
                    rhs -= &coef * prhs;
                    cursor = col + 1;
                }
                None => {
                    let inv = Q::one() / &coef;
                    let row: BTreeMap<usize, Q> = row
                        .range(col..)
                        .map(|(c, v)| (*c, v * &inv))
                        .collect();
                    self.pivots.insert(col, (row, rhs * inv));
                    return;
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    /// A solution with free variables set to zero, or `None` if inconsistent.
    pub fn solve(&self, ncols: usize) -> Option<Vec<Q>> {
        if self.inconsistent {
            return None;
        }
        let mut x = vec![Q::zero(); ncols];
        for (&col, (row, rhs)) in self.pivots.iter().rev() {
            let mut v = rhs.clone();
            for (c, a) in row.range(col + 1..) {
                if !x[*c].is_zero() {
                    v -= a * &x[*c];
                }
            }
            x[col] = v;
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::RatMatrix;
    use crate::rational::q;

    fn system(m: &RatMatrix, b: &[Q]) -> SparseSystem {
        let mut s = SparseSystem::new();
        for i in 0..m.rows() {
            let row = (0..m.cols()).map(|j| (j, m.get(i, j).clone())).collect();
            s.add_row(row, b[i].clone());
        }
        s
    }

    #[test]
    fn agrees_with_dense_solve() {
        let m = RatMatrix::from_i64(&[&[0, 1, 2], &[1, 1, 0], &[1, 2, 2]]);
        let b = [q(1), q(2), q(3)];
        let s = system(&m, &b);
        assert_eq!(s.rank(), m.rank());
        let x = s.solve(3).unwrap();
        assert_eq!(m.apply(&x), b.to_vec());
        let bad = system(&m, &[q(1), q(2), q(4)]);
        assert!(bad.solve(3).is_none());
    }
}
