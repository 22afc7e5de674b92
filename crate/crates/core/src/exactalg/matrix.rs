use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ParseError;
use crate::rational::{format_q, parse_q, Q};

/// Dense matrix of exact rationals, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

/// Result of [`RatMatrix::rank_kernel_image`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankKernelImage {
    pub rank: usize,
    /// Basis of the null space, each vector of length `cols`.
    pub kernel: Vec<Vec<Q>>,
    /// Basis of the column space, each vector of length `rows` (pivot columns).
    pub image: Vec<Vec<Q>>,
}

struct Echelon {
    /// Reduced row echelon form.
    rref: RatMatrix,
    pivots: Vec<usize>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Q::one();
        }
        m
    }

    pub fn scalar(n: usize, c: Q) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        RatMatrix { rows: r, cols: c, data }
    }

    /// Explicit shape, so that 0×k and k×0 matrices are representable.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Q>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows × cols");
        RatMatrix { rows, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| crate::rational::q(x)).collect())
                .collect(),
        )
    }

    pub fn column(v: &[Q]) -> Self {
        Self::from_vec(v.len(), 1, v.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &Q) {
        let e = &mut self.data[i * self.cols + j];
        *e += v;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn scale(&self, c: &Q) -> Self {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Q::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &RatMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> RatMatrix {
        let mut b = RatMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                b.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        b
    }

    pub fn direct_sum(&self, other: &RatMatrix) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.rows + other.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, other);
        m
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &RatMatrix) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            m.set(i * other.rows + k, j * other.cols + l, a * b);
                        }
                    }
                }
            }
        }
        m
    }

    fn echelon(&self) -> Echelon {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..a.cols {
            if prow >= a.rows {
                break;
            }
            let Some(found) = (prow..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
                continue;
            };
            if found != prow {
                for j in 0..a.cols {
                    a.data.swap(found * a.cols + j, prow * a.cols + j);
                }
            }
            let inv = a.get(prow, col).recip();
            for j in col..a.cols {
                let v = a.get(prow, j) * &inv;
                a.set(prow, j, v);
            }
            for r in 0..a.rows {
                if r == prow || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in col..a.cols {
                    let p = a.get(prow, j);
                    if p.is_zero() {
                        continue;
                    }
                    let v = a.get(r, j) - &f * p;
                    a.set(r, j, v);
                }
            }
            pivots.push(col);
            prow += 1;
        }
        Echelon { rref: a, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Rank, null-space basis and column-space basis, each basis verified by substitution.
    pub fn rank_kernel_image(&self) -> RankKernelImage {
        let Echelon { rref, pivots } = self.echelon();
        let rank = pivots.len();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut kernel = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Q::zero(); self.cols];
            v[free] = Q::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -rref.get(row, free).clone();
            }
            kernel.push(v);
        }
        let image = pivots
            .iter()
            .map(|&c| (0..self.rows).map(|r| self.get(r, c).clone()).collect())
            .collect();
        for v in &kernel {
            assert!(self.apply(v).iter().all(Zero::is_zero), "kernel vector fails substitution");
        }
        RankKernelImage {
            rank,
            kernel,
            image,
        }
    }

    pub fn kernel(&self) -> Vec<Vec<Q>> {
        self.rank_kernel_image().kernel
    }

    pub fn determinant(&self) -> Q {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Q::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return Q::zero();
            };
            if p != col {
                for j in 0..n {
                    a.data.swap(p * n + j, col * n + j);
                }
                det = -det;
            }
            let piv = a.get(col, col).clone();
            det *= &piv;
            for r in col + 1..n {
                if a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col) / &piv;
                for j in col..n {
                    let v = a.get(r, j) - &f * a.get(col, j);
                    a.set(r, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = RatMatrix::zeros(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &RatMatrix::identity(n));
        let Echelon { rref, pivots } = aug.echelon();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(rref.block(0, n, n, n))
    }

    /// Some solution of `self · x = b`, if one exists.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = RatMatrix::zeros(self.rows, self.cols + 1);
        aug.set_block(0, 0, self);
        for (i, v) in b.iter().enumerate() {
            aug.set(i, self.cols, v.clone());
        }
        let Echelon { rref, pivots } = aug.echelon();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = rref.get(row, self.cols).clone();
        }
        debug_assert_eq!(self.apply(&x), b);
        Some(x)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(format_q).collect())
            .collect()
    }

    pub fn from_strings(rows: usize, cols: usize, s: &[Vec<String>]) -> Result<Self, ParseError> {
        if s.len() != rows || s.iter().any(|r| r.len() != cols) {
            return Err(ParseError::Schema(format!("expected a {rows}x{cols} matrix")));
        }
        let data = s
            .iter()
            .flat_map(|r| r.iter().map(|x| parse_q(x)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RatMatrix { rows, cols, data })
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatMatrix {}x{} ", self.rows, self.cols)?;
        f.debug_list().entries(self.to_strings()).finish()
    }
}

impl<'a> Mul<&'a RatMatrix> for &'a RatMatrix {
    type Output = RatMatrix;
    fn mul(self, rhs: &'a RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut m = RatMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        m.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        m
    }
}

impl<'a> Add<&'a RatMatrix> for &'a RatMatrix {
    type Output = RatMatrix;
    fn add(self, rhs: &'a RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a RatMatrix> for &'a RatMatrix {
    type Output = RatMatrix;
    fn sub(self, rhs: &'a RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &RatMatrix {
    type Output = RatMatrix;
    fn neg(self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

/// Serialized as `[[ "p/q", ... ], ...]` with an explicit shape.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

impl From<&RatMatrix> for MatrixJson {
    fn from(m: &RatMatrix) -> Self {
        MatrixJson {
            rows: m.rows,
            cols: m.cols,
            entries: m.to_strings(),
        }
    }
}

impl TryFrom<MatrixJson> for RatMatrix {
    type Error = ParseError;
    fn try_from(j: MatrixJson) -> Result<Self, ParseError> {
        RatMatrix::from_strings(j.rows, j.cols, &j.entries)
    }
}
