use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ParseError;
use crate::rational::{format_q, parse_q, Q};

pub type Exponents = Vec<u32>;

/// Homogeneous polynomial with exact rational coefficients.
///
/// The zero polynomial has no terms and is compatible with every degree.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct HomogPoly {
    nvars: usize,
    terms: BTreeMap<Exponents, Q>,
}

impl HomogPoly {
    pub fn zero(nvars: usize) -> Self {
        HomogPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Q::one())
    }

    pub fn monomial(exps: Exponents, c: Q) -> Self {
        let mut p = Self::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// `Σ c_a x_a`.
    pub fn linear(coeffs: &[Q]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            p = &p + &Self::var(n, i).scale(c);
        }
        p
    }

    /// Builds from `(exponents, coefficient)` pairs; panics on mixed degrees.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, Q)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p = &p + &Self::monomial(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<i64> {
        self.terms
            .keys()
            .next()
            .map(|e| e.iter().map(|&x| x as i64).sum())
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, Q> {
        &self.terms
    }

    pub fn coeff(&self, e: &[u32]) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        HomogPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::one(self.nvars);
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    /// Value at a rational point.
    pub fn eval(&self, point: &[Q]) -> Q {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes `x_e = Σ_{a≠e} sub[a] x_a` and drops variable `e`.
    pub fn eliminate(&self, e: usize, sub: &[Q]) -> Self {
        assert_eq!(sub.len(), self.nvars);
        let n = self.nvars - 1;
        let drop = |ex: &[u32]| -> Exponents {
            ex.iter()
                .enumerate()
                .filter(|&(i, _)| i != e)
                .map(|(_, &x)| x)
                .collect()
        };
        let lin = HomogPoly::linear(
            &sub.iter()
                .enumerate()
                .filter(|&(i, _)| i != e)
                .map(|(_, c)| c.clone())
                .collect::<Vec<_>>(),
        );
        let mut out = Self::zero(n);
        let mut powers: Vec<HomogPoly> = vec![Self::one(n)];
        for (ex, c) in &self.terms {
            let k = ex[e] as usize;
            while powers.len() <= k {
                let next = &powers[powers.len() - 1] * &lin;
                powers.push(next);
            }
            let rest = Self::monomial(drop(ex), c.clone());
            out = &out + &(&rest * &powers[k]);
        }
        out
    }

    /// Inverse of [`eliminate`](Self::eliminate) on the chosen representative: inserts
    /// variable `e` with exponent zero.
    pub fn lift(&self, e: usize) -> Self {
        let n = self.nvars + 1;
        HomogPoly {
            nvars: n,
            terms: self
                .terms
                .iter()
                .map(|(ex, c)| {
                    let mut v = ex.clone();
                    v.insert(e, 0);
                    (v, c.clone())
                })
                .collect(),
        }
    }

    /// Exact division by a linear form `Σ l_a x_a` with `l_e ≠ 0`. Returns `None` if not divisible.
    pub fn div_linear(&self, l: &[Q], e: usize) -> Option<Self> {
        assert!(!l[e].is_zero());
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        let lin = HomogPoly::linear(l);
        // Peel off the largest power of x_e each step.
        while let Some((ex, c)) = rem
            .terms
            .iter()
            .filter(|(ex, _)| ex[e] > 0)
            .max_by_key(|(ex, _)| ex[e])
            .map(|(ex, c)| (ex.clone(), c.clone()))
        {
            let mut qe = ex.clone();
            qe[e] -= 1;
            let t = Self::monomial(qe, c / &l[e]);
            rem = &rem - &(&t * &lin);
            quot = &quot + &t;
        }
        if rem.is_zero() {
            Some(quot)
        } else {
            None
        }
    }

    pub fn to_json(&self, deg: i64) -> PolyJson {
        PolyJson {
            deg,
            coeffs: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let key = e.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
                    (key, format_q(c))
                })
                .collect(),
        }
    }

    pub fn from_json(nvars: usize, j: &PolyJson) -> Result<Self, ParseError> {
        let mut p = Self::zero(nvars);
        for (k, v) in &j.coeffs {
            let e: Exponents = k
                .split(',')
                .map(|s| s.trim().parse::<u32>())
                .collect::<Result<_, _>>()
                .map_err(|_| ParseError::ExponentKey(k.clone()))?;
            if e.len() != nvars {
                return Err(ParseError::ExponentKey(k.clone()));
            }
            if e.iter().map(|&x| x as i64).sum::<i64>() != j.deg {
                return Err(ParseError::Schema(format!(
                    "monomial `{k}` does not have declared degree {}",
                    j.deg
                )));
            }
            p = &p + &Self::monomial(e, parse_q(v)?);
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PolyJson {
    pub deg: i64,
    pub coeffs: BTreeMap<String, String>,
}

impl fmt::Debug for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", format_q(c))?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "·x{i}")?,
                    _ => write!(f, "·x{i}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

impl<'a> std::ops::Add<&'a HomogPoly> for &'a HomogPoly {
    type Output = HomogPoly;
    fn add(self, rhs: &'a HomogPoly) -> HomogPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            let entry = terms.entry(e.clone()).or_insert_with(Q::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        HomogPoly {
            nvars: self.nvars,
            terms,
        }
    }
}

impl<'a> std::ops::Sub<&'a HomogPoly> for &'a HomogPoly {
    type Output = HomogPoly;
    fn sub(self, rhs: &'a HomogPoly) -> HomogPoly {
        self + &-rhs
    }
}

impl std::ops::Neg for &HomogPoly {
    type Output = HomogPoly;
    fn neg(self) -> HomogPoly {
        HomogPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl<'a> std::ops::Mul<&'a HomogPoly> for &'a HomogPoly {
    type Output = HomogPoly;
    fn mul(self, rhs: &'a HomogPoly) -> HomogPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut terms: BTreeMap<Exponents, Q> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let e: Exponents = a.iter().zip(b).map(|(p, q)| p + q).collect();
                *terms.entry(e).or_insert_with(Q::zero) += x * y;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        HomogPoly {
            nvars: self.nvars,
            terms,
        }
    }
}

/// All exponent vectors of total degree `deg` in `nvars` variables, ascending lex order.
pub fn monomials(nvars: usize, deg: i64) -> Vec<Exponents> {
    let mut out = Vec::new();
    if deg < 0 {
        return out;
    }
    if nvars == 0 {
        if deg == 0 {
            out.push(vec![]);
        }
        return out;
    }
    let mut cur = vec![0u32; nvars];
    fn rec(i: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Exponents>) {
        if i + 1 == cur.len() {
            cur[i] = rem;
            out.push(cur.clone());
            return;
        }
        for v in 0..=rem {
            cur[i] = v;
            rec(i + 1, rem - v, cur, out);
        }
    }
    rec(0, deg as u32, &mut cur, &mut out);
    out
}

/// Matrix of homogeneous polynomials in a fixed number of variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    nvars: usize,
    rows: usize,
    cols: usize,
    data: Vec<HomogPoly>,
}

impl PolyMatrix {
    pub fn zeros(nvars: usize, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            nvars,
            rows,
            cols,
            data: vec![HomogPoly::zero(nvars); rows * cols],
        }
    }

    pub fn identity(nvars: usize, n: usize) -> Self {
        let mut m = Self::zeros(nvars, n, n);
        for i in 0..n {
            m.set(i, i, HomogPoly::one(nvars));
        }
        m
    }

    pub fn from_rows(nvars: usize, rows: Vec<Vec<HomogPoly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(nvars, r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, p) in row.into_iter().enumerate() {
                m.set(i, j, p);
            }
        }
        m
    }

    /// 1×1 matrix.
    pub fn single(p: HomogPoly) -> Self {
        Self::from_rows(p.nvars(), vec![vec![p]])
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &HomogPoly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: HomogPoly) {
        assert_eq!(p.nvars(), self.nvars, "variable count mismatch");
        self.data[i * self.cols + j] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(HomogPoly::is_zero)
    }

    pub fn map(&self, f: impl Fn(&HomogPoly) -> HomogPoly, nvars: usize) -> Self {
        PolyMatrix {
            nvars,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        self.map(|p| p.scale(c), self.nvars)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.nvars, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &PolyMatrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> PolyMatrix {
        let mut b = Self::zeros(self.nvars, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                b.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        b
    }

    pub fn direct_sum(&self, other: &PolyMatrix) -> PolyMatrix {
        let mut m = Self::zeros(self.nvars, self.rows + other.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, other);
        m
    }

    pub fn kron(&self, other: &PolyMatrix) -> PolyMatrix {
        let mut m = Self::zeros(self.nvars, self.rows * other.rows, self.cols * other.cols);
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
}

impl<'a> std::ops::Mul<&'a PolyMatrix> for &'a PolyMatrix {
    type Output = PolyMatrix;
    fn mul(self, rhs: &'a PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut m = PolyMatrix::zeros(self.nvars, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = HomogPoly::zero(self.nvars);
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), rhs.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                m.set(i, j, acc);
            }
        }
        m
    }
}

impl<'a> std::ops::Add<&'a PolyMatrix> for &'a PolyMatrix {
    type Output = PolyMatrix;
    fn add(self, rhs: &'a PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        PolyMatrix {
            nvars: self.nvars,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> std::ops::Sub<&'a PolyMatrix> for &'a PolyMatrix {
    type Output = PolyMatrix;
    fn sub(self, rhs: &'a PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        PolyMatrix {
            nvars: self.nvars,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl std::ops::Neg for &PolyMatrix {
    type Output = PolyMatrix;
    fn neg(self) -> PolyMatrix {
        self.map(|p| -p, self.nvars)
    }
}
