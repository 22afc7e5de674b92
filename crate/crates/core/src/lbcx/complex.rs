use std::collections::BTreeMap;

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::poly::{HomogPoly, PolyJson, PolyMatrix};
use crate::error::{LbError, ParseError};
use crate::rational::Q;

/// Bounded complex of direct sums of line bundles `O(d)` on `P^m`.
///
/// The entry of `d^i` from summand `O(a)` to summand `O(b)` is homogeneous of degree `b − a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LBComplex {
    m: usize,
    lo: i64,
    terms: Vec<Vec<i64>>,
    diffs: Vec<PolyMatrix>,
}

fn sign(k: i64) -> Q {
    if k.rem_euclid(2) == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

fn check_grading(
    degree: i64,
    mat: &PolyMatrix,
    src: &[i64],
    tgt: &[i64],
    shift: i64,
) -> Result<(), LbError> {
    for (r, &b) in tgt.iter().enumerate() {
        for (c, &a) in src.iter().enumerate() {
            let p = mat.get(r, c);
            if !p.is_homogeneous() {
                return Err(LbError::Grading {
                    degree,
                    row: r,
                    col: c,
                    found: -1,
                    expected: b - a + shift,
                });
            }
            if let Some(found) = p.degree() {
                if found != b - a + shift {
                    return Err(LbError::Grading {
                        degree,
                        row: r,
                        col: c,
                        found,
                        expected: b - a + shift,
                    });
                }
            }
        }
    }
    Ok(())
}

fn first_nonzero(m: &PolyMatrix) -> Option<(usize, usize)> {
    (0..m.rows())
        .flat_map(|r| (0..m.cols()).map(move |c| (r, c)))
        .find(|&(r, c)| !m.get(r, c).is_zero())
}

impl LBComplex {
    /// `diffs[k]` is the differential out of degree `lo + k`.
    pub fn new(m: usize, lo: i64, terms: Vec<Vec<i64>>, diffs: Vec<PolyMatrix>) -> Result<Self, LbError> {
        let c = LBComplex { m, lo, terms, diffs };
        c.validate()?;
        Ok(c)
    }

    /// Checks shapes, variable counts, grading and `d∘d = 0`; reports the first failure.
    pub fn validate(&self) -> Result<(), LbError> {
        let nv = self.m + 1;
        if self.terms.is_empty() || self.diffs.len() + 1 != self.terms.len() {
            return Err(LbError::Mismatch(format!(
                "{} terms need {} differentials",
                self.terms.len(),
                self.terms.len().saturating_sub(1)
            )));
        }
        for (k, d) in self.diffs.iter().enumerate() {
            let deg = self.lo + k as i64;
            if d.nvars() != nv {
                return Err(LbError::Variables {
                    m: self.m as i64,
                    found: d.nvars(),
                    expected: nv,
                });
            }
            let (src, tgt) = (&self.terms[k], &self.terms[k + 1]);
            if d.rows() != tgt.len() || d.cols() != src.len() {
                return Err(LbError::Shape {
                    degree: deg,
                    rows: d.rows(),
                    cols: d.cols(),
                    expected_rows: tgt.len(),
                    expected_cols: src.len(),
                });
            }
            check_grading(deg, d, src, tgt, 0)?;
        }
        for k in 1..self.diffs.len() {
            let dd = &self.diffs[k] * &self.diffs[k - 1];
            if let Some((row, col)) = first_nonzero(&dd) {
                return Err(LbError::NotSquareZero {
                    degree: self.lo + k as i64 - 1,
                    row,
                    col,
                });
            }
        }
        Ok(())
    }

    pub fn zero(m: usize) -> Self {
        LBComplex {
            m,
            lo: 0,
            terms: vec![vec![]],
            diffs: vec![],
        }
    }

    /// `O(d)` in degree 0.
    pub fn line_bundle(m: usize, d: i64) -> Self {
        Self::sum_in_degree(m, 0, vec![d])
    }

    /// `⊕ O(d)` concentrated in one degree.
    pub fn sum_in_degree(m: usize, degree: i64, twists: Vec<i64>) -> Self {
        LBComplex {
            m,
            lo: degree,
            terms: vec![twists],
            diffs: vec![],
        }
    }

    /// `[O(a) → O(b)]` with the source in degree `degree`.
    pub fn two_term(m: usize, degree: i64, a: i64, b: i64, f: HomogPoly) -> Result<Self, LbError> {
        Self::new(m, degree, vec![vec![a], vec![b]], vec![PolyMatrix::single(f)])
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn nvars(&self) -> usize {
        self.m + 1
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn terms(&self, i: i64) -> &[i64] {
        if i < self.lo || i > self.hi() {
            &[]
        } else {
            &self.terms[(i - self.lo) as usize]
        }
    }

    pub fn rank(&self, i: i64) -> usize {
        self.terms(i).len()
    }

    pub fn diff(&self, i: i64) -> PolyMatrix {
        if i >= self.lo && i < self.hi() {
            self.diffs[(i - self.lo) as usize].clone()
        } else {
            PolyMatrix::zeros(self.nvars(), self.rank(i + 1), self.rank(i))
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.iter().all(Vec::is_empty)
    }

    /// `(degree, twist)` for every summand.
    pub fn summands(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms
            .iter()
            .enumerate()
            .flat_map(move |(k, t)| t.iter().map(move |&d| (self.lo + k as i64, d)))
    }

    pub fn min_twist(&self) -> Option<i64> {
        self.summands().map(|(_, d)| d).min()
    }

    pub fn max_twist(&self) -> Option<i64> {
        self.summands().map(|(_, d)| d).max()
    }

    /// Same complex padded with empty terms out to `[lo, hi]`.
    pub fn padded(&self, lo: i64, hi: i64) -> Self {
        let lo = lo.min(self.lo);
        let hi = hi.max(self.hi());
        LBComplex {
            m: self.m,
            lo,
            terms: (lo..=hi).map(|i| self.terms(i).to_vec()).collect(),
            diffs: (lo..hi).map(|i| self.diff(i)).collect(),
        }
    }

    /// Drops empty terms at both ends.
    pub fn trimmed(&self) -> Self {
        let (mut lo, mut hi) = (self.lo, self.hi());
        while lo < hi && self.rank(lo) == 0 {
            lo += 1;
        }
        while hi > lo && self.rank(hi) == 0 {
            hi -= 1;
        }
        if lo == hi && self.rank(lo) == 0 {
            return Self::zero(self.m);
        }
        LBComplex {
            m: self.m,
            lo,
            terms: (lo..=hi).map(|i| self.terms(i).to_vec()).collect(),
            diffs: (lo..hi).map(|i| self.diff(i)).collect(),
        }
    }

    /// Every summand `O(d)` becomes `O(d + k)`.
    pub fn twist(&self, k: i64) -> Self {
        LBComplex {
            m: self.m,
            lo: self.lo,
            terms: self
                .terms
                .iter()
                .map(|t| t.iter().map(|d| d + k).collect())
                .collect(),
            diffs: self.diffs.clone(),
        }
    }

    /// `C[k]^i = C^{i+k}` with differentials multiplied by `(−1)^k`.
    pub fn shift(&self, k: i64) -> Self {
        let s = sign(k);
        LBComplex {
            m: self.m,
            lo: self.lo - k,
            terms: self.terms.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(&s)).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, LbError> {
        if self.m != other.m {
            return Err(LbError::Mismatch("direct sum across different P^m".into()));
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        Ok(LBComplex {
            m: self.m,
            lo,
            terms: (lo..=hi)
                .map(|i| [self.terms(i), other.terms(i)].concat())
                .collect(),
            diffs: (lo..hi)
                .map(|i| self.diff(i).direct_sum(&other.diff(i)))
                .collect(),
        })
    }

    /// Tensor product with the Koszul sign `d(x⊗y) = dx⊗y + (−1)^{|x|} x⊗dy`.
    ///
    /// In degree `n` the summands are grouped by the degree `a` of the left factor, ascending,
    /// and within a group ordered row-major over (left summand, right summand).
    pub fn tensor(&self, other: &Self) -> Result<Self, LbError> {
        if self.m != other.m {
            return Err(LbError::Mismatch("tensor across different P^m".into()));
        }
        let layout = TensorLayout::new(self, other);
        let nv = self.nvars();
        let mut terms = Vec::new();
        for n in layout.lo..=layout.hi {
            let mut t = Vec::new();
            for a in self.lo..=self.hi() {
                for &x in self.terms(a) {
                    for &y in other.terms(n - a) {
                        t.push(x + y);
                    }
                }
            }
            terms.push(t);
        }
        let mut diffs = Vec::new();
        for n in layout.lo..layout.hi {
            let mut d = PolyMatrix::zeros(nv, layout.rank(n + 1), layout.rank(n));
            for a in self.lo..=self.hi() {
                let b = n - a;
                let (ra, rb) = (self.rank(a), other.rank(b));
                if ra * rb == 0 {
                    continue;
                }
                let col = layout.offset(n, a);
                let da = self.diff(a);
                if self.rank(a + 1) > 0 {
                    let blk = da.kron(&PolyMatrix::identity(nv, rb));
                    d.set_block(layout.offset(n + 1, a + 1), col, &blk);
                }
                if other.rank(b + 1) > 0 {
                    let blk = PolyMatrix::identity(nv, ra)
                        .kron(&other.diff(b))
                        .scale(&sign(a));
                    d.set_block(layout.offset(n + 1, a), col, &blk);
                }
            }
            diffs.push(d);
        }
        LBComplex::new(self.m, layout.lo, terms, diffs)
    }

    /// `(C^∨)^i = (C^{−i})^∨`: twists negated and differentials transposed.
    pub fn dual(&self) -> Self {
        let lo = -self.hi();
        let hi = -self.lo;
        LBComplex {
            m: self.m,
            lo,
            terms: (lo..=hi)
                .map(|i| self.terms(-i).iter().map(|d| -d).collect())
                .collect(),
            diffs: (lo..hi).map(|i| self.diff(-i - 1).transpose()).collect(),
        }
    }

    pub fn to_json(&self) -> LBComplexJson {
        let terms = (self.lo..=self.hi())
            .map(|i| (i.to_string(), self.terms(i).to_vec()))
            .collect();
        let diffs = (self.lo..self.hi())
            .map(|i| {
                let d = self.diff(i);
                let (src, tgt) = (self.terms(i), self.terms(i + 1));
                let rows = (0..d.rows())
                    .map(|r| {
                        (0..d.cols())
                            .map(|c| d.get(r, c).to_json(tgt[r] - src[c]))
                            .collect()
                    })
                    .collect();
                (i.to_string(), rows)
            })
            .collect();
        LBComplexJson {
            m: self.m as i64,
            range: [self.lo, self.hi()],
            terms,
            diffs,
        }
    }

    pub fn from_json(j: &LBComplexJson) -> Result<Self, LbError> {
        if j.m < 0 {
            return Err(LbError::EmptySpace);
        }
        let m = j.m as usize;
        let [lo, hi] = j.range;
        if lo > hi {
            return Err(ParseError::Schema(format!("empty range [{lo}, {hi}]")).into());
        }
        for key in j.terms.keys().chain(j.diffs.keys()) {
            let i: i64 = key.parse().map_err(|_| ParseError::DegreeKey(key.clone()))?;
            if i < lo || i > hi {
                return Err(ParseError::Schema(format!("degree {i} outside range")).into());
            }
        }
        let terms: Vec<Vec<i64>> = (lo..=hi)
            .map(|i| j.terms.get(&i.to_string()).cloned().unwrap_or_default())
            .collect();
        let mut diffs = Vec::new();
        for i in lo..hi {
            let (src, tgt) = (&terms[(i - lo) as usize], &terms[(i + 1 - lo) as usize]);
            let mut d = PolyMatrix::zeros(m + 1, tgt.len(), src.len());
            if let Some(rows) = j.diffs.get(&i.to_string()) {
                if rows.len() != tgt.len() || rows.iter().any(|r| r.len() != src.len()) {
                    return Err(ParseError::Schema(format!(
                        "d^{i} must be {}x{}",
                        tgt.len(),
                        src.len()
                    ))
                    .into());
                }
                for (r, row) in rows.iter().enumerate() {
                    for (c, pj) in row.iter().enumerate() {
                        d.set(r, c, HomogPoly::from_json(m + 1, pj)?);
                    }
                }
            }
            diffs.push(d);
        }
        LBComplex::new(m, lo, terms, diffs)
    }
}

/// Index bookkeeping shared by [`LBComplex::tensor`] and maps between tensor products.
pub struct TensorLayout<'a> {
    a: &'a LBComplex,
    b: &'a LBComplex,
    pub lo: i64,
    pub hi: i64,
}

impl<'a> TensorLayout<'a> {
    pub fn new(a: &'a LBComplex, b: &'a LBComplex) -> Self {
        TensorLayout {
            a,
            b,
            lo: a.lo() + b.lo(),
            hi: a.hi() + b.hi(),
        }
    }

    pub fn rank(&self, n: i64) -> usize {
        (self.a.lo()..=self.a.hi())
            .map(|i| self.a.rank(i) * self.b.rank(n - i))
            .sum()
    }

    /// Start of the `A^a ⊗ B^{n−a}` block in degree `n`.
    pub fn offset(&self, n: i64, a: i64) -> usize {
        (self.a.lo()..a).map(|i| self.a.rank(i) * self.b.rank(n - i)).sum()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LBComplexJson {
    pub m: i64,
    pub range: [i64; 2],
    pub terms: BTreeMap<String, Vec<i64>>,
    pub diffs: BTreeMap<String, Vec<Vec<PolyJson>>>,
}

/// Degree-preserving chain map between line-bundle complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LBMap {
    source: LBComplex,
    target: LBComplex,
    /// Indexed over the source range.
    comps: Vec<PolyMatrix>,
}

impl LBMap {
    /// Missing components are zero. Checks shapes, grading and commutation with differentials.
    pub fn new(source: LBComplex, target: LBComplex, comps: BTreeMap<i64, PolyMatrix>) -> Result<Self, LbError> {
        if source.m != target.m {
            return Err(LbError::Mismatch("source and target live on different P^m".into()));
        }
        let nv = source.nvars();
        for (&i, mat) in &comps {
            if (i < source.lo() || i > source.hi()) && !mat.is_zero() {
                return Err(LbError::Mismatch(format!("component in degree {i} outside source range")));
            }
        }
        let mut v = Vec::new();
        for i in source.lo()..=source.hi() {
            let mat = comps
                .get(&i)
                .cloned()
                .unwrap_or_else(|| PolyMatrix::zeros(nv, target.rank(i), source.rank(i)));
            if mat.nvars() != nv {
                return Err(LbError::Variables {
                    m: source.m as i64,
                    found: mat.nvars(),
                    expected: nv,
                });
            }
            if mat.rows() != target.rank(i) || mat.cols() != source.rank(i) {
                return Err(LbError::Shape {
                    degree: i,
                    rows: mat.rows(),
                    cols: mat.cols(),
                    expected_rows: target.rank(i),
                    expected_cols: source.rank(i),
                });
            }
            check_grading(i, &mat, source.terms(i), target.terms(i), 0)?;
            v.push(mat);
        }
        let f = LBMap {
            source,
            target,
            comps: v,
        };
        let lo = f.source.lo().min(f.target.lo()) - 1;
        let hi = f.source.hi().max(f.target.hi());
        for i in lo..=hi {
            let lhs = &f.target.diff(i) * &f.comp(i);
            let rhs = &f.comp(i + 1) * &f.source.diff(i);
            if let Some((row, col)) = first_nonzero(&(&lhs - &rhs)) {
                return Err(LbError::NotChainMap { degree: i, row, col });
            }
        }
        Ok(f)
    }

    pub fn identity(c: &LBComplex) -> Self {
        LBMap {
            source: c.clone(),
            target: c.clone(),
            comps: (c.lo()..=c.hi())
                .map(|i| PolyMatrix::identity(c.nvars(), c.rank(i)))
                .collect(),
        }
    }

    pub fn zero(source: &LBComplex, target: &LBComplex) -> Self {
        LBMap {
            source: source.clone(),
            target: target.clone(),
            comps: (source.lo()..=source.hi())
                .map(|i| PolyMatrix::zeros(source.nvars(), target.rank(i), source.rank(i)))
                .collect(),
        }
    }

    pub fn source(&self) -> &LBComplex {
        &self.source
    }

    pub fn target(&self) -> &LBComplex {
        &self.target
    }

    pub fn comp(&self, i: i64) -> PolyMatrix {
        if i < self.source.lo() || i > self.source.hi() {
            PolyMatrix::zeros(self.source.nvars(), self.target.rank(i), self.source.rank(i))
        } else {
            self.comps[(i - self.source.lo()) as usize].clone()
        }
    }

    pub fn components(&self) -> BTreeMap<i64, PolyMatrix> {
        (self.source.lo()..=self.source.hi())
            .map(|i| (i, self.comp(i)))
            .collect()
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &LBMap) -> Result<LBMap, LbError> {
        if g.source != self.target {
            return Err(LbError::Mismatch("composition of non-matching maps".into()));
        }
        let comps = (self.source.lo()..=self.source.hi())
            .map(|i| (i, &g.comp(i) * &self.comp(i)))
            .collect();
        LBMap::new(self.source.clone(), g.target.clone(), comps)
    }

    pub fn add(&self, g: &LBMap) -> Result<LBMap, LbError> {
        if g.source != self.source || g.target != self.target {
            return Err(LbError::Mismatch("sum of maps with different endpoints".into()));
        }
        let comps = (self.source.lo()..=self.source.hi())
            .map(|i| (i, &self.comp(i) + &g.comp(i)))
            .collect();
        LBMap::new(self.source.clone(), self.target.clone(), comps)
    }

    pub fn scale(&self, c: &Q) -> LBMap {
        LBMap {
            source: self.source.clone(),
            target: self.target.clone(),
            comps: self.comps.iter().map(|m| m.scale(c)).collect(),
        }
    }

    pub fn twist(&self, k: i64) -> LBMap {
        LBMap {
            source: self.source.twist(k),
            target: self.target.twist(k),
            comps: self.comps.clone(),
        }
    }

    /// `f[k]`, with components unchanged in the shifted indexing.
    pub fn shift(&self, k: i64) -> LBMap {
        LBMap {
            source: self.source.shift(k),
            target: self.target.shift(k),
            comps: self.comps.clone(),
        }
    }

    /// `Cone(f)^i = S^{i+1} ⊕ T^i`, differential `[[−d_S, 0], [f, d_T]]`.
    pub fn cone(&self) -> LBComplex {
        let (s, t) = (&self.source, &self.target);
        let nv = s.nvars();
        let lo = (s.lo() - 1).min(t.lo());
        let hi = (s.hi() - 1).max(t.hi());
        let terms = (lo..=hi)
            .map(|i| [s.terms(i + 1), t.terms(i)].concat())
            .collect();
        let diffs = (lo..hi)
            .map(|i| {
                let (s1, t0) = (s.rank(i + 1), t.rank(i));
                let (s2, t1) = (s.rank(i + 2), t.rank(i + 1));
                let mut d = PolyMatrix::zeros(nv, s2 + t1, s1 + t0);
                d.set_block(0, 0, &-&s.diff(i + 1));
                d.set_block(s2, 0, &self.comp(i + 1));
                d.set_block(s2, s1, &t.diff(i));
                d
            })
            .collect();
        LBComplex::new(s.m, lo, terms, diffs).expect("cone of a chain map is a complex")
    }

    /// Inclusion `T → Cone(f)`.
    pub fn cone_inclusion(&self) -> LBMap {
        let cone = self.cone();
        let t = &self.target;
        let comps = (t.lo()..=t.hi())
            .map(|i| {
                let s1 = self.source.rank(i + 1);
                let mut m = PolyMatrix::zeros(t.nvars(), s1 + t.rank(i), t.rank(i));
                m.set_block(s1, 0, &PolyMatrix::identity(t.nvars(), t.rank(i)));
                (i, m)
            })
            .collect();
        LBMap::new(t.clone(), cone, comps).expect("inclusion into the cone is a chain map")
    }

    /// Projection `Cone(f) → S[1]`.
    pub fn cone_projection(&self) -> LBMap {
        let cone = self.cone();
        let s1 = self.source.shift(1);
        let comps = (cone.lo()..=cone.hi())
            .map(|i| {
                let a = self.source.rank(i + 1);
                let mut m = PolyMatrix::zeros(cone.nvars(), a, cone.rank(i));
                m.set_block(0, 0, &PolyMatrix::identity(cone.nvars(), a));
                (i, m)
            })
            .collect();
        LBMap::new(cone, s1, comps).expect("projection from the cone is a chain map")
    }

    /// `f ⊗ id_C` on the tensor layouts of [`LBComplex::tensor`].
    pub fn tensor_right(&self, c: &LBComplex) -> Result<LBMap, LbError> {
        let src = self.source.tensor(c)?;
        let tgt = self.target.tensor(c)?;
        let ls = TensorLayout::new(&self.source, c);
        let lt = TensorLayout::new(&self.target, c);
        let nv = c.nvars();
        let mut comps = BTreeMap::new();
        for n in src.lo()..=src.hi() {
            let mut m = PolyMatrix::zeros(nv, tgt.rank(n), src.rank(n));
            for a in self.source.lo()..=self.source.hi() {
                let rb = c.rank(n - a);
                if rb == 0 || self.source.rank(a) == 0 || self.target.rank(a) == 0 {
                    continue;
                }
                let blk = self.comp(a).kron(&PolyMatrix::identity(nv, rb));
                m.set_block(lt.offset(n, a), ls.offset(n, a), &blk);
            }
            comps.insert(n, m);
        }
        LBMap::new(src, tgt, comps)
    }

    /// `f ⊗ g` on the tensor layouts of [`LBComplex::tensor`]; no signs since both have degree 0.
    pub fn tensor(&self, g: &LBMap) -> Result<LBMap, LbError> {
        let src = self.source.tensor(&g.source)?;
        let tgt = self.target.tensor(&g.target)?;
        let ls = TensorLayout::new(&self.source, &g.source);
        let lt = TensorLayout::new(&self.target, &g.target);
        let nv = src.nvars();
        let mut comps = BTreeMap::new();
        for n in src.lo()..=src.hi() {
            let mut m = PolyMatrix::zeros(nv, tgt.rank(n), src.rank(n));
            for a in self.source.lo()..=self.source.hi() {
                let b = n - a;
                if self.source.rank(a) * g.source.rank(b) == 0 || self.target.rank(a) * g.target.rank(b) == 0 {
                    continue;
                }
                let blk = self.comp(a).kron(&g.comp(b));
                m.set_block(lt.offset(n, a), ls.offset(n, a), &blk);
            }
            comps.insert(n, m);
        }
        LBMap::new(src, tgt, comps)
    }

    /// `f^∨ : T^∨ → S^∨`, componentwise transpose.
    pub fn dual(&self) -> LBMap {
        let src = self.target.dual();
        let tgt = self.source.dual();
        let comps = (src.lo()..=src.hi()).map(|i| (i, self.comp(-i).transpose())).collect();
        LBMap::new(src, tgt, comps).expect("dual of a chain map is a chain map")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LBMapJson {
    pub source: LBComplexJson,
    pub target: LBComplexJson,
    pub comps: BTreeMap<String, Vec<Vec<PolyJson>>>,
}

impl LBMap {
    pub fn to_json(&self) -> LBMapJson {
        let comps = (self.source.lo()..=self.source.hi())
            .map(|i| {
                let c = self.comp(i);
                let (src, tgt) = (self.source.terms(i), self.target.terms(i));
                let rows = (0..c.rows())
                    .map(|r| (0..c.cols()).map(|k| c.get(r, k).to_json(tgt[r] - src[k])).collect())
                    .collect();
                (i.to_string(), rows)
            })
            .collect();
        LBMapJson {
            source: self.source.to_json(),
            target: self.target.to_json(),
            comps,
        }
    }

    pub fn from_json(j: &LBMapJson) -> Result<Self, LbError> {
        let source = LBComplex::from_json(&j.source)?;
        let target = LBComplex::from_json(&j.target)?;
        let nv = source.nvars();
        let mut comps = BTreeMap::new();
        for (key, rows) in &j.comps {
            let i: i64 = key.parse().map_err(|_| ParseError::DegreeKey(key.clone()))?;
            let (r, c) = (target.rank(i), source.rank(i));
            if rows.len() != r || rows.iter().any(|row| row.len() != c) {
                return Err(ParseError::Schema(format!("map component {i} must be {r}x{c}")).into());
            }
            let mut m = PolyMatrix::zeros(nv, r, c);
            for (a, row) in rows.iter().enumerate() {
                for (b, pj) in row.iter().enumerate() {
                    m.set(a, b, HomogPoly::from_json(nv, pj)?);
                }
            }
            comps.insert(i, m);
        }
        LBMap::new(source, target, comps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn s(n: usize) -> HomogPoly {
        HomogPoly::linear(&vec![q(1); n])
    }

    #[test]
    fn validate_examples() {
        assert!(LBComplex::line_bundle(2, 0).validate().is_ok());
        assert!(LBComplex::two_term(2, -1, -1, 0, s(3)).is_ok());
        let bad = LBComplex::two_term(2, -1, -2, 0, s(3));
        assert!(matches!(bad, Err(LbError::Grading { found: 1, expected: 2, .. })));
    }

    #[test]
    fn twist_and_shift_bookkeeping() {
        let c = LBComplex::two_term(1, -1, -1, 0, s(2)).unwrap();
        assert_eq!(c.twist(1).twist(-1), c);
        assert_eq!(c.twist(0), c);
        let t = c.twist(-1);
        assert_eq!(t.terms(-1), &[-2]);
        assert_eq!(t.terms(0), &[-1]);
        assert_eq!(c.shift(2).shift(-2), c);
    }

    #[test]
    fn tensor_examples() {
        let a = LBComplex::line_bundle(1, 2);
        let b = LBComplex::line_bundle(1, -5);
        assert_eq!(a.tensor(&b).unwrap(), LBComplex::line_bundle(1, -3));
        let c = LBComplex::two_term(1, -1, -1, 0, s(2)).unwrap();
        assert_eq!(c.tensor(&LBComplex::line_bundle(1, 0)).unwrap(), c);
        let ct = c.tensor(&LBComplex::line_bundle(1, 1)).unwrap();
        assert_eq!(ct.terms(-1), &[0]);
        assert_eq!(ct.terms(0), &[1]);
        // Koszul square: (x0)⊗(x1) is the Koszul complex of (x0, x1).
        let k0 = LBComplex::two_term(1, -1, -1, 0, HomogPoly::var(2, 0)).unwrap();
        let k1 = LBComplex::two_term(1, -1, -1, 0, HomogPoly::var(2, 1)).unwrap();
        let k = k0.tensor(&k1).unwrap();
        assert_eq!(k.terms(-2), &[-2]);
        assert_eq!(k.terms(-1), &[-1, -1]);
        assert_eq!(k.terms(0), &[0]);
    }

    #[test]
    fn dual_examples() {
        assert_eq!(LBComplex::line_bundle(2, 3).dual(), LBComplex::line_bundle(2, -3));
        let c = LBComplex::two_term(1, -1, -1, 0, s(2)).unwrap();
        let d = c.dual();
        assert!(d.validate().is_ok());
        assert_eq!(d.terms(0), &[0]);
        assert_eq!(d.terms(1), &[1]);
        assert_eq!(d.dual(), c);
        // Self-dual up to twist and shift: same shape as c(1)[-1].
        assert_eq!(d.diff(0), PolyMatrix::single(s(2)));
        assert_eq!(d.terms(0), c.twist(1).shift(-1).terms(0));
    }

    #[test]
    fn cone_examples() {
        let sm = LBComplex::two_term(1, -1, -1, 0, s(2)).unwrap();
        let f = LBMap::new(
            LBComplex::line_bundle(1, -1),
            LBComplex::line_bundle(1, 0),
            [(0, PolyMatrix::single(s(2)))].into(),
        )
        .unwrap();
        assert_eq!(f.cone(), sm);
        let z = LBMap::zero(&LBComplex::line_bundle(1, 0), &LBComplex::line_bundle(1, 1));
        let cz = z.cone();
        assert_eq!(cz.terms(-1), &[0]);
        assert_eq!(cz.terms(0), &[1]);
    }

    #[test]
    fn json_round_trip() {
        let k0 = LBComplex::two_term(1, -1, -1, 0, HomogPoly::var(2, 0)).unwrap();
        let k1 = LBComplex::two_term(1, -1, -2, 0, HomogPoly::var(2, 1).pow(2)).unwrap();
        let k = k0.tensor(&k1).unwrap();
        let txt = serde_json::to_string(&k.to_json()).unwrap();
        let back: LBComplexJson = serde_json::from_str(&txt).unwrap();
        assert_eq!(LBComplex::from_json(&back).unwrap(), k);
    }
}
