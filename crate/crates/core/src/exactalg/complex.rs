use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::RatMatrix;
use crate::error::{ComplexError, ParseError};
use crate::rational::Q;

/// Bounded cochain complex of finite-dimensional rational vector spaces.
///
/// `diff(i)` maps degree `i` to degree `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalChainComplex {
    lo: i64,
    dims: Vec<usize>,
    /// `diffs[k]` is `d^{lo+k}`; one fewer than `dims`.
    diffs: Vec<RatMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cohomology {
    pub dim: usize,
    /// Cycle representatives whose classes form a basis.
    pub basis: Vec<Vec<Q>>,
}

fn sign(k: i64) -> Q {
    if k.rem_euclid(2) == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

impl RationalChainComplex {
    /// `diffs[k]` is the differential out of degree `lo + k`; there must be `dims.len() - 1` of them.
    pub fn new(lo: i64, dims: Vec<usize>, diffs: Vec<RatMatrix>) -> Result<Self, ComplexError> {
        if dims.is_empty() {
            return Err(ComplexError::EmptyRange { lo, hi: lo - 1 });
        }
        if diffs.len() + 1 != dims.len() {
            return Err(ComplexError::Other(format!(
                "{} terms need {} differentials, got {}",
                dims.len(),
                dims.len() - 1,
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.rows() != dims[k + 1] || d.cols() != dims[k] {
                return Err(ComplexError::Shape {
                    degree: lo + k as i64,
                    rows: d.rows(),
                    cols: d.cols(),
                    expected_rows: dims[k + 1],
                    expected_cols: dims[k],
                });
            }
        }
        for k in 1..diffs.len() {
            if !(&diffs[k] * &diffs[k - 1]).is_zero() {
                return Err(ComplexError::NotSquareZero(lo + k as i64 - 1));
            }
        }
        Ok(RationalChainComplex { lo, dims, diffs })
    }

    pub fn zero() -> Self {
        RationalChainComplex {
            lo: 0,
            dims: vec![0],
            diffs: vec![],
        }
    }

    /// `Q^dim` placed in a single degree.
    pub fn concentrated(degree: i64, dim: usize) -> Self {
        RationalChainComplex {
            lo: degree,
            dims: vec![dim],
            diffs: vec![],
        }
    }

    /// Two-term complex `Q^cols → Q^rows` with the source in `degree`.
    pub fn two_term(degree: i64, d: RatMatrix) -> Self {
        let dims = vec![d.cols(), d.rows()];
        RationalChainComplex {
            lo: degree,
            dims,
            diffs: vec![d],
        }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn dim(&self, i: i64) -> usize {
        if i < self.lo || i > self.hi() {
            0
        } else {
            self.dims[(i - self.lo) as usize]
        }
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        (self.lo..=self.hi()).map(|i| (i, self.dim(i))).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `d^i : C^i → C^{i+1}`, a zero matrix of the right shape outside the stored range.
    pub fn diff(&self, i: i64) -> RatMatrix {
        if i >= self.lo && i < self.hi() {
            self.diffs[(i - self.lo) as usize].clone()
        } else {
            RatMatrix::zeros(self.dim(i + 1), self.dim(i))
        }
    }

    fn diff_ref(&self, i: i64) -> Option<&RatMatrix> {
        if i >= self.lo && i < self.hi() {
            Some(&self.diffs[(i - self.lo) as usize])
        } else {
            None
        }
    }

    fn rank_of(&self, i: i64) -> usize {
        self.diff_ref(i).map_or(0, RatMatrix::rank)
    }

    pub fn cohomology_dim(&self, i: i64) -> usize {
        let z = self.dim(i) - self.rank_of(i);
        z - self.rank_of(i - 1)
    }

    pub fn cohomology(&self, i: i64) -> Cohomology {
        let n = self.dim(i);
        if n == 0 {
            return Cohomology {
                dim: 0,
                basis: vec![],
            };
        }
        let cycles = match self.diff_ref(i) {
            Some(d) => d.kernel(),
            None => (0..n)
                .map(|j| {
                    let mut v = vec![Q::zero(); n];
                    v[j] = Q::one();
                    v
                })
                .collect(),
        };
        let boundaries = self
            .diff_ref(i - 1)
            .map(|d| d.rank_kernel_image().image)
            .unwrap_or_default();
        // Greedily extend a basis of boundaries by cycles.
        let mut span: Vec<Vec<Q>> = boundaries;
        let mut rank = span.len();
        let mut basis = Vec::new();
        for z in cycles {
            span.push(z.clone());
            let m = RatMatrix::from_rows(span.clone()).transpose();
            let r = m.rank();
            if r > rank {
                rank = r;
                basis.push(z);
            } else {
                span.pop();
            }
        }
        debug_assert_eq!(basis.len(), self.cohomology_dim(i));
        Cohomology {
            dim: basis.len(),
            basis,
        }
    }

    /// Nonzero cohomology dimensions.
    pub fn cohomology_dims(&self) -> BTreeMap<i64, usize> {
        (self.lo..=self.hi())
            .map(|i| (i, self.cohomology_dim(i)))
            .filter(|&(_, d)| d > 0)
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        (self.lo..=self.hi()).all(|i| self.cohomology_dim(i) == 0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        (self.lo..=self.hi())
            .map(|i| {
                let d = self.dim(i) as i64;
                if i.rem_euclid(2) == 0 {
                    d
                } else {
                    -d
                }
            })
            .sum()
    }

    /// `C[k]^i = C^{i+k}` with differential multiplied by `(−1)^k`.
    pub fn shift(&self, k: i64) -> Self {
        let s = sign(k);
        RationalChainComplex {
            lo: self.lo - k,
            dims: self.dims.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(&s)).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let dims = (lo..=hi).map(|i| self.dim(i) + other.dim(i)).collect();
        let diffs = (lo..hi)
            .map(|i| self.diff(i).direct_sum(&other.diff(i)))
            .collect();
        RationalChainComplex { lo, dims, diffs }
    }

    /// Same complex over a wider degree range, padded with zero terms.
    pub fn padded(&self, lo: i64, hi: i64) -> Self {
        let lo = lo.min(self.lo);
        let hi = hi.max(self.hi());
        RationalChainComplex {
            lo,
            dims: (lo..=hi).map(|i| self.dim(i)).collect(),
            diffs: (lo..hi).map(|i| self.diff(i)).collect(),
        }
    }

    /// Drops zero terms at both ends (keeps at least one term).
    pub fn trimmed(&self) -> Self {
        let mut lo = self.lo;
        let mut hi = self.hi();
        while lo < hi && self.dim(lo) == 0 {
            lo += 1;
        }
        while hi > lo && self.dim(hi) == 0 {
            hi -= 1;
        }
        if lo == hi && self.dim(lo) == 0 {
            return RationalChainComplex::zero();
        }
        RationalChainComplex {
            lo,
            dims: (lo..=hi).map(|i| self.dim(i)).collect(),
            diffs: (lo..hi).map(|i| self.diff(i)).collect(),
        }
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            range: [self.lo, self.hi()],
            dims: self.dims().into_iter().map(|(i, d)| (i.to_string(), d)).collect(),
            diffs: (self.lo..self.hi())
                .map(|i| (i.to_string(), self.diff(i).to_strings()))
                .collect(),
        }
    }

    pub fn from_json(j: &ComplexJson) -> Result<Self, ParseError> {
        let [lo, hi] = j.range;
        if lo > hi {
            return Err(ParseError::Schema(format!("empty range [{lo}, {hi}]")));
        }
        let mut dims = Vec::new();
        for i in lo..=hi {
            let d = j.dims.get(&i.to_string()).copied().unwrap_or(0);
            dims.push(d);
        }
        for key in j.dims.keys().chain(j.diffs.keys()) {
            let i: i64 = key.parse().map_err(|_| ParseError::DegreeKey(key.clone()))?;
            if i < lo || i > hi {
                return Err(ParseError::Schema(format!("degree {i} outside range")));
            }
        }
        let mut diffs = Vec::new();
        for i in lo..hi {
            let (r, c) = (dims[(i + 1 - lo) as usize], dims[(i - lo) as usize]);
            let m = match j.diffs.get(&i.to_string()) {
                Some(rows) if !(r == 0 && rows.is_empty()) => RatMatrix::from_strings(r, c, rows)?,
                _ => RatMatrix::zeros(r, c),
            };
            diffs.push(m);
        }
        RationalChainComplex::new(lo, dims, diffs).map_err(|e| ParseError::Schema(e.to_string()))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComplexJson {
    pub range: [i64; 2],
    pub dims: BTreeMap<String, usize>,
    pub diffs: BTreeMap<String, Vec<Vec<String>>>,
}

/// Degree-preserving chain map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexMap {
    source: RationalChainComplex,
    target: RationalChainComplex,
    /// Components indexed over the source range.
    comps: Vec<RatMatrix>,
}

impl ComplexMap {
    /// `comps` maps each degree to `f^i : S^i → T^i`; missing degrees are zero.
    pub fn new(
        source: RationalChainComplex,
        target: RationalChainComplex,
        comps: BTreeMap<i64, RatMatrix>,
    ) -> Result<Self, ComplexError> {
        let mut v = Vec::new();
        for i in source.lo()..=source.hi() {
            let m = comps
                .get(&i)
                .cloned()
                .unwrap_or_else(|| RatMatrix::zeros(target.dim(i), source.dim(i)));
            if m.rows() != target.dim(i) || m.cols() != source.dim(i) {
                return Err(ComplexError::MapShape { degree: i });
            }
            v.push(m);
        }
        for (&i, m) in &comps {
            if (i < source.lo() || i > source.hi()) && !m.is_zero() {
                return Err(ComplexError::MapShape { degree: i });
            }
        }
        let f = ComplexMap {
            source,
            target,
            comps: v,
        };
        let lo = f.source.lo().min(f.target.lo()) - 1;
        let hi = f.source.hi().max(f.target.hi());
        for i in lo..=hi {
            let lhs = &f.target.diff(i) * &f.comp(i);
            let rhs = &f.comp(i + 1) * &f.source.diff(i);
            if lhs != rhs {
                return Err(ComplexError::NotChainMap(i));
            }
        }
        Ok(f)
    }

    pub fn identity(c: &RationalChainComplex) -> Self {
        ComplexMap {
            source: c.clone(),
            target: c.clone(),
            comps: (c.lo()..=c.hi()).map(|i| RatMatrix::identity(c.dim(i))).collect(),
        }
    }

    pub fn zero(source: &RationalChainComplex, target: &RationalChainComplex) -> Self {
        ComplexMap {
            source: source.clone(),
            target: target.clone(),
            comps: (source.lo()..=source.hi())
                .map(|i| RatMatrix::zeros(target.dim(i), source.dim(i)))
                .collect(),
        }
    }

    pub fn source(&self) -> &RationalChainComplex {
        &self.source
    }

    pub fn target(&self) -> &RationalChainComplex {
        &self.target
    }

    pub fn comp(&self, i: i64) -> RatMatrix {
        if i < self.source.lo() || i > self.source.hi() {
            RatMatrix::zeros(self.target.dim(i), self.source.dim(i))
        } else {
            self.comps[(i - self.source.lo()) as usize].clone()
        }
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &ComplexMap) -> Result<ComplexMap, ComplexError> {
        if g.source != self.target {
            return Err(ComplexError::Other("composition of non-matching maps".into()));
        }
        let comps = (self.source.lo()..=self.source.hi())
            .map(|i| (i, &g.comp(i) * &self.comp(i)))
            .collect();
        ComplexMap::new(self.source.clone(), g.target.clone(), comps)
    }

    pub fn scale(&self, c: &Q) -> ComplexMap {
        ComplexMap {
            source: self.source.clone(),
            target: self.target.clone(),
            comps: self.comps.iter().map(|m| m.scale(c)).collect(),
        }
    }

    /// `Cone(f)^i = S^{i+1} ⊕ T^i`, differential `[[−d_S, 0], [f, d_T]]`.
    pub fn cone(&self) -> RationalChainComplex {
        let (s, t) = (&self.source, &self.target);
        let lo = (s.lo() - 1).min(t.lo());
        let hi = (s.hi() - 1).max(t.hi());
        let dims: Vec<usize> = (lo..=hi).map(|i| s.dim(i + 1) + t.dim(i)).collect();
        let diffs = (lo..hi)
            .map(|i| {
                let (s1, t0) = (s.dim(i + 1), t.dim(i));
                let (s2, t1) = (s.dim(i + 2), t.dim(i + 1));
                let mut m = RatMatrix::zeros(s2 + t1, s1 + t0);
                m.set_block(0, 0, &-&s.diff(i + 1));
                m.set_block(s2, 0, &self.comp(i + 1));
                m.set_block(s2, s1, &t.diff(i));
                m
            })
            .collect();
        RationalChainComplex::new(lo, dims, diffs).expect("cone of a chain map squares to zero")
    }

    pub fn is_quasi_iso(&self) -> bool {
        self.cone().is_acyclic()
    }
}

/// `Hom^k = ⊕_i Hom(C^i, D^{i+k})` with `dφ = d_D φ − (−1)^k φ d_C`.
///
/// Elements of `Hom(C^i, D^j)` are stored row-major as `dim D^j × dim C^i` matrices,
/// blocks ordered by ascending `i`.
pub fn hom_complex(c: &RationalChainComplex, d: &RationalChainComplex) -> RationalChainComplex {
    let layout = HomLayout::new(c, d);
    let lo = layout.lo;
    let hi = layout.hi;
    let dims: Vec<usize> = (lo..=hi).map(|k| layout.dim(k)).collect();
    let mut diffs = Vec::new();
    for k in lo..hi {
        let mut m = RatMatrix::zeros(layout.dim(k + 1), layout.dim(k));
        let sk = sign(k);
        for i in c.lo()..=c.hi() {
            let (ci, dj) = (c.dim(i), d.dim(i + k));
            let off = layout.offset(k, i);
            let dd = d.diff(i + k);
            let dc = c.diff(i - 1);
            for r in 0..dj {
                for col in 0..ci {
                    let src = off + r * ci + col;
                    // d_D ∘ E_{r,col}: lands in block i of degree k+1.
                    if d.dim(i + k + 1) > 0 {
                        let o = layout.offset(k + 1, i);
                        for r2 in 0..d.dim(i + k + 1) {
                            let v = dd.get(r2, r);
                            if !v.is_zero() {
                                m.add_at(o + r2 * ci + col, src, v);
                            }
                        }
                    }
                    // −(−1)^k E_{r,col} ∘ d_C^{i−1}: block i−1 of degree k+1.
                    let cprev = c.dim(i - 1);
                    if cprev > 0 {
                        let o = layout.offset(k + 1, i - 1);
                        for c2 in 0..cprev {
                            let v = dc.get(col, c2);
                            if !v.is_zero() {
                                m.add_at(o + r * cprev + c2, src, &(-(v * &sk)));
                            }
                        }
                    }
                }
            }
        }
        diffs.push(m);
    }
    RationalChainComplex::new(lo, dims, diffs).expect("hom differential squares to zero")
}

/// Index bookkeeping for [`hom_complex`].
pub struct HomLayout<'a> {
    c: &'a RationalChainComplex,
    d: &'a RationalChainComplex,
    pub lo: i64,
    pub hi: i64,
}

impl<'a> HomLayout<'a> {
    pub fn new(c: &'a RationalChainComplex, d: &'a RationalChainComplex) -> Self {
        HomLayout {
            c,
            d,
            lo: d.lo() - c.hi() - 1,
            hi: d.hi() - c.lo() + 1,
        }
    }

    pub fn dim(&self, k: i64) -> usize {
        (self.c.lo()..=self.c.hi())
            .map(|i| self.c.dim(i) * self.d.dim(i + k))
            .sum()
    }

    /// Start of block `Hom(C^i, D^{i+k})` inside `Hom^k`.
    pub fn offset(&self, k: i64, i: i64) -> usize {
        (self.c.lo()..i)
            .map(|j| self.c.dim(j) * self.d.dim(j + k))
            .sum()
    }

    /// Reads a degree-0 vector as the family of matrices `C^i → D^i`.
    pub fn degree_zero_components(&self, v: &[Q]) -> BTreeMap<i64, RatMatrix> {
        (self.c.lo()..=self.c.hi())
            .map(|i| {
                let (r, cc) = (self.d.dim(i), self.c.dim(i));
                let o = self.offset(0, i);
                (i, RatMatrix::from_vec(r, cc, v[o..o + r * cc].to_vec()))
            })
            .collect()
    }
}
