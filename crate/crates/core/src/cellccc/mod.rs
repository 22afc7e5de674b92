//! Cellular sheaves on the circle `T° = R/Z` with marked point `e = 0`.
//!
//! A sheaf constructible for a cell structure is a representation of the incidence quiver:
//! one stalk complex per cell, one generization map per incidence vertex → adjacent edge.
//! Edge `i` runs from vertex `i` to vertex `i + 1` (cyclically); its *start* map comes from
//! vertex `i` and its *end* map from vertex `i + 1`.

mod compare;
mod convolve;
mod minimal;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use compare::{ccc_compare, local_system_check, CccReport, GridEntry, LocalSystemComparison, LocalSystemReport};
pub use convolve::{convolve, unit_law_map};
pub use minimal::Minimal;

use crate::error::{CellError, ParseError};
use crate::exactalg::{hom_complex, ComplexJson, ComplexMap, HomLayout, MatrixJson, RatMatrix, RationalChainComplex};
use crate::lbcx::ExtTable;
use crate::rational::{format_q, frac, parse_q, qf, Q};

/// Vertex positions in turns, strictly increasing in `[0, 1)`, starting at the marked point `0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CellCircle {
    positions: Vec<Q>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Vertex(usize),
    Edge(usize),
}

impl CellCircle {
    pub fn new(positions: Vec<Q>) -> Result<Self, CellError> {
        match positions.first() {
            Some(p) if p.is_zero() => {}
            _ => return Err(CellError::MissingMarkedPoint),
        }
        let in_range = positions.iter().all(|p| *p >= Q::zero() && *p < Q::one());
        if !in_range || positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CellError::BadPositions);
        }
        Ok(CellCircle { positions })
    }

    /// One vertex at `e` and one edge.
    pub fn minimal() -> Self {
        CellCircle { positions: vec![Q::zero()] }
    }

    /// `k` equally spaced vertices.
    pub fn standard(k: usize) -> Self {
        assert!(k >= 1);
        CellCircle { positions: (0..k).map(|i| qf(i as i64, k as i64)).collect() }
    }

    pub fn k(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[Q] {
        &self.positions
    }

    pub fn position(&self, v: usize) -> &Q {
        &self.positions[v]
    }

    pub fn start(&self, e: usize) -> usize {
        e
    }

    pub fn end(&self, e: usize) -> usize {
        (e + 1) % self.k()
    }

    /// Right end of edge `e`, as a number in `(0, 1]`.
    fn edge_end_position(&self, e: usize) -> Q {
        if e + 1 == self.k() {
            Q::one()
        } else {
            self.positions[e + 1].clone()
        }
    }

    pub fn edge_midpoint(&self, e: usize) -> Q {
        (&self.positions[e] + self.edge_end_position(e)) / Q::from_integer(2.into())
    }

    /// Cell containing `x` (taken mod 1).
    pub fn locate(&self, x: &Q) -> Cell {
        let x = frac(x);
        match self.positions.binary_search(&x) {
            Ok(v) => Cell::Vertex(v),
            Err(i) => Cell::Edge(i - 1),
        }
    }

    pub fn refines(&self, coarse: &CellCircle) -> bool {
        coarse.positions.iter().all(|p| self.positions.binary_search(p).is_ok())
    }

    pub fn union(&self, other: &CellCircle) -> CellCircle {
        let mut p: Vec<Q> = self.positions.iter().chain(&other.positions).cloned().collect();
        p.sort();
        p.dedup();
        CellCircle { positions: p }
    }

    /// Inserts every edge midpoint.
    pub fn barycentric(&self) -> CellCircle {
        let mids = (0..self.k()).map(|e| self.edge_midpoint(e)).collect();
        self.union(&CellCircle { positions: mids })
    }
}

/// Complex of cellular sheaves: stalks per cell and generization maps per incidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellSheafComplex {
    circle: CellCircle,
    vertex_stalks: Vec<RationalChainComplex>,
    edge_stalks: Vec<RationalChainComplex>,
    start_maps: Vec<ComplexMap>,
    end_maps: Vec<ComplexMap>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    Unit,
    Twist,
}

impl std::str::FromStr for Generator {
    type Err = CellError;
    fn from_str(s: &str) -> Result<Self, CellError> {
        match s {
            "unit" => Ok(Generator::Unit),
            "twist" => Ok(Generator::Twist),
            _ => Err(CellError::Other(format!("unknown generator '{s}' (expected unit or twist)"))),
        }
    }
}

fn vector_space(d: usize) -> RationalChainComplex {
    RationalChainComplex::concentrated(0, d)
}

fn linear(src: usize, tgt: usize, m: RatMatrix) -> ComplexMap {
    ComplexMap::new(vector_space(src), vector_space(tgt), BTreeMap::from([(0, m)])).expect("degree-0 map")
}

impl CellSheafComplex {
    pub fn new(
        circle: CellCircle,
        vertex_stalks: Vec<RationalChainComplex>,
        edge_stalks: Vec<RationalChainComplex>,
        start_maps: Vec<ComplexMap>,
        end_maps: Vec<ComplexMap>,
    ) -> Result<Self, CellError> {
        let k = circle.k();
        if [vertex_stalks.len(), edge_stalks.len(), start_maps.len(), end_maps.len()] != [k; 4] {
            return Err(CellError::Other(format!("expected {k} stalks and maps of each kind")));
        }
        for e in 0..k {
            let s = &start_maps[e];
            if s.source() != &vertex_stalks[circle.start(e)] || s.target() != &edge_stalks[e] {
                return Err(CellError::BadGeneralization(2 * e));
            }
            let t = &end_maps[e];
            if t.source() != &vertex_stalks[circle.end(e)] || t.target() != &edge_stalks[e] {
                return Err(CellError::BadGeneralization(2 * e + 1));
            }
        }
        Ok(CellSheafComplex { circle, vertex_stalks, edge_stalks, start_maps, end_maps })
    }

    /// `unit = k_e`; `twist = j_*k_U`, whose stalk at `e` is `Q²` (one branch per side).
    pub fn generator(which: Generator) -> Self {
        let c = CellCircle::minimal();
        match which {
            Generator::Unit => Self::new(
                c,
                vec![vector_space(1)],
                vec![vector_space(0)],
                vec![linear(1, 0, RatMatrix::zeros(0, 1))],
                vec![linear(1, 0, RatMatrix::zeros(0, 1))],
            ),
            Generator::Twist => Self::new(
                c,
                vec![vector_space(2)],
                vec![vector_space(1)],
                vec![linear(2, 1, RatMatrix::from_i64(&[&[1, 0]]))],
                vec![linear(2, 1, RatMatrix::from_i64(&[&[0, 1]]))],
            ),
        }
        .expect("generators are well formed")
    }

    pub fn unit() -> Self {
        Self::generator(Generator::Unit)
    }

    pub fn twist() -> Self {
        Self::generator(Generator::Twist)
    }

    /// Rank-one local system: identity across `e` from the start side, `λ` from the end side.
    pub fn local_system(lambda: &Q) -> Result<Self, CellError> {
        if lambda.is_zero() {
            return Err(CellError::ZeroMonodromy);
        }
        Self::new(
            CellCircle::minimal(),
            vec![vector_space(1)],
            vec![vector_space(1)],
            vec![linear(1, 1, RatMatrix::identity(1))],
            vec![linear(1, 1, RatMatrix::scalar(1, lambda.clone()))],
        )
    }

    pub fn constant() -> Self {
        Self::local_system(&Q::one()).expect("λ = 1")
    }

    pub fn circle(&self) -> &CellCircle {
        &self.circle
    }

    pub fn stalk(&self, c: Cell) -> &RationalChainComplex {
        match c {
            Cell::Vertex(v) => &self.vertex_stalks[v],
            Cell::Edge(e) => &self.edge_stalks[e],
        }
    }

    pub fn start_map(&self, e: usize) -> &ComplexMap {
        &self.start_maps[e]
    }

    pub fn end_map(&self, e: usize) -> &ComplexMap {
        &self.end_maps[e]
    }

    /// Generization from vertex `v` into the adjacent edge `e` on the side given by `to_the_right`.
    pub(crate) fn generization(&self, v: usize, e: usize, to_the_right: bool) -> Result<&ComplexMap, CellError> {
        let c = &self.circle;
        if to_the_right && c.start(e) == v {
            Ok(&self.start_maps[e])
        } else if !to_the_right && c.end(e) == v {
            Ok(&self.end_maps[e])
        } else {
            Err(CellError::Other(format!("vertex {v} is not on the expected side of edge {e}")))
        }
    }

    /// Singular-support window: both generization maps are quasi-isomorphisms at every vertex except `e`.
    pub fn in_window(&self) -> bool {
        let k = self.circle.k();
        (1..k).all(|v| self.start_maps[v].is_quasi_iso() && self.end_maps[v - 1].is_quasi_iso())
    }

    /// Copies stalks along cells of a finer structure.
    pub fn refine(&self, fine: &CellCircle) -> Result<Self, CellError> {
        if !fine.refines(&self.circle) {
            return Err(CellError::NotRefinement);
        }
        let k = fine.k();
        let old = |x: &Q| self.circle.locate(x);
        let vertex_stalks: Vec<_> = (0..k).map(|v| self.stalk(old(fine.position(v))).clone()).collect();
        let mut edge_stalks = Vec::new();
        let mut start_maps = Vec::new();
        let mut end_maps = Vec::new();
        for e in 0..k {
            let oe = match old(&fine.edge_midpoint(e)) {
                Cell::Edge(oe) => oe,
                Cell::Vertex(_) => unreachable!("edge midpoints avoid old vertices"),
            };
            edge_stalks.push(self.edge_stalks[oe].clone());
            let side = |v: usize, right: bool| -> Result<ComplexMap, CellError> {
                Ok(match old(fine.position(v)) {
                    Cell::Vertex(ov) => self.generization(ov, oe, right)?.clone(),
                    Cell::Edge(_) => ComplexMap::identity(&self.edge_stalks[oe]),
                })
            };
            start_maps.push(side(fine.start(e), true)?);
            end_maps.push(side(fine.end(e), false)?);
        }
        Self::new(fine.clone(), vertex_stalks, edge_stalks, start_maps, end_maps)
    }

    /// Stalkwise cohomology with the induced generization maps.
    ///
    /// Representations of the incidence quiver form a hereditary category, so every complex is
    /// quasi-isomorphic to the sum of its shifted cohomology representations.
    pub fn minimal(&self) -> Self {
        minimal::minimal_sheaf(self).0
    }

    pub fn to_json(&self) -> CellSheafJson {
        let maps = |v: &[ComplexMap]| v.iter().map(map_json).collect();
        CellSheafJson {
            positions: self.circle.positions.iter().map(format_q).collect(),
            vertex_stalks: self.vertex_stalks.iter().map(RationalChainComplex::to_json).collect(),
            edge_stalks: self.edge_stalks.iter().map(RationalChainComplex::to_json).collect(),
            start_maps: maps(&self.start_maps),
            end_maps: maps(&self.end_maps),
        }
    }

    pub fn from_json(j: &CellSheafJson) -> Result<Self, CellError> {
        let perr = |e: ParseError| CellError::Other(e.to_string());
        let positions = j.positions.iter().map(|s| parse_q(s).map_err(perr)).collect::<Result<Vec<_>, _>>()?;
        let circle = CellCircle::new(positions)?;
        let cx = |v: &[ComplexJson]| {
            v.iter().map(|c| RationalChainComplex::from_json(c).map_err(perr)).collect::<Result<Vec<_>, _>>()
        };
        let vertex_stalks = cx(&j.vertex_stalks)?;
        let edge_stalks = cx(&j.edge_stalks)?;
        let k = circle.k();
        if vertex_stalks.len() != k || edge_stalks.len() != k || j.start_maps.len() != k || j.end_maps.len() != k {
            return Err(CellError::Other(format!("expected {k} stalks and maps of each kind")));
        }
        let mut start_maps = Vec::new();
        let mut end_maps = Vec::new();
        for e in 0..k {
            start_maps.push(
                map_from_json(&j.start_maps[e], &vertex_stalks[circle.start(e)], &edge_stalks[e])
                    .map_err(|_| CellError::BadGeneralization(2 * e))?,
            );
            end_maps.push(
                map_from_json(&j.end_maps[e], &vertex_stalks[circle.end(e)], &edge_stalks[e])
                    .map_err(|_| CellError::BadGeneralization(2 * e + 1))?,
            );
        }
        Self::new(circle, vertex_stalks, edge_stalks, start_maps, end_maps)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CellSheafJson {
    pub positions: Vec<String>,
    pub vertex_stalks: Vec<ComplexJson>,
    pub edge_stalks: Vec<ComplexJson>,
    /// Degree → matrix, one map per edge.
    pub start_maps: Vec<BTreeMap<String, MatrixJson>>,
    pub end_maps: Vec<BTreeMap<String, MatrixJson>>,
}

fn map_json(f: &ComplexMap) -> BTreeMap<String, MatrixJson> {
    let s = f.source();
    (s.lo()..=s.hi())
        .filter(|&i| s.dim(i) > 0 && f.target().dim(i) > 0)
        .map(|i| (i.to_string(), MatrixJson::from(&f.comp(i))))
        .collect()
}

fn map_from_json(
    j: &BTreeMap<String, MatrixJson>,
    s: &RationalChainComplex,
    t: &RationalChainComplex,
) -> Result<ComplexMap, CellError> {
    let mut comps = BTreeMap::new();
    for (key, m) in j {
        let i: i64 = key.parse().map_err(|_| CellError::Other(format!("bad degree key '{key}'")))?;
        let m = RatMatrix::try_from(m.clone()).map_err(|e| CellError::Other(e.to_string()))?;
        comps.insert(i, m);
    }
    Ok(ComplexMap::new(s.clone(), t.clone(), comps)?)
}

/// Morphism of cellular sheaf complexes on a common cell structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellSheafMap {
    source: CellSheafComplex,
    target: CellSheafComplex,
    vertex_maps: Vec<ComplexMap>,
    edge_maps: Vec<ComplexMap>,
}

impl CellSheafMap {
    /// Checks shapes and commutation with every generization map.
    pub fn new(
        source: CellSheafComplex,
        target: CellSheafComplex,
        vertex_maps: Vec<ComplexMap>,
        edge_maps: Vec<ComplexMap>,
    ) -> Result<Self, CellError> {
        let c = source.circle.clone();
        if target.circle != c || vertex_maps.len() != c.k() || edge_maps.len() != c.k() {
            return Err(CellError::Other("morphism between different cell structures".into()));
        }
        for v in 0..c.k() {
            let f = &vertex_maps[v];
            if f.source() != &source.vertex_stalks[v] || f.target() != &target.vertex_stalks[v] {
                return Err(CellError::Other(format!("vertex map {v} has the wrong shape")));
            }
        }
        for e in 0..c.k() {
            let f = &edge_maps[e];
            if f.source() != &source.edge_stalks[e] || f.target() != &target.edge_stalks[e] {
                return Err(CellError::Other(format!("edge map {e} has the wrong shape")));
            }
            for (v, right) in [(c.start(e), true), (c.end(e), false)] {
                let lhs = vertex_maps[v].then(target.generization(v, e, right)?)?;
                let rhs = source.generization(v, e, right)?.then(f)?;
                if lhs != rhs {
                    return Err(CellError::Other(format!("morphism does not commute at edge {e}")));
                }
            }
        }
        Ok(CellSheafMap { source, target, vertex_maps, edge_maps })
    }

    pub fn source(&self) -> &CellSheafComplex {
        &self.source
    }

    pub fn target(&self) -> &CellSheafComplex {
        &self.target
    }

    pub fn vertex_map(&self, v: usize) -> &ComplexMap {
        &self.vertex_maps[v]
    }

    pub fn edge_map(&self, e: usize) -> &ComplexMap {
        &self.edge_maps[e]
    }

    pub fn is_quasi_iso(&self) -> bool {
        self.vertex_maps.iter().chain(&self.edge_maps).all(ComplexMap::is_quasi_iso)
    }
}

/// `φ ↦ g ∘ φ` on `Hom(C, D) → Hom(C, D')`.
fn post_compose(c: &RationalChainComplex, g: &ComplexMap) -> ComplexMap {
    let (d, d2) = (g.source(), g.target());
    let (src, tgt) = (hom_complex(c, d), hom_complex(c, d2));
    let (ls, lt) = (HomLayout::new(c, d), HomLayout::new(c, d2));
    let comps = (src.lo()..=src.hi())
        .map(|k| {
            let mut m = RatMatrix::zeros(tgt.dim(k), src.dim(k));
            if tgt.dim(k) > 0 {
                for i in c.lo()..=c.hi() {
                    let block = g.comp(i + k).kron(&RatMatrix::identity(c.dim(i)));
                    m.set_block(lt.offset(k, i), ls.offset(k, i), &block);
                }
            }
            (k, m)
        })
        .collect();
    ComplexMap::new(src, tgt, comps).expect("post-composition is a chain map")
}

/// `φ ↦ φ ∘ f` on `Hom(C, D) → Hom(C', D)` for `f: C' → C`.
fn pre_compose(f: &ComplexMap, d: &RationalChainComplex) -> ComplexMap {
    let (c2, c) = (f.source(), f.target());
    let (src, tgt) = (hom_complex(c, d), hom_complex(c2, d));
    let (ls, lt) = (HomLayout::new(c, d), HomLayout::new(c2, d));
    let comps = (src.lo()..=src.hi())
        .map(|k| {
            let mut m = RatMatrix::zeros(tgt.dim(k), src.dim(k));
            if tgt.dim(k) > 0 {
                for i in c2.lo().min(c.lo())..=c2.hi().max(c.hi()) {
                    if c2.dim(i) == 0 || c.dim(i) == 0 {
                        continue;
                    }
                    let block = RatMatrix::identity(d.dim(i + k)).kron(&f.comp(i).transpose());
                    m.set_block(lt.offset(k, i), ls.offset(k, i), &block);
                }
            }
            (k, m)
        })
        .collect();
    ComplexMap::new(src, tgt, comps).expect("pre-composition is a chain map")
}

/// Assembles `⊕_s S_s → ⊕_t T_t` from component maps `(t, s, f)`; repeated pairs add up.
pub(crate) fn block_map(
    sources: &[RationalChainComplex],
    targets: &[RationalChainComplex],
    entries: &[(usize, usize, ComplexMap)],
) -> Result<ComplexMap, CellError> {
    let sum = |v: &[RationalChainComplex]| v.iter().fold(RationalChainComplex::zero(), |a, b| a.direct_sum(b));
    let (s, t) = (sum(sources), sum(targets));
    let offsets = |v: &[RationalChainComplex], i: i64| -> Vec<usize> {
        v.iter()
            .scan(0, |acc, c| {
                let o = *acc;
                *acc += c.dim(i);
                Some(o)
            })
            .collect()
    };
    let mut comps = BTreeMap::new();
    for i in s.lo()..=s.hi() {
        let (so, to) = (offsets(sources, i), offsets(targets, i));
        let mut m = RatMatrix::zeros(t.dim(i), s.dim(i));
        for (ti, si, f) in entries {
            if sources[*si].dim(i) == 0 || targets[*ti].dim(i) == 0 {
                continue;
            }
            let c = f.comp(i);
            for r in 0..c.rows() {
                for col in 0..c.cols() {
                    let v = c.get(r, col);
                    if !v.is_zero() {
                        m.add_at(to[*ti] + r, so[*si] + col, v);
                    }
                }
            }
        }
        comps.insert(i, m);
    }
    Ok(ComplexMap::new(s, t, comps)?)
}

/// `Ext^i(F, G)` as the cohomology of `Cone(δ)[−1]` for
/// `δ: ⊕_cells Hom(F_c, G_c) → ⊕_{v→E} Hom(F_v, G_E)`, `δ(φ) = ρ^G φ_v − φ_E ρ^F`.
///
/// Different cell structures are first refined to their union.
pub fn cell_hom_dims(f: &CellSheafComplex, g: &CellSheafComplex) -> Result<ExtTable, CellError> {
    if f.circle != g.circle {
        let c = f.circle.union(&g.circle);
        return cell_hom_dims(&f.refine(&c)?, &g.refine(&c)?);
    }
    Ok(hom_total(f, g)?.shift(-1).cohomology_dims())
}

/// `Cone(δ)`; its cohomology shifted by one is the Ext table.
fn hom_total(f: &CellSheafComplex, g: &CellSheafComplex) -> Result<RationalChainComplex, CellError> {
    let c = &f.circle;
    let k = c.k();
    let mut sources = Vec::new();
    for v in 0..k {
        sources.push(hom_complex(&f.vertex_stalks[v], &g.vertex_stalks[v]));
    }
    for e in 0..k {
        sources.push(hom_complex(&f.edge_stalks[e], &g.edge_stalks[e]));
    }
    let mut targets = Vec::new();
    let mut entries = Vec::new();
    for e in 0..k {
        for (v, right) in [(c.start(e), true), (c.end(e), false)] {
            let t = targets.len();
            targets.push(hom_complex(&f.vertex_stalks[v], &g.edge_stalks[e]));
            entries.push((t, v, post_compose(&f.vertex_stalks[v], g.generization(v, e, right)?)));
            let pre = pre_compose(f.generization(v, e, right)?, &g.edge_stalks[e]);
            entries.push((t, k + e, pre.scale(&-Q::one())));
        }
    }
    Ok(block_map(&sources, &targets, &entries)?.cone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn table(v: &[(i64, usize)]) -> ExtTable {
        v.iter().copied().collect()
    }

    #[test]
    fn circle_validation_and_location() {
        assert!(matches!(CellCircle::new(vec![qf(1, 2)]), Err(CellError::MissingMarkedPoint)));
        assert!(matches!(CellCircle::new(vec![q(0), q(1)]), Err(CellError::BadPositions)));
        assert!(matches!(CellCircle::new(vec![q(0), qf(1, 2), qf(1, 3)]), Err(CellError::BadPositions)));
        let c = CellCircle::standard(4);
        assert_eq!(c.locate(&qf(1, 4)), Cell::Vertex(1));
        assert_eq!(c.locate(&qf(7, 8)), Cell::Edge(3));
        assert_eq!(c.locate(&qf(-1, 8)), Cell::Edge(3));
        assert_eq!(c.locate(&q(1)), Cell::Vertex(0));
        assert_eq!(c.barycentric(), CellCircle::standard(8));
        assert_eq!(c.end(3), 0);
    }

    #[test]
    fn generator_tables() {
        let (u, t) = (CellSheafComplex::unit(), CellSheafComplex::twist());
        assert_eq!(cell_hom_dims(&u, &u).unwrap(), table(&[(0, 1)]));
        assert_eq!(cell_hom_dims(&u, &t).unwrap(), table(&[]));
        assert_eq!(cell_hom_dims(&t, &u).unwrap(), table(&[(0, 2)]));
        assert_eq!(cell_hom_dims(&t, &t).unwrap(), table(&[(0, 1)]));
    }

    #[test]
    fn constant_sheaf_is_circle_cohomology() {
        let k = CellSheafComplex::constant();
        assert_eq!(cell_hom_dims(&k, &k).unwrap(), table(&[(0, 1), (1, 1)]));
        assert_eq!(cell_hom_dims(&k, &CellSheafComplex::unit()).unwrap(), table(&[(0, 1)]));
    }

    #[test]
    fn refinement_invariance() {
        let sheaves = [
            CellSheafComplex::unit(),
            CellSheafComplex::twist(),
            CellSheafComplex::constant(),
            CellSheafComplex::local_system(&q(3)).unwrap(),
        ];
        let fine = CellCircle::new(vec![q(0), qf(1, 5), qf(2, 3)]).unwrap();
        for a in &sheaves {
            assert_eq!(a.refine(a.circle()).unwrap(), *a);
            let ra = a.refine(&fine).unwrap();
            assert!(ra.in_window());
            let rb = ra.refine(&fine.barycentric()).unwrap();
            for b in &sheaves {
                let base = cell_hom_dims(a, b).unwrap();
                assert_eq!(cell_hom_dims(&ra, b).unwrap(), base);
                assert_eq!(cell_hom_dims(&rb, &b.refine(&fine).unwrap()).unwrap(), base);
            }
        }
        let coarse = CellCircle::standard(2);
        let f = CellSheafComplex::unit().refine(&CellCircle::standard(3)).unwrap();
        assert!(matches!(f.refine(&coarse), Err(CellError::NotRefinement)));
    }

    #[test]
    fn window_detects_singular_support() {
        // A skyscraper away from e has singular support off the fiber over e.
        let c = CellCircle::standard(2);
        let z = vector_space(0);
        let sky = CellSheafComplex::new(
            c,
            vec![z.clone(), vector_space(1)],
            vec![z.clone(), z.clone()],
            vec![ComplexMap::zero(&z, &z), linear(1, 0, RatMatrix::zeros(0, 1))],
            vec![linear(1, 0, RatMatrix::zeros(0, 1)), ComplexMap::zero(&z, &z)],
        )
        .unwrap();
        assert!(!sky.in_window());
        assert!(CellSheafComplex::twist().refine(&CellCircle::standard(5)).unwrap().in_window());
    }

    #[test]
    fn complexes_as_stalks() {
        // Two-term stalks quasi-isomorphic to the unit: same tables.
        let d = RatMatrix::from_i64(&[&[1], &[0]]);
        let v = RationalChainComplex::two_term(-1, d.clone());
        let e = RationalChainComplex::zero();
        let f = CellSheafComplex::new(
            CellCircle::minimal(),
            vec![v.clone()],
            vec![e.clone()],
            vec![ComplexMap::zero(&v, &e)],
            vec![ComplexMap::zero(&v, &e)],
        )
        .unwrap();
        let t = CellSheafComplex::twist();
        assert_eq!(cell_hom_dims(&f, &t).unwrap(), cell_hom_dims(&CellSheafComplex::unit(), &t).unwrap());
        assert_eq!(cell_hom_dims(&t, &f).unwrap(), table(&[(0, 2)]));
        assert_eq!(f.minimal().stalk(Cell::Vertex(0)).total_dim(), 1);
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let f = CellSheafComplex::twist().refine(&CellCircle::standard(3)).unwrap();
        let s = serde_json::to_string(&f.to_json()).unwrap();
        let back = CellSheafComplex::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, f);
        let mut j = f.to_json();
        j.start_maps[0].insert("0".into(), MatrixJson::from(&RatMatrix::zeros(2, 2)));
        assert!(CellSheafComplex::from_json(&j).is_err());
        assert!(matches!(CellSheafComplex::local_system(&q(0)), Err(CellError::ZeroMonodromy)));
    }
}
