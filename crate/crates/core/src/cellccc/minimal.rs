use std::collections::BTreeMap;

use super::{CellSheafComplex, CellSheafMap};
use crate::exactalg::{ComplexMap, RatMatrix, RationalChainComplex};
use crate::rational::Q;

/// Cohomology of a complex with chosen cycle representatives, as a complex with zero differential.
#[derive(Clone, Debug)]
pub struct Minimal {
    source: RationalChainComplex,
    complex: RationalChainComplex,
    reps: BTreeMap<i64, Vec<Vec<Q>>>,
    boundaries: BTreeMap<i64, Vec<Vec<Q>>>,
}

impl Minimal {
    pub fn new(c: &RationalChainComplex) -> Self {
        let mut reps = BTreeMap::new();
        let mut boundaries = BTreeMap::new();
        for i in c.lo()..=c.hi() {
            reps.insert(i, c.cohomology(i).basis);
            let b = if c.dim(i - 1) > 0 && c.dim(i) > 0 {
                c.diff(i - 1).rank_kernel_image().image
            } else {
                vec![]
            };
            boundaries.insert(i, b);
        }
        let dims: Vec<usize> = (c.lo()..=c.hi()).map(|i| reps[&i].len()).collect();
        let diffs = (c.lo()..c.hi())
            .map(|i| RatMatrix::zeros(reps[&(i + 1)].len(), reps[&i].len()))
            .collect();
        let complex = RationalChainComplex::new(c.lo(), dims, diffs).expect("zero differential");
        Minimal { source: c.clone(), complex, reps, boundaries }
    }

    pub fn complex(&self) -> &RationalChainComplex {
        &self.complex
    }

    pub fn source(&self) -> &RationalChainComplex {
        &self.source
    }

    /// Class of the cycle `z` of degree `i` in the chosen basis.
    pub fn coordinates(&self, i: i64, z: &[Q]) -> Vec<Q> {
        let reps = self.reps.get(&i).cloned().unwrap_or_default();
        if reps.is_empty() {
            return vec![];
        }
        let b = self.boundaries.get(&i).cloned().unwrap_or_default();
        let cols: Vec<Vec<Q>> = b.iter().chain(&reps).cloned().collect();
        let m = RatMatrix::from_rows(cols).transpose();
        let y = m.solve(z).expect("argument is a cycle");
        y[b.len()..].to_vec()
    }

    /// `H(f)` between the minimal models of source and target.
    pub fn induced(f: &ComplexMap, src: &Minimal, tgt: &Minimal) -> ComplexMap {
        assert!(f.source() == &src.source && f.target() == &tgt.source, "minimal models do not match");
        let comps = (src.complex.lo()..=src.complex.hi())
            .map(|i| {
                let reps = src.reps.get(&i).cloned().unwrap_or_default();
                let n = tgt.complex.dim(i);
                let cols: Vec<Vec<Q>> = if n == 0 {
                    vec![]
                } else {
                    let fi = f.comp(i);
                    reps.iter().map(|z| tgt.coordinates(i, &fi.apply(z))).collect()
                };
                let m = if cols.is_empty() || n == 0 {
                    RatMatrix::zeros(n, reps.len())
                } else {
                    RatMatrix::from_rows(cols).transpose()
                };
                (i, m)
            })
            .collect();
        ComplexMap::new(src.complex.clone(), tgt.complex.clone(), comps).expect("zero differentials")
    }
}

pub(crate) struct MinimalData {
    pub vertices: Vec<Minimal>,
    pub edges: Vec<Minimal>,
}

pub(crate) fn minimal_sheaf(f: &CellSheafComplex) -> (CellSheafComplex, MinimalData) {
    let vertices: Vec<Minimal> = f.vertex_stalks.iter().map(Minimal::new).collect();
    let edges: Vec<Minimal> = f.edge_stalks.iter().map(Minimal::new).collect();
    let c = &f.circle;
    let starts = (0..c.k()).map(|e| Minimal::induced(&f.start_maps[e], &vertices[c.start(e)], &edges[e])).collect();
    let ends = (0..c.k()).map(|e| Minimal::induced(&f.end_maps[e], &vertices[c.end(e)], &edges[e])).collect();
    let m = CellSheafComplex::new(
        c.clone(),
        vertices.iter().map(|m| m.complex.clone()).collect(),
        edges.iter().map(|m| m.complex.clone()).collect(),
        starts,
        ends,
    )
    .expect("induced maps have matching shapes");
    (m, MinimalData { vertices, edges })
}

/// `H(φ)` as a morphism between the minimal models of source and target.
pub(crate) fn induced_sheaf_map(phi: &CellSheafMap) -> CellSheafMap {
    let (s, sd) = minimal_sheaf(&phi.source);
    let (t, td) = minimal_sheaf(&phi.target);
    let k = s.circle.k();
    let vm = (0..k).map(|v| Minimal::induced(&phi.vertex_maps[v], &sd.vertices[v], &td.vertices[v])).collect();
    let em = (0..k).map(|e| Minimal::induced(&phi.edge_maps[e], &sd.edges[e], &td.edges[e])).collect();
    CellSheafMap::new(s, t, vm, em).expect("cohomology is functorial")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn coordinates_modulo_boundaries() {
        // Q → Q² → Q with d0 = (1, 0)ᵀ, d1 = (0, 1): H = 0.
        let c = RationalChainComplex::new(
            0,
            vec![1, 2, 1],
            vec![RatMatrix::from_i64(&[&[1], &[0]]), RatMatrix::from_i64(&[&[0, 1]])],
        )
        .unwrap();
        assert_eq!(Minimal::new(&c).complex().total_dim(), 0);
        // Q → Q²: H¹ = Q; the cycle (3, 2) has coordinate 2 relative to the boundary (1, 0).
        let c = RationalChainComplex::two_term(0, RatMatrix::from_i64(&[&[1], &[0]]));
        let m = Minimal::new(&c);
        assert_eq!(m.complex().cohomology_dims(), BTreeMap::from([(1, 1)]));
        let z = m.coordinates(1, &[q(3), q(2)]);
        let scale = m.coordinates(1, &[q(0), q(1)]);
        assert_eq!(z[0], &scale[0] * q(2));
    }
}
