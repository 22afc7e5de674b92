//! `F ⋆ G = m_!(F ⊠ G)` for `m(s, t) = s + t`.
//!
//! In the coordinates `(s, x) = (s, s + t)` the map `m` is the projection to `x`, which is
//! proper, so `m_! = m_*` and proper base change gives the stalk at `x` as the cellular
//! cochain complex of `s ↦ F(s) ⊗ G(x − s)` on the fiber circle. Fibers over the open cells
//! of the output structure `{p_i + q_j}` are combinatorially constant. The generization
//! map from an output vertex into an adjacent edge is the specialization from the special
//! fiber to a nearby generic fiber.

use std::collections::BTreeMap;

use num_traits::One;

use super::minimal::{induced_sheaf_map, minimal_sheaf};
use super::{block_map, Cell, CellCircle, CellSheafComplex, CellSheafMap};
use crate::error::CellError;
use crate::exactalg::{ComplexMap, RatMatrix, RationalChainComplex};
use crate::rational::{frac, qf, Q};

fn sign(i: i64) -> Q {
    if i.rem_euclid(2) == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

/// Block `A^i ⊗ B^{n−i}` of `(A ⊗ B)^n`, ordered by ascending `i`.
fn tensor_offset(a: &RationalChainComplex, b: &RationalChainComplex, n: i64, i: i64) -> usize {
    (a.lo()..i).map(|j| a.dim(j) * b.dim(n - j)).sum()
}

/// Tensor product with `d(x ⊗ y) = dx ⊗ y + (−1)^{|x|} x ⊗ dy`.
pub(crate) fn tensor(a: &RationalChainComplex, b: &RationalChainComplex) -> RationalChainComplex {
    let (lo, hi) = (a.lo() + b.lo(), a.hi() + b.hi());
    let dim = |n: i64| (a.lo()..=a.hi()).map(|i| a.dim(i) * b.dim(n - i)).sum::<usize>();
    let dims: Vec<usize> = (lo..=hi).map(dim).collect();
    let diffs = (lo..hi)
        .map(|n| {
            let mut m = RatMatrix::zeros(dim(n + 1), dim(n));
            for i in a.lo()..=a.hi() {
                let j = n - i;
                let (ai, bj) = (a.dim(i), b.dim(j));
                if ai * bj == 0 {
                    continue;
                }
                let col = tensor_offset(a, b, n, i);
                if a.dim(i + 1) > 0 {
                    let blk = a.diff(i).kron(&RatMatrix::identity(bj));
                    m.set_block(tensor_offset(a, b, n + 1, i + 1), col, &blk);
                }
                if b.dim(j + 1) > 0 {
                    let blk = RatMatrix::identity(ai).kron(&b.diff(j)).scale(&sign(i));
                    m.set_block(tensor_offset(a, b, n + 1, i), col, &blk);
                }
            }
            m
        })
        .collect();
    RationalChainComplex::new(lo, dims, diffs).expect("Koszul signs square to zero")
}

pub(crate) fn tensor_map(f: &ComplexMap, g: &ComplexMap) -> ComplexMap {
    let (s, t) = (tensor(f.source(), g.source()), tensor(f.target(), g.target()));
    let (fa, ga) = (f.source(), g.source());
    let (fb, gb) = (f.target(), g.target());
    let comps = (s.lo()..=s.hi())
        .map(|n| {
            let mut m = RatMatrix::zeros(t.dim(n), s.dim(n));
            for i in fa.lo().min(fb.lo())..=fa.hi().max(fb.hi()) {
                let j = n - i;
                if fa.dim(i) * ga.dim(j) == 0 || fb.dim(i) * gb.dim(j) == 0 {
                    continue;
                }
                let blk = f.comp(i).kron(&g.comp(j));
                m.set_block(tensor_offset(fb, gb, n, i), tensor_offset(fa, ga, n, i), &blk);
            }
            (n, m)
        })
        .collect();
    ComplexMap::new(s, t, comps).expect("tensor of chain maps")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Label {
    F(usize),
    G(usize),
}

/// Fiber circle over `x`: distinct sorted positions, starting at `0`.
struct Fiber {
    x: Q,
    vertices: Vec<Q>,
}

impl Fiber {
    fn m(&self) -> usize {
        self.vertices.len()
    }

    fn arc_midpoint(&self, a: usize) -> Q {
        let end = if a + 1 == self.m() { Q::one() } else { self.vertices[a + 1].clone() };
        (&self.vertices[a] + end) / Q::from_integer(2.into())
    }

    fn vertex_index(&self, s: &Q) -> usize {
        self.vertices.binary_search(s).expect("limit of a fiber point is a fiber vertex")
    }
}

struct Pair<'a> {
    f: &'a CellSheafComplex,
    g: &'a CellSheafComplex,
}

impl Pair<'_> {
    fn cells(&self, x: &Q, s: &Q) -> (Cell, Cell) {
        (self.f.circle.locate(s), self.g.circle.locate(&(x - s)))
    }

    fn stalk(&self, x: &Q, s: &Q) -> RationalChainComplex {
        let (a, b) = self.cells(x, s);
        tensor(self.f.stalk(a), self.g.stalk(b))
    }

    /// Restriction from the product cell at `(x0, s0)` to the one at `(x1, s1)`; the second
    /// must contain the first in its closure, at distance less than half a turn.
    fn restriction(&self, x0: &Q, s0: &Q, x1: &Q, s1: &Q) -> Result<ComplexMap, CellError> {
        let (fa, ga) = self.cells(x0, s0);
        let (fb, gb) = self.cells(x1, s1);
        let one = |sh: &CellSheafComplex, from: Cell, to: Cell, p0: Q, p1: Q| -> Result<ComplexMap, CellError> {
            match (from, to) {
                _ if from == to => Ok(ComplexMap::identity(sh.stalk(from))),
                (Cell::Vertex(v), Cell::Edge(e)) => {
                    let right = frac(&(p1 - p0)) < qf(1, 2);
                    Ok(sh.generization(v, e, right)?.clone())
                }
                _ => Err(CellError::Other(format!("{to:?} is not a generization of {from:?}"))),
            }
        };
        let fr = one(self.f, fa, fb, s0.clone(), s1.clone())?;
        let gr = one(self.g, ga, gb, x0 - s0, x1 - s1)?;
        Ok(tensor_map(&fr, &gr))
    }

    fn generic_points(&self, x: &Q) -> Vec<(Q, Label)> {
        let mut pts: Vec<(Q, Label)> = self.f.circle.positions().iter().enumerate().map(|(i, p)| (p.clone(), Label::F(i))).collect();
        pts.extend(self.g.circle.positions().iter().enumerate().map(|(j, q)| (frac(&(x - q)), Label::G(j))));
        pts.sort_by(|a, b| a.0.cmp(&b.0));
        pts
    }

    fn fiber(&self, x: &Q) -> Fiber {
        let mut vertices: Vec<Q> = self.generic_points(x).into_iter().map(|p| p.0).collect();
        vertices.dedup();
        Fiber { x: x.clone(), vertices }
    }

    /// Cellular cochains `Cone(δ)[−1]` for `δ: ⊕ vertices → ⊕ arcs`, `δ(s)_a = ρ s_{a+1} − ρ s_a`.
    fn cochains(&self, fib: &Fiber) -> Result<(ComplexMap, Vec<RationalChainComplex>, Vec<RationalChainComplex>), CellError> {
        let m = fib.m();
        let x = &fib.x;
        let vs: Vec<_> = fib.vertices.iter().map(|s| self.stalk(x, s)).collect();
        let arcs: Vec<_> = (0..m).map(|a| self.stalk(x, &fib.arc_midpoint(a))).collect();
        let mut entries = Vec::new();
        for a in 0..m {
            let mid = fib.arc_midpoint(a);
            let (v0, v1) = (a, (a + 1) % m);
            entries.push((a, v1, self.restriction(x, &fib.vertices[v1], x, &mid)?));
            entries.push((a, v0, self.restriction(x, &fib.vertices[v0], x, &mid)?.scale(&-Q::one())));
        }
        Ok((block_map(&vs, &arcs, &entries)?, vs, arcs))
    }

    /// Specialization from the fiber over the output vertex `x0` to the generic fiber over `x1`.
    fn specialization(&self, x0: &Q, x1: &Q) -> Result<ComplexMap, CellError> {
        let (f0, f1) = (self.fiber(x0), self.fiber(x1));
        let (d0, v0, a0) = self.cochains(&f0)?;
        let (d1, v1, a1) = self.cochains(&f1)?;
        let pts = self.generic_points(x1);
        let limit = |l: Label| -> Q {
            match l {
                Label::F(i) => self.f.circle.position(i).clone(),
                Label::G(j) => frac(&(x0 - self.g.circle.position(j))),
            }
        };
        let m1 = f1.m();
        assert_eq!(m1, pts.len(), "generic fiber has no collisions");
        let mut pv = Vec::new();
        let mut pa = Vec::new();
        for (g, (s, l)) in pts.iter().enumerate() {
            let lv = f0.vertex_index(&limit(*l));
            pv.push((g, lv, self.restriction(x0, &f0.vertices[lv], x1, s)?));
            let next = limit(pts[(g + 1) % m1].1);
            let lw = f0.vertex_index(&next);
            if lw != lv {
                if lw != (lv + 1) % f0.m() {
                    return Err(CellError::Other("degenerating arc skips a vertex".into()));
                }
                pa.push((g, lv, self.restriction(x0, &f0.arc_midpoint(lv), x1, &f1.arc_midpoint(g))?));
            }
        }
        let pv = block_map(&v0, &v1, &pv)?;
        let pa = block_map(&a0, &a1, &pa)?;
        let (c0, c1) = (d0.cone().shift(-1), d1.cone().shift(-1));
        let comps: BTreeMap<i64, RatMatrix> =
            (c0.lo()..=c0.hi()).map(|n| (n, pv.comp(n).direct_sum(&pa.comp(n - 1)))).collect();
        Ok(ComplexMap::new(c0, c1, comps)?)
    }
}

fn thirds() -> CellCircle {
    CellCircle::standard(3)
}

/// Output structure `{p_i + q_j}` and both inputs refined to contain the thirds.
fn prepare(f: &CellSheafComplex, g: &CellSheafComplex) -> Result<(CellSheafComplex, CellSheafComplex, CellCircle), CellError> {
    let f = f.refine(&f.circle.union(&thirds()))?;
    let g = g.refine(&g.circle.union(&thirds()))?;
    let mut out: Vec<Q> = f
        .circle
        .positions()
        .iter()
        .flat_map(|p| g.circle.positions().iter().map(move |q| frac(&(p + q))))
        .collect();
    out.sort();
    out.dedup();
    let out = CellCircle::new(out)?;
    Ok((f, g, out))
}

/// Chain-level `m_*(F ⊠ G)` on the output structure.
fn convolve_chain(f: &CellSheafComplex, g: &CellSheafComplex, out: &CellCircle) -> Result<CellSheafComplex, CellError> {
    let pair = Pair { f, g };
    let k = out.k();
    let gap = (0..k)
        .map(|e| {
            let end = if e + 1 == k { Q::one() } else { out.position(e + 1).clone() };
            end - out.position(e)
        })
        .min()
        .expect("k ≥ 1");
    let delta = gap / Q::from_integer(4.into());
    let mut vertex_stalks = Vec::new();
    for v in 0..k {
        let (d, _, _) = pair.cochains(&pair.fiber(out.position(v)))?;
        vertex_stalks.push(d.cone().shift(-1));
    }
    let mut edge_stalks = Vec::new();
    let mut start_maps = Vec::new();
    let mut end_maps = Vec::new();
    for e in 0..k {
        let x0 = out.position(e).clone();
        let x1 = if e + 1 == k { Q::one() } else { out.position(e + 1).clone() };
        let lower = pair.specialization(&x0, &(&x0 + &delta))?;
        let upper = pair.specialization(&x1, &(&x1 - &delta))?;
        if upper.target() != lower.target() {
            return Err(CellError::Other(format!("generic fibers over edge {e} disagree")));
        }
        edge_stalks.push(lower.target().clone());
        start_maps.push(lower);
        end_maps.push(upper);
    }
    CellSheafComplex::new(out.clone(), vertex_stalks, edge_stalks, start_maps, end_maps)
}

/// `F ⋆ G`, reduced stalkwise to cohomology.
pub fn convolve(f: &CellSheafComplex, g: &CellSheafComplex) -> Result<CellSheafComplex, CellError> {
    let (f, g, out) = prepare(f, g)?;
    Ok(minimal_sheaf(&convolve_chain(&f, &g, &out)?).0)
}

/// Quasi-isomorphism from `G` (refined to the output structure, stalkwise reduced) to
/// `unit ⋆ G`. It is induced by including `G` as the summand over `s = 0`.
pub fn unit_law_map(g: &CellSheafComplex) -> Result<CellSheafMap, CellError> {
    let (f, gg, out) = prepare(&CellSheafComplex::unit(), g)?;
    let chain = convolve_chain(&f, &gg, &out)?;
    let source = g.refine(&out)?;
    let include = |src: &RationalChainComplex, tgt: &RationalChainComplex| -> Result<ComplexMap, CellError> {
        let comps = (src.lo()..=src.hi())
            .map(|n| {
                let mut m = RatMatrix::zeros(tgt.dim(n), src.dim(n));
                for r in 0..src.dim(n) {
                    m.set(r, r, Q::one());
                }
                (n, m)
            })
            .collect();
        Ok(ComplexMap::new(src.clone(), tgt.clone(), comps)?)
    };
    let k = out.k();
    let vm = (0..k)
        .map(|v| include(source.stalk(Cell::Vertex(v)), chain.stalk(Cell::Vertex(v))))
        .collect::<Result<Vec<_>, _>>()?;
    let em = (0..k)
        .map(|e| include(source.stalk(Cell::Edge(e)), chain.stalk(Cell::Edge(e))))
        .collect::<Result<Vec<_>, _>>()?;
    let phi = CellSheafMap::new(source, chain, vm, em)?;
    Ok(induced_sheaf_map(&phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cellccc::cell_hom_dims;
    use crate::rational::q;

    #[test]
    fn tensor_is_a_complex_and_multiplicative() {
        let a = RationalChainComplex::two_term(-1, RatMatrix::from_i64(&[&[1], &[2]]));
        let b = RationalChainComplex::two_term(0, RatMatrix::from_i64(&[&[0, 1]]));
        let t = tensor(&a, &b);
        assert_eq!(t.total_dim(), a.total_dim() * b.total_dim());
        // Künneth: H(A ⊗ B) = H(A) ⊗ H(B).
        let ha: usize = a.cohomology_dims().values().sum();
        let hb: usize = b.cohomology_dims().values().sum();
        assert_eq!(t.cohomology_dims().values().sum::<usize>(), ha * hb);
        assert_eq!(t.euler_characteristic(), a.euler_characteristic() * b.euler_characteristic());
    }

    #[test]
    fn unit_is_a_unit() {
        let u = CellSheafComplex::unit();
        let t = CellSheafComplex::twist();
        for g in [u.clone(), t.clone(), CellSheafComplex::local_system(&q(2)).unwrap()] {
            let phi = unit_law_map(&g).unwrap();
            assert!(phi.is_quasi_iso());
            let c = convolve(&u, &g).unwrap();
            assert_eq!(phi.target(), &c);
            for h in [&u, &t] {
                assert_eq!(cell_hom_dims(&c, h).unwrap(), cell_hom_dims(&g, h).unwrap());
                assert_eq!(cell_hom_dims(h, &c).unwrap(), cell_hom_dims(h, &g).unwrap());
            }
        }
    }

    #[test]
    fn convolution_stays_in_window_and_commutes() {
        let u = CellSheafComplex::unit();
        let t = CellSheafComplex::twist();
        let tt = convolve(&t, &t).unwrap();
        assert!(tt.in_window());
        let tu = convolve(&t, &u).unwrap();
        let ut = convolve(&u, &t).unwrap();
        assert!(tu.in_window() && ut.in_window());
        for h in [&u, &t] {
            assert_eq!(cell_hom_dims(&tu, h).unwrap(), cell_hom_dims(&ut, h).unwrap());
            assert_eq!(cell_hom_dims(h, &tu).unwrap(), cell_hom_dims(h, &ut).unwrap());
        }
    }

    #[test]
    fn local_systems_convolve_to_zero_unless_equal() {
        // Fourier dual: skyscrapers at distinct points have zero convolution product.
        let a = CellSheafComplex::local_system(&q(2)).unwrap();
        let b = CellSheafComplex::local_system(&q(3)).unwrap();
        let c = convolve(&a, &b).unwrap();
        let total: usize = (0..c.circle().k())
            .map(|v| c.stalk(Cell::Vertex(v)).total_dim() + c.stalk(Cell::Edge(v)).total_dim())
            .sum();
        assert_eq!(total, 0);
        // Equal monodromies give L ⊕ L[−1] from the fiber circle's cohomology.
        let aa = convolve(&a, &a).unwrap();
        assert_eq!(cell_hom_dims(&aa, &aa).unwrap(), BTreeMap::from([(-1, 1), (0, 3), (1, 3), (2, 1)]));
        assert_eq!(cell_hom_dims(&a, &aa).unwrap(), BTreeMap::from([(0, 1), (1, 2), (2, 1)]));
    }
}
