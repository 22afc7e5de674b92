use num_traits::{One, Zero};

use super::HyperplaneData;
use crate::error::HyperError;
use crate::exactalg::{RatMatrix, RationalChainComplex};
use crate::lbcx::{LBComplex, LBMap, PolyMatrix};
use crate::rational::Q;

fn sign(k: i64) -> Q {
    if k.rem_euclid(2) == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

fn ident(nv: usize, n: usize) -> PolyMatrix {
    PolyMatrix::identity(nv, n)
}

/// `u_ℓ : G → i_* i^* G`, componentwise `[I; q(d_k)]`.
pub fn unit_left(h: &HyperplaneData, g: &LBComplex) -> Result<LBMap, HyperError> {
    let tgt = h.push(&h.pull_star(g)?)?;
    let nv = h.n();
    let comps = (g.lo()..=g.hi())
        .map(|k| {
            let (a, b) = (g.rank(k), g.rank(k + 1));
            let mut m = PolyMatrix::zeros(nv, a + b, a);
            m.set_block(0, 0, &ident(nv, a));
            m.set_block(a, 0, &h.q_m(&g.diff(k)));
            (k, m)
        })
        .collect();
    Ok(LBMap::new(g.clone(), tgt, comps)?)
}

/// `c_ℓ : i^* i_* F → F`, componentwise `[I, 0]`.
pub fn counit_left(h: &HyperplaneData, f: &LBComplex) -> Result<LBMap, HyperError> {
    let src = h.pull_star(&h.push(f)?)?;
    let nv = h.n() - 1;
    let comps = (src.lo()..=src.hi())
        .map(|k| {
            let (a, b) = (f.rank(k), f.rank(k + 1));
            let mut m = PolyMatrix::zeros(nv, a, a + b);
            m.set_block(0, 0, &ident(nv, a));
            (k, m)
        })
        .collect();
    Ok(LBMap::new(src, f.clone(), comps)?)
}

/// `u_r : F → i^! i_* F`, componentwise `[0; I]`.
///
/// `(i^! i_* F)^k = F^{k−1}(1) ⊕ F^k`.
pub fn unit_right(h: &HyperplaneData, f: &LBComplex) -> Result<LBMap, HyperError> {
    let tgt = h.pull_shriek(&h.push(f)?)?;
    let nv = h.n() - 1;
    let comps = (f.lo()..=f.hi())
        .map(|k| {
            let (a, b) = (f.rank(k - 1), f.rank(k));
            let mut m = PolyMatrix::zeros(nv, a + b, b);
            m.set_block(a, 0, &ident(nv, b));
            (k, m)
        })
        .collect();
    Ok(LBMap::new(f.clone(), tgt, comps)?)
}

/// `c_r : i_* i^! G → G`, componentwise `[q(d_{k−1}), I]`.
///
/// `(i_* i^! G)^k = G^{k−1}(1) ⊕ G^k` as line bundles on `X`.
pub fn counit_right(h: &HyperplaneData, g: &LBComplex) -> Result<LBMap, HyperError> {
    let src = h.push(&h.pull_shriek(g)?)?;
    let nv = h.n();
    let comps = (src.lo()..=src.hi())
        .map(|k| {
            let (a, b) = (g.rank(k - 1), g.rank(k));
            let mut m = PolyMatrix::zeros(nv, b, a + b);
            m.set_block(0, 0, &h.q_m(&g.diff(k - 1)));
            m.set_block(0, a, &ident(nv, b));
            (k, m)
        })
        .collect();
    Ok(LBMap::new(src, g.clone(), comps)?)
}

/// `T_{Ψ,r} G = Cone(c_r)`.
pub fn twist_psi_r(h: &HyperplaneData, g: &LBComplex) -> Result<LBComplex, HyperError> {
    Ok(counit_right(h, g)?.cone())
}

/// `T_{Ψ,ℓ} G = Cone(u_ℓ)[−1]`.
pub fn twist_psi_l(h: &HyperplaneData, g: &LBComplex) -> Result<LBComplex, HyperError> {
    Ok(unit_left(h, g)?.cone().shift(-1))
}

/// `T_{Φ,r} F = Cone(u_r)[−1]`.
pub fn twist_phi_r(h: &HyperplaneData, f: &LBComplex) -> Result<LBComplex, HyperError> {
    Ok(unit_right(h, f)?.cone().shift(-1))
}

/// `T_{Φ,ℓ} F = Cone(c_ℓ)`.
pub fn twist_phi_l(h: &HyperplaneData, f: &LBComplex) -> Result<LBComplex, HyperError> {
    Ok(counit_left(h, f)?.cone())
}

/// `T_{Ψ,r} G → G(1)`, `(a, b, g) ↦ a + s·g` on `G^k(1) ⊕ G^{k+1} ⊕ G^k`.
pub fn comparison_psi_r(h: &HyperplaneData, g: &LBComplex) -> Result<LBMap, HyperError> {
    let t = twist_psi_r(h, g)?;
    let nv = h.n();
    let s = h.s();
    let comps = (t.lo()..=t.hi())
        .map(|k| {
            let (a, b, c) = (g.rank(k), g.rank(k + 1), g.rank(k));
            let mut m = PolyMatrix::zeros(nv, a, a + b + c);
            m.set_block(0, 0, &ident(nv, a));
            for i in 0..c {
                m.set(i, a + b + i, s.clone());
            }
            (k, m)
        })
        .collect();
    Ok(LBMap::new(t, g.twist(1), comps)?)
}

/// `G(−1) → T_{Ψ,ℓ} G`, `g ↦ (s·g, 0, −g)` on `G^k ⊕ G^{k−1} ⊕ G^k(−1)`.
pub fn comparison_psi_l(h: &HyperplaneData, g: &LBComplex) -> Result<LBMap, HyperError> {
    let t = twist_psi_l(h, g)?;
    let nv = h.n();
    let s = h.s();
    let src = g.twist(-1);
    let comps = (g.lo()..=g.hi())
        .map(|k| {
            let (a, b, c) = (g.rank(k), g.rank(k - 1), g.rank(k));
            let mut m = PolyMatrix::zeros(nv, a + b + c, c);
            for i in 0..c {
                m.set(i, i, s.clone());
                m.set(a + b + i, i, -&crate::lbcx::HomogPoly::one(nv));
            }
            (k, m)
        })
        .collect();
    Ok(LBMap::new(src, t, comps)?)
}

/// `F(1)[−2] → T_{Φ,r} F`, inclusion of the middle summand of `F^k ⊕ F^{k−2}(1) ⊕ F^{k−1}`.
pub fn comparison_phi_r(h: &HyperplaneData, f: &LBComplex) -> Result<LBMap, HyperError> {
    let t = twist_phi_r(h, f)?;
    let nv = h.n() - 1;
    let src = f.twist(1).shift(-2);
    let comps = (src.lo()..=src.hi())
        .map(|k| {
            let (a, b, c) = (f.rank(k), f.rank(k - 2), f.rank(k - 1));
            let mut m = PolyMatrix::zeros(nv, a + b + c, b);
            m.set_block(a, 0, &ident(nv, b));
            (k, m)
        })
        .collect();
    Ok(LBMap::new(src, t, comps)?)
}

/// `F(−1)[2] → T_{Φ,ℓ} F`, inclusion of the middle summand of `F^{k+1} ⊕ F^{k+2}(−1) ⊕ F^k`.
pub fn comparison_phi_l(h: &HyperplaneData, f: &LBComplex) -> Result<LBMap, HyperError> {
    let t = twist_phi_l(h, f)?;
    let nv = h.n() - 1;
    let src = f.twist(-1).shift(2);
    let comps = (src.lo()..=src.hi())
        .map(|k| {
            let (a, b, c) = (f.rank(k + 1), f.rank(k + 2), f.rank(k));
            let mut m = PolyMatrix::zeros(nv, a + b + c, b);
            m.set_block(a, 0, &ident(nv, b));
            (k, m)
        })
        .collect();
    Ok(LBMap::new(src, t, comps)?)
}

/// The monad `i_* i^* G`.
pub fn monad(h: &HyperplaneData, g: &LBComplex) -> Result<LBComplex, HyperError> {
    h.push(&h.pull_star(g)?)
}

/// `G ⊗ Cone(O(−1) →s O) → i_* i^* G`, `(a, b) ↦ (a, q(d_k) a + (−1)^{k+1} b)`.
pub fn comparison_monad(h: &HyperplaneData, g: &LBComplex) -> Result<LBMap, HyperError> {
    let cs = LBComplex::two_term(h.mx(), -1, -1, 0, h.s())?;
    let src = g.tensor(&cs)?;
    let tgt = monad(h, g)?;
    let nv = h.n();
    let comps = (src.lo()..=src.hi())
        .map(|k| {
            let (a, b) = (g.rank(k), g.rank(k + 1));
            let mut m = PolyMatrix::zeros(nv, a + b, a + b);
            m.set_block(0, 0, &ident(nv, a));
            m.set_block(a, 0, &h.q_m(&g.diff(k)));
            m.set_block(a, a, &ident(nv, b).scale(&sign(k + 1)));
            (k, m)
        })
        .collect();
    Ok(LBMap::new(src, tgt, comps)?)
}

/// Fiber of `G` at the coordinate point `e_α` (1-based): every `O(d)` contributes one dimension
/// and each polynomial entry is evaluated at `x_α = 1`, other coordinates `0`.
pub fn stalk_at_coordinate_point(g: &LBComplex, alpha: usize) -> Result<RationalChainComplex, HyperError> {
    let n = g.nvars();
    if alpha == 0 || alpha > n {
        return Err(HyperError::BadIndex { alpha, n });
    }
    let point: Vec<Q> = (0..n)
        .map(|a| if a + 1 == alpha { Q::one() } else { Q::zero() })
        .collect();
    let dims = (g.lo()..=g.hi()).map(|k| g.rank(k)).collect();
    let diffs = (g.lo()..g.hi())
        .map(|k| {
            let d = g.diff(k);
            let mut m = RatMatrix::zeros(d.rows(), d.cols());
            for r in 0..d.rows() {
                for c in 0..d.cols() {
                    m.set(r, c, d.get(r, c).eval(&point));
                }
            }
            m
        })
        .collect();
    Ok(RationalChainComplex::new(g.lo(), dims, diffs).expect("evaluation preserves d∘d = 0"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lbcx::{is_equivalence, HomogPoly};
    use crate::rational::q;

    fn sample_x(h: &HyperplaneData) -> LBComplex {
        // A two-term complex with a non-linear differential on X.
        let nv = h.n();
        let f = &HomogPoly::var(nv, 0).pow(2) + &(&HomogPoly::var(nv, 1) * &HomogPoly::var(nv, nv - 1));
        LBComplex::two_term(h.mx(), 0, -1, 1, f).unwrap()
    }

    #[test]
    fn units_and_counits_are_chain_maps() {
        for n in 2..=3 {
            let h = HyperplaneData::new((1..=n as i64).map(q).collect(), n - 1).unwrap();
            let g = sample_x(&h);
            unit_left(&h, &g).unwrap();
            counit_right(&h, &g).unwrap();
            let f = h.pull_star(&g).unwrap();
            counit_left(&h, &f).unwrap();
            unit_right(&h, &f).unwrap();
        }
    }

    #[test]
    fn twist_identifications_on_o() {
        let h = HyperplaneData::standard(3).unwrap();
        let o = LBComplex::line_bundle(2, 0);
        assert!(is_equivalence(&comparison_psi_r(&h, &o).unwrap()).unwrap());
        assert!(is_equivalence(&comparison_psi_l(&h, &o).unwrap()).unwrap());
        let oy = LBComplex::line_bundle(1, 0);
        assert!(is_equivalence(&comparison_phi_r(&h, &oy).unwrap()).unwrap());
        assert!(is_equivalence(&comparison_phi_l(&h, &oy).unwrap()).unwrap());
    }

    #[test]
    fn comparisons_on_non_trivial_complex() {
        let h = HyperplaneData::new(vec![q(1), q(-2), q(3)], 1).unwrap();
        let g = sample_x(&h);
        assert!(is_equivalence(&comparison_psi_r(&h, &g).unwrap()).unwrap());
        assert!(is_equivalence(&comparison_psi_l(&h, &g).unwrap()).unwrap());
        assert!(is_equivalence(&comparison_monad(&h, &g).unwrap()).unwrap());
        let f = h.pull_star(&g).unwrap();
        assert!(is_equivalence(&comparison_phi_r(&h, &f).unwrap()).unwrap());
        assert!(is_equivalence(&comparison_phi_l(&h, &f).unwrap()).unwrap());
    }

    #[test]
    fn stalks() {
        let h = HyperplaneData::standard(3).unwrap();
        let o = LBComplex::line_bundle(2, 4);
        assert_eq!(stalk_at_coordinate_point(&o, 1).unwrap().cohomology_dims(), [(0, 1)].into());
        let cs = LBComplex::two_term(2, -1, -1, 0, h.s()).unwrap();
        for a in 1..=3 {
            assert!(stalk_at_coordinate_point(&cs, a).unwrap().is_acyclic());
        }
        let cx = LBComplex::two_term(2, -1, -1, 0, HomogPoly::var(3, 0)).unwrap();
        assert!(!stalk_at_coordinate_point(&cx, 2).unwrap().is_acyclic());
        assert!(stalk_at_coordinate_point(&cx, 4).is_err());
    }
}
