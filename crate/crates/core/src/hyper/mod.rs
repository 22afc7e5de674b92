//! The hyperplane `i: Y = {s = 0} → X = P^{n−1}` with `s = Σ c_a x_a`, and the functors
//! `i_*`, `i^*`, `i^!` on line-bundle complexes.
//!
//! Coordinates on `Y ≅ P^{n−2}` are the `x_a` with `a ≠ e`, where `x_e` is eliminated through
//! `x_e = −Σ_{a≠e} (c_a / c_e) x_a`. Write `ρ` for this substitution and `ι` for the inclusion of
//! the polynomial ring in the surviving variables; both are ring maps, `ρι = id`, and every
//! polynomial `f` on `X` splits as `f = ιρ(f) + s·q(f)`.

mod functors;
mod spherical;

pub use functors::{
    comparison_monad, comparison_phi_l, comparison_phi_r, comparison_psi_l, comparison_psi_r, counit_left,
    counit_right, monad, stalk_at_coordinate_point, twist_phi_l, twist_phi_r, twist_psi_l, twist_psi_r,
    unit_left, unit_right,
};
pub use spherical::{
    check_spherical, check_spherical_with, compare_monad, generators_x, generators_y, triangle_identities,
    AxiomVerdict, MonadReport, SphericalOptions, SphericalReport, TwistCheck,
};

use num_traits::Zero;

use crate::error::HyperError;
use crate::lbcx::{HomogPoly, LBComplex, LBMap, PolyMatrix};
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperplaneData {
    n: usize,
    coeffs: Vec<Q>,
    elim: usize,
}

impl HyperplaneData {
    /// `s = Σ c_a x_a` on `P^{n−1}`, eliminating coordinate `elim` (0-based) on `Y`.
    pub fn new(coeffs: Vec<Q>, elim: usize) -> Result<Self, HyperError> {
        let n = coeffs.len();
        if n < 2 {
            return Err(HyperError::SmallN(n));
        }
        if let Some(a) = coeffs.iter().position(Zero::is_zero) {
            return Err(HyperError::ZeroCoefficient(a + 1));
        }
        if elim >= n {
            return Err(HyperError::BadIndex { alpha: elim + 1, n });
        }
        Ok(HyperplaneData { n, coeffs, elim })
    }

    /// `s = x_1 + ⋯ + x_n`, eliminating the last coordinate.
    pub fn standard(n: usize) -> Result<Self, HyperError> {
        Self::new(vec![Q::from_integer(1.into()); n], n.saturating_sub(1))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn elim(&self) -> usize {
        self.elim
    }

    /// Same section with a different eliminated coordinate.
    pub fn with_elim(&self, elim: usize) -> Result<Self, HyperError> {
        Self::new(self.coeffs.clone(), elim)
    }

    /// `P^m` dimension of `X`.
    pub fn mx(&self) -> usize {
        self.n - 1
    }

    /// `P^m` dimension of `Y`.
    pub fn my(&self) -> usize {
        self.n - 2
    }

    pub fn s(&self) -> HomogPoly {
        HomogPoly::linear(&self.coeffs)
    }

    /// Substitution vector: `x_e = Σ sub[a] x_a`.
    pub fn substitution(&self) -> Vec<Q> {
        let ce = &self.coeffs[self.elim];
        self.coeffs
            .iter()
            .enumerate()
            .map(|(a, c)| if a == self.elim { Q::zero() } else { -(c / ce) })
            .collect()
    }

    pub fn rho(&self, p: &HomogPoly) -> HomogPoly {
        p.eliminate(self.elim, &self.substitution())
    }

    pub fn iota(&self, p: &HomogPoly) -> HomogPoly {
        p.lift(self.elim)
    }

    /// The quotient `q(f)` with `f = ιρ(f) + s·q(f)`.
    pub fn q(&self, p: &HomogPoly) -> HomogPoly {
        let r = p - &self.iota(&self.rho(p));
        r.div_linear(&self.coeffs, self.elim)
            .expect("f − ιρ(f) vanishes on the hyperplane, so s divides it")
    }

    fn rho_m(&self, m: &PolyMatrix) -> PolyMatrix {
        m.map(|p| self.rho(p), self.n - 1)
    }

    fn iota_m(&self, m: &PolyMatrix) -> PolyMatrix {
        m.map(|p| self.iota(p), self.n)
    }

    fn q_m(&self, m: &PolyMatrix) -> PolyMatrix {
        m.map(|p| self.q(p), self.n)
    }

    fn check_x(&self, g: &LBComplex) -> Result<(), HyperError> {
        if g.m() != self.mx() {
            return Err(HyperError::WrongSpace {
                found: g.m() as i64,
                expected: self.mx() as i64,
            });
        }
        Ok(())
    }

    fn check_y(&self, f: &LBComplex) -> Result<(), HyperError> {
        if f.m() != self.my() {
            return Err(HyperError::WrongSpace {
                found: f.m() as i64,
                expected: self.my() as i64,
            });
        }
        Ok(())
    }

    /// `i_* F`: each `O_Y(d)` becomes the Koszul pair `O(d−1) →s O(d)`.
    ///
    /// Degree `k` holds `A^k = F^k` followed by `B^k = F^{k+1}(−1)`, with differential
    /// `[[ι d_k, s], [0, −ι d_{k+1}]]`. Since `ι` is a ring map no correction term is needed.
    pub fn push(&self, f: &LBComplex) -> Result<LBComplex, HyperError> {
        self.check_y(f)?;
        let nv = self.n;
        let lo = f.lo() - 1;
        let hi = f.hi();
        let terms = (lo..=hi)
            .map(|k| {
                let mut t = f.terms(k).to_vec();
                t.extend(f.terms(k + 1).iter().map(|d| d - 1));
                t
            })
            .collect();
        let s = self.s();
        let diffs = (lo..hi)
            .map(|k| {
                let (a0, b0) = (f.rank(k), f.rank(k + 1));
                let (a1, b1) = (f.rank(k + 1), f.rank(k + 2));
                let mut d = PolyMatrix::zeros(nv, a1 + b1, a0 + b0);
                d.set_block(0, 0, &self.iota_m(&f.diff(k)));
                let mut sm = PolyMatrix::zeros(nv, a1, b0);
                for i in 0..b0 {
                    sm.set(i, i, s.clone());
                }
                d.set_block(0, a0, &sm);
                d.set_block(a1, a0, &-&self.iota_m(&f.diff(k + 1)));
                d
            })
            .collect();
        Ok(LBComplex::new(self.mx(), lo, terms, diffs)?)
    }

    pub fn push_map(&self, f: &LBMap) -> Result<LBMap, HyperError> {
        let src = self.push(f.source())?;
        let tgt = self.push(f.target())?;
        let comps = (src.lo()..=src.hi())
            .map(|k| {
                let a = self.iota_m(&f.comp(k));
                let b = self.iota_m(&f.comp(k + 1));
                (k, a.direct_sum(&b))
            })
            .collect();
        Ok(LBMap::new(src, tgt, comps)?)
    }

    /// `i^* G`: substitute the eliminated coordinate; twists unchanged.
    pub fn pull_star(&self, g: &LBComplex) -> Result<LBComplex, HyperError> {
        self.check_x(g)?;
        let terms = (g.lo()..=g.hi()).map(|k| g.terms(k).to_vec()).collect();
        let diffs = (g.lo()..g.hi()).map(|k| self.rho_m(&g.diff(k))).collect();
        Ok(LBComplex::new(self.my(), g.lo(), terms, diffs)?)
    }

    pub fn pull_star_map(&self, f: &LBMap) -> Result<LBMap, HyperError> {
        let src = self.pull_star(f.source())?;
        let tgt = self.pull_star(f.target())?;
        let comps = f.components().into_iter().map(|(k, m)| (k, self.rho_m(&m))).collect();
        Ok(LBMap::new(src, tgt, comps)?)
    }

    /// `i^! G = i^*G ⊗ O_Y(1)[−1]`.
    pub fn pull_shriek(&self, g: &LBComplex) -> Result<LBComplex, HyperError> {
        Ok(self.pull_star(g)?.twist(1).shift(-1))
    }

    pub fn pull_shriek_map(&self, f: &LBMap) -> Result<LBMap, HyperError> {
        Ok(self.pull_star_map(f)?.twist(1).shift(-1))
    }
}
