//! The complete fan of `P^{n−1}` in `(𝔱°)*`, skeleton strata of `L(Θ)`, and the canonical-section
//! maps `h₀` and `h = g × w`.
//!
//! `(𝔱°)*` is the quotient of `Q^n` by the diagonal `δ`; coordinates drop one index `e`, so that
//! `ē_a` is the `a`-th unit vector for `a ≠ e` and `ē_e = −Σ_{a≠e} ē_a`.

mod section;
mod skeleton;

pub use section::{
    g_map, h0_map, h_map, invert_h, simplex_support, verify_section_bijectivity, w_map, Inverse, LengthRoot,
    SectionReport, Simplex,
};
pub use skeleton::{classify_point, PointJson, SkeletonPoint, StratumDescriptor, StratumKind};

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::GeometryError;
use crate::exactalg::RatMatrix;
use crate::rational::{format_q, Q};

/// Nonempty subset of `{1, …, n}` (stored 0-based).
pub type Subset = BTreeSet<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanData {
    n: usize,
    elim: usize,
    rays: Vec<Vec<Q>>,
    cones: Vec<Subset>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeData {
    pub subset: Subset,
    /// `ē_a` for `a ∉ 𝔍`.
    pub generators: Vec<Vec<Q>>,
    pub dim: usize,
    /// Primitive integer basis of `σ^⊥ ⊂ 𝔱°`.
    pub perp: Vec<Vec<Q>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConeJson {
    /// 1-based indices.
    pub subset: Vec<usize>,
    pub generators: Vec<Vec<String>>,
    pub dim: usize,
    pub perp: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FanJson {
    pub n: usize,
    pub rays: Vec<Vec<String>>,
    pub cones: Vec<ConeJson>,
}

fn strings(v: &[Q]) -> Vec<String> {
    v.iter().map(format_q).collect()
}

/// Fan of `P^{n−1}`, eliminating the last coordinate.
pub fn build_projective_fan(n: usize) -> Result<FanData, GeometryError> {
    if n == 0 {
        return Err(GeometryError::ZeroDimension);
    }
    FanData::with_elim(n, n - 1)
}

impl FanData {
    pub fn with_elim(n: usize, elim: usize) -> Result<Self, GeometryError> {
        if n == 0 {
            return Err(GeometryError::ZeroDimension);
        }
        if elim >= n {
            return Err(GeometryError::BadSubset { n });
        }
        let d = n - 1;
        let rays = (0..n)
            .map(|a| {
                if a == elim {
                    vec![-Q::from_integer(1.into()); d]
                } else {
                    let mut v = vec![Q::zero(); d];
                    v[Self::pos_of(elim, a)] = Q::from_integer(1.into());
                    v
                }
            })
            .collect();
        let cones = (1u64..(1 << n))
            .map(|mask| (0..n).filter(|a| mask >> a & 1 == 1).collect())
            .collect();
        Ok(FanData { n, elim, rays, cones })
    }

    fn pos_of(elim: usize, a: usize) -> usize {
        if a < elim {
            a
        } else {
            a - 1
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n - 1
    }

    pub fn elim(&self) -> usize {
        self.elim
    }

    pub fn rays(&self) -> &[Vec<Q>] {
        &self.rays
    }

    /// All `2^n − 1` nonempty subsets.
    pub fn cones(&self) -> &[Subset] {
        &self.cones
    }

    /// `Σ_a c_a ē_a`.
    pub fn combine(&self, c: &[Q]) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        for (a, ca) in c.iter().enumerate() {
            for (x, r) in v.iter_mut().zip(&self.rays[a]) {
                *x += ca * r;
            }
        }
        v
    }

    /// The coefficients `ĝ` with `x = Σ ĝ_a ē_a` and `ĝ_e = 0`; all others differ by a constant.
    pub fn coefficients(&self, x: &[Q]) -> Vec<Q> {
        (0..self.n)
            .map(|a| if a == self.elim { Q::zero() } else { x[Self::pos_of(self.elim, a)].clone() })
            .collect()
    }

    fn check_subset(&self, s: &Subset) -> Result<(), GeometryError> {
        if s.is_empty() || s.iter().any(|&a| a >= self.n) {
            return Err(GeometryError::BadSubset { n: self.n });
        }
        Ok(())
    }

    /// `σ = Span_{>0}{ē_a | a ∉ 𝔍}` and `σ^⊥`.
    pub fn cone_for_subset(&self, s: &Subset) -> Result<ConeData, GeometryError> {
        self.check_subset(s)?;
        let generators: Vec<Vec<Q>> = (0..self.n).filter(|a| !s.contains(a)).map(|a| self.rays[a].clone()).collect();
        let d = self.dim();
        let (dim, perp) = if generators.is_empty() || d == 0 {
            (0, (0..d).map(|i| unit(d, i)).collect())
        } else {
            let m = RatMatrix::from_rows(generators.clone());
            (m.rank(), m.kernel().into_iter().map(|v| primitive(&v)).collect())
        };
        Ok(ConeData {
            subset: s.clone(),
            generators,
            dim,
            perp,
        })
    }

    /// Whether `x` lies in the relative interior of `σ_𝔍`: `x = Σ_{a∉𝔍} λ_a ē_a` with all
    /// `λ_a > 0`. Proper generator sets are linearly independent, so the solve is unique.
    pub fn in_relative_interior(&self, x: &[Q], s: &Subset) -> Result<bool, GeometryError> {
        let c = self.cone_for_subset(s)?;
        if c.generators.is_empty() {
            return Ok(x.iter().all(Zero::is_zero));
        }
        let m = RatMatrix::from_rows(c.generators.clone()).transpose();
        Ok(match m.solve(x) {
            Some(l) => l.iter().all(Signed::is_positive),
            None => false,
        })
    }

    /// The unique cone whose relative interior contains `x`.
    pub fn locate(&self, x: &[Q]) -> Subset {
        let g = self.coefficients(x);
        let m = g.iter().min().cloned().unwrap_or_else(Q::zero);
        (0..self.n).filter(|&a| g[a] == m).collect()
    }

    pub fn to_json(&self) -> FanJson {
        FanJson {
            n: self.n,
            rays: self.rays.iter().map(|r| strings(r)).collect(),
            cones: self
                .cones
                .iter()
                .map(|s| {
                    let c = self.cone_for_subset(s).expect("enumerated cones are valid");
                    ConeJson {
                        subset: s.iter().map(|a| a + 1).collect(),
                        generators: c.generators.iter().map(|g| strings(g)).collect(),
                        dim: c.dim,
                        perp: c.perp.iter().map(|g| strings(g)).collect(),
                    }
                })
                .collect(),
        }
    }
}

fn unit(d: usize, i: usize) -> Vec<Q> {
    (0..d).map(|j| Q::from_integer(i64::from(i == j).into())).collect()
}

/// Clears denominators and common factors.
fn primitive(v: &[Q]) -> Vec<Q> {
    use num_integer::Integer;
    let l = v.iter().fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<_> = v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(num_bigint::BigInt::from(0), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Q::from_integer(x / &g)).collect()
}

/// Parses `"1,3"` or `"{1,3}"` into a 0-based subset.
pub fn parse_subset(s: &str, n: usize) -> Result<Subset, GeometryError> {
    let t = s.trim().trim_start_matches('{').trim_end_matches('}');
    let mut out = Subset::new();
    for part in t.split(',').filter(|p| !p.trim().is_empty()) {
        let a: usize = part.trim().parse().map_err(|_| GeometryError::BadSubset { n })?;
        if a == 0 || a > n {
            return Err(GeometryError::BadSubset { n });
        }
        out.insert(a - 1);
    }
    if out.is_empty() {
        return Err(GeometryError::BadSubset { n });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn set(v: &[usize]) -> Subset {
        v.iter().map(|a| a - 1).collect()
    }

    #[test]
    fn small_fans() {
        assert!(matches!(build_projective_fan(0), Err(GeometryError::ZeroDimension)));
        let f1 = build_projective_fan(1).unwrap();
        assert_eq!(f1.cones().len(), 1);
        assert_eq!(f1.dim(), 0);
        let f2 = build_projective_fan(2).unwrap();
        assert_eq!(f2.rays(), &[vec![q(1)], vec![q(-1)]]);
        assert_eq!(f2.cones().len(), 3);
        let f3 = build_projective_fan(3).unwrap();
        assert_eq!(f3.cones().len(), 7);
        for f in [&f1, &f2, &f3] {
            assert!(f.combine(&vec![q(1); f.n()]).iter().all(Zero::is_zero));
        }
        let dims: Vec<usize> = f3.cones().iter().map(|s| f3.cone_for_subset(s).unwrap().dim).collect();
        assert_eq!(dims.iter().filter(|&&d| d == 2).count(), 3);
        assert_eq!(dims.iter().filter(|&&d| d == 1).count(), 3);
        assert_eq!(dims.iter().filter(|&&d| d == 0).count(), 1);
    }

    #[test]
    fn cones_and_perps() {
        let f = build_projective_fan(3).unwrap();
        let all = f.cone_for_subset(&set(&[1, 2, 3])).unwrap();
        assert_eq!((all.dim, all.perp.len()), (0, 2));
        let c = f.cone_for_subset(&set(&[1, 2])).unwrap();
        assert_eq!(c.generators, vec![vec![q(-1), q(-1)]]);
        assert_eq!(c.perp.len(), 1);
        // σ^⊥ is orthogonal to ē₃ = (−1, −1).
        let p = &c.perp[0];
        assert!((&p[0] + &p[1]).is_zero());
        let c1 = f.cone_for_subset(&set(&[1])).unwrap();
        assert_eq!((c1.dim, c1.perp.len()), (2, 0));
        assert!(f.cone_for_subset(&Subset::new()).is_err());
        for s in f.cones() {
            let c = f.cone_for_subset(s).unwrap();
            assert_eq!(c.dim + c.perp.len(), 2);
        }
    }

    #[test]
    fn sampled_points_lie_in_exactly_one_open_cone() {
        let f = build_projective_fan(3).unwrap();
        for a in -3..=3 {
            for b in -3..=3 {
                let x = vec![qf(a, 2), qf(b, 3)];
                let hits: Vec<_> = f.cones().iter().filter(|s| f.in_relative_interior(&x, s).unwrap()).collect();
                assert_eq!(hits.len(), 1, "{x:?}");
                assert_eq!(hits[0], &f.locate(&x));
            }
        }
    }

    #[test]
    fn elimination_choice_gives_isomorphic_incidence() {
        // Same dimension for every cone, same face poset (inclusion of subsets reverses faces).
        for n in 2..=4 {
            let f = FanData::with_elim(n, n - 1).unwrap();
            let g = FanData::with_elim(n, 0).unwrap();
            for s in f.cones() {
                assert_eq!(f.cone_for_subset(s).unwrap().dim, g.cone_for_subset(s).unwrap().dim);
            }
            // The change of coordinates is unimodular: ē_a ↦ ē_a, so relative-interior membership of
            // ray sums agrees.
            for s in f.cones() {
                let c: Vec<Q> = (0..n).map(|a| if s.contains(&a) { q(0) } else { q(1) }).collect();
                assert!(f.in_relative_interior(&f.combine(&c), s).unwrap());
                assert!(g.in_relative_interior(&g.combine(&c), s).unwrap());
            }
        }
    }

    #[test]
    fn subset_parsing() {
        assert_eq!(parse_subset("{1,3}", 3).unwrap(), set(&[1, 3]));
        assert!(parse_subset("0", 3).is_err());
        assert!(parse_subset("", 3).is_err());
    }
}
