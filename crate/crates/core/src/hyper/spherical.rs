use serde::{Deserialize, Serialize};

use super::functors::*;
use super::HyperplaneData;
use crate::error::HyperError;
use crate::lbcx::{
    find_homotopy, is_equivalence_with_cap, rgamma_with_cap, rhom_dims_with_cap, LBComplex,
    LBMap, LBMapJson, DEFAULT_E_CAP,
};

#[derive(Clone, Debug)]
pub struct SphericalOptions {
    pub cap: u32,
    /// Compare Ext tables between generator pairs before and after `T_{Ψ,r}` and `T_{Φ,r}`.
    pub ext_tables: bool,
    pub witnesses: bool,
}

impl Default for SphericalOptions {
    fn default() -> Self {
        SphericalOptions {
            cap: DEFAULT_E_CAP,
            ext_tables: true,
            witnesses: true,
        }
    }
}

/// `O(−j)`, `j = 0..n−1`, on `X = P^{n−1}`.
pub fn generators_x(n: usize) -> Vec<LBComplex> {
    (0..n as i64).map(|j| LBComplex::line_bundle(n - 1, -j)).collect()
}

/// `O_Y(−j)`, `j = 0..n−2`, on `Y = P^{n−2}`.
pub fn generators_y(n: usize) -> Vec<LBComplex> {
    (0..n as i64 - 1).map(|j| LBComplex::line_bundle(n - 2, -j)).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AxiomVerdict {
    pub axiom: String,
    pub pass: bool,
    pub per_generator: Vec<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext_preserved: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<LBMapJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TwistCheck {
    pub twist: String,
    pub expected: String,
    pub pass: bool,
    pub per_generator: Vec<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<LBMapJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SphericalReport {
    pub n: usize,
    pub coeffs: Vec<String>,
    pub generators_x: Vec<i64>,
    pub generators_y: Vec<i64>,
    pub axioms: Vec<AxiomVerdict>,
    pub twists: Vec<TwistCheck>,
    pub triangle_identities: bool,
    pub inverse_property: bool,
}

impl SphericalReport {
    pub fn all_pass(&self) -> bool {
        self.axioms.iter().all(|a| a.pass)
            && self.twists.iter().all(|t| t.pass)
            && self.triangle_identities
            && self.inverse_property
    }

    pub fn axiom(&self, name: &str) -> Option<&AxiomVerdict> {
        self.axioms.iter().find(|a| a.axiom == name)
    }
}

/// Runs `f` on every item on its own thread, keeping order.
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    std::thread::scope(|sc| {
        let hs: Vec<_> = items.iter().map(|x| sc.spawn(|| f(x))).collect();
        hs.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    })
}

fn collect<T>(rs: Vec<Result<T, HyperError>>) -> Result<Vec<T>, HyperError> {
    rs.into_iter().collect()
}

fn ext_preserved(
    gens: &[LBComplex],
    images: &[LBComplex],
    cap: u32,
) -> Result<bool, HyperError> {
    let pairs: Vec<(usize, usize)> = (0..gens.len())
        .flat_map(|a| (0..gens.len()).map(move |b| (a, b)))
        .collect();
    let ok = par_map(&pairs, |&(a, b)| -> Result<bool, HyperError> {
        let before = rhom_dims_with_cap(&gens[a], &gens[b], cap)?;
        let after = rhom_dims_with_cap(&images[a], &images[b], cap)?;
        Ok(before == after)
    });
    Ok(collect(ok)?.into_iter().all(|x| x))
}

fn twist_check(
    name: &str,
    expected: &str,
    gens: &[LBComplex],
    cmp: impl Fn(&LBComplex) -> Result<LBMap, HyperError> + Sync,
    opts: &SphericalOptions,
) -> Result<(TwistCheck, Vec<LBMap>), HyperError> {
    let maps = collect(par_map(gens, |g| cmp(g)))?;
    let per = collect(par_map(&maps, |m| Ok(is_equivalence_with_cap(m, opts.cap)?)))?;
    let check = TwistCheck {
        twist: name.into(),
        expected: expected.into(),
        pass: per.iter().all(|&b| b),
        per_generator: per,
        witnesses: if opts.witnesses { maps.iter().map(LBMap::to_json).collect() } else { vec![] },
    };
    Ok((check, maps))
}

/// `S^r G → S^r S S^ℓ G → T_{Φ,r} S^ℓ G [1]`, that is
/// `i^! G → i^! i_* i^* G → Cone(u_r(i^* G))`.
fn sf2_map(h: &HyperplaneData, g: &LBComplex) -> Result<LBMap, HyperError> {
    let a = h.pull_shriek_map(&unit_left(h, g)?)?;
    let b = unit_right(h, &h.pull_star(g)?)?.cone_inclusion();
    Ok(a.then(&b)?)
}

/// `S^ℓ T_{Ψ,r} G [−1] → S^ℓ S S^r G → S^r G`, that is
/// `i^*(Cone(c_r G)[−1]) → i^* i_* i^! G → i^! G`.
fn sf4_map(h: &HyperplaneData, g: &LBComplex) -> Result<LBMap, HyperError> {
    let cr = counit_right(h, g)?;
    let a = h.pull_star_map(&cr.cone_projection().shift(-1))?;
    let b = counit_left(h, &h.pull_shriek(g)?)?;
    Ok(a.then(&b)?)
}

fn axiom(
    name: &str,
    maps: Vec<LBMap>,
    ext: Option<bool>,
    opts: &SphericalOptions,
) -> Result<AxiomVerdict, HyperError> {
    let per = collect(par_map(&maps, |m| Ok(is_equivalence_with_cap(m, opts.cap)?)))?;
    Ok(AxiomVerdict {
        axiom: name.into(),
        pass: per.iter().all(|&b| b) && ext.unwrap_or(true),
        per_generator: per,
        ext_preserved: ext,
        witnesses: if opts.witnesses { maps.iter().map(LBMap::to_json).collect() } else { vec![] },
    })
}

/// The four adjunction triangle identities on `G` (on `X`) and `F = i^* G` (on `Y`), each
/// checked by finding a chain homotopy to the identity.
pub fn triangle_identities(h: &HyperplaneData, g: &LBComplex) -> Result<bool, HyperError> {
    let f = h.pull_star(g)?;
    let pf = h.push(&f)?;
    let sh = h.pull_shriek(g)?;
    let composites = [
        h.pull_star_map(&unit_left(h, g)?)?.then(&counit_left(h, &f)?)?,
        unit_left(h, &pf)?.then(&h.push_map(&counit_left(h, &f)?)?)?,
        h.push_map(&unit_right(h, &f)?)?.then(&counit_right(h, &pf)?)?,
        unit_right(h, &sh)?.then(&h.pull_shriek_map(&counit_right(h, g)?)?)?,
    ];
    for c in &composites {
        let id = LBMap::identity(c.source());
        if find_homotopy(c, &id)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `T_{Ψ,r} T_{Ψ,ℓ} G ≃ G` through the zigzag
/// `T_{Ψ,r} T_{Ψ,ℓ} G → (T_{Ψ,ℓ} G)(1) ← G` of comparison maps.
fn inverse_property(h: &HyperplaneData, g: &LBComplex, cap: u32) -> Result<bool, HyperError> {
    let tl = twist_psi_l(h, g)?;
    let phi = comparison_psi_r(h, &tl)?;
    let psi = comparison_psi_l(h, g)?.twist(1);
    Ok(is_equivalence_with_cap(&phi, cap)? && is_equivalence_with_cap(&psi, cap)?)
}

pub fn check_spherical(n: usize) -> Result<SphericalReport, HyperError> {
    check_spherical_with(&HyperplaneData::standard(n)?, &SphericalOptions::default())
}

pub fn check_spherical_with(h: &HyperplaneData, opts: &SphericalOptions) -> Result<SphericalReport, HyperError> {
    let n = h.n();
    let gx = generators_x(n);
    let gy = generators_y(n);

    let (psi_r, psi_r_maps) = twist_check("T_Psi_r", "(x) O(1)", &gx, |g| comparison_psi_r(h, g), opts)?;
    let (phi_r, phi_r_maps) = twist_check("T_Phi_r", "(x) O_Y(1)[-2]", &gy, |f| comparison_phi_r(h, f), opts)?;
    let (psi_l, _) = twist_check("T_Psi_l", "(x) O(-1)", &gx, |g| comparison_psi_l(h, g), opts)?;
    let (phi_l, _) = twist_check("T_Phi_l", "(x) O_Y(-1)[2]", &gy, |f| comparison_phi_l(h, f), opts)?;

    let sf1_ext = if opts.ext_tables {
        let imgs: Vec<_> = psi_r_maps.iter().map(|m| m.source().clone()).collect();
        Some(ext_preserved(&gx, &imgs, opts.cap)?)
    } else {
        None
    };
    let sf3_ext = if opts.ext_tables {
        let imgs: Vec<_> = phi_r_maps.iter().map(|m| m.target().clone()).collect();
        Some(ext_preserved(&gy, &imgs, opts.cap)?)
    } else {
        None
    };

    let sf1 = axiom("SF1", psi_r_maps, sf1_ext, opts)?;
    let sf3 = axiom("SF3", phi_r_maps, sf3_ext, opts)?;
    let sf2 = axiom("SF2", collect(par_map(&gx, |g| sf2_map(h, g)))?, None, opts)?;
    let sf4 = axiom("SF4", collect(par_map(&gx, |g| sf4_map(h, g)))?, None, opts)?;

    let tri = collect(par_map(&gx, |g| triangle_identities(h, g)))?.into_iter().all(|b| b);
    let inv = collect(par_map(&gx, |g| inverse_property(h, g, opts.cap)))?
        .into_iter()
        .all(|b| b);

    Ok(SphericalReport {
        n,
        coeffs: h.coeffs().iter().map(crate::rational::format_q).collect(),
        generators_x: gx.iter().map(|g| g.terms(0)[0]).collect(),
        generators_y: gy.iter().map(|g| g.terms(0)[0]).collect(),
        axioms: vec![sf1, sf2, sf3, sf4],
        twists: vec![psi_r, phi_r, psi_l, phi_l],
        triangle_identities: tri,
        inverse_property: inv,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MonadReport {
    pub n: usize,
    pub generator: Vec<i64>,
    pub compare: bool,
    /// Stalk acyclicity at `e_1, …, e_n`.
    pub stalks_acyclic: Vec<bool>,
    pub euler: i64,
    pub euler_expected: i64,
}

impl MonadReport {
    pub fn pass(&self) -> bool {
        self.compare && self.stalks_acyclic.iter().all(|&b| b) && self.euler == self.euler_expected
    }
}

/// `monad(G) ≃ G ⊗ Cone(O(−1) →s O)` via the explicit comparison map, together with stalk
/// acyclicity of `monad(G)` at the coordinate points and an Euler characteristic check.
pub fn compare_monad(h: &HyperplaneData, g: &LBComplex, cap: u32) -> Result<MonadReport, HyperError> {
    let cmp = comparison_monad(h, g)?;
    let compare = is_equivalence_with_cap(&cmp, cap)?;
    let m = cmp.target();
    let stalks_acyclic = (1..=h.n())
        .map(|a| Ok(stalk_at_coordinate_point(m, a)?.is_acyclic()))
        .collect::<Result<Vec<_>, HyperError>>()?;
    let euler = rgamma_with_cap(m, 0, cap)?.complex.euler_characteristic();
    let euler_expected = rgamma_with_cap(g, 0, cap)?.complex.euler_characteristic()
        - rgamma_with_cap(&g.twist(-1), 0, cap)?.complex.euler_characteristic();
    Ok(MonadReport {
        n: h.n(),
        generator: g.summands().map(|(_, d)| d).collect(),
        compare,
        stalks_acyclic,
        euler,
        euler_expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lbcx::HomogPoly;

    #[test]
    fn spherical_small_n() {
        for n in 2..=3 {
            let r = check_spherical(n).unwrap();
            assert!(r.all_pass(), "n = {n}: {r:?}");
            assert_eq!(r.axiom("SF1").unwrap().ext_preserved, Some(true));
        }
    }

    #[test]
    fn triangle_identity_on_o_minus_one() {
        let h = HyperplaneData::standard(3).unwrap();
        assert!(triangle_identities(&h, &LBComplex::line_bundle(2, -1)).unwrap());
    }

    #[test]
    fn monad_of_o_is_cone_of_s() {
        let h = HyperplaneData::standard(3).unwrap();
        let r = compare_monad(&h, &LBComplex::line_bundle(2, 0), DEFAULT_E_CAP).unwrap();
        assert!(r.pass());
        // χ(O) − χ(O(−1)) = 1 − 0 on P².
        assert_eq!(r.euler, 1);
        let r1 = compare_monad(&h, &LBComplex::line_bundle(2, 1), DEFAULT_E_CAP).unwrap();
        assert!(r1.pass());
        assert_eq!(r1.euler, 3 - 1);
    }

    #[test]
    fn witnesses_reproduce_verdicts() {
        let r = check_spherical(2).unwrap();
        for a in &r.axioms {
            for (w, &v) in a.witnesses.iter().zip(&a.per_generator) {
                let m = LBMap::from_json(w).unwrap();
                assert_eq!(is_equivalence_with_cap(&m, DEFAULT_E_CAP).unwrap(), v);
            }
        }
    }

    #[test]
    fn broken_complex_is_rejected() {
        let x = HomogPoly::var(3, 0);
        let bad = LBComplex::new(
            2,
            0,
            vec![vec![0], vec![1], vec![2]],
            vec![
                crate::lbcx::PolyMatrix::from_rows(3, vec![vec![x.clone()]]),
                crate::lbcx::PolyMatrix::from_rows(3, vec![vec![x]]),
            ],
        );
        assert!(bad.is_err());
    }
}
