use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{failed, Body, Check, CliError, Ctx, SuiteKind};
use crate::cellccc::{ccc_compare, local_system_check};
use crate::cohp;
use crate::exactalg::RatMatrix;
use crate::fanskeleton::verify_section_bijectivity;
use crate::hyper::{
    check_spherical_with, compare_monad, comparison_psi_l, generators_x, HyperplaneData, SphericalOptions,
};
use crate::lbcx::{is_equivalence_with_cap, koszul, rgamma_with_cap, HomogPoly, LBComplex};
use crate::rational::{q, qf, Q};
use crate::schober::{
    check_perverse, has_no_origin_sections, ledger_compose, ledger_to_coherent, CoherentTwist, MonodromyLedgerEntry,
    PerverseDiskDatum,
};

type Job<'a> = Box<dyn Fn() -> Result<Vec<Check>, CliError> + Send + Sync + 'a>;

/// The acceptance battery for dimension `n`; independent groups run concurrently.
pub(crate) fn run_suite(n: usize, kind: SuiteKind, ctx: &Ctx) -> Result<Body, CliError> {
    if n < 2 {
        return Err(CliError::Input(format!("suite needs n ≥ 2, got {n}")));
    }
    let cap = ctx.cap;
    let seed = ctx.seed;
    let quick = kind == SuiteKind::Quick;
    let samples = if quick { 100 } else { 1000 };
    let jobs: Vec<(&str, Job)> = vec![
        ("spherical", Box::new(move || spherical(n, cap))),
        ("monad", Box::new(move || monad(n, cap))),
        ("ledger", Box::new(move || ledger(n, cap))),
        ("cohomology", Box::new(move || cohomology(n - 1, if quick { 4 } else { 8 }, cap))),
        ("perverse", Box::new(move || Ok(perverse(samples, seed)))),
        ("ccc", Box::new(ccc)),
        ("section", Box::new(move || section(n, samples, seed))),
    ];
    let results: Vec<(String, Result<Vec<Check>, CliError>)> = std::thread::scope(|s| {
        let hs: Vec<_> = jobs.iter().map(|(name, job)| (name.to_string(), s.spawn(job))).collect();
        hs.into_iter().map(|(name, h)| (name, h.join().expect("suite worker panicked"))).collect()
    });
    let mut checks = Vec::new();
    for (group, r) in results {
        match r {
            Ok(cs) => checks.extend(cs.into_iter().map(|mut c| {
                c.name = format!("{group}: {}", c.name);
                c
            })),
            Err(e) => checks.push(Check::with(format!("{group}: completed"), false, e.to_string())),
        }
    }
    let summary = json!({ "n": n, "kind": if quick { "quick" } else { "full" }, "seed": seed, "checks": checks.len() });
    Ok(Body::new("Acceptance", checks, summary))
}

fn spherical(n: usize, cap: u32) -> Result<Vec<Check>, CliError> {
    let h = HyperplaneData::standard(n).map_err(failed)?;
    let opts = SphericalOptions { cap, ext_tables: true, witnesses: false };
    let r = check_spherical_with(&h, &opts).map_err(failed)?;
    let mut out: Vec<Check> = r.axioms.iter().map(|a| Check::new(a.axiom.clone(), a.pass)).collect();
    out.extend(r.twists.iter().map(|t| Check::new(format!("{} ≃ {}", t.twist, t.expected), t.pass)));
    out.push(Check::new("triangle identities", r.triangle_identities));
    out.push(Check::new("inverse property", r.inverse_property));
    Ok(out)
}

fn monad(n: usize, cap: u32) -> Result<Vec<Check>, CliError> {
    let h = HyperplaneData::standard(n).map_err(failed)?;
    generators_x(n)
        .iter()
        .enumerate()
        .map(|(j, g)| {
            let r = compare_monad(&h, g, cap).map_err(failed)?;
            Ok(Check::with(format!("monad of {}", twist_name(j)), r.pass(), &r))
        })
        .collect()
}

fn ledger(n: usize, cap: u32) -> Result<Vec<Check>, CliError> {
    let half = MonodromyLedgerEntry::new(qf(1, 2));
    let full = ledger_compose(&half, &half);
    let mut out = vec![
        Check::new("A_π ∘ A_π = A_2π with shift 2", full == MonodromyLedgerEntry::new(q(1)) && full.to_json().shift == 2),
        Check::new(
            "A_2π ↦ ⊗O(−1)[2]",
            ledger_to_coherent(&full).ok() == Some(CoherentTwist { twist: -1, shift: 2 }),
        ),
    ];
    let h = HyperplaneData::standard(n).map_err(failed)?;
    let d = ledger_to_coherent(&full).map_err(failed)?;
    for (j, g) in generators_x(n).iter().enumerate() {
        let c = comparison_psi_l(&h, g).map_err(failed)?;
        let ok = c.source() == &d.apply(g).shift(-2) && is_equivalence_with_cap(&c, cap).map_err(failed)?;
        out.push(Check::new(format!("T_Psi_l {0} ≃ A_2π[−2] ⋆ {0}", twist_name(j)), ok));
    }
    Ok(out)
}

fn cohomology(m: usize, dmax: i64, cap: u32) -> Result<Vec<Check>, CliError> {
    let mut agree = true;
    let mut concentrated = true;
    for d in -dmax..=dmax {
        let r = rgamma_with_cap(&LBComplex::line_bundle(m, d), 0, cap).map_err(failed)?;
        let expected: std::collections::BTreeMap<i64, usize> =
            (0..=m).map(|i| (i as i64, cohp::h_dim(m, i, d))).filter(|&(_, x)| x > 0).collect();
        agree &= r.dims == expected;
        concentrated &= r.dims.keys().all(|&i| i == 0 || i == m as i64);
    }
    let forms: Vec<HomogPoly> = (0..=m).map(|i| HomogPoly::var(m + 1, i)).collect();
    let k = koszul(m, &forms).map_err(failed)?;
    let acyclic = rgamma_with_cap(&k, 0, cap).map_err(failed)?.is_zero();
    Ok(vec![
        Check::new(format!("rgamma = cohp on P^{m}, |d| ≤ {dmax}"), agree),
        Check::new("concentrated in degrees {0, m}", concentrated),
        Check::new("Koszul complex of the coordinates is acyclic", acyclic),
    ])
}

fn small_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> RatMatrix {
    let data = (0..rows * cols)
        .map(|_| {
            let den: i64 = rng.gen_range(1..=2);
            Q::new(rng.gen_range(-2i64..=2).into(), den.into())
        })
        .collect();
    RatMatrix::from_vec(rows, cols, data)
}

fn perverse(samples: usize, seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut agree, mut intertwine, mut sections) = (true, true, true);
    let mut singular = 0;
    for _ in 0..samples {
        let (phi, psi) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let d = PerverseDiskDatum::new(small_matrix(&mut rng, psi, phi), small_matrix(&mut rng, phi, psi))
            .expect("shapes match");
        // Rank oracle for invertibility, independent of the determinant.
        let oracle = d.m_phi().rank() == phi && d.m_psi().rank() == psi;
        agree &= check_perverse(&d).is_ok() == oracle;
        singular += usize::from(!oracle);
        intertwine &= &d.p * &d.m_phi() == &d.m_psi() * &d.p;
        sections &= has_no_origin_sections(&d) == d.p.kernel().is_empty();
    }
    vec![
        Check::with("check_perverse agrees with the rank oracle", agree, json!({ "samples": samples, "singular": singular })),
        Check::new("p·m_Φ = m_Ψ·p", intertwine),
        Check::new("no origin sections iff ker p = 0", sections),
    ]
}

fn ccc() -> Result<Vec<Check>, CliError> {
    let r = ccc_compare().map_err(failed)?;
    let mut out: Vec<Check> =
        r.grid.iter().chain(&r.convolution).map(|e| Check::new(format!("Ext({}, {})", e.left, e.right), e.pass)).collect();
    for l in [q(1), q(2), q(5)] {
        let rep = local_system_check(&l, &[l.clone(), &l + q(1)]).map_err(failed)?;
        out.push(Check::new(format!("local system λ = {}", rep.lambda), rep.pass));
    }
    Ok(out)
}

fn section(n: usize, samples: usize, seed: u64) -> Result<Vec<Check>, CliError> {
    [q(0), qf(1, 4), qf(-1, 4), qf(1, 2), qf(-1, 2)]
        .iter()
        .map(|tau| {
            let r = verify_section_bijectivity(n, tau, samples, seed).map_err(failed)?;
            Ok(Check::with(format!("g × w bijective, τ = {} turns", r.tau), r.pass, &r))
        })
        .collect()
}

fn twist_name(j: usize) -> String {
    if j == 0 { "O".into() } else { format!("O(−{j})") }
}
