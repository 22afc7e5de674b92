use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::{failed, input, Body, CellCmd, Check, CliError, CohpCmd, Command, Ctx, HyperCmd, LbcxCmd, SchoberCmd, SkeletonCmd};
use crate::cellccc::{cell_hom_dims, ccc_compare, convolve, local_system_check, CellSheafComplex, CellSheafJson};
use crate::cohp;
use crate::fanskeleton::{build_projective_fan, classify_point, verify_section_bijectivity, PointJson, SkeletonPoint};
use crate::hyper::{check_spherical_with, compare_monad, stalk_at_coordinate_point, HyperplaneData, SphericalOptions};
use crate::lbcx::{is_zero_object_with_cap, rgamma_with_cap, rhom_dims_with_cap, LBComplex, LBComplexJson};
use crate::rational::{format_q, parse_q, q, Q};
use crate::schober::{
    check_perverse, diagram_hom_dims_with_cap, has_no_origin_sections, ledger_compose, ledger_to_coherent,
    DiagramJson, MonodromyLedgerEntry, PerverseDiskDatum, PerverseJson, SchoberDiagram,
};

pub(crate) fn run_command(c: &Command, ctx: &mut Ctx) -> Result<Body, CliError> {
    match c {
        Command::Hyper(h) => hyper(h, ctx),
        Command::Schober(s) => schober(s, ctx),
        Command::Fan { n } => fan(*n),
        Command::Skeleton(s) => skeleton(s, ctx),
        Command::Cellccc(c) => cellccc(c, ctx),
        Command::Cohp(CohpCmd::Table { m, dmin, dmax }) => cohp_table(*m, *dmin, *dmax),
        Command::Lbcx(l) => lbcx(l, ctx),
    }
}

fn parse_list(v: &[String]) -> Result<Vec<Q>, CliError> {
    v.iter().map(|s| parse_q(s.trim()).map_err(input)).collect()
}

fn read_object(ctx: &mut Ctx, path: &std::path::Path) -> Result<LBComplex, CliError> {
    let j: LBComplexJson = ctx.read_json(path)?;
    LBComplex::from_json(&j).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn hyperplane(n: usize) -> Result<HyperplaneData, CliError> {
    if n < 2 {
        return Err(CliError::Input(format!("hyperplane needs n ≥ 2, got {n}")));
    }
    HyperplaneData::standard(n).map_err(input)
}

fn hyper(h: &HyperCmd, ctx: &mut Ctx) -> Result<Body, CliError> {
    match h {
        HyperCmd::SphericalCheck { n, coeffs } => {
            let data = match coeffs {
                None => hyperplane(*n)?,
                Some(c) => {
                    let c = parse_list(c)?;
                    if c.len() != *n || *n < 2 {
                        return Err(CliError::Input(format!("need {n} coefficients and n ≥ 2")));
                    }
                    HyperplaneData::new(c, n - 1).map_err(input)?
                }
            };
            let opts = SphericalOptions { cap: ctx.cap, ..SphericalOptions::default() };
            let mut rep = check_spherical_with(&data, &opts).map_err(failed)?;
            let mut checks = Vec::new();
            let mut witnesses = Vec::new();
            for a in &mut rep.axioms {
                checks.push(Check::with(a.axiom.clone(), a.pass, &a.per_generator));
                if !a.witnesses.is_empty() {
                    witnesses.push((format!("witnesses/{}.json", a.axiom), json!(std::mem::take(&mut a.witnesses))));
                }
            }
            for t in &mut rep.twists {
                checks.push(Check::with(format!("{} ≃ {}", t.twist, t.expected), t.pass, &t.per_generator));
                if !t.witnesses.is_empty() {
                    witnesses.push((format!("witnesses/{}.json", t.twist), json!(std::mem::take(&mut t.witnesses))));
                }
            }
            checks.push(Check::new("triangle identities", rep.triangle_identities));
            checks.push(Check::new("T_Psi_r ∘ T_Psi_l ≃ id", rep.inverse_property));
            let mut body = Body::new("SF1-SF4", checks, &rep);
            body.witnesses = witnesses;
            Ok(body)
        }
        HyperCmd::Monad { n, object } => {
            let data = hyperplane(*n)?;
            let g = read_object(ctx, object)?;
            if g.m() != data.mx() {
                return Err(CliError::Input(format!("object lives on P^{}, expected P^{}", g.m(), data.mx())));
            }
            let r = compare_monad(&data, &g, ctx.cap).map_err(failed)?;
            let mut checks = vec![Check::new("monad ≃ G ⊗ Cone(O(−1) → O)", r.compare)];
            for (a, ok) in r.stalks_acyclic.iter().enumerate() {
                checks.push(Check::new(format!("stalk at e_{} acyclic", a + 1), *ok));
            }
            checks.push(Check::with("euler characteristic", r.euler == r.euler_expected, [r.euler, r.euler_expected]));
            Ok(Body::new("Thm-main-square", checks, &r))
        }
        HyperCmd::Stalk { alpha, object, expect_acyclic } => {
            let g = read_object(ctx, object)?;
            if *alpha == 0 || *alpha > g.m() + 1 {
                return Err(CliError::Input(format!("α = {alpha} out of 1..={}", g.m() + 1)));
            }
            let s = stalk_at_coordinate_point(&g, *alpha).map_err(failed)?;
            let dims = s.cohomology_dims();
            let checks = if *expect_acyclic { vec![Check::new("acyclic", dims.is_empty())] } else { vec![] };
            Ok(Body::new("Thm-main-square", checks, json!({ "alpha": alpha, "cohomology": dims, "complex": s.to_json() })))
        }
    }
}

fn schober(s: &SchoberCmd, ctx: &mut Ctx) -> Result<Body, CliError> {
    match s {
        SchoberCmd::Check { file } => {
            let j: PerverseJson = ctx.read_json(file)?;
            let d = PerverseDiskDatum::from_json(&j).map_err(input)?;
            let perverse = check_perverse(&d);
            let intertwines = &d.p * &d.m_phi() == &d.m_psi() * &d.p;
            let checks = vec![
                Check::with("monodromies invertible", perverse.is_ok(), perverse.as_ref().err().map(|e| e.to_string())),
                Check::new("p·m_Φ = m_Ψ·p", intertwines),
            ];
            let result = json!({
                "phi": d.phi,
                "psi": d.psi,
                "det_m_phi": format_q(&d.m_phi().determinant()),
                "det_m_psi": format_q(&d.m_psi().determinant()),
                "no_origin_sections": has_no_origin_sections(&d),
            });
            Ok(Body::new("Perverse-disk", checks, result))
        }
        SchoberCmd::Ledger { taus } => {
            let entries: Vec<MonodromyLedgerEntry> =
                taus.iter().map(|t| MonodromyLedgerEntry::parse(t.trim()).map_err(input)).collect::<Result<_, _>>()?;
            let total = entries.iter().fold(MonodromyLedgerEntry::unit(), |a, b| ledger_compose(&a, b));
            let coherent = ledger_to_coherent(&total).ok();
            let tj = total.to_json();
            let checks = vec![Check::new("shift = 2·winding", tj.shift == 2 * tj.winding)];
            let result = json!({
                "entries": entries.iter().map(MonodromyLedgerEntry::to_json).collect::<Vec<_>>(),
                "composite": tj,
                "coherent": coherent,
            });
            Ok(Body::new("Monodromy-ledger", checks, result))
        }
        SchoberCmd::DiagramHom { left, right } => {
            let a: DiagramJson = ctx.read_json(left)?;
            let b: DiagramJson = ctx.read_json(right)?;
            let a = SchoberDiagram::from_json(&a).map_err(input)?;
            let b = SchoberDiagram::from_json(&b).map_err(input)?;
            let t = diagram_hom_dims_with_cap(&a, &b, ctx.cap).map_err(failed)?;
            Ok(Body::new("M(r)", vec![], json!({ "n": a.n(), "r": a.r(), "ext": t })))
        }
    }
}

fn fan(n: usize) -> Result<Body, CliError> {
    let f = build_projective_fan(n).map_err(input)?;
    let mut ok = true;
    for s in f.cones() {
        let c = f.cone_for_subset(s).map_err(failed)?;
        ok &= c.dim == n - s.len();
    }
    Ok(Body::new("Fan-Sigma", vec![Check::new("dim σ_J = n − |J|", ok)], f.to_json()))
}

fn skeleton(s: &SkeletonCmd, ctx: &mut Ctx) -> Result<Body, CliError> {
    match s {
        SkeletonCmd::Classify { point, theta } => {
            let pj: PointJson = ctx.json_arg(point)?;
            let p = SkeletonPoint::from_json(&pj).map_err(input)?;
            let thetas = parse_list(theta)?;
            let d = classify_point(&p, &thetas);
            let conic = [q(2), Q::new(1.into(), 3.into())].iter().all(|c| classify_point(&p.scaled(c), &thetas) == d);
            Ok(Body::new("Skeleton-strata", vec![Check::new("conic invariance", conic)], &d))
        }
        SkeletonCmd::VerifySection { n, tau, samples } => {
            let tau = parse_q(tau).map_err(input)?;
            let r = verify_section_bijectivity(*n, &tau, *samples, ctx.seed).map_err(input)?;
            let checks = vec![Check::with("g × w bijective on samples", r.pass, &r.counterexample)];
            Ok(Body::new("Section-bijection", checks, &r))
        }
    }
}

fn named_sheaf(ctx: &mut Ctx, s: &str) -> Result<CellSheafComplex, CliError> {
    match s {
        "unit" => Ok(CellSheafComplex::unit()),
        "twist" => Ok(CellSheafComplex::twist()),
        "const" => Ok(CellSheafComplex::constant()),
        _ => {
            if let Some(l) = s.strip_prefix("loc:") {
                return CellSheafComplex::local_system(&parse_q(l).map_err(input)?).map_err(input);
            }
            let j: CellSheafJson = ctx.json_arg(s)?;
            CellSheafComplex::from_json(&j).map_err(input)
        }
    }
}

fn cellccc(c: &CellCmd, ctx: &mut Ctx) -> Result<Body, CliError> {
    match c {
        CellCmd::Compare => {
            let r = ccc_compare().map_err(failed)?;
            let checks = r
                .grid
                .iter()
                .chain(&r.convolution)
                .map(|e| Check::with(format!("Ext({}, {})", e.left, e.right), e.pass, e))
                .collect();
            Ok(Body::new("CCC-n2", checks, &r))
        }
        CellCmd::Convolve { left, right } => {
            let a = named_sheaf(ctx, left)?;
            let b = named_sheaf(ctx, right)?;
            let c = convolve(&a, &b).map_err(failed)?;
            let mut tables = BTreeMap::new();
            for (name, g) in [("unit", CellSheafComplex::unit()), ("twist", CellSheafComplex::twist())] {
                tables.insert(format!("Ext(result, {name})"), cell_hom_dims(&c, &g).map_err(failed)?);
                tables.insert(format!("Ext({name}, result)"), cell_hom_dims(&g, &c).map_err(failed)?);
            }
            let window = |x: &CellSheafComplex| x.in_window();
            let checks = if window(&a) && window(&b) {
                vec![Check::new("result in the singular-support window", c.in_window())]
            } else {
                vec![]
            };
            Ok(Body::new("CCC-convolution", checks, json!({ "ext": tables, "sheaf": c.to_json() })))
        }
        CellCmd::Loc { lambda, other } => {
            let l = parse_q(lambda).map_err(input)?;
            let others = if other.is_empty() { vec![&l * q(2)] } else { parse_list(other)? };
            let r = local_system_check(&l, &others).map_err(input)?;
            let mut checks = vec![Check::with("Ext(L_λ, L_λ) = (1, 1)", r.self_ext.len() == 2 && r.self_ext.values().all(|&d| d == 1), &r.self_ext)];
            for c in &r.comparisons {
                checks.push(Check::with(format!("Ext(L_λ, L_{})", c.other), c.pass, &c.table));
            }
            Ok(Body::new("Fourier-Loc", checks, &r))
        }
    }
}

fn cohp_table(m: usize, dmin: i64, dmax: i64) -> Result<Body, CliError> {
    if dmin > dmax {
        return Err(CliError::Input(format!("empty range {dmin}..={dmax}")));
    }
    let rows = cohp::table(m, dmin, dmax);
    let mi = m as i64;
    let serre = (dmin..=dmax).all(|d| (0..=m).all(|i| cohp::h_dim(m, i, d) == cohp::h_dim(m, m - i, -d - mi - 1)));
    let euler = rows.iter().all(|r| {
        let e: i64 = r.dims.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
        e == cohp::euler_char(m, r.d)
    });
    let checks = vec![Check::new("Serre duality", serre), Check::new("Euler characteristic", euler)];
    Ok(Body::new("Serre-cohomology", checks, json!({ "m": m, "rows": rows })))
}

fn lbcx(l: &LbcxCmd, ctx: &mut Ctx) -> Result<Body, CliError> {
    match l {
        LbcxCmd::ExtTable { left, right } => {
            let a = read_object(ctx, left)?;
            let b = read_object(ctx, right)?;
            if a.m() != b.m() {
                return Err(CliError::Input("objects live on different projective spaces".into()));
            }
            let t = rhom_dims_with_cap(&a, &b, ctx.cap).map_err(failed)?;
            Ok(Body::new("Cech-engine", vec![], json!({ "ext": t })))
        }
        LbcxCmd::IsZero { file } => {
            let a = read_object(ctx, file)?;
            let z = is_zero_object_with_cap(&a, ctx.cap).map_err(failed)?;
            Ok(Body::new("Cech-engine", vec![Check::new("zero object", z)], json!({ "is_zero": z })))
        }
        LbcxCmd::Rgamma { file, twist } => {
            let a = read_object(ctx, file)?;
            let r = rgamma_with_cap(&a, *twist, ctx.cap).map_err(failed)?;
            let e: i64 = r.dims.iter().map(|(&i, &d)| if i.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) }).sum();
            let checks = vec![Check::with("Euler certificate", e == r.euler, [e, r.euler])];
            let result: Value = json!({ "dims": r.dims, "floor": r.floor, "history": r.history, "euler": r.euler });
            Ok(Body::new("Cech-engine", checks, result))
        }
    }
}
