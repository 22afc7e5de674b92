//! Acceptance battery. Prints one line per criterion and exits nonzero if any fails.
//! Every comparison is exact; the only tolerances are the wall-clock budgets.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use schober_core::cellccc::{cell_hom_dims, convolve, local_system_check, CellSheafComplex};
use schober_core::cohp;
use schober_core::exactalg::RatMatrix;
use schober_core::fanskeleton::{
    build_projective_fan, classify_point, h0_map, verify_section_bijectivity, SkeletonPoint, StratumKind,
};
use schober_core::hyper::{
    check_spherical_with, compare_monad, comparison_psi_l, generators_x, monad, stalk_at_coordinate_point,
    twist_phi_r, twist_psi_l, twist_psi_r, HyperplaneData, SphericalOptions,
};
use schober_core::lbcx::{
    koszul, monomials, rgamma_with_cap, rhom_dims, ExtTable, HomogPoly, LBComplex, LBMap, PolyMatrix,
    DEFAULT_E_CAP,
};
use schober_core::rational::{q, qf, Q};
use schober_core::schober::{
    check_perverse, diagram_hom_dims, has_no_origin_sections, ledger_compose, ledger_to_coherent,
    CoherentTwist, MonodromyLedgerEntry, PerverseDiskDatum, SchoberDiagram,
};

const SEED: u64 = 20_241_017;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: Vec<String>, summary: String) -> Outcome {
    if failures.is_empty() {
        Outcome { pass: true, detail: summary }
    } else {
        let shown: Vec<_> = failures.iter().take(3).cloned().collect();
        Outcome { pass: false, detail: format!("{} failures, e.g. {}", failures.len(), shown.join("; ")) }
    }
}

// ---------- oracles ----------

/// `h^i(P^m, O(d))` by enumerating Čech monomials: nonnegative exponents for `i = 0`,
/// all-negative exponents for `i = m`.
fn brute_h(m: usize, i: usize, d: i64) -> usize {
    fn count(vars: usize, lo: i64, hi: i64, total: i64) -> usize {
        if vars == 0 {
            return usize::from(total == 0);
        }
        (lo..=hi).map(|e| count(vars - 1, lo, hi, total - e)).sum()
    }
    let nv = m + 1;
    let mut h = 0;
    if i == 0 && d >= 0 {
        h += count(nv, 0, d, d);
    }
    if i == m && d <= -(nv as i64) {
        h += count(nv, d, -1, d);
    }
    h
}

fn brute_table(m: usize, d: i64) -> ExtTable {
    (0..=m).map(|i| (i as i64, brute_h(m, i, d))).filter(|&(_, x)| x > 0).collect()
}

/// `Ext(O(a), O(b))` on `P^m`.
fn ext_lines(m: usize, a: i64, b: i64) -> ExtTable {
    brute_table(m, b - a)
}

/// `χ(P^m, O(d)) = C(d + m, m)` as a polynomial in `d`.
fn chi_line(m: usize, d: i64) -> i64 {
    let mut num = Q::one();
    for k in 1..=m as i64 {
        num = num * Q::from_integer((d + k).into()) / Q::from_integer(k.into());
    }
    num.to_integer().try_into().unwrap()
}

fn chi_complex(c: &LBComplex) -> i64 {
    c.summands().map(|(deg, d)| if deg.rem_euclid(2) == 0 { chi_line(c.m(), d) } else { -chi_line(c.m(), d) }).sum()
}

fn euler_of(t: &BTreeMap<i64, usize>) -> i64 {
    t.iter().map(|(&i, &d)| if i.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) }).sum()
}

/// Leibniz expansion; matrices here are at most 3 × 3.
fn det(a: &[Vec<Q>]) -> Q {
    let n = a.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Q::zero();
    permute(&mut perm, 0, a, &mut total);
    total
}

fn permute(p: &mut Vec<usize>, k: usize, a: &[Vec<Q>], total: &mut Q) {
    if k == p.len() {
        let inversions = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        let prod = p.iter().enumerate().fold(Q::one(), |acc, (i, &j)| acc * &a[i][j]);
        if inversions % 2 == 0 { *total += prod } else { *total -= prod }
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, a, total);
        p.swap(k, i);
    }
}

fn rows(m: &RatMatrix) -> Vec<Vec<Q>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect()).collect()
}

fn mul(a: &[Vec<Q>], b: &[Vec<Q>], inner: usize, cols: usize) -> Vec<Vec<Q>> {
    a.iter()
        .map(|r| (0..cols).map(|j| (0..inner).fold(Q::zero(), |acc, k| acc + &r[k] * &b[k][j])).collect())
        .collect()
}

fn one_minus(a: &[Vec<Q>]) -> Vec<Vec<Q>> {
    a.iter()
        .enumerate()
        .map(|(i, r)| r.iter().enumerate().map(|(j, x)| if i == j { Q::one() - x } else { -x.clone() }).collect())
        .collect()
}

/// Rank by Gauss-Jordan elimination on a copy.
fn rank(a: &[Vec<Q>]) -> usize {
    let mut a = a.to_vec();
    let (nr, nc) = (a.len(), a.first().map_or(0, Vec::len));
    let mut r = 0;
    for c in 0..nc {
        let Some(p) = (r..nr).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in 0..nr {
            if i != r && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[r][c];
                for j in 0..nc {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

/// Interval module `[a, b]` of `V_1 ← ⋯ ← V_{r−1}`: submodules are `[a, k]`, quotients `[k, b]`,
/// so `Hom([a,b], [c,d]) ≠ 0` iff `a ≤ c ≤ b ≤ d`; Ext¹ follows from the Euler form.
fn interval_ext(r: usize, (a, b): (usize, usize), (c, d): (usize, usize)) -> ExtTable {
    let dim = |lo: usize, hi: usize, j: usize| i64::from(lo <= j && j <= hi);
    let hom = i64::from(a <= c && c <= b && b <= d);
    let euler: i64 = (1..r).map(|j| dim(a, b, j) * dim(c, d, j)).sum::<i64>()
        - (1..r.saturating_sub(1)).map(|j| dim(a, b, j + 1) * dim(c, d, j)).sum::<i64>();
    let ext1 = hom - euler;
    let mut t = ExtTable::new();
    if hom > 0 {
        t.insert(0, hom as usize);
    }
    if ext1 > 0 {
        t.insert(1, ext1 as usize);
    }
    t
}

fn interval_diagram(r: usize, a: usize, b: usize) -> SchoberDiagram {
    let dims: Vec<usize> = (1..r).map(|j| usize::from(a <= j && j <= b)).collect();
    let objects: Vec<LBComplex> = dims.iter().map(|&d| LBComplex::sum_in_degree(0, 0, vec![0; d])).collect();
    let chain = (0..dims.len().saturating_sub(1))
        .map(|k| {
            let m = if dims[k] == 1 && dims[k + 1] == 1 {
                PolyMatrix::identity(1, 1)
            } else {
                PolyMatrix::zeros(1, dims[k], dims[k + 1])
            };
            LBMap::new(objects[k + 1].clone(), objects[k].clone(), [(0, m)].into()).unwrap()
        })
        .collect();
    SchoberDiagram::new(1, None, objects, None, chain).unwrap()
}

/// Whether `x` lies in the open cone spanned by `ē_b`, `b ∉ J`, with `ē_a = e_a` for `a < n`
/// and `ē_n = −Σ e_a`.
fn in_open_cone(x: &[Q], j: &[usize], n: usize) -> bool {
    let last = n - 1;
    // Coefficients with c_a − c_n = x_a, normalised so that c vanishes on J.
    let c_last = if j.contains(&last) { Q::zero() } else { -x[j[0]].clone() };
    let c: Vec<Q> = (0..n).map(|a| if a == last { c_last.clone() } else { &x[a] + &c_last }).collect();
    (0..n).all(|a| if j.contains(&a) { c[a].is_zero() } else { c[a] > Q::zero() })
}

fn random_form(rng: &mut ChaCha8Rng, nvars: usize, deg: i64) -> HomogPoly {
    loop {
        let terms: Vec<_> =
            monomials(nvars, deg).into_iter().map(|e| (e, q(rng.gen_range(-2..=2)))).collect();
        let f = HomogPoly::from_terms(nvars, terms);
        if !f.is_zero() {
            return f;
        }
    }
}

/// Random complex on `P^m` with twists in `[−6, 6]` and length ≤ 3.
fn random_complex(rng: &mut ChaCha8Rng) -> LBComplex {
    let m = rng.gen_range(1..=3usize);
    let nv = m + 1;
    match rng.gen_range(1..=3) {
        1 => {
            let k = rng.gen_range(1..=2);
            LBComplex::sum_in_degree(m, rng.gen_range(-1..=1), (0..k).map(|_| rng.gen_range(-6..=6)).collect())
        }
        2 => {
            let b = rng.gen_range(-4..=6);
            let a = b - rng.gen_range(0..=2);
            let c = LBComplex::two_term(m, -1, a, b, random_form(rng, nv, b - a)).unwrap();
            if rng.gen_bool(0.5) {
                c.direct_sum(&LBComplex::line_bundle(m, rng.gen_range(-6..=6))).unwrap()
            } else {
                c
            }
        }
        _ => {
            let (d1, d2) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
            let t = rng.gen_range(-2..=6);
            let forms = [random_form(rng, nv, d1), random_form(rng, nv, d2)];
            koszul(m, &forms).unwrap().twist(t)
        }
    }
}

// ---------- criteria ----------

fn c1_spherical() -> Outcome {
    let mut failures = Vec::new();
    let mut times = Vec::new();
    for n in 2..=4 {
        let t = Instant::now();
        let h = HyperplaneData::standard(n).unwrap();
        let opts = SphericalOptions { cap: DEFAULT_E_CAP, ext_tables: true, witnesses: true };
        let r = check_spherical_with(&h, &opts).unwrap();
        for a in &r.axioms {
            // SF3 runs over the generators O_Y(−j) of Y = P^{n−2}.
            let gens = if a.axiom == "SF3" { n - 1 } else { n };
            if !(a.pass && a.per_generator.len() == gens && a.per_generator.iter().all(|&b| b)) {
                failures.push(format!("n = {n}: {}", a.axiom));
            }
        }
        for tw in &r.twists {
            if !(tw.pass && tw.per_generator.iter().all(|&b| b)) || tw.witnesses.is_empty() {
                failures.push(format!("n = {n}: {}", tw.twist));
            }
        }
        for name in ["T_Psi_r", "T_Phi_r", "T_Psi_l"] {
            if !r.twists.iter().any(|tw| tw.twist == name && tw.pass) {
                failures.push(format!("n = {n}: {name} missing"));
            }
        }
        // Ext tables of twisted generators against the oracle for O(j)-twists.
        for (j, g) in generators_x(n).iter().enumerate() {
            let j = j as i64;
            let tr = twist_psi_r(&h, g).unwrap();
            let tl = twist_psi_l(&h, g).unwrap();
            for k in -(n as i64)..=1 {
                let o = LBComplex::line_bundle(n - 1, k);
                if rhom_dims(&tr, &o).unwrap() != ext_lines(n - 1, 1 - j, k) {
                    failures.push(format!("n = {n}: Ext(T_Psi_r O(−{j}), O({k}))"));
                }
                if rhom_dims(&tl, &o).unwrap() != ext_lines(n - 1, -1 - j, k) {
                    failures.push(format!("n = {n}: Ext(T_Psi_l O(−{j}), O({k}))"));
                }
            }
        }
        // T_Phi_r on O_Y is O_Y(1)[−2]; on P^0 only the shift remains visible.
        if n == 2 {
            let y = LBComplex::line_bundle(0, 0);
            let t = twist_phi_r(&h, &y).unwrap();
            if rgamma_with_cap(&t, 0, DEFAULT_E_CAP).unwrap().dims != BTreeMap::from([(2, 1)]) {
                failures.push("n = 2: T_Phi_r O_Y".into());
            }
        }
        if !(r.triangle_identities && r.inverse_property) {
            failures.push(format!("n = {n}: triangle/inverse"));
        }
        times.push(t.elapsed());
    }
    let total: Duration = times.iter().sum();
    if times[2] > Duration::from_secs(120) {
        failures.push(format!("n = 4 took {:?}", times[2]));
    }
    outcome(failures, format!("n ∈ {{2,3,4}}, n = 4 in {:.1} s (limit 120 s), total {:.1} s", times[2].as_secs_f64(), total.as_secs_f64()))
}

fn c2_monad() -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for n in 2..=4 {
        let h = HyperplaneData::standard(n).unwrap();
        for (j, g) in generators_x(n).iter().enumerate() {
            let r = compare_monad(&h, g, DEFAULT_E_CAP).unwrap();
            if !r.compare {
                failures.push(format!("n = {n}, O(−{j}): compare"));
            }
            let mg = monad(&h, g).unwrap();
            // The monad is supported on Y, so its Euler characteristic is χ(G) − χ(G(−1)).
            if chi_complex(&mg) != chi_line(n - 1, -(j as i64)) - chi_line(n - 1, -(j as i64) - 1) {
                failures.push(format!("n = {n}, O(−{j}): χ"));
            }
            for alpha in 1..=n {
                let s = stalk_at_coordinate_point(&mg, alpha).unwrap();
                if !s.cohomology_dims().is_empty() {
                    failures.push(format!("n = {n}, O(−{j}): stalk at e_{alpha}"));
                }
                count += 1;
            }
        }
    }
    outcome(failures, format!("9 generators, {count} stalks acyclic"))
}

fn c3_monodromy() -> Outcome {
    let mut failures = Vec::new();
    let half = MonodromyLedgerEntry::new(qf(1, 2));
    let full = ledger_compose(&half, &half);
    if !(full.tau == q(1) && full.shift == 2 && full.winding == 1) {
        failures.push("A_π ∘ A_π".into());
    }
    if ledger_to_coherent(&full).unwrap() != (CoherentTwist { twist: -1, shift: 2 }) {
        failures.push("ledger_to_coherent(2π)".into());
    }
    // Random angle sequences: the composite shift is twice the number of full turns.
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..200 {
        let taus: Vec<Q> = (0..rng.gen_range(1..=5)).map(|_| qf(rng.gen_range(-12..=12), 4)).collect();
        let total: Q = taus.iter().sum();
        let e = taus.iter().fold(MonodromyLedgerEntry::unit(), |acc, t| ledger_compose(&acc, &MonodromyLedgerEntry::new(t.clone())));
        let turns = total.floor().to_integer();
        if e.tau != total || e.shift != 2 * i64::try_from(turns).unwrap() {
            failures.push(format!("ledger {taus:?}"));
        }
        if e.theta.is_zero() {
            let c = ledger_to_coherent(&e).unwrap();
            if c.twist != -e.winding || c.shift != 2 * e.winding {
                failures.push(format!("coherent {taus:?}"));
            }
        } else if ledger_to_coherent(&e).is_ok() {
            failures.push(format!("partial loop {taus:?}"));
        }
    }
    // Hyper side: T_Psi_l G is A_2π[−2] ⋆ G = G(−1) on the nose, witnessed by an equivalence.
    let d = ledger_to_coherent(&full).unwrap();
    for n in 2..=4 {
        let h = HyperplaneData::standard(n).unwrap();
        for (j, g) in generators_x(n).iter().enumerate() {
            let c = comparison_psi_l(&h, g).unwrap();
            let ok = c.source() == &d.apply(g).shift(-2)
                && c.source() == &g.twist(-1)
                && schober_core::lbcx::is_equivalence(&c).unwrap();
            if !ok {
                failures.push(format!("n = {n}: T_Psi_l O(−{j})"));
            }
        }
    }
    outcome(failures, "A_π∘A_π = A_2π[shift 2] ↦ ⊗O(−1)[2]; 200 random ledgers; T_Psi_l on 9 generators".into())
}

fn c4_cohomology() -> Outcome {
    let t = Instant::now();
    let mut failures = Vec::new();
    let mut entries = 0;
    for m in 1..=4usize {
        for d in -8..=8i64 {
            for i in 0..=m {
                entries += 1;
                if cohp::h_dim(m, i, d) != brute_h(m, i, d) {
                    failures.push(format!("h^{i}(P^{m}, O({d}))"));
                }
            }
            let r = rgamma_with_cap(&LBComplex::line_bundle(m, d), 0, DEFAULT_E_CAP).unwrap();
            if r.dims != brute_table(m, d) {
                failures.push(format!("rgamma O({d}) on P^{m}"));
            }
            if !r.dims.keys().all(|&i| i == 0 || i == m as i64) {
                failures.push(format!("rgamma O({d}) on P^{m} not concentrated"));
            }
        }
    }
    for m in 1..=3usize {
        let forms: Vec<HomogPoly> = (0..=m).map(|i| HomogPoly::var(m + 1, i)).collect();
        let k = koszul(m, &forms).unwrap();
        for j in [0, 2] {
            if !rgamma_with_cap(&k, j, DEFAULT_E_CAP).unwrap().is_zero() {
                failures.push(format!("Koszul on P^{m} twisted by {j}"));
            }
        }
    }
    let el = t.elapsed();
    if el > Duration::from_secs(60) {
        failures.push(format!("took {el:?}"));
    }
    outcome(failures, format!("{entries} table entries, m ≤ 4, |d| ≤ 8, Koszul m ≤ 3, {:.1} s (limit 60 s)", el.as_secs_f64()))
}

fn c5_stabilization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let mut failures = Vec::new();
    let mut floors = BTreeMap::new();
    for k in 0..100 {
        let c = random_complex(&mut rng);
        match rgamma_with_cap(&c, 0, DEFAULT_E_CAP) {
            Ok(r) => {
                let chi = chi_complex(&c);
                if euler_of(&r.dims) != chi || r.euler != chi || r.history.len() < 2 || !r.history.contains(&r.floor) {
                    failures.push(format!("#{k}: {:?} vs χ = {chi}", r.dims));
                }
                *floors.entry(r.floor).or_insert(0) += 1;
            }
            Err(e) => failures.push(format!("#{k}: {e}")),
        }
    }
    outcome(failures, format!("100 complexes, accepted floors {floors:?}"))
}

fn random_q(rng: &mut ChaCha8Rng) -> Q {
    Q::new(rng.gen_range(-2i64..=2).into(), rng.gen_range(1i64..=2).into())
}

fn c6_perverse() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let mut failures = Vec::new();
    let (mut singular, mut non_injective) = (0, 0);
    for k in 0..1000 {
        let (phi, psi) = (rng.gen_range(1..=3usize), rng.gen_range(1..=3usize));
        let p = RatMatrix::from_vec(psi, phi, (0..psi * phi).map(|_| random_q(&mut rng)).collect());
        let qm = RatMatrix::from_vec(phi, psi, (0..psi * phi).map(|_| random_q(&mut rng)).collect());
        let (pr, qr) = (rows(&p), rows(&qm));
        let d = PerverseDiskDatum::new(p, qm).unwrap();
        let m_phi = one_minus(&mul(&qr, &pr, psi, phi));
        let m_psi = one_minus(&mul(&pr, &qr, phi, psi));
        let invertible = !det(&m_phi).is_zero() && !det(&m_psi).is_zero();
        singular += usize::from(!invertible);
        if check_perverse(&d).is_ok() != invertible {
            failures.push(format!("#{k}: check_perverse"));
        }
        if rows(&d.m_phi()) != m_phi || rows(&d.m_psi()) != m_psi {
            failures.push(format!("#{k}: m_Φ, m_Ψ"));
        }
        if mul(&pr, &m_phi, phi, phi) != mul(&m_psi, &pr, psi, phi) {
            failures.push(format!("#{k}: intertwining"));
        }
        let injective = rank(&pr) == phi;
        non_injective += usize::from(!injective);
        if has_no_origin_sections(&d) != injective {
            failures.push(format!("#{k}: origin sections"));
        }
    }
    let el = t.elapsed();
    if el > Duration::from_secs(10) {
        failures.push(format!("took {el:?}"));
    }
    outcome(
        failures,
        format!("1000 data, {singular} singular, {non_injective} with ker p ≠ 0, {:.2} s (limit 10 s)", el.as_secs_f64()),
    )
}

fn c7_diagrams() -> Outcome {
    let mut failures = Vec::new();
    let mut pairs = 0;
    for r in 2..=5usize {
        let ivs: Vec<(usize, usize)> = (1..r).flat_map(|a| (a..r).map(move |b| (a, b))).collect();
        for &v in &ivs {
            for &w in &ivs {
                pairs += 1;
                let got = diagram_hom_dims(&interval_diagram(r, v.0, v.1), &interval_diagram(r, w.0, w.1)).unwrap();
                if got != interval_ext(r, v, w) {
                    failures.push(format!("r = {r}, {v:?} → {w:?}: {got:?}"));
                }
            }
        }
    }
    outcome(failures, format!("{pairs} pairs of interval modules, r ≤ 5"))
}

fn c8_ccc() -> Outcome {
    let mut failures = Vec::new();
    let unit = CellSheafComplex::unit();
    let twist = CellSheafComplex::twist();
    let tt = convolve(&twist, &twist).unwrap();
    let cells = [("unit", &unit, 0i64), ("twist", &twist, -1), ("twist*twist", &tt, -2)];
    let mut entries = 0;
    for (an, a, da) in &cells {
        for (bn, b, db) in &cells {
            if *da == -2 && *db == -2 {
                continue;
            }
            entries += 1;
            let cell = cell_hom_dims(a, b).unwrap();
            let coh = rhom_dims(&LBComplex::line_bundle(1, *da), &LBComplex::line_bundle(1, *db)).unwrap();
            let oracle = ext_lines(1, *da, *db);
            if cell != oracle || coh != oracle {
                failures.push(format!("Ext({an}, {bn}): cellular {cell:?}, coherent {coh:?}, oracle {oracle:?}"));
            }
        }
    }
    for l in [q(1), q(2), q(5)] {
        let others = [l.clone(), &l + q(1), -&l];
        let r = local_system_check(&l, &others).unwrap();
        if !r.pass {
            failures.push(format!("local system {l}"));
        }
    }
    outcome(failures, format!("{entries} Ext tables against P¹, local systems λ ∈ {{1, 2, 5}}"))
}

fn c9_skeleton() -> Outcome {
    let t = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    let pos = |rng: &mut ChaCha8Rng| Q::new(rng.gen_range(1i64..=20).into(), rng.gen_range(1i64..=5).into());
    // Strata of L₀ and L^×(θ): codimension counted from the free real parameters.
    let mut strata = 0;
    for n in 1..=4usize {
        for mask in 1u32..(1 << n) {
            let j: Vec<usize> = (0..n).filter(|a| mask & (1 << a) != 0).collect();
            let radii: Vec<Q> = (0..n).map(|a| if j.contains(&a) { Q::zero() } else { pos(&mut rng) + q(1) }).collect();
            let d = classify_point(&SkeletonPoint::real(radii).unwrap(), &[q(0)]);
            let free = n - j.len();
            let expected = 2 * n - free;
            strata += 1;
            if d.kind != StratumKind::ZeroFiber || d.codim != Some(expected) || expected != n + j.len() {
                failures.push(format!("𝔍L₀, n = {n}, J = {j:?}: {d:?}"));
            }
            if d.subset != j.iter().map(|a| a + 1).collect::<Vec<_>>() {
                failures.push(format!("subset n = {n}, J = {j:?}"));
            }
            // Open stratum: ℓ, the radii off J, and |J| − 1 free angles.
            let l = pos(&mut rng);
            let radii: Vec<Q> = (0..n).map(|a| if j.contains(&a) { l.clone() } else { &l + pos(&mut rng) }).collect();
            let mut angles = vec![Q::zero(); n];
            for &a in j.iter().skip(1) {
                angles[a] = qf(rng.gen_range(0..12), 12);
            }
            let theta = qf(1, 3);
            let sum: Q = angles.iter().sum();
            angles[j[0]] = &theta - sum;
            let p = SkeletonPoint::new(radii, angles).unwrap();
            let d = classify_point(&p, &[q(0), theta.clone()]);
            let free = 1 + (n - j.len()) + (j.len() - 1);
            strata += 1;
            if !matches!(d.kind, StratumKind::Open { .. }) || d.codim != Some(2 * n - free) {
                failures.push(format!("𝔍L^×, n = {n}, J = {j:?}: {d:?}"));
            }
        }
    }
    // h₀ sends 𝔍L₀ into −σ_𝔍.
    for n in 2..=4usize {
        let fan = build_projective_fan(n).unwrap();
        for a in 0..n - 1 {
            let mut e = vec![Q::zero(); n - 1];
            e[a] = q(1);
            if fan.rays()[a] != e {
                failures.push("unexpected ray coordinates".into());
            }
        }
    }
    let mut h0_samples = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(2..=4usize);
        let fan = build_projective_fan(n).unwrap();
        let mask = rng.gen_range(1u32..(1 << n));
        let j: Vec<usize> = (0..n).filter(|a| mask & (1 << a) != 0).collect();
        let r: Vec<Q> = (0..n).map(|a| if j.contains(&a) { Q::zero() } else { pos(&mut rng) }).collect();
        let x: Vec<Q> = h0_map(&fan, &r).unwrap().iter().map(|v| -v).collect();
        h0_samples += 1;
        if !in_open_cone(&x, &j, n) {
            failures.push(format!("h₀({r:?}) ∉ −σ_{j:?}"));
        }
    }
    // g × w round trips.
    let taus = [q(0), qf(1, 4), qf(-1, 4), qf(1, 2), qf(-1, 2)];
    let runs: Vec<(usize, Q)> = [2, 3].iter().flat_map(|&n| taus.iter().map(move |t| (n, t.clone()))).collect();
    let reports: Vec<_> = std::thread::scope(|s| {
        let hs: Vec<_> = runs.iter().map(|(n, tau)| s.spawn(move || verify_section_bijectivity(*n, tau, 1000, SEED))).collect();
        hs.into_iter().map(|h| h.join().unwrap()).collect()
    });
    for ((n, tau), r) in runs.iter().zip(reports) {
        match r {
            Ok(r) if r.pass && r.domain_samples >= 1000 && r.codomain_samples >= 1000 => {}
            Ok(r) => failures.push(format!("section n = {n}, τ = {tau}: {:?}", r.counterexample)),
            Err(e) => failures.push(format!("section n = {n}, τ = {tau}: {e}")),
        }
    }
    // Conic invariance.
    for _ in 0..1000 {
        let n = rng.gen_range(1..=4usize);
        let radii: Vec<Q> = (0..n).map(|_| if rng.gen_bool(0.2) { Q::zero() } else { pos(&mut rng) }).collect();
        let angles: Vec<Q> = (0..n).map(|_| if rng.gen_bool(0.5) { Q::zero() } else { qf(rng.gen_range(0..8), 8) }).collect();
        let p = SkeletonPoint::new(radii, angles).unwrap();
        let thetas = [q(0), qf(1, 4), qf(5, 8)];
        let c = pos(&mut rng);
        if classify_point(&p, &thetas) != classify_point(&p.scaled(&c), &thetas) {
            failures.push(format!("conic {p:?} × {c}"));
        }
    }
    let el = t.elapsed();
    if el > Duration::from_secs(60) {
        failures.push(format!("took {el:?}"));
    }
    outcome(
        failures,
        format!(
            "{strata} strata n ≤ 4, {h0_samples} h₀ samples, 10 section runs × 10³, 10³ scalings, {:.1} s (limit 60 s)",
            el.as_secs_f64()
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("spherical-functor suite", c1_spherical),
        ("main-theorem monad", c2_monad),
        ("monodromy bookkeeping", c3_monodromy),
        ("cohomology engine", c4_cohomology),
        ("Čech stabilization", c5_stabilization),
        ("perverse disk quiver", c6_perverse),
        ("𝓜(r) degeneration", c7_diagrams),
        ("CCC at n = 2", c8_ccc),
        ("skeleton and PL geometry", c9_skeleton),
    ];
    let mut all = true;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = std::panic::catch_unwind(f).unwrap_or_else(|e| Outcome {
            pass: false,
            detail: format!("panicked: {}", e.downcast_ref::<String>().cloned().unwrap_or_default()),
        });
        all &= o.pass;
        println!(
            "criterion {}: {} [{}] tolerance exact; {} ({:.1} s)",
            k + 1,
            if o.pass { "PASS" } else { "FAIL" },
            name,
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    if !all {
        std::process::exit(1);
    }
}
