//! `h₀ : L₀ → (𝔱°)*` and `h = g × w : P(τ) → (𝔱°)* × R_{≥0}` with their exact inverses.
//!
//! Inverting `h` at `(x, p)` with `p > 0`: write `x = Σ ĝ_a ē_a`. On the stratum with minimal
//! radius `ℓ`, every point has `p|τ_a| = max(0, μ + ĝ_a)` and `r_a = ℓ + max(0, −μ − ĝ_a)` for a
//! single shift `μ`, which is pinned by `Σ |τ_a| = |τ|` (piecewise-linear, solved exactly) and
//! then `ℓ > 0` by `Π r_a = p`. The last equation is a monotone polynomial, so `ℓ` is found
//! exactly when rational and otherwise isolated in a certified rational bracket.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{FanData, SkeletonPoint};
use crate::error::GeometryError;
use crate::rational::{frac, format_q, Q};

/// `h₀(r) = −Σ r_a ē_a`, defined when some `r_a = 0`.
pub fn h0_map(fan: &FanData, r: &[Q]) -> Result<Vec<Q>, GeometryError> {
    if r.len() != fan.n() {
        return Err(GeometryError::BadPoint(format!("expected {} radii", fan.n())));
    }
    if r.iter().any(Signed::is_negative) {
        return Err(GeometryError::BadPoint("negative radius".into()));
    }
    if !r.iter().any(Zero::is_zero) {
        return Err(GeometryError::NotOnZeroFiber);
    }
    Ok(fan.combine(&r.iter().map(|x| -x).collect::<Vec<_>>()))
}

fn check_tau(tau: &Q) -> Result<(), GeometryError> {
    if tau.abs() >= Q::one() {
        return Err(GeometryError::TauOutOfRange);
    }
    Ok(())
}

/// `τ_a` lifted to `[0, 1)` when `τ ≥ 0` and to `(−1, 0]` when `τ < 0`.
fn lift(theta: &Q, tau: &Q) -> Q {
    if tau.is_negative() && !theta.is_zero() {
        theta - Q::one()
    } else {
        theta.clone()
    }
}

/// Checks the equations of `P(τ) = L₀ ∪ P^×(τ)` and returns the lifted angles.
fn section_angles(p: &SkeletonPoint, tau: &Q) -> Result<Vec<Q>, GeometryError> {
    check_tau(tau)?;
    let n = p.n();
    let im = p.minimal_indices();
    if let Some(b) = (0..n).find(|b| !im.contains(b) && !p.angle_or_zero(*b).is_zero()) {
        return Err(GeometryError::NotOnSection(format!("θ_{} ≠ 0 although {} ∉ I_m", b + 1, b + 1)));
    }
    let lifted: Vec<Q> = (0..n).map(|a| lift(&p.angle_or_zero(a), tau)).collect();
    if p.min_radius().is_zero() {
        return Ok(vec![Q::zero(); n]);
    }
    let s: Q = lifted.iter().sum();
    if &s != tau {
        return Err(GeometryError::NotOnSection(format!(
            "Σ τ_a = {} but τ = {}",
            format_q(&s),
            format_q(tau)
        )));
    }
    Ok(lifted)
}

/// `w = r_1 ⋯ r_n`.
pub fn w_map(p: &SkeletonPoint) -> Q {
    p.radius_product()
}

/// `g = Σ (r|τ_a| − r_a) ē_a` with `r = r_1 ⋯ r_n` and angles in turns.
pub fn g_map(fan: &FanData, p: &SkeletonPoint, tau: &Q) -> Result<Vec<Q>, GeometryError> {
    if p.n() != fan.n() {
        return Err(GeometryError::BadPoint(format!("expected {} coordinates", fan.n())));
    }
    let t = section_angles(p, tau)?;
    let r = w_map(p);
    let c: Vec<Q> = (0..p.n()).map(|a| &r * t[a].abs() - &p.radii()[a]).collect();
    Ok(fan.combine(&c))
}

pub fn h_map(fan: &FanData, p: &SkeletonPoint, tau: &Q) -> Result<(Vec<Q>, Q), GeometryError> {
    Ok((g_map(fan, p, tau)?, w_map(p)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LengthRoot {
    Exact { value: String },
    /// `Π(lo + c_a) < p < Π(hi + c_a)`.
    Bracket { lo: String, hi: String },
}

/// A preimage under `h`: radii `ℓ + offsets[a]` and lifted angles `tau_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inverse {
    pub offsets: Vec<Q>,
    pub tau_a: Vec<Q>,
    pub length: Result<Q, (Q, Q)>,
}

impl Inverse {
    pub fn length_root(&self) -> LengthRoot {
        match &self.length {
            Ok(v) => LengthRoot::Exact { value: format_q(v) },
            Err((lo, hi)) => LengthRoot::Bracket {
                lo: format_q(lo),
                hi: format_q(hi),
            },
        }
    }

    /// The exact preimage, when the minimal radius is rational.
    pub fn point(&self) -> Option<SkeletonPoint> {
        let l = self.length.as_ref().ok()?;
        let radii = self.offsets.iter().map(|c| l + c).collect();
        let angles = self.tau_a.iter().map(frac).collect();
        SkeletonPoint::new(radii, angles).ok()
    }
}

/// `x` with `x > lo`, smallest denominator among rationals in `(lo, hi)`; `0 ≤ lo < hi`.
fn simplest_between(lo: &Q, hi: &Q) -> Q {
    let fl = lo.floor();
    let k = &fl + Q::one();
    if &k < hi {
        return k;
    }
    // lo, hi ∈ [fl, fl+1]; recurse on reciprocals of the fractional parts.
    let a = hi - &fl;
    let b = lo - &fl;
    let inner = if b.is_zero() {
        (Q::one() / &a).floor() + Q::one()
    } else {
        simplest_between(&(Q::one() / &a), &(Q::one() / &b))
    };
    fl + Q::one() / inner
}

const BISECTIONS: usize = 64;

/// Positive root of `Π(ℓ + c_a) = p` where some `c_a = 0` and all `c_a ≥ 0`.
///
/// A floating-point estimate gives a narrow candidate bracket, which is accepted only after
/// exact sign checks at both ends (exact bisection otherwise). The simplest rational inside the
/// bracket is then tried, which recovers any rational root of small denominator.
fn solve_length(c: &[Q], p: &Q) -> Result<Q, (Q, Q)> {
    use std::cmp::Ordering;
    let f = |l: &Q| c.iter().map(|x| l + x).product::<Q>();
    let top = if p > &Q::one() { p.clone() } else { Q::one() };
    if &f(&top) == p {
        return Ok(top);
    }
    let (mut lo, mut hi) = float_bracket(c, p)
        .filter(|(lo, hi)| lo < hi && f(lo) < *p && f(hi) > *p)
        .unwrap_or_else(|| {
            let (mut lo, mut hi) = (Q::zero(), top.clone());
            let two = Q::from_integer(2.into());
            for _ in 0..BISECTIONS {
                let mid = (&lo + &hi) / &two;
                if f(&mid) < *p {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            (lo, hi)
        });
    if f(&hi) == *p {
        return Ok(hi);
    }
    let s = simplest_between(&lo, &hi);
    match f(&s).cmp(p) {
        Ordering::Equal => return Ok(s),
        Ordering::Less => lo = s,
        Ordering::Greater => hi = s,
    }
    Err((lo, hi))
}

fn float_bracket(c: &[Q], p: &Q) -> Option<(Q, Q)> {
    use crate::rational::to_f64;
    let cf: Vec<f64> = c.iter().map(to_f64).collect();
    let pf = to_f64(p);
    let f = |l: f64| cf.iter().map(|x| l + x).product::<f64>();
    let (mut lo, mut hi) = (0.0f64, pf.max(1.0));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < pf {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let eps = 1e-10 * hi.max(1.0);
    let lo = Q::from_float((lo - eps).max(0.0))?;
    let hi = Q::from_float(hi + eps)?;
    Some((lo, hi))
}

/// The shift `μ` with `Σ max(0, μ + ĝ_a) = target` for `target > 0`.
fn solve_shift(g: &[Q], target: &Q) -> Q {
    let mut s = g.to_vec();
    s.sort_by(|a, b| b.cmp(a));
    let mut acc = Q::zero();
    for k in 1..=s.len() {
        acc += &s[k - 1];
        let mu = (target - &acc) / Q::from_integer((k as i64).into());
        let top_ok = (&mu + &s[k - 1]).is_positive();
        let next_ok = k == s.len() || !(&mu + &s[k]).is_positive();
        if top_ok && next_ok {
            return mu;
        }
    }
    unreachable!("the piecewise-linear sum is increasing and unbounded")
}

/// Preimage of `(x, p)` under `h`.
pub fn invert_h(fan: &FanData, x: &[Q], p: &Q, tau: &Q) -> Result<Inverse, GeometryError> {
    check_tau(tau)?;
    if x.len() != fan.dim() {
        return Err(GeometryError::BadPoint(format!("expected {} coordinates", fan.dim())));
    }
    if p.is_negative() {
        return Err(GeometryError::BadPoint("w must be nonnegative".into()));
    }
    let n = fan.n();
    let g = fan.coefficients(x);
    let max_g = g.iter().max().cloned().expect("n ≥ 1");
    let big_t = tau.abs();
    let (mu, tau_a) = if p.is_zero() || big_t.is_zero() {
        (-&max_g, vec![Q::zero(); n])
    } else {
        let mu = solve_shift(&g, &(p * &big_t));
        let t = g
            .iter()
            .map(|ga| {
                let v = &mu + ga;
                let v = if v.is_positive() { v / p } else { Q::zero() };
                if tau.is_negative() {
                    -v
                } else {
                    v
                }
            })
            .collect();
        (mu, t)
    };
    let offsets: Vec<Q> = g
        .iter()
        .map(|ga| {
            let v = -&mu - ga;
            if v.is_positive() {
                v
            } else {
                Q::zero()
            }
        })
        .collect();
    let length = if p.is_zero() { Ok(Q::zero()) } else { solve_length(&offsets, p) };
    Ok(Inverse { offsets, tau_a, length })
}

/// Exact check that `inv` is a preimage of `(x, p)`, valid also for bracketed lengths.
fn certify(fan: &FanData, inv: &Inverse, x: &[Q], p: &Q, tau: &Q) -> Result<(), String> {
    let n = fan.n();
    // g does not see ℓ, since Σ ē_a = 0.
    let c: Vec<Q> = (0..n).map(|a| p * inv.tau_a[a].abs() - &inv.offsets[a]).collect();
    if fan.combine(&c) != x {
        return Err("g(preimage) ≠ x".into());
    }
    if !inv.offsets.iter().any(Zero::is_zero) || inv.offsets.iter().any(Signed::is_negative) {
        return Err("minimal radius is not attained".into());
    }
    for a in 0..n {
        if inv.offsets[a].is_positive() && !inv.tau_a[a].is_zero() {
            return Err(format!("τ_{} ≠ 0 off I_m", a + 1));
        }
        if inv.tau_a[a].abs() >= Q::one() || (tau.is_negative() && inv.tau_a[a].is_positive()) {
            return Err(format!("τ_{} outside the lift range", a + 1));
        }
    }
    if !p.is_zero() && inv.tau_a.iter().sum::<Q>() != *tau {
        return Err("Σ τ_a ≠ τ".into());
    }
    let f = |l: &Q| inv.offsets.iter().map(|o| l + o).product::<Q>();
    match &inv.length {
        Ok(l) if p.is_zero() => {
            if !l.is_zero() {
                return Err("w = 0 needs ℓ = 0".into());
            }
        }
        Ok(l) => {
            if !l.is_positive() || f(l) != *p {
                return Err("Π r_a ≠ w".into());
            }
        }
        Err((lo, hi)) => {
            if lo.is_negative() || !(f(lo) < *p && *p < f(hi)) {
                return Err("length bracket does not isolate a root".into());
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SectionReport {
    pub n: usize,
    pub tau: String,
    pub seed: u64,
    pub domain_samples: usize,
    pub codomain_samples: usize,
    /// Codomain samples whose minimal radius is rational and was recovered exactly.
    pub exact_lengths: usize,
    /// Codomain samples whose minimal radius was isolated in a rational bracket.
    pub bracketed_lengths: usize,
    pub pass: bool,
    pub counterexample: Option<String>,
}

fn rand_q(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Q {
    let d: i64 = rng.gen_range(1..=6);
    let k: i64 = rng.gen_range(lo * d..=hi * d);
    Q::new(k.into(), d.into())
}

fn rand_pos(rng: &mut ChaCha8Rng) -> Q {
    let d: i64 = rng.gen_range(1..=6);
    let k: i64 = rng.gen_range(1..=4 * d);
    Q::new(k.into(), d.into())
}

fn rand_subset(rng: &mut ChaCha8Rng, n: usize) -> Vec<bool> {
    loop {
        let s: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        if s.iter().any(|&b| b) {
            return s;
        }
    }
}

/// A random point of `P(τ)`.
fn sample_domain(rng: &mut ChaCha8Rng, n: usize, tau: &Q) -> SkeletonPoint {
    let s = rand_subset(rng, n);
    if rng.gen_ratio(1, 5) {
        let r = s.iter().map(|&z| if z { Q::zero() } else { rand_pos(rng) }).collect();
        return SkeletonPoint::real(r).expect("valid radii");
    }
    let l = rand_pos(rng);
    let r: Vec<Q> = s.iter().map(|&m| if m { l.clone() } else { &l + rand_pos(rng) }).collect();
    let mut t = vec![Q::zero(); n];
    if !tau.is_zero() {
        let idx: Vec<usize> = (0..n).filter(|&a| s[a]).collect();
        let mut w: Vec<Q> = idx.iter().map(|_| Q::from_integer(rng.gen_range(0..=3).into())).collect();
        if w.iter().all(Zero::is_zero) {
            w[0] = Q::one();
        }
        let total: Q = w.iter().sum();
        for (k, &a) in idx.iter().enumerate() {
            t[a] = tau * &w[k] / &total;
        }
    }
    SkeletonPoint::new(r, t.iter().map(frac).collect()).expect("valid point")
}

/// Round-trips `samples` random points of `P(τ)` through `h` and its inverse, and inverts
/// `samples` random points of `(𝔱°)* × R_{≥0}` with an exact preimage certificate.
pub fn verify_section_bijectivity(n: usize, tau: &Q, samples: usize, seed: u64) -> Result<SectionReport, GeometryError> {
    check_tau(tau)?;
    let fan = super::build_projective_fan(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SectionReport {
        n,
        tau: format_q(tau),
        seed,
        domain_samples: 0,
        codomain_samples: 0,
        exact_lengths: 0,
        bracketed_lengths: 0,
        pass: true,
        counterexample: None,
    };
    let fail = |report: &mut SectionReport, msg: String| {
        report.pass = false;
        report.counterexample = Some(msg);
    };
    for _ in 0..samples {
        let pt = sample_domain(&mut rng, n, tau);
        report.domain_samples += 1;
        let (x, p) = h_map(&fan, &pt, tau)?;
        let inv = invert_h(&fan, &x, &p, tau)?;
        match inv.point() {
            Some(back) if back == pt => {}
            other => {
                let msg = format!(
                    "domain point {:?} maps to ({:?}, {}) but inverts to {:?}",
                    pt.to_json(),
                    x.iter().map(format_q).collect::<Vec<_>>(),
                    format_q(&p),
                    other.map(|b| b.to_json())
                );
                fail(&mut report, msg);
                return Ok(report);
            }
        }
    }
    for _ in 0..samples {
        let x: Vec<Q> = (0..fan.dim()).map(|_| rand_q(&mut rng, -3, 3)).collect();
        let p = if rng.gen_ratio(1, 6) { Q::zero() } else { rand_pos(&mut rng) };
        report.codomain_samples += 1;
        let inv = invert_h(&fan, &x, &p, tau)?;
        if let Err(e) = certify(&fan, &inv, &x, &p, tau) {
            let msg = format!("codomain point ({:?}, {}): {e}", x.iter().map(format_q).collect::<Vec<_>>(), format_q(&p));
            fail(&mut report, msg);
            return Ok(report);
        }
        match inv.point() {
            Some(pt) => {
                report.exact_lengths += 1;
                if h_map(&fan, &pt, tau)? != (x.clone(), p.clone()) {
                    fail(&mut report, format!("exact preimage of {:?} does not map back", x));
                    return Ok(report);
                }
            }
            None => report.bracketed_lengths += 1,
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Simplex {
    pub vertices: Vec<Vec<String>>,
    pub dim: usize,
}

/// `Δ(τ) = {sign(τ) τ_a > 0, Σ τ_a = τ}` by its vertices `τ·e_a`; `τ = 0` gives the identity.
pub fn simplex_support(n: usize, tau: &Q) -> Result<Simplex, GeometryError> {
    if n == 0 {
        return Err(GeometryError::ZeroDimension);
    }
    if tau.is_zero() {
        return Ok(Simplex {
            vertices: vec![vec![format_q(&Q::zero()); n]],
            dim: 0,
        });
    }
    let vertices = (0..n)
        .map(|a| (0..n).map(|b| format_q(&if a == b { tau.clone() } else { Q::zero() })).collect())
        .collect();
    Ok(Simplex { vertices, dim: n - 1 })
}
