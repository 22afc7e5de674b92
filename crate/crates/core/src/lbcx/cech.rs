//! Hypercohomology of line-bundle complexes through the exponent-floor Čech model.
//!
//! For a summand `O(t)` on `P^{N−1}` and a nonempty chart set `K`, the truncated Čech module is
//! spanned by Laurent monomials `x^α` of degree `t` with `α_a ≥ 0` off `K` and `α_a ≥ −E` on `K`.
//! Polynomial multiplication and Čech inclusions never lower exponents, so the truncation is a
//! subcomplex, and it splits by multidegree `α` under the Čech differential. Each `α`-piece is the
//! simplicial cochain complex of the interval `[neg(α), [N]]` of chart sets, which is contractible
//! unless `neg(α)` is empty (one class in Čech degree 0) or everything (one class in Čech degree
//! `N−1`). [`reduce`] transfers the polynomial differential to these classes with the explicit
//! contraction and the perturbation series, which is finite because each correction step raises
//! the complex degree. [`dense_total_complex`] assembles the same truncated complex literally and
//! serves as the cross-check.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::complex::LBComplex;
use super::poly::HomogPoly;
use crate::cohp::euler_char;
use crate::error::CechError;
use crate::exactalg::{RatMatrix, RationalChainComplex};
use crate::rational::Q;

/// Default cap on the exponent floor.
pub const DEFAULT_E_CAP: u32 = 64;

/// One line bundle `O(twist)` on space `space`, sitting in complex degree `hdeg`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub space: usize,
    pub twist: i64,
    pub hdeg: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpKind {
    /// Multiplication by a polynomial on the block's own space.
    Mul(HomogPoly),
    /// Restriction to the hyperplane chart system obtained by substituting
    /// `x_elim = Σ sub[a] x_a` (the coordinate `elim` is dropped), then multiplication by a
    /// polynomial in the remaining variables.
    RestrictMul {
        elim: usize,
        sub: Vec<Q>,
        poly: HomogPoly,
    },
}

/// Component of the total differential from block `from` (degree `k`) to block `to` (degree `k+1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Op {
    pub from: usize,
    pub to: usize,
    pub kind: OpKind,
}

/// A complex of line bundles possibly spread over several projective spaces.
///
/// `spaces[s]` is the number of homogeneous coordinates of space `s`; a value of 0 stands for the
/// empty space and its blocks contribute nothing.
#[derive(Clone, Debug, Default)]
pub struct CechModel {
    pub spaces: Vec<usize>,
    pub blocks: Vec<Block>,
    pub ops: Vec<Op>,
}

impl CechModel {
    /// The single-space model of `c(j)`.
    pub fn from_lb(c: &LBComplex, j: i64) -> Self {
        let mut model = CechModel {
            spaces: vec![c.nvars()],
            ..Default::default()
        };
        model.push_lb(0, c, j, 0);
        model
    }

    /// Appends the summands of `c(j)` on `space` with complex degree shifted by `offset`, and
    /// returns the block index of each `(degree, summand)`.
    pub fn push_lb(&mut self, space: usize, c: &LBComplex, j: i64, offset: i64) -> BTreeMap<(i64, usize), usize> {
        let mut index = BTreeMap::new();
        for i in c.lo()..=c.hi() {
            for (a, &t) in c.terms(i).iter().enumerate() {
                index.insert((i, a), self.blocks.len());
                self.blocks.push(Block {
                    space,
                    twist: t + j,
                    hdeg: i + offset,
                });
            }
        }
        for i in c.lo()..c.hi() {
            let d = c.diff(i);
            for r in 0..d.rows() {
                for col in 0..d.cols() {
                    let p = d.get(r, col);
                    if !p.is_zero() {
                        self.ops.push(Op {
                            from: index[&(i, col)],
                            to: index[&(i + 1, r)],
                            kind: OpKind::Mul(p.clone()),
                        });
                    }
                }
            }
        }
        index
    }

    fn nvars(&self, b: usize) -> usize {
        self.spaces[self.blocks[b].space]
    }

    fn live(&self, b: usize) -> bool {
        self.nvars(b) > 0
    }

    /// Exponent floor beyond which the truncation captures every top-degree class.
    pub fn floor_bound(&self) -> u32 {
        (0..self.blocks.len())
            .filter(|&b| self.live(b))
            .map(|b| -(self.blocks[b].twist) - (self.nvars(b) as i64 - 1))
            .max()
            .unwrap_or(0)
            .max(0) as u32
    }

    /// `Σ (−1)^{hdeg} χ(O(twist))` over all live blocks.
    pub fn euler(&self) -> i64 {
        (0..self.blocks.len())
            .filter(|&b| self.live(b))
            .map(|b| {
                let blk = &self.blocks[b];
                let chi = euler_char(self.nvars(b) - 1, blk.twist);
                if blk.hdeg.rem_euclid(2) == 0 {
                    chi
                } else {
                    -chi
                }
            })
            .sum()
    }

    fn initial_floor(&self) -> u32 {
        let live: Vec<&Block> = (0..self.blocks.len())
            .filter(|&b| self.live(b))
            .map(|b| &self.blocks[b])
            .collect();
        if live.is_empty() {
            return 1;
        }
        let tmin = live.iter().map(|b| b.twist).min().unwrap();
        let tmax = live.iter().map(|b| b.twist).max().unwrap();
        let hmin = live.iter().map(|b| b.hdeg).min().unwrap();
        let hmax = live.iter().map(|b| b.hdeg).max().unwrap();
        (tmax - tmin + hmax - hmin + 1).max(1) as u32
    }
}

type Key = (u32, u32, Vec<i64>);
type Cochain = HashMap<Key, Q>;

fn add_to(c: &mut Cochain, k: Key, v: Q) {
    if v.is_zero() {
        return;
    }
    match c.entry(k) {
        std::collections::hash_map::Entry::Occupied(mut e) => {
            *e.get_mut() += v;
            if e.get().is_zero() {
                e.remove();
            }
        }
        std::collections::hash_map::Entry::Vacant(e) => {
            e.insert(v);
        }
    }
}

fn parity(k: i64) -> bool {
    k.rem_euclid(2) == 1
}

/// Precomputed data for applying the model's differentials to cochains.
struct Engine<'a> {
    model: &'a CechModel,
    ops_from: Vec<Vec<usize>>,
    /// `restrict_powers[op][k]` = `(Σ sub_a x_a)^k` in the target variables.
    restrict_powers: HashMap<usize, Vec<HomogPoly>>,
}

impl<'a> Engine<'a> {
    fn new(model: &'a CechModel) -> Self {
        let mut ops_from = vec![Vec::new(); model.blocks.len()];
        let mut restrict_powers = HashMap::new();
        for (i, op) in model.ops.iter().enumerate() {
            if !model.live(op.from) || !model.live(op.to) {
                continue;
            }
            ops_from[op.from].push(i);
            if let OpKind::RestrictMul { elim, sub, .. } = &op.kind {
                let coeffs: Vec<Q> = sub
                    .iter()
                    .enumerate()
                    .filter(|&(a, _)| a != *elim)
                    .map(|(_, c)| c.clone())
                    .collect();
                restrict_powers.insert(i, vec![HomogPoly::one(coeffs.len()), HomogPoly::linear(&coeffs)]);
            }
        }
        Engine {
            model,
            ops_from,
            restrict_powers,
        }
    }

    fn lin_power(&mut self, op: usize, k: usize) -> HomogPoly {
        let v = self.restrict_powers.get_mut(&op).expect("restriction op");
        while v.len() <= k {
            let next = &v[v.len() - 1] * &v[1];
            v.push(next);
        }
        v[k].clone()
    }

    /// Polynomial part of the total differential.
    fn delta(&mut self, z: &Cochain) -> Cochain {
        let mut out = Cochain::new();
        for ((b, k, alpha), c) in z {
            for oi in self.ops_from[*b as usize].clone() {
                let op = &self.model.ops[oi];
                let to = op.to as u32;
                match &op.kind {
                    OpKind::Mul(p) => {
                        for (beta, pc) in p.terms() {
                            let a2: Vec<i64> = alpha.iter().zip(beta).map(|(x, &y)| x + y as i64).collect();
                            add_to(&mut out, (to, *k, a2), c * pc);
                        }
                    }
                    OpKind::RestrictMul { elim, poly, .. } => {
                        let e = *elim;
                        if k & (1 << e) != 0 {
                            continue;
                        }
                        let ae = alpha[e];
                        debug_assert!(ae >= 0);
                        let low = (1u32 << e) - 1;
                        let k2 = (k & low) | ((k >> 1) & !low);
                        let rest: Vec<i64> = alpha
                            .iter()
                            .enumerate()
                            .filter(|&(a, _)| a != e)
                            .map(|(_, &x)| x)
                            .collect();
                        let lp = self.lin_power(oi, ae as usize);
                        let prod = &lp * poly;
                        for (beta, pc) in prod.terms() {
                            let a2: Vec<i64> = rest.iter().zip(beta).map(|(x, &y)| x + y as i64).collect();
                            add_to(&mut out, (to, k2, a2), c * pc);
                        }
                    }
                }
            }
        }
        out
    }

    /// Contracting homotopy of the Čech part, including the `(−1)^{hdeg}` twist.
    fn h(&self, z: &Cochain) -> Cochain {
        let mut out = Cochain::new();
        for ((b, k, alpha), c) in z {
            let n = alpha.len();
            let Some(v) = (0..n).find(|&a| alpha[a] >= 0) else {
                continue;
            };
            if k & (1 << v) == 0 || *k == (1 << v) {
                continue;
            }
            let pos = (k & ((1u32 << v) - 1)).count_ones() as i64;
            let hdeg = self.model.blocks[*b as usize].hdeg;
            let neg = parity(pos) ^ parity(hdeg);
            let val = if neg { -c.clone() } else { c.clone() };
            add_to(&mut out, (*b, k & !(1 << v), alpha.clone()), val);
        }
        out
    }
}

/// Basis of the reduced complex: `(block, α, top)`.
#[derive(Clone, Debug)]
struct Reduced {
    lo: i64,
    /// Per degree, the basis elements.
    basis: Vec<Vec<(usize, Vec<i64>, bool)>>,
    index: HashMap<(usize, Vec<i64>, bool), (i64, usize)>,
}

fn nonneg_vectors(n: usize, total: i64) -> Vec<Vec<i64>> {
    super::poly::monomials(n, total)
        .into_iter()
        .map(|e| e.into_iter().map(i64::from).collect())
        .collect()
}

/// Vectors with entries in `[−E, −1]` summing to `total`.
fn negative_vectors(n: usize, total: i64, floor: u32) -> Vec<Vec<i64>> {
    // Write α_a = −1 − f_a with 0 ≤ f_a ≤ E − 1.
    let s = -total - n as i64;
    if s < 0 {
        return vec![];
    }
    nonneg_vectors(n, s)
        .into_iter()
        .filter(|f| f.iter().all(|&x| x < floor as i64))
        .map(|f| f.into_iter().map(|x| -1 - x).collect())
        .collect()
}

fn reduced_basis(model: &CechModel, floor: u32) -> Reduced {
    let mut elems: Vec<(i64, usize, Vec<i64>, bool)> = Vec::new();
    for (b, blk) in model.blocks.iter().enumerate() {
        let n = model.nvars(b);
        if n == 0 {
            continue;
        }
        if n == 1 {
            // P^0: one chart; the single monomial is a class in Čech degree 0.
            if blk.twist >= -(floor as i64) {
                elems.push((blk.hdeg, b, vec![blk.twist], blk.twist < 0));
            }
            continue;
        }
        for a in nonneg_vectors(n, blk.twist) {
            elems.push((blk.hdeg, b, a, false));
        }
        for a in negative_vectors(n, blk.twist, floor) {
            elems.push((blk.hdeg + n as i64 - 1, b, a, true));
        }
    }
    let lo = elems.iter().map(|e| e.0).min().unwrap_or(0);
    let hi = elems.iter().map(|e| e.0).max().unwrap_or(0);
    let mut basis = vec![Vec::new(); (hi - lo + 1) as usize];
    let mut index = HashMap::new();
    for (deg, b, a, top) in elems {
        let slot = &mut basis[(deg - lo) as usize];
        index.insert((b, a.clone(), top), (deg, slot.len()));
        slot.push((b, a, top));
    }
    Reduced { lo, basis, index }
}

fn include(model: &CechModel, b: usize, alpha: &[i64], top: bool) -> Cochain {
    let n = model.nvars(b);
    let mut z = Cochain::new();
    if top || n == 1 {
        z.insert((b as u32, (1u32 << n) - 1, alpha.to_vec()), Q::one());
    } else {
        for a in 0..n {
            z.insert((b as u32, 1 << a, alpha.to_vec()), Q::one());
        }
    }
    z
}

fn project(model: &CechModel, red: &Reduced, z: &Cochain, out_deg: i64) -> Vec<(usize, Q)> {
    let mut v = Vec::new();
    for ((b, k, alpha), c) in z {
        let n = model.nvars(*b as usize);
        let full = (1u32 << n) - 1;
        let key = if alpha.iter().all(|&x| x >= 0) && *k == 1 {
            (*b as usize, alpha.clone(), n == 1 && alpha[0] < 0)
        } else if alpha.iter().all(|&x| x < 0) && *k == full {
            (*b as usize, alpha.clone(), true)
        } else {
            continue;
        };
        if let Some(&(deg, idx)) = red.index.get(&key) {
            debug_assert_eq!(deg, out_deg);
            v.push((idx, c.clone()));
        }
    }
    v
}

/// The perturbed differential on Čech classes for a fixed exponent floor.
pub fn reduce(model: &CechModel, floor: u32) -> RationalChainComplex {
    let red = reduced_basis(model, floor);
    let mut engine = Engine::new(model);
    let ndeg = red.basis.len();
    let mut diffs = Vec::new();
    for k in 0..ndeg.saturating_sub(1) {
        let deg = red.lo + k as i64;
        let (src, tgt) = (&red.basis[k], &red.basis[k + 1]);
        let mut m = RatMatrix::zeros(tgt.len(), src.len());
        for (col, (b, alpha, top)) in src.iter().enumerate() {
            let mut y = include(model, *b, alpha, *top);
            loop {
                let z = engine.delta(&y);
                if z.is_empty() {
                    break;
                }
                for (row, c) in project(model, &red, &z, deg + 1) {
                    m.add_at(row, col, &c);
                }
                y = engine.h(&z);
                for v in y.values_mut() {
                    *v = -v.clone();
                }
                if y.is_empty() {
                    break;
                }
            }
        }
        diffs.push(m);
    }
    let dims = red.basis.iter().map(Vec::len).collect();
    RationalChainComplex::new(red.lo, dims, diffs).expect("reduced Čech differential squares to zero")
}

/// Literal truncated Čech total complex, used to cross-check [`reduce`].
pub fn dense_total_complex(model: &CechModel, floor: u32) -> RationalChainComplex {
    let e = floor as i64;
    let mut cells: Vec<(i64, usize, u32, Vec<i64>)> = Vec::new();
    for (b, blk) in model.blocks.iter().enumerate() {
        let n = model.nvars(b);
        if n == 0 {
            continue;
        }
        for k in 1u32..(1 << n) {
            // Shift chart exponents by E to enumerate nonnegative vectors.
            let inside = k.count_ones() as i64;
            for v in nonneg_vectors(n, blk.twist + e * inside) {
                let alpha: Vec<i64> = v
                    .iter()
                    .enumerate()
                    .map(|(a, &x)| if k & (1 << a) != 0 { x - e } else { x })
                    .collect();
                cells.push((blk.hdeg + inside - 1, b, k, alpha));
            }
        }
    }
    let lo = cells.iter().map(|c| c.0).min().unwrap_or(0);
    let hi = cells.iter().map(|c| c.0).max().unwrap_or(0);
    let mut basis: Vec<Vec<Key>> = vec![Vec::new(); (hi - lo + 1) as usize];
    let mut index: HashMap<Key, usize> = HashMap::new();
    for (deg, b, k, alpha) in cells {
        let slot = &mut basis[(deg - lo) as usize];
        index.insert((b as u32, k, alpha.clone()), slot.len());
        slot.push((b as u32, k, alpha));
    }
    let mut engine = Engine::new(model);
    let mut diffs = Vec::new();
    for d in 0..basis.len().saturating_sub(1) {
        let (src, tgt) = (&basis[d], &basis[d + 1]);
        let mut m = RatMatrix::zeros(tgt.len(), src.len());
        for (col, key) in src.iter().enumerate() {
            let mut z: Cochain = [(key.clone(), Q::one())].into();
            z = engine.delta(&z);
            // Čech part with the (−1)^{hdeg} sign.
            let (b, k, alpha) = key;
            let n = model.nvars(*b as usize);
            let hdeg = model.blocks[*b as usize].hdeg;
            for j in 0..n {
                if k & (1 << j) != 0 {
                    continue;
                }
                let pos = (k & ((1u32 << j) - 1)).count_ones() as i64;
                let neg = parity(pos) ^ parity(hdeg);
                add_to(
                    &mut z,
                    (*b, k | (1 << j), alpha.clone()),
                    if neg { -Q::one() } else { Q::one() },
                );
            }
            for (key2, c) in z {
                let row = index[&key2];
                m.add_at(row, col, &c);
            }
        }
        diffs.push(m);
    }
    let dims = basis.iter().map(Vec::len).collect();
    RationalChainComplex::new(lo, dims, diffs).expect("Čech total complex squares to zero")
}

/// Hypercohomology together with its stabilisation certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RGamma {
    /// Nonzero cohomology dimensions by degree.
    pub dims: BTreeMap<i64, usize>,
    /// Exponent floor at which the result was accepted.
    pub floor: u32,
    /// Floors tried, in order.
    pub history: Vec<u32>,
    pub euler: i64,
    pub complex: RationalChainComplex,
}

impl RGamma {
    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }
}

/// Hypercohomology of a Čech model with adaptive floor: start at the twist spread plus length and
/// double. A floor is accepted once it reaches the level past which no top-degree class can be
/// missing, the Euler certificate holds, and the result agrees with the next floor tried (the
/// doubled one, or `E + 1` when doubling would pass the cap).
pub fn rgamma_model(model: &CechModel, cap: u32) -> Result<RGamma, CechError> {
    let expected = model.euler();
    let bound = model.floor_bound();
    let mut floor = model.initial_floor().min(cap.max(1));
    let mut history = Vec::new();
    let mut euler_ok;
    let mut candidate: Option<(u32, RationalChainComplex, BTreeMap<i64, usize>)> = None;
    let eval = |e: u32, history: &mut Vec<u32>| {
        history.push(e);
        let complex = reduce(model, e);
        let dims = complex.cohomology_dims();
        (complex, dims)
    };
    loop {
        let (complex, dims) = eval(floor, &mut history);
        if let Some((e0, c0, d0)) = candidate.take() {
            if d0 == dims {
                return Ok(RGamma {
                    euler: expected,
                    dims: d0,
                    floor: e0,
                    history,
                    complex: c0,
                });
            }
        }
        let chi: i64 = dims
            .iter()
            .map(|(&i, &d)| if i.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) })
            .sum();
        euler_ok = chi == expected;
        let qualifies = euler_ok && floor >= bound;
        let next = if floor >= cap {
            if qualifies {
                floor + 1
            } else {
                break;
            }
        } else {
            (floor * 2).min(cap)
        };
        if floor > cap {
            break;
        }
        if qualifies {
            candidate = Some((floor, complex, dims));
        }
        floor = next;
    }
    Err(CechError::NoStabilization {
        cap,
        history,
        euler_ok,
    })
}

/// `RΓ(P^m, c(j))`.
pub fn rgamma(c: &LBComplex, j: i64) -> Result<RGamma, CechError> {
    rgamma_with_cap(c, j, DEFAULT_E_CAP)
}

pub fn rgamma_with_cap(c: &LBComplex, j: i64, cap: u32) -> Result<RGamma, CechError> {
    rgamma_model(&CechModel::from_lb(c, j), cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohp::h_dim;
    use crate::lbcx::PolyMatrix;
    use crate::rational::q;

    fn dims(c: &LBComplex) -> BTreeMap<i64, usize> {
        rgamma(c, 0).unwrap().dims
    }

    #[test]
    fn line_bundles_on_p1() {
        assert_eq!(dims(&LBComplex::line_bundle(1, 0)), [(0, 1)].into());
        assert_eq!(dims(&LBComplex::line_bundle(1, -2)), [(1, 1)].into());
        assert!(dims(&LBComplex::line_bundle(1, -1)).is_empty());
    }

    #[test]
    fn line_bundles_match_cohp() {
        for m in 0..=3usize {
            for d in -7..=5 {
                let r = dims(&LBComplex::line_bundle(m, d));
                for i in 0..=m {
                    assert_eq!(r.get(&(i as i64)).copied().unwrap_or(0), h_dim(m, i, d), "m={m} d={d} i={i}");
                }
            }
        }
    }

    #[test]
    fn koszul_on_p1_is_acyclic() {
        let x0 = HomogPoly::var(2, 0);
        let x1 = HomogPoly::var(2, 1);
        let c = LBComplex::new(
            1,
            -2,
            vec![vec![-2], vec![-1, -1], vec![0]],
            vec![
                PolyMatrix::from_rows(2, vec![vec![-&x1], vec![x0.clone()]]),
                PolyMatrix::from_rows(2, vec![vec![x0, x1]]),
            ],
        )
        .unwrap();
        assert!(dims(&c).is_empty());
    }

    #[test]
    fn reduction_matches_dense_complex() {
        let x0 = HomogPoly::var(3, 0);
        let x1 = HomogPoly::var(3, 1);
        let x2 = HomogPoly::var(3, 2);
        let q2 = &(&x0 * &x0) + &(&x1 * &x2);
        let c = LBComplex::two_term(2, 0, -4, -2, q2).unwrap();
        for floor in 1..=3 {
            let m = CechModel::from_lb(&c, 0);
            let red = reduce(&m, floor).cohomology_dims();
            let dense = dense_total_complex(&m, floor).cohomology_dims();
            assert_eq!(red, dense, "floor {floor}");
        }
    }

    #[test]
    fn restriction_model_matches_dense() {
        // O_X(1) on P^2 restricted to the line x2 = -(x0 + x1), then the cone of restriction.
        let sub = vec![q(-1), q(-1), q(0)];
        let model = CechModel {
            spaces: vec![3, 2],
            blocks: vec![
                Block { space: 0, twist: -1, hdeg: 0 },
                Block { space: 1, twist: 0, hdeg: 1 },
            ],
            ops: vec![Op {
                from: 0,
                to: 1,
                kind: OpKind::RestrictMul {
                    elim: 2,
                    sub,
                    poly: HomogPoly::var(2, 0),
                },
            }],
        };
        for floor in 1..=3 {
            assert_eq!(
                reduce(&model, floor).cohomology_dims(),
                dense_total_complex(&model, floor).cohomology_dims()
            );
        }
    }

    #[test]
    fn stabilisation_reports_cap() {
        let c = LBComplex::line_bundle(1, -40);
        let err = rgamma_with_cap(&c, 0, 8).unwrap_err();
        assert!(matches!(err, CechError::NoStabilization { cap: 8, .. }));
        assert_eq!(rgamma(&c, 0).unwrap().dims, [(1, 39)].into());
    }
}
