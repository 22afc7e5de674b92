use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use super::complex::LBMap;
use super::poly::{monomials, Exponents, HomogPoly, PolyMatrix};
use crate::error::LbError;
use crate::exactalg::SparseSystem;
use crate::rational::Q;

/// Finds `H^i : S^i → T^{i−1}` with `f − g = d_T H + H d_S`, by solving for the coefficients of
/// every polynomial entry. Returns `None` when no polynomial homotopy exists.
pub fn find_homotopy(f: &LBMap, g: &LBMap) -> Result<Option<BTreeMap<i64, PolyMatrix>>, LbError> {
    if f.source() != g.source() || f.target() != g.target() {
        return Err(LbError::Mismatch("homotopy between maps with different endpoints".into()));
    }
    let (s, t) = (f.source(), f.target());
    let nv = s.nvars();
    // Unknown (i, row, col, monomial) → column index.
    let mut unknowns: Vec<(i64, usize, usize, Exponents)> = Vec::new();
    let mut col_of: HashMap<(i64, usize, usize, Exponents), usize> = HashMap::new();
    for i in s.lo()..=s.hi() {
        let (src, tgt) = (s.terms(i), t.terms(i - 1));
        for (r, &b) in tgt.iter().enumerate() {
            for (c, &a) in src.iter().enumerate() {
                for e in monomials(nv, b - a) {
                    col_of.insert((i, r, c, e.clone()), unknowns.len());
                    unknowns.push((i, r, c, e));
                }
            }
        }
    }
    let mut sys = SparseSystem::new();
    for i in s.lo()..=s.hi() {
        let diff = &f.comp(i) - &g.comp(i);
        let dt = t.diff(i - 1);
        let ds = s.diff(i);
        let (src, tgt) = (s.terms(i), t.terms(i));
        for (r, &b) in tgt.iter().enumerate() {
            for (c, &a) in src.iter().enumerate() {
                // Coefficient of each monomial of degree b − a.
                let mut eqs: BTreeMap<Exponents, BTreeMap<usize, Q>> = BTreeMap::new();
                // (d_T H^i)_{r,c} = Σ_k dT[r,k] H^i[k,c]
                for k in 0..t.rank(i - 1) {
                    let p = dt.get(r, k);
                    if p.is_zero() {
                        continue;
                    }
                    let hdeg = t.terms(i - 1)[k] - a;
                    for e in monomials(nv, hdeg) {
                        let col = col_of[&(i, k, c, e.clone())];
                        for (pe, pc) in p.terms() {
                            let m: Exponents = pe.iter().zip(&e).map(|(x, y)| x + y).collect();
                            *eqs.entry(m).or_default().entry(col).or_insert_with(Q::zero) += pc;
                        }
                    }
                }
                // (H^{i+1} d_S)_{r,c} = Σ_k H^{i+1}[r,k] dS[k,c]
                for k in 0..s.rank(i + 1) {
                    let p = ds.get(k, c);
                    if p.is_zero() {
                        continue;
                    }
                    let hdeg = b - s.terms(i + 1)[k];
                    for e in monomials(nv, hdeg) {
                        let col = col_of[&(i + 1, r, k, e.clone())];
                        for (pe, pc) in p.terms() {
                            let m: Exponents = pe.iter().zip(&e).map(|(x, y)| x + y).collect();
                            *eqs.entry(m).or_default().entry(col).or_insert_with(Q::zero) += pc;
                        }
                    }
                }
                let target = diff.get(r, c);
                for e in target.terms().keys() {
                    eqs.entry(e.clone()).or_default();
                }
                for (e, row) in eqs {
                    sys.add_row(row, target.coeff(&e));
                }
            }
        }
        if !sys.is_consistent() {
            return Ok(None);
        }
    }
    let Some(x) = sys.solve(unknowns.len()) else {
        return Ok(None);
    };
    let mut h: BTreeMap<i64, PolyMatrix> = (s.lo()..=s.hi())
        .map(|i| (i, PolyMatrix::zeros(nv, t.rank(i - 1), s.rank(i))))
        .collect();
    for ((i, r, c, e), v) in unknowns.into_iter().zip(x) {
        if v.is_zero() {
            continue;
        }
        let m = h.get_mut(&i).unwrap();
        let p = m.get(r, c) + &HomogPoly::monomial(e, v);
        m.set(r, c, p);
    }
    // Check the identity exactly.
    for i in s.lo() - 1..=s.hi() + 1 {
        let hi = h.get(&i).cloned().unwrap_or_else(|| PolyMatrix::zeros(nv, t.rank(i - 1), s.rank(i)));
        let hn = h
            .get(&(i + 1))
            .cloned()
            .unwrap_or_else(|| PolyMatrix::zeros(nv, t.rank(i), s.rank(i + 1)));
        let lhs = &f.comp(i) - &g.comp(i);
        let rhs = &(&t.diff(i - 1) * &hi) + &(&hn * &s.diff(i));
        assert_eq!(lhs, rhs, "homotopy solve produced a wrong witness in degree {i}");
    }
    Ok(Some(h))
}
