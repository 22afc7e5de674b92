//! Cohomology of line bundles on projective space with explicit monomial bases.
//!
//! `H^0(P^m, O(d))` is spanned by monomials with nonnegative exponents summing to `d`,
//! `H^m(P^m, O(d))` by Laurent monomials with all exponents `≤ −1` summing to `d`.
//! Everything else vanishes.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::exactalg::RatMatrix;
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LaurentMonomial(pub Vec<i64>);

impl LaurentMonomial {
    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &LaurentMonomial) -> LaurentMonomial {
        LaurentMonomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineBundleCohBasis {
    pub m: usize,
    pub d: i64,
    pub i: usize,
    pub basis: Vec<LaurentMonomial>,
}

pub fn binomial(n: i64, k: i64) -> u128 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for j in 0..k {
        r = r * (n - j) as u128 / (j + 1) as u128;
    }
    r
}

pub fn h_dim(m: usize, i: usize, d: i64) -> usize {
    let mi = m as i64;
    if m == 0 {
        // P^0 is a point; H^0 and H^m are the same group.
        return usize::from(i == 0);
    }
    if i == 0 {
        binomial(d + mi, mi) as usize
    } else if i == m {
        binomial(-d - 1, mi) as usize
    } else {
        0
    }
}

/// Euler characteristic `χ(P^m, O(d))`, the Hilbert polynomial `C(d+m, m)` as a polynomial in `d`.
pub fn euler_char(m: usize, d: i64) -> i64 {
    // C(d+m, m) = (d+1)(d+2)...(d+m)/m! holds for all integers d.
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for j in 1..=m as i128 {
        num *= d as i128 + j;
        den *= j;
    }
    (num / den) as i64
}

/// All vectors of length `len` with entries `≥ min` summing to `total`, in descending lex order.
fn compositions(len: usize, min: i64, total: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(len: usize, min: i64, rem: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() + 1 == len {
            if rem >= min {
                cur.push(rem);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let slots = (len - cur.len() - 1) as i64;
        let max = rem - slots * min;
        let mut v = max;
        while v >= min {
            cur.push(v);
            rec(len, min, rem - v, cur, out);
            cur.pop();
            v -= 1;
        }
    }
    if len == 0 {
        if total == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(len, min, total, &mut cur, &mut out);
    out
}

pub fn h_basis(m: usize, i: usize, d: i64) -> LineBundleCohBasis {
    let basis = if m == 0 {
        if i == 0 {
            vec![LaurentMonomial(vec![d])]
        } else {
            vec![]
        }
    } else if i == 0 {
        compositions(m + 1, 0, d).into_iter().map(LaurentMonomial).collect()
    } else if i == m {
        top_basis(m, d)
    } else {
        vec![]
    };
    LineBundleCohBasis { m, d, i, basis }
}

fn top_basis(m: usize, d: i64) -> Vec<LaurentMonomial> {
    // Substitute e = −1 − f with f ≥ 0 summing to −d − m − 1.
    compositions(m + 1, 0, -d - m as i64 - 1)
        .into_iter()
        .rev()
        .map(|f| LaurentMonomial(f.into_iter().map(|x| -1 - x).collect()))
        .collect()
}

/// A cohomology class as a linear combination of basis monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohClass {
    pub m: usize,
    pub i: usize,
    pub d: i64,
    pub coeffs: BTreeMap<LaurentMonomial, Q>,
}

impl CohClass {
    pub fn monomial(m: usize, i: usize, exps: Vec<i64>, c: Q) -> Self {
        let d = exps.iter().sum();
        CohClass {
            m,
            i,
            d,
            coeffs: [(LaurentMonomial(exps), c)].into(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(Zero::is_zero)
    }
}

/// Product of a global section `a ∈ H^0(O(d₁))` with `b ∈ H^i(O(d₂))`.
///
/// In top degree a product monomial with some nonnegative exponent is a coboundary and is dropped.
pub fn cup_product(a: &CohClass, b: &CohClass) -> CohClass {
    assert_eq!(a.i, 0, "left factor must be a global section");
    assert_eq!(a.m, b.m);
    let top = b.m > 0 && b.i == b.m;
    let mut coeffs: BTreeMap<LaurentMonomial, Q> = BTreeMap::new();
    for (ma, ca) in &a.coeffs {
        for (mb, cb) in &b.coeffs {
            let p = ma.mul(mb);
            if top && p.0.iter().any(|&e| e >= 0) {
                continue;
            }
            *coeffs.entry(p).or_insert_with(Q::zero) += ca * cb;
        }
    }
    coeffs.retain(|_, c| !c.is_zero());
    CohClass {
        m: b.m,
        i: b.i,
        d: a.d + b.d,
        coeffs,
    }
}

/// Pairing `H^0(O(d)) × H^m(O(−d−m−1)) → H^m(O(−m−1)) ≅ Q` in the monomial bases.
pub fn serre_pair(m: usize, d: i64) -> RatMatrix {
    let left = h_basis(m, 0, d).basis;
    let right = h_basis(m, m, -d - m as i64 - 1).basis;
    let generator = LaurentMonomial(vec![-1; m + 1]);
    let mut mat = RatMatrix::zeros(left.len(), right.len());
    for (r, a) in left.iter().enumerate() {
        for (c, b) in right.iter().enumerate() {
            if m == 0 || a.mul(b) == generator {
                mat.set(r, c, Q::from_integer(1.into()));
            }
        }
    }
    mat
}

#[derive(Clone, Debug, Serialize)]
pub struct CohRow {
    pub d: i64,
    pub dims: Vec<usize>,
}

pub fn table(m: usize, dmin: i64, dmax: i64) -> Vec<CohRow> {
    (dmin..=dmax)
        .map(|d| CohRow {
            d,
            dims: (0..=m).map(|i| h_dim(m, i, d)).collect(),
        })
        .collect()
}
