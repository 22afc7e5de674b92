use std::collections::BTreeMap;

use super::cech::{rgamma_with_cap, DEFAULT_E_CAP};
use super::complex::{LBComplex, LBMap};
use super::poly::HomogPoly;
use crate::error::{CechError, LbError};

/// Cohomology dimensions by degree; absent degrees are zero.
pub type ExtTable = BTreeMap<i64, usize>;

/// `c ≃ 0` iff `RΓ(c(j)) = 0` for `j = 0..=m`, since `O, O(1), …, O(m)` generate.
pub fn is_zero_object(c: &LBComplex) -> Result<bool, CechError> {
    is_zero_object_with_cap(c, DEFAULT_E_CAP)
}

pub fn is_zero_object_with_cap(c: &LBComplex, cap: u32) -> Result<bool, CechError> {
    for j in 0..=c.m() as i64 {
        if !rgamma_with_cap(c, j, cap)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_equivalence(f: &LBMap) -> Result<bool, CechError> {
    is_zero_object(&f.cone())
}

pub fn is_equivalence_with_cap(f: &LBMap, cap: u32) -> Result<bool, CechError> {
    is_zero_object_with_cap(&f.cone(), cap)
}

/// `Ext^i(f, g) = H^i RΓ(f^∨ ⊗ g)`.
pub fn rhom_dims(f: &LBComplex, g: &LBComplex) -> Result<ExtTable, LbError> {
    rhom_dims_with_cap(f, g, DEFAULT_E_CAP)
}

pub fn rhom_dims_with_cap(f: &LBComplex, g: &LBComplex, cap: u32) -> Result<ExtTable, LbError> {
    let h = f.dual().tensor(g)?;
    rgamma_with_cap(&h, 0, cap)
        .map(|r| r.dims)
        .map_err(|e| LbError::Mismatch(e.to_string()))
}

/// Koszul complex of homogeneous forms `f_1, …, f_r`, in degrees `−r..=0`.
pub fn koszul(m: usize, forms: &[HomogPoly]) -> Result<LBComplex, LbError> {
    let mut c = LBComplex::line_bundle(m, 0);
    for f in forms {
        let d = f.degree().ok_or_else(|| LbError::Mismatch("zero form in Koszul complex".into()))?;
        c = c.tensor(&LBComplex::two_term(m, -1, -d, 0, f.clone())?)?;
    }
    Ok(c)
}
