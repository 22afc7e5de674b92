//! Bounded complexes of sums of line bundles on projective space as a model of its derived
//! category: hypercohomology, RHom, zero-object and equivalence tests.

mod cech;
mod complex;
mod derived;
mod homotopy;
mod poly;

pub use cech::{
    dense_total_complex, reduce, rgamma, rgamma_model, rgamma_with_cap, Block, CechModel, Op, OpKind, RGamma,
    DEFAULT_E_CAP,
};
pub use derived::{
    is_equivalence, is_equivalence_with_cap, is_zero_object, is_zero_object_with_cap, koszul, rhom_dims,
    rhom_dims_with_cap, ExtTable,
};
pub use complex::{LBComplex, LBComplexJson, LBMap, LBMapJson, TensorLayout};
pub use homotopy::find_homotopy;
pub use poly::{monomials, Exponents, HomogPoly, PolyJson, PolyMatrix};
