//! Exact rational linear algebra and bounded cochain complexes.

mod complex;
mod matrix;
mod sparse;

pub use complex::{hom_complex, Cohomology, ComplexJson, ComplexMap, HomLayout, RationalChainComplex};
pub use matrix::{MatrixJson, RankKernelImage, RatMatrix};
pub use sparse::SparseSystem;
