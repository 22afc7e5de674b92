//! Exact computations around the hyperplane spherical functor on projective space,
//! its perverse-schober shadows, and the toric skeleton combinatorics.

pub mod cellccc;
pub mod cli;
pub mod cohp;
pub mod error;
pub mod lbcx;
pub mod exactalg;
pub mod fanskeleton;
pub mod hyper;
pub mod rational;
pub mod schober;
