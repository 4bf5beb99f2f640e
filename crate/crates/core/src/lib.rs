//! Incremental lattice algorithms over exact rationals: basis construction
//! from generators, successive minima and orthogonal decomposition into
//! indecomposable summands.

pub mod decompose;
pub mod enumerate;
pub mod error;
pub mod hnf;
pub mod incremental;
pub mod instances;
pub mod linalg;
pub mod minima;
pub mod reduction;

pub use error::{LatticeError, Result};
pub use linalg::{GeneratingSet, LatticeBasis, LatticeVector, Scalar};
