//! Pure spinors, linear Dirac structures and quasi-Hamiltonian spaces.

pub mod bilinear;
pub mod dirac;
pub mod clifford;
pub mod error;
pub mod lie;
pub mod linalg;
pub mod multivector;
pub mod qham;
pub mod scalar;
pub mod spinor;
pub mod suite;

pub use error::{Error, Result};
pub use scalar::{Rational, Scalar, Tolerance};
