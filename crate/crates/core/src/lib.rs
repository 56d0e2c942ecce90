//! Quantum skein algebras of marked surfaces and quantum cluster algebras.

#![allow(clippy::needless_range_loop)]

pub mod annulus;
pub mod disc;
pub mod exec;
pub mod qcoeff;
pub mod qseed;
pub mod qtorus;
pub mod surface;
pub mod verify;

pub use exec::Execution;
pub use qcoeff::{QCoeff, QCoeffError};
pub use qtorus::{ExpVec, SkewForm, TorusElement, TorusError};
