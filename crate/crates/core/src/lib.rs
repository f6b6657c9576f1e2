//! Momentum maps on universal covers, Hamiltonian holonomy, and
//! cylinder-valued momentum maps for left actions of tori and the Heisenberg
//! family on magnetic cotangent bundles `T*G`.
//!
//! The crate is `no_std` (with `alloc`). Lattice facts are computed exactly in
//! `ℚ(√r)` and `ℤ`; path integrals use Gauss–Legendre quadrature on
//! piecewise-exponential paths.
#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod closure;
pub mod cylinder;
pub mod error;
pub mod exact;
pub mod intmat;
pub mod lattice;
pub mod lie;
pub mod linalg;
pub mod momentum;
pub mod quadrature;
pub mod scalar;
pub mod scenario;
pub mod symplectic;

pub use error::{Error, Result};
