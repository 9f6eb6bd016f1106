//! Numerical building blocks shared by the physics modules.

pub mod cheb;
pub mod quad;
pub mod tridiag;
