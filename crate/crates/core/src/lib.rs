//! Anisotropic Heisenberg chain, its φ⁴ continuum limit, kink and elliptic solutions,
//! and one-loop energy corrections from zeta-regularized heat-kernel traces.

pub mod error;
pub mod m0;
pub mod numerics;
pub mod phi4;
pub mod semiclassics;
pub mod special;
pub mod spin_chain;

pub mod cli;
pub mod config;
pub mod ledger;

pub use error::{Error, Result};
