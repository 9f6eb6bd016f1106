//! Finite-difference spectra of the kink fluctuation operator and its vacuum reference.

use super::{OperatorKind, OperatorSpec};
use crate::error::{Error, Result};
use crate::numerics::tridiag::symmetric_tridiagonal_eigenvalues;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KinkSpectrum {
    /// all eigenvalues, ascending
    pub eigenvalues: Vec<f64>,
    /// eigenvalues below the continuum edge 4m²
    pub bound: Vec<f64>,
    /// lowest eigenvalue at or above 4m²
    pub continuum_lowest: f64,
    pub continuum_edge: f64,
    pub warnings: Vec<String>,
}

/// Eigenvalues of -∂² + 4m² with Dirichlet ends on the same grid, in closed form.
pub fn free_dirichlet_spectrum(spec: &OperatorSpec) -> Vec<f64> {
    let n = spec.grid_points;
    let h = spec.spacing();
    let shift = 4.0 * spec.m * spec.m;
    (1..=n)
        .map(|k| shift + 2.0 / (h * h) * (1.0 - (k as f64 * PI / (n as f64 + 1.0)).cos()))
        .collect()
}

/// Spectrum of the three-point discretization with Dirichlet ends.
pub fn kink_fluctuation_spectrum(spec: &OperatorSpec) -> Result<KinkSpectrum> {
    spec.check()?;
    let eigenvalues = match spec.kind {
        OperatorKind::Free => free_dirichlet_spectrum(spec),
        OperatorKind::KinkSech2 => {
            let h = spec.spacing();
            let diag: Vec<f64> = spec.nodes().iter().map(|&z| 2.0 / (h * h) + spec.potential(z)).collect();
            let off = vec![-1.0 / (h * h); spec.grid_points - 1];
            symmetric_tridiagonal_eigenvalues(&diag, &off)?
        }
        OperatorKind::EllipticSn2 => {
            return Err(Error::Domain(
                "the elliptic operator is periodic; use the m0 module's cell spectrum".into(),
            ))
        }
    };
    let edge = 4.0 * spec.m * spec.m;
    let bound: Vec<f64> = eigenvalues.iter().copied().filter(|&l| l < edge).collect();
    let continuum_lowest = eigenvalues.iter().copied().find(|&l| l >= edge).unwrap_or(f64::NAN);
    let mut warnings = Vec::new();
    let dev = (continuum_lowest / edge - 1.0).abs();
    if !(dev <= 0.02) {
        warnings.push(format!(
            "domain too small: lowest continuum eigenvalue {continuum_lowest} is {:.2}% from 4m² = {edge}",
            100.0 * dev
        ));
    }
    Ok(KinkSpectrum { eigenvalues, bound, continuum_lowest, continuum_edge: edge, warnings })
}
