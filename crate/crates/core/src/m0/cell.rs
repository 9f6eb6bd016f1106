//! Bloch plane-wave spectrum of -∂² - 6b² sn²(bz; i) and the trace per wave period.

use crate::error::{Error, Result};
use crate::special::{jacobi_sn_imag, k_imag};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochOptions {
    /// plane waves with |j| ≤ harmonics
    pub harmonics: usize,
    /// Bloch momenta (midpoint rule over the zone)
    pub k_points: usize,
    /// potential samples per cell for its Fourier coefficients
    pub samples: usize,
}

impl Default for BlochOptions {
    fn default() -> Self {
        Self { harmonics: 24, k_points: 64, samples: 256 }
    }
}

/// Fourier coefficients V̂_m, |m| ≤ 2·harmonics, of V = -6b² sn² over its period 2K(i)/b.
fn potential_coefficients(b: f64, harmonics: usize, samples: usize) -> Vec<f64> {
    let period = 2.0 * k_imag() / b;
    let v: Vec<f64> = (0..samples)
        .map(|j| -6.0 * b * b * jacobi_sn_imag(j as f64 * period / samples as f64, b).powi(2))
        .collect();
    (0..=2 * harmonics)
        .map(|m| {
            let s: C64 = v
                .iter()
                .enumerate()
                .map(|(j, &vj)| vj * C64::from_polar(1.0, -2.0 * PI * (m * j) as f64 / samples as f64))
                .sum();
            s.re / samples as f64
        })
        .collect()
}

/// Band energies at every Bloch momentum.
pub fn bloch_bands(b: f64, opts: &BlochOptions) -> Result<Vec<(f64, Vec<f64>)>> {
    if opts.samples < 4 * opts.harmonics + 2 || opts.k_points == 0 {
        return Err(Error::Domain("need samples > 4·harmonics and k_points > 0".into()));
    }
    let period = 2.0 * k_imag() / b;
    let g0 = 2.0 * PI / period;
    let vh = potential_coefficients(b, opts.harmonics, opts.samples);
    let n = 2 * opts.harmonics + 1;
    let nh = opts.harmonics as isize;
    Ok((0..opts.k_points)
        .map(|i| {
            let k = g0 * ((i as f64 + 0.5) / opts.k_points as f64 - 0.5);
            let h = DMatrix::from_fn(n, n, |r, c| {
                let (jr, jc) = (r as isize - nh, c as isize - nh);
                let off = vh[(jr - jc).unsigned_abs()];
                if r == c {
                    (k + g0 * jr as f64).powi(2) + off
                } else {
                    off
                }
            });
            let mut e: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
            e.sort_by(f64::total_cmp);
            (k, e)
        })
        .collect())
}

/// Subtracted trace per wave period 4K(i)/b against -∂² + 2√3b², sampled at `taus`.
pub fn bloch_trace(b: f64, taus: &[f64], opts: &BlochOptions) -> Result<Vec<f64>> {
    let bands = bloch_bands(b, opts)?;
    let g0 = PI * b / k_imag();
    let top = 2.0 * 3f64.sqrt() * b * b;
    let nh = opts.harmonics as isize;
    Ok(taus
        .iter()
        .map(|&tau| {
            let per_cell: f64 = bands
                .iter()
                .map(|(k, e)| {
                    let free: f64 = (-nh..=nh).map(|j| (-((k + g0 * j as f64).powi(2) + top) * tau).exp()).sum();
                    e.iter().map(|l| (-l * tau).exp()).sum::<f64>() - free
                })
                .sum::<f64>()
                / opts.k_points as f64;
            2.0 * per_cell
        })
        .collect())
}
