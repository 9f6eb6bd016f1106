//! One-loop energy corrections: fluctuation spectra, subtracted heat traces,
//! zeta continuation, and the closed-form corrections with their diagnostics.

pub mod closed_form;
pub mod spectrum;
pub mod trace;
pub mod zeta;

pub use closed_form::{
    correction_ratio_d3, delta_e_closed_form, delta_e_numeric, delta_e_physical, fit_limit_exponent,
    mass_scale_choice, MassScale, NumericCorrection, RatioD3, TraceSource,
};
pub use spectrum::{free_dirichlet_spectrum, kink_fluctuation_spectrum, KinkSpectrum};
pub use trace::{
    exact_kink_trace, factorized_trace, free_factor_gamma2, free_factor_gamma3, heat_trace_spectral,
    refined_kink_trace, HeatTrace, SpectralTrace,
};
pub use zeta::{zeta_prime_at_zero, Ladder, ZetaOptions, ZetaResult};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Scales of the quantization: Feynman time T, mass scale r, transverse extent l, dimension d.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantizationParams {
    pub t: f64,
    pub r: f64,
    pub l: f64,
    pub d: u32,
    pub hbar: f64,
}

impl QuantizationParams {
    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.d) {
            return Err(Error::Domain(format!("d = {} must be 1, 2 or 3", self.d)));
        }
        if self.d > 1 && !(self.l > 0.0) {
            return Err(Error::Domain(format!("l = {} must be positive for d > 1", self.l)));
        }
        if !(self.r > 0.0 && self.t > 0.0 && self.hbar > 0.0) {
            return Err(Error::Domain(format!(
                "need r, T, hbar > 0 (got r={}, T={}, hbar={})",
                self.r, self.t, self.hbar
            )));
        }
        Ok(())
    }

    /// |A| = T J / (2π ħ r²); A itself is this times i.
    pub fn a_mag(&self, j: f64) -> f64 {
        self.t * j / (2.0 * std::f64::consts::PI * self.hbar * self.r * self.r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    /// -∂² + 4m² - 6m² sech²(m z)
    KinkSech2,
    /// -∂² - 6b² sn²(b z; i)
    EllipticSn2,
    /// -∂² + 4m²
    Free,
}

/// A sign-normalized fluctuation operator on [-L, L] sampled at `grid_points` interior points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorSpec {
    pub kind: OperatorKind,
    pub m: f64,
    pub b: f64,
    pub a_mag: f64,
    pub c2: f64,
    pub domain_halfwidth: f64,
    pub grid_points: usize,
}

impl OperatorSpec {
    pub fn kink(m: f64, halfwidth: f64, grid_points: usize) -> Self {
        Self {
            kind: OperatorKind::KinkSech2,
            m,
            b: 0.0,
            a_mag: 1.0,
            c2: 1.0,
            domain_halfwidth: halfwidth,
            grid_points,
        }
    }

    pub fn free(m: f64, halfwidth: f64, grid_points: usize) -> Self {
        Self { kind: OperatorKind::Free, ..Self::kink(m, halfwidth, grid_points) }
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.domain_halfwidth / (self.grid_points as f64 + 1.0)
    }

    /// Interior nodes -L + h, ..., L - h.
    pub fn nodes(&self) -> Vec<f64> {
        let h = self.spacing();
        (1..=self.grid_points).map(|i| -self.domain_halfwidth + h * i as f64).collect()
    }

    /// Same operator with the grid spacing halved.
    pub fn refined(&self) -> Self {
        Self { grid_points: 2 * self.grid_points + 1, ..*self }
    }

    pub fn potential(&self, z: f64) -> f64 {
        let m2 = self.m * self.m;
        match self.kind {
            OperatorKind::KinkSech2 => 4.0 * m2 - 6.0 * m2 / (self.m * z).cosh().powi(2),
            OperatorKind::Free => 4.0 * m2,
            OperatorKind::EllipticSn2 => {
                let sn = crate::special::jacobi_sn_imag(z, self.b);
                -6.0 * self.b * self.b * sn * sn
            }
        }
    }

    pub(crate) fn check(&self) -> Result<()> {
        if self.grid_points < 3 || !(self.domain_halfwidth > 0.0) {
            return Err(Error::Domain(format!(
                "need at least 3 grid points and L > 0 (got {}, {})",
                self.grid_points, self.domain_halfwidth
            )));
        }
        if self.kind != OperatorKind::EllipticSn2 && !(self.m > 0.0) {
            return Err(Error::Regime(format!("m = {} must be positive", self.m)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ClosedForm,
    SpectralNumeric,
}
