//! The printed one-loop corrections in rescaled and physical parameters, the d = 3 ratio
//! to the kink energy, the mass-scale choice, and the numerically continued correction.

use super::trace::{exact_kink_trace, free_factor_gamma2, free_factor_gamma3, refined_kink_trace};
use super::zeta::{zeta_prime_at_zero, Ladder, ZetaOptions, ZetaResult};
use super::{OperatorSpec, Provenance, QuantizationParams};
use crate::error::{Error, Result};
use crate::phi4::{classical_kink_energy_paper_forms, map_params, Phi4Params};
use crate::spin_chain::SpinChainParams;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI, SQRT_2};

fn sqrt3() -> f64 {
    3f64.sqrt()
}

/// 3 + (3/2) arcsin(1/√3)
fn bracket_d2() -> f64 {
    3.0 + 1.5 * (1.0 / sqrt3()).asin()
}

/// -38/9 + π/√3 + (2/3) ln 2
fn bracket_d3_physical() -> f64 {
    -38.0 / 9.0 + PI / sqrt3() + 2.0 / 3.0 * LN_2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassScale {
    pub r: f64,
    /// ln(-A m²) that remains once |A m²| = 1
    pub residual_log_im: f64,
    pub phase_convention: String,
    pub warnings: Vec<String>,
}

/// r with |A m²| = 1, i.e. r² = T J m² / (2π ħ).
pub fn mass_scale_choice(phi4: &Phi4Params, q: &QuantizationParams) -> Result<MassScale> {
    if phi4.m2 < 0.0 {
        return Err(Error::Regime(format!("m² = {} < 0", phi4.m2)));
    }
    let r = (q.t * phi4.j * phi4.m2 / (2.0 * PI * q.hbar)).sqrt();
    let mut warnings = Vec::new();
    if phi4.m2 == 0.0 {
        warnings.push("m = 0: the mass scale collapses to r = 0".into());
    }
    Ok(MassScale {
        r,
        residual_log_im: -0.5 * PI,
        phase_convention: "A = i|A|; ln(-A m^2) = ln|A m^2| - i pi/2, modulus part set to zero".into(),
        warnings,
    })
}

/// The printed ΔE for d = 1, 2, 3 with ln(-A m²) read as ln|A m²|.
pub fn delta_e_closed_form(d: u32, phi4: &Phi4Params, q: &QuantizationParams) -> Result<f64> {
    q.validate()?;
    if phi4.m2 < 0.0 {
        return Err(Error::Regime(format!("m² = {} < 0: no kink", phi4.m2)));
    }
    if phi4.m2 == 0.0 {
        return Ok(0.0);
    }
    let (m, c, t, hb) = (phi4.m(), phi4.c(), q.t, q.hbar);
    let log = (q.a_mag(phi4.j) * phi4.m2).ln();
    Ok(match d {
        1 => hb * c * m / (2.0 * t * PI) * (2.0 + PI / sqrt3() - 2.0 * LN_2 - 3.0 * log),
        2 => -hb * c * m * m * q.l / (2.0 * t * PI) * bracket_d2(),
        3 => {
            -hb * c * m.powi(3) * q.l * q.l / (8.0 * t * PI * PI)
                * (-6.0 * log - 6.0 + 2.0 / 9.0 * (-11.0 + 3.0 * sqrt3() * PI + 6.0 * LN_2))
        }
        _ => return Err(Error::Domain(format!("d = {d} must be 1, 2 or 3"))),
    })
}

/// The printed ΔE in chain parameters (no ħ, no T).
pub fn delta_e_physical(d: u32, spin: &SpinChainParams, l: f64) -> Result<f64> {
    spin.validate()?;
    let h = spin.gmub_b;
    let s = 2.0 * spin.d + h;
    if !(h > 0.0) {
        return Err(Error::Domain(format!("gμ_B B = {h} must be positive")));
    }
    if s > 0.0 {
        return Err(Error::Domain(format!("2D + gμ_B B = {s} > 0 makes the radicands negative")));
    }
    Ok(match d {
        1 => (-h * s).sqrt() / (SQRT_2 * PI) * (1.0 + PI / (2.0 * sqrt3()) - LN_2),
        2 => h.sqrt() * s * l / (4.0 * spin.j.sqrt() * PI) * bracket_d2(),
        3 => {
            let v = Complex64::new(-h, 0.0).sqrt() * Complex64::new(s, 0.0).powf(1.5) * l * l
                / (8.0 * SQRT_2 * spin.j * PI * PI)
                * bracket_d3_physical();
            if v.im.abs() > 1e-12 * v.norm().max(1e-300) {
                return Err(Error::Domain(format!("d = 3 physical form is not real ({v})")));
            }
            v.re
        }
        _ => return Err(Error::Domain(format!("d = {d} must be 1, 2 or 3"))),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioD3 {
    /// √h (8D+h) / (44π² J^{3/2}) (-38/9 + π/√3 + (2/3) ln 2)
    pub printed: f64,
    /// ΔE_{d=3} / E_c from the two physical forms with l = 1; None at the border
    pub quotient: Option<f64>,
    /// printed ratio at gμ_B B = -2D
    pub limit_law: f64,
    pub at_border: bool,
}

pub fn correction_ratio_d3(spin: &SpinChainParams) -> Result<RatioD3> {
    spin.validate()?;
    let h = spin.gmub_b;
    let s = 2.0 * spin.d + h;
    if !(h > 0.0) || s > 0.0 {
        return Err(Error::Domain(format!("need gμ_B B > 0 and 2D + gμ_B B ≤ 0 (h={h}, 2D+h={s})")));
    }
    let k = bracket_d3_physical() / (44.0 * PI * PI * spin.j.powf(1.5));
    let printed = h.sqrt() * (8.0 * spin.d + h) * k;
    let limit_law = (-2.0 * spin.d).sqrt() * 6.0 * spin.d * k;
    let at_border = s == 0.0;
    let quotient = if at_border {
        None
    } else {
        let de = delta_e_physical(3, spin, 1.0)?;
        let p = map_params(spin, 1.0)?.params;
        let ec = classical_kink_energy_paper_forms(&p, spin)?;
        Some(de / ec.physical_re)
    };
    Ok(RatioD3 { printed, quotient, limit_law, at_border })
}

/// Least-squares slope of ln|ΔE_{d=3}/E_c| against ln(-D/J) at gμ_B B = -2D(1 - eps).
pub fn fit_limit_exponent(j: f64, ds: &[f64], eps: f64) -> Result<f64> {
    if ds.len() < 2 {
        return Err(Error::Domain("need at least two D values".into()));
    }
    let mut pts = Vec::with_capacity(ds.len());
    for &d in ds {
        let spin = SpinChainParams { j, d, gmub_b: -2.0 * d * (1.0 - eps), ..Default::default() };
        let r = correction_ratio_d3(&spin)?;
        pts.push(((-d / j).ln(), r.printed.abs().ln()));
    }
    let n = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0 / n, a.1 + p.1 / n));
    let (sxy, sxx) = pts
        .iter()
        .fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx).powi(2)));
    Ok(sxy / sxx)
}

/// Which kink trace feeds the continuation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TraceSource {
    /// erf(2m√τ) + e^{-3m²τ} erf(m√τ)
    Exact,
    /// Richardson-refined finite-difference spectra on [-L, L], L in units of 1/m
    Spectral { halfwidth_m: f64, grid_points: usize },
}

impl TraceSource {
    pub fn default_options(&self) -> ZetaOptions {
        match self {
            TraceSource::Exact => ZetaOptions::default(),
            TraceSource::Spectral { .. } => ZetaOptions { tau_min: 1e-2, ..Default::default() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericCorrection {
    pub d: u32,
    pub zeta: ZetaResult,
    /// -ζ(0) ln|A|
    pub scale_term: f64,
    pub delta_e: f64,
    pub closed_form: f64,
    pub ratio_to_closed_form: f64,
    pub source: TraceSource,
}

/// ΔE = -(ħ/T) [ζ'_H(0) - ζ_H(0) ln|A|] for the trace γ₁ γ₂ γ₃ of H = L/A.
/// τ_min and the split are taken in units of 1/m².
pub fn delta_e_numeric(
    d: u32,
    phi4: &Phi4Params,
    q: &QuantizationParams,
    source: TraceSource,
    opts: &ZetaOptions,
) -> Result<NumericCorrection> {
    q.validate()?;
    phi4.require_kink_regime()?;
    let (m, c, l) = (phi4.m(), phi4.c(), q.l);
    let split = 1.0 / phi4.m2;
    let scaled = ZetaOptions { tau_min: opts.tau_min / phi4.m2, ..*opts };
    let transverse = move |t: f64| free_factor_gamma2(c, t) * free_factor_gamma3(l, d, t);
    let mut zeta = match source {
        TraceSource::Exact => zeta_prime_at_zero(
            |t| exact_kink_trace(m, t) * transverse(t),
            Ladder::kink_total(d),
            split,
            &scaled,
        )?,
        TraceSource::Spectral { halfwidth_m, grid_points } => {
            let st = refined_kink_trace(&OperatorSpec::kink(m, halfwidth_m / m, grid_points))?;
            zeta_prime_at_zero(|t| st.gamma(t) * transverse(t), Ladder::kink_total(d), split, &scaled)?
        }
    };
    let scale_term = -zeta.zeta_at_zero * q.a_mag(phi4.j).ln();
    let delta_e = -(q.hbar / q.t) * (zeta.zeta_prime_at_zero + scale_term);
    zeta.delta_e = Some(delta_e);
    zeta.provenance = Provenance::SpectralNumeric;
    let closed_form = delta_e_closed_form(d, phi4, q)?;
    Ok(NumericCorrection {
        d,
        zeta,
        scale_term,
        delta_e,
        closed_form,
        ratio_to_closed_form: delta_e / closed_form,
        source,
    })
}
