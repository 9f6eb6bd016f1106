//! The border case 2D + gμ_B B = 0: the sn travelling wave, its fluctuation operator
//! -∂² - 6b² sn²(bz; i), Laplace-domain traces and the energy correction per wave period.

pub mod bromwich;
pub mod cell;
pub mod energy;
pub mod green;

pub use bromwich::{band_density, gamma_minus, watson_coefficients, BromwichEngine};
pub use cell::{bloch_trace, BlochOptions};
pub use energy::{delta_e_m0, M0Correction};
pub use green::{
    band_edges, g0_vacuum, g1_diagonal, gamma_hat, gamma_hat_printed, gamma_hat_quadrature, gamma_hat_sample,
    singular_set, GammaHatSample,
};

use crate::error::{Error, Result};
use crate::phi4::{second_derivative_at, FieldProfile};
use crate::special::{jacobi_sn_imag, k_imag};
use serde::{Deserialize, Serialize};

/// Travelling sn wave b√(2J(c²-v²)/(-Dc²)) sn(b(z - vt); i).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnWaveParams {
    pub b: f64,
    pub v: f64,
    pub c: f64,
    pub j: f64,
    /// anisotropy D < 0
    pub d: f64,
}

impl Default for SnWaveParams {
    fn default() -> Self {
        Self { b: 1.0, v: 0.0, c: 1.0, j: 1.0, d: -1.0 }
    }
}

impl SnWaveParams {
    pub fn check(&self) -> Result<()> {
        if !(self.b > 0.0 && self.c > 0.0 && self.j > 0.0) {
            return Err(Error::Domain(format!("need b, c, J > 0 (b={}, c={}, J={})", self.b, self.c, self.j)));
        }
        if !(self.d < 0.0) {
            return Err(Error::Regime(format!("D = {} must be negative for a real amplitude", self.d)));
        }
        if !(self.v.abs() < self.c) {
            return Err(Error::Regime(format!("|v| = {} must be below c = {}", self.v.abs(), self.c)));
        }
        Ok(())
    }

    pub fn amplitude(&self) -> Result<f64> {
        self.check()?;
        let (c2, v2) = (self.c * self.c, self.v * self.v);
        Ok(self.b * (2.0 * self.j * (c2 - v2) / (-self.d * c2)).sqrt())
    }

    /// 4K(i)/b
    pub fn period(&self) -> f64 {
        4.0 * k_imag() / self.b
    }
}

/// Bromwich line Re σ = o, truncated at |Im σ| = t_cut and sampled with `n_nodes` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub o: f64,
    pub t_cut: f64,
    pub n_nodes: usize,
}

impl ContourSpec {
    pub fn for_b(b: f64) -> Self {
        Self { o: 1.5 * 2.0 * 3f64.sqrt() * b * b, t_cut: 200.0 * b * b, n_nodes: 4001 }
    }

    pub fn with_abscissa_factor(b: f64, factor: f64) -> Self {
        Self { o: factor * 2.0 * 3f64.sqrt() * b * b, ..Self::for_b(b) }
    }

    pub fn check(&self, b: f64) -> Result<()> {
        let top = 2.0 * 3f64.sqrt() * b * b;
        if !(self.o > top) {
            return Err(Error::Domain(format!("abscissa o = {} must exceed 2√3 b² = {top}", self.o)));
        }
        if !(self.t_cut > 0.0 && self.n_nodes >= 3) {
            return Err(Error::Domain(format!("need t_cut > 0 and n_nodes >= 3 (got {}, {})", self.t_cut, self.n_nodes)));
        }
        Ok(())
    }
}

/// Sign of the cubic term in J φ'' ± D φ³ = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EomSign {
    /// J φ'' + D φ³ (as printed)
    Printed,
    /// J φ'' - D φ³, which the sn wave solves
    Consistent,
}

impl EomSign {
    fn factor(self) -> f64 {
        match self {
            EomSign::Printed => 1.0,
            EomSign::Consistent => -1.0,
        }
    }
}

/// Samples the wave at time t on `grid`.
pub fn sn_wave_profile(params: &SnWaveParams, grid: &[f64], t: f64) -> Result<FieldProfile> {
    let amp = params.amplitude()?;
    let b = params.b;
    let phi = grid.iter().map(|&z| amp * jacobi_sn_imag(z - params.v * t, b)).collect();
    let phi_dt = grid
        .iter()
        .map(|&z| {
            let (cn, dn) = crate::special::jacobi_cn_dn_imag(z - params.v * t, b);
            -params.v * amp * b * cn * dn
        })
        .collect();
    Ok(FieldProfile { z: grid.to_vec(), phi, phi_dt: Some(phi_dt) })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnResidual {
    pub sign: EomSign,
    /// max of |J(1 - v²/c²) φ'' ± D φ³| where the seven-point stencil fits
    pub max_abs: f64,
    /// max |D φ³| for scale
    pub cubic_scale: f64,
}

/// Residual of the comoving equation J(1 - v²/c²) φ'' ± D φ³ = 0 on a uniform grid.
pub fn sn_residual(params: &SnWaveParams, profile: &FieldProfile, sign: EomSign) -> Result<SnResidual> {
    params.check()?;
    let h = profile.check_grid()?;
    let phi = &profile.phi;
    let n = phi.len();
    if n < 7 {
        return Err(Error::Size { needed: 7, got: n });
    }
    let lorentz = 1.0 - (params.v / params.c).powi(2);
    let mut max_abs = 0.0f64;
    let mut cubic_scale = 0.0f64;
    for i in 3..n - 3 {
        let cubic = params.d * phi[i].powi(3);
        let r = params.j * lorentz * second_derivative_at(phi, i, h) + sign.factor() * cubic;
        max_abs = max_abs.max(r.abs());
        cubic_scale = cubic_scale.max(cubic.abs());
    }
    Ok(SnResidual { sign, max_abs, cubic_scale })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportCheck {
    pub sign: EomSign,
    pub t_final: f64,
    pub steps: usize,
    pub points: usize,
    /// max |φ(t) - φ_exact(t)| over the periodic cell
    pub max_deviation: f64,
}

fn periodic_d2(f: &[f64], h: f64, out: &mut [f64]) {
    let n = f.len();
    let at = |i: isize| f[i.rem_euclid(n as isize) as usize];
    for (i, o) in out.iter_mut().enumerate() {
        let i = i as isize;
        *o = (2.0 * (at(i - 3) + at(i + 3)) - 27.0 * (at(i - 2) + at(i + 2)) + 270.0 * (at(i - 1) + at(i + 1))
            - 490.0 * at(i))
            / (180.0 * h * h);
    }
}

/// Method-of-lines evolution of (J/c²) φ_tt = J φ_zz ∓ D φ³ on one periodic wave period,
/// sixth-order differences and RK4, compared with the shifted exact wave at `t_final`.
pub fn transport_check(params: &SnWaveParams, sign: EomSign, points: usize, t_final: f64) -> Result<TransportCheck> {
    params.check()?;
    let period = params.period();
    let h = period / points as f64;
    let grid: Vec<f64> = (0..points).map(|i| i as f64 * h).collect();
    let start = sn_wave_profile(params, &grid, 0.0)?;
    let mut phi = start.phi;
    let mut psi = start.phi_dt.unwrap_or_else(|| vec![0.0; points]);
    let c2 = params.c * params.c;
    let steps = (t_final / (0.2 * h / params.c)).ceil().max(1.0) as usize;
    let dt = t_final / steps as f64;
    let rhs = |phi: &[f64], out: &mut [f64]| {
        periodic_d2(phi, h, out);
        for (o, &f) in out.iter_mut().zip(phi) {
            *o = c2 * (*o + sign.factor() * params.d * f * f * f / params.j);
        }
    };
    let mut acc = vec![0.0; points];
    let mut tmp = vec![0.0; points];
    for _ in 0..steps {
        let (p0, q0) = (phi.clone(), psi.clone());
        rhs(&p0, &mut acc);
        let k1p = q0.clone();
        let k1q = acc.clone();
        for i in 0..points {
            tmp[i] = p0[i] + 0.5 * dt * k1p[i];
        }
        rhs(&tmp, &mut acc);
        let k2p: Vec<f64> = (0..points).map(|i| q0[i] + 0.5 * dt * k1q[i]).collect();
        let k2q = acc.clone();
        for i in 0..points {
            tmp[i] = p0[i] + 0.5 * dt * k2p[i];
        }
        rhs(&tmp, &mut acc);
        let k3p: Vec<f64> = (0..points).map(|i| q0[i] + 0.5 * dt * k2q[i]).collect();
        let k3q = acc.clone();
        for i in 0..points {
            tmp[i] = p0[i] + dt * k3p[i];
        }
        rhs(&tmp, &mut acc);
        let k4p: Vec<f64> = (0..points).map(|i| q0[i] + dt * k3q[i]).collect();
        let k4q = acc.clone();
        for i in 0..points {
            phi[i] = p0[i] + dt / 6.0 * (k1p[i] + 2.0 * k2p[i] + 2.0 * k3p[i] + k4p[i]);
            psi[i] = q0[i] + dt / 6.0 * (k1q[i] + 2.0 * k2q[i] + 2.0 * k3q[i] + k4q[i]);
        }
    }
    let exact = sn_wave_profile(params, &grid, t_final)?.phi;
    let max_deviation = phi.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(TransportCheck { sign, t_final, steps, points, max_deviation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phi4::uniform_grid;

    #[test]
    fn static_profile_at_origin_and_amplitude() {
        let p = SnWaveParams { b: 1.3, j: 2.0, d: -0.5, ..Default::default() };
        let prof = sn_wave_profile(&p, &[0.0, k_imag() / p.b], 0.0).unwrap();
        assert_eq!(prof.phi[0], 0.0);
        let amp = p.b * (2.0 * p.j / -p.d).sqrt();
        assert!((prof.phi[1] - amp).abs() < 1e-12);
    }

    #[test]
    fn residual_signs() {
        let p = SnWaveParams { b: 1.0, v: 0.3, ..Default::default() };
        let prof = sn_wave_profile(&p, &uniform_grid(3.0, 3001), 0.0).unwrap();
        let good = sn_residual(&p, &prof, EomSign::Consistent).unwrap();
        let bad = sn_residual(&p, &prof, EomSign::Printed).unwrap();
        assert!(good.max_abs < 1e-8, "{}", good.max_abs);
        assert!(bad.max_abs > 0.5 * bad.cubic_scale);
    }

    #[test]
    fn amplitude_reality_boundary() {
        let at = |v: f64, d: f64| SnWaveParams { v, d, ..Default::default() }.amplitude();
        assert!(at(0.999, -1.0).is_ok());
        assert!(matches!(at(1.0, -1.0), Err(Error::Regime(_))));
        assert!(matches!(at(-1.2, -1.0), Err(Error::Regime(_))));
        assert!(matches!(at(0.0, 0.0), Err(Error::Regime(_))));
    }

    #[test]
    fn transport_of_half_speed_wave() {
        let p = SnWaveParams { v: 0.5, ..Default::default() };
        let ok = transport_check(&p, EomSign::Consistent, 512, 1.0).unwrap();
        assert!(ok.max_deviation < 1e-6, "{}", ok.max_deviation);
        let off = transport_check(&p, EomSign::Printed, 512, 1.0).unwrap();
        assert!(off.max_deviation > 1e-2, "{}", off.max_deviation);
    }

    #[test]
    fn contour_invariant() {
        assert!(ContourSpec::for_b(1.0).check(1.0).is_ok());
        assert!(ContourSpec::with_abscissa_factor(1.0, 0.9).check(1.0).is_err());
    }
}
