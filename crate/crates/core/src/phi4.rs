//! φ⁴ reduction of the chain near the critical field: parameter map, kink profiles,
//! energy densities and energies, static residual, and a relaxation solver.

use crate::error::{Error, Result};
use crate::numerics::quad::simpson;
use crate::numerics::tridiag::thomas_solve;
use crate::spin_chain::SpinChainParams;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Phi4Params {
    pub m2: f64,
    pub v2: f64,
    pub c2: f64,
    /// time scale T of t = T t'
    pub t: f64,
    pub j: f64,
}

impl Phi4Params {
    pub fn m(&self) -> f64 {
        self.m2.sqrt()
    }
    pub fn v(&self) -> f64 {
        self.v2.sqrt()
    }
    pub fn c(&self) -> f64 {
        self.c2.sqrt()
    }

    pub fn require_kink_regime(&self) -> Result<()> {
        if !(self.m2 > 0.0) {
            return Err(Error::Regime(format!(
                "m² = {} ≤ 0: no kink (2D + gμ_B B must be negative); use the m² = 0 elliptic module at the border",
                self.m2
            )));
        }
        if !(self.v2 > 0.0) {
            return Err(Error::Regime(format!("V² = {} ≤ 0: no real vacuum", self.v2)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MappedParams {
    pub params: Phi4Params,
    pub warnings: Vec<String>,
}

/// V² = 6(2D+h)/(8D+h), m² = -(2D+h)/J, c² = J h T²/ħ² with h = gμ_B B.
pub fn map_params(spin: &SpinChainParams, t: f64) -> Result<MappedParams> {
    spin.validate()?;
    let h = spin.gmub_b;
    let den = 8.0 * spin.d + h;
    if den == 0.0 {
        return Err(Error::SingularParameter("8D + gμ_B B = 0 makes V² undefined".into()));
    }
    let s = 2.0 * spin.d + h;
    let params = Phi4Params {
        m2: -s / spin.j,
        v2: 6.0 * s / den,
        c2: spin.j * h * t * t / (spin.hbar * spin.hbar),
        t,
        j: spin.j,
    };
    let mut warnings = Vec::new();
    if params.m2 <= 0.0 {
        warnings.push(format!("m² = {} ≤ 0: outside the kink regime", params.m2));
    }
    if params.v2 < 0.0 {
        warnings.push(format!("V² = {} < 0", params.v2));
    }
    Ok(MappedParams { params, warnings })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WidthMode {
    /// V tanh(m z')
    PaperLiteral,
    /// V tanh(m z'/√2), the solution of the static equation
    #[default]
    EomConsistent,
}

impl WidthMode {
    pub fn label(&self) -> &'static str {
        match self {
            WidthMode::PaperLiteral => "paper_literal",
            WidthMode::EomConsistent => "eom_consistent",
        }
    }
    /// Width w of V tanh(z'/w).
    pub fn width(&self, m: f64) -> f64 {
        match self {
            WidthMode::PaperLiteral => 1.0 / m,
            WidthMode::EomConsistent => std::f64::consts::SQRT_2 / m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityConvention {
    /// (J/2)[φ_t²/c² + φ_z² - m²φ² + m²φ⁴/(2V²)], the unscaled density rewritten in m, V, c
    Eq8,
    /// (J/2)[φ_t²/c² + φ_z² - m²φ² + m²φ⁴/V²]
    #[default]
    Eq10,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldProfile {
    pub z: Vec<f64>,
    pub phi: Vec<f64>,
    pub phi_dt: Option<Vec<f64>>,
}

impl FieldProfile {
    pub fn spacing(&self) -> f64 {
        if self.z.len() < 2 {
            return 0.0;
        }
        self.z[1] - self.z[0]
    }

    /// Checks that the grid is strictly increasing with uniform spacing.
    pub fn check_grid(&self) -> Result<f64> {
        if self.z.len() != self.phi.len() || self.z.len() < 3 {
            return Err(Error::GridMismatch("profile needs ≥ 3 matching samples".into()));
        }
        let h = self.spacing();
        if !(h > 0.0) {
            return Err(Error::GridMismatch("grid must be strictly increasing".into()));
        }
        for w in self.z.windows(2) {
            if ((w[1] - w[0]) - h).abs() > 1e-9 * h.max(1.0) {
                return Err(Error::GridMismatch("grid spacing is not uniform".into()));
            }
        }
        Ok(h)
    }
}

/// n points spanning [-half_span, half_span].
pub fn uniform_grid(half_span: f64, n: usize) -> Vec<f64> {
    let h = 2.0 * half_span / (n - 1) as f64;
    (0..n).map(|i| -half_span + i as f64 * h).collect()
}

/// Default grid: span 20/m with 2001 points.
pub fn default_grid(params: &Phi4Params) -> Vec<f64> {
    uniform_grid(10.0 / params.m(), 2001)
}

pub fn kink_profile(params: &Phi4Params, mode: WidthMode, grid: &[f64]) -> Result<FieldProfile> {
    params.require_kink_regime()?;
    let (v, w) = (params.v(), mode.width(params.m()));
    Ok(FieldProfile {
        z: grid.to_vec(),
        phi: grid.iter().map(|&z| v * (z / w).tanh()).collect(),
        phi_dt: None,
    })
}

pub fn energy_density(
    phi: f64,
    dphi_dt: f64,
    dphi_dz: f64,
    params: &Phi4Params,
    convention: DensityConvention,
) -> f64 {
    let quartic = match convention {
        DensityConvention::Eq8 => params.m2 / (2.0 * params.v2),
        DensityConvention::Eq10 => params.m2 / params.v2,
    };
    let kinetic = if dphi_dt == 0.0 { 0.0 } else { dphi_dt * dphi_dt / params.c2 };
    0.5 * params.j * (kinetic + dphi_dz * dphi_dz - params.m2 * phi * phi + quartic * phi.powi(4))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PaperKinkEnergy {
    /// 11 J m V² / 12
    pub rescaled: f64,
    /// 11 √(-J) (2D+h)^{3/2} / (2√2 (8D+h)) with principal branches, real and imaginary parts
    pub physical_re: f64,
    pub physical_im: f64,
}

/// 11 J m V² / 12.
pub fn classical_kink_energy_paper(params: &Phi4Params) -> Result<f64> {
    params.require_kink_regime()?;
    Ok(11.0 * params.j * params.m() * params.v2 / 12.0)
}

/// Both printed forms of the kink energy.
pub fn classical_kink_energy_paper_forms(params: &Phi4Params, spin: &SpinChainParams) -> Result<PaperKinkEnergy> {
    use num_complex::Complex64;
    let rescaled = classical_kink_energy_paper(params)?;
    let s = Complex64::new(2.0 * spin.d + spin.gmub_b, 0.0);
    let phys = 11.0 * Complex64::new(-spin.j, 0.0).sqrt() * s.powf(1.5)
        / (2.0 * std::f64::consts::SQRT_2 * (8.0 * spin.d + spin.gmub_b));
    Ok(PaperKinkEnergy { rescaled, physical_re: phys.re, physical_im: phys.im })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureEnergy {
    pub value: f64,
    /// vacuum density subtracted at the profile's end values
    pub vacuum_density: f64,
    /// largest distance of an end value from ±V
    pub tail_deviation: f64,
    pub tail_warning: bool,
}

/// Simpson integral of the static density minus its value at the asymptotic vacuum ±V.
pub fn classical_energy_quadrature(
    profile: &FieldProfile,
    params: &Phi4Params,
    convention: DensityConvention,
) -> Result<QuadratureEnergy> {
    let h = profile.check_grid()?;
    let n = profile.phi.len();
    let v = params.v();
    let tail_deviation = [profile.phi[0], profile.phi[n - 1]]
        .iter()
        .map(|&p| (p.abs() - v).abs())
        .fold(0.0, f64::max);
    let vacuum_density = energy_density(v, 0.0, 0.0, params, convention);
    let dz = derivative(&profile.phi, h);
    let dens: Vec<f64> = (0..n)
        .map(|i| {
            let dt = profile.phi_dt.as_ref().map_or(0.0, |d| d[i]);
            energy_density(profile.phi[i], dt, dz[i], params, convention) - vacuum_density
        })
        .collect();
    Ok(QuadratureEnergy {
        value: simpson(&dens, h),
        vacuum_density,
        tail_deviation,
        tail_warning: tail_deviation > 1e-8,
    })
}

/// First derivative: 6th-order central differences inside, lower order near the ends.
fn derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    (0..n)
        .map(|i| {
            if i >= 3 && i + 3 < n {
                (-f[i - 3] + 9.0 * f[i - 2] - 45.0 * f[i - 1] + 45.0 * f[i + 1] - 9.0 * f[i + 2]
                    + f[i + 3])
                    / (60.0 * h)
            } else if i >= 1 && i + 1 < n {
                (f[i + 1] - f[i - 1]) / (2.0 * h)
            } else if i == 0 {
                (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
            } else {
                (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h)
            }
        })
        .collect()
}

/// Second derivative at interior point i: 7-point 6th order where possible, else 5- or 3-point.
pub(crate) fn second_derivative_at(f: &[f64], i: usize, h: f64) -> f64 {
    let n = f.len();
    let h2 = h * h;
    if i >= 3 && i + 3 < n {
        (2.0 * (f[i - 3] + f[i + 3]) - 27.0 * (f[i - 2] + f[i + 2]) + 270.0 * (f[i - 1] + f[i + 1])
            - 490.0 * f[i])
            / (180.0 * h2)
    } else if i >= 2 && i + 2 < n {
        (-(f[i - 2] + f[i + 2]) + 16.0 * (f[i - 1] + f[i + 1]) - 30.0 * f[i]) / (12.0 * h2)
    } else {
        (f[i - 1] - 2.0 * f[i] + f[i + 1]) / h2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    /// J φ'' + J m² φ - (J m²/V²) φ³ on interior points (end points are zero)
    pub values: Vec<f64>,
    pub max_abs: f64,
    /// max |D_h - D_2h| / 3 for the 3-point second difference
    pub richardson_error: f64,
    /// max |φ''| (reference scale for the Richardson check)
    pub second_derivative_scale: f64,
}

fn residual_values(phi: &[f64], h: f64, p: &Phi4Params) -> Vec<f64> {
    let n = phi.len();
    let (j, m2, v2) = (p.j, p.m2, p.v2);
    let mut r = vec![0.0; n];
    for i in 1..n - 1 {
        let f = phi[i];
        r[i] = j * second_derivative_at(phi, i, h) + j * m2 * f - j * m2 / v2 * f.powi(3);
    }
    r
}

/// Pointwise residual of the static equation.
pub fn eom_residual(profile: &FieldProfile, params: &Phi4Params) -> Result<Residual> {
    let h = profile.check_grid()?;
    if profile.phi.len() < 5 {
        return Err(Error::GridTooCoarse("need at least 5 points".into()));
    }
    let phi = &profile.phi;
    let n = phi.len();
    let values = residual_values(phi, h, params);
    let max_abs = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut rich: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in 2..n - 2 {
        let d1 = (phi[i - 1] - 2.0 * phi[i] + phi[i + 1]) / (h * h);
        let d2 = (phi[i - 2] - 2.0 * phi[i] + phi[i + 2]) / (4.0 * h * h);
        rich = rich.max((d1 - d2).abs() / 3.0);
        scale = scale.max(second_derivative_at(phi, i, h).abs());
    }
    if scale > 0.0 && rich > 0.1 * scale {
        return Err(Error::GridTooCoarse(format!(
            "Richardson error of φ'' is {rich:e} against max |φ''| = {scale:e}"
        )));
    }
    Ok(Residual { values, max_abs, richardson_error: rich, second_derivative_scale: scale })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelaxResult {
    pub profile: FieldProfile,
    pub residual_max: f64,
    pub iterations: usize,
    /// ∫(V² - φ²) dz / (2V²) with V the boundary magnitude
    pub fitted_width: f64,
    /// linear interpolation of the zero crossing
    pub center: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelaxOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub dtau0: f64,
    pub dtau_max: f64,
}

impl Default for RelaxOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 2000, dtau0: 0.1, dtau_max: 1e6 }
    }
}

/// Pseudo-transient continuation for φ_τ = R(φ) with end values pinned to `bc`.
/// Each step solves (I/Δτ - L)δ = R with L the 3-point linearization of R.
pub fn relax_static_solution(
    initial: &FieldProfile,
    params: &Phi4Params,
    bc: (f64, f64),
    opts: RelaxOptions,
) -> Result<RelaxResult> {
    if params.m2 == 0.0 {
        return Err(Error::Regime(
            "m² = 0: no kink; the border case is handled by the m0 elliptic module".into(),
        ));
    }
    params.require_kink_regime()?;
    let h = initial.check_grid()?;
    let n = initial.phi.len();
    let (j, m2, v2) = (params.j, params.m2, params.v2);
    let mut phi = initial.phi.clone();
    phi[0] = bc.0;
    phi[n - 1] = bc.1;
    let mut dtau = opts.dtau0 / (j * m2).max(1e-300);
    let dtau_max = opts.dtau_max / (j * m2).max(1e-300);
    let m_int = n - 2;
    let mut res = residual_values(&phi, h, params);
    let mut rmax = res.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut iterations = 0;
    while rmax > opts.tol {
        if iterations >= opts.max_iter {
            return Err(Error::Convergence(format!(
                "relaxation stopped after {iterations} iterations at residual {rmax:e}"
            )));
        }
        iterations += 1;
        let off = -j / (h * h);
        let a = vec![off; m_int];
        let c = vec![off; m_int];
        let b: Vec<f64> = (1..n - 1)
            .map(|i| 1.0 / dtau + 2.0 * j / (h * h) - j * m2 * (1.0 - 3.0 * phi[i] * phi[i] / v2))
            .collect();
        let delta = thomas_solve(&a, &b, &c, &res[1..n - 1])?;
        let trial: Vec<f64> = phi
            .iter()
            .enumerate()
            .map(|(i, &p)| if i == 0 || i == n - 1 { p } else { p + delta[i - 1] })
            .collect();
        let tres = residual_values(&trial, h, params);
        let tmax = tres.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if tmax.is_finite() && tmax < 1.5 * rmax {
            phi = trial;
            res = tres;
            rmax = tmax;
            dtau = (dtau * 2.0).min(dtau_max);
        } else {
            dtau *= 0.25;
        }
    }
    let vb = 0.5 * (bc.0.abs() + bc.1.abs());
    let integrand: Vec<f64> = phi.iter().map(|p| vb * vb - p * p).collect();
    let fitted_width = simpson(&integrand, h) / (2.0 * vb * vb);
    let z = &initial.z;
    let center = if bc.1 != bc.0 {
        let frac: Vec<f64> = phi.iter().map(|p| (bc.1 - p) / (bc.1 - bc.0)).collect();
        z[0] + simpson(&frac, h)
    } else {
        f64::NAN
    };
    Ok(RelaxResult {
        profile: FieldProfile { z: z.clone(), phi, phi_dt: None },
        residual_max: rmax,
        iterations,
        fitted_width,
        center,
    })
}

/// θ = (ħ / (gμ_B B T)) ∂_{t'} φ; zero for static profiles.
pub fn theta_diagnostic(profile: &FieldProfile, spin: &SpinChainParams, t: f64) -> Vec<f64> {
    match &profile.phi_dt {
        Some(d) => d.iter().map(|v| spin.hbar / (spin.gmub_b * t) * v).collect(),
        None => vec![0.0; profile.phi.len()],
    }
}

pub fn write_profile<W: Write>(writer: W, profile: &FieldProfile) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["z", "phi"])?;
    for (z, p) in profile.z.iter().zip(&profile.phi) {
        w.write_record([format!("{z:?}"), format!("{p:?}")])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_profile<R: Read>(reader: R) -> Result<FieldProfile> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut z = Vec::new();
    let mut phi = Vec::new();
    for rec in rdr.deserialize() {
        let (a, b): (f64, f64) = rec?;
        z.push(a);
        phi.push(b);
    }
    let p = FieldProfile { z, phi, phi_dt: None };
    p.check_grid()?;
    Ok(p)
}
