//! Classical anisotropic Heisenberg chain with a transverse field.
//!
//! H = -J Σ Sₙ·Sₙ₊₁ + D Σ (Sₙᶻ)² - gμ_B B Σ Sₙˣ and ħ dSₙ/dt = Sₙ × (-J(Sₙ₊₁+Sₙ₋₁) + 2DSₙᶻẑ - gμ_B B x̂).

pub mod embed;
pub mod io;

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub type Vec3 = [f64; 3];

#[inline]
pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

#[inline]
fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// Bohr magneton in J/T.
pub const MU_B_SI: f64 = 9.274_010_078_3e-24;
/// Reduced Planck constant in J s.
pub const HBAR_SI: f64 = 1.054_571_817e-34;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpinChainParams {
    /// exchange coupling
    pub j: f64,
    /// single-ion anisotropy, negative for an easy axis
    pub d: f64,
    /// g μ_B B as one energy
    pub gmub_b: f64,
    /// lattice constant
    pub a: f64,
    pub hbar: f64,
}

impl Default for SpinChainParams {
    fn default() -> Self {
        Self { j: 1.0, d: -1.0, gmub_b: 1.0, a: 1.0, hbar: 1.0 }
    }
}

/// Scales that take reduced quantities back to SI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitScales {
    pub energy_j: f64,
    pub length_m: f64,
    pub time_s: f64,
}

impl SpinChainParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.j > 0.0 && self.a > 0.0 && self.hbar > 0.0) {
            return Err(Error::Domain(format!(
                "need J > 0, a > 0, hbar > 0 (got J={}, a={}, hbar={})",
                self.j, self.a, self.hbar
            )));
        }
        if ![self.j, self.d, self.gmub_b, self.a, self.hbar].iter().all(|v| v.is_finite()) {
            return Err(Error::Domain("non-finite chain parameter".into()));
        }
        Ok(())
    }

    pub fn easy_axis(&self) -> bool {
        self.d < 0.0
    }

    /// Build from SI inputs: energies in joules, field in tesla, lattice constant in metres.
    pub fn from_si(j_joule: f64, d_joule: f64, g: f64, b_tesla: f64, a_m: f64) -> Self {
        Self { j: j_joule, d: d_joule, gmub_b: g * MU_B_SI * b_tesla, a: a_m, hbar: HBAR_SI }
    }

    /// Reduced units: energies in J, lengths in a, times in ħ/J.
    pub fn reduced(&self) -> (SpinChainParams, UnitScales) {
        let scales = UnitScales { energy_j: self.j, length_m: self.a, time_s: self.hbar / self.j };
        let p = SpinChainParams {
            j: 1.0,
            d: self.d / self.j,
            gmub_b: self.gmub_b / self.j,
            a: 1.0,
            hbar: 1.0,
        };
        (p, scales)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinConfiguration {
    pub sites: Vec<Vec3>,
}

impl SpinConfiguration {
    /// Checks that every site is a unit vector to 1e-10.
    pub fn new(sites: Vec<Vec3>) -> Result<Self> {
        for (n, s) in sites.iter().enumerate() {
            if (norm(*s) - 1.0).abs() > 1e-10 {
                return Err(Error::Domain(format!("site {n} has |S| = {}", norm(*s))));
            }
        }
        Ok(Self { sites })
    }

    pub fn normalized(sites: Vec<Vec3>) -> Self {
        let sites = sites
            .into_iter()
            .map(|s| {
                let r = norm(s);
                [s[0] / r, s[1] / r, s[2] / r]
            })
            .collect();
        Self { sites }
    }

    pub fn uniform(n: usize, s: Vec3) -> Self {
        Self::normalized(vec![s; n])
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn max_norm_error(&self) -> f64 {
        self.sites.iter().map(|s| (norm(*s) - 1.0).abs()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// end spins held at their initial values
    #[default]
    Fixed,
    Periodic,
}

/// H = -J Σ Sₙ·Sₙ₊₁ + D Σ (Sₙᶻ)² - gμ_B B Σ Sₙˣ with open ends: bonds n = 1..N-1.
pub fn chain_energy(config: &SpinConfiguration, params: &SpinChainParams) -> Result<f64> {
    chain_energy_with(config, params, Boundary::Fixed)
}

/// Chain energy; periodic boundaries add the bond between the last and first site.
pub fn chain_energy_with(
    config: &SpinConfiguration,
    params: &SpinChainParams,
    boundary: Boundary,
) -> Result<f64> {
    let s = &config.sites;
    if s.len() < 2 {
        return Err(Error::Size { needed: 2, got: s.len() });
    }
    let mut bonds: f64 = s.windows(2).map(|w| dot(w[0], w[1])).sum();
    if boundary == Boundary::Periodic {
        bonds += dot(s[s.len() - 1], s[0]);
    }
    let aniso: f64 = s.iter().map(|v| v[2] * v[2]).sum();
    let zeeman: f64 = s.iter().map(|v| v[0]).sum();
    Ok(-params.j * bonds + params.d * aniso - params.gmub_b * zeeman)
}

/// Local field ∂H/∂Sₙ = -J(Sₙ₊₁ + Sₙ₋₁) + 2DSₙᶻẑ - gμ_B B x̂, with missing neighbours omitted.
fn local_field(s: &[Vec3], n: usize, p: &SpinChainParams, periodic: bool) -> Vec3 {
    let len = s.len();
    let mut nb = [0.0; 3];
    let mut add = |v: Vec3| {
        nb[0] += v[0];
        nb[1] += v[1];
        nb[2] += v[2];
    };
    if n + 1 < len {
        add(s[n + 1]);
    } else if periodic {
        add(s[0]);
    }
    if n > 0 {
        add(s[n - 1]);
    } else if periodic {
        add(s[len - 1]);
    }
    [-p.j * nb[0] - p.gmub_b, -p.j * nb[1], -p.j * nb[2] + 2.0 * p.d * s[n][2]]
}

/// dSₙ/dt = Sₙ × ∂H/∂Sₙ / ħ. With fixed boundaries the end spins do not move.
pub fn torque_rhs(
    config: &SpinConfiguration,
    params: &SpinChainParams,
    boundary: Boundary,
) -> Result<Vec<Vec3>> {
    let s = &config.sites;
    if s.len() < 3 {
        return Err(Error::Size { needed: 3, got: s.len() });
    }
    Ok(rhs_raw(s, params, boundary))
}

fn rhs_raw(s: &[Vec3], p: &SpinChainParams, boundary: Boundary) -> Vec<Vec3> {
    let periodic = boundary == Boundary::Periodic;
    let n = s.len();
    (0..n)
        .map(|i| {
            if !periodic && (i == 0 || i == n - 1) {
                return [0.0; 3];
            }
            let t = cross(s[i], local_field(s, i, p, periodic));
            [t[0] / p.hbar, t[1] / p.hbar, t[2] / p.hbar]
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub frames: Vec<SpinConfiguration>,
    pub energy_initial: f64,
    /// max |E(t) - E(0)| over recorded frames
    pub energy_drift: f64,
    /// largest |S| - 1 seen before renormalization
    pub max_prenorm_deviation: f64,
    /// largest ||S| - 1| after renormalization
    pub max_norm_error: f64,
    pub warnings: Vec<String>,
}

/// RK4 with per-step renormalization. Frames are recorded every `record_every` steps
/// (plus the initial and final state).
pub fn integrate_chain(
    config: &SpinConfiguration,
    params: &SpinChainParams,
    dt: f64,
    steps: usize,
    boundary: Boundary,
    record_every: usize,
) -> Result<Trajectory> {
    params.validate()?;
    let n = config.len();
    if n < 3 {
        return Err(Error::Size { needed: 3, got: n });
    }
    let mut warnings = Vec::new();
    let e0 = chain_energy_with(config, params, boundary)?;
    let rhs0 = rhs_raw(&config.sites, params, boundary);
    let max_rate = rhs0.iter().map(|v| norm(*v)).fold(0.0, f64::max);
    let stiffness = (2.0 * params.j.abs() + 2.0 * params.d.abs() + params.gmub_b.abs()) / params.hbar;
    if dt * max_rate.max(stiffness) > 0.1 {
        warnings.push(format!(
            "dt * max rate = {:.3} exceeds 0.1; accuracy may suffer",
            dt * max_rate.max(stiffness)
        ));
    }
    let record_every = record_every.max(1);
    let mut s = config.sites.clone();
    let mut times = vec![0.0];
    let mut frames = vec![config.clone()];
    let mut drift: f64 = 0.0;
    let mut max_dev: f64 = 0.0;
    let mut max_norm_err: f64 = 0.0;
    let axpy = |base: &[Vec3], k: &[Vec3], h: f64| -> Vec<Vec3> {
        base.iter()
            .zip(k)
            .map(|(b, k)| [b[0] + h * k[0], b[1] + h * k[1], b[2] + h * k[2]])
            .collect()
    };
    for step in 1..=steps {
        let k1 = rhs_raw(&s, params, boundary);
        let k2 = rhs_raw(&axpy(&s, &k1, 0.5 * dt), params, boundary);
        let k3 = rhs_raw(&axpy(&s, &k2, 0.5 * dt), params, boundary);
        let k4 = rhs_raw(&axpy(&s, &k3, dt), params, boundary);
        for i in 0..n {
            for c in 0..3 {
                s[i][c] += dt / 6.0 * (k1[i][c] + 2.0 * k2[i][c] + 2.0 * k3[i][c] + k4[i][c]);
            }
            let r = norm(s[i]);
            let dev = (r - 1.0).abs();
            if dev > 1e-3 {
                return Err(Error::Instability(format!(
                    "|S_{i}| = {r} at step {step}; reduce dt"
                )));
            }
            max_dev = max_dev.max(dev);
            s[i] = [s[i][0] / r, s[i][1] / r, s[i][2] / r];
            max_norm_err = max_norm_err.max((norm(s[i]) - 1.0).abs());
        }
        if step % record_every == 0 || step == steps {
            let cfg = SpinConfiguration { sites: s.clone() };
            let e = chain_energy_with(&cfg, params, boundary)?;
            drift = drift.max((e - e0).abs());
            times.push(step as f64 * dt);
            frames.push(cfg);
        }
    }
    Ok(Trajectory {
        times,
        frames,
        energy_initial: e0,
        energy_drift: drift,
        max_prenorm_deviation: max_dev,
        max_norm_error: max_norm_err,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleField {
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
}

/// S = (cos θ cos φ, sin θ cos φ, sin φ).
pub fn spins_from_angles(angles: &AngleField) -> Result<SpinConfiguration> {
    if angles.theta.len() != angles.phi.len() {
        return Err(Error::GridMismatch("theta and phi lengths differ".into()));
    }
    let sites = angles
        .theta
        .iter()
        .zip(&angles.phi)
        .map(|(&t, &p)| [t.cos() * p.cos(), t.sin() * p.cos(), p.sin()])
        .collect();
    Ok(SpinConfiguration { sites })
}

/// Inverse of [`spins_from_angles`] with φ ∈ [-π/2, π/2] and θ ∈ (-π, π].
pub fn angles_from_spins(config: &SpinConfiguration) -> Result<AngleField> {
    let mut theta = Vec::with_capacity(config.len());
    let mut phi = Vec::with_capacity(config.len());
    for (n, s) in config.sites.iter().enumerate() {
        let cp = s[0].hypot(s[1]);
        if cp < 1e-8 {
            return Err(Error::Gimbal(n));
        }
        phi.push(s[2].atan2(cp));
        theta.push(s[1].atan2(s[0]));
    }
    Ok(AngleField { theta, phi })
}

/// Continuum limit of the torque equation on a uniform grid of spacing `dz` (physical length).
/// Second derivatives use central differences; the two end points are returned as zero.
pub fn continuum_rhs(field: &[Vec3], dz: f64, params: &SpinChainParams) -> Result<Vec<Vec3>> {
    let n = field.len();
    if n < 3 {
        return Err(Error::Size { needed: 3, got: n });
    }
    let ja2 = params.j * params.a * params.a;
    let (d, h, hb) = (params.d, params.gmub_b, params.hbar);
    let mut out = vec![[0.0; 3]; n];
    for i in 1..n - 1 {
        let s = field[i];
        let dd: Vec3 = std::array::from_fn(|c| {
            (field[i + 1][c] - 2.0 * s[c] + field[i - 1][c]) / (dz * dz)
        });
        out[i] = [
            (-ja2 * (s[1] * dd[2] - s[2] * dd[1]) + 2.0 * d * s[1] * s[2]) / hb,
            (-ja2 * (s[2] * dd[0] - s[0] * dd[2]) - 2.0 * d * s[0] * s[2] - h * s[2]) / hb,
            (-ja2 * (s[0] * dd[1] - s[1] * dd[0]) + h * s[1]) / hb,
        ];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_energy(s: &[Vec3], p: &SpinChainParams) -> f64 {
        let mut e = 0.0;
        for n in 0..s.len() {
            if n + 1 < s.len() {
                e -= p.j * (s[n][0] * s[n + 1][0] + s[n][1] * s[n + 1][1] + s[n][2] * s[n + 1][2]);
            }
            e += p.d * s[n][2].powi(2);
            e -= p.gmub_b * s[n][0];
        }
        e
    }

    fn random_config(seed: u64, n: usize) -> SpinConfiguration {
        let mut x = seed.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1);
        let mut next = || {
            x = x.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
            (x >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        SpinConfiguration::normalized((0..n).map(|_| [next(), next(), next()]).collect())
    }

    #[test]
    fn energy_examples() {
        let p = SpinChainParams { j: 1.0, d: -1.0, gmub_b: 0.5, a: 1.0, hbar: 1.0 };
        let c = SpinConfiguration::uniform(3, [1.0, 0.0, 0.0]);
        assert_eq!(chain_energy(&c, &p).unwrap(), -3.5);
        let p0 = SpinChainParams { gmub_b: 0.0, ..p };
        let c = SpinConfiguration::new(vec![[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]).unwrap();
        assert_eq!(chain_energy(&c, &p0).unwrap(), -1.0);
        assert!(chain_energy(&SpinConfiguration::uniform(1, [1.0, 0.0, 0.0]), &p).is_err());
    }

    #[test]
    fn energy_matches_brute_force() {
        let p = SpinChainParams { j: 1.3, d: -0.7, gmub_b: 0.4, a: 1.0, hbar: 1.0 };
        for seed in 0..20 {
            let c = random_config(seed, 17);
            let e = chain_energy(&c, &p).unwrap();
            assert!((e - brute_energy(&c.sites, &p)).abs() < 1e-12);
        }
    }

    #[test]
    fn rotation_about_x_symmetry_only_without_anisotropy() {
        let rot = |s: Vec3, a: f64| [s[0], a.cos() * s[1] - a.sin() * s[2], a.sin() * s[1] + a.cos() * s[2]];
        let c = random_config(3, 12);
        let r = SpinConfiguration { sites: c.sites.iter().map(|&s| rot(s, 0.7)).collect() };
        let p = SpinChainParams { j: 1.0, d: 0.0, gmub_b: 0.3, a: 1.0, hbar: 1.0 };
        assert!((chain_energy(&c, &p).unwrap() - chain_energy(&r, &p).unwrap()).abs() < 1e-12);
        let p = SpinChainParams { d: -0.5, ..p };
        assert!((chain_energy(&c, &p).unwrap() - chain_energy(&r, &p).unwrap()).abs() > 1e-6);
    }

    /// Sₙ × ∇ₙH / ħ with the gradient from central differences of the energy.
    fn fd_torque(c: &SpinConfiguration, p: &SpinChainParams, n: usize) -> Vec3 {
        let h = 1e-6;
        let grad: Vec3 = std::array::from_fn(|k| {
            let mut plus = c.clone();
            let mut minus = c.clone();
            plus.sites[n][k] += h;
            minus.sites[n][k] -= h;
            (brute_energy(&plus.sites, p) - brute_energy(&minus.sites, p)) / (2.0 * h)
        });
        let t = cross(c.sites[n], grad);
        [t[0] / p.hbar, t[1] / p.hbar, t[2] / p.hbar]
    }

    #[test]
    fn torque_is_variational() {
        let p = SpinChainParams { j: 1.0, d: -0.8, gmub_b: 0.6, a: 1.0, hbar: 0.7 };
        for seed in 0..50 {
            let c = random_config(100 + seed, 8);
            let rhs = torque_rhs(&c, &p, Boundary::Fixed).unwrap();
            for n in 1..7 {
                let fd = fd_torque(&c, &p, n);
                for k in 0..3 {
                    assert!((rhs[n][k] - fd[k]).abs() < 1e-7);
                }
            }
        }
    }

    #[test]
    fn uniform_x_is_fixed_point() {
        let p = SpinChainParams { j: 1.0, d: -1.0, gmub_b: 0.5, a: 1.0, hbar: 1.0 };
        let c = SpinConfiguration::uniform(20, [1.0, 0.0, 0.0]);
        assert!(torque_rhs(&c, &p, Boundary::Periodic).unwrap().iter().all(|v| *v == [0.0; 3]));
        let tr = integrate_chain(&c, &p, 0.01, 1000, Boundary::Fixed, 1000).unwrap();
        assert_eq!(tr.frames.last().unwrap(), &c);
    }

    #[test]
    fn precession_frequency_of_uniform_mode() {
        // small tilt about x̂ with periodic boundaries: ω² = h(h + 2D)/ħ²
        let (h, d) = (5.0, -0.1);
        let p = SpinChainParams { j: 1.0, d, gmub_b: h, a: 1.0, hbar: 1.0 };
        let eps = 1e-4;
        let c = SpinConfiguration::uniform(8, [1.0, eps, 0.0]);
        let dt = 1e-3;
        let tr = integrate_chain(&c, &p, dt, 4000, Boundary::Periodic, 1).unwrap();
        let sy: Vec<f64> = tr.frames.iter().map(|f| f.sites[0][1]).collect();
        let mut crossings = Vec::new();
        for i in 1..sy.len() {
            if sy[i - 1] > 0.0 && sy[i] <= 0.0 {
                let frac = sy[i - 1] / (sy[i - 1] - sy[i]);
                crossings.push(tr.times[i - 1] + frac * dt);
            }
        }
        let period = (crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64;
        let omega = 2.0 * std::f64::consts::PI / period;
        let exact = (h * (h + 2.0 * d)).sqrt();
        assert!((omega / exact - 1.0).abs() < 1e-4, "{omega} vs {exact}");
    }

    #[test]
    fn norms_and_energy_conserved() {
        let p = SpinChainParams { j: 1.0, d: -1.0, gmub_b: 1.5, a: 1.0, hbar: 1.0 };
        let c = random_config(7, 30);
        let tr = integrate_chain(&c, &p, 0.005, 10_000, Boundary::Fixed, 500).unwrap();
        assert!(tr.max_norm_error < 1e-10);
        assert!(tr.energy_drift < 1e-6, "{}", tr.energy_drift);
    }

    #[test]
    fn lattice_and_continuum_rhs_agree_for_smooth_fields() {
        let p = SpinChainParams { j: 1.0, d: -0.6, gmub_b: 0.9, a: 1.0, hbar: 1.0 };
        let mut errs = Vec::new();
        for k in [0.05, 0.025] {
            let n = 60;
            let angles = AngleField {
                theta: (0..n).map(|i| 0.3 * (k * i as f64).sin()).collect(),
                phi: (0..n).map(|i| 0.4 * (k * i as f64).cos()).collect(),
            };
            let c = spins_from_angles(&angles).unwrap();
            let lat = torque_rhs(&c, &p, Boundary::Fixed).unwrap();
            let con = continuum_rhs(&c.sites, p.a, &p).unwrap();
            let e = (1..n - 1)
                .flat_map(|i| (0..3).map(move |c| (i, c)))
                .map(|(i, c)| (lat[i][c] - con[i][c]).abs())
                .fold(0.0, f64::max);
            errs.push(e);
        }
        // with dz = a the centred difference reproduces the neighbour sum exactly
        assert!(errs.iter().all(|e| *e < 1e-12), "{errs:?}");
    }

    #[test]
    fn angle_examples() {
        let c = spins_from_angles(&AngleField { theta: vec![0.0, std::f64::consts::FRAC_PI_2], phi: vec![0.0, 0.0] })
            .unwrap();
        assert_eq!(c.sites[0], [1.0, 0.0, 0.0]);
        assert!((c.sites[1][0]).abs() < 1e-16 && c.sites[1][1] == 1.0);
        let pole = SpinConfiguration::uniform(3, [0.0, 0.0, 1.0]);
        assert!(matches!(angles_from_spins(&pole), Err(Error::Gimbal(0))));
    }

    proptest! {
        #[test]
        fn angle_round_trip(t in -3.1f64..3.1, ph in -1.5f64..1.5) {
            let a = AngleField { theta: vec![t], phi: vec![ph] };
            let b = angles_from_spins(&spins_from_angles(&a).unwrap()).unwrap();
            prop_assert!((a.theta[0] - b.theta[0]).abs() < 1e-12);
            prop_assert!((a.phi[0] - b.phi[0]).abs() < 1e-12);
        }

        #[test]
        fn torque_perpendicular_to_spin(seed in 0u64..1000) {
            let p = SpinChainParams { j: 1.0, d: -0.4, gmub_b: 0.8, a: 1.0, hbar: 1.0 };
            let c = random_config(seed, 10);
            let rhs = torque_rhs(&c, &p, Boundary::Periodic).unwrap();
            for (s, r) in c.sites.iter().zip(&rhs) {
                prop_assert!(dot(*s, *r).abs() < 1e-14);
            }
        }
    }
}
