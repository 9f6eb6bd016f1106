//! Run configuration: one TOML file, every field defaulted.
//!
//! | key | default | meaning |
//! |---|---|---|
//! | `spin.j`, `spin.d`, `spin.gmub_b`, `spin.a`, `spin.hbar` | 1, -1, 1, 1, 1 | chain parameters |
//! | `time_scale` | 1 | T in c² = J h T²/ħ² |
//! | `quant.t`, `quant.l`, `quant.d`, `quant.hbar` | 1, 1, 1, 1 | Feynman time, transverse extent, dimension, ħ |
//! | `quant.r_policy` | `"mass_scale"` | `"mass_scale"` sets ln\|A m²\| = 0, `"fixed"` uses `quant.r` |
//! | `quant.r` | 1 | mass scale when fixed |
//! | `numerics.half_span_widths` | 20 | kink box half-width in units of the kink width |
//! | `numerics.grid_points` | 4001 | kink grid points |
//! | `numerics.spectral_points` | 4000 | interior points of the fluctuation operator |
//! | `numerics.tau_min`, `numerics.zeta_gate` | 1e-4, 1e-4 | zeta continuation |
//! | `m0.b`, `m0.v` | 1, 0 | sn wave scale and speed (c follows from h = -2D) |
//! | `m0.abscissa_factor`, `m0.t_cut`, `m0.n_nodes` | 1.5, 200, 4001 | Bromwich line (o in units of 2√3b², t_cut in b²) |
//! | `chain.sites`, `chain.dt`, `chain.steps`, `chain.record_every`, `chain.boundary` | 201, 0.01, 2000, 100, fixed | chain run |
//! | `chain.noise` | 0 | amplitude of seeded random tilts added to the embedded kink |
//! | `width_mode`, `density` | `eom_consistent`, `eq10` | kink conventions |
//! | `out_dir` | `"out"` | output directory (overridden by `--out` or `SPINKINK_OUT`) |
//! | `seed` | 7 | RNG seed |
//! | `sweep.command`, `sweep.axes` | `"corrections"`, none | sweep target and `[[sweep.axes]]` with `key`, `values` |

use crate::error::{Error, Result};
use crate::phi4::{DensityConvention, WidthMode};
use crate::semiclassics::QuantizationParams;
use crate::spin_chain::{Boundary, SpinChainParams};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RPolicy {
    #[default]
    MassScale,
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuantConfig {
    pub t: f64,
    pub l: f64,
    pub d: u32,
    pub hbar: f64,
    pub r_policy: RPolicy,
    pub r: f64,
}

impl Default for QuantConfig {
    fn default() -> Self {
        Self { t: 1.0, l: 1.0, d: 1, hbar: 1.0, r_policy: RPolicy::MassScale, r: 1.0 }
    }
}

impl QuantConfig {
    pub fn params(&self, d: u32) -> QuantizationParams {
        QuantizationParams { t: self.t, r: self.r, l: self.l, d, hbar: self.hbar }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Numerics {
    pub half_span_widths: f64,
    pub grid_points: usize,
    pub spectral_points: usize,
    pub tau_min: f64,
    pub zeta_gate: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        Self { half_span_widths: 20.0, grid_points: 4001, spectral_points: 4000, tau_min: 1e-4, zeta_gate: 1e-4 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct M0Config {
    pub b: f64,
    pub v: f64,
    pub abscissa_factor: f64,
    pub t_cut: f64,
    pub n_nodes: usize,
}

impl Default for M0Config {
    fn default() -> Self {
        Self { b: 1.0, v: 0.0, abscissa_factor: 1.5, t_cut: 200.0, n_nodes: 4001 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChainConfig {
    pub sites: usize,
    pub dt: f64,
    pub steps: usize,
    pub record_every: usize,
    pub boundary: Boundary,
    pub noise: f64,
}

impl Default for ChainConfig {
    fn default() -> Self {
        Self { sites: 201, dt: 0.01, steps: 2000, record_every: 100, boundary: Boundary::Fixed, noise: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    /// dotted config key, e.g. "spin.gmub_b"
    pub key: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    pub command: String,
    pub axes: Vec<Axis>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { command: "corrections".into(), axes: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub spin: SpinChainParams,
    pub time_scale: f64,
    pub quant: QuantConfig,
    pub numerics: Numerics,
    pub m0: M0Config,
    pub chain: ChainConfig,
    pub width_mode: WidthMode,
    pub density: DensityConvention,
    pub out_dir: String,
    pub seed: u64,
    pub sweep: SweepConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            spin: SpinChainParams::default(),
            time_scale: 1.0,
            quant: QuantConfig::default(),
            numerics: Numerics::default(),
            m0: M0Config::default(),
            chain: ChainConfig::default(),
            width_mode: WidthMode::default(),
            density: DensityConvention::default(),
            out_dir: "out".into(),
            seed: 7,
            sweep: SweepConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> Result<String> {
        let v = serde_json::to_value(self)?;
        let digest = Sha256::digest(serde_json::to_vec(&v)?);
        Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
    }

    /// Copy with one numeric field replaced by dotted key.
    pub fn with_value(&self, key: &str, value: f64) -> Result<Self> {
        let mut v = serde_json::to_value(self)?;
        let mut node = &mut v;
        for part in key.split('.') {
            node = node
                .get_mut(part)
                .ok_or_else(|| Error::Config(format!("unknown config key '{key}'")))?;
        }
        *node = if node.is_u64() || node.is_i64() {
            if value.fract() != 0.0 || value < 0.0 {
                return Err(Error::Config(format!("'{key}' needs a non-negative integer, got {value}")));
            }
            serde_json::json!(value as u64)
        } else if node.is_f64() {
            serde_json::json!(value)
        } else {
            return Err(Error::Config(format!("'{key}' is not numeric")));
        };
        serde_json::from_value(v).map_err(|e| Error::Config(e.to_string()))
    }
}
