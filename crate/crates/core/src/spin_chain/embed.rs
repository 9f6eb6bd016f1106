//! Static continuum profiles placed on the lattice, and the refinement study of their energy.

use super::{SpinChainParams, SpinConfiguration};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Sites n = 0..n_sites sample φ at z' = n - center; θ = 0 for a static profile.
pub fn embed_phi4_profile<F: Fn(f64) -> f64>(profile: F, n_sites: usize, center: f64) -> SpinConfiguration {
    let sites = (0..n_sites)
        .map(|n| {
            let phi = profile(n as f64 - center);
            [phi.cos(), 0.0, phi.sin()]
        })
        .collect();
    SpinConfiguration { sites }
}

/// Chain energy of a static angle profile sampled at spacing `h` (in units of a), relative to the
/// uniform state at the profile's asymptotic angles. Exchange becomes J/h per bond and on-site
/// terms are weighted by h, so h → 0 approaches the continuum functional.
pub fn embedded_excess_energy<F: Fn(f64) -> f64>(
    profile: F,
    params: &SpinChainParams,
    h: f64,
    half_span: f64,
) -> Result<f64> {
    if !(h > 0.0 && half_span > h) {
        return Err(Error::Domain(format!("need 0 < h < half_span (h={h}, half_span={half_span})")));
    }
    let n = (half_span / h).round() as i64;
    let onsite = |phi: f64| params.d * phi.sin().powi(2) - params.gmub_b * phi.cos();
    let (vac_lo, vac_hi) = (onsite(profile(-1e6)), onsite(profile(1e6)));
    let mut e = 0.0;
    let mut prev = profile(-(n as f64) * h);
    for i in -n..=n {
        let z = i as f64 * h;
        let phi = profile(z);
        let vac = if z < 0.0 {
            vac_lo
        } else if z > 0.0 {
            vac_hi
        } else {
            0.5 * (vac_lo + vac_hi)
        };
        e += h * (onsite(phi) - vac);
        if i > -n {
            e += params.j / h * (1.0 - (phi - prev).cos());
        }
        prev = phi;
    }
    Ok(e)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RefinementStudy {
    pub spacings: Vec<f64>,
    pub energies: Vec<f64>,
    /// log2 of successive difference ratios
    pub observed_orders: Vec<f64>,
    /// Richardson estimate of the h → 0 limit from the two finest levels
    pub extrapolated: f64,
}

/// Halve the spacing `levels - 1` times starting from `h0`.
pub fn refinement_study<F: Fn(f64) -> f64>(
    profile: F,
    params: &SpinChainParams,
    h0: f64,
    levels: usize,
    half_span: f64,
) -> Result<RefinementStudy> {
    if levels < 3 {
        return Err(Error::Domain("refinement study needs at least 3 levels".into()));
    }
    let spacings: Vec<f64> = (0..levels).map(|k| h0 / 2f64.powi(k as i32)).collect();
    let energies = spacings
        .iter()
        .map(|&h| embedded_excess_energy(&profile, params, h, half_span))
        .collect::<Result<Vec<_>>>()?;
    let observed_orders = energies
        .windows(3)
        .map(|w| ((w[0] - w[1]) / (w[1] - w[2])).abs().log2())
        .collect::<Vec<_>>();
    let p = observed_orders.last().copied().unwrap_or(2.0);
    let (e1, e2) = (energies[levels - 2], energies[levels - 1]);
    let extrapolated = e2 + (e2 - e1) / (2f64.powf(p) - 1.0);
    Ok(RefinementStudy { spacings, energies, observed_orders, extrapolated })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_profile_embeds_to_x_axis() {
        let c = embed_phi4_profile(|_| 0.0, 5, 2.0);
        assert!(c.sites.iter().all(|s| *s == [1.0, 0.0, 0.0]));
    }

    #[test]
    fn kink_tails_reach_vacuum_angles() {
        let v = 0.3;
        let c = embed_phi4_profile(|z| v * (0.5 * z).tanh(), 101, 50.0);
        let first = c.sites[0];
        let last = c.sites[100];
        assert!((first[0] - v.cos()).abs() < 1e-9 && (first[2] + v.sin()).abs() < 1e-9);
        assert!((last[0] - v.cos()).abs() < 1e-9 && (last[2] - v.sin()).abs() < 1e-9);
    }

    #[test]
    fn uniform_vacuum_has_zero_excess() {
        let p = SpinChainParams { j: 1.0, d: -1.0, gmub_b: 1.9, a: 1.0, hbar: 1.0 };
        let e = embedded_excess_energy(|_| 0.2, &p, 0.5, 20.0).unwrap();
        assert!(e.abs() < 1e-12);
    }

    #[test]
    fn second_order_convergence() {
        let p = SpinChainParams { j: 1.0, d: -1.0, gmub_b: 1.9, a: 1.0, hbar: 1.0 };
        let v = 0.31;
        let study = refinement_study(|z| v * (0.22 * z).tanh(), &p, 1.0, 5, 80.0).unwrap();
        for o in &study.observed_orders {
            assert!((o - 2.0).abs() < 0.05, "{:?}", study.observed_orders);
        }
    }
}
