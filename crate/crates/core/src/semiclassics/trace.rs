//! Vacuum-subtracted heat traces: spectral sums, the exact kink trace, the free factors of the
//! extra directions, and pointwise products of traces.

use super::spectrum::{free_dirichlet_spectrum, kink_fluctuation_spectrum};
use super::OperatorSpec;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;
use std::f64::consts::PI;

/// Sampled γ(τ).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatTrace {
    pub taus: Vec<f64>,
    pub gammas: Vec<f64>,
    pub subtraction: String,
    pub warnings: Vec<String>,
}

impl HeatTrace {
    pub fn from_fn<F: Fn(f64) -> f64>(taus: &[f64], f: F, subtraction: &str) -> Self {
        Self {
            taus: taus.to_vec(),
            gammas: taus.iter().map(|&t| f(t)).collect(),
            subtraction: subtraction.into(),
            warnings: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TracePart {
    weight: f64,
    eigenvalues: Vec<f64>,
    reference: Vec<f64>,
}

/// Σ w [e^{-λτ} - e^{-λ⁰τ}] over one or more matched spectra.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralTrace {
    parts: Vec<TracePart>,
    /// eigenvalues set to exactly zero as translational modes
    pub zero_modes: usize,
}

/// Eigenvalues with |λ| below this multiple of m² are treated as exact zero modes.
pub const ZERO_MODE_THRESHOLD: f64 = 1e-3;

impl SpectralTrace {
    fn part(spec: &OperatorSpec, weight: f64) -> Result<(TracePart, usize)> {
        let mut eigenvalues = kink_fluctuation_spectrum(spec)?.eigenvalues;
        let mut zero = 0;
        for l in eigenvalues.iter_mut() {
            if l.abs() < ZERO_MODE_THRESHOLD * spec.m * spec.m {
                *l = 0.0;
                zero += 1;
            }
        }
        Ok((TracePart { weight, eigenvalues, reference: free_dirichlet_spectrum(spec) }, zero))
    }

    pub fn new(spec: &OperatorSpec) -> Result<Self> {
        let (p, zero_modes) = Self::part(spec, 1.0)?;
        Ok(Self { parts: vec![p], zero_modes })
    }

    pub fn gamma(&self, tau: f64) -> f64 {
        self.parts
            .iter()
            .map(|p| {
                p.weight
                    * p.eigenvalues
                        .iter()
                        .zip(&p.reference)
                        .map(|(l, l0)| (-l * tau).exp() - (-l0 * tau).exp())
                        .sum::<f64>()
            })
            .sum()
    }

    /// Contribution of the upper half of each spectrum, where the grid dominates.
    pub fn tail_estimate(&self, tau: f64) -> f64 {
        self.parts
            .iter()
            .map(|p| {
                let n = p.eigenvalues.len();
                (p.weight
                    * p.eigenvalues[n / 2..]
                        .iter()
                        .zip(&p.reference[n / 2..])
                        .map(|(l, l0)| (-l * tau).exp() - (-l0 * tau).exp())
                        .sum::<f64>())
                .abs()
            })
            .sum()
    }
}

/// Richardson combination (4 γ_{h/2} - γ_h)/3 of the traces on a grid and its halving.
pub fn refined_kink_trace(spec: &OperatorSpec) -> Result<SpectralTrace> {
    let (coarse, z0) = SpectralTrace::part(spec, -1.0 / 3.0)?;
    let (fine, z1) = SpectralTrace::part(&spec.refined(), 4.0 / 3.0)?;
    if z0 != z1 {
        return Err(Error::GridTooCoarse(format!("zero-mode count changes under refinement ({z0} vs {z1})")));
    }
    Ok(SpectralTrace { parts: vec![coarse, fine], zero_modes: z1 })
}

/// Samples the subtracted trace of `spec` against the constant-potential operator on the same grid.
pub fn heat_trace_spectral(spec: &OperatorSpec, taus: &[f64]) -> Result<HeatTrace> {
    let st = SpectralTrace::new(spec)?;
    let mut warnings = Vec::new();
    if st.zero_modes > 0 {
        warnings.push(format!("{} eigenvalue(s) set to zero as translational modes", st.zero_modes));
    }
    let gammas = taus
        .iter()
        .map(|&t| {
            let tail = st.tail_estimate(t);
            if tail > 1e-8 {
                warnings.push(format!("tau = {t}: grid-mode contribution {tail:e} exceeds 1e-8"));
            }
            st.gamma(t)
        })
        .collect();
    Ok(HeatTrace {
        taus: taus.to_vec(),
        gammas,
        subtraction: format!("-d^2 + 4m^2, Dirichlet, {} interior points on [-L, L]", spec.grid_points),
        warnings,
    })
}

/// erf(2m√τ) + e^{-3m²τ} erf(m√τ): the subtracted trace of the reflectionless kink operator on the line.
pub fn exact_kink_trace(m: f64, tau: f64) -> f64 {
    let s = tau.sqrt();
    erf(2.0 * m * s) + (-3.0 * m * m * tau).exp() * erf(m * s)
}

/// c/√(4πτ) for the time direction.
pub fn free_factor_gamma2(c: f64, tau: f64) -> f64 {
    c / (4.0 * PI * tau).sqrt()
}

/// l^n (4πτ/l^n)^{-n/2}, n = d - 1, for the transverse directions.
pub fn free_factor_gamma3(l: f64, d: u32, tau: f64) -> f64 {
    let n = d.saturating_sub(1) as f64;
    if n == 0.0 {
        return 1.0;
    }
    let ln = l.powf(n);
    ln * (4.0 * PI * tau / ln).powf(-0.5 * n)
}

/// Pointwise product of traces sampled on one τ grid.
pub fn factorized_trace(traces: &[HeatTrace]) -> Result<HeatTrace> {
    let first = traces.first().ok_or_else(|| Error::Domain("no traces to multiply".into()))?;
    let mut out = first.clone();
    for t in &traces[1..] {
        if t.taus.len() != out.taus.len()
            || t.taus.iter().zip(&out.taus).any(|(a, b)| (a - b).abs() > 1e-14 * a.abs().max(b.abs()))
        {
            return Err(Error::GridMismatch("traces are sampled on different tau grids".into()));
        }
        for (g, h) in out.gammas.iter_mut().zip(&t.gammas) {
            *g *= h;
        }
        out.subtraction = format!("{} x {}", out.subtraction, t.subtraction);
        out.warnings.extend(t.warnings.iter().cloned());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::tridiag::symmetric_tridiagonal_eigenvalues;
    use nalgebra::DMatrix;

    #[test]
    fn refined_fd_trace_matches_exact_trace() {
        let spec = OperatorSpec::kink(1.0, 20.0, 2000);
        let st = refined_kink_trace(&spec).unwrap();
        assert_eq!(st.zero_modes, 1);
        for tau in [0.05, 0.2, 1.0, 3.0, 10.0] {
            let (g, e) = (st.gamma(tau), exact_kink_trace(1.0, tau));
            assert!((g - e).abs() < 2e-5, "tau {tau}: {g} vs {e}");
        }
    }

    #[test]
    fn long_time_limit_counts_the_zero_mode_only() {
        let h = heat_trace_spectral(&OperatorSpec::kink(1.0, 20.0, 1000), &[50.0, 200.0]).unwrap();
        for g in &h.gammas {
            assert!((g - 1.0).abs() < 1e-5, "{g}");
        }
        assert!((exact_kink_trace(1.0, 1e6) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn free_against_free_is_zero() {
        let h = heat_trace_spectral(&OperatorSpec::free(1.0, 10.0, 200), &[0.01, 0.1, 1.0]).unwrap();
        assert!(h.gammas.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn exact_trace_small_tau_behaviour() {
        // leading heat-kernel coefficient: -τ ∫V/√(4πτ) = 6m√τ/√π
        let m = 1.3;
        for tau in [1e-6, 1e-8] {
            let lead = 6.0 * m * (tau / PI).sqrt();
            assert!((exact_kink_trace(m, tau) / lead - 1.0).abs() < 10.0 * m * m * tau);
        }
    }

    #[test]
    fn exact_trace_rises_then_falls() {
        let taus: Vec<f64> = (1..400).map(|i| 0.05 * i as f64).collect();
        let g: Vec<f64> = taus.iter().map(|&t| exact_kink_trace(1.0, t)).collect();
        let peak = g.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
        assert!(g[..=peak].windows(2).all(|w| w[1] > w[0]));
        assert!(g[peak..].windows(2).all(|w| w[1] <= w[0]));
        assert!(g[peak] > 1.1 && taus[peak] > 0.2 && taus[peak] < 1.0);
    }

    #[test]
    fn separable_rectangle_oracle() {
        // 2D five-point Dirichlet Laplacian on an nx x ny grid vs the product of two 1D traces
        let (nx, ny, hx, hy) = (9usize, 7usize, 0.3, 0.45);
        let n = nx * ny;
        let mut a = DMatrix::<f64>::zeros(n, n);
        for i in 0..nx {
            for j in 0..ny {
                let k = i * ny + j;
                a[(k, k)] = 2.0 / (hx * hx) + 2.0 / (hy * hy);
                if i + 1 < nx {
                    a[(k, k + ny)] = -1.0 / (hx * hx);
                    a[(k + ny, k)] = -1.0 / (hx * hx);
                }
                if j + 1 < ny {
                    a[(k, k + 1)] = -1.0 / (hy * hy);
                    a[(k + 1, k)] = -1.0 / (hy * hy);
                }
            }
        }
        let eig2 = a.symmetric_eigenvalues();
        let line = |n: usize, h: f64| {
            symmetric_tridiagonal_eigenvalues(&vec![2.0 / (h * h); n], &vec![-1.0 / (h * h); n - 1]).unwrap()
        };
        let (ex, ey) = (line(nx, hx), line(ny, hy));
        let taus = [0.01, 0.1, 0.5, 2.0];
        let tx = HeatTrace::from_fn(&taus, |t| ex.iter().map(|l| (-l * t).exp()).sum(), "none");
        let ty = HeatTrace::from_fn(&taus, |t| ey.iter().map(|l| (-l * t).exp()).sum(), "none");
        let prod = factorized_trace(&[tx, ty]).unwrap();
        for (t, g) in taus.iter().zip(&prod.gammas) {
            let direct: f64 = eig2.iter().map(|l| (-l * t).exp()).sum();
            assert!((g - direct).abs() < 1e-6 * direct, "{g} vs {direct}");
        }
    }

    #[test]
    fn product_with_unit_trace_is_identity_and_grids_must_match() {
        let taus = [0.1, 1.0];
        let a = HeatTrace::from_fn(&taus, |t| exact_kink_trace(1.0, t), "kink");
        let one = HeatTrace::from_fn(&taus, |_| 1.0, "none");
        assert_eq!(factorized_trace(&[a.clone(), one]).unwrap().gammas, a.gammas);
        let other = HeatTrace::from_fn(&[0.1, 2.0], |_| 1.0, "none");
        assert!(matches!(factorized_trace(&[a, other]), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn d3_small_tau_power_from_log_log_fit() {
        let (m, c, l) = (1.0, 1.0, 2.0);
        let g = |t: f64| exact_kink_trace(m, t) * free_factor_gamma2(c, t) * free_factor_gamma3(l, 3, t);
        let (t1, t2) = (1e-7, 1e-6);
        let slope = (g(t2) / g(t1)).ln() / (t2 / t1).ln();
        // τ^{1/2} · τ^{-1/2} · τ^{-1}
        assert!((slope + 1.0).abs() < 1e-4, "{slope}");
    }
}
