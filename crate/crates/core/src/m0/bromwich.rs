//! Inverse Laplace transform of ĝ(σ) = γ̂(-σ) along Re σ = o.
//!
//! The large-|σ| expansion ĝ ~ Σ h_k (σ + 2√3b²)^{-k-1/2} is inverted exactly; only the
//! remainder is integrated numerically, with ω = c sinh t and a trapezoid rule in t.
//! The unstable band [3b², 2√3b²] is also handled through its spectral density, and the
//! large-τ tail from the edge σ = 0 through its Watson expansion.

use super::green::g_hat_sigma;
use super::ContourSpec;
use crate::error::{Error, Result};
use crate::numerics::quad::gauss_legendre;
use crate::special::k_imag;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

pub const SERIES_TERMS: usize = 8;

fn shift(b: f64) -> f64 {
    2.0 * 3f64.sqrt() * b * b
}

/// Γ(k + 1/2)
fn gamma_half_up(k: usize) -> f64 {
    (0..k).fold(PI.sqrt(), |g, j| g * (j as f64 + 0.5))
}

/// Γ(1/2 - k)
fn gamma_half_down(k: usize) -> f64 {
    (0..k).fold(PI.sqrt(), |g, j| g / (-0.5 - j as f64))
}

fn binomial_minus_half(c: f64, n: usize) -> Vec<f64> {
    let mut out = vec![1.0; n];
    for k in 1..n {
        out[k] = out[k - 1] * (-0.5 - (k - 1) as f64) / k as f64 * c;
    }
    out
}

fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    (0..n).map(|k| (0..=k).map(|i| a[i] * b[k - i]).sum()).collect()
}

/// h_0..h_{n-1} of ĝ(σ) = Σ h_k σ'^{-k-1/2}, σ' = σ + 2√3b².
pub fn asymptotic_coefficients(b: f64, n: usize) -> Vec<f64> {
    let (k, e) = (k_imag(), crate::special::e_imag());
    let (a, b2) = (shift(b), b * b);
    let n2 = 2.0 * k;
    let n1 = -4.0 * k * a - 6.0 * b2 * (k - e);
    let n0 = 2.0 * k * a * a + 6.0 * b2 * (k - e) * a - 12.0 * b2 * b2 * k;
    let mut num = vec![0.0; n];
    for (i, v) in [n2, n1, n0].into_iter().enumerate().take(n) {
        num[i] = v;
    }
    let mut prod = num;
    for ei in super::green::band_edges(b) {
        prod = mul(&prod, &binomial_minus_half(ei - a, n));
    }
    let mut h: Vec<f64> = prod.into_iter().map(|x| x / b).collect();
    h[0] -= 2.0 * k / b;
    h
}

/// Exact inverse of the truncated expansion; zero for τ ≤ 0.
pub fn series_part(tau: f64, b: f64, h: &[f64]) -> f64 {
    if tau <= 0.0 {
        return 0.0;
    }
    let damp = (-shift(b) * tau).exp();
    h.iter()
        .enumerate()
        .map(|(k, hk)| hk * tau.powf(k as f64 - 0.5) / gamma_half_up(k))
        .sum::<f64>()
        * damp
}

fn series_at(sigma: C64, b: f64, h: &[f64]) -> C64 {
    let sp = sigma + shift(b);
    let x = sp.inv();
    let mut acc = C64::new(0.0, 0.0);
    for hk in h.iter().rev() {
        acc = acc * x + hk;
    }
    acc / sp.sqrt()
}

/// ĝ minus its truncated large-|σ| expansion.
pub fn remainder(sigma: C64, b: f64, h: &[f64]) -> C64 {
    g_hat_sigma(sigma, b) - series_at(sigma, b, h)
}

#[derive(Debug, Clone)]
struct Node {
    sigma: C64,
    /// trapezoid weight × dω/dt × R(σ) / 2π
    wr: C64,
}

/// Cached remainder values on one Bromwich line.
#[derive(Debug, Clone)]
pub struct BromwichEngine {
    pub b: f64,
    pub o: f64,
    pub t_cut: f64,
    /// scale of the sinh map, the distance from the line to the nearest singularity
    pub c: f64,
    h: Vec<f64>,
    nodes: Vec<Node>,
}

/// γ(τ) with its imaginary residue and the absolute sum of terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BromwichValue {
    pub re: f64,
    pub im: f64,
    pub term_scale: f64,
}

impl BromwichEngine {
    fn build(b: f64, o: f64, c: f64, t_cut: f64, n_nodes: usize) -> Self {
        let h = asymptotic_coefficients(b, SERIES_TERMS + 1);
        let n = n_nodes.max(3) | 1;
        let t_max = (t_cut / c).asinh();
        let dt = 2.0 * t_max / (n - 1) as f64;
        let nodes = (0..n)
            .map(|i| {
                let t = -t_max + i as f64 * dt;
                let sigma = C64::new(o, c * t.sinh());
                let edge = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
                let wr = remainder(sigma, b, &h) * (edge * dt * c * t.cosh() / (2.0 * PI));
                Node { sigma, wr }
            })
            .collect();
        Self { b, o, t_cut, c, h, nodes }
    }

    /// Line right of every singularity.
    pub fn new(b: f64, spec: &ContourSpec) -> Result<Self> {
        spec.check(b)?;
        Ok(Self::build(b, spec.o, spec.o - shift(b), spec.t_cut, spec.n_nodes))
    }

    /// Line in the gap 0 < o < 3b²; inverts only the part of ĝ left of the line.
    pub fn gap(b: f64, o: f64, t_cut: f64, n_nodes: usize) -> Result<Self> {
        let b2 = b * b;
        if !(o > 0.0 && o < 3.0 * b2) {
            return Err(Error::Domain(format!("gap abscissa {o} must lie in (0, {})", 3.0 * b2)));
        }
        Ok(Self::build(b, o, o.min(3.0 * b2 - o), t_cut, n_nodes))
    }

    pub fn value(&self, tau: f64) -> BromwichValue {
        let series = series_part(tau, self.b, &self.h);
        let mut acc = C64::new(series, 0.0);
        let mut scale = series.abs();
        for n in &self.nodes {
            let term = (n.sigma * tau).exp() * n.wr;
            acc += term;
            scale += term.norm();
        }
        BromwichValue { re: acc.re, im: acc.im, term_scale: scale }
    }

    /// Real part, rejected if the imaginary residue exceeds 1e-8 of the term scale.
    pub fn gamma(&self, tau: f64) -> Result<f64> {
        let v = self.value(tau);
        if !(v.im.abs() <= 1e-8 * v.term_scale.max(1e-300)) || !v.re.is_finite() {
            return Err(Error::Convergence(format!(
                "Bromwich sum at tau = {tau} has imaginary residue {:e} (scale {:e})",
                v.im, v.term_scale
            )));
        }
        Ok(v.re)
    }

    pub fn expansion(&self) -> &[f64] {
        &self.h
    }
}

/// Part of the trace from the spectrum below the gap: γ₊(τ) through a gap line at min(1.5b², 1/τ).
pub fn gamma_plus(tau: f64, b: f64, t_cut: f64, n_nodes: usize) -> Result<f64> {
    let o = (1.5 * b * b).min(1.0 / tau.max(1e-300));
    BromwichEngine::gap(b, o, t_cut, n_nodes)?.gamma(tau)
}

/// -(1/π) Im ĝ(σ + i0)
pub fn band_density(sigma: f64, b: f64) -> f64 {
    -g_hat_sigma(C64::new(sigma, 0.0), b).im / PI
}

/// Gauss nodes (σ, weight × density) on the unstable band [3b², 2√3b²] with σ = α + (β-α)(1 - cos θ)/2.
pub fn unstable_band_nodes(b: f64, n: usize) -> Vec<(f64, f64)> {
    let (lo, hi) = (3.0 * b * b, shift(b));
    let (x, w) = gauss_legendre(n);
    x.iter()
        .zip(&w)
        .map(|(&xi, &wi)| {
            let th = 0.5 * PI * (xi + 1.0);
            let sigma = lo + 0.5 * (hi - lo) * (1.0 - th.cos());
            let jac = 0.5 * PI * 0.5 * (hi - lo) * th.sin();
            (sigma, wi * jac * band_density(sigma, b))
        })
        .collect()
}

/// Contribution of the unstable band: ∫ ρ(σ) e^{στ} dσ over [3b², 2√3b²].
pub fn gamma_minus(tau: f64, b: f64) -> f64 {
    unstable_band_nodes(b, 64).iter().map(|(s, w)| w * (s * tau).exp()).sum()
}

/// Taylor coefficients of f(σ) = √σ (ĝ(σ) - vacuum part) at σ = 0, so that
/// γ₊(τ) ~ Σ g_k τ^{-k-1/2} / Γ(1/2 - k) for large τ.
pub fn watson_coefficients(b: f64, n: usize) -> Vec<f64> {
    let (r, m) = (1.5 * b * b, 128usize);
    let [e1, e2, _, e4, e5] = super::green::band_edges(b);
    let f = |s: C64| {
        let p = -((s + e1) * (s + e2)).sqrt() * (s + e4).sqrt() * (s + e5).sqrt();
        super::green::numerator(-s, b) / (b * p)
    };
    let vals: Vec<C64> = (0..m).map(|j| f(C64::from_polar(r, 2.0 * PI * j as f64 / m as f64))).collect();
    (0..n)
        .map(|k| {
            let s: C64 = vals
                .iter()
                .enumerate()
                .map(|(j, v)| v * C64::from_polar(1.0, -2.0 * PI * (j * k) as f64 / m as f64))
                .sum();
            s.re / (m as f64 * r.powi(k as i32))
        })
        .collect()
}

/// Σ_k g_k τ^{-k-1/2} / Γ(1/2 - k)
pub fn watson_tail(tau: f64, g: &[f64]) -> f64 {
    g.iter()
        .enumerate()
        .map(|(k, gk)| gk * tau.powf(-(k as f64) - 0.5) / gamma_half_down(k))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quad::integrate;
    use crate::special::jacobi_sn_imag;

    fn engine(b: f64) -> BromwichEngine {
        BromwichEngine::new(b, &ContourSpec::for_b(b)).unwrap()
    }

    #[test]
    fn reference_values_at_unit_b() {
        let e = engine(1.0);
        for (tau, want) in [(0.1, 2.97252), (1.0, 53.0147), (5.0, 3.0389e7)] {
            let g = e.gamma(tau).unwrap();
            assert!((g / want - 1.0).abs() < 2e-5, "tau {tau}: {g}");
        }
    }

    #[test]
    fn leading_coefficient_is_the_potential_integral() {
        // γ ≈ -τ^{1/2} ∫(V - V₀) / √(4π) with V = -6b² sn², V₀ = 2√3 b², over 4K/b
        let b = 0.8;
        let h = asymptotic_coefficients(b, 4);
        assert!(h[0].abs() < 1e-13);
        let per = 4.0 * k_imag() / b;
        let iv = integrate(|z| -6.0 * b * b * jacobi_sn_imag(z, b).powi(2) - shift(b), 0.0, per, 1e-13, 1e-13)
            .unwrap()
            .value;
        assert!((h[1] + iv / 4.0).abs() < 1e-10, "{} vs {}", h[1], -iv / 4.0);
    }

    #[test]
    fn remainder_decays_fast() {
        let h = asymptotic_coefficients(1.0, SERIES_TERMS + 1);
        let r1 = remainder(C64::new(5.0, 50.0), 1.0, &h).norm();
        let r2 = remainder(C64::new(5.0, 100.0), 1.0, &h).norm();
        assert!(r2 < r1 / 300.0, "{r1} {r2}");
    }

    #[test]
    fn causality() {
        let e = engine(1.0);
        let max = (1..=100).map(|i| e.gamma(0.01 * i as f64).unwrap().abs()).fold(0.0, f64::max);
        for tau in [-0.01, -0.1, -0.5, -1.0, -3.0] {
            let g = e.value(tau).re;
            assert!(g.abs() < 1e-6 * max, "tau {tau}: {g}");
        }
    }

    #[test]
    fn doubling_the_cut() {
        let a = engine(1.0).gamma(1.0).unwrap();
        let spec = ContourSpec { t_cut: 400.0, ..ContourSpec::for_b(1.0) };
        let b = BromwichEngine::new(1.0, &spec).unwrap().gamma(1.0).unwrap();
        assert!(((a - b) / a).abs() < 1e-7);
    }

    #[test]
    fn abscissa_independence() {
        for tau in [0.3, 2.0] {
            let a = BromwichEngine::new(1.0, &ContourSpec::with_abscissa_factor(1.0, 1.1)).unwrap().gamma(tau).unwrap();
            let c = BromwichEngine::new(1.0, &ContourSpec::with_abscissa_factor(1.0, 2.0)).unwrap().gamma(tau).unwrap();
            assert!(((a - c) / a).abs() < 1e-9, "{a} {c}");
        }
    }

    #[test]
    fn b_scaling() {
        // γ_b(τ) = γ_1(b² τ)
        let one = engine(1.0);
        for b in [0.6, 1.7] {
            let eb = engine(b);
            for tau in [0.2, 1.0] {
                let (x, y) = (eb.gamma(tau / (b * b)).unwrap(), one.gamma(tau).unwrap());
                assert!(((x - y) / y).abs() < 1e-8, "b {b} tau {tau}: {x} {y}");
            }
        }
    }

    #[test]
    fn unstable_band_counts_two_states() {
        assert!((gamma_minus(0.0, 1.0) - 2.0).abs() < 1e-10, "{}", gamma_minus(0.0, 1.0));
        assert!((gamma_minus(0.0, 0.7) - 2.0).abs() < 1e-10);
        let d = band_density(3.2, 1.0);
        assert!(d > 0.0);
    }

    #[test]
    fn split_of_the_trace() {
        let e = engine(1.0);
        for tau in [0.5, 1.0, 2.0] {
            let total = e.gamma(tau).unwrap();
            let parts = gamma_plus(tau, 1.0, 200.0, 4001).unwrap() + gamma_minus(tau, 1.0);
            assert!(((total - parts) / total).abs() < 1e-9, "tau {tau}: {total} vs {parts}");
        }
    }

    #[test]
    fn watson_tail_matches_gap_inversion() {
        let g = watson_coefficients(1.0, 10);
        for tau in [15.0, 30.0] {
            let direct = gamma_plus(tau, 1.0, 200.0, 4001).unwrap();
            let asym = watson_tail(tau, &g);
            assert!(((direct - asym) / direct).abs() < 1e-6, "tau {tau}: {direct} vs {asym}");
        }
    }

    #[test]
    fn gamma_function_helpers() {
        assert!((gamma_half_up(3) - statrs::function::gamma::gamma(3.5)).abs() < 1e-13);
        assert!((gamma_half_down(2) - statrs::function::gamma::gamma(-1.5)).abs() < 1e-13);
    }
}
