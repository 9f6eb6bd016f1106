//! Energy correction per wave period from the Bromwich-inverted trace.
//!
//! ζ(s)Γ(s) = ∫ τ^{s-1} F(τ) γ(τ) dτ with F = γ₂γ₃ = C τ^{-d/2}. On [0, S] the trace comes
//! from the Bromwich line; beyond S it is split into the stable part γ₊ (gap line, then its
//! Watson tail) and the unstable band γ₋, whose growing exponentials are continued by
//! rotating the τ path to arg τ = 3π/4. That continuation makes ΔE complex.

use super::bromwich::{gamma_plus, unstable_band_nodes, watson_coefficients, BromwichEngine};
use super::{ContourSpec, SnWaveParams};
use crate::error::{Error, Result};
use crate::numerics::quad::integrate;
use crate::semiclassics::zeta::{small_tau_part, Ladder, ZetaOptions, EULER_GAMMA};
use crate::semiclassics::{free_factor_gamma2, free_factor_gamma3, Provenance, QuantizationParams};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Times in units of 1/b².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct M0Options {
    pub zeta: ZetaOptions,
    pub split: f64,
    pub tau_switch: f64,
    pub watson_terms: usize,
    pub band_nodes: usize,
}

impl Default for M0Options {
    fn default() -> Self {
        Self { zeta: ZetaOptions::default(), split: 1.0, tau_switch: 10.0, watson_terms: 8, band_nodes: 64 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct M0Parts {
    /// continued ladder fit over [0, τ_min]
    pub small_finite: f64,
    /// ∫ F γ dτ/τ over [τ_min, S]
    pub window: f64,
    /// ∫ F γ₊ dτ/τ over [S, τ_switch]
    pub stable_window: f64,
    pub stable_tail: f64,
    pub unstable_re: f64,
    pub unstable_im: f64,
    pub pole: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct M0Correction {
    pub d: u32,
    pub b: f64,
    pub contour: ContourSpec,
    pub zeta_prime_re: f64,
    pub zeta_prime_im: f64,
    pub zeta_at_zero: f64,
    pub delta_e_re: f64,
    pub delta_e_im: f64,
    /// sum of the three estimates below
    pub error_bar: f64,
    /// |ΔE(t_cut) - ΔE(2 t_cut)|
    pub truncation_change: f64,
    /// ħ/T × |ζ'(0)| difference between the two ladder fits
    pub variant_spread: f64,
    /// ħ/T × last Watson term
    pub watson_last_term: f64,
    pub parts: M0Parts,
    pub split: f64,
    pub tau_min: f64,
    pub tau_switch: f64,
    pub continuation: String,
    pub provenance: Provenance,
}

struct Assembly {
    zeta_prime: C64,
    zeta_prime_alt: f64,
    pole: f64,
    watson_last: f64,
    parts: M0Parts,
}

fn log_integral<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<f64> {
    let mut total = 0.0;
    let (x0, x1) = (lo.ln(), hi.ln());
    let mut a = x0;
    while a < x1 {
        let bnd = (a + 2.0).min(x1);
        total += integrate(|x| f(x.exp()), a, bnd, 1e-14, 1e-12)?.value;
        a = bnd;
    }
    Ok(total)
}

/// ∫ C τ^{-q-1} e^{στ} dτ along τ = S + r e^{3iπ/4}, r ≥ 0.
fn rotated_kernel(sigma: f64, s: f64, q: f64, c: f64) -> Result<C64> {
    let dir = C64::from_polar(1.0, 0.75 * PI);
    let f = |r: f64| {
        let tau = C64::new(s, 0.0) + dir * r;
        tau.powf(-q - 1.0) * (tau * sigma).exp() * dir * c
    };
    let r_max = 45.0 * 2f64.sqrt() / sigma;
    let scale = (sigma * s).exp() * s.powf(-q - 1.0) * c;
    let re = integrate(|r| f(r).re, 0.0, r_max, 1e-15 * scale, 1e-13)?.value;
    let im = integrate(|r| f(r).im, 0.0, r_max, 1e-15 * scale, 1e-13)?.value;
    Ok(C64::new(re, im))
}

fn assemble(params: &SnWaveParams, q: &QuantizationParams, contour: &ContourSpec, opts: &M0Options) -> Result<Assembly> {
    let (b, d) = (params.b, q.d);
    let b2 = b * b;
    let qq = 0.5 * d as f64;
    let (c, l) = (params.c, q.l);
    let cf = free_factor_gamma2(c, 1.0) * free_factor_gamma3(l, d, 1.0);
    let f = move |t: f64| free_factor_gamma2(c, t) * free_factor_gamma3(l, d, t);
    let engine = BromwichEngine::new(b, contour)?;
    let total = |t: f64| f(t) * engine.gamma(t).unwrap_or(f64::NAN);
    let (split, tau_min, tau_sw) = (opts.split / b2, opts.zeta.tau_min / b2, opts.tau_switch / b2);
    let ladder = Ladder { p0: 0.5 - qq, step: 1.0 };
    let va = small_tau_part(&total, ladder, split, tau_min, opts.zeta.degrees.0)?;
    let vb = small_tau_part(&total, ladder, split, tau_min, opts.zeta.degrees.1)?;
    let window = log_integral(total, tau_min, split)?;

    let stable = |t: f64| f(t) * gamma_plus(t, b, contour.t_cut, contour.n_nodes).unwrap_or(f64::NAN);
    let stable_window = log_integral(stable, split, tau_sw)?;
    let g = watson_coefficients(b, opts.watson_terms);
    let tail_terms: Vec<f64> = g
        .iter()
        .enumerate()
        .map(|(k, gk)| {
            let kf = k as f64;
            let gamma_down = (0..k).fold(PI.sqrt(), |acc, j| acc / (-0.5 - j as f64));
            cf * gk * tau_sw.powf(-qq - kf - 0.5) / ((qq + kf + 0.5) * gamma_down)
        })
        .collect();
    let stable_tail: f64 = tail_terms.iter().sum();

    let mut unstable = C64::new(0.0, 0.0);
    for (sigma, w) in unstable_band_nodes(b, opts.band_nodes) {
        unstable += rotated_kernel(sigma, split, qq, cf)? * w;
    }

    let rest = window + stable_window + stable_tail;
    let zp = |v: &crate::semiclassics::zeta::Variant| v.finite + rest + EULER_GAMMA * v.pole;
    let zeta_prime = C64::new(zp(&vb), 0.0) + unstable;
    if !zeta_prime.re.is_finite() || !zeta_prime.im.is_finite() {
        return Err(Error::Convergence("non-finite zeta'(0) for the sn wave".into()));
    }
    Ok(Assembly {
        zeta_prime,
        zeta_prime_alt: zp(&va) + unstable.re,
        pole: vb.pole,
        watson_last: tail_terms.last().copied().unwrap_or(0.0).abs(),
        parts: M0Parts {
            small_finite: vb.finite,
            window,
            stable_window,
            stable_tail,
            unstable_re: unstable.re,
            unstable_im: unstable.im,
            pole: vb.pole,
        },
    })
}

fn energy(a: &Assembly, q: &QuantizationParams, j: f64) -> C64 {
    -(q.hbar / q.t) * (a.zeta_prime - q.a_mag(j).ln() * a.pole)
}

/// ΔE per wave period 4K(i)/b in d dimensions, with error bars.
pub fn delta_e_m0(params: &SnWaveParams, q: &QuantizationParams, contour: &ContourSpec, opts: &M0Options) -> Result<M0Correction> {
    q.validate()?;
    params.check()?;
    contour.check(params.b)?;
    let main = assemble(params, q, contour, opts)?;
    let spread = (main.zeta_prime.re - main.zeta_prime_alt).abs();
    if !(spread <= opts.zeta.gate) {
        return Err(Error::ContinuationUnstable { a: main.zeta_prime_alt, b: main.zeta_prime.re, diff: spread });
    }
    let doubled = assemble(params, q, &ContourSpec { t_cut: 2.0 * contour.t_cut, ..*contour }, opts)?;
    let de = energy(&main, q, params.j);
    let truncation_change = (de - energy(&doubled, q, params.j)).norm();
    let variant_spread = q.hbar / q.t * spread;
    let watson_last_term = q.hbar / q.t * main.watson_last;
    let b2 = params.b * params.b;
    Ok(M0Correction {
        d: q.d,
        b: params.b,
        contour: *contour,
        zeta_prime_re: main.zeta_prime.re,
        zeta_prime_im: main.zeta_prime.im,
        zeta_at_zero: main.pole,
        delta_e_re: de.re,
        delta_e_im: de.im,
        error_bar: truncation_change + variant_spread + watson_last_term,
        truncation_change,
        variant_spread,
        watson_last_term,
        parts: main.parts,
        split: opts.split / b2,
        tau_min: opts.zeta.tau_min / b2,
        tau_switch: opts.tau_switch / b2,
        continuation: "unstable band continued along arg tau = 3pi/4 (sigma + i0 side)".into(),
        provenance: Provenance::SpectralNumeric,
    })
}
