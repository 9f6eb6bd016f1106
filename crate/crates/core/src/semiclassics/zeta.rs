//! ζ(0) and ζ'(0) of ζ(s) = Γ(s)⁻¹ ∫ τ^{s-1} γ(τ) dτ by splitting the Mellin integral.
//!
//! Near τ = 0 the trace is represented by a power ladder τ^{p0 + j·step} fitted on [τ_min, split];
//! its Mellin transform over [0, τ_min] is continued analytically, and the rest is integrated
//! directly in x = ln τ.

use super::Provenance;
use crate::error::{Error, Result};
use crate::numerics::cheb::{chebyshev_points, fit};
use crate::numerics::quad::integrate;
use serde::{Deserialize, Serialize};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Powers p0, p0 + step, p0 + 2 step, ... of the small-τ expansion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ladder {
    pub p0: f64,
    pub step: f64,
}

impl Ladder {
    pub const INTEGER: Ladder = Ladder { p0: 0.0, step: 1.0 };

    /// γ₁ γ₂ γ₃ in d dimensions.
    pub fn kink_total(d: u32) -> Self {
        Ladder { p0: 0.5 * (1.0 - d as f64), step: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaOptions {
    pub tau_min: f64,
    /// polynomial degrees of the two fitted variants
    pub degrees: (usize, usize),
    /// largest allowed |ζ'(0)| difference between the variants
    pub gate: f64,
}

impl Default for ZetaOptions {
    fn default() -> Self {
        Self { tau_min: 1e-4, degrees: (16, 22), gate: 1e-4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZetaResult {
    pub zeta_prime_at_zero: f64,
    pub zeta_at_zero: f64,
    pub split_point: f64,
    pub tau_min: f64,
    pub asymptotic_terms_used: String,
    /// |ζ'(0)| difference between the two fitted variants
    pub variant_spread: f64,
    /// leading (power, coefficient) pairs of the fitted expansion
    pub leading_terms: Vec<(f64, f64)>,
    pub delta_e: Option<f64>,
    pub provenance: Provenance,
}

/// Ladder fit on [τ_min, split] continued to [0, τ_min]: the 1/s pole, the finite part and the terms.
pub struct Variant {
    pub pole: f64,
    pub finite: f64,
    pub terms: Vec<(f64, f64)>,
}

pub fn small_tau_part<F: Fn(f64) -> f64>(gamma: &F, ladder: Ladder, split: f64, tau_min: f64, degree: usize) -> Result<Variant> {
    let hi = split.powf(ladder.step);
    let u = chebyshev_points(tau_min.powf(ladder.step), hi, 4 * degree + 8);
    let y: Vec<f64> = u
        .iter()
        .map(|&u| {
            let tau = u.powf(1.0 / ladder.step);
            gamma(tau) * tau.powf(-ladder.p0)
        })
        .collect();
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("trace is not finite on the fit window".into()));
    }
    let a = fit(&u, &y, degree, hi)?.monomial_coeffs();
    let (mut pole, mut finite) = (0.0, 0.0);
    let mut terms = Vec::with_capacity(a.len());
    for (j, &aj) in a.iter().enumerate() {
        let p = ladder.p0 + j as f64 * ladder.step;
        terms.push((p, aj));
        if p.abs() < 1e-12 {
            pole += aj;
            finite += aj * tau_min.ln();
        } else {
            finite += aj * tau_min.powf(p) / p;
        }
    }
    Ok(Variant { pole, finite, terms })
}

/// ∫_{τ_min}^∞ γ(τ) dτ/τ, integrated in ln τ up to where γ has decayed below 1e-17 of its scale.
fn large_tau_part<F: Fn(f64) -> f64>(gamma: &F, tau_min: f64, split: f64) -> Result<f64> {
    let x0 = tau_min.ln();
    let scale = [tau_min, split, 1.0]
        .iter()
        .map(|&t| gamma(t).abs())
        .fold(1e-300, f64::max);
    let mut x1 = split.ln().max(x0) + 2.0;
    while (0..4).any(|k| gamma((x1 + k as f64).exp()).abs() > 1e-17 * scale) {
        x1 += 4.0;
        if x1 > 400.0 {
            return Err(Error::Convergence(
                "trace does not decay at large tau; remove zero modes before continuing".into(),
            ));
        }
    }
    let mut total = 0.0;
    let mut lo = x0;
    while lo < x1 {
        let hi = (lo + 4.0).min(x1);
        total += integrate(|x| gamma(x.exp()), lo, hi, 1e-15 * scale, 1e-13)?.value;
        lo = hi;
    }
    Ok(total)
}

/// ζ(0) and ζ'(0) of the trace `gamma`, gated on the agreement of two fitted variants.
pub fn zeta_prime_at_zero<F: Fn(f64) -> f64>(gamma: F, ladder: Ladder, split: f64, opts: &ZetaOptions) -> Result<ZetaResult> {
    if !(opts.tau_min > 0.0 && split > opts.tau_min && ladder.step > 0.0) {
        return Err(Error::Domain(format!(
            "need 0 < tau_min < split and step > 0 (tau_min={}, split={split}, step={})",
            opts.tau_min, ladder.step
        )));
    }
    let large = large_tau_part(&gamma, opts.tau_min, split)?;
    let va = small_tau_part(&gamma, ladder, split, opts.tau_min, opts.degrees.0)?;
    let vb = small_tau_part(&gamma, ladder, split, opts.tau_min, opts.degrees.1)?;
    let zp = |v: &Variant| v.finite + large + EULER_GAMMA * v.pole;
    let (za, zb) = (zp(&va), zp(&vb));
    let spread = (za - zb).abs();
    if !(spread <= opts.gate) {
        return Err(Error::ContinuationUnstable { a: za, b: zb, diff: spread });
    }
    Ok(ZetaResult {
        zeta_prime_at_zero: zb,
        zeta_at_zero: vb.pole,
        split_point: split,
        tau_min: opts.tau_min,
        asymptotic_terms_used: format!(
            "tau^({} + {} j), Chebyshev degrees {} and {} on [{}, {}]",
            ladder.p0, ladder.step, opts.degrees.0, opts.degrees.1, opts.tau_min, split
        ),
        variant_spread: spread,
        leading_terms: vb.terms.into_iter().take(4).collect(),
        delta_e: None,
        provenance: Provenance::SpectralNumeric,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn zp<F: Fn(f64) -> f64>(g: F, ladder: Ladder, split: f64) -> ZetaResult {
        zeta_prime_at_zero(g, ladder, split, &ZetaOptions::default()).unwrap()
    }

    #[test]
    fn single_mode() {
        for lam in [0.3, 1.0, 2.5] {
            let r = zp(|t| (-lam * t).exp(), Ladder::INTEGER, 1.0);
            assert!((r.zeta_prime_at_zero + f64::ln(lam)).abs() < 1e-8, "{lam}: {}", r.zeta_prime_at_zero);
            assert!((r.zeta_at_zero - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn two_level_synthetic() {
        let r = zp(|t| 2.0 * (-t).exp() + (-3.0 * t).exp(), Ladder::INTEGER, 1.0);
        assert!((r.zeta_prime_at_zero + 3f64.ln()).abs() < 1e-8);
        assert!((r.zeta_at_zero - 3.0).abs() < 1e-10);
    }

    #[test]
    fn split_independence() {
        let g = |t: f64| 2.0 * (-t).exp() + (-3.0 * t).exp();
        let a = zp(g, Ladder::INTEGER, 0.5).zeta_prime_at_zero;
        let b = zp(g, Ladder::INTEGER, 2.0).zeta_prime_at_zero;
        assert!((a - b).abs() < 1e-6 * a.abs());
    }

    #[test]
    fn half_integer_ladder() {
        // ζ(s) = Γ(s - 1/2) λ^{1/2 - s} / Γ(s): ζ(0) = 0, ζ'(0) = -2√(πλ)
        let lam = 1.7;
        let r = zp(|t| (-lam * t).exp() / t.sqrt(), Ladder { p0: -0.5, step: 1.0 }, 1.0);
        assert!((r.zeta_prime_at_zero + 2.0 * (PI * lam).sqrt()).abs() < 1e-8);
        assert!(r.zeta_at_zero.abs() < 1e-12);
    }

    #[test]
    fn inverse_tau_ladder() {
        // ζ(s) = λ^{1-s}/(s - 1): ζ(0) = -λ, ζ'(0) = λ ln λ - λ
        let lam = 0.8;
        let r = zp(|t| (-lam * t).exp() / t, Ladder { p0: -1.0, step: 1.0 }, 1.0);
        assert!((r.zeta_prime_at_zero - (lam * lam.ln() - lam)).abs() < 1e-8);
        assert!((r.zeta_at_zero + lam).abs() < 1e-10);
    }

    #[test]
    fn square_root_step_ladder() {
        // γ = e^{-λτ}(1 + √τ): the √τ part gives ζ(s) = Γ(s + 1/2) λ^{-s-1/2} / Γ(s)
        let lam = 1.3;
        let r = zp(|t| (-lam * t).exp() * (1.0 + t.sqrt()), Ladder { p0: 0.0, step: 0.5 }, 1.0);
        let want = -lam.ln() + PI.sqrt() / lam.sqrt();
        assert!((r.zeta_prime_at_zero - want).abs() < 1e-8);
    }

    #[test]
    fn non_decaying_trace_is_rejected() {
        let e = zeta_prime_at_zero(|_| 1.0, Ladder::INTEGER, 1.0, &ZetaOptions::default()).unwrap_err();
        assert!(matches!(e, Error::Convergence(_)));
    }

    #[test]
    fn wrong_ladder_trips_the_gate() {
        // a √τ term the integer ladder cannot represent
        let opts = ZetaOptions { gate: 1e-9, ..Default::default() };
        let r = zeta_prime_at_zero(|t| (-t).exp() * (1.0 + t.sqrt()), Ladder::INTEGER, 1.0, &opts);
        assert!(matches!(r, Err(Error::ContinuationUnstable { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn finite_spectra(levels in proptest::collection::vec((0.1f64..5.0, 1u32..4), 1..6)) {
            let g = |t: f64| levels.iter().map(|&(l, w)| w as f64 * (-l * t).exp()).sum::<f64>();
            let r = zp(g, Ladder::INTEGER, 1.0);
            let want: f64 = -levels.iter().map(|&(l, w)| w as f64 * l.ln()).sum::<f64>();
            prop_assert!((r.zeta_prime_at_zero - want).abs() < 1e-8);
        }
    }
}
