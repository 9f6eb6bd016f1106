//! Laplace-domain Green function diagonals of the sn² operator, their period integral γ̂(p),
//! and its singular set.
//!
//! Square roots use the principal branch factor by factor: √Q(p) = Π √(e_i - p) over the
//! band edges e_i. In the decaying variable σ = -p the inverse transform runs along Re σ = o.

use crate::error::{Error, Result};
use crate::numerics::quad::integrate;
use crate::special::{e_imag, jacobi_cn_dn_imag, k_imag};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

/// {-2√3, -3, 0, 3, 2√3} b².
pub fn band_edges(b: f64) -> [f64; 5] {
    let b2 = b * b;
    let s = 2.0 * 3f64.sqrt() * b2;
    [-s, -3.0 * b2, 0.0, 3.0 * b2, s]
}

/// (3b²+p)(3b²-p) p (p²-12b⁴)
pub fn radicand(p: f64, b: f64) -> f64 {
    let b2 = b * b;
    (3.0 * b2 + p) * (3.0 * b2 - p) * p * (p * p - 12.0 * b2 * b2)
}

/// Π √(e_i - p), principal branches.
pub fn sqrt_q(p: C64, b: f64) -> C64 {
    band_edges(b).iter().fold(C64::new(1.0, 0.0), |acc, &e| acc * (e - p).sqrt())
}

fn near_edge(p: C64, b: f64) -> Result<()> {
    let tol = 1e-14 * (b * b).max(1e-300);
    for e in band_edges(b) {
        if (p - e).norm() <= tol {
            return Err(Error::Singularity(format!("p = {p} is the branch point {e}")));
        }
    }
    Ok(())
}

/// G₁(p, z) = (p² - 3b²p(1-z) + 9b⁴(z-2)z) / (2√Q(p)), with z = cn².
pub fn g1_diagonal(p: C64, z: f64, b: f64) -> Result<C64> {
    near_edge(p, b)?;
    let b2 = b * b;
    let num = p * p - 3.0 * b2 * p * (1.0 - z) + 9.0 * b2 * b2 * (z - 2.0) * z;
    Ok(num / (2.0 * sqrt_q(p, b)))
}

/// G₀(p) = 1 / (2√(2√3 b² - p)).
pub fn g0_vacuum(p: C64, b: f64) -> Result<C64> {
    let top = 2.0 * 3f64.sqrt() * b * b;
    if (p - top).norm() <= 1e-14 * (b * b) {
        return Err(Error::Singularity(format!("p = {p} is the vacuum branch point")));
    }
    Ok(0.5 / (top - p).sqrt())
}

/// Numerator as printed: 6b⁴K + 2p²K + 36b⁴(K - E) - 3b²p(E - 3K).
pub fn numerator_printed(p: C64, b: f64) -> C64 {
    let (k, e, b2) = (k_imag(), e_imag(), b * b);
    6.0 * b2 * b2 * k + 2.0 * p * p * k + 36.0 * b2 * b2 * (k - e) - 3.0 * b2 * p * (e - 3.0 * k)
}

/// Numerator from integrating G₁ over the period: 2Kp² + 6b²p(K - E) - 12b⁴K.
pub fn numerator(p: C64, b: f64) -> C64 {
    let (k, e, b2) = (k_imag(), e_imag(), b * b);
    2.0 * k * p * p + 6.0 * b2 * p * (k - e) - 12.0 * b2 * b2 * k
}

fn assemble(num: C64, p: C64, b: f64) -> Result<C64> {
    near_edge(p, b)?;
    let vac = g0_vacuum(p, b)?;
    Ok(num / (b * sqrt_q(p, b)) - 4.0 * k_imag() / b * vac)
}

/// γ̂(p) in closed form (period-integrated numerator).
pub fn gamma_hat(p: C64, b: f64) -> Result<C64> {
    assemble(numerator(p, b), p, b)
}

/// γ̂(p) with the printed numerator.
pub fn gamma_hat_printed(p: C64, b: f64) -> Result<C64> {
    assemble(numerator_printed(p, b), p, b)
}

/// ∫₀^{4K(i)/b} (G₁(p, cn²(bx)) - G₀(p)) dx by adaptive quadrature over the four quarter periods.
pub fn gamma_hat_quadrature(p: C64, b: f64, tol: f64) -> Result<C64> {
    let g0 = g0_vacuum(p, b)?;
    let quarter = k_imag() / b;
    let f = |x: f64| -> C64 {
        let cn = jacobi_cn_dn_imag(x, b).0;
        g1_diagonal(p, cn * cn, b).map(|g| g - g0).unwrap_or(C64::new(f64::NAN, f64::NAN))
    };
    let mut re = 0.0;
    let mut im = 0.0;
    for q in 0..4 {
        let (lo, hi) = (q as f64 * quarter, (q + 1) as f64 * quarter);
        re += integrate(|x| f(x).re, lo, hi, tol, 0.0)?.value;
        im += integrate(|x| f(x).im, lo, hi, tol, 0.0)?.value;
    }
    Ok(C64::new(re, im))
}

/// ĝ(σ) = γ̂(-σ), the transform in the decaying variable.
pub fn g_hat_sigma(sigma: C64, b: f64) -> C64 {
    let p = -sigma;
    numerator(p, b) / (b * sqrt_q(p, b)) - 2.0 * k_imag() / (b * (2.0 * 3f64.sqrt() * b * b - p).sqrt())
}

/// Closed form, printed form and quadrature of γ̂ at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaHatSample {
    pub p_re: f64,
    pub p_im: f64,
    pub closed: (f64, f64),
    pub printed: (f64, f64),
    pub quadrature: (f64, f64),
    /// |closed - quadrature| / |quadrature|
    pub closed_deviation: f64,
    /// |printed - quadrature| / |quadrature|
    pub printed_deviation: f64,
    pub warning: Option<String>,
}

pub fn gamma_hat_sample(p: C64, b: f64) -> Result<GammaHatSample> {
    let c = gamma_hat(p, b)?;
    let pr = gamma_hat_printed(p, b)?;
    let q = gamma_hat_quadrature(p, b, 1e-14)?;
    let dev = |x: C64| (x - q).norm() / q.norm().max(1e-300);
    let closed_deviation = dev(c);
    Ok(GammaHatSample {
        p_re: p.re,
        p_im: p.im,
        closed: (c.re, c.im),
        printed: (pr.re, pr.im),
        quadrature: (q.re, q.im),
        closed_deviation,
        printed_deviation: dev(pr),
        warning: (closed_deviation > 1e-6)
            .then(|| format!("closed form and quadrature differ by {closed_deviation:e} at p = {p}")),
    })
}

/// Real roots of the radicand found by sign changes on a scan of [-span, span] and bisection.
pub fn singular_set(b: f64, span: f64, samples: usize) -> Vec<f64> {
    let f = |p: f64| radicand(p, b);
    let step = 2.0 * span / samples as f64;
    let mut roots = Vec::new();
    let mut x0 = -span;
    let mut f0 = f(x0);
    for i in 1..=samples {
        let x1 = -span + i as f64 * step;
        let f1 = f(x1);
        if f1 == 0.0 {
            roots.push(x1);
        } else if f0 != 0.0 && f0.signum() != f1.signum() {
            let (mut lo, mut hi, mut flo) = (x0, x1, f0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm == 0.0 || hi - lo <= 4.0 * f64::EPSILON * mid.abs().max(1e-300) {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
    }
    roots
}

/// Slope of ln|ĝ| against ln|σ| along Re σ = o for ω in [w1, w2].
pub fn decay_exponent(b: f64, o: f64, w1: f64, w2: f64) -> f64 {
    let g1 = g_hat_sigma(C64::new(o, w1), b).norm();
    let g2 = g_hat_sigma(C64::new(o, w2), b).norm();
    (g2 / g1).ln() / (C64::new(o, w2).norm() / C64::new(o, w1).norm()).ln()
}
