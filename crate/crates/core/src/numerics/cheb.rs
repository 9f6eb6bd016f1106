//! Chebyshev series on an interval [0, hi]: least-squares fitting, evaluation,
//! and conversion to monomial coefficients about the left end.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct ChebSeries {
    pub coeffs: Vec<f64>,
    pub hi: f64,
}

impl ChebSeries {
    fn to_x(&self, u: f64) -> f64 {
        2.0 * u / self.hi - 1.0
    }

    pub fn eval(&self, u: f64) -> f64 {
        let x = self.to_x(u);
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * x * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        x * b1 - b2 + self.coeffs.first().copied().unwrap_or(0.0)
    }

    /// Coefficients a_j with P(u) = sum_j a_j u^j.
    pub fn monomial_coeffs(&self) -> Vec<f64> {
        let n = self.coeffs.len();
        let mut out = vec![0.0; n];
        // T_k(2t - 1) as polynomials in t = u / hi
        let mut prev = vec![1.0];
        let mut cur = vec![-1.0, 2.0];
        for (k, &c) in self.coeffs.iter().enumerate() {
            let tk: &[f64] = match k {
                0 => &prev,
                _ => &cur,
            };
            for (j, v) in tk.iter().enumerate() {
                out[j] += c * v;
            }
            if k >= 1 {
                let mut next = vec![0.0; cur.len() + 1];
                for (j, v) in cur.iter().enumerate() {
                    next[j + 1] += 4.0 * v;
                    next[j] -= 2.0 * v;
                }
                for (j, v) in prev.iter().enumerate() {
                    next[j] -= v;
                }
                prev = std::mem::replace(&mut cur, next);
            }
        }
        let mut scale = 1.0;
        for a in out.iter_mut() {
            *a *= scale;
            scale /= self.hi;
        }
        out
    }
}

/// Chebyshev points of the first kind mapped to [lo, hi].
pub fn chebyshev_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let x = (PI * (k as f64 + 0.5) / n as f64).cos();
            lo + 0.5 * (hi - lo) * (x + 1.0)
        })
        .collect()
}

/// Least-squares fit of a degree-`degree` Chebyshev series on [0, hi] to samples (u, y).
pub fn fit(u: &[f64], y: &[f64], degree: usize, hi: f64) -> Result<ChebSeries> {
    if u.len() != y.len() || u.len() <= degree {
        return Err(Error::GridMismatch(format!(
            "{} samples cannot determine a degree-{degree} fit",
            u.len()
        )));
    }
    let m = u.len();
    let a = DMatrix::from_fn(m, degree + 1, |i, k| {
        let x = 2.0 * u[i] / hi - 1.0;
        if x.abs() <= 1.0 {
            (k as f64 * x.acos()).cos()
        } else {
            let (mut t0, mut t1) = (1.0, x);
            if k == 0 {
                return 1.0;
            }
            for _ in 1..k {
                let t2 = 2.0 * x * t1 - t0;
                t0 = t1;
                t1 = t2;
            }
            t1
        }
    });
    let b = DVector::from_column_slice(y);
    let svd = a.svd(true, true);
    let c = svd
        .solve(&b, 1e-14)
        .map_err(|e| Error::Convergence(format!("least squares failed: {e}")))?;
    Ok(ChebSeries { coeffs: c.iter().copied().collect(), hi })
}
