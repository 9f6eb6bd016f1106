//! Complete elliptic integrals and Jacobi elliptic functions for real parameter m = k² < 1,
//! with the imaginary modulus k = i (m = -1) as the case of interest.

use crate::error::{Error, Result};
use std::f64::consts::FRAC_PI_2;

/// Parameter m = k² of an elliptic function.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EllipticModulus {
    pub m_param: f64,
}

impl EllipticModulus {
    /// The modulus k = i.
    pub const IMAG_UNIT: EllipticModulus = EllipticModulus { m_param: -1.0 };

    pub fn new(m_param: f64) -> Result<Self> {
        if !m_param.is_finite() || m_param >= 1.0 {
            return Err(Error::Domain(format!("elliptic parameter m = {m_param} must be < 1")));
        }
        Ok(Self { m_param })
    }
}

/// Arithmetic-geometric mean sequence starting at (1, sqrt(1-m)).
/// Returns (a_N, sum_{n>=0} 2^(n-1) c_n^2) with c_0^2 = m.
fn agm_with_sum(m: f64) -> (f64, f64) {
    let mut a = 1.0_f64;
    let mut b = (1.0 - m).sqrt();
    let mut sum = 0.5 * m;
    let mut pow2 = 0.5;
    for _ in 0..64 {
        let c = 0.5 * (a - b);
        pow2 *= 2.0;
        sum += pow2 * c * c;
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        if c.abs() <= 1e-17 * a.abs() {
            break;
        }
    }
    (a, sum)
}

/// Complete elliptic integral of the first kind K(m).
pub fn complete_elliptic_k(k2: f64) -> Result<f64> {
    let m = EllipticModulus::new(k2)?.m_param;
    let (a, _) = agm_with_sum(m);
    Ok(FRAC_PI_2 / a)
}

/// Complete elliptic integral of the second kind E(m); m = 1 is allowed.
pub fn complete_elliptic_e(k2: f64) -> Result<f64> {
    if k2 == 1.0 {
        return Ok(1.0);
    }
    let m = EllipticModulus::new(k2)?.m_param;
    let (a, sum) = agm_with_sum(m);
    Ok(FRAC_PI_2 / a * (1.0 - sum))
}

/// sn, cn, dn for 0 <= mu < 1 by the descending Landen (AGM) scheme.
fn sncndn_unit(u: f64, mu: f64) -> (f64, f64, f64) {
    if mu == 0.0 {
        return (u.sin(), u.cos(), 1.0);
    }
    let mut a = [0.0_f64; 32];
    let mut c = [0.0_f64; 32];
    a[0] = 1.0;
    let mut b = (1.0 - mu).sqrt();
    c[0] = mu.sqrt();
    let mut n = 0;
    while n < 31 && c[n].abs() > 1e-17 {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = (a[n] * b).sqrt();
        n += 1;
    }
    let mut phi = 2f64.powi(n as i32) * a[n] * u;
    for j in (1..=n).rev() {
        phi = 0.5 * (phi + (c[j] * phi.sin() / a[j]).asin());
    }
    let (s, co) = phi.sin_cos();
    (s, co, (1.0 - mu * s * s).sqrt())
}

/// Jacobi (sn, cn, dn)(u | m) for any real m < 1.
///
/// Negative m is mapped onto mu = -m/(1-m) in (0, 1):
/// sn(u|m) = sd(v|mu)/s, cn(u|m) = cd(v|mu), dn(u|m) = nd(v|mu), with s = sqrt(1-m), v = s u.
pub fn jacobi_sncndn(u: f64, k2: f64) -> Result<(f64, f64, f64)> {
    let m = EllipticModulus::new(k2)?.m_param;
    if m >= 0.0 {
        return Ok(sncndn_unit(u, m));
    }
    let s = (1.0 - m).sqrt();
    let mu = -m / (1.0 - m);
    let (sn, cn, dn) = sncndn_unit(s * u, mu);
    Ok((sn / (dn * s), cn / dn, 1.0 / dn))
}

/// sn(b u; i).
pub fn jacobi_sn_imag(u: f64, b_scale: f64) -> f64 {
    jacobi_sncndn(b_scale * u, -1.0).map(|t| t.0).unwrap_or(f64::NAN)
}

/// (cn, dn)(b u; i).
pub fn jacobi_cn_dn_imag(u: f64, b_scale: f64) -> (f64, f64) {
    jacobi_sncndn(b_scale * u, -1.0)
        .map(|t| (t.1, t.2))
        .unwrap_or((f64::NAN, f64::NAN))
}

/// K(i) = K(m = -1).
pub fn k_imag() -> f64 {
    FRAC_PI_2 / agm_with_sum(-1.0).0
}

/// E(i) = E(m = -1).
pub fn e_imag() -> f64 {
    let (a, s) = agm_with_sum(-1.0);
    FRAC_PI_2 / a * (1.0 - s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quad::integrate;
    use proptest::prelude::*;

    fn k_quad(m: f64) -> f64 {
        integrate(|t| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2, 1e-14, 0.0)
            .unwrap()
            .value
    }
    fn e_quad(m: f64) -> f64 {
        integrate(|t| (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2, 1e-14, 0.0)
            .unwrap()
            .value
    }

    #[test]
    fn k_e_reference_values() {
        assert_eq!(complete_elliptic_k(0.0).unwrap(), FRAC_PI_2);
        assert!((complete_elliptic_e(0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(complete_elliptic_e(1.0).unwrap(), 1.0);
        assert!((complete_elliptic_k(-1.0).unwrap() - 1.311_028_777_146_059_9).abs() < 1e-14);
        assert!((complete_elliptic_e(-1.0).unwrap() - 1.910_098_894_513_856).abs() < 1e-14);
        assert!((complete_elliptic_k(0.5).unwrap() - 1.854_074_677_301_372).abs() < 1e-14);
        assert!(complete_elliptic_k(1.0).is_err());
        assert!(complete_elliptic_e(1.5).is_err());
    }

    #[test]
    fn agm_matches_quadrature() {
        for m in [-1.0, -0.5, 0.0, 0.5, 0.9] {
            let k = complete_elliptic_k(m).unwrap();
            let e = complete_elliptic_e(m).unwrap();
            assert!((k / k_quad(m) - 1.0).abs() < 1e-11, "K({m})");
            assert!((e / e_quad(m) - 1.0).abs() < 1e-11, "E({m})");
        }
    }

    #[test]
    fn imaginary_modulus_transformation_of_k() {
        // K(-m) = K(m/(1+m))/sqrt(1+m)
        let k = complete_elliptic_k(-1.0).unwrap();
        let alt = complete_elliptic_k(0.5).unwrap() / 2f64.sqrt();
        assert!((k - alt).abs() < 1e-15);
    }

    #[test]
    fn sn_quarter_period_and_origin() {
        let k = k_imag();
        assert_eq!(jacobi_sn_imag(0.0, 1.0), 0.0);
        assert!((jacobi_sn_imag(k, 1.0) - 1.0).abs() < 1e-14, "{}", jacobi_sn_imag(k, 1.0) - 1.0);
        assert!((jacobi_sn_imag(k / 2.5, 2.5) - 1.0).abs() < 1e-14);
        let (cn, dn) = jacobi_cn_dn_imag(0.0, 1.0);
        assert_eq!((cn, dn), (1.0, 1.0));
    }

    #[test]
    fn positive_parameter_against_known_values() {
        // Maclaurin series of sn in u
        let (u, m) = (0.3f64, 0.3f64);
        let (sn, cn, dn) = jacobi_sncndn(u, m).unwrap();
        let sn_series = u - (1.0 + m) * u.powi(3) / 6.0
            + (1.0 + 14.0 * m + m * m) * u.powi(5) / 120.0
            - (1.0 + 135.0 * m + 135.0 * m * m + m.powi(3)) * u.powi(7) / 5040.0
            + (1.0 + 1228.0 * m + 5478.0 * m * m + 1228.0 * m.powi(3) + m.powi(4)) * u.powi(9)
                / 362_880.0;
        assert!((sn - sn_series).abs() < 3e-8);
        assert!((sn * sn + cn * cn - 1.0).abs() < 1e-15);
        assert!((dn * dn + m * sn * sn - 1.0).abs() < 1e-15);
    }

    /// sn(u|-1) against RK4 integration of sn'' = -2 sn^3, sn(0) = 0, sn'(0) = 1.
    #[test]
    fn sn_imag_matches_ode_integration() {
        let h = 1e-4;
        let (mut y, mut v) = (0.0f64, 1.0f64);
        let f = |y: f64| -2.0 * y.powi(3);
        let steps = 13_000;
        for _ in 0..steps {
            let k1y = v;
            let k1v = f(y);
            let k2y = v + 0.5 * h * k1v;
            let k2v = f(y + 0.5 * h * k1y);
            let k3y = v + 0.5 * h * k2v;
            let k3v = f(y + 0.5 * h * k2y);
            let k4y = v + h * k3v;
            let k4v = f(y + h * k3y);
            y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
            v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        }
        let u = steps as f64 * h;
        assert!((jacobi_sn_imag(u, 1.0) - y).abs() < 1e-10);
        let (cn, dn) = jacobi_cn_dn_imag(u, 1.0);
        assert!((cn * dn - v).abs() < 1e-10);
    }

    #[test]
    fn derivative_identity() {
        let h = 1e-5;
        for i in 0..50 {
            let u = -3.0 + 0.17 * i as f64;
            let fd = (jacobi_sn_imag(u + h, 1.0) - jacobi_sn_imag(u - h, 1.0)) / (2.0 * h);
            let (cn, dn) = jacobi_cn_dn_imag(u, 1.0);
            assert!((fd - cn * dn).abs() < 1e-8, "u={u}");
        }
    }

    proptest! {
        #[test]
        fn sn_period_and_identities(u in 0.0f64..10.0, b in 0.2f64..3.0) {
            let k = k_imag();
            let s = jacobi_sn_imag(u, b);
            prop_assert!((jacobi_sn_imag(u + 4.0 * k / b, b) - s).abs() < 1e-10);
            prop_assert!((jacobi_sn_imag(-u, b) + s).abs() < 1e-14);
            prop_assert!(s.abs() <= 1.0 + 1e-15);
            let (cn, dn) = jacobi_cn_dn_imag(u, b);
            prop_assert!((cn * cn + s * s - 1.0).abs() < 1e-12);
            prop_assert!((dn * dn - s * s - 1.0).abs() < 1e-12);
        }

        #[test]
        fn negative_parameter_identities(u in -5.0f64..5.0, m in -4.0f64..0.0) {
            let (sn, cn, dn) = jacobi_sncndn(u, m).unwrap();
            prop_assert!((sn * sn + cn * cn - 1.0).abs() < 1e-12);
            prop_assert!((dn * dn + m * sn * sn - 1.0).abs() < 1e-12);
        }
    }
}
