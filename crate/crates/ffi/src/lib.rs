//! C interface to spinkink.
//!
//! Every fallible call returns an [`SkStatus`]; on failure the message is kept per thread and
//! read back with [`sk_last_error_message`]. Objects are opaque handles released by their
//! `_free` function. Panics never cross the boundary.

use spinkink::error::{Error, ErrorClass};
use spinkink::m0::{self, energy::M0Options, BromwichEngine, ContourSpec, SnWaveParams};
use spinkink::phi4::{self, WidthMode};
use spinkink::semiclassics::{self, OperatorSpec, QuantizationParams};
use spinkink::special;
use spinkink::spin_chain::{self, embed, Boundary, SpinChainParams, SpinConfiguration};
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkStatus {
    Ok = 0,
    InvalidArgument = 1,
    Regime = 2,
    Numerical = 3,
    Io = 4,
    NullPointer = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkBoundary {
    Fixed = 0,
    Periodic = 1,
}

/// Chain parameters: exchange J, anisotropy D, field g mu_B B, lattice constant a, hbar.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SkChainParams {
    pub j: f64,
    pub d: f64,
    pub gmub_b: f64,
    pub a: f64,
    pub hbar: f64,
}

/// Quantization scales: Feynman time t, mass scale r, transverse extent l, hbar, dimension d.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SkQuantParams {
    pub t: f64,
    pub r: f64,
    pub l: f64,
    pub hbar: f64,
    pub d: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SkComplexCorrection {
    pub re: f64,
    pub im: f64,
    pub error_bar: f64,
}

pub struct SkKinkSpectrum {
    eigenvalues: Vec<f64>,
    bound: Vec<f64>,
    continuum_lowest: f64,
}

pub struct SkSpinChain {
    config: SpinConfiguration,
    params: SpinChainParams,
    boundary: Boundary,
    time: f64,
}

pub struct SkM0Engine {
    b: f64,
    contour: ContourSpec,
    engine: BromwichEngine,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SkStatus {
    match e.class() {
        ErrorClass::Input => SkStatus::InvalidArgument,
        ErrorClass::Regime => SkStatus::Regime,
        ErrorClass::Numerical => SkStatus::Numerical,
        ErrorClass::Io => SkStatus::Io,
    }
}

/// Runs `f`, storing any error or panic message.
fn guard<F: FnOnce() -> Result<(), Error>>(f: F) -> SkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SkStatus::Ok,
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            SkStatus::Panic
        }
    }
}

fn null(what: &str) -> SkStatus {
    set_error(format!("null pointer: {what}"));
    SkStatus::NullPointer
}

fn chain_params(p: &SkChainParams) -> SpinChainParams {
    SpinChainParams { j: p.j, d: p.d, gmub_b: p.gmub_b, a: p.a, hbar: p.hbar }
}

fn quant_params(q: &SkQuantParams) -> QuantizationParams {
    QuantizationParams { t: q.t, r: q.r, l: q.l, d: q.d, hbar: q.hbar }
}

/// Copies the last error message of this thread into `buf` (NUL-terminated, truncated to `len`).
/// Returns the full message length without the NUL, or 0 when there is none.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn sk_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

#[no_mangle]
pub extern "C" fn sk_clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// K(m) and E(m) for m < 1.
///
/// # Safety
/// `k` and `e` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sk_complete_elliptic(m: f64, k: *mut f64, e: *mut f64) -> SkStatus {
    if k.is_null() || e.is_null() {
        return null("k/e");
    }
    guard(|| {
        *k = special::complete_elliptic_k(m)?;
        *e = special::complete_elliptic_e(m)?;
        Ok(())
    })
}

/// sn, cn, dn of (u | m) for m < 1.
///
/// # Safety
/// `out` must be valid for three writes.
#[no_mangle]
pub unsafe extern "C" fn sk_jacobi_sncndn(u: f64, m: f64, out: *mut f64) -> SkStatus {
    if out.is_null() {
        return null("out");
    }
    guard(|| {
        let (s, c, d) = special::jacobi_sncndn(u, m)?;
        *out = s;
        *out.add(1) = c;
        *out.add(2) = d;
        Ok(())
    })
}

/// Printed kink energy 11 J m V^2 / 12 for the chain parameters and time scale `t`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sk_kink_energy(params: SkChainParams, t: f64, out: *mut f64) -> SkStatus {
    if out.is_null() {
        return null("out");
    }
    guard(|| {
        let p = phi4::map_params(&chain_params(&params), t)?.params;
        *out = phi4::classical_kink_energy_paper(&p)?;
        Ok(())
    })
}

/// Closed-form one-loop correction in rescaled variables; `q.r <= 0` selects the mass scale |A m^2| = 1.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sk_delta_e_closed_form(params: SkChainParams, time_scale: f64, q: SkQuantParams, out: *mut f64) -> SkStatus {
    if out.is_null() {
        return null("out");
    }
    guard(|| {
        let p = phi4::map_params(&chain_params(&params), time_scale)?.params;
        let mut qp = quant_params(&q);
        if !(qp.r > 0.0) {
            qp.r = 1.0;
            qp.r = semiclassics::mass_scale_choice(&p, &qp)?.r;
        }
        *out = semiclassics::delta_e_closed_form(q.d, &p, &qp)?;
        Ok(())
    })
}

/// Closed-form correction in chain parameters (independent of hbar).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sk_delta_e_physical(d: u32, params: SkChainParams, l: f64, out: *mut f64) -> SkStatus {
    if out.is_null() {
        return null("out");
    }
    guard(|| {
        *out = semiclassics::delta_e_physical(d, &chain_params(&params), l)?;
        Ok(())
    })
}

/// Subtracted heat trace of the kink fluctuation operator in closed form.
#[no_mangle]
pub extern "C" fn sk_kink_trace(m: f64, tau: f64) -> f64 {
    semiclassics::exact_kink_trace(m, tau)
}

/// Finite-difference spectrum of -d^2 + 4m^2 - 6m^2 sech^2(mz) on [-L, L] with `n` interior points.
///
/// # Safety
/// `out` must be valid for writes; the handle is released with `sk_kink_spectrum_free`.
#[no_mangle]
pub unsafe extern "C" fn sk_kink_spectrum_new(m: f64, half_width: f64, n: usize, out: *mut *mut SkKinkSpectrum) -> SkStatus {
    if out.is_null() {
        return null("out");
    }
    *out = std::ptr::null_mut();
    guard(|| {
        let s = semiclassics::kink_fluctuation_spectrum(&OperatorSpec::kink(m, half_width, n))?;
        *out = Box::into_raw(Box::new(SkKinkSpectrum {
            eigenvalues: s.eigenvalues,
            bound: s.bound,
            continuum_lowest: s.continuum_lowest,
        }));
        Ok(())
    })
}

/// Number of eigenvalues below the continuum edge.
///
/// # Safety
/// `s` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sk_kink_spectrum_bound_count(s: *const SkKinkSpectrum) -> usize {
    s.as_ref().map_or(0, |s| s.bound.len())
}

/// Copies up to `len` eigenvalues starting at index `first` (ascending) into `buf`; returns the count copied.
///
/// # Safety
/// `s` must be a live handle or null; `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn sk_kink_spectrum_eigenvalues(s: *const SkKinkSpectrum, first: usize, buf: *mut f64, len: usize) -> usize {
    let Some(s) = s.as_ref() else { return 0 };
    if buf.is_null() || first >= s.eigenvalues.len() {
        return 0;
    }
    let n = len.min(s.eigenvalues.len() - first);
    std::ptr::copy_nonoverlapping(s.eigenvalues[first..].as_ptr(), buf, n);
    n
}

/// Lowest eigenvalue at or above 4m^2, NaN for a null handle.
///
/// # Safety
/// `s` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sk_kink_spectrum_continuum_lowest(s: *const SkKinkSpectrum) -> f64 {
    s.as_ref().map_or(f64::NAN, |s| s.continuum_lowest)
}

/// # Safety
/// `s` must come from `sk_kink_spectrum_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sk_kink_spectrum_free(s: *mut SkKinkSpectrum) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Chain of `n` spins, all along +x (the field direction).
///
/// # Safety
/// `out` must be valid for writes; release with `sk_spin_chain_free`.
#[no_mangle]
pub unsafe extern "C" fn sk_spin_chain_new(n: usize, params: SkChainParams, boundary: SkBoundary, out: *mut *mut SkSpinChain) -> SkStatus {
    if out.is_null() {
        return null("out");
    }
    *out = std::ptr::null_mut();
    guard(|| {
        let p = chain_params(&params);
        p.validate()?;
        if n < 3 {
            return Err(Error::Size { needed: 3, got: n });
        }
        let boundary = match boundary {
            SkBoundary::Fixed => Boundary::Fixed,
            SkBoundary::Periodic => Boundary::Periodic,
        };
        let config = SpinConfiguration::uniform(n, [1.0, 0.0, 0.0]);
        *out = Box::into_raw(Box::new(SkSpinChain { config, params: p, boundary, time: 0.0 }));
        Ok(())
    })
}

/// Replaces the state by the static kink V tanh(z/w) centred mid-chain; `eom_width` picks
/// w = sqrt(2)/m instead of 1/m.
///
/// # Safety
/// `c` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sk_spin_chain_embed_kink(c: *mut SkSpinChain, eom_width: bool) -> SkStatus {
    let Some(c) = c.as_mut() else { return null("chain") };
    guard(|| {
        let p = phi4::map_params(&c.params, 1.0)?.params;
        p.require_kink_regime()?;
        let mode = if eom_width { WidthMode::EomConsistent } else { WidthMode::PaperLiteral };
        let (v, w) = (p.v(), mode.width(p.m()));
        let n = c.config.len();
        c.config = embed::embed_phi4_profile(|z| v * (z / w).tanh(), n, 0.5 * (n - 1) as f64);
        c.time = 0.0;
        Ok(())
    })
}

/// Sets one spin (normalized on entry).
///
/// # Safety
/// `c` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sk_spin_chain_set_site(c: *mut SkSpinChain, i: usize, x: f64, y: f64, z: f64) -> SkStatus {
    let Some(c) = c.as_mut() else { return null("chain") };
    guard(|| {
        if i >= c.config.len() {
            return Err(Error::Domain(format!("site {i} out of range (n = {})", c.config.len())));
        }
        let r = (x * x + y * y + z * z).sqrt();
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Domain(format!("spin ({x}, {y}, {z}) cannot be normalized")));
        }
        c.config.sites[i] = [x / r, y / r, z / r];
        Ok(())
    })
}

/// Advances by `steps` RK4 steps of size `dt`.
///
/// # Safety
/// `c` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sk_spin_chain_step(c: *mut SkSpinChain, dt: f64, steps: usize) -> SkStatus {
    let Some(c) = c.as_mut() else { return null("chain") };
    guard(|| {
        let tr = spin_chain::integrate_chain(&c.config, &c.params, dt, steps, c.boundary, steps.max(1))?;
        c.config = tr.frames.last().cloned().unwrap_or_else(|| c.config.clone());
        c.time += dt * steps as f64;
        Ok(())
    })
}

/// Lattice energy of the current state.
///
/// # Safety
/// `c` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sk_spin_chain_energy(c: *const SkSpinChain, out: *mut f64) -> SkStatus {
    let Some(c) = c.as_ref() else { return null("chain") };
    if out.is_null() {
        return null("out");
    }
    guard(|| {
        *out = spin_chain::chain_energy_with(&c.config, &c.params, c.boundary)?;
        Ok(())
    })
}

/// Number of sites, 0 for a null handle.
///
/// # Safety
/// `c` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sk_spin_chain_len(c: *const SkSpinChain) -> usize {
    c.as_ref().map_or(0, |c| c.config.len())
}

/// Elapsed evolution time, NaN for a null handle.
///
/// # Safety
/// `c` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn sk_spin_chain_time(c: *const SkSpinChain) -> f64 {
    c.as_ref().map_or(f64::NAN, |c| c.time)
}

/// Copies the spins as x0 y0 z0 x1 ... into `buf` (length at least 3 n).
///
/// # Safety
/// `c` must be a live handle; `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn sk_spin_chain_sites(c: *const SkSpinChain, buf: *mut f64, len: usize) -> SkStatus {
    let Some(c) = c.as_ref() else { return null("chain") };
    if buf.is_null() {
        return null("buf");
    }
    guard(|| {
        let need = 3 * c.config.len();
        if len < need {
            return Err(Error::Domain(format!("buffer holds {len} values, need {need}")));
        }
        for (i, s) in c.config.sites.iter().enumerate() {
            std::ptr::copy_nonoverlapping(s.as_ptr(), buf.add(3 * i), 3);
        }
        Ok(())
    })
}

/// # Safety
/// `c` must come from `sk_spin_chain_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sk_spin_chain_free(c: *mut SkSpinChain) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Bromwich inversion for the m^2 = 0 sn wave of scale `b`. The line sits at
/// `abscissa_factor` * 2 sqrt(3) b^2; `t_cut` is in units of b^2.
///
/// # Safety
/// `out` must be valid for writes; release with `sk_m0_engine_free`.
#[no_mangle]
pub unsafe extern "C" fn sk_m0_engine_new(b: f64, abscissa_factor: f64, t_cut: f64, n_nodes: usize, out: *mut *mut SkM0Engine) -> SkStatus {
    if out.is_null() {
        return null("out");
    }
    *out = std::ptr::null_mut();
    guard(|| {
        let contour = ContourSpec { t_cut: t_cut * b * b, n_nodes, ..ContourSpec::with_abscissa_factor(b, abscissa_factor) };
        let engine = BromwichEngine::new(b, &contour)?;
        *out = Box::into_raw(Box::new(SkM0Engine { b, contour, engine }));
        Ok(())
    })
}

/// Subtracted heat trace gamma(tau) of -d^2 - 6b^2 sn^2(bz; i) over one period.
///
/// # Safety
/// `e` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sk_m0_gamma(e: *const SkM0Engine, tau: f64, out: *mut f64) -> SkStatus {
    let Some(e) = e.as_ref() else { return null("engine") };
    if out.is_null() {
        return null("out");
    }
    guard(|| {
        *out = e.engine.gamma(tau)?;
        Ok(())
    })
}

/// Laplace transform of the trace in closed form at complex p.
///
/// # Safety
/// `e` must be a live handle; `re`, `im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sk_m0_gamma_hat(e: *const SkM0Engine, p_re: f64, p_im: f64, re: *mut f64, im: *mut f64) -> SkStatus {
    let Some(e) = e.as_ref() else { return null("engine") };
    if re.is_null() || im.is_null() {
        return null("re/im");
    }
    guard(|| {
        let g = m0::gamma_hat(num_complex::Complex64::new(p_re, p_im), e.b)?;
        *re = g.re;
        *im = g.im;
        Ok(())
    })
}

/// One-loop correction of the static sn wave with exchange `j` and anisotropy `d` (< 0).
/// Complex because of the unstable band.
///
/// # Safety
/// `e` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sk_m0_delta_e(e: *const SkM0Engine, j: f64, d: f64, q: SkQuantParams, out: *mut SkComplexCorrection) -> SkStatus {
    let Some(e) = e.as_ref() else { return null("engine") };
    if out.is_null() {
        return null("out");
    }
    guard(|| {
        let wave = SnWaveParams { b: e.b, v: 0.0, c: 1.0, j, d };
        let r = m0::delta_e_m0(&wave, &quant_params(&q), &e.contour, &M0Options::default())?;
        *out = SkComplexCorrection { re: r.delta_e_re, im: r.delta_e_im, error_bar: r.error_bar };
        Ok(())
    })
}

/// # Safety
/// `e` must come from `sk_m0_engine_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sk_m0_engine_free(e: *mut SkM0Engine) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn message() -> String {
        let mut buf = vec![0 as c_char; 256];
        let n = unsafe { sk_last_error_message(buf.as_mut_ptr(), buf.len()) };
        let bytes: Vec<u8> = buf[..n.min(255)].iter().map(|&c| c as u8).collect();
        String::from_utf8(bytes).unwrap()
    }

    #[test]
    fn error_message_is_truncated_and_terminated() {
        let mut k = 0.0;
        let mut e = 0.0;
        assert_eq!(unsafe { sk_complete_elliptic(2.0, &mut k, &mut e) }, SkStatus::InvalidArgument);
        let mut small = [1 as c_char; 8];
        let full = unsafe { sk_last_error_message(small.as_mut_ptr(), small.len()) };
        assert!(full > 8);
        assert_eq!(small[7], 0);
        assert!(message().contains("m = 2"));
        sk_clear_error();
        assert_eq!(unsafe { sk_last_error_message(std::ptr::null_mut(), 0) }, 0);
    }

    #[test]
    fn null_out_pointer() {
        assert_eq!(unsafe { sk_jacobi_sncndn(0.1, 0.5, std::ptr::null_mut()) }, SkStatus::NullPointer);
        assert!(message().contains("null"));
    }

    #[test]
    fn regime_error_maps_to_status() {
        let p = SkChainParams { j: 1.0, d: -1.0, gmub_b: 3.0, a: 1.0, hbar: 1.0 };
        let mut out = 0.0;
        assert_eq!(unsafe { sk_kink_energy(p, 1.0, &mut out) }, SkStatus::Regime);
    }

    #[test]
    fn errors_are_per_thread() {
        let mut out = 0.0;
        unsafe { sk_delta_e_physical(7, SkChainParams { j: 1.0, d: -1.0, gmub_b: 1.0, a: 1.0, hbar: 1.0 }, 1.0, &mut out) };
        let other = std::thread::spawn(|| unsafe { sk_last_error_message(std::ptr::null_mut(), 0) }).join().unwrap();
        assert_eq!(other, 0);
        assert!(message().contains("d = 7"));
    }
}
