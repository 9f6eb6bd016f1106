//! C ABI acceptance: values through the boundary match the library, errors map to status codes,
//! and the generated header parses as C and C++.

use spinkink_ffi::*;
use std::ffi::{c_char, CStr};
use std::path::PathBuf;
use std::ptr;

struct Report {
    failed: usize,
    total: usize,
}

impl Report {
    fn check(&mut self, label: &str, ok: bool, detail: String) {
        self.total += 1;
        if !ok {
            self.failed += 1;
        }
        println!("{} criterion {label}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

const UNIT: SkChainParams = SkChainParams { j: 1.0, d: -1.0, gmub_b: 1.0, a: 1.0, hbar: 1.0 };

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 512];
    unsafe { sk_last_error_message(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn special_functions(r: &mut Report) {
    let (mut k, mut e) = (0.0, 0.0);
    let st = unsafe { sk_complete_elliptic(-1.0, &mut k, &mut e) };
    let ok = st == SkStatus::Ok
        && k == spinkink::special::complete_elliptic_k(-1.0).unwrap()
        && e == spinkink::special::complete_elliptic_e(-1.0).unwrap();
    r.check("1 K(-1), E(-1) through the ABI", ok, format!("K={k:.15} E={e:.15}"));
    let mut out = [0.0; 3];
    let st = unsafe { sk_jacobi_sncndn(0.7, -1.0, out.as_mut_ptr()) };
    let want = spinkink::special::jacobi_sncndn(0.7, -1.0).unwrap();
    r.check("1 sn, cn, dn through the ABI", st == SkStatus::Ok && out == [want.0, want.1, want.2], format!("{out:?}"));
}

fn spectrum_handle(r: &mut Report) {
    let mut s = ptr::null_mut();
    let st = unsafe { sk_kink_spectrum_new(1.0, 20.0, 4000, &mut s) };
    let count = unsafe { sk_kink_spectrum_bound_count(s) };
    let mut ev = [0.0; 2];
    let copied = unsafe { sk_kink_spectrum_eigenvalues(s, 0, ev.as_mut_ptr(), 2) };
    let edge = unsafe { sk_kink_spectrum_continuum_lowest(s) };
    unsafe { sk_kink_spectrum_free(s) };
    let ok = st == SkStatus::Ok && count == 2 && copied == 2 && ev[0].abs() < 1e-4 && (ev[1] - 3.0).abs() < 1e-3 && (edge / 4.0 - 1.0).abs() < 0.02;
    r.check("2 kink spectrum handle: bound states 0, 3 and edge 4", ok, format!("{ev:?}, edge {edge:.5}"));
}

fn corrections(r: &mut Report) {
    let g = sk_kink_trace(1.0, 200.0);
    r.check("3 kink trace through the ABI equals the library", g == spinkink::semiclassics::exact_kink_trace(1.0, 200.0), format!("gamma(200) = {g}"));

    let q = SkQuantParams { t: 1.0, r: 0.0, l: 1.0, hbar: 1.0, d: 1 };
    let mut de = 0.0;
    let st = unsafe { sk_delta_e_closed_form(UNIT, 1.0, q, &mut de) };
    let want = (2.0 + std::f64::consts::PI / 3f64.sqrt() - 2.0 * std::f64::consts::LN_2) / (2.0 * std::f64::consts::PI);
    r.check("4 d=1 closed form at unit parameters", st == SkStatus::Ok && (de - want).abs() < 1e-14, format!("{de:.12}"));

    let mut phys = [0.0; 2];
    let st0 = unsafe { sk_delta_e_physical(3, UNIT, 1.0, &mut phys[0]) };
    let st1 = unsafe { sk_delta_e_physical(3, SkChainParams { hbar: 9.0, ..UNIT }, 1.0, &mut phys[1]) };
    r.check(
        "4 physical form independent of hbar",
        st0 == SkStatus::Ok && st1 == SkStatus::Ok && phys[0] == phys[1],
        format!("{:.12}", phys[0]),
    );

    let mut ec = 0.0;
    let st = unsafe { sk_kink_energy(UNIT, 1.0, &mut ec) };
    r.check("6 printed kink energy 11JmV^2/12", st == SkStatus::Ok && (ec - 11.0 / 12.0 * 6.0 / 7.0).abs() < 1e-15, format!("{ec}"));
}

fn m0_engine(r: &mut Report) {
    let mut e = ptr::null_mut();
    let st = unsafe { sk_m0_engine_new(1.0, 1.5, 200.0, 4001, &mut e) };
    let mut g = [0.0; 3];
    let taus = [0.1, 1.0, 5.0];
    let mut ok = st == SkStatus::Ok;
    for (t, out) in taus.iter().zip(&mut g) {
        ok &= unsafe { sk_m0_gamma(e, *t, out) } == SkStatus::Ok;
    }
    let bloch = spinkink::m0::bloch_trace(1.0, &taus, &Default::default()).unwrap();
    let dev = g.iter().zip(&bloch).map(|(a, b)| ((a - b) / b).abs()).fold(0.0, f64::max);
    r.check("7 m0 engine gamma vs periodic-cell oracle 1e-3", ok && dev < 1e-3, format!("{g:?}, max rel {dev:.1e}"));

    let (mut re, mut im) = (0.0, 0.0);
    let st = unsafe { sk_m0_gamma_hat(e, 0.0, 0.0, &mut re, &mut im) };
    r.check("7 gamma_hat at a branch point is an error", st == SkStatus::Numerical || st == SkStatus::InvalidArgument, format!("{st:?}: {}", last_error()));

    let q = SkQuantParams { t: 1.0, r: 1.0, l: 1.0, hbar: 1.0, d: 1 };
    let mut c = SkComplexCorrection::default();
    let st = unsafe { sk_m0_delta_e(e, 1.0, -1.0, q, &mut c) };
    unsafe { sk_m0_engine_free(e) };
    let mut e2 = ptr::null_mut();
    unsafe { sk_m0_engine_new(1.0, 2.0, 200.0, 4001, &mut e2) };
    let mut c2 = SkComplexCorrection::default();
    let st2 = unsafe { sk_m0_delta_e(e2, 1.0, -1.0, q, &mut c2) };
    unsafe { sk_m0_engine_free(e2) };
    let spread = ((c.re - c2.re).powi(2) + (c.im - c2.im).powi(2)).sqrt() / (c.re * c.re + c.im * c.im).sqrt();
    r.check(
        "7 m0 Delta E stable under abscissa variation 1e-5",
        st == SkStatus::Ok && st2 == SkStatus::Ok && spread < 1e-5,
        format!("{:.8} {:+.8}i (+- {:.1e}), spread {spread:.1e}", c.re, c.im, c.error_bar),
    );
}

fn chain_handle(r: &mut Report) {
    let mut c = ptr::null_mut();
    let st = unsafe { sk_spin_chain_new(12, UNIT, SkBoundary::Periodic, &mut c) };
    let mut before = vec![0.0; 36];
    let mut after = vec![0.0; 36];
    unsafe { sk_spin_chain_sites(c, before.as_mut_ptr(), 36) };
    let st_step = unsafe { sk_spin_chain_step(c, 0.01, 200) };
    unsafe { sk_spin_chain_sites(c, after.as_mut_ptr(), 36) };
    let t = unsafe { sk_spin_chain_time(c) };
    unsafe { sk_spin_chain_free(c) };
    r.check(
        "8 uniform chain is a fixed point through the ABI",
        st == SkStatus::Ok && st_step == SkStatus::Ok && before == after && (t - 2.0).abs() < 1e-12,
        format!("t = {t}"),
    );

    let mut c = ptr::null_mut();
    unsafe { sk_spin_chain_new(101, UNIT, SkBoundary::Fixed, &mut c) };
    let st = unsafe { sk_spin_chain_embed_kink(c, true) };
    let (mut e0, mut e1) = (0.0, 0.0);
    unsafe { sk_spin_chain_energy(c, &mut e0) };
    unsafe { sk_spin_chain_step(c, 0.01, 1000) };
    unsafe { sk_spin_chain_energy(c, &mut e1) };
    let n = unsafe { sk_spin_chain_len(c) };
    let mut s = vec![0.0; 3 * n];
    unsafe { sk_spin_chain_sites(c, s.as_mut_ptr(), s.len()) };
    unsafe { sk_spin_chain_free(c) };
    let norm = s.chunks(3).map(|v| ((v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt() - 1.0).abs()).fold(0.0, f64::max);
    r.check(
        "8 embedded kink: energy and norms conserved",
        st == SkStatus::Ok && (e1 - e0).abs() < 1e-6 * e0.abs() && norm < 1e-10,
        format!("dE = {:.1e}, norm error {norm:.1e}", e1 - e0),
    );
}

fn errors(r: &mut Report) {
    let mut out = 0.0;
    let st = unsafe { sk_kink_energy(SkChainParams { gmub_b: 3.0, ..UNIT }, 1.0, &mut out) };
    let msg = last_error();
    r.check("E regime error maps to SK_STATUS_REGIME with a message", st == SkStatus::Regime && msg.contains("regime"), msg);

    let st = unsafe { sk_kink_energy(UNIT, 1.0, ptr::null_mut()) };
    let st2 = unsafe { sk_spin_chain_step(ptr::null_mut(), 0.1, 1) };
    r.check("E null pointers are rejected", st == SkStatus::NullPointer && st2 == SkStatus::NullPointer, last_error());

    let mut c = ptr::null_mut();
    let st = unsafe { sk_spin_chain_new(2, UNIT, SkBoundary::Fixed, &mut c) };
    r.check("E invalid sizes leave the handle null", st == SkStatus::InvalidArgument && c.is_null(), last_error());

    let v = unsafe { CStr::from_ptr(sk_version()) }.to_string_lossy().into_owned();
    r.check("E version string", v == env!("CARGO_PKG_VERSION"), v);
}

fn header(r: &mut Report) {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let h = std::fs::read_to_string(dir.join("include/spinkink.h")).unwrap_or_default();
    let src = std::fs::read_to_string(dir.join("src/lib.rs")).unwrap();
    let exported: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .filter_map(|l| l.split('(').next())
        .collect();
    let missing: Vec<&&str> = exported.iter().filter(|f| !h.contains(&format!("{f}("))).collect();
    r.check(
        "H header declares every exported function",
        !exported.is_empty() && missing.is_empty(),
        format!("{} functions, missing {missing:?}", exported.len()),
    );

    let mut results = Vec::new();
    for (compiler, lang) in [("cc", "c"), ("c++", "c++")] {
        let status = std::process::Command::new(compiler)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang])
            .arg(dir.join("include/spinkink.h"))
            .status();
        results.push((compiler, status.map(|s| s.success()).unwrap_or(false)));
    }
    r.check("H header compiles as C and C++", results.iter().all(|x| x.1), format!("{results:?}"));
}

fn main() {
    let mut r = Report { failed: 0, total: 0 };
    special_functions(&mut r);
    spectrum_handle(&mut r);
    corrections(&mut r);
    m0_engine(&mut r);
    chain_handle(&mut r);
    errors(&mut r);
    header(&mut r);
    println!("acceptance: {} checks, {} passed, {} failed", r.total, r.total - r.failed, r.failed);
    if r.failed > 0 {
        std::process::exit(1);
    }
}
