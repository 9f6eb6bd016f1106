//! The five subcommands as pure functions of a configuration.

use super::output::{CommandOutput, Table};
use crate::config::{RPolicy, RunConfig};
use crate::error::{Error, Result};
use crate::m0::{self, bromwich, energy::M0Options, ContourSpec, EomSign, SnWaveParams};
use crate::phi4::{self, DensityConvention, FieldProfile, Phi4Params, WidthMode};
use crate::semiclassics::{self, QuantizationParams, TraceSource, ZetaOptions};
use crate::spin_chain::{self, embed, SpinConfiguration};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

fn kink_params(cfg: &RunConfig) -> Result<(Phi4Params, Vec<String>)> {
    let mapped = phi4::map_params(&cfg.spin, cfg.time_scale)?;
    mapped.params.require_kink_regime()?;
    Ok((mapped.params, mapped.warnings))
}

fn quant(cfg: &RunConfig, p: &Phi4Params, d: u32) -> Result<QuantizationParams> {
    let mut q = cfg.quant.params(d);
    if cfg.quant.r_policy == RPolicy::MassScale {
        q.r = semiclassics::mass_scale_choice(p, &q)?.r;
    }
    Ok(q)
}

fn profile_table(p: &FieldProfile) -> Table {
    let mut t = Table::new(&["z", "phi"]);
    for (z, f) in p.z.iter().zip(&p.phi) {
        t.push(vec![*z, *f]);
    }
    t
}

pub fn cmd_kink(cfg: &RunConfig) -> Result<CommandOutput> {
    let mut out = CommandOutput::new("kink");
    let (p, warnings) = kink_params(cfg)?;
    let (m, v) = (p.m(), p.v());
    let half = cfg.numerics.half_span_widths * WidthMode::EomConsistent.width(m);
    let grid = phi4::uniform_grid(half, cfg.numerics.grid_points);
    let e_paper = phi4::classical_kink_energy_paper(&p)?;
    let forms = phi4::classical_kink_energy_paper_forms(&p, &cfg.spin)?;
    let mut modes = serde_json::Map::new();
    for mode in [WidthMode::PaperLiteral, WidthMode::EomConsistent] {
        let prof = phi4::kink_profile(&p, mode, &grid)?;
        let res = phi4::eom_residual(&prof, &p)?;
        let quad = phi4::classical_energy_quadrature(&prof, &p, cfg.density)?;
        modes.insert(
            mode.label().into(),
            json!({
                "width": mode.width(m),
                "residual_max": res.max_abs,
                "energy_quadrature": quad.value,
                "energy_ratio_printed_over_quadrature": e_paper / quad.value,
                "tail_deviation": quad.tail_deviation,
            }),
        );
        out.tables.push((format!("profile_{}", mode.label()), profile_table(&prof)));
    }
    let selected = phi4::kink_profile(&p, cfg.width_mode, &grid)?;
    let quad = phi4::classical_energy_quadrature(&selected, &p, cfg.density)?;
    let relax = phi4::relax_static_solution(&selected, &p, (-v, v), Default::default())?;
    let eom_width = WidthMode::EomConsistent.width(m);
    out.tables.push(("profile_relaxed".into(), profile_table(&relax.profile)));
    let params = [("m2", p.m2), ("v2", p.v2), ("j", p.j)];
    let literal = phi4::kink_profile(&p, WidthMode::PaperLiteral, &grid)?;
    let printed_pair = phi4::classical_energy_quadrature(&literal, &p, DensityConvention::Eq10)?;
    out.ledger.record("kink energy 11JmV^2/12 vs eq10 quadrature of V tanh(mz)", "11 J m V^2 / 12", e_paper, printed_pair.value, &params);
    out.ledger.record("kink width 1/m vs relaxed width", "1/m", 1.0 / m, relax.fitted_width, &params);
    out.summary = json!({
        "phi4": p,
        "warnings": warnings,
        "width_mode": cfg.width_mode,
        "density": cfg.density,
        "energy_paper": e_paper,
        "energy_paper_physical": [forms.physical_re, forms.physical_im],
        "energy_quadrature": quad.value,
        "energy_ratio_printed_over_quadrature": e_paper / quad.value,
        "energy_ratio_printed_pairing": e_paper / printed_pair.value,
        "modes": modes,
        "relaxed": {
            "residual_max": relax.residual_max,
            "iterations": relax.iterations,
            "fitted_width": relax.fitted_width,
            "eom_width": eom_width,
            "width_mismatch": (relax.fitted_width / eom_width - 1.0).abs(),
            "center": relax.center,
        },
    });
    out.metrics.insert("m2".into(), p.m2);
    out.metrics.insert("energy_paper".into(), e_paper);
    out.metrics.insert("energy_quadrature".into(), quad.value);
    out.metrics.insert("energy_ratio_printed_pairing".into(), e_paper / printed_pair.value);
    out.metrics.insert("relaxed_width".into(), relax.fitted_width);
    Ok(out)
}

pub fn cmd_corrections(cfg: &RunConfig) -> Result<CommandOutput> {
    let mut out = CommandOutput::new("corrections");
    let (p, warnings) = kink_params(cfg)?;
    let l = cfg.quant.l;
    let mut closed = Vec::new();
    let mut physical = Vec::new();
    for d in 1..=3u32 {
        let q = quant(cfg, &p, d)?;
        let c = semiclassics::delta_e_closed_form(d, &p, &q)?;
        let ph = semiclassics::delta_e_physical(d, &cfg.spin, l)?;
        closed.push(c);
        physical.push(ph);
        out.ledger.record(
            &format!("Delta E d={d}: physical form vs rescaled form"),
            "physical-parameter form",
            ph,
            c,
            &[("d", d as f64), ("gmub_b", cfg.spin.gmub_b), ("D", cfg.spin.d)],
        );
    }
    let mut hbar_table = Table::new(&["hbar", "dE1_physical", "dE2_physical", "dE3_physical", "dE1_closed"]);
    for f in [0.5, 1.0, 2.0] {
        let spin = spin_chain::SpinChainParams { hbar: cfg.spin.hbar * f, ..cfg.spin };
        let mut row = vec![spin.hbar];
        for d in 1..=3 {
            row.push(semiclassics::delta_e_physical(d, &spin, l)?);
        }
        let qh = QuantizationParams { hbar: cfg.quant.hbar * f, ..quant(cfg, &p, 1)? };
        let qh = if cfg.quant.r_policy == RPolicy::MassScale {
            QuantizationParams { r: semiclassics::mass_scale_choice(&p, &qh)?.r, ..qh }
        } else {
            qh
        };
        row.push(semiclassics::delta_e_closed_form(1, &p, &qh)?);
        hbar_table.push(row);
    }
    let q1 = quant(cfg, &p, 1)?;
    let exact = semiclassics::delta_e_numeric(1, &p, &q1, TraceSource::Exact, &ZetaOptions {
        tau_min: cfg.numerics.tau_min,
        gate: cfg.numerics.zeta_gate,
        ..Default::default()
    })?;
    let source = TraceSource::Spectral { halfwidth_m: 20.0, grid_points: cfg.numerics.spectral_points };
    let spectral = semiclassics::delta_e_numeric(1, &p, &q1, source, &source.default_options())?;
    out.ledger.record(
        "Delta E d=1 closed form vs exact-trace zeta",
        "hbar c m/(2 T pi) (2 + pi/sqrt3 - 2 ln2 - 3 ln|A m^2|)",
        exact.closed_form,
        exact.delta_e,
        &[("m2", p.m2)],
    );
    out.ledger.record(
        "Delta E d=1 closed form vs spectral zeta",
        "hbar c m/(2 T pi) (2 + pi/sqrt3 - 2 ln2 - 3 ln|A m^2|)",
        spectral.closed_form,
        spectral.delta_e,
        &[("m2", p.m2), ("grid_points", cfg.numerics.spectral_points as f64)],
    );

    let (j, dd) = (cfg.spin.j, cfg.spin.d);
    let mut sweep = Table::new(&["gmub_b", "m2", "dE1", "dE2", "dE3"]);
    for k in 1..=20 {
        let h = -2.0 * dd * k as f64 / 20.0;
        let spin = spin_chain::SpinChainParams { gmub_b: h, ..cfg.spin };
        let pk = phi4::map_params(&spin, cfg.time_scale)?.params;
        let mut row = vec![h, pk.m2];
        for d in 1..=3 {
            let q = cfg.quant.params(d);
            let q = if cfg.quant.r_policy == RPolicy::MassScale && pk.m2 > 0.0 {
                QuantizationParams { r: semiclassics::mass_scale_choice(&pk, &q)?.r, ..q }
            } else {
                q
            };
            row.push(semiclassics::delta_e_closed_form(d, &pk, &q)?);
        }
        sweep.push(row);
    }
    let ds: Vec<f64> = (0..11).map(|i| -j * 0.01 * 10f64.powf(i as f64 / 10.0)).collect();
    let exponent = semiclassics::fit_limit_exponent(j, &ds, 1e-9)?;
    let ratio = semiclassics::correction_ratio_d3(&cfg.spin)?;
    out.summary = json!({
        "phi4": p,
        "warnings": warnings,
        "closed_form": closed,
        "physical": physical,
        "physical_over_closed": physical.iter().zip(&closed).map(|(a, b)| a / b).collect::<Vec<_>>(),
        "numeric_d1_exact": exact,
        "numeric_d1_spectral": spectral,
        "ratio_d3": ratio,
        "limit_exponent_d3": exponent,
    });
    for (d, c) in closed.iter().enumerate() {
        out.metrics.insert(format!("dE{}", d + 1), *c);
    }
    out.metrics.insert("dE1_numeric".into(), exact.delta_e);
    out.metrics.insert("limit_exponent_d3".into(), exponent);
    out.tables.push(("hbar_variation".into(), hbar_table));
    out.tables.push(("field_sweep".into(), sweep));
    Ok(out)
}

/// Sn-wave parameters at the border h = -2D, with c² = J h T²/ħ².
pub fn sn_params(cfg: &RunConfig, v: f64) -> SnWaveParams {
    let s = &cfg.spin;
    let c = cfg.time_scale * (s.j * (-2.0 * s.d)).sqrt() / s.hbar;
    SnWaveParams { b: cfg.m0.b, v, c, j: s.j, d: s.d }
}

pub fn cmd_m0(cfg: &RunConfig) -> Result<CommandOutput> {
    let mut out = CommandOutput::new("m0");
    let wave = sn_params(cfg, cfg.m0.v);
    wave.check()?;
    let b = wave.b;
    let period = wave.period();
    let grid: Vec<f64> = (0..=2000).map(|i| i as f64 * period / 2000.0).collect();
    let prof = m0::sn_wave_profile(&wave, &grid, 0.0)?;
    let r_printed = m0::sn_residual(&wave, &prof, EomSign::Printed)?;
    let r_cons = m0::sn_residual(&wave, &prof, EomSign::Consistent)?;
    let moving = SnWaveParams { v: 0.5 * wave.c, ..wave };
    let transport = m0::transport_check(&moving, EomSign::Consistent, 512, 1.0)?;
    out.tables.push(("sn_profile".into(), profile_table(&prof)));
    let wp = [("b", b), ("J", wave.j), ("D", wave.d)];
    let b2 = b * b;
    let mut hat = Table::new(&[
        "p_re", "p_im", "closed_re", "closed_im", "printed_re", "printed_im", "quad_re", "quad_im", "closed_dev", "printed_dev",
    ]);
    let mut worst_closed = 0.0f64;
    let mut worst_printed = f64::INFINITY;
    for (pr, pi) in [(10.0, 0.0), (5.0, 3.0), (-1.0, 2.0), (1.5, -0.7), (-6.0, 0.5), (4.0, 0.0)] {
        let s = m0::gamma_hat_sample(C64::new(pr * b2, pi * b2), b)?;
        worst_closed = worst_closed.max(s.closed_deviation);
        worst_printed = worst_printed.min(s.printed_deviation);
        hat.push(vec![
            s.p_re, s.p_im, s.closed.0, s.closed.1, s.printed.0, s.printed.1, s.quadrature.0, s.quadrature.1,
            s.closed_deviation, s.printed_deviation,
        ]);
    }
    let q10 = m0::gamma_hat_quadrature(C64::new(-10.0 * b2, 0.0), b, 1e-14)?;
    out.ledger.record(
        "gamma_hat printed closed form vs period quadrature (p = -10 b^2)",
        "6b^4K + 2p^2K + 36b^4(K-E) - 3b^2p(E-3K) numerator",
        m0::gamma_hat_printed(C64::new(-10.0 * b2, 0.0), b)?.re,
        q10.re,
        &wp,
    );
    out.ledger.record(
        "gamma_hat re-derived closed form vs period quadrature (p = -10 b^2)",
        "2Kp^2 + 6b^2p(K-E) - 12b^4K numerator",
        m0::gamma_hat(C64::new(-10.0 * b2, 0.0), b)?.re,
        q10.re,
        &wp,
    );
    let singular = m0::singular_set(b, 10.0 * b2, 2001);

    let contour = ContourSpec { o: cfg.m0.abscissa_factor * 2.0 * 3f64.sqrt() * b2, t_cut: cfg.m0.t_cut * b2, n_nodes: cfg.m0.n_nodes };
    let engine = m0::BromwichEngine::new(b, &contour)?;
    let taus: Vec<f64> = (0..=40).map(|i| 0.1 * 50f64.powf(i as f64 / 40.0) / b2).collect();
    let bloch = m0::bloch_trace(b, &taus, &Default::default())?;
    let mut gam = Table::new(&["tau", "gamma_bromwich", "gamma_bloch", "rel_dev", "gamma_minus"]);
    let mut worst_bloch = 0.0f64;
    for (t, g) in taus.iter().zip(&bloch) {
        let br = engine.gamma(*t)?;
        let dev = ((br - g) / g).abs();
        worst_bloch = worst_bloch.max(dev);
        gam.push(vec![*t, br, *g, dev, bromwich::gamma_minus(*t, b)]);
    }
    let window_max = (1..=100).map(|i| engine.value(0.01 * i as f64 / b2).re.abs()).fold(0.0, f64::max);
    let mut causal = Table::new(&["tau", "gamma", "over_max"]);
    let mut worst_causal = 0.0f64;
    for i in 1..=20 {
        let t = -0.1 * i as f64 / b2;
        let g = engine.value(t).re;
        worst_causal = worst_causal.max(g.abs() / window_max);
        causal.push(vec![t, g, g.abs() / window_max]);
    }
    let t1 = 1.0 / b2;
    out.ledger.record(
        "Bromwich gamma vs Bloch band trace (tau = 1/b^2)",
        "inverse Laplace transform of gamma_hat",
        engine.gamma(t1)?,
        m0::bloch_trace(b, &[t1], &Default::default())?[0],
        &wp,
    );

    let d = cfg.quant.d;
    let q = cfg.quant.params(d);
    let opts = M0Options { zeta: ZetaOptions { tau_min: cfg.numerics.tau_min, gate: cfg.numerics.zeta_gate, ..Default::default() }, ..Default::default() };
    let de = m0::delta_e_m0(&wave, &q, &contour, &opts)?;
    let mut variants = Table::new(&["abscissa_factor", "delta_e_re", "delta_e_im", "error_bar"]);
    for f in [1.1, 1.5, 2.0] {
        let r = m0::delta_e_m0(&wave, &q, &ContourSpec { o: f * 2.0 * 3f64.sqrt() * b2, ..contour }, &opts)?;
        variants.push(vec![f, r.delta_e_re, r.delta_e_im, r.error_bar]);
    }
    out.summary = json!({
        "wave": wave,
        "amplitude": wave.amplitude()?,
        "period": period,
        "residual_printed": r_printed,
        "residual_consistent": r_cons,
        "transport": transport,
        "gamma_hat_worst_closed_deviation": worst_closed,
        "gamma_hat_best_printed_deviation": worst_printed,
        "singular_set": singular,
        "decay_exponent": m0::green::decay_exponent(b, contour.o, 1e3 * b2, 1e4 * b2),
        "bloch_worst_deviation": worst_bloch,
        "causality_worst": worst_causal,
        "delta_e": de,
    });
    out.metrics.insert("delta_e_re".into(), de.delta_e_re);
    out.metrics.insert("delta_e_im".into(), de.delta_e_im);
    out.metrics.insert("error_bar".into(), de.error_bar);
    out.metrics.insert("bloch_worst_deviation".into(), worst_bloch);
    out.tables.push(("gamma_hat".into(), hat));
    out.tables.push(("gamma_tau".into(), gam));
    out.tables.push(("causality".into(), causal));
    out.tables.push(("delta_e_contours".into(), variants));
    Ok(out)
}

pub fn cmd_chain_sim(cfg: &RunConfig) -> Result<CommandOutput> {
    let mut out = CommandOutput::new("chain-sim");
    let (p, warnings) = kink_params(cfg)?;
    let (v, w) = (p.v(), cfg.width_mode.width(p.m()));
    let profile = move |z: f64| v * (z / w).tanh();
    let ch = &cfg.chain;
    if ch.sites < 3 {
        return Err(Error::Size { needed: 3, got: ch.sites });
    }
    let mut start = embed::embed_phi4_profile(profile, ch.sites, 0.5 * (ch.sites - 1) as f64);
    if ch.noise > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let n = start.sites.len();
        for s in start.sites[1..n - 1].iter_mut() {
            for c in s.iter_mut() {
                *c += ch.noise * rng.random_range(-1.0..1.0);
            }
        }
        start = SpinConfiguration::normalized(start.sites);
    }
    let traj = spin_chain::integrate_chain(&start, &cfg.spin, ch.dt, ch.steps, ch.boundary, ch.record_every)?;
    let manifest = spin_chain::io::TrajectoryManifest::new(&traj, &cfg.spin, ch.boundary, ch.dt, ch.steps);
    let study = embed::refinement_study(profile, &cfg.spin, 0.5, 6, 30.0 * w)?;
    let mut t = Table::new(&["t", "n", "Sx", "Sy", "Sz"]);
    for (time, frame) in traj.times.iter().zip(&traj.frames) {
        for (n, s) in frame.sites.iter().enumerate() {
            t.push(vec![*time, n as f64, s[0], s[1], s[2]]);
        }
    }
    let mut refine = Table::new(&["h", "energy"]);
    for (h, e) in study.spacings.iter().zip(&study.energies) {
        refine.push(vec![*h, *e]);
    }
    out.summary = json!({
        "phi4": p,
        "warnings": warnings,
        "seed": cfg.seed,
        "trajectory": manifest,
        "refinement": study,
    });
    out.metrics.insert("energy_drift".into(), traj.energy_drift);
    out.metrics.insert("max_norm_error".into(), traj.max_norm_error);
    out.metrics.insert("refined_energy".into(), study.extrapolated);
    out.tables.push(("trajectory".into(), t));
    out.tables.push(("refinement".into(), refine));
    Ok(out)
}

pub fn run_command(name: &str, cfg: &RunConfig) -> Result<CommandOutput> {
    match name {
        "kink" => cmd_kink(cfg),
        "corrections" => cmd_corrections(cfg),
        "m0" => cmd_m0(cfg),
        "chain-sim" => cmd_chain_sim(cfg),
        other => Err(Error::Config(format!("unknown command '{other}'"))),
    }
}
