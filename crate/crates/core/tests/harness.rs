// Copyright 2026 fluxsim contributors
// SPDX-License-Identifier: Apache-2.0

use std::sync::OnceLock;

use fluxsim_core::config::{RunConfig, SweepMethod};
use fluxsim_core::csv::Table;
use fluxsim_core::fitkit::{
    fit_free_coherence, fit_free_inversion, fit_rabi_coherence, fit_rabi_inversion, FitOptions,
};
use fluxsim_core::harness::*;
use fluxsim_core::Error;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn free_n4() -> &'static (Table, FreeDecaySummary) {
    static RUN: OnceLock<(Table, FreeDecaySummary)> = OnceLock::new();
    RUN.get_or_init(|| run_free_decay(&RunConfig::reference(), &HarnessOptions::default()).unwrap())
}

fn driven_1e5() -> &'static (Table, DrivenSummary) {
    static RUN: OnceLock<(Table, DrivenSummary)> = OnceLock::new();
    RUN.get_or_init(|| {
        let mut cfg = RunConfig::reference();
        cfg.drive.amplitude = 1e-5;
        run_driven(&cfg, &HarnessOptions::default()).unwrap()
    })
}

#[test]
fn free_decay_matches_closed_form() {
    let (_, s) = free_n4();
    assert!(s.fits_ok(), "{s:?}");
    assert!(
        rel(s.t1_us, s.analytic.t1_us) < 5e-3,
        "T1 {} vs {}",
        s.t1_us,
        s.analytic.t1_us
    );
    assert!(
        rel(s.t2_us, s.analytic.t2_us) < 5e-3,
        "T2 {} vs {}",
        s.t2_us,
        s.analytic.t2_us
    );
    assert!(rel(s.t_phi_us, s.analytic.t_phi_us) < 1e-2);
}

#[test]
fn reported_dephasing_time_follows_from_t1_t2() {
    let (_, s) = free_n4();
    assert_eq!(s.t_phi_us, 1.0 / (1.0 / s.t2_us - 1.0 / (2.0 * s.t1_us)));
}

#[test]
fn two_and_four_levels_agree_in_free_decay() {
    let mut cfg = RunConfig::reference();
    cfg.run.n_levels = 2;
    let (_, s2) = run_free_decay(&cfg, &HarnessOptions::default()).unwrap();
    let (_, s4) = free_n4();
    let sig3 = |v: f64| format!("{v:.3e}");
    assert_eq!(sig3(s2.t1_us), sig3(s4.t1_us));
    assert_eq!(sig3(s2.t2_us), sig3(s4.t2_us));
}

#[test]
fn free_summary_reproducible_from_csv() {
    let (table, s) = free_n4();
    let parsed = Table::parse(&table.to_csv_string()).unwrap();
    let t = parsed.column("t_us").unwrap();
    let opts = FitOptions::default();
    let inv = fit_free_inversion(&t, &parsed.column("inversion").unwrap(), &opts).unwrap();
    let coh = fit_free_coherence(&t, &parsed.column("coherence_sq").unwrap(), &opts).unwrap();
    assert!(rel(inv.tau(), s.t1_us) < 1e-10);
    assert!(rel(coh.tau(), s.t2_us) < 1e-10);
}

#[test]
fn driven_summary_reproducible_from_csv() {
    let (table, s) = driven_1e5();
    let parsed = Table::parse(&table.to_csv_string()).unwrap();
    let t = parsed.column("t_us").unwrap();
    let opts = FitOptions {
        omega_hint: s.inversion_fit.omega_hint_per_us,
        ..Default::default()
    };
    let inv = fit_rabi_inversion(&t, &parsed.column("inversion").unwrap(), &opts).unwrap();
    let coh = fit_rabi_coherence(&t, &parsed.column("coherence_sq").unwrap(), &opts).unwrap();
    assert!(rel(inv.tau(), s.t1_driven_us) < 1e-10);
    assert!(rel(coh.tau(), s.t22_driven_us) < 1e-10);
}

#[test]
fn inversion_and_coherence_share_rabi_frequency() {
    let (_, s) = driven_1e5();
    let w_inv = s.inversion_fit.omega.unwrap();
    let w_coh = s.coherence_fit.omega.unwrap();
    assert!(rel(w_coh, w_inv) < 5e-3, "{w_inv} vs {w_coh}");
    assert!(rel(w_inv, s.analytic.omega) < 5e-3);
}

#[test]
fn driven_records_are_stroboscopic_and_bounded() {
    let (table, s) = driven_1e5();
    assert_eq!(s.plan.record_every % 200, 0);
    assert!(table.len() <= 8001);
    assert!(s.max_leakage > 0.0 && s.max_leakage < 1e-2);
    assert!(s.population_excursion < 1e-6);
}

#[test]
fn weak_drive_is_field_independent() {
    let mut cfg = RunConfig::reference();
    cfg.drive.amplitude = 1e-6;
    let (_, s) = run_driven(&cfg, &HarnessOptions::default()).unwrap();
    assert!(s.fits_ok());
    assert!(rel(s.t1_driven_us, s.analytic.t1_driven_us) < 5e-3);
    assert!(rel(s.t22_driven_us, s.analytic.t22_driven_us) < 5e-3);
}

#[test]
fn zero_amplitude_drive_is_refused() {
    let mut cfg = RunConfig::reference();
    cfg.drive.amplitude = 0.0;
    match run_driven(&cfg, &HarnessOptions::default()) {
        Err(Error::Config { path, message }) => {
            assert_eq!(path, "drive.amplitude");
            assert!(message.contains("free-decay"));
        }
        other => panic!("expected a configuration error, got {other:?}"),
    }
}

#[test]
fn dt_refine_reports_small_drift() {
    let mut cfg = RunConfig::reference();
    cfg.run.n_levels = 2;
    let (_, s) = run_free_decay(&cfg, &HarnessOptions { dt_refine: true }).unwrap();
    let d = s.dt_refine.unwrap();
    assert!(d.tau1 < 1e-4 && d.tau2 < 1e-4, "{d:?}");
}

#[test]
fn spectrum_rows_follow_input_order() {
    let mut cfg = RunConfig::reference();
    cfg.run.x_e_values = vec![0.4995, 0.4991];
    let table = run_spectrum(&cfg).unwrap();
    assert_eq!(table.column("x_e").unwrap(), vec![0.4995, 0.4991]);
    cfg.run.x_e_values.clear();
    let empty = run_spectrum(&cfg).unwrap();
    assert!(empty.is_empty());
    assert_eq!(empty.to_csv_string().lines().count(), 2);
}

#[test]
fn bath_columns_add_up() {
    let (table, s) = run_bath(&RunConfig::reference()).unwrap();
    let (jx, jm, j) = (
        table.column("J_x").unwrap(),
        table.column("J_m").unwrap(),
        table.column("J").unwrap(),
    );
    for k in 0..j.len() {
        assert!((j[k] - (jx[k] + jm[k])).abs() <= 1e-14 * j[k].abs());
    }
    assert!(s.peak_omega.is_some());
}

#[test]
fn uncoupled_circuits_give_zero_density() {
    let mut cfg = RunConfig::reference();
    cfg.control.m_x = 0.0;
    cfg.readout.m_m = 0.0;
    let (table, s) = run_bath(&cfg).unwrap();
    for col in ["J_x", "J_m", "J"] {
        assert!(table.column(col).unwrap().iter().all(|&v| v == 0.0));
    }
    assert!(s.peak_omega.is_none());
}

fn sweep_config(method: SweepMethod) -> RunConfig {
    let mut cfg: RunConfig = "[sweep]\nparameter = M_x\nvalues = 0.5 pH, 1 pH, 2 pH\nquantities = T1, T2\n"
        .parse()
        .unwrap();
    cfg.run.n_levels = 2;
    cfg.sweep.as_mut().unwrap().method = method;
    cfg
}

fn sweep_with_threads(cfg: &RunConfig, threads: usize) -> String {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    pool.install(|| run_sweep(cfg, &HarnessOptions::default()).unwrap().to_csv_string())
}

#[test]
fn sweep_output_independent_of_worker_count() {
    for method in [SweepMethod::Analytic, SweepMethod::Simulate] {
        let cfg = sweep_config(method);
        let serial = sweep_with_threads(&cfg, 1);
        assert_eq!(serial, sweep_with_threads(&cfg, 4));
        assert_eq!(serial.lines().count(), 5);
    }
}

#[test]
fn simulated_sweep_tracks_closed_form() {
    let a = run_sweep(&sweep_config(SweepMethod::Analytic), &HarnessOptions::default()).unwrap();
    let s = run_sweep(&sweep_config(SweepMethod::Simulate), &HarnessOptions::default()).unwrap();
    for col in ["T1_us", "T2_us"] {
        for (x, y) in a.column(col).unwrap().iter().zip(s.column(col).unwrap()) {
            assert!(rel(y, *x) < 5e-3, "{col}: {y} vs {x}");
        }
    }
}

#[test]
fn sweep_rejects_invalid_values_with_field_path() {
    let mut cfg = sweep_config(SweepMethod::Analytic);
    cfg.sweep.as_mut().unwrap().values = vec![1e-12, 1e-9];
    match run_sweep(&cfg, &HarnessOptions::default()) {
        Err(Error::Config { path, .. }) => assert_eq!(path, "sweep.values"),
        other => panic!("expected a configuration error, got {other:?}"),
    }
}
