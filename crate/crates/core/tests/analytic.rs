// Copyright 2026 fluxsim contributors
// SPDX-License-Identifier: Apache-2.0

mod common;

use common::{reference_bath, reference_eigen};
use fluxsim_core::analytic::{
    asymptotic_sweep_model, driven_times, free_decay_times, loglog_slope, CharacteristicTimes, SweepAxis,
};
use fluxsim_core::dissipator::damping_rate_matrix;
use fluxsim_core::units::{to_us, PICO};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn closed_forms_match_rate_matrix() {
    let eig = reference_eigen();
    let bath = reference_bath();
    let t = free_decay_times(eig, &bath).unwrap();
    let r = damping_rate_matrix(eig, &bath, 2).unwrap();
    let w = eig.params.omega_lc();
    assert!((t.kappa1 / (r.kappa1() * w) - 1.0).abs() < 1e-12);
    assert!((t.kappa2 / (r.kappa2() * w) - 1.0).abs() < 1e-12);
    let r4 = damping_rate_matrix(eig, &bath, 4).unwrap();
    assert!((t.kappa1 / (r4.kappa1() * w) - 1.0).abs() < 1e-12);
}

#[test]
fn reference_device_times() {
    let t = free_decay_times(reference_eigen(), &reference_bath()).unwrap();
    let d = driven_times(&t);
    for (got, want) in [
        (t.t1, 3.429),
        (t.t2, 2.243),
        (t.t_phi, 3.333),
        (d.t1, 2.712),
        (d.t22, 2.712),
    ] {
        assert!((to_us(got) / want - 1.0).abs() < 1e-3, "{} vs {want}", to_us(got));
    }
    assert_eq!(d.t21, t.t2);
    assert!(t.t2 < 2.0 * t.t1);
}

#[test]
fn equal_mean_flux_suppresses_dephasing() {
    let mut eig = reference_eigen().clone();
    eig.x_mn[(1, 1)] = eig.x_mn[(0, 0)];
    let t = free_decay_times(&eig, &reference_bath()).unwrap();
    assert!(t.t_phi.is_infinite());
    assert_eq!(t.t2, 2.0 * t.t1);
}

#[test]
fn driven_time_lies_between_free_times() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let k1: f64 = 10f64.powf(rng.random_range(2.0..8.0));
        let k2: f64 = 10f64.powf(rng.random_range(2.0..8.0));
        let free = CharacteristicTimes::from_rates(k1, k2);
        let d = driven_times(&free);
        assert!(d.t1 >= free.t1.min(free.t2) && d.t1 <= free.t1.max(free.t2));
    }
}

fn times_at(temperature: f64) -> (f64, f64, f64) {
    let mut bath = reference_bath();
    bath.temperature = temperature;
    let t = free_decay_times(reference_eigen(), &bath).unwrap();
    (t.t1, t.t2, driven_times(&t).t1)
}

#[test]
fn temperature_limits() {
    let temps: Vec<f64> = (0..=10).map(|k| 10.0 * 10f64.powf(k as f64 / 10.0)).collect();
    let rows: Vec<_> = temps.iter().map(|&t| times_at(t)).collect();
    for pick in [
        |r: &(f64, f64, f64)| r.0,
        |r: &(f64, f64, f64)| r.1,
        |r: &(f64, f64, f64)| r.2,
    ] {
        let y: Vec<f64> = rows.iter().map(pick).collect();
        let s = loglog_slope(&temps, &y).unwrap();
        assert!((s + 1.0).abs() < 0.02, "slope {s}");
    }
    let (a, b) = (times_at(1e-6), times_at(1e-7));
    assert!((a.0 / b.0 - 1.0).abs() < 1e-6);
    assert!((a.1 / b.1 - 1.0).abs() < 1e-3);
    let zero = times_at(0.0);
    assert!((zero.0 / b.0 - 1.0).abs() < 1e-6);
    assert_eq!(zero.1, 2.0 * zero.0);
}

fn t1_with_control_mutual(m_x: f64) -> f64 {
    let mut bath = reference_bath();
    bath.control.m_x = m_x;
    free_decay_times(reference_eigen(), &bath).unwrap().t1
}

#[test]
fn control_mutual_sweep_follows_quadratic_law() {
    let upper: Vec<f64> = (0..=10).map(|k| 3.0 * PICO * 10f64.powf(k as f64 / 10.0)).collect();
    let t1: Vec<f64> = upper.iter().map(|&m| t1_with_control_mutual(m)).collect();
    let s = loglog_slope(&upper, &t1).unwrap();
    assert!((s + 2.0).abs() < 0.1, "slope {s}");

    let low = t1_with_control_mutual(1e-3 * PICO);
    let knee = t1_with_control_mutual(1e-2 * PICO);
    assert!((low / knee - 1.0).abs() < 0.01);

    let all: Vec<f64> = (0..=30).map(|k| 1e-2 * PICO * 10f64.powf(k as f64 / 10.0)).collect();
    let t1: Vec<f64> = all.iter().map(|&m| t1_with_control_mutual(m)).collect();
    let model = asymptotic_sweep_model(SweepAxis::ControlMutual, &all, &t1).unwrap();
    for (m, t) in all.iter().zip(&t1) {
        assert!((model.rate(*m) * t - 1.0).abs() < 0.1);
    }
}

#[test]
fn balanced_bridge_maximizes_t1() {
    let eig = reference_eigen();
    let l_j1: Vec<f64> = (0..=20).map(|k| (450.0 + 10.0 * k as f64) * PICO).collect();
    let mut delta_l = Vec::new();
    let mut t1 = Vec::new();
    for &l in &l_j1 {
        let mut bath = reference_bath();
        bath.readout.l_j1 = l;
        delta_l.push(bath.readout.derived(bath.qubit_l).delta_l);
        t1.push(free_decay_times(eig, &bath).unwrap().t1);
    }
    let best = (0..t1.len()).max_by(|&a, &b| t1[a].total_cmp(&t1[b])).unwrap();
    assert!((l_j1[best] / PICO - 550.0).abs() < 1e-9);
    let model = asymptotic_sweep_model(SweepAxis::BridgeAsymmetry, &delta_l, &t1).unwrap();
    assert!(model.a > 0.0 && model.b > 0.0);
    assert!((model.rate(0.0) * t1[best] - 1.0).abs() < 0.05);
}
