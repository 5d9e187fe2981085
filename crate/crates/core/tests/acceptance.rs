// Copyright 2026 fluxsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite: one PASS/FAIL line per criterion against the reference
//! device. Runs without the libtest harness so that every criterion is
//! evaluated and reported even when an earlier one fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fluxsim_core::analytic::loglog_slope;
use fluxsim_core::config::{Quantity, RunConfig, SweepMethod, SweepParameter, SweepSpec};
use fluxsim_core::dissipator::{damping_rate_matrix, spontaneous_rate, stimulated_rate};
use fluxsim_core::harness::{prepare, run_bath, run_free_decay, run_sweep, run_table2, HarnessOptions, TableRow};
use fluxsim_core::linalg::expm;
use fluxsim_core::liouville::{build_liouvillian, propagate, DensityMatrix, DrivePulse, PropagationOptions};
use fluxsim_core::qubit_model::{build_hamiltonian, solve_eigensystem, GridSpec, SolverOptions, SquidParams};
use fluxsim_core::timeseries::TimeSeries;
use fluxsim_core::units::{BOLTZMANN, HBAR, MICRO, PICO};
use nalgebra::DVector;
use num_complex::Complex64;

struct Outcome {
    pass: bool,
    detail: String,
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn within(got: f64, want: f64, tol: f64) -> bool {
    rel(got, want) <= tol
}

fn check(pass: &mut bool, ok: bool) -> &'static str {
    *pass &= ok;
    if ok {
        "ok"
    } else {
        "OUT"
    }
}

fn spectroscopy() -> Outcome {
    let p = SquidParams::reference_device();
    let opts = SolverOptions::default();
    let start = Instant::now();
    let h = build_hamiltonian(&p, &GridSpec::default_for(&p), opts.kinetic).unwrap();
    let eig = solve_eigensystem(&h, 4, &opts).unwrap();
    let elapsed = start.elapsed();
    let e31 = eig.omega(2, 0);
    let ratio = (eig.x_mn[(1, 0)] / eig.x_mn[(2, 1)]).abs();
    let w21 = eig.omega(1, 0);
    let mut pass = true;
    let detail = format!(
        "ΔE31 = {e31:.5} ω_LC [{}], |x21/x32| = {ratio:.4} [{}], ω21 = {w21:.5} ω_LC [{}], 128×64 solve {:.1} s [{}]",
        check(&mut pass, within(e31, 0.259, 0.01)),
        check(&mut pass, within(ratio, 0.262, 0.02)),
        check(&mut pass, within(w21, 0.127, 0.01)),
        elapsed.as_secs_f64(),
        check(&mut pass, elapsed <= Duration::from_secs(120)),
    );
    Outcome { pass, detail }
}

fn spectral_density() -> Outcome {
    let cfg = RunConfig::reference();
    let (_, summary) = run_bath(&cfg).unwrap();
    let peak = summary.peak_omega.unwrap();
    let bath = cfg.bath();
    let w_lc = cfg.squid.omega_lc();
    let temperature = cfg.run.temperature;
    let mut kms: f64 = 0.0;
    for k in 1..=1000 {
        let w = 5.0 * k as f64 / 1000.0 * w_lc;
        let ratio = bath.spectral_density(w) / bath.spectral_density(-w);
        kms = kms.max(rel(ratio, (HBAR * w / (BOLTZMANN * temperature)).exp()));
    }
    let mut pass = true;
    let detail = format!(
        "peak of J at {peak:.4} ω_LC vs 1.69 ± 0.02 [{}], max KMS deviation {kms:.1e} [{}]",
        check(&mut pass, (peak - 1.69).abs() <= 0.02),
        check(&mut pass, kms <= 1e-10),
    );
    Outcome { pass, detail }
}

fn free_decay() -> Outcome {
    let start = Instant::now();
    let (_, s) = run_free_decay(&RunConfig::reference(), &HarnessOptions::default()).unwrap();
    let elapsed = start.elapsed();
    let mut pass = s.fits_ok();
    let analytic = rel(s.t1_us, s.analytic.t1_us)
        .max(rel(s.t2_us, s.analytic.t2_us))
        .max(rel(s.t_phi_us, s.analytic.t_phi_us));
    let detail = format!(
        "T1 = {:.4} μs [{}], T2 = {:.4} μs [{}], T_φ = {:.4} μs [{}], fitted vs closed form {:.2e} [{}], {:.1} s [{}]",
        s.t1_us,
        check(&mut pass, within(s.t1_us, 3.429, 0.02)),
        s.t2_us,
        check(&mut pass, within(s.t2_us, 2.243, 0.02)),
        s.t_phi_us,
        check(&mut pass, within(s.t_phi_us, 3.333, 0.03)),
        analytic,
        check(&mut pass, analytic <= 5e-3),
        elapsed.as_secs_f64(),
        check(&mut pass, elapsed <= Duration::from_secs(600)),
    );
    Outcome { pass, detail }
}

fn row(rows: &[TableRow], amplitude: f64) -> &TableRow {
    rows.iter().find(|r| r.amplitude == amplitude).unwrap()
}

fn driven_decay(rows: &[TableRow]) -> Outcome {
    let c = &row(rows, 1e-5).n4;
    let omega = c.omega.unwrap();
    let mut pass = true;
    let detail = format!(
        "Ω = {omega:.4e} ω_LC vs 4.016e-5 [{}], T̃1 = {:.4} μs ({}) [{}], T̃22 = {:.4} μs ({}) [{}]",
        check(&mut pass, within(omega, 4.016e-5, 0.02)),
        c.relaxation_us,
        c.relaxation_status,
        check(&mut pass, within(c.relaxation_us, 2.689, 0.02)),
        c.decoherence_us,
        c.decoherence_status,
        check(&mut pass, within(c.decoherence_us, 2.682, 0.02)),
    );
    Outcome { pass, detail }
}

fn weak_field_plateau(rows: &[TableRow]) -> Outcome {
    let mut pass = true;
    let mut values = Vec::new();
    let mut marks = Vec::new();
    for a in [1e-7, 5e-7, 1e-6] {
        let c = &row(rows, a).n4;
        for (v, status) in [
            (c.relaxation_us, &c.relaxation_status),
            (c.decoherence_us, &c.decoherence_status),
        ] {
            let ok = status == "ok" && within(v, 2.712, 0.02);
            marks.push(format!("{v:.4}{}", if ok { "" } else { "!" }));
            pass &= ok;
            values.push(v);
        }
    }
    let hi = values.iter().copied().fold(f64::MIN, f64::max);
    let lo = values.iter().copied().fold(f64::MAX, f64::min);
    let spread = hi / lo - 1.0;
    let detail = format!(
        "T̃1/T̃22 at 1e-7, 5e-7, 1e-6 = {} μs vs 2.712 ± 2%, pairwise spread {:.3}% [{}]",
        marks.join(", "),
        100.0 * spread,
        check(&mut pass, spread < 5e-3),
    );
    Outcome { pass, detail }
}

/// Printed table: amplitude, then relaxation N=4, N=2, decoherence N=4, N=2;
/// `None` marks the model-mismatch entry.
const TABLE: [(f64, [Option<f64>; 4]); 8] = [
    (0.0, [Some(3.429), Some(3.429), Some(2.243), Some(2.243)]),
    (1e-7, [Some(2.712), Some(2.712), Some(2.712), Some(2.712)]),
    (5e-7, [Some(2.712), Some(2.712), Some(2.712), Some(2.712)]),
    (1e-6, [Some(2.712), Some(2.712), Some(2.712), Some(2.712)]),
    (5e-6, [Some(2.706), Some(2.706), Some(2.705), Some(2.713)]),
    (1e-5, [Some(2.689), Some(2.689), Some(2.682), Some(2.716)]),
    (5e-5, [Some(2.224), Some(2.224), Some(1.945), Some(2.742)]),
    (1e-4, [Some(1.480), Some(1.480), None, Some(2.837)]),
];

fn table2(rows: &[TableRow], elapsed: Duration) -> Outcome {
    let mut failures = Vec::new();
    let mut cells = 0;
    for (a, want) in TABLE {
        let r = row(rows, a);
        let got = [
            (r.n4.relaxation_us, &r.n4.relaxation_status, "relaxation N=4"),
            (r.n2.relaxation_us, &r.n2.relaxation_status, "relaxation N=2"),
            (r.n4.decoherence_us, &r.n4.decoherence_status, "decoherence N=4"),
            (r.n2.decoherence_us, &r.n2.decoherence_status, "decoherence N=2"),
        ];
        for (w, (v, status, name)) in want.iter().zip(got) {
            cells += 1;
            match w {
                Some(w) if status != "ok" => failures.push(format!("{name} at {a:e}: {status} ({v:.3} vs {w})")),
                Some(w) if !within(v, *w, 0.03) => failures.push(format!("{name} at {a:e}: {v:.3} vs {w}")),
                None if status != "mismatch" => failures.push(format!("{name} at {a:e}: {status}, expected mismatch")),
                _ => {}
            }
        }
    }
    let in_time = elapsed <= Duration::from_secs(7200);
    let mut detail = format!(
        "{}/{cells} cells reproduced, {:.1} s [{}]",
        cells - failures.len(),
        elapsed.as_secs_f64(),
        if in_time { "ok" } else { "OUT" }
    );
    if !failures.is_empty() {
        detail.push_str("; off: ");
        detail.push_str(&failures.join("; "));
    }
    Outcome {
        pass: failures.is_empty() && in_time,
        detail,
    }
}

fn detailed_balance() -> Outcome {
    let cfg = RunConfig::reference();
    let prep = prepare(&cfg, 4).unwrap();
    let mut worst: f64 = 0.0;
    for n in 1..4 {
        for m in 0..n {
            let sp = spontaneous_rate(&prep.eig, &prep.bath, m, n).unwrap();
            let st = stimulated_rate(&prep.eig, &prep.bath, n, m).unwrap();
            let de = HBAR * prep.eig.omega(n, m) * cfg.squid.omega_lc();
            worst = worst.max(rel(sp / st, (de / (BOLTZMANN * cfg.run.temperature)).exp()));
        }
    }
    let pass = worst <= 1e-10;
    Outcome {
        pass,
        detail: format!("max |Γsp/Γst / e^(ΔE/kT) − 1| over all pairs of 4 levels = {worst:.1e}"),
    }
}

fn hermiticity(ts: &TimeSeries) -> f64 {
    let n = ts.n;
    ts.states
        .iter()
        .flat_map(|s| (0..n * n).map(move |k| (s[k] - s[(k % n) * n + k / n].conj()).norm()))
        .fold(0.0, f64::max)
}

fn generator_invariants() -> Outcome {
    let cfg = RunConfig::reference();
    let prep = prepare(&cfg, 4).unwrap();
    let r = damping_rate_matrix(&prep.eig, &prep.bath, 4).unwrap();
    let n = 4;
    let max = r.r.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let (mut sum_rule, mut symmetry): (f64, f64) = (0.0, 0.0);
    for mp in 0..n {
        for np in 0..n {
            let s: f64 = (0..n).map(|m| r.get(m, m, mp, np)).sum();
            sum_rule = sum_rule.max(s.abs() / max);
            for m in 0..n {
                for k in 0..n {
                    symmetry = symmetry.max((r.get(k, m, np, mp) - r.get(m, k, mp, np)).abs() / max);
                }
            }
        }
    }
    let w_lc = cfg.squid.omega_lc();
    let w21 = prep.eig.omega(1, 0);
    let opts = PropagationOptions::default();
    let t_free = 5.0 * prep.times.t1.max(prep.times.t2) * w_lc;
    let dt = 2.0 * PI / (200.0 * w21);
    let free = build_liouvillian(&prep.eig, None, &r).unwrap();
    let steps = (t_free / dt).round();
    let a = propagate(&DensityMatrix::superposition(n), &free, steps * dt, dt, 4000, &opts).unwrap();
    let pulse = DrivePulse::continuous(1e-5, w21);
    let driven = build_liouvillian(&prep.eig, Some(pulse), &r).unwrap();
    let periods = (t_free / pulse.period()).round();
    let b = propagate(
        &DensityMatrix::ground(n),
        &driven,
        periods * pulse.period(),
        pulse.period() / 200.0,
        5200,
        &opts,
    )
    .unwrap();
    let trace = [&a, &b]
        .iter()
        .flat_map(|s| s.trace().into_iter().map(|t| (t - 1.0).abs()))
        .fold(0.0, f64::max);
    let herm = hermiticity(&a).max(hermiticity(&b));
    let mut pass = true;
    let detail = format!(
        "sum rule {sum_rule:.1e} [{}], swap symmetry {symmetry:.1e} [{}] (of max|R|); over {:.1} μs free and driven runs: trace {trace:.1e} [{}], Hermiticity {herm:.1e} [{}]",
        check(&mut pass, sum_rule <= 1e-12),
        check(&mut pass, symmetry <= 1e-12),
        t_free / w_lc / MICRO,
        check(&mut pass, trace <= 1e-9),
        check(&mut pass, herm <= 1e-9),
    );
    Outcome { pass, detail }
}

fn splitting_order() -> Outcome {
    let prep = prepare(&RunConfig::reference(), 2).unwrap();
    let r = damping_rate_matrix(&prep.eig, &prep.bath, 2).unwrap();
    let liou = build_liouvillian(&prep.eig, None, &r).unwrap();
    let rho0 = DensityMatrix::superposition(2);
    let period = 2.0 * PI / prep.eig.omega(1, 0);
    let t = 1000.0 * period;
    let exact = expm(&(liou.generator(0.0) * Complex64::new(t, 0.0))) * DVector::from_vec(rho0.to_vector());
    let mut errors = Vec::new();
    for k in [8usize, 16, 32, 64] {
        let dt = period / k as f64;
        let s = propagate(&rho0, &liou, t, dt, 1000 * k, &PropagationOptions::default()).unwrap();
        let last = s.states.last().unwrap();
        errors.push(
            last.iter()
                .zip(exact.iter())
                .fold(0.0f64, |m, (a, b)| m.max((a - b).norm())),
        );
    }
    let orders: Vec<f64> = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let pass = orders.iter().all(|o| (o - 2.0).abs() <= 0.1);
    Outcome {
        pass,
        detail: format!(
            "observed orders {} under Δt halving (errors {:.2e} → {:.2e})",
            orders.iter().map(|o| format!("{o:.3}")).collect::<Vec<_>>().join(", "),
            errors[0],
            errors[errors.len() - 1]
        ),
    }
}

fn sweep(parameter: SweepParameter, values: Vec<f64>) -> Vec<Vec<f64>> {
    let mut cfg = RunConfig::reference();
    cfg.sweep = Some(SweepSpec {
        parameter,
        values,
        quantities: Quantity::ALL.to_vec(),
        method: SweepMethod::Analytic,
    });
    let table = run_sweep(&cfg, &HarnessOptions::default()).unwrap();
    table.headers.iter().map(|h| table.column(h).unwrap()).collect()
}

fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a * (b / a).powf(k as f64 / (n - 1) as f64)).collect()
}

fn sweep_checks() -> Outcome {
    let mut pass = true;
    let mx = sweep(SweepParameter::MX, logspace(10.0 * PICO, 100.0 * PICO, 11));
    let mx_slope = loglog_slope(&mx[0], &mx[1]).unwrap();

    let lj1_values: Vec<f64> = (0..19).map(|k| (100.0 + 50.0 * k as f64) * PICO).collect();
    let lj1 = sweep(SweepParameter::LJ1, lj1_values);
    let peaks: Vec<f64> = lj1[1..]
        .iter()
        .map(|col| {
            let k = (0..col.len()).max_by(|&a, &b| col[a].total_cmp(&col[b])).unwrap();
            lj1[0][k] / PICO
        })
        .collect();
    let peaks_ok = peaks.iter().all(|p| (p - 550.0).abs() <= 50.0 + 1e-9);

    let t = sweep(SweepParameter::T, logspace(1e-3, 0.1, 401));
    let gap: Vec<f64> = t[1].iter().zip(&t[2]).map(|(t1, t2)| t1 - t2).collect();
    let crossing = (1..gap.len())
        .find(|&k| gap[k - 1].signum() != gap[k].signum())
        .map(|k| {
            let (x0, x1) = (t[0][k - 1].ln(), t[0][k].ln());
            (x0 - gap[k - 1] * (x1 - x0) / (gap[k] - gap[k - 1])).exp()
        });
    let crossing_mk = crossing.map_or(f64::NAN, |c| c * 1e3);

    let hot = sweep(SweepParameter::T, logspace(10.0, 100.0, 11));
    let t_slope = loglog_slope(&hot[0], &hot[1]).unwrap();

    let detail = format!(
        "T1 vs M_x slope over 10–100 pH {mx_slope:.4} [{}]; L_J1 maxima at {} pH [{}]; T1 = T2 at {crossing_mk:.2} mK vs 10.3 ± 1 [{}]; T1 vs T slope over 10–100 K {t_slope:.4} [{}]",
        check(&mut pass, (mx_slope + 2.0).abs() <= 0.1),
        peaks.iter().map(|p| format!("{p:.0}")).collect::<Vec<_>>().join("/"),
        check(&mut pass, peaks_ok),
        check(&mut pass, (crossing_mk - 10.3).abs() <= 1.0),
        check(&mut pass, (t_slope + 1.0).abs() <= 0.02),
    );
    Outcome { pass, detail }
}

fn harmonic_limit() -> Outcome {
    let p = SquidParams {
        beta_l: 0.0,
        delta_beta_l: 0.0,
        ..SquidParams::reference_device()
    };
    let opts = SolverOptions::default();
    let h = build_hamiltonian(&p, &GridSpec::default_for(&p), opts.kinetic).unwrap();
    let eig = solve_eigensystem(&h, 6, &opts).unwrap();
    let (wx, wy) = (1.0 / 2f64.sqrt(), (2.0 * p.g).sqrt());
    let mut ladder: Vec<f64> = (0..8)
        .flat_map(|nx| (0..3).map(move |ny| wx * (nx as f64 + 0.5) + wy * (ny as f64 + 0.5)))
        .collect();
    ladder.sort_by(f64::total_cmp);
    let worst = eig
        .energies
        .iter()
        .zip(&ladder)
        .map(|(e, l)| rel(*e, *l))
        .fold(0.0, f64::max);
    Outcome {
        pass: worst <= 1e-5,
        detail: format!("lowest 6 levels vs ω_x = ω_LC/√2, ω_y = √(2g) ω_LC ladder: max deviation {worst:.1e}"),
    }
}

fn main() -> ExitCode {
    let table_start = Instant::now();
    let (_, rows) = run_table2(&RunConfig::reference(), &HarnessOptions::default()).unwrap();
    let table_elapsed = table_start.elapsed();

    let results: Vec<(&str, Outcome)> = vec![
        ("spectroscopy", spectroscopy()),
        ("spectral density", spectral_density()),
        ("free decay", free_decay()),
        ("driven decay", driven_decay(&rows)),
        ("weak-field plateau", weak_field_plateau(&rows)),
        ("amplitude table", table2(&rows, table_elapsed)),
        ("detailed balance", detailed_balance()),
        ("generator invariants", generator_invariants()),
        ("splitting order", splitting_order()),
        ("sweep checks", sweep_checks()),
        ("harmonic limit", harmonic_limit()),
    ];
    let mut failed = 0;
    for (k, (name, o)) in results.iter().enumerate() {
        println!(
            "criterion {:>2} {} {name}: {}",
            k + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
