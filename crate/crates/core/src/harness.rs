// Copyright 2026 fluxsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Experiments behind the command-line tool: spectrum, bath spectral
//! density, free and driven decay, the amplitude table and circuit sweeps.
//!
//! Every experiment returns plot-ready tables plus a serializable summary.
//! Independent simulations run on the global rayon pool; results are
//! collected in input order so output does not depend on the worker count.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{driven_times, free_decay_times, CharacteristicTimes};
use crate::bath::{locate_peak, BathModel};
use crate::config::{Quantity, RunConfig, SweepMethod};
use crate::csv::{Cell, Table};
use crate::dissipator::damping_rate_matrix;
use crate::fitkit::{
    fit_free_coherence, fit_free_inversion, fit_rabi_coherence, fit_rabi_inversion, FitOptions, FitResult, FitStatus,
};
use crate::liouville::{build_liouvillian, propagate, DensityMatrix, DrivePulse, PropagationOptions, RelaxationMethod};
use crate::qubit_model::{build_hamiltonian, solve_eigensystem, sweep_spectrum, EigenSystem};
use crate::timeseries::TimeSeries;
use crate::units::{reduced_to_us, us_to_reduced, MICRO};
use crate::{Error, Result};

/// Target number of recorded rows per run when the stride is automatic.
const TARGET_ROWS: usize = 4000;
/// Minimum recorded samples per expected Rabi period.
const SAMPLES_PER_RABI_PERIOD: f64 = 32.0;

#[derive(Debug, Clone, Copy, Default)]
pub struct HarnessOptions {
    /// Repeat every propagation at Δt/2 and report the drift of fitted times.
    pub dt_refine: bool,
}

/// Validated inputs shared by the dynamical experiments.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub eig: EigenSystem,
    pub bath: BathModel,
    pub times: CharacteristicTimes,
}

/// Validates the configuration and solves for at least `n_states` levels.
pub fn prepare(cfg: &RunConfig, n_states: usize) -> Result<Prepared> {
    cfg.validate()?;
    let h = build_hamiltonian(&cfg.squid, &cfg.grid, cfg.solver.kinetic)?;
    let eig = solve_eigensystem(&h, n_states.max(2), &cfg.solver)?;
    let bath = cfg.bath();
    let times = free_decay_times(&eig, &bath)?;
    Ok(Prepared { eig, bath, times })
}

fn us(seconds: f64) -> f64 {
    seconds / MICRO
}

pub fn run_spectrum(cfg: &RunConfig) -> Result<Table> {
    cfg.validate()?;
    let n = cfg.run.n_levels;
    let mut headers = vec!["x_e".to_string()];
    headers.extend((1..=n).map(|k| format!("E_{k}")));
    for m in 1..=n {
        for k in m..=n {
            headers.push(format!("x_{m}{k}"));
        }
    }
    let mut table = Table::new(headers);
    if cfg.run.x_e_values.is_empty() {
        return Ok(table);
    }
    let rows = sweep_spectrum(&cfg.squid, &cfg.grid, &cfg.run.x_e_values, n, &cfg.solver)?;
    for row in rows {
        let mut cells: Vec<Cell> = vec![row.x_e.into()];
        cells.extend(row.energies.iter().map(|&e| Cell::Num(e)));
        for m in 0..n {
            for k in m..n {
                cells.push(row.x_mn[(m, k)].into());
            }
        }
        table.push(cells);
    }
    Ok(table)
}

#[derive(Debug, Clone, Serialize)]
pub struct BathSummary {
    /// Location of the maximum of J on the configured range (ω_LC units);
    /// absent when J vanishes identically.
    pub peak_omega: Option<f64>,
    pub balanced_bridge: bool,
}

/// Spectral densities on the configured grid. Frequencies in units of ω_LC,
/// densities in SI units.
pub fn run_bath(cfg: &RunConfig) -> Result<(Table, BathSummary)> {
    cfg.validate()?;
    let bath = cfg.bath();
    let w_lc = cfg.squid.omega_lc();
    let r = &cfg.run;
    let mut table = Table::new(["omega", "J_x", "J_m", "J"]);
    let mut any = false;
    for k in 0..r.omega_points {
        let w = r.omega_min + (r.omega_max - r.omega_min) * k as f64 / (r.omega_points - 1) as f64;
        let jx = bath.spectral_density_control(w * w_lc);
        let jm = bath.spectral_density_readout(w * w_lc);
        any |= jx + jm != 0.0;
        table.push(vec![w.into(), jx.into(), jm.into(), (jx + jm).into()]);
    }
    let lo = r.omega_min.max(1e-6 * r.omega_max.abs()).max(1e-9);
    let peak_omega = if any && r.omega_max > lo {
        Some(locate_peak(|w| bath.spectral_density(w), lo * w_lc, r.omega_max * w_lc, 2001) / w_lc)
    } else {
        None
    };
    Ok((
        table,
        BathSummary {
            peak_omega,
            balanced_bridge: bath.balanced_bridge(),
        },
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct FitSummary {
    pub model: String,
    pub status: String,
    pub tau_us: f64,
    /// Fitted Rabi frequency in units of ω_LC.
    pub omega: Option<f64>,
    pub params: Vec<f64>,
    pub rms_residual: f64,
    pub relative_rms: f64,
    pub iterations: usize,
    pub window_start: usize,
    pub omega_held: bool,
    /// Rabi-frequency seed (1/μs) from the damped two-level estimate.
    pub omega_hint_per_us: Option<f64>,
}

pub fn status_label(s: FitStatus) -> &'static str {
    match s {
        FitStatus::Converged => "ok",
        FitStatus::Unconverged => "unconverged",
        FitStatus::ModelMismatch => "mismatch",
    }
}

fn fit_summary(fit: &FitResult, omega_lc: f64, hint: Option<f64>) -> FitSummary {
    FitSummary {
        model: fit.model.name().to_string(),
        status: status_label(fit.status).to_string(),
        tau_us: fit.tau(),
        omega: fit.omega().map(|w| w / (omega_lc * MICRO)),
        params: fit.params.clone(),
        rms_residual: fit.rms_residual,
        relative_rms: fit.relative_rms(),
        iterations: fit.iterations,
        window_start: fit.window_start,
        omega_held: fit.omega_held,
        omega_hint_per_us: hint,
    }
}

/// Recorded trajectory as a table: time (μs), populations, and the fitted
/// channels.
pub fn series_table(ts: &TimeSeries) -> Table {
    let n = ts.n;
    let mut headers = vec!["t_us".to_string()];
    headers.extend((1..=n).map(|k| format!("rho_{k}{k}")));
    headers.extend(["inversion", "coherence_sq", "leakage"].map(String::from));
    let mut table = Table::new(headers);
    let t = ts.times_us();
    let inv = ts.inversion();
    let coh = ts.coherence_sq();
    let leak = ts.leakage();
    for (i, s) in ts.states.iter().enumerate() {
        let mut row: Vec<Cell> = vec![t[i].into()];
        row.extend((0..n).map(|m| Cell::Num(s[m * n + m].re)));
        row.extend([inv[i].into(), coh[i].into(), leak[i].into()]);
        table.push(row);
    }
    table
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct StepPlan {
    /// Time step in units of 1/ω_LC.
    pub dt: f64,
    pub steps: usize,
    pub record_every: usize,
    pub t_final_us: f64,
}

impl StepPlan {
    fn halved(&self) -> StepPlan {
        StepPlan {
            dt: 0.5 * self.dt,
            steps: 2 * self.steps,
            record_every: 2 * self.record_every,
            t_final_us: self.t_final_us,
        }
    }
}

fn simulate(
    eig: &EigenSystem,
    bath: &BathModel,
    n: usize,
    pulse: Option<DrivePulse>,
    rho0: &DensityMatrix,
    plan: &StepPlan,
    relaxation: RelaxationMethod,
) -> Result<TimeSeries> {
    let rates = damping_rate_matrix(eig, bath, n)?;
    rates.check_invariants()?;
    let liou = build_liouvillian(eig, pulse, &rates)?;
    let opts = PropagationOptions {
        relaxation,
        ..Default::default()
    };
    propagate(
        rho0,
        &liou,
        plan.steps as f64 * plan.dt,
        plan.dt,
        plan.record_every,
        &opts,
    )
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Drift {
    /// |τ1(Δt/2) − τ1(Δt)| / τ1(Δt)
    pub tau1: f64,
    /// |τ2(Δt/2) − τ2(Δt)| / τ2(Δt)
    pub tau2: f64,
}

fn drift(a: (f64, f64), b: (f64, f64)) -> Drift {
    Drift {
        tau1: ((b.0 - a.0) / a.0).abs(),
        tau2: ((b.1 - a.1) / a.1).abs(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyticFree {
    pub t1_us: f64,
    pub t2_us: f64,
    pub t_phi_us: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FreeDecaySummary {
    pub n_levels: usize,
    pub plan: StepPlan,
    pub t1_us: f64,
    pub t2_us: f64,
    /// From the fitted T1 and T2: 1/T_φ = 1/T2 − 1/(2T1).
    pub t_phi_us: f64,
    pub inversion_fit: FitSummary,
    pub coherence_fit: FitSummary,
    pub analytic: AnalyticFree,
    pub population_excursion: f64,
    pub dt_refine: Option<Drift>,
}

impl FreeDecaySummary {
    pub fn fits_ok(&self) -> bool {
        self.inversion_fit.status == "ok" && self.coherence_fit.status == "ok"
    }
}

fn free_plan(cfg: &RunConfig, prep: &Prepared) -> StepPlan {
    let w_lc = prep.eig.params.omega_lc();
    let dt = 2.0 * PI / (prep.eig.omega(1, 0) * cfg.run.steps_per_period as f64);
    let t_final_us = cfg
        .run
        .t_final_us
        .unwrap_or_else(|| cfg.run.decay_multiple * us(prep.times.t1.max(prep.times.t2)));
    let steps = (us_to_reduced(t_final_us, w_lc) / dt).round().max(1.0) as usize;
    let record_every = cfg.run.record_every.unwrap_or((steps / TARGET_ROWS).max(1));
    StepPlan {
        dt,
        steps,
        record_every,
        t_final_us,
    }
}

struct FreeOutcome {
    series: TimeSeries,
    inversion: FitResult,
    coherence: FitResult,
}

fn free_once(cfg: &RunConfig, prep: &Prepared, n: usize, plan: &StepPlan) -> Result<FreeOutcome> {
    let series = simulate(
        &prep.eig,
        &prep.bath,
        n,
        None,
        &DensityMatrix::superposition(n),
        plan,
        cfg.run.relaxation,
    )?;
    let t = series.times_us();
    let opts = FitOptions::default();
    let inversion = fit_free_inversion(&t, &series.inversion(), &opts)?;
    let coherence = fit_free_coherence(&t, &series.coherence_sq(), &opts)?;
    Ok(FreeOutcome {
        series,
        inversion,
        coherence,
    })
}

fn free_decay_with(
    cfg: &RunConfig,
    prep: &Prepared,
    n: usize,
    opts: &HarnessOptions,
) -> Result<(Table, FreeDecaySummary)> {
    let plan = free_plan(cfg, prep);
    log::info!("free decay: N = {n}, {} steps of {:.4} / ω_LC", plan.steps, plan.dt);
    let out = free_once(cfg, prep, n, &plan)?;
    let dt_refine = if opts.dt_refine {
        let fine = free_once(cfg, prep, n, &plan.halved())?;
        Some(drift(
            (out.inversion.tau(), out.coherence.tau()),
            (fine.inversion.tau(), fine.coherence.tau()),
        ))
    } else {
        None
    };
    let w_lc = prep.eig.params.omega_lc();
    let (t1, t2) = (out.inversion.tau(), out.coherence.tau());
    let summary = FreeDecaySummary {
        n_levels: n,
        plan,
        t1_us: t1,
        t2_us: t2,
        t_phi_us: 1.0 / (1.0 / t2 - 1.0 / (2.0 * t1)),
        inversion_fit: fit_summary(&out.inversion, w_lc, None),
        coherence_fit: fit_summary(&out.coherence, w_lc, None),
        analytic: AnalyticFree {
            t1_us: us(prep.times.t1),
            t2_us: us(prep.times.t2),
            t_phi_us: us(prep.times.t_phi),
        },
        population_excursion: out.series.population_excursion(),
        dt_refine,
    };
    Ok((series_table(&out.series), summary))
}

/// Free decay from the equal superposition of the two lowest levels.
pub fn run_free_decay(cfg: &RunConfig, opts: &HarnessOptions) -> Result<(Table, FreeDecaySummary)> {
    let prep = prepare(cfg, cfg.run.n_levels)?;
    free_decay_with(cfg, &prep, cfg.run.n_levels, opts)
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyticDriven {
    pub t1_driven_us: f64,
    pub t21_driven_us: f64,
    pub t22_driven_us: f64,
    /// Two-level Rabi frequency a·φ_μ·|x_12| in units of ω_LC.
    pub omega: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DrivenSummary {
    pub n_levels: usize,
    pub amplitude: f64,
    /// Drive frequency in units of ω_LC.
    pub frequency: f64,
    pub plan: StepPlan,
    /// Rabi frequency fitted to the inversion, units of ω_LC.
    pub omega: f64,
    pub t1_driven_us: f64,
    pub t22_driven_us: f64,
    pub inversion_fit: FitSummary,
    pub coherence_fit: FitSummary,
    pub analytic: AnalyticDriven,
    pub max_leakage: f64,
    pub population_excursion: f64,
    pub dt_refine: Option<Drift>,
}

impl DrivenSummary {
    pub fn fits_ok(&self) -> bool {
        self.inversion_fit.status == "ok" && self.coherence_fit.status == "ok"
    }
}

struct DrivenSetup {
    pulse: DrivePulse,
    plan: StepPlan,
    rabi_estimate: f64,
    hint_per_us: Option<f64>,
}

fn driven_setup(cfg: &RunConfig, prep: &Prepared, amplitude: f64) -> Result<DrivenSetup> {
    if amplitude == 0.0 {
        return Err(Error::config(
            "drive.amplitude",
            "zero drive amplitude; use the free-decay experiment for undriven relaxation",
        ));
    }
    let eig = &prep.eig;
    let w_lc = eig.params.omega_lc();
    let frequency = cfg.drive.frequency.reduced(eig.omega(1, 0), w_lc);
    let pulse = DrivePulse {
        amplitude,
        frequency,
        phase: cfg.drive.phase,
        window: None,
    };
    pulse.validate()?;
    let k = cfg.run.steps_per_period;
    let dt = pulse.period() / k as f64;
    let driven = driven_times(&prep.times);
    let t_final_us = cfg
        .run
        .t_final_us
        .unwrap_or_else(|| cfg.run.decay_multiple * us(driven.t1.max(driven.t21)));
    let periods = (us_to_reduced(t_final_us, w_lc) / pulse.period()).round().max(1.0) as usize;
    let rabi_estimate = eig.params.energy_scale() * amplitude * eig.x_mn[(0, 1)].abs();
    let rabi_in_periods = frequency / rabi_estimate;
    let stride_periods = ((periods / TARGET_ROWS) as f64)
        .min((rabi_in_periods / SAMPLES_PER_RABI_PERIOD).floor())
        .max(1.0) as usize;
    let record_every = cfg.run.record_every.unwrap_or(stride_periods * k);
    // damped two-level frequency; the bare one in the overdamped regime
    let rabi_per_us = rabi_estimate * w_lc * MICRO;
    let detune = 0.5 * (1.0 / prep.times.t2 - 1.0 / prep.times.t1) * MICRO;
    let damped = rabi_per_us * rabi_per_us - detune * detune;
    let hint_per_us = Some(if damped > 0.0 { damped.sqrt() } else { rabi_per_us });
    Ok(DrivenSetup {
        pulse,
        plan: StepPlan {
            dt,
            steps: periods * k,
            record_every,
            t_final_us,
        },
        rabi_estimate,
        hint_per_us,
    })
}

struct DrivenOutcome {
    series: TimeSeries,
    inversion: FitResult,
    coherence: FitResult,
}

fn driven_once(
    cfg: &RunConfig,
    prep: &Prepared,
    n: usize,
    setup: &DrivenSetup,
    plan: &StepPlan,
) -> Result<DrivenOutcome> {
    let series = simulate(
        &prep.eig,
        &prep.bath,
        n,
        Some(setup.pulse),
        &DensityMatrix::ground(n),
        plan,
        cfg.run.relaxation,
    )?;
    let t = series.times_us();
    let opts = FitOptions {
        omega_hint: setup.hint_per_us,
        ..Default::default()
    };
    let inversion = fit_rabi_inversion(&t, &series.inversion(), &opts)?;
    let coherence = fit_rabi_coherence(&t, &series.coherence_sq(), &opts)?;
    Ok(DrivenOutcome {
        series,
        inversion,
        coherence,
    })
}

fn driven_with(
    cfg: &RunConfig,
    prep: &Prepared,
    n: usize,
    amplitude: f64,
    opts: &HarnessOptions,
) -> Result<(Table, DrivenSummary)> {
    let setup = driven_setup(cfg, prep, amplitude)?;
    log::info!(
        "driven decay: N = {n}, φ_μ = {amplitude:e}, {} steps of {:.4} / ω_LC",
        setup.plan.steps,
        setup.plan.dt
    );
    let out = driven_once(cfg, prep, n, &setup, &setup.plan)?;
    let dt_refine = if opts.dt_refine {
        let fine = driven_once(cfg, prep, n, &setup, &setup.plan.halved())?;
        Some(drift(
            (out.inversion.tau(), out.coherence.tau()),
            (fine.inversion.tau(), fine.coherence.tau()),
        ))
    } else {
        None
    };
    let w_lc = prep.eig.params.omega_lc();
    let d = driven_times(&prep.times);
    let inversion_fit = fit_summary(&out.inversion, w_lc, setup.hint_per_us);
    let summary = DrivenSummary {
        n_levels: n,
        amplitude,
        frequency: setup.pulse.frequency,
        plan: setup.plan,
        omega: inversion_fit.omega.unwrap_or(f64::NAN),
        t1_driven_us: out.inversion.tau(),
        t22_driven_us: out.coherence.tau(),
        inversion_fit,
        coherence_fit: fit_summary(&out.coherence, w_lc, setup.hint_per_us),
        analytic: AnalyticDriven {
            t1_driven_us: us(d.t1),
            t21_driven_us: us(d.t21),
            t22_driven_us: us(d.t22),
            omega: setup.rabi_estimate,
        },
        max_leakage: out.series.leakage().into_iter().fold(0.0, f64::max),
        population_excursion: out.series.population_excursion(),
        dt_refine,
    };
    Ok((series_table(&out.series), summary))
}

/// Resonantly driven decay from the ground state.
pub fn run_driven(cfg: &RunConfig, opts: &HarnessOptions) -> Result<(Table, DrivenSummary)> {
    if cfg.drive.amplitude == 0.0 {
        return Err(Error::config(
            "drive.amplitude",
            "zero drive amplitude; use the free-decay experiment for undriven relaxation",
        ));
    }
    let prep = prepare(cfg, cfg.run.n_levels)?;
    driven_with(cfg, &prep, cfg.run.n_levels, cfg.drive.amplitude, opts)
}

/// One cell pair of the amplitude table.
#[derive(Debug, Clone, Serialize)]
pub struct TableCell {
    pub relaxation_us: f64,
    pub relaxation_status: String,
    pub decoherence_us: f64,
    pub decoherence_status: String,
    /// Fitted Rabi frequency (ω_LC units); absent for the undriven row.
    pub omega: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    /// φ_μ; zero for the undriven row.
    pub amplitude: f64,
    pub n4: TableCell,
    pub n2: TableCell,
}

const TABLE_LEVELS: [usize; 2] = [4, 2];

/// Relaxation and decoherence times versus drive amplitude for four and two
/// retained levels. The first row is undriven decay.
pub fn run_table2(cfg: &RunConfig, opts: &HarnessOptions) -> Result<(Table, Vec<TableRow>)> {
    let prep = prepare(cfg, 4)?;
    let mut amplitudes = vec![0.0];
    amplitudes.extend(&cfg.drive.table_amplitudes);
    let jobs: Vec<(f64, usize)> = amplitudes
        .iter()
        .flat_map(|&a| TABLE_LEVELS.iter().map(move |&n| (a, n)))
        .collect();
    let cells: Vec<TableCell> = jobs
        .par_iter()
        .map(|&(a, n)| -> Result<TableCell> {
            if a == 0.0 {
                let (_, s) = free_decay_with(cfg, &prep, n, opts)?;
                Ok(TableCell {
                    relaxation_us: s.t1_us,
                    relaxation_status: s.inversion_fit.status,
                    decoherence_us: s.t2_us,
                    decoherence_status: s.coherence_fit.status,
                    omega: None,
                })
            } else {
                let (_, s) = driven_with(cfg, &prep, n, a, opts)?;
                Ok(TableCell {
                    relaxation_us: s.t1_driven_us,
                    relaxation_status: s.inversion_fit.status,
                    decoherence_us: s.t22_driven_us,
                    decoherence_status: s.coherence_fit.status,
                    omega: Some(s.omega),
                })
            }
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut table = Table::new([
        "phi_mu",
        "N4_relaxation_us",
        "N4_decoherence_us",
        "N2_relaxation_us",
        "N2_decoherence_us",
        "N4_omega",
        "N2_omega",
        "N4_relaxation_status",
        "N4_decoherence_status",
        "N2_relaxation_status",
        "N2_decoherence_status",
    ]);
    let value = |v: f64, status: &str| -> Cell {
        if status == "ok" {
            v.into()
        } else {
            "-".into()
        }
    };
    for (k, &a) in amplitudes.iter().enumerate() {
        let (n4, n2) = (cells[2 * k].clone(), cells[2 * k + 1].clone());
        let omega = |c: &TableCell| -> Cell { c.omega.map_or("-".into(), Cell::Num) };
        table.push(vec![
            a.into(),
            value(n4.relaxation_us, &n4.relaxation_status),
            value(n4.decoherence_us, &n4.decoherence_status),
            value(n2.relaxation_us, &n2.relaxation_status),
            value(n2.decoherence_us, &n2.decoherence_status),
            omega(&n4),
            omega(&n2),
            n4.relaxation_status.as_str().into(),
            n4.decoherence_status.as_str().into(),
            n2.relaxation_status.as_str().into(),
            n2.decoherence_status.as_str().into(),
        ]);
        rows.push(TableRow { amplitude: a, n4, n2 });
    }
    Ok((table, rows))
}

/// Characteristic times (μs) across a circuit or temperature sweep.
pub fn run_sweep(cfg: &RunConfig, opts: &HarnessOptions) -> Result<Table> {
    let spec = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Error::config("sweep", "the sweep experiment needs a [sweep] section"))?;
    let wants_driven = spec
        .quantities
        .iter()
        .any(|q| matches!(q, Quantity::T1Driven | Quantity::T22Driven));
    if spec.method == SweepMethod::Simulate && wants_driven && cfg.drive.amplitude == 0.0 {
        return Err(Error::config(
            "drive.amplitude",
            "simulated sweeps of driven times need a non-zero drive amplitude",
        ));
    }
    let n = cfg.run.n_levels;
    let base = prepare(cfg, n)?;
    let mut headers = vec![format!("{}_{}", spec.parameter.name(), spec.parameter.unit())];
    headers.extend(spec.quantities.iter().map(|q| format!("{}_us", q.name())));
    let rows: Vec<Vec<f64>> = spec
        .values
        .par_iter()
        .map(|&v| -> Result<Vec<f64>> {
            let bath = spec.parameter.apply(&base.bath, v);
            bath.validate().map_err(|e| match e {
                Error::Config { message, .. } => {
                    Error::config("sweep.values", format!("{} = {v:e}: {message}", spec.parameter))
                }
                other => other,
            })?;
            let times = free_decay_times(&base.eig, &bath)?;
            let prep = Prepared {
                eig: base.eig.clone(),
                bath,
                times,
            };
            let values: [f64; 5] = match spec.method {
                SweepMethod::Analytic => {
                    let d = driven_times(&times);
                    [us(times.t1), us(times.t2), us(times.t_phi), us(d.t1), us(d.t22)]
                }
                SweepMethod::Simulate => {
                    let (_, f) = free_decay_with(cfg, &prep, n, opts)?;
                    let (t1d, t22d) = if wants_driven {
                        let (_, d) = driven_with(cfg, &prep, n, cfg.drive.amplitude, opts)?;
                        (d.t1_driven_us, d.t22_driven_us)
                    } else {
                        (f64::NAN, f64::NAN)
                    };
                    [f.t1_us, f.t2_us, f.t_phi_us, t1d, t22d]
                }
            };
            Ok(spec
                .quantities
                .iter()
                .map(|q| match q {
                    Quantity::T1 => values[0],
                    Quantity::T2 => values[1],
                    Quantity::TPhi => values[2],
                    Quantity::T1Driven => values[3],
                    Quantity::T22Driven => values[4],
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(headers);
    for (v, row) in spec.values.iter().zip(rows) {
        let mut cells: Vec<Cell> = vec![(*v).into()];
        cells.extend(row.into_iter().map(Cell::Num));
        table.push(cells);
    }
    Ok(table)
}

/// Converts a time in 1/ω_LC to μs for the configured device.
pub fn reduced_time_us(cfg: &RunConfig, t: f64) -> f64 {
    reduced_to_us(t, cfg.squid.omega_lc())
}
