// Copyright 2026 fluxsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Least-squares extraction of decay times and Rabi frequencies from
//! simulated signals.
//!
//! Each fit is seeded deterministically (linear least squares over a grid of
//! the nonlinear parameters, FFT for the Rabi frequency) and then refined by
//! Levenberg–Marquardt with analytic Jacobians. Times and frequencies are in
//! whatever units the caller's time axis uses.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    /// y1 + z1·e^{−t/τ1}
    FreeInversion,
    /// y2 + z2·e^{−2t/τ2}
    FreeCoherence,
    /// y1 + z1·sin(Ωt + φ1)·e^{−t/τ1}
    RabiInversion,
    /// y2 + z2·sin(Ωt + φ2)·e^{−t/τ2} + z3·sin²(Ωt + φ2)·e^{−2t/τ2}
    RabiCoherence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Linear,
    Time,
    Rate,
    Phase,
}

impl FitModel {
    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            FitModel::FreeInversion => &["y1", "z1", "tau1"],
            FitModel::FreeCoherence => &["y2", "z2", "tau2"],
            FitModel::RabiInversion => &["y1", "z1", "tau1", "omega", "phi1"],
            FitModel::RabiCoherence => &["y2", "z2", "z3", "tau2", "omega", "phi2"],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FitModel::FreeInversion => "free-exp-inversion",
            FitModel::FreeCoherence => "free-exp-coherence",
            FitModel::RabiInversion => "rabi-inversion",
            FitModel::RabiCoherence => "rabi-coherence",
        }
    }

    fn roles(&self) -> &'static [Role] {
        use Role::*;
        match self {
            FitModel::FreeInversion | FitModel::FreeCoherence => &[Linear, Linear, Time],
            FitModel::RabiInversion => &[Linear, Linear, Time, Rate, Phase],
            FitModel::RabiCoherence => &[Linear, Linear, Linear, Time, Rate, Phase],
        }
    }

    pub fn n_params(&self) -> usize {
        self.param_names().len()
    }

    pub fn eval(&self, p: &[f64], t: f64) -> f64 {
        let mut g = [0.0; 6];
        self.eval_grad(p, t, &mut g)
    }

    /// Model value at `t`; `grad` receives the partial derivatives.
    fn eval_grad(&self, p: &[f64], t: f64, grad: &mut [f64]) -> f64 {
        match self {
            FitModel::FreeInversion | FitModel::FreeCoherence => {
                let k = if *self == FitModel::FreeInversion { 1.0 } else { 2.0 };
                let (y, z, tau) = (p[0], p[1], p[2]);
                let e = (-k * t / tau).exp();
                grad[0] = 1.0;
                grad[1] = e;
                grad[2] = z * e * k * t / (tau * tau);
                y + z * e
            }
            FitModel::RabiInversion => {
                let (y, z, tau, w, phi) = (p[0], p[1], p[2], p[3], p[4]);
                let (s, c) = (w * t + phi).sin_cos();
                let e = (-t / tau).exp();
                grad[0] = 1.0;
                grad[1] = s * e;
                grad[2] = z * s * e * t / (tau * tau);
                grad[3] = z * c * e * t;
                grad[4] = z * c * e;
                y + z * s * e
            }
            FitModel::RabiCoherence => {
                let (y, z2, z3, tau, w, phi) = (p[0], p[1], p[2], p[3], p[4], p[5]);
                let (s, c) = (w * t + phi).sin_cos();
                let e = (-t / tau).exp();
                let e2 = e * e;
                let dphase = z2 * c * e + 2.0 * z3 * s * c * e2;
                grad[0] = 1.0;
                grad[1] = s * e;
                grad[2] = s * s * e2;
                grad[3] = (z2 * s * e + 2.0 * z3 * s * s * e2) * t / (tau * tau);
                grad[4] = dphase * t;
                grad[5] = dphase;
                y + z2 * s * e + z3 * s * s * e2
            }
        }
    }

    fn tau_index(&self) -> usize {
        match self {
            FitModel::RabiCoherence => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    pub max_iterations: usize,
    /// Convergence when every parameter moves by less than this (relative).
    pub step_tol: f64,
    /// Convergence when the gradient, measured as the largest cosine between
    /// the residual and a Jacobian column, falls below this.
    pub gradient_tol: f64,
    /// A converged fit whose rms residual exceeds this fraction of the signal
    /// range is reported as a model mismatch.
    pub mismatch_ratio: f64,
    /// Known Rabi frequency estimate; replaces the FFT seed and waives the
    /// minimum period count (weak drives may not complete one period). When
    /// the record spans less than one period at this frequency, Ω is held
    /// at the hint.
    pub omega_hint: Option<f64>,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            max_iterations: 500,
            step_tol: 1e-10,
            gradient_tol: 1e-12,
            mismatch_ratio: 1e-3,
            omega_hint: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitStatus {
    Converged,
    Unconverged,
    /// Converged, but the model does not describe the signal.
    ModelMismatch,
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub model: FitModel,
    pub params: Vec<f64>,
    /// Root-mean-square residual over the fitted window.
    pub rms_residual: f64,
    /// max − min of the signal over the fitted window.
    pub signal_range: f64,
    pub status: FitStatus,
    pub iterations: usize,
    pub gradient_norm: f64,
    /// Index of the first sample used by the fit.
    pub window_start: usize,
    /// Ω was held at the supplied hint rather than fitted.
    pub omega_held: bool,
}

impl FitResult {
    pub fn converged(&self) -> bool {
        self.status != FitStatus::Unconverged
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        let idx = self.model.param_names().iter().position(|&n| n == name)?;
        Some(self.params[idx])
    }

    pub fn tau(&self) -> f64 {
        self.params[self.model.tau_index()]
    }

    pub fn omega(&self) -> Option<f64> {
        self.param("omega")
    }

    pub fn relative_rms(&self) -> f64 {
        self.rms_residual / self.signal_range
    }
}

const MIN_FREE_SAMPLES: usize = 50;
const MIN_RABI_PERIODS: f64 = 20.0;
const SEED_SAMPLES: usize = 1024;

fn check_series(t: &[f64], y: &[f64], min_len: usize) -> Result<()> {
    if t.len() != y.len() {
        return Err(Error::Dimension {
            expected: t.len(),
            found: y.len(),
        });
    }
    if t.len() < min_len {
        return Err(Error::Fit(format!("need at least {min_len} samples, got {}", t.len())));
    }
    if t.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Fit("sample times must be strictly increasing".into()));
    }
    if t.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Fit("series contains non-finite values".into()));
    }
    Ok(())
}

fn range(y: &[f64]) -> f64 {
    let (lo, hi) = y
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    hi - lo
}

/// Evenly strided subset used for the seeding scans.
fn decimate(t: &[f64], y: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let stride = t.len().div_ceil(SEED_SAMPLES).max(1);
    (
        t.iter().step_by(stride).copied().collect(),
        y.iter().step_by(stride).copied().collect(),
    )
}

/// Linear least squares of `y` on the given basis columns; returns the
/// coefficients and the residual sum of squares.
fn linear_fit(columns: &[Vec<f64>], y: &[f64]) -> Option<(Vec<f64>, f64)> {
    let k = columns.len();
    let mut a = DMatrix::<f64>::zeros(k, k);
    let mut b = DVector::<f64>::zeros(k);
    for i in 0..k {
        for j in i..k {
            let s: f64 = columns[i].iter().zip(&columns[j]).map(|(u, v)| u * v).sum();
            a[(i, j)] = s;
            a[(j, i)] = s;
        }
        b[i] = columns[i].iter().zip(y).map(|(u, v)| u * v).sum();
    }
    // Jacobi scaling keeps the normal equations well conditioned
    let d: Vec<f64> = (0..k)
        .map(|i| if a[(i, i)] > 0.0 { 1.0 / a[(i, i)].sqrt() } else { 1.0 })
        .collect();
    let scaled = DMatrix::from_fn(k, k, |i, j| a[(i, j)] * d[i] * d[j]);
    let rhs = DVector::from_fn(k, |i, _| b[i] * d[i]);
    let sol = scaled.lu().solve(&rhs)?;
    let coef: Vec<f64> = (0..k).map(|i| sol[i] * d[i]).collect();
    if coef.iter().any(|c| !c.is_finite()) {
        return None;
    }
    let rss = y
        .iter()
        .enumerate()
        .map(|(n, v)| {
            let f: f64 = (0..k).map(|i| coef[i] * columns[i][n]).sum();
            (v - f).powi(2)
        })
        .sum();
    Some((coef, rss))
}

/// Least squares of `y` on the basis {1, a, a²}; the residual sum of squares
/// comes from the normal equations (adequate for ranking seeds).
fn quadratic_basis_fit(a: impl Iterator<Item = f64>, y: &[f64], yy: f64) -> Option<([f64; 3], f64)> {
    let mut m = [0.0f64; 5];
    let mut b = [0.0f64; 3];
    for (a, &v) in a.zip(y) {
        let a2 = a * a;
        m[1] += a;
        m[2] += a2;
        m[3] += a2 * a;
        m[4] += a2 * a2;
        b[0] += v;
        b[1] += v * a;
        b[2] += v * a2;
    }
    m[0] = y.len() as f64;
    let normal = nalgebra::Matrix3::new(m[0], m[1], m[2], m[1], m[2], m[3], m[2], m[3], m[4]);
    let d = nalgebra::Vector3::new(
        1.0 / m[0].sqrt(),
        1.0 / m[2].sqrt().max(1e-300),
        1.0 / m[4].sqrt().max(1e-300),
    );
    let scaled = nalgebra::Matrix3::from_fn(|i, j| normal[(i, j)] * d[i] * d[j]);
    let rhs = nalgebra::Vector3::new(b[0] * d[0], b[1] * d[1], b[2] * d[2]);
    let sol = scaled.lu().solve(&rhs)?;
    let coef = [sol[0] * d[0], sol[1] * d[1], sol[2] * d[2]];
    if coef.iter().any(|c| !c.is_finite()) {
        return None;
    }
    let rss = yy - (coef[0] * b[0] + coef[1] * b[1] + coef[2] * b[2]);
    Some((coef, rss))
}

fn tau_grid(span: f64) -> impl Iterator<Item = f64> {
    (0..=120).map(move |k| span * 10f64.powf(-2.0 + 4.0 * k as f64 / 120.0))
}

/// Candidate seeds ordered by the residual of the linearized problem.
fn ranked(mut seeds: Vec<(f64, Vec<f64>)>, keep: usize) -> Vec<Vec<f64>> {
    seeds.sort_by(|a, b| a.0.total_cmp(&b.0));
    seeds.into_iter().take(keep).map(|s| s.1).collect()
}

fn seed_free(model: FitModel, t: &[f64], y: &[f64]) -> Vec<Vec<f64>> {
    let k = if model == FitModel::FreeInversion { 1.0 } else { 2.0 };
    let (ts, ys) = decimate(t, y);
    let t0 = ts[0];
    let span = ts[ts.len() - 1] - t0;
    let ones = vec![1.0; ts.len()];
    let mut seeds = Vec::new();
    for tau in tau_grid(span) {
        let e: Vec<f64> = ts.iter().map(|&x| (-k * (x - t0) / tau).exp()).collect();
        if let Some((c, rss)) = linear_fit(&[ones.clone(), e], &ys) {
            // shift the amplitude back to the absolute time origin
            seeds.push((rss, vec![c[0], c[1] * (k * t0 / tau).exp(), tau]));
        }
    }
    ranked(seeds, 3)
}

fn omega_candidates(center: f64) -> impl Iterator<Item = f64> {
    (-6..=6).map(move |k| center * (1.0 + 0.005 * k as f64))
}

fn seed_rabi_inversion(t: &[f64], y: &[f64], omega: f64, held: bool) -> Vec<Vec<f64>> {
    let (ts, ys) = decimate(t, y);
    let t0 = ts[0];
    let span = ts[ts.len() - 1] - t0;
    let ones = vec![1.0; ts.len()];
    let taus: Vec<f64> = tau_grid(span).collect();
    let decays: Vec<Vec<f64>> = taus
        .iter()
        .map(|&tau| ts.iter().map(|&x| (-(x - t0) / tau).exp()).collect())
        .collect();
    let frequencies: Vec<f64> = if held {
        vec![omega]
    } else {
        omega_candidates(omega).collect()
    };
    let seeds: Vec<(f64, Vec<f64>)> = frequencies
        .par_iter()
        .flat_map_iter(|&w| {
            let (sw, cw): (Vec<f64>, Vec<f64>) = ts.iter().map(|&x| (w * x).sin_cos()).unzip();
            let mut out = Vec::new();
            for (&tau, e) in taus.iter().zip(&decays) {
                let s: Vec<f64> = sw.iter().zip(e).map(|(a, b)| a * b).collect();
                let c: Vec<f64> = cw.iter().zip(e).map(|(a, b)| a * b).collect();
                if let Some((coef, rss)) = linear_fit(&[ones.clone(), s, c], &ys) {
                    let scale = (t0 / tau).exp();
                    let z = coef[1].hypot(coef[2]) * scale;
                    let phi = coef[2].atan2(coef[1]);
                    out.push((rss, vec![coef[0], z, tau, w, phi]));
                }
            }
            out
        })
        .collect();
    ranked(seeds, 3)
}

fn seed_rabi_coherence(t: &[f64], y: &[f64], omegas: &[f64], held: bool) -> Vec<Vec<f64>> {
    let (ts, ys) = decimate(t, y);
    let t0 = ts[0];
    let span = ts[ts.len() - 1] - t0;
    let taus: Vec<f64> = tau_grid(span).step_by(3).collect();
    let decays: Vec<Vec<f64>> = taus
        .iter()
        .map(|&tau| ts.iter().map(|&x| (-(x - t0) / tau).exp()).collect())
        .collect();
    let frequencies: Vec<f64> = if held {
        omegas.to_vec()
    } else {
        omegas.iter().flat_map(|&c| omega_candidates(c).step_by(2)).collect()
    };
    let yy: f64 = ys.iter().map(|v| v * v).sum();
    let seeds: Vec<(f64, Vec<f64>)> = frequencies
        .par_iter()
        .flat_map_iter(|&w| {
            let (sw, cw): (Vec<f64>, Vec<f64>) = ts.iter().map(|&x| (w * x).sin_cos()).unzip();
            let mut out = Vec::new();
            for j in 0..36 {
                let phi = 2.0 * PI * j as f64 / 36.0;
                let (sp, cp) = phi.sin_cos();
                let s: Vec<f64> = sw.iter().zip(&cw).map(|(a, b)| a * cp + b * sp).collect();
                for (&tau, e) in taus.iter().zip(&decays) {
                    if let Some((coef, rss)) = quadratic_basis_fit(s.iter().zip(e).map(|(s, e)| s * e), &ys, yy) {
                        let scale = (t0 / tau).exp();
                        out.push((
                            rss,
                            vec![coef[0], coef[1] * scale, coef[2] * scale * scale, tau, w, phi],
                        ));
                    }
                }
            }
            out
        })
        .collect();
    ranked(seeds, 3)
}

/// Dominant angular frequency of a uniformly sampled signal, from the peak
/// of its zero-padded, Hann-windowed spectrum.
pub fn fft_frequency(t: &[f64], y: &[f64]) -> Result<f64> {
    check_series(t, y, 16)?;
    let n = t.len();
    let h = (t[n - 1] - t[0]) / (n - 1) as f64;
    if t.windows(2).any(|w| ((w[1] - w[0]) / h - 1.0).abs() > 1e-6) {
        return Err(Error::Fit("spectral estimate needs uniformly spaced samples".into()));
    }
    let mean = y.iter().sum::<f64>() / n as f64;
    let pad = 8;
    let len = (n * pad).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = (0..len)
        .map(|k| {
            if k < n {
                let w = 0.5 - 0.5 * (2.0 * PI * k as f64 / (n - 1) as f64).cos();
                Complex::new((y[k] - mean) * w, 0.0)
            } else {
                Complex::new(0.0, 0.0)
            }
        })
        .collect();
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    let mag: Vec<f64> = buf[..len / 2].iter().map(|c| c.norm()).collect();
    // skip the DC lobe: at least two periods within the record
    let first = (2 * len).div_ceil(n).max(2);
    if first + 2 >= mag.len() {
        return Err(Error::Fit("record too short for a spectral estimate".into()));
    }
    let k = (first..mag.len() - 1)
        .max_by(|&a, &b| mag[a].total_cmp(&mag[b]))
        .unwrap();
    let mut sorted: Vec<f64> = mag[first..].to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    if !(mag[k] > 10.0 * median) {
        return Err(Error::Fit(
            "no dominant spectral peak for the Rabi frequency estimate".into(),
        ));
    }
    let (a, b, c) = (mag[k - 1].ln(), mag[k].ln(), mag[k + 1].ln());
    let shift = if a - 2.0 * b + c < 0.0 {
        0.5 * (a - c) / (a - 2.0 * b + c)
    } else {
        0.0
    };
    Ok(2.0 * PI * (k as f64 + shift) / (len as f64 * h))
}

fn residuals(model: FitModel, p: &[f64], t: &[f64], y: &[f64], jac: Option<&mut DMatrix<f64>>) -> Vec<f64> {
    let mut g = [0.0; 6];
    match jac {
        Some(j) => t
            .iter()
            .zip(y)
            .enumerate()
            .map(|(i, (&x, &v))| {
                let f = model.eval_grad(p, x, &mut g);
                for k in 0..model.n_params() {
                    j[(i, k)] = g[k];
                }
                f - v
            })
            .collect(),
        None => t.iter().zip(y).map(|(&x, &v)| model.eval(p, x) - v).collect(),
    }
}

fn admissible(model: FitModel, p: &[f64]) -> bool {
    p.iter().all(|v| v.is_finite()) && p[model.tau_index()] > 0.0
}

/// Levenberg–Marquardt refinement of `initial` against (t, y).
pub fn fit_model(model: FitModel, t: &[f64], y: &[f64], initial: &[f64], opts: &FitOptions) -> Result<FitResult> {
    refine(model, t, y, initial, opts, None)
}

fn refine(
    model: FitModel,
    t: &[f64],
    y: &[f64],
    initial: &[f64],
    opts: &FitOptions,
    held: Option<usize>,
) -> Result<FitResult> {
    check_series(t, y, model.n_params() + 1)?;
    let np = model.n_params();
    if initial.len() != np {
        return Err(Error::Dimension {
            expected: np,
            found: initial.len(),
        });
    }
    if !admissible(model, initial) {
        return Err(Error::Fit(format!("inadmissible initial parameters {initial:?}")));
    }
    let m = t.len();
    let sig_range = range(y);
    let y_norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    let step_scale: Vec<f64> = model
        .roles()
        .iter()
        .map(|r| match r {
            Role::Linear => sig_range.max(f64::MIN_POSITIVE),
            Role::Phase => 1.0,
            Role::Time | Role::Rate => 0.0,
        })
        .collect();

    let mut p = initial.to_vec();
    let mut jac = DMatrix::<f64>::zeros(m, np);
    let mut r = residuals(model, &p, t, y, Some(&mut jac));
    if let Some(k) = held {
        jac.column_mut(k).fill(0.0);
    }
    let mut cost: f64 = r.iter().map(|v| v * v).sum();
    let mut lambda = 1e-3;
    let mut status = FitStatus::Unconverged;
    let mut iterations = 0;
    let mut grad_measure = f64::INFINITY;

    while iterations < opts.max_iterations {
        iterations += 1;
        let a = jac.tr_mul(&jac);
        let rv = DVector::from_vec(r.clone());
        let g = jac.tr_mul(&rv);
        let r_norm = cost.sqrt();
        grad_measure = if r_norm <= 1e-14 * y_norm.max(f64::MIN_POSITIVE) {
            0.0
        } else {
            (0..np)
                .map(|k| {
                    let col = a[(k, k)].sqrt();
                    if col > 0.0 {
                        g[k].abs() / (col * r_norm)
                    } else {
                        0.0
                    }
                })
                .fold(0.0, f64::max)
        };
        if grad_measure < opts.gradient_tol {
            status = FitStatus::Converged;
            break;
        }
        let mut accepted = false;
        while lambda < 1e16 {
            let mut damped = a.clone();
            for k in 0..np {
                damped[(k, k)] += lambda * a[(k, k)].max(1e-300);
            }
            let delta = match damped.clone().cholesky() {
                Some(ch) => ch.solve(&(-&g)),
                None => {
                    lambda *= 4.0;
                    continue;
                }
            };
            let trial: Vec<f64> = p.iter().zip(delta.iter()).map(|(a, b)| a + b).collect();
            if !admissible(model, &trial) {
                lambda *= 4.0;
                continue;
            }
            let r_trial = residuals(model, &trial, t, y, None);
            let c_trial: f64 = r_trial.iter().map(|v| v * v).sum();
            if c_trial < cost {
                let small = delta
                    .iter()
                    .zip(&trial)
                    .zip(&step_scale)
                    .all(|((d, p), s)| d.abs() <= opts.step_tol * (p.abs() + s));
                p = trial;
                r = residuals(model, &p, t, y, Some(&mut jac));
                if let Some(k) = held {
                    jac.column_mut(k).fill(0.0);
                }
                cost = c_trial;
                lambda = (lambda / 3.0).max(1e-12);
                accepted = true;
                if small {
                    status = FitStatus::Converged;
                }
                break;
            }
            lambda *= 4.0;
        }
        if status == FitStatus::Converged {
            break;
        }
        if !accepted {
            // no descent direction left above rounding level
            if grad_measure < 1e-6 {
                status = FitStatus::Converged;
            }
            break;
        }
    }

    normalize(model, &mut p);
    let rms = (cost / m as f64).sqrt();
    if status == FitStatus::Converged && rms > opts.mismatch_ratio * sig_range {
        status = FitStatus::ModelMismatch;
    }
    Ok(FitResult {
        model,
        params: p,
        rms_residual: rms,
        signal_range: sig_range,
        status,
        iterations,
        gradient_norm: grad_measure,
        window_start: 0,
        omega_held: held.is_some(),
    })
}

/// Canonical sign conventions: Ω > 0, leading oscillation amplitude ≥ 0,
/// phase in [0, 2π).
fn normalize(model: FitModel, p: &mut [f64]) {
    let (w, phi, amp) = match model {
        FitModel::RabiInversion => (3, 4, 1),
        FitModel::RabiCoherence => (4, 5, 1),
        _ => return,
    };
    if p[w] < 0.0 {
        p[w] = -p[w];
        p[phi] = -p[phi] + PI;
    }
    if p[amp] < 0.0 {
        p[amp] = -p[amp];
        p[phi] += PI;
    }
    p[phi] = p[phi].rem_euclid(2.0 * PI);
}

fn better(a: FitResult, b: FitResult) -> FitResult {
    let rank = |r: &FitResult| if r.status == FitStatus::Unconverged { 1 } else { 0 };
    match rank(&a).cmp(&rank(&b)) {
        std::cmp::Ordering::Less => a,
        std::cmp::Ordering::Greater => b,
        std::cmp::Ordering::Equal => {
            if b.rms_residual < a.rms_residual {
                b
            } else {
                a
            }
        }
    }
}

fn fit_from_seeds(
    model: FitModel,
    t: &[f64],
    y: &[f64],
    seeds: Vec<Vec<f64>>,
    opts: &FitOptions,
    held: Option<usize>,
) -> Result<FitResult> {
    let mut best: Option<FitResult> = None;
    for seed in seeds {
        if !admissible(model, &seed) {
            continue;
        }
        let fit = refine(model, t, y, &seed, opts, held)?;
        let done = fit.status == FitStatus::Converged;
        best = Some(match best {
            None => fit,
            Some(b) => better(b, fit),
        });
        if done {
            break;
        }
    }
    best.ok_or_else(|| Error::Fit(format!("no admissible seed for the {} model", model.name())))
}

fn fit_free(model: FitModel, t: &[f64], y: &[f64], opts: &FitOptions) -> Result<FitResult> {
    check_series(t, y, MIN_FREE_SAMPLES)?;
    let seeds = seed_free(model, t, y);
    fit_from_seeds(model, t, y, seeds, opts, None)
}

/// Fits y1 + z1·e^{−t/τ1}; τ1 is the relaxation time T1.
pub fn fit_free_inversion(t: &[f64], y: &[f64], opts: &FitOptions) -> Result<FitResult> {
    fit_free(FitModel::FreeInversion, t, y, opts)
}

/// Fits y2 + z2·e^{−2t/τ2}; τ2 is the decoherence time T2.
pub fn fit_free_coherence(t: &[f64], y: &[f64], opts: &FitOptions) -> Result<FitResult> {
    fit_free(FitModel::FreeCoherence, t, y, opts)
}

/// Ω seed and the index of the first sample after the discarded transient.
/// Candidate Rabi frequencies, the index of the first retained sample, and
/// whether Ω is held at the hint.
fn rabi_window(t: &[f64], y: &[f64], opts: &FitOptions, candidates: usize) -> Result<(Vec<f64>, usize, bool)> {
    check_series(t, y, MIN_FREE_SAMPLES)?;
    let span = t[t.len() - 1] - t[0];
    let (omegas, skip) = match opts.omega_hint {
        Some(w) => {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::Fit(format!("Rabi frequency hint must be positive, got {w}")));
            }
            (vec![w], (PI / w).min(0.05 * span))
        }
        None => {
            let w = fft_frequency(t, y)?;
            let periods = span * w / (2.0 * PI);
            if periods < MIN_RABI_PERIODS * candidates as f64 {
                return Err(Error::Fit(format!(
                    "record spans {:.1} Rabi periods; at least {MIN_RABI_PERIODS} are needed",
                    periods / candidates as f64
                )));
            }
            let mut ws = vec![w];
            if candidates > 1 {
                ws.push(0.5 * w);
            }
            let skip = PI / ws[ws.len() - 1];
            (ws, skip)
        }
    };
    let start = t.partition_point(|&x| x < t[0] + skip);
    if t.len() - start < MIN_FREE_SAMPLES {
        return Err(Error::Fit("too few samples after the discarded transient".into()));
    }
    let held = opts.omega_hint.is_some_and(|w| w * span < 2.0 * PI);
    Ok((omegas, start, held))
}

/// Fits y1 + z1·sin(Ωt + φ1)·e^{−t/τ1} after discarding the first half Rabi
/// period; τ1 is the driven relaxation time.
pub fn fit_rabi_inversion(t: &[f64], y: &[f64], opts: &FitOptions) -> Result<FitResult> {
    let (omegas, start, held) = rabi_window(t, y, opts, 1)?;
    let (tw, yw) = (&t[start..], &y[start..]);
    let seeds = seed_rabi_inversion(tw, yw, omegas[0], held);
    let mut fit = fit_from_seeds(FitModel::RabiInversion, tw, yw, seeds, opts, held.then_some(3))?;
    fit.window_start = start;
    Ok(fit)
}

/// Fits the two-term damped Rabi model of |ρ12|² after discarding the first
/// half Rabi period; τ2 is the field-induced decoherence time.
pub fn fit_rabi_coherence(t: &[f64], y: &[f64], opts: &FitOptions) -> Result<FitResult> {
    // the sin² term oscillates at 2Ω, so the spectral peak may sit at either
    let (omegas, start, held) = rabi_window(t, y, opts, if opts.omega_hint.is_some() { 1 } else { 2 })?;
    let (tw, yw) = (&t[start..], &y[start..]);
    let seeds = seed_rabi_coherence(tw, yw, &omegas, held);
    let mut fit = fit_from_seeds(FitModel::RabiCoherence, tw, yw, seeds, opts, held.then_some(4))?;
    fit.window_start = start;
    Ok(fit)
}
