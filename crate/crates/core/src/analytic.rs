// Copyright 2026 fluxsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form characteristic times of the lowest level pair treated as a
//! dissipative two-level system.
//!
//! Times are in seconds and rates in 1/s. Level indices 0 and 1 of the
//! eigensystem play the roles of the qubit states |1⟩ and |2⟩.

use std::f64::consts::PI;

use crate::bath::BathModel;
use crate::qubit_model::EigenSystem;
use crate::units::{BOLTZMANN, ELEMENTARY_CHARGE, HBAR};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicTimes {
    pub t1: f64,
    pub t2: f64,
    /// Infinite when the two states carry the same mean flux.
    pub t_phi: f64,
    /// Population relaxation rate 1/T1.
    pub kappa1: f64,
    /// Coherence decay rate 1/T2.
    pub kappa2: f64,
}

/// Characteristic times under a resonant drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrivenTimes {
    /// Γ = (κ1 + κ2)/2.
    pub gamma: f64,
    pub t1: f64,
    pub t21: f64,
    pub t22: f64,
}

impl CharacteristicTimes {
    pub fn from_rates(kappa1: f64, kappa2: f64) -> Self {
        let dephasing = kappa2 - 0.5 * kappa1;
        CharacteristicTimes {
            t1: 1.0 / kappa1,
            t2: 1.0 / kappa2,
            t_phi: if dephasing == 0.0 {
                f64::INFINITY
            } else {
                1.0 / dephasing
            },
            kappa1,
            kappa2,
        }
    }
}

fn coth(u: f64) -> f64 {
    if u.is_infinite() {
        1.0
    } else {
        1.0 / u.tanh()
    }
}

/// T1, T2 and T_φ from the two-level reduction of the lowest pair.
pub fn free_decay_times(eig: &EigenSystem, bath: &BathModel) -> Result<CharacteristicTimes> {
    if eig.n_levels() < 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: eig.n_levels(),
        });
    }
    let w21 = eig.omega(1, 0) * eig.params.omega_lc();
    let x12 = eig.x_mn[(0, 1)];
    let dx = eig.x_mn[(0, 0)] - eig.x_mn[(1, 1)];
    let pref = PI * PI / (ELEMENTARY_CHARGE * ELEMENTARY_CHARGE);
    let kt = BOLTZMANN * bath.temperature;
    let u = HBAR * w21 / (2.0 * kt);
    let kappa1 = 2.0 * pref * HBAR * w21 * x12 * x12 * bath.admittance(w21) * coth(u);
    let kappa2 = 0.5 * kappa1 + pref * kt * dx * dx * bath.admittance(0.0);
    Ok(CharacteristicTimes::from_rates(kappa1, kappa2))
}

/// Relaxation and decoherence times of the resonantly driven pair.
pub fn driven_times(free: &CharacteristicTimes) -> DrivenTimes {
    let gamma = 0.5 * (free.kappa1 + free.kappa2);
    DrivenTimes {
        gamma,
        t1: 1.0 / gamma,
        t21: free.t2,
        t22: 1.0 / gamma,
    }
}

/// Axis of a circuit sweep with a closed-form asymptotic law for 1/T1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Control mutual inductance M_x: 1/T1 ≈ a(1 + b M_x²).
    ControlMutual,
    /// Readout bridge asymmetry ΔL: 1/T1 ≈ a + b ΔL².
    BridgeAsymmetry,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticModel {
    pub axis: SweepAxis,
    pub a: f64,
    pub b: f64,
}

impl AsymptoticModel {
    /// Predicted 1/T1 (1/s) at sweep coordinate `v` (henry).
    pub fn rate(&self, v: f64) -> f64 {
        match self.axis {
            SweepAxis::ControlMutual => self.a * (1.0 + self.b * v * v),
            SweepAxis::BridgeAsymmetry => self.a + self.b * v * v,
        }
    }
}

/// Fits the asymptotic law of `axis` to sweep points (v, T1), minimizing
/// relative residuals of 1/T1.
pub fn asymptotic_sweep_model(axis: SweepAxis, values: &[f64], t1: &[f64]) -> Result<AsymptoticModel> {
    if values.len() != t1.len() {
        return Err(Error::Dimension {
            expected: values.len(),
            found: t1.len(),
        });
    }
    if values.len() < 3 {
        return Err(Error::Fit(format!(
            "asymptotic fit needs at least 3 sweep points, got {}",
            values.len()
        )));
    }
    // weighted normal equations for rate = p + q v²
    let (mut s00, mut s01, mut s11, mut r0, mut r1) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&v, &t) in values.iter().zip(t1) {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Fit(format!("non-positive or non-finite T1 {t:e} in sweep")));
        }
        let y = 1.0 / t;
        let w = 1.0 / (y * y);
        let v2 = v * v;
        s00 += w;
        s01 += w * v2;
        s11 += w * v2 * v2;
        r0 += w * y;
        r1 += w * v2 * y;
    }
    let det = s00 * s11 - s01 * s01;
    if det.abs() <= 1e-14 * s00 * s11 {
        return Err(Error::Fit(
            "sweep values do not separate the constant and quadratic terms".into(),
        ));
    }
    let p = (r0 * s11 - r1 * s01) / det;
    let q = (s00 * r1 - s01 * r0) / det;
    Ok(match axis {
        SweepAxis::ControlMutual => AsymptoticModel { axis, a: p, b: q / p },
        SweepAxis::BridgeAsymmetry => AsymptoticModel { axis, a: p, b: q },
    })
}

/// Least-squares slope of log y against log x.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::Fit("log-log slope needs two or more paired points".into()));
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0)) {
        return Err(Error::Fit("log-log slope needs positive data".into()));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dephasing_identity_is_exact() {
        let t = CharacteristicTimes::from_rates(3.0e5, 4.5e5);
        let rhs = 1.0 / t.t2 - 1.0 / (2.0 * t.t1);
        assert!((1.0 / t.t_phi - rhs).abs() <= 4.0 * f64::EPSILON * rhs);
        assert!(t.t2 < 2.0 * t.t1);
    }

    #[test]
    fn driven_decompositions_agree() {
        let free = CharacteristicTimes::from_rates(2.9e5, 4.4e5);
        let d = driven_times(&free);
        assert_eq!(d.t1, d.t22);
        let a = 1.0 / (2.0 * free.t1) + 1.0 / (2.0 * free.t2);
        let b = 3.0 / (4.0 * free.t1) + 1.0 / (2.0 * free.t_phi);
        assert!((1.0 / d.t22 - a).abs() <= 1e-15 * a);
        assert!((a - b).abs() <= 1e-15 * a);
    }

    #[test]
    fn equal_rates_collapse_driven_times() {
        let free = CharacteristicTimes::from_rates(1e5, 1e5);
        let d = driven_times(&free);
        assert_eq!(d.t1, free.t1);
        assert_eq!(d.t1, free.t2);
    }

    #[test]
    fn asymptotic_models_recover_exact_laws() {
        let m: Vec<f64> = (0..12).map(|k| 1e-13 * 2f64.powi(k)).collect();
        let t1: Vec<f64> = m.iter().map(|v| 1.0 / (3e5 * (1.0 + 4e23 * v * v))).collect();
        let fit = asymptotic_sweep_model(SweepAxis::ControlMutual, &m, &t1).unwrap();
        assert!((fit.a / 3e5 - 1.0).abs() < 1e-10);
        assert!((fit.b / 4e23 - 1.0).abs() < 1e-10);

        let dl: Vec<f64> = (-5..=5).map(|k| k as f64 * 1e-10).collect();
        let t1: Vec<f64> = dl.iter().map(|v| 1.0 / (2e5 + 7e23 * v * v)).collect();
        let fit = asymptotic_sweep_model(SweepAxis::BridgeAsymmetry, &dl, &t1).unwrap();
        assert!((fit.a / 2e5 - 1.0).abs() < 1e-10);
        assert!((fit.b / 7e23 - 1.0).abs() < 1e-10);
        assert!(matches!(
            asymptotic_sweep_model(SweepAxis::BridgeAsymmetry, &dl[..2], &t1[..2]),
            Err(Error::Fit(_))
        ));
    }

    #[test]
    fn loglog_slope_of_power_law() {
        let x: Vec<f64> = (1..10).map(|k| k as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 5.0 * v.powf(-1.5)).collect();
        assert!((loglog_slope(&x, &y).unwrap() + 1.5).abs() < 1e-12);
    }
}
