// Copyright 2026 fluxsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Recorded density-matrix trajectories.

use num_complex::Complex64;

use crate::units::reduced_to_us;

/// Density-matrix snapshots at increasing times (units of 1/ω_LC). Each
/// snapshot stores all N² entries, row-major.
#[derive(Debug, Clone)]
pub struct TimeSeries {
    pub n: usize,
    pub omega_lc: f64,
    pub times: Vec<f64>,
    pub states: Vec<Vec<Complex64>>,
}

impl TimeSeries {
    pub fn new(n: usize, omega_lc: f64) -> Self {
        TimeSeries {
            n,
            omega_lc,
            times: Vec::new(),
            states: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn push(&mut self, t: f64, rho: &[Complex64]) {
        debug_assert_eq!(rho.len(), self.n * self.n);
        self.times.push(t);
        self.states.push(rho.to_vec());
    }

    pub fn times_us(&self) -> Vec<f64> {
        self.times.iter().map(|&t| reduced_to_us(t, self.omega_lc)).collect()
    }

    pub fn element(&self, m: usize, n: usize) -> Vec<Complex64> {
        self.states.iter().map(|s| s[m * self.n + n]).collect()
    }

    pub fn population(&self, m: usize) -> Vec<f64> {
        self.states.iter().map(|s| s[m * self.n + m].re).collect()
    }

    /// Largest distance of any recorded population outside [0, 1].
    pub fn population_excursion(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for s in &self.states {
            for m in 0..self.n {
                let p = s[m * self.n + m].re;
                worst = worst.max(-p).max(p - 1.0);
            }
        }
        worst
    }

    /// ρ_11 − ρ_22 of the lowest pair (ground minus first excited).
    pub fn inversion(&self) -> Vec<f64> {
        self.states.iter().map(|s| s[0].re - s[self.n + 1].re).collect()
    }

    /// |ρ_12|².
    pub fn coherence_sq(&self) -> Vec<f64> {
        self.states.iter().map(|s| s[1].norm_sqr()).collect()
    }

    /// Total population outside the two lowest levels.
    pub fn leakage(&self) -> Vec<f64> {
        self.states
            .iter()
            .map(|s| (2..self.n).map(|k| s[k * self.n + k].re).sum())
            .collect()
    }

    pub fn trace(&self) -> Vec<f64> {
        self.states
            .iter()
            .map(|s| (0..self.n).map(|k| s[k * self.n + k].re).sum())
            .collect()
    }
}
