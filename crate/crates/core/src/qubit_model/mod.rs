// Copyright 2026 fluxsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Two-mode SQUID Hamiltonian, its grid discretization and low-lying spectrum.
//!
//! Coordinates are the reduced fluxes x = Φ/Φ0 (rf loop) and y = Φ_dc/Φ0
//! (dc loop). Energies are in units of ħω_LC with ω_LC = 1/√(LC).

mod eigen;
mod hamiltonian;
mod lanczos;

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::units::{FEMTO, FLUX_QUANTUM, HBAR, PICO};
use crate::{Error, Result};

pub use eigen::{solve_eigensystem, EigenSolver, EigenSystem, SolverOptions};
pub use hamiltonian::{build_hamiltonian, GridHamiltonian, KineticScheme};
pub use lanczos::{lowest_eigenpairs, LanczosOptions, LanczosOutcome};

/// Device constants of the 2D SQUID qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquidParams {
    /// rf-loop inductance (H).
    pub l: f64,
    /// Junction capacitance (F).
    pub c: f64,
    /// Ratio of rf-loop to dc-loop inductance.
    pub g: f64,
    pub beta_l: f64,
    pub delta_beta_l: f64,
    /// Applied rf flux (Φ0).
    pub x_e: f64,
    /// Applied dc flux (Φ0).
    pub y_e: f64,
}

impl SquidParams {
    /// The device used throughout the reference experiments.
    pub fn reference_device() -> Self {
        SquidParams {
            l: 205.0 * PICO,
            c: 32.5 * FEMTO,
            g: 17.0,
            beta_l: 3.7,
            delta_beta_l: 0.0,
            x_e: 0.4991,
            y_e: 0.387,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [("squid.L", self.l), ("squid.C", self.c), ("squid.g", self.g)];
        for (path, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(path, format!("must be positive, got {v}")));
            }
        }
        for (path, v) in [
            ("squid.beta_L", self.beta_l),
            ("squid.delta_beta_L", self.delta_beta_l),
            ("squid.x_e", self.x_e),
            ("squid.y_e", self.y_e),
        ] {
            if !v.is_finite() {
                return Err(Error::config(path, "must be finite"));
            }
        }
        Ok(())
    }

    /// Characteristic frequency ω_LC = 1/√(LC) (rad/s).
    pub fn omega_lc(&self) -> f64 {
        1.0 / (self.l * self.c).sqrt()
    }

    /// Inductive energy Φ0²/L expressed in units of ħω_LC.
    pub fn energy_scale(&self) -> f64 {
        FLUX_QUANTUM * FLUX_QUANTUM / (self.l * HBAR * self.omega_lc())
    }

    /// Mass of the x mode, 2CΦ0² (SI).
    pub fn mass_x(&self) -> f64 {
        2.0 * self.c * FLUX_QUANTUM * FLUX_QUANTUM
    }

    /// Mass of the y mode, CΦ0²/2 (SI).
    pub fn mass_y(&self) -> f64 {
        0.5 * self.c * FLUX_QUANTUM * FLUX_QUANTUM
    }

    /// Coefficient of -∂²/∂x² in units of ħω_LC, i.e. ħ/(2 m_x ω_LC).
    pub fn kinetic_x(&self) -> f64 {
        HBAR / (2.0 * self.mass_x() * self.omega_lc())
    }

    pub fn kinetic_y(&self) -> f64 {
        HBAR / (2.0 * self.mass_y() * self.omega_lc())
    }

    /// Small-oscillation frequencies (ω_x, ω_y) of the quadratic part of the
    /// potential, in units of ω_LC.
    pub fn harmonic_frequencies(&self) -> (f64, f64) {
        (1.0 / 2f64.sqrt(), (2.0 * self.g).sqrt())
    }

    /// Oscillator lengths (Φ0 units) of the quadratic part of the potential.
    pub fn oscillator_lengths(&self) -> (f64, f64) {
        let a = self.energy_scale();
        let (wx, wy) = self.harmonic_frequencies();
        // ħ/(mω) in reduced units: mass_x ↔ a/(2 kinetic_x) etc.
        let mx = 1.0 / (2.0 * self.kinetic_x());
        let my = 1.0 / (2.0 * self.kinetic_y());
        debug_assert!(a > 0.0);
        ((1.0 / (mx * wx)).sqrt(), (1.0 / (my * wy)).sqrt())
    }
}

/// Potential energy V(x, y) in units of ħω_LC.
pub fn potential(params: &SquidParams, x: f64, y: f64) -> f64 {
    let dx = x - params.x_e;
    let dy = y - params.y_e;
    let four_pi2 = 4.0 * PI * PI;
    params.energy_scale()
        * (0.5 * dx * dx + 0.5 * params.g * dy * dy - params.beta_l / four_pi2 * (2.0 * PI * x).cos() * (PI * y).cos()
            + params.delta_beta_l / four_pi2 * (2.0 * PI * x).sin() * (PI * y).sin())
}

/// Uniform tensor-product grid. Samples run from `center - halfwidth` to
/// `center + halfwidth` inclusive; the hard walls sit one spacing outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_center: f64,
    pub x_halfwidth: f64,
    pub n_x: usize,
    pub y_center: f64,
    pub y_halfwidth: f64,
    pub n_y: usize,
}

impl GridSpec {
    pub const MIN_POINTS: usize = 16;

    /// 128 × 64 box of half-widths (0.6, 0.4) centred on the applied fluxes.
    pub fn default_for(params: &SquidParams) -> Self {
        GridSpec {
            x_center: params.x_e,
            x_halfwidth: 0.6,
            n_x: 128,
            y_center: params.y_e,
            y_halfwidth: 0.40,
            n_y: 64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_x < Self::MIN_POINTS {
            return Err(Error::config(
                "grid.n_x",
                format!("must be at least {}", Self::MIN_POINTS),
            ));
        }
        if self.n_y < Self::MIN_POINTS {
            return Err(Error::config(
                "grid.n_y",
                format!("must be at least {}", Self::MIN_POINTS),
            ));
        }
        if !(self.x_halfwidth > 0.0 && self.x_halfwidth.is_finite()) {
            return Err(Error::config("grid.x_halfwidth", "must be positive"));
        }
        if !(self.y_halfwidth > 0.0 && self.y_halfwidth.is_finite()) {
            return Err(Error::config("grid.y_halfwidth", "must be positive"));
        }
        if !self.x_center.is_finite() || !self.y_center.is_finite() {
            return Err(Error::config("grid", "centers must be finite"));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.x_halfwidth / (self.n_x - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        2.0 * self.y_halfwidth / (self.n_y - 1) as f64
    }

    pub fn x_points(&self) -> Vec<f64> {
        let (x0, h) = (self.x_center - self.x_halfwidth, self.dx());
        (0..self.n_x).map(|i| x0 + h * i as f64).collect()
    }

    pub fn y_points(&self) -> Vec<f64> {
        let (y0, h) = (self.y_center - self.y_halfwidth, self.dy());
        (0..self.n_y).map(|j| y0 + h * j as f64).collect()
    }

    pub fn len(&self) -> usize {
        self.n_x * self.n_y
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Quadrature weight of a single grid cell.
    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }

    /// Same box shape moved to a new centre.
    pub fn recentered(&self, x_center: f64, y_center: f64) -> Self {
        GridSpec {
            x_center,
            y_center,
            ..*self
        }
    }

    /// Same box with each axis refined by `factor` (sample counts scaled).
    pub fn refined(&self, factor: usize) -> Self {
        GridSpec {
            n_x: self.n_x * factor,
            n_y: self.n_y * factor,
            ..*self
        }
    }
}

/// Summary of one point of an x_e sweep.
#[derive(Debug, Clone)]
pub struct SpectrumRow {
    pub x_e: f64,
    pub energies: Vec<f64>,
    pub x_mn: nalgebra::DMatrix<f64>,
    pub y_mn: nalgebra::DMatrix<f64>,
}

/// Solves the spectrum at each applied rf flux, in input order. The grid
/// follows x_e (its x centre is moved to each value).
pub fn sweep_spectrum(
    params: &SquidParams,
    grid: &GridSpec,
    x_e_values: &[f64],
    n_states: usize,
    options: &SolverOptions,
) -> Result<Vec<SpectrumRow>> {
    for (i, &x_e) in x_e_values.iter().enumerate() {
        if !(0.0..=1.0).contains(&x_e) {
            return Err(Error::config(
                format!("run.x_e_values[{i}]"),
                format!("must lie in [0, 1], got {x_e}"),
            ));
        }
    }
    x_e_values
        .par_iter()
        .map(|&x_e| {
            let p = SquidParams { x_e, ..*params };
            let g = grid.recentered(x_e, grid.y_center);
            let h = build_hamiltonian(&p, &g, options.kinetic)?;
            let eig = solve_eigensystem(&h, n_states, options)?;
            Ok(SpectrumRow {
                x_e,
                energies: eig.energies.clone(),
                x_mn: eig.x_mn.clone(),
                y_mn: eig.y_mn.clone(),
            })
        })
        .collect()
}
