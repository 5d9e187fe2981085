// Copyright 2026 fluxsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Physical constants (exact SI values) and unit conversions.

use std::f64::consts::PI;

/// Planck constant (J s).
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant (J s).
pub const HBAR: f64 = PLANCK / (2.0 * PI);
/// Elementary charge (C).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Boltzmann constant (J/K).
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Magnetic flux quantum h/2e (Wb).
pub const FLUX_QUANTUM: f64 = PLANCK / (2.0 * ELEMENTARY_CHARGE);
/// Resistance quantum h/4e² (Ω).
pub const RESISTANCE_QUANTUM: f64 = PLANCK / (4.0 * ELEMENTARY_CHARGE * ELEMENTARY_CHARGE);

pub const PICO: f64 = 1e-12;
pub const FEMTO: f64 = 1e-15;
pub const MICRO: f64 = 1e-6;
pub const MILLI: f64 = 1e-3;

/// Seconds to microseconds.
#[inline]
pub fn to_us(seconds: f64) -> f64 {
    seconds / MICRO
}

/// Dimensionless time (units of 1/ω_LC) to microseconds.
#[inline]
pub fn reduced_to_us(t: f64, omega_lc: f64) -> f64 {
    to_us(t / omega_lc)
}

/// Microseconds to dimensionless time.
#[inline]
pub fn us_to_reduced(t_us: f64, omega_lc: f64) -> f64 {
    t_us * MICRO * omega_lc
}
