// Copyright 2026 fluxsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Open-system dynamics of a driven, multilevel 2D SQUID flux qubit.
//!
//! The pipeline runs in five stages, each in its own module:
//!
//! 1. [`qubit_model`] discretizes the two-mode SQUID Hamiltonian on a grid and
//!    extracts the lowest eigenstates and their flux matrix elements.
//! 2. [`bath`] evaluates the real admittances of the control and readout
//!    circuits and turns them into a finite-temperature spectral density.
//! 3. [`dissipator`] assembles the steady damping-rate matrix in the
//!    eigenbasis (plus spontaneous/stimulated rates and a Lamb-shift
//!    diagnostic).
//! 4. [`liouville`] propagates the vectorized density matrix with a
//!    split-operator scheme, optionally under a microwave drive.
//! 5. [`fitkit`] and [`analytic`] extract characteristic times from the
//!    simulated series and from closed-form two-level expressions.
//!
//! [`config`] and [`harness`] tie the stages into the experiments exposed by
//! the `fluxsim` command-line tool.
//!
//! Internally the code is dimensionless: energies in units of ħω_LC, time in
//! 1/ω_LC and flux in Φ0. SI values appear only in circuit parameters, the
//! spectral density, and reported times.

pub mod analytic;
pub mod bath;
pub mod config;
pub mod csv;
pub mod dissipator;
mod error;
pub mod fitkit;
pub mod harness;
pub mod linalg;
pub mod liouville;
pub mod quadrature;
pub mod qubit_model;
pub mod timeseries;
pub mod units;

pub use error::{Error, Result};
