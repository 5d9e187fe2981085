// Copyright 2026 fluxsim contributors
// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

pub mod dd;

use std::sync::OnceLock;

use fluxsim_core::bath::BathModel;
use fluxsim_core::qubit_model::{
    build_hamiltonian, solve_eigensystem, EigenSystem, GridSpec, SolverOptions, SquidParams,
};

/// Lowest four levels of the reference device on the default grid, solved
/// once per test binary.
pub fn reference_eigen() -> &'static EigenSystem {
    static EIG: OnceLock<EigenSystem> = OnceLock::new();
    EIG.get_or_init(|| {
        let p = SquidParams::reference_device();
        let opts = SolverOptions::default();
        let h = build_hamiltonian(&p, &GridSpec::default_for(&p), opts.kinetic).unwrap();
        solve_eigensystem(&h, 4, &opts).unwrap()
    })
}

pub fn reference_bath() -> BathModel {
    BathModel::reference_device(SquidParams::reference_device().l)
}

/// Adaptive Simpson with Richardson correction, used as an independent
/// quadrature for cross-checks.
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= (15.0 * tol).max(64.0 * f64::EPSILON * (left.abs() + right.abs())) {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 40)
}
