// Copyright 2026 fluxsim contributors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::{potential, GridSpec, SquidParams};
use crate::{Error, Result};

/// Discretization of the second derivative along each axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KineticScheme {
    /// Sinc discrete-variable representation (spectrally accurate).
    #[default]
    SincDvr,
    /// Three-point central differences with hard walls.
    FiniteDifference,
}

impl std::str::FromStr for KineticScheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "sinc" | "sinc-dvr" | "dvr" => Ok(KineticScheme::SincDvr),
            "fd" | "finite-difference" => Ok(KineticScheme::FiniteDifference),
            _ => Err(format!("unknown kinetic scheme '{s}' (expected sinc or fd)")),
        }
    }
}

/// Minimum number of samples per oscillator length of the quadratic well.
pub const MIN_POINTS_PER_LENGTH: f64 = 1.5;

/// Grid Hamiltonian H = T_x ⊗ 1 + 1 ⊗ T_y + diag(V), stored in factored form.
///
/// Wavefunctions are flattened x-major: index `i * n_y + j` for sample
/// (x_i, y_j).
#[derive(Debug, Clone)]
pub struct GridHamiltonian {
    pub params: SquidParams,
    pub grid: GridSpec,
    pub scheme: KineticScheme,
    tx: Vec<f64>,
    ty: Vec<f64>,
    potential: Vec<f64>,
}

fn kinetic_matrix(n: usize, h: f64, coef: f64, scheme: KineticScheme) -> Vec<f64> {
    let mut t = vec![0.0; n * n];
    let s = coef / (h * h);
    match scheme {
        KineticScheme::SincDvr => {
            for i in 0..n {
                t[i * n + i] = s * PI * PI / 3.0;
                for j in 0..i {
                    let d = (i - j) as f64;
                    let sign = if (i - j) % 2 == 0 { 1.0 } else { -1.0 };
                    let v = s * 2.0 * sign / (d * d);
                    t[i * n + j] = v;
                    t[j * n + i] = v;
                }
            }
        }
        KineticScheme::FiniteDifference => {
            for i in 0..n {
                t[i * n + i] = 2.0 * s;
                if i + 1 < n {
                    t[i * n + i + 1] = -s;
                    t[(i + 1) * n + i] = -s;
                }
            }
        }
    }
    t
}

/// Discretizes the SQUID Hamiltonian on `grid`.
pub fn build_hamiltonian(params: &SquidParams, grid: &GridSpec, scheme: KineticScheme) -> Result<GridHamiltonian> {
    params.validate()?;
    grid.validate()?;
    let (lx, ly) = params.oscillator_lengths();
    if lx / grid.dx() < MIN_POINTS_PER_LENGTH {
        return Err(Error::config(
            "grid.n_x",
            format!(
                "spacing {:.3e} too coarse for oscillator length {:.3e}; increase n_x or shrink x_halfwidth",
                grid.dx(),
                lx
            ),
        ));
    }
    if ly / grid.dy() < MIN_POINTS_PER_LENGTH {
        return Err(Error::config(
            "grid.n_y",
            format!(
                "spacing {:.3e} too coarse for oscillator length {:.3e}; increase n_y or shrink y_halfwidth",
                grid.dy(),
                ly
            ),
        ));
    }
    let xs = grid.x_points();
    let ys = grid.y_points();
    let mut v = Vec::with_capacity(grid.len());
    for &x in &xs {
        for &y in &ys {
            v.push(potential(params, x, y));
        }
    }
    Ok(GridHamiltonian {
        params: *params,
        grid: *grid,
        scheme,
        tx: kinetic_matrix(grid.n_x, grid.dx(), params.kinetic_x(), scheme),
        ty: kinetic_matrix(grid.n_y, grid.dy(), params.kinetic_y(), scheme),
        potential: v,
    })
}

impl GridHamiltonian {
    pub fn dim(&self) -> usize {
        self.grid.len()
    }

    pub fn potential_values(&self) -> &[f64] {
        &self.potential
    }

    pub fn min_potential(&self) -> f64 {
        self.potential.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// out = H v.
    pub fn apply(&self, v: &[f64], out: &mut [f64]) {
        let (nx, ny) = (self.grid.n_x, self.grid.n_y);
        assert_eq!(v.len(), nx * ny);
        assert_eq!(out.len(), nx * ny);
        for (o, (&vi, &pi)) in out.iter_mut().zip(v.iter().zip(&self.potential)) {
            *o = pi * vi;
        }
        for i in 0..nx {
            let row = &mut out[i * ny..(i + 1) * ny];
            for k in 0..nx {
                let a = self.tx[i * nx + k];
                if a == 0.0 {
                    continue;
                }
                let src = &v[k * ny..(k + 1) * ny];
                for (o, s) in row.iter_mut().zip(src) {
                    *o += a * s;
                }
            }
        }
        for i in 0..nx {
            let src = &v[i * ny..(i + 1) * ny];
            for j in 0..ny {
                let trow = &self.ty[j * ny..(j + 1) * ny];
                let mut acc = 0.0;
                for (t, s) in trow.iter().zip(src) {
                    acc += t * s;
                }
                out[i * ny + j] += acc;
            }
        }
    }

    /// Dense copy of the operator; only sensible for small grids.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let (nx, ny) = (self.grid.n_x, self.grid.n_y);
        let n = nx * ny;
        let mut h = DMatrix::zeros(n, n);
        for i in 0..nx {
            for j in 0..ny {
                let r = i * ny + j;
                h[(r, r)] += self.potential[r];
                for k in 0..nx {
                    h[(r, k * ny + j)] += self.tx[i * nx + k];
                }
                for l in 0..ny {
                    h[(r, i * ny + l)] += self.ty[j * ny + l];
                }
            }
        }
        h
    }
}
