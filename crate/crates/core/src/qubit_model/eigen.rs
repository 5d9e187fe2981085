// Copyright 2026 fluxsim contributors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::{DMatrix, SymmetricEigen};

use super::lanczos::{lowest_eigenpairs, LanczosOptions};
use super::{GridHamiltonian, GridSpec, KineticScheme, SquidParams};
use crate::{Error, Result};

/// Eigensolver back end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EigenSolver {
    /// Dense for dimensions up to [`SolverOptions::dense_limit`], Lanczos above.
    #[default]
    Auto,
    Dense,
    Lanczos,
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub kinetic: KineticScheme,
    pub solver: EigenSolver,
    pub dense_limit: usize,
    pub lanczos: LanczosOptions,
    /// Largest admissible |ψ| on the outermost samples relative to max |ψ|.
    pub boundary_tolerance: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            kinetic: KineticScheme::SincDvr,
            solver: EigenSolver::Auto,
            dense_limit: 2048,
            lanczos: LanczosOptions::default(),
            boundary_tolerance: 1e-8,
        }
    }
}

/// Lowest eigenpairs of the grid Hamiltonian with matrix elements of x and y.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub params: SquidParams,
    pub grid: GridSpec,
    /// Ascending, in units of ħω_LC.
    pub energies: Vec<f64>,
    /// Grid samples, normalized so that Σ|ψ|² h_x h_y = 1.
    pub states: Vec<Vec<f64>>,
    pub x_mn: DMatrix<f64>,
    pub y_mn: DMatrix<f64>,
    /// Largest residual ‖Hψ − Eψ‖ (unnormalized grid vector norm).
    pub max_residual: f64,
}

impl EigenSystem {
    pub fn n_levels(&self) -> usize {
        self.energies.len()
    }

    /// ω_mn = E_m − E_n in units of ω_LC (zero-based indices).
    pub fn omega(&self, m: usize, n: usize) -> f64 {
        self.energies[m] - self.energies[n]
    }

    /// Keeps the lowest `n` levels.
    pub fn truncated(&self, n: usize) -> Result<EigenSystem> {
        if n == 0 || n > self.n_levels() {
            return Err(Error::Domain(format!("cannot keep {n} of {} levels", self.n_levels())));
        }
        Ok(EigenSystem {
            params: self.params,
            grid: self.grid,
            energies: self.energies[..n].to_vec(),
            states: self.states[..n].to_vec(),
            x_mn: self.x_mn.view((0, 0), (n, n)).into_owned(),
            y_mn: self.y_mn.view((0, 0), (n, n)).into_owned(),
            max_residual: self.max_residual,
        })
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let w = self.grid.cell_area();
        let mut worst: f64 = 0.0;
        for (m, a) in self.states.iter().enumerate() {
            for (n, b) in self.states.iter().enumerate() {
                let s: f64 = a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>() * w;
                let target = if m == n { 1.0 } else { 0.0 };
                worst = worst.max((s - target).abs());
            }
        }
        worst
    }
}

fn fix_sign(v: &mut [f64]) {
    let mut best = 0usize;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn boundary_ratio(v: &[f64], grid: &GridSpec) -> f64 {
    let (nx, ny) = (grid.n_x, grid.n_y);
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut edge: f64 = 0.0;
    for i in 0..nx {
        for j in 0..ny {
            if i == 0 || j == 0 || i == nx - 1 || j == ny - 1 {
                edge = edge.max(v[i * ny + j].abs());
            }
        }
    }
    edge / max
}

/// Solves for the lowest `n_states` eigenpairs of `h`.
pub fn solve_eigensystem(h: &GridHamiltonian, n_states: usize, options: &SolverOptions) -> Result<EigenSystem> {
    let dim = h.dim();
    if n_states == 0 || n_states > 16 || n_states * 4 > dim {
        return Err(Error::config(
            "n_levels",
            format!("{n_states} states requested from a grid of {dim} points (allowed 1..=16, well below grid size)"),
        ));
    }
    let grid = h.grid;
    let dense = match options.solver {
        EigenSolver::Dense => true,
        EigenSolver::Lanczos => false,
        EigenSolver::Auto => dim <= options.dense_limit,
    };
    let (energies, mut states) = if dense {
        let eig = SymmetricEigen::new(h.to_dense());
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let vals: Vec<f64> = order[..n_states].iter().map(|&k| eig.eigenvalues[k]).collect();
        let vecs: Vec<Vec<f64>> = order[..n_states]
            .iter()
            .map(|&k| eig.eigenvectors.column(k).iter().copied().collect())
            .collect();
        (vals, vecs)
    } else {
        let out = lowest_eigenpairs(|v, o| h.apply(v, o), dim, n_states, &options.lanczos)?;
        (out.values, out.vectors)
    };

    let area = grid.cell_area();
    let mut max_residual: f64 = 0.0;
    let mut hv = vec![0.0; dim];
    for (k, v) in states.iter_mut().enumerate() {
        let nrm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= nrm);
        h.apply(v, &mut hv);
        let r: f64 = hv
            .iter()
            .zip(v.iter())
            .map(|(a, b)| (a - energies[k] * b).powi(2))
            .sum::<f64>()
            .sqrt();
        max_residual = max_residual.max(r);
        let scale = area.sqrt();
        v.iter_mut().for_each(|x| *x /= scale);
        fix_sign(v);
        let ratio = boundary_ratio(v, &grid);
        if ratio > options.boundary_tolerance {
            return Err(Error::config(
                "grid",
                format!(
                    "state {k} has boundary amplitude {ratio:.2e} of its maximum (limit {:.0e}); enlarge x_halfwidth/y_halfwidth",
                    options.boundary_tolerance
                ),
            ));
        }
    }

    let xs = grid.x_points();
    let ys = grid.y_points();
    let ny = grid.n_y;
    let mut x_mn = DMatrix::zeros(n_states, n_states);
    let mut y_mn = DMatrix::zeros(n_states, n_states);
    for m in 0..n_states {
        for n in m..n_states {
            let (a, b) = (&states[m], &states[n]);
            let (mut sx, mut sy) = (0.0, 0.0);
            for (idx, (p, q)) in a.iter().zip(b).enumerate() {
                let pq = p * q;
                sx += pq * xs[idx / ny];
                sy += pq * ys[idx % ny];
            }
            x_mn[(m, n)] = sx * area;
            x_mn[(n, m)] = sx * area;
            y_mn[(m, n)] = sy * area;
            y_mn[(n, m)] = sy * area;
        }
    }

    let sys = EigenSystem {
        params: h.params,
        grid,
        energies,
        states,
        x_mn,
        y_mn,
        max_residual,
    };
    let ortho = sys.orthonormality_error();
    if ortho > 1e-10 {
        return Err(Error::Numeric(format!(
            "eigenvectors not orthonormal: Gram deviation {ortho:.2e}"
        )));
    }
    Ok(sys)
}
