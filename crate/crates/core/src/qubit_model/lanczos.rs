// Copyright 2026 fluxsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Thick-restart Lanczos with full reorthogonalization for the lowest
//! eigenpairs of a symmetric operator given only through its action.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    /// Maximum Krylov basis size before a restart.
    pub basis_size: usize,
    /// Absolute residual ‖Hy − θy‖ required of every wanted pair.
    pub tolerance: f64,
    pub max_restarts: usize,
    /// Seed of the deterministic starting vector.
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            basis_size: 96,
            tolerance: 1e-9,
            max_restarts: 500,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LanczosOutcome {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    /// Largest true residual norm among the returned pairs.
    pub max_residual: f64,
    pub restarts: usize,
    pub matvecs: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Projects `w` off every basis vector twice, returning the summed
/// coefficients of the first pass plus the correction of the second.
fn orthogonalize(basis: &[Vec<f64>], w: &mut [f64]) -> Vec<f64> {
    let mut coeffs = vec![0.0; basis.len()];
    for _ in 0..2 {
        for (c, v) in coeffs.iter_mut().zip(basis) {
            let h = dot(v, w);
            axpy(-h, v, w);
            *c += h;
        }
    }
    coeffs
}

fn start_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
    let mut v: Vec<f64> = (0..n)
        .map(|_| {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect();
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    v
}

/// Lowest `nev` eigenpairs of the `n`-dimensional symmetric operator `op`
/// (`op(v, out)` must write `out = A v`).
pub fn lowest_eigenpairs<F>(op: F, n: usize, nev: usize, opts: &LanczosOptions) -> Result<LanczosOutcome>
where
    F: Fn(&[f64], &mut [f64]),
{
    if nev == 0 || nev >= n {
        return Err(Error::Domain(format!(
            "cannot extract {nev} eigenpairs from dimension {n}"
        )));
    }
    let m = opts.basis_size.max(2 * nev + 8).min(n);
    let keep = (nev + (m - nev) / 3).min(m - 2);

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut t = DMatrix::<f64>::zeros(m, m);
    let mut next = start_vector(n, opts.seed);
    let mut w = vec![0.0; n];
    let mut matvecs = 0;
    let mut last_residual = f64::INFINITY;

    for restart in 0..=opts.max_restarts {
        let mut beta = 0.0;
        while basis.len() < m {
            let j = basis.len();
            basis.push(std::mem::take(&mut next));
            op(&basis[j], &mut w);
            matvecs += 1;
            let scale = norm(&w);
            let coeffs = orthogonalize(&basis, &mut w);
            for (i, c) in coeffs.iter().enumerate() {
                t[(i, j)] = *c;
                t[(j, i)] = *c;
            }
            beta = norm(&w);
            if beta <= 1e-13 * scale {
                // invariant subspace: continue with a fresh orthogonal direction
                let mut r = start_vector(n, opts.seed.wrapping_add(j as u64 + 1));
                orthogonalize(&basis, &mut r);
                let nr = norm(&r);
                r.iter_mut().for_each(|x| *x /= nr);
                next = r;
                beta = 0.0;
            } else {
                next = w.iter().map(|x| x / beta).collect();
            }
        }

        let sym = (&t + t.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

        let est = |k: usize| (beta * eig.eigenvectors[(m - 1, order[k])]).abs();
        let converged = (0..nev).all(|k| est(k) <= opts.tolerance);
        last_residual = (0..nev).map(est).fold(0.0, f64::max);

        let ncombine = if converged { nev } else { keep };
        let mut ritz = Vec::with_capacity(ncombine);
        for &col in order.iter().take(ncombine) {
            let mut y = vec![0.0; n];
            for (i, v) in basis.iter().enumerate() {
                axpy(eig.eigenvectors[(i, col)], v, &mut y);
            }
            ritz.push(y);
        }

        if converged {
            let values: Vec<f64> = order.iter().take(nev).map(|&c| eig.eigenvalues[c]).collect();
            let mut max_residual: f64 = 0.0;
            for (y, &theta) in ritz.iter_mut().zip(&values) {
                let ny = norm(y);
                y.iter_mut().for_each(|x| *x /= ny);
                op(y, &mut w);
                matvecs += 1;
                axpy(-theta, y, &mut w);
                max_residual = max_residual.max(norm(&w));
            }
            if max_residual > 10.0 * opts.tolerance {
                return Err(Error::Numeric(format!(
                    "Lanczos Ritz residual estimate converged but true residual is {max_residual:.3e}"
                )));
            }
            return Ok(LanczosOutcome {
                values,
                vectors: ritz,
                max_residual,
                restarts: restart,
                matvecs,
            });
        }

        // thick restart: Ritz vectors plus the residual direction
        t.fill(0.0);
        for (k, &col) in order.iter().take(keep).enumerate() {
            t[(k, k)] = eig.eigenvalues[col];
            let c = beta * eig.eigenvectors[(m - 1, col)];
            t[(k, keep)] = c;
            t[(keep, k)] = c;
        }
        basis = ritz;
    }
    Err(Error::Numeric(format!(
        "Lanczos did not converge after {} restarts; residual {last_residual:.3e} > {:.1e}",
        opts.max_restarts, opts.tolerance
    )))
}
