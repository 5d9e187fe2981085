// Copyright 2026 fluxsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Steady damping-rate matrix of the qubit in its energy eigenbasis.
//!
//! Superoperator indices flatten a level pair (m, n) to `m * N + n`. Rates
//! are stored in units of ω_LC (multiply by ω_LC for 1/s).

use nalgebra::DMatrix;

use crate::bath::BathModel;
use crate::quadrature::{integrate_with_breakpoints, QuadOptions};
use crate::qubit_model::EigenSystem;
use crate::units::{BOLTZMANN, FLUX_QUANTUM, HBAR, RESISTANCE_QUANTUM};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct RateMatrix {
    pub n: usize,
    /// N²×N² damping rates in units of ω_LC.
    pub r: DMatrix<f64>,
    /// Optional Lamb-shift matrix in units of ω_LC (diagnostic only).
    pub lamb: Option<DMatrix<f64>>,
    pub omega_lc: f64,
}

#[inline]
pub fn pair(n: usize, a: usize, b: usize) -> usize {
    a * n + b
}

/// J evaluated once for every level difference ω_mn (including ω_mm = 0).
#[derive(Debug, Clone)]
pub struct SpectralTable {
    pub j: DMatrix<f64>,
}

impl SpectralTable {
    pub fn new(eig: &EigenSystem, bath: &BathModel, n: usize) -> SpectralTable {
        let w_lc = eig.params.omega_lc();
        let j0 = bath.spectral_density(0.0);
        let j = DMatrix::from_fn(n, n, |a, b| {
            if a == b {
                j0
            } else {
                bath.spectral_density(eig.omega(a, b) * w_lc)
            }
        });
        SpectralTable { j }
    }
}

fn check_levels(eig: &EigenSystem, n: usize) -> Result<()> {
    if n == 0 || n > eig.n_levels() {
        return Err(Error::Dimension {
            expected: eig.n_levels(),
            found: n,
        });
    }
    Ok(())
}

/// Generic assembly shared by the damping and Lamb-shift matrices: `f(a, b)`
/// is the bath function at frequency ω_ab, `sign` selects +/− for the
/// middle term and the first sum.
fn assemble(x: &DMatrix<f64>, n: usize, f: &DMatrix<f64>, lamb: bool) -> DMatrix<f64> {
    let mut r = DMatrix::zeros(n * n, n * n);
    for m in 0..n {
        for nn in 0..n {
            for mp in 0..n {
                for np in 0..n {
                    let mut v = 0.0;
                    if nn == np {
                        let s: f64 = (0..n).map(|k| x[(m, k)] * x[(k, mp)] * f[(mp, k)]).sum();
                        v += if lamb { s } else { -s };
                    }
                    let mid = if lamb {
                        f[(np, nn)] - f[(mp, m)]
                    } else {
                        f[(np, nn)] + f[(mp, m)]
                    };
                    v += x[(m, mp)] * x[(np, nn)] * mid;
                    if m == mp {
                        v -= (0..n).map(|k| x[(np, k)] * x[(k, nn)] * f[(np, k)]).sum::<f64>();
                    }
                    r[(pair(n, m, nn), pair(n, mp, np))] = v;
                }
            }
        }
    }
    r
}

/// Damping-rate matrix for the lowest `n` levels.
pub fn damping_rate_matrix(eig: &EigenSystem, bath: &BathModel, n: usize) -> Result<RateMatrix> {
    check_levels(eig, n)?;
    bath.validate()?;
    let table = SpectralTable::new(eig, bath, n);
    Ok(rate_matrix_from_table(eig, &table, n))
}

pub fn rate_matrix_from_table(eig: &EigenSystem, table: &SpectralTable, n: usize) -> RateMatrix {
    let w_lc = eig.params.omega_lc();
    let scale = FLUX_QUANTUM * FLUX_QUANTUM / (2.0 * HBAR * HBAR) / w_lc;
    let mut r = assemble(&eig.x_mn, n, &table.j, false);
    r *= scale;
    RateMatrix {
        n,
        r,
        lamb: None,
        omega_lc: w_lc,
    }
}

impl RateMatrix {
    /// R_{mn,m'n'} with zero-based level indices.
    pub fn get(&self, m: usize, n: usize, mp: usize, np: usize) -> f64 {
        self.r[(pair(self.n, m, n), pair(self.n, mp, np))]
    }

    /// κ1 = R_{22,11} + R_{11,22} (population relaxation rate of the lowest
    /// pair), in units of ω_LC.
    pub fn kappa1(&self) -> f64 {
        self.get(1, 1, 0, 0) + self.get(0, 0, 1, 1)
    }

    /// κ2 = −R_{12,12} (coherence decay rate of the lowest pair).
    pub fn kappa2(&self) -> f64 {
        -self.get(0, 1, 0, 1)
    }

    /// Largest |Σ_m R_{mm,col}| over all columns, relative to max |R|.
    pub fn trace_defect(&self) -> f64 {
        let n = self.n;
        let max = self.r.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if max == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for col in 0..n * n {
            let s: f64 = (0..n).map(|m| self.r[(pair(n, m, m), col)]).sum();
            worst = worst.max(s.abs());
        }
        worst / max
    }

    /// Largest |R_{nm,n'm'} − R_{mn,m'n'}| relative to max |R|.
    pub fn swap_asymmetry(&self) -> f64 {
        let n = self.n;
        let max = self.r.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(f64::MIN_POSITIVE);
        let mut worst: f64 = 0.0;
        for m in 0..n {
            for nn in 0..n {
                for mp in 0..n {
                    for np in 0..n {
                        let d = self.get(nn, m, np, mp) - self.get(m, nn, mp, np);
                        worst = worst.max(d.abs());
                    }
                }
            }
        }
        worst / max
    }

    pub fn check_invariants(&self) -> Result<()> {
        let defect = self.trace_defect();
        if defect > 1e-12 {
            return Err(Error::Numeric(format!(
                "rate matrix breaks trace preservation ({defect:.2e})"
            )));
        }
        let asym = self.swap_asymmetry();
        if asym > 1e-12 {
            return Err(Error::Numeric(format!(
                "rate matrix breaks index-swap symmetry ({asym:.2e})"
            )));
        }
        for k in 0..self.n {
            if self.get(k, k, k, k) > 0.0 {
                return Err(Error::Numeric(format!("population of level {k} grows spontaneously")));
            }
        }
        Ok(())
    }
}

fn transition(eig: &EigenSystem, upper: usize, lower: usize) -> Result<(f64, f64)> {
    let n = eig.n_levels();
    if upper >= n || lower >= n {
        return Err(Error::Domain(format!("level index out of range for {n} levels")));
    }
    let de = eig.omega(upper, lower);
    if de <= 0.0 {
        return Err(Error::Domain(format!(
            "level {upper} is not above level {lower} (ΔE = {de:e} ħω_LC)"
        )));
    }
    Ok((de * HBAR * eig.params.omega_lc(), eig.x_mn[(upper, lower)]))
}

/// Rate (1/s) of decay from level `n` to the lower level `m` by emission
/// into the circuits.
pub fn spontaneous_rate(eig: &EigenSystem, bath: &BathModel, m: usize, n: usize) -> Result<f64> {
    let (de, x) = transition(eig, n, m)?;
    let y = bath.admittance(de / HBAR);
    let bracket = if bath.temperature == 0.0 {
        2.0
    } else {
        -2.0 / (-de / (BOLTZMANN * bath.temperature)).exp_m1()
    };
    Ok(2.0 * std::f64::consts::PI / HBAR * RESISTANCE_QUANTUM * x * x * de * y * bracket)
}

/// Rate (1/s) of thermally stimulated excitation from level `m` to the
/// higher level `n`.
pub fn stimulated_rate(eig: &EigenSystem, bath: &BathModel, n: usize, m: usize) -> Result<f64> {
    let (de, x) = transition(eig, n, m)?;
    let y = bath.admittance(de / HBAR);
    let bracket = if bath.temperature == 0.0 {
        0.0
    } else {
        // coth u − 1 = 2 / expm1(2u)
        2.0 / (de / (BOLTZMANN * bath.temperature)).exp_m1()
    };
    Ok(2.0 * std::f64::consts::PI / HBAR * RESISTANCE_QUANTUM * x * x * de * y * bracket)
}

/// Options of the principal-value integral behind the Lamb shift.
#[derive(Debug, Clone, Copy)]
pub struct LambOptions {
    /// Upper frequency cut (units of ω_LC); beyond it J is taken ∝ 1/ω.
    pub cutoff: f64,
    /// Initial half-width of the excluded window around the pole (ω_LC).
    pub window: f64,
    pub quad: QuadOptions,
}

impl Default for LambOptions {
    fn default() -> Self {
        LambOptions {
            cutoff: 50.0,
            window: 1e-3,
            quad: QuadOptions {
                abs_tol: 0.0,
                rel_tol: 1e-11,
                max_intervals: 20_000,
            },
        }
    }
}

fn log_breaks(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let k = (decades * per_decade as f64).ceil().max(1.0) as usize;
    (0..=k).map(|i| lo * (hi / lo).powf(i as f64 / k as f64)).collect()
}

/// f_I(ω) = (1/2π) P∫ J_ς(ω')/(ω' + ω) dω', with ω in units of ω_LC; the
/// result carries the SI units of J_ς.
pub fn lamb_kernel(bath: &BathModel, omega_lc: f64, omega: f64, opts: &LambOptions) -> Result<f64> {
    let j = |w: f64| bath.j_varsigma(w * omega_lc);
    let lam = opts.cutoff;
    let neg = if bath.temperature > 0.0 {
        (60.0 * BOLTZMANN * bath.temperature / (HBAR * omega_lc)).min(lam)
    } else {
        0.0
    };
    let pole = -omega;
    let mut nodes = vec![0.0];
    nodes.extend(log_breaks(1e-9, lam, 4));
    if neg > 0.0 {
        nodes.extend(log_breaks(1e-9, neg, 4).into_iter().map(|w| -w));
    }
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    let (first, last) = (nodes[0], *nodes.last().unwrap());
    let integrand = |w: f64| j(w) / (w + omega);

    let body = if pole > first && pole < last {
        // symmetric exclusion |ω' − pole| > ε; the omitted piece is odd in ε
        let room = (pole - first).min(last - pole);
        let eps0 = opts.window.min(0.25 * room).min(0.25 * pole.abs().max(1e-6));
        let excluded = |eps: f64| -> Result<f64> {
            let mut left: Vec<f64> = nodes.iter().copied().filter(|&w| w < pole - 2.0 * eps).collect();
            let mut right: Vec<f64> = nodes.iter().copied().filter(|&w| w > pole + 2.0 * eps).collect();
            let mut d = eps;
            while pole - d > first || pole + d < last {
                if pole - d > first {
                    left.push(pole - d);
                }
                if pole + d < last {
                    right.push(pole + d);
                }
                d *= 2.0;
            }
            let mut total = 0.0;
            for mut seg in [left, right] {
                seg.sort_by(f64::total_cmp);
                seg.dedup();
                if seg.len() >= 2 {
                    total += integrate_with_breakpoints(integrand, &seg, &opts.quad)?.value;
                }
            }
            Ok(total)
        };
        let i0 = excluded(eps0)?;
        let i1 = excluded(eps0 / 2.0)?;
        let i2 = excluded(eps0 / 4.0)?;
        let r0 = 2.0 * i1 - i0;
        let r1 = 2.0 * i2 - i1;
        (8.0 * r1 - r0) / 7.0
    } else {
        integrate_with_breakpoints(integrand, &nodes, &opts.quad)?.value
    };
    // power-law tail J(ω') ≈ J(Λ)Λ/ω' beyond the cut
    let tail = if omega.abs() > 1e-12 {
        j(lam) * lam / omega * (1.0 + omega / lam).ln()
    } else {
        j(lam)
    };
    Ok((body + tail) / (2.0 * std::f64::consts::PI))
}

/// Lamb-shift matrix for the lowest `n` levels in units of ω_LC. Computed
/// for inspection only; propagation never uses it.
pub fn lamb_shift_matrix(eig: &EigenSystem, bath: &BathModel, n: usize, opts: &LambOptions) -> Result<DMatrix<f64>> {
    check_levels(eig, n)?;
    bath.validate()?;
    let w_lc = eig.params.omega_lc();
    let mut fi = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            // the kernel is evaluated at ω_ab
            fi[(a, b)] = lamb_kernel(bath, w_lc, eig.omega(a, b), opts)?;
        }
    }
    // B uses f_I(ω_{km'}), f_I(ω_{nn'}), f_I(ω_{mm'}), f_I(ω_{kn'}); the
    // shared assembly indexes its table as f[(second, first)], so transpose
    let ft = fi.transpose();
    let mut b = assemble(&eig.x_mn, n, &ft, true);
    b *= 1.0 / (HBAR * HBAR * w_lc);
    Ok(b)
}
