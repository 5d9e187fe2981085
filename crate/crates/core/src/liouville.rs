// Copyright 2026 fluxsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Eigenbasis Liouvillian of the driven qubit and its split-operator
//! propagation.
//!
//! The density matrix is vectorized row-major, ρ_mn → index m·N + n, so the
//! commutator with an N×N matrix H is H ⊗ 1 − 1 ⊗ Hᵀ. The generator reads
//! dρ/dt = −i(L^S + L^F(t))ρ + Rρ with time in units of 1/ω_LC.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::dissipator::RateMatrix;
use crate::linalg::{eigendecompose, expm, unitary_from_symmetric};
use crate::qubit_model::EigenSystem;
use crate::timeseries::TimeSeries;
use crate::{Error, Result};

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);

/// Validated N×N density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub rho: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub const HERMITICITY_TOL: f64 = 1e-10;
    pub const TRACE_TOL: f64 = 1e-10;
    pub const POSITIVITY_TOL: f64 = 1e-8;

    pub fn new(rho: DMatrix<Complex64>) -> Result<Self> {
        let d = DensityMatrix { rho };
        d.validate(Self::HERMITICITY_TOL, Self::TRACE_TOL, Self::POSITIVITY_TOL)?;
        Ok(d)
    }

    /// All population in the lowest level.
    pub fn ground(n: usize) -> Self {
        let mut rho = DMatrix::zeros(n, n);
        rho[(0, 0)] = C1;
        DensityMatrix { rho }
    }

    /// Equal superposition of the two lowest levels:
    /// ρ_11 = ρ_12 = ρ_21 = ρ_22 = 1/2.
    pub fn superposition(n: usize) -> Self {
        let mut rho = DMatrix::zeros(n, n);
        for i in 0..2 {
            for j in 0..2 {
                rho[(i, j)] = Complex64::new(0.5, 0.0);
            }
        }
        DensityMatrix { rho }
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn from_vector(n: usize, v: &[Complex64]) -> Self {
        DensityMatrix {
            rho: DMatrix::from_row_slice(n, n, v),
        }
    }

    pub fn to_vector(&self) -> Vec<Complex64> {
        let n = self.dim();
        (0..n * n).map(|k| self.rho[(k / n, k % n)]).collect()
    }

    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.rho - self.rho.adjoint())
            .iter()
            .fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.rho + self.rho.adjoint()) * Complex64::new(0.5, 0.0);
        h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn validate(&self, herm_tol: f64, trace_tol: f64, pos_tol: f64) -> Result<()> {
        if self.rho.nrows() != self.rho.ncols() || self.rho.nrows() == 0 {
            return Err(Error::Dimension {
                expected: self.rho.nrows(),
                found: self.rho.ncols(),
            });
        }
        let herm = self.hermiticity_error();
        if !(herm <= herm_tol) {
            return Err(Error::Numeric(format!(
                "density matrix not Hermitian (deviation {herm:.2e})"
            )));
        }
        let tr = self.trace();
        if !((tr - C1).norm() <= trace_tol) {
            return Err(Error::Numeric(format!("density matrix trace is {tr}")));
        }
        let min = self.min_eigenvalue();
        if !(min >= -pos_tol) {
            return Err(Error::Numeric(format!(
                "density matrix has negative eigenvalue {min:.3e}"
            )));
        }
        Ok(())
    }
}

/// Microwave flux φ(t) = φ_μ cos(ω_μ t + phase), active inside an optional
/// [on, off) window. Frequencies in ω_LC units, times in 1/ω_LC.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrivePulse {
    pub amplitude: f64,
    pub frequency: f64,
    pub phase: f64,
    pub window: Option<(f64, f64)>,
}

impl DrivePulse {
    pub fn continuous(amplitude: f64, frequency: f64) -> Self {
        DrivePulse {
            amplitude,
            frequency,
            phase: 0.0,
            window: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude >= 0.0 && self.amplitude.is_finite()) {
            return Err(Error::config("drive.amplitude", "must be non-negative"));
        }
        if !(self.frequency > 0.0 && self.frequency.is_finite()) {
            return Err(Error::config("drive.frequency", "must be positive"));
        }
        if let Some((on, off)) = self.window {
            if !(off > on) {
                return Err(Error::config("drive.window", "switch-off must follow switch-on"));
            }
        }
        Ok(())
    }

    pub fn flux(&self, t: f64) -> f64 {
        if let Some((on, off)) = self.window {
            if t < on || t >= off {
                return 0.0;
            }
        }
        self.amplitude * (self.frequency * t + self.phase).cos()
    }

    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.frequency
    }
}

/// Drive Hamiltonian in the eigenbasis (units of ħω_LC):
/// H^F_mn = (Φ0²/2L)[φ² δ_mn − 2φ(x_mn − x_e δ_mn)].
pub fn drive_hamiltonian(eig: &EigenSystem, n: usize, pulse: &DrivePulse, t: f64) -> DMatrix<f64> {
    drive_matrix(&eig.x_mn, n, eig.params.energy_scale(), eig.params.x_e, pulse.flux(t))
}

fn drive_matrix(x: &DMatrix<f64>, n: usize, energy_scale: f64, x_e: f64, phi: f64) -> DMatrix<f64> {
    if phi == 0.0 {
        return DMatrix::zeros(n, n);
    }
    let half_a = 0.5 * energy_scale;
    DMatrix::from_fn(n, n, |m, k| {
        let delta = if m == k { 1.0 } else { 0.0 };
        half_a * (phi * phi * delta - 2.0 * phi * (x[(m, k)] - x_e * delta))
    })
}

/// Commutator superoperator of a real symmetric N×N matrix:
/// (mn, m'n') ↦ H_mm' δ_nn' − H_n'n δ_mm'.
pub fn commutator_superoperator(h: &DMatrix<f64>) -> DMatrix<f64> {
    let n = h.nrows();
    let mut l = DMatrix::zeros(n * n, n * n);
    for m in 0..n {
        for k in 0..n {
            for mp in 0..n {
                for kp in 0..n {
                    let mut v = 0.0;
                    if k == kp {
                        v += h[(m, mp)];
                    }
                    if m == mp {
                        v -= h[(kp, k)];
                    }
                    l[(m * n + k, mp * n + kp)] = v;
                }
            }
        }
    }
    l
}

#[derive(Debug, Clone)]
pub struct Liouvillian {
    pub n: usize,
    /// Diagonal of L^S: ω_mn = E_m − E_n.
    pub static_diag: Vec<f64>,
    pub drive: Option<DrivePulse>,
    /// Damping-rate matrix (units of ω_LC).
    pub r: DMatrix<f64>,
    pub omega_lc: f64,
    x_mn: DMatrix<f64>,
    energy_scale: f64,
    x_e: f64,
}

/// Assembles the generator for the lowest `rates.n` levels.
pub fn build_liouvillian(eig: &EigenSystem, pulse: Option<DrivePulse>, rates: &RateMatrix) -> Result<Liouvillian> {
    let n = rates.n;
    if n > eig.n_levels() || rates.r.nrows() != n * n {
        return Err(Error::Dimension {
            expected: eig.n_levels(),
            found: n,
        });
    }
    if let Some(p) = &pulse {
        p.validate()?;
    }
    let static_diag = (0..n * n).map(|k| eig.omega(k / n, k % n)).collect();
    Ok(Liouvillian {
        n,
        static_diag,
        drive: pulse,
        r: rates.r.clone(),
        omega_lc: eig.params.omega_lc(),
        x_mn: eig.x_mn.view((0, 0), (n, n)).into_owned(),
        energy_scale: eig.params.energy_scale(),
        x_e: eig.params.x_e,
    })
}

impl Liouvillian {
    /// Drive Hamiltonian of the retained levels at time t.
    pub fn drive_matrix(&self, t: f64) -> DMatrix<f64> {
        let phi = self.drive.map_or(0.0, |p| p.flux(t));
        drive_matrix(&self.x_mn, self.n, self.energy_scale, self.x_e, phi)
    }

    /// Real symmetric coherent part L^S + L^F(t).
    pub fn coherent(&self, t: f64) -> DMatrix<f64> {
        let mut l = commutator_superoperator(&self.drive_matrix(t));
        for (k, w) in self.static_diag.iter().enumerate() {
            l[(k, k)] += w;
        }
        l
    }

    /// Full complex generator −i(L^S + L^F(t)) + R.
    pub fn generator(&self, t: f64) -> DMatrix<Complex64> {
        let c = self.coherent(t);
        DMatrix::from_fn(c.nrows(), c.ncols(), |i, j| Complex64::new(self.r[(i, j)], -c[(i, j)]))
    }
}

/// How exp(RΔt) is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RelaxationMethod {
    /// Scaling and squaring with a Padé approximant.
    #[default]
    Pade,
    /// B e^{qΔt} B⁻¹ from the eigendecomposition of R.
    Eigen,
}

impl std::str::FromStr for RelaxationMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "pade" | "padé" => Ok(RelaxationMethod::Pade),
            "eigen" => Ok(RelaxationMethod::Eigen),
            _ => Err(format!("unknown relaxation propagator '{s}' (expected pade or eigen)")),
        }
    }
}

pub fn relaxation_propagator(r: &DMatrix<f64>, dt: f64, method: RelaxationMethod) -> Result<DMatrix<f64>> {
    match method {
        RelaxationMethod::Pade => Ok(expm(&(r * dt))),
        RelaxationMethod::Eigen => Ok(eigendecompose(r, 1e12)?.exp_real(dt)),
    }
}

fn complexify(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Single Strang step P_L P_R P_L with the drive evaluated at the midpoint.
fn step_matrix(liou: &Liouvillian, t: f64, dt: f64, p_r: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let p_l = unitary_from_symmetric(&liou.coherent(t + 0.5 * dt), 0.5 * dt);
    &p_l * p_r * &p_l
}

/// Advances ρ(t) to ρ(t + Δt).
pub fn step(state: &DensityMatrix, t: f64, dt: f64, liou: &Liouvillian) -> Result<DensityMatrix> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Domain(format!("time step must be positive, got {dt}")));
    }
    if state.dim() != liou.n {
        return Err(Error::Dimension {
            expected: liou.n,
            found: state.dim(),
        });
    }
    let p_r = complexify(&relaxation_propagator(&liou.r, dt, RelaxationMethod::Pade)?);
    let s = step_matrix(liou, t, dt, &p_r);
    let v = s * DVector::from_vec(state.to_vector());
    Ok(DensityMatrix::from_vector(liou.n, v.as_slice()))
}

#[derive(Debug, Clone, Copy)]
pub struct PropagationOptions {
    pub relaxation: RelaxationMethod,
    /// Abort when a recorded state violates the density-matrix invariants.
    pub check_invariants: bool,
    pub trace_tol: f64,
    pub hermiticity_tol: f64,
    pub population_tol: f64,
    /// Also abort when a population leaves [−tol, 1 + tol]. Off by default:
    /// non-secular rate terms legitimately push nearly empty levels slightly
    /// negative; the excursion is reported by the time series instead.
    pub strict_populations: bool,
    pub max_rows: usize,
}

impl Default for PropagationOptions {
    fn default() -> Self {
        PropagationOptions {
            relaxation: RelaxationMethod::Pade,
            check_invariants: true,
            trace_tol: 1e-9,
            hermiticity_tol: 1e-9,
            population_tol: 1e-8,
            strict_populations: false,
            max_rows: 2_000_000,
        }
    }
}

fn mat_pow(m: &DMatrix<Complex64>, mut e: usize) -> DMatrix<Complex64> {
    let n = m.nrows();
    let mut base = m.clone();
    let mut acc = DMatrix::from_diagonal_element(n, n, C1);
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// Removes rounding drift from a propagator map: restores the symmetry that
/// maps Hermitian matrices to Hermitian ones and the unit trace row.
fn restore_structure(m: &mut DMatrix<Complex64>, n: usize) {
    let d = n * n;
    let swap = |a: usize| (a % n) * n + a / n;
    for a in 0..d {
        for b in 0..d {
            let (sa, sb) = (swap(a), swap(b));
            if (sa, sb) < (a, b) {
                continue;
            }
            let avg = 0.5 * (m[(a, b)] + m[(sa, sb)].conj());
            m[(a, b)] = avg;
            m[(sa, sb)] = avg.conj();
        }
    }
    for c in 0..d {
        let target = if c / n == c % n { C1 } else { C0 };
        let tr: Complex64 = (0..n).map(|k| m[(k * n + k, c)]).sum();
        let fix = (tr - target) / n as f64;
        for k in 0..n {
            m[(k * n + k, c)] -= fix;
        }
    }
}

fn check_state(n: usize, v: &[Complex64], t: f64, opts: &PropagationOptions) -> Result<()> {
    let mut tr = C0;
    let mut herm: f64 = 0.0;
    for m in 0..n {
        tr += v[m * n + m];
        let p = v[m * n + m].re;
        if opts.strict_populations && (p < -opts.population_tol || p > 1.0 + opts.population_tol) {
            return Err(Error::Numeric(format!(
                "population of level {m} is {p:.3e} at t = {t:.6e}"
            )));
        }
        for k in 0..n {
            herm = herm.max((v[m * n + k] - v[k * n + m].conj()).norm());
        }
    }
    if (tr - C1).norm() > opts.trace_tol {
        return Err(Error::Numeric(format!(
            "trace drifted to {tr:.12} at t = {t:.6e} (tolerance {:.0e})",
            opts.trace_tol
        )));
    }
    if herm > opts.hermiticity_tol {
        return Err(Error::Numeric(format!("Hermiticity lost ({herm:.2e}) at t = {t:.6e}")));
    }
    Ok(())
}

/// Propagates ρ0 over [0, t_final] with step Δt, recording every
/// `record_every` steps (the initial state is always recorded).
///
/// Step maps repeat with the drive period when it holds a whole number of
/// steps; those maps (and stride products) are built once and reused.
pub fn propagate(
    rho0: &DensityMatrix,
    liou: &Liouvillian,
    t_final: f64,
    dt: f64,
    record_every: usize,
    opts: &PropagationOptions,
) -> Result<TimeSeries> {
    let n = liou.n;
    if rho0.dim() != n {
        return Err(Error::Dimension {
            expected: n,
            found: rho0.dim(),
        });
    }
    rho0.validate(1e-10, 1e-10, 1e-8)?;
    if !(dt > 0.0 && dt.is_finite()) || !(t_final >= 0.0) || record_every == 0 {
        return Err(Error::Domain(format!(
            "invalid propagation request: dt = {dt}, t_final = {t_final}, record_every = {record_every}"
        )));
    }
    let total_steps = (t_final / dt).round() as usize;
    let rows = total_steps / record_every + 1;
    if rows > opts.max_rows {
        return Err(Error::config(
            "run.record_every",
            format!("{rows} recorded rows exceed the cap of {}", opts.max_rows),
        ));
    }

    let p_r = complexify(&relaxation_propagator(&liou.r, dt, opts.relaxation)?);

    // period of the step sequence in steps (1 without drive)
    let cycle = match liou.drive {
        None => Some(1),
        Some(p) if p.amplitude == 0.0 => Some(1),
        Some(p) if p.window.is_none() => {
            let k = p.period() / dt;
            let kr = k.round();
            if kr >= 1.0 && (k - kr).abs() < 1e-9 * kr {
                Some(kr as usize)
            } else {
                None
            }
        }
        Some(_) => None,
    };

    let mut series = TimeSeries::new(n, liou.omega_lc);
    let mut v = DVector::from_vec(rho0.to_vector());
    series.push(0.0, v.as_slice());

    match cycle {
        Some(k) if record_every.is_multiple_of(k) => {
            let mut period = DMatrix::from_diagonal_element(n * n, n * n, C1);
            for j in 0..k {
                period = step_matrix(liou, j as f64 * dt, dt, &p_r) * period;
            }
            restore_structure(&mut period, n);
            let mut stride = mat_pow(&period, record_every / k);
            restore_structure(&mut stride, n);
            for r in 1..rows {
                v = &stride * v;
                let t = (r * record_every) as f64 * dt;
                if opts.check_invariants {
                    check_state(n, v.as_slice(), t, opts)?;
                }
                series.push(t, v.as_slice());
            }
        }
        _ => {
            let cached: Option<Vec<DMatrix<Complex64>>> = cycle.map(|k| {
                (0..k)
                    .map(|j| {
                        let mut m = step_matrix(liou, j as f64 * dt, dt, &p_r);
                        restore_structure(&mut m, n);
                        m
                    })
                    .collect()
            });
            for s in 0..total_steps {
                let t = s as f64 * dt;
                v = match &cached {
                    Some(c) => &c[s % c.len()] * v,
                    None => {
                        let mut m = step_matrix(liou, t, dt, &p_r);
                        restore_structure(&mut m, n);
                        m * v
                    }
                };
                if (s + 1) % record_every == 0 {
                    let t1 = (s + 1) as f64 * dt;
                    if opts.check_invariants {
                        check_state(n, v.as_slice(), t1, opts)?;
                    }
                    series.push(t1, v.as_slice());
                }
            }
        }
    }
    Ok(series)
}
