// Copyright 2026 fluxsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Dissipative environment: control and readout circuits seen through their
//! real admittances, and the resulting finite-temperature spectral density.
//!
//! Frequencies here are angular frequencies in rad/s and all quantities are
//! SI. The admittances depend on ω only through ω², so they are exactly even
//! and their ω → 0 limits come out of the same expressions.

use crate::units::{BOLTZMANN, FLUX_QUANTUM, HBAR, PICO};
use crate::{Error, Result};

/// Flux-bias (control) circuit: L_x in series with C_x R_x, shunted by R_x0,
/// coupled to the qubit loop through M_x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlCircuitParams {
    pub l_x: f64,
    pub c_x: f64,
    pub r_x: f64,
    pub r_x0: f64,
    pub m_x: f64,
}

/// dc-SQUID readout circuit with branch inductances L_1 = L_10 + L_J1 and
/// L_2 = L_20 + L_J2, loaded by C_m R_m shunted by R_m0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadoutCircuitParams {
    pub l_10: f64,
    pub l_20: f64,
    pub l_j1: f64,
    pub l_j2: f64,
    pub c_m: f64,
    pub r_m: f64,
    pub r_m0: f64,
    pub m_m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathModel {
    pub control: ControlCircuitParams,
    pub readout: ReadoutCircuitParams,
    /// Inductance of the qubit loop (H).
    pub qubit_l: f64,
    /// Kelvin; zero selects the ground-state bath.
    pub temperature: f64,
}

fn check_positive(path: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(path, format!("must be positive, got {v}")))
    }
}

fn check_non_negative(path: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(path, format!("must be non-negative, got {v}")))
    }
}

/// Series R, C shunted by R0, written as R_eq + 1/(jωC_eq). Returns
/// (R_eq, 1/C_eq, 1/(ω²C_eq)); all finite at ω = 0.
fn shunted_rc(w2: f64, c: f64, r: f64, r0: f64) -> (f64, f64, f64) {
    let s = r + r0;
    let d = 1.0 + w2 * c * c * s * s;
    let r_eq = (1.0 + w2 * c * c * r * s) / d * r0;
    let inv_w2_ceq = c * r0 * r0 / d;
    (r_eq, w2 * inv_w2_ceq, inv_w2_ceq)
}

impl ControlCircuitParams {
    pub fn reference_device() -> Self {
        ControlCircuitParams {
            l_x: 100.0 * PICO,
            c_x: 25.0 * PICO,
            r_x: 70.0,
            r_x0: 1e3,
            m_x: 1.0 * PICO,
        }
    }

    pub fn validate(&self, qubit_l: f64) -> Result<()> {
        check_positive("control.L_x", self.l_x)?;
        check_positive("control.C_x", self.c_x)?;
        check_positive("control.R_x", self.r_x)?;
        check_positive("control.R_x0", self.r_x0)?;
        check_non_negative("control.M_x", self.m_x)?;
        if self.m_x * self.m_x >= qubit_l * self.l_x {
            return Err(Error::config(
                "control.M_x",
                format!("M_x² must be below L·L_x ({:.3e} H²)", qubit_l * self.l_x),
            ));
        }
        Ok(())
    }

    /// υ_x = M_x² − L L_x (negative for valid parameters).
    pub fn upsilon(&self, qubit_l: f64) -> f64 {
        self.m_x * self.m_x - qubit_l * self.l_x
    }
}

/// Real part of the admittance the control circuit presents to the qubit
/// loop of inductance `qubit_l`, at angular frequency `omega`.
pub fn control_admittance_real(p: &ControlCircuitParams, qubit_l: f64, omega: f64) -> f64 {
    let w2 = omega * omega;
    let (r_eq, inv_ceq, inv_w2_ceq) = shunted_rc(w2, p.c_x, p.r_x, p.r_x0);
    let ups = p.upsilon(qubit_l);
    let l = qubit_l;
    let f = p.m_x * p.m_x * r_eq / (ups * ups);
    // 1/(ω² C_eq²) = (1/C_eq)·(1/(ω² C_eq))
    let g = 2.0 * l * inv_ceq / ups + l * l / (ups * ups) * (r_eq * r_eq + inv_ceq * inv_w2_ceq);
    f / (w2 + g)
}

/// Derived inductances of the readout circuit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadoutDerived {
    pub l_1: f64,
    pub l_2: f64,
    pub delta_l: f64,
    pub l_dc: f64,
    pub l_par: f64,
    pub k_dc2: f64,
    pub k_par2: f64,
}

impl ReadoutCircuitParams {
    pub fn reference_device() -> Self {
        ReadoutCircuitParams {
            l_10: 20.0 * PICO,
            l_20: 20.0 * PICO,
            l_j1: 100.0 * PICO,
            l_j2: 550.0 * PICO,
            c_m: 20.0 * PICO,
            r_m: 70.0,
            r_m0: 2e4,
            m_m: 3.3 * PICO,
        }
    }

    pub fn derived(&self, qubit_l: f64) -> ReadoutDerived {
        let l_1 = self.l_10 + self.l_j1;
        let l_2 = self.l_20 + self.l_j2;
        let l_dc = l_1 + l_2;
        let l_par = l_1 * l_2 / l_dc;
        let m2 = self.m_m * self.m_m;
        ReadoutDerived {
            l_1,
            l_2,
            delta_l: l_2 - l_1,
            l_dc,
            l_par,
            k_dc2: m2 / (qubit_l * l_dc),
            k_par2: m2 / (4.0 * qubit_l * l_par),
        }
    }

    /// True when L_1 = L_2: the bridge is balanced and the readout circuit
    /// decouples from the qubit.
    pub fn is_balanced_bridge(&self) -> bool {
        self.l_10 + self.l_j1 == self.l_20 + self.l_j2
    }

    pub fn validate(&self, qubit_l: f64) -> Result<()> {
        check_non_negative("readout.L_10", self.l_10)?;
        check_non_negative("readout.L_20", self.l_20)?;
        check_non_negative("readout.L_J1", self.l_j1)?;
        check_non_negative("readout.L_J2", self.l_j2)?;
        check_positive("readout.C_m", self.c_m)?;
        check_positive("readout.R_m", self.r_m)?;
        check_positive("readout.R_m0", self.r_m0)?;
        check_non_negative("readout.M_m", self.m_m)?;
        let d = self.derived(qubit_l);
        if !(d.l_1 > 0.0 && d.l_2 > 0.0) {
            return Err(Error::config(
                "readout",
                "both branch inductances L_1, L_2 must be positive",
            ));
        }
        if d.k_dc2 >= 1.0 || d.k_par2 >= 1.0 {
            return Err(Error::config(
                "readout.M_m",
                format!("coupling too strong: k_dc² = {:.3}, k_∥² = {:.3}", d.k_dc2, d.k_par2),
            ));
        }
        Ok(())
    }
}

/// Real part of the readout-circuit admittance seen by the qubit loop.
///
/// Written with ΔL² in the numerator so the balanced bridge (ΔL = 0) and
/// M_m = 0 give exactly zero rather than a division by zero.
pub fn readout_admittance_real(p: &ReadoutCircuitParams, qubit_l: f64, omega: f64) -> f64 {
    let w2 = omega * omega;
    let d = p.derived(qubit_l);
    let (r_eq, _, inv_w2_ceq) = shunted_rc(w2, p.c_m, p.r_m, p.r_m0);
    let one_k = 1.0 - d.k_dc2;
    // F_m·ΔL²·M_m²
    let f_scaled = r_eq * qubit_l * qubit_l * (2.0 * d.l_dc).powi(2) * one_k * one_k;
    let bracket = d.l_par * (1.0 - d.k_par2) / one_k - inv_w2_ceq;
    let g = bracket * bracket / (r_eq * r_eq);
    d.delta_l * d.delta_l * p.m_m * p.m_m / (f_scaled * (1.0 + g * w2))
}

/// Thermal factor ħω[1 + coth(ħω/2k_BT)] in joules, finite at ω = 0.
pub fn thermal_factor(omega: f64, temperature: f64) -> f64 {
    let e = HBAR * omega;
    if temperature == 0.0 {
        return if omega > 0.0 { 2.0 * e } else { 0.0 };
    }
    let kt = BOLTZMANN * temperature;
    let u = e / (2.0 * kt);
    if u.abs() < 1e-6 {
        2.0 * kt * (1.0 + u + u * u / 3.0)
    } else {
        // 1 + coth u = −2 / expm1(−2u)
        -2.0 * e / (-2.0 * u).exp_m1()
    }
}

impl BathModel {
    /// Reference circuits at 30 mK, coupled to a loop of `qubit_l`.
    pub fn reference_device(qubit_l: f64) -> Self {
        BathModel {
            control: ControlCircuitParams::reference_device(),
            readout: ReadoutCircuitParams::reference_device(),
            qubit_l,
            temperature: 0.03,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("squid.L", self.qubit_l)?;
        self.control.validate(self.qubit_l)?;
        self.readout.validate(self.qubit_l)?;
        check_non_negative("run.temperature", self.temperature)
    }

    pub fn control_admittance(&self, omega: f64) -> f64 {
        control_admittance_real(&self.control, self.qubit_l, omega)
    }

    pub fn readout_admittance(&self, omega: f64) -> f64 {
        readout_admittance_real(&self.readout, self.qubit_l, omega)
    }

    /// Y_R(ω) = Y_xR(ω) + Y_mR(ω).
    pub fn admittance(&self, omega: f64) -> f64 {
        self.control_admittance(omega) + self.readout_admittance(omega)
    }

    pub fn balanced_bridge(&self) -> bool {
        self.readout.is_balanced_bridge()
    }

    /// Control-circuit contribution J_x(ω).
    pub fn spectral_density_control(&self, omega: f64) -> f64 {
        thermal_factor(omega, self.temperature) * self.control_admittance(omega)
    }

    /// Readout-circuit contribution J_m(ω).
    pub fn spectral_density_readout(&self, omega: f64) -> f64 {
        thermal_factor(omega, self.temperature) * self.readout_admittance(omega)
    }

    /// J(ω) = ħω Y_R(ω)[1 + coth(ħω/2k_BT)].
    pub fn spectral_density(&self, omega: f64) -> f64 {
        thermal_factor(omega, self.temperature) * self.admittance(omega)
    }

    /// J_ς(ω) = Φ0² J(ω).
    pub fn j_varsigma(&self, omega: f64) -> f64 {
        FLUX_QUANTUM * FLUX_QUANTUM * self.spectral_density(omega)
    }
}

/// Frequency of the global maximum of `f` on [lo, hi] (rad/s): a logarithmic
/// scan with `samples` points followed by golden-section refinement.
pub fn locate_peak(f: impl Fn(f64) -> f64, lo: f64, hi: f64, samples: usize) -> f64 {
    assert!(lo > 0.0 && hi > lo && samples >= 3);
    let ratio = (hi / lo).ln() / (samples - 1) as f64;
    let at = |k: usize| lo * (ratio * k as f64).exp();
    let best = (0..samples).max_by(|&a, &b| f(at(a)).total_cmp(&f(at(b)))).unwrap();
    let (mut a, mut b) = (at(best.saturating_sub(1)), at((best + 1).min(samples - 1)));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    for _ in 0..200 {
        if (b - a) <= 1e-12 * b {
            break;
        }
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - inv_phi * (b - a);
        d = a + inv_phi * (b - a);
    }
    0.5 * (a + b)
}
