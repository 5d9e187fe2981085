// Copyright 2026 fluxsim contributors
// SPDX-License-Identifier: Apache-2.0

//! Plain-text run configuration.
//!
//! The format is a list of `[section]` headers followed by `key = value`
//! lines; `#` starts a comment. Dimensional values take a unit suffix
//! (`205 pH`, `32.5 fF`, `70 ohm`, `30 mK`, `15 us`, `10 GHz`); a bare number
//! is read in SI base units. Lists are comma separated, and sweep values may
//! also be written `linspace(a, b, n)` or `logspace(a, b, n)`.
//!
//! ```text
//! [squid]
//! L = 205 pH
//! C = 32.5 fF
//!
//! [run]
//! temperature = 30 mK
//! n_levels = 4
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::bath::{BathModel, ControlCircuitParams, ReadoutCircuitParams};
use crate::liouville::RelaxationMethod;
use crate::qubit_model::{EigenSolver, GridSpec, SolverOptions, SquidParams};
use crate::units::{FEMTO, MICRO, MILLI, PICO};
use crate::{Error, Result};

/// Drive amplitudes of the amplitude table.
pub const TABLE_AMPLITUDES: [f64; 7] = [1e-7, 5e-7, 1e-6, 5e-6, 1e-5, 5e-5, 1e-4];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DriveFrequency {
    /// ω_21 of the solved spectrum.
    Resonant,
    /// Angular frequency in units of ω_LC.
    Reduced(f64),
    /// Angular frequency in rad/s.
    Angular(f64),
}

impl DriveFrequency {
    /// Angular frequency in units of ω_LC given ω_21 and ω_LC.
    pub fn reduced(&self, omega_21: f64, omega_lc: f64) -> f64 {
        match *self {
            DriveFrequency::Resonant => omega_21,
            DriveFrequency::Reduced(w) => w,
            DriveFrequency::Angular(w) => w / omega_lc,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriveSettings {
    /// φ_μ in units of Φ0.
    pub amplitude: f64,
    pub frequency: DriveFrequency,
    pub phase: f64,
    /// Amplitudes of the amplitude-table experiment.
    pub table_amplitudes: Vec<f64>,
}

impl Default for DriveSettings {
    fn default() -> Self {
        DriveSettings {
            amplitude: 0.0,
            frequency: DriveFrequency::Resonant,
            phase: 0.0,
            table_amplitudes: TABLE_AMPLITUDES.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub temperature: f64,
    pub n_levels: usize,
    /// Simulated time in μs; `None` picks `decay_multiple` times the longest
    /// closed-form characteristic time.
    pub t_final_us: Option<f64>,
    pub decay_multiple: f64,
    /// Time steps per drive period (per 2π/ω_21 without drive).
    pub steps_per_period: usize,
    /// Steps between recorded samples; `None` chooses automatically.
    pub record_every: Option<usize>,
    pub relaxation: RelaxationMethod,
    pub seed: u64,
    /// Flux biases of the spectrum experiment (Φ0).
    pub x_e_values: Vec<f64>,
    /// Frequency grid of the bath experiment, in units of ω_LC.
    pub omega_min: f64,
    pub omega_max: f64,
    pub omega_points: usize,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            temperature: 0.03,
            n_levels: 4,
            t_final_us: None,
            decay_multiple: 5.0,
            steps_per_period: 200,
            record_every: None,
            relaxation: RelaxationMethod::Pade,
            seed: 0,
            x_e_values: vec![0.4991],
            omega_min: 0.0,
            omega_max: 5.0,
            omega_points: 5001,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SweepParameter {
    MX,
    MM,
    LJ1,
    LJ2,
    L10,
    L20,
    CM,
    RM,
    RM0,
    LX,
    CX,
    RX,
    RX0,
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dimension {
    Inductance,
    Capacitance,
    Resistance,
    Temperature,
    Time,
}

impl SweepParameter {
    pub const ALL: [SweepParameter; 14] = [
        SweepParameter::MX,
        SweepParameter::MM,
        SweepParameter::LJ1,
        SweepParameter::LJ2,
        SweepParameter::L10,
        SweepParameter::L20,
        SweepParameter::CM,
        SweepParameter::RM,
        SweepParameter::RM0,
        SweepParameter::LX,
        SweepParameter::CX,
        SweepParameter::RX,
        SweepParameter::RX0,
        SweepParameter::T,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::MX => "M_x",
            SweepParameter::MM => "M_m",
            SweepParameter::LJ1 => "L_J1",
            SweepParameter::LJ2 => "L_J2",
            SweepParameter::L10 => "L_10",
            SweepParameter::L20 => "L_20",
            SweepParameter::CM => "C_m",
            SweepParameter::RM => "R_m",
            SweepParameter::RM0 => "R_m0",
            SweepParameter::LX => "L_x",
            SweepParameter::CX => "C_x",
            SweepParameter::RX => "R_x",
            SweepParameter::RX0 => "R_x0",
            SweepParameter::T => "T",
        }
    }

    /// SI unit of the swept value, used in CSV headers.
    pub fn unit(&self) -> &'static str {
        match self.dimension() {
            Dimension::Inductance => "H",
            Dimension::Capacitance => "F",
            Dimension::Resistance => "ohm",
            Dimension::Temperature => "K",
            Dimension::Time => "s",
        }
    }

    fn dimension(&self) -> Dimension {
        use SweepParameter::*;
        match self {
            MX | MM | LJ1 | LJ2 | L10 | L20 | LX => Dimension::Inductance,
            CM | CX => Dimension::Capacitance,
            RM | RM0 | RX | RX0 => Dimension::Resistance,
            T => Dimension::Temperature,
        }
    }

    /// Copy of `bath` with this parameter set to `value` (SI).
    pub fn apply(&self, bath: &BathModel, value: f64) -> BathModel {
        let mut b = *bath;
        match self {
            SweepParameter::MX => b.control.m_x = value,
            SweepParameter::MM => b.readout.m_m = value,
            SweepParameter::LJ1 => b.readout.l_j1 = value,
            SweepParameter::LJ2 => b.readout.l_j2 = value,
            SweepParameter::L10 => b.readout.l_10 = value,
            SweepParameter::L20 => b.readout.l_20 = value,
            SweepParameter::CM => b.readout.c_m = value,
            SweepParameter::RM => b.readout.r_m = value,
            SweepParameter::RM0 => b.readout.r_m0 = value,
            SweepParameter::LX => b.control.l_x = value,
            SweepParameter::CX => b.control.c_x = value,
            SweepParameter::RX => b.control.r_x = value,
            SweepParameter::RX0 => b.control.r_x0 = value,
            SweepParameter::T => b.temperature = value,
        }
        b
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParameter {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        SweepParameter::ALL
            .iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .copied()
            .ok_or_else(|| {
                let names: Vec<&str> = SweepParameter::ALL.iter().map(|p| p.name()).collect();
                format!("unknown sweep parameter '{s}' (expected one of {})", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Quantity {
    T1,
    T2,
    TPhi,
    T1Driven,
    T22Driven,
}

impl Quantity {
    pub const ALL: [Quantity; 5] = [
        Quantity::T1,
        Quantity::T2,
        Quantity::TPhi,
        Quantity::T1Driven,
        Quantity::T22Driven,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Quantity::T1 => "T1",
            Quantity::T2 => "T2",
            Quantity::TPhi => "T_phi",
            Quantity::T1Driven => "T1_driven",
            Quantity::T22Driven => "T22_driven",
        }
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Quantity::ALL
            .iter()
            .find(|q| q.name().eq_ignore_ascii_case(s))
            .copied()
            .ok_or_else(|| format!("unknown quantity '{s}' (expected T1, T2, T_phi, T1_driven or T22_driven)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMethod {
    /// Closed-form two-level times at every point.
    Analytic,
    /// Full propagation and fits at every point.
    Simulate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    /// Swept values in SI units.
    pub values: Vec<f64>,
    pub quantities: Vec<Quantity>,
    pub method: SweepMethod,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub squid: SquidParams,
    pub grid: GridSpec,
    pub solver: SolverOptions,
    pub control: ControlCircuitParams,
    pub readout: ReadoutCircuitParams,
    pub run: RunSettings,
    pub drive: DriveSettings,
    pub sweep: Option<SweepSpec>,
}

impl RunConfig {
    /// The reference device at 30 mK with default numerics.
    pub fn reference() -> Self {
        let squid = SquidParams::reference_device();
        RunConfig {
            grid: GridSpec::default_for(&squid),
            squid,
            solver: SolverOptions::default(),
            control: ControlCircuitParams::reference_device(),
            readout: ReadoutCircuitParams::reference_device(),
            run: RunSettings::default(),
            drive: DriveSettings::default(),
            sweep: None,
        }
    }

    pub fn bath(&self) -> BathModel {
        BathModel {
            control: self.control,
            readout: self.readout,
            qubit_l: self.squid.l,
            temperature: self.run.temperature,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.squid.validate()?;
        self.grid.validate()?;
        self.bath().validate()?;
        let r = &self.run;
        if !(2..=8).contains(&r.n_levels) {
            return Err(Error::config(
                "run.n_levels",
                format!("must lie in 2..=8, got {}", r.n_levels),
            ));
        }
        if let Some(t) = r.t_final_us {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::config("run.t_final", format!("must be positive, got {t} us")));
            }
        }
        if !(r.decay_multiple > 0.0) {
            return Err(Error::config("run.decay_multiple", "must be positive"));
        }
        if r.steps_per_period < 4 {
            return Err(Error::config("run.steps_per_period", "must be at least 4"));
        }
        if r.record_every == Some(0) {
            return Err(Error::config("run.record_every", "must be at least 1"));
        }
        if !(r.omega_max > r.omega_min) || r.omega_points < 2 {
            return Err(Error::config(
                "run.omega_points",
                "frequency grid needs omega_max > omega_min and at least 2 points",
            ));
        }
        let d = &self.drive;
        if !(d.amplitude >= 0.0 && d.amplitude.is_finite()) {
            return Err(Error::config(
                "drive.amplitude",
                format!("must be non-negative, got {}", d.amplitude),
            ));
        }
        if d.table_amplitudes.iter().any(|a| !(*a > 0.0)) {
            return Err(Error::config("drive.table_amplitudes", "amplitudes must be positive"));
        }
        match d.frequency {
            DriveFrequency::Reduced(w) | DriveFrequency::Angular(w) if !(w > 0.0 && w.is_finite()) => {
                return Err(Error::config("drive.frequency", format!("must be positive, got {w}")));
            }
            _ => {}
        }
        if let Some(s) = &self.sweep {
            if s.values.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                return Err(Error::config("sweep.values", "swept values must be positive"));
            }
            if s.quantities.is_empty() {
                return Err(Error::config("sweep.quantities", "at least one quantity is required"));
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::config("--config", format!("{}: {e}", path.display())))?;
        text.parse()
    }
}

impl FromStr for RunConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let doc = Document::parse(text)?;
        let mut cfg = RunConfig::reference();
        let mut grid_keys = BTreeMap::new();

        for (key, value) in doc.section("squid") {
            let p = format!("squid.{key}");
            match key.as_str() {
                "L" => cfg.squid.l = quantity(&p, value, Dimension::Inductance)?,
                "C" => cfg.squid.c = quantity(&p, value, Dimension::Capacitance)?,
                "g" => cfg.squid.g = number(&p, value)?,
                "beta_L" => cfg.squid.beta_l = number(&p, value)?,
                "delta_beta_L" => cfg.squid.delta_beta_l = number(&p, value)?,
                "x_e" => cfg.squid.x_e = number(&p, value)?,
                "y_e" => cfg.squid.y_e = number(&p, value)?,
                _ => return Err(unknown(&p)),
            }
        }
        for (key, value) in doc.section("grid") {
            let p = format!("grid.{key}");
            match key.as_str() {
                "n_x" | "n_y" | "x_center" | "y_center" | "x_halfwidth" | "y_halfwidth" => {
                    grid_keys.insert(key.clone(), (p, value.clone()));
                }
                "kinetic" => cfg.solver.kinetic = value.parse().map_err(|e: String| Error::config(&p, e))?,
                "solver" => {
                    cfg.solver.solver = match value.as_str() {
                        "auto" => EigenSolver::Auto,
                        "dense" => EigenSolver::Dense,
                        "lanczos" => EigenSolver::Lanczos,
                        _ => {
                            return Err(Error::config(
                                &p,
                                format!("unknown solver '{value}' (expected auto, dense or lanczos)"),
                            ))
                        }
                    }
                }
                "dense_limit" => cfg.solver.dense_limit = count(&p, value)?,
                _ => return Err(unknown(&p)),
            }
        }
        // the default grid follows the bias point
        let mut grid = GridSpec::default_for(&cfg.squid);
        for (key, (p, value)) in &grid_keys {
            match key.as_str() {
                "n_x" => grid.n_x = count(p, value)?,
                "n_y" => grid.n_y = count(p, value)?,
                "x_center" => grid.x_center = number(p, value)?,
                "y_center" => grid.y_center = number(p, value)?,
                "x_halfwidth" => grid.x_halfwidth = number(p, value)?,
                "y_halfwidth" => grid.y_halfwidth = number(p, value)?,
                _ => unreachable!(),
            }
        }
        cfg.grid = grid;

        for (key, value) in doc.section("control") {
            let p = format!("control.{key}");
            let c = &mut cfg.control;
            match key.as_str() {
                "L_x" => c.l_x = quantity(&p, value, Dimension::Inductance)?,
                "C_x" => c.c_x = quantity(&p, value, Dimension::Capacitance)?,
                "R_x" => c.r_x = quantity(&p, value, Dimension::Resistance)?,
                "R_x0" => c.r_x0 = quantity(&p, value, Dimension::Resistance)?,
                "M_x" => c.m_x = quantity(&p, value, Dimension::Inductance)?,
                _ => return Err(unknown(&p)),
            }
        }
        for (key, value) in doc.section("readout") {
            let p = format!("readout.{key}");
            let r = &mut cfg.readout;
            match key.as_str() {
                "L_10" => r.l_10 = quantity(&p, value, Dimension::Inductance)?,
                "L_20" => r.l_20 = quantity(&p, value, Dimension::Inductance)?,
                "L_J1" => r.l_j1 = quantity(&p, value, Dimension::Inductance)?,
                "L_J2" => r.l_j2 = quantity(&p, value, Dimension::Inductance)?,
                "C_m" => r.c_m = quantity(&p, value, Dimension::Capacitance)?,
                "R_m" => r.r_m = quantity(&p, value, Dimension::Resistance)?,
                "R_m0" => r.r_m0 = quantity(&p, value, Dimension::Resistance)?,
                "M_m" => r.m_m = quantity(&p, value, Dimension::Inductance)?,
                _ => return Err(unknown(&p)),
            }
        }
        for (key, value) in doc.section("run") {
            let p = format!("run.{key}");
            let r = &mut cfg.run;
            match key.as_str() {
                "temperature" => r.temperature = quantity(&p, value, Dimension::Temperature)?,
                "n_levels" => r.n_levels = count(&p, value)?,
                "t_final" => r.t_final_us = Some(quantity(&p, value, Dimension::Time)? / MICRO),
                "decay_multiple" => r.decay_multiple = number(&p, value)?,
                "steps_per_period" => r.steps_per_period = count(&p, value)?,
                "record_every" => r.record_every = Some(count(&p, value)?),
                "relaxation" => r.relaxation = value.parse().map_err(|e: String| Error::config(&p, e))?,
                "seed" => {
                    r.seed = value
                        .parse()
                        .map_err(|_| Error::config(&p, format!("'{value}' is not an unsigned integer")))?
                }
                "x_e_values" => r.x_e_values = list(&p, value, None)?,
                "omega_min" => r.omega_min = number(&p, value)?,
                "omega_max" => r.omega_max = number(&p, value)?,
                "omega_points" => r.omega_points = count(&p, value)?,
                _ => return Err(unknown(&p)),
            }
        }
        for (key, value) in doc.section("drive") {
            let p = format!("drive.{key}");
            let d = &mut cfg.drive;
            match key.as_str() {
                "amplitude" => d.amplitude = number(&p, value)?,
                "frequency" => d.frequency = frequency(&p, value)?,
                "phase" => d.phase = number(&p, value)?,
                "table_amplitudes" => d.table_amplitudes = list(&p, value, None)?,
                _ => return Err(unknown(&p)),
            }
        }
        if doc.has_section("sweep") {
            let mut parameter = None;
            let mut raw_values = None;
            let mut quantities = Quantity::ALL.to_vec();
            let mut method = SweepMethod::Analytic;
            for (key, value) in doc.section("sweep") {
                let p = format!("sweep.{key}");
                match key.as_str() {
                    "parameter" => parameter = Some(value.parse::<SweepParameter>().map_err(|e| Error::config(&p, e))?),
                    "values" => raw_values = Some((p, value.clone())),
                    "quantities" => {
                        quantities = value
                            .split(',')
                            .map(|q| q.trim().parse::<Quantity>().map_err(|e| Error::config(&p, e)))
                            .collect::<Result<Vec<_>>>()?;
                    }
                    "method" => {
                        method = match value.as_str() {
                            "analytic" => SweepMethod::Analytic,
                            "simulate" => SweepMethod::Simulate,
                            _ => {
                                return Err(Error::config(
                                    &p,
                                    format!("unknown method '{value}' (expected analytic or simulate)"),
                                ))
                            }
                        }
                    }
                    _ => return Err(unknown(&p)),
                }
            }
            let parameter = parameter.ok_or_else(|| Error::config("sweep.parameter", "missing"))?;
            let (p, raw) = raw_values.ok_or_else(|| Error::config("sweep.values", "missing"))?;
            let values = list(&p, &raw, Some(parameter.dimension()))?;
            cfg.sweep = Some(SweepSpec {
                parameter,
                values,
                quantities,
                method,
            });
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parsed sections in file order; keys are unique within a section.
struct Document {
    sections: Vec<(String, Vec<(String, String)>)>,
}

const SECTIONS: [&str; 7] = ["squid", "grid", "control", "readout", "run", "drive", "sweep"];

impl Document {
    fn parse(text: &str) -> Result<Document> {
        let mut sections: Vec<(String, Vec<(String, String)>)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let at = format!("line {}", lineno + 1);
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| Error::config(&at, format!("malformed section header '{line}'")))?
                    .trim();
                if !SECTIONS.contains(&name) {
                    return Err(Error::config(
                        name,
                        format!("unknown section ({at}; expected one of {})", SECTIONS.join(", ")),
                    ));
                }
                if sections.iter().any(|(s, _)| s == name) {
                    return Err(Error::config(name, format!("section repeated ({at})")));
                }
                sections.push((name.to_string(), Vec::new()));
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::config(&at, format!("expected 'key = value', found '{line}'")))?;
            let (key, value) = (key.trim(), value.trim());
            let (section, entries) = sections
                .last_mut()
                .ok_or_else(|| Error::config(key, format!("key outside any section ({at})")))?;
            if entries.iter().any(|(k, _)| k == key) {
                return Err(Error::config(
                    format!("{section}.{key}"),
                    format!("key repeated ({at})"),
                ));
            }
            if value.is_empty() {
                return Err(Error::config(format!("{section}.{key}"), "empty value"));
            }
            entries.push((key.to_string(), value.to_string()));
        }
        Ok(Document { sections })
    }

    fn has_section(&self, name: &str) -> bool {
        self.sections.iter().any(|(s, _)| s == name)
    }

    fn section<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a (String, String)> + 'a {
        self.sections
            .iter()
            .filter(move |(s, _)| s == name)
            .flat_map(|(_, entries)| entries.iter())
    }
}

fn unknown(path: &str) -> Error {
    Error::config(path, "unknown key")
}

fn number(path: &str, value: &str) -> Result<f64> {
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|_| Error::config(path, format!("'{value}' is not a number")))?;
    if !v.is_finite() {
        return Err(Error::config(path, format!("'{value}' is not finite")));
    }
    Ok(v)
}

fn count(path: &str, value: &str) -> Result<usize> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::config(path, format!("'{value}' is not a non-negative integer")))
}

/// Splits "205 pH" or "205pH" into the number and its suffix.
fn split_unit(value: &str) -> (&str, &str) {
    let v = value.trim();
    let idx = v
        .char_indices()
        .find(|&(i, c)| {
            c.is_alphabetic() && c != 'e' && c != 'E'
                || (c == 'e' || c == 'E')
                    && !v[i + 1..].starts_with(|d: char| d.is_ascii_digit() || d == '-' || d == '+')
        })
        .map(|(i, _)| i)
        .unwrap_or(v.len());
    (v[..idx].trim(), v[idx..].trim())
}

fn quantity(path: &str, value: &str, dim: Dimension) -> Result<f64> {
    let (num, unit) = split_unit(value);
    let x = number(path, num)?;
    let scale = match (dim, unit) {
        (_, "") => 1.0,
        (Dimension::Inductance, "H") => 1.0,
        (Dimension::Inductance, "nH") => 1e-9,
        (Dimension::Inductance, "pH") => PICO,
        (Dimension::Capacitance, "F") => 1.0,
        (Dimension::Capacitance, "nF") => 1e-9,
        (Dimension::Capacitance, "pF") => PICO,
        (Dimension::Capacitance, "fF") => FEMTO,
        (Dimension::Resistance, "ohm" | "Ohm" | "Ω") => 1.0,
        (Dimension::Resistance, "kohm" | "kOhm" | "kΩ") => 1e3,
        (Dimension::Temperature, "K") => 1.0,
        (Dimension::Temperature, "mK") => MILLI,
        (Dimension::Time, "s") => 1.0,
        (Dimension::Time, "ms") => MILLI,
        (Dimension::Time, "us" | "μs") => MICRO,
        (Dimension::Time, "ns") => 1e-9,
        _ => {
            return Err(Error::config(
                path,
                format!("unit '{unit}' does not fit a {dim:?} value"),
            ))
        }
    };
    Ok(x * scale)
}

fn frequency(path: &str, value: &str) -> Result<DriveFrequency> {
    if value.eq_ignore_ascii_case("resonant") {
        return Ok(DriveFrequency::Resonant);
    }
    let (num, unit) = split_unit(value);
    let x = number(path, num)?;
    let two_pi = 2.0 * std::f64::consts::PI;
    Ok(match unit {
        "" => DriveFrequency::Reduced(x),
        "GHz" => DriveFrequency::Angular(two_pi * x * 1e9),
        "MHz" => DriveFrequency::Angular(two_pi * x * 1e6),
        "Hz" => DriveFrequency::Angular(two_pi * x),
        "rad/s" => DriveFrequency::Angular(x),
        _ => return Err(Error::config(path, format!("unit '{unit}' does not fit a frequency"))),
    })
}

fn scalar(path: &str, value: &str, dim: Option<Dimension>) -> Result<f64> {
    match dim {
        Some(d) => quantity(path, value, d),
        None => number(path, value),
    }
}

fn list(path: &str, value: &str, dim: Option<Dimension>) -> Result<Vec<f64>> {
    let v = value.trim();
    for (name, log) in [("linspace", false), ("logspace", true)] {
        if let Some(args) = v.strip_prefix(name) {
            let inner = args
                .trim()
                .strip_prefix('(')
                .and_then(|a| a.strip_suffix(')'))
                .ok_or_else(|| Error::config(path, format!("malformed {name}(start, stop, points)")))?;
            let parts: Vec<&str> = inner.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::config(path, format!("{name} takes start, stop, points")));
            }
            let a = scalar(path, parts[0], dim)?;
            let b = scalar(path, parts[1], dim)?;
            let n = count(path, parts[2])?;
            if n < 2 {
                return Err(Error::config(path, format!("{name} needs at least 2 points")));
            }
            if log && !(a > 0.0 && b > 0.0) {
                return Err(Error::config(path, "logspace bounds must be positive"));
            }
            return Ok((0..n)
                .map(|k| {
                    let f = k as f64 / (n - 1) as f64;
                    if log {
                        a * (b / a).powf(f)
                    } else {
                        a + (b - a) * f
                    }
                })
                .collect());
        }
    }
    if v.eq_ignore_ascii_case("none") {
        return Ok(Vec::new());
    }
    v.split(',').map(|item| scalar(path, item, dim)).collect()
}
