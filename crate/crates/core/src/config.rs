//! Species registry, magnetic field profiles, and the validated trap
//! configuration.
//!
//! The on-disk format is strict JSON: unknown keys are rejected and every
//! error names the offending path. Quantities are either strings with a
//! unit (`"100kHz"`) or bare SI numbers. See `docs/trap-config.md`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::constants::{ATOMIC_MASS_UNIT, BOHR_MAGNETON, HBAR};
use crate::units::{parse_quantity, Dimension, UnitError};

pub const MAX_IONS: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Species {
    pub name: String,
    /// kg
    pub mass: f64,
    /// Qubit transition frequency ω₀, rad/s.
    pub qubit_angular_frequency: f64,
    /// Magnetic moment of |0⟩ in units of μ_B.
    pub moment_state0: f64,
    /// Magnetic moment of |1⟩ in units of μ_B.
    pub moment_state1: f64,
}

impl Species {
    /// ¹⁷¹Yb⁺ with |0⟩ = |S½, F=0⟩ (no linear Zeeman shift) and
    /// |1⟩ = |S½, F=1, m_F=1⟩ (shift μ_B·B).
    pub fn yb171() -> Self {
        Species {
            name: "Yb171".into(),
            mass: 171.0 * ATOMIC_MASS_UNIT,
            qubit_angular_frequency: TAU * 12.6e9,
            moment_state0: 0.0,
            moment_state1: 1.0,
        }
    }

    pub fn lookup(name: &str) -> Option<Self> {
        match name {
            "Yb171" => Some(Self::yb171()),
            _ => None,
        }
    }

    /// Differential moment (μ₁ − μ₀)·μ_B in J/T.
    pub fn differential_moment(&self) -> f64 {
        (self.moment_state1 - self.moment_state0) * BOHR_MAGNETON
    }

    /// Qubit frequency shift per tesla, rad/(s·T).
    pub fn zeeman_coefficient(&self) -> f64 {
        self.differential_moment() / HBAR
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("position {z:e} m lies outside the sampled field profile [{lo:e}, {hi:e}] m")]
pub struct OutOfProfileRange {
    pub z: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FieldProfile {
    /// B(z) = B₀ + b·z
    Uniform { b0: f64, gradient: f64 },
    /// B(z) = B₀ + b·z + c·z²
    Quadratic { b0: f64, gradient: f64, curvature: f64 },
    /// Piecewise-linear through `(z, B)` samples, z strictly increasing.
    Sampled { points: Vec<(f64, f64)> },
}

impl FieldProfile {
    pub fn uniform(b0: f64, gradient: f64) -> Self {
        FieldProfile::Uniform { b0, gradient }
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self, FieldProfile::Uniform { .. })
    }

    /// Index of the segment used at `z`: the right-hand one when `z` sits
    /// exactly on an interior sample point, the last one at the right end.
    fn segment(points: &[(f64, f64)], z: f64) -> Result<usize, OutOfProfileRange> {
        let lo = points[0].0;
        let hi = points[points.len() - 1].0;
        if !(lo..=hi).contains(&z) {
            return Err(OutOfProfileRange { z, lo, hi });
        }
        let idx = points.partition_point(|p| p.0 <= z);
        Ok(idx.saturating_sub(1).min(points.len() - 2))
    }

    /// Field magnitude in T.
    pub fn field_at(&self, z: f64) -> Result<f64, OutOfProfileRange> {
        match self {
            FieldProfile::Uniform { b0, gradient } => Ok(b0 + gradient * z),
            FieldProfile::Quadratic { b0, gradient, curvature } => {
                Ok(b0 + gradient * z + curvature * z * z)
            }
            FieldProfile::Sampled { points } => {
                let i = Self::segment(points, z)?;
                let (z0, b0) = points[i];
                let (z1, b1) = points[i + 1];
                Ok(b0 + (b1 - b0) * (z - z0) / (z1 - z0))
            }
        }
    }

    /// ∂B/∂z in T/m.
    pub fn gradient_at(&self, z: f64) -> Result<f64, OutOfProfileRange> {
        match self {
            FieldProfile::Uniform { gradient, .. } => Ok(*gradient),
            FieldProfile::Quadratic { gradient, curvature, .. } => Ok(gradient + 2.0 * curvature * z),
            FieldProfile::Sampled { points } => {
                let i = Self::segment(points, z)?;
                let (z0, b0) = points[i];
                let (z1, b1) = points[i + 1];
                Ok((b1 - b0) / (z1 - z0))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DriveWavevector {
    /// k = ω₀/c
    FromTransitionFrequency,
    /// Explicit k in rad/m.
    Explicit(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrapConfig {
    pub species: Species,
    pub ion_count: usize,
    /// Axial trap frequency ν₁, rad/s.
    pub axial_frequency: f64,
    pub field: FieldProfile,
    pub drive: DriveWavevector,
}

impl TrapConfig {
    pub fn new(species: Species, ion_count: usize, axial_frequency_hz: f64, field: FieldProfile) -> Self {
        TrapConfig {
            species,
            ion_count,
            axial_frequency: TAU * axial_frequency_hz,
            field,
            drive: DriveWavevector::FromTransitionFrequency,
        }
    }

    /// Wave vector of the qubit drive, rad/m.
    pub fn drive_wavevector(&self) -> f64 {
        match self.drive {
            DriveWavevector::FromTransitionFrequency => {
                self.species.qubit_angular_frequency / crate::constants::SPEED_OF_LIGHT
            }
            DriveWavevector::Explicit(k) => k,
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self, ConfigError> {
        let raw: Value = serde_json::from_str(text).map_err(|e| ConfigError::Json(e.to_string()))?;
        validate_config(&raw)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("{0}: missing field")]
    MissingField(String),
    #[error("{0}: unknown key")]
    UnknownKey(String),
    #[error("{path}: out of range ({reason})")]
    OutOfRange { path: String, reason: String },
    #[error("{path}: unknown species `{name}`")]
    UnknownSpecies { path: String, name: String },
    #[error("{path}: expected {expected}")]
    WrongType { path: String, expected: &'static str },
    #[error("{path}: {source}")]
    BadQuantity { path: String, source: UnitError },
    #[error("{path}: expected a {expected} quantity, got {found}")]
    WrongDimension { path: String, expected: Dimension, found: Dimension },
}

impl ConfigError {
    fn range(path: &str, reason: impl Into<String>) -> Self {
        ConfigError::OutOfRange { path: path.to_string(), reason: reason.into() }
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, ConfigError> {
    v.as_object().ok_or(ConfigError::WrongType { path: path.to_string(), expected: "an object" })
}

fn reject_unknown(obj: &Map<String, Value>, path: &str, allowed: &[&str]) -> Result<(), ConfigError> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(ConfigError::UnknownKey(join(path, k))),
        None => Ok(()),
    }
}

fn required<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value, ConfigError> {
    obj.get(key).ok_or_else(|| ConfigError::MissingField(join(path, key)))
}

/// Read a quantity of dimension `dim` from a string-with-unit or bare SI
/// number.
fn quantity(v: &Value, path: &str, dim: Dimension) -> Result<f64, ConfigError> {
    let value = match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| ConfigError::range(path, "not representable"))?,
        Value::String(s) => {
            let (value, found) = parse_quantity(s)
                .map_err(|source| ConfigError::BadQuantity { path: path.to_string(), source })?;
            if found != dim && found != Dimension::Dimensionless {
                return Err(ConfigError::WrongDimension { path: path.to_string(), expected: dim, found });
            }
            value
        }
        _ => return Err(ConfigError::WrongType { path: path.to_string(), expected: "a quantity" }),
    };
    if !value.is_finite() {
        return Err(ConfigError::range(path, "not finite"));
    }
    Ok(value)
}

fn optional_quantity(
    obj: &Map<String, Value>,
    path: &str,
    key: &str,
    dim: Dimension,
    default: f64,
) -> Result<f64, ConfigError> {
    obj.get(key).map_or(Ok(default), |v| quantity(v, &join(path, key), dim))
}

fn parse_species(v: &Value, path: &str) -> Result<Species, ConfigError> {
    match v {
        Value::String(name) => Species::lookup(name)
            .ok_or_else(|| ConfigError::UnknownSpecies { path: path.to_string(), name: name.clone() }),
        Value::Object(obj) => {
            reject_unknown(obj, path, &["name", "mass_u", "qubit_frequency", "mu0", "mu1"])?;
            let name = required(obj, path, "name")?
                .as_str()
                .ok_or(ConfigError::WrongType { path: join(path, "name"), expected: "a string" })?
                .to_string();
            let mass_u = quantity(required(obj, path, "mass_u")?, &join(path, "mass_u"), Dimension::Dimensionless)?;
            let f0 = quantity(
                required(obj, path, "qubit_frequency")?,
                &join(path, "qubit_frequency"),
                Dimension::Frequency,
            )?;
            let mu0 = optional_quantity(obj, path, "mu0", Dimension::Dimensionless, 0.0)?;
            let mu1 = optional_quantity(obj, path, "mu1", Dimension::Dimensionless, 1.0)?;
            if mass_u <= 0.0 {
                return Err(ConfigError::range(&join(path, "mass_u"), "must be > 0"));
            }
            if f0 <= 0.0 {
                return Err(ConfigError::range(&join(path, "qubit_frequency"), "must be > 0"));
            }
            Ok(Species {
                name,
                mass: mass_u * ATOMIC_MASS_UNIT,
                qubit_angular_frequency: TAU * f0,
                moment_state0: mu0,
                moment_state1: mu1,
            })
        }
        _ => Err(ConfigError::WrongType { path: path.to_string(), expected: "a species name or object" }),
    }
}

fn parse_field(v: &Value, path: &str) -> Result<FieldProfile, ConfigError> {
    let obj = as_object(v, path)?;
    reject_unknown(obj, path, &["uniform", "quadratic", "sampled"])?;
    if obj.len() != 1 {
        return Err(ConfigError::range(path, "exactly one of uniform, quadratic, sampled is required"));
    }
    let (kind, body) = obj.iter().next().expect("one entry");
    let p = join(path, kind);
    match kind.as_str() {
        "uniform" => {
            let o = as_object(body, &p)?;
            reject_unknown(o, &p, &["B0", "b"])?;
            Ok(FieldProfile::Uniform {
                b0: optional_quantity(o, &p, "B0", Dimension::MagneticField, 0.0)?,
                gradient: quantity(required(o, &p, "b")?, &join(&p, "b"), Dimension::Gradient)?,
            })
        }
        "quadratic" => {
            let o = as_object(body, &p)?;
            reject_unknown(o, &p, &["B0", "b", "c"])?;
            Ok(FieldProfile::Quadratic {
                b0: optional_quantity(o, &p, "B0", Dimension::MagneticField, 0.0)?,
                gradient: quantity(required(o, &p, "b")?, &join(&p, "b"), Dimension::Gradient)?,
                curvature: quantity(required(o, &p, "c")?, &join(&p, "c"), Dimension::Curvature)?,
            })
        }
        "sampled" => {
            let arr = body
                .as_array()
                .ok_or(ConfigError::WrongType { path: p.clone(), expected: "an array of [z, B] pairs" })?;
            let mut points = Vec::with_capacity(arr.len());
            for (i, item) in arr.iter().enumerate() {
                let ip = format!("{p}[{i}]");
                let pair = item
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or(ConfigError::WrongType { path: ip.clone(), expected: "a [z, B] pair" })?;
                let z = quantity(&pair[0], &format!("{ip}[0]"), Dimension::Length)?;
                let b = quantity(&pair[1], &format!("{ip}[1]"), Dimension::MagneticField)?;
                points.push((z, b));
            }
            if points.len() < 2 {
                return Err(ConfigError::range(&p, "at least 2 points are required"));
            }
            if let Some(i) = points.windows(2).position(|w| w[1].0 <= w[0].0) {
                return Err(ConfigError::range(&format!("{p}[{}]", i + 1), "z must be strictly increasing"));
            }
            Ok(FieldProfile::Sampled { points })
        }
        _ => unreachable!("filtered by reject_unknown"),
    }
}

fn parse_drive(v: &Value, path: &str) -> Result<DriveWavevector, ConfigError> {
    match v {
        Value::String(s) if s == "from_transition_frequency" => Ok(DriveWavevector::FromTransitionFrequency),
        Value::Object(o) => {
            reject_unknown(o, path, &["wavevector"])?;
            let p = join(path, "wavevector");
            let k = quantity(required(o, path, "wavevector")?, &p, Dimension::Dimensionless)?;
            if k < 0.0 {
                return Err(ConfigError::range(&p, "must be >= 0"));
            }
            Ok(DriveWavevector::Explicit(k))
        }
        _ => Err(ConfigError::WrongType {
            path: path.to_string(),
            expected: "\"from_transition_frequency\" or {\"wavevector\": <rad/m>}",
        }),
    }
}

/// Check a parsed config document and build a [`TrapConfig`].
pub fn validate_config(raw: &Value) -> Result<TrapConfig, ConfigError> {
    let obj = as_object(raw, "")?;
    reject_unknown(obj, "", &["species", "N", "nu1", "field", "drive", "comment"])?;

    let species = parse_species(required(obj, "", "species")?, "species")?;

    let n_val = required(obj, "", "N")?;
    let n = n_val
        .as_i64()
        .ok_or(ConfigError::WrongType { path: "N".into(), expected: "an integer" })?;
    if !(1..=MAX_IONS as i64).contains(&n) {
        return Err(ConfigError::range("N", format!("must be in [1, {MAX_IONS}], got {n}")));
    }

    let nu1_hz = quantity(required(obj, "", "nu1")?, "nu1", Dimension::Frequency)?;
    if nu1_hz <= 0.0 {
        return Err(ConfigError::range("nu1", "must be > 0"));
    }

    let field = parse_field(required(obj, "", "field")?, "field")?;
    let drive = obj
        .get("drive")
        .map_or(Ok(DriveWavevector::FromTransitionFrequency), |v| parse_drive(v, "drive"))?;

    Ok(TrapConfig {
        species,
        ion_count: n as usize,
        axial_frequency: TAU * nu1_hz,
        field,
        drive,
    })
}
