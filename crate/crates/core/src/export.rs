//! JSON and CSV views of chain and coupling results.
//!
//! Frequencies are written as ordinary frequencies in Hz. Numbers are
//! rounded to 12 significant digits so that output files diff cleanly.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::chain::{ChainSolution, SIGN_CONVENTION};
use crate::coupling::CouplingReport;
use crate::linalg::Matrix;

/// `x` with 12 significant digits, in exponent notation.
pub fn fmt12(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn round12(x: f64) -> f64 {
    fmt12(x).parse().expect("formatted float parses")
}

fn round_vec(v: &[f64]) -> Vec<f64> {
    v.iter().copied().map(round12).collect()
}

fn round_rows(m: &Matrix) -> Vec<Vec<f64>> {
    m.to_rows().iter().map(|r| round_vec(r)).collect()
}

fn hz(v: &[f64]) -> Vec<f64> {
    v.iter().map(|w| w / TAU).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainJson {
    pub ion_count: usize,
    pub length_scale_m: f64,
    pub positions_m: Vec<f64>,
    pub positions_dimensionless: Vec<f64>,
    pub min_spacing_m: Option<f64>,
    /// λ_j = ν_j/ν₁.
    pub mode_frequency_ratios: Vec<f64>,
    pub mode_frequencies_hz: Vec<f64>,
    pub ground_state_extents_m: Vec<f64>,
    /// Row j is mode j; column n is ion n.
    pub mode_matrix: Vec<Vec<f64>>,
    pub dynamical_matrix: Vec<Vec<f64>>,
    pub sign_convention: String,
    pub warnings: Vec<String>,
}

impl From<&ChainSolution> for ChainJson {
    fn from(c: &ChainSolution) -> Self {
        ChainJson {
            ion_count: c.ion_count(),
            length_scale_m: round12(c.length_scale),
            positions_m: round_vec(&c.positions()),
            positions_dimensionless: round_vec(&c.positions_dimensionless),
            min_spacing_m: c.min_spacing().map(round12),
            mode_frequency_ratios: c.mode_eigenvalues.iter().map(|l2| round12(l2.sqrt())).collect(),
            mode_frequencies_hz: round_vec(&hz(&c.mode_frequencies)),
            ground_state_extents_m: round_vec(&c.ground_state_extents),
            mode_matrix: round_rows(&c.mode_matrix),
            dynamical_matrix: round_rows(&c.dynamical_matrix),
            sign_convention: SIGN_CONVENTION.to_string(),
            warnings: c.warnings.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityJson {
    pub epsilon: f64,
    pub threshold: f64,
    pub harmonic_approximation_valid: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingJson {
    pub ion_count: usize,
    /// (∂ω_n/∂z)/2π, Hz/m.
    pub omega_gradients_hz_per_m: Vec<f64>,
    pub qubit_frequencies_hz: Vec<f64>,
    pub shifts_hz: Vec<f64>,
    pub j_matrix_hz: Vec<Vec<f64>>,
    pub max_j_hz: f64,
    pub approx_j_hz: Option<f64>,
    /// [mode][ion]
    pub epsilon_matrix: Vec<Vec<f64>>,
    pub eta_bare: Vec<f64>,
    /// [mode][ion]
    pub eta_eff: Vec<Vec<f64>>,
    pub phases_rad: Vec<f64>,
    /// [mode][ion]
    pub phases_exact_rad: Vec<Vec<f64>>,
    pub validity: ValidityJson,
    pub sign_convention: String,
    pub notes: Vec<String>,
}

impl From<&CouplingReport> for CouplingJson {
    fn from(r: &CouplingReport) -> Self {
        let j_hz = Matrix::from_fn(r.j_matrix.rows(), r.j_matrix.cols(), |a, b| r.j_matrix[(a, b)] / TAU);
        CouplingJson {
            ion_count: r.qubit_frequencies.len(),
            omega_gradients_hz_per_m: round_vec(&hz(&r.omega_gradients)),
            qubit_frequencies_hz: round_vec(&hz(&r.qubit_frequencies)),
            shifts_hz: round_vec(&hz(&r.shifts)),
            j_matrix_hz: round_rows(&j_hz),
            max_j_hz: round12(r.max_j() / TAU),
            approx_j_hz: r.approx_j.map(|j| round12(j / TAU)),
            epsilon_matrix: round_rows(&r.epsilon_matrix),
            eta_bare: round_vec(&r.eta_bare),
            eta_eff: round_rows(&r.eta_eff),
            phases_rad: round_vec(&r.phases),
            phases_exact_rad: round_rows(&r.phases_exact),
            validity: ValidityJson {
                epsilon: round12(r.validity),
                threshold: r.validity_threshold,
                harmonic_approximation_valid: r.harmonic_approximation_valid,
            },
            sign_convention: r.sign_convention.clone(),
            notes: r.notes.clone(),
        }
    }
}

/// CSV with a header row `<corner>,1,2,…` and one labelled row per matrix
/// row; entries scaled by `scale`.
pub fn matrix_csv(m: &Matrix, corner: &str, scale: f64) -> String {
    let mut out = String::from(corner);
    for c in 1..=m.cols() {
        out.push_str(&format!(",{c}"));
    }
    out.push('\n');
    for r in 0..m.rows() {
        out.push_str(&(r + 1).to_string());
        for x in m.row(r) {
            out.push(',');
            out.push_str(&fmt12(x * scale));
        }
        out.push('\n');
    }
    out
}
