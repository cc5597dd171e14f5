//! First-order microwave line list of a single ion: the shifted carrier and
//! one red and one blue sideband per axial mode, motional ground state.

use serde::{Deserialize, Serialize};

use crate::chain::ChainSolution;
use crate::coupling::CouplingReport;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralLine {
    /// rad/s
    pub frequency: f64,
    /// Frequency relative to the bare qubit frequency ω_j, rad/s.
    pub offset: f64,
    pub amplitude: f64,
    pub label: String,
}

/// Lines for `ion` (0-based), sorted by frequency. The carrier sits at
/// ω_j + Δ_j with unit amplitude; mode n contributes lines at ±ν_n around
/// it with amplitude η′[n][j].
pub fn sideband_spectrum(chain: &ChainSolution, report: &CouplingReport, ion: usize) -> Vec<SpectralLine> {
    let omega = report.qubit_frequencies[ion];
    let shift = report.shifts[ion];
    let line = |offset: f64, amplitude: f64, label: String| SpectralLine {
        frequency: omega + offset,
        offset,
        amplitude,
        label,
    };
    let mut lines = vec![line(shift, 1.0, "carrier".into())];
    for (mode, nu) in chain.mode_frequencies.iter().enumerate() {
        let amplitude = report.eta_eff[(mode, ion)];
        lines.push(line(shift - nu, amplitude, format!("red{}", mode + 1)));
        lines.push(line(shift + nu, amplitude, format!("blue{}", mode + 1)));
    }
    lines.sort_by(|a, b| a.offset.total_cmp(&b.offset));
    lines
}
