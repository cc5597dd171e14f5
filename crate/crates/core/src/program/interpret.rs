use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coupling::CouplingReport;
use crate::spin::{Pauli, PulseSpec, SpinError, SpinHamiltonian, SpinState, StateDump};

use super::{Instruction, PulseProgram, Span};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunError {
    #[error("program declares {program} ions but the trap has {trap}")]
    IonCountMismatch { program: usize, trap: usize },
    #[error("initial state: {0}")]
    Initial(SpinError),
    #[error("{span}: {source}")]
    Instruction { span: Span, source: SpinError },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogEntry {
    pub instruction: usize,
    /// Lab time, s.
    pub time: f64,
    pub observable: Pauli,
    /// 1-based.
    pub ion: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub instruction: usize,
    pub time: f64,
    /// 1-based, in the order the outcome strings list them.
    pub ions: Vec<usize>,
    pub shots: Vec<String>,
    pub histogram: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub initial: String,
    pub seed: u64,
    pub shots_per_measurement: usize,
    pub logs: Vec<LogEntry>,
    pub measurements: Vec<MeasurementRecord>,
    pub final_state: StateDump,
    /// Wall-clock run time, s. Absent when timing is suppressed.
    pub wall_time: Option<f64>,
}

impl RunRecord {
    pub fn without_timing(mut self) -> Self {
        self.wall_time = None;
        self
    }
}

/// Run `program` on the register described by `report`, starting from the
/// basis state `initial`. Measurements sample `shots` outcomes each from a
/// generator seeded with `seed` and leave the state untouched.
pub fn interpret(
    program: &PulseProgram,
    report: &CouplingReport,
    initial: &str,
    seed: u64,
    shots: usize,
) -> Result<RunRecord, RunError> {
    let started = Instant::now();
    let n = report.qubit_frequencies.len();
    if program.ions != n {
        return Err(RunError::IonCountMismatch { program: program.ions, trap: n });
    }
    let h = SpinHamiltonian::from_report(report);
    let mut state = SpinState::initialize(n, initial).map_err(RunError::Initial)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut logs = Vec::new();
    let mut measurements = Vec::new();

    for (idx, (ins, span)) in program.instructions.iter().zip(&program.spans).enumerate() {
        let at = |source| RunError::Instruction { span: *span, source };
        match ins {
            Instruction::Pulse { ion, rabi_hz, detune_hz, phase, length } => {
                let target = ion - 1;
                let pulse = PulseSpec {
                    target,
                    rabi: TAU * rabi_hz,
                    drive_frequency: h.frequencies[target] + TAU * detune_hz,
                    phase: *phase,
                    duration: Instruction::pulse_duration(*rabi_hz, *length),
                };
                state.apply_pulse(&h, &pulse).map_err(at)?;
            }
            Instruction::Delay { duration } => state.free_evolution(&h, *duration).map_err(at)?,
            Instruction::MeasureZ { ions } => {
                let qubits = ions.resolve(n);
                let outcomes = state.sample_shots(&mut rng, shots, &qubits);
                let mut histogram = BTreeMap::new();
                for o in &outcomes {
                    *histogram.entry(o.clone()).or_insert(0) += 1;
                }
                measurements.push(MeasurementRecord {
                    instruction: idx,
                    time: state.time(),
                    ions: qubits.iter().map(|q| q + 1).collect(),
                    shots: outcomes,
                    histogram,
                });
            }
            Instruction::Log { observable, ions } => {
                for q in ions.resolve(n) {
                    logs.push(LogEntry {
                        instruction: idx,
                        time: state.time(),
                        observable: *observable,
                        ion: q + 1,
                        value: state.expectation(*observable, q).map_err(at)?,
                    });
                }
            }
        }
    }

    Ok(RunRecord {
        initial: initial.to_string(),
        seed,
        shots_per_measurement: shots,
        logs,
        measurements,
        final_state: state.dump(),
        wall_time: Some(started.elapsed().as_secs_f64()),
    })
}
