//! Line-oriented pulse-program language (`.pp` files).
//!
//! ```text
//! # CNOT by conditional resonance
//! ions 2
//! pulse ion=2 rabi=4Hz detune=-19.3Hz phase=0 area=1pi
//! delay 10ms
//! measure z all
//! log sz 1,2
//! ```
//!
//! Frequencies are ordinary (Hz). `detune` is measured from the target's
//! shifted carrier ω̃_j = ω_j + Δ_j. A pulse gives exactly one of `area`
//! (multiples of π) or `dur`. The grammar is in `docs/pulse-program.ebnf`.

mod interpret;
mod parser;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spin::Pauli;

pub use interpret::{interpret, LogEntry, MeasurementRecord, RunError, RunRecord};
pub use parser::parse;

/// 1-based line and column of a token; `len` counts characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub line: usize,
    pub column: usize,
    pub len: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    SyntaxError,
    UnknownKeyword,
    DuplicateField,
    MissingField,
    ConflictingFields,
    MissingHeader,
    EmptyProgram,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: Span,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum IonSet {
    All,
    /// 1-based ion indices in the order written.
    List(Vec<usize>),
}

impl IonSet {
    /// 0-based indices for an `n`-ion register.
    pub fn resolve(&self, n: usize) -> Vec<usize> {
        match self {
            IonSet::All => (0..n).collect(),
            IonSet::List(v) => v.iter().map(|i| i - 1).collect(),
        }
    }
}

impl fmt::Display for IonSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IonSet::All => f.write_str("all"),
            IonSet::List(v) => {
                let parts: Vec<String> = v.iter().map(|i| i.to_string()).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PulseLength {
    /// Rotation angle in units of π.
    Area(f64),
    /// Seconds.
    Duration(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Instruction {
    Pulse {
        /// 1-based.
        ion: usize,
        /// Ω_R/2π, Hz.
        rabi_hz: f64,
        /// (ω − ω̃_j)/2π, Hz.
        detune_hz: f64,
        /// rad
        phase: f64,
        length: PulseLength,
    },
    Delay {
        duration: f64,
    },
    MeasureZ {
        ions: IonSet,
    },
    Log {
        observable: Pauli,
        ions: IonSet,
    },
}

impl Instruction {
    /// Pulse duration in seconds; area pulses take area·π/Ω_R.
    pub fn pulse_duration(rabi_hz: f64, length: PulseLength) -> f64 {
        match length {
            PulseLength::Duration(d) => d,
            PulseLength::Area(a) => a * std::f64::consts::PI / (std::f64::consts::TAU * rabi_hz),
        }
    }
}

fn pauli_name(p: Pauli) -> &'static str {
    match p {
        Pauli::X => "sx",
        Pauli::Y => "sy",
        Pauli::Z => "sz",
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Pulse { ion, rabi_hz, detune_hz, phase, length } => {
                write!(f, "pulse ion={ion} rabi={rabi_hz}Hz detune={detune_hz}Hz phase={phase}rad ")?;
                match length {
                    PulseLength::Area(a) => write!(f, "area={a}pi"),
                    PulseLength::Duration(d) => write!(f, "dur={d}s"),
                }
            }
            Instruction::Delay { duration } => write!(f, "delay {duration}s"),
            Instruction::MeasureZ { ions } => write!(f, "measure z {ions}"),
            Instruction::Log { observable, ions } => write!(f, "log {} {ions}", pauli_name(*observable)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseProgram {
    pub ions: usize,
    /// Full-line comments before the first instruction, without the `#`.
    pub comments: Vec<String>,
    pub instructions: Vec<Instruction>,
    /// Span of each instruction's keyword.
    pub spans: Vec<Span>,
}

impl PulseProgram {
    /// Canonical source text; parsing it gives back an equal program.
    pub fn pretty_print(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push('#');
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&format!("ions {}\n", self.ions));
        for ins in &self.instructions {
            out.push_str(&ins.to_string());
            out.push('\n');
        }
        out
    }
}
