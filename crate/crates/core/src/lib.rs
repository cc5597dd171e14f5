//! Linear ion chains in a static axial magnetic-field gradient.
//!
//! The crate covers the whole pipeline: trap configuration
//! ([`config`]), equilibrium positions and axial normal modes ([`chain`]),
//! gradient-induced spin-spin coupling and effective Lamb-Dicke parameters
//! ([`coupling`], [`spectrum`]), exact state-vector dynamics of the qubit
//! register ([`spin`]), and a small pulse-program language that drives it
//! ([`program`]).

pub mod chain;
pub mod config;
pub mod constants;
pub mod coupling;
pub mod export;
pub mod linalg;
pub mod program;
pub mod spectrum;
pub mod spin;
pub mod units;

pub use chain::{ChainError, ChainSolution};
pub use config::{ConfigError, DriveWavevector, FieldProfile, Species, TrapConfig};
pub use coupling::{CouplingError, CouplingReport};
pub use linalg::Matrix;
pub use spin::{PulseSpec, SpinError, SpinHamiltonian, SpinState};
