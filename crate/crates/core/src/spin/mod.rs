//! Exact state-vector dynamics of the qubit register.
//!
//! Basis index `b` has qubit n (1-based) in |1⟩ iff bit n−1 of `b` is set.
//! σz has eigenvalue +1 on |1⟩ and −1 on |0⟩, and σ⁺ = |1⟩⟨0|.
//!
//! Amplitudes are kept in the lab frame together with the lab clock, since
//! a drive's phase is referenced to absolute time. Free evolution is
//! diagonal; a single-tone RWA pulse on qubit j is block-diagonal over the
//! configurations of the other qubits, and each 2×2 block is an exact Rabi
//! rotation in the drive's rotating frame.

mod oracle;

pub use oracle::{evolve_oracle, DenseMatrix};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coupling::CouplingReport;
use crate::linalg::Matrix;

pub const MAX_QUBITS: usize = 16;
pub const BASIS_CONVENTION: &str =
    "basis index bit n-1 set <=> qubit n in |1>; sigma_z = +1 on |1>, -1 on |0>";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpinError {
    #[error("bad basis label `{0}`: expected one 0/1 character per qubit")]
    BadLabel(String),
    #[error("{0} qubits exceeds the state-vector limit of {MAX_QUBITS}")]
    TooManyQubits(usize),
    #[error("ion {ion} out of range for a {n}-qubit register")]
    BadIon { ion: usize, n: usize },
    #[error("hamiltonian is for {expected} qubits, state has {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("negative duration {0:e} s")]
    NegativeDuration(f64),
    #[error("negative Rabi frequency {0:e} rad/s")]
    NegativeRabi(f64),
    #[error("dense oracle limited to 6 qubits, got {0}")]
    TooLarge(usize),
    #[error("only a single drive tone is supported, got {0}")]
    MultiTone(usize),
}

/// σz eigenvalue of qubit `q` (0-based) in basis state `b`.
#[inline]
pub fn spin_sign(b: usize, q: usize) -> f64 {
    if b >> q & 1 == 1 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinHamiltonian {
    /// ω̃_n = ω_n(z₀,n) + Δ_n, rad/s.
    pub frequencies: Vec<f64>,
    /// J_nl, rad/s, symmetric with zero diagonal.
    pub coupling: Matrix,
}

impl SpinHamiltonian {
    pub fn new(frequencies: Vec<f64>, coupling: Matrix) -> Self {
        assert_eq!(frequencies.len(), coupling.rows());
        SpinHamiltonian { frequencies, coupling }
    }

    /// Carrier frequencies include the gradient shift Δ_j.
    pub fn from_report(report: &CouplingReport) -> Self {
        let frequencies = report
            .qubit_frequencies
            .iter()
            .zip(&report.shifts)
            .map(|(w, d)| w + d)
            .collect();
        SpinHamiltonian::new(frequencies, report.j_matrix.clone())
    }

    pub fn num_qubits(&self) -> usize {
        self.frequencies.len()
    }

    /// E(b)/ħ = ½ Σ ω̃_n s_n − ½ Σ_{n<l} J_nl s_n s_l.
    pub fn energy(&self, b: usize) -> f64 {
        self.energy_excluding(b, usize::MAX)
    }

    /// E(b)/ħ dropping every term that involves qubit `skip`.
    fn energy_excluding(&self, b: usize, skip: usize) -> f64 {
        let n = self.num_qubits();
        let mut e = 0.0;
        for q in 0..n {
            if q == skip {
                continue;
            }
            let sq = spin_sign(b, q);
            e += 0.5 * self.frequencies[q] * sq;
            for l in q + 1..n {
                if l != skip {
                    e -= 0.5 * self.coupling[(q, l)] * sq * spin_sign(b, l);
                }
            }
        }
        e
    }

    /// Resonance frequency of qubit `j` given the other qubits in `b`:
    /// ω̃_j − Σ_{l≠j} J_jl s_l.
    pub fn conditional_frequency(&self, b: usize, j: usize) -> f64 {
        let shift: f64 = (0..self.num_qubits())
            .filter(|&l| l != j)
            .map(|l| self.coupling[(j, l)] * spin_sign(b, l))
            .sum();
        self.frequencies[j] - shift
    }
}

/// A single-tone rectangular drive on one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec {
    /// 0-based.
    pub target: usize,
    /// Ω_R, rad/s.
    pub rabi: f64,
    /// ω, rad/s.
    pub drive_frequency: f64,
    /// φ, rad.
    pub phase: f64,
    /// τ, s.
    pub duration: f64,
}

impl PulseSpec {
    fn validate(&self, n: usize) -> Result<(), SpinError> {
        if self.target >= n {
            return Err(SpinError::BadIon { ion: self.target + 1, n });
        }
        if self.rabi < 0.0 {
            return Err(SpinError::NegativeRabi(self.rabi));
        }
        if self.duration < 0.0 {
            return Err(SpinError::NegativeDuration(self.duration));
        }
        Ok(())
    }
}

/// Rotating-frame propagator exp(−i H τ) for
/// H = ½[[−δ, Ω e^{−iφ}], [Ω e^{iφ}, δ]] in the (|0⟩, |1⟩) basis.
pub(crate) fn rabi_block(rabi: f64, detuning: f64, phase: f64, tau: f64) -> [[Complex64; 2]; 2] {
    let general = rabi.hypot(detuning);
    let x = 0.5 * general * tau;
    let (sin_x, cos_x) = x.sin_cos();
    // sin(x)/Ω' written so that Ω' → 0 stays finite.
    let sinc = if general == 0.0 { 0.5 * tau } else { sin_x / general };
    let i = Complex64::i();
    let diag = detuning * sinc;
    let off = rabi * sinc;
    [
        [Complex64::new(cos_x, diag), -i * off * Complex64::from_polar(1.0, -phase)],
        [-i * off * Complex64::from_polar(1.0, phase), Complex64::new(cos_x, -diag)],
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pauli {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinState {
    amplitudes: Vec<Complex64>,
    num_qubits: usize,
    /// Lab time, s.
    time: f64,
}

/// JSON dump of a state: `(re, im)` pairs plus the basis convention.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDump {
    pub convention: String,
    pub num_qubits: usize,
    pub time: f64,
    pub amplitudes: Vec<(f64, f64)>,
}

impl SpinState {
    /// Basis state from a label such as `"10"`; character k is qubit k+1.
    pub fn initialize(num_qubits: usize, label: &str) -> Result<Self, SpinError> {
        if num_qubits > MAX_QUBITS {
            return Err(SpinError::TooManyQubits(num_qubits));
        }
        if label.chars().count() != num_qubits || num_qubits == 0 {
            return Err(SpinError::BadLabel(label.to_string()));
        }
        let mut index = 0;
        for (q, c) in label.chars().enumerate() {
            match c {
                '0' => {}
                '1' => index |= 1 << q,
                _ => return Err(SpinError::BadLabel(label.to_string())),
            }
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(SpinState { amplitudes, num_qubits, time: 0.0 })
    }

    /// Arbitrary amplitudes, normalised on the way in.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>, time: f64) -> Result<Self, SpinError> {
        let len = amplitudes.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(SpinError::BadLabel(format!("{len} amplitudes")));
        }
        let num_qubits = len.trailing_zeros() as usize;
        if num_qubits > MAX_QUBITS {
            return Err(SpinError::TooManyQubits(num_qubits));
        }
        let mut s = SpinState { amplitudes, num_qubits, time };
        let norm = s.norm();
        s.amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &SpinState) -> f64 {
        assert_eq!(self.amplitudes.len(), other.amplitudes.len());
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm_sqr()
    }

    pub fn label(&self, b: usize) -> String {
        (0..self.num_qubits).map(|q| if b >> q & 1 == 1 { '1' } else { '0' }).collect()
    }

    pub fn dump(&self) -> StateDump {
        StateDump {
            convention: BASIS_CONVENTION.to_string(),
            num_qubits: self.num_qubits,
            time: self.time,
            amplitudes: self.amplitudes.iter().map(|a| (a.re, a.im)).collect(),
        }
    }

    fn check(&self, h: &SpinHamiltonian) -> Result<(), SpinError> {
        if h.num_qubits() != self.num_qubits {
            return Err(SpinError::SizeMismatch { expected: h.num_qubits(), found: self.num_qubits });
        }
        Ok(())
    }

    /// Evolve under the diagonal Hamiltonian for `t` seconds.
    pub fn free_evolution(&mut self, h: &SpinHamiltonian, t: f64) -> Result<(), SpinError> {
        self.check(h)?;
        if t < 0.0 {
            return Err(SpinError::NegativeDuration(t));
        }
        for (b, a) in self.amplitudes.iter_mut().enumerate() {
            *a *= Complex64::from_polar(1.0, -h.energy(b) * t);
        }
        self.time += t;
        Ok(())
    }

    /// Drive qubit `pulse.target` for `pulse.duration` seconds.
    ///
    /// The lab-frame drive is (Ω/2)(e^{i(φ−ωt)} σ⁺ + h.c.). For every
    /// configuration c of the spectators the target sees detuning
    /// δ(c) = ω̃_j − ω − Σ_{l≠j} J_jl s_l(c); spectator-only energy terms
    /// contribute a phase.
    pub fn apply_pulse(&mut self, h: &SpinHamiltonian, pulse: &PulseSpec) -> Result<(), SpinError> {
        self.check(h)?;
        pulse.validate(self.num_qubits)?;
        let j = pulse.target;
        let bit = 1usize << j;
        let tau = pulse.duration;
        let w = pulse.drive_frequency;
        let t0 = self.time;

        // Into the rotating frame at t0 and back out at t0 + τ.
        let into0 = Complex64::from_polar(1.0, -0.5 * w * t0);
        let into1 = into0.conj();
        let out0 = Complex64::from_polar(1.0, 0.5 * w * (t0 + tau));
        let out1 = out0.conj();
        let static_detuning = h.frequencies[j] - w;

        for b0 in (0..self.amplitudes.len()).filter(|b| b & bit == 0) {
            let b1 = b0 | bit;
            let conditional_shift = h.frequencies[j] - h.conditional_frequency(b0, j);
            let delta = static_detuning - conditional_shift;
            let u = rabi_block(pulse.rabi, delta, pulse.phase, tau);
            let spectator = Complex64::from_polar(1.0, -h.energy_excluding(b0, j) * tau);

            let a0 = self.amplitudes[b0] * into0;
            let a1 = self.amplitudes[b1] * into1;
            self.amplitudes[b0] = (u[0][0] * a0 + u[0][1] * a1) * out0 * spectator;
            self.amplitudes[b1] = (u[1][0] * a0 + u[1][1] * a1) * out1 * spectator;
        }
        self.time += tau;
        Ok(())
    }

    /// Instantaneous rotation by `area` about the drive axis: the τ → 0
    /// limit of [`apply_pulse`](Self::apply_pulse) at fixed Ω·τ. The lab
    /// clock does not advance.
    pub fn apply_hard_pulse(
        &mut self,
        target: usize,
        area: f64,
        phase: f64,
        drive_frequency: f64,
    ) -> Result<(), SpinError> {
        if target >= self.num_qubits {
            return Err(SpinError::BadIon { ion: target + 1, n: self.num_qubits });
        }
        let bit = 1usize << target;
        // Rotation in the drive frame, conjugated by the frame phase at the
        // current lab time.
        let u = rabi_block(1.0, 0.0, phase, area);
        let f = Complex64::from_polar(1.0, drive_frequency * self.time);
        let u01 = u[0][1] * f;
        let u10 = u[1][0] * f.conj();
        for b0 in (0..self.amplitudes.len()).filter(|b| b & bit == 0) {
            let b1 = b0 | bit;
            let a0 = self.amplitudes[b0];
            let a1 = self.amplitudes[b1];
            self.amplitudes[b0] = u[0][0] * a0 + u01 * a1;
            self.amplitudes[b1] = u10 * a0 + u[1][1] * a1;
        }
        Ok(())
    }

    /// ⟨σ_α⟩ on qubit `ion` (0-based).
    pub fn expectation(&self, observable: Pauli, ion: usize) -> Result<f64, SpinError> {
        if ion >= self.num_qubits {
            return Err(SpinError::BadIon { ion: ion + 1, n: self.num_qubits });
        }
        let bit = 1usize << ion;
        let value = match observable {
            Pauli::Z => self
                .amplitudes
                .iter()
                .enumerate()
                .map(|(b, a)| spin_sign(b, ion) * a.norm_sqr())
                .sum(),
            Pauli::X | Pauli::Y => {
                // Σ a0* a1 over blocks; ⟨σx⟩ = 2 Re, ⟨σy⟩ = −2 Im.
                let c: Complex64 = (0..self.amplitudes.len())
                    .filter(|b| b & bit == 0)
                    .map(|b0| self.amplitudes[b0].conj() * self.amplitudes[b0 | bit])
                    .sum();
                if observable == Pauli::X {
                    2.0 * c.re
                } else {
                    -2.0 * c.im
                }
            }
        };
        Ok(value.clamp(-1.0, 1.0))
    }

    /// One computational-basis outcome drawn with the Born rule.
    pub fn sample_measurement(&self, seed: u64) -> String {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let all: Vec<usize> = (0..self.num_qubits).collect();
        self.sample_shots(&mut rng, 1, &all).pop().expect("one shot")
    }

    /// `shots` outcomes restricted to `ions` (0-based), without collapsing
    /// the state. Each outcome string lists the chosen ions in order.
    pub fn sample_shots<R: Rng>(&self, rng: &mut R, shots: usize, ions: &[usize]) -> Vec<String> {
        let mut cumulative = Vec::with_capacity(self.amplitudes.len());
        let mut acc = 0.0;
        for a in &self.amplitudes {
            acc += a.norm_sqr();
            cumulative.push(acc);
        }
        let total = acc;
        (0..shots)
            .map(|_| {
                let r = rng.gen::<f64>() * total;
                let b = cumulative.partition_point(|&c| c <= r).min(cumulative.len() - 1);
                ions.iter().map(|&q| if b >> q & 1 == 1 { '1' } else { '0' }).collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_qubit(w1: f64, w2: f64, j: f64) -> SpinHamiltonian {
        SpinHamiltonian::new(vec![w1, w2], Matrix::from_rows(&[vec![0.0, j], vec![j, 0.0]]))
    }

    #[test]
    fn initialize_follows_bit_convention() {
        let s = SpinState::initialize(2, "00").unwrap();
        assert_eq!(s.amplitudes()[0], c(1.0, 0.0));
        assert_eq!(s.amplitudes().len(), 4);
        let s = SpinState::initialize(2, "10").unwrap();
        assert_eq!(s.amplitudes()[1], c(1.0, 0.0));
        let s = SpinState::initialize(12, &"0".repeat(12)).unwrap();
        assert_eq!(s.amplitudes().len(), 4096);
        assert!((s.norm() - 1.0).abs() < 1e-15);
        assert!(matches!(SpinState::initialize(2, "1"), Err(SpinError::BadLabel(_))));
        assert!(matches!(SpinState::initialize(2, "1x"), Err(SpinError::BadLabel(_))));
        assert!(matches!(SpinState::initialize(17, &"0".repeat(17)), Err(SpinError::TooManyQubits(17))));
    }

    #[test]
    fn free_evolution_zero_time_is_identity() {
        let h = two_qubit(3.0, 5.0, 1.0);
        let mut s = SpinState::from_amplitudes(vec![c(1.0, 0.0), c(0.5, 0.2), c(0.0, 1.0), c(0.3, 0.0)], 0.0).unwrap();
        let before = s.clone();
        s.free_evolution(&h, 0.0).unwrap();
        assert_eq!(s, before);
        assert!(s.free_evolution(&h, -1.0).is_err());
    }

    #[test]
    fn j_modulated_fringe() {
        let j = 2.0 * PI * 19.3;
        let h = two_qubit(0.0, 0.0, j);
        for t in [0.0, 0.003, 0.01, 0.0417] {
            let mut s = SpinState::from_amplitudes(vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], 0.0).unwrap();
            s.free_evolution(&h, t).unwrap();
            let sx = s.expectation(Pauli::X, 0).unwrap();
            assert!((sx - (j * t).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn uncoupled_product_state_stays_product() {
        let h = two_qubit(1.3, -0.4, 0.0);
        let plus = [c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)];
        let mut s = SpinState::from_amplitudes(
            (0..4).map(|b| plus[b & 1] * plus[b >> 1]).collect(),
            0.0,
        )
        .unwrap();
        s.free_evolution(&h, 0.77).unwrap();
        let a = s.amplitudes();
        // Product iff a00 a11 = a01 a10.
        assert!((a[0] * a[3] - a[1] * a[2]).norm() < 1e-15);
    }

    #[test]
    fn resonant_pi_pulse_flips() {
        let h = SpinHamiltonian::new(vec![1e4, 2e4, 3e4], Matrix::zeros(3, 3));
        let mut s = SpinState::initialize(3, "000").unwrap();
        let rabi = 500.0;
        s.apply_pulse(&h, &PulseSpec { target: 1, rabi, drive_frequency: 2e4, phase: 0.3, duration: PI / rabi })
            .unwrap();
        assert!((s.probabilities()[0b010] - 1.0).abs() < 1e-14);
        assert!((s.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pulse_with_zero_rabi_is_free_evolution() {
        let h = two_qubit(2.0e3, 3.1e3, 40.0);
        let start = SpinState::from_amplitudes(vec![c(0.4, 0.1), c(0.5, -0.2), c(0.1, 0.6), c(0.3, 0.0)], 0.002).unwrap();
        let mut a = start.clone();
        let mut b = start.clone();
        a.apply_pulse(&h, &PulseSpec { target: 0, rabi: 0.0, drive_frequency: 1.0e3, phase: 1.0, duration: 0.01 })
            .unwrap();
        b.free_evolution(&h, 0.01).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn cnot_by_conditional_resonance() {
        let j = 2.0 * PI * 19.3;
        let h = two_qubit(2.0 * PI * 1000.0, 2.0 * PI * 2000.0, j);
        let rabi = j / 10.0;
        let pulse = PulseSpec {
            target: 1,
            rabi,
            drive_frequency: h.frequencies[1] - j,
            phase: 0.0,
            duration: PI / rabi,
        };
        let mut on = SpinState::initialize(2, "10").unwrap();
        on.apply_pulse(&h, &pulse).unwrap();
        assert!(on.probabilities()[0b11] > 0.99);
        let mut off = SpinState::initialize(2, "00").unwrap();
        off.apply_pulse(&h, &pulse).unwrap();
        assert!(off.probabilities()[0b10] < 0.05);
    }

    #[test]
    fn expectation_values() {
        let s = SpinState::initialize(3, "000").unwrap();
        for q in 0..3 {
            assert_eq!(s.expectation(Pauli::Z, q).unwrap(), -1.0);
        }
        let plus = SpinState::from_amplitudes(vec![c(1.0, 0.0), c(1.0, 0.0)], 0.0).unwrap();
        assert!((plus.expectation(Pauli::X, 0).unwrap() - 1.0).abs() < 1e-15);
        assert!(plus.expectation(Pauli::Y, 0).unwrap().abs() < 1e-15);
        // |1⟩ is spin-up, so (|1⟩ + i|0⟩)/√2 is the +1 eigenstate of σy.
        let y = SpinState::from_amplitudes(vec![c(0.0, 1.0), c(1.0, 0.0)], 0.0).unwrap();
        assert!((y.expectation(Pauli::Y, 0).unwrap() - 1.0).abs() < 1e-15);
        assert!(s.expectation(Pauli::X, 3).is_err());
    }

    #[test]
    fn sigma_y_traces_sine_of_phase() {
        // π/2 pulse about −y axis takes |0⟩ to |+⟩, then the J phase rotates it.
        let j = 2.0 * PI * 10.0;
        let h = two_qubit(0.0, 0.0, j);
        for t in [0.0, 0.004, 0.013] {
            let mut s = SpinState::initialize(2, "00").unwrap();
            s.apply_hard_pulse(0, PI / 2.0, PI / 2.0, 0.0).unwrap();
            assert!((s.expectation(Pauli::X, 0).unwrap() - 1.0).abs() < 1e-12);
            s.free_evolution(&h, t).unwrap();
            // Qubit 1 precesses at J (qubit 2 in |0⟩): ⟨σy⟩ = sin(Jt).
            assert!((s.expectation(Pauli::Y, 0).unwrap() - (j * t).sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn hard_pulse_is_short_pulse_limit() {
        let h = two_qubit(3.0e3, 5.0e3, 25.0);
        let start = SpinState::from_amplitudes(vec![c(0.4, 0.1), c(0.5, -0.2), c(0.1, 0.6), c(0.3, 0.0)], 0.0123).unwrap();
        let area = 0.7 * PI;
        let mut hard = start.clone();
        hard.apply_hard_pulse(1, area, 0.4, 4.9e3).unwrap();
        let tau = 1e-9;
        let mut soft = start.clone();
        soft.apply_pulse(&h, &PulseSpec { target: 1, rabi: area / tau, drive_frequency: 4.9e3, phase: 0.4, duration: tau })
            .unwrap();
        assert!(hard.fidelity(&soft) > 1.0 - 1e-10);
    }

    #[test]
    fn sampling() {
        let s = SpinState::initialize(3, "101").unwrap();
        assert_eq!(s.sample_measurement(7), "101");

        let uniform = SpinState::from_amplitudes(vec![c(0.5, 0.0); 4], 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let shots = uniform.sample_shots(&mut rng, 100_000, &[0, 1]);
        for label in ["00", "01", "10", "11"] {
            let f = shots.iter().filter(|s| s.as_str() == label).count() as f64 / 1e5;
            assert!((f - 0.25).abs() < 0.01, "{label}: {f}");
        }
        let mut r1 = ChaCha8Rng::seed_from_u64(9);
        let mut r2 = ChaCha8Rng::seed_from_u64(9);
        assert_eq!(uniform.sample_shots(&mut r1, 50, &[0, 1]), uniform.sample_shots(&mut r2, 50, &[0, 1]));
    }

    #[test]
    fn mismatched_hamiltonian_is_rejected() {
        let h = two_qubit(0.0, 0.0, 0.0);
        let mut s = SpinState::initialize(3, "000").unwrap();
        assert!(matches!(s.free_evolution(&h, 1.0), Err(SpinError::SizeMismatch { .. })));
    }
}
