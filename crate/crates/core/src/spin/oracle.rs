//! Dense reference propagator used to check the block-diagonal simulator.
//!
//! Builds the full 2^N × 2^N Hamiltonian in the rotating frame of the (at
//! most one) drive tone and exponentiates it by scaling and squaring of a
//! Taylor series.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use super::{spin_sign, PulseSpec, SpinError, SpinHamiltonian, SpinState};

pub const ORACLE_MAX_QUBITS: usize = 6;
const SERIES_TOLERANCE: f64 = 1e-12;

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        let n = self.n;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    fn scale(&mut self, s: Complex64) {
        self.data.iter_mut().for_each(|x| *x *= s);
    }

    fn add_assign(&mut self, other: &DenseMatrix) {
        self.data.iter_mut().zip(&other.data).for_each(|(a, b)| *a += b);
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// exp(self) by scaling and squaring; the Taylor series of the scaled
    /// matrix is summed until a term's norm drops below 1e-12 relative.
    pub fn expm(&self) -> DenseMatrix {
        let norm = self.norm_one();
        let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
        let mut a = self.clone();
        a.scale(Complex64::new(0.5f64.powi(squarings as i32), 0.0));

        let mut result = DenseMatrix::identity(self.n);
        let mut term = DenseMatrix::identity(self.n);
        for k in 1..=60 {
            term = term.mul(&a);
            term.scale(Complex64::new(1.0 / k as f64, 0.0));
            result.add_assign(&term);
            if term.norm_one() < SERIES_TOLERANCE * 1e-4 {
                break;
            }
        }
        for _ in 0..squarings {
            result = result.mul(&result);
        }
        result
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Evolve `state` for `t` seconds under `h` plus at most one continuous
/// drive tone (its `duration` field is ignored; the drive stays on for
/// `t`). Only for small registers.
pub fn evolve_oracle(
    state: &SpinState,
    h: &SpinHamiltonian,
    drives: &[PulseSpec],
    t: f64,
) -> Result<SpinState, SpinError> {
    let n = state.num_qubits();
    if n > ORACLE_MAX_QUBITS {
        return Err(SpinError::TooLarge(n));
    }
    if h.num_qubits() != n {
        return Err(SpinError::SizeMismatch { expected: h.num_qubits(), found: n });
    }
    if drives.len() > 1 {
        return Err(SpinError::MultiTone(drives.len()));
    }
    if t < 0.0 {
        return Err(SpinError::NegativeDuration(t));
    }
    let dim = 1usize << n;
    let t0 = state.time();

    // H_rot/ħ = diag(E) − (ω/2) σz_j + (Ω/2)(e^{iφ} σ⁺_j + h.c.)
    let mut hm = DenseMatrix::zeros(dim);
    for b in 0..dim {
        hm[(b, b)] = Complex64::new(h.energy(b), 0.0);
    }
    // Frame rotation angle per basis state: ω s_j / 2 for the drive target.
    let mut frame = vec![0.0; dim];
    if let Some(d) = drives.first() {
        if d.target >= n {
            return Err(SpinError::BadIon { ion: d.target + 1, n });
        }
        let j = d.target;
        for b in 0..dim {
            frame[b] = 0.5 * d.drive_frequency * spin_sign(b, j);
            hm[(b, b)] -= Complex64::new(frame[b], 0.0);
            if b >> j & 1 == 0 {
                let b1 = b | 1 << j;
                hm[(b1, b)] += 0.5 * d.rabi * Complex64::from_polar(1.0, d.phase);
                hm[(b, b1)] += 0.5 * d.rabi * Complex64::from_polar(1.0, -d.phase);
            }
        }
    }

    let mut generator = hm;
    generator.scale(Complex64::new(0.0, -t));
    let u = generator.expm();

    let rotated: Vec<Complex64> = state
        .amplitudes()
        .iter()
        .zip(&frame)
        .map(|(a, f)| a * Complex64::from_polar(1.0, f * t0))
        .collect();
    let evolved = u.apply(&rotated);
    let lab: Vec<Complex64> = evolved
        .iter()
        .zip(&frame)
        .map(|(a, f)| a * Complex64::from_polar(1.0, -f * (t0 + t)))
        .collect();
    SpinState::from_amplitudes(lab, t0 + t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    #[test]
    fn expm_of_pauli_rotation() {
        // exp(−iθσx/2)
        let mut m = DenseMatrix::zeros(2);
        let theta = 2.3;
        m[(0, 1)] = Complex64::new(0.0, -theta / 2.0);
        m[(1, 0)] = Complex64::new(0.0, -theta / 2.0);
        let e = m.expm();
        assert!((e[(0, 0)] - Complex64::new((theta / 2.0).cos(), 0.0)).norm() < 1e-14);
        assert!((e[(0, 1)] - Complex64::new(0.0, -(theta / 2.0).sin())).norm() < 1e-14);
    }

    #[test]
    fn identity_at_zero_time() {
        let h = SpinHamiltonian::new(vec![1.0, 2.0], Matrix::zeros(2, 2));
        let s = SpinState::initialize(2, "01").unwrap();
        let out = evolve_oracle(&s, &h, &[], 0.0).unwrap();
        assert!((out.fidelity(&s) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn limits() {
        let h = SpinHamiltonian::new(vec![0.0; 7], Matrix::zeros(7, 7));
        let s = SpinState::initialize(7, "0000000").unwrap();
        assert_eq!(evolve_oracle(&s, &h, &[], 1.0), Err(SpinError::TooLarge(7)));
        let h = SpinHamiltonian::new(vec![0.0; 2], Matrix::zeros(2, 2));
        let s = SpinState::initialize(2, "00").unwrap();
        let p = PulseSpec { target: 0, rabi: 1.0, drive_frequency: 0.0, phase: 0.0, duration: 1.0 };
        assert_eq!(evolve_oracle(&s, &h, &[p, p], 1.0), Err(SpinError::MultiTone(2)));
    }
}
