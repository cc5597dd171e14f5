//! Gradient-induced quantities: Zeeman frequency gradients, the mode/ion
//! coupling matrix ε, the spin-spin coupling J, per-ion carrier shifts Δ,
//! and effective Lamb-Dicke parameters.
//!
//! Conventions: ε[n][l] = S[n][l]·∂ω_l·Δz_n/ν_n with mode index first;
//! J_nl = Σ_j ν_j ε[j][n] ε[j][l], which enters the spin Hamiltonian as
//! −(ħ/2) Σ_{n<l} J_nl σz_n σz_l. All frequencies are rad/s.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{ChainSolution, SIGN_CONVENTION};
use crate::config::{FieldProfile, OutOfProfileRange, TrapConfig};
use crate::constants::{BOHR_MAGNETON, HBAR};
use crate::linalg::Matrix;

/// ε below this is reported as "harmonic approximation valid".
pub const VALIDITY_THRESHOLD: f64 = 0.1;

pub const PHASE_NOTE: &str = "per-ion phase is the small-η value π/2; the exact phase depends on the mode index and is \
     reported per (mode, ion) as arg(η_n S_nj + i ε_nj)";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CouplingError {
    #[error(transparent)]
    OutOfProfileRange(#[from] OutOfProfileRange),
    #[error("the closed-form estimate needs a uniform field gradient")]
    NonUniformGradient,
}

/// ∂ω_n/∂z at each equilibrium position, rad/(s·m).
pub fn omega_gradients(config: &TrapConfig, chain: &ChainSolution) -> Result<Vec<f64>, CouplingError> {
    let k = config.species.zeeman_coefficient();
    chain
        .positions()
        .into_iter()
        .map(|z| Ok(k * config.field.gradient_at(z)?))
        .collect()
}

/// Position-dependent qubit frequency ω_n(z₀,n), rad/s.
pub fn qubit_frequencies(config: &TrapConfig, chain: &ChainSolution) -> Result<Vec<f64>, CouplingError> {
    let w0 = config.species.qubit_angular_frequency;
    let k = config.species.zeeman_coefficient();
    chain
        .positions()
        .into_iter()
        .map(|z| Ok(w0 + k * config.field.field_at(z)?))
        .collect()
}

/// ε[mode][ion].
pub fn epsilon_matrix(grads: &[f64], chain: &ChainSolution) -> Matrix {
    let s = &chain.mode_matrix;
    let n = chain.ion_count();
    Matrix::from_fn(n, n, |mode, ion| {
        s[(mode, ion)] * grads[ion] * chain.ground_state_extents[mode] / chain.mode_frequencies[mode]
    })
}

/// Spin-spin coupling J_nl = Σ_j ν_j ε_jn ε_jl with zero diagonal.
pub fn j_matrix(grads: &[f64], chain: &ChainSolution) -> Matrix {
    let eps = epsilon_matrix(grads, chain);
    let n = chain.ion_count();
    let mut j = Matrix::zeros(n, n);
    for a in 0..n {
        for b in a + 1..n {
            let v: f64 = (0..n)
                .map(|mode| chain.mode_frequencies[mode] * eps[(mode, a)] * eps[(mode, b)])
                .sum();
            j[(a, b)] = v;
            j[(b, a)] = v;
        }
    }
    j
}

/// Independent route to J: evaluate the completed-square spin energy
///
/// −H_SS/ħ = −(ħ/8m) Σ_l ν_l⁻² [Σ_n ∂ω_n s_n S_ln]²
///
/// on every spin configuration s ∈ {±1}^N and project onto s_n s_l. The
/// coefficient of s_n s_l equals −J_nl/2. Cost is O(2^N N²); meant for
/// N ≲ 14.
pub fn j_matrix_bruteforce_oracle(grads: &[f64], chain: &ChainSolution) -> Matrix {
    let n = chain.ion_count();
    let mut out = Matrix::zeros(n, n);
    if n < 2 {
        return out;
    }
    let prefactor = HBAR / (8.0 * chain.mass);
    let s = &chain.mode_matrix;
    let configs = 1usize << n;
    let spin = |c: usize, i: usize| if c >> i & 1 == 1 { 1.0 } else { -1.0 };
    let mut acc = Matrix::zeros(n, n);
    for c in 0..configs {
        let energy: f64 = -prefactor
            * (0..n)
                .map(|mode| {
                    let x: f64 = (0..n).map(|i| grads[i] * spin(c, i) * s[(mode, i)]).sum();
                    x * x / (chain.mode_frequencies[mode] * chain.mode_frequencies[mode])
                })
                .sum::<f64>();
        for a in 0..n {
            for b in a + 1..n {
                acc[(a, b)] += energy * spin(c, a) * spin(c, b);
            }
        }
    }
    let norm = configs as f64;
    for a in 0..n {
        for b in a + 1..n {
            let j = -2.0 * acc[(a, b)] / norm;
            out[(a, b)] = j;
            out[(b, a)] = j;
        }
    }
    out
}

/// Order-of-magnitude estimate
/// J ≈ (μ_B ∂B/∂z)² Σ_j λ_j⁻² / (4 N m ħ ν₁²),
/// which assumes S_jn ≈ N^{-1/2} for every mode. Uses the species'
/// differential moment in place of μ_B.
pub fn approx_j(config: &TrapConfig, chain: &ChainSolution) -> Result<f64, CouplingError> {
    let FieldProfile::Uniform { gradient, .. } = config.field else {
        return Err(CouplingError::NonUniformGradient);
    };
    let moment = config.species.moment_state1 - config.species.moment_state0;
    let force = moment * BOHR_MAGNETON * gradient;
    let n = chain.ion_count() as f64;
    let nu1 = chain.axial_frequency;
    let inv_sum: f64 = chain.mode_eigenvalues.iter().map(|l2| 1.0 / l2).sum();
    Ok(force * force / (4.0 * n * chain.mass * HBAR * nu1 * nu1) * inv_sum)
}

/// ε = max_j |∂ω_j|·Δz₁/ν₁.
pub fn validity_epsilon(grads: &[f64], chain: &ChainSolution) -> f64 {
    let dz1 = chain.ground_state_extents[0];
    let nu1 = chain.axial_frequency;
    grads.iter().map(|g| g.abs() * dz1 / nu1).fold(0.0, f64::max)
}

/// Bare Lamb-Dicke parameters η_n = Δz_n·k.
pub fn bare_lamb_dicke(config: &TrapConfig, chain: &ChainSolution) -> Vec<f64> {
    let k = config.drive_wavevector();
    chain.ground_state_extents.iter().map(|dz| dz * k).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveLambDicke {
    /// η′[mode][ion] = |η_n S_nj + i ε_nj|.
    pub eta_eff: Matrix,
    /// arg(η_n S_nj + i ε_nj), in (−π, π].
    pub phases_exact: Matrix,
    /// Small-η per-ion phase, π/2.
    pub phases: Vec<f64>,
    /// Δ_j = ½ Σ_n ν_n ε_nj, rad/s.
    pub shifts: Vec<f64>,
}

fn wrap_angle(x: f64) -> f64 {
    let w = x.rem_euclid(std::f64::consts::TAU);
    if w > std::f64::consts::PI {
        w - std::f64::consts::TAU
    } else {
        w
    }
}

pub fn effective_lamb_dicke(
    eta_bare: &[f64],
    chain: &ChainSolution,
    grads: &[f64],
) -> EffectiveLambDicke {
    let n = chain.ion_count();
    let eps = epsilon_matrix(grads, chain);
    let s = &chain.mode_matrix;
    let eta_eff = Matrix::from_fn(n, n, |mode, ion| (eta_bare[mode] * s[(mode, ion)]).hypot(eps[(mode, ion)]));
    let phases_exact = Matrix::from_fn(n, n, |mode, ion| {
        wrap_angle(FRAC_PI_2 - (eta_bare[mode] * s[(mode, ion)]).atan2(eps[(mode, ion)]))
    });
    let shifts = (0..n)
        .map(|ion| 0.5 * (0..n).map(|mode| chain.mode_frequencies[mode] * eps[(mode, ion)]).sum::<f64>())
        .collect();
    EffectiveLambDicke { eta_eff, phases_exact, phases: vec![FRAC_PI_2; n], shifts }
}

/// Everything the gradient does to a configured chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingReport {
    /// ∂ω_n/∂z, rad/(s·m).
    pub omega_gradients: Vec<f64>,
    /// ε[mode][ion].
    pub epsilon_matrix: Matrix,
    /// J_nl, rad/s.
    pub j_matrix: Matrix,
    /// Δ_j, rad/s.
    pub shifts: Vec<f64>,
    pub eta_bare: Vec<f64>,
    /// η′[mode][ion].
    pub eta_eff: Matrix,
    pub phases: Vec<f64>,
    pub phases_exact: Matrix,
    pub validity: f64,
    pub validity_threshold: f64,
    pub harmonic_approximation_valid: bool,
    /// ω_n(z₀,n), rad/s.
    pub qubit_frequencies: Vec<f64>,
    /// Closed-form J estimate, rad/s; only for uniform gradients.
    pub approx_j: Option<f64>,
    pub sign_convention: String,
    pub notes: Vec<String>,
}

impl CouplingReport {
    pub fn compute(config: &TrapConfig, chain: &ChainSolution) -> Result<Self, CouplingError> {
        let grads = omega_gradients(config, chain)?;
        let qubit_frequencies = qubit_frequencies(config, chain)?;
        let eta_bare = bare_lamb_dicke(config, chain);
        let ld = effective_lamb_dicke(&eta_bare, chain, &grads);
        let validity = validity_epsilon(&grads, chain);
        let approx = match approx_j(config, chain) {
            Ok(j) => Some(j),
            Err(CouplingError::NonUniformGradient) => None,
            Err(e) => return Err(e),
        };
        Ok(CouplingReport {
            epsilon_matrix: epsilon_matrix(&grads, chain),
            j_matrix: j_matrix(&grads, chain),
            omega_gradients: grads,
            shifts: ld.shifts,
            eta_bare,
            eta_eff: ld.eta_eff,
            phases: ld.phases,
            phases_exact: ld.phases_exact,
            validity,
            validity_threshold: VALIDITY_THRESHOLD,
            harmonic_approximation_valid: validity < VALIDITY_THRESHOLD,
            qubit_frequencies,
            approx_j: approx,
            sign_convention: SIGN_CONVENTION.to_string(),
            notes: vec![PHASE_NOTE.to_string()],
        })
    }

    /// Largest off-diagonal J_nl, rad/s. Zero for a single ion.
    pub fn max_j(&self) -> f64 {
        let n = self.j_matrix.rows();
        (0..n)
            .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
            .map(|(a, b)| self.j_matrix[(a, b)])
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Species, TrapConfig};
    use std::f64::consts::TAU;

    fn setup(n: usize, nu1_hz: f64, b: f64) -> (TrapConfig, ChainSolution) {
        let cfg = TrapConfig::new(Species::yb171(), n, nu1_hz, FieldProfile::uniform(0.0, b));
        let chain = ChainSolution::solve(&cfg).unwrap();
        (cfg, chain)
    }

    #[test]
    fn uniform_gradient_omega() {
        let (cfg, chain) = setup(4, 1e5, 10.0);
        let g = omega_gradients(&cfg, &chain).unwrap();
        let want = BOHR_MAGNETON * 10.0 / HBAR;
        assert!(g.iter().all(|x| (x - want).abs() < 1e-3));
        assert!((want - 8.794e11).abs() / 8.794e11 < 1e-4);
    }

    #[test]
    fn quadratic_gradients_are_monotonic() {
        let mut cfg = TrapConfig::new(
            Species::yb171(),
            5,
            1e5,
            FieldProfile::Quadratic { b0: 0.0, gradient: 10.0, curvature: 1e5 },
        );
        let chain = ChainSolution::solve(&cfg).unwrap();
        let g = omega_gradients(&cfg, &chain).unwrap();
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        cfg.field = FieldProfile::uniform(0.0, 0.0);
        assert!(omega_gradients(&cfg, &chain).unwrap().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn sampled_profile_out_of_range() {
        let cfg = TrapConfig::new(
            Species::yb171(),
            3,
            1e5,
            FieldProfile::Sampled { points: vec![(-1e-6, 0.0), (1e-6, 1e-5)] },
        );
        let chain = ChainSolution::solve(&cfg).unwrap();
        assert!(matches!(omega_gradients(&cfg, &chain), Err(CouplingError::OutOfProfileRange(_))));
        assert!(matches!(CouplingReport::compute(&cfg, &chain), Err(CouplingError::OutOfProfileRange(_))));
    }

    #[test]
    fn single_ion_epsilon_equals_validity() {
        let (cfg, chain) = setup(1, 1e5, 10.0);
        let g = omega_gradients(&cfg, &chain).unwrap();
        let eps = epsilon_matrix(&g, &chain);
        assert!((eps[(0, 0)] - 0.02407).abs() < 5e-5, "{}", eps[(0, 0)]);
        assert!((validity_epsilon(&g, &chain) - eps[(0, 0)]).abs() < 1e-15);
    }

    #[test]
    fn two_ion_closed_form() {
        let (cfg, chain) = setup(2, 1e5, 10.0);
        let g = omega_gradients(&cfg, &chain).unwrap();
        let j = j_matrix(&g, &chain);
        let want = HBAR * g[0] * g[0] / (6.0 * cfg.species.mass * chain.axial_frequency.powi(2));
        assert!((j[(0, 1)] - want).abs() / want < 1e-10);
        assert!((j[(0, 1)] / TAU - 19.3).abs() < 0.05);
        assert_eq!(j[(0, 0)], 0.0);
        let eps = epsilon_matrix(&g, &chain);
        assert!((eps[(0, 0)].abs() - eps[(0, 1)].abs()).abs() < 1e-15);
    }

    #[test]
    fn zero_gradient_is_inert() {
        let (cfg, chain) = setup(4, 1e5, 0.0);
        let r = CouplingReport::compute(&cfg, &chain).unwrap();
        assert_eq!(r.j_matrix.max_abs(), 0.0);
        assert_eq!(r.epsilon_matrix.max_abs(), 0.0);
        assert!(r.shifts.iter().all(|&d| d == 0.0));
        assert_eq!(r.validity, 0.0);
        for mode in 0..4 {
            for ion in 0..4 {
                let want = r.eta_bare[mode] * chain.mode_matrix[(mode, ion)].abs();
                assert_eq!(r.eta_eff[(mode, ion)], want);
            }
        }
        assert!(r.qubit_frequencies.iter().all(|&w| w == cfg.species.qubit_angular_frequency));
    }

    #[test]
    fn eta_eff_is_modulus() {
        let (cfg, chain) = setup(5, 1e5, 10.0);
        let r = CouplingReport::compute(&cfg, &chain).unwrap();
        for mode in 0..5 {
            for ion in 0..5 {
                let a = r.eta_bare[mode] * chain.mode_matrix[(mode, ion)];
                let e = r.epsilon_matrix[(mode, ion)];
                let lhs = r.eta_eff[(mode, ion)].powi(2);
                assert!((lhs - (a * a + e * e)).abs() <= 1e-14 * lhs);
                // Phase is arg(a + i e).
                let phi = r.phases_exact[(mode, ion)];
                assert!((phi - e.atan2(a)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn two_ion_shifts() {
        let (cfg, chain) = setup(2, 1e5, 10.0);
        let r = CouplingReport::compute(&cfg, &chain).unwrap();
        // Hand computation: Δ_{1,2} = (∂ω/2√2)(Δz₁ ± Δz₂), Δz₂ = Δz₁·3^{-1/4}.
        let g = r.omega_gradients[0];
        let dz1 = (HBAR / (2.0 * cfg.species.mass * chain.axial_frequency)).sqrt();
        let dz2 = dz1 * 3f64.powf(-0.25);
        let d1 = g / (2.0 * 2f64.sqrt()) * (dz1 + dz2);
        let d2 = g / (2.0 * 2f64.sqrt()) * (dz1 - dz2);
        assert!((r.shifts[0] - d1).abs() / d1 < 1e-12);
        assert!((r.shifts[1] - d2).abs() / d2 < 1e-12);
        assert!((r.shifts[0] / TAU - 1500.0).abs() < 10.0);
        assert!((r.shifts[1] / TAU - 200.0).abs() < 10.0);
    }

    #[test]
    fn microwave_bare_eta_is_tiny() {
        let (cfg, chain) = setup(10, 1e5, 10.0);
        let eta = bare_lamb_dicke(&cfg, &chain);
        assert!(eta[0] < 1e-5 && eta[0] > 1e-7, "{}", eta[0]);
    }

    #[test]
    fn approx_j_single_ion_and_scaling() {
        let (cfg, chain) = setup(1, 1e5, 10.0);
        let want = (BOHR_MAGNETON * 10.0).powi(2) / (4.0 * cfg.species.mass * HBAR * chain.axial_frequency.powi(2));
        assert!((approx_j(&cfg, &chain).unwrap() - want).abs() / want < 1e-14);

        let (c1, ch1) = setup(6, 1e5, 10.0);
        let (c4, ch4) = setup(6, 4e5, 10.0);
        let ratio = approx_j(&c1, &ch1).unwrap() / approx_j(&c4, &ch4).unwrap();
        assert!((ratio - 16.0).abs() < 1e-9);

        let mut quad = c1.clone();
        quad.field = FieldProfile::Quadratic { b0: 0.0, gradient: 10.0, curvature: 0.0 };
        assert_eq!(approx_j(&quad, &ch1), Err(CouplingError::NonUniformGradient));
    }

    #[test]
    fn validity_flag() {
        let (cfg, chain) = setup(3, 1e5, 500.0);
        let r = CouplingReport::compute(&cfg, &chain).unwrap();
        assert!((r.validity - 1.20).abs() < 0.01);
        assert!(!r.harmonic_approximation_valid);
    }

    #[test]
    fn qubit_frequency_splitting() {
        let (cfg, chain) = setup(10, 1e5, 10.0);
        let w = qubit_frequencies(&cfg, &chain).unwrap();
        assert!(w.windows(2).all(|p| p[1] > p[0]));
        let z = chain.positions();
        let k = BOHR_MAGNETON * 10.0 / HBAR;
        for i in 0..9 {
            let split = w[i + 1] - w[i];
            assert!((split - k * (z[i + 1] - z[i])).abs() / split < 1e-6);
        }
        let center = (w[5] - w[4]) / TAU;
        assert!((center - 0.96e6).abs() / 0.96e6 < 0.05, "{center}");
    }
}
