//! Equilibrium geometry and axial normal modes of a linear ion chain in a
//! harmonic trap.
//!
//! Positions are dimensionless, `z = ζ·u` with
//! ζ = (e²/(4πε₀ m ν₁²))^{1/3}. In these units the potential energy is
//! Σ u²/2 + Σ_{n<l} 1/|u_n − u_l| and its Hessian is the dynamical matrix,
//! whose eigenvalues are (ν_j/ν₁)².

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{TrapConfig, MAX_IONS};
use crate::constants::{coulomb_energy_scale, HBAR};
use crate::linalg::{jacobi_eigen, lu_solve, LinalgError, Matrix};

/// Stationarity residual (infinity norm) accepted by [`solve_equilibrium`].
pub const EQUILIBRIUM_TOLERANCE: f64 = 1e-12;
/// Minimum dimensionless separation before positions count as coincident.
pub const MIN_SEPARATION: f64 = 1e-9;
/// Eigenvalue gap below which modes are reported as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-9;
/// Sign convention applied to every mode vector.
pub const SIGN_CONVENTION: &str = "largest-magnitude component of each mode vector is positive; ties go to the lowest ion index";

const MAX_NEWTON_ITERATIONS: usize = 200;
const DESCENT_STEPS: usize = 50;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChainError {
    #[error("ion count {0} outside [1, {MAX_IONS}]")]
    BadIonCount(usize),
    #[error("equilibrium solver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("ions {0} and {1} coincide")]
    DegeneratePositions(usize, usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Force balance residual: u_m − Σ_{n≠m} sign(u_m − u_n)/(u_m − u_n)².
pub fn stationarity_residual(u: &[f64]) -> Vec<f64> {
    u.iter()
        .enumerate()
        .map(|(m, &um)| {
            let coulomb: f64 = u
                .iter()
                .enumerate()
                .filter(|&(n, _)| n != m)
                .map(|(_, &un)| {
                    let d = um - un;
                    d.signum() / (d * d)
                })
                .sum();
            um - coulomb
        })
        .collect()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

fn two_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn strictly_increasing(u: &[f64]) -> bool {
    u.windows(2).all(|w| w[1] - w[0] > MIN_SEPARATION)
}

/// Evenly spaced start on [−L, L], L = 0.5·(2N^{-0.57})·N·0.5.
fn initial_guess(n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.0];
    }
    let spacing = 2.0 * (n as f64).powf(-0.57);
    let half = 0.5 * spacing * n as f64 * 0.5;
    (0..n)
        .map(|i| -half + 2.0 * half * i as f64 / (n - 1) as f64)
        .collect()
}

/// Plain gradient steps on the potential with a step small enough to keep
/// the ordering. Used only to rescue a Newton run that stalls.
fn descend(u: &mut [f64], steps: usize) {
    for _ in 0..steps {
        let f = stationarity_residual(u);
        let mut step = 0.1;
        loop {
            let trial: Vec<f64> = u.iter().zip(&f).map(|(x, g)| x - step * g).collect();
            if strictly_increasing(&trial) || step < 1e-12 {
                u.copy_from_slice(&trial);
                break;
            }
            step *= 0.5;
        }
    }
}

/// Dimensionless equilibrium positions of `n` ions, ascending and mean-zero.
///
/// Damped Newton on the force balance; the Jacobian is the dynamical
/// matrix. Steps are halved until the residual decreases and the ordering
/// is preserved.
pub fn solve_equilibrium(n: usize) -> Result<Vec<f64>, ChainError> {
    if n == 0 || n > MAX_IONS {
        return Err(ChainError::BadIonCount(n));
    }
    if n == 1 {
        return Ok(vec![0.0]);
    }
    let mut u = initial_guess(n);
    let mut residual = stationarity_residual(&u);
    let mut rescued = false;
    let mut iterations = 0;

    while inf_norm(&residual) >= EQUILIBRIUM_TOLERANCE * 0.01 {
        if iterations == MAX_NEWTON_ITERATIONS {
            break;
        }
        iterations += 1;
        let jac = dynamical_matrix(&u)?;
        let rhs: Vec<f64> = residual.iter().map(|r| -r).collect();
        let delta = lu_solve(&jac, &rhs)?;

        let current = two_norm(&residual);
        let mut damping = 1.0;
        let mut accepted = None;
        while damping > 1e-10 {
            let trial: Vec<f64> = u.iter().zip(&delta).map(|(x, d)| x + damping * d).collect();
            if strictly_increasing(&trial) {
                let r = stationarity_residual(&trial);
                if two_norm(&r) < current {
                    accepted = Some((trial, r));
                    break;
                }
            }
            damping *= 0.5;
        }
        match accepted {
            Some((trial, r)) => {
                u = trial;
                residual = r;
            }
            None if !rescued => {
                rescued = true;
                descend(&mut u, DESCENT_STEPS);
                residual = stationarity_residual(&u);
            }
            // Newton cannot improve further: either converged to rounding
            // or genuinely stuck; the final check below decides.
            None => break,
        }
    }

    // Enforce the reflection symmetry of the trap exactly.
    let sym: Vec<f64> = (0..n).map(|i| 0.5 * (u[i] - u[n - 1 - i])).collect();
    let residual = inf_norm(&stationarity_residual(&sym));
    if residual >= EQUILIBRIUM_TOLERANCE || !strictly_increasing(&sym) {
        return Err(ChainError::NoConvergence { iterations, residual });
    }
    Ok(sym)
}

/// ζ = (e²/(4πε₀ m ν₁²))^{1/3} in metres.
pub fn length_scale(config: &TrapConfig) -> f64 {
    let m = config.species.mass;
    let nu = config.axial_frequency;
    (coulomb_energy_scale() / (m * nu * nu)).cbrt()
}

/// Hessian of the dimensionless potential at `u`:
/// A_nn = 1 + 2 Σ_{p≠n} |u_n − u_p|^{-3}, A_nl = −2 |u_n − u_l|^{-3}.
pub fn dynamical_matrix(u: &[f64]) -> Result<Matrix, ChainError> {
    let n = u.len();
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = 1.0;
    }
    for i in 0..n {
        for l in i + 1..n {
            let d = (u[i] - u[l]).abs();
            if d < MIN_SEPARATION {
                return Err(ChainError::DegeneratePositions(i, l));
            }
            let k = 2.0 / (d * d * d);
            a[(i, l)] = -k;
            a[(l, i)] = -k;
            a[(i, i)] += k;
            a[(l, l)] += k;
        }
    }
    Ok(a)
}

/// Normal modes of a dynamical matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalModes {
    /// λ_j², ascending.
    pub eigenvalues: Vec<f64>,
    /// S[j][n]: participation of ion n in mode j. Rows are orthonormal.
    pub mode_matrix: Matrix,
    /// Near-degenerate eigenvalue pairs, if any.
    pub warnings: Vec<String>,
}

/// Make the largest-magnitude entry of every row positive.
pub fn fix_mode_signs(s: &mut Matrix) {
    for j in 0..s.rows() {
        let row = s.row_mut(j);
        let mut best = 0;
        for (i, x) in row.iter().enumerate() {
            // Strict comparison keeps the lowest index among ties.
            if x.abs() > row[best].abs() {
                best = i;
            }
        }
        if row[best] < 0.0 {
            row.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

pub fn normal_modes(a: &Matrix) -> Result<NormalModes, ChainError> {
    let eig = jacobi_eigen(a)?;
    let mut mode_matrix = eig.vectors;
    fix_mode_signs(&mut mode_matrix);
    let warnings = eig
        .values
        .windows(2)
        .enumerate()
        .filter(|(_, w)| (w[1] - w[0]).abs() < DEGENERACY_GAP)
        .map(|(j, w)| format!("modes {} and {} are degenerate (λ² = {:.12})", j + 1, j + 2, w[0]))
        .collect();
    Ok(NormalModes { eigenvalues: eig.values, mode_matrix, warnings })
}

/// Geometry and axial normal modes of a configured chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSolution {
    /// ζ, m.
    pub length_scale: f64,
    pub positions_dimensionless: Vec<f64>,
    pub dynamical_matrix: Matrix,
    /// λ_j², ascending.
    pub mode_eigenvalues: Vec<f64>,
    /// S[mode][ion].
    pub mode_matrix: Matrix,
    /// ν_j = ν₁·λ_j, rad/s.
    pub mode_frequencies: Vec<f64>,
    /// Δz_j = sqrt(ħ/(2 m ν_j)), m.
    pub ground_state_extents: Vec<f64>,
    pub mass: f64,
    /// ν₁, rad/s.
    pub axial_frequency: f64,
    pub warnings: Vec<String>,
}

impl ChainSolution {
    pub fn solve(config: &TrapConfig) -> Result<Self, ChainError> {
        let u = solve_equilibrium(config.ion_count)?;
        let a = dynamical_matrix(&u)?;
        let modes = normal_modes(&a)?;
        let zeta = length_scale(config);
        let nu1 = config.axial_frequency;
        let mass = config.species.mass;
        let mode_frequencies: Vec<f64> = modes.eigenvalues.iter().map(|l2| nu1 * l2.sqrt()).collect();
        let ground_state_extents = mode_frequencies
            .iter()
            .map(|nu| (HBAR / (2.0 * mass * nu)).sqrt())
            .collect();
        Ok(ChainSolution {
            length_scale: zeta,
            positions_dimensionless: u,
            dynamical_matrix: a,
            mode_eigenvalues: modes.eigenvalues,
            mode_matrix: modes.mode_matrix,
            mode_frequencies,
            ground_state_extents,
            mass,
            axial_frequency: nu1,
            warnings: modes.warnings,
        })
    }

    pub fn ion_count(&self) -> usize {
        self.positions_dimensionless.len()
    }

    /// Equilibrium positions z₀,n in metres.
    pub fn positions(&self) -> Vec<f64> {
        self.positions_dimensionless.iter().map(|u| u * self.length_scale).collect()
    }

    /// Smallest neighbour distance in metres; `None` for a single ion.
    pub fn min_spacing(&self) -> Option<f64> {
        self.positions()
            .windows(2)
            .map(|w| w[1] - w[0])
            .min_by(f64::total_cmp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{FieldProfile, Species};

    fn yb(n: usize) -> TrapConfig {
        TrapConfig::new(Species::yb171(), n, 1e5, FieldProfile::uniform(0.0, 10.0))
    }

    #[test]
    fn analytic_equilibria() {
        assert_eq!(solve_equilibrium(1).unwrap(), vec![0.0]);

        let u2 = solve_equilibrium(2).unwrap();
        let a = 0.25f64.cbrt();
        assert!((u2[0] + a).abs() < 1e-12 && (u2[1] - a).abs() < 1e-12);

        let u3 = solve_equilibrium(3).unwrap();
        let b = 1.25f64.cbrt();
        assert!((u3[0] + b).abs() < 1e-12);
        assert!(u3[1].abs() < 1e-12);
        assert!((u3[2] - b).abs() < 1e-12);
    }

    #[test]
    fn equilibrium_converges_up_to_fifty() {
        for n in 1..=MAX_IONS {
            let u = solve_equilibrium(n).unwrap();
            assert!(inf_norm(&stationarity_residual(&u)) < EQUILIBRIUM_TOLERANCE, "N={n}");
            assert!(u.iter().sum::<f64>().abs() < 1e-10);
            assert!(strictly_increasing(&u));
        }
        assert_eq!(solve_equilibrium(0), Err(ChainError::BadIonCount(0)));
        assert_eq!(solve_equilibrium(51), Err(ChainError::BadIonCount(51)));
    }

    #[test]
    fn dynamical_matrix_examples() {
        assert_eq!(dynamical_matrix(&[0.0]).unwrap(), Matrix::identity(1));
        let a = dynamical_matrix(&solve_equilibrium(2).unwrap()).unwrap();
        let want = Matrix::from_rows(&[vec![2.0, -1.0], vec![-1.0, 2.0]]);
        assert!(a.max_abs_diff(&want) < 1e-12);
        assert_eq!(
            dynamical_matrix(&[0.0, 1e-10, 1.0]),
            Err(ChainError::DegeneratePositions(0, 1))
        );
    }

    #[test]
    fn com_vector_is_fixed_by_dynamical_matrix() {
        for n in 1..=10 {
            let a = dynamical_matrix(&solve_equilibrium(n).unwrap()).unwrap();
            for x in a.matvec(&vec![1.0; n]) {
                assert!((x - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn two_ion_modes() {
        let a = Matrix::from_rows(&[vec![2.0, -1.0], vec![-1.0, 2.0]]);
        let m = normal_modes(&a).unwrap();
        assert!((m.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((m.eigenvalues[1] - 3.0).abs() < 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let want = Matrix::from_rows(&[vec![h, h], vec![h, -h]]);
        assert!(m.mode_matrix.max_abs_diff(&want) < 1e-14);
        assert!(m.warnings.is_empty());
    }

    #[test]
    fn three_ion_modes() {
        let a = dynamical_matrix(&solve_equilibrium(3).unwrap()).unwrap();
        let m = normal_modes(&a).unwrap();
        for (got, want) in m.eigenvalues.iter().zip([1.0, 3.0, 29.0 / 5.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_eigenvalues_warn() {
        let m = normal_modes(&Matrix::identity(3)).unwrap();
        assert_eq!(m.warnings.len(), 2);
    }

    #[test]
    fn sign_convention_ties_go_to_lowest_index() {
        let mut s = Matrix::from_rows(&[vec![-0.5, 0.5], vec![0.2, -0.9]]);
        fix_mode_signs(&mut s);
        assert_eq!(s.row(0), &[0.5, -0.5]);
        assert_eq!(s.row(1), &[-0.2, 0.9]);
    }

    #[test]
    fn length_scale_values() {
        let z = length_scale(&yb(10));
        assert!((z - 1.273e-5).abs() / 1.273e-5 < 1e-3, "{z}");
        let mut heavy = yb(10);
        heavy.species.mass *= 2.0;
        assert!((length_scale(&heavy) / z - 2f64.powf(-1.0 / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn ten_ion_min_spacing_near_seven_micron() {
        let chain = ChainSolution::solve(&yb(10)).unwrap();
        let d = chain.min_spacing().unwrap();
        assert!((d - 7e-6).abs() / 7e-6 < 0.05, "{d}");
        assert!((chain.ground_state_extents[0] - 17.2e-9).abs() / 17.2e-9 < 0.01);
    }

    #[test]
    fn single_ion_chain() {
        let chain = ChainSolution::solve(&yb(1)).unwrap();
        assert_eq!(chain.min_spacing(), None);
        assert_eq!(chain.mode_eigenvalues, vec![1.0]);
        assert!((chain.mode_frequencies[0] - chain.axial_frequency).abs() < 1e-9);
    }

    #[test]
    fn pipeline_is_deterministic() {
        let a = ChainSolution::solve(&yb(17)).unwrap();
        let b = ChainSolution::solve(&yb(17)).unwrap();
        assert_eq!(a, b);
    }
}
