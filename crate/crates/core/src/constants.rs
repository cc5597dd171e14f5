//! CODATA 2018 physical constants in SI units.

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Bohr magneton, J/T.
pub const BOHR_MAGNETON: f64 = 9.274_010_078_3e-24;
/// Elementary charge, C (exact).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Vacuum permittivity, F/m.
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
/// Unified atomic mass unit, kg.
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;
/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// The constant set as a value, for code that wants to pass it around or
/// print it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub bohr_magneton: f64,
    pub elementary_charge: f64,
    pub vacuum_permittivity: f64,
    pub atomic_mass_unit: f64,
    pub speed_of_light: f64,
}

pub const CODATA: PhysicalConstants = PhysicalConstants {
    hbar: HBAR,
    bohr_magneton: BOHR_MAGNETON,
    elementary_charge: ELEMENTARY_CHARGE,
    vacuum_permittivity: VACUUM_PERMITTIVITY,
    atomic_mass_unit: ATOMIC_MASS_UNIT,
    speed_of_light: SPEED_OF_LIGHT,
};

/// Coulomb constant e²/(4πε₀), J·m.
pub fn coulomb_energy_scale() -> f64 {
    ELEMENTARY_CHARGE * ELEMENTARY_CHARGE / (4.0 * std::f64::consts::PI * VACUUM_PERMITTIVITY)
}
