//! Physical constants (CODATA 2018) and unit helpers.

use std::f64::consts::PI;

/// Speed of light in vacuum, m/s.
pub const C: f64 = 299_792_458.0;
/// Fine-structure constant.
pub const ALPHA: f64 = 7.297_352_5693e-3;
/// Bohr radius, m.
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;

pub const NM: f64 = 1e-9;
pub const FS: f64 = 1e-15;

/// Refractive index of the constant (silica-like) dielectric.
pub const SILICA_INDEX: f64 = 1.4534;

/// Angular frequency of vacuum wavelength `lambda` (m).
pub fn omega_from_wavelength(lambda: f64) -> f64 {
    2.0 * PI * C / lambda
}

/// Resonance of the default Drude-Lorentz dielectric, 2 pi c / 350 nm.
pub fn omega_350() -> f64 {
    omega_from_wavelength(350.0 * NM)
}

/// Default atomic transition, 2 pi c / 780 nm.
pub fn omega_780() -> f64 {
    omega_from_wavelength(780.0 * NM)
}
