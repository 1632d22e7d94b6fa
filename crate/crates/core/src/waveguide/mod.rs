//! Nanofiber waveguide: dielectric models, the HE11 dispersion relation and
//! the evanescent mode profile.

mod dielectric;
mod dispersion;
mod mode;

pub use dielectric::{calibrate_plasma_frequency, default_gamma_r, DielectricModel};
pub use dispersion::{
    build_dispersion_table, characteristic_product, dispersion_residual, fiber_parameters,
    solve_beta, DispersionTable, FiberParameters, BRACKET_DELTA,
};
pub use mode::{mode_s_parameter, ModeProfile};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fiber radius and atomic placement, all lengths in metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberGeometry {
    pub radius: f64,
    /// Radial distance of the atoms from the fiber surface.
    pub clearance: f64,
    /// Axial separation between the atoms.
    pub separation: f64,
}

impl FiberGeometry {
    pub fn new(radius: f64, clearance: f64, separation: f64) -> Result<Self> {
        if !(radius > 0.0) || !(clearance >= 0.0) || !(separation >= 0.0) {
            return Err(Error::Domain(format!(
                "invalid geometry a = {radius:e}, R = {clearance:e}, d = {separation:e}"
            )));
        }
        Ok(Self {
            radius,
            clearance,
            separation,
        })
    }

    /// Radial coordinate of the atoms, `a + R`.
    pub fn atom_radius(&self) -> f64 {
        self.radius + self.clearance
    }
}
