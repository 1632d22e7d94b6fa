use serde::{Deserialize, Serialize};

use crate::constants::{omega_350, ALPHA, BOHR_RADIUS, C, SILICA_INDEX};
use crate::error::{Error, Result};

/// Relative permittivity of the fiber material. Only the real part is used:
/// absorption is neglected so that the propagation constant stays real.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DielectricModel {
    Constant {
        n1: f64,
    },
    DrudeLorentz {
        omega_r: f64,
        gamma_r: f64,
        omega_p: f64,
    },
}

/// Radiative damping of a dipole constituent at `omega_r`:
/// `4 alpha a0^2 omega_r^3 / (3 c^2)`.
pub fn default_gamma_r(omega_r: f64) -> f64 {
    4.0 * ALPHA * BOHR_RADIUS * BOHR_RADIUS * omega_r.powi(3) / (3.0 * C * C)
}

/// Plasma frequency that makes `Re eps(omega0) = n1^2`.
///
/// `Re eps - 1` is linear in `omega_p^2`, so the root in `omega_p^2` is
/// obtained exactly from a single evaluation of the response function.
pub fn calibrate_plasma_frequency(omega_r: f64, gamma_r: f64, omega0: f64, n1: f64) -> Result<f64> {
    if !(omega0 < omega_r) || !(omega0 >= 0.0) {
        return Err(Error::Calibration(format!(
            "atomic frequency {omega0:e} must lie below the resonance {omega_r:e}"
        )));
    }
    if !(n1 > 1.0) {
        return Err(Error::Calibration(format!(
            "target index {n1} must exceed 1"
        )));
    }
    let response = lorentz_response(omega_r, gamma_r, omega0);
    if !(response > 0.0) {
        return Err(Error::Calibration(
            "non-positive oscillator response".into(),
        ));
    }
    Ok(((n1 * n1 - 1.0) / response).sqrt())
}

/// `Re[1 / ((omega_r^2 - omega^2) - i gamma omega)]`.
fn lorentz_response(omega_r: f64, gamma_r: f64, omega: f64) -> f64 {
    let detuning = omega_r * omega_r - omega * omega;
    let damping = gamma_r * omega;
    detuning / (detuning * detuning + damping * damping)
}

impl DielectricModel {
    pub fn constant(n1: f64) -> Result<Self> {
        if !(n1 > 1.0) {
            return Err(Error::Domain(format!("guiding requires n1 > 1, got {n1}")));
        }
        Ok(Self::Constant { n1 })
    }

    /// Constant model with the silica-like index 1.4534.
    pub fn silica() -> Self {
        Self::Constant { n1: SILICA_INDEX }
    }

    pub fn drude_lorentz(omega_r: f64, gamma_r: f64, omega_p: f64) -> Result<Self> {
        if !(omega_r > 0.0) || !(gamma_r >= 0.0) || !(omega_p > 0.0) {
            return Err(Error::Domain(format!(
                "invalid Drude-Lorentz parameters omega_r = {omega_r:e}, gamma_r = {gamma_r:e}, omega_p = {omega_p:e}"
            )));
        }
        Ok(Self::DrudeLorentz {
            omega_r,
            gamma_r,
            omega_p,
        })
    }

    /// Drude-Lorentz model resonant at 350 nm with radiative damping,
    /// calibrated to index `n1` at `omega0`.
    pub fn calibrated_drude_lorentz(omega0: f64, n1: f64) -> Result<Self> {
        let omega_r = omega_350();
        let gamma_r = default_gamma_r(omega_r);
        let omega_p = calibrate_plasma_frequency(omega_r, gamma_r, omega0, n1)?;
        Self::drude_lorentz(omega_r, gamma_r, omega_p)
    }

    /// Real part of the relative permittivity.
    pub fn permittivity(&self, omega: f64) -> f64 {
        match *self {
            Self::Constant { n1 } => n1 * n1,
            Self::DrudeLorentz {
                omega_r,
                gamma_r,
                omega_p,
            } => 1.0 + omega_p * omega_p * lorentz_response(omega_r, gamma_r, omega),
        }
    }

    /// Refractive index, or `None` where the permittivity is not positive.
    pub fn refractive_index(&self, omega: f64) -> Option<f64> {
        let eps = self.permittivity(omega);
        (eps > 0.0).then(|| eps.sqrt())
    }

    /// Whether the core index exceeds the vacuum cladding at `omega`.
    pub fn guides(&self, omega: f64) -> bool {
        self.refractive_index(omega).is_some_and(|n| n > 1.0)
    }

    /// Upper end of the guiding range (the resonance for Drude-Lorentz).
    pub fn guiding_limit(&self) -> Option<f64> {
        match *self {
            Self::Constant { .. } => None,
            Self::DrudeLorentz { omega_r, .. } => Some(omega_r),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Self::Constant { .. })
    }

    /// Stable identifier used to key caches and provenance records.
    pub fn fingerprint(&self) -> String {
        match *self {
            Self::Constant { n1 } => format!("constant:n1={:016x}", n1.to_bits()),
            Self::DrudeLorentz {
                omega_r,
                gamma_r,
                omega_p,
            } => format!(
                "drude_lorentz:wr={:016x}:g={:016x}:wp={:016x}",
                omega_r.to_bits(),
                gamma_r.to_bits(),
                omega_p.to_bits()
            ),
        }
    }
}
