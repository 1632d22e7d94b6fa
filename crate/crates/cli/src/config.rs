use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use nanofiber::bath::{CutoffPolicy, FrequencyGrid};
use nanofiber::constants::{omega_350, omega_from_wavelength, NM, SILICA_INDEX};
use nanofiber::io::sha256_hex;
use nanofiber::pipeline::omega_for_guided_wavelength;
use nanofiber::waveguide::{calibrate_plasma_frequency, default_gamma_r, DielectricModel};
use nanofiber::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Constant,
    DrudeLorentz,
}

impl ModelKind {
    pub fn label(self) -> &'static str {
        match self {
            Self::Constant => "constant",
            Self::DrudeLorentz => "drude_lorentz",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Material {
    pub n1: f64,
    /// Drude-Lorentz resonance, rad/s (default `2 pi c / 350 nm`).
    pub omega_r: Option<f64>,
    /// Drude-Lorentz damping, rad/s (default radiative width at `omega_r`).
    pub gamma_r: Option<f64>,
}

impl Default for Material {
    fn default() -> Self {
        Self {
            n1: SILICA_INDEX,
            omega_r: None,
            gamma_r: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Omega0Policy {
    /// `omega0 = 2 pi c / lambda0`.
    VacuumWavelength,
    /// `beta(omega0) = 2 pi / lambda0`.
    Beta0SetsLambda,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeparationUnit {
    /// Multiples of `pi / beta0`.
    PiOverBeta0,
    Nm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Separations {
    pub unit: SeparationUnit,
    pub values: Vec<f64>,
}

impl Default for Separations {
    fn default() -> Self {
        Self {
            unit: SeparationUnit::PiOverBeta0,
            values: vec![2.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialStateChoice {
    Single,
    Symmetric,
    Antisymmetric,
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub omega_max_multiplier: f64,
    pub n: usize,
    /// Re-run the single-atom rate with the frequency window doubled.
    pub check_omega_max: bool,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            omega_max_multiplier: 40.0,
            n: 65536,
            check_omega_max: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    /// Upper bound on the step; the grid is refined until `dt <= h_fs`.
    pub h_fs: Option<f64>,
    pub t_fs: f64,
    pub max_halvings: usize,
    pub tolerance: f64,
    /// Run the step-halving convergence check on every evolution.
    pub refine: bool,
    /// Zero the partner kernel (decoupled atoms).
    pub decouple: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            h_fs: None,
            t_fs: 2000.0,
            max_halvings: 4,
            tolerance: 1e-4,
            refine: true,
            decouple: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Thresholds {
    pub establish_const: f64,
    pub establish_dl: f64,
    pub fit_start_fs: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            establish_const: 0.99,
            establish_dl: 0.01,
            fit_start_fs: 300.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CutoffConfig {
    pub zero_index: usize,
    pub max_phase_step: f64,
    pub tolerance: f64,
    /// Evaluate the single-atom rate at the next two higher zeros.
    pub check_convergence: bool,
}

impl Default for CutoffConfig {
    fn default() -> Self {
        let p = CutoffPolicy::default();
        Self {
            zero_index: p.zero_index,
            max_phase_step: p.max_phase_step,
            tolerance: p.tolerance,
            check_convergence: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub models: Vec<ModelKind>,
    pub material: Material,
    pub radius_nm: Vec<f64>,
    pub clearance_nm: f64,
    pub lambda0_nm: f64,
    pub omega0_policy: Omega0Policy,
    pub separations: Separations,
    pub initial_state: InitialStateChoice,
    pub gamma_target: f64,
    pub grid: GridConfig,
    pub solver: SolverConfig,
    pub thresholds: Thresholds,
    pub cutoff: CutoffConfig,
    pub output_dir: PathBuf,
    pub cache_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            models: vec![ModelKind::Constant, ModelKind::DrudeLorentz],
            material: Material::default(),
            radius_nm: vec![200.0],
            clearance_nm: 100.0,
            lambda0_nm: 780.0,
            omega0_policy: Omega0Policy::VacuumWavelength,
            separations: Separations::default(),
            initial_state: InitialStateChoice::All,
            gamma_target: 0.5e12,
            grid: GridConfig::default(),
            solver: SolverConfig::default(),
            thresholds: Thresholds::default(),
            cutoff: CutoffConfig::default(),
            output_dir: PathBuf::from("results"),
            cache_dir: PathBuf::from("cache"),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("invalid config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.models.is_empty() {
            return fail("models: at least one model is required".into());
        }
        if self.radius_nm.is_empty() || self.radius_nm.iter().any(|a| !(*a >= 150.0)) {
            return fail(format!(
                "radius_nm: every radius must be >= 150 nm, got {:?}",
                self.radius_nm
            ));
        }
        if !(self.clearance_nm >= 0.0) {
            return fail("clearance_nm must be >= 0".into());
        }
        if !(self.material.n1 > 1.0) {
            return fail(format!(
                "material.n1 must exceed 1, got {}",
                self.material.n1
            ));
        }
        if !(self.lambda0_nm > 0.0) {
            return fail("lambda0_nm must be positive".into());
        }
        if self.separations.values.iter().any(|d| !(*d >= 0.0)) {
            return fail("separations.values must be >= 0".into());
        }
        if !(self.gamma_target > 0.0) {
            return fail("gamma_target must be positive".into());
        }
        if !self.grid.n.is_power_of_two() || self.grid.n < 16 {
            return fail(format!(
                "grid.n must be a power of two >= 16, got {}",
                self.grid.n
            ));
        }
        if !(self.grid.omega_max_multiplier > 1.0) {
            return fail("grid.omega_max_multiplier must exceed 1".into());
        }
        let t = &self.thresholds;
        for (name, v) in [
            ("establish_const", t.establish_const),
            ("establish_dl", t.establish_dl),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return fail(format!("thresholds.{name} must lie in (0, 1), got {v}"));
            }
        }
        if !(t.fit_start_fs >= 0.0 && t.fit_start_fs < self.solver.t_fs) {
            return fail("thresholds.fit_start_fs must lie in [0, solver.t_fs)".into());
        }
        if !(self.solver.t_fs > 0.0) || !(self.solver.tolerance > 0.0) {
            return fail("solver.t_fs and solver.tolerance must be positive".into());
        }
        if let Some(h) = self.solver.h_fs {
            if !(h > 0.0) {
                return fail("solver.h_fs must be positive".into());
            }
        }
        if !(self.cutoff.max_phase_step > 0.0) || !(self.cutoff.tolerance > 0.0) {
            return fail("cutoff.max_phase_step and cutoff.tolerance must be positive".into());
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// SHA-256 of the compact effective configuration.
    /// Digest of the physical configuration; output and cache locations are excluded.
    pub fn hash(&self) -> String {
        let mut physical = self.clone();
        physical.output_dir = PathBuf::new();
        physical.cache_dir = PathBuf::new();
        sha256_hex(&serde_json::to_vec(&physical).expect("config serializes"))
    }

    pub fn cutoff_policy(&self) -> CutoffPolicy {
        CutoffPolicy {
            zero_index: self.cutoff.zero_index,
            max_phase_step: self.cutoff.max_phase_step,
            tolerance: self.cutoff.tolerance,
        }
    }

    /// Atomic frequency for a fiber radius under the active policy.
    pub fn omega0(&self, radius_nm: f64) -> Result<f64> {
        let lambda = self.lambda0_nm * NM;
        match self.omega0_policy {
            Omega0Policy::VacuumWavelength => Ok(omega_from_wavelength(lambda)),
            Omega0Policy::Beta0SetsLambda => {
                omega_for_guided_wavelength(self.material.n1, radius_nm * NM, lambda)
            }
        }
    }

    pub fn dielectric(&self, kind: ModelKind, omega0: f64) -> Result<DielectricModel> {
        match kind {
            ModelKind::Constant => DielectricModel::constant(self.material.n1),
            ModelKind::DrudeLorentz => {
                let omega_r = self.material.omega_r.unwrap_or_else(omega_350);
                let gamma_r = self
                    .material
                    .gamma_r
                    .unwrap_or_else(|| default_gamma_r(omega_r));
                let omega_p =
                    calibrate_plasma_frequency(omega_r, gamma_r, omega0, self.material.n1)?;
                DielectricModel::drude_lorentz(omega_r, gamma_r, omega_p)
            }
        }
    }

    /// Frequency grid; checks that the final time fits the correlation window.
    pub fn frequency_grid(&self, omega0: f64) -> Result<FrequencyGrid> {
        let grid = FrequencyGrid::new(omega0, self.grid.omega_max_multiplier, self.grid.n)?;
        let window = 0.5 * grid.len as f64 * grid.time_step() / nanofiber::constants::FS;
        if self.solver.t_fs >= window - 1.0 {
            return Err(Error::Config(format!(
                "solver.t_fs = {} fs does not fit the correlation window of {window:.1} fs; raise grid.n or lower omega_max_multiplier",
                self.solver.t_fs
            )));
        }
        Ok(grid)
    }
}
