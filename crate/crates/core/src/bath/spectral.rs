use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::cubic_uniform;
use crate::waveguide::{DielectricModel, DispersionTable, ModeProfile};

/// Uniform frequency grid `omega_i = i * step`, `i = 0..len`, with the atomic
/// frequency on the grid (`omega0 = omega0_index * step`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    pub len: usize,
    pub step: f64,
    pub omega0_index: usize,
}

impl FrequencyGrid {
    /// Grid of `len` points (a power of two) spanning about
    /// `omega_max_multiplier * omega0`.
    pub fn new(omega0: f64, omega_max_multiplier: f64, len: usize) -> Result<Self> {
        if !len.is_power_of_two() || len < 16 {
            return Err(Error::Config(format!(
                "grid size {len} must be a power of two >= 16"
            )));
        }
        if !(omega_max_multiplier > 1.0) || !(omega0 > 0.0) {
            return Err(Error::Config("omega_max must exceed omega0 > 0".into()));
        }
        let omega0_index = (len as f64 / omega_max_multiplier).round() as usize;
        if omega0_index == 0 || omega0_index >= len {
            return Err(Error::Config(
                "omega0 falls outside the frequency grid".into(),
            ));
        }
        Ok(Self {
            len,
            step: omega0 / omega0_index as f64,
            omega0_index,
        })
    }

    /// Same spacing, twice the bandwidth: halves the time step.
    pub fn refined(&self) -> Self {
        Self {
            len: 2 * self.len,
            ..*self
        }
    }

    pub fn omega(&self, i: usize) -> f64 {
        i as f64 * self.step
    }

    pub fn omega0(&self) -> f64 {
        self.omega(self.omega0_index)
    }

    pub fn omega_max(&self) -> f64 {
        self.omega(self.len - 1)
    }

    /// Time step of the transform, `2 pi / (len * step)`.
    pub fn time_step(&self) -> f64 {
        2.0 * std::f64::consts::PI / (self.len as f64 * self.step)
    }

    /// Grid points `1..len` below `limit` (exclusive), as input for a
    /// dispersion table.
    pub fn positive_omegas(&self, limit: Option<f64>) -> Vec<f64> {
        (1..self.len)
            .map(|i| self.omega(i))
            .take_while(|&w| limit.map_or(true, |l| w < l))
            .collect()
    }
}

/// Normalized HE11 profiles on every row of a dispersion table.
#[derive(Debug, Clone)]
pub struct ModeTable {
    pub model: DielectricModel,
    pub radius: f64,
    pub profiles: Vec<ModeProfile>,
}

impl ModeTable {
    pub fn from_dispersion(table: &DispersionTable) -> Result<Self> {
        let profiles = table
            .omega
            .iter()
            .zip(&table.beta)
            .map(|(&w, &b)| ModeProfile::new(&table.model, table.radius, w, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            model: table.model,
            radius: table.radius,
            profiles,
        })
    }
}

/// Spectral densities sampled on a [`FrequencyGrid`]; zero outside the
/// guided range and above the cutoff.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralGrid {
    pub grid: FrequencyGrid,
    /// One-point density `S(omega, R)`, rad/s per unit frequency.
    pub s_one: Vec<f64>,
    /// Two-point integrand `S(omega, R) cos(beta(omega) d)`.
    pub s_two: Vec<f64>,
    /// `beta'(omega)` on the grid, zero outside the guided range.
    pub beta_prime: Vec<f64>,
    /// Target Markovian amplitude decay rate `pi S(omega0)`, 1/s.
    pub coupling_scale: f64,
    /// Factor converting `omega beta' |e_r|^2` into `S`.
    pub prefactor: f64,
    pub separation: f64,
    pub cutoff_omega: f64,
    pub model: DielectricModel,
    pub radius: f64,
    pub clearance: f64,
}

/// `S(omega, R) = prefactor * omega * beta'(omega) * |e_r(omega, a + R)|^2`
/// on the frequency grid, with the prefactor chosen so that
/// `pi S(omega0) = coupling_scale`.
pub fn one_point_spectral_density(
    table: &DispersionTable,
    modes: &ModeTable,
    grid: &FrequencyGrid,
    clearance: f64,
    coupling_scale: f64,
) -> Result<SpectralGrid> {
    if modes.model != table.model
        || modes.radius != table.radius
        || modes.profiles.len() != table.len()
    {
        return Err(Error::Config(
            "mode table and dispersion table describe different fibers".into(),
        ));
    }
    if !(clearance >= 0.0) || !(coupling_scale > 0.0) {
        return Err(Error::Config(
            "clearance must be >= 0 and coupling scale > 0".into(),
        ));
    }
    let offset = grid_offset(table, grid)?;
    let r = table.radius + clearance;
    let mut raw = vec![0.0; grid.len];
    let mut beta_prime = vec![0.0; grid.len];
    beta_prime[offset..offset + table.len()].copy_from_slice(&table.beta_prime);
    for (k, profile) in modes.profiles.iter().enumerate() {
        let er = profile.e_r(r.max(table.radius * (1.0 + 1e-12)))?.norm_sqr();
        raw[offset + k] = table.omega[k] * table.beta_prime[k] * er;
    }
    let at_omega0 = raw[grid.omega0_index];
    if !(at_omega0 > 0.0) {
        return Err(Error::Config(
            "spectral density vanishes at the atomic frequency".into(),
        ));
    }
    let prefactor = coupling_scale / (std::f64::consts::PI * at_omega0);
    let s_one: Vec<f64> = raw.iter().map(|v| v * prefactor).collect();
    Ok(SpectralGrid {
        grid: *grid,
        s_two: s_one.clone(),
        s_one,
        beta_prime,
        coupling_scale,
        prefactor,
        separation: 0.0,
        cutoff_omega: table.omega_max(),
        model: table.model,
        radius: table.radius,
        clearance,
    })
}

/// Index of the first table row on the frequency grid.
fn grid_offset(table: &DispersionTable, grid: &FrequencyGrid) -> Result<usize> {
    let pos = table.omega_min() / grid.step;
    let offset = pos.round() as usize;
    let aligned =
        (pos - offset as f64).abs() < 1e-6 && ((table.step() - grid.step) / grid.step).abs() < 1e-9;
    if !aligned || offset + table.len() > grid.len {
        return Err(Error::Config(
            "dispersion table is not sampled on the frequency grid".into(),
        ));
    }
    Ok(offset)
}

/// Replace the two-point part with `S_one(omega) cos(beta(omega) d)`.
pub fn two_point_integrand(
    spectral: &SpectralGrid,
    table: &DispersionTable,
    separation: f64,
) -> Result<SpectralGrid> {
    if !(separation >= 0.0) {
        return Err(Error::Domain(format!(
            "separation {separation:e} must be >= 0"
        )));
    }
    let offset = grid_offset(table, &spectral.grid)?;
    let mut s_two = vec![0.0; spectral.grid.len];
    for (i, slot) in s_two.iter_mut().enumerate() {
        let s = spectral.s_one[i];
        if s != 0.0 {
            let beta = table.beta[i - offset];
            *slot = if separation == 0.0 {
                s
            } else {
                s * (beta * separation).cos()
            };
        }
    }
    Ok(SpectralGrid {
        s_two,
        separation,
        ..spectral.clone()
    })
}

impl SpectralGrid {
    /// Zero both densities above `cutoff_omega`.
    pub fn with_cutoff(&self, cutoff_omega: f64) -> Result<Self> {
        if !(cutoff_omega > self.grid.omega0()) {
            return Err(Error::Cutoff(format!(
                "cutoff {cutoff_omega:e} must lie above omega0"
            )));
        }
        let mut out = self.clone();
        for i in 0..self.grid.len {
            if self.grid.omega(i) > cutoff_omega {
                out.s_one[i] = 0.0;
                out.s_two[i] = 0.0;
            }
        }
        out.cutoff_omega = cutoff_omega.min(self.cutoff_omega);
        Ok(out)
    }

    /// Same densities on a grid of twice the bandwidth, zero above the old
    /// top. Halves the correlation time step without touching the bath.
    pub fn zero_padded(&self) -> Self {
        let grid = self.grid.refined();
        let pad = |v: &Vec<f64>| {
            let mut out = v.clone();
            out.resize(grid.len, 0.0);
            out
        };
        Self {
            grid,
            s_one: pad(&self.s_one),
            s_two: pad(&self.s_two),
            beta_prime: pad(&self.beta_prime),
            ..self.clone()
        }
    }

    /// Copy with the densities multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            s_one: self.s_one.iter().map(|v| v * factor).collect(),
            s_two: self.s_two.iter().map(|v| v * factor).collect(),
            coupling_scale: self.coupling_scale * factor,
            prefactor: self.prefactor * factor,
            ..self.clone()
        }
    }

    /// Largest phase advance of `beta d` between neighbouring grid points
    /// where the density is non-zero.
    pub fn max_phase_step(&self) -> f64 {
        self.s_one
            .iter()
            .zip(&self.beta_prime)
            .filter(|(s, _)| **s != 0.0)
            .map(|(_, bp)| bp.abs())
            .fold(0.0, f64::max)
            * self.separation
            * self.grid.step
    }

    /// Highest grid index carrying a non-zero density.
    pub fn support_end(&self) -> usize {
        self.s_one.iter().rposition(|&v| v != 0.0).unwrap_or(0)
    }
}

/// Markovian amplitude decay rate `pi S(omega0)`.
pub fn markovian_rate(spectral: &SpectralGrid, omega0: f64) -> Result<f64> {
    let s = cubic_uniform(0.0, spectral.grid.step, &spectral.s_one, omega0)
        .ok_or_else(|| Error::Domain(format!("omega0 = {omega0:e} outside the spectral grid")))?;
    Ok(std::f64::consts::PI * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{omega_780, NM, SILICA_INDEX};
    use crate::waveguide::build_dispersion_table;

    fn setup(model: DielectricModel) -> (DispersionTable, SpectralGrid) {
        let grid = FrequencyGrid::new(omega_780(), 40.0, 2048).unwrap();
        let table =
            build_dispersion_table(&model, 200.0 * NM, &grid.positive_omegas(None)).unwrap();
        let modes = ModeTable::from_dispersion(&table).unwrap();
        let sp = one_point_spectral_density(&table, &modes, &grid, 100.0 * NM, 0.5e12).unwrap();
        (table, sp)
    }

    #[test]
    fn density_is_nonnegative_and_anchored() {
        let (_, sp) = setup(DielectricModel::silica());
        assert!(sp.s_one.iter().all(|&s| s >= 0.0));
        assert!(sp.s_one[sp.grid.omega0_index] > 0.0);
        let rate = markovian_rate(&sp, sp.grid.omega0()).unwrap();
        assert!((rate / 0.5e12 - 1.0).abs() < 1e-12);
        let doubled = sp.scaled(2.0);
        assert!(sp
            .s_one
            .iter()
            .zip(&doubled.s_one)
            .all(|(a, b)| *b == 2.0 * a));
        assert!((markovian_rate(&doubled, sp.grid.omega0()).unwrap() / rate - 2.0).abs() < 1e-12);
        assert!(markovian_rate(&sp, 2.0 * sp.grid.omega_max()).is_err());
    }

    #[test]
    fn two_point_integrand_is_bounded() {
        let (table, sp) = setup(DielectricModel::silica());
        let same = two_point_integrand(&sp, &table, 0.0).unwrap();
        assert_eq!(same.s_two, sp.s_one);
        let two = two_point_integrand(&sp, &table, 780.0 * NM).unwrap();
        assert!(two.s_two.iter().zip(&two.s_one).all(|(a, b)| a.abs() <= *b));
        assert!(two_point_integrand(&sp, &table, -1.0).is_err());
    }

    #[test]
    fn mismatched_tables_are_rejected() {
        let (table, sp) = setup(DielectricModel::silica());
        let other =
            build_dispersion_table(&DielectricModel::silica(), 250.0 * NM, &table.omega).unwrap();
        let modes = ModeTable::from_dispersion(&other).unwrap();
        let err =
            one_point_spectral_density(&table, &modes, &sp.grid, 100.0 * NM, 1.0).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn drude_lorentz_support_ends_below_resonance() {
        let model = DielectricModel::calibrated_drude_lorentz(omega_780(), SILICA_INDEX).unwrap();
        let (table, sp) = setup(model);
        let limit = model.guiding_limit().unwrap();
        assert!(sp.grid.omega(sp.support_end()) < limit);
        assert!(table.omega_max() < limit);
        let cut = sp.with_cutoff(1.5 * omega_780()).unwrap();
        assert!(cut
            .s_one
            .iter()
            .enumerate()
            .all(|(i, s)| sp.grid.omega(i) <= 1.5 * omega_780() || *s == 0.0));
        assert!(sp.with_cutoff(0.5 * omega_780()).is_err());
    }

    #[test]
    fn refined_grid_keeps_spacing() {
        let grid = FrequencyGrid::new(omega_780(), 40.0, 1024).unwrap();
        let fine = grid.refined();
        assert_eq!(fine.step, grid.step);
        assert_eq!(fine.omega0(), grid.omega0());
        assert!((fine.time_step() * 2.0 - grid.time_step()).abs() < 1e-30);
        assert!(FrequencyGrid::new(omega_780(), 40.0, 1000).is_err());
    }
}
