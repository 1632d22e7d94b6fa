//! Hard frequency cutoff for the Drude-Lorentz bath.
//!
//! `cos(beta(omega) d)` oscillates ever faster as `beta` diverges at the
//! material resonance. The two-point integrand is truncated at a zero of
//! that factor, chosen among the zeros the frequency grid still resolves.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::waveguide::{solve_beta, DispersionTable};

/// Which zero of `cos(beta d)` becomes the cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffPolicy {
    /// Zeros counted downward from the highest resolvable one (0 = highest).
    pub zero_index: usize,
    /// Largest phase advance of `beta d` per grid step, rad.
    pub max_phase_step: f64,
    /// Relative change of the observable tolerated across the next two
    /// higher zeros.
    pub tolerance: f64,
}

impl Default for CutoffPolicy {
    fn default() -> Self {
        Self {
            zero_index: 2,
            max_phase_step: std::f64::consts::PI / 8.0,
            tolerance: 1e-3,
        }
    }
}

/// A zero of `cos(beta(omega) d)`: `beta(omega) d = (order + 1/2) pi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffZero {
    pub order: u64,
    pub omega: f64,
    /// `|cos(beta(omega) d)|` after polishing.
    pub residual: f64,
}

/// The top `count` zeros below the highest frequency at which the grid
/// spacing `omega_step` still resolves `cos(beta d)`, in descending order.
pub fn cutoff_zeros(
    table: &DispersionTable,
    separation: f64,
    omega_step: f64,
    policy: &CutoffPolicy,
    count: usize,
) -> Result<Vec<CutoffZero>> {
    if !(separation > 0.0) {
        return Err(Error::Cutoff(
            "cutoff zeros need a positive separation".into(),
        ));
    }
    let last_resolved = table
        .beta_prime
        .iter()
        .rposition(|&bp| bp * separation * omega_step <= policy.max_phase_step)
        .ok_or_else(|| Error::Cutoff("no resolvable frequency in the table".into()))?;
    let limit = last_resolved.min(table.len() - 2);
    let phase_top = table.beta[limit] * separation / std::f64::consts::PI - 0.5;
    let phase_bottom = table.beta[0] * separation / std::f64::consts::PI - 0.5;
    if phase_top < 0.0 || phase_top.floor() < phase_bottom.ceil() {
        return Err(Error::Cutoff(format!(
            "no zero of cos(beta d) below the resolvable limit {:e} rad/s; extend the grid or reduce d",
            table.omega[limit]
        )));
    }
    let top = phase_top.floor() as u64;
    let bottom = phase_bottom.ceil().max(0.0) as u64;
    let mut zeros = Vec::new();
    for order in (bottom..=top).rev().take(count) {
        zeros.push(polish_zero(table, separation, order)?);
    }
    Ok(zeros)
}

/// Locate `beta(omega) = (order + 1/2) pi / d` on the table, then refine
/// with secant steps on freshly solved propagation constants.
fn polish_zero(table: &DispersionTable, separation: f64, order: u64) -> Result<CutoffZero> {
    let target = (order as f64 + 0.5) * std::f64::consts::PI / separation;
    let mut w = table.omega_for_beta(target)?;
    let g = |w: f64| -> Result<f64> { Ok(solve_beta(&table.model, table.radius, w)? - target) };
    let mut gw = g(w)?;
    let mut w_prev = w * (1.0 - 1e-9);
    let mut g_prev = g(w_prev)?;
    for _ in 0..20 {
        if gw == 0.0 || (gw / target).abs() < 1e-15 {
            break;
        }
        let denom = gw - g_prev;
        if denom == 0.0 {
            break;
        }
        let next = w - gw * (w - w_prev) / denom;
        w_prev = w;
        g_prev = gw;
        w = next;
        gw = g(w)?;
    }
    let residual = (solve_beta(&table.model, table.radius, w)? * separation)
        .cos()
        .abs();
    Ok(CutoffZero {
        order,
        omega: w,
        residual,
    })
}

/// Cutoff frequency for a bath. Constant-index fibers need none and return
/// the top of the table.
pub fn choose_cutoff(
    table: &DispersionTable,
    separation: f64,
    omega_step: f64,
    policy: &CutoffPolicy,
) -> Result<f64> {
    if table.model.is_constant() {
        return Ok(table.omega_max());
    }
    let zeros = cutoff_zeros(table, separation, omega_step, policy, policy.zero_index + 1)?;
    zeros
        .get(policy.zero_index)
        .map(|z| z.omega)
        .ok_or_else(|| {
            Error::Cutoff(format!(
                "fewer than {} resolvable zeros",
                policy.zero_index + 1
            ))
        })
}

/// Outcome of the successive-zero convergence test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutoffConvergence {
    pub cutoff: CutoffZero,
    pub value: f64,
    /// Observable at the next higher zeros, nearest first.
    pub higher: Vec<(CutoffZero, f64)>,
    pub max_relative_change: f64,
    pub converged: bool,
}

/// Evaluate `observable(cutoff)` at the chosen zero and at the next two
/// higher zeros; converged when the relative change stays below the policy
/// tolerance.
pub fn converge_cutoff(
    table: &DispersionTable,
    separation: f64,
    omega_step: f64,
    policy: &CutoffPolicy,
    mut observable: impl FnMut(f64) -> Result<f64>,
) -> Result<CutoffConvergence> {
    if policy.zero_index < 2 {
        return Err(Error::Cutoff(
            "convergence test needs two resolvable zeros above the cutoff".into(),
        ));
    }
    let zeros = cutoff_zeros(table, separation, omega_step, policy, policy.zero_index + 1)?;
    if zeros.len() <= policy.zero_index {
        return Err(Error::Cutoff(format!(
            "fewer than {} resolvable zeros",
            policy.zero_index + 1
        )));
    }
    let cutoff = zeros[policy.zero_index];
    let value = observable(cutoff.omega)?;
    let mut higher = Vec::new();
    let mut worst: f64 = 0.0;
    for z in zeros[policy.zero_index - 2..policy.zero_index].iter().rev() {
        let v = observable(z.omega)?;
        worst = worst.max(((v - value) / value).abs());
        higher.push((*z, v));
    }
    Ok(CutoffConvergence {
        cutoff,
        value,
        higher,
        max_relative_change: worst,
        converged: worst < policy.tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::FrequencyGrid;
    use crate::constants::{omega_780, NM, SILICA_INDEX};
    use crate::waveguide::{build_dispersion_table, DielectricModel};

    fn dl_table() -> (DispersionTable, FrequencyGrid) {
        let model = DielectricModel::calibrated_drude_lorentz(omega_780(), SILICA_INDEX).unwrap();
        let grid = FrequencyGrid::new(omega_780(), 40.0, 8192).unwrap();
        (
            build_dispersion_table(&model, 200.0 * NM, &grid.positive_omegas(None)).unwrap(),
            grid,
        )
    }

    #[test]
    fn zeros_are_exact_and_below_resonance() {
        let (table, grid) = dl_table();
        let d = 780.0 * NM;
        let zeros = cutoff_zeros(&table, d, grid.step, &CutoffPolicy::default(), 5).unwrap();
        assert_eq!(zeros.len(), 5);
        let limit = table.model.guiding_limit().unwrap();
        for pair in zeros.windows(2) {
            assert!(pair[0].omega > pair[1].omega);
            assert_eq!(pair[0].order, pair[1].order + 1);
        }
        for z in &zeros {
            assert!(z.residual < 1e-9, "{z:?}");
            assert!(z.omega < limit);
        }
        let chosen = choose_cutoff(&table, d, grid.step, &CutoffPolicy::default()).unwrap();
        assert_eq!(chosen, zeros[2].omega);
    }

    #[test]
    fn sign_flips_sit_at_zeros() {
        let (table, grid) = dl_table();
        let d = 1560.0 * NM;
        let zeros = cutoff_zeros(&table, d, grid.step, &CutoffPolicy::default(), 1000).unwrap();
        let resolved = zeros[0].omega;
        let mut flips = Vec::new();
        for k in 1..table.len() {
            if table.omega[k - 1] > resolved {
                break;
            }
            let (a, b) = ((table.beta[k - 1] * d).cos(), (table.beta[k] * d).cos());
            if a.signum() != b.signum() {
                flips.push((table.omega[k - 1], table.omega[k]));
            }
        }
        assert_eq!(flips.len(), zeros.len());
        for ((lo, hi), z) in flips.iter().zip(zeros.iter().rev()) {
            assert!(*lo <= z.omega && z.omega <= *hi);
        }
    }

    #[test]
    fn constant_model_needs_no_cutoff() {
        let grid = FrequencyGrid::new(omega_780(), 40.0, 1024).unwrap();
        let table = build_dispersion_table(
            &DielectricModel::silica(),
            200.0 * NM,
            &grid.positive_omegas(None),
        )
        .unwrap();
        let c = choose_cutoff(&table, 780.0 * NM, grid.step, &CutoffPolicy::default()).unwrap();
        assert_eq!(c, table.omega_max());
    }

    #[test]
    fn too_small_separation_has_no_zero() {
        let (table, grid) = dl_table();
        let err =
            cutoff_zeros(&table, 1.0 * NM, grid.step, &CutoffPolicy::default(), 3).unwrap_err();
        assert!(matches!(err, Error::Cutoff(_)));
    }

    #[test]
    fn convergence_uses_two_higher_zeros() {
        let (table, grid) = dl_table();
        let mut seen = Vec::new();
        let conv = converge_cutoff(
            &table,
            780.0 * NM,
            grid.step,
            &CutoffPolicy::default(),
            |w| {
                seen.push(w);
                Ok(1.0)
            },
        )
        .unwrap();
        assert_eq!(seen.len(), 3);
        assert!(conv.converged);
        assert!(seen[1] > seen[0] && seen[2] > seen[1]);
    }
}
