use serde::{Deserialize, Serialize};

use super::{
    communication_time, establishment_time, fit_decay_rate, DecayFit, EstablishmentRule,
    GammaSeries, Intersection,
};
use crate::constants::FS;
use crate::dynamics::{EvolutionResult, InitialState};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preparation {
    Symmetric,
    Antisymmetric,
}

/// Everything one geometry contributes to a report.
pub struct ReportInputs<'a> {
    /// Lone atom (no partner kernel), single excitation.
    pub single: &'a EvolutionResult,
    pub symmetric: &'a EvolutionResult,
    pub antisymmetric: &'a EvolutionResult,
    pub gamma: Option<&'a GammaSeries>,
    pub rule: EstablishmentRule,
    /// Separation, m.
    pub separation: f64,
    /// Group velocity at the atomic frequency, m/s.
    pub group_velocity: f64,
    /// Markovian amplitude rate, 1/s.
    pub gamma_markov: f64,
    /// Start of the fit window, s.
    pub fit_start: f64,
}

/// Population decay rates are in 1/s, times in fs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub separation_m: f64,
    pub gamma_markov: f64,
    pub gamma_single: f64,
    /// Superradiant (larger) collective rate.
    pub gamma_plus: f64,
    /// Subradiant (smaller) collective rate.
    pub gamma_minus: f64,
    pub quotient_plus: f64,
    pub quotient_minus: f64,
    pub superradiant: Preparation,
    pub fit_single: DecayFit,
    pub fit_symmetric: DecayFit,
    pub fit_antisymmetric: DecayFit,
    pub t_com_symmetric_fs: Option<f64>,
    pub t_com_antisymmetric_fs: Option<f64>,
    pub t_com_symmetric_stderr_fs: Option<f64>,
    pub t_com_antisymmetric_stderr_fs: Option<f64>,
    pub v_com_symmetric: Option<f64>,
    pub v_com_antisymmetric: Option<f64>,
    pub group_velocity: f64,
    pub t_vg_fs: f64,
    pub t_est_fs: Option<f64>,
    pub t_est_over_t_vg: Option<f64>,
    pub max_quotient: Option<f64>,
    pub establishment_rule: EstablishmentRule,
    pub notes: Vec<String>,
}

impl AnalysisReport {
    pub fn build(inputs: &ReportInputs) -> Result<Self> {
        let fit =
            |r: &EvolutionResult, p: Vec<f64>| fit_decay_rate(&r.times(), &p, inputs.fit_start);
        let fit_single = fit(inputs.single, inputs.single.population1())?;
        let fit_symmetric = fit(
            inputs.symmetric,
            inputs
                .symmetric
                .collective_population(&InitialState::symmetric()),
        )?;
        let fit_antisymmetric = fit(
            inputs.antisymmetric,
            inputs
                .antisymmetric
                .collective_population(&InitialState::antisymmetric()),
        )?;
        let (superradiant, plus, minus) = if fit_symmetric.rate >= fit_antisymmetric.rate {
            (Preparation::Symmetric, fit_symmetric, fit_antisymmetric)
        } else {
            (Preparation::Antisymmetric, fit_antisymmetric, fit_symmetric)
        };
        let mut notes = Vec::new();
        let mut t_com = |coll: &DecayFit, label: &str| match communication_time(&fit_single, coll) {
            Ok(x) if x.time > 0.0 => Some(x),
            Ok(x) => {
                notes.push(format!(
                    "{label}: lines intersect at negative time {:.3} fs",
                    x.time / FS
                ));
                None
            }
            Err(e) => {
                notes.push(format!("{label}: {e}"));
                None
            }
        };
        let t_com_symmetric = t_com(&fit_symmetric, "symmetric");
        let t_com_antisymmetric = t_com(&fit_antisymmetric, "antisymmetric");
        let t_vg = inputs.separation / inputs.group_velocity;
        let (t_est, max_quotient) = match inputs.gamma.map(|g| establishment_time(g, inputs.rule)) {
            Some(Ok(e)) => (Some(e.t_est), Some(e.max_quotient)),
            Some(Err(e)) => {
                notes.push(format!("establishment: {e}"));
                (None, None)
            }
            None => (None, None),
        };
        let speed = |t: Option<Intersection>| t.map(|x| inputs.separation / x.time);
        let fs = |t: Option<Intersection>| t.map(|x| x.time / FS);
        let err_fs = |t: Option<Intersection>| t.map(|x| x.stderr / FS);
        Ok(Self {
            separation_m: inputs.separation,
            gamma_markov: inputs.gamma_markov,
            gamma_single: fit_single.rate,
            gamma_plus: plus.rate,
            gamma_minus: minus.rate,
            quotient_plus: plus.rate / fit_single.rate,
            quotient_minus: minus.rate / fit_single.rate,
            superradiant,
            fit_single,
            fit_symmetric,
            fit_antisymmetric,
            t_com_symmetric_fs: fs(t_com_symmetric),
            t_com_antisymmetric_fs: fs(t_com_antisymmetric),
            t_com_symmetric_stderr_fs: err_fs(t_com_symmetric),
            t_com_antisymmetric_stderr_fs: err_fs(t_com_antisymmetric),
            v_com_symmetric: speed(t_com_symmetric),
            v_com_antisymmetric: speed(t_com_antisymmetric),
            group_velocity: inputs.group_velocity,
            t_vg_fs: t_vg / FS,
            t_est_fs: t_est.map(|t| t / FS),
            t_est_over_t_vg: t_est.filter(|_| t_vg > 0.0).map(|t| t / t_vg),
            max_quotient,
            establishment_rule: inputs.rule,
            notes,
        })
    }
}

/// One case of a radius/separation/model sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub model: String,
    pub radius_nm: f64,
    /// Separation in units of `pi / beta0`.
    pub separation_units: f64,
    pub separation_nm: f64,
    pub report: Option<AnalysisReport>,
    pub error: Option<String>,
}

/// Spread of the collective quotients across separations at fixed model
/// and radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationSpread {
    pub model: String,
    pub radius_nm: f64,
    pub cases: usize,
    pub mean_plus: f64,
    pub mean_minus: f64,
    /// Standard deviation over mean.
    pub relative_spread_plus: f64,
    pub relative_spread_minus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub spreads: Vec<SeparationSpread>,
    pub failures: usize,
}

/// Aggregate per-case rows; failed cases are counted, not dropped.
pub fn radius_sweep_report(rows: Vec<SweepRow>) -> SweepReport {
    let mut keys: Vec<(String, f64)> = Vec::new();
    for row in &rows {
        if !keys
            .iter()
            .any(|(m, a)| *m == row.model && *a == row.radius_nm)
        {
            keys.push((row.model.clone(), row.radius_nm));
        }
    }
    let spreads = keys
        .into_iter()
        .filter_map(|(model, radius_nm)| {
            let reports: Vec<&AnalysisReport> = rows
                .iter()
                .filter(|r| r.model == model && r.radius_nm == radius_nm)
                .filter_map(|r| r.report.as_ref())
                .collect();
            if reports.is_empty() {
                return None;
            }
            let (mean_plus, spread_plus) = mean_and_spread(reports.iter().map(|r| r.quotient_plus));
            let (mean_minus, spread_minus) =
                mean_and_spread(reports.iter().map(|r| r.quotient_minus));
            Some(SeparationSpread {
                model,
                radius_nm,
                cases: reports.len(),
                mean_plus,
                mean_minus,
                relative_spread_plus: spread_plus,
                relative_spread_minus: spread_minus,
            })
        })
        .collect();
    let failures = rows.iter().filter(|r| r.report.is_none()).count();
    SweepReport {
        rows,
        spreads,
        failures,
    }
}

fn mean_and_spread(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let v: Vec<f64> = values.collect();
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt() / mean.abs())
}
