//! Dispersion table to analysis report for one fiber and atom pair.

use serde::{Deserialize, Serialize};

use crate::analysis::{
    fit_decay_rate, gamma_integrals, AnalysisReport, EstablishmentRule, GammaSeries, ReportInputs,
};
use crate::bath::{
    choose_cutoff, converge_cutoff, correlation_function, markovian_rate,
    one_point_spectral_density, two_point_integrand, CorrelationFunction, CorrelationKind,
    CutoffConvergence, CutoffPolicy, FrequencyGrid, ModeTable, SpectralGrid,
};
use crate::dynamics::{convergence_check, evolve, EvolutionResult, InitialState, RefinementStep};
use crate::error::{Error, Result};
use crate::waveguide::{build_dispersion_table, solve_beta, DielectricModel, DispersionTable};

/// Fiber, atom position and frequency grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentSpec {
    pub model: DielectricModel,
    pub radius: f64,
    pub clearance: f64,
    pub grid: FrequencyGrid,
    /// Markovian amplitude decay rate the spectral density is scaled to, 1/s.
    pub coupling: f64,
}

/// Guided-mode bath seen by an atom at `radius + clearance`.
#[derive(Debug, Clone)]
pub struct Environment {
    pub spec: EnvironmentSpec,
    pub table: DispersionTable,
    pub spectral: SpectralGrid,
    pub beta0: f64,
    pub group_velocity0: f64,
}

impl Environment {
    pub fn build(spec: EnvironmentSpec) -> Result<Self> {
        let omegas = spec.grid.positive_omegas(spec.model.guiding_limit());
        let table = build_dispersion_table(&spec.model, spec.radius, &omegas)?;
        Self::from_table(spec, table)
    }

    pub fn from_table(spec: EnvironmentSpec, table: DispersionTable) -> Result<Self> {
        if table.model != spec.model || table.radius != spec.radius {
            return Err(Error::Config(
                "dispersion table belongs to another fiber".into(),
            ));
        }
        let modes = ModeTable::from_dispersion(&table)?;
        let spectral =
            one_point_spectral_density(&table, &modes, &spec.grid, spec.clearance, spec.coupling)?;
        let omega0 = spec.grid.omega0();
        let beta0 = table.beta_at(omega0)?;
        let group_velocity0 = table.group_velocity_at(omega0)?;
        Ok(Self {
            spec,
            table,
            spectral,
            beta0,
            group_velocity0,
        })
    }

    pub fn omega0(&self) -> f64 {
        self.spec.grid.omega0()
    }

    /// Amplitude decay rate `pi S(omega0)`.
    pub fn markov_rate(&self) -> Result<f64> {
        markovian_rate(&self.spectral, self.omega0())
    }

    /// Separation of `units * pi / beta0`.
    pub fn separation(&self, units: f64) -> f64 {
        units * std::f64::consts::PI / self.beta0
    }

    /// Cutoff for a separation: none for constant-index fibers or `d = 0`.
    pub fn cutoff(&self, separation: f64, policy: &CutoffPolicy) -> Result<Option<f64>> {
        if self.spec.model.is_constant() || separation == 0.0 {
            return Ok(None);
        }
        choose_cutoff(&self.table, separation, self.spec.grid.step, policy).map(Some)
    }

    /// `F_mm` and `F_mn` with the same optional cutoff applied to both.
    pub fn kernels(&self, separation: f64, cutoff: Option<f64>) -> Result<Kernels> {
        let two = two_point_integrand(&self.spectral, &self.table, separation)?;
        let spectral = match cutoff {
            Some(c) => two.with_cutoff(c)?,
            None => two,
        };
        Kernels::from_spectral(spectral, cutoff)
    }

    /// Fitted population rate of a lone atom with the bath cut at `cutoff`.
    pub fn single_atom_rate(&self, cutoff: Option<f64>, t_end: f64, fit_start: f64) -> Result<f64> {
        let k = self.kernels(0.0, cutoff)?;
        let r = evolve(&k.f_mm, &k.f_mm.scaled(0.0), InitialState::single(), t_end)?;
        Ok(fit_decay_rate(&r.times(), &r.population1(), fit_start)?.rate)
    }

    /// Successive-zero convergence of the single-atom rate under the cutoff.
    pub fn cutoff_convergence(
        &self,
        separation: f64,
        policy: &CutoffPolicy,
        t_end: f64,
        fit_start: f64,
    ) -> Result<CutoffConvergence> {
        converge_cutoff(&self.table, separation, self.spec.grid.step, policy, |w| {
            self.single_atom_rate(Some(w), t_end, fit_start)
        })
    }
}

/// One- and two-point kernels on a shared time grid.
#[derive(Debug, Clone)]
pub struct Kernels {
    pub spectral: SpectralGrid,
    pub f_mm: CorrelationFunction,
    pub f_mn: CorrelationFunction,
    pub cutoff: Option<f64>,
}

impl Kernels {
    pub fn from_spectral(spectral: SpectralGrid, cutoff: Option<f64>) -> Result<Self> {
        let f_mm = correlation_function(&spectral, CorrelationKind::OnePoint)?;
        let f_mn = correlation_function(&spectral, CorrelationKind::TwoPoint)?;
        Ok(Self {
            spectral,
            f_mm,
            f_mn,
            cutoff,
        })
    }

    /// Same bath with the time step halved `levels` times (zero-padded
    /// spectrum).
    pub fn refined(&self, levels: usize) -> Result<Self> {
        if levels == 0 {
            return Ok(self.clone());
        }
        let mut spectral = self.spectral.clone();
        for _ in 0..levels {
            spectral = spectral.zero_padded();
        }
        Self::from_spectral(spectral, self.cutoff)
    }

    /// Kernel pair for a lone atom: the partner kernel is zero.
    pub fn lone(&self) -> (CorrelationFunction, CorrelationFunction) {
        (self.f_mm.clone(), self.f_mm.scaled(0.0))
    }
}

/// Step-halving policy for the evolutions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Refinement {
    pub tolerance: f64,
    pub max_halvings: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseSettings {
    /// Final time, s.
    pub t_end: f64,
    /// Start of the fit window, s.
    pub fit_start: f64,
    pub rule: EstablishmentRule,
    pub refinement: Option<Refinement>,
    /// Halvings of the correlation step applied before solving.
    pub base_halvings: usize,
    /// Zero the partner kernel.
    pub decouple: bool,
}

impl CaseSettings {
    pub fn new(t_end: f64, fit_start: f64, rule: EstablishmentRule) -> Self {
        Self {
            t_end,
            fit_start,
            rule,
            refinement: None,
            base_halvings: 0,
            decouple: false,
        }
    }
}

/// Evolutions, kernels and report of one geometry.
#[derive(Debug, Clone)]
pub struct CaseOutput {
    pub separation: f64,
    pub kernels: Kernels,
    pub single: EvolutionResult,
    pub symmetric: EvolutionResult,
    pub antisymmetric: EvolutionResult,
    pub gamma: GammaSeries,
    pub report: AnalysisReport,
    /// Refinement records of the single, symmetric and antisymmetric runs.
    pub refinement: Vec<Vec<RefinementStep>>,
}

/// Default establishment rule of a dielectric model.
pub fn establishment_rule(model: &DielectricModel) -> EstablishmentRule {
    if model.is_constant() {
        EstablishmentRule::Threshold { level: 0.99 }
    } else {
        EstablishmentRule::ExtremaMidpoint { tolerance: 0.01 }
    }
}

pub fn run_case(
    env: &Environment,
    separation: f64,
    policy: &CutoffPolicy,
    settings: &CaseSettings,
) -> Result<CaseOutput> {
    let cutoff = env.cutoff(separation, policy)?;
    let base = env
        .kernels(separation, cutoff)?
        .refined(settings.base_halvings)?;
    let mut finest = 0;
    let mut refinement = Vec::new();
    let mut run = |init: InitialState, lone: bool| -> Result<EvolutionResult> {
        let pair = |k: &Kernels| {
            if lone || settings.decouple {
                k.lone()
            } else {
                (k.f_mm.clone(), k.f_mn.clone())
            }
        };
        match settings.refinement {
            None => {
                let (a, b) = pair(&base);
                evolve(&a, &b, init, settings.t_end)
            }
            Some(r) => {
                let converged = convergence_check(
                    |level| Ok(pair(&base.refined(level)?)),
                    init,
                    settings.t_end,
                    r.tolerance,
                    r.max_halvings,
                )?;
                finest = finest.max(converged.halvings);
                refinement.push(converged.record);
                Ok(converged.result)
            }
        }
    };
    let single = run(InitialState::single(), true)?;
    let symmetric = run(InitialState::symmetric(), false)?;
    let antisymmetric = run(InitialState::antisymmetric(), false)?;
    let mut kernels = base.refined(finest)?;
    if settings.decouple {
        kernels.f_mn = kernels.f_mn.scaled(0.0);
    }
    let gamma = gamma_integrals(
        &kernels.f_mm,
        &kernels.f_mn,
        (settings.t_end / kernels.f_mm.dt).round() as usize + 1,
    )?;
    let report = AnalysisReport::build(&ReportInputs {
        single: &single,
        symmetric: &symmetric,
        antisymmetric: &antisymmetric,
        gamma: Some(&gamma),
        rule: settings.rule,
        separation,
        group_velocity: env.group_velocity0,
        gamma_markov: env.markov_rate()?,
        fit_start: settings.fit_start,
    })?;
    Ok(CaseOutput {
        separation,
        kernels,
        single,
        symmetric,
        antisymmetric,
        gamma,
        report,
        refinement,
    })
}

/// Frequency at which the guided wavelength `2 pi / beta` equals `lambda`.
///
/// `beta(omega)` depends on the material only through `n1(omega)`, so a
/// Drude-Lorentz model calibrated to `n1` at the answer shares the root of
/// the constant model with the same `n1`.
pub fn omega_for_guided_wavelength(n1: f64, radius: f64, lambda: f64) -> Result<f64> {
    let model = DielectricModel::constant(n1)?;
    let target = 2.0 * std::f64::consts::PI / lambda;
    let c = crate::constants::C;
    // the root lies between the bulk-medium and light lines
    let (mut lo, mut hi) = (target * c / n1, target * c);
    let g = |w: f64| solve_beta(&model, radius, w).map(|b| b - target);
    if !(g(lo)? < 0.0 && g(hi)? > 0.0) {
        return Err(Error::Domain(format!(
            "no guided frequency with beta = {target:e} rad/m"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Single-atom rate with the frequency window doubled at fixed spacing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowConvergence {
    pub rate: f64,
    pub rate_doubled: f64,
    pub relative_change: f64,
}

pub fn omega_max_convergence(
    spec: EnvironmentSpec,
    t_end: f64,
    fit_start: f64,
) -> Result<WindowConvergence> {
    let env = Environment::build(spec)?;
    let wide = Environment::build(EnvironmentSpec {
        grid: spec.grid.refined(),
        ..spec
    })?;
    let rate = env.single_atom_rate(None, t_end, fit_start)?;
    // the wider window halves dt; compare rates, not samples
    let rate_doubled = wide.single_atom_rate(None, t_end, fit_start)?;
    Ok(WindowConvergence {
        rate,
        rate_doubled,
        relative_change: ((rate_doubled - rate) / rate).abs(),
    })
}
