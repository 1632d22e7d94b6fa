use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use nanofiber::analysis::{
    collective_rates_from_integrals, establishment_time, gamma_integrals, radius_sweep_report,
    AnalysisReport, EstablishmentRule, SweepRow,
};
use nanofiber::bath::{two_point_integrand, CutoffConvergence};
use nanofiber::constants::{omega_350, C, FS, NM};
use nanofiber::dynamics::{EvolutionResult, RefinementStep};
use nanofiber::io::{
    correlation_csv, evolution_csv, fmt_f64, render_csv, spectrum_csv, velocity_csv,
    DispersionCache,
};
use nanofiber::pipeline::{
    omega_max_convergence, run_case, CaseSettings, Environment, EnvironmentSpec, Kernels,
    Refinement, WindowConvergence,
};
use nanofiber::waveguide::DispersionTable;
use nanofiber::{Error, Result};

use crate::config::{InitialStateChoice, ModelKind, RunConfig, SeparationUnit};
use crate::output::{label, opt, Output};
use crate::{Command, Options, Outcome};

/// Shared state of one invocation.
struct Context {
    config: RunConfig,
    out: Output,
    cache: DispersionCache,
}

/// One model/radius/separation combination.
#[derive(Debug, Clone, Copy)]
struct Case {
    kind: ModelKind,
    radius_nm: f64,
    separation: f64,
}

impl Context {
    fn environment(&self, kind: ModelKind, radius_nm: f64) -> Result<Environment> {
        let omega0 = self.config.omega0(radius_nm)?;
        let model = self.config.dielectric(kind, omega0)?;
        let grid = self.config.frequency_grid(omega0)?;
        let radius = radius_nm * NM;
        let (table, outcome) = self.cache.load_or_build(&model, radius, &grid)?;
        eprintln!(
            "dispersion {} a={radius_nm} nm: cache {outcome:?}",
            kind.label()
        );
        let spec = EnvironmentSpec {
            model,
            radius,
            clearance: self.config.clearance_nm * NM,
            grid,
            coupling: self.config.gamma_target,
        };
        Environment::from_table(spec, table)
    }

    fn separation_m(&self, env: &Environment, value: f64) -> f64 {
        match self.config.separations.unit {
            SeparationUnit::PiOverBeta0 => env.separation(value),
            SeparationUnit::Nm => value * NM,
        }
    }

    fn separation_units(&self, env: &Environment, separation: f64) -> f64 {
        separation * env.beta0 / std::f64::consts::PI
    }

    fn tag(&self, case: &Case) -> String {
        let unit = match self.config.separations.unit {
            SeparationUnit::PiOverBeta0 => "u",
            SeparationUnit::Nm => "nm",
        };
        format!(
            "{}_a{}_d{}{unit}",
            case.kind.label(),
            label(case.radius_nm),
            label(case.separation)
        )
    }

    fn env_tag(kind: ModelKind, radius_nm: f64) -> String {
        format!("{}_a{}", kind.label(), label(radius_nm))
    }

    fn cases(&self) -> Vec<Case> {
        let c = &self.config;
        let mut out = Vec::new();
        for &kind in &c.models {
            for &radius_nm in &c.radius_nm {
                for &separation in &c.separations.values {
                    out.push(Case {
                        kind,
                        radius_nm,
                        separation,
                    });
                }
            }
        }
        out
    }

    fn environments(&self) -> Result<Vec<((ModelKind, f64), Environment)>> {
        let mut keys = Vec::new();
        for &kind in &self.config.models {
            for &radius_nm in &self.config.radius_nm {
                keys.push((kind, radius_nm));
            }
        }
        keys.into_par_iter()
            .map(|(kind, radius_nm)| Ok(((kind, radius_nm), self.environment(kind, radius_nm)?)))
            .collect()
    }

    fn rule(&self, kind: ModelKind) -> EstablishmentRule {
        match kind {
            ModelKind::Constant => EstablishmentRule::Threshold {
                level: self.config.thresholds.establish_const,
            },
            ModelKind::DrudeLorentz => EstablishmentRule::ExtremaMidpoint {
                tolerance: self.config.thresholds.establish_dl,
            },
        }
    }

    /// Halvings needed to bring the correlation step below `solver.h_fs`.
    fn base_halvings(&self, env: &Environment) -> usize {
        let mut dt = env.spec.grid.time_step() / FS;
        let mut levels = 0;
        if let Some(h) = self.config.solver.h_fs {
            while dt > h {
                dt *= 0.5;
                levels += 1;
            }
        }
        levels
    }

    fn settings(&self, kind: ModelKind, env: &Environment) -> CaseSettings {
        let s = &self.config.solver;
        CaseSettings {
            t_end: s.t_fs * FS,
            fit_start: self.config.thresholds.fit_start_fs * FS,
            rule: self.rule(kind),
            refinement: s.refine.then_some(Refinement {
                tolerance: s.tolerance,
                max_halvings: s.max_halvings,
            }),
            base_halvings: self.base_halvings(env),
            decouple: s.decouple,
        }
    }

    fn kernels(&self, env: &Environment, separation: f64) -> Result<Kernels> {
        let cutoff = env.cutoff(separation, &self.config.cutoff_policy())?;
        env.kernels(separation, cutoff)?
            .refined(self.base_halvings(env))
    }
}

fn lookup<'a>(envs: &'a [((ModelKind, f64), Environment)], case: &Case) -> &'a Environment {
    &envs
        .iter()
        .find(|(k, _)| *k == (case.kind, case.radius_nm))
        .expect("environment built for every case")
        .1
}

pub fn run(command: Command, options: &Options) -> Result<Outcome> {
    let mut config = match &options.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &options.out {
        config.output_dir = out.clone();
    }
    if let Some(cache) = &options.cache {
        config.cache_dir = cache.clone();
    }
    config.validate()?;
    if options.jobs == Some(0) {
        return Err(Error::Config("--jobs must be at least 1".into()));
    }
    let out = Output::new(&config.output_dir, &config.hash());
    out.json("effective_config.json", &config)?;
    let ctx = Context {
        cache: DispersionCache::new(PathBuf::from(&config.cache_dir)),
        out,
        config,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| match command {
        Command::Dispersion => dispersion(&ctx),
        Command::Spectrum => spectrum(&ctx),
        Command::Correlations => correlations(&ctx),
        Command::Evolve => evolve(&ctx),
        Command::Sweep => sweep(&ctx),
        Command::Analyze => analyze(&ctx),
    })
}

#[derive(Serialize)]
struct DispersionSidecar<'a> {
    provenance: &'a str,
    model: nanofiber::waveguide::DielectricModel,
    radius_nm: f64,
    omega0_rad_s: f64,
    beta0_rad_m: f64,
    group_velocity0_over_c: f64,
    v_inf_over_c: Option<f64>,
    rows: usize,
    warnings: &'a [String],
}

fn dispersion(ctx: &Context) -> Result<Outcome> {
    for ((kind, radius_nm), env) in ctx.environments()? {
        let t = &env.table;
        let tag = Context::env_tag(kind, radius_nm);
        ctx.out.csv(
            &format!("dispersion_{tag}.csv"),
            dispersion_curve_csv(t, ctx.out.provenance())?,
        )?;
        ctx.out.csv(
            &format!("velocity_{tag}.csv"),
            velocity_csv(t, ctx.out.provenance())?,
        )?;
        ctx.out.json(
            &format!("dispersion_{tag}.json"),
            &DispersionSidecar {
                provenance: ctx.out.provenance(),
                model: t.model,
                radius_nm,
                omega0_rad_s: env.omega0(),
                beta0_rad_m: env.beta0,
                group_velocity0_over_c: env.group_velocity0 / C,
                v_inf_over_c: t.model.is_constant().then(|| 1.0 / ctx.config.material.n1),
                rows: t.len(),
                warnings: &t.warnings,
            },
        )?;
    }
    Ok(Outcome::Complete)
}

/// `beta(omega)` with the light line `omega/c` and medium line `n1 omega/c`.
fn dispersion_curve_csv(t: &DispersionTable, provenance: &str) -> Result<Vec<u8>> {
    let w350 = omega_350();
    render_csv(
        provenance,
        &[
            "omega_rad_s",
            "omega_over_omega350",
            "beta_rad_m",
            "beta_prime_s_m",
            "light_line_rad_m",
            "medium_line_rad_m",
        ],
        (0..t.len()).map(|i| {
            let w = t.omega[i];
            let n1 = t.model.refractive_index(w).unwrap_or(f64::NAN);
            [w, w / w350, t.beta[i], t.beta_prime[i], w / C, n1 * w / C].map(fmt_f64)
        }),
    )
}

#[derive(Serialize)]
struct SpectrumSidecar<'a> {
    provenance: &'a str,
    separation_nm: f64,
    separation_units: f64,
    omega0_rad_s: f64,
    omega_step_rad_s: f64,
    coupling_scale: f64,
    prefactor: f64,
    markov_rate: f64,
    cutoff_omega_rad_s: Option<f64>,
}

fn spectrum(ctx: &Context) -> Result<Outcome> {
    let envs = ctx.environments()?;
    for case in ctx.cases() {
        let env = lookup(&envs, &case);
        let d = ctx.separation_m(env, case.separation);
        let cutoff = env.cutoff(d, &ctx.config.cutoff_policy())?;
        let mut sp = two_point_integrand(&env.spectral, &env.table, d)?;
        if let Some(c) = cutoff {
            sp = sp.with_cutoff(c)?;
        }
        let tag = ctx.tag(&case);
        ctx.out.csv(
            &format!("spectrum_{tag}.csv"),
            spectrum_csv(&sp, ctx.out.provenance())?,
        )?;
        ctx.out.json(
            &format!("spectrum_{tag}.json"),
            &SpectrumSidecar {
                provenance: ctx.out.provenance(),
                separation_nm: d / NM,
                separation_units: ctx.separation_units(env, d),
                omega0_rad_s: env.omega0(),
                omega_step_rad_s: sp.grid.step,
                coupling_scale: sp.coupling_scale,
                prefactor: sp.prefactor,
                markov_rate: env.markov_rate()?,
                cutoff_omega_rad_s: cutoff,
            },
        )?;
    }
    Ok(Outcome::Complete)
}

#[derive(Serialize)]
struct CorrelationSidecar<'a> {
    provenance: &'a str,
    kind: &'static str,
    separation_nm: f64,
    separation_units: f64,
    samples: usize,
    omega_step_rad_s: f64,
    dt_fs: f64,
    cutoff_omega_rad_s: Option<f64>,
    coupling_scale: f64,
    fwhm_fs: f64,
    peak_times_fs: Vec<f64>,
    peak_separation_fs: Option<f64>,
    /// `2 d n1(omega0) / c`.
    expected_peak_separation_fs: f64,
}

fn correlation_sidecar<'a>(
    ctx: &'a Context,
    env: &Environment,
    k: &Kernels,
    separation: f64,
    one_point: bool,
) -> CorrelationSidecar<'a> {
    let f = if one_point { &k.f_mm } else { &k.f_mn };
    let peaks = f.peak_diagnostics();
    let n1 = env
        .spec
        .model
        .refractive_index(env.omega0())
        .unwrap_or(f64::NAN);
    CorrelationSidecar {
        provenance: ctx.out.provenance(),
        kind: if one_point { "one_point" } else { "two_point" },
        separation_nm: separation / NM,
        separation_units: ctx.separation_units(env, separation),
        samples: f.len(),
        omega_step_rad_s: f.omega_step,
        dt_fs: f.dt / FS,
        cutoff_omega_rad_s: k.cutoff,
        coupling_scale: f.coupling_scale,
        fwhm_fs: peaks.fwhm / FS,
        peak_times_fs: peaks.peak_times.iter().map(|t| t / FS).collect(),
        peak_separation_fs: peaks.peak_separation.map(|t| t / FS),
        expected_peak_separation_fs: 2.0 * separation * n1 / C / FS,
    }
}

fn correlations(ctx: &Context) -> Result<Outcome> {
    let envs = ctx.environments()?;
    for ((kind, radius_nm), env) in &envs {
        let k = ctx.kernels(env, 0.0)?;
        let tag = Context::env_tag(*kind, *radius_nm);
        ctx.out.csv(
            &format!("correlation_{tag}_mm.csv"),
            correlation_csv(&k.f_mm, ctx.out.provenance())?,
        )?;
        ctx.out.json(
            &format!("correlation_{tag}_mm.json"),
            &correlation_sidecar(ctx, env, &k, 0.0, true),
        )?;
    }
    for case in ctx.cases() {
        let env = lookup(&envs, &case);
        let d = ctx.separation_m(env, case.separation);
        let k = ctx.kernels(env, d)?;
        let tag = ctx.tag(&case);
        ctx.out.csv(
            &format!("correlation_{tag}_mn.csv"),
            correlation_csv(&k.f_mn, ctx.out.provenance())?,
        )?;
        ctx.out.json(
            &format!("correlation_{tag}_mn.json"),
            &correlation_sidecar(ctx, env, &k, d, false),
        )?;
    }
    Ok(Outcome::Complete)
}

#[derive(Serialize)]
struct EvolutionSidecar<'a> {
    provenance: &'a str,
    preparation: &'static str,
    h_fs: f64,
    t_fs: f64,
    samples: usize,
    model: nanofiber::waveguide::DielectricModel,
    radius_nm: f64,
    clearance_nm: f64,
    separation_nm: f64,
    cutoff_omega_rad_s: Option<f64>,
    kernel_dt_fs: f64,
    kernel_samples: usize,
    decoupled: bool,
    refinement: &'a [RefinementStep],
}

#[derive(Serialize)]
struct AnalysisDocument<'a> {
    provenance: &'a str,
    model: &'static str,
    radius_nm: f64,
    separation_units: f64,
    report: &'a AnalysisReport,
    cutoff_convergence: Option<CutoffConvergence>,
    window_convergence: Option<WindowConvergence>,
}

const ANALYSIS_HEADER: [&str; 26] = [
    "model",
    "radius_nm",
    "separation_units",
    "separation_nm",
    "gamma_markov",
    "gamma_single",
    "gamma_plus",
    "gamma_minus",
    "quotient_plus",
    "quotient_minus",
    "superradiant",
    "t_com_symmetric_fs",
    "t_com_antisymmetric_fs",
    "t_com_symmetric_stderr_fs",
    "t_com_antisymmetric_stderr_fs",
    "v_com_symmetric_over_c",
    "v_com_antisymmetric_over_c",
    "v_g_over_c",
    "t_vg_fs",
    "t_est_fs",
    "t_est_over_t_vg",
    "fit_rms_single",
    "fit_rms_symmetric",
    "fit_rms_antisymmetric",
    "notes",
    "error",
];

fn analysis_row(row: &SweepRow) -> Vec<String> {
    let mut out = vec![
        row.model.clone(),
        fmt_f64(row.radius_nm),
        fmt_f64(row.separation_units),
        fmt_f64(row.separation_nm),
    ];
    match &row.report {
        Some(r) => {
            out.extend(
                [
                    r.gamma_markov,
                    r.gamma_single,
                    r.gamma_plus,
                    r.gamma_minus,
                    r.quotient_plus,
                    r.quotient_minus,
                ]
                .map(fmt_f64),
            );
            out.push(format!("{:?}", r.superradiant).to_lowercase());
            out.extend([
                opt(r.t_com_symmetric_fs),
                opt(r.t_com_antisymmetric_fs),
                opt(r.t_com_symmetric_stderr_fs),
                opt(r.t_com_antisymmetric_stderr_fs),
                opt(r.v_com_symmetric.map(|v| v / C)),
                opt(r.v_com_antisymmetric.map(|v| v / C)),
                fmt_f64(r.group_velocity / C),
                fmt_f64(r.t_vg_fs),
                opt(r.t_est_fs),
                opt(r.t_est_over_t_vg),
                fmt_f64(r.fit_single.residual_rms),
                fmt_f64(r.fit_symmetric.residual_rms),
                fmt_f64(r.fit_antisymmetric.residual_rms),
                r.notes.join("; "),
                String::new(),
            ]);
        }
        None => {
            out.extend(std::iter::repeat_n(
                String::new(),
                ANALYSIS_HEADER.len() - 5,
            ));
            out.push(row.error.clone().unwrap_or_default());
        }
    }
    out
}

fn evolve(ctx: &Context) -> Result<Outcome> {
    let envs = ctx.environments()?;
    let mut rows = Vec::new();
    for case in ctx.cases() {
        let env = lookup(&envs, &case);
        let d = ctx.separation_m(env, case.separation);
        let settings = ctx.settings(case.kind, env);
        let output = run_case(env, d, &ctx.config.cutoff_policy(), &settings)?;
        let tag = ctx.tag(&case);
        let runs: [(&'static str, &EvolutionResult, InitialStateChoice); 3] = [
            ("single", &output.single, InitialStateChoice::Single),
            (
                "symmetric",
                &output.symmetric,
                InitialStateChoice::Symmetric,
            ),
            (
                "antisymmetric",
                &output.antisymmetric,
                InitialStateChoice::Antisymmetric,
            ),
        ];
        for (i, (name, result, choice)) in runs.into_iter().enumerate() {
            if ctx.config.initial_state != InitialStateChoice::All
                && ctx.config.initial_state != choice
            {
                continue;
            }
            ctx.out.csv(
                &format!("evolution_{tag}_{name}.csv"),
                evolution_csv(result, ctx.out.provenance())?,
            )?;
            ctx.out.json(
                &format!("evolution_{tag}_{name}.json"),
                &EvolutionSidecar {
                    provenance: ctx.out.provenance(),
                    preparation: name,
                    h_fs: result.h / FS,
                    t_fs: ctx.config.solver.t_fs,
                    samples: result.len(),
                    model: env.spec.model,
                    radius_nm: case.radius_nm,
                    clearance_nm: ctx.config.clearance_nm,
                    separation_nm: d / NM,
                    cutoff_omega_rad_s: output.kernels.cutoff,
                    kernel_dt_fs: output.kernels.f_mm.dt / FS,
                    kernel_samples: output.kernels.f_mm.len(),
                    decoupled: settings.decouple,
                    refinement: output.refinement.get(i).map(Vec::as_slice).unwrap_or(&[]),
                },
            )?;
        }
        let cutoff_convergence =
            if ctx.config.cutoff.check_convergence && output.kernels.cutoff.is_some() {
                Some(env.cutoff_convergence(
                    d,
                    &ctx.config.cutoff_policy(),
                    settings.t_end,
                    settings.fit_start,
                )?)
            } else {
                None
            };
        let window_convergence = if ctx.config.grid.check_omega_max && env.spec.model.is_constant()
        {
            Some(omega_max_convergence(
                env.spec,
                settings.t_end,
                settings.fit_start,
            )?)
        } else {
            None
        };
        let units = ctx.separation_units(env, d);
        ctx.out.json(
            &format!("analysis_{tag}.json"),
            &AnalysisDocument {
                provenance: ctx.out.provenance(),
                model: case.kind.label(),
                radius_nm: case.radius_nm,
                separation_units: units,
                report: &output.report,
                cutoff_convergence,
                window_convergence,
            },
        )?;
        rows.push(SweepRow {
            model: case.kind.label().into(),
            radius_nm: case.radius_nm,
            separation_units: units,
            separation_nm: d / NM,
            report: Some(output.report),
            error: None,
        });
    }
    ctx.out.csv(
        "analysis.csv",
        render_csv(
            ctx.out.provenance(),
            &ANALYSIS_HEADER,
            rows.iter().map(analysis_row),
        )?,
    )?;
    Ok(Outcome::Complete)
}

fn sweep(ctx: &Context) -> Result<Outcome> {
    let envs: Vec<_> = {
        let mut keys = Vec::new();
        for &kind in &ctx.config.models {
            for &radius_nm in &ctx.config.radius_nm {
                keys.push((kind, radius_nm));
            }
        }
        keys.into_par_iter()
            .map(|(kind, a)| ((kind, a), ctx.environment(kind, a)))
            .collect()
    };
    let rows: Vec<SweepRow> = ctx
        .cases()
        .into_par_iter()
        .map(|case| {
            let env = envs
                .iter()
                .find(|(k, _)| *k == (case.kind, case.radius_nm))
                .map(|(_, e)| e);
            let failed = |error: String, d: f64, units: f64| SweepRow {
                model: case.kind.label().into(),
                radius_nm: case.radius_nm,
                separation_units: units,
                separation_nm: d / NM,
                report: None,
                error: Some(error),
            };
            match env {
                Some(Ok(env)) => {
                    let d = ctx.separation_m(env, case.separation);
                    let units = ctx.separation_units(env, d);
                    match run_case(
                        env,
                        d,
                        &ctx.config.cutoff_policy(),
                        &ctx.settings(case.kind, env),
                    ) {
                        Ok(out) => SweepRow {
                            model: case.kind.label().into(),
                            radius_nm: case.radius_nm,
                            separation_units: units,
                            separation_nm: d / NM,
                            report: Some(out.report),
                            error: None,
                        },
                        Err(e) => failed(e.to_string(), d, units),
                    }
                }
                Some(Err(e)) => failed(e.to_string(), f64::NAN, f64::NAN),
                None => failed("environment missing".into(), f64::NAN, f64::NAN),
            }
        })
        .collect();
    let report = radius_sweep_report(rows);
    ctx.out.csv(
        "sweep.csv",
        render_csv(
            ctx.out.provenance(),
            &ANALYSIS_HEADER,
            report.rows.iter().map(analysis_row),
        )?,
    )?;
    ctx.out.json("sweep.json", &report)?;
    if report.failures > 0 {
        Ok(Outcome::PartialFailure(report.failures))
    } else {
        Ok(Outcome::Complete)
    }
}

#[derive(Serialize)]
struct EstablishmentDocument<'a> {
    provenance: &'a str,
    model: &'static str,
    radius_nm: f64,
    separation_nm: f64,
    separation_units: f64,
    rule: EstablishmentRule,
    markov_rate: f64,
    t_vg_fs: f64,
    t_est_fs: Option<f64>,
    t_est_over_t_vg: Option<f64>,
    max_quotient: Option<f64>,
    error: Option<String>,
}

fn analyze(ctx: &Context) -> Result<Outcome> {
    let envs = ctx.environments()?;
    let mut rows = Vec::new();
    for case in ctx.cases() {
        let env = lookup(&envs, &case);
        let d = ctx.separation_m(env, case.separation);
        let k = ctx.kernels(env, d)?;
        let len = (ctx.config.solver.t_fs * FS / k.f_mm.dt).round() as usize + 1;
        let series = gamma_integrals(&k.f_mm, &k.f_mn, len)?;
        let q = series.quotient();
        let (minus, plus) = collective_rates_from_integrals(&series);
        let tag = ctx.tag(&case);
        ctx.out.csv(
            &format!("gamma_{tag}.csv"),
            render_csv(
                ctx.out.provenance(),
                &[
                    "t_fs",
                    "gamma",
                    "gamma_mn",
                    "quotient",
                    "gamma_minus",
                    "gamma_plus",
                ],
                (0..series.gamma.len()).map(|i| {
                    [
                        series.time(i) / FS,
                        series.gamma[i],
                        series.gamma_mn[i],
                        q[i],
                        minus[i],
                        plus[i],
                    ]
                    .map(fmt_f64)
                }),
            )?,
        )?;
        let rule = ctx.rule(case.kind);
        let t_vg = d / env.group_velocity0;
        let (est, error) = match establishment_time(&series, rule) {
            Ok(e) => (Some(e), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let doc = EstablishmentDocument {
            provenance: ctx.out.provenance(),
            model: case.kind.label(),
            radius_nm: case.radius_nm,
            separation_nm: d / NM,
            separation_units: ctx.separation_units(env, d),
            rule,
            markov_rate: env.markov_rate()?,
            t_vg_fs: t_vg / FS,
            t_est_fs: est.map(|e| e.t_est / FS),
            t_est_over_t_vg: est.filter(|_| t_vg > 0.0).map(|e| e.t_est / t_vg),
            max_quotient: est.map(|e| e.max_quotient),
            error,
        };
        rows.push([
            case.kind.label().to_string(),
            fmt_f64(case.radius_nm),
            fmt_f64(doc.separation_units),
            fmt_f64(doc.separation_nm),
            fmt_f64(doc.t_vg_fs),
            opt(doc.t_est_fs),
            opt(doc.t_est_over_t_vg),
            doc.error.clone().unwrap_or_default(),
        ]);
        ctx.out.json(&format!("establishment_{tag}.json"), &doc)?;
    }
    ctx.out.csv(
        "establishment.csv",
        render_csv(
            ctx.out.provenance(),
            &[
                "model",
                "radius_nm",
                "separation_units",
                "separation_nm",
                "t_vg_fs",
                "t_est_fs",
                "t_est_over_t_vg",
                "error",
            ],
            rows,
        )?,
    )?;
    Ok(Outcome::Complete)
}
