//! Browser bindings: dispersion curves, correlation functions and two-atom evolutions.
//!
//! Every export returns a JSON string; errors are thrown as JavaScript `Error`s.

use std::cell::RefCell;

use serde::Serialize;
use wasm_bindgen::prelude::*;

use nanofiber::bath::FrequencyGrid;
use nanofiber::constants::{omega_350, omega_780, C, FS, NM, SILICA_INDEX};
use nanofiber::dynamics::{evolve, InitialState};
use nanofiber::pipeline::{Environment, EnvironmentSpec, Kernels};
use nanofiber::waveguide::{solve_beta, DielectricModel};

const CLEARANCE_NM: f64 = 100.0;
const COUPLING: f64 = 0.5e12;
const OMEGA_MAX_MULTIPLIER: f64 = 40.0;
const MAX_SAMPLES: usize = 1 << 15;

thread_local! {
    static ENVIRONMENT: RefCell<Option<(String, usize, u64, Environment)>> = const { RefCell::new(None) };
}

fn model(name: &str) -> nanofiber::Result<DielectricModel> {
    match name {
        "constant" => DielectricModel::constant(SILICA_INDEX),
        "drude_lorentz" => DielectricModel::calibrated_drude_lorentz(omega_780(), SILICA_INDEX),
        other => Err(nanofiber::Error::Config(format!("unknown model {other:?}"))),
    }
}

fn js(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(js)
}

fn export(result: Result<String, String>) -> Result<String, JsError> {
    result.map_err(|e| JsError::new(&e))
}

/// Reuses the last environment while model, grid size and radius are unchanged.
fn with_environment<T>(
    name: &str,
    radius_nm: f64,
    samples: usize,
    f: impl FnOnce(&Environment) -> nanofiber::Result<T>,
) -> Result<T, String> {
    if !(radius_nm.is_finite() && radius_nm > 0.0) {
        return Err(js("radius must be positive"));
    }
    if !samples.is_power_of_two() || !(256..=MAX_SAMPLES).contains(&samples) {
        return Err(js(format!(
            "samples must be a power of two between 256 and {MAX_SAMPLES}"
        )));
    }
    ENVIRONMENT.with(|cell| {
        let mut slot = cell.borrow_mut();
        let fresh = !matches!(&*slot, Some((n, s, r, _)) if n == name && *s == samples && *r == radius_nm.to_bits());
        if fresh {
            let spec = EnvironmentSpec {
                model: model(name)?,
                radius: radius_nm * NM,
                clearance: CLEARANCE_NM * NM,
                grid: FrequencyGrid::new(omega_780(), OMEGA_MAX_MULTIPLIER, samples)?,
                coupling: COUPLING,
            };
            *slot = Some((name.to_string(), samples, radius_nm.to_bits(), Environment::build(spec)?));
        }
        let (.., env) = slot.as_ref().expect("environment was just built");
        f(env)
    })
    .map_err(js)
}

#[derive(Serialize)]
struct Dispersion {
    omega_over_omega350: Vec<f64>,
    beta_a: Vec<f64>,
    light_line_a: Vec<f64>,
    medium_line_a: Vec<f64>,
}

/// Fundamental-mode propagation constant, in units of `1/radius`, on `points`
/// frequencies spanning `(0, 1.2] omega_350`.
#[wasm_bindgen]
pub fn dispersion_curve(
    model_name: &str,
    radius_nm: f64,
    points: usize,
) -> Result<String, JsError> {
    export(dispersion_json(model_name, radius_nm, points))
}

fn dispersion_json(model_name: &str, radius_nm: f64, points: usize) -> Result<String, String> {
    let m = model(model_name).map_err(js)?;
    let radius = radius_nm * NM;
    let points = points.clamp(2, 2000);
    let mut out = Dispersion {
        omega_over_omega350: vec![],
        beta_a: vec![],
        light_line_a: vec![],
        medium_line_a: vec![],
    };
    for i in 1..=points {
        let x = 1.2 * i as f64 / points as f64;
        let omega = x * omega_350();
        let (Some(n1), Ok(beta)) = (m.refractive_index(omega), solve_beta(&m, radius, omega))
        else {
            continue;
        };
        out.omega_over_omega350.push(x);
        out.beta_a.push(beta * radius);
        out.light_line_a.push(omega / C * radius);
        out.medium_line_a.push(n1 * omega / C * radius);
    }
    json(&out)
}

#[derive(Serialize)]
struct Correlations {
    t_fs: Vec<f64>,
    abs_one_point: Vec<f64>,
    re_two_point: Vec<f64>,
    separation_nm: f64,
    group_delay_fs: f64,
}

fn pair_kernels(env: &Environment, separation_units: f64) -> nanofiber::Result<(f64, Kernels)> {
    let d = env.separation(separation_units);
    let cutoff = env.cutoff(d, &Default::default())?;
    Ok((d, env.kernels(d, cutoff)?))
}

/// One- and two-point correlation functions for `|t| <= window_fs`, normalized to `F_mm(0)`.
#[wasm_bindgen]
pub fn correlations(
    model_name: &str,
    radius_nm: f64,
    separation_units: f64,
    samples: usize,
    window_fs: f64,
) -> Result<String, JsError> {
    export(correlations_json(
        model_name,
        radius_nm,
        separation_units,
        samples,
        window_fs,
    ))
}

fn correlations_json(
    model_name: &str,
    radius_nm: f64,
    separation_units: f64,
    samples: usize,
    window_fs: f64,
) -> Result<String, String> {
    with_environment(model_name, radius_nm, samples, |env| {
        let (d, k) = pair_kernels(env, separation_units)?;
        let scale = k.f_mm.samples[k.f_mm.origin()].re;
        let mut out = Correlations {
            t_fs: vec![],
            abs_one_point: vec![],
            re_two_point: vec![],
            separation_nm: d / NM,
            group_delay_fs: d / env.group_velocity0 / FS,
        };
        for j in 0..k.f_mm.len() {
            let t = k.f_mm.time(j) / FS;
            if t.abs() <= window_fs {
                out.t_fs.push(t);
                out.abs_one_point.push(k.f_mm.samples[j].norm() / scale);
                out.re_two_point.push(k.f_mn.samples[j].re / scale);
            }
        }
        Ok(out)
    })
    .and_then(|c| json(&c))
}

#[derive(Serialize)]
struct Evolution {
    t_fs: Vec<f64>,
    population1: Vec<f64>,
    population2: Vec<f64>,
    p_plus: Vec<f64>,
    p_minus: Vec<f64>,
    markov_rate: f64,
}

/// Populations of two atoms prepared in `"single"`, `"symmetric"` or `"antisymmetric"`.
#[wasm_bindgen]
pub fn evolve_pair(
    model_name: &str,
    radius_nm: f64,
    separation_units: f64,
    preparation: &str,
    samples: usize,
    t_fs: f64,
) -> Result<String, JsError> {
    export(evolve_json(
        model_name,
        radius_nm,
        separation_units,
        preparation,
        samples,
        t_fs,
    ))
}

fn evolve_json(
    model_name: &str,
    radius_nm: f64,
    separation_units: f64,
    preparation: &str,
    samples: usize,
    t_fs: f64,
) -> Result<String, String> {
    let init = match preparation {
        "single" => InitialState::single(),
        "symmetric" => InitialState::symmetric(),
        "antisymmetric" => InitialState::antisymmetric(),
        other => return Err(js(format!("unknown preparation {other:?}"))),
    };
    with_environment(model_name, radius_nm, samples, |env| {
        let (_, k) = pair_kernels(env, separation_units)?;
        let r = evolve(&k.f_mm, &k.f_mn, init, t_fs * FS)?;
        let stride = (r.len() / 1500).max(1);
        let thin = |v: Vec<f64>| v.into_iter().step_by(stride).collect::<Vec<_>>();
        Ok(Evolution {
            t_fs: thin(r.times().into_iter().map(|t| t / FS).collect()),
            population1: thin(r.population1()),
            population2: thin(r.population2()),
            p_plus: thin(r.p_plus()),
            p_minus: thin(r.p_minus()),
            markov_rate: env.markov_rate()?,
        })
    })
    .and_then(|e| json(&e))
}
