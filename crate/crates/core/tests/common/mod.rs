#![allow(dead_code)]

use std::sync::OnceLock;

use nanofiber::bath::FrequencyGrid;
use nanofiber::constants::{omega_780, NM, SILICA_INDEX};
use nanofiber::pipeline::{Environment, EnvironmentSpec};
use nanofiber::waveguide::DielectricModel;

pub const COUPLING: f64 = 0.5e12;

pub fn constant() -> DielectricModel {
    DielectricModel::constant(SILICA_INDEX).unwrap()
}

pub fn drude_lorentz() -> DielectricModel {
    DielectricModel::calibrated_drude_lorentz(omega_780(), SILICA_INDEX).unwrap()
}

pub fn spec(model: DielectricModel, radius_nm: f64, len: usize) -> EnvironmentSpec {
    EnvironmentSpec {
        model,
        radius: radius_nm * NM,
        clearance: 100.0 * NM,
        grid: FrequencyGrid::new(omega_780(), 40.0, len).unwrap(),
        coupling: COUPLING,
    }
}

/// Constant-index fiber, a = 200 nm, on a small grid.
pub fn small_constant() -> &'static Environment {
    static ENV: OnceLock<Environment> = OnceLock::new();
    ENV.get_or_init(|| Environment::build(spec(constant(), 200.0, 8192)).unwrap())
}

/// Drude-Lorentz fiber, a = 200 nm, on a small grid.
pub fn small_drude_lorentz() -> &'static Environment {
    static ENV: OnceLock<Environment> = OnceLock::new();
    ENV.get_or_init(|| Environment::build(spec(drude_lorentz(), 200.0, 8192)).unwrap())
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * tol {
            return left + right + diff / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// Nodes and weights of the 16-point Gauss-Legendre rule on [-1, 1].
fn gauss_legendre_16() -> &'static [(f64, f64); 16] {
    static RULE: OnceLock<[(f64, f64); 16]> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = 16;
        let mut rule = [(0.0, 0.0); 16];
        for (i, slot) in rule.iter_mut().enumerate() {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            *slot = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        rule
    })
}

/// Composite 16-point Gauss-Legendre quadrature on `panels` equal panels.
pub fn gauss_legendre(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let width = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let mid = a + (p as f64 + 0.5) * width;
            gauss_legendre_16()
                .iter()
                .map(|&(x, w)| w * f(mid + 0.5 * width * x))
                .sum::<f64>()
                * 0.5
                * width
        })
        .sum()
}

/// Exact solution of `c' = -gamma c - g c(t - tau)` with `c(0) = 1` and no
/// history before 0: `sum_k (-g)^k (t - k tau)^k / k! exp(-gamma (t - k tau))`.
pub fn delay_equation(gamma: f64, g: f64, tau: f64, t: f64) -> f64 {
    let mut sum = 0.0;
    let mut ln_factorial = 0.0;
    let mut k = 0;
    while k as f64 * tau <= t {
        let x = t - k as f64 * tau;
        if k > 0 {
            ln_factorial += (k as f64).ln();
        }
        let magnitude = if k == 0 {
            (-gamma * x).exp()
        } else {
            (k as f64 * (g.abs() * x).ln() - ln_factorial - gamma * x).exp()
        };
        let sign = if g > 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
        sum += sign * magnitude;
        k += 1;
    }
    sum
}
