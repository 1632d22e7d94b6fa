mod common;

use std::f64::consts::PI;

use proptest::prelude::*;

use common::{constant, drude_lorentz, gauss_legendre, simpson};
use nanofiber::constants::{omega_350, omega_780, C, NM, SILICA_INDEX};
use nanofiber::pipeline::omega_for_guided_wavelength;
use nanofiber::waveguide::{
    build_dispersion_table, dispersion_residual, solve_beta, DielectricModel, ModeProfile,
};

/// `J_n(x) = (1/pi) int_0^pi cos(n t - x sin t) dt`; the trapezoid rule is
/// spectrally accurate for this periodic integrand.
fn bessel_j(n: i32, x: f64) -> f64 {
    let m = 400;
    let h = PI / m as f64;
    let f = |t: f64| (n as f64 * t - x * t.sin()).cos();
    let inner: f64 = (1..m).map(|k| f(k as f64 * h)).sum();
    (inner + 0.5 * (f(0.0) + f(PI))) * h / PI
}

/// `K_n(x) = int_0^inf exp(-x cosh t) cosh(n t) dt` by adaptive Simpson,
/// truncated where the integrand underflows.
fn bessel_k(n: i32, x: f64) -> f64 {
    let end = (800.0 / x).acosh().max(1.0);
    let f = move |t: f64| (-x * t.cosh()).exp() * (n as f64 * t).cosh();
    let rough = gauss_legendre(&f, 0.0, end, 4);
    simpson(&f, 0.0, end, 1e-14 * rough)
}

/// `I_n(x)` by its positive power series.
fn bessel_i(n: i32, x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = (0.5 * x).powi(n) / (1..=n).map(f64::from).product::<f64>();
    let mut sum = term;
    for k in 1..200 {
        term *= q / (k as f64 * (k + n) as f64);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

/// HE11 mode with unit amplitude, built from the reference Bessel functions.
struct ReferenceMode {
    a: f64,
    beta: f64,
    h: f64,
    q: f64,
    s: f64,
    /// `J1(u) / K1(w)`
    ratio: f64,
}

impl ReferenceMode {
    fn new(a: f64, omega: f64, beta: f64, n1: f64) -> Self {
        let k = omega / C;
        let h = ((n1 * k).powi(2) - beta * beta).sqrt();
        let q = (beta * beta - k * k).sqrt();
        let (u, w) = (h * a, q * a);
        let j1p = 0.5 * (bessel_j(0, u) - bessel_j(2, u));
        let k1p = -0.5 * (bessel_k(0, w) + bessel_k(2, w));
        let s = (1.0 / (u * u) + 1.0 / (w * w))
            / (j1p / (u * bessel_j(1, u)) + k1p / (w * bessel_k(1, w)));
        Self {
            a,
            beta,
            h,
            q,
            s,
            ratio: bessel_j(1, u) / bessel_k(1, w),
        }
    }

    fn intensity(&self, r: f64) -> f64 {
        let s = self.s;
        if r <= self.a {
            let t = self.beta / (2.0 * self.h);
            let x = self.h * r;
            let (j0, j1, j2) = (bessel_j(0, x), bessel_j(1, x), bessel_j(2, x));
            let er = t * ((1.0 - s) * j0 - (1.0 + s) * j2);
            let ephi = t * ((1.0 - s) * j0 + (1.0 + s) * j2);
            er * er + ephi * ephi + j1 * j1
        } else {
            let t = self.ratio * self.beta / (2.0 * self.q);
            let x = self.q * r;
            let (k0, k1, k2) = (bessel_k(0, x), bessel_k(1, x), bessel_k(2, x));
            let er = t * ((1.0 - s) * k0 + (1.0 + s) * k2);
            let ephi = t * ((1.0 - s) * k0 - (1.0 + s) * k2);
            er * er + ephi * ephi + (self.ratio * k1).powi(2)
        }
    }
}

const MODE_SAMPLES: [(f64, f64); 6] = [
    (150.0, 0.6),
    (200.0, 0.449),
    (200.0, 0.8),
    (250.0, 0.5),
    (300.0, 0.35),
    (400.0, 0.3),
];

#[test]
fn mode_normalization_matches_quadrature() {
    for (a_nm, f) in MODE_SAMPLES {
        let model = constant();
        let a = a_nm * NM;
        let omega = f * omega_350();
        let beta = solve_beta(&model, a, omega).unwrap();
        let p = ModeProfile::new(&model, a, omega, beta).unwrap();

        let weight = |r: f64| 2.0 * PI * r * p.index_squared(r) * p.intensity(r);
        let total = simpson(&weight, 0.0, a, 1e-10) + simpson(&weight, a, 20.0 * a, 1e-10);
        assert!(
            (total - 1.0).abs() < 1e-6,
            "a = {a_nm} nm, omega = {f} omega_350: integral {total}"
        );

        let n1 = SILICA_INDEX;
        let reference = ReferenceMode::new(a, omega, beta, n1);
        assert!(((reference.s - p.s) / p.s).abs() < 1e-9);
        let raw =
            |r: f64| 2.0 * PI * r * if r <= a { n1 * n1 } else { 1.0 } * reference.intensity(r);
        let integral = |panels: usize| {
            gauss_legendre(&raw, 0.0, a, panels) + gauss_legendre(&raw, a, 20.0 * a, 4 * panels)
        };
        let (scale, finer) = (integral(8), integral(16));
        assert!(
            ((scale - finer) / finer).abs() < 1e-10,
            "reference quadrature not converged"
        );
        let amplitude = finer.sqrt().recip();
        assert!(
            ((amplitude - p.amplitude) / amplitude).abs() < 1e-6,
            "a = {a_nm} nm: reference amplitude {amplitude:e}, closed form {:e}",
            p.amplitude
        );
    }
}

#[test]
fn drude_lorentz_matches_constant_index_at_calibration() {
    let dl = drude_lorentz();
    let eps = dl.permittivity(omega_780());
    assert!((eps - SILICA_INDEX * SILICA_INDEX).abs() < 1e-9 * eps);
    let a = 200.0 * NM;
    let b_const = solve_beta(&constant(), a, omega_780()).unwrap();
    let b_dl = solve_beta(&dl, a, omega_780()).unwrap();
    assert!(((b_const - b_dl) / b_const).abs() < 1e-9);
}

#[test]
fn guided_wavelength_frequency_reproduces_beta() {
    for a_nm in [150.0, 200.0, 300.0] {
        let a = a_nm * NM;
        let lambda = 780.0 * NM;
        let omega = omega_for_guided_wavelength(SILICA_INDEX, a, lambda).unwrap();
        let beta = solve_beta(&constant(), a, omega).unwrap();
        assert!(
            (2.0 * PI / beta - lambda).abs() < 1e-12 * lambda,
            "a = {a_nm} nm"
        );
        assert!(omega < omega_780());
        let dl = DielectricModel::calibrated_drude_lorentz(omega, SILICA_INDEX).unwrap();
        let beta_dl = solve_beta(&dl, a, omega).unwrap();
        assert!(((beta_dl - beta) / beta).abs() < 1e-9);
    }
    // regression value for a = 200 nm
    let omega = omega_for_guided_wavelength(SILICA_INDEX, 200.0 * NM, 780.0 * NM).unwrap();
    assert!(
        (omega / omega_780() - 0.930849).abs() < 1e-6,
        "{}",
        omega / omega_780()
    );
}

#[test]
fn stored_derivative_converges_at_production_spacing() {
    let step = 40.0 * omega_780() / 65536.0;
    for model in [constant(), drude_lorentz()] {
        let limit = model
            .guiding_limit()
            .unwrap_or(3.0 * omega_350())
            .min(3.0 * omega_350());
        for start in [0.1, 0.3, 0.6, 0.85] {
            let first = start * limit;
            let grid: Vec<f64> = (0..200).map(|i| first + step * i as f64).collect();
            let table = build_dispersion_table(&model, 200.0 * NM, &grid).unwrap();
            let err = table.derivative_refinement(1).unwrap();
            assert!(
                err < 1e-6,
                "{model:?} from {start} of the guiding range: {err:e}"
            );
        }
    }
}

#[test]
fn tables_are_monotone_and_sandwiched() {
    for model in [constant(), drude_lorentz()] {
        let limit = model.guiding_limit().unwrap_or(3.0 * omega_350());
        let grid: Vec<f64> = (1..=600).map(|i| limit * i as f64 / 601.0).collect();
        let t = build_dispersion_table(&model, 200.0 * NM, &grid).unwrap();
        assert!(t.len() > 500);
        for i in 0..t.len() {
            let w = t.omega[i];
            let n1 = model.refractive_index(w).unwrap();
            assert!(t.beta[i] > w / C && t.beta[i] < n1 * w / C, "row {i}");
            if i > 0 {
                assert!(t.beta[i] > t.beta[i - 1]);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn root_brackets_sign_change(a_nm in 150.0f64..400.0, f in 0.15f64..2.5) {
        let model = constant();
        let (a, omega) = (a_nm * NM, f * omega_350());
        let beta = solve_beta(&model, a, omega).unwrap();
        let k = omega / C;
        prop_assert!(beta > k && beta < SILICA_INDEX * k);
        let eps = 1e-7 * (beta - k);
        let lo = dispersion_residual(&model, a, omega, beta - eps).unwrap();
        let hi = dispersion_residual(&model, a, omega, beta + eps).unwrap();
        prop_assert!(lo * hi <= 0.0, "residuals {lo:e} {hi:e}");
    }

    #[test]
    fn beta_increases_with_frequency(a_nm in 150.0f64..400.0, f in 0.15f64..0.95, df in 1e-3f64..0.05) {
        let model = drude_lorentz();
        let a = a_nm * NM;
        let b1 = solve_beta(&model, a, f * omega_350()).unwrap();
        let b2 = solve_beta(&model, a, (f + df) * omega_350()).unwrap();
        prop_assert!(b2 > b1);
        let n = model.refractive_index((f + df) * omega_350()).unwrap();
        prop_assert!(b2 < n * (f + df) * omega_350() / C);
    }

    #[test]
    fn mode_intensity_outside_is_positive(a_nm in 150.0f64..400.0, f in 0.15f64..2.0, r_over_a in 1.01f64..3.0) {
        let model = constant();
        let (a, omega) = (a_nm * NM, f * omega_350());
        let beta = solve_beta(&model, a, omega).unwrap();
        let p = ModeProfile::new(&model, a, omega, beta).unwrap();
        prop_assert!(p.e_r(r_over_a * a).unwrap().norm_sqr() > 0.0);
        prop_assert!(p.intensity(r_over_a * a) > p.intensity(1.2 * r_over_a * a));
    }
}

#[test]
fn reference_bessel_functions_are_sane() {
    assert!(bessel_j(0, 2.404825557695773).abs() < 1e-14);
    assert!((bessel_k(0, 1.0) - 0.42102443824070834).abs() < 1e-13);
    // Wronskian I_n K_{n+1} + I_{n+1} K_n = 1/x
    for x in [0.05, 0.3, 1.0, 2.5, 6.0, 15.0] {
        for n in 0..2 {
            let w = bessel_i(n, x) * bessel_k(n + 1, x) + bessel_i(n + 1, x) * bessel_k(n, x);
            assert!((w * x - 1.0).abs() < 1e-11, "x = {x}, n = {n}: {}", w * x);
        }
    }
}
