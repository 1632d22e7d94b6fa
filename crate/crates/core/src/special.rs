//! Cylinder functions needed by the HE11 mode: J0, J1, J2 and K0, K1, K2.
//!
//! Both families are evaluated from integral representations with the
//! trapezoidal rule, which converges geometrically for these integrands:
//!
//! * `J_n(x) = (1/pi) * int_0^pi cos(n*t - x*sin t) dt` is periodic and
//!   entire, so an `M`-point rule is exact up to terms of order `J_{2M-n}(x)`.
//! * `K_n(x) = int_0^inf exp(-x*cosh t) cosh(n*t) dt` is analytic in the strip
//!   `|Im t| < pi/2`; with the step shrunk like `1/sqrt(x)` at large `x` the
//!   error stays below double precision.
//!
//! The exponentially scaled `K` values are exposed because the mode profile
//! only ever needs ratios like `K_1(q r) / K_1(q a)`.

use std::f64::consts::PI;

/// `J0(x)`, `J1(x)`, `J2(x)` evaluated together.
pub fn bessel_j012(x: f64) -> [f64; 3] {
    let ax = x.abs();
    if ax <= 4.0 {
        return j012_series(x);
    }
    // Truncation error of the periodic rule is ~ (e x / 4M)^(2M).
    let m = (24.0 + 1.5 * ax).ceil() as usize;
    let step = PI / m as f64;
    let mut acc = [0.0; 3];
    for k in 0..=m {
        let t = k as f64 * step;
        let w = if k == 0 || k == m { 0.5 } else { 1.0 };
        let phase = ax * t.sin();
        acc[0] += w * phase.cos();
        acc[1] += w * (t - phase).cos();
        acc[2] += w * (2.0 * t - phase).cos();
    }
    let mut out = acc.map(|v| v / m as f64);
    if x < 0.0 {
        out[1] = -out[1];
    }
    out
}

/// Ascending series; terms peak near `k ~ x/2`, so at most one digit is lost
/// for `|x| <= 4`.
fn j012_series(x: f64) -> [f64; 3] {
    let y = -0.25 * x * x;
    let mut out = [0.0; 3];
    for (n, slot) in out.iter_mut().enumerate() {
        // (x/2)^n / n!
        let mut term = (0..n).fold(1.0, |acc, k| acc * 0.5 * x / (k + 1) as f64);
        let mut sum = term;
        for k in 1..40 {
            term *= y / (k * (k + n)) as f64;
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        *slot = sum;
    }
    out
}

pub fn bessel_j0(x: f64) -> f64 {
    bessel_j012(x)[0]
}

pub fn bessel_j1(x: f64) -> f64 {
    bessel_j012(x)[1]
}

/// `exp(x) * [K0(x), K1(x), K2(x)]` for `x > 0`.
pub fn bessel_k012_scaled(x: f64) -> [f64; 3] {
    assert!(
        x > 0.0,
        "modified Bessel K requires a positive argument, got {x}"
    );
    // For large x the integrand is a Gaussian of width 1/sqrt(x).
    let step = 0.125f64.min(0.5 / x.sqrt());
    let mut acc = [0.0; 3];
    let mut k = 0usize;
    loop {
        let t = k as f64 * step;
        // exp(-x (cosh t - 1)), written to avoid cancellation at small t
        let s = (0.5 * t).sinh();
        let e = (-2.0 * x * s * s).exp();
        let w = if k == 0 { 0.5 } else { 1.0 };
        let c1 = t.cosh();
        let c2 = 2.0 * c1 * c1 - 1.0;
        acc[0] += w * e;
        acc[1] += w * e * c1;
        acc[2] += w * e * c2;
        if k > 0 && e * c2 < 1e-18 * acc[0] {
            break;
        }
        k += 1;
    }
    acc.map(|v| v * step)
}

/// `[K0(x), K1(x), K2(x)]` for `x > 0` (underflows to zero beyond `x ~ 700`).
pub fn bessel_k012(x: f64) -> [f64; 3] {
    let scale = (-x).exp();
    bessel_k012_scaled(x).map(|v| v * scale)
}

pub fn bessel_k0(x: f64) -> f64 {
    bessel_k012(x)[0]
}

pub fn bessel_k1(x: f64) -> f64 {
    bessel_k012(x)[1]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn j_reference_values() {
        // Abramowitz & Stegun table 9.1
        let [j0, j1, j2] = bessel_j012(1.0);
        assert!(rel(j0, 0.765_197_686_557_966_6) < 1e-14);
        assert!(rel(j1, 0.440_050_585_744_933_5) < 1e-14);
        assert!(rel(j2, 0.114_903_484_931_900_5) < 1e-13);
        let [j0, j1, _] = bessel_j012(10.0);
        assert!(rel(j0, -0.245_935_764_451_348_3) < 1e-13);
        assert!(rel(j1, 0.043_472_746_168_861_44) < 1e-12);
        assert!(bessel_j0(2.404_825_557_695_773).abs() < 1e-15);
    }

    #[test]
    fn series_matches_integral_branch() {
        for &x in &[3.9, 4.0] {
            let series = j012_series(x);
            let m = 40;
            let step = PI / m as f64;
            for (n, s) in series.iter().enumerate() {
                let quad: f64 = (0..=m)
                    .map(|k| {
                        let t = k as f64 * step;
                        let w = if k == 0 || k == m { 0.5 } else { 1.0 };
                        w * (n as f64 * t - x * t.sin()).cos()
                    })
                    .sum::<f64>()
                    / m as f64;
                assert!((s - quad).abs() < 1e-14, "n = {n}, x = {x}");
            }
        }
    }

    #[test]
    fn j_parity_and_recurrence() {
        for &x in &[0.3, 1.7, 2.4, 5.5, 13.0] {
            let [j0, j1, j2] = bessel_j012(x);
            assert!((j2 - (2.0 * j1 / x - j0)).abs() < 1e-14);
            assert_eq!(bessel_j1(-x), -j1);
            assert_eq!(bessel_j0(-x), j0);
        }
    }

    #[test]
    fn k_reference_values() {
        // Abramowitz & Stegun table 9.8
        assert!(rel(bessel_k0(1.0), 0.421_024_438_240_708_3) < 1e-14);
        assert!(rel(bessel_k1(1.0), 0.601_907_230_197_234_6) < 1e-14);
        assert!(rel(bessel_k0(0.1), 2.427_069_024_702_016_6) < 1e-13);
        assert!(rel(bessel_k1(0.1), 9.853_844_780_870_606) < 1e-13);
        assert!(rel(bessel_k0(10.0), 1.778_006_231_616_917e-5) < 1e-13);
        assert!(rel(bessel_k1(10.0), 1.864_877_345_382_558e-5) < 1e-13);
    }

    #[test]
    fn k_recurrence_and_small_argument() {
        for &x in &[1e-6, 1e-3, 0.5, 2.0, 30.0, 400.0] {
            let [k0, k1, k2] = bessel_k012_scaled(x);
            assert!(rel(k2, k0 + 2.0 * k1 / x) < 1e-13, "x = {x}");
        }
        // K1(x) ~ 1/x for small x
        assert!(rel(bessel_k1(1e-8), 1e8) < 1e-6);
    }
}
