use serde::{Deserialize, Serialize};

use super::DielectricModel;
use crate::constants::C;
use crate::error::{Error, Result};
use crate::interp::cubic_uniform;
use crate::special::{bessel_j012, bessel_k012_scaled};

/// Relative offset of the root bracket from the light lines `k2` and `k1`.
pub const BRACKET_DELTA: f64 = 1e-12;

/// First zero of J0; the HE11 core parameter `h a` always lies below it.
const J0_FIRST_ZERO: f64 = 2.404_825_557_695_773;

/// Intermediate quantities of the eigenvalue problem at one `(omega, beta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberParameters {
    pub omega: f64,
    pub n1: f64,
    /// Wavenumber in the core, `n1 omega / c`.
    pub k1: f64,
    /// Wavenumber in the vacuum cladding, `omega / c`.
    pub k2: f64,
    pub beta: f64,
    /// Transverse wavenumber in the core.
    pub h: f64,
    /// Transverse decay constant in the cladding.
    pub q: f64,
    pub radius: f64,
}

impl FiberParameters {
    /// `h a`
    pub fn u(&self) -> f64 {
        self.h * self.radius
    }
    /// `q a`
    pub fn w(&self) -> f64 {
        self.q * self.radius
    }
}

pub fn fiber_parameters(
    model: &DielectricModel,
    radius: f64,
    omega: f64,
    beta: f64,
) -> Result<FiberParameters> {
    let n1 = model
        .refractive_index(omega)
        .filter(|&n| n > 1.0)
        .ok_or_else(|| Error::Domain(format!("no guiding index at omega = {omega:e}")))?;
    let k2 = omega / C;
    let k1 = n1 * k2;
    if !(beta > k2 && beta < k1) {
        return Err(Error::Domain(format!(
            "beta = {beta:e} outside ({k2:e}, {k1:e})"
        )));
    }
    let h = ((k1 - beta) * (k1 + beta)).sqrt();
    let q = ((beta - k2) * (beta + k2)).sqrt();
    Ok(FiberParameters {
        omega,
        n1,
        k1,
        k2,
        beta,
        h,
        q,
        radius,
    })
}

/// `K1'(w) / (w K1(w))` with `K1' = -(K0 + K2) / 2`.
fn k_log_derivative(w: f64) -> f64 {
    let [k0, k1, k2] = bessel_k012_scaled(w);
    -(k0 + k2) / (2.0 * w * k1)
}

/// Residual of the HE11 characteristic equation (vacuum cladding) in the
/// core/cladding parameters `u = h a`, `w = q a`:
///
/// `J0(u)/(u J1(u)) - [ -(n1^2+1)/(2 n1^2) Kw + 1/u^2 - R ]`,
/// `R = sqrt( ((n1^2-1)/(2 n1^2) Kw)^2 + (beta/k1)^2 (1/u^2 + 1/w^2)^2 )`,
/// `Kw = K1'(w)/(w K1(w))`.
///
/// The `1/w^2` parts of `-(n1^2+1)/(2 n1^2) Kw` and `R` cancel as `w -> 0`,
/// so the difference is formed from `Kw = -K0/(w K1) - 1/w^2` and
/// `beta/k1 - 1/n1 = (beta - k2)/k1`, which keeps the residual accurate
/// down to `w ~ 1e-100`. It tends to `+inf` as `u -> 0` and to `-inf`
/// (logarithmically) as `w -> 0`.
fn residual_uw(n1: f64, radius: f64, k1: f64, u: f64, w: f64) -> f64 {
    let [j0, j1, _] = bessel_j012(u);
    let lhs = j0 / (u * j1);
    let [k0, k1w, _] = bessel_k012_scaled(w);
    let k_ratio = k0 / (w * k1w);
    let abs_kw = k_ratio + 1.0 / (w * w);
    let b = 1.0 / (n1 * n1);
    let sqrt_b = 1.0 / n1;
    let sum = 0.5 * (1.0 + b);
    let diff = 0.5 * (1.0 - b);
    let inv_u2 = 1.0 / (u * u);
    let inv = inv_u2 + 1.0 / (w * w);
    let k2 = k1 * sqrt_b;
    let beta = (k2 * k2 + (w / radius).powi(2)).sqrt();
    let beta_over_k1 = beta / k1;
    let r = (diff * abs_kw).hypot(beta_over_k1 * inv);
    // sqrt(b)|Kw| - (beta/k1) inv, without cancellation
    let gap = sqrt_b * (k_ratio - inv_u2)
        - (1.0 + (w / u).powi(2)) / (radius * radius * (beta + k2) * k1);
    let pair = sqrt_b * abs_kw + beta_over_k1 * inv;
    // sum |Kw| - R = (b Kw^2 - (beta/k1)^2 inv^2) / (R + sum |Kw|)
    let cladding = gap * pair / (r + sum * abs_kw);
    lhs - inv_u2 - cladding
}

/// Residual of the eigenvalue equation at `(omega, beta)`; requires
/// `omega / c < beta < n1 omega / c`.
pub fn dispersion_residual(
    model: &DielectricModel,
    radius: f64,
    omega: f64,
    beta: f64,
) -> Result<f64> {
    let p = fiber_parameters(model, radius, omega, beta)?;
    Ok(residual_uw(p.n1, radius, p.k1, p.u(), p.w()))
}

/// Hybrid-mode characteristic equation in product form,
/// `(x + y)(x + y / n1^2) - (beta/k1)^2 (1/u^2 + 1/w^2)^2` with
/// `x = J1'(u)/(u J1(u))`, `y = K1'(w)/(w K1(w))`. It vanishes on both the
/// HE and EH branches and serves as an independent check of the HE11 root.
pub fn characteristic_product(
    model: &DielectricModel,
    radius: f64,
    omega: f64,
    beta: f64,
) -> Result<f64> {
    let p = fiber_parameters(model, radius, omega, beta)?;
    let (u, w) = (p.u(), p.w());
    let [j0, j1, _] = bessel_j012(u);
    let x = (j0 - j1 / u) / (u * j1);
    let y = k_log_derivative(w);
    let inv = 1.0 / (u * u) + 1.0 / (w * w);
    Ok((x + y) * (x + y / (p.n1 * p.n1)) - (beta / p.k1 * inv).powi(2))
}

/// Smallest cladding parameter `w = q a` searched for a root.
const W_FLOOR: f64 = 1e-100;

/// Propagation constant of the HE11 mode at `omega`.
///
/// The root is bracketed in `w = q a`, which stays well conditioned when
/// `beta` is within rounding of `omega / c` (weak guidance at low
/// frequency). The bracket spans `w` from `1e-100` up to the point where
/// `beta = k1 (1 - 1e-12)`, clipped so that `h a < j_{0,1}`; it is bisected
/// (geometrically while it spans more than a factor two) to `1e-13` relative
/// and polished by one Newton step.
pub fn solve_beta(model: &DielectricModel, radius: f64, omega: f64) -> Result<f64> {
    Ok(solve_mode(model, radius, omega)?.0)
}

/// Root of the eigenvalue equation as `(beta, w)`.
pub(crate) fn solve_mode(model: &DielectricModel, radius: f64, omega: f64) -> Result<(f64, f64)> {
    let no_mode = |reason: &str| Error::NoGuidedMode {
        omega,
        reason: reason.to_string(),
    };
    let n1 = match model.refractive_index(omega) {
        Some(n) if n > 1.0 && omega > 0.0 => n,
        _ => return Err(no_mode("guiding condition n1 > 1 fails")),
    };
    let k2 = omega / C;
    let k1 = n1 * k2;
    let v = radius * k2 * (n1 * n1 - 1.0).sqrt();
    let residual = |w: f64| {
        let u = ((v - w) * (v + w)).max(0.0).sqrt();
        residual_uw(n1, radius, k1, u, w)
    };

    let beta_hi = k1 * (1.0 - BRACKET_DELTA);
    let mut hi = radius * ((beta_hi - k2) * (beta_hi + k2)).sqrt();
    let mut lo = W_FLOOR;
    if v > J0_FIRST_ZERO {
        lo = lo.max(((v - J0_FIRST_ZERO) * (v + J0_FIRST_ZERO)).sqrt());
    }
    if !(lo < hi) {
        return Err(no_mode("empty bracket"));
    }
    let (r_lo, r_hi) = (residual(lo), residual(hi));
    if !(r_lo < 0.0 && r_hi > 0.0) {
        return Err(no_mode("residual does not change sign across the bracket"));
    }
    while hi - lo > 1e-13 * hi {
        let mid = if hi > 2.0 * lo {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        if residual(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut w = 0.5 * (lo + hi);
    let r = residual(w);
    let dw = 1e-7 * w;
    let slope = (residual(w + dw) - residual(w - dw)) / (2.0 * dw);
    if slope.is_finite() && slope != 0.0 {
        let polished = w - r / slope;
        if polished > lo - 1e-13 * hi
            && polished < hi + 1e-13 * hi
            && residual(polished).abs() <= r.abs()
        {
            w = polished;
        }
    }
    // beta - k2 = (w/a)^2 / (beta + k2), accurate when beta ~ k2
    let excess = (w / radius).powi(2);
    let beta = k2 + excess / ((k2 * k2 + excess).sqrt() + k2);
    Ok((beta, w))
}

/// Propagation constant, density of states and velocities on a uniform
/// frequency grid for one fiber.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersionTable {
    pub model: DielectricModel,
    pub radius: f64,
    pub omega: Vec<f64>,
    pub beta: Vec<f64>,
    pub beta_prime: Vec<f64>,
    pub v_g: Vec<f64>,
    pub v_p: Vec<f64>,
    /// Grid points dropped because no guided root could be resolved.
    pub warnings: Vec<String>,
}

/// Solve `beta` on a uniform grid. Grid points at either end without a
/// resolvable root are dropped and reported in `warnings`; a gap inside
/// the grid is an error.
pub fn build_dispersion_table(
    model: &DielectricModel,
    radius: f64,
    omega_grid: &[f64],
) -> Result<DispersionTable> {
    if omega_grid.len() < 3 {
        return Err(Error::Domain(
            "dispersion grid needs at least 3 points".into(),
        ));
    }
    let step = omega_grid[1] - omega_grid[0];
    let uniform = omega_grid
        .windows(2)
        .all(|w| ((w[1] - w[0]) - step).abs() <= 1e-9 * step);
    if !(step > 0.0) || !uniform {
        return Err(Error::Domain(
            "dispersion grid must be uniform and increasing".into(),
        ));
    }
    let solved: Vec<Option<f64>> = omega_grid
        .iter()
        .map(|&w| {
            solve_beta(model, radius, w)
                .ok()
                .filter(|&b| b > w / C * (1.0 + BRACKET_DELTA))
        })
        .collect();
    let first = solved
        .iter()
        .position(Option::is_some)
        .ok_or_else(|| Error::NoGuidedMode {
            omega: omega_grid[0],
            reason: "no grid point is guided".into(),
        })?;
    let last = solved.iter().rposition(Option::is_some).unwrap_or(first);
    let mut warnings = Vec::new();
    if first > 0 {
        warnings.push(format!(
            "dropped {first} low-frequency points below {:e} rad/s (root within bracket tolerance of the light line)",
            omega_grid[first]
        ));
    }
    if last + 1 < omega_grid.len() {
        warnings.push(format!(
            "dropped {} high-frequency points above {:e} rad/s (no guided root)",
            omega_grid.len() - last - 1,
            omega_grid[last]
        ));
    }
    let mut beta = Vec::with_capacity(last + 1 - first);
    for (i, b) in solved[first..=last].iter().enumerate() {
        match b {
            Some(b) => beta.push(*b),
            None => {
                return Err(Error::NoGuidedMode {
                    omega: omega_grid[first + i],
                    reason: "gap inside the guiding range".into(),
                })
            }
        }
    }
    if beta.len() < 3 {
        return Err(Error::Domain("fewer than 3 guided grid points".into()));
    }
    let omega = omega_grid[first..=last].to_vec();
    let beta_prime = differentiate(&beta, step);
    let v_g = beta_prime.iter().map(|bp| 1.0 / bp).collect();
    let v_p = omega.iter().zip(&beta).map(|(w, b)| w / b).collect();
    Ok(DispersionTable {
        model: *model,
        radius,
        omega,
        beta,
        beta_prime,
        v_g,
        v_p,
        warnings,
    })
}

/// Fourth-order differences: central inside, shifted or one-sided within
/// two points of the ends.
fn differentiate(values: &[f64], step: f64) -> Vec<f64> {
    let n = values.len();
    if n < 5 {
        return (0..n)
            .map(|i| match i {
                0 => (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * step),
                i if i == n - 1 => {
                    (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * step)
                }
                i => (values[i + 1] - values[i - 1]) / (2.0 * step),
            })
            .collect();
    }
    let d = 12.0 * step;
    let f = values;
    (0..n)
        .map(|i| match i {
            0 => (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / d,
            1 => (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / d,
            i if i == n - 2 => {
                (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / d
            }
            i if i == n - 1 => {
                (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4]
                    + 3.0 * f[n - 5])
                    / d
            }
            i => (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / d,
        })
        .collect()
}

impl DispersionTable {
    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn step(&self) -> f64 {
        self.omega[1] - self.omega[0]
    }

    pub fn omega_min(&self) -> f64 {
        self.omega[0]
    }

    pub fn omega_max(&self) -> f64 {
        self.omega[self.omega.len() - 1]
    }

    fn interpolate(&self, values: &[f64], omega: f64) -> Result<f64> {
        cubic_uniform(self.omega[0], self.step(), values, omega).ok_or_else(|| {
            Error::Domain(format!(
                "omega = {omega:e} outside table range [{:e}, {:e}]",
                self.omega_min(),
                self.omega_max()
            ))
        })
    }

    pub fn beta_at(&self, omega: f64) -> Result<f64> {
        self.interpolate(&self.beta, omega)
    }

    pub fn beta_prime_at(&self, omega: f64) -> Result<f64> {
        self.interpolate(&self.beta_prime, omega)
    }

    pub fn group_velocity_at(&self, omega: f64) -> Result<f64> {
        self.interpolate(&self.v_g, omega)
    }

    /// Frequency at which `beta` takes a given value, by bisection on the
    /// interpolated table (beta is monotone).
    pub fn omega_for_beta(&self, beta: f64) -> Result<f64> {
        let n = self.len();
        if !(beta >= self.beta[0] && beta <= self.beta[n - 1]) {
            return Err(Error::Domain(format!(
                "beta = {beta:e} outside table range"
            )));
        }
        let idx = self.beta.partition_point(|&b| b < beta).clamp(1, n - 1);
        let (mut lo, mut hi) = (self.omega[idx - 1], self.omega[idx]);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.beta_at(mid)? < beta {
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

    /// Largest relative change of `beta'` when the difference step is
    /// halved, checked on every `stride`-th point at least two rows from the
    /// ends.
    pub fn derivative_refinement(&self, stride: usize) -> Result<f64> {
        let half = 0.5 * self.step();
        let beta = |w: f64| solve_beta(&self.model, self.radius, w);
        let mut worst: f64 = 0.0;
        for i in (2..self.len().saturating_sub(2)).step_by(stride.max(1)) {
            let w = self.omega[i];
            let refined = (beta(w - 2.0 * half)? - 8.0 * beta(w - half)? + 8.0 * beta(w + half)?
                - beta(w + 2.0 * half)?)
                / (12.0 * half);
            worst = worst.max(((refined - self.beta_prime[i]) / refined).abs());
        }
        Ok(worst)
    }
}
