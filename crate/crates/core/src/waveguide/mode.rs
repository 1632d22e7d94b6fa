//! HE11 mode functions with a vacuum cladding.
//!
//! Components (common phase factors dropped), `u = h a`, `w = q a`:
//!
//! ```text
//! r < a:  e_r = i A (beta/2h) [(1-s) J0(hr) - (1+s) J2(hr)]
//!         e_phi = -A (beta/2h) [(1-s) J0(hr) + (1+s) J2(hr)]
//!         e_z = A J1(hr)
//! r > a:  e_r = i A (beta/2q) (J1(u)/K1(w)) [(1-s) K0(qr) + (1+s) K2(qr)]
//!         e_phi = -A (beta/2q) (J1(u)/K1(w)) [(1-s) K0(qr) - (1+s) K2(qr)]
//!         e_z = A (J1(u)/K1(w)) K1(qr)
//! ```
//!
//! `A` is fixed by `int dphi int dr r n^2(r) |e|^2 = 1`, evaluated in closed
//! form with the Lommel integrals of `J_n^2` and `K_n^2`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{fiber_parameters, DielectricModel, FiberParameters};
use crate::error::{Error, Result};
use crate::special::{bessel_j012, bessel_k012_scaled};

/// Mode parameter `s = (1/u^2 + 1/w^2) / (J1'(u)/(u J1(u)) + K1'(w)/(w K1(w)))`.
pub fn mode_s_parameter(h: f64, q: f64, radius: f64) -> Result<f64> {
    if !(h > 0.0 && q > 0.0) {
        return Err(Error::Domain(format!(
            "s parameter needs h, q > 0 (h = {h:e}, q = {q:e})"
        )));
    }
    let (u, w) = (h * radius, q * radius);
    let [j0, j1, _] = bessel_j012(u);
    let [k0, k1, k2] = bessel_k012_scaled(w);
    let j_term = (j0 - j1 / u) / (u * j1);
    let k_term = -(k0 + k2) / (2.0 * w * k1);
    let denom = j_term + k_term;
    if denom.abs() < 1e-300 || !denom.is_finite() {
        return Err(Error::DegenerateMode(format!(
            "vanishing s denominator at u = {u}, w = {w}"
        )));
    }
    Ok((1.0 / (u * u) + 1.0 / (w * w)) / denom)
}

/// Normalized HE11 mode at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeProfile {
    pub params: FiberParameters,
    pub s: f64,
    /// Normalization amplitude `A`.
    pub amplitude: f64,
    /// `J1(u)`
    j1_u: f64,
    /// `exp(w) K1(w)`
    k1_w_scaled: f64,
}

impl ModeProfile {
    pub fn new(model: &DielectricModel, radius: f64, omega: f64, beta: f64) -> Result<Self> {
        let params = fiber_parameters(model, radius, omega, beta)?;
        let (h, q, a) = (params.h, params.q, radius);
        let s = mode_s_parameter(h, q, a)?;
        let (u, w) = (params.u(), params.w());
        let [j0, j1, j2] = bessel_j012(u);
        let j3 = 4.0 * j2 / u - j1;
        let [k0, k1, k2] = bessel_k012_scaled(w);
        let k3 = k1 + 4.0 * k2 / w;
        let half_a2 = 0.5 * a * a;

        let l0 = half_a2 * (j0 * j0 + j1 * j1);
        let l1 = half_a2 * (j1 * j1 - j0 * j2);
        let l2 = half_a2 * (j2 * j2 - j1 * j3);
        let core_t = 2.0 * (beta / (2.0 * h)).powi(2);
        let inside = core_t * ((1.0 - s).powi(2) * l0 + (1.0 + s).powi(2) * l2) + l1;

        // K integrals divided by K1(w)^2; the exponential scale cancels.
        let k1sq = k1 * k1;
        let m0 = half_a2 * (k1 * k1 - k0 * k0) / k1sq;
        let m1 = half_a2 * (k0 * k2 - k1 * k1) / k1sq;
        let m2 = half_a2 * (k1 * k3 - k2 * k2) / k1sq;
        let clad_t = 2.0 * (beta / (2.0 * q)).powi(2);
        let outside = j1 * j1 * (clad_t * ((1.0 - s).powi(2) * m0 + (1.0 + s).powi(2) * m2) + m1);

        let n1sq = params.n1 * params.n1;
        let norm = 2.0 * PI * (n1sq * inside + outside);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::DegenerateMode(format!(
                "normalization integral {norm:e}"
            )));
        }
        Ok(Self {
            params,
            s,
            amplitude: norm.sqrt().recip(),
            j1_u: j1,
            k1_w_scaled: k1,
        })
    }

    /// `K_n(q r) / K1(q a)` for n = 0, 1, 2, with `r >= a`.
    fn cladding_ratios(&self, r: f64) -> [f64; 3] {
        let qr = self.params.q * r;
        let decay = (-(qr - self.params.w())).exp();
        bessel_k012_scaled(qr).map(|k| k / self.k1_w_scaled * decay)
    }

    /// Field components `(e_r, e_phi, e_z)` outside the fiber, `r > a`.
    pub fn field_outside(&self, r: f64) -> Result<[Complex64; 3]> {
        if !(r > self.params.radius) {
            return Err(Error::Domain(format!(
                "mode evaluated at r = {r:e} inside the fiber (a = {:e})",
                self.params.radius
            )));
        }
        let [k0, k1, k2] = self.cladding_ratios(r);
        let pre = self.amplitude * self.j1_u;
        let t = pre * self.params.beta / (2.0 * self.params.q);
        let s = self.s;
        Ok([
            Complex64::new(0.0, t * ((1.0 - s) * k0 + (1.0 + s) * k2)),
            Complex64::new(-t * ((1.0 - s) * k0 - (1.0 + s) * k2), 0.0),
            Complex64::new(pre * k1, 0.0),
        ])
    }

    /// Radial component outside the fiber.
    pub fn e_r(&self, r: f64) -> Result<Complex64> {
        Ok(self.field_outside(r)?[0])
    }

    /// `|e|^2` at any radius (core values use the J-function components).
    pub fn intensity(&self, r: f64) -> f64 {
        let a = self.params.radius;
        if r > a {
            return self
                .field_outside(r)
                .map(|f| f.iter().map(|c| c.norm_sqr()).sum())
                .unwrap_or(0.0);
        }
        let h = self.params.h;
        let [j0, j1, j2] = bessel_j012(h * r);
        let t = self.amplitude * self.params.beta / (2.0 * h);
        let s = self.s;
        let er = t * ((1.0 - s) * j0 - (1.0 + s) * j2);
        let ephi = t * ((1.0 - s) * j0 + (1.0 + s) * j2);
        let ez = self.amplitude * j1;
        er * er + ephi * ephi + ez * ez
    }

    /// `n^2(r)` with a vacuum cladding.
    pub fn index_squared(&self, r: f64) -> f64 {
        if r <= self.params.radius {
            self.params.n1 * self.params.n1
        } else {
            1.0
        }
    }

    /// Axial field on the core side of the interface.
    pub fn e_z_core_boundary(&self) -> f64 {
        self.amplitude * bessel_j012(self.params.u())[1]
    }
}
