use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::SpectralGrid;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrelationKind {
    OnePoint,
    TwoPoint,
}

/// `F(t) = int dw exp(-i (w - w0) t) S(w)` on the full periodic window of
/// the discrete transform, `t_k = t0 + k dt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationFunction {
    pub kind: CorrelationKind,
    /// First sample time, `-len/2 * dt`, in seconds.
    pub t0: f64,
    /// Sample spacing in seconds, `2 pi / (len * omega_step)`.
    pub dt: f64,
    pub samples: Vec<Complex64>,
    pub omega_step: f64,
    pub separation: f64,
    pub cutoff_omega: f64,
    pub coupling_scale: f64,
}

/// Width and peak positions of `|F(t)|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakDiagnostics {
    /// Full width at half maximum of the largest peak, s.
    pub fwhm: f64,
    /// Times of the two largest local maxima (ascending), s.
    pub peak_times: Vec<f64>,
    /// Distance between those maxima, s.
    pub peak_separation: Option<f64>,
}

/// Transform the chosen density of `spectral` with a Riemann-sum weight
/// `omega_step`. The atomic frequency sits on the grid, so the phase
/// `exp(i w0 t)` is evaluated exactly modulo the window period.
pub fn correlation_function(
    spectral: &SpectralGrid,
    kind: CorrelationKind,
) -> Result<CorrelationFunction> {
    let grid = spectral.grid;
    let density = match kind {
        CorrelationKind::OnePoint => &spectral.s_one,
        CorrelationKind::TwoPoint => {
            let phase_step = spectral.max_phase_step();
            let limit = PI / 8.0;
            if phase_step > limit {
                let required = grid.step * limit / phase_step;
                return Err(Error::Nyquist(format!(
                    "beta d advances {phase_step:.3} rad per grid step (limit pi/8); need omega step <= {required:e} rad/s"
                )));
            }
            &spectral.s_two
        }
    };
    let n = grid.len;
    let mut buf: Vec<Complex64> = density
        .iter()
        .map(|&s| Complex64::new(s * grid.step, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let m = grid.omega0_index;
    let half = n / 2;
    let samples = (0..n)
        .map(|idx| {
            let j = (idx + half) % n;
            let turns = ((m as u128 * j as u128) % n as u128) as f64 / n as f64;
            buf[j] * Complex64::from_polar(1.0, 2.0 * PI * turns)
        })
        .collect();
    let dt = grid.time_step();
    Ok(CorrelationFunction {
        kind,
        t0: -(half as f64) * dt,
        dt,
        samples,
        omega_step: grid.step,
        separation: spectral.separation,
        cutoff_omega: spectral.cutoff_omega,
        coupling_scale: spectral.coupling_scale,
    })
}

impl CorrelationFunction {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    /// Index of `t = 0`.
    pub fn origin(&self) -> usize {
        self.samples.len() / 2
    }

    /// Samples at `t = 0, dt, 2 dt, ...` as consumed by the evolution.
    pub fn positive_times(&self) -> &[Complex64] {
        &self.samples[self.origin()..]
    }

    /// Copy with the samples multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            samples: self.samples.iter().map(|s| s * factor).collect(),
            coupling_scale: self.coupling_scale * factor,
            ..self.clone()
        }
    }

    /// Kernel built directly from causal samples (`t >= 0`), e.g. numerical
    /// delta functions. Negative times are filled by conjugate symmetry.
    pub fn from_causal(kind: CorrelationKind, dt: f64, causal: &[Complex64]) -> Self {
        let half = causal.len();
        let mut samples = vec![Complex64::new(0.0, 0.0); 2 * half];
        for (k, v) in causal.iter().enumerate() {
            samples[half + k] = *v;
            if k > 0 && k <= half {
                samples[half - k] = v.conj();
            }
        }
        Self {
            kind,
            t0: -(half as f64) * dt,
            dt,
            samples,
            omega_step: 2.0 * PI / (2.0 * half as f64 * dt),
            separation: 0.0,
            cutoff_omega: f64::INFINITY,
            coupling_scale: 0.0,
        }
    }

    fn magnitudes(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.norm()).collect()
    }

    /// Full width at half maximum of the tallest peak of `|F|`.
    pub fn fwhm(&self) -> f64 {
        let mag = self.magnitudes();
        let (peak, &top) = mag
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty correlation");
        let half = 0.5 * top;
        let crossing = |from: usize, to: usize| -> f64 {
            // linear interpolation between samples `from` (above) and `to` (below)
            let (a, b) = (mag[from], mag[to]);
            let frac = (a - half) / (a - b);
            self.time(from) + frac * (self.time(to) - self.time(from))
        };
        let mut right = peak;
        while right + 1 < mag.len() && mag[right + 1] >= half {
            right += 1;
        }
        let mut left = peak;
        while left > 0 && mag[left - 1] >= half {
            left -= 1;
        }
        let t_right = if right + 1 < mag.len() {
            crossing(right, right + 1)
        } else {
            self.time(right)
        };
        let t_left = if left > 0 {
            crossing(left, left - 1)
        } else {
            self.time(left)
        };
        t_right - t_left
    }

    /// Width and the two dominant peaks of `|F|`, positions refined by a
    /// parabola through the three samples around each maximum.
    pub fn peak_diagnostics(&self) -> PeakDiagnostics {
        let mag = self.magnitudes();
        let mut maxima: Vec<(usize, f64)> = (1..mag.len() - 1)
            .filter(|&k| mag[k] > mag[k - 1] && mag[k] >= mag[k + 1])
            .map(|k| (k, mag[k]))
            .collect();
        maxima.sort_by(|a, b| b.1.total_cmp(&a.1));
        let mut peak_times: Vec<f64> = maxima
            .iter()
            .take(2)
            .map(|&(k, _)| {
                let (a, b, c) = (mag[k - 1], mag[k], mag[k + 1]);
                let denom = a - 2.0 * b + c;
                let shift = if denom != 0.0 {
                    0.5 * (a - c) / denom
                } else {
                    0.0
                };
                self.time(k) + shift * self.dt
            })
            .collect();
        peak_times.sort_by(f64::total_cmp);
        let peak_separation = (peak_times.len() == 2).then(|| peak_times[1] - peak_times[0]);
        PeakDiagnostics {
            fwhm: self.fwhm(),
            peak_times,
            peak_separation,
        }
    }
}
