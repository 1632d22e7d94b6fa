use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares line through `ln P(t)` on `[t_start, t_end]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// Population decay rate `-d ln P / dt`, 1/s.
    pub rate: f64,
    /// `ln P` extrapolated to `t = 0`.
    pub intercept: f64,
    /// Standard error of the rate.
    pub rate_stderr: f64,
    /// Standard error of the intercept.
    pub intercept_stderr: f64,
    /// Covariance of intercept and rate.
    pub covariance: f64,
    /// Root-mean-square residual of `ln P`.
    pub residual_rms: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub samples: usize,
}

impl DecayFit {
    /// Fitted `ln P` at time `t`.
    pub fn log_population(&self, t: f64) -> f64 {
        self.intercept - self.rate * t
    }
}

pub const MIN_FIT_SAMPLES: usize = 10;

/// Fit `ln P = intercept - rate * t` to the samples with `t >= t_start`.
pub fn fit_decay_rate(times: &[f64], population: &[f64], t_start: f64) -> Result<DecayFit> {
    if times.len() != population.len() {
        return Err(Error::Fit(
            "time and population series differ in length".into(),
        ));
    }
    let window: Vec<(f64, f64)> = times
        .iter()
        .zip(population)
        .filter(|(t, _)| **t >= t_start)
        .map(|(&t, &p)| (t, p))
        .collect();
    if window.len() < MIN_FIT_SAMPLES {
        return Err(Error::Fit(format!(
            "{} samples after t = {t_start:e} s, need {MIN_FIT_SAMPLES}",
            window.len()
        )));
    }
    if let Some((t, p)) = window.iter().find(|(_, p)| !(*p > 0.0)) {
        return Err(Error::Fit(format!(
            "population {p:e} at t = {t:e} s is not positive"
        )));
    }
    let n = window.len() as f64;
    // centre the abscissa for a well-conditioned normal equation
    let t_mean = window.iter().map(|(t, _)| t).sum::<f64>() / n;
    let y_mean = window.iter().map(|(_, p)| p.ln()).sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (t, p) in &window {
        let dx = t - t_mean;
        sxx += dx * dx;
        sxy += dx * (p.ln() - y_mean);
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * t_mean;
    let ss_res: f64 = window
        .iter()
        .map(|(t, p)| (p.ln() - (intercept + slope * t)).powi(2))
        .sum();
    let sigma2 = ss_res / (n - 2.0);
    Ok(DecayFit {
        rate: -slope,
        intercept,
        rate_stderr: (sigma2 / sxx).sqrt(),
        intercept_stderr: (sigma2 * (1.0 / n + t_mean * t_mean / sxx)).sqrt(),
        covariance: sigma2 * t_mean / sxx,
        residual_rms: (ss_res / n).sqrt(),
        t_start: window[0].0,
        t_end: window[window.len() - 1].0,
        samples: window.len(),
    })
}

/// Intersection abscissa of two fitted lines with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Intersection {
    pub time: f64,
    pub stderr: f64,
}

/// Intersection of two extrapolated late-time lines in `ln P`.
///
/// Undefined when the rates agree within three combined standard errors.
pub fn communication_time(single: &DecayFit, collective: &DecayFit) -> Result<Intersection> {
    let gap = single.rate - collective.rate;
    let noise = 3.0 * single.rate_stderr.hypot(collective.rate_stderr);
    if !(gap.abs() > noise) || gap == 0.0 {
        return Err(Error::Undefined(format!(
            "decay lines are parallel within fit error ({:e} vs {:e} 1/s)",
            single.rate, collective.rate
        )));
    }
    let time = (single.intercept - collective.intercept) / gap;
    // variance of intercept - time * rate for each line, propagated through 1/gap
    let var = |f: &DecayFit| {
        f.intercept_stderr.powi(2) + time * time * f.rate_stderr.powi(2) - 2.0 * time * f.covariance
    };
    let stderr = ((var(single) + var(collective)).max(0.0)).sqrt() / gap.abs();
    Ok(Intersection { time, stderr })
}
