use serde::{Deserialize, Serialize};

use super::GammaSeries;
use crate::error::{Error, Result};

/// How the quotient `q(t) = |gamma_mn(t)| / gamma(t)` is judged settled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum EstablishmentRule {
    /// First time `q >= level` after which `q` never drops below it.
    Threshold { level: f64 },
    /// Midpoint of the first successive maximum/minimum pair whose mean
    /// lies within `tolerance` of 1.
    ExtremaMidpoint { tolerance: f64 },
}

pub const SMOOTHING_WIDTH: usize = 3;
pub const EXTREMA_WINDOW: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Establishment {
    pub t_est: f64,
    pub rule: EstablishmentRule,
    pub max_quotient: f64,
}

pub fn establishment_time(series: &GammaSeries, rule: EstablishmentRule) -> Result<Establishment> {
    let q = series.quotient();
    let max_quotient = q
        .iter()
        .copied()
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max);
    let not_established = |why: &str| {
        Error::Undefined(format!(
            "not established ({why}); max quotient {max_quotient}"
        ))
    };
    match rule {
        EstablishmentRule::Threshold { level } => {
            let last_below = q.iter().rposition(|v| !(*v >= level));
            let first = match last_below {
                None => 0,
                Some(k) if k + 1 < q.len() => k + 1,
                Some(_) => {
                    return Err(not_established(&format!(
                        "quotient below {level} at the final time"
                    )))
                }
            };
            Ok(Establishment {
                t_est: series.time(first),
                rule,
                max_quotient,
            })
        }
        EstablishmentRule::ExtremaMidpoint { tolerance } => {
            let smooth = moving_average(&q, SMOOTHING_WIDTH);
            let extrema = local_extrema(&smooth, EXTREMA_WINDOW);
            if extrema.len() < 2 {
                return Err(not_established("fewer than two extrema"));
            }
            for pair in extrema.windows(2) {
                let ((k0, max0), (k1, max1)) = (pair[0], pair[1]);
                if max0 == max1 {
                    continue;
                }
                let mid = 0.5 * (smooth[k0] + smooth[k1]);
                if (mid - 1.0).abs() <= tolerance {
                    let t_est = 0.5 * (series.time(k0) + series.time(k1));
                    return Ok(Establishment {
                        t_est,
                        rule,
                        max_quotient,
                    });
                }
            }
            Err(not_established("no extremum pair centred on 1"))
        }
    }
}

/// Centred moving average; `NaN` samples stay `NaN`, ends use the
/// available neighbours.
fn moving_average(x: &[f64], width: usize) -> Vec<f64> {
    let half = width / 2;
    (0..x.len())
        .map(|k| {
            let lo = k.saturating_sub(half);
            let hi = (k + half + 1).min(x.len());
            x[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect()
}

/// Indices that are the strict maximum or minimum of their centred window,
/// tagged `true` for maxima.
fn local_extrema(x: &[f64], window: usize) -> Vec<(usize, bool)> {
    let half = window / 2;
    let mut out = Vec::new();
    for k in half..x.len().saturating_sub(half) {
        let neighbours = &x[k - half..=k + half];
        if neighbours.iter().any(|v| !v.is_finite()) {
            continue;
        }
        let others = neighbours
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != half)
            .map(|(_, v)| *v);
        if others.clone().all(|v| x[k] > v) {
            out.push((k, true));
        } else if others.clone().all(|v| x[k] < v) {
            out.push((k, false));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series_from_quotient(q: impl Fn(f64) -> f64, h: f64, n: usize) -> GammaSeries {
        GammaSeries {
            h,
            gamma: vec![1.0; n],
            gamma_mn: (0..n).map(|k| q(k as f64 * h)).collect(),
        }
    }

    #[test]
    fn threshold_rule_on_exponential_approach() {
        let tau = 3.0;
        let h = 1e-3;
        let s = series_from_quotient(|t| 1.0 - (-t / tau).exp(), h, 40_000);
        let e = establishment_time(&s, EstablishmentRule::Threshold { level: 0.99 }).unwrap();
        assert!((e.t_est - tau * 100f64.ln()).abs() <= h);
    }

    #[test]
    fn threshold_never_reached() {
        let s = series_from_quotient(|t| 0.5 * t / (1.0 + t), 0.01, 1000);
        assert!(matches!(
            establishment_time(&s, EstablishmentRule::Threshold { level: 0.99 }),
            Err(Error::Undefined(_))
        ));
    }

    #[test]
    fn extrema_rule_on_damped_oscillation() {
        let s = series_from_quotient(
            |t| 1.0 + 0.5 * (-t / 4.0).exp() * (2.0 * t).cos() - 0.2 * (-t).exp(),
            0.01,
            3000,
        );
        let e =
            establishment_time(&s, EstablishmentRule::ExtremaMidpoint { tolerance: 0.01 }).unwrap();
        assert!(e.t_est > 0.0 && e.t_est < 30.0);
        let rescaled = s.scaled(7.0);
        let f = establishment_time(
            &rescaled,
            EstablishmentRule::ExtremaMidpoint { tolerance: 0.01 },
        )
        .unwrap();
        assert_eq!(e.t_est, f.t_est);
    }
}
