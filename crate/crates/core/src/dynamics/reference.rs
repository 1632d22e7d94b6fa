use num_complex::Complex64;

use super::{EvolutionResult, InitialState};
use crate::bath::{CorrelationFunction, CorrelationKind};
use crate::error::{Error, Result};

/// Closed-form evolution for memoryless kernels: both atoms decay
/// independently at amplitude rate `gamma` until `delay`, after which the
/// combinations `c_pm` decay at `gamma +- gamma_mn` (`gamma_mn` signed).
pub fn markov_reference_evolution(
    gamma: f64,
    gamma_mn: f64,
    init: InitialState,
    delay: f64,
    h: f64,
    t_end: f64,
) -> Result<EvolutionResult> {
    if !(delay >= 0.0) || !(h > 0.0) || !(t_end >= 0.0) {
        return Err(Error::Config(
            "delay, step and final time must be non-negative".into(),
        ));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (p0, m0) = ((init.c1 + init.c2) * s, (init.c1 - init.c2) * s);
    let steps = (t_end / h).round() as usize;
    let (mut c1, mut c2) = (Vec::with_capacity(steps + 1), Vec::with_capacity(steps + 1));
    for k in 0..=steps {
        let t = k as f64 * h;
        let early = t.min(delay);
        let late = (t - delay).max(0.0);
        let base = (-gamma * early).exp();
        let p = p0 * base * (-(gamma + gamma_mn) * late).exp();
        let m = m0 * base * (-(gamma - gamma_mn) * late).exp();
        c1.push((p + m) * s);
        c2.push((p - m) * s);
    }
    Ok(EvolutionResult { h, c1, c2 })
}

/// Kernel supported on `t = 0` only, `F[0] = 2 gamma / h`; the half
/// trapezoid weight turns it into a memoryless decay at amplitude rate
/// `gamma`.
pub fn delta_kernel(gamma: f64, h: f64, len: usize) -> CorrelationFunction {
    let mut causal = vec![Complex64::new(0.0, 0.0); len];
    causal[0] = Complex64::new(2.0 * gamma / h, 0.0);
    CorrelationFunction::from_causal(CorrelationKind::OnePoint, h, &causal)
}

/// Kernel supported on the single sample nearest `delay`, normalized to
/// integrate to `gamma_mn` under the trapezoid rule.
pub fn displaced_delta_kernel(
    gamma_mn: f64,
    delay: f64,
    h: f64,
    len: usize,
) -> Result<CorrelationFunction> {
    let k = (delay / h).round() as usize;
    if k >= len {
        return Err(Error::Config(format!(
            "delay {delay:e} s lies outside the kernel window"
        )));
    }
    if k == 0 {
        let mut f = delta_kernel(gamma_mn, h, len);
        f.kind = CorrelationKind::TwoPoint;
        return Ok(f);
    }
    let mut causal = vec![Complex64::new(0.0, 0.0); len];
    causal[k] = Complex64::new(gamma_mn / h, 0.0);
    Ok(CorrelationFunction::from_causal(
        CorrelationKind::TwoPoint,
        h,
        &causal,
    ))
}
