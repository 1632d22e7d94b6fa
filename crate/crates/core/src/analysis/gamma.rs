use serde::{Deserialize, Serialize};

use crate::bath::CorrelationFunction;
use crate::error::{Error, Result};

/// Time-dependent rates `gamma(t) = int_0^t Re F_mm` and
/// `gamma_mn(t) = int_0^t Re F_mn` on the kernel grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaSeries {
    pub h: f64,
    pub gamma: Vec<f64>,
    pub gamma_mn: Vec<f64>,
}

/// Cumulative trapezoid integrals over the first `len` causal samples.
pub fn gamma_integrals(
    f_mm: &CorrelationFunction,
    f_mn: &CorrelationFunction,
    len: usize,
) -> Result<GammaSeries> {
    if (f_mm.dt - f_mn.dt).abs() > 1e-12 * f_mm.dt {
        return Err(Error::Config("correlation grids differ".into()));
    }
    let (a, b) = (f_mm.positive_times(), f_mn.positive_times());
    let len = len.min(a.len()).min(b.len());
    let h = f_mm.dt;
    let cumulative = |f: &[num_complex::Complex64]| {
        let mut out = Vec::with_capacity(len);
        let mut acc = 0.0;
        out.push(0.0);
        for k in 1..len {
            acc += 0.5 * h * (f[k - 1].re + f[k].re);
            out.push(acc);
        }
        out
    };
    Ok(GammaSeries {
        h,
        gamma: cumulative(a),
        gamma_mn: cumulative(b),
    })
}

impl GammaSeries {
    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.h
    }

    /// `|gamma_mn(t)| / gamma(t)`, `NaN` where `gamma(t) <= 0`.
    pub fn quotient(&self) -> Vec<f64> {
        self.gamma
            .iter()
            .zip(&self.gamma_mn)
            .map(|(g, gm)| if *g > 0.0 { gm.abs() / g } else { f64::NAN })
            .collect()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            h: self.h,
            gamma: self.gamma.iter().map(|v| v * factor).collect(),
            gamma_mn: self.gamma_mn.iter().map(|v| v * factor).collect(),
        }
    }
}

/// Collective rates `gamma(t) -+ |gamma_mn(t)|`, returned as `(minus, plus)`.
pub fn collective_rates_from_integrals(series: &GammaSeries) -> (Vec<f64>, Vec<f64>) {
    series
        .gamma
        .iter()
        .zip(&series.gamma_mn)
        .map(|(g, gm)| (g - gm.abs(), g + gm.abs()))
        .unzip()
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::bath::CorrelationKind;

    #[test]
    fn integrates_and_combines() {
        let h = 0.1;
        let causal: Vec<Complex64> = (0..200)
            .map(|k| Complex64::new((-(k as f64) * h).exp(), 0.5))
            .collect();
        let f = CorrelationFunction::from_causal(CorrelationKind::OnePoint, h, &causal);
        let s = gamma_integrals(&f, &f, 150).unwrap();
        assert_eq!(s.gamma, s.gamma_mn);
        assert!((s.gamma[149] - (1.0 - (-14.9f64).exp())).abs() < 1e-3);
        let (minus, plus) = collective_rates_from_integrals(&s);
        for k in 0..150 {
            assert!((plus[k] + minus[k] - 2.0 * s.gamma[k]).abs() < 1e-15);
        }
    }
}
