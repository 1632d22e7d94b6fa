//! Two-atom amplitude equations with memory,
//! `c_m'(t) = -sum_n int_0^t F_mn(t - s) c_n(s) ds`,
//! integrated with the trapezoidal rule applied to both integrals.

mod convergence;
mod reference;
mod solver;

pub use convergence::{convergence_check, ConvergedEvolution, RefinementStep};
pub use reference::{delta_kernel, displaced_delta_kernel, markov_reference_evolution};
pub use solver::{evolve, step_matrix};

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Amplitudes of `|eg>` and `|ge>` at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialState {
    pub c1: Complex64,
    pub c2: Complex64,
}

impl InitialState {
    pub fn new(c1: Complex64, c2: Complex64) -> Result<Self> {
        let norm = c1.norm_sqr() + c2.norm_sqr();
        if !(norm <= 1.0 + 1e-12) {
            return Err(Error::Config(format!(
                "initial populations sum to {norm}, above 1"
            )));
        }
        Ok(Self { c1, c2 })
    }

    pub fn symmetric() -> Self {
        Self {
            c1: FRAC_1_SQRT_2.into(),
            c2: FRAC_1_SQRT_2.into(),
        }
    }

    pub fn antisymmetric() -> Self {
        Self {
            c1: FRAC_1_SQRT_2.into(),
            c2: (-FRAC_1_SQRT_2).into(),
        }
    }

    pub fn single() -> Self {
        Self {
            c1: 1.0.into(),
            c2: 0.0.into(),
        }
    }

    pub fn swapped(&self) -> Self {
        Self {
            c1: self.c2,
            c2: self.c1,
        }
    }

    pub fn population(&self) -> f64 {
        self.c1.norm_sqr() + self.c2.norm_sqr()
    }
}

/// Amplitudes on the uniform grid `t_k = k h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionResult {
    /// Step in seconds.
    pub h: f64,
    pub c1: Vec<Complex64>,
    pub c2: Vec<Complex64>,
}

impl EvolutionResult {
    pub fn len(&self) -> usize {
        self.c1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c1.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.h
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.time(k)).collect()
    }

    pub fn population1(&self) -> Vec<f64> {
        self.c1.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn population2(&self) -> Vec<f64> {
        self.c2.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn total_population(&self) -> Vec<f64> {
        self.c1
            .iter()
            .zip(&self.c2)
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .collect()
    }

    /// `|(c1 + c2)/sqrt 2|^2`.
    pub fn p_plus(&self) -> Vec<f64> {
        self.c1
            .iter()
            .zip(&self.c2)
            .map(|(a, b)| 0.5 * (a + b).norm_sqr())
            .collect()
    }

    /// `|(c1 - c2)/sqrt 2|^2`.
    pub fn p_minus(&self) -> Vec<f64> {
        self.c1
            .iter()
            .zip(&self.c2)
            .map(|(a, b)| 0.5 * (a - b).norm_sqr())
            .collect()
    }

    /// Population of the prepared collective state: `P_plus` for symmetric
    /// or single preparations, `P_minus` for antisymmetric ones.
    pub fn collective_population(&self, init: &InitialState) -> Vec<f64> {
        if (init.c1 + init.c2).norm_sqr() >= (init.c1 - init.c2).norm_sqr() {
            self.p_plus()
        } else {
            self.p_minus()
        }
    }

    /// Largest population difference against a run with half the step,
    /// compared on this run's grid.
    pub fn max_difference_to_refined(&self, fine: &EvolutionResult) -> f64 {
        let (p1, p2) = (self.population1(), self.population2());
        let (q1, q2) = (fine.population1(), fine.population2());
        (0..self.len())
            .take_while(|k| 2 * k < fine.len())
            .map(|k| (p1[k] - q1[2 * k]).abs().max((p2[k] - q2[2 * k]).abs()))
            .fold(0.0, f64::max)
    }
}
