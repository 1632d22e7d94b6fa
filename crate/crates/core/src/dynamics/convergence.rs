use serde::{Deserialize, Serialize};

use super::{evolve, EvolutionResult, InitialState};
use crate::bath::CorrelationFunction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinementStep {
    /// Step of the finer run, s.
    pub h: f64,
    /// Max-norm population difference against the previous run.
    pub max_difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergedEvolution {
    pub result: EvolutionResult,
    pub halvings: usize,
    pub record: Vec<RefinementStep>,
}

/// Halve the step until two successive runs agree to `tolerance` in the
/// max-norm of both populations. `kernels(k)` must return `(F_mm, F_mn)`
/// sampled with step `h0 / 2^k`. The finer of the two agreeing runs is
/// returned.
pub fn convergence_check(
    mut kernels: impl FnMut(usize) -> Result<(CorrelationFunction, CorrelationFunction)>,
    init: InitialState,
    t_end: f64,
    tolerance: f64,
    max_halvings: usize,
) -> Result<ConvergedEvolution> {
    let (f_mm, f_mn) = kernels(0)?;
    let mut coarse = evolve(&f_mm, &f_mn, init, t_end)?;
    let mut record = Vec::new();
    for level in 1..=max_halvings {
        let (f_mm, f_mn) = kernels(level)?;
        if (2.0 * f_mm.dt - coarse.h).abs() > 1e-9 * coarse.h {
            return Err(Error::Config(format!(
                "refinement level {level} does not halve the step"
            )));
        }
        let fine = evolve(&f_mm, &f_mn, init, t_end)?;
        let max_difference = coarse.max_difference_to_refined(&fine);
        record.push(RefinementStep {
            h: fine.h,
            max_difference,
        });
        if max_difference < tolerance {
            return Ok(ConvergedEvolution {
                result: fine,
                halvings: level,
                record,
            });
        }
        coarse = fine;
    }
    Err(Error::NotConverged {
        halvings: max_halvings,
        residuals: record.iter().map(|r| r.max_difference).collect(),
    })
}
