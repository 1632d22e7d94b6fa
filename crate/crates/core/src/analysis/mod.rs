//! Decay-rate fits, communication times, time-dependent collective rates
//! and establishment times.

mod establish;
mod fit;
mod gamma;
mod report;

pub use establish::{
    establishment_time, Establishment, EstablishmentRule, EXTREMA_WINDOW, SMOOTHING_WIDTH,
};
pub use fit::{communication_time, fit_decay_rate, DecayFit, Intersection, MIN_FIT_SAMPLES};
pub use gamma::{collective_rates_from_integrals, gamma_integrals, GammaSeries};
pub use report::{
    radius_sweep_report, AnalysisReport, Preparation, ReportInputs, SeparationSpread, SweepReport,
    SweepRow,
};
