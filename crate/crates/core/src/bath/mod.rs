//! Guided-mode bath: spectral densities, the Drude-Lorentz frequency cutoff
//! and the zero-temperature correlation functions `F_mm(t)`, `F_mn(t)`.

mod correlation;
mod cutoff;
mod spectral;

pub use correlation::{
    correlation_function, CorrelationFunction, CorrelationKind, PeakDiagnostics,
};
pub use cutoff::{
    choose_cutoff, converge_cutoff, cutoff_zeros, CutoffConvergence, CutoffPolicy, CutoffZero,
};
pub use spectral::{
    markovian_rate, one_point_spectral_density, two_point_integrand, FrequencyGrid, ModeTable,
    SpectralGrid,
};
