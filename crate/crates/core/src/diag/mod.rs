//! Gradient-variance sweeps, rank correlations and the correlation study.

mod barren;
mod correlation;
mod rankcorr;

pub use barren::{
    barren_sweep, barren_sweep_heuristic, variance_with_stderr, VariancePoint, VarianceSweep,
};
pub use correlation::{correlation_study, CorrelationOptions, CorrelationReport};
pub use rankcorr::{doubled_ranks, kendall, spearman};
