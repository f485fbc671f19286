//! Monte Carlo outage estimation, stochastic bisection on density, antenna
//! sweeps and goodness-of-fit checks.
//!
//! Trial `i` of a run with seed `s` always draws from ChaCha8 stream `i`
//! keyed by `s`, and outcomes are combined as integer counts, so results do
//! not depend on how trials are scheduled across worker threads.

mod bisection;
mod outage;
mod rng;
pub mod stats;
mod sweep;
mod validate;

pub use bisection::{
    bisect_density, find_max_density, find_max_density_with, BisectionConfig, BisectionOutcome, FnProbe, McDensity,
    McProbe, OutageProbe, Verdict,
};
pub use outage::{count_outages, estimate_outage, estimate_outage_with, OutageEstimate};
pub use rng::{trial_rng, worker_pool, WORKERS_ENV};
pub use stats::KsReport;
pub use sweep::{run_sweep, GridPoint, SlopeSummary, SweepMode, SweepRow, SweepTable, MIN_SLOPE_POINTS};
pub use validate::{validate_distribution, zf_multi_mark_moments, MarkMoments, NamedSampler};
