//! Monte Carlo oracle for the analytic handoff and coverage expressions.
//!
//! Realizes finite-window snapshots of the multi-tier Poisson network,
//! performs biased association, draws Rayleigh-faded SIR, moves the user
//! and detects handoffs geometrically, and estimates every probability the
//! analytic crate predicts. Replications run in parallel on counter-based
//! RNG streams, so every estimate is reproducible bit-for-bit regardless of
//! scheduling.

pub mod config;
pub mod estimate;
pub mod log;
pub mod pipeline;
pub mod realization;

pub use config::{
    nearest_guard_radius, sir_guard_radius, window_radii, AngleDomain, EstimandNeeds,
    EstimateWithCI, EventSpec, McError, Result, SimConfig,
};
pub use estimate::{estimate, estimate_many, run_replications, RepOutcome};
pub use pipeline::{associate, move_and_detect_handoff, sir, Association, MoveOutcome};
pub use realization::{sample_realization, Realization, TierPoints};
