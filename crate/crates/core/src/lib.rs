//! Analytic engine for mobility-aware coverage in multi-tier Poisson
//! cellular networks.
//!
//! The crate evaluates, in closed form or by adaptive quadrature:
//!
//! - handoff rates of a user moving through a Poisson field of access
//!   points ([`handoff`]),
//! - SIR coverage probabilities with a linear handoff-cost model
//!   ([`coverage`]),
//! - multi-tier biased association, the association/bias linear algebra,
//!   and the coverage-maximizing association search ([`multitier`]).
//!
//! Everything is a pure function of its arguments; concurrent use needs no
//! synchronization. The companion simulator crate estimates every quantity
//! here by direct Monte Carlo.

pub mod coverage;
pub mod error;
pub mod handoff;
pub mod model;
pub mod multitier;
pub mod quad;
pub mod special;

pub use error::{CoreError, Result};
pub use model::{AssociationSolution, Direction, MobilityProfile, NetworkModel, TierParams};
pub use quad::{QuadResult, QuadratureSpec};
