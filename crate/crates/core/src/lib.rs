//! Analysis toolkit for multi-surface cooperative links over cascaded
//! Rayleigh fading: exact and asymptotic outage probability, diversity
//! order, capacity scaling laws, and a seeded Monte Carlo simulator (with a
//! decode-and-forward relay baseline) that verifies every analytic result.
//!
//! Modules:
//! - [`special`]: self-contained special functions and Gauss-Laguerre rules
//! - [`rng`]: counter-based random streams (reproducible under parallelism)
//! - [`channel`]: Monte Carlo channel simulator and relay baseline
//! - [`mixture`]: squared generalized-K fit and its mixture-gamma form;
//!   exact/asymptotic outage and diversity order
//! - [`scaling`]: extreme-value asymptotics and the capacity scaling law

pub mod channel;
pub mod error;
pub mod mixture;
pub mod rng;
pub mod scaling;
pub mod special;

pub use channel::{MonteCarloResult, RelayPrelog, SystemConfig};
pub use error::{Error, Result};
pub use mixture::{KgParams, MgTerm, MixtureGamma};
pub use rng::{RngSpec, TrialRng};
pub use scaling::{ChernoffParams, GaussianEquivalent, ScalingReport};
pub use special::QuadratureRule;

/// Convert decibels to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Convert linear scale to decibels.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}
