//! SIS epidemic protection game under noisy infection-status signalling.
//!
//! A unit-mass population cycles between susceptible and infected. A
//! principal commits to a signalling scheme that tells each agent, noisily,
//! whether it is infected; agents best-respond to Bayesian posteriors when
//! choosing whether to adopt costly protection. This crate computes the
//! stationary Nash equilibria of that game in closed form where a closed
//! characterization exists, verifies any candidate equilibrium from first
//! principles, integrates the coupled epidemic and strategy-revision
//! dynamics, and reproduces the bundled parameter-sweep experiments as CSV
//! datasets.
//!
//! Modules mirror the layers of the model:
//!
//! * [`model`] — parameters, population state, and the epidemic layer;
//! * [`beliefs`] — Bayesian posteriors per received signal;
//! * [`payoffs`] — rewards, expected utilities, and decision margins;
//! * [`equilibrium`] — thresholds, classifiers, verifier, and the
//!   simulation-based equilibrium search;
//! * [`dynamics`] — Smith and logit revision coupled to the epidemic, with a
//!   fixed-step integrator;
//! * [`experiments`] — sweep harness and CSV serialization.

pub mod beliefs;
pub mod dynamics;
pub mod equilibrium;
pub mod error;
pub mod experiments;
pub mod model;
pub mod payoffs;

pub use error::{Error, Result};
pub use model::{ModelParams, PopulationState, SignalScheme};
