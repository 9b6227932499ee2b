//! Bayesian joint model for one continuous and one binary response linked
//! through a correlated latent variable, with a leave-one-out Gibbs sampler,
//! a separate-model baseline, a simulation harness and loss metrics.

pub mod baselines;
pub mod cli;
pub mod distributions;
pub mod error;
pub mod io;
pub mod metrics;
pub mod model;
pub mod replication;
pub mod sampler;
pub mod simulation;

pub use error::{Error, Result};
