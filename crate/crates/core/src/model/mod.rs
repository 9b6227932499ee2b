//! Data model, parameter state, prior structure, likelihood and prediction.

mod data;
mod likelihood;
mod params;
mod predict;

pub use data::{Dataset, EffectOrders};
pub use likelihood::{build_prior_covariance, joint_log_likelihood, s_score};
pub use params::{ChainConfig, FixedBlocks, HyperState, ParameterState, PriorConfig};
pub(crate) use params::check_rho;
pub use predict::{predict, Draw, PosteriorDraws, Prediction};
