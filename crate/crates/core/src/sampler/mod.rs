//! The joint Gibbs/Metropolis–Hastings sampler.
//!
//! Per iteration: the latent sweep (β integrated out, leave-one-out
//! rank-one downdates), one β draw, Metropolis–Hastings steps for σ² and ρ,
//! Gibbs draws for τ₁², τ₂² and Metropolis–Hastings steps for r₁, r₂.

mod beta;
mod chain;
mod init;
mod latent;
mod mh;
mod workspace;

pub use beta::{
    compute_beta_full_conditional, loo_downdate, loo_moments, sample_beta, FullConditionalBeta,
    LooDowndate, LooMoments, DOWNDATE_FLOOR, MAX_CONDITION,
};
pub use chain::{
    run_chain, AcceptanceCount, AcceptanceStats, ChainOutput, PhaseTimings, StepSizes,
};
pub use init::{
    fit_probit, init_state, least_squares, InitOutput, ProbitFit, PROBIT_RIDGE, RHO_CLAMP,
    SIGMA2_FLOOR,
};
pub use latent::{sample_u_given_beta, sample_u_sweep};
pub use mh::{
    log_target_logit_r, log_target_r, log_target_rho, log_target_sigma2, logistic, logit,
    sample_r_mh, sample_rho_mh, sample_sigma2_mh, sample_tau2, tau2_conditional, StepAdapter,
    TARGET_ACCEPTANCE,
};
pub use workspace::{ResidualSums, SamplerWorkspace};
