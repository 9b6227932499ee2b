use std::time::{Duration, Instant};

use nalgebra::DVector;

use crate::distributions::RandomStream;
use crate::error::{Error, Result};
use crate::model::{
    build_prior_covariance, ChainConfig, Dataset, Draw, EffectOrders, HyperState, ParameterState,
    PosteriorDraws, PriorConfig,
};

use super::beta::{compute_beta_full_conditional, sample_beta};
use super::init::init_state;
use super::latent::{sample_u_given_beta, sample_u_sweep};
use super::mh::{logistic, logit, sample_r_mh, sample_rho_mh, sample_sigma2_mh, sample_tau2, StepAdapter};
use super::workspace::SamplerWorkspace;

/// Accepted and proposed counts of one Metropolis–Hastings target, after
/// burn-in.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AcceptanceCount {
    pub accepted: usize,
    pub proposed: usize,
}

impl AcceptanceCount {
    fn record(&mut self, accepted: bool) {
        self.proposed += 1;
        self.accepted += usize::from(accepted);
    }

    /// `None` when the target was never proposed (held fixed).
    pub fn rate(&self) -> Option<f64> {
        (self.proposed > 0).then(|| self.accepted as f64 / self.proposed as f64)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AcceptanceStats {
    pub sigma2: AcceptanceCount,
    pub rho: AcceptanceCount,
    pub r1: AcceptanceCount,
    pub r2: AcceptanceCount,
}

/// Random-walk step sizes in force after burn-in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSizes {
    pub sigma2: f64,
    pub rho: f64,
    pub r1: f64,
    pub r2: f64,
}

/// Wall-clock time spent in each phase of the sampler.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhaseTimings {
    pub init: Duration,
    pub latent: Duration,
    pub beta: Duration,
    pub variance_correlation: Duration,
    pub hyper: Duration,
}

#[derive(Debug, Clone)]
pub struct ChainOutput {
    pub draws: PosteriorDraws,
    pub acceptance: AcceptanceStats,
    pub steps: StepSizes,
    pub final_state: ParameterState,
    pub final_hyper: HyperState,
    pub config: ChainConfig,
    pub prior: PriorConfig,
    pub orders: EffectOrders,
    /// Latent draws that needed the direct leave-one-out re-solve.
    pub fallback_count: usize,
    /// Largest relative drift of the maintained `X'u` seen at a sweep end.
    pub max_xtu_drift: f64,
    pub warnings: Vec<String>,
    pub timings: PhaseTimings,
}

impl ChainOutput {
    pub fn final_u(&self) -> &DVector<f64> {
        &self.final_state.u
    }
}

struct Sampler<'a> {
    data: &'a Dataset,
    orders: &'a EffectOrders,
    prior: &'a PriorConfig,
    cfg: &'a ChainConfig,
    state: ParameterState,
    hyper: HyperState,
    logit_r1: f64,
    logit_r2: f64,
    ws: SamplerWorkspace,
    latent: RandomStream,
    outcome: RandomStream,
    adapt_sigma2: StepAdapter,
    adapt_rho: StepAdapter,
    adapt_r1: StepAdapter,
    adapt_r2: StepAdapter,
    acceptance: AcceptanceStats,
    fallbacks: usize,
    max_drift: f64,
    timings: PhaseTimings,
}

impl Sampler<'_> {
    fn iterate(&mut self, j: usize) -> Result<()> {
        let tuning = j <= self.cfg.burn_in;
        let adapt = tuning && self.cfg.adapt_during_burnin;
        let cfg = self.cfg;
        let fixed = &cfg.fixed;

        // latent values and coefficients
        let t0 = Instant::now();
        if let Some((b1, b2)) = &fixed.beta {
            sample_u_given_beta(
                self.data,
                &mut self.state.u,
                b1,
                b2,
                self.state.sigma2,
                self.state.rho,
                &mut self.latent,
            )?;
            self.timings.latent += t0.elapsed();
        } else {
            let v1 = build_prior_covariance(self.orders, self.hyper.tau1_sq, self.hyper.r1);
            let v2 = build_prior_covariance(self.orders, self.hyper.tau2_sq, self.hyper.r2);
            let mut fc = compute_beta_full_conditional(&self.ws, self.state.sigma2, self.state.rho, &v1, &v2)?;
            self.fallbacks += sample_u_sweep(self.data, &mut self.state.u, &fc, &mut self.ws, &mut self.latent)?;
            self.max_drift = self.max_drift.max(self.ws.refresh_xtu(&self.state.u));
            let t1 = Instant::now();
            self.timings.latent += t1 - t0;
            fc.refresh_mean(&self.ws);
            let (b1, b2) = sample_beta(&fc, &mut self.latent, &mut self.outcome);
            self.state.beta1 = b1;
            self.state.beta2 = b2;
            self.timings.beta += t1.elapsed();
        }

        // σ² and ρ
        let t0 = Instant::now();
        self.ws
            .update_residuals(&self.state.u, &self.state.beta1, &self.state.beta2);
        let sums = self.ws.residual_sums();
        if fixed.sigma2.is_none() {
            let (s, acc) = sample_sigma2_mh(
                self.state.sigma2,
                self.state.rho,
                &sums,
                self.prior,
                self.adapt_sigma2.step(),
                &mut self.outcome,
            )?;
            self.state.sigma2 = s;
            if adapt {
                self.adapt_sigma2.update(acc);
            }
            if !tuning {
                self.acceptance.sigma2.record(acc);
            }
        }
        if fixed.rho.is_none() {
            let (r, acc) = sample_rho_mh(
                self.state.rho,
                self.state.sigma2,
                &sums,
                self.adapt_rho.step(),
                &mut self.outcome,
            )?;
            self.state.rho = r;
            if adapt {
                self.adapt_rho.update(acc);
            }
            if !tuning {
                self.acceptance.rho.record(acc);
            }
        }
        self.timings.variance_correlation += t0.elapsed();

        // hyperparameters
        if !fixed.hyper {
            let t0 = Instant::now();
            let h = &mut self.hyper;
            h.tau1_sq = sample_tau2(&self.state.beta1, self.orders, h.r1, self.prior, &mut self.latent)?;
            h.tau2_sq = sample_tau2(&self.state.beta2, self.orders, h.r2, self.prior, &mut self.outcome)?;
            let (l1, acc1) = sample_r_mh(
                self.logit_r1,
                &self.state.beta1,
                h.tau1_sq,
                self.orders,
                self.prior,
                self.adapt_r1.step(),
                &mut self.latent,
            )?;
            let (l2, acc2) = sample_r_mh(
                self.logit_r2,
                &self.state.beta2,
                h.tau2_sq,
                self.orders,
                self.prior,
                self.adapt_r2.step(),
                &mut self.outcome,
            )?;
            self.logit_r1 = l1;
            self.logit_r2 = l2;
            h.r1 = logistic(l1);
            h.r2 = logistic(l2);
            if adapt {
                self.adapt_r1.update(acc1);
                self.adapt_r2.update(acc2);
            }
            if !tuning {
                self.acceptance.r1.record(acc1);
                self.acceptance.r2.record(acc2);
            }
            self.timings.hyper += t0.elapsed();
        }

        let s = &self.state;
        let all_finite = s.sigma2.is_finite()
            && s.rho.is_finite()
            && s.beta1.iter().chain(s.beta2.iter()).all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::Numeric("non-finite parameter value".into()));
        }
        Ok(())
    }

    fn draw(&self, j: usize) -> Draw {
        Draw {
            iteration: j,
            beta1: self.state.beta1.clone(),
            beta2: self.state.beta2.clone(),
            sigma2: self.state.sigma2,
            rho: self.state.rho,
            tau1_sq: self.hyper.tau1_sq,
            tau2_sq: self.hyper.tau2_sq,
            r1: self.hyper.r1,
            r2: self.hyper.r2,
        }
    }
}

/// Run the full Gibbs/Metropolis–Hastings sampler and keep thinned
/// post-burn-in draws.
///
/// Two random streams are split from `cfg.seed`: one drives the latent
/// values and the β₁-side hyperparameters, the other σ², ρ and the
/// β₂-side hyperparameters. The coefficient draw takes its first p normals
/// from the first stream and its last p from the second.
pub fn run_chain(
    data: &Dataset,
    orders: &EffectOrders,
    prior: &PriorConfig,
    cfg: &ChainConfig,
) -> Result<ChainOutput> {
    cfg.validate()?;
    prior.validate()?;
    orders.check(data.p())?;

    let t0 = Instant::now();
    let init = init_state(data, cfg)?;
    let ws = SamplerWorkspace::new(data, &init.state.u)?;
    let base = RandomStream::new(cfg.seed);
    let mut sampler = Sampler {
        data,
        orders,
        prior,
        cfg,
        state: init.state,
        hyper: init.hyper,
        logit_r1: logit(init.hyper.r1),
        logit_r2: logit(init.hyper.r2),
        ws,
        latent: base.split(0),
        outcome: base.split(1),
        adapt_sigma2: StepAdapter::new(cfg.mh_step_sigma2),
        adapt_rho: StepAdapter::new(cfg.mh_step_rho),
        adapt_r1: StepAdapter::new(cfg.mh_step_r),
        adapt_r2: StepAdapter::new(cfg.mh_step_r),
        acceptance: AcceptanceStats::default(),
        fallbacks: 0,
        max_drift: 0.0,
        timings: PhaseTimings::default(),
    };
    sampler.timings.init = t0.elapsed();

    let mut draws = PosteriorDraws::with_capacity(cfg.stored_draws());
    for j in 1..=cfg.iterations {
        sampler.iterate(j).map_err(|e| Error::Iteration {
            iteration: j,
            source: Box::new(e),
        })?;
        if j > cfg.burn_in && (j - cfg.burn_in) % cfg.thin == 0 {
            draws.push(sampler.draw(j));
        }
    }
    if sampler.fallbacks > 0 {
        log::debug!("{} latent draws used the direct leave-one-out solve", sampler.fallbacks);
    }

    Ok(ChainOutput {
        draws,
        acceptance: sampler.acceptance,
        steps: StepSizes {
            sigma2: sampler.adapt_sigma2.step(),
            rho: sampler.adapt_rho.step(),
            r1: sampler.adapt_r1.step(),
            r2: sampler.adapt_r2.step(),
        },
        final_state: sampler.state,
        final_hyper: sampler.hyper,
        config: cfg.clone(),
        prior: *prior,
        orders: orders.clone(),
        fallback_count: sampler.fallbacks,
        max_xtu_drift: sampler.max_drift,
        warnings: init.warnings,
        timings: sampler.timings,
    })
}
