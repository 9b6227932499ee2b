//! Random-walk Metropolis–Hastings kernels for σ², ρ and r, and the Gibbs
//! draw for τ².
//!
//! Each kernel works on an unconstrained scale (log σ², atanh ρ, logit r),
//! includes the Jacobian of that transform, and always consumes exactly one
//! normal and one uniform so stream positions do not depend on outcomes.

use nalgebra::DVector;

use crate::distributions::{sample_scaled_inv_chi2, RandomStream};
use crate::error::{Error, Result};
use crate::model::{check_rho, EffectOrders, PriorConfig};

use super::workspace::ResidualSums;

/// Target acceptance rate of burn-in adaptation.
pub const TARGET_ACCEPTANCE: f64 = 0.35;

fn random_walk(t: f64, step: f64, log_target: impl Fn(f64) -> f64, rng: &mut RandomStream) -> (f64, bool) {
    let proposal = t + step * rng.std_normal();
    let log_u = rng.uniform_open().ln();
    let ratio = log_target(proposal) - log_target(t);
    // NaN ratios (proposal outside the support) fall through to rejection
    if log_u < ratio {
        (proposal, true)
    } else {
        (t, false)
    }
}

/// log of the σ² full conditional, up to terms free of σ:
/// −(n+ν₀+2)/2·log σ² + cρ·Σφη/σ − (c·Σφ² + ν₀s₀²)/(2σ²), with c = 1/(1−ρ²).
pub fn log_target_sigma2(sigma2: f64, rho: f64, sums: &ResidualSums, prior: &PriorConfig) -> f64 {
    if !(sigma2 > 0.0) {
        return f64::NEG_INFINITY;
    }
    let c = 1.0 / (1.0 - rho * rho);
    let n = sums.n as f64;
    let nu0 = prior.sigma2_prior_dof;
    -(n + nu0 + 2.0) / 2.0 * sigma2.ln() + c * rho * sums.eta_phi / sigma2.sqrt()
        - (c * sums.phi_phi + nu0 * prior.sigma2_prior_scale) / (2.0 * sigma2)
}

/// log of the ρ full conditional:
/// −(n/2)·log(1−ρ²) − (σ²Σηη − 2ρσΣηφ + Σφφ)/(2σ²(1−ρ²)).
pub fn log_target_rho(rho: f64, sigma2: f64, sums: &ResidualSums) -> f64 {
    if !(rho.abs() < 1.0) {
        return f64::NEG_INFINITY;
    }
    let one_m = 1.0 - rho * rho;
    let sigma = sigma2.sqrt();
    let quad = sigma2 * sums.eta_eta - 2.0 * rho * sigma * sums.eta_phi + sums.phi_phi;
    -(sums.n as f64) / 2.0 * one_m.ln() - quad / (2.0 * sigma2 * one_m)
}

fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// log of the r full conditional at logit(r) = `l`, including the logit
/// Jacobian r(1−r). Computed from `l` directly so that it stays accurate
/// where r rounds to 0 or 1 in double precision.
pub fn log_target_logit_r(l: f64, beta: &DVector<f64>, tau_sq: f64, orders: &EffectOrders, prior: &PriorConfig) -> f64 {
    if !l.is_finite() {
        return f64::NEG_INFINITY;
    }
    let log_r = -softplus(-l);
    let log_1m = -softplus(l);
    let mut total = prior.a * log_r + prior.b * log_1m;
    for (&k, &b) in orders.as_slice().iter().zip(beta.iter()) {
        let k = f64::from(k);
        total += -0.5 * k * log_r - b * b * (-k * log_r).exp() / (2.0 * tau_sq);
    }
    total
}

/// r = 1/(1 + e^{−l}).
pub fn logistic(l: f64) -> f64 {
    (-softplus(-l)).exp()
}

pub fn logit(r: f64) -> f64 {
    (r / (1.0 - r)).ln()
}

/// log of the r full conditional:
/// −½Σ_j o_j·log r − Σ_j β_j²·r^{−o_j}/(2τ²) + (a−1)·log r + (b−1)·log(1−r).
pub fn log_target_r(r: f64, beta: &DVector<f64>, tau_sq: f64, orders: &EffectOrders, prior: &PriorConfig) -> f64 {
    if !(r > 0.0 && r < 1.0) {
        return f64::NEG_INFINITY;
    }
    let mut total = (prior.a - 1.0) * r.ln() + (prior.b - 1.0) * (-r).ln_1p();
    for (&k, &b) in orders.as_slice().iter().zip(beta.iter()) {
        let k = f64::from(k);
        total += -0.5 * k * r.ln() - b * b * r.powf(-k) / (2.0 * tau_sq);
    }
    total
}

/// One random-walk step on log σ².
pub fn sample_sigma2_mh(
    sigma2: f64,
    rho: f64,
    sums: &ResidualSums,
    prior: &PriorConfig,
    step: f64,
    rng: &mut RandomStream,
) -> Result<(f64, bool)> {
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(Error::validation(format!("sigma2 must be positive, got {sigma2}")));
    }
    check_rho(rho)?;
    let (t, accepted) = random_walk(
        sigma2.ln(),
        step,
        |t| log_target_sigma2(t.exp(), rho, sums, prior) + t,
        rng,
    );
    Ok((if accepted { t.exp() } else { sigma2 }, accepted))
}

/// One random-walk step on atanh ρ.
pub fn sample_rho_mh(
    rho: f64,
    sigma2: f64,
    sums: &ResidualSums,
    step: f64,
    rng: &mut RandomStream,
) -> Result<(f64, bool)> {
    check_rho(rho)?;
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(Error::validation(format!("sigma2 must be positive, got {sigma2}")));
    }
    let (t, accepted) = random_walk(
        rho.atanh(),
        step,
        |t| {
            let r = t.tanh();
            log_target_rho(r, sigma2, sums) + (1.0 - r * r).ln()
        },
        rng,
    );
    Ok((if accepted { t.tanh() } else { rho }, accepted))
}

fn check_block(beta: &DVector<f64>, orders: &EffectOrders) -> Result<()> {
    if beta.len() != orders.len() {
        return Err(Error::Dimension(format!(
            "coefficient block has length {}, effect orders have length {}",
            beta.len(),
            orders.len()
        )));
    }
    Ok(())
}

/// τ² ~ Inv-χ²(ν + p, (β'R⁻¹β + νδ²)/(ν + p)) with R = diag(r^orders).
pub fn sample_tau2(
    beta: &DVector<f64>,
    orders: &EffectOrders,
    r: f64,
    prior: &PriorConfig,
    rng: &mut RandomStream,
) -> Result<f64> {
    check_block(beta, orders)?;
    // r = 1 is reachable when logit r is large and gives R = I
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::validation(format!("r must lie in (0, 1], got {r}")));
    }
    let (dof, scale) = tau2_conditional(beta, orders, r, prior);
    sample_scaled_inv_chi2(dof, scale, rng)
}

/// (dof, scale) of the τ² full conditional.
pub fn tau2_conditional(beta: &DVector<f64>, orders: &EffectOrders, r: f64, prior: &PriorConfig) -> (f64, f64) {
    let quad: f64 = orders
        .as_slice()
        .iter()
        .zip(beta.iter())
        .map(|(&k, &b)| b * b / r.powi(k as i32))
        .sum();
    let dof = prior.nu + beta.len() as f64;
    (dof, (quad + prior.nu * prior.delta_sq) / dof)
}

/// One random-walk step on l = logit r; takes and returns `l`.
///
/// The chain state is kept on the logit scale because the posterior of r can
/// put appreciable mass within 1e-16 of 0 or 1, where r itself is not
/// representable.
pub fn sample_r_mh(
    logit_r: f64,
    beta: &DVector<f64>,
    tau_sq: f64,
    orders: &EffectOrders,
    prior: &PriorConfig,
    step: f64,
    rng: &mut RandomStream,
) -> Result<(f64, bool)> {
    check_block(beta, orders)?;
    if !logit_r.is_finite() {
        return Err(Error::validation(format!("logit r must be finite, got {logit_r}")));
    }
    if !(tau_sq > 0.0) {
        return Err(Error::validation(format!("tau^2 must be positive, got {tau_sq}")));
    }
    Ok(random_walk(
        logit_r,
        step,
        |l| log_target_logit_r(l, beta, tau_sq, orders, prior),
        rng,
    ))
}

/// Smallest Robbins–Monro gain used during burn-in.
pub const MIN_ADAPT_GAIN: f64 = 0.02;

/// Robbins–Monro adaptation of a random-walk step toward
/// [`TARGET_ACCEPTANCE`].
///
/// The gain k^-0.6 is floored at [`MIN_ADAPT_GAIN`] so that the step keeps
/// tracking once the chain has left its starting region; early, low
/// acceptance would otherwise dominate the whole burn-in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepAdapter {
    log_step: f64,
    updates: usize,
}

impl StepAdapter {
    pub fn new(step: f64) -> Self {
        Self {
            log_step: step.ln(),
            updates: 0,
        }
    }

    pub fn step(&self) -> f64 {
        self.log_step.exp()
    }

    pub fn update(&mut self, accepted: bool) {
        self.updates += 1;
        let gain = (self.updates as f64).powf(-0.6).max(MIN_ADAPT_GAIN);
        let signal = if accepted { 1.0 } else { 0.0 } - TARGET_ACCEPTANCE;
        self.log_step = (self.log_step + gain * signal).clamp(-12.0, 5.0);
    }
}
