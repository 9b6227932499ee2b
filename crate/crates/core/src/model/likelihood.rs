use nalgebra::DVector;

use super::data::{Dataset, EffectOrders};
use super::params::{check_rho, ParameterState};
use crate::distributions::{log_norm_cdf, LN_SQRT_2PI};
use crate::error::{Error, Result};

/// Standardized score of the latent variable given the continuous response:
/// `(x'β₁ + (ρ/σ)(y − x'β₂)) / √(1 − ρ²)`.
///
/// P(z = 1 | y, θ, x) = Φ(s).
pub fn s_score(x: &DVector<f64>, y_val: f64, params: &ParameterState) -> Result<f64> {
    check_rho(params.rho)?;
    if x.len() != params.beta1.len() {
        return Err(Error::Dimension(format!(
            "x has length {}, coefficients have length {}",
            x.len(),
            params.beta1.len()
        )));
    }
    Ok(s_score_parts(
        x.dot(&params.beta1),
        x.dot(&params.beta2),
        y_val,
        params.sigma(),
        params.rho,
    ))
}

#[inline]
pub(crate) fn s_score_parts(lin1: f64, lin2: f64, y: f64, sigma: f64, rho: f64) -> f64 {
    (lin1 + rho / sigma * (y - lin2)) / (1.0 - rho * rho).sqrt()
}

/// log p(z, y | θ, X): Gaussian log-likelihood of `y` plus the log-probit
/// terms of `z` evaluated at the s-scores.
pub fn joint_log_likelihood(data: &Dataset, params: &ParameterState) -> Result<f64> {
    params.validate()?;
    if params.beta1.len() != data.p() {
        return Err(Error::Dimension(format!(
            "coefficients have length {}, design has {} columns",
            params.beta1.len(),
            data.p()
        )));
    }
    let sigma = params.sigma();
    let lin1 = data.x() * &params.beta1;
    let lin2 = data.x() * &params.beta2;
    let mut total = 0.0;
    for i in 0..data.n() {
        let resid = data.y()[i] - lin2[i];
        total += -0.5 * resid * resid / params.sigma2 - 0.5 * params.sigma2.ln() - LN_SQRT_2PI;
        let s = s_score_parts(lin1[i], lin2[i], data.y()[i], sigma, params.rho);
        total += if data.z()[i] == 1 {
            log_norm_cdf(s)
        } else {
            log_norm_cdf(-s)
        };
    }
    Ok(total)
}

/// Diagonal of the prior covariance `τ² · diag(r^{order_j})`.
pub fn build_prior_covariance(orders: &EffectOrders, tau_sq: f64, r: f64) -> DVector<f64> {
    DVector::from_iterator(
        orders.len(),
        orders.as_slice().iter().map(|&k| tau_sq * r.powi(k as i32)),
    )
}
