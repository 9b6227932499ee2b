use nalgebra::DVector;

use crate::distributions::{sample_truncated_normal, RandomStream, Side};
use crate::error::{Error, Result};
use crate::model::{check_rho, Dataset};

use super::beta::{loo_moments_with, FullConditionalBeta, LooScratch};
use super::workspace::SamplerWorkspace;

/// Draw every u_i in index order from its leave-one-out conditional (β
/// integrated out), truncated to the half-line selected by z_i. `X'u` in `ws`
/// is updated after each draw so later observations see the new values.
///
/// Returns the number of observations that needed the direct fallback.
pub fn sample_u_sweep(
    data: &Dataset,
    u: &mut DVector<f64>,
    fc: &FullConditionalBeta,
    ws: &mut SamplerWorkspace,
    rng: &mut RandomStream,
) -> Result<usize> {
    check_lengths(data, u)?;
    let mut scratch = LooScratch::new(fc.p());
    let mut fallbacks = 0;
    for i in 0..data.n() {
        let (mom, fell_back) = loo_moments_with(fc, ws, i, u[i], &mut scratch)?;
        fallbacks += usize::from(fell_back);
        let side = Side::from_outcome(data.z()[i]);
        let new = sample_truncated_normal(mom.m, mom.v, side, rng);
        ws.shift_xtu(i, new - u[i]);
        u[i] = new;
    }
    Ok(fallbacks)
}

/// Draw every u_i from N(x_i'β₁ + (ρ/σ)(y_i − x_i'β₂), 1 − ρ²) truncated by
/// z_i, i.e. the latent conditional when β is held fixed.
pub fn sample_u_given_beta(
    data: &Dataset,
    u: &mut DVector<f64>,
    beta1: &DVector<f64>,
    beta2: &DVector<f64>,
    sigma2: f64,
    rho: f64,
    rng: &mut RandomStream,
) -> Result<()> {
    check_lengths(data, u)?;
    check_rho(rho)?;
    let lin1 = data.x() * beta1;
    let lin2 = data.x() * beta2;
    let sigma = sigma2.sqrt();
    let var = 1.0 - rho * rho;
    for i in 0..data.n() {
        let mean = lin1[i] + rho / sigma * (data.y()[i] - lin2[i]);
        u[i] = sample_truncated_normal(mean, var, Side::from_outcome(data.z()[i]), rng);
    }
    Ok(())
}

fn check_lengths(data: &Dataset, u: &DVector<f64>) -> Result<()> {
    if u.len() != data.n() {
        return Err(Error::Dimension(format!(
            "latent vector has length {}, dataset has {} rows",
            u.len(),
            data.n()
        )));
    }
    Ok(())
}
