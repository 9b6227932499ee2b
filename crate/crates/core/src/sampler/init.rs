//! Starting values: least squares for (β₂, σ²), a probit fit for β₁, latent
//! values consistent with z, and a residual correlation for ρ.

use nalgebra::{DMatrix, DVector};

use crate::distributions::{inverse_mills, log_norm_cdf};
use crate::error::{Error, Result};
use crate::model::{ChainConfig, Dataset, HyperState, ParameterState};

/// Starting σ² is never below this.
pub const SIGMA2_FLOOR: f64 = 1e-6;
/// Starting |ρ| is clamped to this.
pub const RHO_CLAMP: f64 = 0.95;
/// Ridge penalty of the fallback probit fit.
pub const PROBIT_RIDGE: f64 = 1.0;

const PROBIT_MAX_ITER: usize = 100;
/// A fitted linear predictor this large signals (quasi-)separation.
const SEPARATION_SCORE: f64 = 40.0;

#[derive(Debug, Clone, PartialEq)]
pub struct InitOutput {
    pub state: ParameterState,
    pub hyper: HyperState,
    /// Mean squared least-squares residual before flooring.
    pub residual_variance: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbitFit {
    pub beta: DVector<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Least-squares coefficients, adding a small ridge when `X'X` is singular.
pub fn least_squares(x: &DMatrix<f64>, y: &DVector<f64>, warnings: &mut Vec<String>) -> Result<DVector<f64>> {
    let gram = x.tr_mul(x);
    let xty = x.tr_mul(y);
    if let Some(chol) = gram.clone().cholesky() {
        let diag = chol.l_dirty().diagonal();
        let (lo, hi) = diag
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        if (hi / lo).powi(2) < 1e12 {
            return Ok(chol.solve(&xty));
        }
    }
    let p = x.ncols();
    let lambda = 1e-6 * (gram.trace() / p as f64).max(1e-12);
    warnings.push(format!("X'X is singular or ill-conditioned; least squares uses ridge {lambda:e}"));
    let mut reg = gram;
    for j in 0..p {
        reg[(j, j)] += lambda;
    }
    reg.cholesky()
        .map(|c| c.solve(&xty))
        .ok_or_else(|| Error::NotPositiveDefinite {
            context: "ridge least squares".into(),
        })
}

fn probit_objective(x: &DMatrix<f64>, z: &[u8], beta: &DVector<f64>, ridge: f64) -> f64 {
    let lin = x * beta;
    let ll: f64 = lin
        .iter()
        .zip(z)
        .map(|(&t, &zi)| if zi == 1 { log_norm_cdf(t) } else { log_norm_cdf(-t) })
        .sum();
    ll - 0.5 * ridge * beta.norm_squared()
}

/// Probit maximum likelihood (or ridge-penalized when `ridge > 0`) by
/// Newton's method with step halving.
pub fn fit_probit(x: &DMatrix<f64>, z: &[u8], ridge: f64) -> Result<ProbitFit> {
    let p = x.ncols();
    let mut beta = DVector::zeros(p);
    let mut obj = probit_objective(x, z, &beta, ridge);
    for iter in 1..=PROBIT_MAX_ITER {
        let lin = x * &beta;
        let mut grad = -ridge * &beta;
        let mut info = DMatrix::<f64>::identity(p, p) * ridge;
        for (i, &zi) in z.iter().enumerate() {
            let q = if zi == 1 { 1.0 } else { -1.0 };
            let t = q * lin[i];
            // λ(t) = φ(t)/Φ(t); −d²/dt² log Φ(t) = λ(λ + t)
            let lambda = inverse_mills(-t);
            let w = lambda * (lambda + t);
            let row = x.row(i).transpose();
            grad.axpy(q * lambda, &row, 1.0);
            info.ger(w, &row, &row, 1.0);
        }
        let delta = match info.cholesky() {
            Some(c) => c.solve(&grad),
            None => return Ok(ProbitFit { beta, iterations: iter, converged: false }),
        };
        let mut scale = 1.0;
        let mut next = &beta + &delta;
        let mut next_obj = probit_objective(x, z, &next, ridge);
        while !(next_obj >= obj) && scale > 1e-8 {
            scale *= 0.5;
            next = &beta + scale * &delta;
            next_obj = probit_objective(x, z, &next, ridge);
        }
        let change = (scale * &delta).amax();
        beta = next;
        let improvement = next_obj - obj;
        obj = next_obj;
        if !beta.iter().all(|b| b.is_finite()) {
            return Err(Error::Numeric("probit fit diverged".into()));
        }
        if change < 1e-10 || improvement.abs() < 1e-12 * (1.0 + obj.abs()) {
            return Ok(ProbitFit { beta, iterations: iter, converged: true });
        }
    }
    Ok(ProbitFit { beta, iterations: PROBIT_MAX_ITER, converged: false })
}

fn correlation(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.sum() / n, b.sum() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b.iter()) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa > 0.0 && sbb > 0.0 {
        sab / (saa * sbb).sqrt()
    } else {
        0.0
    }
}

/// E[u | z] under u ~ N(t, 1): the conditional mean of the latent value on
/// the side selected by z, which always has the correct sign.
fn latent_start(t: f64, z: u8) -> f64 {
    if z == 1 {
        (t + inverse_mills(-t)).max(0.0)
    } else {
        (t - inverse_mills(t)).min(-f64::MIN_POSITIVE)
    }
}

/// Starting state for a chain. Fixed blocks in `cfg` override the
/// data-driven values.
pub fn init_state(data: &Dataset, cfg: &ChainConfig) -> Result<InitOutput> {
    let mut warnings = Vec::new();
    let x = data.x();
    let mut beta2 = least_squares(x, data.y(), &mut warnings)?;
    let resid = data.y() - x * &beta2;
    let residual_variance = resid.norm_squared() / data.n() as f64;
    let mut sigma2 = residual_variance.max(SIGMA2_FLOOR);

    let ones = data.z().iter().filter(|&&z| z == 1).count();
    let mut beta1 = if ones == 0 || ones == data.n() {
        warnings.push("binary response is constant; probit start uses the ridge-penalized fit".into());
        fit_probit(x, data.z(), PROBIT_RIDGE)?.beta
    } else {
        let fit = fit_probit(x, data.z(), 0.0)?;
        let max_score = (x * &fit.beta).amax();
        if fit.converged && max_score < SEPARATION_SCORE {
            fit.beta
        } else {
            warnings.push("probit fit did not converge (separation); using the ridge-penalized fit".into());
            fit_probit(x, data.z(), PROBIT_RIDGE)?.beta
        }
    };

    if let Some((b1, b2)) = &cfg.fixed.beta {
        if b1.len() != data.p() || b2.len() != data.p() {
            return Err(Error::Dimension(format!(
                "fixed coefficients have lengths ({}, {}), design has {} columns",
                b1.len(),
                b2.len(),
                data.p()
            )));
        }
        beta1 = b1.clone();
        beta2 = b2.clone();
    }
    if let Some(s) = cfg.fixed.sigma2 {
        sigma2 = s;
    }

    let lin1 = x * &beta1;
    let u = DVector::from_iterator(
        data.n(),
        lin1.iter().zip(data.z()).map(|(&t, &z)| latent_start(t, z)),
    );
    let rho = match cfg.fixed.rho {
        Some(r) => r,
        None => {
            let eta = &u - &lin1;
            let phi = data.y() - x * &beta2;
            correlation(&eta, &phi).clamp(-RHO_CLAMP, RHO_CLAMP)
        }
    };
    let state = ParameterState {
        beta1,
        beta2,
        sigma2,
        rho,
        u,
    };
    state.validate()?;
    Ok(InitOutput {
        state,
        hyper: cfg.init_hyper,
        residual_variance,
        warnings,
    })
}
