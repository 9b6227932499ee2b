//! Standard normal density, CDF and quantile.

use libm::erfc;
use statrs::function::erf::erfc_inv;

use crate::error::{Error, Result};

pub(crate) const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Below this point the log-CDF switches to the asymptotic expansion.
const LOG_CDF_ASYMPTOTIC_BELOW: f64 = -30.0;

pub fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x - LN_SQRT_2PI).exp()
}

pub fn log_std_normal_pdf(x: f64) -> f64 {
    -0.5 * x * x - LN_SQRT_2PI
}

/// Φ(x), rejecting non-finite input.
pub fn std_normal_cdf(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::validation(format!("normal CDF of non-finite value {x}")));
    }
    Ok(norm_cdf(x))
}

/// log Φ(x), rejecting non-finite input. Stays finite far into the lower tail.
pub fn log_std_normal_cdf(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::validation(format!("normal log-CDF of non-finite value {x}")));
    }
    Ok(log_norm_cdf(x))
}

pub(crate) fn norm_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Upper tail 1 − Φ(x) without cancellation.
pub(crate) fn norm_sf(x: f64) -> f64 {
    0.5 * erfc(x / SQRT_2)
}

pub(crate) fn log_norm_cdf(x: f64) -> f64 {
    if x < LOG_CDF_ASYMPTOTIC_BELOW {
        // log φ(x) − log(−x) + log(1 − 1/x² + 3/x⁴ − 15/x⁶ + 105/x⁸)
        let t = 1.0 / (x * x);
        let series = 1.0 - t * (1.0 - t * (3.0 - t * (15.0 - 105.0 * t)));
        log_std_normal_pdf(x) - (-x).ln() + series.ln()
    } else if x < 5.0 {
        norm_cdf(x).ln()
    } else {
        (-norm_sf(x)).ln_1p()
    }
}

/// Φ⁻¹(p) for p in (0, 1).
#[cfg(test)]
pub(crate) fn norm_quantile(p: f64) -> f64 {
    -SQRT_2 * erfc_inv(2.0 * p)
}

/// Inverse of the upper tail: the x with 1 − Φ(x) = q.
pub(crate) fn norm_isf(q: f64) -> f64 {
    SQRT_2 * erfc_inv(2.0 * q)
}

/// φ(a) / (1 − Φ(a)), the mean shift of N(0,1) truncated to [a, ∞).
pub(crate) fn inverse_mills(a: f64) -> f64 {
    (log_std_normal_pdf(a) - log_norm_cdf(-a)).exp()
}
