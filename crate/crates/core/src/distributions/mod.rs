//! Density evaluation and random sampling primitives.
//!
//! Everything here is either a pure function or draws from an explicitly
//! passed [`RandomStream`].

mod normal;
mod rng;
mod truncated;

use nalgebra::{DMatrix, DVector};
use rand_distr::{ChiSquared, Distribution};
use statrs::function::beta::ln_beta;

use crate::error::{Error, Result};

pub use normal::{log_std_normal_cdf, log_std_normal_pdf, std_normal_cdf, std_normal_pdf};
pub(crate) use normal::{inverse_mills, log_norm_cdf, norm_cdf, LN_SQRT_2PI};
pub use rng::{derive_seed, RandomStream};
pub use truncated::{sample_truncated_normal, Side};

/// Draw from the scaled inverse-χ² distribution Inv-χ²(`dof`, `scale`),
/// i.e. `dof · scale / q` with `q ~ χ²(dof)`.
pub fn sample_scaled_inv_chi2(dof: f64, scale: f64, rng: &mut RandomStream) -> Result<f64> {
    if !(dof > 0.0 && dof.is_finite()) || !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::validation(format!(
            "scaled inverse chi-square needs dof > 0 and scale > 0, got ({dof}, {scale})"
        )));
    }
    let chi = ChiSquared::new(dof).map_err(|e| Error::validation(e.to_string()))?;
    let q: f64 = chi.sample(rng);
    Ok(dof * scale / q)
}

/// Draw `mean + L·η` where `L` is the lower Cholesky factor of `covariance`.
pub fn sample_mvn(
    mean: &DVector<f64>,
    covariance: &DMatrix<f64>,
    rng: &mut RandomStream,
) -> Result<DVector<f64>> {
    let d = mean.len();
    if covariance.nrows() != d || covariance.ncols() != d {
        return Err(Error::Dimension(format!(
            "mean has length {d}, covariance is {}x{}",
            covariance.nrows(),
            covariance.ncols()
        )));
    }
    let chol = covariance
        .clone()
        .cholesky()
        .ok_or_else(|| Error::NotPositiveDefinite {
            context: "multivariate normal covariance".into(),
        })?;
    let eta = DVector::from_fn(d, |_, _| rng.std_normal());
    Ok(mean + chol.l() * eta)
}

/// log of the Beta(`a`, `b`) density at `r`.
pub fn log_beta_density(r: f64, a: f64, b: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::validation(format!("Beta density needs r in (0, 1), got {r}")));
    }
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::validation(format!("Beta shapes must be positive, got ({a}, {b})")));
    }
    Ok((a - 1.0) * r.ln() + (b - 1.0) * (-r).ln_1p() - ln_beta(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use libm::lgamma as ln_gamma;

    #[test]
    fn inv_chi2_matches_transformation() {
        let mut a = RandomStream::new(11);
        let mut b = RandomStream::new(11);
        let draw = sample_scaled_inv_chi2(10.0, 2.0, &mut a).unwrap();
        let q: f64 = ChiSquared::new(10.0).unwrap().sample(&mut b);
        assert_eq!(draw, 10.0 * 2.0 / q);
    }

    #[test]
    fn inv_chi2_positive_and_rejects_bad_args() {
        let mut rng = RandomStream::new(12);
        for &(nu, s) in &[(0.001, 0.001), (1.0, 1e-8), (300.0, 5.0)] {
            for _ in 0..500 {
                assert!(sample_scaled_inv_chi2(nu, s, &mut rng).unwrap() > 0.0);
            }
        }
        assert!(sample_scaled_inv_chi2(0.0, 1.0, &mut rng).is_err());
        assert!(sample_scaled_inv_chi2(1.0, -1.0, &mut rng).is_err());
    }

    #[test]
    fn mvn_rejects_indefinite() {
        let mut rng = RandomStream::new(13);
        let cov = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        let err = sample_mvn(&DVector::zeros(2), &cov, &mut rng).unwrap_err();
        assert!(matches!(err, Error::NotPositiveDefinite { .. }));
    }

    #[test]
    fn mvn_correlation() {
        let mut rng = RandomStream::new(14);
        let cov = DMatrix::from_row_slice(2, 2, &[1.0, 0.25, 0.25, 1.0]);
        let mean = DVector::zeros(2);
        let n = 200_000;
        let mut s01 = 0.0;
        for _ in 0..n {
            let x = sample_mvn(&mean, &cov, &mut rng).unwrap();
            s01 += x[0] * x[1];
        }
        assert!((s01 / n as f64 - 0.25).abs() < 0.01);
    }

    #[test]
    fn log_beta_examples() {
        assert!(log_beta_density(0.5, 1.0, 1.0).unwrap().abs() < 1e-14);
        assert!((log_beta_density(0.5, 2.0, 2.0).unwrap() - 1.5f64.ln()).abs() < 1e-13);
        // log-gamma oracle for B(a, b)
        let (r, a, b) = (0.3, 0.1, 0.1);
        let oracle = (a - 1.0) * f64::ln(r) + (b - 1.0) * f64::ln(1.0 - r)
            - (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b));
        assert!((log_beta_density(r, a, b).unwrap() - oracle).abs() < 1e-12);
        assert!(log_beta_density(0.0, 1.0, 1.0).is_err());
        assert!(log_beta_density(1.0, 1.0, 1.0).is_err());
    }
}
