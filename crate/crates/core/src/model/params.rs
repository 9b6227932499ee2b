use nalgebra::DVector;

use crate::error::{Error, Result};

/// Current values of the regression and association parameters plus the
/// latent vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterState {
    pub beta1: DVector<f64>,
    pub beta2: DVector<f64>,
    /// Variance of the continuous response.
    pub sigma2: f64,
    /// Correlation between the latent variable and the continuous response.
    pub rho: f64,
    pub u: DVector<f64>,
}

impl ParameterState {
    pub fn sigma(&self) -> f64 {
        self.sigma2.sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma2 > 0.0 && self.sigma2.is_finite()) {
            return Err(Error::validation(format!("sigma2 must be positive, got {}", self.sigma2)));
        }
        check_rho(self.rho)?;
        if self.beta1.len() != self.beta2.len() {
            return Err(Error::Dimension(format!(
                "beta1 has length {}, beta2 has length {}",
                self.beta1.len(),
                self.beta2.len()
            )));
        }
        Ok(())
    }
}

pub(crate) fn check_rho(rho: f64) -> Result<()> {
    if !(rho.abs() < 1.0) {
        return Err(Error::validation(format!("rho must lie in (-1, 1), got {rho}")));
    }
    Ok(())
}

/// Prior scale hyperparameters for the two coefficient blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperState {
    pub tau1_sq: f64,
    pub tau2_sq: f64,
    pub r1: f64,
    pub r2: f64,
}

impl Default for HyperState {
    fn default() -> Self {
        Self {
            tau1_sq: 0.5,
            tau2_sq: 0.5,
            r1: 0.3,
            r2: 0.3,
        }
    }
}

impl HyperState {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau1_sq > 0.0 && self.tau2_sq > 0.0) {
            return Err(Error::validation(format!(
                "tau^2 values must be positive, got ({}, {})",
                self.tau1_sq, self.tau2_sq
            )));
        }
        for r in [self.r1, self.r2] {
            if !(r > 0.0 && r < 1.0) {
                return Err(Error::validation(format!("r must lie in (0, 1), got {r}")));
            }
        }
        Ok(())
    }
}

/// Hyperprior constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorConfig {
    /// Inv-χ² degrees of freedom for τ².
    pub nu: f64,
    /// Inv-χ² scale for τ².
    pub delta_sq: f64,
    /// Beta shape `a` for r.
    pub a: f64,
    /// Beta shape `b` for r.
    pub b: f64,
    pub sigma2_prior_dof: f64,
    pub sigma2_prior_scale: f64,
}

impl Default for PriorConfig {
    fn default() -> Self {
        Self {
            nu: 2.0,
            delta_sq: 2.0,
            a: 0.1,
            b: 0.1,
            sigma2_prior_dof: 0.001,
            sigma2_prior_scale: 0.001,
        }
    }
}

impl PriorConfig {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("nu", self.nu),
            ("delta_sq", self.delta_sq),
            ("a", self.a),
            ("b", self.b),
            ("sigma2_prior_dof", self.sigma2_prior_dof),
            ("sigma2_prior_scale", self.sigma2_prior_scale),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::validation(format!("prior {name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Parameter blocks held fixed instead of sampled.
///
/// Used by the separate-model baseline (ρ ≡ 0) and by oracle checks that
/// need a low-dimensional posterior.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FixedBlocks {
    pub rho: Option<f64>,
    pub sigma2: Option<f64>,
    /// Both coefficient vectors. The latent sweep then draws from
    /// u | β, y, z instead of the β-marginalized leave-one-out conditional.
    pub beta: Option<(DVector<f64>, DVector<f64>)>,
    /// Keep τ₁², τ₂², r₁, r₂ at their initial values.
    pub hyper: bool,
}

/// Chain length, seeding and Metropolis-Hastings tuning.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainConfig {
    pub iterations: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
    /// Random-walk step on log σ².
    pub mh_step_sigma2: f64,
    /// Random-walk step on atanh ρ.
    pub mh_step_rho: f64,
    /// Random-walk step on logit r.
    pub mh_step_r: f64,
    pub adapt_during_burnin: bool,
    pub init_hyper: HyperState,
    pub fixed: FixedBlocks,
}

impl Default for ChainConfig {
    fn default() -> Self {
        Self {
            iterations: 10_000,
            burn_in: 1_000,
            thin: 1,
            seed: 20_240_101,
            mh_step_sigma2: 0.3,
            mh_step_rho: 0.2,
            mh_step_r: 1.0,
            adapt_during_burnin: true,
            init_hyper: HyperState::default(),
            fixed: FixedBlocks::default(),
        }
    }
}

impl ChainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::validation("iterations must be positive"));
        }
        if self.burn_in >= self.iterations {
            return Err(Error::validation(format!(
                "burn-in ({}) must be smaller than iterations ({})",
                self.burn_in, self.iterations
            )));
        }
        if self.thin == 0 {
            return Err(Error::validation("thinning interval must be positive"));
        }
        for (name, v) in [
            ("mh_step_sigma2", self.mh_step_sigma2),
            ("mh_step_rho", self.mh_step_rho),
            ("mh_step_r", self.mh_step_r),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::validation(format!("{name} must be positive, got {v}")));
            }
        }
        self.init_hyper.validate()?;
        if let Some(rho) = self.fixed.rho {
            check_rho(rho)?;
        }
        if let Some(s) = self.fixed.sigma2 {
            if !(s > 0.0) {
                return Err(Error::validation(format!("fixed sigma2 must be positive, got {s}")));
            }
        }
        Ok(())
    }

    /// Number of draws kept after burn-in and thinning.
    pub fn stored_draws(&self) -> usize {
        (self.iterations - self.burn_in) / self.thin
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_config_checks() {
        let mut cfg = ChainConfig::default();
        assert!(cfg.validate().is_ok());
        assert_eq!(cfg.stored_draws(), 9_000);
        cfg.burn_in = cfg.iterations;
        assert!(cfg.validate().is_err());
        let cfg = ChainConfig {
            thin: 0,
            ..ChainConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = ChainConfig {
            iterations: 10,
            burn_in: 3,
            thin: 3,
            ..ChainConfig::default()
        };
        assert_eq!(cfg.stored_draws(), 2);
    }

    #[test]
    fn hyper_and_prior_checks() {
        assert!(HyperState { r1: 1.0, ..HyperState::default() }.validate().is_err());
        assert!(PriorConfig { nu: 0.0, ..PriorConfig::default() }.validate().is_err());
    }
}
