use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::Dataset;

/// Sufficient statistics and residual buffers reused across iterations.
#[derive(Debug, Clone)]
pub struct SamplerWorkspace {
    x: DMatrix<f64>,
    /// `X'`, so that row `i` of `X` is the contiguous column `i`.
    xt: DMatrix<f64>,
    y: DVector<f64>,
    gram: DMatrix<f64>,
    xty: DVector<f64>,
    xtu: DVector<f64>,
    eta: DVector<f64>,
    phi: DVector<f64>,
}

/// Cross-products of the residual vectors η = u − Xβ₁ and φ = y − Xβ₂.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualSums {
    pub n: usize,
    pub eta_eta: f64,
    pub eta_phi: f64,
    pub phi_phi: f64,
}

impl ResidualSums {
    pub fn from_residuals(eta: &DVector<f64>, phi: &DVector<f64>) -> Result<Self> {
        if eta.len() != phi.len() {
            return Err(Error::Dimension(format!(
                "eta has length {}, phi has length {}",
                eta.len(),
                phi.len()
            )));
        }
        Ok(Self {
            n: eta.len(),
            eta_eta: eta.dot(eta),
            eta_phi: eta.dot(phi),
            phi_phi: phi.dot(phi),
        })
    }
}

impl SamplerWorkspace {
    pub fn new(data: &Dataset, u: &DVector<f64>) -> Result<Self> {
        Self::from_parts(data.x(), data.y(), u)
    }

    /// Build from raw design, response and latent values (no dataset
    /// validation; any n ≥ 1).
    pub fn from_parts(x: &DMatrix<f64>, y: &DVector<f64>, u: &DVector<f64>) -> Result<Self> {
        let n = x.nrows();
        if u.len() != n || y.len() != n {
            return Err(Error::Dimension(format!(
                "design has {n} rows, response has length {}, latent vector has length {}",
                y.len(),
                u.len()
            )));
        }
        let xt = x.transpose();
        Ok(Self {
            gram: x.tr_mul(x),
            xty: x.tr_mul(y),
            xtu: x.tr_mul(u),
            eta: DVector::zeros(n),
            phi: DVector::zeros(n),
            x: x.clone(),
            xt,
            y: y.clone(),
        })
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn xty(&self) -> &DVector<f64> {
        &self.xty
    }

    pub fn xtu(&self) -> &DVector<f64> {
        &self.xtu
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn eta(&self) -> &DVector<f64> {
        &self.eta
    }

    pub fn phi(&self) -> &DVector<f64> {
        &self.phi
    }

    pub(crate) fn row(&self, i: usize) -> nalgebra::DVectorView<'_, f64> {
        self.xt.column(i)
    }

    /// Apply the change `u_i: old → new` to the maintained `X'u`.
    pub(crate) fn shift_xtu(&mut self, i: usize, delta: f64) {
        self.xtu.axpy(delta, &self.xt.column(i), 1.0);
    }

    /// Recompute `X'u` from scratch, replace the maintained value and return
    /// the largest relative discrepancy that had accumulated.
    pub fn refresh_xtu(&mut self, u: &DVector<f64>) -> f64 {
        let fresh = self.x.tr_mul(u);
        let scale = fresh.amax().max(1.0);
        let drift = (&fresh - &self.xtu).amax() / scale;
        self.xtu = fresh;
        drift
    }

    /// Set η = u − Xβ₁ and φ = y − Xβ₂.
    pub fn update_residuals(&mut self, u: &DVector<f64>, beta1: &DVector<f64>, beta2: &DVector<f64>) {
        self.eta = u - &self.x * beta1;
        self.phi = &self.y - &self.x * beta2;
    }

    pub fn residual_sums(&self) -> ResidualSums {
        ResidualSums {
            n: self.n(),
            eta_eta: self.eta.dot(&self.eta),
            eta_phi: self.eta.dot(&self.phi),
            phi_phi: self.phi.dot(&self.phi),
        }
    }
}
