use nalgebra::DVector;

use crate::distributions::norm_cdf;
use crate::error::{Error, Result};

/// Stored posterior draws, one entry per kept iteration.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PosteriorDraws {
    pub iteration: Vec<usize>,
    pub beta1: Vec<DVector<f64>>,
    pub beta2: Vec<DVector<f64>>,
    pub sigma2: Vec<f64>,
    pub rho: Vec<f64>,
    pub tau1_sq: Vec<f64>,
    pub tau2_sq: Vec<f64>,
    pub r1: Vec<f64>,
    pub r2: Vec<f64>,
}

/// One row of [`PosteriorDraws`].
#[derive(Debug, Clone, PartialEq)]
pub struct Draw {
    pub iteration: usize,
    pub beta1: DVector<f64>,
    pub beta2: DVector<f64>,
    pub sigma2: f64,
    pub rho: f64,
    pub tau1_sq: f64,
    pub tau2_sq: f64,
    pub r1: f64,
    pub r2: f64,
}

impl PosteriorDraws {
    pub fn with_capacity(n: usize) -> Self {
        Self {
            iteration: Vec::with_capacity(n),
            beta1: Vec::with_capacity(n),
            beta2: Vec::with_capacity(n),
            sigma2: Vec::with_capacity(n),
            rho: Vec::with_capacity(n),
            tau1_sq: Vec::with_capacity(n),
            tau2_sq: Vec::with_capacity(n),
            r1: Vec::with_capacity(n),
            r2: Vec::with_capacity(n),
        }
    }

    pub fn push(&mut self, d: Draw) {
        self.iteration.push(d.iteration);
        self.beta1.push(d.beta1);
        self.beta2.push(d.beta2);
        self.sigma2.push(d.sigma2);
        self.rho.push(d.rho);
        self.tau1_sq.push(d.tau1_sq);
        self.tau2_sq.push(d.tau2_sq);
        self.r1.push(d.r1);
        self.r2.push(d.r2);
    }

    pub fn len(&self) -> usize {
        self.iteration.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iteration.is_empty()
    }

    /// Number of coefficients per block, or 0 for an empty set of draws.
    pub fn p(&self) -> usize {
        self.beta1.first().map_or(0, |b| b.len())
    }

    /// Column `j` of β₁ across draws.
    pub fn beta1_component(&self, j: usize) -> Vec<f64> {
        self.beta1.iter().map(|b| b[j]).collect()
    }

    pub fn beta2_component(&self, j: usize) -> Vec<f64> {
        self.beta2.iter().map(|b| b[j]).collect()
    }

    pub fn mean_beta1(&self) -> Result<DVector<f64>> {
        mean_vector(&self.beta1)
    }

    pub fn mean_beta2(&self) -> Result<DVector<f64>> {
        mean_vector(&self.beta2)
    }

    /// Every scalar trace with its column name, in chain-file order.
    pub fn named_columns(&self) -> Vec<(String, Vec<f64>)> {
        let p = self.p();
        let mut cols = Vec::with_capacity(2 * p + 6);
        for j in 0..p {
            cols.push((format!("beta1_{}", j + 1), self.beta1_component(j)));
        }
        for j in 0..p {
            cols.push((format!("beta2_{}", j + 1), self.beta2_component(j)));
        }
        cols.push(("sigma2".into(), self.sigma2.clone()));
        cols.push(("rho".into(), self.rho.clone()));
        cols.push(("tau1_sq".into(), self.tau1_sq.clone()));
        cols.push(("tau2_sq".into(), self.tau2_sq.clone()));
        cols.push(("r1".into(), self.r1.clone()));
        cols.push(("r2".into(), self.r2.clone()));
        cols
    }
}

fn mean_vector(v: &[DVector<f64>]) -> Result<DVector<f64>> {
    let first = v
        .first()
        .ok_or_else(|| Error::validation("no posterior draws"))?;
    let mut acc = DVector::zeros(first.len());
    for b in v {
        acc += b;
    }
    Ok(acc / v.len() as f64)
}

/// Point predictions for one design row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    /// Posterior mean of x'β₂.
    pub y_hat: f64,
    /// Posterior mean of Φ(x'β₁).
    pub p_z1: f64,
    /// 1 iff `p_z1 ≥ 0.5`.
    pub z_hat: u8,
}

/// Posterior-mean prediction of both responses at `x_new`.
pub fn predict(draws: &PosteriorDraws, x_new: &DVector<f64>) -> Result<Prediction> {
    if draws.is_empty() {
        return Err(Error::validation("cannot predict from an empty chain"));
    }
    if x_new.len() != draws.p() {
        return Err(Error::Dimension(format!(
            "chain has {} coefficients, row has {} predictors",
            draws.p(),
            x_new.len()
        )));
    }
    let n = draws.len() as f64;
    let y_hat = draws.beta2.iter().map(|b| x_new.dot(b)).sum::<f64>() / n;
    let p_z1 = draws.beta1.iter().map(|b| norm_cdf(x_new.dot(b))).sum::<f64>() / n;
    Ok(Prediction {
        y_hat,
        p_z1,
        z_hat: u8::from(p_z1 >= 0.5),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn draw(beta1: &[f64], beta2: &[f64]) -> Draw {
        Draw {
            iteration: 1,
            beta1: DVector::from_column_slice(beta1),
            beta2: DVector::from_column_slice(beta2),
            sigma2: 1.0,
            rho: 0.0,
            tau1_sq: 1.0,
            tau2_sq: 1.0,
            r1: 0.5,
            r2: 0.5,
        }
    }

    #[test]
    fn single_draw_predictions() {
        let mut d = PosteriorDraws::default();
        d.push(draw(&[0.0, 0.0], &[1.0, 2.0]));
        let x = DVector::from_vec(vec![1.0, 1.0]);
        let p = predict(&d, &x).unwrap();
        assert_eq!(p.y_hat, 3.0);
        assert_eq!(p.p_z1, 0.5);
        assert_eq!(p.z_hat, 1);
    }

    #[test]
    fn averages_probabilities_not_scores() {
        let mut d = PosteriorDraws::default();
        d.push(draw(&[0.0], &[0.0]));
        d.push(draw(&[1.96], &[0.0]));
        let p = predict(&d, &DVector::from_vec(vec![1.0])).unwrap();
        assert!((p.p_z1 - 0.7375).abs() < 1e-5);
    }

    #[test]
    fn errors() {
        let d = PosteriorDraws::default();
        assert!(predict(&d, &DVector::zeros(1)).is_err());
        let mut d = PosteriorDraws::default();
        d.push(draw(&[0.0, 1.0], &[0.0, 1.0]));
        assert!(matches!(
            predict(&d, &DVector::zeros(3)),
            Err(Error::Dimension(_))
        ));
    }
}
