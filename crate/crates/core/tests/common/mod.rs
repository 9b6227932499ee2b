//! Dense reference computations shared by the integration tests.
//!
//! Everything here builds the full 2n-dimensional stacked system explicitly
//! and inverts it with LU, independently of the sampler's p×p shortcuts.

#![allow(dead_code)]

use blqq::distributions::RandomStream;
use blqq::model::Dataset;
use nalgebra::{DMatrix, DVector};

pub struct Instance {
    pub x: DMatrix<f64>,
    pub u: DVector<f64>,
    pub y: DVector<f64>,
    pub sigma2: f64,
    pub rho: f64,
    pub v1: DVector<f64>,
    pub v2: DVector<f64>,
}

impl Instance {
    pub fn random(n: usize, p: usize, rho: f64, rng: &mut RandomStream) -> Self {
        let x = DMatrix::from_fn(n, p, |_, _| rng.std_normal());
        let u = DVector::from_fn(n, |_, _| rng.std_normal() * 1.5);
        let y = DVector::from_fn(n, |_, _| rng.std_normal() * 2.0 + 0.5);
        let sigma2 = 0.5 + 2.0 * rng.uniform_open();
        let v1 = DVector::from_fn(p, |_, _| 0.2 + 3.0 * rng.uniform_open());
        let v2 = DVector::from_fn(p, |_, _| 0.2 + 3.0 * rng.uniform_open());
        Self { x, u, y, sigma2, rho, v1, v2 }
    }

    pub fn dataset(&self) -> Dataset {
        let z = self.u.iter().map(|&v| u8::from(v >= 0.0)).collect();
        Dataset::from_parts(self.x.clone(), self.y.clone(), z).unwrap()
    }

    /// Stacked design [[X, 0], [0, X]] (2n × 2p), rows ordered (u; y).
    pub fn stacked_design(&self) -> DMatrix<f64> {
        let (n, p) = self.x.shape();
        let mut d = DMatrix::zeros(2 * n, 2 * p);
        d.view_mut((0, 0), (n, p)).copy_from(&self.x);
        d.view_mut((n, p), (n, p)).copy_from(&self.x);
        d
    }

    /// Full 2n × 2n error covariance with cov(u_i, y_i) = ρσ.
    pub fn error_covariance(&self) -> DMatrix<f64> {
        let n = self.x.nrows();
        let s = self.sigma2.sqrt();
        let mut c = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            c[(i, i)] = 1.0;
            c[(n + i, n + i)] = self.sigma2;
            c[(i, n + i)] = self.rho * s;
            c[(n + i, i)] = self.rho * s;
        }
        c
    }

    pub fn observations(&self) -> DVector<f64> {
        let n = self.x.nrows();
        let mut o = DVector::zeros(2 * n);
        o.rows_mut(0, n).copy_from(&self.u);
        o.rows_mut(n, n).copy_from(&self.y);
        o
    }

    fn prior_precision(&self) -> DMatrix<f64> {
        let p = self.x.ncols();
        DMatrix::from_fn(2 * p, 2 * p, |a, b| {
            if a != b {
                0.0
            } else if a < p {
                1.0 / self.v1[a]
            } else {
                1.0 / self.v2[a - p]
            }
        })
    }

    /// (μ_β, Σ_β) from the stacked system with the listed rows kept.
    fn dense_posterior(&self, keep: &[usize]) -> (DVector<f64>, DMatrix<f64>) {
        let design = self.stacked_design().select_rows(keep);
        let cov = self.error_covariance().select_rows(keep).select_columns(keep);
        let obs = self.observations().select_rows(keep);
        let cov_inv = cov.lu().try_inverse().unwrap();
        let prec = self.prior_precision() + design.transpose() * &cov_inv * &design;
        let sigma = prec.lu().try_inverse().unwrap();
        let mu = &sigma * design.transpose() * cov_inv * obs;
        (mu, sigma)
    }

    pub fn dense_full(&self) -> (DVector<f64>, DMatrix<f64>) {
        let keep: Vec<usize> = (0..2 * self.x.nrows()).collect();
        self.dense_posterior(&keep)
    }

    /// Posterior of β with the latent row i deleted.
    pub fn dense_loo(&self, i: usize) -> (DVector<f64>, DMatrix<f64>) {
        let keep: Vec<usize> = (0..2 * self.x.nrows()).filter(|&k| k != i).collect();
        self.dense_posterior(&keep)
    }

    /// Leave-one-out predictive moments of u_i by generic Gaussian
    /// conditioning of row i on all other rows, then integrating β over its
    /// leave-one-out posterior.
    pub fn dense_moments(&self, i: usize) -> (f64, f64) {
        let n2 = 2 * self.x.nrows();
        let rest: Vec<usize> = (0..n2).filter(|&k| k != i).collect();
        let design = self.stacked_design();
        let cov = self.error_covariance();
        let obs = self.observations();
        let a = cov.select_rows(&[i]).select_columns(&rest);
        let a_mat = cov.select_rows(&rest).select_columns(&rest);
        let gain = a * a_mat.lu().try_inverse().unwrap();
        let g = design.select_rows(&[i]) - &gain * design.select_rows(&rest);
        let k = (&gain * obs.select_rows(&rest))[(0, 0)];
        let cond_var = cov[(i, i)] - (&gain * cov.select_rows(&rest).select_columns(&[i]))[(0, 0)];
        let (mu, sigma) = self.dense_loo(i);
        let g = g.transpose();
        let m = g.dot(&mu) + k;
        let v = (g.transpose() * sigma * &g)[(0, 0)] + cond_var;
        (m, v)
    }
}

pub fn rel_err_vec(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    (a - b).amax() / b.amax().max(1e-300)
}

pub fn rel_err_mat(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax() / b.amax().max(1e-300)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Kolmogorov–Smirnov distance between a sample and a continuous CDF.
pub fn ks_statistic(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut s = sample.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(k, &x)| {
            let f = cdf(x);
            (f - k as f64 / n).abs().max(((k + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// CDF obtained by trapezoid integration of an unnormalized log-density on
/// a uniform grid over (lo, hi), evaluated by linear interpolation.
pub struct GridCdf {
    grid: Vec<f64>,
    cum: Vec<f64>,
}

impl GridCdf {
    pub fn new(lo: f64, hi: f64, points: usize, log_density: impl Fn(f64) -> f64) -> Self {
        let h = (hi - lo) / (points + 1) as f64;
        let grid: Vec<f64> = (1..=points).map(|k| lo + k as f64 * h).collect();
        let logs: Vec<f64> = grid.iter().map(|&g| log_density(g)).collect();
        let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let dens: Vec<f64> = logs.iter().map(|&l| (l - top).exp()).collect();
        let mut cum = vec![0.0; points];
        for k in 1..points {
            cum[k] = cum[k - 1] + 0.5 * (dens[k] + dens[k - 1]) * h;
        }
        let total = cum[points - 1];
        for c in &mut cum {
            *c /= total;
        }
        Self { grid, cum }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let g = &self.grid;
        if x <= g[0] {
            return 0.0;
        }
        if x >= g[g.len() - 1] {
            return 1.0;
        }
        let h = g[1] - g[0];
        let k = (((x - g[0]) / h).floor() as usize).min(g.len() - 2);
        let t = (x - g[k]) / h;
        self.cum[k] + t * (self.cum[k + 1] - self.cum[k])
    }

    pub fn mean(&self) -> f64 {
        let mut m = 0.0;
        for k in 1..self.grid.len() {
            m += 0.5 * (self.grid[k] + self.grid[k - 1]) * (self.cum[k] - self.cum[k - 1]);
        }
        m
    }
}
