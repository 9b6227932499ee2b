//! Synthetic data: the correlated-predictor simulation grid and a
//! birth-records-style case-study dataset.

mod birth;

use nalgebra::{DMatrix, DVector};
use rand::seq::index;

use crate::distributions::RandomStream;
use crate::error::{Error, Result};
use crate::model::Dataset;

pub use birth::{gen_birth_records, train_test_split, BirthRecords, BirthRecordsConfig};

/// One cell of the simulation grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationScenario {
    pub p: usize,
    /// Proportion of nonzero coefficients.
    pub sparsity: f64,
    pub rho_true: f64,
    pub n_train: usize,
    pub n_test: usize,
    pub sigma2_true: f64,
    pub replicates: usize,
    pub base_seed: u64,
    /// Draw the true coefficients once per scenario instead of once per
    /// replicate.
    pub fix_beta: bool,
}

pub const GRID_P: [usize; 2] = [10, 30];
pub const GRID_SPARSITY: [f64; 2] = [0.2, 0.5];
pub const GRID_RHO: [f64; 3] = [0.0, 0.85, -0.5];

impl SimulationScenario {
    pub fn new(p: usize, sparsity: f64, rho_true: f64) -> Self {
        Self {
            p,
            sparsity,
            rho_true,
            n_train: 100,
            n_test: 100,
            sigma2_true: 2.0,
            replicates: 1,
            base_seed: 2024,
            fix_beta: false,
        }
    }

    /// The 3 × 2 × 2 grid over ρ, p and s.
    pub fn grid() -> Vec<Self> {
        let mut out = Vec::with_capacity(12);
        for &rho in &GRID_RHO {
            for &p in &GRID_P {
                for &s in &GRID_SPARSITY {
                    out.push(Self::new(p, s, rho));
                }
            }
        }
        out
    }

    /// Number of nonzero coefficients per block, s·p.
    pub fn nonzeros(&self) -> Result<usize> {
        nonzero_count(self.p, self.sparsity)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 0 {
            return Err(Error::validation("p must be positive"));
        }
        self.nonzeros()?;
        if !(self.rho_true.abs() < 1.0) {
            return Err(Error::validation(format!("rho must lie in (-1, 1), got {}", self.rho_true)));
        }
        if !(self.sigma2_true > 0.0 && self.sigma2_true.is_finite()) {
            return Err(Error::validation(format!("sigma2 must be positive, got {}", self.sigma2_true)));
        }
        if self.n_train < 2 || self.n_test < 2 {
            return Err(Error::validation("train and test sizes must be at least 2"));
        }
        Ok(())
    }

    /// Short identifier such as `rho0.85_p10_s0.2`.
    pub fn label(&self) -> String {
        format!("rho{}_p{}_s{}", self.rho_true, self.p, self.sparsity)
    }

    fn replicate_stream(&self, k: usize) -> RandomStream {
        RandomStream::new(self.base_seed).split(k as u64)
    }

    /// Seed of the sampler run on replicate `k`.
    pub fn fit_seed(&self, k: usize) -> u64 {
        self.replicate_stream(k).split(1).seed()
    }
}

fn nonzero_count(p: usize, s: f64) -> Result<usize> {
    let count = s * p as f64;
    let rounded = count.round();
    if !(s > 0.0 && s <= 1.0) || (count - rounded).abs() > 1e-9 {
        return Err(Error::validation(format!(
            "sparsity {s} times p = {p} must be a whole number of nonzeros in 1..=p"
        )));
    }
    Ok(rounded as usize)
}

/// Σ_x with entries 0.5^|i−j|.
pub fn gen_ar1_covariance(p: usize) -> DMatrix<f64> {
    DMatrix::from_fn(p, p, |i, j| 0.5f64.powi(i.abs_diff(j) as i32))
}

/// Length-`p` vector with s·p nonzeros at uniformly random positions; each
/// nonzero is ±N(3, 1) with a fair sign.
pub fn gen_sparse_coefficients(p: usize, s: f64, rng: &mut RandomStream) -> Result<DVector<f64>> {
    let k = nonzero_count(p, s)?;
    let mut beta = DVector::zeros(p);
    let mut positions = index::sample(rng, p, k).into_vec();
    positions.sort_unstable();
    for j in positions {
        let magnitude = 3.0 + rng.std_normal();
        beta[j] = if rng.coin() { magnitude } else { -magnitude };
    }
    Ok(beta)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedReplicate {
    pub train: Dataset,
    pub test: Dataset,
    pub beta1_true: DVector<f64>,
    pub beta2_true: DVector<f64>,
    pub u_train: DVector<f64>,
    pub u_test: DVector<f64>,
}

fn predictor_names(p: usize) -> Vec<String> {
    (1..=p).map(|j| format!("x{j}")).collect()
}

/// Draw `n` rows: x ~ N(0, Σ_x), (u, y) bivariate normal around
/// (x'β₁, x'β₂) with covariance [[1, ρσ], [ρσ, σ²]], z = 1{u ≥ 0}.
pub fn gen_rows(
    n: usize,
    chol_x: &DMatrix<f64>,
    beta1: &DVector<f64>,
    beta2: &DVector<f64>,
    sigma2: f64,
    rho: f64,
    rng: &mut RandomStream,
) -> Result<(Dataset, DVector<f64>)> {
    let p = chol_x.nrows();
    let mut x = DMatrix::zeros(n, p);
    for i in 0..n {
        let eta = DVector::from_fn(p, |_, _| rng.std_normal());
        x.row_mut(i).copy_from(&(chol_x * eta).transpose());
    }
    let sigma = sigma2.sqrt();
    let mut u = DVector::zeros(n);
    let mut y = DVector::zeros(n);
    for i in 0..n {
        let e1 = rng.std_normal();
        let e2 = rng.std_normal();
        let row = x.row(i);
        u[i] = row.dot(&beta1.transpose()) + e1;
        y[i] = row.dot(&beta2.transpose()) + sigma * (rho * e1 + (1.0 - rho * rho).sqrt() * e2);
    }
    let z = u.iter().map(|&v| u8::from(v >= 0.0)).collect();
    Ok((Dataset::new(x, y, z, predictor_names(p))?, u))
}

/// Replicate `k` of a scenario; a pure function of (scenario, k).
pub fn gen_replicate(scenario: &SimulationScenario, k: usize) -> Result<GeneratedReplicate> {
    scenario.validate()?;
    let mut rng = scenario.replicate_stream(k).split(0);
    let (beta1_true, beta2_true) = if scenario.fix_beta {
        let mut coef = RandomStream::new(scenario.base_seed).split(u64::MAX);
        (
            gen_sparse_coefficients(scenario.p, scenario.sparsity, &mut coef)?,
            gen_sparse_coefficients(scenario.p, scenario.sparsity, &mut coef)?,
        )
    } else {
        (
            gen_sparse_coefficients(scenario.p, scenario.sparsity, &mut rng)?,
            gen_sparse_coefficients(scenario.p, scenario.sparsity, &mut rng)?,
        )
    };
    let chol = gen_ar1_covariance(scenario.p)
        .cholesky()
        .ok_or_else(|| Error::NotPositiveDefinite {
            context: "predictor covariance".into(),
        })?
        .unpack();
    let (train, u_train) = gen_rows(
        scenario.n_train,
        &chol,
        &beta1_true,
        &beta2_true,
        scenario.sigma2_true,
        scenario.rho_true,
        &mut rng,
    )?;
    let (test, u_test) = gen_rows(
        scenario.n_test,
        &chol,
        &beta1_true,
        &beta2_true,
        scenario.sigma2_true,
        scenario.rho_true,
        &mut rng,
    )?;
    Ok(GeneratedReplicate {
        train,
        test,
        beta1_true,
        beta2_true,
        u_train,
        u_test,
    })
}
