//! Synthetic stand-in for a birth-records case study: preterm birth (binary)
//! and birth weight in grams (continuous) on nine maternal and infant
//! covariates plus an intercept.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;

use crate::distributions::RandomStream;
use crate::error::{Error, Result};
use crate::model::{Dataset, EffectOrders};

pub const BIRTH_COVARIATES: [&str; 10] = [
    "intercept",
    "day_of_year",
    "weekend",
    "mother_age",
    "african_american",
    "hispanic",
    "education",
    "married",
    "male",
    "first_pregnancy",
];

/// Birth-weight coefficients (grams).
const BETA2: [f64; 10] = [3400.0, 0.05, -10.0, 4.0, -180.0, -40.0, 60.0, 80.0, 120.0, -90.0];
/// Preterm probit coefficients; the intercept puts P(z = 1) near one half.
const BETA1: [f64; 10] = [-0.22, 0.0, 0.02, 0.01, 0.35, 0.05, -0.15, -0.2, 0.05, 0.1];

#[derive(Debug, Clone, PartialEq)]
pub struct BirthRecordsConfig {
    pub n: usize,
    pub rho: f64,
    /// Residual standard deviation of birth weight (grams).
    pub sigma: f64,
    pub seed: u64,
    /// Center and scale every non-constant predictor column.
    pub standardize: bool,
}

impl Default for BirthRecordsConfig {
    fn default() -> Self {
        Self {
            n: 1000,
            rho: -0.85,
            sigma: 450.0,
            seed: 1989,
            standardize: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BirthRecords {
    pub data: Dataset,
    pub orders: EffectOrders,
    pub beta1_true: DVector<f64>,
    pub beta2_true: DVector<f64>,
}

fn bernoulli(p: f64, rng: &mut RandomStream) -> f64 {
    if rng.uniform_open() < p {
        1.0
    } else {
        0.0
    }
}

/// Generate the synthetic case-study dataset. The intercept has effect order
/// 0, every covariate order 1.
pub fn gen_birth_records(cfg: &BirthRecordsConfig) -> Result<BirthRecords> {
    if cfg.n < 2 {
        return Err(Error::validation("birth records need n >= 2"));
    }
    if !(cfg.rho.abs() < 1.0) {
        return Err(Error::validation(format!("rho must lie in (-1, 1), got {}", cfg.rho)));
    }
    if !(cfg.sigma > 0.0 && cfg.sigma.is_finite()) {
        return Err(Error::validation(format!("sigma must be positive, got {}", cfg.sigma)));
    }
    let p = BIRTH_COVARIATES.len();
    let mut rng = RandomStream::new(cfg.seed);
    let mut x = DMatrix::zeros(cfg.n, p);
    for i in 0..cfg.n {
        let row = [
            1.0,
            (rng.index(366) + 1) as f64,
            bernoulli(2.0 / 7.0, &mut rng),
            (28.0 + 6.0 * rng.std_normal()).round().clamp(14.0, 48.0),
            bernoulli(0.2, &mut rng),
            bernoulli(0.1, &mut rng),
            bernoulli(0.55, &mut rng),
            bernoulli(0.6, &mut rng),
            bernoulli(0.51, &mut rng),
            bernoulli(0.4, &mut rng),
        ];
        for (j, v) in row.into_iter().enumerate() {
            x[(i, j)] = v;
        }
    }
    let beta1 = DVector::from_row_slice(&BETA1);
    let beta2 = DVector::from_row_slice(&BETA2);
    let lin1 = &x * &beta1;
    let lin2 = &x * &beta2;
    let s = (1.0 - cfg.rho * cfg.rho).sqrt();
    let mut y = DVector::zeros(cfg.n);
    let mut z = Vec::with_capacity(cfg.n);
    for i in 0..cfg.n {
        let e1 = rng.std_normal();
        let e2 = rng.std_normal();
        z.push(u8::from(lin1[i] + e1 >= 0.0));
        y[i] = lin2[i] + cfg.sigma * (cfg.rho * e1 + s * e2);
    }
    if cfg.standardize {
        standardize_columns(&mut x);
    }
    let names = BIRTH_COVARIATES.iter().map(|s| s.to_string()).collect();
    Ok(BirthRecords {
        data: Dataset::new(x, y, z, names)?,
        orders: EffectOrders::with_intercept(p),
        beta1_true: beta1,
        beta2_true: beta2,
    })
}

/// Center and scale (sample sd) each column that is not constant.
pub fn standardize_columns(x: &mut DMatrix<f64>) {
    let n = x.nrows() as f64;
    for mut col in x.column_iter_mut() {
        let mean = col.sum() / n;
        let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
        if var > 0.0 {
            let sd = var.sqrt();
            col.apply(|v| *v = (*v - mean) / sd);
        }
    }
}

/// Random split into `n_train` training rows and the rest for testing, both
/// kept in original row order.
pub fn train_test_split(data: &Dataset, n_train: usize, rng: &mut RandomStream) -> Result<(Dataset, Dataset)> {
    let n = data.n();
    if n_train < 2 || n - n_train.min(n) < 2 {
        return Err(Error::validation(format!(
            "cannot split {n} rows into {n_train} training rows and at least 2 test rows"
        )));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let (train, test) = idx.split_at_mut(n_train);
    train.sort_unstable();
    test.sort_unstable();
    Ok((data.select_rows(train)?, data.select_rows(test)?))
}
