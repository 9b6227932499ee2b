//! Prediction losses, credible-interval variable selection and chain
//! diagnostics.

use crate::error::{Error, Result};

fn check_len(a: usize, b: usize, what: &str) -> Result<()> {
    if a != b {
        return Err(Error::Dimension(format!("{what}: lengths {a} and {b} differ")));
    }
    if a == 0 {
        return Err(Error::validation(format!("{what}: empty input")));
    }
    Ok(())
}

/// Root-mean-square error.
pub fn rmse(y_true: &[f64], y_pred: &[f64]) -> Result<f64> {
    check_len(y_true.len(), y_pred.len(), "rmse")?;
    let ss: f64 = y_true.iter().zip(y_pred).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok((ss / y_true.len() as f64).sqrt())
}

/// Fraction of disagreeing labels.
pub fn misclassification(z_true: &[u8], z_pred: &[u8]) -> Result<f64> {
    check_len(z_true.len(), z_pred.len(), "misclassification")?;
    let wrong = z_true.iter().zip(z_pred).filter(|(a, b)| a != b).count();
    Ok(wrong as f64 / z_true.len() as f64)
}

/// Squared Euclidean distance ‖β̂ − β‖².
pub fn l2_loss(beta_hat: &[f64], beta_true: &[f64]) -> Result<f64> {
    check_len(beta_hat.len(), beta_true.len(), "l2 loss")?;
    Ok(beta_hat.iter().zip(beta_true).map(|(a, b)| (a - b) * (a - b)).sum())
}

/// Sample quantile with linear interpolation between order statistics
/// (position (n−1)·q in the sorted sample).
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = (sorted.len() - 1) as f64 * q;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Posterior summary of one scalar parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterSummary {
    pub mean: f64,
    pub sd: f64,
    pub q025: f64,
    pub q975: f64,
}

impl ParameterSummary {
    pub fn from_draws(draws: &[f64]) -> Result<Self> {
        if draws.is_empty() {
            return Err(Error::validation("cannot summarize an empty chain"));
        }
        if draws.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("non-finite value in chain".into()));
        }
        let n = draws.len() as f64;
        let mean = draws.iter().sum::<f64>() / n;
        let var = if draws.len() > 1 {
            draws.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        let mut sorted = draws.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Self {
            mean,
            sd: var.sqrt(),
            q025: quantile(&sorted, 0.025),
            q975: quantile(&sorted, 0.975),
        })
    }

    /// True when 0 lies strictly outside the closed interval [q2.5, q97.5].
    pub fn excludes_zero(&self) -> bool {
        self.q025 > 0.0 || self.q975 < 0.0
    }
}

/// Named per-parameter summaries, in chain-column order.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorSummary {
    pub entries: Vec<(String, ParameterSummary)>,
}

impl PosteriorSummary {
    pub fn from_columns(columns: &[(String, Vec<f64>)]) -> Result<Self> {
        let entries = columns
            .iter()
            .map(|(name, v)| Ok((name.clone(), ParameterSummary::from_draws(v)?)))
            .collect::<Result<_>>()?;
        Ok(Self { entries })
    }

    pub fn get(&self, name: &str) -> Option<&ParameterSummary> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }
}

/// Coefficient j is selected iff 0 ∉ [q2.5_j, q97.5_j].
pub fn select_via_ci(summaries: &[ParameterSummary]) -> Vec<bool> {
    summaries.iter().map(ParameterSummary::excludes_zero).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelectionLoss {
    pub false_positives: usize,
    pub false_negatives: usize,
}

impl SelectionLoss {
    pub fn total(&self) -> usize {
        self.false_positives + self.false_negatives
    }
}

/// False positives and negatives of `selected` against `truth`.
pub fn fsl(selected: &[bool], truth: &[bool]) -> Result<SelectionLoss> {
    if selected.len() != truth.len() {
        return Err(Error::Dimension(format!(
            "selection has length {}, truth has length {}",
            selected.len(),
            truth.len()
        )));
    }
    let mut loss = SelectionLoss {
        false_positives: 0,
        false_negatives: 0,
    };
    for (&s, &t) in selected.iter().zip(truth) {
        match (s, t) {
            (true, false) => loss.false_positives += 1,
            (false, true) => loss.false_negatives += 1,
            _ => {}
        }
    }
    Ok(loss)
}

/// Sample autocorrelations at lags 0..=max_lag (biased estimator,
/// normalized by the lag-0 autocovariance). A constant chain yields 1 at
/// lag 0 and 0 elsewhere.
pub fn acf(chain: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    if chain.len() < 2 * max_lag.max(1) {
        return Err(Error::validation(format!(
            "autocorrelation to lag {max_lag} needs at least {} draws, got {}",
            2 * max_lag.max(1),
            chain.len()
        )));
    }
    let n = chain.len();
    let mean = chain.iter().sum::<f64>() / n as f64;
    let dev: Vec<f64> = chain.iter().map(|v| v - mean).collect();
    let c0: f64 = dev.iter().map(|d| d * d).sum();
    let mut out = Vec::with_capacity(max_lag + 1);
    out.push(1.0);
    for k in 1..=max_lag {
        if c0 == 0.0 {
            out.push(0.0);
            continue;
        }
        let ck: f64 = dev[..n - k].iter().zip(&dev[k..]).map(|(a, b)| a * b).sum();
        out.push(ck / c0);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EssEstimate {
    pub ess: f64,
    /// The chain had zero variance; `ess` is then reported as 1.
    pub degenerate: bool,
}

/// Effective sample size using Geyer's initial positive sequence: sums of
/// adjacent autocorrelation pairs are accumulated while positive. Capped at
/// the number of draws.
pub fn effective_sample_size(chain: &[f64]) -> Result<EssEstimate> {
    let n = chain.len();
    if n < 100 {
        return Err(Error::validation(format!("effective sample size needs at least 100 draws, got {n}")));
    }
    let mean = chain.iter().sum::<f64>() / n as f64;
    if chain.iter().all(|&v| v == mean) || chain.iter().all(|&v| v == chain[0]) {
        return Ok(EssEstimate {
            ess: 1.0,
            degenerate: true,
        });
    }
    let dev: Vec<f64> = chain.iter().map(|v| v - mean).collect();
    let c0: f64 = dev.iter().map(|d| d * d).sum();
    let rho = |k: usize| -> f64 { dev[..n - k].iter().zip(&dev[k..]).map(|(a, b)| a * b).sum::<f64>() / c0 };
    // lags are evaluated lazily; the sequence usually stops after a few pairs
    let mut sum = 0.0;
    let mut k = 0;
    while 2 * k + 1 < n / 2 {
        let pair = rho(2 * k) + rho(2 * k + 1);
        if pair <= 0.0 {
            break;
        }
        sum += pair;
        k += 1;
    }
    // τ = −1 + 2·Σ Γ_k with Γ_k = ρ_{2k} + ρ_{2k+1}
    let tau = (2.0 * sum - 1.0).max(1e-12);
    Ok(EssEstimate {
        ess: (n as f64 / tau).min(n as f64),
        degenerate: false,
    })
}

/// Equal-width histogram over [min, max] of the draws.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

pub fn histogram(draws: &[f64], bins: usize) -> Result<Histogram> {
    if draws.is_empty() || bins == 0 {
        return Err(Error::validation("histogram needs draws and at least one bin"));
    }
    let lo = draws.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = draws.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::Numeric("non-finite value in chain".into()));
    }
    let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
    let edges = (0..=bins).map(|k| lo + k as f64 * width).collect();
    let mut counts = vec![0; bins];
    for &v in draws {
        let k = (((v - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    Ok(Histogram { edges, counts })
}

/// Losses of one fitted model on one replicate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossReport {
    pub rmse: f64,
    pub me: f64,
    pub fp: usize,
    pub fn_: usize,
    pub fsl: usize,
    pub l2_beta1: f64,
    pub l2_beta2: f64,
    pub rho_hat: f64,
}

/// Mean and standard error (sd/√n) of a set of replicate values.
pub fn mean_and_se(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return Some((mean, f64::NAN));
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    Some((mean, (var / n).sqrt()))
}
