//! Replication driver for the simulation study: generate a replicate, fit
//! the joint model and the separate-model baseline, predict the test split
//! and score both fits.

use rayon::prelude::*;

use crate::baselines::fit_sm_b;
use crate::error::Result;
use crate::metrics::{fsl, l2_loss, mean_and_se, misclassification, rmse, select_via_ci, LossReport, ParameterSummary};
use crate::model::{predict, ChainConfig, Dataset, EffectOrders, PosteriorDraws, PriorConfig};
use crate::sampler::{run_chain, AcceptanceStats};
use crate::simulation::{gen_replicate, GeneratedReplicate, SimulationScenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Blqq,
    SmB,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Blqq => "BLQQ",
            Method::SmB => "SM(B)",
        }
    }
}

/// One fitted model scored on one replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodResult {
    pub losses: LossReport,
    pub acceptance: AcceptanceStats,
    /// 2.5% and 97.5% posterior quantiles of ρ.
    pub rho_interval: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateOutcome {
    pub blqq: MethodResult,
    pub smb: MethodResult,
}

/// Result of one replicate; failures are kept as messages so a run can
/// continue and flag incomplete cells.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateRecord {
    pub scenario: SimulationScenario,
    pub replicate: usize,
    pub outcome: std::result::Result<ReplicateOutcome, String>,
}

/// Prediction and selection losses of a set of draws on a replicate's test
/// split. `rho_hat` is the posterior mean of ρ.
pub fn score_draws(draws: &PosteriorDraws, test: &Dataset, beta1_true: &[f64], beta2_true: &[f64]) -> Result<LossReport> {
    let mut y_hat = Vec::with_capacity(test.n());
    let mut z_hat = Vec::with_capacity(test.n());
    for i in 0..test.n() {
        let p = predict(draws, &test.row(i))?;
        y_hat.push(p.y_hat);
        z_hat.push(p.z_hat);
    }
    let p = draws.p();
    let mut summaries = Vec::with_capacity(2 * p);
    for j in 0..p {
        summaries.push(ParameterSummary::from_draws(&draws.beta1_component(j))?);
    }
    for j in 0..p {
        summaries.push(ParameterSummary::from_draws(&draws.beta2_component(j))?);
    }
    let truth: Vec<bool> = beta1_true.iter().chain(beta2_true).map(|&b| b != 0.0).collect();
    let sel = fsl(&select_via_ci(&summaries), &truth)?;
    Ok(LossReport {
        rmse: rmse(test.y().as_slice(), &y_hat)?,
        me: misclassification(test.z(), &z_hat)?,
        fp: sel.false_positives,
        fn_: sel.false_negatives,
        fsl: sel.total(),
        l2_beta1: l2_loss(draws.mean_beta1()?.as_slice(), beta1_true)?,
        l2_beta2: l2_loss(draws.mean_beta2()?.as_slice(), beta2_true)?,
        rho_hat: draws.rho.iter().sum::<f64>() / draws.len() as f64,
    })
}

fn method_result(draws: &PosteriorDraws, acceptance: AcceptanceStats, rep: &GeneratedReplicate) -> Result<MethodResult> {
    let losses = score_draws(draws, &rep.test, rep.beta1_true.as_slice(), rep.beta2_true.as_slice())?;
    let rho = ParameterSummary::from_draws(&draws.rho)?;
    Ok(MethodResult {
        losses,
        acceptance,
        rho_interval: (rho.q025, rho.q975),
    })
}

/// Generate replicate `k` and fit both methods with the replicate's own
/// seed; `chain.seed` is ignored.
pub fn run_replicate(scenario: &SimulationScenario, k: usize, chain: &ChainConfig, prior: &PriorConfig) -> Result<ReplicateOutcome> {
    let rep = gen_replicate(scenario, k)?;
    let orders = EffectOrders::linear(scenario.p);
    let mut cfg = chain.clone();
    cfg.seed = scenario.fit_seed(k);
    let joint = run_chain(&rep.train, &orders, prior, &cfg)?;
    let separate = fit_sm_b(&rep.train, &orders, prior, &cfg)?;
    Ok(ReplicateOutcome {
        blqq: method_result(&joint.draws, joint.acceptance, &rep)?,
        smb: method_result(separate.draws(), separate.chain.acceptance, &rep)?,
    })
}

/// Run `scenario.replicates` replicates of every scenario, in parallel,
/// returning records in (scenario, replicate) order.
pub fn run_replicates(scenarios: &[SimulationScenario], chain: &ChainConfig, prior: &PriorConfig) -> Vec<ReplicateRecord> {
    let jobs: Vec<(usize, usize)> = scenarios
        .iter()
        .enumerate()
        .flat_map(|(s, sc)| (0..sc.replicates).map(move |k| (s, k)))
        .collect();
    jobs.par_iter()
        .map(|&(s, k)| {
            let scenario = &scenarios[s];
            ReplicateRecord {
                scenario: scenario.clone(),
                replicate: k,
                outcome: run_replicate(scenario, k, chain, prior).map_err(|e| e.to_string()),
            }
        })
        .collect()
}

/// Names of the reported losses, in table order.
pub const LOSS_NAMES: [&str; 6] = ["RMSE", "ME", "FSL", "L2(beta1)", "L2(beta2)", "rho_hat"];

fn loss_value(r: &LossReport, name: &str) -> f64 {
    match name {
        "RMSE" => r.rmse,
        "ME" => r.me,
        "FSL" => r.fsl as f64,
        "L2(beta1)" => r.l2_beta1,
        "L2(beta2)" => r.l2_beta2,
        _ => r.rho_hat,
    }
}

/// Mean and standard error of one loss for one method in one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub scenario: SimulationScenario,
    pub loss: &'static str,
    pub method: Method,
    pub mean: f64,
    pub se: f64,
    pub completed: usize,
    pub requested: usize,
}

impl CellSummary {
    pub fn is_complete(&self) -> bool {
        self.completed == self.requested
    }
}

/// Aggregate records into per-(scenario, loss, method) cells, in scenario
/// order. ρ̂ is reported for the joint model only.
pub fn summarize_records(scenarios: &[SimulationScenario], records: &[ReplicateRecord]) -> Vec<CellSummary> {
    let mut cells = Vec::new();
    for sc in scenarios {
        let ok: Vec<&ReplicateOutcome> = records
            .iter()
            .filter(|r| &r.scenario == sc)
            .filter_map(|r| r.outcome.as_ref().ok())
            .collect();
        for &loss in &LOSS_NAMES {
            for method in [Method::Blqq, Method::SmB] {
                if loss == "rho_hat" && method == Method::SmB {
                    continue;
                }
                let values: Vec<f64> = ok
                    .iter()
                    .map(|o| match method {
                        Method::Blqq => loss_value(&o.blqq.losses, loss),
                        Method::SmB => loss_value(&o.smb.losses, loss),
                    })
                    .collect();
                let (mean, se) = mean_and_se(&values).unwrap_or((f64::NAN, f64::NAN));
                cells.push(CellSummary {
                    scenario: sc.clone(),
                    loss,
                    method,
                    mean,
                    se,
                    completed: ok.len(),
                    requested: sc.replicates,
                });
            }
        }
    }
    cells
}
