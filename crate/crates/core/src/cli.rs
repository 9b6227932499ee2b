//! Command-line interface: `simulate`, `birth-records`, `fit`, `predict`,
//! `replicate` and `summarize`.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};
use nalgebra::DVector;

use crate::baselines::fit_sm_b;
use crate::distributions::RandomStream;
use crate::error::{Error, Result};
use crate::io::{
    parse_dataset_csv, parse_design_csv, read_chain_csv, write_acceptance_csv, write_chain_csv,
    write_dataset_csv, write_diagnostics_csv, write_histograms, write_predictions_csv, write_rows,
    write_summary_csv, PredictionTable, Provenance,
};
use crate::metrics::{misclassification, rmse, PosteriorSummary};
use crate::model::{predict, ChainConfig, EffectOrders, HyperState, PosteriorDraws, PriorConfig};
use crate::replication::{run_replicates, summarize_records, CellSummary, Method, ReplicateRecord, LOSS_NAMES};
use crate::sampler::{run_chain, ChainOutput};
use crate::simulation::{
    gen_birth_records, gen_replicate, train_test_split, BirthRecordsConfig, SimulationScenario,
};

#[derive(Debug, Parser)]
#[command(name = "blqq", version, about = "Bayesian joint model for a continuous and a binary response")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate simulation replicates (train/test CSVs and truth files).
    Simulate(SimulateArgs),
    /// Generate the synthetic birth-records dataset and optional splits.
    BirthRecords(BirthArgs),
    /// Fit the joint model or the separate-model baseline to a dataset.
    Fit(FitArgs),
    /// Predict both responses for a dataset from a chain file.
    Predict(PredictArgs),
    /// Run the simulation study and tabulate losses.
    Replicate(ReplicateArgs),
    /// Recompute summary, diagnostics and histograms from a chain file.
    Summarize(SummarizeArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ScenarioArgs {
    /// Number of predictors.
    #[arg(long, default_value_t = 10)]
    pub p: usize,
    /// Proportion of nonzero coefficients; s·p must be a whole number.
    #[arg(long, default_value_t = 0.2)]
    pub sparsity: f64,
    /// True correlation between the latent variable and the response.
    #[arg(long, default_value_t = 0.85, allow_hyphen_values = true)]
    pub rho: f64,
    /// Use every setting of the 3 × 2 × 2 grid instead of one.
    #[arg(long)]
    pub all: bool,
    /// Setting as `rho,p,s`; repeatable, overrides --p/--sparsity/--rho.
    #[arg(long = "setting", allow_hyphen_values = true)]
    pub settings: Vec<String>,
    #[arg(long, default_value_t = 1)]
    pub replicates: usize,
    /// Base seed of the data streams.
    #[arg(long = "base-seed", default_value_t = 2024)]
    pub base_seed: u64,
    /// Draw the true coefficients once per setting.
    #[arg(long)]
    pub fix_beta: bool,
    #[arg(long, default_value_t = 100)]
    pub n_train: usize,
    #[arg(long, default_value_t = 100)]
    pub n_test: usize,
    #[arg(long, default_value_t = 2.0)]
    pub sigma2: f64,
}

impl ScenarioArgs {
    pub fn scenarios(&self) -> Result<Vec<SimulationScenario>> {
        let base: Vec<SimulationScenario> = if self.all {
            SimulationScenario::grid()
        } else if !self.settings.is_empty() {
            self.settings.iter().map(|s| parse_setting(s)).collect::<Result<_>>()?
        } else {
            vec![SimulationScenario::new(self.p, self.sparsity, self.rho)]
        };
        base.into_iter()
            .map(|mut s| {
                s.replicates = self.replicates;
                s.base_seed = self.base_seed;
                s.fix_beta = self.fix_beta;
                s.n_train = self.n_train;
                s.n_test = self.n_test;
                s.sigma2_true = self.sigma2;
                s.validate()?;
                Ok(s)
            })
            .collect()
    }

    fn record(&self, prov: &mut Provenance) {
        prov.push("replicates", self.replicates)
            .push("base_seed", self.base_seed)
            .push("fix_beta", self.fix_beta)
            .push("n_train", self.n_train)
            .push("n_test", self.n_test)
            .push("sigma2_true", self.sigma2);
    }
}

fn parse_setting(text: &str) -> Result<SimulationScenario> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || Error::validation(format!("setting \"{text}\" must be rho,p,s"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let rho = parts[0].parse::<f64>().map_err(|_| bad())?;
    let p = parts[1].parse::<usize>().map_err(|_| bad())?;
    let s = parts[2].parse::<f64>().map_err(|_| bad())?;
    Ok(SimulationScenario::new(p, s, rho))
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct BirthArgs {
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = -0.85, allow_hyphen_values = true)]
    pub rho: f64,
    /// Residual standard deviation of birth weight (grams).
    #[arg(long, default_value_t = 450.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1989)]
    pub seed: u64,
    /// Center and scale the non-constant predictors.
    #[arg(long)]
    pub standardize: bool,
    /// Number of random train/test splits to write.
    #[arg(long, default_value_t = 0)]
    pub splits: usize,
    #[arg(long, default_value_t = 100)]
    pub n_train: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct PriorArgs {
    #[arg(long, default_value_t = 2.0)]
    pub nu: f64,
    #[arg(long, default_value_t = 2.0)]
    pub delta_sq: f64,
    /// Beta prior shape a of r₁, r₂.
    #[arg(long = "prior-a", default_value_t = 0.1)]
    pub a: f64,
    /// Beta prior shape b of r₁, r₂.
    #[arg(long = "prior-b", default_value_t = 0.1)]
    pub b: f64,
    #[arg(long, default_value_t = 0.001)]
    pub sigma2_prior_dof: f64,
    #[arg(long, default_value_t = 0.001)]
    pub sigma2_prior_scale: f64,
}

impl PriorArgs {
    pub fn config(&self) -> Result<PriorConfig> {
        let p = PriorConfig {
            nu: self.nu,
            delta_sq: self.delta_sq,
            a: self.a,
            b: self.b,
            sigma2_prior_dof: self.sigma2_prior_dof,
            sigma2_prior_scale: self.sigma2_prior_scale,
        };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Args)]
pub struct ChainArgs {
    #[arg(long, default_value_t = 10_000)]
    pub iterations: usize,
    #[arg(long, default_value_t = 1_000)]
    pub burn_in: usize,
    #[arg(long, default_value_t = 1)]
    pub thin: usize,
    #[arg(long, default_value_t = 0.3)]
    pub step_sigma2: f64,
    #[arg(long, default_value_t = 0.2)]
    pub step_rho: f64,
    #[arg(long, default_value_t = 1.0)]
    pub step_r: f64,
    /// Keep random-walk steps fixed during burn-in.
    #[arg(long)]
    pub no_adapt: bool,
    #[arg(long, default_value_t = 0.5)]
    pub tau1_sq: f64,
    #[arg(long, default_value_t = 0.5)]
    pub tau2_sq: f64,
    #[arg(long, default_value_t = 0.3)]
    pub r1: f64,
    #[arg(long, default_value_t = 0.3)]
    pub r2: f64,
}

impl ChainArgs {
    pub fn config(&self, seed: u64) -> Result<ChainConfig> {
        let cfg = ChainConfig {
            iterations: self.iterations,
            burn_in: self.burn_in,
            thin: self.thin,
            seed,
            mh_step_sigma2: self.step_sigma2,
            mh_step_rho: self.step_rho,
            mh_step_r: self.step_r,
            adapt_during_burnin: !self.no_adapt,
            init_hyper: HyperState {
                tau1_sq: self.tau1_sq,
                tau2_sq: self.tau2_sq,
                r1: self.r1,
                r2: self.r2,
            },
            fixed: Default::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn record_chain(prov: &mut Provenance, cfg: &ChainConfig) {
    prov.push("iterations", cfg.iterations)
        .push("burn_in", cfg.burn_in)
        .push("thin", cfg.thin)
        .push("seed", cfg.seed)
        .push("mh_step_sigma2", cfg.mh_step_sigma2)
        .push("mh_step_rho", cfg.mh_step_rho)
        .push("mh_step_r", cfg.mh_step_r)
        .push("adapt_during_burnin", cfg.adapt_during_burnin)
        .push("init_tau1_sq", cfg.init_hyper.tau1_sq)
        .push("init_tau2_sq", cfg.init_hyper.tau2_sq)
        .push("init_r1", cfg.init_hyper.r1)
        .push("init_r2", cfg.init_hyper.r2);
}

fn record_prior(prov: &mut Provenance, p: &PriorConfig) {
    prov.push("nu", p.nu)
        .push("delta_sq", p.delta_sq)
        .push("prior_a", p.a)
        .push("prior_b", p.b)
        .push("sigma2_prior_dof", p.sigma2_prior_dof)
        .push("sigma2_prior_scale", p.sigma2_prior_scale);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    /// Joint latent-variable model.
    Blqq,
    /// Separate probit and linear models (correlation fixed at 0).
    Smb,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum, default_value_t = ModelKind::Blqq)]
    pub model: ModelKind,
    #[arg(long, default_value_t = 20_240_101)]
    pub seed: u64,
    #[command(flatten)]
    pub chain: ChainArgs,
    #[command(flatten)]
    pub prior: PriorArgs,
    /// Largest autocorrelation lag in the diagnostics file.
    #[arg(long, default_value_t = 20)]
    pub max_lag: usize,
    /// Histogram bins per parameter.
    #[arg(long, default_value_t = 30)]
    pub bins: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub chain: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ReplicateArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub chain: ChainArgs,
    #[command(flatten)]
    pub prior: PriorArgs,
    /// Worker threads (0 = all cores); results do not depend on it.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SummarizeArgs {
    #[arg(long)]
    pub chain: PathBuf,
    #[arg(long, default_value_t = 20)]
    pub max_lag: usize,
    #[arg(long, default_value_t = 30)]
    pub bins: usize,
    #[arg(long)]
    pub out: PathBuf,
}

/// Parse arguments and run; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(a) => cmd_simulate(&a),
        Command::BirthRecords(a) => cmd_birth_records(&a),
        Command::Fit(a) => cmd_fit(&a),
        Command::Predict(a) => cmd_predict(&a),
        Command::Replicate(a) => cmd_replicate(&a),
        Command::Summarize(a) => cmd_summarize(&a),
    }
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(format!("cannot create {}", dir.display()), e))
}

fn ensure_file(path: &Path) -> Result<()> {
    if !path.is_file() {
        return Err(Error::validation(format!("input file {} does not exist", path.display())));
    }
    Ok(())
}

fn truth_rows(beta1: &DVector<f64>, beta2: &DVector<f64>) -> Vec<Vec<String>> {
    (0..beta1.len())
        .map(|j| {
            vec![
                (j + 1).to_string(),
                format!("{}", beta1[j]),
                format!("{}", beta2[j]),
                u8::from(beta1[j] != 0.0).to_string(),
                u8::from(beta2[j] != 0.0).to_string(),
            ]
        })
        .collect()
}

const TRUTH_HEADER: [&str; 5] = ["j", "beta1", "beta2", "support1", "support2"];

pub fn cmd_simulate(a: &SimulateArgs) -> Result<()> {
    let scenarios = a.scenario.scenarios()?;
    ensure_dir(&a.out)?;
    for sc in &scenarios {
        for k in 0..sc.replicates {
            let rep = gen_replicate(sc, k)?;
            let dir = a.out.join(sc.label()).join(format!("rep_{k}"));
            let mut prov = Provenance::new("simulate")
                .with("setting", sc.label())
                .with("rho_true", sc.rho_true)
                .with("p", sc.p)
                .with("sparsity", sc.sparsity)
                .with("replicate", k);
            a.scenario.record(&mut prov);
            let orders = EffectOrders::linear(sc.p);
            write_dataset_csv(dir.join("train.csv"), &rep.train, &orders, &prov.clone().with("split", "train"))?;
            write_dataset_csv(dir.join("test.csv"), &rep.test, &orders, &prov.clone().with("split", "test"))?;
            write_rows(
                dir.join("truth.csv"),
                &prov,
                &TRUTH_HEADER,
                truth_rows(&rep.beta1_true, &rep.beta2_true),
            )?;
        }
        info!("wrote {} replicate(s) of {}", sc.replicates, sc.label());
    }
    Ok(())
}

pub fn cmd_birth_records(a: &BirthArgs) -> Result<()> {
    let cfg = BirthRecordsConfig {
        n: a.n,
        rho: a.rho,
        sigma: a.sigma,
        seed: a.seed,
        standardize: a.standardize,
    };
    let b = gen_birth_records(&cfg)?;
    ensure_dir(&a.out)?;
    let prov = Provenance::new("birth-records")
        .with("n", a.n)
        .with("rho_true", a.rho)
        .with("sigma", a.sigma)
        .with("seed", a.seed)
        .with("standardize", a.standardize)
        .with("splits", a.splits)
        .with("n_train", a.n_train);
    write_dataset_csv(a.out.join("birth_records.csv"), &b.data, &b.orders, &prov)?;
    write_rows(a.out.join("truth.csv"), &prov, &TRUTH_HEADER, truth_rows(&b.beta1_true, &b.beta2_true))?;
    for k in 0..a.splits {
        let mut rng = RandomStream::new(a.seed).split(k as u64);
        let (train, test) = train_test_split(&b.data, a.n_train, &mut rng)?;
        let dir = a.out.join(format!("split_{k}"));
        let p = prov.clone().with("split_index", k);
        write_dataset_csv(dir.join("train.csv"), &train, &b.orders, &p)?;
        write_dataset_csv(dir.join("test.csv"), &test, &b.orders, &p)?;
    }
    Ok(())
}

/// Write chain, summary, diagnostics, acceptance and histogram files for a
/// finished run into `out`.
pub fn write_fit_outputs(out: &Path, chain: &ChainOutput, prov: &Provenance, max_lag: usize, bins: usize) -> Result<()> {
    ensure_dir(out)?;
    write_chain_csv(out.join("chain.csv"), &chain.draws, prov)?;
    write_summary_outputs(out, &chain.draws, prov, max_lag, bins)?;
    write_acceptance_csv(out.join("acceptance.csv"), chain, prov)
}

fn write_summary_outputs(out: &Path, draws: &PosteriorDraws, prov: &Provenance, max_lag: usize, bins: usize) -> Result<()> {
    let summary = PosteriorSummary::from_columns(&draws.named_columns())?;
    write_summary_csv(out.join("summary.csv"), &summary, prov)?;
    write_diagnostics_csv(out.join("diagnostics.csv"), draws, max_lag, prov)?;
    write_histograms(out.join("histograms"), draws, bins, prov)
}

pub fn cmd_fit(a: &FitArgs) -> Result<()> {
    ensure_file(&a.data)?;
    let cfg = a.chain.config(a.seed)?;
    let prior = a.prior.config()?;
    if a.bins == 0 {
        return Err(Error::validation("--bins must be positive"));
    }
    ensure_dir(&a.out)?;
    let (data, orders) = parse_dataset_csv(&a.data)?;
    let mut prov = Provenance::new("fit")
        .with("data", a.data.display())
        .with("model", format!("{:?}", a.model).to_lowercase())
        .with("n", data.n())
        .with("p", data.p())
        .with(
            "orders",
            orders.as_slice().iter().map(u32::to_string).collect::<Vec<_>>().join(","),
        );
    record_chain(&mut prov, &cfg);
    record_prior(&mut prov, &prior);
    let chain = match a.model {
        ModelKind::Blqq => run_chain(&data, &orders, &prior, &cfg)?,
        ModelKind::Smb => fit_sm_b(&data, &orders, &prior, &cfg)?.chain,
    };
    for w in &chain.warnings {
        warn!("{w}");
    }
    write_fit_outputs(&a.out, &chain, &prov, a.max_lag, a.bins)
}

pub fn cmd_predict(a: &PredictArgs) -> Result<()> {
    ensure_file(&a.chain)?;
    ensure_file(&a.data)?;
    let draws = read_chain_csv(&a.chain)?;
    let design = parse_design_csv(&a.data)?;
    if design.x.ncols() != draws.p() {
        return Err(Error::Dimension(format!(
            "chain has {} coefficients per block, {} has {} predictors",
            draws.p(),
            a.data.display(),
            design.x.ncols()
        )));
    }
    let n = design.x.nrows();
    let mut table = PredictionTable {
        y_hat: Vec::with_capacity(n),
        p_z1: Vec::with_capacity(n),
        z_hat: Vec::with_capacity(n),
    };
    for i in 0..n {
        let p = predict(&draws, &design.x.row(i).transpose())?;
        table.y_hat.push(p.y_hat);
        table.p_z1.push(p.p_z1);
        table.z_hat.push(p.z_hat);
    }
    let mut losses = Vec::new();
    if let Some(y) = &design.y {
        losses.push(("rmse".to_string(), rmse(y.as_slice(), &table.y_hat)?));
    }
    if let Some(z) = &design.z {
        losses.push(("me".to_string(), misclassification(z, &table.z_hat)?));
    }
    let prov = Provenance::new("predict")
        .with("chain", a.chain.display())
        .with("data", a.data.display())
        .with("draws", draws.len());
    write_predictions_csv(&a.out, &table, &losses, &prov)
}

pub fn cmd_summarize(a: &SummarizeArgs) -> Result<()> {
    ensure_file(&a.chain)?;
    if a.bins == 0 {
        return Err(Error::validation("--bins must be positive"));
    }
    let draws = read_chain_csv(&a.chain)?;
    ensure_dir(&a.out)?;
    let prov = Provenance::new("summarize")
        .with("chain", a.chain.display())
        .with("draws", draws.len())
        .with("max_lag", a.max_lag)
        .with("bins", a.bins);
    write_summary_outputs(&a.out, &draws, &prov, a.max_lag, a.bins)
}

fn fmt_rate(r: Option<f64>) -> String {
    r.map_or_else(|| "NA".to_string(), |v| format!("{v}"))
}

fn raw_rows(records: &[ReplicateRecord]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for r in records {
        let sc = &r.scenario;
        let key = vec![
            sc.rho_true.to_string(),
            sc.p.to_string(),
            sc.sparsity.to_string(),
            r.replicate.to_string(),
        ];
        match &r.outcome {
            Ok(o) => {
                for (method, m) in [(Method::Blqq, &o.blqq), (Method::SmB, &o.smb)] {
                    let l = &m.losses;
                    let acc = &m.acceptance;
                    let mut row = key.clone();
                    row.extend([
                        method.label().to_string(),
                        "ok".to_string(),
                        format!("{}", l.rmse),
                        format!("{}", l.me),
                        l.fp.to_string(),
                        l.fn_.to_string(),
                        l.fsl.to_string(),
                        format!("{}", l.l2_beta1),
                        format!("{}", l.l2_beta2),
                        format!("{}", l.rho_hat),
                        format!("{}", m.rho_interval.0),
                        format!("{}", m.rho_interval.1),
                        fmt_rate(acc.sigma2.rate()),
                        fmt_rate(acc.rho.rate()),
                        fmt_rate(acc.r1.rate()),
                        fmt_rate(acc.r2.rate()),
                    ]);
                    rows.push(row);
                }
            }
            Err(msg) => {
                let mut row = key.clone();
                row.push("-".into());
                row.push(format!("failed: {msg}"));
                row.extend(std::iter::repeat_n("NA".to_string(), 14));
                rows.push(row);
            }
        }
    }
    rows
}

const RAW_HEADER: [&str; 20] = [
    "rho", "p", "s", "replicate", "method", "status", "rmse", "me", "fp", "fn", "fsl", "l2_beta1", "l2_beta2",
    "rho_hat", "rho_q2.5", "rho_q97.5", "acc_sigma2", "acc_rho", "acc_r1", "acc_r2",
];

fn long_rows(cells: &[CellSummary]) -> Vec<Vec<String>> {
    cells
        .iter()
        .map(|c| {
            vec![
                c.scenario.rho_true.to_string(),
                c.scenario.p.to_string(),
                c.scenario.sparsity.to_string(),
                c.loss.to_string(),
                c.method.label().to_string(),
                format!("{}", c.mean),
                format!("{}", c.se),
                c.completed.to_string(),
                c.scenario.replicates.to_string(),
            ]
        })
        .collect()
}

/// Tables in the layout rows = (ρ, loss), columns = (method, s), one per p;
/// cells are `mean (se)`, with `*` marking cells missing replicates.
fn wide_tables(scenarios: &[SimulationScenario], cells: &[CellSummary]) -> Vec<(usize, Vec<String>, Vec<Vec<String>>)> {
    let mut ps: Vec<usize> = scenarios.iter().map(|s| s.p).collect();
    ps.sort_unstable();
    ps.dedup();
    let mut out = Vec::new();
    for p in ps {
        let mut ss: Vec<f64> = scenarios.iter().filter(|s| s.p == p).map(|s| s.sparsity).collect();
        ss.sort_by(f64::total_cmp);
        ss.dedup();
        let mut rhos: Vec<f64> = Vec::new();
        for s in scenarios.iter().filter(|s| s.p == p) {
            if !rhos.contains(&s.rho_true) {
                rhos.push(s.rho_true);
            }
        }
        let mut header = vec!["rho".to_string(), "loss".to_string()];
        for m in [Method::Blqq, Method::SmB] {
            for s in &ss {
                header.push(format!("{} s={s}", m.label()));
            }
        }
        let mut rows = Vec::new();
        for &rho in &rhos {
            for &loss in &LOSS_NAMES {
                let mut row = vec![rho.to_string(), loss.to_string()];
                for m in [Method::Blqq, Method::SmB] {
                    for &s in &ss {
                        let cell = cells.iter().find(|c| {
                            c.scenario.p == p
                                && c.scenario.rho_true == rho
                                && c.scenario.sparsity == s
                                && c.loss == loss
                                && c.method == m
                        });
                        row.push(match cell {
                            Some(c) => format!(
                                "{:.3} ({:.3}){}",
                                c.mean,
                                c.se,
                                if c.is_complete() { "" } else { "*" }
                            ),
                            None => "-".to_string(),
                        });
                    }
                }
                rows.push(row);
            }
        }
        out.push((p, header, rows));
    }
    out
}

pub fn cmd_replicate(a: &ReplicateArgs) -> Result<()> {
    let scenarios = a.scenario.scenarios()?;
    let chain = a.chain.config(0)?;
    let prior = a.prior.config()?;
    ensure_dir(&a.out)?;
    let mut prov = Provenance::new("replicate").with(
        "settings",
        scenarios.iter().map(SimulationScenario::label).collect::<Vec<_>>().join(" "),
    );
    a.scenario.record(&mut prov);
    record_chain(&mut prov, &chain);
    prov.push("seed_rule", "per-replicate seed derived from (base_seed, replicate)");
    record_prior(&mut prov, &prior);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.threads)
        .build()
        .map_err(|e| Error::validation(format!("cannot start worker pool: {e}")))?;
    info!(
        "running {} replicate(s) over {} setting(s)",
        scenarios.iter().map(|s| s.replicates).sum::<usize>(),
        scenarios.len()
    );
    let records = pool.install(|| run_replicates(&scenarios, &chain, &prior));
    let failed = records.iter().filter(|r| r.outcome.is_err()).count();
    if failed > 0 {
        warn!("{failed} replicate(s) failed; affected cells are marked incomplete");
    }
    write_rows(a.out.join("raw_losses.csv"), &prov, &RAW_HEADER, raw_rows(&records))?;
    let cells = summarize_records(&scenarios, &records);
    write_rows(
        a.out.join("table.csv"),
        &prov,
        &["rho", "p", "s", "loss", "method", "mean", "se", "completed", "requested"],
        long_rows(&cells),
    )?;
    for (p, header, rows) in wide_tables(&scenarios, &cells) {
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        write_rows(a.out.join(format!("table_p{p}.csv")), &prov, &header, rows)?;
    }
    Ok(())
}
