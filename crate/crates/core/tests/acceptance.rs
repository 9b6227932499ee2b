//! Acceptance gate: prints one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the report is always visible in
//! `cargo test` output. The process exits non-zero only if a criterion
//! could not be evaluated at all, or if `BLQQ_ACCEPTANCE_STRICT` is set and
//! some criterion failed.

mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use blqq::baselines::fit_sm_b;
use blqq::cli::main_with_args;
use blqq::distributions::{sample_scaled_inv_chi2, sample_truncated_normal, RandomStream, Side};
use blqq::metrics::{effective_sample_size, mean_and_se, ParameterSummary};
use blqq::model::{predict, ChainConfig, Dataset, EffectOrders, FixedBlocks, HyperState, PosteriorDraws, PriorConfig};
use blqq::replication::score_draws;
use blqq::sampler::{compute_beta_full_conditional, loo_downdate, loo_moments, run_chain, AcceptanceStats, SamplerWorkspace};
use blqq::simulation::{gen_birth_records, gen_replicate, train_test_split, BirthRecordsConfig, SimulationScenario};
use common::{ks_statistic, rel_err, rel_err_mat, rel_err_vec, GridCdf, Instance};
use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};
use statrs::function::erf::erfc;

type Outcome = Result<(bool, String), String>;

struct Gate {
    lines: Vec<(usize, bool)>,
    broken: usize,
}

impl Gate {
    fn run(&mut self, id: usize, name: &str, f: impl FnOnce() -> Outcome) {
        let t = Instant::now();
        let res = f();
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok((pass, detail)) => {
                println!(
                    "[{}] criterion {id:>2} {name}: {detail} ({secs:.1} s)",
                    if pass { "PASS" } else { "FAIL" }
                );
                self.lines.push((id, pass));
            }
            Err(e) => {
                println!("[FAIL] criterion {id:>2} {name}: could not evaluate: {e} ({secs:.1} s)");
                self.lines.push((id, false));
                self.broken += 1;
            }
        }
    }
}

fn e2s(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn log_phi(t: f64) -> f64 {
    (0.5 * erfc(-t / std::f64::consts::SQRT_2)).ln()
}

// ---------------------------------------------------------------- 1

fn loo_oracle() -> Outcome {
    let mut rng = RandomStream::new(0xA11CE);
    let rhos = [-0.9, 0.0, 0.5, 0.85];
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for k in 0..50 {
        let n = 5 + rng.index(26);
        let p = 1 + rng.index(5);
        let inst = Instance::random(n, p, rhos[k % 4], &mut rng);
        let ws = SamplerWorkspace::from_parts(&inst.x, &inst.y, &inst.u).map_err(e2s)?;
        let fc = compute_beta_full_conditional(&ws, inst.sigma2, inst.rho, &inst.v1, &inst.v2).map_err(e2s)?;
        for i in 0..n {
            let d = loo_downdate(&fc, &ws, i, inst.u[i]).map_err(e2s)?;
            let (mu, sigma) = inst.dense_loo(i);
            let (m_ref, v_ref) = inst.dense_moments(i);
            let (mom, _) = loo_moments(&fc, &ws, i, inst.u[i]).map_err(e2s)?;
            worst = worst
                .max(rel_err_vec(&d.mu, &mu))
                .max(rel_err_mat(&d.sigma, &sigma))
                .max(rel_err(mom.m, m_ref))
                .max(rel_err(mom.v, v_ref));
            checks += 1;
        }
    }
    Ok((worst <= 1e-8, format!("{checks} deletions, max relative error {worst:.2e} (tol 1e-8)")))
}

// ---------------------------------------------------------------- 2

/// A fixed six-point dataset with one predictor.
fn tiny_dataset() -> Dataset {
    let x = [0.3, -1.2, 0.8, 1.5, -0.4, 0.9];
    let y = [0.9, -1.4, 0.2, 2.1, -0.1, 1.6];
    let z = vec![1, 0, 0, 1, 1, 1];
    Dataset::from_parts(DMatrix::from_column_slice(6, 1, &x), DVector::from_column_slice(&y), z).unwrap()
}

fn tiny_posterior() -> Outcome {
    let data = tiny_dataset();
    let (sigma2, rho, tau_sq) = (0.8_f64, 0.6_f64, 2.0);
    let sigma = sigma2.sqrt();
    let s1m = (1.0 - rho * rho).sqrt();
    let orders = EffectOrders::new(vec![0]);
    let hyper = HyperState {
        tau1_sq: tau_sq,
        tau2_sq: tau_sq,
        r1: 0.5,
        r2: 0.5,
    };
    let obs: Vec<(f64, f64, f64)> = (0..6)
        .map(|i| (data.x()[(i, 0)], data.y()[i], if data.z()[i] == 1 { 1.0 } else { -1.0 }))
        .collect();

    // exact log posterior of (β₁, β₂) with u integrated out analytically
    let log_post = |b1: f64, b2: f64| -> f64 {
        let mut l = -(b1 * b1 + b2 * b2) / (2.0 * tau_sq);
        for &(x, y, s) in &obs {
            let r = y - x * b2;
            l += -r * r / (2.0 * sigma2) + log_phi(s * (x * b1 + rho * r / sigma) / s1m);
        }
        l
    };
    let (lo, hi, m) = (-8.0, 8.0, 801);
    let h = (hi - lo) / (m - 1) as f64;
    let mut logs = Vec::with_capacity(m * m);
    for a in 0..m {
        for b in 0..m {
            logs.push(log_post(lo + a as f64 * h, lo + b as f64 * h));
        }
    }
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (mut w, mut e1, mut e2) = (0.0, 0.0, 0.0);
    for a in 0..m {
        for b in 0..m {
            let d = (logs[a * m + b] - top).exp();
            w += d;
            e1 += d * (lo + a as f64 * h);
            e2 += d * (lo + b as f64 * h);
        }
    }
    let (q1, q2) = (e1 / w, e2 / w);

    let prior = PriorConfig::default();
    let cfg = ChainConfig {
        iterations: 101_000,
        burn_in: 1_000,
        seed: 11,
        init_hyper: hyper,
        fixed: FixedBlocks {
            rho: Some(rho),
            sigma2: Some(sigma2),
            beta: None,
            hyper: true,
        },
        ..Default::default()
    };
    let out = run_chain(&data, &orders, &prior, &cfg).map_err(e2s)?;
    let c1 = out.draws.mean_beta1().map_err(e2s)?[0];
    let c2 = out.draws.mean_beta2().map_err(e2s)?[0];
    let means_ok = (c1 - q1).abs() <= 0.05 && (c2 - q2).abs() <= 0.05;

    // ρ with the coefficients held fixed
    let (b1, b2) = (0.4, 0.9);
    let rho_target = |r: f64| -> f64 {
        let s = (1.0 - r * r).sqrt();
        obs.iter()
            .map(|&(x, y, sg)| log_phi(sg * (x * b1 + r * (y - x * b2) / sigma) / s))
            .sum()
    };
    let grid = GridCdf::new(-1.0, 1.0, 20_000, rho_target);
    let cfg = ChainConfig {
        iterations: 201_000,
        burn_in: 1_000,
        seed: 12,
        init_hyper: hyper,
        fixed: FixedBlocks {
            rho: None,
            sigma2: Some(sigma2),
            beta: Some((DVector::from_element(1, b1), DVector::from_element(1, b2))),
            hyper: true,
        },
        ..Default::default()
    };
    let out = run_chain(&data, &orders, &prior, &cfg).map_err(e2s)?;
    let ks = ks_statistic(&out.draws.rho, |x| grid.cdf(x));
    Ok((
        means_ok && ks <= 0.02,
        format!(
            "beta means ({c1:.4}, {c2:.4}) vs quadrature ({q1:.4}, {q2:.4}) (tol 0.05); rho KS {ks:.4} (tol 0.02)"
        ),
    ))
}

// ---------------------------------------------------------------- 3

fn decoupling() -> Outcome {
    let scenario = SimulationScenario::new(5, 0.4, 0.0);
    let rep = gen_replicate(&scenario, 0).map_err(e2s)?;
    let orders = EffectOrders::linear(5);
    let prior = PriorConfig::default();
    let joint_cfg = ChainConfig {
        iterations: 21_000,
        burn_in: 1_000,
        seed: 301,
        fixed: FixedBlocks {
            rho: Some(0.0),
            ..Default::default()
        },
        ..Default::default()
    };
    let smb_cfg = ChainConfig {
        seed: 302,
        fixed: FixedBlocks::default(),
        ..joint_cfg.clone()
    };
    let joint = run_chain(&rep.train, &orders, &prior, &joint_cfg).map_err(e2s)?;
    let smb = fit_sm_b(&rep.train, &orders, &prior, &smb_cfg).map_err(e2s)?;
    let mut worst: f64 = 0.0;
    for j in 0..5 {
        let a = joint.draws.beta2_component(j);
        let b = smb.draws().beta2_component(j);
        let mcse = |d: &[f64]| -> Result<f64, String> {
            let s = ParameterSummary::from_draws(d).map_err(e2s)?;
            let ess = effective_sample_size(d).map_err(e2s)?.ess;
            Ok(s.sd / ess.sqrt())
        };
        let se = (mcse(&a)?.powi(2) + mcse(&b)?.powi(2)).sqrt();
        worst = worst.max((mean(&a) - mean(&b)).abs() / se);
    }
    Ok((worst <= 3.0, format!("largest beta2 mean gap {worst:.2} combined MCSE (tol 3)")))
}

// ---------------------------------------------------------------- 4-6

struct RepFit {
    rho_hat: f64,
    rho_ci: (f64, f64),
    rmse: [f64; 2],
    me: [f64; 2],
    /// RMSE against x'β₂ and ME against 1{x'β₁ ≥ 0} on the test split.
    clean_rmse: [f64; 2],
    clean_me: [f64; 2],
}

fn clean_losses(draws: &PosteriorDraws, test: &Dataset, b1: &DVector<f64>, b2: &DVector<f64>) -> Result<(f64, f64), String> {
    let (mut se, mut wrong) = (0.0, 0);
    for i in 0..test.n() {
        let x = test.row(i);
        let pr = predict(draws, &x).map_err(e2s)?;
        se += (pr.y_hat - x.dot(b2)).powi(2);
        wrong += usize::from(pr.z_hat != u8::from(x.dot(b1) >= 0.0));
    }
    Ok(((se / test.n() as f64).sqrt(), wrong as f64 / test.n() as f64))
}

fn table_cell(rho: f64) -> Result<Vec<RepFit>, String> {
    let mut scenario = SimulationScenario::new(10, 0.2, rho);
    scenario.replicates = 10;
    let prior = PriorConfig::default();
    let orders = EffectOrders::linear(10);
    let mut fits = Vec::new();
    for k in 0..scenario.replicates {
        let rep = gen_replicate(&scenario, k).map_err(e2s)?;
        let cfg = ChainConfig {
            iterations: 5_000,
            burn_in: 500,
            seed: scenario.fit_seed(k),
            ..Default::default()
        };
        let joint = run_chain(&rep.train, &orders, &prior, &cfg).map_err(e2s)?;
        let smb = fit_sm_b(&rep.train, &orders, &prior, &cfg).map_err(e2s)?;
        let (b1, b2) = (&rep.beta1_true, &rep.beta2_true);
        let lj = score_draws(&joint.draws, &rep.test, b1.as_slice(), b2.as_slice()).map_err(e2s)?;
        let ls = score_draws(smb.draws(), &rep.test, b1.as_slice(), b2.as_slice()).map_err(e2s)?;
        let cj = clean_losses(&joint.draws, &rep.test, b1, b2)?;
        let cs = clean_losses(smb.draws(), &rep.test, b1, b2)?;
        let rs = ParameterSummary::from_draws(&joint.draws.rho).map_err(e2s)?;
        fits.push(RepFit {
            rho_hat: lj.rho_hat,
            rho_ci: (rs.q025, rs.q975),
            rmse: [lj.rmse, ls.rmse],
            me: [lj.me, ls.me],
            clean_rmse: [cj.0, cs.0],
            clean_me: [cj.1, cs.1],
        });
    }
    Ok(fits)
}

fn ms(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let v: Vec<f64> = values.collect();
    mean_and_se(&v).unwrap_or((f64::NAN, f64::NAN))
}

fn fmt_ms((m, s): (f64, f64)) -> String {
    format!("{m:.3} ({s:.3})")
}

fn compare(fits: &[RepFit], pick: impl Fn(&RepFit) -> [f64; 2]) -> (bool, String) {
    let b = ms(fits.iter().map(|f| pick(f)[0]));
    let s = ms(fits.iter().map(|f| pick(f)[1]));
    (b.0 < s.0, format!("BLQQ {} vs SM(B) {}", fmt_ms(b), fmt_ms(s)))
}

fn strong_positive() -> Outcome {
    let fits = table_cell(0.85)?;
    let rho = ms(fits.iter().map(|f| f.rho_hat));
    let rho_ok = (0.60..=0.90).contains(&rho.0);
    let (rmse_ok, rmse) = compare(&fits, |f| f.rmse);
    let (me_ok, me) = compare(&fits, |f| f.me);
    let (_, crmse) = compare(&fits, |f| f.clean_rmse);
    let (_, cme) = compare(&fits, |f| f.clean_me);
    let mark = |ok: bool| if ok { "ok" } else { "not met" };
    Ok((
        rho_ok && rmse_ok && me_ok,
        format!(
            "rho_hat {} [{}]; RMSE {rmse} [{}]; ME {me} [{}]; noise-free targets: RMSE {crmse}, ME {cme}",
            fmt_ms(rho),
            mark(rho_ok),
            mark(rmse_ok),
            mark(me_ok)
        ),
    ))
}

fn moderate_negative() -> Outcome {
    let fits = table_cell(-0.5)?;
    let negative = fits.iter().filter(|f| f.rho_hat < 0.0).count();
    let rho = ms(fits.iter().map(|f| f.rho_hat));
    let (me_ok, me) = compare(&fits, |f| f.me);
    let (_, cme) = compare(&fits, |f| f.clean_me);
    Ok((
        negative >= 9 && me_ok,
        format!(
            "rho_hat < 0 in {negative}/10 (mean {}); ME {me} [{}]; noise-free ME {cme}",
            fmt_ms(rho),
            if me_ok { "ok" } else { "not met" }
        ),
    ))
}

fn null_correlation() -> Outcome {
    let fits = table_cell(0.0)?;
    let covered = fits.iter().filter(|f| f.rho_ci.0 <= 0.0 && 0.0 <= f.rho_ci.1).count();
    let rho = ms(fits.iter().map(|f| f.rho_hat));
    Ok((
        covered >= 8,
        format!("95% interval covers 0 in {covered}/10 (need 8); mean rho_hat {}", fmt_ms(rho)),
    ))
}

// ---------------------------------------------------------------- 7

/// Sample mean and variance with their Monte Carlo standard errors.
fn moments(xs: &[f64]) -> (f64, f64, f64, f64) {
    let n = xs.len() as f64;
    let m = mean(xs);
    let c2 = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n;
    let c4 = xs.iter().map(|x| (x - m).powi(4)).sum::<f64>() / n;
    (m, (c2 / n).sqrt(), c2, ((c4 - c2 * c2) / n).sqrt())
}

fn primitives() -> Outcome {
    let n = 1_000_000;
    let std = Normal::new(0.0, 1.0).unwrap();
    let mut rng = RandomStream::new(707);
    let mut worst_z: f64 = 0.0;
    let mut worst_ks: f64 = 0.0;
    let mut cases = 0;
    for k in 0..=8 {
        let mu = -8.0 + 2.0 * k as f64;
        for side in [Side::NonNegative, Side::Negative] {
            // reflect so the truncation is always u ≥ 0 with mean a
            let a = if side == Side::NonNegative { mu } else { -mu };
            let xs: Vec<f64> = (0..n)
                .map(|_| {
                    let u = sample_truncated_normal(mu, 1.0, side, &mut rng);
                    if side == Side::NonNegative { u } else { -u }
                })
                .collect();
            // X = a + E, E ~ N(0,1) truncated to E ≥ −a
            let alpha = -a;
            let tail = std.sf(alpha);
            let lam = (-0.5 * alpha * alpha).exp() / (2.0 * std::f64::consts::PI).sqrt() / tail;
            let m_ref = a + lam;
            let v_ref = 1.0 + alpha * lam - lam * lam;
            let (m, m_se, v, v_se) = moments(&xs);
            worst_z = worst_z.max((m - m_ref).abs() / m_se).max((v - v_ref).abs() / v_se);
            let ks = ks_statistic(&xs, |x| {
                if x <= 0.0 {
                    0.0
                } else {
                    1.0 - std.sf(x - a) / tail
                }
            });
            worst_ks = worst_ks.max(ks);
            cases += 1;
        }
    }
    // scaled inverse-χ²: νs²/q with q ~ χ²_ν
    let (dof, scale) = (10.0, 2.0);
    let chi = ChiSquared::new(dof).unwrap();
    let xs: Vec<f64> = (0..n)
        .map(|_| sample_scaled_inv_chi2(dof, scale, &mut rng))
        .collect::<Result<_, _>>()
        .map_err(e2s)?;
    let m_ref = dof * scale / (dof - 2.0);
    let v_ref = 2.0 * dof * dof * scale * scale / ((dof - 2.0).powi(2) * (dof - 4.0));
    let (m, m_se, v, v_se) = moments(&xs);
    let inv_z = ((m - m_ref).abs() / m_se).max((v - v_ref).abs() / v_se);
    let inv_ks = ks_statistic(&xs, |x| chi.sf(dof * scale / x));
    let pass = worst_z <= 3.0 && worst_ks <= 0.002 && inv_z <= 3.0 && inv_ks <= 0.002;
    Ok((
        pass,
        format!(
            "truncated normal over {cases} cases: max |z| {worst_z:.2}, max KS {worst_ks:.5}; \
             scaled inv-chi2: max |z| {inv_z:.2}, KS {inv_ks:.5} (tol 3 SE, 0.002)"
        ),
    ))
}

// ---------------------------------------------------------------- 8

fn mh_health() -> Outcome {
    let prior = PriorConfig::default();
    let mut lo: f64 = 1.0;
    let mut hi: f64 = 0.0;
    let mut bad = Vec::new();
    for scenario in SimulationScenario::grid() {
        let rep = gen_replicate(&scenario, 0).map_err(e2s)?;
        // the logit-r targets need a few thousand burn-in sweeps to adapt
        let cfg = ChainConfig {
            iterations: 6_000,
            burn_in: 3_000,
            seed: scenario.fit_seed(0),
            ..Default::default()
        };
        let out = run_chain(&rep.train, &EffectOrders::linear(scenario.p), &prior, &cfg).map_err(e2s)?;
        let AcceptanceStats { sigma2, rho, r1, r2 } = out.acceptance;
        for (name, c) in [("sigma2", sigma2), ("rho", rho), ("r1", r1), ("r2", r2)] {
            let rate = c.rate().ok_or("target never proposed")?;
            lo = lo.min(rate);
            hi = hi.max(rate);
            if !(rate > 0.1 && rate < 0.7) {
                bad.push(format!("{} {name} {rate:.3}", scenario.label()));
            }
        }
    }
    let detail = format!("12 settings x 4 targets, rates in [{lo:.3}, {hi:.3}]");
    if bad.is_empty() {
        Ok((true, detail))
    } else {
        Ok((false, format!("{detail}; outside (0.1, 0.7): {}", bad.join(", "))))
    }
}

// ---------------------------------------------------------------- 9

fn birth_records() -> Outcome {
    let cfg = BirthRecordsConfig {
        standardize: true,
        ..Default::default()
    };
    let br = gen_birth_records(&cfg).map_err(e2s)?;
    let prior = PriorConfig::default();
    let mut rhos = Vec::new();
    for k in 0..5u64 {
        let mut rng = RandomStream::new(cfg.seed).split(k);
        let (train, _) = train_test_split(&br.data, 100, &mut rng).map_err(e2s)?;
        let chain = ChainConfig {
            iterations: 5_000,
            burn_in: 500,
            seed: RandomStream::new(cfg.seed).split(1000 + k).seed(),
            ..Default::default()
        };
        let out = run_chain(&train, &br.orders, &prior, &chain).map_err(e2s)?;
        rhos.push(mean(&out.draws.rho));
    }
    let m = mean(&rhos);
    let all_negative = rhos.iter().all(|&r| r < 0.0);
    let list: Vec<String> = rhos.iter().map(|r| format!("{r:.3}")).collect();
    Ok((
        all_negative && (m - cfg.rho).abs() <= 0.15,
        format!("split rho_hat [{}], mean {m:.3} vs {} (tol 0.15)", list.join(", "), cfg.rho),
    ))
}

// ---------------------------------------------------------------- 10

fn collect_files(dir: &Path, out: &mut Vec<PathBuf>) {
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            collect_files(&path, out);
        } else {
            out.push(path);
        }
    }
}

fn cli_session(root: &Path) -> Result<(), String> {
    let s = |p: PathBuf| p.to_str().unwrap().to_string();
    let sim = root.join("sim");
    let data = sim.join("rho0.85_p10_s0.2/rep_0");
    let commands: Vec<Vec<String>> = vec![
        vec!["simulate".into(), "--setting".into(), "0.85,10,0.2".into(), "--replicates".into(), "2".into(), "--out".into(), s(sim.clone())],
        vec!["birth-records".into(), "--splits".into(), "2".into(), "--out".into(), s(root.join("br"))],
        vec![
            "fit".into(), "--data".into(), s(data.join("train.csv")), "--iterations".into(), "1500".into(),
            "--burn-in".into(), "300".into(), "--out".into(), s(root.join("fit")),
        ],
        vec![
            "fit".into(), "--data".into(), s(data.join("train.csv")), "--model".into(), "smb".into(),
            "--iterations".into(), "1500".into(), "--burn-in".into(), "300".into(), "--out".into(), s(root.join("fit_smb")),
        ],
        vec!["summarize".into(), "--chain".into(), s(root.join("fit/chain.csv")), "--out".into(), s(root.join("summary"))],
        vec![
            "predict".into(), "--chain".into(), s(root.join("fit/chain.csv")), "--data".into(), s(data.join("test.csv")),
            "--out".into(), s(root.join("pred.csv")),
        ],
        vec![
            "replicate".into(), "--setting".into(), "-0.5,10,0.2".into(), "--replicates".into(), "2".into(),
            "--iterations".into(), "800".into(), "--burn-in".into(), "200".into(), "--out".into(), s(root.join("rep")),
        ],
    ];
    for args in commands {
        let mut full = vec!["blqq".to_string()];
        full.extend(args.iter().cloned());
        let code = main_with_args(full);
        if code != 0 {
            return Err(format!("`{}` exited with {code}", args.join(" ")));
        }
    }
    Ok(())
}

fn determinism() -> Outcome {
    // provenance headers record paths, so both sessions write to the same place
    let dir = tempfile::tempdir().map_err(e2s)?;
    let (a, b) = (dir.path().join("first"), dir.path().join("run"));
    cli_session(&b)?;
    fs::rename(&b, &a).map_err(e2s)?;
    cli_session(&b)?;
    let mut files = Vec::new();
    collect_files(&a, &mut files);
    let mut differ = Vec::new();
    for f in &files {
        let rel = f.strip_prefix(&a).unwrap();
        if fs::read(f).ok() != fs::read(b.join(rel)).ok() {
            differ.push(rel.display().to_string());
        }
    }
    let mut other = Vec::new();
    collect_files(&b, &mut other);
    let count_ok = other.len() == files.len();
    Ok((
        differ.is_empty() && count_ok,
        format!(
            "7 commands run twice, {} files compared, {} differ{}",
            files.len(),
            differ.len(),
            if count_ok { "" } else { ", file sets differ" }
        ),
    ))
}

fn main() {
    let mut gate = Gate {
        lines: Vec::new(),
        broken: 0,
    };
    let start = Instant::now();
    gate.run(1, "leave-one-out shortcut vs dense oracle", loo_oracle);
    gate.run(2, "tiny-instance posterior vs quadrature", tiny_posterior);
    gate.run(3, "rho = 0 decoupling", decoupling);
    gate.run(4, "rho = 0.85, p = 10, s = 0.2", strong_positive);
    gate.run(5, "rho = -0.5, p = 10, s = 0.2", moderate_negative);
    gate.run(6, "rho = 0 interval coverage", null_correlation);
    gate.run(7, "distribution primitives", primitives);
    gate.run(8, "Metropolis-Hastings acceptance", mh_health);
    gate.run(9, "synthetic birth records", birth_records);
    gate.run(10, "CLI determinism", determinism);
    let passed = gate.lines.iter().filter(|(_, ok)| *ok).count();
    println!(
        "acceptance: {passed}/{} criteria passed in {:.0} s",
        gate.lines.len(),
        start.elapsed().as_secs_f64()
    );
    let strict = std::env::var_os("BLQQ_ACCEPTANCE_STRICT").is_some();
    if gate.broken > 0 || (strict && passed < gate.lines.len()) {
        std::process::exit(1);
    }
}
