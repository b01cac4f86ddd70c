//! Sample-size sweeps: for each `ε`, draw `m` from the learner's sample-size
//! formula, run it on a random target, and record the final robust risk and
//! query accounting.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{
    binomial_sigma, par_trials, require, stream_rng, trial_seed, Audit, ExperimentConfig,
    ExperimentOutput, OutputPaths, ResultRow, TARGET_STREAM,
};
use crate::complexity::{littlestone_dim, ExplicitClass};
use crate::distribution::Distribution;
use crate::error::Result;
use crate::learners::{
    learn_conjunction_leq, learn_perceptron_leq, learn_soa_leq, learn_winnow_leq, winnow,
    Diagnostics, LearnerReport, PerceptronConfig, SoaConfig, WinnowConfig,
};
use crate::model::{BoundedIntLtf, Concept, Conjunction, RealHalfspace};
use crate::oracle::OracleSession;
use crate::risk::robust_risk;
use crate::sample_size::{
    conjunction_log_class_size, ltf_log_class_size_bound, occam_sample_size, rvc_sample_size,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LearnerKind {
    Conjunction,
    Winnow,
    Perceptron,
    Soa,
}

/// Largest `n` for the SOA, which runs over all conjunctions on `n` variables.
pub const MAX_SOA_DIM: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearningCurveConfig {
    pub learner: LearnerKind,
    pub n: usize,
    pub rho: f64,
    pub eps: Vec<f64>,
    pub delta: f64,
    pub trials: u64,
    pub seed: u64,
    /// Weight budget `W` (Winnow).
    #[serde(default = "default_budget")]
    pub budget: u64,
    /// Support bound `B` and margin `γ` (Perceptron).
    #[serde(default = "default_bound")]
    pub bound: f64,
    #[serde(default = "default_margin")]
    pub margin: f64,
    #[serde(default)]
    pub output: OutputPaths,
}

fn default_budget() -> u64 {
    4
}

fn default_bound() -> f64 {
    1.0
}

fn default_margin() -> f64 {
    0.5
}

impl LearningCurveConfig {
    pub fn new(
        learner: LearnerKind,
        n: usize,
        rho: f64,
        eps: Vec<f64>,
        delta: f64,
        trials: u64,
        seed: u64,
    ) -> Self {
        Self {
            learner,
            n,
            rho,
            eps,
            delta,
            trials,
            seed,
            budget: default_budget(),
            bound: default_bound(),
            margin: default_margin(),
            output: OutputPaths::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        require(self.n >= 1, || "n must be positive".into())?;
        require(self.rho >= 0.0 && self.rho.is_finite(), || {
            format!("rho = {} must be >= 0", self.rho)
        })?;
        require(!self.eps.is_empty(), || "eps grid is empty".into())?;
        require(self.eps.iter().all(|&e| e > 0.0 && e < 1.0), || {
            "every eps must lie in (0, 1)".into()
        })?;
        require(self.delta > 0.0 && self.delta < 1.0, || {
            format!("delta = {} must lie in (0, 1)", self.delta)
        })?;
        require(self.trials > 0, || "trials must be positive".into())?;
        match self.learner {
            LearnerKind::Perceptron => require(
                self.bound > 0.0 && self.margin > 0.0 && self.margin < self.bound,
                || {
                    format!(
                        "need 0 < margin < bound, got margin = {} and bound = {}",
                        self.margin, self.bound
                    )
                },
            ),
            kind => {
                let max = match kind {
                    LearnerKind::Winnow => winnow::MAX_WINNOW_DIM,
                    LearnerKind::Soa => MAX_SOA_DIM,
                    _ => crate::risk::EXACT_MAX_DIM,
                };
                require(self.n <= max, || {
                    format!("n = {} exceeds {max} for this learner", self.n)
                })?;
                require(self.rho <= self.n as f64, || "rho must not exceed n".into())?;
                require(kind != LearnerKind::Winnow || self.budget >= 1, || {
                    "budget must be positive".into()
                })
            }
        }
    }
}

fn random_conjunction(rng: &mut ChaCha8Rng, n: usize) -> Result<Conjunction> {
    let (mut pos, mut neg) = (0u32, 0u32);
    for i in 0..n {
        match rng.random_range(0..3) {
            0 => pos |= 1 << i,
            1 => neg |= 1 << i,
            _ => {}
        }
    }
    Conjunction::from_masks(n, pos, neg)
}

/// Integer LTF built from `W` random unit steps on the weights and bias.
pub fn random_bounded_ltf(rng: &mut ChaCha8Rng, n: usize, budget: u64) -> Result<BoundedIntLtf> {
    let mut weights = vec![0i64; n];
    let mut bias = 0;
    for _ in 0..budget {
        let v = if rng.random_bool(0.5) { 1 } else { -1 };
        match rng.random_range(0..=n) {
            k if k == n => bias += v,
            k => weights[k] += v,
        }
    }
    BoundedIntLtf::new(weights, bias, budget)
}

fn random_unit_halfspace(rng: &mut ChaCha8Rng, n: usize) -> Result<RealHalfspace> {
    loop {
        let a: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = crate::model::norm(&a);
        if norm > 1e-6 {
            return RealHalfspace::new(a.iter().map(|v| v / norm).collect(), 0.0);
        }
    }
}

struct Setup {
    soa_class: Option<ExplicitClass>,
    soa_lit: u64,
    log_class_size: f64,
}

fn sample_size(config: &LearningCurveConfig, setup: &Setup, eps: f64) -> Result<usize> {
    match config.learner {
        // Halfspaces in ℝ^n: the RVC is bounded here by the VC dimension n + 1.
        LearnerKind::Perceptron => rvc_sample_size(eps, config.delta, config.n + 1),
        _ => occam_sample_size(eps, config.delta, setup.log_class_size),
    }
}

struct Run {
    m: usize,
    report: LearnerReport,
    risk: f64,
    /// The learner-specific hard bound held.
    bound_ok: bool,
}

fn run_one(config: &LearningCurveConfig, setup: &Setup, eps: f64, seed: u64) -> Result<Run> {
    let n = config.n;
    let rho = config.rho;
    let mut rng = stream_rng(seed, TARGET_STREAM);
    let m = sample_size(config, setup, eps)?;
    let (target, d): (Concept, Distribution) = match config.learner {
        LearnerKind::Conjunction => (
            random_conjunction(&mut rng, n)?.into(),
            Distribution::uniform(n)?,
        ),
        LearnerKind::Winnow => (
            random_bounded_ltf(&mut rng, n, config.budget)?.into(),
            Distribution::uniform(n)?,
        ),
        LearnerKind::Soa => {
            let class = setup.soa_class.as_ref().expect("soa class");
            let t = class.tables()[rng.random_range(0..class.len())].clone();
            (t.into(), Distribution::uniform(n)?)
        }
        LearnerKind::Perceptron => {
            let t = random_unit_halfspace(&mut rng, n)?;
            let d = Distribution::margin_sampler(config.bound, config.margin, t.clone())?;
            (t.into(), d)
        }
    };
    let mut s = OracleSession::new(target.clone(), d.clone(), rho, rho, seed)?;
    let (report, bound_ok) = match config.learner {
        LearnerKind::Conjunction => {
            let r = learn_conjunction_leq(&mut s, m)?;
            let ok = r.leq_count <= (m + 2 * n) as u64;
            (r, ok)
        }
        LearnerKind::Winnow => {
            let r = learn_winnow_leq(&mut s, m, &WinnowConfig::new(config.budget))?;
            let ok = match &r.diagnostics {
                Diagnostics::Winnow { cap, .. } => r.leq_count <= m as u64 * cap,
                _ => false,
            };
            (r, ok)
        }
        LearnerKind::Perceptron => {
            let r = learn_perceptron_leq(&mut s, m, &PerceptronConfig::default())?;
            let ok = match &r.diagnostics {
                Diagnostics::Perceptron { update_bound, .. } => {
                    r.updates == 0 || update_bound.is_some_and(|b| r.updates <= b)
                }
                _ => false,
            };
            (r, ok)
        }
        LearnerKind::Soa => {
            let class = setup.soa_class.as_ref().expect("soa class");
            let r = learn_soa_leq(&mut s, m, class, &SoaConfig::default())?;
            let ok = r.updates <= setup.soa_lit;
            (r, ok)
        }
    };
    let risk = robust_risk(&report.hypothesis, &target, rho, &d, seed ^ 0x5eed)?.value;
    Ok(Run {
        m,
        report,
        risk,
        bound_ok,
    })
}

const ID: &str = "learning-curve";

pub fn run_learning_curve(config: &LearningCurveConfig) -> Result<ExperimentOutput> {
    config.validate()?;
    let n = config.n;
    let mut setup = Setup {
        soa_class: None,
        soa_lit: 0,
        log_class_size: match config.learner {
            LearnerKind::Winnow => ltf_log_class_size_bound(n, config.budget),
            _ => conjunction_log_class_size(n),
        },
    };
    if config.learner == LearnerKind::Soa {
        let class = ExplicitClass::all_conjunctions(n)?;
        setup.soa_lit = littlestone_dim(&class)? as u64;
        setup.log_class_size = (class.len() as f64).ln();
        setup.soa_class = Some(class);
    }

    let mut rows = Vec::new();
    let mut audits = Vec::new();
    let mut summary = BTreeMap::new();
    let mut all_bounds = true;
    let mut all_consistent = true;
    for (e, &eps) in config.eps.iter().enumerate() {
        let runs = par_trials(config.trials, |t| {
            run_one(
                config,
                &setup,
                eps,
                trial_seed(config.seed, e as u64 * config.trials + t),
            )
        })?;
        let mut successes = 0;
        for (t, run) in runs.iter().enumerate() {
            let t = Some(t as u64);
            let meta = json!({ "eps": eps, "terminated": run.report.terminated });
            rows.push(ResultRow::new(ID, t, "m", run.m as f64, meta.clone()));
            rows.push(ResultRow::new(
                ID,
                t,
                "leq_count",
                run.report.leq_count as f64,
                meta.clone(),
            ));
            rows.push(ResultRow::new(
                ID,
                t,
                "updates",
                run.report.updates as f64,
                meta.clone(),
            ));
            rows.push(ResultRow::new(ID, t, "robust_risk", run.risk, meta));
            successes += (run.risk <= eps) as u64;
            all_bounds &= run.bound_ok;
            all_consistent &= run.report.is_consistent();
        }
        let rate = successes as f64 / runs.len() as f64;
        let floor = 1.0 - config.delta - 3.0 * binomial_sigma(1.0 - config.delta, runs.len());
        audits.push(Audit::new(
            &format!("success_rate[eps={eps}]"),
            rate >= floor,
            format!("{rate:.4} vs {floor:.4}"),
        ));
        rows.push(ResultRow::new(
            ID,
            None,
            "success_rate",
            rate,
            json!({ "eps": eps }),
        ));
        summary.insert(format!("success_rate[eps={eps}]"), rate);
        summary.insert(
            format!("m[eps={eps}]"),
            sample_size(config, &setup, eps)? as f64,
        );
        let mean_updates =
            runs.iter().map(|r| r.report.updates as f64).sum::<f64>() / runs.len() as f64;
        summary.insert(format!("mean_updates[eps={eps}]"), mean_updates);
        summary.insert(
            format!("max_leq_count[eps={eps}]"),
            runs.iter().map(|r| r.report.leq_count).max().unwrap_or(0) as f64,
        );
    }
    let bound_name = match config.learner {
        LearnerKind::Conjunction => "leq_count <= m + 2n",
        LearnerKind::Winnow => "leq_count <= m * cap",
        LearnerKind::Perceptron => "updates <= ceil((B + rho)^2 / gamma'^2)",
        LearnerKind::Soa => "updates <= Lit",
    };
    audits.push(Audit::new("learner_bound", all_bounds, bound_name));
    audits.push(Audit::new(
        "robustly_consistent",
        all_consistent,
        "every run ended robustly consistent",
    ));
    Ok(ExperimentOutput::new(
        ExperimentConfig::LearningCurve(config.clone()),
        summary,
        audits,
        rows,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjunction_curve() {
        let cfg = LearningCurveConfig::new(
            LearnerKind::Conjunction,
            12,
            2.0,
            vec![0.2, 0.1],
            0.05,
            40,
            1,
        );
        let out = run_learning_curve(&cfg).unwrap();
        assert!(out.audit_ok, "{:?}", out.audits);
        assert_eq!(out.summary["m[eps=0.1]"], 162.0);
    }

    #[test]
    fn perceptron_zero_radius() {
        let cfg = LearningCurveConfig::new(LearnerKind::Perceptron, 2, 0.0, vec![0.2], 0.1, 10, 2);
        let out = run_learning_curve(&cfg).unwrap();
        assert!(out.audit_ok, "{:?}", out.audits);
        assert!(out
            .rows
            .iter()
            .filter(|r| r.metric == "updates")
            .all(|r| r.value <= 4.0));
    }

    #[test]
    fn winnow_accounting() {
        let mut cfg = LearningCurveConfig::new(LearnerKind::Winnow, 10, 1.0, vec![0.2], 0.1, 10, 3);
        cfg.budget = 3;
        let out = run_learning_curve(&cfg).unwrap();
        assert!(
            out.audits
                .iter()
                .find(|a| a.name == "learner_bound")
                .unwrap()
                .ok
        );
        assert!(
            out.audits
                .iter()
                .find(|a| a.name == "robustly_consistent")
                .unwrap()
                .ok
        );
    }

    #[test]
    fn soa_curve() {
        let cfg = LearningCurveConfig::new(LearnerKind::Soa, 3, 1.0, vec![0.3], 0.1, 8, 4);
        let out = run_learning_curve(&cfg).unwrap();
        assert!(
            out.audits
                .iter()
                .find(|a| a.name == "learner_bound")
                .unwrap()
                .ok
        );
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut cfg = LearningCurveConfig::new(LearnerKind::Soa, 6, 1.0, vec![0.3], 0.1, 8, 4);
        assert!(cfg.validate().is_err());
        cfg.n = 3;
        cfg.eps = vec![1.5];
        assert!(cfg.validate().is_err());
        let mut p = LearningCurveConfig::new(LearnerKind::Perceptron, 2, 0.0, vec![0.2], 0.1, 1, 0);
        p.margin = 2.0;
        assert!(p.validate().is_err());
    }
}
