//! Point-mass separation: `c1 = x1 ∧ … ∧ xρ` and `c2 = x1 ∧ … ∧ x(ρ+1)` are
//! both zero on `B_λ(0)` when `λ < ρ`, yet `B_ρ(0)` reaches a point where
//! they differ.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{
    mean_and_sigma, par_trials, require, stream_rng, trial_seed, Audit, ExperimentConfig,
    ExperimentOutput, OutputPaths, ResultRow, TARGET_STREAM,
};
use crate::distribution::Distribution;
use crate::error::Result;
use crate::learners::learn_conjunction_leq;
use crate::model::{BitPoint, Concept, Conjunction, MonotoneConjunction, Point};
use crate::oracle::OracleSession;
use crate::risk::robust_risk_exact;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeparationConfig {
    pub n: usize,
    pub rho: usize,
    pub lambda: usize,
    pub trials: u64,
    pub seed: u64,
    /// Examples drawn per trial.
    #[serde(default = "default_sample_size")]
    pub sample_size: usize,
    #[serde(default)]
    pub output: OutputPaths,
}

fn default_sample_size() -> usize {
    10
}

impl SeparationConfig {
    pub fn new(n: usize, rho: usize, lambda: usize, trials: u64, seed: u64) -> Self {
        Self {
            n,
            rho,
            lambda,
            trials,
            seed,
            sample_size: default_sample_size(),
            output: OutputPaths::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        require(self.lambda < self.rho, || {
            format!(
                "need lambda < rho, got lambda = {} and rho = {}",
                self.lambda, self.rho
            )
        })?;
        require(self.rho + 1 <= self.n, || {
            format!(
                "need rho <= n - 1, got rho = {} and n = {}",
                self.rho, self.n
            )
        })?;
        require(self.n <= crate::risk::EXACT_MAX_DIM, || {
            format!("n = {} exceeds the exact-risk limit", self.n)
        })?;
        require(self.trials > 0, || "trials must be positive".into())?;
        require(self.sample_size > 0, || {
            "sample_size must be positive".into()
        })
    }
}

const ID: &str = "separation";

pub fn run_separation_demo(config: &SeparationConfig) -> Result<ExperimentOutput> {
    config.validate()?;
    let n = config.n;
    let rho = config.rho;
    let lambda = config.lambda as f64;
    let c1: Concept = MonotoneConjunction::prefix(n, rho)?.into();
    let c2: Concept = MonotoneConjunction::prefix(n, rho + 1)?.into();
    let origin: Point = BitPoint::zeros(n)?.into();
    let d = Distribution::point_mass(origin.clone());
    let zero: Concept = Conjunction::all_literals(n)?.into();

    let pair_risk = robust_risk_exact(&c1, &c2, rho, &d)?.value;
    let mut audits = vec![Audit::new(
        "pair_risk_is_one",
        pair_risk == 1.0,
        format!("R(c1, c2) = {pair_risk}"),
    )];

    // Every hypothesis here is zero on B_λ(0), as are both targets.
    let mut agree_all = true;
    for target in [&c1, &c2] {
        let mut s = OracleSession::new(target.clone(), d.clone(), lambda, rho as f64, config.seed)?;
        s.ex_draw(1)?;
        for h in [&c1, &c2, &zero] {
            agree_all &= s.leq_query(h, &origin)?.is_agree();
        }
    }
    audits.push(Audit::new(
        "leq_agree_at_origin",
        agree_all,
        "LEQ at 0 for h in {c1, c2, 0} under both targets",
    ));

    let trials = par_trials(config.trials, |k| {
        let seed = trial_seed(config.seed, k);
        let mut rng = stream_rng(seed, TARGET_STREAM);
        let pick_second = rng.random_bool(0.5);
        let target = if pick_second { &c2 } else { &c1 };
        let mut s = OracleSession::new(target.clone(), d.clone(), lambda, rho as f64, seed)?;
        let report = learn_conjunction_leq(&mut s, config.sample_size)?;
        let risk = robust_risk_exact(&report.hypothesis, target, rho, &d)?.value;
        let r1 = robust_risk_exact(&report.hypothesis, &c1, rho, &d)?.value;
        let r2 = robust_risk_exact(&report.hypothesis, &c2, rho, &d)?.value;
        Ok((pick_second, risk, r1 + r2, report.leq_count, report.updates))
    })?;

    let mut rows = Vec::new();
    let mut risks = Vec::with_capacity(trials.len());
    let mut triangle_ok = true;
    for (k, (second, risk, sum, leq, updates)) in trials.iter().enumerate() {
        let meta = json!({ "target": if *second { "c2" } else { "c1" } });
        let k = Some(k as u64);
        rows.push(ResultRow::new(ID, k, "robust_risk", *risk, meta.clone()));
        rows.push(ResultRow::new(
            ID,
            k,
            "leq_count",
            *leq as f64,
            meta.clone(),
        ));
        rows.push(ResultRow::new(ID, k, "updates", *updates as f64, meta));
        risks.push(*risk);
        triangle_ok &= *sum >= pair_risk;
    }
    audits.push(Audit::new(
        "triangle",
        triangle_ok,
        "R(h, c1) + R(h, c2) >= R(c1, c2) on every trial",
    ));

    let (mean, sigma) = mean_and_sigma(&risks);
    audits.push(Audit::new(
        "mean_risk_at_least_half",
        mean >= 0.5 - 3.0 * sigma,
        format!("mean = {mean:.4}, sigma = {sigma:.4}"),
    ));
    rows.push(ResultRow::new(
        ID,
        None,
        "pair_robust_risk",
        pair_risk,
        serde_json::Value::Null,
    ));
    rows.push(ResultRow::new(
        ID,
        None,
        "mean_robust_risk",
        mean,
        json!({ "sigma": sigma }),
    ));

    let summary = BTreeMap::from([
        ("pair_robust_risk".to_string(), pair_risk),
        ("mean_robust_risk".to_string(), mean),
        ("sigma".to_string(), sigma),
        ("trials".to_string(), risks.len() as f64),
    ]);
    Ok(ExperimentOutput::new(
        ExperimentConfig::Separation(config.clone()),
        summary,
        audits,
        rows,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_equal_rho_refused() {
        assert!(run_separation_demo(&SeparationConfig::new(5, 2, 2, 10, 0)).is_err());
        assert!(run_separation_demo(&SeparationConfig::new(5, 5, 1, 10, 0)).is_err());
    }

    #[test]
    fn small_run() {
        let out = run_separation_demo(&SeparationConfig::new(5, 2, 1, 200, 1)).unwrap();
        assert!(out.audit_ok, "{:?}", out.audits);
        assert_eq!(out.summary["pair_robust_risk"], 1.0);
        // The learner's output is zero on the ball, so its risk is 1 against
        // c1 and 0 against c2.
        for row in out.rows.iter().filter(|r| r.metric == "robust_risk") {
            let c1 = row.metadata.contains("\"c1\"");
            assert_eq!(row.value, if c1 { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn larger_instance() {
        let out = run_separation_demo(&SeparationConfig::new(8, 3, 2, 50, 2)).unwrap();
        assert!(out.audit_ok);
        assert_eq!(out.summary["pair_robust_risk"], 1.0);
    }

    #[test]
    fn reproducible() {
        let cfg = SeparationConfig::new(5, 2, 1, 30, 9);
        assert_eq!(
            run_separation_demo(&cfg).unwrap().rows,
            run_separation_demo(&cfg).unwrap().rows
        );
    }
}
