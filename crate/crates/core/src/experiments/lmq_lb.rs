//! LMQ lower-bound demo under the uniform distribution.
//!
//! Each trial fixes disjoint supports `I1`, `I2` of size `2ρ`, random literal
//! signs for `c1` on `I1` and `c2` on `I2`, and a target `c ∈ {c1, c2}`. The
//! learner knows the supports but not the signs; it sees `2^ρ` examples and
//! issues `2^(ρ−1)` LMQs. Its candidates are the `2^(2ρ+1)` sign patterns
//! still consistent with every observed label.

use std::collections::BTreeMap;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{
    binomial_sigma, mean_and_sigma, par_trials, require, stream_rng, trial_seed, Audit,
    ExperimentConfig, ExperimentOutput, OutputPaths, ResultRow, TARGET_STREAM,
};
use crate::distribution::Distribution;
use crate::error::Result;
use crate::model::{BitPoint, Concept, Conjunction, TruthTable};
use crate::oracle::OracleSession;
use crate::risk::{robust_risk_exact, EXACT_MAX_DIM};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LmqStrategy {
    /// Output a surviving candidate chosen uniformly.
    ConsistentGuess,
    /// Output the pointwise majority of the surviving candidates.
    MajorityVote,
}

impl LmqStrategy {
    pub fn name(self) -> &'static str {
        match self {
            Self::ConsistentGuess => "consistent-guess",
            Self::MajorityVote => "majority-vote",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LmqLowerBoundConfig {
    pub n: usize,
    pub rho: usize,
    /// LMQ radius; `None` means `n`.
    #[serde(default)]
    pub lambda: Option<usize>,
    pub trials: u64,
    pub seed: u64,
    #[serde(default = "all_strategies")]
    pub strategies: Vec<LmqStrategy>,
    #[serde(default)]
    pub output: OutputPaths,
}

fn all_strategies() -> Vec<LmqStrategy> {
    vec![LmqStrategy::ConsistentGuess, LmqStrategy::MajorityVote]
}

impl LmqLowerBoundConfig {
    pub fn new(n: usize, rho: usize, trials: u64, seed: u64) -> Self {
        Self {
            n,
            rho,
            lambda: None,
            trials,
            seed,
            strategies: all_strategies(),
            output: OutputPaths::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        require(self.rho >= 2 && 4 * self.rho <= self.n, || {
            format!(
                "need 2 <= rho <= n/4, got rho = {} and n = {}",
                self.rho, self.n
            )
        })?;
        require(self.n <= EXACT_MAX_DIM, || {
            format!("n = {} exceeds the exact-risk limit", self.n)
        })?;
        require(self.lambda.is_none_or(|l| l <= self.n), || {
            "lambda must not exceed n".into()
        })?;
        require(self.trials > 0, || "trials must be positive".into())?;
        require(!self.strategies.is_empty(), || {
            "no strategy selected".into()
        })
    }
}

/// `(2^{4ρ} − 2^{3ρ+1} − 2^{3ρ}) / 2^{4ρ} = 1 − 3·2^{−ρ}`.
pub fn consistent_pair_fraction(rho: usize) -> f64 {
    1.0 - 3.0 * 0.5f64.powi(rho as i32)
}

pub const RISK_FLOOR: f64 = 15.0 / 256.0;
pub const PAIR_RISK_FLOOR: f64 = 15.0 / 32.0;
pub const ALL_NEGATIVE_FLOOR: f64 = 0.25;

/// Every sign pattern on the support `mask`.
fn candidates_on(n: usize, mask: u32) -> Result<Vec<Conjunction>> {
    let mut out = Vec::new();
    let mut pos = 0u32;
    loop {
        out.push(Conjunction::from_masks(n, pos, mask & !pos)?);
        if pos == mask {
            break;
        }
        pos = (pos.wrapping_sub(mask)) & mask;
    }
    Ok(out)
}

/// The point of `B_λ(x)` closest to satisfying `k`, over sample points `x`.
fn probe(sample: &[u32], k: &Conjunction, lambda: usize) -> u32 {
    let wrong = |x: u32| (!x & k.pos_mask()) | (x & k.neg_mask());
    let x = *sample
        .iter()
        .min_by_key(|&&x| wrong(x).count_ones())
        .expect("nonempty sample");
    let mut fix = wrong(x);
    let mut z = x;
    for _ in 0..lambda {
        if fix == 0 {
            break;
        }
        let bit = fix & fix.wrapping_neg();
        z ^= bit;
        fix &= !bit;
    }
    z
}

fn majority_vote(n: usize, survivors: &[Conjunction]) -> Result<TruthTable> {
    let mut counts = vec![0u32; 1 << n];
    let full = crate::model::low_mask(n);
    for k in survivors {
        let free = full & !(k.pos_mask() | k.neg_mask());
        let mut sub = 0u32;
        loop {
            counts[(k.pos_mask() | sub) as usize] += 1;
            if sub == free {
                break;
            }
            sub = (sub.wrapping_sub(free)) & free;
        }
    }
    let half = survivors.len() as u32;
    TruthTable::from_fn(n, |x| 2 * counts[x as usize] > half)
}

struct TrialResult {
    target_second: bool,
    pair_risk: f64,
    /// Per strategy: all observed labels negative, robust risk, LMQs issued.
    runs: Vec<(bool, f64, u64)>,
}

fn run_trial(config: &LmqLowerBoundConfig, k: u64) -> Result<TrialResult> {
    let n = config.n;
    let rho = config.rho;
    let lambda = config.lambda.unwrap_or(n);
    let seed = trial_seed(config.seed, k);
    let mut rng = stream_rng(seed, TARGET_STREAM);
    let mut idx: Vec<u32> = (0..n as u32).collect();
    idx.shuffle(&mut rng);
    let i1 = idx[..2 * rho].iter().fold(0u32, |m, &i| m | 1 << i);
    let i2 = idx[2 * rho..4 * rho].iter().fold(0u32, |m, &i| m | 1 << i);
    let s1 = rng.random::<u32>() & i1;
    let s2 = rng.random::<u32>() & i2;
    let c1 = Conjunction::from_masks(n, s1, i1 & !s1)?;
    let c2 = Conjunction::from_masks(n, s2, i2 & !s2)?;
    let target_second = rng.random_bool(0.5);
    let target: Concept = if target_second {
        c2.clone()
    } else {
        c1.clone()
    }
    .into();
    let d = Distribution::uniform(n)?;
    let pair_risk = robust_risk_exact(&c1.into(), &c2.into(), rho, &d)?.value;

    let mut all = candidates_on(n, i1)?;
    all.extend(candidates_on(n, i2)?);
    let mut runs = Vec::with_capacity(config.strategies.len());
    for (j, strategy) in config.strategies.iter().enumerate() {
        let mut srng = stream_rng(seed, TARGET_STREAM + 1 + j as u64);
        let mut s = OracleSession::new(target.clone(), d.clone(), lambda as f64, rho as f64, seed)?;
        let sample = s.ex_draw(1 << rho)?;
        let mut all_negative = true;
        let mut survivors = all.clone();
        let mut xs = Vec::with_capacity(sample.len());
        for (x, label) in &sample.points {
            let x = x.as_bits().expect("boolean").bits();
            all_negative &= !label;
            survivors.retain(|c| c.eval_bits(x) == *label);
            xs.push(x);
        }
        for _ in 0..1u64 << (rho - 1) {
            let pick = survivors
                .choose(&mut srng)
                .expect("target survives")
                .clone();
            let z = probe(&xs, &pick, lambda);
            let label = s.lmq_query(&BitPoint::new(z, n)?.into())?;
            all_negative &= !label;
            survivors.retain(|c| c.eval_bits(z) == label);
        }
        let h: Concept = match strategy {
            LmqStrategy::ConsistentGuess => survivors
                .choose(&mut srng)
                .expect("target survives")
                .clone()
                .into(),
            LmqStrategy::MajorityVote => majority_vote(n, &survivors)?.into(),
        };
        let risk = robust_risk_exact(&h, &target, rho, &d)?.value;
        runs.push((all_negative, risk, s.transcript().lmq_count()));
    }
    Ok(TrialResult {
        target_second,
        pair_risk,
        runs,
    })
}

const ID: &str = "lmq-lower-bound";

pub fn run_lmq_lowerbound_demo(config: &LmqLowerBoundConfig) -> Result<ExperimentOutput> {
    config.validate()?;
    let results = par_trials(config.trials, |k| run_trial(config, k))?;
    let trials = results.len();

    let mut rows = Vec::new();
    let mut summary = BTreeMap::new();
    let mut audits = Vec::new();
    let pair_min = results
        .iter()
        .map(|r| r.pair_risk)
        .fold(f64::INFINITY, f64::min);
    audits.push(Audit::new(
        "pair_risk_floor",
        pair_min >= PAIR_RISK_FLOOR,
        format!("min R(c1, c2) = {pair_min:.6} vs 15/32"),
    ));
    for (k, r) in results.iter().enumerate() {
        let k = Some(k as u64);
        let target = if r.target_second { "c2" } else { "c1" };
        rows.push(ResultRow::new(
            ID,
            k,
            "pair_robust_risk",
            r.pair_risk,
            json!({ "target": target }),
        ));
        for (strategy, (neg, risk, lmq)) in config.strategies.iter().zip(&r.runs) {
            let meta = json!({ "strategy": strategy.name(), "target": target });
            rows.push(ResultRow::new(
                ID,
                k,
                "all_negative",
                *neg as u8 as f64,
                meta.clone(),
            ));
            rows.push(ResultRow::new(ID, k, "robust_risk", *risk, meta.clone()));
            rows.push(ResultRow::new(ID, k, "lmq_count", *lmq as f64, meta));
        }
    }
    for (j, strategy) in config.strategies.iter().enumerate() {
        let name = strategy.name();
        let neg = results.iter().filter(|r| r.runs[j].0).count() as f64 / trials as f64;
        let neg_sigma = binomial_sigma(neg, trials);
        let risks: Vec<f64> = results.iter().map(|r| r.runs[j].1).collect();
        let (mean, sigma) = mean_and_sigma(&risks);
        audits.push(Audit::new(
            &format!("all_negative_fraction[{name}]"),
            neg >= ALL_NEGATIVE_FLOOR - 3.0 * neg_sigma,
            format!("{neg:.4} (sigma {neg_sigma:.4}) vs 1/4"),
        ));
        audits.push(Audit::new(
            &format!("mean_robust_risk[{name}]"),
            mean >= RISK_FLOOR - 3.0 * sigma,
            format!("{mean:.4} (sigma {sigma:.4}) vs 15/256"),
        ));
        let meta = json!({ "strategy": name });
        rows.push(ResultRow::new(
            ID,
            None,
            "all_negative_fraction",
            neg,
            meta.clone(),
        ));
        rows.push(ResultRow::new(ID, None, "mean_robust_risk", mean, meta));
        summary.insert(format!("all_negative_fraction[{name}]"), neg);
        summary.insert(format!("all_negative_sigma[{name}]"), neg_sigma);
        summary.insert(format!("mean_robust_risk[{name}]"), mean);
        summary.insert(format!("risk_sigma[{name}]"), sigma);
    }
    summary.insert("min_pair_robust_risk".into(), pair_min);
    summary.insert(
        "consistent_pair_fraction_formula".into(),
        consistent_pair_fraction(config.rho),
    );
    summary.insert("examples".into(), (1u64 << config.rho) as f64);
    summary.insert("lmq_budget".into(), (1u64 << (config.rho - 1)) as f64);
    summary.insert("trials".into(), trials as f64);
    Ok(ExperimentOutput::new(
        ExperimentConfig::LmqLowerBound(config.clone()),
        summary,
        audits,
        rows,
    ))
}
