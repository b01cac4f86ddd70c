//! Config-driven experiment runners with CSV row output and JSON summaries.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::PathBuf;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod complexity_sweep;
pub mod learning_curve;
pub mod lmq_lb;
pub mod risk_table;
pub mod separation;

pub use complexity_sweep::{run_complexity_sweep, ClassSpec, ComplexitySweepConfig};
pub use learning_curve::{run_learning_curve, LearnerKind, LearningCurveConfig};
pub use lmq_lb::{run_lmq_lowerbound_demo, LmqLowerBoundConfig, LmqStrategy};
pub use risk_table::{run_risk_table, PairSpec, RiskTableConfig};
pub use separation::{run_separation_demo, SeparationConfig};

/// One measurement. `trial` is empty for aggregate rows; `metadata` is a
/// JSON object encoded as a string so the CSV schema is the same for every
/// experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub experiment: String,
    pub trial: Option<u64>,
    pub metric: String,
    pub value: f64,
    pub metadata: String,
}

impl ResultRow {
    pub fn new(
        experiment: &str,
        trial: Option<u64>,
        metric: &str,
        value: f64,
        metadata: serde_json::Value,
    ) -> Self {
        Self {
            experiment: experiment.to_string(),
            trial,
            metric: metric.to_string(),
            value,
            metadata: if metadata.is_null() {
                String::new()
            } else {
                metadata.to_string()
            },
        }
    }
}

pub fn write_csv(rows: &[ResultRow], w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for row in rows {
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_csv(r: impl Read) -> Result<Vec<ResultRow>> {
    csv::Reader::from_reader(r)
        .deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExperimentConfig {
    Separation(SeparationConfig),
    LmqLowerBound(LmqLowerBoundConfig),
    LearningCurve(LearningCurveConfig),
    ComplexitySweep(ComplexitySweepConfig),
    RiskTable(RiskTableConfig),
}

impl ExperimentConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Separation(c) => c.validate(),
            Self::LmqLowerBound(c) => c.validate(),
            Self::LearningCurve(c) => c.validate(),
            Self::ComplexitySweep(c) => c.validate(),
            Self::RiskTable(c) => c.validate(),
        }
    }

    pub fn output(&self) -> &OutputPaths {
        match self {
            Self::Separation(c) => &c.output,
            Self::LmqLowerBound(c) => &c.output,
            Self::LearningCurve(c) => &c.output,
            Self::ComplexitySweep(c) => &c.output,
            Self::RiskTable(c) => &c.output,
        }
    }

    pub fn run(&self) -> Result<ExperimentOutput> {
        match self {
            Self::Separation(c) => run_separation_demo(c),
            Self::LmqLowerBound(c) => run_lmq_lowerbound_demo(c),
            Self::LearningCurve(c) => run_learning_curve(c),
            Self::ComplexitySweep(c) => run_complexity_sweep(c),
            Self::RiskTable(c) => run_risk_table(c),
        }
    }
}

/// A checked invariant of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Audit {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

impl Audit {
    pub fn new(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            ok,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutput {
    pub experiment: String,
    pub config: ExperimentConfig,
    pub summary: BTreeMap<String, f64>,
    pub audits: Vec<Audit>,
    pub audit_ok: bool,
    /// Written to CSV, left out of the JSON summary.
    #[serde(skip)]
    pub rows: Vec<ResultRow>,
}

impl ExperimentOutput {
    pub(crate) fn new(
        config: ExperimentConfig,
        summary: BTreeMap<String, f64>,
        audits: Vec<Audit>,
        rows: Vec<ResultRow>,
    ) -> Self {
        let experiment = experiment_id(&config).to_string();
        Self {
            experiment,
            config,
            audit_ok: audits.iter().all(|a| a.ok),
            summary,
            audits,
            rows,
        }
    }

    pub fn write_summary_json(&self, w: impl Write) -> Result<()> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }

    /// Writes the CSV rows and JSON summary to the configured paths.
    pub fn write_outputs(&self, paths: &OutputPaths) -> Result<()> {
        if let Some(p) = &paths.csv {
            write_csv(&self.rows, std::fs::File::create(p)?)?;
        }
        if let Some(p) = &paths.json {
            self.write_summary_json(std::fs::File::create(p)?)?;
        }
        Ok(())
    }
}

pub fn experiment_id(config: &ExperimentConfig) -> &'static str {
    match config {
        ExperimentConfig::Separation(_) => "separation",
        ExperimentConfig::LmqLowerBound(_) => "lmq-lower-bound",
        ExperimentConfig::LearningCurve(_) => "learning-curve",
        ExperimentConfig::ComplexitySweep(_) => "complexity-sweep",
        ExperimentConfig::RiskTable(_) => "risk-table",
    }
}

/// Seed of trial `k`, from stream `k` of the experiment seed.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    stream_rng(seed, trial).next_u64()
}

/// Stream reserved for target and strategy randomness, away from the
/// streams the oracle samplers use for the same seed.
pub const TARGET_STREAM: u64 = 1 << 32;

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs `f` on every trial index in parallel; results come back in trial order.
pub(crate) fn par_trials<T: Send>(
    trials: u64,
    f: impl Fn(u64) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    (0..trials).into_par_iter().map(&f).collect()
}

/// Sample mean and standard error of the mean.
pub fn mean_and_sigma(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// `sqrt(p(1 − p)/N)`.
pub fn binomial_sigma(p: f64, trials: usize) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

pub(crate) fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg()))
    }
}
