//! Exact robust-risk table over (pair, ρ) with triangle and monotonicity
//! audit columns.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{require, Audit, ExperimentConfig, ExperimentOutput, OutputPaths, ResultRow};
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::model::{Concept, Conjunction, Domain, MonotoneConjunction};
use crate::risk::{robust_risk_profile, EXACT_MAX_DIM};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PairSpec {
    /// `x1 ∧ … ∧ xl` against `x(l+1) ∧ … ∧ x(2l)`.
    DisjointConjunctions { length: usize },
    /// `x1 ∧ … ∧ xl` against itself.
    Identical { length: usize },
    Explicit {
        label: String,
        h: Concept,
        c: Concept,
    },
}

impl PairSpec {
    pub fn label(&self) -> String {
        match self {
            Self::DisjointConjunctions { length } => format!("disjoint-conjunctions-{length}"),
            Self::Identical { length } => format!("identical-{length}"),
            Self::Explicit { label, .. } => label.clone(),
        }
    }

    pub fn build(&self, n: usize) -> Result<(Concept, Concept)> {
        match *self {
            Self::DisjointConjunctions { length } => {
                if 2 * length > n {
                    return Err(Error::InvalidParameter(format!(
                        "two disjoint length-{length} conjunctions need n >= {}",
                        2 * length
                    )));
                }
                Ok((
                    MonotoneConjunction::prefix(n, length)?.into(),
                    MonotoneConjunction::new(n, length + 1..=2 * length)?.into(),
                ))
            }
            Self::Identical { length } => {
                let c: Concept = MonotoneConjunction::prefix(n, length)?.into();
                Ok((c.clone(), c))
            }
            Self::Explicit { ref h, ref c, .. } => {
                for f in [h, c] {
                    if f.dim() != n || f.domain() != Domain::Boolean {
                        return Err(Error::InvalidParameter(format!(
                            "pair concepts must be boolean on n = {n}"
                        )));
                    }
                }
                Ok((h.clone(), c.clone()))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiskTableConfig {
    pub n: usize,
    pub rhos: Vec<usize>,
    pub pairs: Vec<PairSpec>,
    pub seed: u64,
    /// Third function for the triangle column; the constant 0 when unset.
    #[serde(default)]
    pub pivot: Option<Concept>,
    /// Uniform on the cube when unset.
    #[serde(default)]
    pub distribution: Option<Distribution>,
    #[serde(default)]
    pub output: OutputPaths,
}

impl RiskTableConfig {
    pub fn new(n: usize, rhos: Vec<usize>, pairs: Vec<PairSpec>, seed: u64) -> Self {
        Self {
            n,
            rhos,
            pairs,
            seed,
            pivot: None,
            distribution: None,
            output: OutputPaths::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        require(self.n >= 1 && self.n <= EXACT_MAX_DIM, || {
            format!("exact mode needs 1 <= n <= {EXACT_MAX_DIM}")
        })?;
        require(!self.rhos.is_empty() && !self.pairs.is_empty(), || {
            "rhos and pairs must be nonempty".into()
        })?;
        require(self.rhos.iter().all(|&r| r <= self.n), || {
            "every rho must be <= n".into()
        })?;
        for p in &self.pairs {
            p.build(self.n)?;
        }
        if let Some(d) = &self.distribution {
            d.validate()?;
            require(d.domain() == Domain::Boolean && d.dim() == self.n, || {
                "distribution must live on the n-cube".into()
            })?;
        }
        Ok(())
    }
}

const ID: &str = "risk-table";

pub fn run_risk_table(config: &RiskTableConfig) -> Result<ExperimentOutput> {
    config.validate()?;
    let n = config.n;
    let d = match &config.distribution {
        Some(d) => d.clone(),
        None => Distribution::uniform(n)?,
    };
    let pivot = match &config.pivot {
        Some(p) => p.clone(),
        None => Conjunction::all_literals(n)?.into(),
    };
    let mut rhos = config.rhos.clone();
    rhos.sort_unstable();
    rhos.dedup();
    let max_rho = *rhos.last().expect("nonempty");

    let mut rows = Vec::new();
    let mut summary = BTreeMap::new();
    let mut triangle_ok = true;
    let mut monotone_ok = true;
    for (k, spec) in config.pairs.iter().enumerate() {
        let (h, c) = spec.build(n)?;
        let hc = robust_risk_profile(&h, &c, max_rho, &d)?;
        let hp = robust_risk_profile(&h, &pivot, max_rho, &d)?;
        let cp = robust_risk_profile(&c, &pivot, max_rho, &d)?;
        let label = spec.label();
        let mut prev: Option<f64> = None;
        for &rho in &rhos {
            let value = hc[rho];
            let slack = hp[rho] + cp[rho] - value;
            let monotone = prev.is_none_or(|p| value >= p);
            triangle_ok &= slack >= 0.0;
            monotone_ok &= monotone;
            prev = Some(value);
            let meta = json!({ "pair": label, "rho": rho });
            let t = Some(k as u64);
            rows.push(ResultRow::new(ID, t, "robust_risk", value, meta.clone()));
            rows.push(ResultRow::new(ID, t, "triangle_slack", slack, meta.clone()));
            rows.push(ResultRow::new(
                ID,
                t,
                "monotone",
                monotone as u8 as f64,
                meta,
            ));
            summary.insert(format!("{label}[rho={rho}]"), value);
        }
    }
    let audits = vec![
        Audit::new(
            "triangle",
            triangle_ok,
            "R(h, c) <= R(h, g) + R(c, g) for the pivot g",
        ),
        Audit::new(
            "monotone_in_rho",
            monotone_ok,
            "R_rho(h, c) nondecreasing in rho",
        ),
    ];
    Ok(ExperimentOutput::new(
        ExperimentConfig::RiskTable(config.clone()),
        summary,
        audits,
        rows,
    ))
}
