//! (class, n, ρ, VC, RVC, Lit) rows for small explicit classes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{require, Audit, ExperimentConfig, ExperimentOutput, OutputPaths, ResultRow};
use crate::complexity::{littlestone_dim, rvc_dim, vc_dim, ExplicitClass};
use crate::error::Result;
use crate::model::{low_mask, Concept, Conjunction};

/// Largest `n` accepted by the sweep.
pub const MAX_SWEEP_DIM: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum ClassSpec {
    Conjunctions { n: usize },
    MonotoneConjunctions { n: usize },
    BoundedLtfs { n: usize, budget: u64 },
}

impl ClassSpec {
    pub fn dim(&self) -> usize {
        match *self {
            Self::Conjunctions { n }
            | Self::MonotoneConjunctions { n }
            | Self::BoundedLtfs { n, .. } => n,
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            Self::Conjunctions { n } => format!("conjunctions(n={n})"),
            Self::MonotoneConjunctions { n } => format!("monotone-conjunctions(n={n})"),
            Self::BoundedLtfs { n, budget } => format!("bounded-ltfs(n={n},W={budget})"),
        }
    }

    pub fn build(&self) -> Result<ExplicitClass> {
        match *self {
            Self::Conjunctions { n } => ExplicitClass::all_conjunctions(n),
            Self::MonotoneConjunctions { n } => {
                let cs: Vec<Concept> = (0..=low_mask(n))
                    .map(|m| Conjunction::from_masks(n, m, 0).map(Concept::from))
                    .collect::<Result<_>>()?;
                ExplicitClass::from_concepts(n, &cs)
            }
            Self::BoundedLtfs { n, budget } => ExplicitClass::all_bounded_ltfs(n, budget),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexitySweepConfig {
    pub classes: Vec<ClassSpec>,
    /// Radii for the RVC column; every value `<= n` of each class is used.
    pub rhos: Vec<usize>,
    pub seed: u64,
    #[serde(default)]
    pub output: OutputPaths,
}

impl ComplexitySweepConfig {
    pub fn new(classes: Vec<ClassSpec>, rhos: Vec<usize>, seed: u64) -> Self {
        Self {
            classes,
            rhos,
            seed,
            output: OutputPaths::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        require(!self.classes.is_empty() && !self.rhos.is_empty(), || {
            "classes and rhos must be nonempty".into()
        })?;
        for c in &self.classes {
            let n = c.dim();
            require((1..=MAX_SWEEP_DIM).contains(&n), || {
                format!("n = {n} outside 1..={MAX_SWEEP_DIM}")
            })?;
        }
        Ok(())
    }
}

const ID: &str = "complexity-sweep";

pub fn run_complexity_sweep(config: &ComplexitySweepConfig) -> Result<ExperimentOutput> {
    config.validate()?;
    let mut rows = Vec::new();
    let mut summary = BTreeMap::new();
    let mut vc_le_lit = true;
    let mut lit_le_log = true;
    let mut collapse = true;
    for (k, spec) in config.classes.iter().enumerate() {
        let class = spec.build()?;
        let n = class.dim();
        let desc = spec.descriptor();
        let vc = vc_dim(&class)?;
        let lit = littlestone_dim(&class)?;
        vc_le_lit &= vc <= lit;
        lit_le_log &= lit <= (class.len() as f64).log2().floor() as usize;
        collapse &= rvc_dim(&class, &class, n)? <= 1;
        let mut rhos: Vec<usize> = config.rhos.iter().copied().filter(|&r| r <= n).collect();
        rhos.sort_unstable();
        rhos.dedup();
        for rho in rhos {
            let rvc = rvc_dim(&class, &class, rho)?;
            let meta = json!({ "class": desc, "n": n, "rho": rho, "size": class.len() });
            let t = Some(k as u64);
            rows.push(ResultRow::new(ID, t, "vc", vc as f64, meta.clone()));
            rows.push(ResultRow::new(ID, t, "rvc", rvc as f64, meta.clone()));
            rows.push(ResultRow::new(ID, t, "lit", lit as f64, meta));
            summary.insert(format!("rvc[{desc},rho={rho}]"), rvc as f64);
        }
        summary.insert(format!("vc[{desc}]"), vc as f64);
        summary.insert(format!("lit[{desc}]"), lit as f64);
    }
    let audits = vec![
        Audit::new("vc_le_lit", vc_le_lit, "VC <= Lit"),
        Audit::new("lit_le_log_size", lit_le_log, "Lit <= floor(log2 |C|)"),
        Audit::new("rvc_at_diameter", collapse, "rvc(C, C, n) <= 1"),
    ];
    Ok(ExperimentOutput::new(
        ExperimentConfig::ComplexitySweep(config.clone()),
        summary,
        audits,
        rows,
    ))
}

/// Flattens sweep rows into `(class, n, rho, VC, RVC, Lit)` records.
pub fn sweep_table(rows: &[ResultRow]) -> Vec<(String, usize, usize, usize, usize, usize)> {
    let mut out: BTreeMap<(u64, usize), (String, usize, [usize; 3])> = BTreeMap::new();
    for row in rows.iter().filter(|r| r.experiment == ID) {
        let Ok(meta) = serde_json::from_str::<serde_json::Value>(&row.metadata) else {
            continue;
        };
        let rho = meta["rho"].as_u64().unwrap_or(0) as usize;
        let entry = out.entry((row.trial.unwrap_or(0), rho)).or_insert_with(|| {
            (
                meta["class"].as_str().unwrap_or("").to_string(),
                meta["n"].as_u64().unwrap_or(0) as usize,
                [0; 3],
            )
        });
        let slot = match row.metric.as_str() {
            "vc" => 0,
            "rvc" => 1,
            "lit" => 2,
            _ => continue,
        };
        entry.2[slot] = row.value as usize;
    }
    out.into_iter()
        .map(|((_, rho), (class, n, [vc, rvc, lit]))| (class, n, rho, vc, rvc, lit))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjunction_sweep_values() {
        let cfg =
            ComplexitySweepConfig::new(vec![ClassSpec::Conjunctions { n: 3 }], vec![0, 1, 2, 3], 0);
        let out = run_complexity_sweep(&cfg).unwrap();
        assert!(out.audit_ok);
        let table = sweep_table(&out.rows);
        let rvc: Vec<usize> = table.iter().map(|r| r.4).collect();
        assert_eq!(rvc, vec![6, 4, 2, 1]);
        assert!(table.iter().all(|r| r.3 == 3 && r.5 == 4));
    }

    #[test]
    fn monotone_class_size() {
        let class = ClassSpec::MonotoneConjunctions { n: 4 }.build().unwrap();
        assert_eq!(class.len(), 16);
        let out = run_complexity_sweep(&ComplexitySweepConfig::new(
            vec![
                ClassSpec::MonotoneConjunctions { n: 3 },
                ClassSpec::BoundedLtfs { n: 2, budget: 2 },
            ],
            vec![0, 1, 9],
            0,
        ))
        .unwrap();
        assert!(out.audit_ok, "{:?}", out.audits);
    }
}
