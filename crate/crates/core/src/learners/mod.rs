//! Robust ERM learners driven by EX and λ-LEQ.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{Concept, Point};
use crate::oracle::{LeqResponse, OracleSession};

pub mod conjunction;
pub mod perceptron;
pub mod soa;
pub mod winnow;

pub use conjunction::learn_conjunction_leq;
pub use perceptron::{learn_perceptron_leq, PerceptronConfig};
pub use soa::{learn_soa_leq, SoaConfig};
pub use winnow::{learn_winnow_leq, WinnowConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    RobustlyConsistent,
    BudgetExhausted,
}

/// Learner-specific accounting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "learner", rename_all = "snake_case")]
pub enum Diagnostics {
    Conjunction {
        literals_left: u32,
    },
    Winnow {
        alpha: f64,
        theta: f64,
        mistake_bound: u64,
        cap: u64,
        weights: Vec<f64>,
    },
    Perceptron {
        /// Smallest margin of a counterexample w.r.t. the unit target normal.
        measured_margin: Option<f64>,
        /// Largest norm of a counterexample.
        measured_radius: Option<f64>,
        /// `⌈(B + ρ)² / γ′²⌉` when a positive margin was measured.
        update_bound: Option<u64>,
        cap: u64,
        offending_point: Option<Vec<f64>>,
    },
    Soa {
        class_size: usize,
        littlestone: usize,
        max_visit_queries: u64,
        visit_queries: Vec<u64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerReport {
    pub hypothesis: Concept,
    pub m: usize,
    pub ex_count: u64,
    pub lmq_count: u64,
    pub leq_count: u64,
    pub updates: u64,
    pub passes: u64,
    pub terminated: Termination,
    pub diagnostics: Diagnostics,
}

impl LearnerReport {
    pub(crate) fn new(
        session: &OracleSession,
        hypothesis: Concept,
        m: usize,
        stats: &RunStats,
        diagnostics: Diagnostics,
    ) -> Self {
        let t = session.transcript();
        Self {
            hypothesis,
            m,
            ex_count: t.ex_count(),
            lmq_count: t.lmq_count(),
            leq_count: t.leq_count(),
            updates: stats.updates,
            passes: stats.passes,
            terminated: stats.terminated,
            diagnostics,
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.terminated == Termination::RobustlyConsistent
    }
}

/// Distinct sample points in first-seen order.
pub(crate) fn distinct_points(sample: &[(Point, bool)]) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    for (x, _) in sample {
        if !out.contains(x) {
            out.push(x.clone());
        }
    }
    out
}

pub(crate) enum Step {
    Continue,
    Stop,
}

/// An online learner fed with labelled counterexamples.
pub(crate) trait OnlineLearner {
    fn hypothesis(&self) -> &Concept;
    fn update(&mut self, z: &Point, label: bool) -> Result<Step>;
}

#[derive(Debug, Clone)]
pub(crate) struct RunStats {
    pub updates: u64,
    pub passes: u64,
    pub terminated: Termination,
    /// Queries spent on each point during its most expensive visit.
    pub visit_queries: Vec<u64>,
}

/// Visits the points round-robin, querying each until it agrees; repeats
/// until a full pass produces no counterexample or `cap` updates are spent.
pub(crate) fn round_robin(
    session: &mut OracleSession,
    points: &[Point],
    learner: &mut impl OnlineLearner,
    cap: u64,
) -> Result<RunStats> {
    let mut stats = RunStats {
        updates: 0,
        passes: 0,
        terminated: Termination::RobustlyConsistent,
        visit_queries: vec![0; points.len()],
    };
    loop {
        stats.passes += 1;
        let mut pass_updates = 0;
        for (i, x) in points.iter().enumerate() {
            let mut visit = 0;
            loop {
                visit += 1;
                let z = match session.leq_query(learner.hypothesis(), x)? {
                    LeqResponse::Agree => break,
                    LeqResponse::Counterexample { z } => z,
                };
                if stats.updates >= cap {
                    stats.terminated = Termination::BudgetExhausted;
                    stats.visit_queries[i] = stats.visit_queries[i].max(visit);
                    return Ok(stats);
                }
                let label = !learner.hypothesis().eval(&z)?;
                stats.updates += 1;
                pass_updates += 1;
                if let Step::Stop = learner.update(&z, label)? {
                    stats.terminated = Termination::BudgetExhausted;
                    stats.visit_queries[i] = stats.visit_queries[i].max(visit);
                    return Ok(stats);
                }
            }
            stats.visit_queries[i] = stats.visit_queries[i].max(visit);
        }
        if pass_updates == 0 {
            return Ok(stats);
        }
    }
}

#[cfg(test)]
pub(crate) mod test_util {
    use crate::model::{Concept, Point};
    use crate::risk::pointwise_robust_loss;

    use super::LearnerReport;

    /// Brute-force robust consistency on the sample.
    pub fn robustly_consistent(report: &LearnerReport, target: &Concept, points: &[Point], rho: f64) -> bool {
        points
            .iter()
            .all(|x| !pointwise_robust_loss(&report.hypothesis, target, x, rho).unwrap())
    }
}
