//! Standard Optimal Algorithm over an explicit finite class.

use crate::complexity::{ExplicitClass, LittlestoneSolver, VersionSpace};
use crate::error::{Error, Result};
use crate::learners::{distinct_points, round_robin, Diagnostics, LearnerReport, OnlineLearner, Step};
use crate::model::{Concept, Point, TruthTable};
use crate::oracle::OracleSession;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SoaConfig {
    /// Update cap; `None` means `4 · max(Lit, 1)`.
    pub cap: Option<u64>,
}

struct Soa<'a> {
    solver: LittlestoneSolver<'a>,
    version_space: VersionSpace,
    hypothesis: Concept,
}

impl Soa<'_> {
    fn refresh(&mut self) -> Result<()> {
        let n = self.solver.class().dim();
        let mut table = vec![false; 1 << n];
        for (x, slot) in table.iter_mut().enumerate() {
            *slot = self.solver.predict(&self.version_space, x as u32)?;
        }
        self.hypothesis = TruthTable::from_fn(n, |x| table[x as usize])?.into();
        Ok(())
    }
}

impl OnlineLearner for Soa<'_> {
    fn hypothesis(&self) -> &Concept {
        &self.hypothesis
    }

    fn update(&mut self, z: &Point, label: bool) -> Result<Step> {
        let x = z.as_bits().expect("boolean session").bits();
        let (v0, v1) = self.solver.split_at(&self.version_space, x)?;
        self.version_space = if label { v1 } else { v0 };
        if self.version_space.is_empty() {
            return Err(Error::TargetOutsideClass("version space became empty".into()));
        }
        self.refresh()?;
        Ok(Step::Continue)
    }
}

/// Draws `m` examples and runs the SOA on LEQ counterexamples, round-robin
/// over the sample. Predictions follow the sub-version-space with the larger
/// Littlestone dimension, ties to 1.
pub fn learn_soa_leq(
    session: &mut OracleSession,
    m: usize,
    class: &ExplicitClass,
    config: &SoaConfig,
) -> Result<LearnerReport> {
    if class.dim() != session.dim() {
        return Err(Error::DimensionMismatch {
            expected: session.dim(),
            found: class.dim(),
        });
    }
    if !class.is_full_cube() || class.is_empty() {
        return Err(Error::InvalidParameter("SOA needs a nonempty class over the full cube".into()));
    }
    let mut solver = LittlestoneSolver::new(class)?;
    let version_space = VersionSpace::full(class);
    let littlestone = solver.lit(&version_space)?;
    let cap = config.cap.unwrap_or(4 * littlestone.max(1) as u64);
    let mut learner = Soa {
        solver,
        version_space,
        hypothesis: TruthTable::from_fn(class.dim(), |_| true)?.into(),
    };
    learner.refresh()?;
    let sample = session.ex_draw(m)?;
    let points = distinct_points(&sample.points);
    let stats = round_robin(session, &points, &mut learner, cap)?;
    let diagnostics = Diagnostics::Soa {
        class_size: class.len(),
        littlestone,
        max_visit_queries: stats.visit_queries.iter().copied().max().unwrap_or(0),
        visit_queries: stats.visit_queries.clone(),
    };
    Ok(LearnerReport::new(session, learner.hypothesis, m, &stats, diagnostics))
}
