//! Winnow on the `2n`-dimensional encoding `(x, 1 − x)`.
//!
//! Promotion multiplies the weights of active features by `α`, demotion
//! divides them by `α`; weights start at 1 and the threshold is `θ = n`, so
//! the initial hypothesis is the constant 1. For a target with weight budget
//! `W` the default is `α = 1 + 1/(2W)`: an integer LTF is `1/W`-separated on
//! the encoding, and `α = 2` can cycle on thresholds such as
//! `¬x1 ∧ ¬x2 ∧ ¬x3 ∧ ¬x4`. The documented mistake bound is
//! `M = ⌈8 W² (log₂ n + 1)⌉` and the default update cap is `4M`.

use crate::error::{Error, Result};
use crate::learners::{distinct_points, round_robin, Diagnostics, LearnerReport, OnlineLearner, Step};
use crate::model::{Concept, Point, TruthTable};
use crate::oracle::OracleSession;

/// Largest dimension for which the hypothesis truth table is materialized.
pub const MAX_WINNOW_DIM: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct WinnowConfig {
    /// Weight budget `W` of the target class.
    pub budget: u64,
    pub alpha: f64,
    /// Update cap; `None` means `4M`.
    pub cap: Option<u64>,
}

impl WinnowConfig {
    pub fn new(budget: u64) -> Self {
        Self {
            budget,
            alpha: 1.0 + 1.0 / (2.0 * budget.max(1) as f64),
            cap: None,
        }
    }
}

/// `⌈8 W² (log₂ n + 1)⌉`.
pub fn winnow_mistake_bound(n: usize, budget: u64) -> u64 {
    let w = budget as f64;
    (8.0 * w * w * ((n as f64).log2() + 1.0)).ceil() as u64
}

struct Winnow {
    n: usize,
    alpha: f64,
    theta: f64,
    /// Weights of `x_i` followed by weights of `1 − x_i`.
    weights: Vec<f64>,
    hypothesis: Concept,
}

impl Winnow {
    fn new(n: usize, alpha: f64) -> Result<Self> {
        let mut w = Self {
            n,
            alpha,
            theta: n as f64,
            weights: vec![1.0; 2 * n],
            hypothesis: Concept::TruthTable(TruthTable::from_fn(n, |_| true)?),
        };
        w.refresh()?;
        Ok(w)
    }

    fn activation(&self, x: u32) -> f64 {
        (0..self.n)
            .map(|i| {
                if x >> i & 1 == 1 {
                    self.weights[i]
                } else {
                    self.weights[self.n + i]
                }
            })
            .sum()
    }

    fn refresh(&mut self) -> Result<()> {
        self.hypothesis = Concept::TruthTable(TruthTable::from_fn(self.n, |x| self.activation(x) >= self.theta)?);
        Ok(())
    }
}

impl OnlineLearner for Winnow {
    fn hypothesis(&self) -> &Concept {
        &self.hypothesis
    }

    fn update(&mut self, z: &Point, label: bool) -> Result<Step> {
        let x = z.as_bits().expect("boolean session").bits();
        let factor = if label { self.alpha } else { 1.0 / self.alpha };
        for i in 0..self.n {
            let j = if x >> i & 1 == 1 { i } else { self.n + i };
            self.weights[j] *= factor;
        }
        self.refresh()?;
        Ok(Step::Continue)
    }
}

/// Draws `m` examples and runs Winnow on LEQ counterexamples, round-robin
/// over the sample, until every point agrees or the update cap is spent.
pub fn learn_winnow_leq(session: &mut OracleSession, m: usize, config: &WinnowConfig) -> Result<LearnerReport> {
    let n = session.dim();
    if n > MAX_WINNOW_DIM {
        return Err(Error::UnsupportedDimension(n));
    }
    if !(config.alpha > 1.0) {
        return Err(Error::InvalidParameter(format!("alpha = {} must exceed 1", config.alpha)));
    }
    let mistake_bound = winnow_mistake_bound(n, config.budget);
    let cap = config.cap.unwrap_or(4 * mistake_bound);
    let sample = session.ex_draw(m)?;
    let points = distinct_points(&sample.points);
    let mut learner = Winnow::new(n, config.alpha)?;
    let stats = round_robin(session, &points, &mut learner, cap)?;
    let diagnostics = Diagnostics::Winnow {
        alpha: config.alpha,
        theta: learner.theta,
        mistake_bound,
        cap,
        weights: learner.weights.clone(),
    };
    Ok(LearnerReport::new(session, learner.hypothesis, m, &stats, diagnostics))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::Distribution;
    use crate::learners::test_util::robustly_consistent;
    use crate::learners::Termination;
    use crate::model::BoundedIntLtf;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Random LTF with `Σ|w| + |b| ≤ W`.
    pub(crate) fn random_ltf(rng: &mut ChaCha8Rng, n: usize, budget: u64) -> BoundedIntLtf {
        let mut weights = vec![0i64; n];
        let mut left = budget as i64;
        let mut bias = 0;
        while left > 0 {
            let v = if rng.random_bool(0.5) { 1 } else { -1 };
            match rng.random_range(0..=n) {
                k if k == n => bias += v,
                k => weights[k] += v,
            }
            left -= 1;
        }
        BoundedIntLtf::new(weights, bias, budget).unwrap()
    }

    #[test]
    fn single_variable_target() {
        let target = BoundedIntLtf::new(vec![2, 0, 0, 0, 0, 0, 0, 0], -1, 3).unwrap();
        let mut s = OracleSession::new(target.clone().into(), Distribution::uniform(8).unwrap(), 1.0, 1.0, 4).unwrap();
        let r = learn_winnow_leq(&mut s, 40, &WinnowConfig::new(3)).unwrap();
        assert_eq!(r.terminated, Termination::RobustlyConsistent);
        assert!(r.updates <= winnow_mistake_bound(8, 3) * 4);
        assert!(robustly_consistent(&r, &target.into(), s.drawn_points(), 1.0));
    }

    #[test]
    fn constant_true_target_needs_no_updates() {
        let target = BoundedIntLtf::new(vec![0; 5], 1, 1).unwrap();
        let mut s = OracleSession::new(target.into(), Distribution::uniform(5).unwrap(), 2.0, 2.0, 1).unwrap();
        let r = learn_winnow_leq(&mut s, 10, &WinnowConfig::new(1)).unwrap();
        assert_eq!(r.updates, 0);
        assert_eq!(r.leq_count as usize, s.drawn_points().len());
    }

    #[test]
    fn random_targets_within_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for seed in 0..20 {
            let target = random_ltf(&mut rng, 10, 4);
            let mut s = OracleSession::new(target.clone().into(), Distribution::uniform(10).unwrap(), 1.0, 1.0, seed).unwrap();
            let r = learn_winnow_leq(&mut s, 60, &WinnowConfig::new(4)).unwrap();
            assert!(r.is_consistent(), "seed {seed}: {:?}", target);
            assert!(r.updates <= winnow_mistake_bound(10, 4));
            assert!(robustly_consistent(&r, &target.into(), s.drawn_points(), 1.0));
        }
    }

    #[test]
    fn alpha_two_can_cycle() {
        let target = BoundedIntLtf::new(vec![0, 0, 0, -1, -1, 0, -1, 0, 0, -1], 0, 4).unwrap();
        let run = |alpha: f64| {
            let mut s = OracleSession::new(target.clone().into(), Distribution::uniform(10).unwrap(), 1.0, 1.0, 6).unwrap();
            let mut cfg = WinnowConfig::new(4);
            cfg.alpha = alpha;
            learn_winnow_leq(&mut s, 60, &cfg).unwrap()
        };
        assert_eq!(run(2.0).terminated, Termination::BudgetExhausted);
        assert!(run(WinnowConfig::new(4).alpha).is_consistent());
    }

    #[test]
    fn cap_is_enforced() {
        let target = BoundedIntLtf::new(vec![1, 1, 1, 1, 1, 1], -6, 12).unwrap();
        let mut s = OracleSession::new(target.into(), Distribution::uniform(6).unwrap(), 2.0, 2.0, 9).unwrap();
        let mut cfg = WinnowConfig::new(12);
        cfg.cap = Some(1);
        let r = learn_winnow_leq(&mut s, 30, &cfg).unwrap();
        assert_eq!(r.terminated, Termination::BudgetExhausted);
        assert_eq!(r.updates, 1);
    }
}
