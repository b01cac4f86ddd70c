//! Additive Perceptron on ℓ2 LEQ counterexamples.
//!
//! Runs record the realized counterexample margin `γ′` (w.r.t. the unit
//! target normal) and radius `r′`, and report `⌈(B + ρ)²/γ′²⌉`.

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::learners::{distinct_points, round_robin, Diagnostics, LearnerReport, OnlineLearner, Step};
use crate::model::{dot, norm, Concept, Point, RealHalfspace};
use crate::oracle::OracleSession;

/// Default cap when no positive margin can be guaranteed (`γ ≤ ρ`).
pub const FALLBACK_CAP: u64 = 10_000;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PerceptronConfig {
    /// Learn an offset through an augmented constant coordinate.
    pub fit_bias: bool,
    /// Update cap; `None` means `4⌈(B + ρ)²/(γ − ρ)²⌉`, or [`FALLBACK_CAP`]
    /// when `γ ≤ ρ`.
    pub cap: Option<u64>,
    /// Support bound `B` and margin `γ`; read from a margin sampler when unset.
    pub bound: Option<f64>,
    pub margin: Option<f64>,
    /// Starting weights and offset; zero when unset.
    pub initial: Option<RealHalfspace>,
}

/// `⌈(B + ρ)² / γ²⌉`.
pub fn perceptron_update_bound(bound: f64, rho: f64, margin: f64) -> u64 {
    ((bound + rho).powi(2) / (margin * margin)).ceil() as u64
}

struct Perceptron {
    fit_bias: bool,
    w: Vec<f64>,
    b: f64,
    hypothesis: Concept,
    target_unit: Vec<f64>,
    target_offset: f64,
    min_margin: Option<f64>,
    max_radius: Option<f64>,
    offending: Option<Vec<f64>>,
}

impl Perceptron {
    fn refresh(&mut self) -> Result<()> {
        self.hypothesis = RealHalfspace::from_parts(self.w.clone(), self.b)?.into();
        Ok(())
    }
}

impl OnlineLearner for Perceptron {
    fn hypothesis(&self) -> &Concept {
        &self.hypothesis
    }

    fn update(&mut self, z: &Point, label: bool) -> Result<Step> {
        let z = z.as_real().expect("real session");
        let s = if label { 1.0 } else { -1.0 };
        let margin = s * (dot(&self.target_unit, z) + self.target_offset);
        let radius = if self.fit_bias { (norm(z).powi(2) + 1.0).sqrt() } else { norm(z) };
        self.min_margin = Some(self.min_margin.map_or(margin, |g| g.min(margin)));
        self.max_radius = Some(self.max_radius.map_or(radius, |r| r.max(radius)));
        if margin <= 0.0 {
            self.offending = Some(z.to_vec());
            return Ok(Step::Stop);
        }
        for (wi, zi) in self.w.iter_mut().zip(z) {
            *wi += s * zi;
        }
        if self.fit_bias {
            self.b += s;
        }
        self.refresh()?;
        Ok(Step::Continue)
    }
}

/// Draws `m` examples and runs the Perceptron on LEQ counterexamples,
/// round-robin over the sample, until every point agrees.
///
/// Stops early, reporting the point, if a counterexample has no positive
/// margin for the target.
pub fn learn_perceptron_leq(session: &mut OracleSession, m: usize, config: &PerceptronConfig) -> Result<LearnerReport> {
    let Concept::RealHalfspace(target) = session.target().clone() else {
        return Err(Error::TargetOutsideClass("perceptron needs a real halfspace target".into()));
    };
    let n = target.dim();
    let (dist_bound, dist_margin) = match session.distribution() {
        Distribution::MarginSampler { bound, margin, .. } => (Some(*bound), Some(*margin)),
        _ => (None, None),
    };
    let bound = config.bound.or(dist_bound);
    let margin = config.margin.or(dist_margin);
    let rho = session.lambda();
    let cap = config.cap.unwrap_or(match (bound, margin) {
        (Some(b), Some(g)) if g > rho => 4 * perceptron_update_bound(b, rho, g - rho),
        _ => FALLBACK_CAP,
    });
    let (w, b) = match &config.initial {
        Some(h) if h.dim() == n => (h.a.clone(), h.a0),
        Some(h) => {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: h.dim(),
            })
        }
        None => (vec![0.0; n], 0.0),
    };
    let an = target.normal_norm();
    let mut learner = Perceptron {
        fit_bias: config.fit_bias,
        hypothesis: RealHalfspace::from_parts(w.clone(), b)?.into(),
        w,
        b,
        target_unit: target.a.iter().map(|v| v / an).collect(),
        target_offset: target.a0 / an,
        min_margin: None,
        max_radius: None,
        offending: None,
    };
    let sample = session.ex_draw(m)?;
    let points = distinct_points(&sample.points);
    let stats = round_robin(session, &points, &mut learner, cap)?;
    let update_bound = match (bound, learner.min_margin) {
        (Some(b), Some(g)) if g > 0.0 => Some(perceptron_update_bound(b, rho, g)),
        _ => None,
    };
    let diagnostics = Diagnostics::Perceptron {
        measured_margin: learner.min_margin,
        measured_radius: learner.max_radius,
        update_bound,
        cap,
        offending_point: learner.offending.clone(),
    };
    Ok(LearnerReport::new(session, learner.hypothesis, m, &stats, diagnostics))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::test_util::robustly_consistent;
    use crate::learners::Termination;

    fn run(a: Vec<f64>, gamma: f64, rho: f64, m: usize, seed: u64, cfg: &PerceptronConfig) -> (LearnerReport, OracleSession) {
        let target = RealHalfspace::new(a, 0.0).unwrap();
        let d = Distribution::margin_sampler(1.0, gamma, target.clone()).unwrap();
        let mut s = OracleSession::new(target.into(), d, rho, rho, seed).unwrap();
        (learn_perceptron_leq(&mut s, m, cfg).unwrap(), s)
    }

    fn measured(r: &LearnerReport) -> (Option<f64>, Option<u64>) {
        match &r.diagnostics {
            Diagnostics::Perceptron {
                measured_margin,
                update_bound,
                ..
            } => (*measured_margin, *update_bound),
            _ => unreachable!(),
        }
    }

    #[test]
    fn classical_bound_at_zero_radius() {
        for seed in 0..50 {
            let (r, s) = run(vec![0.6, -0.8], 0.5, 0.0, 50, seed, &PerceptronConfig::default());
            assert!(r.is_consistent());
            assert!(r.updates <= 4, "seed {seed}: {} updates", r.updates);
            assert!(robustly_consistent(&r, s.target(), s.drawn_points(), 0.0));
        }
    }

    #[test]
    fn robust_run_respects_measured_bound() {
        for seed in 0..30 {
            let (r, s) = run(vec![1.0, 0.0], 0.5, 0.1, 40, seed, &PerceptronConfig::default());
            assert!(r.is_consistent());
            let (g, bound) = measured(&r);
            if r.updates > 0 {
                assert!(g.unwrap() >= 0.4 - 1e-9);
                assert!(r.updates <= bound.unwrap());
            }
            assert!(robustly_consistent(&r, s.target(), s.drawn_points(), 0.1));
        }
    }

    #[test]
    fn starting_at_target_needs_no_updates() {
        let cfg = PerceptronConfig {
            initial: Some(RealHalfspace::new(vec![1.0, 0.0], 0.0).unwrap()),
            ..Default::default()
        };
        let (r, _) = run(vec![1.0, 0.0], 0.5, 0.1, 20, 3, &cfg);
        assert_eq!(r.updates, 0);
    }

    #[test]
    fn zero_margin_counterexample_stops() {
        // From the constant-0 start the nearest disagreement to (−0.3, 0)
        // is the origin, which lies on the target boundary.
        let target = RealHalfspace::new(vec![1.0, 0.0], 0.0).unwrap();
        let d = Distribution::point_mass(vec![-0.3, 0.0]);
        let mut s = OracleSession::new(target.into(), d, 0.5, 0.5, 0).unwrap();
        let cfg = PerceptronConfig {
            initial: Some(RealHalfspace::from_parts(vec![0.0, 0.0], -1.0).unwrap()),
            ..Default::default()
        };
        let r = learn_perceptron_leq(&mut s, 1, &cfg).unwrap();
        assert_eq!(r.terminated, Termination::BudgetExhausted);
        match &r.diagnostics {
            Diagnostics::Perceptron { offending_point, measured_margin, .. } => {
                assert_eq!(offending_point.as_deref(), Some(&[0.0, 0.0][..]));
                assert_eq!(*measured_margin, Some(0.0));
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn bias_fitting() {
        let target = RealHalfspace::new(vec![1.0, 1.0], -0.5).unwrap();
        let d = Distribution::margin_sampler(1.0, 0.3, target.clone()).unwrap();
        let mut s = OracleSession::new(target.into(), d, 0.05, 0.05, 5).unwrap();
        let cfg = PerceptronConfig {
            fit_bias: true,
            ..Default::default()
        };
        let r = learn_perceptron_leq(&mut s, 60, &cfg).unwrap();
        assert!(r.is_consistent());
        assert!(robustly_consistent(&r, s.target(), s.drawn_points(), 0.05));
    }
}
