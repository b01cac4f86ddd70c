//! Conjunction learner: positive examples prune literals, LEQ counterexamples
//! prune the rest.

use crate::error::{Error, Result};
use crate::learners::{distinct_points, Diagnostics, LearnerReport, RunStats, Termination};
use crate::model::{Concept, Conjunction, Point};
use crate::oracle::{LeqResponse, OracleSession};

fn audit_contains_target(target: &Concept, h: &Conjunction) {
    if let Some(c) = target.as_conjunction() {
        assert!(c.literals_subset_of(h), "target literal removed from hypothesis");
    }
}

/// Draws `m` examples and runs the literal-elimination learner to robust
/// consistency. Each sample point is visited once: a point that agrees keeps
/// agreeing as literals are removed.
pub fn learn_conjunction_leq(session: &mut OracleSession, m: usize) -> Result<LearnerReport> {
    let n = session.dim();
    let sample = session.ex_draw(m)?;
    let mut h = Conjunction::all_literals(n)?;
    for (x, label) in &sample.points {
        let bits = x
            .as_bits()
            .ok_or_else(|| Error::DomainMismatch("conjunction learner needs boolean points".into()))?;
        if *label {
            h.drop_falsified_by(bits.bits());
            audit_contains_target(session.target(), &h);
        }
    }
    let mut updates = 0;
    for x in distinct_points(&sample.points) {
        loop {
            let hc = Concept::Conjunction(h.clone());
            let z = match session.leq_query(&hc, &x)? {
                LeqResponse::Agree => break,
                LeqResponse::Counterexample { z: Point::Bits(z) } => z,
                LeqResponse::Counterexample { .. } => unreachable!("boolean session"),
            };
            // h keeps a superset of the target's literals, so h(z) = 1 forces
            // c(z) = 1 unless the target is not a conjunction.
            if h.eval_bits(z.bits()) || h.drop_falsified_by(z.bits()) == 0 {
                return Err(Error::TargetOutsideClass(format!(
                    "counterexample {z} removes no literal"
                )));
            }
            audit_contains_target(session.target(), &h);
            updates += 1;
        }
    }
    let stats = RunStats {
        updates,
        passes: 1,
        terminated: Termination::RobustlyConsistent,
        visit_queries: Vec::new(),
    };
    let diagnostics = Diagnostics::Conjunction {
        literals_left: h.literal_count(),
    };
    Ok(LearnerReport::new(session, h.into(), m, &stats, diagnostics))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::Distribution;
    use crate::learners::test_util::robustly_consistent;
    use crate::model::{BitPoint, TruthTable};
    use crate::risk::pointwise_robust_loss;
    use proptest::prelude::*;

    fn session(target: Concept, dist: Distribution, rho: f64, seed: u64) -> OracleSession {
        OracleSession::new(target, dist, rho, rho, seed).unwrap()
    }

    #[test]
    fn single_positive_point_trace() {
        let target: Concept = Conjunction::monotone(3, [1]).unwrap().into();
        let ones = Distribution::point_mass(BitPoint::ones(3).unwrap());

        let mut s = session(target.clone(), ones.clone(), 0.0, 0);
        let r = learn_conjunction_leq(&mut s, 1).unwrap();
        assert_eq!(r.hypothesis, Conjunction::monotone(3, [1, 2, 3]).unwrap().into());
        assert_eq!((r.leq_count, r.updates), (1, 0));

        // λ = 1: flipping x2 then x3 gives two positive counterexamples.
        let mut s = session(target.clone(), ones, 1.0, 0);
        let r = learn_conjunction_leq(&mut s, 1).unwrap();
        assert_eq!(r.hypothesis, target);
        assert_eq!((r.leq_count, r.updates), (3, 2));
    }

    #[test]
    fn empty_target() {
        let target: Concept = Conjunction::empty(5).unwrap().into();
        let mut s = session(target.clone(), Distribution::uniform(5).unwrap(), 2.0, 3);
        let r = learn_conjunction_leq(&mut s, 4).unwrap();
        assert!(r.is_consistent());
        assert!(robustly_consistent(&r, &target, s.drawn_points(), 2.0));
    }

    #[test]
    fn non_conjunction_target_detected() {
        let xor: Concept = TruthTable::from_fn(2, |x| x.count_ones() == 1).unwrap().into();
        let d = Distribution::point_mass(BitPoint::from_coords(&[1, 0]).unwrap());
        let mut s = session(xor, d, 2.0, 0);
        assert!(matches!(learn_conjunction_leq(&mut s, 1), Err(Error::TargetOutsideClass(_))));
    }

    #[test]
    fn agreed_points_stay_agreed() {
        let target: Concept = Conjunction::new(8, [1, 4], [6]).unwrap().into();
        let mut s = session(target.clone(), Distribution::uniform(8).unwrap(), 2.0, 17);
        let r = learn_conjunction_leq(&mut s, 30).unwrap();
        for x in s.drawn_points().to_vec() {
            assert_eq!(s.leq_query(&r.hypothesis, &x).unwrap(), LeqResponse::Agree);
            assert!(!pointwise_robust_loss(&r.hypothesis, &target, &x, 2.0).unwrap());
        }
    }

    proptest! {
        #[test]
        fn query_bound_and_consistency(n in 1usize..=10, p in any::<u32>(), q in any::<u32>(), m in 1usize..40, rho in 0usize..4, seed in any::<u64>()) {
            let mask = crate::model::low_mask(n);
            let target: Concept = Conjunction::from_masks(n, p & q & mask, !p & q & (q >> 3) & mask).unwrap().into();
            let rho = rho.min(n) as f64;
            let mut s = session(target.clone(), Distribution::uniform(n).unwrap(), rho, seed);
            let r = learn_conjunction_leq(&mut s, m).unwrap();
            prop_assert!(r.leq_count <= (m + 2 * n) as u64);
            prop_assert!(r.is_consistent());
            prop_assert!(robustly_consistent(&r, &target, s.drawn_points(), rho));
        }
    }
}
