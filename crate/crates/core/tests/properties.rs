use proptest::prelude::*;

use robust_leq::distribution::{sample, Distribution};
use robust_leq::hypercube::{ball_size, HammingBallIter};
use robust_leq::model::{low_mask, BitPoint, Concept, Conjunction, Point, RealHalfspace};
use robust_leq::oracle::{LeqResponse, OracleSession};
use robust_leq::risk::robust_risk_profile;

fn arb_conj(n: usize) -> impl Strategy<Value = Concept> {
    (any::<u32>(), any::<u32>()).prop_map(move |(p, q)| {
        let p = p & low_mask(n);
        Conjunction::from_masks(n, p, q & low_mask(n) & !p).unwrap().into()
    })
}

fn session_run(n: usize, target: &Concept, hyps: &[Concept], lambda: usize, seed: u64) -> OracleSession {
    let mut s = OracleSession::new(target.clone(), Distribution::uniform(n).unwrap(), lambda as f64, lambda as f64, seed).unwrap();
    let sample = s.ex_draw(6).unwrap();
    for (k, h) in hyps.iter().enumerate() {
        let x = sample.points[k % sample.len()].0.clone();
        s.leq_query(h, &x).unwrap();
        let q = s.drawn_points()[0].clone();
        s.lmq_query(&q).unwrap();
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn robust_triangle((a, b, g) in (1usize..=10).prop_flat_map(|n| (arb_conj(n), arb_conj(n), arb_conj(n)))) {
        let n = a.dim();
        let d = Distribution::uniform(n).unwrap();
        let ab = robust_risk_profile(&a, &b, n, &d).unwrap();
        let ag = robust_risk_profile(&a, &g, n, &d).unwrap();
        let bg = robust_risk_profile(&b, &g, n, &d).unwrap();
        for rho in 0..=n {
            prop_assert!(ab[rho] <= ag[rho] + bg[rho]);
        }
    }

    #[test]
    fn ball_iter_count_and_order(n in 1usize..=12, bits in any::<u32>(), r in 0usize..14) {
        let center = BitPoint::new(bits & low_mask(n), n).unwrap();
        let pts: Vec<u32> = HammingBallIter::new(center, r).collect();
        prop_assert_eq!(pts.len() as u64, ball_size(n, r).unwrap());
        let dists: Vec<u32> = pts.iter().map(|z| (z ^ (bits & low_mask(n))).count_ones()).collect();
        prop_assert!(dists.windows(2).all(|w| w[0] <= w[1]));
        let mut sorted = pts.clone();
        sorted.sort_unstable();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), pts.len());
    }

    #[test]
    fn seeded_sessions_replay(
        (target, hyps) in (1usize..=10).prop_flat_map(|n| (arb_conj(n), proptest::collection::vec(arb_conj(n), 1..8))),
        lambda in 0usize..4,
        seed in any::<u64>(),
    ) {
        let n = target.dim();
        let a = session_run(n, &target, &hyps, lambda, seed);
        let b = session_run(n, &target, &hyps, lambda, seed);
        prop_assert_eq!(a.transcript(), b.transcript());
        let c = a.transcript().counters();
        prop_assert_eq!((c.ex, c.leq, c.lmq), (6, hyps.len() as u64, hyps.len() as u64));
        prop_assert_eq!(a.transcript().events().len() as u64, c.ex + c.leq + c.lmq);
    }

    #[test]
    fn labels_follow_target(target in (1usize..=12).prop_flat_map(arb_conj), seed in any::<u64>()) {
        let mut s = OracleSession::new(target.clone(), Distribution::uniform(target.dim()).unwrap(), 1.0, 1.0, seed).unwrap();
        let sample = s.ex_draw(20).unwrap();
        for (x, y) in &sample.points {
            prop_assert_eq!(*y, target.eval(x).unwrap());
        }
    }

    #[test]
    fn target_is_always_agreed(target in (1usize..=12).prop_flat_map(arb_conj), lambda in 0usize..5, seed in any::<u64>()) {
        let mut s = OracleSession::new(target.clone(), Distribution::uniform(target.dim()).unwrap(), lambda as f64, lambda as f64, seed).unwrap();
        let sample = s.ex_draw(5).unwrap();
        for (x, _) in &sample.points {
            prop_assert_eq!(s.leq_query(&target, x).unwrap(), LeqResponse::Agree);
        }
    }

    #[test]
    fn margin_sampler_constraints(a0 in -0.3f64..0.3, t in 0.0f64..std::f64::consts::TAU, seed in any::<u64>()) {
        let target = RealHalfspace::new(vec![t.cos(), t.sin()], a0).unwrap();
        let d = Distribution::margin_sampler(1.0, 0.2, target.clone()).unwrap();
        for p in sample(&d, 50, seed).unwrap() {
            let x = p.as_real().unwrap();
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            prop_assert!(norm <= 1.0 + 1e-12);
            prop_assert!(target.activation(x).abs() / norm >= 0.2 - 1e-12);
        }
    }

    #[test]
    fn sampling_is_bit_reproducible(n in 1usize..=16, seed in any::<u64>()) {
        let d = Distribution::uniform(n).unwrap();
        let a: Vec<Point> = sample(&d, 32, seed).unwrap();
        prop_assert_eq!(a, sample(&d, 32, seed).unwrap());
    }
}
