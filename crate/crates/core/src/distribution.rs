//! Example distributions and seeded samplers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypercube::PointSet;
use crate::model::{check_boolean_dim, low_mask, norm, BitPoint, Domain, Point, RealHalfspace};

/// Default number of rejected draws before a margin sampler gives up.
pub const DEFAULT_MAX_ATTEMPTS: u64 = 100_000;

fn default_max_attempts() -> u64 {
    DEFAULT_MAX_ATTEMPTS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Distribution {
    UniformHypercube {
        n: usize,
    },
    PointMass {
        point: Point,
    },
    DiscreteTable {
        points: Vec<Point>,
        probabilities: Vec<f64>,
    },
    /// Uniform on the radius-`bound` ℓ2 ball, conditioned on the geometric
    /// margin `|a·x + a0| / ‖a‖ ≥ margin` with respect to `target`.
    MarginSampler {
        n: usize,
        bound: f64,
        margin: f64,
        target: RealHalfspace,
        #[serde(default = "default_max_attempts")]
        max_attempts: u64,
    },
}

impl Distribution {
    pub fn uniform(n: usize) -> Result<Self> {
        check_boolean_dim(n)?;
        Ok(Distribution::UniformHypercube { n })
    }

    pub fn point_mass(point: impl Into<Point>) -> Self {
        Distribution::PointMass {
            point: point.into(),
        }
    }

    pub fn discrete(points: Vec<Point>, probabilities: Vec<f64>) -> Result<Self> {
        let d = Distribution::DiscreteTable {
            points,
            probabilities,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn margin_sampler(bound: f64, margin: f64, target: RealHalfspace) -> Result<Self> {
        let d = Distribution::MarginSampler {
            n: target.dim(),
            bound,
            margin,
            target,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn dim(&self) -> usize {
        match self {
            Distribution::UniformHypercube { n } | Distribution::MarginSampler { n, .. } => *n,
            Distribution::PointMass { point } => point.dim(),
            Distribution::DiscreteTable { points, .. } => points.first().map_or(0, Point::dim),
        }
    }

    pub fn domain(&self) -> Domain {
        match self {
            Distribution::UniformHypercube { .. } => Domain::Boolean,
            Distribution::MarginSampler { .. } => Domain::Real,
            Distribution::PointMass { point } => point.domain(),
            Distribution::DiscreteTable { points, .. } => {
                points.first().map_or(Domain::Boolean, Point::domain)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Distribution::UniformHypercube { n } => check_boolean_dim(*n),
            Distribution::PointMass { point } => {
                if let Point::Real(v) = point {
                    if v.is_empty() || v.iter().any(|c| !c.is_finite()) {
                        return Err(Error::InvalidParameter("point mass must be finite".into()));
                    }
                }
                Ok(())
            }
            Distribution::DiscreteTable {
                points,
                probabilities,
            } => {
                if points.is_empty() || points.len() != probabilities.len() {
                    return Err(Error::InvalidParameter(
                        "discrete table needs matching non-empty points and probabilities".into(),
                    ));
                }
                let (dim, domain) = (points[0].dim(), points[0].domain());
                if points.iter().any(|p| p.dim() != dim || p.domain() != domain) {
                    return Err(Error::InvalidParameter(
                        "discrete table points must share a domain and dimension".into(),
                    ));
                }
                if probabilities.iter().any(|&p| !(p >= 0.0)) {
                    return Err(Error::InvalidParameter("negative probability".into()));
                }
                let total: f64 = probabilities.iter().sum();
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidParameter(format!(
                        "probabilities sum to {total}, not 1"
                    )));
                }
                Ok(())
            }
            Distribution::MarginSampler {
                n,
                bound,
                margin,
                target,
                ..
            } => {
                if target.dim() != *n {
                    return Err(Error::DimensionMismatch {
                        expected: *n,
                        found: target.dim(),
                    });
                }
                if target.normal_norm() == 0.0 {
                    return Err(Error::InvalidParameter("margin target needs a nonzero normal".into()));
                }
                if !(*bound > 0.0 && bound.is_finite() && *margin > 0.0 && margin.is_finite()) {
                    return Err(Error::InvalidParameter(
                        "margin sampler needs finite bound > 0 and margin > 0".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    /// Exact probability mass of a hypercube point set.
    pub fn mass(&self, set: &PointSet) -> Result<f64> {
        let n = set.dim();
        match self {
            Distribution::UniformHypercube { n: dn } if *dn == n => {
                Ok(set.count() as f64 / (1u64 << n) as f64)
            }
            Distribution::PointMass {
                point: Point::Bits(p),
            } if p.dim() == n => Ok(if set.contains(p.bits()) { 1.0 } else { 0.0 }),
            Distribution::DiscreteTable {
                points,
                probabilities,
            } if self.domain() == Domain::Boolean && self.dim() == n => Ok(points
                .iter()
                .zip(probabilities)
                .filter(|(p, _)| set.contains(p.as_bits().map_or(0, |b| b.bits())))
                .map(|(_, q)| q)
                .sum()),
            _ if self.domain() == Domain::Real => Err(Error::DomainMismatch(
                "exact mass needs a boolean distribution".into(),
            )),
            _ => Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: n,
            }),
        }
    }
}

/// A distribution paired with its own RNG stream.
#[derive(Debug, Clone)]
pub struct Sampler {
    dist: Distribution,
    rng: ChaCha8Rng,
    cumulative: Vec<f64>,
}

impl Sampler {
    pub fn new(dist: &Distribution, seed: u64) -> Result<Self> {
        Self::with_rng(dist, ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn with_rng(dist: &Distribution, rng: ChaCha8Rng) -> Result<Self> {
        dist.validate()?;
        let cumulative = match dist {
            Distribution::DiscreteTable { probabilities, .. } => probabilities
                .iter()
                .scan(0.0, |acc, p| {
                    *acc += p;
                    Some(*acc)
                })
                .collect(),
            _ => Vec::new(),
        };
        Ok(Self {
            dist: dist.clone(),
            rng,
            cumulative,
        })
    }

    pub fn distribution(&self) -> &Distribution {
        &self.dist
    }

    pub fn draw(&mut self) -> Result<Point> {
        match &self.dist {
            Distribution::UniformHypercube { n } => {
                let bits = self.rng.random::<u32>() & low_mask(*n);
                Ok(Point::Bits(BitPoint::from_raw(bits, *n)))
            }
            Distribution::PointMass { point } => Ok(point.clone()),
            Distribution::DiscreteTable { points, .. } => {
                let u: f64 = self.rng.random();
                let idx = self
                    .cumulative
                    .partition_point(|&c| c <= u)
                    .min(points.len() - 1);
                Ok(points[idx].clone())
            }
            Distribution::MarginSampler {
                n,
                bound,
                margin,
                target,
                max_attempts,
            } => {
                let (n, bound, margin) = (*n, *bound, *margin);
                let norm_a = target.normal_norm();
                for _ in 0..*max_attempts {
                    let x = uniform_in_ball(&mut self.rng, n, bound);
                    if target.activation(&x).abs() / norm_a >= margin && norm(&x) <= bound {
                        return Ok(Point::Real(x));
                    }
                }
                Err(Error::InfeasibleMargin {
                    attempts: *max_attempts,
                })
            }
        }
    }

    pub fn draw_many(&mut self, m: usize) -> Result<Vec<Point>> {
        (0..m).map(|_| self.draw()).collect()
    }
}

fn uniform_in_ball(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let len = norm(&g);
        if len > 0.0 {
            let r = radius * rng.random::<f64>().powf(1.0 / n as f64);
            return g.into_iter().map(|v| v / len * r).collect();
        }
    }
}

/// `m` i.i.d. draws from `dist`; identical `(dist, m, seed)` gives identical output.
pub fn sample(dist: &Distribution, m: usize, seed: u64) -> Result<Vec<Point>> {
    Sampler::new(dist, seed)?.draw_many(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_mass_repeats() {
        let z = BitPoint::zeros(4).unwrap();
        let pts = sample(&Distribution::point_mass(z), 3, 1).unwrap();
        assert_eq!(pts, vec![Point::Bits(z); 3]);
    }

    #[test]
    fn uniform_frequencies_close_to_quarter() {
        let pts = sample(&Distribution::uniform(2).unwrap(), 4096, 7).unwrap();
        let mut counts = [0usize; 4];
        for p in &pts {
            counts[p.as_bits().unwrap().bits() as usize] += 1;
        }
        for c in counts {
            assert!((c as f64 / 4096.0 - 0.25).abs() < 0.05, "{counts:?}");
        }
    }

    #[test]
    fn seeded_sampling_reproducible() {
        let d = Distribution::uniform(12).unwrap();
        assert_eq!(sample(&d, 100, 3).unwrap(), sample(&d, 100, 3).unwrap());
        assert_ne!(sample(&d, 100, 3).unwrap(), sample(&d, 100, 4).unwrap());
        let t = RealHalfspace::new(vec![1.0, 0.0], 0.0).unwrap();
        let m = Distribution::margin_sampler(1.0, 0.5, t).unwrap();
        assert_eq!(sample(&m, 50, 9).unwrap(), sample(&m, 50, 9).unwrap());
    }

    #[test]
    fn margin_sampler_respects_constraints() {
        let t = RealHalfspace::new(vec![1.0, 0.0], 0.0).unwrap();
        let d = Distribution::margin_sampler(1.0, 0.5, t.clone()).unwrap();
        for p in sample(&d, 500, 11).unwrap() {
            let x = p.as_real().unwrap();
            assert!(norm(x) <= 1.0);
            assert!(t.signed_distance(x).abs() >= 0.5);
        }
    }

    #[test]
    fn infeasible_margin_reported() {
        let t = RealHalfspace::new(vec![1.0, 1.0], 0.0).unwrap();
        let d = Distribution::MarginSampler {
            n: 2,
            bound: 1.0,
            margin: 2.0,
            target: t,
            max_attempts: 1000,
        };
        assert!(matches!(
            sample(&d, 1, 0),
            Err(Error::InfeasibleMargin { attempts: 1000 })
        ));
    }

    #[test]
    fn discrete_table_validation_and_draws() {
        let a = Point::Bits(BitPoint::new(1, 3).unwrap());
        let b = Point::Bits(BitPoint::new(6, 3).unwrap());
        assert!(Distribution::discrete(vec![a.clone(), b.clone()], vec![0.5, 0.6]).is_err());
        assert!(Distribution::discrete(vec![a.clone(), b.clone()], vec![-0.5, 1.5]).is_err());
        let d = Distribution::discrete(vec![a.clone(), b.clone()], vec![0.0, 1.0]).unwrap();
        assert!(sample(&d, 200, 5).unwrap().iter().all(|p| *p == b));
    }

    #[test]
    fn exact_mass_by_variant() {
        let mut s = PointSet::empty(3).unwrap();
        s.insert(0);
        s.insert(5);
        assert_eq!(Distribution::uniform(3).unwrap().mass(&s).unwrap(), 0.25);
        let z = BitPoint::zeros(3).unwrap();
        assert_eq!(Distribution::point_mass(z).mass(&s).unwrap(), 1.0);
        let d = Distribution::discrete(
            vec![Point::Bits(BitPoint::new(5, 3).unwrap()), Point::Bits(BitPoint::new(1, 3).unwrap())],
            vec![0.3, 0.7],
        )
        .unwrap();
        assert!((d.mass(&s).unwrap() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn json_round_trip() {
        let t = RealHalfspace::new(vec![1.0, 0.0], 0.0).unwrap();
        let d = Distribution::margin_sampler(1.0, 0.5, t).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(serde_json::from_str::<Distribution>(&s).unwrap(), d);
        let u: Distribution = serde_json::from_str(r#"{"kind":"uniform_hypercube","n":3}"#).unwrap();
        assert_eq!(u, Distribution::uniform(3).unwrap());
    }
}
