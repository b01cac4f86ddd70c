//! EX, λ-LMQ and λ-LEQ oracles with locality checks and query accounting.

use std::collections::HashSet;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::distribution::{Distribution, Sampler};
use crate::error::{Error, Result};
use crate::model::{Concept, Point};
use crate::real_geometry::{DEFAULT_TAU, DIST_SLACK};
use crate::risk::find_counterexample;

/// Distance used for locality: Hamming on the cube, ℓ2 in `ℝ^n`.
pub fn point_distance(x: &Point, z: &Point) -> Result<f64> {
    match (x, z) {
        (Point::Bits(a), Point::Bits(b)) if a.dim() == b.dim() => Ok(a.hamming(b) as f64),
        (Point::Real(a), Point::Real(b)) if a.len() == b.len() => {
            Ok(a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt())
        }
        _ if x.domain() != z.domain() => Err(Error::DomainMismatch("mixed boolean and real points".into())),
        _ => Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: z.dim(),
        }),
    }
}

fn within(d: f64, radius: f64, x: &Point) -> bool {
    match x {
        Point::Bits(_) => d <= radius,
        Point::Real(_) => d <= radius + DIST_SLACK,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum LeqResponse {
    Agree,
    Counterexample { z: Point },
}

impl LeqResponse {
    /// Builds a counterexample response. Panics unless `z` lies within
    /// `lambda` of `x` and `target(z) ≠ h(z)`.
    pub fn counterexample(x: &Point, z: Point, lambda: f64, target: &Concept, h: &Concept) -> Self {
        let d = point_distance(x, &z).expect("counterexample outside the anchor's space");
        assert!(within(d, lambda, x), "counterexample at distance {d} > lambda = {lambda}");
        assert_ne!(
            target.eval(&z).expect("target evaluation"),
            h.eval(&z).expect("hypothesis evaluation"),
            "counterexample where hypothesis and target agree"
        );
        LeqResponse::Counterexample { z }
    }

    pub fn is_agree(&self) -> bool {
        matches!(self, LeqResponse::Agree)
    }

    pub fn counterexample_point(&self) -> Option<&Point> {
        match self {
            LeqResponse::Agree => None,
            LeqResponse::Counterexample { z } => Some(z),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Event {
    Ex { point: Point, label: bool },
    Lmq { query: Point, label: bool },
    Leq { anchor: Point, hypothesis: Concept, response: LeqResponse },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    pub ex: u64,
    pub lmq: u64,
    pub leq: u64,
}

/// Append-only oracle log.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    counters: Counters,
    events: Vec<Event>,
}

#[derive(Serialize)]
struct JsonlLine<'a> {
    #[serde(flatten)]
    event: &'a Event,
    counters: Counters,
}

impl Transcript {
    fn push(&mut self, e: Event) {
        match e {
            Event::Ex { .. } => self.counters.ex += 1,
            Event::Lmq { .. } => self.counters.lmq += 1,
            Event::Leq { .. } => self.counters.leq += 1,
        }
        self.events.push(e);
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    pub fn ex_count(&self) -> u64 {
        self.counters.ex
    }

    pub fn lmq_count(&self) -> u64 {
        self.counters.lmq
    }

    pub fn leq_count(&self) -> u64 {
        self.counters.leq
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    /// One JSON object per event, carrying the cumulative counters after it.
    pub fn write_jsonl(&self, mut w: impl Write) -> Result<()> {
        let mut counters = Counters::default();
        for event in &self.events {
            match event {
                Event::Ex { .. } => counters.ex += 1,
                Event::Lmq { .. } => counters.lmq += 1,
                Event::Leq { .. } => counters.leq += 1,
            }
            serde_json::to_writer(&mut w, &JsonlLine { event, counters })?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledSample {
    pub points: Vec<(Point, bool)>,
    pub seed: u64,
    pub distribution: Distribution,
}

impl LabeledSample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn point_key(p: &Point) -> Vec<u64> {
    match p {
        Point::Bits(b) => vec![b.bits() as u64],
        Point::Real(v) => v.iter().map(|x| x.to_bits()).collect(),
    }
}

/// One target/distribution pair with its oracle transcript.
///
/// Locality is measured against the union of every sample drawn so far.
#[derive(Debug, Clone)]
pub struct OracleSession {
    target: Concept,
    lambda: f64,
    rho: f64,
    tau: f64,
    seed: u64,
    sampler: Sampler,
    drawn: Vec<Point>,
    drawn_keys: HashSet<Vec<u64>>,
    transcript: Transcript,
}

impl OracleSession {
    pub fn new(target: Concept, dist: Distribution, lambda: f64, rho: f64, seed: u64) -> Result<Self> {
        if target.dim() != dist.dim() {
            return Err(Error::DimensionMismatch {
                expected: target.dim(),
                found: dist.dim(),
            });
        }
        if target.domain() != dist.domain() {
            return Err(Error::DomainMismatch("target and distribution live on different domains".into()));
        }
        for (name, v) in [("lambda", lambda), ("rho", rho)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} = {v} must be finite and >= 0")));
            }
        }
        Ok(Self {
            sampler: Sampler::new(&dist, seed)?,
            target,
            lambda,
            rho,
            tau: DEFAULT_TAU,
            seed,
            drawn: Vec::new(),
            drawn_keys: HashSet::new(),
            transcript: Transcript::default(),
        })
    }

    /// Overrides the relative strictness tolerance of real-domain LEQs.
    pub fn with_tau(mut self, rel_tau: f64) -> Result<Self> {
        if !(rel_tau > 0.0) {
            return Err(Error::InvalidParameter(format!("tau = {rel_tau} must be > 0")));
        }
        self.tau = rel_tau;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.target.dim()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn distribution(&self) -> &Distribution {
        self.sampler.distribution()
    }

    /// The hidden target. Learners must not consult it; it is exposed for
    /// auditing and instrumentation.
    pub fn target(&self) -> &Concept {
        &self.target
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn drawn_points(&self) -> &[Point] {
        &self.drawn
    }

    /// `m` labelled i.i.d. draws from `EX(c, D)`.
    pub fn ex_draw(&mut self, m: usize) -> Result<LabeledSample> {
        if m == 0 {
            return Err(Error::InvalidParameter("ex_draw needs m >= 1".into()));
        }
        let mut points = Vec::with_capacity(m);
        for _ in 0..m {
            let x = self.sampler.draw()?;
            let label = self.target.eval(&x)?;
            if self.drawn_keys.insert(point_key(&x)) {
                self.drawn.push(x.clone());
            }
            self.transcript.push(Event::Ex {
                point: x.clone(),
                label,
            });
            points.push((x, label));
        }
        Ok(LabeledSample {
            points,
            seed: self.seed,
            distribution: self.sampler.distribution().clone(),
        })
    }

    /// `c(x_query)`, provided some drawn point lies within `λ` of the query.
    pub fn lmq_query(&mut self, x_query: &Point) -> Result<bool> {
        let mut local = false;
        for x in &self.drawn {
            if within(point_distance(x, x_query)?, self.lambda, x) {
                local = true;
                break;
            }
        }
        if !local {
            return Err(Error::LocalityViolation(format!(
                "membership query farther than lambda = {} from every drawn point",
                self.lambda
            )));
        }
        let label = self.target.eval(x_query)?;
        self.transcript.push(Event::Lmq {
            query: x_query.clone(),
            label,
        });
        Ok(label)
    }

    /// Whether `h` agrees with the target on `B_λ(x)` for a drawn point `x`.
    pub fn leq_query(&mut self, h: &Concept, x: &Point) -> Result<LeqResponse> {
        if !self.drawn_keys.contains(&point_key(x)) {
            return Err(Error::LocalityViolation(
                "equivalence query anchored at a point that was never drawn".into(),
            ));
        }
        self.target.require_same_dim(h)?;
        let response = match find_counterexample(h, &self.target, x, self.lambda, self.tau)? {
            None => LeqResponse::Agree,
            Some(z) => LeqResponse::counterexample(x, z, self.lambda, &self.target, h),
        };
        self.transcript.push(Event::Leq {
            anchor: x.clone(),
            hypothesis: h.clone(),
            response: response.clone(),
        });
        Ok(response)
    }
}
