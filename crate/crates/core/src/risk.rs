//! Exact and Monte-Carlo evaluation of the exact-in-the-ball robust risk.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distribution::{Distribution, Sampler};
use crate::error::{Error, Result};
use crate::hypercube::{find_disagreement_in_ball, PointSet};
use crate::model::{Concept, Domain, Point};
use crate::real_geometry::{find_counterexample_l2, DEFAULT_TAU};

/// Largest dimension for which callers should prefer exact evaluation.
pub const EXACT_MAX_DIM: usize = 20;
/// Monte-Carlo accuracy used when exact evaluation is out of reach.
pub const DEFAULT_MC_EPS: f64 = 0.01;
pub const DEFAULT_MC_DELTA: f64 = 0.01;

const MC_CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RiskMethod {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskEstimate {
    pub method: RiskMethod,
    pub value: f64,
    pub ci_radius: f64,
    pub samples_used: u64,
}

/// A point of `B_radius(x)` where `h` and `c` disagree, if any.
///
/// Hamming balls on the cube (radius rounded down), ℓ2 balls in `ℝ^n`.
/// Real-domain search realizes strict inequalities with relative tolerance
/// `rel_tau`.
pub fn find_counterexample(
    h: &Concept,
    c: &Concept,
    x: &Point,
    radius: f64,
    rel_tau: f64,
) -> Result<Option<Point>> {
    if !(radius >= 0.0) {
        return Err(Error::InvalidParameter(format!("radius = {radius} must be >= 0")));
    }
    match (h, c, x) {
        (Concept::RealHalfspace(h), Concept::RealHalfspace(c), Point::Real(x)) => {
            Ok(find_counterexample_l2(h, c, x, radius, rel_tau)?.map(Point::Real))
        }
        (_, _, Point::Bits(x)) => {
            let r = radius.floor().min(x.dim() as f64) as usize;
            Ok(find_disagreement_in_ball(h, c, *x, r)?.map(Point::Bits))
        }
        _ => Err(Error::DomainMismatch(format!(
            "cannot search {:?}-domain point against {:?}/{:?} concepts",
            x.domain(),
            h.domain(),
            c.domain()
        ))),
    }
}

/// `1[∃z ∈ B_ρ(x). c(z) ≠ h(z)]`.
pub fn pointwise_robust_loss(h: &Concept, c: &Concept, x: &Point, rho: f64) -> Result<bool> {
    Ok(find_counterexample(h, c, x, rho, DEFAULT_TAU)?.is_some())
}

fn exact_estimate(value: f64) -> RiskEstimate {
    RiskEstimate {
        method: RiskMethod::Exact,
        value,
        ci_radius: 0.0,
        samples_used: 0,
    }
}

/// `D`-mass of the `ρ`-expanded disagreement region.
pub fn robust_risk_exact(h: &Concept, c: &Concept, rho: usize, d: &Distribution) -> Result<RiskEstimate> {
    let region = PointSet::disagreement(h, c)?.expand(rho);
    Ok(exact_estimate(d.mass(&region)?))
}

/// Exact risks for every `ρ = 0..=max_rho`, sharing one expansion pass.
pub fn robust_risk_profile(h: &Concept, c: &Concept, max_rho: usize, d: &Distribution) -> Result<Vec<f64>> {
    let mut region = PointSet::disagreement(h, c)?;
    let mut out = Vec::with_capacity(max_rho + 1);
    out.push(d.mass(&region)?);
    for _ in 0..max_rho {
        region = region.expand(1);
        out.push(d.mass(&region)?);
    }
    Ok(out)
}

/// Hoeffding sample size `⌈ln(2/δ) / (2ε²)⌉`.
pub fn hoeffding_sample_size(eps: f64, delta: f64) -> Result<u64> {
    for (name, v) in [("eps_ci", eps), ("delta_ci", delta)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::InvalidParameter(format!("{name} = {v} must lie in (0, 1)")));
        }
    }
    Ok(((2.0 / delta).ln() / (2.0 * eps * eps)).ceil() as u64)
}

/// Monte-Carlo estimate from `⌈ln(2/δ)/(2ε²)⌉` draws; `ci_radius` is the
/// Hoeffding radius `sqrt(ln(2/δ)/(2N))` at the drawn `N`, which is at most `ε`.
///
/// Draws are split into fixed-size chunks, each on its own ChaCha stream, so
/// the result does not depend on the thread count.
pub fn robust_risk_mc(
    h: &Concept,
    c: &Concept,
    rho: f64,
    d: &Distribution,
    eps_ci: f64,
    delta_ci: f64,
    seed: u64,
) -> Result<RiskEstimate> {
    let n_draws = hoeffding_sample_size(eps_ci, delta_ci)?;
    if d.dim() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            found: d.dim(),
        });
    }
    d.validate()?;
    let chunks = n_draws.div_ceil(MC_CHUNK as u64);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|k| -> Result<u64> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let mut sampler = Sampler::with_rng(d, rng)?;
            let len = (n_draws - k * MC_CHUNK as u64).min(MC_CHUNK as u64);
            let mut hits = 0;
            for _ in 0..len {
                let x = sampler.draw()?;
                hits += pointwise_robust_loss(h, c, &x, rho)? as u64;
            }
            Ok(hits)
        })
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .sum();
    Ok(RiskEstimate {
        method: RiskMethod::MonteCarlo,
        value: hits as f64 / n_draws as f64,
        ci_radius: ((2.0 / delta_ci).ln() / (2.0 * n_draws as f64)).sqrt(),
        samples_used: n_draws,
    })
}

/// Exact evaluation when the cube is small enough and `D` has an exact mass,
/// Monte Carlo at the default accuracy otherwise.
pub fn robust_risk(h: &Concept, c: &Concept, rho: f64, d: &Distribution, seed: u64) -> Result<RiskEstimate> {
    let exact_ok = d.domain() == Domain::Boolean
        && c.domain() == Domain::Boolean
        && d.dim() <= EXACT_MAX_DIM
        && !matches!(d, Distribution::MarginSampler { .. });
    if exact_ok {
        robust_risk_exact(h, c, rho.floor() as usize, d)
    } else {
        robust_risk_mc(h, c, rho, d, DEFAULT_MC_EPS, DEFAULT_MC_DELTA, seed)
    }
}
