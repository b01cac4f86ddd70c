//! Counterexample search in `ℝ^n` under an ℓ2 budget for pairs of halfspaces.

use crate::error::{Error, Result};
use crate::model::{dot, norm, RealHalfspace};

/// Default relative strictness tolerance; the effective `τ` for a strict
/// constraint `b·z + b0 < 0` is `DEFAULT_TAU · max(1, |b0|, ‖b‖)`.
pub const DEFAULT_TAU: f64 = 1e-9;

/// Slack allowed on the returned distance.
pub const DIST_SLACK: f64 = 1e-12;

/// A closed constraint `g·z ≥ r`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub g: Vec<f64>,
    pub r: f64,
}

impl Constraint {
    fn slack(&self, z: &[f64]) -> f64 {
        dot(&self.g, z) - self.r
    }
}

/// One disagreement cell `{z : a·z + a0 ≥ 0 ∧ b·z + b0 ≤ −τ}`, where `(a, a0)`
/// is the halfspace labelling `z` positive and `(b, b0)` the one labelling it
/// negative.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfspacePairRegion {
    pub positive: RealHalfspace,
    pub negative: RealHalfspace,
    pub tau: f64,
}

impl HalfspacePairRegion {
    /// Cell with `τ = rel_tau · max(1, |b0|, ‖b‖)`.
    pub fn new(positive: RealHalfspace, negative: RealHalfspace, rel_tau: f64) -> Result<Self> {
        if !(rel_tau > 0.0) {
            return Err(Error::InvalidParameter(format!("tau = {rel_tau} must be > 0")));
        }
        if positive.dim() != negative.dim() {
            return Err(Error::DimensionMismatch {
                expected: positive.dim(),
                found: negative.dim(),
            });
        }
        let tau = rel_tau * 1f64.max(negative.a0.abs()).max(negative.normal_norm());
        Ok(Self {
            positive,
            negative,
            tau,
        })
    }

    pub fn dim(&self) -> usize {
        self.positive.dim()
    }

    /// The two constraints in `g·z ≥ r` form.
    pub fn constraints(&self) -> [Constraint; 2] {
        [
            Constraint {
                g: self.positive.a.clone(),
                r: -self.positive.a0,
            },
            Constraint {
                g: self.negative.a.iter().map(|v| -v).collect(),
                r: self.negative.a0 + self.tau,
            },
        ]
    }

    pub fn contains(&self, z: &[f64], tol: f64) -> bool {
        self.constraints().iter().all(|c| c.slack(z) >= -tol)
    }
}

fn feasibility_tol(cs: &[Constraint], x: &[f64]) -> f64 {
    let scale = cs
        .iter()
        .map(|c| c.r.abs().max(norm(&c.g) * (norm(x) + 1.0)))
        .fold(1f64, f64::max);
    1e-13 * scale
}

fn axpy(x: &[f64], t: f64, g: &[f64]) -> Vec<f64> {
    x.iter().zip(g).map(|(xi, gi)| xi + t * gi).collect()
}

fn dist(x: &[f64], z: &[f64]) -> f64 {
    x.iter().zip(z).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// Euclidean projection of `x` onto a cell, or `None` when the cell is empty.
///
/// Each face of the cell (interior, either boundary hyperplane, or their
/// intersection) contributes the projection onto its affine hull; the
/// nearest candidate that satisfies both constraints is the projection.
pub fn project_to_cell(x: &[f64], cell: &HalfspacePairRegion) -> Result<Option<(Vec<f64>, f64)>> {
    if x.len() != cell.dim() {
        return Err(Error::DimensionMismatch {
            expected: cell.dim(),
            found: x.len(),
        });
    }
    let mut cs = Vec::with_capacity(2);
    for c in cell.constraints() {
        if norm(&c.g) == 0.0 {
            // Constant constraint: either vacuous or unsatisfiable.
            if 0.0 < c.r {
                return Ok(None);
            }
        } else {
            cs.push(c);
        }
    }
    let tol = feasibility_tol(&cs, x);
    let mut candidates: Vec<Vec<f64>> = vec![x.to_vec()];
    for c in &cs {
        candidates.push(axpy(x, -c.slack(x) / dot(&c.g, &c.g), &c.g));
    }
    if let [c1, c2] = cs.as_slice() {
        let g11 = dot(&c1.g, &c1.g);
        let g22 = dot(&c2.g, &c2.g);
        let g12 = dot(&c1.g, &c2.g);
        let det = g11 * g22 - g12 * g12;
        if det > 1e-14 * g11 * g22 {
            let s1 = -c1.slack(x);
            let s2 = -c2.slack(x);
            let m1 = (g22 * s1 - g12 * s2) / det;
            let m2 = (g11 * s2 - g12 * s1) / det;
            let z = x
                .iter()
                .enumerate()
                .map(|(i, xi)| xi + m1 * c1.g[i] + m2 * c2.g[i])
                .collect();
            candidates.push(z);
        }
    }
    Ok(candidates
        .into_iter()
        .filter(|z| cs.iter().all(|c| c.slack(z) >= -tol))
        .map(|z| {
            let d = dist(x, &z);
            (z, d)
        })
        .min_by(|a, b| a.1.total_cmp(&b.1)))
}

/// Pushes `z` along `g` until `g·z ≥ r` holds in floating point.
fn nudge_into(z: &mut [f64], c: &Constraint) {
    let gg = dot(&c.g, &c.g);
    if gg == 0.0 {
        return;
    }
    let mut step = f64::EPSILON * 1f64.max(c.r.abs()).max(norm(z) * gg.sqrt());
    for _ in 0..16 {
        if c.slack(z) >= 0.0 {
            return;
        }
        let t = (-c.slack(z) + step) / gg;
        for (zi, gi) in z.iter_mut().zip(&c.g) {
            *zi += t * gi;
        }
        step *= 4.0;
    }
}

fn check_dims(h: &RealHalfspace, c: &RealHalfspace, x: &[f64]) -> Result<()> {
    for d in [h.dim(), x.len()] {
        if d != c.dim() {
            return Err(Error::DimensionMismatch {
                expected: c.dim(),
                found: d,
            });
        }
    }
    Ok(())
}

/// Nearest point `z` with `‖z − x‖₂ ≤ ρ` and `h(z) ≠ c(z)`, up to the `τ`
/// band. Ties between the two cells go to the one where `c` is positive.
pub fn find_counterexample_l2(
    h: &RealHalfspace,
    c: &RealHalfspace,
    x: &[f64],
    rho: f64,
    rel_tau: f64,
) -> Result<Option<Vec<f64>>> {
    check_dims(h, c, x)?;
    if !(rho >= 0.0) {
        return Err(Error::InvalidParameter(format!("rho = {rho} must be >= 0")));
    }
    if h.eval_real(x) != c.eval_real(x) {
        return Ok(Some(x.to_vec()));
    }
    if rho == 0.0 {
        return Ok(None);
    }
    let cells = [
        HalfspacePairRegion::new(c.clone(), h.clone(), rel_tau)?,
        HalfspacePairRegion::new(h.clone(), c.clone(), rel_tau)?,
    ];
    let mut best: Option<(Vec<f64>, f64, &HalfspacePairRegion)> = None;
    for cell in &cells {
        if let Some((z, d)) = project_to_cell(x, cell)? {
            if best.as_ref().is_none_or(|b| d < b.1) {
                best = Some((z, d, cell));
            }
        }
    }
    let Some((mut z, d, cell)) = best else {
        return Ok(None);
    };
    if d > rho + DIST_SLACK {
        return Ok(None);
    }
    let [pos, _] = cell.constraints();
    nudge_into(&mut z, &pos);
    if !(cell.positive.eval_real(&z) && !cell.negative.eval_real(&z)) {
        return Err(Error::ToleranceTooSmall { point: z, tau: cell.tau });
    }
    // The nudge can carry a point sitting exactly on the sphere just outside it.
    Ok((dist(x, &z) <= rho + DIST_SLACK).then_some(z))
}
