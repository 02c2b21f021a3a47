//! Information geometry on the positive orthant of the sphere of radius 2:
//! the embedding m = 2 sqrt(p), tangent vectors, arc lengths, model volumes
//! under the Fisher-Rao metric, KL projection and orthogonality checks.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fisher;
use crate::model::{Family, Outcome, ParametricModel, ProbVector};
use crate::numeric::{self, QuadTol};

/// A pmf embedded as 2 sqrt(p); Euclidean norm 2 by construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpherePoint {
    coords: Vec<f64>,
}

impl SpherePoint {
    fn new(coords: Vec<f64>) -> Result<Self> {
        let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 2.0).abs() > 1e-10 {
            return Err(Error::InvalidProbVector(format!("embedded norm {norm}, expected 2")));
        }
        Ok(SpherePoint { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// First-order displacement on the sphere induced by a parameter increment.
#[derive(Debug, Clone, Serialize)]
pub struct TangentVector {
    pub base: SpherePoint,
    pub components: Vec<f64>,
    pub dparam: f64,
}

impl TangentVector {
    pub fn euclidean_length(&self) -> f64 {
        self.components.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// m(p) = 2 sqrt(p) entry-wise.
pub fn embed(p: &ProbVector) -> SpherePoint {
    SpherePoint::new(p.probs().iter().map(|&q| 2.0 * q.sqrt()).collect())
        .expect("2 sqrt(p) of a pmf has norm 2")
}

fn score_vector(model: &ParametricModel, x: &Outcome, theta: &[f64]) -> Result<Vec<f64>> {
    if let Some(s) = model.analytic_score(x, theta) {
        return Ok(s);
    }
    Ok(numeric::central_gradient(|t| model.log_density(x, t).unwrap_or(f64::NAN), theta, 1e-6))
}

/// Tangent vector at theta: components (1/2) score(x) m_theta(x) dtheta.
pub fn tangent(model: &ParametricModel, theta: &[f64], dtheta: f64) -> Result<TangentVector> {
    if model.dim() != 1 {
        return Err(Error::Unsupported("tangent vectors are 1-d only".into()));
    }
    if !model.contains(theta) {
        return Err(Error::OutsideDomain(theta.to_vec(), model.name().to_string()));
    }
    let w = model
        .outcomes()
        .size()
        .ok_or_else(|| Error::Unsupported("tangent needs a finite outcome space".into()))?;
    let base = embed(&model.pmf(theta)?);
    let mut components = Vec::with_capacity(w);
    for i in 0..w {
        let s = score_vector(model, &Outcome::Index(i), theta)?[0];
        components.push(0.5 * s * base.coords()[i] * dtheta);
    }
    Ok(TangentVector { base, components, dparam: dtheta })
}

/// First-order arc length sqrt(I(theta)) |dtheta|; equals the Euclidean norm
/// of `tangent` for finite models.
pub fn tangent_length(model: &ParametricModel, theta: &[f64], dtheta: f64) -> Result<f64> {
    if !model.contains(theta) {
        return Err(Error::OutsideDomain(theta.to_vec(), model.name().to_string()));
    }
    let info = fisher::fisher_unit(model, theta)?
        .scalar_value()
        .ok_or_else(|| Error::Unsupported("arc length is 1-d only".into()))?;
    Ok(info.sqrt() * dtheta.abs())
}

fn sqrt_unit_information(model: &ParametricModel, theta: &[f64]) -> f64 {
    match fisher::fisher_unit(model, theta) {
        Ok(m) => m.det().max(0.0).sqrt(),
        Err(_) => f64::NAN,
    }
}

/// V = integral of sqrt(det I) over the parameter domain (d = 1 or 2), with
/// the endpoint-singularity-aware substitution built into the quadrature.
pub fn model_volume(model: &ParametricModel) -> Result<f64> {
    let tol = QuadTol::default();
    match model.dim() {
        1 => {
            let (lo, hi) = model.domain()[0];
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(Error::QuadratureFailure {
                    achieved: f64::INFINITY,
                    requested: tol.abs,
                });
            }
            numeric::integrate_singular_endpoints(
                |t| sqrt_unit_information(model, &[t]),
                lo,
                hi,
                tol,
            )
        }
        2 => {
            let (lo1, hi1) = model.domain()[0];
            let (lo2, hi2) = model.domain()[1];
            if !(lo1.is_finite() && hi1.is_finite() && lo2.is_finite() && hi2.is_finite()) {
                return Err(Error::QuadratureFailure {
                    achieved: f64::INFINITY,
                    requested: tol.abs,
                });
            }
            // Inner integral over the second coordinate at fixed first
            // coordinate; the beta simplex truncates the inner range.
            let inner_hi = |t1: f64| match model.family() {
                Family::CategoricalBeta => 1.0 - t1,
                _ => hi2,
            };
            numeric::integrate_singular_endpoints(
                |t1| {
                    numeric::integrate_singular_endpoints(
                        |t2| sqrt_unit_information(model, &[t1, t2]),
                        lo2,
                        inner_hi(t1),
                        tol,
                    )
                    .unwrap_or(f64::NAN)
                },
                lo1,
                hi1,
                tol,
            )
        }
        d => Err(Error::Unsupported(format!("volume for d={d} models"))),
    }
}

/// KL projection of an empirical pmf onto a 1-d model.
#[derive(Debug, Clone, Serialize)]
pub struct KlProjection {
    pub theta: f64,
    pub pmf: ProbVector,
    pub divergence: f64,
    /// True when the minimizer sits at the edge of the search bracket.
    pub boundary: bool,
}

/// KL(empirical || f(.|theta)) as a function of theta.
pub fn kl_to_model(model: &ParametricModel, empirical: &ProbVector, theta: f64) -> Result<f64> {
    let pmf = model.pmf(&[theta])?;
    let mut kl = 0.0;
    for (&p, &q) in empirical.probs().iter().zip(pmf.probs()) {
        if p == 0.0 {
            continue;
        }
        if q == 0.0 {
            return Ok(f64::INFINITY);
        }
        kl += p * (p / q).ln();
    }
    Ok(kl)
}

/// theta minimizing KL(empirical || f(.|theta)) together with the projected
/// pmf. Golden-section with restarts from 0.1/0.5/0.9 of the domain; ties
/// break toward smaller theta.
pub fn kl_projection(model: &ParametricModel, empirical: &ProbVector) -> Result<KlProjection> {
    if model.dim() != 1 {
        return Err(Error::Unsupported("KL projection is 1-d only".into()));
    }
    let w = model
        .outcomes()
        .size()
        .ok_or_else(|| Error::Unsupported("KL projection needs a finite model".into()))?;
    if empirical.len() != w {
        return Err(Error::DimensionMismatch { expected: w, got: empirical.len() });
    }
    let (lo, hi) = model.domain()[0];
    let delta = (hi - lo) * 1e-9;
    let objective = |t: f64| -kl_to_model(model, empirical, t).unwrap_or(f64::INFINITY);
    let mut best: Option<(f64, f64)> = None;
    for frac in [0.1, 0.5, 0.9] {
        let anchor = lo + (hi - lo) * frac;
        let (a, b) = (lo + delta, hi - delta);
        // Bracket around the restart anchor, clipped to the domain.
        let half = (hi - lo) * 0.5;
        let (la, lb) = ((anchor - half).max(a), (anchor + half).min(b));
        let t = numeric::golden_section_max(objective, la, lb, 1e-12);
        let kl = -objective(t);
        best = match best {
            None => Some((t, kl)),
            Some((bt, bkl)) => {
                if kl < bkl - 1e-12 || (kl <= bkl + 1e-12 && t < bt) {
                    Some((t, kl))
                } else {
                    Some((bt, bkl))
                }
            }
        };
    }
    let (theta, divergence) = best.unwrap();
    let boundary = theta - lo < 1e-6 * (hi - lo) || hi - theta < 1e-6 * (hi - lo);
    Ok(KlProjection { theta, pmf: model.pmf(&[theta])?, divergence, boundary })
}

/// Pairwise orthogonality of parameter directions: entry (i,j) is true when
/// |I_ij| < 1e-9 (off-diagonals) — the directions are metrically orthogonal.
pub fn orthogonality(model: &ParametricModel, theta: &[f64]) -> Result<Vec<Vec<bool>>> {
    let info = fisher::fisher_unit(model, theta)?;
    let d = info.dim();
    Ok((0..d)
        .map(|i| (0..d).map(|j| i == j || info.get(i, j).abs() < 1e-9).collect())
        .collect())
}
