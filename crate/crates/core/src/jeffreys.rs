//! Priors and posteriors as densities on a 1-d grid: uniform and
//! Jeffreys's-rule priors, Bayesian updating, change of variables, interval
//! probabilities and quantiles.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fisher;
use crate::model::{CountVector, Data, ParametricModel, Reparameterization};
use crate::numeric::NeumaierSum;

/// Density values over a strictly increasing grid of parameter values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridDistribution {
    nodes: Vec<f64>,
    density: Vec<f64>,
    domain: (f64, f64),
}

/// Probability mass assigned to a sub-interval of the domain.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct IntervalProbability {
    pub interval: (f64, f64),
    pub mass: f64,
}

pub const DEFAULT_GRID: usize = 2048;

impl GridDistribution {
    pub fn new(nodes: Vec<f64>, density: Vec<f64>, domain: (f64, f64)) -> Result<Self> {
        if nodes.len() != density.len() || nodes.len() < 2 {
            return Err(Error::DimensionMismatch { expected: nodes.len(), got: density.len() });
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Unsupported("grid nodes must be strictly increasing".into()));
        }
        if density.iter().any(|&d| d < 0.0 || !d.is_finite()) {
            return Err(Error::Unsupported("grid density must be finite and nonnegative".into()));
        }
        if nodes[0] < domain.0 || *nodes.last().unwrap() > domain.1 {
            return Err(Error::IntervalOutsideDomain(domain.0, domain.1));
        }
        Ok(GridDistribution { nodes, density, domain })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    /// Trapezoid integral of the density over the grid.
    pub fn total_mass(&self) -> f64 {
        let mut s = NeumaierSum::default();
        for i in 1..self.nodes.len() {
            s.add((self.nodes[i] - self.nodes[i - 1]) * 0.5 * (self.density[i] + self.density[i - 1]));
        }
        s.total()
    }

    /// Linearly interpolated density; clamps to the edge values outside the
    /// node range (the sub-node-scale gap to the open boundary).
    pub fn density_at(&self, x: f64) -> f64 {
        let n = self.nodes.len();
        if x <= self.nodes[0] {
            return self.density[0];
        }
        if x >= self.nodes[n - 1] {
            return self.density[n - 1];
        }
        let i = match self.nodes.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => return self.density[i],
            Err(i) => i,
        };
        let (x0, x1) = (self.nodes[i - 1], self.nodes[i]);
        let w = (x - x0) / (x1 - x0);
        self.density[i - 1] * (1.0 - w) + self.density[i] * w
    }

    fn cumulative(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut s = NeumaierSum::default();
        out.push(0.0);
        for i in 1..self.nodes.len() {
            s.add((self.nodes[i] - self.nodes[i - 1]) * 0.5 * (self.density[i] + self.density[i - 1]));
            out.push(s.total());
        }
        out
    }
}

fn grid_nodes(domain: (f64, f64), g: usize, inset: f64) -> Vec<f64> {
    let (a, b) = domain;
    let (lo, hi) = (a + inset, b - inset);
    (0..g).map(|i| lo + (hi - lo) * i as f64 / (g - 1) as f64).collect()
}

/// Uniform prior 1/(b-a) on an open interval.
pub fn uniform_prior(domain: (f64, f64), g: usize) -> Result<GridDistribution> {
    if g < 64 {
        return Err(Error::Unsupported("grid size must be at least 64".into()));
    }
    let (a, b) = domain;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Unsupported("uniform prior needs a bounded interval".into()));
    }
    let nodes = grid_nodes(domain, g, (b - a) * 1e-9);
    let density = vec![1.0 / (b - a); g];
    GridDistribution::new(nodes, density, domain)
}

/// Jeffreys's-rule prior sqrt(I(theta)) / V, with the normalizer V computed
/// by singularity-aware quadrature; returns (distribution, V).
///
/// The grid is inset from the open boundary by half a grid cell rather than
/// the uniform prior's hairline offset: sqrt(I) typically diverges at the
/// boundary, and nodes placed essentially on it would dominate trapezoid
/// sums without carrying real mass.
pub fn jeffreys_prior(model: &ParametricModel, g: usize) -> Result<(GridDistribution, f64)> {
    if g < 64 {
        return Err(Error::Unsupported("grid size must be at least 64".into()));
    }
    if model.dim() != 1 {
        return Err(Error::Unsupported("Jeffreys grid priors are 1-d only".into()));
    }
    let volume = crate::geometry::model_volume(model)?;
    if !volume.is_finite() || volume <= 0.0 {
        return Err(Error::QuadratureFailure { achieved: volume, requested: 1e-9 });
    }
    let domain = model.domain()[0];
    let nodes = grid_nodes(domain, g, (domain.1 - domain.0) / (2.0 * g as f64));
    let density: Result<Vec<f64>> = nodes
        .iter()
        .map(|&t| {
            let info = fisher::fisher_unit(model, &[t])?.scalar_value().unwrap();
            Ok(info.max(0.0).sqrt() / volume)
        })
        .collect();
    Ok((GridDistribution::new(nodes, density?, domain)?, volume))
}

/// Node-wise prior times likelihood, renormalized by the trapezoid rule.
/// Computed in log space with max-subtraction.
pub fn grid_posterior(
    prior: &GridDistribution,
    model: &ParametricModel,
    data: &CountVector,
) -> Result<GridDistribution> {
    if model.dim() != 1 {
        return Err(Error::Unsupported("grid posteriors are 1-d only".into()));
    }
    let (a, b) = model.domain()[0];
    let (pa, pb) = prior.domain();
    let scale = (b - a).abs().max(1.0);
    if (a - pa).abs() > 1e-9 * scale || (b - pb).abs() > 1e-9 * scale {
        return Err(Error::Unsupported("prior domain must match the model domain".into()));
    }
    let data = Data::Counts(data.clone());
    let mut logs = Vec::with_capacity(prior.nodes().len());
    for (&t, &d) in prior.nodes().iter().zip(prior.density()) {
        if d == 0.0 {
            logs.push(f64::NEG_INFINITY);
            continue;
        }
        let ll = crate::model::loglik_iid(model, &data, &[t])?;
        logs.push(d.ln() + ll);
    }
    let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Err(Error::ZeroMarginalLikelihood);
    }
    let unnorm: Vec<f64> = logs.iter().map(|&l| (l - max).exp()).collect();
    let tmp = GridDistribution::new(prior.nodes().to_vec(), unnorm, prior.domain())?;
    let mass = tmp.total_mass();
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::ZeroMarginalLikelihood);
    }
    let density = tmp.density.iter().map(|&d| d / mass).collect();
    GridDistribution::new(tmp.nodes, density, tmp.domain)
}

/// Change of variables through theta = h(phi): the grid maps node-wise and
/// the density picks up the inverse Jacobian, new(theta) = old(phi) / |h'(phi)|.
pub fn pushforward(
    dist: &GridDistribution,
    map: &Reparameterization,
) -> Result<GridDistribution> {
    let (a, b) = dist.domain();
    let (ma, mb) = map.domain;
    let scale = (b - a).abs().max(1.0);
    if (a - ma).abs() > 1e-6 * scale || (b - mb).abs() > 1e-6 * scale {
        return Err(Error::BadReparameterization);
    }
    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(dist.nodes().len());
    for (&phi, &d) in dist.nodes().iter().zip(dist.density()) {
        let jac = map.derivative(phi).abs();
        if jac == 0.0 || !jac.is_finite() {
            return Err(Error::BadReparameterization);
        }
        pairs.push((map.forward(phi), d / jac));
    }
    let increasing = pairs.windows(2).all(|w| w[1].0 > w[0].0);
    let decreasing = pairs.windows(2).all(|w| w[1].0 < w[0].0);
    if !increasing && !decreasing {
        return Err(Error::BadReparameterization);
    }
    if decreasing {
        pairs.reverse();
    }
    let (lo, hi) = (map.forward(ma), map.forward(mb));
    let domain = (lo.min(hi), lo.max(hi));
    let (nodes, density): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    GridDistribution::new(nodes, density, domain)
}

/// Trapezoid mass over [a, b], with interpolated partial panels at the ends.
pub fn interval_probability(
    dist: &GridDistribution,
    interval: (f64, f64),
) -> Result<IntervalProbability> {
    let (a, b) = interval;
    let (lo, hi) = dist.domain();
    if !(a < b) || a < lo || b > hi {
        return Err(Error::IntervalOutsideDomain(a, b));
    }
    let mut s = NeumaierSum::default();
    let nodes = dist.nodes();
    for i in 1..nodes.len() {
        let (x0, x1) = (nodes[i - 1], nodes[i]);
        if x1 <= a || x0 >= b {
            continue;
        }
        let (c0, c1) = (x0.max(a), x1.min(b));
        s.add((c1 - c0) * 0.5 * (dist.density_at(c0) + dist.density_at(c1)));
    }
    Ok(IntervalProbability { interval, mass: s.total().clamp(0.0, 1.0) })
}

/// q-quantile by linear interpolation of the cumulative trapezoid mass,
/// normalized by the grid's total mass.
pub fn quantile(dist: &GridDistribution, q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Unsupported(format!("quantile level {q} outside (0,1)")));
    }
    let cdf = dist.cumulative();
    let total = *cdf.last().unwrap();
    if !(total > 0.0) {
        return Err(Error::ZeroMarginalLikelihood);
    }
    let target = q * total;
    let nodes = dist.nodes();
    for i in 1..cdf.len() {
        if cdf[i] >= target {
            let span = cdf[i] - cdf[i - 1];
            let w = if span > 0.0 { (target - cdf[i - 1]) / span } else { 0.0 };
            return Ok(nodes[i - 1] + w * (nodes[i] - nodes[i - 1]));
        }
    }
    Ok(*nodes.last().unwrap())
}
