//! Outcome spaces, probability vectors, count data and the built-in
//! parametric families, together with iid log-likelihoods, sufficient-count
//! reduction and reparameterization.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fisher::FisherMatrix;

/// The set of values a random variable can take.
#[derive(Debug, Clone, PartialEq)]
pub enum OutcomeSpace {
    /// Ordered list of w >= 2 distinct outcome labels.
    Finite { labels: Vec<String> },
    /// Interval of reals, possibly unbounded.
    Continuous { lower: f64, upper: f64 },
}

impl OutcomeSpace {
    pub fn finite(labels: &[&str]) -> Self {
        assert!(labels.len() >= 2);
        OutcomeSpace::Finite { labels: labels.iter().map(|s| s.to_string()).collect() }
    }

    pub fn size(&self) -> Option<usize> {
        match self {
            OutcomeSpace::Finite { labels } => Some(labels.len()),
            OutcomeSpace::Continuous { .. } => None,
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        match self {
            OutcomeSpace::Finite { labels } => Some(labels),
            OutcomeSpace::Continuous { .. } => None,
        }
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels()
            .and_then(|ls| ls.iter().position(|l| l == label))
            .ok_or_else(|| Error::UnknownOutcome(label.to_string()))
    }
}

/// A single observation: index into a finite outcome space, or a real value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    Index(usize),
    Value(f64),
}

/// A pmf over w finite outcomes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::InvalidProbVector("need at least two outcomes".into()));
        }
        if probs.iter().any(|&p| p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidProbVector("negative or non-finite entry".into()));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidProbVector(format!("entries sum to {sum}, not 1")));
        }
        Ok(ProbVector(probs))
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Outcome counts for a finite model: entries sum to the number of trials n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountVector {
    counts: Vec<u64>,
    n: u64,
}

impl CountVector {
    pub fn new(counts: Vec<u64>) -> Self {
        let n = counts.iter().sum();
        CountVector { counts, n }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Relative frequencies y_w / n.
    pub fn empirical(&self) -> Result<ProbVector> {
        if self.n == 0 {
            return Err(Error::EmptyData);
        }
        ProbVector::new(self.counts.iter().map(|&y| y as f64 / self.n as f64).collect())
    }
}

/// Observed data in either reduced or raw form.
#[derive(Debug, Clone)]
pub enum Data {
    Counts(CountVector),
    Labels(Vec<String>),
    Reals(Vec<f64>),
}

/// A smooth bijection between two 1-d parameterizations.
#[derive(Clone)]
pub struct Reparameterization {
    /// New-parameter domain (open interval).
    pub domain: (f64, f64),
    forward: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    inverse: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    derivative: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for Reparameterization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Reparameterization").field("domain", &self.domain).finish()
    }
}

impl Reparameterization {
    pub fn new<F, G, D>(domain: (f64, f64), forward: F, inverse: G, derivative: D) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Reparameterization {
            domain,
            forward: Arc::new(forward),
            inverse: Arc::new(inverse),
            derivative: Arc::new(derivative),
        }
    }

    /// The bent-coin map theta = 1/2 + (1/2)(phi/pi)^3 on phi in (-pi, pi).
    pub fn bent_coin() -> Self {
        Reparameterization::new(
            (-PI, PI),
            |phi| 0.5 + 0.5 * (phi / PI).powi(3),
            |theta| PI * (2.0 * theta - 1.0).cbrt(),
            |phi| 1.5 * phi * phi / PI.powi(3),
        )
    }

    pub fn identity(domain: (f64, f64)) -> Self {
        Reparameterization::new(domain, |x| x, |x| x, |_| 1.0)
    }

    pub fn forward(&self, phi: f64) -> f64 {
        (self.forward)(phi)
    }

    pub fn inverse(&self, theta: f64) -> f64 {
        (self.inverse)(theta)
    }

    pub fn derivative(&self, phi: f64) -> f64 {
        (self.derivative)(phi)
    }

    /// Round-trip and derivative consistency on an interior grid.
    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.domain;
        let grid = 101;
        let mut last = f64::NEG_INFINITY;
        let mut direction = 0.0f64;
        for i in 1..grid {
            let phi = a + (b - a) * i as f64 / grid as f64;
            let theta = self.forward(phi);
            if !theta.is_finite() {
                return Err(Error::BadReparameterization);
            }
            let step = (theta - last).signum();
            if last.is_finite() {
                if direction == 0.0 {
                    direction = step;
                } else if step != direction || step == 0.0 {
                    return Err(Error::BadReparameterization);
                }
            }
            last = theta;
            if (self.forward(self.inverse(theta)) - theta).abs() > 1e-10 {
                return Err(Error::BadReparameterization);
            }
            let h = 1e-6 * (1.0 + phi.abs());
            if phi - h > a && phi + h < b {
                let fd = (self.forward(phi + h) - self.forward(phi - h)) / (2.0 * h);
                let an = self.derivative(phi);
                if (fd - an).abs() > 1e-6 * (1.0 + an.abs()) {
                    return Err(Error::BadReparameterization);
                }
            }
        }
        Ok(())
    }
}

/// Built-in model families.
#[derive(Debug, Clone)]
pub enum Family {
    Bernoulli,
    Binomial { trials: u64 },
    Laplace { scale: f64 },
    /// theta = (mu, sigma)
    Gaussian,
    /// location parameter, unit scale
    Cauchy,
    /// f1(X | v) = [(1-v)^2, 2v(1-v), v^2]
    MptIndividualWord,
    /// f2(X | a) = [(1-a)/2, a, (1-a)/2]
    MptOnlyMixed,
    /// trinomial in (beta1, beta2) with beta3 = 1 - beta1 - beta2
    CategoricalBeta,
    /// stick-breaking trinomial in (gamma1, gamma2)
    CategoricalGamma,
    /// Bernoulli in the angle phi via theta = 1/2 + (1/2)(phi/pi)^3
    BentCoin,
    Reparameterized { base: Box<ParametricModel>, map: Reparameterization },
}

/// A parametric family f(x | theta) with outcome space, open parameter
/// domain and analytic score/information where available.
#[derive(Debug, Clone)]
pub struct ParametricModel {
    name: String,
    family: Family,
    dim: usize,
    domain: Vec<(f64, f64)>,
    outcomes: OutcomeSpace,
}

fn bent_coin_theta(phi: f64) -> f64 {
    0.5 + 0.5 * (phi / PI).powi(3)
}

impl ParametricModel {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Per-coordinate open bounds of the parameter domain.
    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    pub fn outcomes(&self) -> &OutcomeSpace {
        &self.outcomes
    }

    /// True when theta lies strictly inside the parameter domain.
    pub fn contains(&self, theta: &[f64]) -> bool {
        if theta.len() != self.dim {
            return false;
        }
        let in_box = theta
            .iter()
            .zip(&self.domain)
            .all(|(&t, &(lo, hi))| t.is_finite() && t > lo && t < hi);
        // The beta parameterization additionally lives under the simplex edge.
        let in_simplex = match self.family {
            Family::CategoricalBeta => theta[0] + theta[1] < 1.0,
            _ => true,
        };
        in_box && in_simplex
    }

    fn check_domain(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: theta.len() });
        }
        if !self.contains(theta) {
            return Err(Error::OutsideDomain(theta.to_vec(), self.name.clone()));
        }
        Ok(())
    }

    /// log f(x | theta).
    pub fn log_density(&self, x: &Outcome, theta: &[f64]) -> Result<f64> {
        self.check_domain(theta)?;
        self.log_density_unchecked(x, theta)
    }

    fn log_density_unchecked(&self, x: &Outcome, theta: &[f64]) -> Result<f64> {
        match (&self.family, x) {
            (Family::Bernoulli, Outcome::Index(i)) => {
                let t = theta[0];
                Ok(if *i == 1 { t.ln() } else { (1.0 - t).ln() })
            }
            (Family::Binomial { trials }, Outcome::Index(y)) => {
                let (n, y) = (*trials, *y as u64);
                if y > n {
                    return Err(Error::UnknownOutcome(y.to_string()));
                }
                let t = theta[0];
                Ok(crate::numeric::ln_binomial(n, y)
                    + y as f64 * t.ln()
                    + (n - y) as f64 * (1.0 - t).ln())
            }
            (Family::Laplace { scale }, Outcome::Value(v)) => {
                Ok(-(2.0 * scale).ln() - (v - theta[0]).abs() / scale)
            }
            (Family::Gaussian, Outcome::Value(v)) => {
                let (mu, sigma) = (theta[0], theta[1]);
                let z = (v - mu) / sigma;
                Ok(-0.5 * (2.0 * PI).ln() - sigma.ln() - 0.5 * z * z)
            }
            (Family::Cauchy, Outcome::Value(v)) => {
                let u = v - theta[0];
                Ok(-PI.ln() - (1.0 + u * u).ln())
            }
            (Family::MptIndividualWord, Outcome::Index(i)) => {
                let v = theta[0];
                Ok(match i {
                    0 => 2.0 * (1.0 - v).ln(),
                    1 => (2.0 * v * (1.0 - v)).ln(),
                    2 => 2.0 * v.ln(),
                    _ => return Err(Error::UnknownOutcome(i.to_string())),
                })
            }
            (Family::MptOnlyMixed, Outcome::Index(i)) => {
                let a = theta[0];
                Ok(match i {
                    0 | 2 => ((1.0 - a) / 2.0).ln(),
                    1 => a.ln(),
                    _ => return Err(Error::UnknownOutcome(i.to_string())),
                })
            }
            (Family::CategoricalBeta, Outcome::Index(i)) => {
                let (b1, b2) = (theta[0], theta[1]);
                Ok(match i {
                    0 => b1.ln(),
                    1 => b2.ln(),
                    2 => (1.0 - b1 - b2).ln(),
                    _ => return Err(Error::UnknownOutcome(i.to_string())),
                })
            }
            (Family::CategoricalGamma, Outcome::Index(i)) => {
                let (g1, g2) = (theta[0], theta[1]);
                Ok(match i {
                    0 => g1.ln(),
                    1 => ((1.0 - g1) * g2).ln(),
                    2 => ((1.0 - g1) * (1.0 - g2)).ln(),
                    _ => return Err(Error::UnknownOutcome(i.to_string())),
                })
            }
            (Family::BentCoin, Outcome::Index(i)) => {
                let t = bent_coin_theta(theta[0]);
                Ok(if *i == 1 { t.ln() } else { (1.0 - t).ln() })
            }
            (Family::Reparameterized { base, map }, x) => {
                base.log_density(x, &[map.forward(theta[0])])
            }
            _ => Err(Error::Unsupported(format!(
                "outcome {x:?} incompatible with model `{}`",
                self.name
            ))),
        }
    }

    /// log f with theta allowed on the closure of the domain. Used by the
    /// model-selection layer, where boundary MLEs are legitimate and cells
    /// with zero counts never evaluate the density.
    pub fn log_density_at_closure(&self, x: &Outcome, theta: &[f64]) -> Result<f64> {
        if theta.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: theta.len() });
        }
        let in_closed_box = theta
            .iter()
            .zip(&self.domain)
            .all(|(&t, &(lo, hi))| t.is_finite() && t >= lo && t <= hi);
        if !in_closed_box {
            return Err(Error::OutsideDomain(theta.to_vec(), self.name.clone()));
        }
        self.log_density_unchecked(x, theta)
    }

    /// The pmf over all outcomes of a finite model.
    pub fn pmf(&self, theta: &[f64]) -> Result<ProbVector> {
        self.check_domain(theta)?;
        let w = self
            .outcomes
            .size()
            .ok_or_else(|| Error::Unsupported("pmf of a continuous model".into()))?;
        let probs: Result<Vec<f64>> = (0..w)
            .map(|i| self.log_density_unchecked(&Outcome::Index(i), theta).map(f64::exp))
            .collect();
        let mut probs = probs?;
        // Exponentiation leaves sums 1 +/- few ulps; snap within validator slack.
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() <= 1e-12 {
            for p in &mut probs {
                *p /= sum;
            }
        }
        ProbVector::new(probs)
    }

    /// Analytic score d/dtheta log f(x|theta), where the family has one.
    pub fn analytic_score(&self, x: &Outcome, theta: &[f64]) -> Option<Vec<f64>> {
        if !self.contains(theta) {
            return None;
        }
        match (&self.family, x) {
            (Family::Bernoulli, Outcome::Index(i)) => {
                let t = theta[0];
                Some(vec![if *i == 1 { 1.0 / t } else { -1.0 / (1.0 - t) }])
            }
            (Family::Binomial { trials }, Outcome::Index(y)) => {
                let (n, y, t) = (*trials as f64, *y as f64, theta[0]);
                Some(vec![y / t - (n - y) / (1.0 - t)])
            }
            (Family::Laplace { scale }, Outcome::Value(v)) => {
                Some(vec![(v - theta[0]).signum() / scale])
            }
            (Family::Gaussian, Outcome::Value(v)) => {
                let (mu, sigma) = (theta[0], theta[1]);
                let u = v - mu;
                Some(vec![u / (sigma * sigma), (u * u - sigma * sigma) / sigma.powi(3)])
            }
            (Family::Cauchy, Outcome::Value(v)) => {
                let u = v - theta[0];
                Some(vec![2.0 * u / (1.0 + u * u)])
            }
            (Family::MptIndividualWord, Outcome::Index(i)) => {
                let v = theta[0];
                Some(vec![match i {
                    0 => -2.0 / (1.0 - v),
                    1 => 1.0 / v - 1.0 / (1.0 - v),
                    2 => 2.0 / v,
                    _ => return None,
                }])
            }
            (Family::MptOnlyMixed, Outcome::Index(i)) => {
                let a = theta[0];
                Some(vec![match i {
                    0 | 2 => -1.0 / (1.0 - a),
                    1 => 1.0 / a,
                    _ => return None,
                }])
            }
            (Family::CategoricalBeta, Outcome::Index(i)) => {
                let (b1, b2) = (theta[0], theta[1]);
                let b3 = 1.0 - b1 - b2;
                Some(match i {
                    0 => vec![1.0 / b1, 0.0],
                    1 => vec![0.0, 1.0 / b2],
                    2 => vec![-1.0 / b3, -1.0 / b3],
                    _ => return None,
                })
            }
            (Family::CategoricalGamma, Outcome::Index(i)) => {
                let (g1, g2) = (theta[0], theta[1]);
                Some(match i {
                    0 => vec![1.0 / g1, 0.0],
                    1 => vec![-1.0 / (1.0 - g1), 1.0 / g2],
                    2 => vec![-1.0 / (1.0 - g1), -1.0 / (1.0 - g2)],
                    _ => return None,
                })
            }
            (Family::BentCoin, Outcome::Index(i)) => {
                let phi = theta[0];
                let t = bent_coin_theta(phi);
                let dt = 1.5 * phi * phi / PI.powi(3);
                Some(vec![if *i == 1 { dt / t } else { -dt / (1.0 - t) }])
            }
            (Family::Reparameterized { base, map }, x) => {
                let inner = base.analytic_score(x, &[map.forward(theta[0])])?;
                Some(vec![inner[0] * map.derivative(theta[0])])
            }
            _ => None,
        }
    }

    /// Analytic unit Fisher information, where the family has one.
    pub fn analytic_fisher(&self, theta: &[f64]) -> Option<FisherMatrix> {
        if !self.contains(theta) {
            return None;
        }
        let m = match &self.family {
            Family::Bernoulli => {
                let t = theta[0];
                FisherMatrix::scalar(1.0 / (t * (1.0 - t)))
            }
            Family::Binomial { trials } => {
                let t = theta[0];
                FisherMatrix::scalar(*trials as f64 / (t * (1.0 - t)))
            }
            Family::Laplace { scale } => FisherMatrix::scalar(1.0 / (scale * scale)),
            Family::Gaussian => {
                let s2 = theta[1] * theta[1];
                FisherMatrix::from_rows(vec![vec![1.0 / s2, 0.0], vec![0.0, 2.0 / s2]]).ok()?
            }
            Family::Cauchy => FisherMatrix::scalar(0.5),
            Family::MptIndividualWord => {
                let v = theta[0];
                FisherMatrix::scalar(2.0 / (v * (1.0 - v)))
            }
            Family::MptOnlyMixed => {
                let a = theta[0];
                FisherMatrix::scalar(1.0 / (a * (1.0 - a)))
            }
            // Derived from the negative-expected-Hessian form; the matrix as
            // printed in some sources is indefinite at interior points.
            Family::CategoricalBeta => {
                let (b1, b2) = (theta[0], theta[1]);
                let b3 = 1.0 - b1 - b2;
                FisherMatrix::from_rows(vec![
                    vec![(1.0 - b2) / (b1 * b3), 1.0 / b3],
                    vec![1.0 / b3, (1.0 - b1) / (b2 * b3)],
                ])
                .ok()?
            }
            Family::CategoricalGamma => {
                let (g1, g2) = (theta[0], theta[1]);
                FisherMatrix::from_rows(vec![
                    vec![1.0 / (g1 * (1.0 - g1)), 0.0],
                    vec![0.0, (1.0 - g1) / (g2 * (1.0 - g2))],
                ])
                .ok()?
            }
            Family::BentCoin => {
                let phi = theta[0];
                FisherMatrix::scalar(9.0 * phi.powi(4) / (PI.powi(6) - phi.powi(6)))
            }
            Family::Reparameterized { base, map } => {
                let inner = base.analytic_fisher(&[map.forward(theta[0])])?;
                let d = map.derivative(theta[0]);
                FisherMatrix::scalar(inner.scalar_value()? * d * d)
            }
        };
        Some(m)
    }

    /// False for families whose log-density is not twice differentiable in
    /// theta everywhere (Laplace at a data atom).
    pub fn is_smooth(&self) -> bool {
        match &self.family {
            Family::Laplace { .. } => false,
            Family::Reparameterized { base, .. } => base.is_smooth(),
            _ => true,
        }
    }

    /// Quadrature truncation hint for continuous models at a given theta.
    pub fn truncation(&self, theta: &[f64]) -> Option<(f64, f64)> {
        match &self.family {
            Family::Laplace { scale } => Some((theta[0] - 40.0 * scale, theta[0] + 40.0 * scale)),
            Family::Gaussian => {
                let (mu, sigma) = (theta[0], theta[1]);
                Some((mu - 40.0 * sigma, mu + 40.0 * sigma))
            }
            Family::Cauchy => Some((-1e4, 1e4)),
            Family::Reparameterized { base, map } => base.truncation(&[map.forward(theta[0])]),
            _ => None,
        }
    }
}

fn unit_interval() -> Vec<(f64, f64)> {
    vec![(0.0, 1.0)]
}

/// Construct a built-in model from its identifier, e.g. `bernoulli`,
/// `binomial(10)`, `laplace(1.0)`.
pub fn builtin_model(name: &str) -> Result<ParametricModel> {
    let name = name.trim();
    let (head, arg) = match name.find('(') {
        Some(i) if name.ends_with(')') => {
            (&name[..i], Some(name[i + 1..name.len() - 1].trim().to_string()))
        }
        _ => (name, None),
    };
    let parse_f64 = |a: &Option<String>| -> Result<f64> {
        a.as_deref()
            .and_then(|s| s.parse::<f64>().ok())
            .ok_or_else(|| Error::UnknownModel(name.to_string()))
    };
    let model = match head {
        "bernoulli" => ParametricModel {
            name: "bernoulli".into(),
            family: Family::Bernoulli,
            dim: 1,
            domain: unit_interval(),
            outcomes: OutcomeSpace::finite(&["0", "1"]),
        },
        "binomial" => {
            let trials = arg
                .as_deref()
                .and_then(|s| s.parse::<u64>().ok())
                .filter(|&n| n >= 1)
                .ok_or_else(|| Error::UnknownModel(name.to_string()))?;
            let labels: Vec<String> = (0..=trials).map(|y| y.to_string()).collect();
            ParametricModel {
                name: format!("binomial({trials})"),
                family: Family::Binomial { trials },
                dim: 1,
                domain: unit_interval(),
                outcomes: OutcomeSpace::Finite { labels },
            }
        }
        "laplace" => {
            let scale = parse_f64(&arg)?;
            if scale <= 0.0 {
                return Err(Error::UnknownModel(name.to_string()));
            }
            ParametricModel {
                name: format!("laplace({scale})"),
                family: Family::Laplace { scale },
                dim: 1,
                domain: vec![(f64::NEG_INFINITY, f64::INFINITY)],
                outcomes: OutcomeSpace::Continuous {
                    lower: f64::NEG_INFINITY,
                    upper: f64::INFINITY,
                },
            }
        }
        "gaussian" => ParametricModel {
            name: "gaussian".into(),
            family: Family::Gaussian,
            dim: 2,
            domain: vec![(f64::NEG_INFINITY, f64::INFINITY), (0.0, f64::INFINITY)],
            outcomes: OutcomeSpace::Continuous {
                lower: f64::NEG_INFINITY,
                upper: f64::INFINITY,
            },
        },
        "cauchy" => ParametricModel {
            name: "cauchy".into(),
            family: Family::Cauchy,
            dim: 1,
            domain: vec![(f64::NEG_INFINITY, f64::INFINITY)],
            outcomes: OutcomeSpace::Continuous {
                lower: f64::NEG_INFINITY,
                upper: f64::INFINITY,
            },
        },
        "mpt-individual-word" => ParametricModel {
            name: "mpt-individual-word".into(),
            family: Family::MptIndividualWord,
            dim: 1,
            domain: unit_interval(),
            outcomes: OutcomeSpace::finite(&["L", "M", "R"]),
        },
        "mpt-only-mixed" => ParametricModel {
            name: "mpt-only-mixed".into(),
            family: Family::MptOnlyMixed,
            dim: 1,
            domain: unit_interval(),
            outcomes: OutcomeSpace::finite(&["L", "M", "R"]),
        },
        "categorical-beta" => ParametricModel {
            name: "categorical-beta".into(),
            family: Family::CategoricalBeta,
            dim: 2,
            domain: vec![(0.0, 1.0), (0.0, 1.0)],
            outcomes: OutcomeSpace::finite(&["L", "M", "R"]),
        },
        "categorical-gamma" => ParametricModel {
            name: "categorical-gamma".into(),
            family: Family::CategoricalGamma,
            dim: 2,
            domain: vec![(0.0, 1.0), (0.0, 1.0)],
            outcomes: OutcomeSpace::finite(&["L", "M", "R"]),
        },
        "bent-coin" => ParametricModel {
            name: "bent-coin".into(),
            family: Family::BentCoin,
            dim: 1,
            domain: vec![(-PI, PI)],
            outcomes: OutcomeSpace::finite(&["0", "1"]),
        },
        _ => return Err(Error::UnknownModel(name.to_string())),
    };
    Ok(model)
}

/// Sum of log f(x_i | theta) over iid observations, with 0 * log 0 = 0 for
/// zero counts on zero-probability cells.
pub fn loglik_iid(model: &ParametricModel, data: &Data, theta: &[f64]) -> Result<f64> {
    if !model.contains(theta) {
        return Err(Error::OutsideDomain(theta.to_vec(), model.name().to_string()));
    }
    match data {
        Data::Counts(cv) => {
            let w = model
                .outcomes
                .size()
                .ok_or_else(|| Error::Unsupported("counts for a continuous model".into()))?;
            if cv.counts().len() != w {
                return Err(Error::DimensionMismatch { expected: w, got: cv.counts().len() });
            }
            let mut total = 0.0;
            for (i, &y) in cv.counts().iter().enumerate() {
                if y == 0 {
                    continue;
                }
                total += y as f64 * model.log_density_unchecked(&Outcome::Index(i), theta)?;
            }
            Ok(total)
        }
        Data::Labels(labels) => {
            let counts = sufficient_counts_from_labels(model, labels)?;
            loglik_iid(model, &Data::Counts(counts), theta)
        }
        Data::Reals(values) => {
            let mut total = 0.0;
            for &v in values {
                total += model.log_density_unchecked(&Outcome::Value(v), theta)?;
            }
            Ok(total)
        }
    }
}

fn sufficient_counts_from_labels(model: &ParametricModel, raw: &[String]) -> Result<CountVector> {
    let w = model
        .outcomes
        .size()
        .ok_or_else(|| Error::Unsupported("sufficient counts need a finite model".into()))?;
    let mut counts = vec![0u64; w];
    for label in raw {
        counts[model.outcomes.index_of(label)?] += 1;
    }
    Ok(CountVector::new(counts))
}

/// Reduce a raw outcome sequence to per-label counts.
pub fn sufficient_counts<S: AsRef<str>>(model: &ParametricModel, raw: &[S]) -> Result<CountVector> {
    let labels: Vec<String> = raw.iter().map(|s| s.as_ref().to_string()).collect();
    sufficient_counts_from_labels(model, &labels)
}

/// New model with logf'(x, phi) = logf(x, h(phi)); same outcome space.
pub fn reparameterize(model: &ParametricModel, map: Reparameterization) -> Result<ParametricModel> {
    if model.dim() != 1 {
        return Err(Error::Unsupported("reparameterize needs a 1-d model".into()));
    }
    map.validate()?;
    // The map must send the new domain into the old one.
    let (a, b) = map.domain;
    for i in 1..100 {
        let phi = a + (b - a) * i as f64 / 100.0;
        if !model.contains(&[map.forward(phi)]) {
            return Err(Error::BadReparameterization);
        }
    }
    Ok(ParametricModel {
        name: format!("{}@reparam", model.name()),
        dim: 1,
        domain: vec![map.domain],
        outcomes: model.outcomes.clone(),
        family: Family::Reparameterized { base: Box::new(model.clone()), map },
    })
}

/// JSON-facing model description: {name, params}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub params: serde_json::Map<String, serde_json::Value>,
}

impl ModelSpec {
    pub fn to_model(&self) -> Result<ParametricModel> {
        let ident = match self.name.as_str() {
            "binomial" => {
                let n = self.params.get("n").and_then(|v| v.as_u64());
                match n {
                    Some(n) => format!("binomial({n})"),
                    None => return Err(Error::UnknownModel(self.name.clone())),
                }
            }
            "laplace" => {
                let b = self.params.get("b").and_then(|v| v.as_f64());
                match b {
                    Some(b) => format!("laplace({b})"),
                    None => return Err(Error::UnknownModel(self.name.clone())),
                }
            }
            other => other.to_string(),
        };
        builtin_model(&ident)
    }
}
