//! Deterministic Monte Carlo harness: seedable splitmix64 streams, exact
//! inverse-CDF sampling, and experiments for sampling distributions,
//! interval coverage and asymptotic-variance claims.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frequentist::{self, Estimator};
use crate::model::{CountVector, Data, Family, OutcomeSpace, ParametricModel};
use crate::numeric::{self, NeumaierSum};

/// Name of the generator, recorded in summaries for reproducibility.
pub const GENERATOR: &str = "splitmix64";

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// splitmix64: each call advances the state by the golden-ratio increment
/// and returns a finalized mix of it.
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    /// Replicate i's stream: seed_i = mix(seed + (i+1) * golden), so streams
    /// are independent of k and of evaluation order.
    pub fn for_replicate(seed: u64, i: u64) -> Self {
        let mut base = Rng::new(seed.wrapping_add((i + 1).wrapping_mul(GOLDEN)));
        Rng { state: base.next_u64() }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in the open interval (0, 1); 53-bit resolution.
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64
    }
}

/// One simulation experiment: k replicates of n iid draws at theta_true.
#[derive(Debug, Clone, Serialize)]
pub struct SimConfig {
    pub theta: Vec<f64>,
    pub n: u64,
    pub k: u64,
    pub seed: u64,
}

/// Replicate-level results plus reproducibility metadata.
#[derive(Debug, Clone, Serialize)]
pub struct SimSummary {
    pub generator: &'static str,
    pub seed: u64,
    pub k: u64,
    pub mean: f64,
    /// Unbiased sample variance of the estimates.
    pub variance: f64,
    pub hit_rate: Option<f64>,
    pub mc_stderr: Option<f64>,
    /// Replicates whose Wald interval was degenerate (boundary MLE); they
    /// count as non-covering.
    pub boundary_count: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub estimates: Vec<f64>,
}

fn summarize(estimates: Vec<f64>, seed: u64, keep: bool) -> SimSummary {
    let k = estimates.len() as u64;
    let mean = estimates.iter().copied().collect::<NeumaierSum>().total() / k as f64;
    let variance = if k > 1 {
        estimates.iter().map(|e| (e - mean) * (e - mean)).collect::<NeumaierSum>().total()
            / (k - 1) as f64
    } else {
        0.0
    };
    SimSummary {
        generator: GENERATOR,
        seed,
        k,
        mean,
        variance,
        hit_rate: None,
        mc_stderr: None,
        boundary_count: 0,
        estimates: if keep { estimates } else { Vec::new() },
    }
}

/// One draw from the model by inverse CDF (continuous) or cumulative pmf
/// lookup (finite).
fn draw_real(family: &Family, theta: &[f64], u: f64) -> f64 {
    match family {
        Family::Laplace { scale } => {
            let c = u - 0.5;
            theta[0] - scale * c.signum() * (1.0 - 2.0 * c.abs()).ln()
        }
        Family::Gaussian => theta[0] + theta[1] * numeric::inverse_normal_cdf(u),
        Family::Cauchy => theta[0] + (std::f64::consts::PI * (u - 0.5)).tan(),
        _ => unreachable!("draw_real is only called for continuous families"),
    }
}

/// n categorical draws reduced to counts.
pub fn draw_counts(model: &ParametricModel, theta: &[f64], n: u64, rng: &mut Rng) -> Result<CountVector> {
    let pmf = model.pmf(theta)?;
    let mut counts = vec![0u64; pmf.len()];
    for _ in 0..n {
        let u = rng.next_open01();
        let mut cum = 0.0;
        let mut idx = pmf.len() - 1;
        for (i, &p) in pmf.probs().iter().enumerate() {
            cum += p;
            if u <= cum {
                idx = i;
                break;
            }
        }
        counts[idx] += 1;
    }
    Ok(CountVector::new(counts))
}

fn replicate_data(model: &ParametricModel, config: &SimConfig, i: u64) -> Result<Data> {
    let mut rng = Rng::for_replicate(config.seed, i);
    match model.outcomes() {
        OutcomeSpace::Finite { .. } => {
            Ok(Data::Counts(draw_counts(model, &config.theta, config.n, &mut rng)?))
        }
        OutcomeSpace::Continuous { .. } => {
            let xs = (0..config.n)
                .map(|_| draw_real(model.family(), &config.theta, rng.next_open01()))
                .collect();
            Ok(Data::Reals(xs))
        }
    }
}

fn estimate_from(model: &ParametricModel, data: &Data, estimator: Estimator) -> Result<f64> {
    match (data, estimator) {
        (Data::Reals(xs), Estimator::Mean) => {
            Ok(xs.iter().copied().collect::<NeumaierSum>().total() / xs.len() as f64)
        }
        (Data::Reals(xs), Estimator::Median) => {
            let mut v = xs.clone();
            v.sort_by(f64::total_cmp);
            let k = v.len();
            Ok(if k % 2 == 1 { v[k / 2] } else { 0.5 * (v[k / 2 - 1] + v[k / 2]) })
        }
        (Data::Counts(cv), Estimator::Mean) => match model.family() {
            // sample mean of 0/1 outcomes is the relative frequency
            Family::Bernoulli => Ok(cv.counts()[1] as f64 / cv.n() as f64),
            _ => Err(Error::Unsupported("sample mean needs real-valued data".into())),
        },
        (_, Estimator::Mle) => Ok(frequentist::mle(model, data)?[0]),
        _ => Err(Error::Unsupported(format!("estimator {estimator:?} not applicable"))),
    }
}

/// k replicate estimates of theta under the model; deterministic in
/// (seed, config) regardless of thread count.
pub fn simulate_estimates(
    model: &ParametricModel,
    config: &SimConfig,
    estimator: Estimator,
) -> Result<SimSummary> {
    if config.k < 1 {
        return Err(Error::Unsupported("need at least one replicate".into()));
    }
    let estimates: Result<Vec<f64>> = (0..config.k)
        .into_par_iter()
        .map(|i| estimate_from(model, &replicate_data(model, config, i)?, estimator))
        .collect();
    Ok(summarize(estimates?, config.seed, config.k <= 100_000))
}

/// Fraction of replicates whose Wald confidence interval covers theta_true.
/// For the Gaussian, sigma is treated as known (theta[1]), so the interval
/// is exact at every n.
pub fn coverage_experiment(
    model: &ParametricModel,
    config: &SimConfig,
    level: f64,
) -> Result<SimSummary> {
    let z = frequentist::z_multiplier(level);
    let outcomes: Result<Vec<(bool, bool)>> = (0..config.k)
        .into_par_iter()
        .map(|i| {
            let data = replicate_data(model, config, i)?;
            let covered = match (model.family(), &data) {
                (Family::Gaussian, Data::Reals(xs)) => {
                    let mean = xs.iter().copied().collect::<NeumaierSum>().total() / xs.len() as f64;
                    let hw = z * config.theta[1] / (config.n as f64).sqrt();
                    return Ok(((mean - config.theta[0]).abs() <= hw, false));
                }
                _ => match frequentist::confidence_interval(model, &data, level) {
                    Ok(iv) => Ok(iv.contains(config.theta[0])),
                    Err(Error::BoundaryMle(_)) => Err(()),
                    Err(e) => return Err(e),
                },
            };
            Ok(match covered {
                Ok(hit) => (hit, false),
                Err(()) => (false, true),
            })
        })
        .collect();
    let outcomes = outcomes?;
    let hits = outcomes.iter().filter(|(h, _)| *h).count() as f64;
    let boundary = outcomes.iter().filter(|(_, b)| *b).count() as u64;
    let k = config.k as f64;
    let rate = hits / k;
    Ok(SimSummary {
        generator: GENERATOR,
        seed: config.seed,
        k: config.k,
        mean: rate,
        variance: rate * (1.0 - rate),
        hit_rate: Some(rate),
        mc_stderr: Some((rate * (1.0 - rate) / k).sqrt()),
        boundary_count: boundary,
        estimates: Vec::new(),
    })
}

/// Monte Carlo variance of an estimator against its asymptotic prediction.
#[derive(Debug, Clone, Serialize)]
pub struct VarianceCheck {
    pub mc_variance: f64,
    pub asymptotic_variance: f64,
    pub ratio: f64,
}

pub fn variance_check(
    model: &ParametricModel,
    config: &SimConfig,
    estimator: Estimator,
) -> Result<VarianceCheck> {
    let asym = frequentist::asymptotic_variance(model, estimator, &config.theta)?
        .ok_or_else(|| Error::Unsupported("estimator has no finite asymptotic variance".into()))?
        / config.n as f64;
    let sim = simulate_estimates(model, config, estimator)?;
    Ok(VarianceCheck {
        mc_variance: sim.variance,
        asymptotic_variance: asym,
        ratio: sim.variance / asym,
    })
}
