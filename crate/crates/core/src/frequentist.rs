//! Maximum likelihood estimation, Wald prediction/confidence intervals,
//! null-hypothesis tests and information-based experiment design.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fisher;
use crate::model::{Data, Family, ParametricModel};
use crate::numeric;

/// Symmetric interval `center +/- halfwidth` at a coverage level.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WaldInterval {
    pub center: f64,
    pub halfwidth: f64,
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
}

impl WaldInterval {
    fn new(center: f64, halfwidth: f64, level: f64) -> Self {
        WaldInterval { center, halfwidth, lower: center - halfwidth, upper: center + halfwidth, level }
    }

    pub fn contains(&self, value: f64) -> bool {
        value >= self.lower && value <= self.upper
    }
}

/// Outcome of a Wald null-hypothesis test.
#[derive(Debug, Clone, Serialize)]
pub struct TestResult {
    pub estimate: f64,
    pub interval: WaldInterval,
    pub reject: bool,
    pub level: f64,
}

/// z-multiplier for a two-sided coverage level. 0.95 and 0.68 are pinned to
/// the conventional 1.96 and 1.0 used in the worked arithmetic; other levels
/// go through the inverse normal CDF.
pub fn z_multiplier(level: f64) -> f64 {
    if (level - 0.95).abs() < 1e-12 {
        1.96
    } else if (level - 0.68).abs() < 1e-12 {
        1.0
    } else {
        numeric::inverse_normal_cdf(0.5 * (1.0 + level))
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let k = values.len();
    if k % 2 == 1 {
        values[k / 2]
    } else {
        0.5 * (values[k / 2 - 1] + values[k / 2])
    }
}

/// Maximum likelihood estimate. Closed form where the family has one;
/// generic 1-d families by golden-section refinement of the log-likelihood.
pub fn mle(model: &ParametricModel, data: &Data) -> Result<Vec<f64>> {
    match (model.family(), data) {
        (Family::Bernoulli, Data::Counts(cv)) | (Family::BentCoin, Data::Counts(cv)) => {
            if cv.n() == 0 {
                return Err(Error::EmptyData);
            }
            let theta = cv.counts()[1] as f64 / cv.n() as f64;
            match model.family() {
                Family::BentCoin => Ok(vec![PI * (2.0 * theta - 1.0).cbrt()]),
                _ => Ok(vec![theta]),
            }
        }
        (Family::Binomial { trials }, Data::Counts(cv)) => {
            if cv.n() == 0 {
                return Err(Error::EmptyData);
            }
            // counts over the outcomes y = 0..trials of repeated binomial draws
            let total: u64 = cv.counts().iter().enumerate().map(|(y, &c)| y as u64 * c).sum();
            Ok(vec![total as f64 / (*trials as f64 * cv.n() as f64)])
        }
        (Family::MptIndividualWord, Data::Counts(cv)) => {
            if cv.n() == 0 {
                return Err(Error::EmptyData);
            }
            let (ym, yr) = (cv.counts()[1] as f64, cv.counts()[2] as f64);
            Ok(vec![(ym + 2.0 * yr) / (2.0 * cv.n() as f64)])
        }
        (Family::MptOnlyMixed, Data::Counts(cv)) => {
            if cv.n() == 0 {
                return Err(Error::EmptyData);
            }
            Ok(vec![cv.counts()[1] as f64 / cv.n() as f64])
        }
        (Family::CategoricalBeta, Data::Counts(cv)) => {
            if cv.n() == 0 {
                return Err(Error::EmptyData);
            }
            let n = cv.n() as f64;
            Ok(vec![cv.counts()[0] as f64 / n, cv.counts()[1] as f64 / n])
        }
        (Family::CategoricalGamma, Data::Counts(cv)) => {
            if cv.n() == 0 {
                return Err(Error::EmptyData);
            }
            let n = cv.n() as f64;
            let yl = cv.counts()[0] as f64;
            let g1 = yl / n;
            let g2 = if (n - yl) > 0.0 { cv.counts()[1] as f64 / (n - yl) } else { 0.0 };
            Ok(vec![g1, g2])
        }
        (Family::Laplace { .. }, Data::Reals(xs)) => {
            if xs.is_empty() {
                return Err(Error::EmptyData);
            }
            let mut v = xs.clone();
            Ok(vec![median(&mut v)])
        }
        (Family::Gaussian, Data::Reals(xs)) => {
            if xs.is_empty() {
                return Err(Error::EmptyData);
            }
            let n = xs.len() as f64;
            let mean = xs.iter().sum::<f64>() / n;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
            Ok(vec![mean, var.sqrt()])
        }
        (Family::Cauchy, Data::Reals(xs)) => {
            if xs.is_empty() {
                return Err(Error::EmptyData);
            }
            // No closed form; refine around the sample median.
            let mut v = xs.clone();
            let m = median(&mut v);
            let ll = |t: f64| crate::model::loglik_iid(model, data, &[t]).unwrap_or(f64::NEG_INFINITY);
            Ok(vec![numeric::golden_section_max(ll, m - 10.0, m + 10.0, 1e-10)])
        }
        (_, Data::Labels(labels)) => {
            let counts = crate::model::sufficient_counts(model, labels)?;
            mle(model, &Data::Counts(counts))
        }
        (_, data) => {
            // Generic 1-d model on a bounded domain.
            if model.dim() != 1 {
                return Err(Error::Unsupported(format!("no MLE rule for `{}`", model.name())));
            }
            let (lo, hi) = model.domain()[0];
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(Error::Unsupported(format!("no MLE rule for `{}`", model.name())));
            }
            let delta = (hi - lo) * 1e-9;
            let ll =
                |t: f64| crate::model::loglik_iid(model, data, &[t]).unwrap_or(f64::NEG_INFINITY);
            Ok(vec![numeric::golden_section_max(ll, lo + delta, hi - delta, 1e-10)])
        }
    }
}

/// Information about the scalar parameter of interest used by the Wald
/// machinery: the full information for 1-d families, and the mu-entry of the
/// Gaussian matrix (sigma treated as known).
fn interest_information(model: &ParametricModel, theta: &[f64]) -> Result<f64> {
    let info = match model.family() {
        Family::Gaussian => fisher::fisher_unit(model, theta)?.get(0, 0),
        _ => {
            if model.dim() != 1 {
                return Err(Error::Unsupported("Wald interval needs a scalar parameter".into()));
            }
            fisher::fisher_unit(model, theta)?.scalar_value().unwrap()
        }
    };
    if !(info > 0.0) {
        return Err(Error::NonPositiveInformation);
    }
    Ok(info)
}

/// Where the MLE will land under theta0: theta0 +/- z sqrt(I(theta0)^-1 / n).
pub fn prediction_interval(
    model: &ParametricModel,
    theta0: &[f64],
    n: u64,
    level: f64,
) -> Result<WaldInterval> {
    assert!(level > 0.0 && level < 1.0, "level must be in (0,1)");
    if !model.contains(theta0) {
        return Err(Error::OutsideDomain(theta0.to_vec(), model.name().to_string()));
    }
    let info = interest_information(model, theta0)?;
    let halfwidth = z_multiplier(level) * (1.0 / (info * n as f64)).sqrt();
    Ok(WaldInterval::new(theta0[0], halfwidth, level))
}

/// Wald confidence interval: the prediction interval evaluated at the MLE.
pub fn confidence_interval(model: &ParametricModel, data: &Data, level: f64) -> Result<WaldInterval> {
    let theta_hat = mle(model, data)?;
    if !model.contains(&theta_hat) {
        return Err(Error::BoundaryMle(format!(
            "estimate {theta_hat:?}; the Wald interval degenerates at the domain boundary"
        )));
    }
    let n = match data {
        Data::Counts(cv) => cv.n(),
        Data::Labels(ls) => ls.len() as u64,
        Data::Reals(xs) => xs.len() as u64,
    };
    prediction_interval(model, &theta_hat, n, level)
}

/// Wald test of H0: theta = theta0; rejects when the MLE falls outside the
/// prediction interval under theta0.
pub fn null_test(
    model: &ParametricModel,
    data: &Data,
    theta0: &[f64],
    level: f64,
) -> Result<TestResult> {
    let interval = prediction_interval(model, theta0, data_size(data), 1.0 - level)?;
    let estimate = mle(model, data)?[0];
    Ok(TestResult { estimate, interval, reject: !interval.contains(estimate), level })
}

fn data_size(data: &Data) -> u64 {
    match data {
        Data::Counts(cv) => cv.n(),
        Data::Labels(ls) => ls.len() as u64,
        Data::Reals(xs) => xs.len() as u64,
    }
}

/// Point estimators whose large-sample behavior the design and simulation
/// machinery reasons about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Estimator {
    Mle,
    Mean,
    Median,
}

/// n x (asymptotic variance) of an estimator, or None when it does not
/// stabilize (Cauchy sample mean).
pub fn asymptotic_variance(
    model: &ParametricModel,
    estimator: Estimator,
    theta: &[f64],
) -> Result<Option<f64>> {
    let v = match (model.family(), estimator) {
        (Family::Gaussian, Estimator::Mean) | (Family::Gaussian, Estimator::Mle) => {
            theta[1] * theta[1]
        }
        (Family::Gaussian, Estimator::Median) => PI / 2.0 * theta[1] * theta[1],
        (Family::Laplace { scale }, Estimator::Mean) => 2.0 * scale * scale,
        // The Laplace MLE is the sample median.
        (Family::Laplace { scale }, Estimator::Median) | (Family::Laplace { scale }, Estimator::Mle) => {
            scale * scale
        }
        (Family::Cauchy, Estimator::Mean) => return Ok(None),
        // 1 / (4 f(median)^2) with f(0) = 1/pi.
        (Family::Cauchy, Estimator::Median) => PI * PI / 4.0,
        (Family::Cauchy, Estimator::Mle) => 2.0,
        (_, Estimator::Mle) => 1.0 / interest_information(model, theta)?,
        (Family::Bernoulli, Estimator::Mean) => theta[0] * (1.0 - theta[0]),
        _ => {
            return Err(Error::Unsupported(format!(
                "no asymptotic variance for {estimator:?} under `{}`",
                model.name()
            )))
        }
    };
    Ok(Some(v))
}

/// One estimator row in an asymptotic-variance comparison table.
#[derive(Debug, Clone, Serialize)]
pub struct EstimatorRow {
    pub estimator: Estimator,
    /// n * Var of the estimator; None when undefined.
    pub asymptotic_variance: Option<f64>,
}

/// CLT-vs-MLE comparison for the location families of the appendix examples.
/// Gaussian rows are reported at unit scale.
pub fn estimator_comparison(model: &ParametricModel) -> Result<Vec<EstimatorRow>> {
    let theta = match model.family() {
        Family::Gaussian => vec![0.0, 1.0],
        Family::Laplace { .. } | Family::Cauchy => vec![0.0],
        _ => return Err(Error::Unsupported("comparison covers gaussian, laplace, cauchy".into())),
    };
    let estimators = match model.family() {
        Family::Gaussian => vec![Estimator::Mean, Estimator::Mle],
        Family::Laplace { .. } => vec![Estimator::Mean, Estimator::Median],
        _ => vec![Estimator::Mean, Estimator::Median, Estimator::Mle],
    };
    estimators
        .into_iter()
        .map(|e| {
            Ok(EstimatorRow { estimator: e, asymptotic_variance: asymptotic_variance(model, e, &theta)? })
        })
        .collect()
}

/// Which parameter value to design against.
#[derive(Debug, Clone, Copy)]
pub enum DesignPoint {
    /// Least informative theta: FI minimizer over a 1e-3 grid of the domain.
    WorstCase,
    At(f64),
}

/// Smallest n such that z(coverage) * sqrt(v / n) <= halfwidth, where v is
/// the estimator's asymptotic variance at the design point.
pub fn design_sample_size(
    model: &ParametricModel,
    halfwidth: f64,
    coverage: f64,
    point: DesignPoint,
    estimator: Estimator,
) -> Result<u64> {
    assert!(halfwidth > 0.0, "halfwidth must be positive");
    let theta = match point {
        DesignPoint::At(t) => {
            if model.family_is_gaussian() { vec![t, 1.0] } else { vec![t] }
        }
        DesignPoint::WorstCase => worst_case_theta(model)?,
    };
    let variance = asymptotic_variance(model, estimator, &theta)?
        .ok_or(Error::NonPositiveInformation)?;
    let z = z_multiplier(coverage);
    let exact = z * z * variance / (halfwidth * halfwidth);
    // Tolerate float dust just above an integer target.
    Ok((exact - 1e-9).ceil().max(1.0) as u64)
}

fn worst_case_theta(model: &ParametricModel) -> Result<Vec<f64>> {
    if model.dim() != 1 {
        return Err(Error::Unsupported("worst-case design is 1-d only".into()));
    }
    let (lo, hi) = model.domain()[0];
    if !(lo.is_finite() && hi.is_finite()) {
        // Location families have constant information.
        return Ok(if model.family_is_gaussian() { vec![0.0, 1.0] } else { vec![0.0] });
    }
    let steps = ((hi - lo) / 1e-3).round() as usize;
    let mut best = (f64::INFINITY, lo + (hi - lo) / 2.0);
    for i in 1..steps {
        let t = lo + (hi - lo) * i as f64 / steps as f64;
        let info = interest_information(model, &[t])?;
        if info < best.0 {
            best = (info, t);
        }
    }
    Ok(vec![best.1])
}

impl ParametricModel {
    fn family_is_gaussian(&self) -> bool {
        matches!(self.family(), Family::Gaussian)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{builtin_model, CountVector};

    fn round2(x: f64) -> f64 {
        (x * 100.0).round() / 100.0
    }

    #[test]
    fn binomial_mle_is_seven_tenths() {
        let m = builtin_model("binomial(10)").unwrap();
        let mut counts = vec![0u64; 11];
        counts[7] = 1;
        let t = mle(&m, &Data::Counts(CountVector::new(counts))).unwrap();
        assert!((t[0] - 0.7).abs() < 1e-15);
    }

    #[test]
    fn mpt_mles() {
        let m1 = builtin_model("mpt-individual-word").unwrap();
        let t = mle(&m1, &Data::Counts(CountVector::new(vec![3, 3, 3]))).unwrap();
        assert_eq!(t[0], 0.5);
        let m2 = builtin_model("mpt-only-mixed").unwrap();
        let a = mle(&m2, &Data::Counts(CountVector::new(vec![12, 1, 17]))).unwrap();
        assert!((a[0] - 1.0 / 30.0).abs() < 1e-15);
    }

    #[test]
    fn prediction_interval_under_the_null() {
        let m = builtin_model("bernoulli").unwrap();
        let iv = prediction_interval(&m, &[0.5], 10, 0.95).unwrap();
        assert_eq!((round2(iv.lower), round2(iv.upper)), (0.19, 0.81));
    }

    #[test]
    fn confidence_intervals_match_reported_values() {
        let m = builtin_model("bernoulli").unwrap();
        let iv = confidence_interval(&m, &Data::Counts(CountVector::new(vec![3, 7])), 0.95).unwrap();
        assert!((round2(iv.lower) - 0.42).abs() <= 0.01 && (round2(iv.upper) - 0.98).abs() <= 0.01);
        let iv6 = confidence_interval(&m, &Data::Counts(CountVector::new(vec![4, 6])), 0.95).unwrap();
        assert!((iv6.lower - 0.296).abs() < 5e-3 && (iv6.upper - 0.904).abs() < 5e-3);
        // symmetric at y = 5
        let iv5 = confidence_interval(&m, &Data::Counts(CountVector::new(vec![5, 5])), 0.95).unwrap();
        assert!((iv5.lower + iv5.upper - 1.0).abs() < 1e-12);
    }

    #[test]
    fn boundary_mle_is_an_error() {
        let m = builtin_model("bernoulli").unwrap();
        let r = confidence_interval(&m, &Data::Counts(CountVector::new(vec![0, 10])), 0.95);
        assert!(matches!(r, Err(Error::BoundaryMle(_))));
    }

    #[test]
    fn null_test_decisions() {
        let m = builtin_model("bernoulli").unwrap();
        for (tails, heads, reject) in [(3u64, 7u64, false), (1, 9, true), (8, 2, false)] {
            let data = Data::Counts(CountVector::new(vec![tails, heads]));
            let res = null_test(&m, &data, &[0.5], 0.05).unwrap();
            assert_eq!(res.reject, reject, "y={heads}");
        }
    }

    #[test]
    fn design_sample_sizes() {
        let bern = builtin_model("bernoulli").unwrap();
        let n = design_sample_size(&bern, 0.1, 0.68, DesignPoint::WorstCase, Estimator::Mle).unwrap();
        assert_eq!(n, 25);

        let lap = builtin_model(&format!("laplace({})", 1.0 / 2f64.sqrt())).unwrap();
        let n = design_sample_size(&lap, 0.196, 0.95, DesignPoint::At(0.0), Estimator::Mle).unwrap();
        assert_eq!(n, 50);

        let cauchy = builtin_model("cauchy").unwrap();
        let n_mle =
            design_sample_size(&cauchy, 0.196, 0.95, DesignPoint::At(0.0), Estimator::Mle).unwrap();
        let n_med =
            design_sample_size(&cauchy, 0.196, 0.95, DesignPoint::At(0.0), Estimator::Median).unwrap();
        assert_eq!((n_mle, n_med), (200, 247));
    }

    #[test]
    fn design_is_monotone_in_halfwidth() {
        let m = builtin_model("bernoulli").unwrap();
        let mut last = 0;
        for hw in [0.2, 0.1, 0.05, 0.02] {
            let n = design_sample_size(&m, hw, 0.95, DesignPoint::WorstCase, Estimator::Mle).unwrap();
            assert!(n >= last);
            last = n;
        }
    }

    #[test]
    fn halfwidth_scales_inverse_sqrt_n() {
        let m = builtin_model("bernoulli").unwrap();
        let a = prediction_interval(&m, &[0.3], 10, 0.95).unwrap().halfwidth;
        let b = prediction_interval(&m, &[0.3], 40, 0.95).unwrap().halfwidth;
        assert!((a / 2.0 - b).abs() < 1e-12);
    }

    #[test]
    fn laplace_comparison() {
        let m = builtin_model("laplace(1.0)").unwrap();
        let rows = estimator_comparison(&m).unwrap();
        assert_eq!(rows[0].asymptotic_variance, Some(2.0));
        assert_eq!(rows[1].asymptotic_variance, Some(1.0));
    }
}
