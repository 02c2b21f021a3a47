//! Model selection: AIC, BIC, the Fisher-information approximation (FIA) to
//! the normalized maximum likelihood, exact NML by enumeration, description
//! lengths, and non-decision curves over the w=3 simplex.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frequentist;
use crate::model::{CountVector, Data, Family, Outcome, ParametricModel};
use crate::numeric::{ln_multinomial, NeumaierSum};

/// Which penalized criterion to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Criterion {
    Aic,
    Bic,
    Fia,
    NmlDl,
}

/// One model's score under one criterion, split into its additive parts.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionValue {
    pub model: String,
    pub goodness_of_fit: f64,
    pub dimensionality: f64,
    pub geometric_complexity: f64,
    pub total: f64,
    pub criterion: Criterion,
}

/// Verdict of a model comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Preference {
    Model(String),
    Tie,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelectionReport {
    pub values: Vec<CriterionValue>,
    pub preferred: Preference,
    pub tie_tolerance: f64,
}

/// Default tie tolerance between criterion totals, in nats.
pub const TIE_TOLERANCE: f64 = 0.5;

/// MLE from relative frequencies, allowing boundary values; real-valued
/// frequencies supported (used by the relaxed non-decision computation).
fn mle_relaxed(model: &ParametricModel, freq: &[f64]) -> Result<Vec<f64>> {
    match model.family() {
        Family::Bernoulli => Ok(vec![freq[1]]),
        Family::MptIndividualWord => Ok(vec![(freq[1] + 2.0 * freq[2]) / 2.0]),
        Family::MptOnlyMixed => Ok(vec![freq[1]]),
        Family::CategoricalBeta => Ok(vec![freq[0], freq[1]]),
        Family::CategoricalGamma => {
            let g2 = if freq[0] < 1.0 { freq[1] / (1.0 - freq[0]) } else { 0.0 };
            Ok(vec![freq[0], g2])
        }
        _ => Err(Error::Unsupported(format!(
            "no frequency-based MLE for `{}`",
            model.name()
        ))),
    }
}

/// -sum_w y_w log f(w | theta) with 0 log 0 = 0; theta may sit on the
/// domain boundary.
fn neg_loglik_closure(model: &ParametricModel, weights: &[f64], theta: &[f64]) -> Result<f64> {
    let mut total = 0.0;
    for (i, &y) in weights.iter().enumerate() {
        if y == 0.0 {
            continue;
        }
        total -= y * model.log_density_at_closure(&Outcome::Index(i), theta)?;
    }
    Ok(total)
}

fn check_finite_1d(model: &ParametricModel, w: usize) -> Result<()> {
    match model.outcomes().size() {
        Some(size) if size == w => Ok(()),
        Some(size) => Err(Error::DimensionMismatch { expected: w, got: size }),
        None => Err(Error::Unsupported("criterion needs a finite outcome space".into())),
    }
}

/// -log f(x^n | theta_hat), the first FIA term, in nats.
pub fn goodness_of_fit(model: &ParametricModel, data: &CountVector) -> Result<f64> {
    check_finite_1d(model, data.counts().len())?;
    if data.n() == 0 {
        return Err(Error::EmptyData);
    }
    let weights: Vec<f64> = data.counts().iter().map(|&y| y as f64).collect();
    let freq: Vec<f64> = weights.iter().map(|y| y / data.n() as f64).collect();
    let theta = match mle_relaxed(model, &freq) {
        Ok(t) => t,
        // fall back on the general MLE for families without a frequency form
        Err(_) => frequentist::mle(model, &Data::Counts(data.clone()))?,
    };
    neg_loglik_closure(model, &weights, &theta)
}

fn value(
    model: &ParametricModel,
    gof: f64,
    n: u64,
    criterion: Criterion,
    geometric: f64,
) -> CriterionValue {
    let d = model.dim() as f64;
    let (gof_term, dim_term, geom_term) = match criterion {
        Criterion::Aic => (2.0 * gof, 2.0 * d, 0.0),
        Criterion::Bic => (2.0 * gof, d * (n as f64).ln(), 0.0),
        Criterion::Fia => (gof, d / 2.0 * (n as f64 / (2.0 * PI)).ln(), geometric),
        Criterion::NmlDl => (gof, 0.0, geometric),
    };
    CriterionValue {
        model: model.name().to_string(),
        goodness_of_fit: gof,
        dimensionality: dim_term,
        geometric_complexity: geom_term,
        total: gof_term + dim_term + geom_term,
        criterion,
    }
}

pub fn aic(model: &ParametricModel, data: &CountVector) -> Result<CriterionValue> {
    Ok(value(model, goodness_of_fit(model, data)?, data.n(), Criterion::Aic, 0.0))
}

pub fn bic(model: &ParametricModel, data: &CountVector) -> Result<CriterionValue> {
    Ok(value(model, goodness_of_fit(model, data)?, data.n(), Criterion::Bic, 0.0))
}

/// FIA = GoF + (d/2) log(n / 2 pi) + log V.
pub fn fia(model: &ParametricModel, data: &CountVector) -> Result<CriterionValue> {
    let volume = crate::geometry::model_volume(model)?;
    Ok(value(model, goodness_of_fit(model, data)?, data.n(), Criterion::Fia, volume.ln()))
}

/// The exact NML code for all length-n samples from a finite model,
/// summarized at the count-vector level (the multinomial coefficient counts
/// the sequences sharing a count vector).
#[derive(Debug, Clone, Serialize)]
pub struct NmlCode {
    pub model: String,
    pub n: u64,
    /// log of sum over sequences of f(x^n | theta_hat(x^n)).
    pub log_denominator: f64,
}

impl NmlCode {
    /// Probability the NML code assigns to a count vector.
    pub fn code(&self, model: &ParametricModel, counts: &CountVector) -> Result<f64> {
        Ok(self.log_code(model, counts)?.exp())
    }

    /// log code(y) = log multinomial(n; y) - GoF(y) - log denominator.
    pub fn log_code(&self, model: &ParametricModel, counts: &CountVector) -> Result<f64> {
        if counts.n() != self.n {
            return Err(Error::InvalidCounts(format!(
                "count vector has n={}, code built for n={}",
                counts.n(),
                self.n
            )));
        }
        let gof = goodness_of_fit(model, counts)?;
        Ok(ln_multinomial(self.n, counts.counts()) - gof - self.log_denominator)
    }
}

/// Visit all count vectors over `w` outcomes summing to `n` that share a
/// fixed first coordinate, in lexicographic order.
fn visit_rest(prefix: &mut Vec<u64>, w: usize, remaining: u64, f: &mut impl FnMut(&[u64])) {
    if prefix.len() == w - 1 {
        prefix.push(remaining);
        f(prefix);
        prefix.pop();
        return;
    }
    for y in 0..=remaining {
        prefix.push(y);
        visit_rest(prefix, w, remaining - y, f);
        prefix.pop();
    }
}

/// Exact NML denominator by enumeration over count vectors.
pub fn nml_exact(model: &ParametricModel, n: u64) -> Result<NmlCode> {
    let w = model
        .outcomes()
        .size()
        .ok_or_else(|| Error::Unsupported("NML enumeration needs a finite model".into()))?;
    if w > 6 {
        return Err(Error::Unsupported(format!("NML enumeration capped at w=6, got {w}")));
    }
    if n == 0 || n > 10_000 {
        return Err(Error::InvalidCounts(format!("NML enumeration needs 1 <= n <= 1e4, got {n}")));
    }
    // log-sum-exp in two passes, parallel over the first coordinate; partial
    // results are combined in index order so the reduction is deterministic.
    let per_first = |pass_max: Option<f64>| -> Result<Vec<f64>> {
        (0..=n)
            .into_par_iter()
            .map(|y0| {
                let mut acc = match pass_max {
                    Some(_) => 0.0,
                    None => f64::NEG_INFINITY,
                };
                let mut comp = NeumaierSum::default();
                let mut prefix = vec![y0];
                let mut first_err: Option<Error> = None;
                visit_rest(&mut prefix, w, n - y0, &mut |counts| {
                    if first_err.is_some() {
                        return;
                    }
                    let cv = CountVector::new(counts.to_vec());
                    match goodness_of_fit(model, &cv) {
                        Ok(gof) => {
                            let term = ln_multinomial(n, counts) - gof;
                            match pass_max {
                                Some(m) => comp.add((term - m).exp()),
                                None => acc = acc.max(term),
                            }
                        }
                        Err(e) => first_err = Some(e),
                    }
                });
                if let Some(e) = first_err {
                    return Err(e);
                }
                Ok(match pass_max {
                    Some(_) => comp.total(),
                    None => acc,
                })
            })
            .collect()
    };
    let max = per_first(None)?.into_iter().fold(f64::NEG_INFINITY, f64::max);
    let mut total = NeumaierSum::default();
    for part in per_first(Some(max))? {
        total.add(part);
    }
    Ok(NmlCode { model: model.name().to_string(), n, log_denominator: max + total.total().ln() })
}

/// Exact description length -log code(data) = GoF + log denominator.
pub fn description_length(model: &ParametricModel, data: &CountVector) -> Result<CriterionValue> {
    let code = nml_exact(model, data.n())?;
    Ok(value(
        model,
        goodness_of_fit(model, data)?,
        data.n(),
        Criterion::NmlDl,
        code.log_denominator,
    ))
}

/// Score every model under one criterion and pick the smallest total, with a
/// tie verdict when the top two are within `TIE_TOLERANCE` nats.
pub fn select(
    models: &[&ParametricModel],
    data: &CountVector,
    criterion: Criterion,
) -> Result<SelectionReport> {
    if models.len() < 2 {
        return Err(Error::Unsupported("selection needs at least two models".into()));
    }
    let values: Result<Vec<CriterionValue>> = models
        .iter()
        .map(|m| match criterion {
            Criterion::Aic => aic(m, data),
            Criterion::Bic => bic(m, data),
            Criterion::Fia => fia(m, data),
            Criterion::NmlDl => description_length(m, data),
        })
        .collect();
    let values = values?;
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total.total_cmp(&values[j].total));
    let best = &values[order[0]];
    let runner_up = &values[order[1]];
    let preferred = if (runner_up.total - best.total).abs() <= TIE_TOLERANCE {
        Preference::Tie
    } else {
        Preference::Model(best.model.clone())
    };
    Ok(SelectionReport { values, preferred, tie_tolerance: TIE_TOLERANCE })
}

/// Goodness of fit of relaxed (real-valued) counts y = n * p.
pub fn gof_relaxed(model: &ParametricModel, freq: &[f64], n: u64) -> Result<f64> {
    check_finite_1d(model, freq.len())?;
    let theta = mle_relaxed(model, freq)?;
    let weights: Vec<f64> = freq.iter().map(|&p| p * n as f64).collect();
    neg_loglik_closure(model, &weights, &theta)
}

/// The data-independent FIA complexity (d/2) log(n / 2 pi) + log V.
pub fn fia_complexity(model: &ParametricModel, n: u64) -> Result<f64> {
    let volume = crate::geometry::model_volume(model)?;
    Ok(model.dim() as f64 / 2.0 * (n as f64 / (2.0 * PI)).ln() + volume.ln())
}

/// FIA of relaxed counts over the simplex.
pub fn fia_relaxed(model: &ParametricModel, freq: &[f64], n: u64) -> Result<f64> {
    Ok(gof_relaxed(model, freq, n)? + fia_complexity(model, n)?)
}

/// BIC of relaxed counts, on the same scale as `fia_relaxed` (halved, so the
/// two differ only in the complexity terms).
pub fn bic_relaxed_half(model: &ParametricModel, freq: &[f64], n: u64) -> Result<f64> {
    Ok(gof_relaxed(model, freq, n)? + model.dim() as f64 / 2.0 * (n as f64).ln())
}

/// Points (p_L, p_M, p_R) where the two models' relaxed FIA values are equal:
/// the zero-level set of the difference, located by sign-change bisection
/// along mesh lines.
pub fn non_decision_curve(
    model_a: &ParametricModel,
    model_b: &ParametricModel,
    n: u64,
    resolution: usize,
) -> Result<Vec<[f64; 3]>> {
    if model_a.outcomes().size() != Some(3) || model_b.outcomes().size() != Some(3) {
        return Err(Error::Unsupported("non-decision curves are defined over w=3".into()));
    }
    let r = resolution.max(8);
    let complexity_gap = fia_complexity(model_a, n)? - fia_complexity(model_b, n)?;
    let diff = |pl: f64, pm: f64| -> Result<f64> {
        let freq = [pl, pm, 1.0 - pl - pm];
        Ok(gof_relaxed(model_a, &freq, n)? - gof_relaxed(model_b, &freq, n)? + complexity_gap)
    };
    let eps = 1e-9;
    let mut points: Vec<[f64; 3]> = Vec::new();
    let mut bisect = |fixed_is_pm: bool, fixed: f64, mut lo: f64, mut hi: f64| -> Result<()> {
        let eval = |v: f64| if fixed_is_pm { diff(v, fixed) } else { diff(fixed, v) };
        let (mut flo, mut fhi) = (eval(lo)?, eval(hi)?);
        if flo == 0.0 {
            fhi = flo; // degenerate; fall through to midpoint emit
        }
        if flo.signum() == fhi.signum() {
            return Ok(());
        }
        while hi - lo > 1e-6 {
            let mid = 0.5 * (lo + hi);
            let fmid = eval(mid)?;
            if fmid == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if fmid.signum() == flo.signum() {
                lo = mid;
                flo = fmid;
            } else {
                hi = mid;
            }
        }
        let v = 0.5 * (lo + hi);
        let (pl, pm) = if fixed_is_pm { (v, fixed) } else { (fixed, v) };
        points.push([pl, pm, 1.0 - pl - pm]);
        Ok(())
    };
    for j in 1..r {
        let fixed = j as f64 / r as f64;
        for i in 1..r {
            let (a, b) = (i as f64 / r as f64, (i + 1) as f64 / r as f64);
            // horizontal sweep: p_M fixed, p_L varies
            if b + fixed < 1.0 - eps {
                bisect(true, fixed, a, b)?;
            }
            // vertical sweep: p_L fixed, p_M varies
            if b + fixed < 1.0 - eps {
                bisect(false, fixed, a, b)?;
            }
        }
    }
    points.sort_by(|p, q| p[0].total_cmp(&q[0]).then(p[1].total_cmp(&q[1])));
    points.dedup_by(|p, q| (p[0] - q[0]).abs() < 1e-9 && (p[1] - q[1]).abs() < 1e-9);
    Ok(points)
}

/// Preferred model (by relaxed FIA sign) for every integer count vector with
/// total n over w=3 outcomes.
pub fn classification_map(
    model_a: &ParametricModel,
    model_b: &ParametricModel,
    n: u64,
) -> Result<Vec<(CountVector, Preference)>> {
    let mut out = Vec::new();
    for yl in 0..=n {
        for ym in 0..=(n - yl) {
            let cv = CountVector::new(vec![yl, ym, n - yl - ym]);
            let a = fia(model_a, &cv)?.total;
            let b = fia(model_b, &cv)?.total;
            let pref = if (a - b).abs() <= TIE_TOLERANCE {
                Preference::Tie
            } else if a < b {
                Preference::Model(model_a.name().to_string())
            } else {
                Preference::Model(model_b.name().to_string())
            };
            out.push((cv, pref));
        }
    }
    Ok(out)
}
