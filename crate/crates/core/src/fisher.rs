//! Fisher information: scalar and matrix, analytic and numeric, in the
//! score-variance and negative-expected-Hessian forms.

use nalgebra::DMatrix;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::{Outcome, OutcomeSpace, ParametricModel};
use crate::numeric::{self, QuadTol};

/// Symmetric positive-semidefinite d x d information matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FisherMatrix {
    entries: DMatrix<f64>,
}

impl FisherMatrix {
    pub fn scalar(value: f64) -> Self {
        FisherMatrix { entries: DMatrix::from_element(1, 1, value) }
    }

    /// Build from rows, enforcing symmetry (1e-9) and eigenvalues >= -1e-9.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: 0 });
        }
        let m = DMatrix::from_fn(d, d, |i, j| rows[i][j]);
        let scale = 1.0 + m.amax();
        if (&m - m.transpose()).amax() > 1e-9 * scale {
            return Err(Error::Unsupported("information matrix is not symmetric".into()));
        }
        let sym = (&m + m.transpose()) * 0.5;
        let eig = sym.clone().symmetric_eigen();
        if eig.eigenvalues.iter().any(|&l| l < -1e-9 * scale) {
            return Err(Error::Unsupported(
                "information matrix has a significantly negative eigenvalue".into(),
            ));
        }
        Ok(FisherMatrix { entries: sym })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    /// The scalar value when d = 1.
    pub fn scalar_value(&self) -> Option<f64> {
        (self.dim() == 1).then(|| self.entries[(0, 0)])
    }

    pub fn det(&self) -> f64 {
        self.entries.determinant()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim()).map(|i| (0..self.dim()).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn scaled(&self, factor: f64) -> FisherMatrix {
        FisherMatrix { entries: &self.entries * factor }
    }

    pub fn max_abs_diff(&self, other: &FisherMatrix) -> f64 {
        (&self.entries - &other.entries).amax()
    }
}

impl Serialize for FisherMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = self.rows();
        let mut seq = serializer.serialize_seq(Some(rows.len()))?;
        for row in rows {
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

/// How to obtain the score function inside an expectation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoreMethod {
    Analytic,
    Numeric,
}

const SCORE_STEP: f64 = 1e-6;
const HESSIAN_STEP: f64 = 1e-4;

fn score_at(
    model: &ParametricModel,
    x: &Outcome,
    theta: &[f64],
    method: ScoreMethod,
) -> Result<Vec<f64>> {
    match method {
        ScoreMethod::Analytic => model.analytic_score(x, theta).ok_or_else(|| {
            Error::Unsupported(format!("no analytic score for `{}`", model.name()))
        }),
        ScoreMethod::Numeric => Ok(numeric::central_gradient(
            |t| model.log_density(x, t).unwrap_or(f64::NAN),
            theta,
            SCORE_STEP,
        )),
    }
}

/// E[g(X)] under f(.|theta), entry-wise, for a vector-valued g.
fn expect_vector<G>(model: &ParametricModel, theta: &[f64], len: usize, g: G) -> Result<Vec<f64>>
where
    G: Fn(&Outcome) -> Result<Vec<f64>>,
{
    match model.outcomes() {
        OutcomeSpace::Finite { .. } => {
            let pmf = model.pmf(theta)?;
            let mut acc = vec![0.0; len];
            for (i, &p) in pmf.probs().iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                let v = g(&Outcome::Index(i))?;
                for (a, gi) in acc.iter_mut().zip(v) {
                    *a += p * gi;
                }
            }
            Ok(acc)
        }
        OutcomeSpace::Continuous { .. } => {
            let (lo, hi) = model.truncation(theta).ok_or_else(|| {
                Error::Unsupported(format!("no truncation hint for `{}`", model.name()))
            })?;
            // Pre-split the window: a single wide panel can sample the
            // integrand only where it vanishes and "converge" to zero.
            let panels = 32;
            let width = (hi - lo) / panels as f64;
            (0..len)
                .map(|k| {
                    let mut total = 0.0;
                    for j in 0..panels {
                        total += numeric::integrate(
                            |x| {
                                let out = Outcome::Value(x);
                                let f =
                                    model.log_density(&out, theta).map(f64::exp).unwrap_or(0.0);
                                if f == 0.0 {
                                    return 0.0;
                                }
                                g(&out).map(|v| v[k] * f).unwrap_or(f64::NAN)
                            },
                            lo + width * j as f64,
                            lo + width * (j + 1) as f64,
                            QuadTol::default(),
                        )?;
                    }
                    Ok(total)
                })
                .collect()
        }
    }
}

/// E[score] at theta; zero for a correctly specified model.
pub fn score_mean(model: &ParametricModel, theta: &[f64], method: ScoreMethod) -> Result<Vec<f64>> {
    expect_vector(model, theta, model.dim(), |x| score_at(model, x, theta, method))
}

/// Score-variance form E[l' l'^T] of the unit Fisher information.
pub fn fisher_score_form(
    model: &ParametricModel,
    theta: &[f64],
    method: ScoreMethod,
) -> Result<FisherMatrix> {
    let d = model.dim();
    let flat = expect_vector(model, theta, d * d, |x| {
        let s = score_at(model, x, theta, method)?;
        let mut outer = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                outer[i * d + j] = s[i] * s[j];
            }
        }
        Ok(outer)
    })?;
    let rows: Vec<Vec<f64>> = (0..d).map(|i| flat[i * d..(i + 1) * d].to_vec()).collect();
    FisherMatrix::from_rows(rows)
}

/// Negative-expected-Hessian form -E[d^2/dtheta^2 log f]. Families flagged
/// non-smooth (Laplace) fall back to the score-variance form.
pub fn fisher_hessian_form(model: &ParametricModel, theta: &[f64]) -> Result<FisherMatrix> {
    if !model.is_smooth() {
        let method = if model.analytic_score(&probe_outcome(model), theta).is_some() {
            ScoreMethod::Analytic
        } else {
            ScoreMethod::Numeric
        };
        return fisher_score_form(model, theta, method);
    }
    let d = model.dim();
    let flat = expect_vector(model, theta, d * d, |x| {
        let h = numeric::central_second_derivative_matrix(
            |t| model.log_density(x, t).unwrap_or(f64::NAN),
            theta,
            HESSIAN_STEP,
        );
        Ok(h.into_iter().flatten().collect())
    })?;
    let rows: Vec<Vec<f64>> =
        (0..d).map(|i| flat[i * d..(i + 1) * d].iter().map(|v| -v).collect()).collect();
    FisherMatrix::from_rows(rows)
}

fn probe_outcome(model: &ParametricModel) -> Outcome {
    match model.outcomes() {
        OutcomeSpace::Finite { .. } => Outcome::Index(0),
        OutcomeSpace::Continuous { .. } => Outcome::Value(0.5),
    }
}

/// Preferred unit information: analytic when the family has one, otherwise
/// the numeric score-variance form.
pub fn fisher_unit(model: &ParametricModel, theta: &[f64]) -> Result<FisherMatrix> {
    if let Some(m) = model.analytic_fisher(theta) {
        return Ok(m);
    }
    fisher_score_form(model, theta, ScoreMethod::Numeric)
}

/// Information about theta in n iid observations: n times the unit information.
pub fn fisher_iid(model: &ParametricModel, theta: &[f64], n: u64) -> Result<FisherMatrix> {
    assert!(n >= 1);
    Ok(fisher_unit(model, theta)?.scaled(n as f64))
}

/// Comparison of the information in the full sample against a statistic.
#[derive(Debug, Clone, Serialize)]
pub struct SufficiencyReport {
    pub full_information: f64,
    pub statistic_information: f64,
    pub sufficient: bool,
}

/// Information inequality I_{X^n}(theta) >= I_T(theta); the statistic is
/// sufficient when the two agree to 1e-8 relative.
pub fn statistic_information(
    base: &ParametricModel,
    statistic_model: &ParametricModel,
    theta: &[f64],
    n: u64,
) -> Result<SufficiencyReport> {
    if base.dim() != statistic_model.dim() {
        return Err(Error::DimensionMismatch { expected: base.dim(), got: statistic_model.dim() });
    }
    if base.dim() != 1 {
        return Err(Error::Unsupported("statistic comparison is 1-d only".into()));
    }
    let full = fisher_iid(base, theta, n)?.scalar_value().unwrap();
    let stat = fisher_unit(statistic_model, theta)?.scalar_value().unwrap();
    let sufficient = (full - stat).abs() <= 1e-8 * full.abs().max(1.0);
    Ok(SufficiencyReport { full_information: full, statistic_information: stat, sufficient })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::builtin_model;

    #[test]
    fn bernoulli_half_is_four() {
        let m = builtin_model("bernoulli").unwrap();
        for method in [ScoreMethod::Analytic, ScoreMethod::Numeric] {
            let i = fisher_score_form(&m, &[0.5], method).unwrap().scalar_value().unwrap();
            assert!((i - 4.0).abs() < 1e-6, "{method:?}: {i}");
        }
        let i = fisher_hessian_form(&m, &[0.3]).unwrap().scalar_value().unwrap();
        assert!((i - 1.0 / 0.21).abs() < 1e-4, "{i}");
    }

    #[test]
    fn gaussian_unit_information_matrix() {
        let m = builtin_model("gaussian").unwrap();
        let i = fisher_score_form(&m, &[0.0, 1.0], ScoreMethod::Analytic).unwrap();
        assert!((i.get(0, 0) - 1.0).abs() < 1e-8);
        assert!((i.get(1, 1) - 2.0).abs() < 1e-8);
        assert!(i.get(0, 1).abs() < 1e-9);
        let h = fisher_hessian_form(&m, &[0.0, 1.0]).unwrap();
        assert!(h.max_abs_diff(&i) < 1e-5);
    }

    #[test]
    fn categorical_gamma_is_diagonal() {
        let m = builtin_model("categorical-gamma").unwrap();
        let i = fisher_score_form(&m, &[1.0 / 3.0, 0.5], ScoreMethod::Analytic).unwrap();
        assert!((i.get(0, 0) - 4.5).abs() < 1e-10);
        assert!((i.get(1, 1) - 8.0 / 3.0).abs() < 1e-10);
        assert!(i.get(0, 1).abs() < 1e-12);
    }

    #[test]
    fn laplace_hessian_form_uses_fallback() {
        let m = builtin_model("laplace(1.0)").unwrap();
        let i = fisher_hessian_form(&m, &[0.0]).unwrap().scalar_value().unwrap();
        assert!((i - 1.0).abs() < 1e-7, "{i}");
    }

    #[test]
    fn cauchy_information_is_half() {
        let m = builtin_model("cauchy").unwrap();
        let i = fisher_hessian_form(&m, &[0.0]).unwrap().scalar_value().unwrap();
        assert!((i - 0.5).abs() < 1e-5, "{i}");
    }

    #[test]
    fn binomial_statistic_is_sufficient() {
        let base = builtin_model("bernoulli").unwrap();
        let stat = builtin_model("binomial(10)").unwrap();
        let rep = statistic_information(&base, &stat, &[0.37], 10).unwrap();
        assert!(rep.sufficient, "{rep:?}");
        let single = statistic_information(&base, &base, &[0.37], 10).unwrap();
        assert!(!single.sufficient);
        assert!((single.full_information / single.statistic_information - 10.0).abs() < 1e-8);
    }
}
