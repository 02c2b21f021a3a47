//! Fisher-information toolkit: information computation, Wald inference,
//! Jeffreys priors on grids, information-sphere geometry, MDL model
//! selection, coding-theoretic quantities, and a deterministic Monte Carlo
//! harness.

pub mod coding;
pub mod error;
pub mod fisher;
pub mod frequentist;
pub mod geometry;
pub mod jeffreys;
pub mod mdl;
pub mod model;
pub mod montecarlo;
pub mod numeric;

pub use error::{Error, Result};
pub use fisher::{FisherMatrix, ScoreMethod};
pub use frequentist::{Estimator, TestResult, WaldInterval};
pub use jeffreys::{GridDistribution, IntervalProbability};
pub use mdl::{Criterion, CriterionValue, Preference, SelectionReport};
pub use model::{
    builtin_model, CountVector, Data, ModelSpec, Outcome, OutcomeSpace, ParametricModel,
    ProbVector, Reparameterization,
};
pub use montecarlo::{SimConfig, SimSummary};
