//! fisherkit command-line interface: JSON results on stdout, CSV figure data.

use clap::{Args, Parser, Subcommand, ValueEnum};
use fisherkit_core::montecarlo::{coverage_experiment, SimConfig};
use fisherkit_core::{
    builtin_model, coding, fisher, frequentist, geometry, jeffreys, mdl, numeric, CountVector,
    Data, ParametricModel, ProbVector, ScoreMethod,
};
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "fisherkit",
    version,
    about = "Fisher information, Wald inference, Jeffreys priors, information geometry, and MDL model selection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fisher information matrix of a model at a parameter point
    Fisher(FisherArgs),
    /// Wald confidence interval from observed data
    Ci(CiArgs),
    /// Wald test of a point null hypothesis
    Test(TestArgs),
    /// Prediction interval for the MLE under a hypothesized parameter
    PredictInterval(PredictArgs),
    /// Sample size needed for a target interval halfwidth
    Design(DesignArgs),
    /// Jeffreys prior summary: normalizer, quantiles, interval mass
    Jeffreys(JeffreysArgs),
    /// Grid posterior from a uniform or Jeffreys prior
    Posterior(PosteriorArgs),
    /// Information-geometry utilities on the probability sphere
    #[command(subcommand)]
    Geometry(GeometryCommand),
    /// Minimum description length model selection
    #[command(subcommand)]
    Mdl(MdlCommand),
    /// Entropy, cross-entropy, KL divergence, and code lengths
    Coding(CodingArgs),
    /// Seeded Monte Carlo coverage experiment
    Simulate(SimulateArgs),
    /// Deterministic CSV data behind the standard figures
    Figure(FigureArgs),
}

#[derive(Args)]
struct FisherArgs {
    /// Model name (e.g. bernoulli, binomial(10), gaussian, mpt1, mpt2)
    #[arg(long)]
    model: String,
    /// Parameter point
    #[arg(long, num_args = 1.., required = true, allow_negative_numbers = true)]
    theta: Vec<f64>,
    /// Sample size multiplying the unit information
    #[arg(long, default_value_t = 1)]
    n: u64,
    /// Computation route
    #[arg(long, value_enum, default_value_t = Method::Analytic)]
    method: Method,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Analytic,
    Numeric,
    Hessian,
}

#[derive(Args)]
struct CiArgs {
    #[arg(long)]
    model: String,
    /// Outcome counts; for bernoulli given as (successes, failures)
    #[arg(long, num_args = 1.., conflicts_with = "reals")]
    counts: Vec<u64>,
    /// Real-valued observations (continuous models)
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    reals: Vec<f64>,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
}

#[derive(Args)]
struct TestArgs {
    #[arg(long)]
    model: String,
    #[arg(long, num_args = 1.., conflicts_with = "reals")]
    counts: Vec<u64>,
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    reals: Vec<f64>,
    /// Null value of the interest parameter
    #[arg(long, num_args = 1.., required = true, allow_negative_numbers = true)]
    null: Vec<f64>,
    /// Significance level of the test
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    model: String,
    #[arg(long, num_args = 1.., required = true, allow_negative_numbers = true)]
    theta: Vec<f64>,
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
}

#[derive(Args)]
struct DesignArgs {
    #[arg(long)]
    model: String,
    /// Target interval halfwidth
    #[arg(long)]
    halfwidth: f64,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    /// Design point; defaults to the worst case over the domain
    #[arg(long, allow_negative_numbers = true)]
    at: Option<f64>,
    #[arg(long, value_enum, default_value_t = EstimatorArg::Mle)]
    estimator: EstimatorArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimatorArg {
    Mle,
    Mean,
    Median,
}

#[derive(Args)]
struct JeffreysArgs {
    #[arg(long)]
    model: String,
    #[arg(long, default_value_t = jeffreys::DEFAULT_GRID)]
    grid: usize,
    /// Optional interval (two endpoints) whose prior mass to report
    #[arg(long, num_args = 2, allow_negative_numbers = true)]
    interval: Vec<f64>,
}

#[derive(Args)]
struct PosteriorArgs {
    #[arg(long)]
    model: String,
    #[arg(long, num_args = 1.., required = true)]
    counts: Vec<u64>,
    #[arg(long, value_enum, default_value_t = PriorArg::Jeffreys)]
    prior: PriorArg,
    #[arg(long, default_value_t = jeffreys::DEFAULT_GRID)]
    grid: usize,
    /// Optional interval (two endpoints) whose posterior mass to report
    #[arg(long, num_args = 2, allow_negative_numbers = true)]
    interval: Vec<f64>,
    /// Quantile levels to report
    #[arg(long, num_args = 1..)]
    quantile: Vec<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PriorArg {
    Uniform,
    Jeffreys,
}

#[derive(Subcommand)]
enum GeometryCommand {
    /// Fisher-information volume of the model manifold
    Volume {
        #[arg(long)]
        model: String,
    },
    /// Tangent vector of the embedded model curve
    Tangent {
        #[arg(long)]
        model: String,
        #[arg(long, num_args = 1.., required = true, allow_negative_numbers = true)]
        theta: Vec<f64>,
        #[arg(long, allow_negative_numbers = true)]
        dtheta: f64,
    },
    /// Embed a pmf as m = 2 sqrt(p) on the radius-2 sphere
    Embed {
        #[arg(long, num_args = 2.., required = true)]
        probs: Vec<f64>,
    },
    /// Fisher-Rao arc length of a 1-d model between two parameter values
    Arclength {
        #[arg(long)]
        model: String,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
    },
    /// KL projection of an empirical pmf onto a 1-d model
    Project {
        #[arg(long)]
        model: String,
        #[arg(long, num_args = 2.., required = true)]
        probs: Vec<f64>,
    },
}

#[derive(Subcommand)]
enum MdlCommand {
    /// Score two or more models on the same data and pick a winner
    Compare {
        #[arg(long, num_args = 2.., required = true)]
        models: Vec<String>,
        #[arg(long, num_args = 1.., required = true)]
        counts: Vec<u64>,
        #[arg(long, value_enum, default_value_t = CriterionArg::Fia)]
        criterion: CriterionArg,
    },
    /// Exact normalized maximum likelihood code for one count vector
    Nml {
        #[arg(long)]
        model: String,
        #[arg(long, num_args = 1.., required = true)]
        counts: Vec<u64>,
    },
    /// Non-decision curve between two models at sample size n
    Noncurve {
        #[arg(long, num_args = 2, default_values = ["mpt1", "mpt2"])]
        models: Vec<String>,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CriterionArg {
    Aic,
    Bic,
    Fia,
    Nml,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct CodingArgs {
    /// Source distribution
    #[arg(long, num_args = 2.., required = true)]
    probs: Vec<f64>,
    /// Optional coding distribution for cross-entropy and KL divergence
    #[arg(long, num_args = 2..)]
    against: Vec<f64>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    model: String,
    #[arg(long, num_args = 1.., required = true, allow_negative_numbers = true)]
    theta: Vec<f64>,
    #[arg(long)]
    n: u64,
    /// Number of replicates
    #[arg(long)]
    k: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
}

#[derive(Args)]
struct FigureArgs {
    /// One of: fisher-bernoulli, likelihood, posterior, manifolds, noncurve
    #[arg(long)]
    name: String,
    #[arg(long, default_value_t = 1000)]
    resolution: usize,
    /// Output CSV path; stdout when omitted
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("FISHERKIT_THREADS") {
        if let Ok(t) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(value) => {
            // Null means the command already streamed CSV to stdout.
            if !value.is_null() {
                println!("{}", serde_json::to_string_pretty(&value).expect("serializable output"));
            }
            ExitCode::SUCCESS
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

/// Resolve user-facing model aliases to builtin names.
fn load_model(name: &str) -> Result<ParametricModel, String> {
    let canonical = match name {
        "mpt1" | "m1" => "mpt-individual-word",
        "mpt2" | "m2" => "mpt-only-mixed",
        other => other,
    };
    builtin_model(canonical).map_err(|e| e.to_string())
}

/// CLI counts for bernoulli are given as (successes, failures);
/// internally outcome 0 is failure.
fn counts_for(model: &ParametricModel, raw: &[u64]) -> Result<CountVector, String> {
    let w = model
        .outcomes()
        .size()
        .ok_or_else(|| format!("{} has no count representation", model.name()))?;
    if raw.len() != w {
        return Err(format!("{} expects {w} counts, got {}", model.name(), raw.len()));
    }
    let mut counts = raw.to_vec();
    if model.name() == "bernoulli" || model.name() == "bent-coin" {
        counts.reverse();
    }
    Ok(CountVector::new(counts))
}

fn data_for(model: &ParametricModel, counts: &[u64], reals: &[f64]) -> Result<Data, String> {
    if !counts.is_empty() {
        Ok(Data::Counts(counts_for(model, counts)?))
    } else if !reals.is_empty() {
        Ok(Data::Reals(reals.to_vec()))
    } else {
        Err("provide observations via --counts or --reals".into())
    }
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

fn interval_json(iv: &frequentist::WaldInterval) -> Value {
    json!({
        "center": iv.center,
        "halfwidth": iv.halfwidth,
        "lower": iv.lower,
        "upper": iv.upper,
        "lower_2dp": round2(iv.lower),
        "upper_2dp": round2(iv.upper),
        "length": iv.upper - iv.lower,
        "level": iv.level,
    })
}

fn pair(interval: &[f64]) -> (f64, f64) {
    (interval[0], interval[1])
}

fn run(command: Command) -> Result<Value, String> {
    match command {
        Command::Fisher(a) => {
            let model = load_model(&a.model)?;
            let unit = match a.method {
                Method::Analytic => fisher::fisher_unit(&model, &a.theta),
                Method::Numeric => fisher::fisher_score_form(&model, &a.theta, ScoreMethod::Numeric),
                Method::Hessian => fisher::fisher_hessian_form(&model, &a.theta),
            }
            .map_err(|e| e.to_string())?;
            let scaled = unit.scaled(a.n as f64);
            Ok(json!({
                "model": model.name(),
                "theta": a.theta,
                "n": a.n,
                "matrix": scaled.rows(),
                "determinant": scaled.det(),
            }))
        }
        Command::Ci(a) => {
            let model = load_model(&a.model)?;
            let data = data_for(&model, &a.counts, &a.reals)?;
            let iv = frequentist::confidence_interval(&model, &data, a.level)
                .map_err(|e| e.to_string())?;
            Ok(json!({
                "model": model.name(),
                "estimate": iv.center,
                "interval": interval_json(&iv),
            }))
        }
        Command::Test(a) => {
            let model = load_model(&a.model)?;
            let data = data_for(&model, &a.counts, &a.reals)?;
            let result = frequentist::null_test(&model, &data, &a.null, a.alpha)
                .map_err(|e| e.to_string())?;
            Ok(json!({
                "model": model.name(),
                "null": a.null,
                "alpha": a.alpha,
                "estimate": result.estimate,
                "acceptance_region": interval_json(&result.interval),
                "reject": result.reject,
            }))
        }
        Command::PredictInterval(a) => {
            let model = load_model(&a.model)?;
            let iv = frequentist::prediction_interval(&model, &a.theta, a.n, a.level)
                .map_err(|e| e.to_string())?;
            Ok(json!({
                "model": model.name(),
                "theta": a.theta,
                "n": a.n,
                "interval": interval_json(&iv),
            }))
        }
        Command::Design(a) => {
            let model = load_model(&a.model)?;
            let point = match a.at {
                Some(t) => frequentist::DesignPoint::At(t),
                None => frequentist::DesignPoint::WorstCase,
            };
            let estimator = match a.estimator {
                EstimatorArg::Mle => frequentist::Estimator::Mle,
                EstimatorArg::Mean => frequentist::Estimator::Mean,
                EstimatorArg::Median => frequentist::Estimator::Median,
            };
            let n = frequentist::design_sample_size(&model, a.halfwidth, a.level, point, estimator)
                .map_err(|e| e.to_string())?;
            Ok(json!({
                "model": model.name(),
                "halfwidth": a.halfwidth,
                "level": a.level,
                "design_point": a.at,
                "n": n,
            }))
        }
        Command::Jeffreys(a) => {
            let model = load_model(&a.model)?;
            let (prior, volume) =
                jeffreys::jeffreys_prior(&model, a.grid).map_err(|e| e.to_string())?;
            let mass = if a.interval.is_empty() {
                Value::Null
            } else {
                let p = jeffreys::interval_probability(&prior, pair(&a.interval))
                    .map_err(|e| e.to_string())?;
                json!({ "interval": p.interval, "mass": p.mass, "mass_2dp": round2(p.mass) })
            };
            let q = |level: f64| jeffreys::quantile(&prior, level).map_err(|e| e.to_string());
            Ok(json!({
                "model": model.name(),
                "grid": a.grid,
                "volume": volume,
                "quantiles": { "q25": q(0.25)?, "q50": q(0.5)?, "q75": q(0.75)? },
                "interval_probability": mass,
            }))
        }
        Command::Posterior(a) => {
            let model = load_model(&a.model)?;
            let counts = counts_for(&model, &a.counts)?;
            let (prior, prior_name) = match a.prior {
                PriorArg::Uniform => {
                    let (lo, hi) = model.domain()[0];
                    (jeffreys::uniform_prior((lo, hi), a.grid).map_err(|e| e.to_string())?, "uniform")
                }
                PriorArg::Jeffreys => (
                    jeffreys::jeffreys_prior(&model, a.grid).map_err(|e| e.to_string())?.0,
                    "jeffreys",
                ),
            };
            let posterior =
                jeffreys::grid_posterior(&prior, &model, &counts).map_err(|e| e.to_string())?;
            let mass = if a.interval.is_empty() {
                Value::Null
            } else {
                let p = jeffreys::interval_probability(&posterior, pair(&a.interval))
                    .map_err(|e| e.to_string())?;
                json!({ "interval": p.interval, "mass": p.mass, "mass_2dp": round2(p.mass) })
            };
            let mut quantiles = serde_json::Map::new();
            for &level in &a.quantile {
                let value = jeffreys::quantile(&posterior, level).map_err(|e| e.to_string())?;
                quantiles.insert(format!("q{}", (level * 100.0).round() as u32), json!(value));
            }
            Ok(json!({
                "model": model.name(),
                "prior": prior_name,
                "grid": a.grid,
                "counts": counts.counts(),
                "interval_probability": mass,
                "quantiles": quantiles,
            }))
        }
        Command::Geometry(g) => run_geometry(g),
        Command::Mdl(m) => run_mdl(m),
        Command::Coding(a) => {
            let p = ProbVector::new(a.probs.clone()).map_err(|e| e.to_string())?;
            let lengths = coding::shannon_fano_lengths(&p).map_err(|e| e.to_string())?;
            let (kraft_sum, kraft_ok) = coding::kraft_check(&lengths.lengths, 2);
            let entropy = coding::entropy(&p, coding::LogBase::Two);
            let against = if a.against.is_empty() {
                Value::Null
            } else {
                let q = ProbVector::new(a.against.clone()).map_err(|e| e.to_string())?;
                let ce = coding::cross_entropy(&p, &q, coding::LogBase::Two)
                    .map_err(|e| e.to_string())?;
                let kl =
                    coding::kl_divergence(&p, &q, coding::LogBase::Two).map_err(|e| e.to_string())?;
                json!({
                    "cross_entropy_bits": ce,
                    "cross_entropy_bits_2dp": round2(ce),
                    "kl_divergence_bits": kl,
                })
            };
            Ok(json!({
                "probs": a.probs,
                "entropy_bits": entropy,
                "entropy_bits_2dp": round2(entropy),
                "shannon_fano_lengths": lengths.lengths,
                "kraft_sum": kraft_sum,
                "kraft_ok": kraft_ok,
                "against": against,
            }))
        }
        Command::Simulate(a) => {
            let model = load_model(&a.model)?;
            let config = SimConfig { theta: a.theta.clone(), n: a.n, k: a.k, seed: a.seed };
            let summary =
                coverage_experiment(&model, &config, a.level).map_err(|e| e.to_string())?;
            Ok(json!({
                "model": model.name(),
                "theta": a.theta,
                "n": a.n,
                "level": a.level,
                "summary": summary,
            }))
        }
        Command::Figure(a) => run_figure(a),
    }
}

fn run_geometry(command: GeometryCommand) -> Result<Value, String> {
    match command {
        GeometryCommand::Volume { model } => {
            let m = load_model(&model)?;
            let v = geometry::model_volume(&m).map_err(|e| e.to_string())?;
            Ok(json!({ "model": m.name(), "volume": v, "log_volume": v.ln() }))
        }
        GeometryCommand::Tangent { model, theta, dtheta } => {
            let m = load_model(&model)?;
            let t = geometry::tangent(&m, &theta, dtheta).map_err(|e| e.to_string())?;
            let len = geometry::tangent_length(&m, &theta, dtheta).map_err(|e| e.to_string())?;
            Ok(json!({
                "model": m.name(),
                "theta": theta,
                "dtheta": dtheta,
                "base": t.base.coords(),
                "components": t.components,
                "euclidean_length": t.euclidean_length(),
                "fisher_rao_length": len,
                "sqrt_information": len / dtheta.abs(),
            }))
        }
        GeometryCommand::Embed { probs } => {
            let p = ProbVector::new(probs).map_err(|e| e.to_string())?;
            let m = geometry::embed(&p);
            Ok(json!({ "coords": m.coords(), "norm": m.norm() }))
        }
        GeometryCommand::Arclength { model, from, to } => {
            let m = load_model(&model)?;
            if m.dim() != 1 {
                return Err("arc length is defined for 1-d models".into());
            }
            let (lo, hi) = (from.min(to), from.max(to));
            let len = numeric::integrate_singular_endpoints(
                |t| {
                    fisher::fisher_unit(&m, &[t])
                        .map(|i| i.get(0, 0).max(0.0).sqrt())
                        .unwrap_or(f64::NAN)
                },
                lo,
                hi,
                numeric::QuadTol::default(),
            )
            .map_err(|e| e.to_string())?;
            Ok(json!({ "model": m.name(), "from": from, "to": to, "arc_length": len }))
        }
        GeometryCommand::Project { model, probs } => {
            let m = load_model(&model)?;
            let p = ProbVector::new(probs).map_err(|e| e.to_string())?;
            let proj = geometry::kl_projection(&m, &p).map_err(|e| e.to_string())?;
            Ok(json!({
                "model": m.name(),
                "theta": proj.theta,
                "divergence": proj.divergence,
                "boundary": proj.boundary,
            }))
        }
    }
}

fn run_mdl(command: MdlCommand) -> Result<Value, String> {
    match command {
        MdlCommand::Compare { models, counts, criterion } => {
            let loaded: Result<Vec<ParametricModel>, String> =
                models.iter().map(|n| load_model(n)).collect();
            let loaded = loaded?;
            let refs: Vec<&ParametricModel> = loaded.iter().collect();
            let data = counts_for(&loaded[0], &counts)?;
            let criterion = match criterion {
                CriterionArg::Aic => mdl::Criterion::Aic,
                CriterionArg::Bic => mdl::Criterion::Bic,
                CriterionArg::Fia => mdl::Criterion::Fia,
                CriterionArg::Nml => mdl::Criterion::NmlDl,
            };
            let report = mdl::select(&refs, &data, criterion).map_err(|e| e.to_string())?;
            let preferred = match &report.preferred {
                mdl::Preference::Model(name) => json!(name),
                mdl::Preference::Tie => json!("tie"),
            };
            Ok(json!({
                "counts": data.counts(),
                "criterion": criterion,
                "values": report.values,
                "preferred": preferred,
                "tie_tolerance": report.tie_tolerance,
            }))
        }
        MdlCommand::Nml { model, counts } => {
            let m = load_model(&model)?;
            let data = counts_for(&m, &counts)?;
            let code = mdl::nml_exact(&m, data.n()).map_err(|e| e.to_string())?;
            let dl = mdl::description_length(&m, &data).map_err(|e| e.to_string())?;
            Ok(json!({
                "model": m.name(),
                "counts": data.counts(),
                "n": data.n(),
                "log_denominator": code.log_denominator,
                "nml_probability": code.code(&m, &data).map_err(|e| e.to_string())?,
                "description_length": dl.total,
            }))
        }
        MdlCommand::Noncurve { models, n, resolution, format, output } => {
            let a = load_model(&models[0])?;
            let b = load_model(&models[1])?;
            let points = mdl::non_decision_curve(&a, &b, n, resolution).map_err(|e| e.to_string())?;
            match format {
                Format::Json => Ok(json!({
                    "models": [a.name(), b.name()],
                    "n": n,
                    "resolution": resolution,
                    "points": points,
                })),
                Format::Csv => {
                    let rows: Vec<Vec<f64>> = points.iter().map(|p| p.to_vec()).collect();
                    write_csv(output.as_deref(), &["p_L", "p_M", "p_R"], &rows)?;
                    match output {
                        Some(path) => Ok(json!({
                            "models": [a.name(), b.name()],
                            "n": n,
                            "rows": rows.len(),
                            "output": path,
                        })),
                        None => Ok(Value::Null),
                    }
                }
            }
        }
    }
}

fn run_figure(a: FigureArgs) -> Result<Value, String> {
    let r = a.resolution.max(8);
    let (header, rows): (Vec<&str>, Vec<Vec<f64>>) = match a.name.as_str() {
        // Unit Fisher information of the Bernoulli model across its domain.
        "fisher-bernoulli" => {
            let m = load_model("bernoulli")?;
            let rows = (1..r)
                .map(|i| {
                    let t = i as f64 / r as f64;
                    let info = fisher::fisher_unit(&m, &[t]).map_err(|e| e.to_string())?;
                    Ok(vec![t, info.get(0, 0)])
                })
                .collect::<Result<Vec<_>, String>>()?;
            (vec!["theta", "information"], rows)
        }
        // Bernoulli likelihood for y=7, n=10; maximized at theta = 0.7.
        "likelihood" => {
            let rows = (1..r)
                .map(|i| {
                    let t = i as f64 / r as f64;
                    vec![t, t.powi(7) * (1.0 - t).powi(3)]
                })
                .collect();
            (vec!["theta", "likelihood"], rows)
        }
        // Prior and posterior panels for y=7, n=10 under both priors.
        "posterior" => {
            let m = load_model("bernoulli")?;
            let counts = CountVector::new(vec![3, 7]);
            let uniform = jeffreys::uniform_prior((0.0, 1.0), jeffreys::DEFAULT_GRID)
                .map_err(|e| e.to_string())?;
            let jeff = jeffreys::jeffreys_prior(&m, jeffreys::DEFAULT_GRID)
                .map_err(|e| e.to_string())?
                .0;
            let post_u =
                jeffreys::grid_posterior(&uniform, &m, &counts).map_err(|e| e.to_string())?;
            let post_j = jeffreys::grid_posterior(&jeff, &m, &counts).map_err(|e| e.to_string())?;
            let rows = (0..r)
                .map(|i| {
                    let t = (i as f64 + 0.5) / r as f64;
                    vec![
                        t,
                        uniform.density_at(t),
                        post_u.density_at(t),
                        jeff.density_at(t),
                        post_j.density_at(t),
                    ]
                })
                .collect();
            (
                vec![
                    "theta",
                    "uniform_prior",
                    "uniform_posterior",
                    "jeffreys_prior",
                    "jeffreys_posterior",
                ],
                rows,
            )
        }
        // The two MPT model curves embedded on the radius-2 sphere.
        "manifolds" => {
            let m1 = load_model("mpt1")?;
            let m2 = load_model("mpt2")?;
            let rows = (1..r)
                .map(|i| {
                    let t = i as f64 / r as f64;
                    let a = geometry::embed(&m1.pmf(&[t]).map_err(|e| e.to_string())?);
                    let b = geometry::embed(&m2.pmf(&[t]).map_err(|e| e.to_string())?);
                    let (ac, bc) = (a.coords(), b.coords());
                    Ok(vec![t, ac[0], ac[1], ac[2], bc[0], bc[1], bc[2]])
                })
                .collect::<Result<Vec<_>, String>>()?;
            (vec!["theta", "m1_x", "m1_y", "m1_z", "m2_x", "m2_y", "m2_z"], rows)
        }
        // Non-decision curve(s) between the MPT models at n = 30.
        "noncurve" => {
            let m1 = load_model("mpt1")?;
            let m2 = load_model("mpt2")?;
            let points =
                mdl::non_decision_curve(&m1, &m2, 30, r.min(256)).map_err(|e| e.to_string())?;
            (vec!["p_L", "p_M", "p_R"], points.iter().map(|p| p.to_vec()).collect())
        }
        other => {
            return Err(format!(
                "unknown figure '{other}'; expected fisher-bernoulli, likelihood, posterior, manifolds, or noncurve"
            ))
        }
    };
    let count = rows.len();
    write_csv(a.output.as_deref(), &header, &rows)?;
    match a.output {
        Some(path) => Ok(json!({ "figure": a.name, "rows": count, "output": path })),
        None => Ok(Value::Null),
    }
}

/// CSV with a header row, LF line endings, and 17-significant-digit floats.
fn write_csv(path: Option<&std::path::Path>, header: &[&str], rows: &[Vec<f64>]) -> Result<(), String> {
    let mut body = String::new();
    body.push_str(&header.join(","));
    body.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
        body.push_str(&cells.join(","));
        body.push('\n');
    }
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            std::io::stdout().write_all(body.as_bytes()).map_err(|e| e.to_string())
        }
    }
}
