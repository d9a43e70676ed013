use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use serde::Serialize;

use super::benchmark::{run_benchmark, write_benchmark};
use super::io::{ingest, write_rankings, write_scores, LabeledDataset};
use super::scale::ScoreScale;
use super::{exit_code, EXIT_BUDGET};
use crate::error::{Error, Result};
use crate::inference::{
    bias_enumeration, bootstrap_with, comparison_fit, replicate_rng, BootstrapSummary, ComparisonModel,
    ConsistencyCell, Estimate, DEFAULT_LEVEL, DEFAULT_OUTCOME_CAP, DEFAULT_REPLICATES,
};
use crate::model::{sample, Parameters, ThetaStatus};
use crate::search::{fit, FitResult, Method, SearchConfig};

#[derive(Debug, Parser)]
#[command(name = "mbrank", version, about = "Consensus rankings from judges' scores and partial rankings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit the joint model and report the consensus.
    Fit(CommonArgs),
    /// Percentile bootstrap intervals for qualities, scale and rank places.
    Bootstrap(BootstrapArgs),
    /// Simulate a panel and write it in the input format.
    Simulate(SimulateArgs),
    /// Time and score every algorithm on simulated panels.
    Benchmark(BenchmarkArgs),
    /// Bootstrap the joint model next to the single-source baselines.
    Compare(BootstrapArgs),
    /// Exact bias of the single-judge estimator by full enumeration.
    BiasDemo(BiasArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Scores CSV: `judge,<label1>,...`.
    #[arg(long)]
    pub scores: Option<PathBuf>,
    /// Rankings CSV: `judge,rank1,...`.
    #[arg(long)]
    pub rankings: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub scale_min: f64,
    /// Required when scores are supplied.
    #[arg(long, allow_negative_numbers = true)]
    pub scale_max: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub scale_step: f64,
    /// Larger raw scores are better.
    #[arg(long)]
    pub higher_is_better: bool,
    /// exact-crude, exact-lp, fv, greedy, greedy-local or brute.
    #[arg(long, default_value = "exact-lp")]
    pub method: Method,
    /// Upper limit for the consensus scale (default J + 2).
    #[arg(long)]
    pub theta_max: Option<f64>,
    #[arg(long, default_value_t = SearchConfig::<f64>::DEFAULT_NODE_BUDGET)]
    pub node_budget: usize,
    #[arg(long, default_value_t = SearchConfig::<f64>::DEFAULT_CANDIDATE_CAP)]
    pub candidate_cap: usize,
    /// Output file (standard output when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BootstrapArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Number of bootstrap replicates.
    #[arg(long = "B", visible_alias = "replicates", default_value_t = DEFAULT_REPLICATES)]
    pub replicates: usize,
    #[arg(long, default_value_t = DEFAULT_LEVEL)]
    pub level: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Rank-interval CSV (defaults to `<out>-ranks.csv` when `--out` is set).
    #[arg(long)]
    pub intervals_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub judges: usize,
    #[arg(long)]
    pub objects: usize,
    /// Ranking length (defaults to complete rankings).
    #[arg(long)]
    pub ranking_length: Option<usize>,
    #[arg(long)]
    pub max_score: u32,
    #[arg(long)]
    pub theta: f64,
    /// Comma-separated qualities; drawn uniformly when absent.
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory receiving scores.csv, rankings.csv and truth.json.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct BenchmarkArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [5, 20])]
    pub judges: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [4, 5, 6])]
    pub objects: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [10])]
    pub max_scores: Vec<u32>,
    /// Ranking lengths (complete rankings when absent).
    #[arg(long, value_delimiter = ',')]
    pub ranking_lengths: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 2.0, 3.0])]
    pub thetas: Vec<f64>,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, value_delimiter = ',', default_values_t = Method::ALL)]
    pub methods: Vec<Method>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = SearchConfig::<f64>::DEFAULT_NODE_BUDGET)]
    pub node_budget: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BiasArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.4, 0.9])]
    pub p: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub theta: f64,
    #[arg(long, default_value_t = 1)]
    pub max_score: u32,
    /// Ranking length (defaults to complete rankings).
    #[arg(long)]
    pub ranking_length: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_OUTCOME_CAP)]
    pub outcome_cap: usize,
    /// Emit JSON instead of a table.
    #[arg(long)]
    pub json: bool,
}

/// Validated settings shared by the data-driven commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub method: Method,
    pub scale: ScoreScale,
    pub data: LabeledDataset,
    pub search: SearchConfig<f64>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_args(args: &CommonArgs) -> Result<Self> {
        let scale = match (args.scale_max, &args.scores) {
            (Some(max), _) => ScoreScale::new(args.scale_min, max, args.scale_step, args.higher_is_better)?,
            (None, Some(_)) => return Err(Error::Input("--scale-max is required with --scores".into())),
            (None, None) => ScoreScale::canonical(1)?,
        };
        let data = ingest(args.scores.as_deref(), args.rankings.as_deref(), &scale)?;
        let mut search = SearchConfig::for_objects(data.dataset.n_objects());
        if let Some(t) = args.theta_max {
            search.theta_max = t;
        }
        search.node_budget = args.node_budget;
        search.candidate_cap = args.candidate_cap;
        search.validate()?;
        Ok(Self {
            method: args.method,
            scale,
            data,
            search,
            out: args.out.clone(),
        })
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<S: Serialize>(value: &S) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::Input(format!("serialisation failed: {e}")))
}

#[derive(Debug, Serialize)]
struct FitReport {
    method: Method,
    objects: Vec<String>,
    p: Vec<f64>,
    expected_score: Vec<f64>,
    theta: f64,
    theta_status: ThetaStatus,
    consensus: Vec<String>,
    f_value: f64,
    nodes_expanded: usize,
    candidate_evaluations: usize,
    elapsed_seconds: f64,
    optimal: bool,
    budget_exhausted: bool,
    non_identified: Vec<String>,
}

impl FitReport {
    fn new(cfg: &RunConfig, result: &FitResult<f64>) -> Self {
        Self {
            method: result.algorithm,
            objects: cfg.data.objects.clone(),
            p: result.params.p.clone(),
            expected_score: result.params.p.iter().map(|&p| cfg.scale.expected_score(p)).collect(),
            theta: result.params.theta,
            theta_status: result.params.theta_status,
            consensus: cfg.data.labels(&result.params.order),
            f_value: result.f_value,
            nodes_expanded: result.nodes_expanded,
            candidate_evaluations: result.candidate_evaluations,
            elapsed_seconds: result.elapsed.as_secs_f64(),
            optimal: result.flags.optimal,
            budget_exhausted: result.flags.budget_exhausted,
            non_identified: cfg.data.labels(&result.flags.non_identified),
        }
    }
}

fn cmd_fit(args: &CommonArgs) -> Result<i32> {
    let cfg = RunConfig::from_args(args)?;
    let result = fit(&cfg.data.dataset, cfg.method, &cfg.search)?;
    write_output(cfg.out.as_deref(), &to_json(&FitReport::new(&cfg, &result))?)?;
    Ok(if result.flags.budget_exhausted { EXIT_BUDGET } else { 0 })
}

#[derive(Debug, Serialize)]
struct LabeledInterval<'a> {
    object: &'a str,
    lower: f64,
    upper: f64,
}

#[derive(Debug, Serialize)]
struct LabeledRank<'a> {
    object: &'a str,
    point_rank: usize,
    lower: usize,
    upper: usize,
}

#[derive(Debug, Serialize)]
struct ThetaReport {
    estimate: f64,
    status: ThetaStatus,
    lower: f64,
    upper: f64,
    infinite_proportion: f64,
}

#[derive(Debug, Serialize)]
struct ModelReport<'a> {
    model: &'a str,
    replicates: usize,
    level: f64,
    seed: u64,
    failures: usize,
    consensus: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected_score: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_intervals: Option<Vec<LabeledInterval<'a>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected_score_intervals: Option<Vec<LabeledInterval<'a>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<ThetaReport>,
    rank_intervals: Vec<LabeledRank<'a>>,
}

fn model_report<'a>(model: &'a str, cfg: &'a RunConfig, s: &BootstrapSummary<f64>) -> ModelReport<'a> {
    let labels = &cfg.data.objects;
    let p_intervals = s.p_intervals.as_ref().map(|ivs| {
        ivs.iter()
            .zip(labels)
            .map(|(iv, l)| LabeledInterval {
                object: l,
                lower: iv.lower,
                upper: iv.upper,
            })
            .collect::<Vec<_>>()
    });
    let expected_score_intervals = s.p_intervals.as_ref().map(|ivs| {
        ivs.iter()
            .zip(labels)
            .map(|(iv, l)| {
                let (a, b) = (cfg.scale.expected_score(iv.lower), cfg.scale.expected_score(iv.upper));
                LabeledInterval {
                    object: l,
                    lower: a.min(b),
                    upper: a.max(b),
                }
            })
            .collect()
    });
    let theta = match (s.point.theta, s.theta_interval) {
        (Some((estimate, status)), Some(iv)) => Some(ThetaReport {
            estimate,
            status,
            lower: iv.lower,
            upper: iv.upper,
            infinite_proportion: iv.infinite_proportion,
        }),
        _ => None,
    };
    ModelReport {
        model,
        replicates: s.replicates,
        level: s.level,
        seed: s.seed,
        failures: s.failures,
        consensus: cfg.data.labels(&s.point.order),
        p: s.point.p.clone(),
        expected_score: s
            .point
            .p
            .as_ref()
            .map(|p| p.iter().map(|&x| cfg.scale.expected_score(x)).collect()),
        p_intervals,
        expected_score_intervals,
        theta,
        rank_intervals: s
            .rank_intervals
            .iter()
            .zip(labels)
            .map(|(r, l)| LabeledRank {
                object: l,
                point_rank: r.point,
                lower: r.lower,
                upper: r.upper,
            })
            .collect(),
    }
}

fn rank_csv(cfg: &RunConfig, s: &BootstrapSummary<f64>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| Error::Input(format!("write failed: {e}"));
    w.write_record(["object", "point_rank", "lower", "upper"]).map_err(fail)?;
    let mut by_place: Vec<usize> = (0..cfg.data.objects.len()).collect();
    by_place.sort_by_key(|&o| s.rank_intervals[o].point);
    for o in by_place {
        let r = s.rank_intervals[o];
        w.write_record([
            cfg.data.objects[o].clone(),
            r.point.to_string(),
            r.lower.to_string(),
            r.upper.to_string(),
        ])
        .map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Input(format!("write failed: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn intervals_path(args: &BootstrapArgs) -> Option<PathBuf> {
    args.intervals_out.clone().or_else(|| {
        args.common.out.as_ref().map(|out| {
            let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            out.with_file_name(format!("{stem}-ranks.csv"))
        })
    })
}

fn joint_bootstrap(cfg: &RunConfig, args: &BootstrapArgs) -> Result<BootstrapSummary<f64>> {
    bootstrap_with(&cfg.data.dataset, args.replicates, args.level, args.seed, |ds, _| {
        fit(ds, cfg.method, &cfg.search).map(|f| Estimate::from(&f))
    })
}

fn cmd_bootstrap(args: &BootstrapArgs) -> Result<i32> {
    let cfg = RunConfig::from_args(&args.common)?;
    let summary = joint_bootstrap(&cfg, args)?;
    let report = model_report(cfg.method.name(), &cfg, &summary);
    write_output(cfg.out.as_deref(), &to_json(&report)?)?;
    if let Some(path) = intervals_path(args) {
        write_output(Some(&path), &rank_csv(&cfg, &summary)?)?;
    }
    Ok(0)
}

fn cmd_compare(args: &BootstrapArgs) -> Result<i32> {
    let cfg = RunConfig::from_args(&args.common)?;
    let mut summaries = vec![("mallows_binomial", joint_bootstrap(&cfg, args)?)];
    for model in ComparisonModel::ALL {
        let summary = bootstrap_with(&cfg.data.dataset, args.replicates, args.level, args.seed, |ds, rng| {
            comparison_fit(ds, model, cfg.method, &cfg.search, rng).map(|f| f.estimate)
        });
        match summary {
            Ok(s) => summaries.push((model.name(), s)),
            Err(e @ (Error::NoRankings | Error::NoScores)) => log::warn!("{} skipped: {e}", model.name()),
            Err(e) => return Err(e),
        }
    }
    #[derive(Serialize)]
    struct CompareReport<'a> {
        objects: &'a [String],
        models: Vec<ModelReport<'a>>,
    }
    let report = CompareReport {
        objects: &cfg.data.objects,
        models: summaries.iter().map(|(name, s)| model_report(name, &cfg, s)).collect(),
    };
    write_output(cfg.out.as_deref(), &to_json(&report)?)?;
    Ok(0)
}

#[derive(Debug, Serialize)]
struct Truth {
    objects: Vec<String>,
    p: Vec<f64>,
    theta: f64,
    consensus: Vec<String>,
    max_score: u32,
    ranking_length: usize,
}

fn cmd_simulate(args: &SimulateArgs) -> Result<i32> {
    let j = args.objects;
    let r = args.ranking_length.unwrap_or(j);
    if j == 0 || r == 0 || r > j {
        return Err(Error::RankingLength { r, j });
    }
    let mut rng = replicate_rng(args.seed, 0);
    let p = match &args.p {
        Some(p) if p.len() != j => {
            return Err(Error::Input(format!("--p lists {} qualities for {j} objects", p.len())));
        }
        Some(p) => p.clone(),
        None => (0..j).map(|_| rng.random()).collect(),
    };
    let truth = Parameters::from_qualities(p, args.theta).map_err(|e| Error::Input(e.to_string()))?;
    let dataset = sample(&truth, args.judges, args.max_score, r, &mut rng)?;
    let data = LabeledDataset {
        objects: (1..=j).map(|k| format!("o{k}")).collect(),
        judges: (1..=args.judges).map(|k| format!("j{k}")).collect(),
        dataset,
    };
    let scale = ScoreScale::canonical(args.max_score)?;
    std::fs::create_dir_all(&args.out).map_err(|e| Error::Input(format!("{}: {e}", args.out.display())))?;
    let create = |name: &str| {
        let path = args.out.join(name);
        std::fs::File::create(&path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
    };
    write_scores(create("scores.csv")?, &data, &scale)?;
    write_rankings(create("rankings.csv")?, &data)?;
    let truth = Truth {
        consensus: data.labels(&truth.order),
        objects: data.objects.clone(),
        p: truth.p,
        theta: truth.theta,
        max_score: args.max_score,
        ranking_length: r,
    };
    write_output(Some(&args.out.join("truth.json")), &to_json(&truth)?)?;
    Ok(0)
}

fn cmd_benchmark(args: &BenchmarkArgs) -> Result<i32> {
    let lengths: Vec<usize> = args.ranking_lengths.clone().unwrap_or_default();
    let mut cells = Vec::new();
    for &j in &args.objects {
        let rs = if lengths.is_empty() { vec![j] } else { lengths.clone() };
        cells.extend(ConsistencyCell::grid(&args.judges, &[j], &args.max_scores, &rs, &args.thetas));
    }
    let rows = run_benchmark(&cells, args.trials, &args.methods, args.seed, args.node_budget)?;
    let mut buf = Vec::new();
    write_benchmark(&mut buf, &rows)?;
    write_output(args.out.as_deref(), &String::from_utf8(buf).expect("csv output is utf-8"))?;
    Ok(if rows.iter().any(|r| r.status == "budget_exhausted") { EXIT_BUDGET } else { 0 })
}

fn cmd_bias(args: &BiasArgs) -> Result<i32> {
    let r = args.ranking_length.unwrap_or(args.p.len());
    let table = bias_enumeration(&args.p, args.theta, args.max_score, r, args.outcome_cap)?;
    if args.json {
        print!("{}", to_json(&table)?);
    } else {
        println!("{table}");
    }
    Ok(0)
}

/// Executes a parsed command line and returns the process exit status.
pub fn run(cli: Cli) -> i32 {
    let outcome = match &cli.command {
        Command::Fit(a) => cmd_fit(a),
        Command::Bootstrap(a) => cmd_bootstrap(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Benchmark(a) => cmd_benchmark(a),
        Command::Compare(a) => cmd_compare(a),
        Command::BiasDemo(a) => cmd_bias(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
