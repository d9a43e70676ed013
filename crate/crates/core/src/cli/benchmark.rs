use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::inference::{simulate_trial, ConsistencyCell};
use crate::kendall::{distance, PartialRanking};
use crate::model::compute_stats;
use crate::search::{astar, brute_force, fv, greedy, greedy_local, FitResult, Heuristic, Method, SearchConfig};

/// One algorithm run on one simulated instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkRow {
    #[serde(rename = "I")]
    pub n_judges: usize,
    #[serde(rename = "M")]
    pub max_score: u32,
    #[serde(rename = "J")]
    pub n_objects: usize,
    #[serde(rename = "R")]
    pub ranking_length: usize,
    pub theta: f64,
    pub trial: usize,
    pub algorithm: Method,
    pub seconds: f64,
    pub nodes: usize,
    pub candidates: usize,
    /// The run attains the reference objective value.
    pub exact_match: bool,
    /// Kendall distance from the run's order to the reference order.
    pub kendall_to_mle: usize,
    pub f_value: f64,
    pub status: &'static str,
}

fn run_one(
    method: Method,
    stats: &crate::model::SufficientStats<f64>,
    dataset: &crate::model::Dataset,
    config: &SearchConfig<f64>,
) -> Result<FitResult<f64>> {
    match method {
        Method::ExactCrude => astar(stats, Heuristic::Crude, config),
        Method::ExactLp => astar(stats, Heuristic::Lp, config),
        Method::Fv => fv(stats, dataset, config),
        Method::Greedy => greedy(stats, config),
        Method::GreedyLocal => greedy_local(stats, config),
        Method::Brute => brute_force(stats, config),
    }
}

/// Runs every method on every simulated instance of the grid.
///
/// The reference optimum comes from exhaustive enumeration when `J` is
/// within the brute-force cap, and from LP-guided A* otherwise.
pub fn run_benchmark(
    cells: &[ConsistencyCell],
    trials: usize,
    methods: &[Method],
    seed: u64,
    node_budget: usize,
) -> Result<Vec<BenchmarkRow>> {
    let mut rows = Vec::new();
    for cell in cells {
        let mut config = SearchConfig::for_objects(cell.n_objects);
        config.node_budget = node_budget;
        for trial in 0..trials {
            let (_, dataset) = simulate_trial(cell, trial, seed)?;
            let stats = compute_stats::<f64>(&dataset);
            let reference = if cell.n_objects <= config.brute_force_cap {
                brute_force(&stats, &config)?
            } else {
                astar(&stats, Heuristic::Lp, &config)?
            };
            let tolerance = 1e-8 * reference.f_value.abs().max(1.0);
            for &method in methods {
                let (fit, status) = match run_one(method, &stats, &dataset, &config) {
                    Ok(f) if f.flags.budget_exhausted => (f, "budget_exhausted"),
                    Ok(f) => (f, "ok"),
                    Err(e @ Error::BruteForceCap { .. }) => {
                        log::warn!("{method} skipped: {e}");
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let order = PartialRanking::complete(&fit.params.order)?;
                rows.push(BenchmarkRow {
                    n_judges: cell.n_judges,
                    max_score: cell.max_score,
                    n_objects: cell.n_objects,
                    ranking_length: cell.ranking_length,
                    theta: cell.theta,
                    trial,
                    algorithm: method,
                    seconds: fit.elapsed.as_secs_f64(),
                    nodes: fit.nodes_expanded,
                    candidates: fit.candidate_evaluations,
                    exact_match: (fit.f_value - reference.f_value).abs() <= tolerance,
                    kendall_to_mle: distance(&order, &reference.params.order)?,
                    f_value: fit.f_value,
                    status,
                });
            }
        }
    }
    Ok(rows)
}

pub fn write_benchmark<W: Write>(out: W, rows: &[BenchmarkRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Input(format!("write failed: {e}")))?;
    }
    w.flush().map_err(|e| Error::Input(format!("write failed: {e}")))
}
