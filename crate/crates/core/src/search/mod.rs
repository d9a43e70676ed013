//! Consensus-order search: exact A* over the prefix tree, the approximate
//! FV / Greedy / Greedy-Local algorithms, and exhaustive enumeration.

mod approx;
mod astar;
mod brute;

use std::time::Duration;

use serde::Serialize;

pub use approx::{fv, greedy, greedy_local};
pub use astar::astar;
pub use brute::brute_force;

use crate::cond_mle::{
    default_theta_max, fit_p_constrained, fit_theta, ranking_cost, score_cost, validate_theta_max, ConditionalFit,
    PrefixConstraint,
};
use crate::error::{Error, Result};
use crate::kemeny_lp::{crude_bound, lp_bound};
use crate::model::{compute_stats, Dataset, Parameters, SufficientStats, ThetaStatus};
use crate::scalar::Real;

/// Lower bound used for the ranking cost at a search node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Heuristic {
    Crude,
    Lp,
}

/// Fitting algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactCrude,
    ExactLp,
    Fv,
    Greedy,
    GreedyLocal,
    Brute,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::ExactCrude,
        Method::ExactLp,
        Method::Fv,
        Method::Greedy,
        Method::GreedyLocal,
        Method::Brute,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::ExactCrude => "exact-crude",
            Method::ExactLp => "exact-lp",
            Method::Fv => "fv",
            Method::Greedy => "greedy",
            Method::GreedyLocal => "greedy-local",
            Method::Brute => "brute",
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Method::ExactCrude | Method::ExactLp | Method::Brute)
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method {s:?}")))
    }
}

/// Tuning knobs shared by every algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchConfig<T> {
    pub theta_max: T,
    /// Nodes the exact search may expand before giving up on optimality.
    pub node_budget: usize,
    /// Largest `J` accepted by exhaustive enumeration.
    pub brute_force_cap: usize,
    /// Tie-break orders generated per average-rank source in FV.
    pub candidate_cap: usize,
    /// Neighbourhood rounds allowed in Greedy-Local.
    pub max_rounds: usize,
}

impl<T: Real> SearchConfig<T> {
    pub const DEFAULT_NODE_BUDGET: usize = 10_000_000;
    pub const DEFAULT_BRUTE_FORCE_CAP: usize = 7;
    pub const DEFAULT_CANDIDATE_CAP: usize = 1024;
    pub const DEFAULT_MAX_ROUNDS: usize = 1000;

    /// Default settings for `j` objects.
    pub fn for_objects(j: usize) -> Self {
        Self {
            theta_max: default_theta_max(j),
            node_budget: Self::DEFAULT_NODE_BUDGET,
            brute_force_cap: Self::DEFAULT_BRUTE_FORCE_CAP,
            candidate_cap: Self::DEFAULT_CANDIDATE_CAP,
            max_rounds: Self::DEFAULT_MAX_ROUNDS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        validate_theta_max(self.theta_max)?;
        if self.node_budget == 0 || self.candidate_cap == 0 || self.max_rounds == 0 {
            return Err(Error::InvalidArgument(
                "node budget, candidate cap and round limit must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Diagnostics attached to a fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitFlags {
    pub theta_status: ThetaStatus,
    /// Objects without any score; their quality is a feasible filler.
    pub non_identified: Vec<usize>,
    /// The result is a certified global optimum.
    pub optimal: bool,
    pub budget_exhausted: bool,
    pub candidate_cap_hit: bool,
    pub max_rounds_hit: bool,
    /// Nodes whose LP bound failed and fell back to the crude bound.
    pub lp_fallbacks: usize,
}

/// Outcome of a consensus search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult<T> {
    pub params: Parameters<T>,
    pub f_value: T,
    pub algorithm: Method,
    pub nodes_expanded: usize,
    pub candidate_evaluations: usize,
    #[serde(skip)]
    pub elapsed: Duration,
    pub flags: FitFlags,
}

impl<T: Real> FitResult<T> {
    pub(crate) fn from_conditional(
        fit: ConditionalFit<T>,
        algorithm: Method,
        nodes_expanded: usize,
        candidate_evaluations: usize,
        elapsed: Duration,
    ) -> Self {
        let flags = FitFlags {
            theta_status: fit.params.theta_status,
            non_identified: fit.non_identified,
            optimal: algorithm.is_exact(),
            budget_exhausted: false,
            candidate_cap_hit: false,
            max_rounds_hit: false,
            lp_fallbacks: 0,
        };
        Self {
            params: fit.params,
            f_value: fit.f_value,
            algorithm,
            nodes_expanded,
            candidate_evaluations,
            elapsed,
            flags,
        }
    }
}

/// Total-cost lower bound at a node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeBound<T> {
    pub value: T,
    pub lp_fell_back: bool,
}

/// Conditional optimum of the objective with the ranking cost bounded below
/// by the chosen heuristic. Exact when the constraint is total.
pub fn node_bound<T: Real>(
    stats: &SufficientStats<T>,
    constraint: &PrefixConstraint,
    heuristic: Heuristic,
    theta_max: T,
) -> NodeBound<T> {
    let (distance, lp_fell_back) = match heuristic {
        Heuristic::Crude => (crude_bound(stats, constraint), false),
        Heuristic::Lp => {
            let b = lp_bound(stats, constraint);
            (b.value, b.fell_back)
        }
    };
    let ranking = if stats.has_rankings() {
        let theta = fit_theta(distance, &stats.length_counts, stats.n_objects, theta_max).theta;
        ranking_cost(stats, theta, distance)
    } else {
        T::zero()
    };
    let qualities = fit_p_constrained(stats, constraint);
    NodeBound {
        value: ranking + score_cost(stats, &qualities.p),
        lp_fell_back,
    }
}

/// `true` when `candidate` beats `incumbent` by more than rounding noise.
pub(crate) fn improves<T: Real>(candidate: T, incumbent: T) -> bool {
    candidate < incumbent - T::lit(1e-12) * incumbent.abs().max(T::one())
}

/// Fits a dataset with the chosen algorithm.
pub fn fit<T: Real>(dataset: &Dataset, method: Method, config: &SearchConfig<T>) -> Result<FitResult<T>> {
    config.validate()?;
    let stats = compute_stats(dataset);
    match method {
        Method::ExactCrude => astar(&stats, Heuristic::Crude, config),
        Method::ExactLp => astar(&stats, Heuristic::Lp, config),
        Method::Fv => fv(&stats, dataset, config),
        Method::Greedy => greedy(&stats, config),
        Method::GreedyLocal => greedy_local(&stats, config),
        Method::Brute => brute_force(&stats, config),
    }
}
