//! Conditional maximum likelihood given an ordering constraint.
//!
//! Given the constraints imposed by a prefix of the consensus ordering, the
//! score and ranking parts of the objective separate: `p` solves an
//! order-restricted Binomial regression and `θ` a convex univariate problem.

mod isotonic;
mod theta;

use serde::Serialize;

pub use isotonic::chain_star_regression;
pub use theta::{fit_theta, theta_objective, ThetaFit, THETA_FLOOR};

use crate::error::{Error, Result};
use crate::kendall::check_permutation;
use crate::model::{binomial_kernel, Parameters, SufficientStats};
use crate::scalar::Real;

/// Default cap on the consensus scale for `j` objects.
pub fn default_theta_max<T: Real>(j: usize) -> T {
    T::from_count(j + 2)
}

/// Ordering constraint `p[prefix_1] <= .. <= p[prefix_k] <= p[l]` for every free `l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PrefixConstraint {
    prefix: Vec<usize>,
    free: Vec<usize>,
}

impl PrefixConstraint {
    pub fn new(prefix: Vec<usize>, n_objects: usize) -> Result<Self> {
        let mut seen = vec![false; n_objects];
        for &o in &prefix {
            if o >= n_objects || std::mem::replace(&mut seen[o], true) {
                return Err(Error::InvalidArgument(format!(
                    "prefix {prefix:?} is not a list of distinct objects below {n_objects}"
                )));
            }
        }
        let free = (0..n_objects).filter(|&o| !seen[o]).collect();
        Ok(Self { prefix, free })
    }

    /// No constraint at all.
    pub fn root(n_objects: usize) -> Self {
        Self {
            prefix: Vec::new(),
            free: (0..n_objects).collect(),
        }
    }

    /// Total order along `order`.
    pub fn full(order: &[usize]) -> Result<Self> {
        check_permutation(order)?;
        Ok(Self {
            prefix: order.to_vec(),
            free: Vec::new(),
        })
    }

    pub fn prefix(&self) -> &[usize] {
        &self.prefix
    }

    pub fn free(&self) -> &[usize] {
        &self.free
    }

    pub fn n_objects(&self) -> usize {
        self.prefix.len() + self.free.len()
    }

    /// Whether the constraint fixes a total order.
    pub fn is_total(&self) -> bool {
        self.free.len() <= 1
    }

    /// Constraint obtained by appending `object` to the prefix.
    pub fn child(&self, object: usize) -> Self {
        let mut prefix = self.prefix.clone();
        prefix.push(object);
        Self {
            prefix,
            free: self.free.iter().copied().filter(|&o| o != object).collect(),
        }
    }

    /// The implied total order, when there is one.
    pub fn order(&self) -> Option<Vec<usize>> {
        self.is_total().then(|| {
            let mut o = self.prefix.clone();
            o.extend(&self.free);
            o
        })
    }
}

/// Order-restricted quality estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstrainedQualities<T> {
    pub p: Vec<T>,
    /// Objects without any observed score; their value is only a feasible filler.
    pub non_identified: Vec<usize>,
}

/// Filler for objects that no constraint or score pins down.
const UNINFORMED_QUALITY: f64 = 0.5;

/// Maximum-likelihood qualities subject to `constraint`.
pub fn fit_p_constrained<T: Real>(
    stats: &SufficientStats<T>,
    constraint: &PrefixConstraint,
) -> ConstrainedQualities<T> {
    let j = stats.n_objects;
    let m = T::from_u32(stats.max_score).expect("max score representable");
    let y: Vec<T> = stats.mean_score.iter().map(|&x| x / m).collect();
    let w: Vec<T> = stats.score_count.iter().map(|&c| T::from_count(c) * m).collect();
    let weighted = |o: &usize| stats.score_count[*o] > 0;

    let chain: Vec<usize> = constraint.prefix().iter().copied().filter(weighted).collect();
    let free: Vec<usize> = constraint.free().iter().copied().filter(weighted).collect();
    let solved = chain_star_regression(&y, &w, &chain, &free);

    let non_identified: Vec<usize> = (0..j).filter(|o| !weighted(o)).collect();
    let mut p = solved;
    if non_identified.is_empty() {
        return ConstrainedQualities { p, non_identified };
    }

    let prefix = constraint.prefix();
    let lead = chain
        .first()
        .map(|&c| p[c])
        .or_else(|| free.iter().map(|&l| p[l]).reduce(T::min))
        .unwrap_or_else(|| T::lit(UNINFORMED_QUALITY));
    let mut running = lead;
    for &c in prefix {
        if weighted(&c) {
            running = p[c];
        } else {
            p[c] = running;
        }
    }
    let tail = prefix.last().map(|&c| p[c]).unwrap_or_else(|| T::lit(UNINFORMED_QUALITY));
    for &l in constraint.free() {
        if !weighted(&l) {
            p[l] = tail;
        }
    }
    ConstrainedQualities { p, non_identified }
}

/// Score part of the objective: `Σ_j n_j [x̄_j ln(1/p_j) + (M - x̄_j) ln(1/(1-p_j))]`.
pub fn score_cost<T: Real>(stats: &SufficientStats<T>, p: &[T]) -> T {
    let m = T::from_u32(stats.max_score).expect("max score representable");
    (0..stats.n_objects)
        .filter(|&o| stats.score_count[o] > 0)
        .map(|o| {
            let n = T::from_count(stats.score_count[o]);
            let sum = T::from_u64(stats.score_sum[o]).expect("score sum representable");
            -binomial_kernel(sum, n * m, p[o])
        })
        .sum()
}

/// Ranking part of the objective for a given mean distance per ranker.
pub fn ranking_cost<T: Real>(stats: &SufficientStats<T>, theta: T, mean_distance: T) -> T {
    theta_objective(theta, mean_distance, &stats.length_counts, stats.n_objects)
}

/// Negative log-likelihood less the binomial coefficients.
pub fn objective<T: Real>(stats: &SufficientStats<T>, params: &Parameters<T>) -> T {
    ranking_cost(stats, params.theta, stats.mean_distance(&params.order)) + score_cost(stats, &params.p)
}

/// Exact conditional optimum for a fixed consensus ordering.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionalFit<T> {
    pub params: Parameters<T>,
    pub f_value: T,
    pub non_identified: Vec<usize>,
}

/// Fits `p` and `θ` with the consensus ordering fixed to `order`.
pub fn fit_given_order<T: Real>(
    stats: &SufficientStats<T>,
    order: &[usize],
    theta_max: T,
) -> Result<ConditionalFit<T>> {
    if order.len() != stats.n_objects {
        return Err(Error::InvalidArgument(format!(
            "ordering of {} objects for {} objects",
            order.len(),
            stats.n_objects
        )));
    }
    let constraint = PrefixConstraint::full(order)?;
    let ConstrainedQualities { p, non_identified } = fit_p_constrained(stats, &constraint);
    let mean_distance = stats.mean_distance(order);
    let ThetaFit { theta, status } = fit_theta(mean_distance, &stats.length_counts, stats.n_objects, theta_max);
    let f_value = ranking_cost(stats, theta, mean_distance) + score_cost(stats, &p);
    let params = Parameters::new(p, theta, order.to_vec(), status)?;
    Ok(ConditionalFit {
        params,
        f_value,
        non_identified,
    })
}

/// Convenience check used by callers that need a finite cap.
pub(crate) fn validate_theta_max<T: Real>(theta_max: T) -> Result<()> {
    if theta_max > T::lit(THETA_FLOOR) && theta_max.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("theta cap {theta_max} must be finite and positive")))
    }
}
