use std::collections::HashSet;
use std::time::Instant;

use itertools::Itertools;

use super::{improves, node_bound, FitResult, Heuristic, Method, SearchConfig};
use crate::cond_mle::{fit_given_order, ConditionalFit, PrefixConstraint};
use crate::error::Result;
use crate::kendall::{adjacent_neighbors, average_ranks};
use crate::model::{Dataset, SufficientStats};
use crate::scalar::{cmp_real, Real};

/// Average ranks closer than this are treated as tied.
const TIE_TOLERANCE: f64 = 1e-12;

/// Orders sorting `values` ascending, with every arrangement of tied values
/// (missing values last, as one tie group). At most `cap` orders are
/// produced; the flag reports truncation.
fn tie_break_orders<T: Real>(values: &[Option<T>], cap: usize) -> (Vec<Vec<usize>>, bool) {
    let mut objects: Vec<usize> = (0..values.len()).collect();
    objects.sort_by(|&a, &b| match (values[a], values[b]) {
        (Some(x), Some(y)) => cmp_real(&x, &y).then(a.cmp(&b)),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => a.cmp(&b),
    });
    let tol = T::lit(TIE_TOLERANCE);
    let groups: Vec<Vec<usize>> = objects
        .into_iter()
        .chunk_by(|&o| values[o].map(|v| (v / tol).round().to_i64().unwrap_or(i64::MAX)))
        .into_iter()
        .map(|(_, g)| g.collect())
        .collect();
    let mut orders = Vec::new();
    let arrangements = groups
        .iter()
        .map(|g| g.iter().copied().permutations(g.len()).collect::<Vec<_>>())
        .multi_cartesian_product();
    for pieces in arrangements {
        if orders.len() == cap {
            return (orders, true);
        }
        orders.push(pieces.concat());
    }
    if orders.is_empty() {
        orders.push(Vec::new());
    }
    (orders, false)
}

fn best_of<T: Real>(
    stats: &SufficientStats<T>,
    candidates: &[Vec<usize>],
    theta_max: T,
) -> Result<ConditionalFit<T>> {
    let mut best: Option<ConditionalFit<T>> = None;
    for order in candidates {
        let fit = fit_given_order(stats, order, theta_max)?;
        if best.as_ref().is_none_or(|b| improves(fit.f_value, b.f_value)) {
            best = Some(fit);
        }
    }
    Ok(best.expect("candidate set is never empty"))
}

/// Average-rank heuristic: evaluates the orders implied by average ranking
/// positions and average score ranks, with all tie-breaks, plus every
/// adjacent transposition of them.
pub fn fv<T: Real>(stats: &SufficientStats<T>, dataset: &Dataset, config: &SearchConfig<T>) -> Result<FitResult<T>> {
    let start = Instant::now();
    let averages = average_ranks::<T>(dataset);
    let mut sources: Vec<Vec<Option<T>>> = Vec::new();
    if let Some(r) = averages.from_rankings {
        sources.push(r.into_iter().map(Some).collect());
    }
    if let Some(s) = averages.from_scores {
        sources.push(s);
    }
    let mut cap_hit = false;
    let mut base = Vec::new();
    for values in &sources {
        let (orders, truncated) = tie_break_orders(values, config.candidate_cap);
        if truncated {
            log::warn!("FV tie-break enumeration truncated at {} orders", config.candidate_cap);
        }
        cap_hit |= truncated;
        base.extend(orders);
    }
    let mut seen = HashSet::new();
    let mut candidates = Vec::new();
    for order in &base {
        for c in std::iter::once(order.clone()).chain(adjacent_neighbors(order)) {
            if seen.insert(c.clone()) {
                candidates.push(c);
            }
        }
    }
    let best = best_of(stats, &candidates, config.theta_max)?;
    let mut result = FitResult::from_conditional(best, Method::Fv, 0, candidates.len(), start.elapsed());
    result.flags.candidate_cap_hit = cap_hit;
    Ok(result)
}

/// Greedy descent choosing, level by level, the child with the smallest
/// crude bound.
fn greedy_order<T: Real>(stats: &SufficientStats<T>, theta_max: T) -> (Vec<usize>, usize, usize) {
    let mut node = PrefixConstraint::root(stats.n_objects);
    let (mut levels, mut evaluations) = (0, 0);
    while !node.is_total() {
        let mut best: Option<(T, PrefixConstraint)> = None;
        for &o in node.free() {
            let child = node.child(o);
            let b = node_bound(stats, &child, Heuristic::Crude, theta_max).value;
            evaluations += 1;
            if best.as_ref().is_none_or(|(v, _)| b < *v) {
                best = Some((b, child));
            }
        }
        node = best.expect("free objects remain").1;
        levels += 1;
    }
    (node.order().expect("total"), levels, evaluations)
}

pub fn greedy<T: Real>(stats: &SufficientStats<T>, config: &SearchConfig<T>) -> Result<FitResult<T>> {
    let start = Instant::now();
    let (order, levels, evaluations) = greedy_order(stats, config.theta_max);
    let fit = fit_given_order(stats, &order, config.theta_max)?;
    Ok(FitResult::from_conditional(fit, Method::Greedy, levels, evaluations, start.elapsed()))
}

/// Greedy followed by steepest-descent over adjacent transpositions.
pub fn greedy_local<T: Real>(stats: &SufficientStats<T>, config: &SearchConfig<T>) -> Result<FitResult<T>> {
    let start = Instant::now();
    let (order, levels, mut evaluations) = greedy_order(stats, config.theta_max);
    let mut incumbent = fit_given_order(stats, &order, config.theta_max)?;
    let mut rounds = 0;
    let mut converged = false;
    while rounds < config.max_rounds {
        rounds += 1;
        let neighbors = adjacent_neighbors(&incumbent.params.order);
        if neighbors.is_empty() {
            converged = true;
            break;
        }
        evaluations += neighbors.len();
        let best = best_of(stats, &neighbors, config.theta_max)?;
        if improves(best.f_value, incumbent.f_value) {
            incumbent = best;
        } else {
            converged = true;
            break;
        }
    }
    let mut result = FitResult::from_conditional(incumbent, Method::GreedyLocal, levels, evaluations, start.elapsed());
    result.flags.max_rounds_hit = !converged;
    if !converged {
        log::warn!("local search stopped after {} rounds", config.max_rounds);
    }
    Ok(result)
}
