use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use super::{node_bound, FitResult, Heuristic, Method, SearchConfig};
use crate::cond_mle::{fit_given_order, ConditionalFit, PrefixConstraint};
use crate::error::Result;
use crate::model::SufficientStats;
use crate::scalar::{cmp_real, Real};

#[derive(Debug, Clone)]
pub(crate) struct SearchNode<T> {
    pub constraint: PrefixConstraint,
    pub bound: T,
    pub seq: u64,
}

impl<T: Real> SearchNode<T> {
    fn depth(&self) -> usize {
        self.constraint.prefix().len()
    }

    /// Priority: lower bound first, then earlier insertion, then prefix.
    fn priority(&self, other: &Self) -> Ordering {
        cmp_real(&self.bound, &other.bound)
            .then(self.seq.cmp(&other.seq))
            .then_with(|| self.constraint.prefix().cmp(other.constraint.prefix()))
    }
}

impl<T: Real> PartialEq for SearchNode<T> {
    fn eq(&self, other: &Self) -> bool {
        self.priority(other) == Ordering::Equal
    }
}

impl<T: Real> Eq for SearchNode<T> {}

impl<T: Real> PartialOrd for SearchNode<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for SearchNode<T> {
    // reversed so the max-heap pops the smallest priority
    fn cmp(&self, other: &Self) -> Ordering {
        other.priority(self)
    }
}

/// Exact maximum-likelihood consensus by best-first search over prefixes.
///
/// Every node carries a lower bound on the objective over all its
/// completions; nodes fixing `J - 1` objects are exact, so the first one
/// dequeued is optimal. If the node budget runs out the best complete order
/// seen so far is returned with `optimal = false`.
pub fn astar<T: Real>(
    stats: &SufficientStats<T>,
    heuristic: Heuristic,
    config: &SearchConfig<T>,
) -> Result<FitResult<T>> {
    let start = Instant::now();
    let j = stats.n_objects;
    let algorithm = match heuristic {
        Heuristic::Crude => Method::ExactCrude,
        Heuristic::Lp => Method::ExactLp,
    };
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let mut evaluations = 0usize;
    let mut fallbacks = 0usize;
    let mut best_terminal: Option<SearchNode<T>> = None;

    let root = PrefixConstraint::root(j);
    let b = node_bound(stats, &root, heuristic, config.theta_max);
    evaluations += 1;
    fallbacks += usize::from(b.lp_fell_back);
    heap.push(SearchNode {
        constraint: root,
        bound: b.value,
        seq,
    });

    let mut expanded = 0usize;
    while let Some(node) = heap.pop() {
        if node.constraint.is_total() {
            let order = node.constraint.order().expect("total constraint");
            let fit = fit_given_order(stats, &order, config.theta_max)?;
            let mut result = FitResult::from_conditional(fit, algorithm, expanded, evaluations, start.elapsed());
            result.flags.lp_fallbacks = fallbacks;
            return Ok(result);
        }
        if expanded >= config.node_budget {
            heap.push(node);
            let fit = fallback_order(stats, &heap, best_terminal.as_ref(), config)?;
            log::warn!("node budget of {} exhausted; returning a non-optimal order", config.node_budget);
            let mut result = FitResult::from_conditional(fit, algorithm, expanded, evaluations, start.elapsed());
            result.flags.optimal = false;
            result.flags.budget_exhausted = true;
            result.flags.lp_fallbacks = fallbacks;
            return Ok(result);
        }
        expanded += 1;
        log::trace!("expand depth {} bound {}", node.depth(), node.bound);
        for &o in node.constraint.free() {
            let child = node.constraint.child(o);
            let b = node_bound(stats, &child, heuristic, config.theta_max);
            evaluations += 1;
            fallbacks += usize::from(b.lp_fell_back);
            seq += 1;
            let child = SearchNode {
                constraint: child,
                bound: b.value,
                seq,
            };
            if child.constraint.is_total() && best_terminal.as_ref().is_none_or(|t| child.bound < t.bound) {
                best_terminal = Some(child.clone());
            }
            heap.push(child);
        }
    }
    unreachable!("the prefix tree always contains a terminal node")
}

/// Best available order after the budget ran out: the best terminal seen,
/// or the greedy completion of the most promising open node.
fn fallback_order<T: Real>(
    stats: &SufficientStats<T>,
    heap: &BinaryHeap<SearchNode<T>>,
    best_terminal: Option<&SearchNode<T>>,
    config: &SearchConfig<T>,
) -> Result<ConditionalFit<T>> {
    let mut candidates = Vec::new();
    if let Some(t) = best_terminal {
        candidates.push(t.constraint.order().expect("terminal"));
    }
    if let Some(top) = heap.peek() {
        let mut c = top.constraint.clone();
        while !c.is_total() {
            c = c
                .free()
                .iter()
                .map(|&o| c.child(o))
                .map(|child| (node_bound(stats, &child, Heuristic::Crude, config.theta_max).value, child))
                .min_by(|a, b| cmp_real(&a.0, &b.0))
                .expect("free objects remain")
                .1;
        }
        candidates.push(c.order().expect("total"));
    }
    let mut best: Option<ConditionalFit<T>> = None;
    for order in candidates {
        let fit = fit_given_order(stats, &order, config.theta_max)?;
        if best.as_ref().is_none_or(|b| fit.f_value < b.f_value) {
            best = Some(fit);
        }
    }
    Ok(best.expect("at least one candidate"))
}
