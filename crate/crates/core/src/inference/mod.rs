//! Uncertainty quantification and simulation studies built on the fitters.

mod bias;
mod bootstrap;
mod comparison;
mod consistency;

use serde::Serialize;

pub use bias::{bias_enumeration, BiasTable, DEFAULT_OUTCOME_CAP};
pub use bootstrap::{
    bootstrap, bootstrap_with, replicate_rng, BootstrapSummary, Interval, RankInterval, ThetaInterval,
    DEFAULT_LEVEL, DEFAULT_REPLICATES,
};
pub use comparison::{comparison_fit, convert_scores, converted_rankings, ComparisonFit, ComparisonModel};
pub use consistency::{consistency_experiment, simulate_trial, ConsistencyCell, ConsistencyRow};

use crate::model::ThetaStatus;
use crate::scalar::Real;
use crate::search::FitResult;

/// The quantities a model reports, for interval construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate<T> {
    /// Qualities; absent for ranking-only models.
    pub p: Option<Vec<T>>,
    /// Consensus scale and its status; absent for score-only models.
    pub theta: Option<(T, ThetaStatus)>,
    /// Consensus order, best first.
    pub order: Vec<usize>,
}

impl<T: Real> Estimate<T> {
    /// 1-based rank place of every object.
    pub fn rank_places(&self) -> Vec<usize> {
        let mut places = vec![0; self.order.len()];
        for (k, &o) in self.order.iter().enumerate() {
            places[o] = k + 1;
        }
        places
    }
}

impl<T: Real> From<&FitResult<T>> for Estimate<T> {
    fn from(fit: &FitResult<T>) -> Self {
        Self {
            p: Some(fit.params.p.clone()),
            theta: (fit.params.theta_status != ThetaStatus::Undefined)
                .then_some((fit.params.theta, fit.params.theta_status)),
            order: fit.params.order.clone(),
        }
    }
}

/// Linear-interpolation sample quantile of sorted data.
pub(crate) fn quantile<T: Real>(sorted: &[T], q: f64) -> T {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    let frac = T::lit(h - lo as f64);
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Inverse-CDF sample quantile; always an observed value.
pub(crate) fn quantile_observed<T: Copy>(sorted: &[T], q: f64) -> T {
    let n = sorted.len();
    let k = ((n as f64 * q).ceil() as usize).clamp(1, n);
    sorted[k - 1]
}
