use std::time::Instant;

use itertools::Itertools;

use super::{improves, FitResult, Method, SearchConfig};
use crate::cond_mle::{fit_given_order, ConditionalFit};
use crate::error::{Error, Result};
use crate::model::SufficientStats;
use crate::scalar::Real;

/// Evaluates every ordering and keeps the lexicographically first minimiser.
pub fn brute_force<T: Real>(stats: &SufficientStats<T>, config: &SearchConfig<T>) -> Result<FitResult<T>> {
    let j = stats.n_objects;
    if j > config.brute_force_cap {
        return Err(Error::BruteForceCap {
            j,
            cap: config.brute_force_cap,
        });
    }
    let start = Instant::now();
    let mut best: Option<ConditionalFit<T>> = None;
    let mut evaluations = 0;
    for order in (0..j).permutations(j) {
        let fit = fit_given_order(stats, &order, config.theta_max)?;
        evaluations += 1;
        if best.as_ref().is_none_or(|b| improves(fit.f_value, b.f_value)) {
            best = Some(fit);
        }
    }
    let best = best.expect("at least one ordering");
    Ok(FitResult::from_conditional(best, Method::Brute, 0, evaluations, start.elapsed()))
}
