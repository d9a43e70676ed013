use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{quantile, quantile_observed, Estimate};
use crate::error::{Error, Result};
use crate::model::{Dataset, ThetaStatus};
use crate::scalar::{cmp_real, Real};
use crate::search::{fit, Method, SearchConfig};

pub const DEFAULT_REPLICATES: usize = 200;
pub const DEFAULT_LEVEL: f64 = 0.90;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval<T> {
    pub lower: T,
    pub upper: T,
}

impl<T: Real> Interval<T> {
    pub fn contains(&self, x: T) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn width(&self) -> T {
        self.upper - self.lower
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaInterval<T> {
    pub lower: T,
    pub upper: T,
    /// Share of replicates whose scale estimate was unbounded.
    pub infinite_proportion: f64,
}

/// Integer rank-place interval, always containing the point estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RankInterval {
    pub point: usize,
    pub lower: usize,
    pub upper: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BootstrapSummary<T> {
    pub replicates: usize,
    pub level: f64,
    pub seed: u64,
    /// Replicates whose refit failed; they are excluded from the intervals.
    pub failures: usize,
    pub point: Estimate<T>,
    pub p_intervals: Option<Vec<Interval<T>>>,
    pub theta_interval: Option<ThetaInterval<T>>,
    pub rank_intervals: Vec<RankInterval>,
    pub replicate_estimates: Vec<Estimate<T>>,
}

/// Random stream for replicate `index` (`0` is reserved for the point fit).
pub fn replicate_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Nonparametric bootstrap over judges for an arbitrary estimator.
///
/// Replicate `b` draws its resample and any estimator randomness from its
/// own stream, so results do not depend on scheduling.
pub fn bootstrap_with<T, F>(
    dataset: &Dataset,
    replicates: usize,
    level: f64,
    seed: u64,
    estimator: F,
) -> Result<BootstrapSummary<T>>
where
    T: Real,
    F: Fn(&Dataset, &mut ChaCha8Rng) -> Result<Estimate<T>> + Sync,
{
    if replicates == 0 {
        return Err(Error::InvalidArgument("at least one bootstrap replicate is required".into()));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidArgument(format!("confidence level {level} outside (0, 1)")));
    }
    let point = estimator(dataset, &mut replicate_rng(seed, 0))?;
    let n = dataset.n_judges();
    let outcomes: Vec<Result<Estimate<T>>> = (0..replicates)
        .into_par_iter()
        .map(|b| {
            let mut rng = replicate_rng(seed, b as u64 + 1);
            let indices: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            estimator(&dataset.resample(&indices)?, &mut rng)
        })
        .collect();
    let mut estimates = Vec::with_capacity(replicates);
    let mut failures = 0;
    for (b, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(e) => estimates.push(e),
            Err(e) => {
                log::warn!("bootstrap replicate {b} failed: {e}");
                failures += 1;
            }
        }
    }
    if estimates.is_empty() {
        return Err(Error::InvalidArgument(format!("all {replicates} bootstrap replicates failed")));
    }

    let (lo, hi) = ((1.0 - level) / 2.0, (1.0 + level) / 2.0);
    let j = dataset.n_objects();
    let p_intervals = point.p.as_ref().map(|_| {
        (0..j)
            .map(|o| {
                let mut xs: Vec<T> = estimates.iter().filter_map(|e| e.p.as_ref().map(|p| p[o])).collect();
                xs.sort_by(cmp_real);
                Interval {
                    lower: quantile(&xs, lo),
                    upper: quantile(&xs, hi),
                }
            })
            .collect()
    });
    let theta_interval = point.theta.map(|_| {
        let mut xs: Vec<T> = estimates.iter().filter_map(|e| e.theta.map(|t| t.0)).collect();
        let infinite = estimates
            .iter()
            .filter(|e| matches!(e.theta, Some((_, ThetaStatus::Infinite))))
            .count();
        xs.sort_by(cmp_real);
        ThetaInterval {
            lower: quantile(&xs, lo),
            upper: quantile(&xs, hi),
            infinite_proportion: infinite as f64 / xs.len() as f64,
        }
    });
    let places: Vec<Vec<usize>> = estimates.iter().map(Estimate::rank_places).collect();
    let rank_intervals = point
        .rank_places()
        .into_iter()
        .enumerate()
        .map(|(o, point)| {
            let mut xs: Vec<usize> = places.iter().map(|p| p[o]).collect();
            xs.sort_unstable();
            RankInterval {
                point,
                lower: quantile_observed(&xs, lo).min(point),
                upper: quantile_observed(&xs, hi).max(point),
            }
        })
        .collect();

    Ok(BootstrapSummary {
        replicates,
        level,
        seed,
        failures,
        point,
        p_intervals,
        theta_interval,
        rank_intervals,
        replicate_estimates: estimates,
    })
}

/// Bootstrap of the Mallows-Binomial fit with the chosen algorithm.
pub fn bootstrap<T: Real>(
    dataset: &Dataset,
    method: Method,
    config: &SearchConfig<T>,
    replicates: usize,
    level: f64,
    seed: u64,
) -> Result<BootstrapSummary<T>> {
    config.validate()?;
    bootstrap_with(dataset, replicates, level, seed, |ds, _| {
        fit(ds, method, config).map(|f| Estimate::from(&f))
    })
}
