use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kendall::PartialRanking;
use crate::model::{compute_stats, log_density, Dataset, Judge, Parameters};
use crate::scalar::Real;
use crate::search::{brute_force, SearchConfig};

/// Largest outcome space enumerated by default.
pub const DEFAULT_OUTCOME_CAP: usize = 10_000;

/// Exact sampling distribution summary of the single-judge MLE.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiasTable<T> {
    pub p0: Vec<T>,
    pub theta0: T,
    pub max_score: u32,
    pub ranking_length: usize,
    pub outcomes: usize,
    /// Probability mass of all enumerated outcomes (should be one).
    pub total_probability: T,
    pub expected_p: Vec<T>,
    pub bias: Vec<T>,
    /// Probability that the scale estimate is pushed to the cap.
    pub capped_theta_probability: T,
    /// Expected scale estimate; `None` when it is infinite.
    pub expected_theta: Option<T>,
}

impl<T: Real> std::fmt::Display for BiasTable<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "outcomes: {}  (J = {}, R = {}, M = {}, total probability {:.12})",
            self.outcomes,
            self.p0.len(),
            self.ranking_length,
            self.max_score,
            self.total_probability
        )?;
        writeln!(f, "{:<10}{:>10}{:>12}{:>10}", "parameter", "true", "expected", "bias")?;
        for (k, ((p, e), b)) in self.p0.iter().zip(&self.expected_p).zip(&self.bias).enumerate() {
            writeln!(f, "{:<10}{:>10.4}{:>12.4}{:>10.4}", format!("p{}", k + 1), p, e, b)?;
        }
        match self.expected_theta {
            Some(e) => writeln!(
                f,
                "{:<10}{:>10.4}{:>12.4}{:>10.4}",
                "theta",
                self.theta0,
                e,
                e - self.theta0
            )?,
            None => writeln!(f, "{:<10}{:>10.4}{:>12}{:>10}", "theta", self.theta0, "inf", "inf")?,
        }
        write!(f, "P(theta estimate unbounded) = {:.4}", self.capped_theta_probability)
    }
}

/// Enumerates every single-judge outcome (all score vectors and all top-`r`
/// rankings), weighting each exact MLE by its probability under the truth.
pub fn bias_enumeration<T: Real>(
    p0: &[T],
    theta0: T,
    max_score: u32,
    r: usize,
    outcome_cap: usize,
) -> Result<BiasTable<T>> {
    let j = p0.len();
    let truth = Parameters::from_qualities(p0.to_vec(), theta0)?;
    if r == 0 || r > j {
        return Err(Error::RankingLength { r, j });
    }
    let score_vectors = (u64::from(max_score) + 1).checked_pow(j as u32);
    let rankings: usize = (j - r + 1..=j).product();
    let size = score_vectors
        .and_then(|s| usize::try_from(s).ok())
        .and_then(|s| s.checked_mul(rankings))
        .unwrap_or(usize::MAX);
    if size > outcome_cap {
        return Err(Error::EnumerationCap { size, cap: outcome_cap });
    }

    let mut config = SearchConfig::<T>::for_objects(j);
    config.brute_force_cap = config.brute_force_cap.max(j);
    let mut total = T::zero();
    let mut expected_p = vec![T::zero(); j];
    let mut capped = T::zero();
    let mut expected_theta = T::zero();
    let mut outcomes = 0;
    for scores in (0..j).map(|_| 0..=max_score).multi_cartesian_product() {
        for items in (0..j).permutations(r) {
            let judge = Judge::new(scores.iter().map(|&s| Some(s)).collect(), Some(PartialRanking::new(items, j)?));
            let prob = log_density(&judge, &truth, max_score)?.value.exp();
            let ds = Dataset::new(j, max_score, vec![judge])?;
            let fit = brute_force(&compute_stats::<T>(&ds), &config)?;
            outcomes += 1;
            total += prob;
            for (e, &p) in expected_p.iter_mut().zip(&fit.params.p) {
                *e += prob * p;
            }
            if fit.params.theta_status.is_boundary() && fit.params.theta >= config.theta_max {
                capped += prob;
            } else {
                expected_theta += prob * fit.params.theta;
            }
        }
    }
    let bias = expected_p.iter().zip(p0).map(|(&e, &p)| e - p).collect();
    Ok(BiasTable {
        p0: p0.to_vec(),
        theta0,
        max_score,
        ranking_length: r,
        outcomes,
        total_probability: total,
        expected_p,
        bias,
        capped_theta_probability: capped,
        expected_theta: (capped == T::zero()).then_some(expected_theta),
    })
}
