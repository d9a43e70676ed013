use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::bootstrap::replicate_rng;
use crate::error::{Error, Result};
use crate::model::{sample, Dataset, Parameters, ThetaStatus};
use crate::search::{fit, Method, SearchConfig};

/// One simulation setting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConsistencyCell {
    pub n_judges: usize,
    pub n_objects: usize,
    pub max_score: u32,
    pub ranking_length: usize,
    pub theta: f64,
}

impl ConsistencyCell {
    /// Full grid over the supplied levels, skipping `R > J`.
    pub fn grid(
        judges: &[usize],
        objects: &[usize],
        max_scores: &[u32],
        ranking_lengths: &[usize],
        thetas: &[f64],
    ) -> Vec<Self> {
        let mut cells = Vec::new();
        for &n_objects in objects {
            for &max_score in max_scores {
                for &ranking_length in ranking_lengths.iter().filter(|&&r| r <= n_objects) {
                    for &theta in thetas {
                        for &n_judges in judges {
                            cells.push(Self {
                                n_judges,
                                n_objects,
                                max_score,
                                ranking_length,
                                theta,
                            });
                        }
                    }
                }
            }
        }
        cells
    }

    /// Stream key shared by cells differing only in panel size.
    fn stream_key(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for v in [
            self.n_objects as u64,
            u64::from(self.max_score),
            self.ranking_length as u64,
            self.theta.to_bits(),
        ] {
            h = (h ^ v).wrapping_mul(0x100_0000_01b3);
        }
        h
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyRow {
    pub cell: ConsistencyCell,
    pub trial: usize,
    /// `|p̂_j - p_j|` for every object.
    pub p_abs_errors: Vec<f64>,
    pub theta_hat: f64,
    pub theta_status: ThetaStatus,
    /// `θ̂ - θ`; `None` when the estimate is unbounded.
    pub theta_error: Option<f64>,
}

impl ConsistencyRow {
    pub fn mean_p_error(&self) -> f64 {
        self.p_abs_errors.iter().sum::<f64>() / self.p_abs_errors.len() as f64
    }
}

/// True parameters and simulated panel for one trial of a cell.
///
/// Qualities are uniform on the unit hypercube. The draw depends only on
/// `(seed, cell without I, trial)`, so a larger panel extends a smaller one
/// with the same truth.
pub fn simulate_trial(cell: &ConsistencyCell, trial: usize, seed: u64) -> Result<(Parameters<f64>, Dataset)> {
    if cell.ranking_length > cell.n_objects || cell.ranking_length == 0 {
        return Err(Error::RankingLength {
            r: cell.ranking_length,
            j: cell.n_objects,
        });
    }
    let mut rng = replicate_rng(seed ^ cell.stream_key(), trial as u64);
    let p: Vec<f64> = (0..cell.n_objects).map(|_| rng.random()).collect();
    let truth = Parameters::from_qualities(p, cell.theta)?;
    let data = sample(&truth, cell.n_judges, cell.max_score, cell.ranking_length, &mut rng)?;
    Ok((truth, data))
}

/// Simulates panels from known parameters and records estimation errors.
pub fn consistency_experiment(
    cells: &[ConsistencyCell],
    trials: usize,
    method: Method,
    seed: u64,
) -> Result<Vec<ConsistencyRow>> {
    if let Some(c) = cells.iter().find(|c| c.ranking_length > c.n_objects || c.ranking_length == 0) {
        return Err(Error::RankingLength {
            r: c.ranking_length,
            j: c.n_objects,
        });
    }
    let work: Vec<(ConsistencyCell, usize)> = cells
        .iter()
        .flat_map(|&c| (0..trials).map(move |t| (c, t)))
        .collect();
    work.into_par_iter()
        .map(|(cell, trial)| {
            let (truth, data) = simulate_trial(&cell, trial, seed)?;
            let config = SearchConfig::for_objects(cell.n_objects);
            let result = fit(&data, method, &config)?;
            let status = result.params.theta_status;
            Ok(ConsistencyRow {
                cell,
                trial,
                p_abs_errors: result.params.p.iter().zip(&truth.p).map(|(a, b)| (a - b).abs()).collect(),
                theta_hat: result.params.theta,
                theta_status: status,
                theta_error: (status != ThetaStatus::Infinite).then(|| result.params.theta - cell.theta),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_skips_long_rankings() {
        let g = ConsistencyCell::grid(&[5, 20], &[3, 6], &[10], &[3, 6], &[1.0]);
        assert_eq!(g.len(), 2 * (1 + 2));
    }

    #[test]
    fn rows_are_reproducible() {
        let small = ConsistencyCell {
            n_judges: 3,
            n_objects: 4,
            max_score: 5,
            ranking_length: 2,
            theta: 1.0,
        };
        let large = ConsistencyCell { n_judges: 30, ..small };
        let rows = consistency_experiment(&[small, large], 2, Method::ExactLp, 9).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.p_abs_errors.len() == 4));
        let again = consistency_experiment(&[small, large], 2, Method::ExactLp, 9).unwrap();
        assert_eq!(rows, again);
    }

    #[test]
    fn invalid_cells_are_rejected() {
        let bad = ConsistencyCell {
            n_judges: 3,
            n_objects: 4,
            max_score: 5,
            ranking_length: 5,
            theta: 1.0,
        };
        assert!(consistency_experiment(&[bad], 1, Method::ExactLp, 0).is_err());
    }
}
