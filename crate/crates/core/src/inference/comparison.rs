use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::Estimate;
use crate::error::{Error, Result};
use crate::kendall::{inverse, PartialRanking};
use crate::model::{compute_stats, order_of, Dataset, Judge};
use crate::scalar::Real;
use crate::search::{fit, Method, SearchConfig};

/// Single-source aggregation models used as baselines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparisonModel {
    /// Scores plus rankings turned into scores; independent Binomials.
    ConvertedScores,
    /// Independent Binomials on the observed scores alone.
    OnlyScores,
    /// Rankings plus scores turned into rankings; Mallows only.
    ConvertedRankings,
    /// Mallows on the observed rankings alone.
    OnlyRankings,
}

impl ComparisonModel {
    pub const ALL: [ComparisonModel; 4] = [
        ComparisonModel::ConvertedScores,
        ComparisonModel::OnlyScores,
        ComparisonModel::ConvertedRankings,
        ComparisonModel::OnlyRankings,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ComparisonModel::ConvertedScores => "converted_scores",
            ComparisonModel::OnlyScores => "only_scores",
            ComparisonModel::ConvertedRankings => "converted_rankings",
            ComparisonModel::OnlyRankings => "only_rankings",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonFit<T> {
    pub model: ComparisonModel,
    pub estimate: Estimate<T>,
    pub f_value: T,
    pub nodes_expanded: usize,
}

/// A judge's scores with the observed scores of the ranked objects
/// reassigned in rank order: the first-ranked object gets the best score.
pub fn convert_scores(judge: &Judge) -> Vec<Option<u32>> {
    let mut scores = judge.scores().to_vec();
    let Some(ranking) = judge.ranking() else {
        return scores;
    };
    let ranked: Vec<usize> = ranking.items().iter().copied().filter(|&o| scores[o].is_some()).collect();
    let mut values: Vec<u32> = ranked.iter().map(|&o| scores[o].expect("filtered")).collect();
    values.sort_unstable();
    for (o, v) in ranked.into_iter().zip(values) {
        scores[o] = Some(v);
    }
    scores
}

/// Ranking of a judge's scored objects by ascending score, ties in random
/// order. `None` when the judge scored nothing.
pub fn converted_rankings<R: Rng + ?Sized>(judge: &Judge, rng: &mut R) -> Option<PartialRanking> {
    let mut scored: Vec<(u32, usize)> = judge
        .scores()
        .iter()
        .enumerate()
        .filter_map(|(o, s)| s.map(|s| (s, o)))
        .collect();
    if scored.is_empty() {
        return None;
    }
    scored.shuffle(rng);
    scored.sort_by_key(|&(s, _)| s);
    let items = scored.into_iter().map(|(_, o)| o).collect();
    Some(PartialRanking::new(items, judge.scores().len()).expect("distinct scored objects"))
}

fn score_only_fit<T: Real>(dataset: &Dataset, model: ComparisonModel) -> Result<ComparisonFit<T>> {
    let stats = compute_stats::<T>(dataset);
    if !stats.has_scores() {
        return Err(Error::NoScores);
    }
    let m = T::from_u32(dataset.max_score()).expect("max score representable");
    let filler = T::lit(0.5);
    let p: Vec<T> = (0..dataset.n_objects())
        .map(|o| {
            if stats.score_count[o] > 0 {
                stats.mean_score[o] / m
            } else {
                filler
            }
        })
        .collect();
    let f_value = crate::cond_mle::score_cost(&stats, &p);
    Ok(ComparisonFit {
        model,
        estimate: Estimate {
            order: order_of(&p),
            p: Some(p),
            theta: None,
        },
        f_value,
        nodes_expanded: 0,
    })
}

/// Copy of `dataset` with object `o` renamed `relabel[o]`.
fn relabel_objects(dataset: &Dataset, relabel: &[usize]) -> Result<Dataset> {
    let j = dataset.n_objects();
    let judges = dataset
        .judges()
        .iter()
        .map(|judge| {
            let mut scores = vec![None; j];
            for (o, s) in judge.scores().iter().enumerate() {
                scores[relabel[o]] = *s;
            }
            let ranking = judge
                .ranking()
                .map(|r| PartialRanking::new(r.items().iter().map(|&o| relabel[o]).collect(), j))
                .transpose()?;
            Ok(Judge::new(scores, ranking))
        })
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(j, dataset.max_score(), judges)
}

/// Mallows-only fit. Objects are relabelled at random first so that orders
/// the rankings cannot distinguish are not resolved by object index.
fn ranking_only_fit<T: Real, R: Rng + ?Sized>(
    rankings: Vec<PartialRanking>,
    dataset: &Dataset,
    model: ComparisonModel,
    method: Method,
    config: &SearchConfig<T>,
    rng: &mut R,
) -> Result<ComparisonFit<T>> {
    if rankings.is_empty() {
        return Err(Error::NoRankings);
    }
    let j = dataset.n_objects();
    let judges = rankings.into_iter().map(|r| Judge::new(vec![None; j], Some(r))).collect();
    let pooled = Dataset::new(j, dataset.max_score(), judges)?;
    let mut relabel: Vec<usize> = (0..j).collect();
    relabel.shuffle(rng);
    let result = fit(&relabel_objects(&pooled, &relabel)?, method, config)?;
    let back = inverse(&relabel);
    let order = result.params.order.iter().map(|&o| back[o]).collect();
    Ok(ComparisonFit {
        model,
        estimate: Estimate {
            p: None,
            theta: Some((result.params.theta, result.params.theta_status)),
            order,
        },
        f_value: result.f_value,
        nodes_expanded: result.nodes_expanded,
    })
}

/// Fits one of the baseline models. `method` is the search algorithm used by
/// the ranking-based models; `rng` drives their random tie-breaks.
pub fn comparison_fit<T: Real, R: Rng + ?Sized>(
    dataset: &Dataset,
    model: ComparisonModel,
    method: Method,
    config: &SearchConfig<T>,
    rng: &mut R,
) -> Result<ComparisonFit<T>> {
    let observed = || dataset.judges().iter().filter_map(|j| j.ranking().cloned());
    match model {
        ComparisonModel::OnlyScores => score_only_fit(dataset, model),
        ComparisonModel::ConvertedScores => {
            let mut judges: Vec<Judge> = dataset.judges().iter().map(|j| Judge::new(j.scores().to_vec(), None)).collect();
            judges.extend(
                dataset
                    .judges()
                    .iter()
                    .filter(|j| j.ranking().is_some() && j.has_scores())
                    .map(|j| Judge::new(convert_scores(j), None)),
            );
            score_only_fit(&Dataset::new(dataset.n_objects(), dataset.max_score(), judges)?, model)
        }
        ComparisonModel::OnlyRankings => ranking_only_fit(observed().collect(), dataset, model, method, config, rng),
        ComparisonModel::ConvertedRankings => {
            let mut rankings: Vec<PartialRanking> = observed().collect();
            for judge in dataset.judges() {
                rankings.extend(converted_rankings(judge, rng));
            }
            ranking_only_fit(rankings, dataset, model, method, config, rng)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn converted_scores_follow_the_ranking() {
        let judge = Judge::new(vec![Some(10), Some(20)], Some(PartialRanking::new(vec![1, 0], 2).unwrap()));
        assert_eq!(convert_scores(&judge), vec![Some(20), Some(10)]);
    }

    #[test]
    fn conversion_keeps_the_score_multiset() {
        let judge = Judge::new(
            vec![Some(4), None, Some(1), Some(7), Some(3)],
            Some(PartialRanking::new(vec![3, 1, 0], 5).unwrap()),
        );
        let c = convert_scores(&judge);
        // ranked and scored: 3 (7) then 0 (4) -> receive 4 and 7
        assert_eq!(c, vec![Some(7), None, Some(1), Some(4), Some(3)]);
        let mut multiset: Vec<u32> = c.iter().flatten().copied().collect();
        multiset.sort_unstable();
        assert_eq!(multiset, vec![1, 3, 4, 7]);
    }

    #[test]
    fn score_rankings_break_ties_randomly() {
        let judge = Judge::new(vec![Some(2), Some(2), None, Some(0)], None);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut firsts = [0; 4];
        for _ in 0..400 {
            let r = converted_rankings(&judge, &mut rng).unwrap();
            assert_eq!(r.items()[0], 3);
            assert_eq!(r.len(), 3);
            firsts[r.items()[1]] += 1;
        }
        assert!(firsts[0] > 150 && firsts[1] > 150);
    }

    #[test]
    fn only_scores_is_the_sample_mean() {
        let judges = vec![
            Judge::new(vec![Some(1), Some(4), Some(2)], None),
            Judge::new(vec![Some(2), Some(3), None], None),
        ];
        let ds = Dataset::new(3, 5, judges).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let f = comparison_fit(&ds, ComparisonModel::OnlyScores, Method::ExactLp, &SearchConfig::<f64>::for_objects(3), &mut rng).unwrap();
        let p = f.estimate.p.unwrap();
        assert!((p[0] - 0.3).abs() < 1e-15 && (p[1] - 0.7).abs() < 1e-15 && (p[2] - 0.4).abs() < 1e-15);
        assert_eq!(f.estimate.order, vec![0, 2, 1]);
        assert!(f.estimate.theta.is_none());
    }

    #[test]
    fn only_rankings_on_unanimous_rankings() {
        let order = [3, 1, 0, 2];
        let judges = (0..5)
            .map(|_| Judge::new(vec![Some(1); 4], Some(PartialRanking::complete(&order).unwrap())))
            .collect();
        let ds = Dataset::new(4, 5, judges).unwrap();
        let config = SearchConfig::<f64>::for_objects(4);
        for seed in 0..5 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = comparison_fit(&ds, ComparisonModel::OnlyRankings, Method::ExactLp, &config, &mut rng).unwrap();
            assert_eq!(f.estimate.order, order);
            assert!(f.estimate.p.is_none());
            assert_eq!(f.estimate.theta.unwrap().1, crate::model::ThetaStatus::Infinite);
        }
    }

    #[test]
    fn mismatched_models_are_rejected() {
        let ds = Dataset::new(3, 5, vec![Judge::new(vec![Some(1), Some(2), Some(3)], None)]).unwrap();
        let config = SearchConfig::<f64>::for_objects(3);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            comparison_fit(&ds, ComparisonModel::OnlyRankings, Method::ExactLp, &config, &mut rng).unwrap_err(),
            Error::NoRankings
        );
        let ds = Dataset::new(3, 5, vec![Judge::new(vec![None; 3], Some(PartialRanking::new(vec![1], 3).unwrap()))]).unwrap();
        assert_eq!(
            comparison_fit(&ds, ComparisonModel::OnlyScores, Method::ExactLp, &config, &mut rng).unwrap_err(),
            Error::NoScores
        );
        assert!(comparison_fit(&ds, ComparisonModel::ConvertedRankings, Method::ExactLp, &config, &mut rng).is_ok());
    }
}
