//! Kendall distance between a top-R partial ranking and a full ordering.
//!
//! A partial ranking places every ranked object ahead of every unranked one;
//! pairs of unranked objects are incomparable and never count as discordant.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Dataset;
use crate::scalar::Real;

/// Ordered list of distinct object indices, best first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PartialRanking {
    items: Vec<usize>,
    n_objects: usize,
}

impl PartialRanking {
    pub fn new(items: Vec<usize>, n_objects: usize) -> Result<Self> {
        if items.is_empty() || items.len() > n_objects {
            return Err(Error::RankingLength {
                r: items.len(),
                j: n_objects,
            });
        }
        let mut seen = vec![false; n_objects];
        for &o in &items {
            if o >= n_objects {
                return Err(Error::InvalidDataset(format!(
                    "ranked object {o} outside 0..{n_objects}"
                )));
            }
            if std::mem::replace(&mut seen[o], true) {
                return Err(Error::InvalidDataset(format!(
                    "object {o} appears twice in a ranking"
                )));
            }
        }
        Ok(Self { items, n_objects })
    }

    /// A complete ranking from a permutation.
    pub fn complete(order: &[usize]) -> Result<Self> {
        Self::new(order.to_vec(), order.len())
    }

    pub fn items(&self) -> &[usize] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn n_objects(&self) -> usize {
        self.n_objects
    }

    pub fn is_complete(&self) -> bool {
        self.items.len() == self.n_objects
    }

    /// Rank position (0-based) of every object, `None` when unranked.
    pub fn positions(&self) -> Vec<Option<usize>> {
        let mut pos = vec![None; self.n_objects];
        for (r, &o) in self.items.iter().enumerate() {
            pos[o] = Some(r);
        }
        pos
    }

    /// Whether `u` is placed strictly ahead of `v`.
    pub fn prefers(&self, positions: &[Option<usize>], u: usize, v: usize) -> bool {
        match (positions[u], positions[v]) {
            (Some(a), Some(b)) => a < b,
            (Some(_), None) => true,
            _ => false,
        }
    }
}

/// Validates that `order` is a permutation of `0..order.len()`.
pub fn check_permutation(order: &[usize]) -> Result<()> {
    let mut seen = vec![false; order.len()];
    for &o in order {
        if o >= order.len() || std::mem::replace(&mut seen[o], true) {
            return Err(Error::InvalidArgument(format!(
                "{order:?} is not a permutation"
            )));
        }
    }
    Ok(())
}

/// Inverse permutation: position of each object in `order`.
pub fn inverse(order: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; order.len()];
    for (i, &o) in order.iter().enumerate() {
        pos[o] = i;
    }
    pos
}

fn check_same_universe(pi: &PartialRanking, pi0: &[usize]) -> Result<()> {
    if pi.n_objects() != pi0.len() {
        return Err(Error::InvalidArgument(format!(
            "ranking over {} objects compared with an ordering of {}",
            pi.n_objects(),
            pi0.len()
        )));
    }
    check_permutation(pi0)
}

/// Number of discordant pairs between `pi` and the full ordering `pi0`.
pub fn distance(pi: &PartialRanking, pi0: &[usize]) -> Result<usize> {
    check_same_universe(pi, pi0)?;
    Ok(v_decompose_unchecked(pi, &inverse(pi0)).iter().sum())
}

/// Insertion counts `V_1..V_R`; `V_j` is the number of objects not yet
/// placed that precede the `j`-th ranked object in `pi0`.
pub fn v_decompose(pi: &PartialRanking, pi0: &[usize]) -> Result<Vec<usize>> {
    check_same_universe(pi, pi0)?;
    Ok(v_decompose_unchecked(pi, &inverse(pi0)))
}

fn v_decompose_unchecked(pi: &PartialRanking, pos0: &[usize]) -> Vec<usize> {
    let mut placed = vec![false; pos0.len()];
    pi.items()
        .iter()
        .map(|&o| {
            let v = (0..pos0.len())
                .filter(|&w| !placed[w] && pos0[w] < pos0[o])
                .count();
            placed[o] = true;
            v
        })
        .collect()
}

/// Largest possible distance of a top-`r` ranking over `j` objects.
pub fn max_distance(r: usize, j: usize) -> usize {
    r * j - r * (r + 1) / 2
}

/// All orderings one adjacent transposition away from `order`.
pub fn adjacent_neighbors(order: &[usize]) -> Vec<Vec<usize>> {
    (0..order.len().saturating_sub(1))
        .map(|i| {
            let mut n = order.to_vec();
            n.swap(i, i + 1);
            n
        })
        .collect()
}

/// Per-object average rank positions (1-based).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AverageRanks<T> {
    /// `None` when no judge supplied a ranking.
    pub from_rankings: Option<Vec<T>>,
    /// Per object; `None` for objects that never received a score.
    pub from_scores: Option<Vec<Option<T>>>,
}

/// Averages rank positions across judges.
///
/// Unranked objects take the midpoint `(R_i + 1 + J) / 2` of the tail a
/// judge left unranked. Score-induced ranks use midranks for ties and are
/// computed over the objects each judge actually scored.
pub fn average_ranks<T: Real>(dataset: &Dataset) -> AverageRanks<T> {
    let j = dataset.n_objects();
    let mut rank_sum = vec![T::zero(); j];
    let mut rankers = 0usize;
    let mut score_sum = vec![T::zero(); j];
    let mut score_n = vec![0usize; j];
    let mut any_scores = false;
    for judge in dataset.judges() {
        if let Some(r) = judge.ranking() {
            rankers += 1;
            let tail = T::from_count(r.len() + 1 + j) / T::lit(2.0);
            let pos = r.positions();
            for (o, p) in pos.iter().enumerate() {
                rank_sum[o] += match p {
                    Some(k) => T::from_count(k + 1),
                    None => tail,
                };
            }
        }
        let observed: Vec<(usize, u32)> = judge
            .scores()
            .iter()
            .enumerate()
            .filter_map(|(o, s)| s.map(|s| (o, s)))
            .collect();
        for (o, s) in &observed {
            any_scores = true;
            let below = observed.iter().filter(|(_, t)| t < s).count();
            let tied = observed.iter().filter(|(_, t)| t == s).count();
            // midrank of a tie group occupying positions below+1..=below+tied
            score_sum[*o] += T::from_count(2 * below + tied + 1) / T::lit(2.0);
            score_n[*o] += 1;
        }
    }
    let from_rankings = (rankers > 0).then(|| {
        rank_sum
            .into_iter()
            .map(|s| s / T::from_count(rankers))
            .collect()
    });
    let from_scores = any_scores.then(|| {
        score_sum
            .into_iter()
            .zip(&score_n)
            .map(|(s, &n)| (n > 0).then(|| s / T::from_count(n)))
            .collect()
    });
    AverageRanks {
        from_rankings,
        from_scores,
    }
}
