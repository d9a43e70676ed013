//! Data types and the Mallows-Binomial density.
//!
//! Each judge contributes Binomial(M, p_j) scores for the objects they scored
//! and, optionally, a top-R ranking drawn from a Mallows model whose mode is
//! the ascending order of `p`. Lower scores and lower `p` mean better.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kendall::{self, PartialRanking};
use crate::scalar::{cmp_real, xlogy, Real};

/// One judge's scores (`None` = missing) and optional ranking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Judge {
    scores: Vec<Option<u32>>,
    ranking: Option<PartialRanking>,
}

impl Judge {
    pub fn new(scores: Vec<Option<u32>>, ranking: Option<PartialRanking>) -> Self {
        Self { scores, ranking }
    }

    pub fn scores(&self) -> &[Option<u32>] {
        &self.scores
    }

    pub fn ranking(&self) -> Option<&PartialRanking> {
        self.ranking.as_ref()
    }

    pub fn has_scores(&self) -> bool {
        self.scores.iter().any(Option::is_some)
    }
}

/// Panel of judges assessing `n_objects` objects on the integer scale `0..=max_score`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Dataset {
    n_objects: usize,
    max_score: u32,
    judges: Vec<Judge>,
}

impl Dataset {
    pub fn new(n_objects: usize, max_score: u32, judges: Vec<Judge>) -> Result<Self> {
        if n_objects == 0 {
            return Err(Error::InvalidDataset("no objects".into()));
        }
        if max_score == 0 {
            return Err(Error::InvalidDataset("maximum score must be positive".into()));
        }
        let mut observed = false;
        for (i, judge) in judges.iter().enumerate() {
            if judge.scores.len() != n_objects {
                return Err(Error::InvalidDataset(format!(
                    "judge {i} has {} score cells, expected {n_objects}",
                    judge.scores.len()
                )));
            }
            if let Some((o, s)) = judge
                .scores
                .iter()
                .enumerate()
                .find_map(|(o, s)| s.filter(|&s| s > max_score).map(|s| (o, s)))
            {
                return Err(Error::InvalidDataset(format!(
                    "judge {i} gave object {o} score {s} above the maximum {max_score}"
                )));
            }
            if let Some(r) = &judge.ranking {
                if r.n_objects() != n_objects {
                    return Err(Error::InvalidDataset(format!(
                        "judge {i} ranks over {} objects, expected {n_objects}",
                        r.n_objects()
                    )));
                }
                observed = true;
            }
            observed |= judge.has_scores();
        }
        if !observed {
            return Err(Error::InvalidDataset(
                "dataset contains neither scores nor rankings".into(),
            ));
        }
        Ok(Self {
            n_objects,
            max_score,
            judges,
        })
    }

    pub fn n_objects(&self) -> usize {
        self.n_objects
    }

    pub fn max_score(&self) -> u32 {
        self.max_score
    }

    pub fn n_judges(&self) -> usize {
        self.judges.len()
    }

    pub fn judges(&self) -> &[Judge] {
        &self.judges
    }

    /// Dataset made of the judges at `indices` (repetitions allowed).
    pub fn resample(&self, indices: &[usize]) -> Result<Self> {
        let judges = indices.iter().map(|&i| self.judges[i].clone()).collect();
        Self::new(self.n_objects, self.max_score, judges)
    }
}

/// How the consensus scale estimate relates to its admissible range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaStatus {
    /// Interior minimiser of the conditional objective.
    Interior,
    /// Every ranking agrees with the consensus; the MLE is infinite and the
    /// reported value is the cap.
    Infinite,
    /// Minimiser lies beyond the cap although rankings are not unanimous.
    AtCap,
    /// Rankings are no more concentrated than uniform; minimiser at the floor.
    AtFloor,
    /// No rankings were observed.
    Undefined,
}

impl ThetaStatus {
    pub fn is_boundary(self) -> bool {
        !matches!(self, ThetaStatus::Interior)
    }
}

/// Object qualities, consensus scale and the consensus ordering.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Parameters<T> {
    pub p: Vec<T>,
    pub theta: T,
    pub order: Vec<usize>,
    pub theta_status: ThetaStatus,
}

impl<T: Real> Parameters<T> {
    /// Validates `p` against the stored `order`, which resolves ties in `p`.
    pub fn new(p: Vec<T>, theta: T, order: Vec<usize>, theta_status: ThetaStatus) -> Result<Self> {
        if p.len() != order.len() {
            return Err(Error::InvalidParameters(format!(
                "{} qualities for an ordering of {}",
                p.len(),
                order.len()
            )));
        }
        kendall::check_permutation(&order)?;
        if let Some(bad) = p.iter().find(|x| !(**x >= T::zero() && **x <= T::one())) {
            return Err(Error::InvalidParameters(format!("quality {bad} outside [0, 1]")));
        }
        if order.windows(2).any(|w| p[w[0]] > p[w[1]] + T::tolerance()) {
            return Err(Error::InvalidParameters(
                "qualities are not non-decreasing along the consensus ordering".into(),
            ));
        }
        let theta_ok = match theta_status {
            ThetaStatus::Undefined => theta >= T::zero(),
            _ => theta > T::zero(),
        };
        if !theta_ok {
            return Err(Error::InvalidParameters(format!("theta {theta} must be positive")));
        }
        Ok(Self {
            p,
            theta,
            order,
            theta_status,
        })
    }

    /// Parameters whose ordering is the stable ascending sort of `p`.
    pub fn from_qualities(p: Vec<T>, theta: T) -> Result<Self> {
        let order = order_of(&p);
        Self::new(p, theta, order, ThetaStatus::Interior)
    }

    pub fn n_objects(&self) -> usize {
        self.p.len()
    }
}

/// Stable ascending ordering of `values` (ties keep index order).
pub fn order_of<T: Real>(values: &[T]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| cmp_real(&values[a], &values[b]));
    order
}

/// Aggregates from which every objective in the crate is computed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SufficientStats<T> {
    pub n_objects: usize,
    pub max_score: u32,
    /// Sum of observed scores per object.
    pub score_sum: Vec<u64>,
    pub score_count: Vec<usize>,
    /// Mean observed score per object; zero when `score_count` is zero.
    pub mean_score: Vec<T>,
    /// Row-major `J x J`; entry `(u, v)` counts rankers placing `u` strictly above `v`.
    pub pair_counts: Vec<u32>,
    /// `pair_counts` divided by `ranker_count` (all zero without rankers).
    pub q: Vec<T>,
    pub ranker_count: usize,
    /// Distinct ranking lengths with their multiplicities, ascending.
    pub length_counts: Vec<(usize, usize)>,
}

impl<T: Real> SufficientStats<T> {
    #[inline]
    pub fn q(&self, u: usize, v: usize) -> T {
        self.q[u * self.n_objects + v]
    }

    #[inline]
    pub fn pair_count(&self, u: usize, v: usize) -> u32 {
        self.pair_counts[u * self.n_objects + v]
    }

    pub fn has_rankings(&self) -> bool {
        self.ranker_count > 0
    }

    pub fn has_scores(&self) -> bool {
        self.score_count.iter().any(|&c| c > 0)
    }

    /// Multiset of ranking lengths, expanded.
    pub fn ranking_lengths(&self) -> Vec<usize> {
        self.length_counts
            .iter()
            .flat_map(|&(r, n)| std::iter::repeat_n(r, n))
            .collect()
    }

    /// Total Kendall distance of all rankings to `order`.
    pub fn total_distance(&self, order: &[usize]) -> u64 {
        let mut d = 0u64;
        for (a, &u) in order.iter().enumerate() {
            for &v in &order[a + 1..] {
                d += u64::from(self.pair_count(v, u));
            }
        }
        d
    }

    /// Mean Kendall distance per ranker (zero without rankers).
    pub fn mean_distance(&self, order: &[usize]) -> T {
        if self.ranker_count == 0 {
            return T::zero();
        }
        T::from_u64(self.total_distance(order)).expect("distance representable")
            / T::from_count(self.ranker_count)
    }

    /// Objects lacking any observed score.
    pub fn unscored_objects(&self) -> Vec<usize> {
        (0..self.n_objects)
            .filter(|&o| self.score_count[o] == 0)
            .collect()
    }
}

/// Tabulates score means and the pairwise preference matrix.
pub fn compute_stats<T: Real>(dataset: &Dataset) -> SufficientStats<T> {
    let j = dataset.n_objects();
    let mut score_sum = vec![0u64; j];
    let mut score_count = vec![0usize; j];
    let mut pair_counts = vec![0u32; j * j];
    let mut ranker_count = 0usize;
    let mut lengths = std::collections::BTreeMap::<usize, usize>::new();
    for judge in dataset.judges() {
        for (o, s) in judge.scores().iter().enumerate() {
            if let Some(s) = s {
                score_sum[o] += u64::from(*s);
                score_count[o] += 1;
            }
        }
        if let Some(r) = judge.ranking() {
            ranker_count += 1;
            *lengths.entry(r.len()).or_default() += 1;
            let pos = r.positions();
            for u in 0..j {
                for v in 0..j {
                    if u != v && r.prefers(&pos, u, v) {
                        pair_counts[u * j + v] += 1;
                    }
                }
            }
        }
    }
    let mean_score = score_sum
        .iter()
        .zip(&score_count)
        .map(|(&s, &n)| {
            if n == 0 {
                T::zero()
            } else {
                T::from_u64(s).expect("score sum representable") / T::from_count(n)
            }
        })
        .collect();
    let q = pair_counts
        .iter()
        .map(|&c| {
            if ranker_count == 0 {
                T::zero()
            } else {
                T::from_u32(c).expect("count representable") / T::from_count(ranker_count)
            }
        })
        .collect();
    SufficientStats {
        n_objects: j,
        max_score: dataset.max_score(),
        score_sum,
        score_count,
        mean_score,
        pair_counts,
        q,
        ranker_count,
        length_counts: lengths.into_iter().collect(),
    }
}

fn check_levels(r: usize, j: usize) -> Result<()> {
    if r == 0 || r > j {
        Err(Error::RankingLength { r, j })
    } else {
        Ok(())
    }
}

/// `ln((1 - e^{-θn}) / (1 - e^{-θ}))`, the log partition of one insertion level.
#[inline]
fn log_level<T: Real>(theta: T, n: usize) -> T {
    let nf = T::from_count(n);
    if n == 1 || theta.is_infinite() {
        T::zero()
    } else if theta == T::zero() {
        nf.ln()
    } else {
        ((-theta * nf).exp_m1() / (-theta).exp_m1()).ln()
    }
}

/// Mean and variance of a truncated geometric on `{0, .., n-1}` with weights `e^{-θv}`.
#[inline]
fn level_moments<T: Real>(theta: T, n: usize) -> (T, T) {
    let nf = T::from_count(n);
    if n == 1 || theta.is_infinite() {
        return (T::zero(), T::zero());
    }
    let one = T::one();
    if theta * nf < T::lit(1e-2) {
        // cumulant expansion around the uniform distribution
        let n2 = nf * nf;
        let n4 = n2 * n2;
        let mean = (nf - one) / T::lit(2.0) - theta * (n2 - one) / T::lit(12.0)
            + theta.powi(3) * (n4 - one) / T::lit(720.0);
        let var = (n2 - one) / T::lit(12.0) - theta * theta * (n4 - one) / T::lit(240.0);
        return (mean, var);
    }
    let tn = theta * nf;
    let mean = theta.exp_m1().recip() - nf / tn.exp_m1();
    let var = (theta.exp_m1() * -(-theta).exp_m1()).recip() - nf * nf / (tn.exp_m1() * -(-tn).exp_m1());
    (mean, var)
}

/// Natural log of the partial-Mallows normalising constant `ψ_{R,J}(θ)`.
pub fn log_psi<T: Real>(theta: T, r: usize, j: usize) -> Result<T> {
    check_levels(r, j)?;
    if !(theta >= T::zero()) {
        return Err(Error::InvalidArgument(format!("theta {theta} must be non-negative")));
    }
    Ok(log_psi_unchecked(theta, r, j))
}

#[inline]
pub(crate) fn log_psi_unchecked<T: Real>(theta: T, r: usize, j: usize) -> T {
    (0..r).map(|level| log_level(theta, j - level)).sum()
}

/// `ψ_{R,J}(θ)`; at `θ = 0` this is the number of top-R rankings.
pub fn psi<T: Real>(theta: T, r: usize, j: usize) -> Result<T> {
    log_psi(theta, r, j).map(T::exp)
}

/// Mean and variance of the Kendall distance of a top-R Mallows ranking.
pub fn moments<T: Real>(theta: T, r: usize, j: usize) -> Result<(T, T)> {
    check_levels(r, j)?;
    if !(theta >= T::zero()) {
        return Err(Error::InvalidArgument(format!("theta {theta} must be non-negative")));
    }
    Ok(moments_unchecked(theta, r, j))
}

#[inline]
pub(crate) fn moments_unchecked<T: Real>(theta: T, r: usize, j: usize) -> (T, T) {
    (0..r).fold((T::zero(), T::zero()), |(m, v), level| {
        let (lm, lv) = level_moments(theta, j - level);
        (m + lm, v + lv)
    })
}

/// `ln C(m, x)`.
pub(crate) fn ln_choose(m: u32, x: u32) -> f64 {
    let x = x.min(m - x);
    (1..=x).map(|i| f64::from(m - x + i).ln() - f64::from(i).ln()).sum()
}

/// Binomial log-likelihood kernel `x ln p + (M - x) ln(1 - p)` (no coefficient).
#[inline]
pub(crate) fn binomial_kernel<T: Real>(x: T, m: T, p: T) -> T {
    xlogy(x, p) + xlogy(m - x, T::one() - p)
}

/// Log density of one judge's observations together with a support flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDensity<T> {
    pub value: T,
    /// First object whose score is impossible under its boundary quality.
    pub impossible_object: Option<usize>,
}

/// Joint log density of a judge's observed scores and ranking.
pub fn log_density<T: Real>(judge: &Judge, params: &Parameters<T>, max_score: u32) -> Result<LogDensity<T>> {
    let j = params.n_objects();
    if judge.scores().len() != j {
        return Err(Error::InvalidArgument(format!(
            "judge has {} score cells for {j} objects",
            judge.scores().len()
        )));
    }
    let m = T::from_u32(max_score).expect("max score representable");
    let mut value = T::zero();
    let mut impossible_object = None;
    for (o, s) in judge.scores().iter().enumerate() {
        let Some(s) = *s else { continue };
        if s > max_score {
            return Err(Error::InvalidArgument(format!("score {s} above {max_score}")));
        }
        let x = T::from_u32(s).expect("score representable");
        let kernel = binomial_kernel(x, m, params.p[o]);
        if kernel == T::neg_infinity() && impossible_object.is_none() {
            impossible_object = Some(o);
        }
        value += T::lit(ln_choose(max_score, s)) + kernel;
    }
    if let Some(r) = judge.ranking() {
        let d = kendall::distance(r, &params.order)?;
        value -= log_psi(params.theta, r.len(), j)?;
        if d > 0 {
            value -= params.theta * T::from_count(d);
        }
    }
    Ok(LogDensity {
        value,
        impossible_object,
    })
}

/// Draws one insertion count on `{0, .., n-1}` by inverting its CDF.
fn sample_level<R: Rng + ?Sized>(theta: f64, n: usize, rng: &mut R) -> usize {
    if n == 1 || theta.is_infinite() {
        return 0;
    }
    let u: f64 = rng.random();
    if theta == 0.0 {
        return ((u * n as f64) as usize).min(n - 1);
    }
    let mass = -(-theta * n as f64).exp_m1();
    let v = -(-u * mass).ln_1p() / theta;
    (v.floor() as usize).min(n - 1)
}

/// Draws a top-`r` ranking from the Mallows model centred on `order`.
pub fn sample_ranking<R: Rng + ?Sized>(order: &[usize], theta: f64, r: usize, rng: &mut R) -> PartialRanking {
    let mut remaining = order.to_vec();
    let items = (0..r)
        .map(|level| {
            let v = sample_level(theta, order.len() - level, rng);
            remaining.remove(v)
        })
        .collect();
    PartialRanking::new(items, order.len()).expect("sampled ranking is valid")
}

/// Simulates a panel of `n_judges` judges from the Mallows-Binomial model.
pub fn sample<T: Real, R: Rng + ?Sized>(
    params: &Parameters<T>,
    n_judges: usize,
    max_score: u32,
    r: usize,
    rng: &mut R,
) -> Result<Dataset> {
    let j = params.n_objects();
    check_levels(r, j)?;
    let theta = params.theta.as_f64();
    let binomials: Vec<Binomial> = params
        .p
        .iter()
        .map(|p| Binomial::new(u64::from(max_score), p.as_f64().clamp(0.0, 1.0)))
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidParameters(e.to_string()))?;
    let judges = (0..n_judges)
        .map(|_| {
            let scores = binomials
                .iter()
                .map(|b| Some(b.sample(rng) as u32))
                .collect();
            let ranking = sample_ranking(&params.order, theta, r, rng);
            Judge::new(scores, Some(ranking))
        })
        .collect();
    Dataset::new(j, max_score, judges)
}
