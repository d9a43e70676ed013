//! Lower bounds on the ranking cost of completing a prefix ordering.
//!
//! The cost of an order is the mean number of judges' pairwise preferences
//! it contradicts. Pairs involving a prefix object are already decided; for
//! the free objects the crude bound charges each pair its cheaper
//! orientation, while the LP bound additionally forbids cyclic triples.

mod simplex;

pub use simplex::{DenseLp, LpSolution};

use crate::cond_mle::PrefixConstraint;
use crate::error::Result;
use crate::model::SufficientStats;
use crate::scalar::Real;

/// Cost of the pairs the prefix decides: every prefix object precedes all
/// objects placed after it.
pub fn fixed_pair_cost<T: Real>(stats: &SufficientStats<T>, constraint: &PrefixConstraint) -> T {
    let prefix = constraint.prefix();
    let mut cost = T::zero();
    for (a, &u) in prefix.iter().enumerate() {
        for &v in prefix[a + 1..].iter().chain(constraint.free()) {
            cost += stats.q(v, u);
        }
    }
    cost
}

/// Crude bound: fixed pairs plus `min(Q_uv, Q_vu)` over free pairs.
pub fn crude_bound<T: Real>(stats: &SufficientStats<T>, constraint: &PrefixConstraint) -> T {
    let free = constraint.free();
    let mut cost = fixed_pair_cost(stats, constraint);
    for (a, &u) in free.iter().enumerate() {
        for &v in &free[a + 1..] {
            cost += stats.q(u, v).min(stats.q(v, u));
        }
    }
    cost
}

/// Pairwise ordering relaxation over the free objects.
///
/// Variable `y_k` for the `k`-th free pair `(u, v)` (with `u` listed before
/// `v` in the free set) is the fraction of `u` preceding `v`; the reverse
/// indicator is eliminated as `1 - y_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairLp<T> {
    pub pairs: Vec<(usize, usize)>,
    /// Objective constant `Σ Q_uv` over free pairs.
    pub constant: T,
    pub program: DenseLp<T>,
}

impl<T: Real> PairLp<T> {
    pub fn build(stats: &SufficientStats<T>, free: &[usize]) -> Self {
        let f = free.len();
        let mut index = vec![vec![usize::MAX; f]; f];
        let mut pairs = Vec::with_capacity(f * f.saturating_sub(1) / 2);
        for a in 0..f {
            for b in a + 1..f {
                index[a][b] = pairs.len();
                pairs.push((free[a], free[b]));
            }
        }
        let n = pairs.len();
        // Q_uv x_vu + Q_vu x_uv = Q_uv + (Q_vu - Q_uv) y
        let constant = pairs.iter().map(|&(u, v)| stats.q(u, v)).sum();
        let objective = pairs.iter().map(|&(u, v)| stats.q(v, u) - stats.q(u, v)).collect();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for a in 0..f {
            for b in a + 1..f {
                for c in b + 1..f {
                    let (ab, bc, ac) = (index[a][b], index[b][c], index[a][c]);
                    // x_ab + x_bc + x_ca >= 1  <=>  y_ac - y_ab - y_bc <= 0
                    let mut row = vec![T::zero(); n];
                    row[ac] = T::one();
                    row[ab] = -T::one();
                    row[bc] = -T::one();
                    rows.push(row);
                    rhs.push(T::zero());
                    // x_ac + x_cb + x_ba >= 1  <=>  y_ab + y_bc - y_ac <= 1
                    let mut row = vec![T::zero(); n];
                    row[ab] = T::one();
                    row[bc] = T::one();
                    row[ac] = -T::one();
                    rows.push(row);
                    rhs.push(T::one());
                }
            }
        }
        for k in 0..n {
            let mut row = vec![T::zero(); n];
            row[k] = T::one();
            rows.push(row);
            rhs.push(T::one());
        }
        Self {
            pairs,
            constant,
            program: DenseLp { objective, rows, rhs },
        }
    }
}

/// Solves a pair program, returning the optimum (constant included) and the
/// precedence fractions `y`.
pub fn solve_pair_lp<T: Real>(lp: &PairLp<T>) -> Result<(T, Vec<T>)> {
    if lp.pairs.is_empty() {
        return Ok((lp.constant, Vec::new()));
    }
    let sol = lp.program.solve(lp.program.default_max_pivots())?;
    Ok((lp.constant + sol.optimum, sol.solution))
}

/// LP lower bound with the solver outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpBound<T> {
    pub value: T,
    /// The solver failed and the crude bound was substituted.
    pub fell_back: bool,
}

/// Fixed-pair cost plus the LP optimum over the free objects.
pub fn lp_bound<T: Real>(stats: &SufficientStats<T>, constraint: &PrefixConstraint) -> LpBound<T> {
    let free = constraint.free();
    if free.len() < 3 {
        return LpBound {
            value: crude_bound(stats, constraint),
            fell_back: false,
        };
    }
    match solve_pair_lp(&PairLp::build(stats, free)) {
        Ok((relaxed, _)) => LpBound {
            value: fixed_pair_cost(stats, constraint) + relaxed,
            fell_back: false,
        },
        Err(e) => {
            log::warn!("LP bound unavailable ({e}); using the crude bound");
            LpBound {
                value: crude_bound(stats, constraint),
                fell_back: true,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kendall::PartialRanking;
    use crate::model::{compute_stats, Dataset, Judge};
    use itertools::Itertools;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rankings_only(rankings: &[&[usize]], j: usize) -> SufficientStats<f64> {
        let judges = rankings
            .iter()
            .map(|r| Judge::new(vec![None; j], Some(PartialRanking::new(r.to_vec(), j).unwrap())))
            .collect();
        compute_stats(&Dataset::new(j, 1, judges).unwrap())
    }

    fn random_stats(rng: &mut ChaCha8Rng, j: usize) -> SufficientStats<f64> {
        let i = rng.random_range(1..=8);
        let judges = (0..i)
            .map(|_| {
                let mut items: Vec<usize> = (0..j).collect();
                for k in (1..j).rev() {
                    items.swap(k, rng.random_range(0..=k));
                }
                items.truncate(rng.random_range(1..=j));
                Judge::new(vec![None; j], Some(PartialRanking::new(items, j).unwrap()))
            })
            .collect();
        compute_stats(&Dataset::new(j, 1, judges).unwrap())
    }

    /// Exact minimum of the mean distance over all completions of a prefix.
    fn best_completion(stats: &SufficientStats<f64>, c: &PrefixConstraint) -> f64 {
        c.free()
            .iter()
            .copied()
            .permutations(c.free().len())
            .map(|tail| {
                let mut order = c.prefix().to_vec();
                order.extend(tail);
                stats.mean_distance(&order)
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn unanimous_root_bound_is_zero() {
        let st = rankings_only(&[&[2, 0, 1, 3], &[2, 0, 1, 3]], 4);
        let root = PrefixConstraint::root(4);
        assert_eq!(lp_bound(&st, &root).value, 0.0);
        assert_eq!(crude_bound(&st, &root), 0.0);
    }

    #[test]
    fn condorcet_cycle() {
        let st = rankings_only(&[&[0, 1, 2], &[1, 2, 0], &[2, 0, 1]], 3);
        let root = PrefixConstraint::root(3);
        assert!((crude_bound(&st, &root) - 1.0).abs() < 1e-12);
        assert!((lp_bound(&st, &root).value - 4.0 / 3.0).abs() < 1e-12);
        assert!((best_completion(&st, &root) - 4.0 / 3.0).abs() < 1e-12);
        let (opt, _) = solve_pair_lp(&PairLp::build(&st, &[0, 1, 2])).unwrap();
        assert!((opt - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn single_pair_program() {
        let mut st = rankings_only(&[&[0, 1]], 2);
        st.q = vec![0.0, 0.7, 0.3, 0.0];
        let (opt, y) = solve_pair_lp(&PairLp::build(&st, &[0, 1])).unwrap();
        assert!((opt - 0.3).abs() < 1e-12);
        assert_eq!(y, vec![1.0]);
    }

    #[test]
    fn zero_preferences() {
        let mut st = rankings_only(&[&[0, 1, 2, 3]], 4);
        st.q.iter_mut().for_each(|q| *q = 0.0);
        let (opt, _) = solve_pair_lp(&PairLp::build(&st, &[0, 1, 2, 3])).unwrap();
        assert_eq!(opt, 0.0);
    }

    #[test]
    fn relaxation_matches_or_undercuts_integer_orders() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let j = rng.random_range(2..=4);
            let st = random_stats(&mut rng, j);
            let free: Vec<usize> = (0..j).collect();
            let (opt, _) = solve_pair_lp(&PairLp::build(&st, &free)).unwrap();
            let exact = best_completion(&st, &PrefixConstraint::root(j));
            assert!(opt <= exact + 1e-9);
            assert!(opt >= crude_bound(&st, &PrefixConstraint::root(j)) - 1e-9);
        }
    }

    #[test]
    fn admissibility_chain_on_every_prefix() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..20 {
            let j = rng.random_range(3..=6);
            let st = random_stats(&mut rng, j);
            for k in 0..j {
                for prefix in (0..j).permutations(k) {
                    let c = PrefixConstraint::new(prefix, j).unwrap();
                    let crude = crude_bound(&st, &c);
                    let lp = lp_bound(&st, &c);
                    assert!(!lp.fell_back);
                    assert!(crude <= lp.value + 1e-9);
                    assert!(lp.value <= best_completion(&st, &c) + 1e-9);
                }
            }
        }
    }

    #[test]
    fn deterministic_optima() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let st = random_stats(&mut rng, 6);
        let lp = PairLp::build(&st, &[0, 1, 2, 3, 4, 5]);
        let a = solve_pair_lp(&lp).unwrap();
        let b = solve_pair_lp(&lp).unwrap();
        assert_eq!(a.0.to_bits(), b.0.to_bits());
        assert_eq!(a.1, b.1);
    }
}
