//! Dense tableau simplex for `min c·y` subject to `A y <= b`, `y >= 0`, `b >= 0`.
//!
//! The slack basis is feasible because `b` is non-negative, so no first
//! phase is needed. Entering columns follow the most negative reduced cost;
//! after a run of degenerate pivots the rule switches to Bland's smallest
//! index rule, which cannot cycle. Every choice breaks ties by index, so a
//! program always yields the same pivots and bit-identical optima.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_RUN: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseLp<T> {
    pub objective: Vec<T>,
    pub rows: Vec<Vec<T>>,
    pub rhs: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<T> {
    pub optimum: T,
    pub solution: Vec<T>,
    pub pivots: usize,
}

impl<T: Real> DenseLp<T> {
    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    /// Default pivot allowance for this program.
    pub fn default_max_pivots(&self) -> usize {
        50 * (self.rows.len() + self.n_vars()) + 100
    }

    pub fn solve(&self, max_pivots: usize) -> Result<LpSolution<T>> {
        let n = self.n_vars();
        let m = self.rows.len();
        if self.rhs.len() != m || self.rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("inconsistent linear program dimensions".into()));
        }
        if let Some(b) = self.rhs.iter().find(|b| **b < T::zero()) {
            return Err(Error::InvalidArgument(format!("negative right-hand side {b}")));
        }
        let eps = T::tolerance();
        let width = n + m + 1;
        // row-major tableau: constraint rows then the reduced-cost row
        let mut t = vec![T::zero(); (m + 1) * width];
        for (i, row) in self.rows.iter().enumerate() {
            t[i * width..i * width + n].copy_from_slice(row);
            t[i * width + n + i] = T::one();
            t[i * width + width - 1] = self.rhs[i];
        }
        t[m * width..m * width + n].copy_from_slice(&self.objective);
        let mut basis: Vec<usize> = (n..n + m).collect();

        let mut pivots = 0;
        let mut degenerate = 0;
        loop {
            let cost = &t[m * width..m * width + width - 1];
            let entering = if degenerate >= DEGENERATE_RUN {
                cost.iter().position(|&c| c < -eps)
            } else {
                let mut best: Option<(usize, T)> = None;
                for (k, &c) in cost.iter().enumerate() {
                    if c < -eps && best.is_none_or(|(_, b)| c < b) {
                        best = Some((k, c));
                    }
                }
                best.map(|(k, _)| k)
            };
            let Some(col) = entering else { break };

            let mut leave: Option<(usize, T)> = None;
            for i in 0..m {
                let a = t[i * width + col];
                if a > eps {
                    let ratio = t[i * width + width - 1] / a;
                    let better = match leave {
                        None => true,
                        Some((r, best)) => ratio < best || (ratio == best && basis[i] < basis[r]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((row, ratio)) = leave else {
                return Err(Error::InvalidArgument("linear program is unbounded".into()));
            };
            if pivots >= max_pivots {
                return Err(Error::LpIterationCap { iterations: pivots });
            }
            degenerate = if ratio <= eps { degenerate + 1 } else { 0 };

            let pivot = t[row * width + col];
            for k in 0..width {
                t[row * width + k] /= pivot;
            }
            let (before, rest) = t.split_at_mut(row * width);
            let (prow, after) = rest.split_at_mut(width);
            let eliminate = |r: &mut [T]| {
                let factor = r[col];
                if factor != T::zero() {
                    for (x, &p) in r.iter_mut().zip(prow.iter()) {
                        *x -= factor * p;
                    }
                }
            };
            before.chunks_mut(width).for_each(eliminate);
            after.chunks_mut(width).for_each(eliminate);
            basis[row] = col;
            pivots += 1;
        }

        let mut solution = vec![T::zero(); n];
        for (i, &b) in basis.iter().enumerate() {
            if b < n {
                solution[b] = t[i * width + width - 1];
            }
        }
        let optimum = self
            .objective
            .iter()
            .zip(&solution)
            .map(|(&c, &y)| c * y)
            .sum();
        Ok(LpSolution {
            optimum,
            solution,
            pivots,
        })
    }
}
