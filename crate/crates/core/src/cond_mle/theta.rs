use serde::Serialize;

use crate::model::{log_psi_unchecked, moments_unchecked, ThetaStatus};
use crate::scalar::Real;

/// Smallest consensus scale reported; stands in for the uniform limit.
pub const THETA_FLOOR: f64 = 1e-8;

/// Result of the conditional consensus-scale fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaFit<T> {
    pub theta: T,
    pub status: ThetaStatus,
}

/// `θ·D·n + Σ_i ln ψ(θ, R_i, J)` for `n` rankers with mean distance `D`.
pub fn theta_objective<T: Real>(theta: T, mean_distance: T, length_counts: &[(usize, usize)], j: usize) -> T {
    let n: usize = length_counts.iter().map(|(_, m)| m).sum();
    if n == 0 {
        return T::zero();
    }
    let linear = if mean_distance == T::zero() {
        T::zero()
    } else {
        theta * mean_distance * T::from_count(n)
    };
    linear
        + length_counts
            .iter()
            .map(|&(r, m)| T::from_count(m) * log_psi_unchecked(theta, r, j))
            .sum::<T>()
}

/// First and second derivative of [`theta_objective`].
fn derivatives<T: Real>(theta: T, total: T, length_counts: &[(usize, usize)], j: usize) -> (T, T) {
    length_counts.iter().fold((total, T::zero()), |(g, h), &(r, m)| {
        let (mean, var) = moments_unchecked(theta, r, j);
        let mf = T::from_count(m);
        (g - mf * mean, h + mf * var)
    })
}

/// Minimises [`theta_objective`] over `[THETA_FLOOR, theta_max]`.
///
/// The objective is strictly convex, so its derivative (observed minus
/// expected total distance) is bracketed and solved with safeguarded Newton
/// steps.
pub fn fit_theta<T: Real>(
    mean_distance: T,
    length_counts: &[(usize, usize)],
    j: usize,
    theta_max: T,
) -> ThetaFit<T> {
    let n: usize = length_counts.iter().map(|(_, m)| m).sum();
    if n == 0 {
        return ThetaFit {
            theta: T::zero(),
            status: ThetaStatus::Undefined,
        };
    }
    if mean_distance <= T::zero() {
        return ThetaFit {
            theta: theta_max,
            status: ThetaStatus::Infinite,
        };
    }
    let total = mean_distance * T::from_count(n);
    let floor = T::lit(THETA_FLOOR).min(theta_max);
    let (g_lo, _) = derivatives(floor, total, length_counts, j);
    if g_lo >= T::zero() {
        return ThetaFit {
            theta: floor,
            status: ThetaStatus::AtFloor,
        };
    }
    let (g_hi, _) = derivatives(theta_max, total, length_counts, j);
    if g_hi <= T::zero() {
        return ThetaFit {
            theta: theta_max,
            status: ThetaStatus::AtCap,
        };
    }
    let (mut lo, mut hi) = (floor, theta_max);
    let mut theta = (lo + hi) / T::lit(2.0);
    for _ in 0..200 {
        let (g, h) = derivatives(theta, total, length_counts, j);
        if g == T::zero() {
            break;
        }
        if g < T::zero() {
            lo = theta;
        } else {
            hi = theta;
        }
        let newton = theta - g / h;
        let next = if h > T::zero() && newton > lo && newton < hi {
            newton
        } else {
            (lo + hi) / T::lit(2.0)
        };
        let step = (next - theta).abs();
        theta = next;
        if step <= T::tolerance() * theta.max(T::one()) || hi - lo <= T::tolerance() * hi {
            break;
        }
    }
    ThetaFit {
        theta,
        status: ThetaStatus::Interior,
    }
}
