//! Rank aggregation with the Mallows-Binomial model.
//!
//! Judges rate objects on an integer scale and optionally rank their
//! favourites. Scores are modelled as Binomial draws around per-object
//! qualities `p`, rankings as partial Mallows draws around the ordering of
//! `p`. The exact maximum-likelihood consensus is found by A* search over
//! ordering prefixes, with cheaper approximations and bootstrap inference
//! on top.
//!
//! ```
//! use mbrank::{fit, Dataset, Judge, Method, PartialRanking, SearchConfigF64};
//!
//! let judges = vec![
//!     Judge::new(vec![Some(1), Some(4), Some(2)], Some(PartialRanking::new(vec![0, 2], 3)?)),
//!     Judge::new(vec![Some(0), Some(3), Some(3)], Some(PartialRanking::new(vec![0, 2], 3)?)),
//! ];
//! let data = Dataset::new(3, 5, judges)?;
//! let result = fit(&data, Method::ExactLp, &SearchConfigF64::for_objects(3))?;
//! assert_eq!(result.params.order, vec![0, 2, 1]);
//! # Ok::<(), mbrank::Error>(())
//! ```

pub mod cli;
pub mod cond_mle;
pub mod error;
pub mod inference;
pub mod kemeny_lp;
pub mod kendall;
pub mod model;
pub mod scalar;
pub mod search;

pub use error::{Error, Result};
pub use kendall::PartialRanking;
pub use model::{compute_stats, Dataset, Judge, Parameters, SufficientStats, ThetaStatus};
pub use scalar::Real;
pub use search::{fit, FitResult, Heuristic, Method, SearchConfig};

pub type ParametersF64 = Parameters<f64>;
pub type ParametersF32 = Parameters<f32>;
pub type SufficientStatsF64 = SufficientStats<f64>;
pub type SufficientStatsF32 = SufficientStats<f32>;
pub type SearchConfigF64 = SearchConfig<f64>;
pub type SearchConfigF32 = SearchConfig<f32>;
pub type FitResultF64 = FitResult<f64>;
pub type FitResultF32 = FitResult<f32>;
pub type BootstrapSummaryF64 = inference::BootstrapSummary<f64>;
