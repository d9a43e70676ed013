use serde::Serialize;

use crate::error::{Error, Result};

/// Relative slack allowed when checking that a value lies on the lattice.
const LATTICE_TOLERANCE: f64 = 1e-6;

/// Affine map between raw scores on a `min..=max` grid with spacing `step`
/// and canonical integers `0..=M`, where `0` is always the best score.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScoreScale {
    pub min: f64,
    pub max: f64,
    pub step: f64,
    pub higher_is_better: bool,
    max_score: u32,
}

fn decimals(x: f64) -> usize {
    let s = format!("{x}");
    s.split_once('.').map_or(0, |(_, frac)| frac.len())
}

impl ScoreScale {
    pub fn new(min: f64, max: f64, step: f64, higher_is_better: bool) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && step.is_finite()) || step <= 0.0 || max <= min {
            return Err(Error::Input(format!(
                "score scale needs finite min < max and a positive step (got {min}, {max}, {step})"
            )));
        }
        let levels = (max - min) / step;
        let rounded = levels.round();
        if (levels - rounded).abs() > LATTICE_TOLERANCE * rounded.max(1.0) || rounded > f64::from(u32::MAX) {
            return Err(Error::Input(format!(
                "scale range {min}..{max} is not a whole number of steps of {step}"
            )));
        }
        Ok(Self {
            min,
            max,
            step,
            higher_is_better,
            max_score: rounded as u32,
        })
    }

    /// Integer scale `0..=m` with lower values better.
    pub fn canonical(m: u32) -> Result<Self> {
        Self::new(0.0, f64::from(m), 1.0, false)
    }

    /// Number of steps `M` between the endpoints.
    pub fn max_score(&self) -> u32 {
        self.max_score
    }

    /// Canonical integer for a raw score.
    pub fn to_canonical(&self, raw: f64) -> Result<u32> {
        let k = (raw - self.min) / self.step;
        let rounded = k.round();
        if !raw.is_finite() || (k - rounded).abs() > LATTICE_TOLERANCE || rounded < 0.0 || rounded > f64::from(self.max_score) {
            return Err(Error::Input(format!(
                "score {raw} is not on the lattice {}..{} with step {}",
                self.min, self.max, self.step
            )));
        }
        let k = rounded as u32;
        Ok(if self.higher_is_better { self.max_score - k } else { k })
    }

    /// Raw score for a canonical integer.
    pub fn to_raw(&self, canonical: u32) -> f64 {
        let k = if self.higher_is_better {
            self.max_score - canonical
        } else {
            canonical
        };
        self.min + self.step * f64::from(k)
    }

    /// Raw score printed with the precision of the scale.
    pub fn format_raw(&self, canonical: u32) -> String {
        let places = decimals(self.step).max(decimals(self.min));
        format!("{:.*}", places, self.to_raw(canonical))
    }

    /// Expected raw score of an object with quality `p`.
    pub fn expected_score(&self, p: f64) -> f64 {
        let offset = self.step * f64::from(self.max_score) * p;
        if self.higher_is_better {
            self.max - offset
        } else {
            self.min + offset
        }
    }
}
