//! Probability measures supported on the points of a 1-D grid.
//!
//! A [`MeasureVector`] is a vector of nonnegative weights summing to one; a
//! [`MeasurePath`] is one measure per time index. Both validate their
//! invariants on construction so that every downstream consumer can rely on
//! normalized, nonnegative mass.

use thiserror::Error;

/// Absolute tolerance for the unit-mass invariant.
pub const MASS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MeasureError {
    #[error("weight {value} at index {index} is negative or not a number")]
    BadWeight { index: usize, value: f64 },
    #[error("weights sum to {sum}, expected 1 within {MASS_TOLERANCE}")]
    MassNotUnit { sum: f64 },
    #[error("measure has {got} weights, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("measure path must contain at least one time slice")]
    EmptyPath,
    #[error("time slice {index} has {got} weights, slice 0 has {expected}")]
    RaggedPath {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("index {index} out of range for {len} grid points")]
    IndexOutOfRange { index: usize, len: usize },
}

/// A probability distribution over grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureVector(Vec<f64>);

impl MeasureVector {
    /// Validates nonnegativity and unit mass (within [`MASS_TOLERANCE`]).
    pub fn new(weights: Vec<f64>) -> Result<Self, MeasureError> {
        for (index, &value) in weights.iter().enumerate() {
            if !(value >= 0.0) {
                return Err(MeasureError::BadWeight { index, value });
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > MASS_TOLERANCE {
            return Err(MeasureError::MassNotUnit { sum });
        }
        Ok(Self(weights))
    }

    /// Internal constructor for measures produced by arithmetic that is
    /// normalization-preserving by construction (convex combinations of
    /// already-validated measures). Debug builds still check the invariant,
    /// at a looser tolerance that admits accumulated rounding.
    pub(crate) fn from_trusted(weights: Vec<f64>) -> Self {
        debug_assert!(
            (weights.iter().sum::<f64>() - 1.0).abs() <= 1e-9
                && weights.iter().all(|w| *w >= 0.0),
            "trusted measure violates normalization"
        );
        Self(weights)
    }

    /// Point mass at grid index `at`.
    pub fn dirac(len: usize, at: usize) -> Result<Self, MeasureError> {
        if at >= len {
            return Err(MeasureError::IndexOutOfRange { index: at, len });
        }
        let mut weights = vec![0.0; len];
        weights[at] = 1.0;
        Ok(Self(weights))
    }

    /// Uniform distribution over all grid points.
    pub fn uniform(len: usize) -> Result<Self, MeasureError> {
        if len == 0 {
            return Err(MeasureError::EmptyPath);
        }
        Ok(Self(vec![1.0 / len as f64; len]))
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A time-indexed sequence of measures, one per step `0..=t_steps`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurePath(Vec<MeasureVector>);

impl MeasurePath {
    pub fn new(slices: Vec<MeasureVector>) -> Result<Self, MeasureError> {
        let first = slices.first().ok_or(MeasureError::EmptyPath)?;
        let expected = first.len();
        for (index, slice) in slices.iter().enumerate() {
            if slice.len() != expected {
                return Err(MeasureError::RaggedPath {
                    index,
                    expected,
                    got: slice.len(),
                });
            }
        }
        Ok(Self(slices))
    }

    /// The path that repeats `slice` at every one of `t_steps + 1` times.
    pub fn constant(slice: MeasureVector, t_steps: usize) -> Self {
        Self(vec![slice; t_steps + 1])
    }

    pub fn slices(&self) -> &[MeasureVector] {
        &self.0
    }

    pub fn slice(&self, t: usize) -> &MeasureVector {
        &self.0[t]
    }

    /// Number of time steps (slices minus one).
    pub fn horizon(&self) -> usize {
        self.0.len() - 1
    }

    pub fn grid_len(&self) -> usize {
        self.0[0].len()
    }
}

/// Index of the grid point nearest to `x` on the uniform grid
/// `x_min + i*h`, `i = 0..len`. Exact midpoints round down.
pub(crate) fn nearest_grid_index(x: f64, x_min: f64, spacing: f64, len: usize) -> usize {
    let pos = ((x - x_min) / spacing).clamp(0.0, (len - 1) as f64);
    let lo = pos.floor();
    let frac = pos - lo;
    let idx = if frac > 0.5 { lo as usize + 1 } else { lo as usize };
    idx.min(len - 1)
}
