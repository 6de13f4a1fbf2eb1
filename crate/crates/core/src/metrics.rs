//! Wasserstein-1 distances between grid measures.
//!
//! In one dimension the optimal-transport distance with ground cost |x − y|
//! has a closed form: the L¹ distance between cumulative distribution
//! functions. [`wasserstein1_grid`] implements it; [`wasserstein1_lp_oracle`]
//! solves the transport problem outright in exact rational arithmetic and is
//! kept deliberately independent so the two can check each other.

use crate::measure::{MeasurePath, MeasureVector};
use num::rational::BigRational;
use num::traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Largest grid the exact transport oracle accepts.
pub const ORACLE_MAX_GRID: usize = 12;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MetricsError {
    #[error("measure lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("grid has {grid} points but measures have {measure}")]
    GridMismatch { grid: usize, measure: usize },
    #[error("grid is not strictly increasing at index {index}")]
    GridNotIncreasing { index: usize },
    #[error("oracle grid of {len} points exceeds the {ORACLE_MAX_GRID}-point cap")]
    OracleGridTooLarge { len: usize },
    #[error("paths have different horizons: {left} vs {right}")]
    HorizonMismatch { left: usize, right: usize },
}

fn check_grid(grid: &[f64], measure_len: usize) -> Result<(), MetricsError> {
    if grid.len() != measure_len {
        return Err(MetricsError::GridMismatch {
            grid: grid.len(),
            measure: measure_len,
        });
    }
    for (index, pair) in grid.windows(2).enumerate() {
        if !(pair[1] > pair[0]) {
            return Err(MetricsError::GridNotIncreasing { index: index + 1 });
        }
    }
    Ok(())
}

/// Closed-form W₁ on a common grid: Σᵢ |CDF_μ(xᵢ) − CDF_ν(xᵢ)| · (xᵢ₊₁ − xᵢ).
///
/// The final CDF entry is not used; both CDFs reach 1 there and the last
/// interval weight exhausts the grid.
pub fn wasserstein1_grid(
    mu: &MeasureVector,
    nu: &MeasureVector,
    grid: &[f64],
) -> Result<f64, MetricsError> {
    if mu.len() != nu.len() {
        return Err(MetricsError::LengthMismatch {
            left: mu.len(),
            right: nu.len(),
        });
    }
    check_grid(grid, mu.len())?;

    let mut cdf_diff = 0.0;
    let mut total = 0.0;
    for i in 0..grid.len() - 1 {
        cdf_diff += mu.weights()[i] - nu.weights()[i];
        total += cdf_diff.abs() * (grid[i + 1] - grid[i]);
    }
    Ok(total)
}

/// Exact transport oracle for small grids.
///
/// Greedy north-west matching on the sorted supports, which is optimal in
/// one dimension, carried out in arbitrary-precision rationals so that no
/// rounding enters the reference value. Refuses grids larger than
/// [`ORACLE_MAX_GRID`]; this is a test oracle, not a production path.
pub fn wasserstein1_lp_oracle(
    mu: &MeasureVector,
    nu: &MeasureVector,
    grid: &[f64],
) -> Result<f64, MetricsError> {
    if mu.len() != nu.len() {
        return Err(MetricsError::LengthMismatch {
            left: mu.len(),
            right: nu.len(),
        });
    }
    check_grid(grid, mu.len())?;
    if grid.len() > ORACLE_MAX_GRID {
        return Err(MetricsError::OracleGridTooLarge { len: grid.len() });
    }

    let exact = |x: f64| BigRational::from_float(x).expect("finite float");
    let mut supply: Vec<BigRational> = mu.weights().iter().copied().map(exact).collect();
    let mut demand: Vec<BigRational> = nu.weights().iter().copied().map(exact).collect();
    let points: Vec<BigRational> = grid.iter().copied().map(exact).collect();

    let n = grid.len();
    let mut cost = BigRational::zero();
    let (mut i, mut j) = (0, 0);
    while i < n && j < n {
        let moved = supply[i].clone().min(demand[j].clone());
        if !moved.is_zero() {
            cost += &moved * (&points[i] - &points[j]).abs();
            supply[i] -= &moved;
            demand[j] -= &moved;
        }
        // Advance whichever side is exhausted; both may be.
        let supply_done = supply[i].is_zero();
        let demand_done = demand[j].is_zero();
        if supply_done {
            i += 1;
        }
        if demand_done {
            j += 1;
        }
        if !supply_done && !demand_done {
            // Only possible when the minimum was zero on an already-drained
            // cell pair, which the two branches above always consume.
            unreachable!("transport loop failed to advance");
        }
    }
    Ok(cost.to_f64().expect("rational within f64 range"))
}

/// Largest per-time-slice W₁ between two measure paths.
pub fn equilibrium_gap(
    a: &MeasurePath,
    b: &MeasurePath,
    grid: &[f64],
) -> Result<f64, MetricsError> {
    if a.horizon() != b.horizon() {
        return Err(MetricsError::HorizonMismatch {
            left: a.horizon(),
            right: b.horizon(),
        });
    }
    let mut gap: f64 = 0.0;
    for (sa, sb) in a.slices().iter().zip(b.slices()) {
        gap = gap.max(wasserstein1_grid(sa, sb, grid)?);
    }
    Ok(gap)
}
