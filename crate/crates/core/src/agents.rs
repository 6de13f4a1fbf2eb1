//! Finite-population simulation against the mean-field policy.
//!
//! N agents start from independent draws of the scenario's initial measure
//! and each step read the precomputed policy at their nearest grid point,
//! drift by a·dt, and (when diffusion is on) take a Gaussian kick whose
//! variance matches the density solver's smoothing kernel, reflecting at the
//! boundaries. The binned empirical distribution is recorded at every time
//! index so it can be compared against the mean-field density in W₁.
//!
//! Reproducibility: agent i draws every sample from its own ChaCha stream
//! derived from the master seed, so results are independent of evaluation
//! order and bitwise stable for a fixed (scenario, N, seed, policy).

use crate::measure::{self, MeasureError, MeasurePath, MeasureVector};
use crate::metrics::{wasserstein1_grid, MetricsError};
use crate::mfg::{picard_solve, ControlPolicy, GridScenario, ScenarioError, SolverError};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum AgentError {
    #[error("N must be at least 1")]
    NoAgents,
    #[error("scenario: {0}")]
    Scenario(#[from] ScenarioError),
    #[error("solver: {0}")]
    Solver(#[from] SolverError),
    #[error("measure: {0}")]
    Measure(#[from] MeasureError),
    #[error("metric: {0}")]
    Metrics(#[from] MetricsError),
    #[error("position {position} outside the grid [{x_min}, {x_max}]")]
    PositionOutOfBounds {
        position: f64,
        x_min: f64,
        x_max: f64,
    },
    #[error("N list must be nonempty")]
    EmptyNList,
    #[error("seed list must be nonempty")]
    EmptySeeds,
}

/// Agent positions at one time index.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentStates {
    pub positions: Vec<f64>,
    pub time: usize,
}

impl AgentStates {
    /// Validates that all positions lie within the scenario bounds.
    pub fn check_bounds(&self, scenario: &GridScenario) -> Result<(), AgentError> {
        for &position in &self.positions {
            if !(position >= scenario.x_min && position <= scenario.x_max) {
                return Err(AgentError::PositionOutOfBounds {
                    position,
                    x_min: scenario.x_min,
                    x_max: scenario.x_max,
                });
            }
        }
        Ok(())
    }
}

/// One finite-population run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    /// Binned empirical distribution at every time index.
    pub empirical: MeasurePath,
    /// Accumulated running plus terminal cost per agent.
    pub per_agent_cost: Vec<f64>,
    pub seed: u64,
    /// Final-time W₁ against a reference density, when one was attached.
    pub w1_to_reference: Option<f64>,
}

impl SimResult {
    /// Records the final-time W₁ between this run's empirical distribution
    /// and a reference measure (typically the mean-field solution's final
    /// slice).
    pub fn attach_reference_gap(
        &mut self,
        reference_final: &MeasureVector,
        grid: &[f64],
    ) -> Result<f64, AgentError> {
        let own_final = self.empirical.slices().last().expect("nonempty path");
        let gap = wasserstein1_grid(own_final, reference_final, grid)?;
        self.w1_to_reference = Some(gap);
        Ok(gap)
    }
}

/// Bins positions to their nearest grid point (ties to the lower index),
/// each agent contributing 1/N of the mass.
pub fn empirical_measure(positions: &[f64], grid: &[f64]) -> Result<MeasureVector, AgentError> {
    let m = grid.len();
    let x_min = grid[0];
    let x_max = grid[m - 1];
    let spacing = (x_max - x_min) / (m - 1) as f64;
    let mut counts = vec![0u64; m];
    for &position in positions {
        if !(position >= x_min && position <= x_max) {
            return Err(AgentError::PositionOutOfBounds {
                position,
                x_min,
                x_max,
            });
        }
        counts[measure::nearest_grid_index(position, x_min, spacing, m)] += 1;
    }
    let n = positions.len() as f64;
    Ok(MeasureVector::new(
        counts.iter().map(|&c| c as f64 / n).collect(),
    )?)
}

fn reflect(mut x: f64, x_min: f64, x_max: f64) -> f64 {
    loop {
        if x < x_min {
            x = 2.0 * x_min - x;
        } else if x > x_max {
            x = 2.0 * x_max - x;
        } else {
            return x;
        }
    }
}

fn sample_initial(mu0: &MeasureVector, grid: &[f64], rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.random();
    let mut cumulative = 0.0;
    for (i, &w) in mu0.weights().iter().enumerate() {
        cumulative += w;
        if u < cumulative {
            return grid[i];
        }
    }
    *grid.last().expect("nonempty grid")
}

/// Simulates `n` agents playing `policy` from independent draws of the
/// scenario's initial measure. Running cost accrues as
/// (c(xᵢ, μ̂_t) + |xᵢ − y*|)·dt against the *empirical* measure μ̂_t, with
/// the congestion term read at the agent's bin, plus the terminal distance.
pub fn simulate_agents(
    scenario: &GridScenario,
    n: usize,
    seed: u64,
    policy: &ControlPolicy,
) -> Result<SimResult, AgentError> {
    if n == 0 {
        return Err(AgentError::NoAgents);
    }
    scenario.validate()?;
    policy.check_shape(scenario)?;

    let grid = scenario.grid();
    let mu0 = scenario.initial_measure()?;
    let noise_std = (2.0 * scenario.effective_sigma() * scenario.dt).sqrt();
    let noise = if noise_std > 0.0 {
        Some(Normal::new(0.0, noise_std).expect("finite std"))
    } else {
        None
    };

    let mut rngs: Vec<ChaCha8Rng> = (0..n)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            rng
        })
        .collect();

    let mut positions: Vec<f64> = rngs
        .iter_mut()
        .map(|rng| sample_initial(&mu0, &grid, rng))
        .collect();
    let mut costs = vec![0.0; n];
    let mut slices = Vec::with_capacity(scenario.t_steps + 1);

    for t in 0..scenario.t_steps {
        let empirical = empirical_measure(&positions, &grid)?;
        let running = scenario.running_cost(&empirical);
        slices.push(empirical);

        for (i, position) in positions.iter_mut().enumerate() {
            let bin = scenario.nearest_grid_index(*position);
            costs[i] += (running[bin] + scenario.target_distance(*position)) * scenario.dt;

            let control = scenario.controls[policy.control_index(t, bin)];
            let mut next =
                (*position + control * scenario.dt).clamp(scenario.x_min, scenario.x_max);
            if let Some(normal) = &noise {
                next = reflect(
                    next + normal.sample(&mut rngs[i]),
                    scenario.x_min,
                    scenario.x_max,
                );
            }
            *position = next;
        }
    }

    let final_empirical = empirical_measure(&positions, &grid)?;
    slices.push(final_empirical);
    for (i, &position) in positions.iter().enumerate() {
        costs[i] += scenario.target_distance(position);
    }

    Ok(SimResult {
        empirical: MeasurePath::new(slices)?,
        per_agent_cost: costs,
        seed,
        w1_to_reference: None,
    })
}

/// One row of a population-size scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub n: usize,
    /// Median over seeds of the final-time W₁ between the empirical and
    /// mean-field distributions.
    pub median_w1: f64,
}

fn median(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    }
}

/// Solves the mean-field game once, then for each population size N runs
/// one simulation per seed and reports the median final-time W₁ to the
/// mean-field density. Rows come back sorted by N.
pub fn convergence_scan(
    scenario: &GridScenario,
    n_list: &[usize],
    seeds: &[u64],
) -> Result<Vec<ScanRow>, AgentError> {
    if n_list.is_empty() {
        return Err(AgentError::EmptyNList);
    }
    if seeds.is_empty() {
        return Err(AgentError::EmptySeeds);
    }
    if n_list.contains(&0) {
        return Err(AgentError::NoAgents);
    }

    let solution = picard_solve(scenario)?;
    let grid = scenario.grid();
    let reference_final = solution.mu.slices().last().expect("nonempty path");

    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let gaps = seeds
            .iter()
            .map(|&seed| {
                let mut run = simulate_agents(scenario, n, seed, &solution.policy)?;
                run.attach_reference_gap(reference_final, &grid)
            })
            .collect::<Result<Vec<f64>, AgentError>>()?;
        rows.push(ScanRow {
            n,
            median_w1: median(gaps),
        });
    }
    rows.sort_by_key(|row| row.n);
    Ok(rows)
}
