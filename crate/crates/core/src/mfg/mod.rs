//! Discretized mean-field game: coupled value/density sweeps and the damped
//! fixed-point loop that makes them self-consistent.

mod scenario;
mod solver;

pub use scenario::{parse_scenario, GridScenario, Kernel, Mu0Spec, ScenarioError};
pub use solver::{
    energy, picard_solve, picard_solve_from, relaxation_time, solve_fp, solve_hjb, ControlPolicy,
    EnergyKind, MfgSolution, SolverError, ValueFunction,
};

#[cfg(test)]
pub(crate) use scenario::test_scenario;
