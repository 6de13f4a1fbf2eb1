//! eqlab — a numerical laboratory for equilibrium views of computation.
//!
//! The crate bundles five small, heavily tested solvers that share one theme:
//! computation modelled as the approach to an equilibrium.
//!
//! * [`poset`] — finite partial orders, monotone self-maps, and Kleene
//!   least-fixed-point iteration from the bottom element.
//! * [`game`] — two-player zero-sum approximation games between an Algorithm
//!   (picks an approximation, pays cost plus error) and Nature (picks the
//!   target): exhaustive pure Nash enumeration and best-response dynamics.
//! * [`mfg`] — a discretized mean-field game on a 1-D grid: backward
//!   value sweep, forward density push, damped fixed-point iteration to a
//!   self-consistent (value, density) pair, plus energy diagnostics.
//! * [`agents`] — finite-population Monte Carlo simulation whose empirical
//!   distribution is compared against the mean-field solution.
//! * [`complexity`] — scaling experiments contrasting deterministic search
//!   with witness verification on a needle-in-a-haystack family, and
//!   initialization sensitivity scans for the mean-field solver.
//!
//! [`metrics`] provides the Wasserstein-1 machinery used throughout, and
//! [`cli`] the `eqlab` command-line front end with reproducible CSV output.

pub mod agents;
pub mod cli;
pub mod complexity;
pub mod game;
pub mod measure;
pub mod metrics;
pub mod mfg;
pub mod poset;
pub mod textio;
