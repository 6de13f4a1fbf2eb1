//! Two-player zero-sum approximation games.
//!
//! An Algorithm picks a point x (paying a production cost c(x)), Nature
//! picks a target y, and the Algorithm's payoff is u_A(x, y) = −c(x) − d(x, y)
//! for a metric d; Nature's payoff is the negation. Pure Nash equilibria are
//! enumerated exhaustively, and an alternating best-response process is
//! provided for studying convergence of iterated play.

use crate::textio::{fields, TextError};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MetricViolation {
    #[error("matrix has {len} entries, expected {n}×{n}")]
    NotSquare { len: usize, n: usize },
    #[error("identity violated: d({p},{p}) = {value}, expected 0")]
    Identity { p: usize, value: f64 },
    #[error("symmetry violated at ({p},{q}): {forward} vs {backward}")]
    Symmetry {
        p: usize,
        q: usize,
        forward: f64,
        backward: f64,
    },
    #[error("triangle violated at ({p},{q},{r}): d = {direct} > {via}")]
    Triangle {
        p: usize,
        q: usize,
        r: usize,
        direct: f64,
        via: f64,
    },
}

/// Checks the metric axioms on a row-major n×n matrix: zero diagonal,
/// symmetry, and the triangle inequality. Axioms are checked in that order
/// and the first violation is reported with the lexicographically first
/// witnessing tuple.
pub fn validate_metric(dist: &[f64], n: usize) -> Result<(), MetricViolation> {
    if dist.len() != n * n {
        return Err(MetricViolation::NotSquare { len: dist.len(), n });
    }
    for p in 0..n {
        let value = dist[p * n + p];
        if value != 0.0 {
            return Err(MetricViolation::Identity { p, value });
        }
    }
    for p in 0..n {
        for q in 0..n {
            let forward = dist[p * n + q];
            let backward = dist[q * n + p];
            if forward != backward {
                return Err(MetricViolation::Symmetry {
                    p,
                    q,
                    forward,
                    backward,
                });
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                let direct = dist[p * n + r];
                let via = dist[p * n + q] + dist[q * n + r];
                if direct > via {
                    return Err(MetricViolation::Triangle {
                        p,
                        q,
                        r,
                        direct,
                        via,
                    });
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GameError {
    #[error("metric: {0}")]
    Metric(#[from] MetricViolation),
    #[error("{player} strategy set is empty")]
    EmptyStrategySet { player: &'static str },
    #[error("point {point} out of range for {count} points")]
    PointOutOfRange { point: usize, count: usize },
    #[error("duplicate strategy {point} in {player} set")]
    DuplicateStrategy { player: &'static str, point: usize },
    #[error("duplicate point name `{name}`")]
    DuplicateName { name: String },
    #[error("cost list has {got} entries for {expected} Algorithm strategies")]
    CostLength { expected: usize, got: usize },
    #[error("cost {value} for point {point} is negative or not a number")]
    BadCost { point: usize, value: f64 },
    #[error("point {point} is not an Algorithm strategy")]
    NotAlgorithmStrategy { point: usize },
    #[error("point {point} is not a Nature strategy")]
    NotNatureStrategy { point: usize },
}

/// A finite zero-sum approximation game over labeled points.
///
/// Strategies are point indices; the Algorithm set carries a nonnegative
/// cost per strategy and all points share one validated metric.
#[derive(Debug, Clone)]
pub struct ApproxGame {
    point_names: Vec<String>,
    strategies_a: Vec<usize>,
    strategies_n: Vec<usize>,
    /// Cost per Algorithm strategy, parallel to `strategies_a`.
    cost: Vec<f64>,
    /// Row-major distance matrix over all points.
    dist: Vec<f64>,
    /// point index → position within `strategies_a`, if a member.
    a_position: Vec<Option<usize>>,
    n_member: Vec<bool>,
}

impl ApproxGame {
    pub fn new(
        point_names: Vec<String>,
        strategies_a: Vec<usize>,
        strategies_n: Vec<usize>,
        cost: Vec<f64>,
        dist: Vec<f64>,
    ) -> Result<Self, GameError> {
        let count = point_names.len();
        for (i, name) in point_names.iter().enumerate() {
            if point_names[..i].contains(name) {
                return Err(GameError::DuplicateName { name: name.clone() });
            }
        }
        if strategies_a.is_empty() {
            return Err(GameError::EmptyStrategySet { player: "Algorithm" });
        }
        if strategies_n.is_empty() {
            return Err(GameError::EmptyStrategySet { player: "Nature" });
        }
        if cost.len() != strategies_a.len() {
            return Err(GameError::CostLength {
                expected: strategies_a.len(),
                got: cost.len(),
            });
        }

        // Canonicalize strategy order (ascending point index), keeping the
        // cost list aligned with the Algorithm strategies.
        let mut paired: Vec<(usize, f64)> = strategies_a
            .iter()
            .copied()
            .zip(cost.iter().copied())
            .collect();
        paired.sort_by_key(|(p, _)| *p);
        let strategies_a: Vec<usize> = paired.iter().map(|(p, _)| *p).collect();
        let cost: Vec<f64> = paired.iter().map(|(_, c)| *c).collect();
        let mut strategies_n = strategies_n;
        strategies_n.sort_unstable();

        let mut a_position = vec![None; count];
        for (pos, &point) in strategies_a.iter().enumerate() {
            if point >= count {
                return Err(GameError::PointOutOfRange { point, count });
            }
            if a_position[point].is_some() {
                return Err(GameError::DuplicateStrategy {
                    player: "Algorithm",
                    point,
                });
            }
            a_position[point] = Some(pos);
        }
        let mut n_member = vec![false; count];
        for &point in &strategies_n {
            if point >= count {
                return Err(GameError::PointOutOfRange { point, count });
            }
            if n_member[point] {
                return Err(GameError::DuplicateStrategy {
                    player: "Nature",
                    point,
                });
            }
            n_member[point] = true;
        }
        for (pos, &value) in cost.iter().enumerate() {
            if !(value >= 0.0) {
                return Err(GameError::BadCost {
                    point: strategies_a[pos],
                    value,
                });
            }
        }
        validate_metric(&dist, count)?;

        Ok(Self {
            point_names,
            strategies_a,
            strategies_n,
            cost,
            dist,
            a_position,
            n_member,
        })
    }

    pub fn point_count(&self) -> usize {
        self.point_names.len()
    }

    pub fn point_name(&self, point: usize) -> &str {
        &self.point_names[point]
    }

    pub fn strategies_a(&self) -> &[usize] {
        &self.strategies_a
    }

    pub fn strategies_n(&self) -> &[usize] {
        &self.strategies_n
    }

    pub fn dist(&self, p: usize, q: usize) -> f64 {
        self.dist[p * self.point_count() + q]
    }

    /// Production cost of an Algorithm strategy.
    pub fn cost(&self, x: usize) -> Result<f64, GameError> {
        let pos = self
            .a_position
            .get(x)
            .copied()
            .flatten()
            .ok_or(GameError::NotAlgorithmStrategy { point: x })?;
        Ok(self.cost[pos])
    }

    /// Algorithm payoff u_A(x, y) = −c(x) − d(x, y). Nature's payoff is the
    /// negation, so the game is zero-sum by construction.
    pub fn utility(&self, x: usize, y: usize) -> Result<f64, GameError> {
        let cost = self.cost(x)?;
        if !self.n_member.get(y).copied().unwrap_or(false) {
            return Err(GameError::NotNatureStrategy { point: y });
        }
        Ok(-cost - self.dist(x, y))
    }
}

/// Exhaustive equilibrium analysis of a game: all pure Nash pairs plus the
/// two security values.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumResult {
    /// Pure equilibria as (Algorithm point, Nature point), sorted by index
    /// pair.
    pub pure_equilibria: Vec<(usize, usize)>,
    /// max over x of min over y of u_A(x, y).
    pub maximin: f64,
    /// min over y of max over x of u_A(x, y).
    pub minimax: f64,
    pub has_pure_saddle: bool,
}

/// Enumerates every pure strategy pair where the Algorithm's choice
/// maximizes u_A against Nature's, and Nature's choice minimizes u_A
/// against the Algorithm's. For a finite zero-sum game the list is nonempty
/// exactly when maximin = minimax.
pub fn find_pure_equilibria(game: &ApproxGame) -> EquilibriumResult {
    let sa = game.strategies_a();
    let sn = game.strategies_n();
    // u[ai][ni]
    let u: Vec<Vec<f64>> = sa
        .iter()
        .map(|&x| sn.iter().map(|&y| game.utility(x, y).expect("valid pair")).collect())
        .collect();

    let col_max: Vec<f64> = (0..sn.len())
        .map(|ni| (0..sa.len()).map(|ai| u[ai][ni]).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let row_min: Vec<f64> = (0..sa.len())
        .map(|ai| (0..sn.len()).map(|ni| u[ai][ni]).fold(f64::INFINITY, f64::min))
        .collect();

    let maximin = row_min.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let minimax = col_max.iter().copied().fold(f64::INFINITY, f64::min);

    let mut pure_equilibria = Vec::new();
    for (ai, &x) in sa.iter().enumerate() {
        for (ni, &y) in sn.iter().enumerate() {
            if u[ai][ni] == col_max[ni] && u[ai][ni] == row_min[ai] {
                pure_equilibria.push((x, y));
            }
        }
    }
    pure_equilibria.sort_unstable();

    EquilibriumResult {
        has_pure_saddle: !pure_equilibria.is_empty(),
        pure_equilibria,
        maximin,
        minimax,
    }
}

/// Trajectory of alternating best-response play.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BestResponsePlay {
    /// Visited states, beginning with the start pair; a state is appended
    /// each time a player's move changes it.
    pub trajectory: Vec<(usize, usize)>,
    /// True when a full round (Algorithm then Nature) left the state
    /// unchanged within `max_rounds`.
    pub converged: bool,
}

/// Alternating best-response dynamics from `start`: each round the Algorithm
/// moves to a best response against the current Nature point, then Nature
/// against the current Algorithm point. Ties go to the lowest strategy
/// index. Play stops after a round that changes nothing (converged) or when
/// `max_rounds` rounds have been used.
pub fn best_response_dynamics(
    game: &ApproxGame,
    start: (usize, usize),
    max_rounds: usize,
) -> Result<BestResponsePlay, GameError> {
    let (mut x, mut y) = start;
    // Validate the start pair.
    game.utility(x, y)?;

    let mut trajectory = vec![(x, y)];
    let mut converged = false;
    for _ in 0..max_rounds {
        let mut changed = false;

        let mut best_x = x;
        let mut best_u = game.utility(x, y).expect("validated");
        for &cand in game.strategies_a() {
            let u = game.utility(cand, y).expect("validated");
            if u > best_u {
                best_u = u;
                best_x = cand;
            }
        }
        if best_x != x {
            x = best_x;
            trajectory.push((x, y));
            changed = true;
        }

        let mut best_y = y;
        let mut best_u = game.utility(x, y).expect("validated");
        for &cand in game.strategies_n() {
            let u = game.utility(x, cand).expect("validated");
            if u < best_u {
                best_u = u;
                best_y = cand;
            }
        }
        if best_y != y {
            y = best_y;
            trajectory.push((x, y));
            changed = true;
        }

        if !changed {
            converged = true;
            break;
        }
    }
    Ok(BestResponsePlay {
        trajectory,
        converged,
    })
}

/// Parses the line-oriented game format:
///
/// ```text
/// point <name>            # declare a point
/// astrat <name>           # mark as Algorithm strategy
/// nstrat <name>           # mark as Nature strategy
/// cost <name> <real>      # production cost (required per astrat point)
/// dist <name> <name> <real>  # distance; fills both symmetric entries
/// ```
///
/// The diagonal defaults to 0; every off-diagonal pair must be given
/// exactly once. Blank lines and `#` comments are ignored.
pub fn parse_game_spec(text: &str) -> Result<ApproxGame, TextError> {
    let mut names: Vec<String> = Vec::new();
    let mut astrat: Vec<usize> = Vec::new();
    let mut nstrat: Vec<usize> = Vec::new();
    let mut costs: Vec<Option<f64>> = Vec::new();
    let mut dist_entries: Vec<(usize, usize, f64)> = Vec::new();

    let lookup = |names: &[String], name: &str, line: usize| -> Result<usize, TextError> {
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| TextError::at(line, format!("unknown point `{name}`")))
    };
    let parse_real = |text: &str, line: usize| -> Result<f64, TextError> {
        text.parse::<f64>()
            .map_err(|_| TextError::at(line, format!("invalid real `{text}`")))
    };

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let Some(parts) = fields(raw) else { continue };
        match parts.as_slice() {
            ["point", name] => {
                if names.iter().any(|n| n == name) {
                    return Err(TextError::at(line, format!("duplicate point `{name}`")));
                }
                names.push((*name).to_string());
            }
            ["astrat", name] => {
                let p = lookup(&names, name, line)?;
                if astrat.contains(&p) {
                    return Err(TextError::at(line, format!("duplicate astrat `{name}`")));
                }
                astrat.push(p);
            }
            ["nstrat", name] => {
                let p = lookup(&names, name, line)?;
                if nstrat.contains(&p) {
                    return Err(TextError::at(line, format!("duplicate nstrat `{name}`")));
                }
                nstrat.push(p);
            }
            ["cost", name, value] => {
                let p = lookup(&names, name, line)?;
                let value = parse_real(value, line)?;
                if costs.len() < names.len() {
                    costs.resize(names.len(), None);
                }
                if costs[p].is_some() {
                    return Err(TextError::at(line, format!("duplicate cost for `{name}`")));
                }
                costs[p] = Some(value);
            }
            ["dist", a, b, value] => {
                let pa = lookup(&names, a, line)?;
                let pb = lookup(&names, b, line)?;
                let value = parse_real(value, line)?;
                let (lo, hi) = (pa.min(pb), pa.max(pb));
                if dist_entries.iter().any(|&(a0, b0, _)| (a0, b0) == (lo, hi)) {
                    return Err(TextError::at(
                        line,
                        format!("duplicate dist for `{a}` `{b}`"),
                    ));
                }
                dist_entries.push((lo, hi, value));
            }
            [directive, ..] => {
                return Err(TextError::at(line, format!("unknown directive `{directive}`")));
            }
            [] => unreachable!(),
        }
    }

    let n = names.len();
    if n == 0 {
        return Err(TextError::whole_file("no `point` lines"));
    }
    costs.resize(n, None);

    let mut dist = vec![0.0; n * n];
    let mut seen = vec![false; n * n];
    for i in 0..n {
        seen[i * n + i] = true; // the diagonal defaults to 0
    }
    for &(p, q, value) in &dist_entries {
        dist[p * n + q] = value;
        dist[q * n + p] = value;
        seen[p * n + q] = true;
        seen[q * n + p] = true;
    }
    for p in 0..n {
        for q in 0..n {
            if !seen[p * n + q] {
                return Err(TextError::whole_file(format!(
                    "missing dist entry for `{}` `{}`",
                    names[p], names[q]
                )));
            }
        }
    }

    let mut cost = Vec::with_capacity(astrat.len());
    for &p in &astrat {
        match costs[p] {
            Some(value) => cost.push(value),
            None => {
                return Err(TextError::whole_file(format!(
                    "missing cost for Algorithm strategy `{}`",
                    names[p]
                )))
            }
        }
    }

    ApproxGame::new(names, astrat, nstrat, cost, dist)
        .map_err(|e| TextError::whole_file(e.to_string()))
}
