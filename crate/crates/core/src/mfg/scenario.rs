//! Scenario configuration for the grid mean-field game.
//!
//! A scenario pins down the discretization (uniform grid, time step,
//! velocity controls), the cost structure (base cost, congestion kernel and
//! coupling weight, target point), the diffusion weight, and the fixed-point
//! iteration parameters. Scenarios are plain data validated by
//! [`GridScenario::validate`] and loadable from a strict `key = value` text
//! format.

use crate::measure::{self, MeasureError, MeasureVector};
use crate::textio::TextError;
use thiserror::Error;

/// Congestion kernel: how the population density enters the running cost.
#[derive(Debug, Clone, PartialEq)]
pub enum Kernel {
    /// Cost feels only the mass at the same grid point.
    Local,
    /// Cost feels a Gaussian-weighted neighborhood, weight exp(−Δ²/2w²).
    Gaussian { width: f64 },
}

/// Initial distribution specification.
#[derive(Debug, Clone, PartialEq)]
pub enum Mu0Spec {
    /// Point mass at the grid point nearest to `position`.
    Delta { position: f64 },
    /// Uniform weights over all grid points.
    Uniform,
    /// Explicit weights, one per grid point.
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ScenarioError {
    #[error("M = {got} grid points, need at least 2")]
    TooFewGridPoints { got: usize },
    #[error("T_steps must be at least 1")]
    NoTimeSteps,
    #[error("dt = {got} must be positive and finite")]
    BadTimeStep { got: f64 },
    #[error("x_max = {x_max} must exceed x_min = {x_min}")]
    EmptyInterval { x_min: f64, x_max: f64 },
    #[error("y_star = {got} lies outside [{x_min}, {x_max}]")]
    TargetOutOfRange { got: f64, x_min: f64, x_max: f64 },
    #[error("controls must be nonempty")]
    NoControls,
    #[error("controls must include 0")]
    MissingZeroControl,
    #[error("control {control} drifts |a|·dt = {drift} beyond the grid span {span}")]
    ControlJumpsGrid {
        control: f64,
        drift: f64,
        span: f64,
    },
    #[error("c0 has {got} entries, expected M = {expected}")]
    BaseCostLength { expected: usize, got: usize },
    #[error("c0[{index}] = {value} is not finite")]
    BadBaseCost { index: usize, value: f64 },
    #[error("lambda = {got} must be nonnegative and finite")]
    BadLambda { got: f64 },
    #[error("sigma = {got} must be nonnegative and finite")]
    BadSigma { got: f64 },
    #[error("omega = {got} must lie in (0, 1]")]
    BadOmega { got: f64 },
    #[error("tol = {got} must be nonnegative and finite")]
    BadTolerance { got: f64 },
    #[error("gaussian kernel width {got} must be positive and finite")]
    BadKernelWidth { got: f64 },
    #[error("mu0 delta position {got} lies outside [{x_min}, {x_max}]")]
    Mu0OutOfRange { got: f64, x_min: f64, x_max: f64 },
    #[error("mu0: {0}")]
    Mu0Invalid(#[from] MeasureError),
}

/// Full configuration of a grid mean-field game.
#[derive(Debug, Clone, PartialEq)]
pub struct GridScenario {
    pub x_min: f64,
    pub x_max: f64,
    /// Number of grid points M; spacing is (x_max − x_min) / (M − 1).
    pub grid_points: usize,
    pub t_steps: usize,
    pub dt: f64,
    /// Target point y*; the state cost is the distance |x − y*|.
    pub y_star: f64,
    /// Velocity controls available to every agent. Must contain 0.
    pub controls: Vec<f64>,
    /// Base cost per grid point, length M.
    pub c0: Vec<f64>,
    /// Congestion coupling weight λ ≥ 0.
    pub lambda: f64,
    pub kernel: Kernel,
    /// Diffusion weight σ ≥ 0; 0 disables smoothing entirely.
    pub sigma: f64,
    /// Damping weight ω ∈ (0, 1] for the fixed-point iteration.
    pub omega: f64,
    /// Equilibrium residual tolerance.
    pub tol: f64,
    pub max_iters: usize,
    pub mu0: Mu0Spec,
}

impl GridScenario {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.grid_points < 2 {
            return Err(ScenarioError::TooFewGridPoints {
                got: self.grid_points,
            });
        }
        if self.t_steps == 0 {
            return Err(ScenarioError::NoTimeSteps);
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(ScenarioError::BadTimeStep { got: self.dt });
        }
        if !(self.x_max > self.x_min) {
            return Err(ScenarioError::EmptyInterval {
                x_min: self.x_min,
                x_max: self.x_max,
            });
        }
        if !(self.y_star >= self.x_min && self.y_star <= self.x_max) {
            return Err(ScenarioError::TargetOutOfRange {
                got: self.y_star,
                x_min: self.x_min,
                x_max: self.x_max,
            });
        }
        if self.controls.is_empty() {
            return Err(ScenarioError::NoControls);
        }
        if !self.controls.contains(&0.0) {
            return Err(ScenarioError::MissingZeroControl);
        }
        let span = self.x_max - self.x_min;
        for &control in &self.controls {
            let drift = control.abs() * self.dt;
            if !(drift <= span) {
                return Err(ScenarioError::ControlJumpsGrid {
                    control,
                    drift,
                    span,
                });
            }
        }
        if self.c0.len() != self.grid_points {
            return Err(ScenarioError::BaseCostLength {
                expected: self.grid_points,
                got: self.c0.len(),
            });
        }
        for (index, &value) in self.c0.iter().enumerate() {
            if !value.is_finite() {
                return Err(ScenarioError::BadBaseCost { index, value });
            }
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(ScenarioError::BadLambda { got: self.lambda });
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(ScenarioError::BadSigma { got: self.sigma });
        }
        if !(self.omega > 0.0 && self.omega <= 1.0) {
            return Err(ScenarioError::BadOmega { got: self.omega });
        }
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return Err(ScenarioError::BadTolerance { got: self.tol });
        }
        if let Kernel::Gaussian { width } = self.kernel {
            if !(width > 0.0 && width.is_finite()) {
                return Err(ScenarioError::BadKernelWidth { got: width });
            }
        }
        match &self.mu0 {
            Mu0Spec::Delta { position } => {
                if !(*position >= self.x_min && *position <= self.x_max) {
                    return Err(ScenarioError::Mu0OutOfRange {
                        got: *position,
                        x_min: self.x_min,
                        x_max: self.x_max,
                    });
                }
            }
            Mu0Spec::Uniform => {}
            Mu0Spec::Explicit(weights) => {
                if weights.len() != self.grid_points {
                    return Err(MeasureError::LengthMismatch {
                        expected: self.grid_points,
                        got: weights.len(),
                    }
                    .into());
                }
                MeasureVector::new(weights.clone())?;
            }
        }
        Ok(())
    }

    /// Grid spacing h.
    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.grid_points - 1) as f64
    }

    /// Grid point positions, length M.
    pub fn grid(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.grid_points)
            .map(|i| self.x_min + i as f64 * h)
            .collect()
    }

    /// Distance to the target, d(x, y*) = |x − y*|.
    pub fn target_distance(&self, x: f64) -> f64 {
        (x - self.y_star).abs()
    }

    pub fn nearest_grid_index(&self, x: f64) -> usize {
        measure::nearest_grid_index(x, self.x_min, self.spacing(), self.grid_points)
    }

    /// The initial measure as grid weights.
    pub fn initial_measure(&self) -> Result<MeasureVector, ScenarioError> {
        match &self.mu0 {
            Mu0Spec::Delta { position } => {
                let idx = self.nearest_grid_index(*position);
                Ok(MeasureVector::dirac(self.grid_points, idx)?)
            }
            Mu0Spec::Uniform => Ok(MeasureVector::uniform(self.grid_points)?),
            Mu0Spec::Explicit(weights) => Ok(MeasureVector::new(weights.clone())?),
        }
    }

    /// Smoothing weight σ′ = σ·dt/h², clamped to 1/2 so the three-point
    /// kernel [σ′, 1 − 2σ′, σ′] keeps nonnegative center mass.
    pub fn smoothing_weight(&self) -> f64 {
        let h = self.spacing();
        (self.sigma * self.dt / (h * h)).min(0.5)
    }

    /// The diffusion coefficient actually realized by the smoothing kernel:
    /// equal to σ when the clamp is inactive, smaller when it binds. The
    /// agent simulation draws its noise from this value so that the particle
    /// process and the density push describe the same dynamics.
    pub fn effective_sigma(&self) -> f64 {
        let h = self.spacing();
        self.smoothing_weight() * h * h / self.dt
    }

    /// Congestion term (K ⋆ μ)(xᵢ) for every grid point.
    pub fn congestion(&self, mu: &MeasureVector) -> Vec<f64> {
        match self.kernel {
            Kernel::Local => mu.weights().to_vec(),
            Kernel::Gaussian { width } => {
                let grid = self.grid();
                let inv = 1.0 / (2.0 * width * width);
                (0..self.grid_points)
                    .map(|i| {
                        mu.weights()
                            .iter()
                            .enumerate()
                            .map(|(j, &w)| {
                                let d = grid[i] - grid[j];
                                w * (-d * d * inv).exp()
                            })
                            .sum()
                    })
                    .collect()
            }
        }
    }

    /// Kernel weight K(xᵢ, xⱼ).
    pub fn kernel_weight(&self, xi: f64, xj: f64) -> f64 {
        match self.kernel {
            Kernel::Local => {
                if xi == xj {
                    1.0
                } else {
                    0.0
                }
            }
            Kernel::Gaussian { width } => {
                let d = xi - xj;
                (-d * d / (2.0 * width * width)).exp()
            }
        }
    }

    /// Running cost c(x, μ) = c0(x) + λ·(K ⋆ μ)(x) for every grid point.
    pub fn running_cost(&self, mu: &MeasureVector) -> Vec<f64> {
        if self.lambda == 0.0 {
            return self.c0.clone();
        }
        self.congestion(mu)
            .iter()
            .zip(&self.c0)
            .map(|(k, c)| c + self.lambda * k)
            .collect()
    }
}

const SCENARIO_KEYS: [&str; 15] = [
    "x_min", "x_max", "M", "T_steps", "dt", "y_star", "controls", "c0", "lambda", "kernel",
    "sigma", "omega", "tol", "max_iters", "mu0",
];

/// Parses the strict `key = value` scenario format. Every key must appear
/// exactly once; unknown keys are fatal and reported with their line.
///
/// ```text
/// x_min = 0
/// x_max = 1
/// M = 101
/// T_steps = 50
/// dt = 0.02
/// y_star = 0.8
/// controls = -1 -0.5 0 0.5 1
/// c0 = 0                  # one value (constant) or M values
/// lambda = 1
/// kernel = gaussian 0.1   # or: local
/// sigma = 0.05
/// omega = 0.5
/// tol = 1e-6
/// max_iters = 500
/// mu0 = delta 0.2         # or: uniform
/// ```
pub fn parse_scenario(text: &str) -> Result<GridScenario, TextError> {
    let mut values: Vec<(String, String, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if stripped.trim().is_empty() {
            continue;
        }
        let Some((key, value)) = stripped.split_once('=') else {
            return Err(TextError::at(line, "expected `key = value`"));
        };
        let key = key.trim();
        let value = value.trim();
        if !SCENARIO_KEYS.contains(&key) {
            return Err(TextError::at(line, format!("unknown key `{key}`")));
        }
        if let Some((_, _, first)) = values.iter().find(|(k, _, _)| k == key) {
            return Err(TextError::at(
                line,
                format!("duplicate key `{key}` (first on line {first})"),
            ));
        }
        values.push((key.to_string(), value.to_string(), line));
    }

    let get = |key: &str| -> Result<(&str, usize), TextError> {
        values
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, v, line)| (v.as_str(), *line))
            .ok_or_else(|| TextError::whole_file(format!("missing key `{key}`")))
    };
    let real = |key: &str| -> Result<f64, TextError> {
        let (v, line) = get(key)?;
        v.parse::<f64>()
            .map_err(|_| TextError::at(line, format!("invalid real for `{key}`: `{v}`")))
    };
    let integer = |key: &str| -> Result<usize, TextError> {
        let (v, line) = get(key)?;
        v.parse::<usize>()
            .map_err(|_| TextError::at(line, format!("invalid integer for `{key}`: `{v}`")))
    };
    let real_list = |v: &str, key: &str, line: usize| -> Result<Vec<f64>, TextError> {
        v.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| TextError::at(line, format!("invalid real for `{key}`: `{s}`")))
            })
            .collect()
    };

    let grid_points = integer("M")?;
    let (controls_raw, controls_line) = get("controls")?;
    let controls = real_list(controls_raw, "controls", controls_line)?;

    let (c0_raw, c0_line) = get("c0")?;
    let c0_values = real_list(c0_raw, "c0", c0_line)?;
    let c0 = match c0_values.len() {
        1 => vec![c0_values[0]; grid_points],
        len if len == grid_points => c0_values,
        len => {
            return Err(TextError::at(
                c0_line,
                format!("c0 needs 1 or M = {grid_points} values, got {len}"),
            ))
        }
    };

    let (kernel_raw, kernel_line) = get("kernel")?;
    let kernel_fields: Vec<&str> = kernel_raw.split_whitespace().collect();
    let kernel = match kernel_fields.as_slice() {
        ["local"] => Kernel::Local,
        ["gaussian", width] => {
            let width = width.parse::<f64>().map_err(|_| {
                TextError::at(kernel_line, format!("invalid gaussian width `{width}`"))
            })?;
            Kernel::Gaussian { width }
        }
        _ => {
            return Err(TextError::at(
                kernel_line,
                format!("kernel must be `local` or `gaussian <width>`, got `{kernel_raw}`"),
            ))
        }
    };

    let (mu0_raw, mu0_line) = get("mu0")?;
    let mu0_fields: Vec<&str> = mu0_raw.split_whitespace().collect();
    let mu0 = match mu0_fields.as_slice() {
        ["uniform"] => Mu0Spec::Uniform,
        ["delta", position] => {
            let position = position.parse::<f64>().map_err(|_| {
                TextError::at(mu0_line, format!("invalid delta position `{position}`"))
            })?;
            Mu0Spec::Delta { position }
        }
        _ => {
            return Err(TextError::at(
                mu0_line,
                format!("mu0 must be `delta <x>` or `uniform`, got `{mu0_raw}`"),
            ))
        }
    };

    let scenario = GridScenario {
        x_min: real("x_min")?,
        x_max: real("x_max")?,
        grid_points,
        t_steps: integer("T_steps")?,
        dt: real("dt")?,
        y_star: real("y_star")?,
        controls,
        c0,
        lambda: real("lambda")?,
        kernel,
        sigma: real("sigma")?,
        omega: real("omega")?,
        tol: real("tol")?,
        max_iters: integer("max_iters")?,
        mu0,
    };
    scenario
        .validate()
        .map_err(|e| TextError::whole_file(e.to_string()))?;
    Ok(scenario)
}

#[cfg(test)]
pub(crate) fn test_scenario() -> GridScenario {
    GridScenario {
        x_min: 0.0,
        x_max: 1.0,
        grid_points: 11,
        t_steps: 5,
        dt: 0.1,
        y_star: 0.8,
        controls: vec![-1.0, 0.0, 1.0],
        c0: vec![0.0; 11],
        lambda: 0.0,
        kernel: Kernel::Local,
        sigma: 0.0,
        omega: 1.0,
        tol: 1e-9,
        max_iters: 50,
        mu0: Mu0Spec::Delta { position: 0.2 },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const REFERENCE: &str = "\
x_min = 0
x_max = 1
M = 101
T_steps = 50
dt = 0.02
y_star = 0.8
controls = -1 -0.5 0 0.5 1
c0 = 0
lambda = 1
kernel = gaussian 0.1
sigma = 0.05
omega = 0.5
tol = 1e-6
max_iters = 500
mu0 = delta 0.2
";

    #[test]
    fn parses_reference_scenario() {
        let s = parse_scenario(REFERENCE).unwrap();
        assert_eq!(s.grid_points, 101);
        assert_eq!(s.controls, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(s.kernel, Kernel::Gaussian { width: 0.1 });
        assert_eq!(s.mu0, Mu0Spec::Delta { position: 0.2 });
        assert_eq!(s.c0.len(), 101);
        assert!((s.spacing() - 0.01).abs() < 1e-15);
    }

    #[test]
    fn unknown_key_is_fatal_with_line() {
        let text = REFERENCE.replace("lambda = 1", "lamda = 1");
        let err = parse_scenario(&text).unwrap_err();
        assert_eq!(err.line, Some(9));
        assert!(err.message.contains("lamda"), "message: {}", err.message);
    }

    #[test]
    fn missing_key_is_fatal() {
        let text = REFERENCE.replace("sigma = 0.05\n", "");
        let err = parse_scenario(&text).unwrap_err();
        assert!(err.message.contains("sigma"));
    }

    #[test]
    fn duplicate_key_is_fatal() {
        let text = format!("{REFERENCE}sigma = 0.1\n");
        let err = parse_scenario(&text).unwrap_err();
        assert!(err.message.contains("duplicate"));
    }

    #[test]
    fn validation_requires_zero_control() {
        let mut s = test_scenario();
        s.controls = vec![-1.0, 1.0];
        assert_eq!(s.validate(), Err(ScenarioError::MissingZeroControl));
    }

    #[test]
    fn validation_rejects_grid_jumping_control() {
        let mut s = test_scenario();
        s.controls = vec![0.0, 20.0];
        assert!(matches!(
            s.validate(),
            Err(ScenarioError::ControlJumpsGrid { .. })
        ));
    }

    #[test]
    fn validation_rejects_bad_omega() {
        let mut s = test_scenario();
        s.omega = 0.0;
        assert_eq!(s.validate(), Err(ScenarioError::BadOmega { got: 0.0 }));
        s.omega = 1.5;
        assert_eq!(s.validate(), Err(ScenarioError::BadOmega { got: 1.5 }));
    }

    #[test]
    fn smoothing_weight_clamps_at_half() {
        let mut s = test_scenario();
        s.sigma = 10.0;
        assert_eq!(s.smoothing_weight(), 0.5);
        assert!(s.effective_sigma() < s.sigma);
    }

    #[test]
    fn delta_initial_measure_bins_to_nearest_point() {
        let s = test_scenario();
        let mu = s.initial_measure().unwrap();
        assert_eq!(mu.weights()[2], 1.0); // 0.2 on an 0.1-spaced grid
    }

    #[test]
    fn local_congestion_returns_weights() {
        let s = test_scenario();
        let mu = MeasureVector::uniform(11).unwrap();
        let k = s.congestion(&mu);
        assert_eq!(k, mu.weights());
    }

    #[test]
    fn running_cost_adds_weighted_congestion() {
        let mut s = test_scenario();
        s.lambda = 2.0;
        let mu = MeasureVector::dirac(11, 3).unwrap();
        let c = s.running_cost(&mu);
        assert_eq!(c[3], 2.0);
        assert_eq!(c[0], 0.0);
    }
}
