//! Experiment configuration, read from a single JSON document.
//!
//! Every field except `domain` has a default, so a minimal config is
//!
//! ```json
//! { "domain": { "shape": "disk", "radius": 1.0 },
//!   "endpoints": { "bottom": [{"x": 0.5, "y": 0.0}, {"x": -0.5, "y": 0.0}],
//!                  "top":    [{"x": 0.5, "y": 0.0}, {"x": -0.5, "y": 0.0}] } }
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::expansion::{GridPolicy, DEFAULT_EPSILONS};
use crate::fields::PhaseMode;
use crate::laplace::SolverOptions;
use crate::reduced::{EndpointConstraint, MinimizeOptions};
use crate::renormalized::{RadialOptions, GAMMA_EPSILONS};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub domain: DomainSpec,
    /// Filament count; taken from `endpoints` when present.
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default = "default_height")]
    pub height: f64,
    #[serde(default)]
    pub endpoints: Option<EndpointConstraint>,
    /// Number of z-segments of the discrete filaments.
    #[serde(default = "default_segments")]
    pub segments: usize,
    /// ε list of the expansion sweep, strictly decreasing.
    #[serde(default = "default_epsilons")]
    pub epsilons: Vec<f64>,
    /// ε list used to extrapolate `γ`.
    #[serde(default = "default_gamma_epsilons")]
    pub gamma_epsilons: Vec<f64>,
    #[serde(default)]
    pub grid: GridPolicy,
    #[serde(default)]
    pub minimizer: MinimizeOptions,
    #[serde(default)]
    pub radial: RadialOptions,
    #[serde(default)]
    pub laplace: SolverOptions,
    #[serde(default)]
    pub phase: PhaseMode,
    /// Regularization scale for initial guesses that collide.
    #[serde(default = "default_delta")]
    pub regularization_delta: f64,
    /// Filament CSV to sweep instead of minimizing first.
    #[serde(default)]
    pub filaments: Option<PathBuf>,
    #[serde(default = "default_out")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
}

fn default_height() -> f64 {
    1.0
}

fn default_segments() -> usize {
    64
}

fn default_epsilons() -> Vec<f64> {
    DEFAULT_EPSILONS.to_vec()
}

fn default_gamma_epsilons() -> Vec<f64> {
    GAMMA_EPSILONS.to_vec()
}

fn default_delta() -> f64 {
    1e-2
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be positive, got {v}")))
    }
}

impl ExperimentConfig {
    /// A config with every default and the given domain.
    pub fn new(domain: DomainSpec) -> Self {
        ExperimentConfig {
            domain,
            n: None,
            height: default_height(),
            endpoints: None,
            segments: default_segments(),
            epsilons: default_epsilons(),
            gamma_epsilons: default_gamma_epsilons(),
            grid: GridPolicy::default(),
            minimizer: MinimizeOptions::default(),
            radial: RadialOptions::default(),
            laplace: SolverOptions::default(),
            phase: PhaseMode::default(),
            regularization_delta: default_delta(),
            filaments: None,
            output_dir: default_out(),
            seed: 0,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: ExperimentConfig = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Json(j) => Error::Malformed {
                path: path.to_path_buf(),
                reason: j.to_string(),
            },
            other => other,
        })
    }

    /// Filament count from `n` or the endpoints.
    pub fn filament_count(&self) -> Result<usize> {
        match (&self.endpoints, self.n) {
            (Some(e), _) => Ok(e.n()),
            (None, Some(n)) => Ok(n),
            (None, None) => Err(Error::Config("either n or endpoints must be given".into())),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.domain.validate()?;
        positive("height", self.height)?;
        positive("regularization_delta", self.regularization_delta)?;
        positive("grid.spacing_factor", self.grid.spacing_factor)?;
        positive("grid.z_factor", self.grid.z_factor)?;
        positive("minimizer.tolerance", self.minimizer.tolerance)?;
        positive("laplace.tolerance", self.laplace.tolerance)?;
        positive("radial.dt", self.radial.dt)?;
        positive("radial.stretch", self.radial.stretch)?;
        if self.segments < 2 {
            return Err(Error::Config(format!("segments must be at least 2, got {}", self.segments)));
        }
        for &e in self.epsilons.iter().chain(&self.gamma_epsilons) {
            if !(e > 0.0 && e < 1.0) {
                return Err(Error::Config(format!("ε values must lie in (0, 1), got {e}")));
            }
        }
        if let (Some(e), Some(n)) = (&self.endpoints, self.n) {
            if e.n() != n {
                return Err(Error::Config(format!("n = {n} but endpoints describe {} filaments", e.n())));
            }
        }
        if let Some(e) = &self.endpoints {
            EndpointConstraint::new(e.bottom.clone(), e.top.clone())?;
        }
        Ok(())
    }
}
