//! Declarative scenario files.
//!
//! A scenario is a JSON document selecting a family (catalog id or declared
//! Herglotz field), an `(s, z)` grid, a horizon, integrator tolerances and
//! the analyses to run:
//!
//! ```json
//! {
//!   "family": "B1",
//!   "grid": [[0.0, [0.0, 0.0]], [1.0, [0.3, 0.0]]],
//!   "horizon": 200.0,
//!   "integrator": {"rel_tol": 1e-10, "abs_tol": 1e-12, "max_step": 1.0, "output_grid": 0.05},
//!   "analyses": ["classify", "spectral"]
//! }
//! ```
//!
//! A declared field replaces the catalog id with
//! `{"tau": [re, im], "p": "<expression in z and t>", "breakpoints": [...]}`.
//! Declared fields are validated on a probe grid before any integration.

use crate::classify::ClassifyConfig;
use crate::evolution::{
    integrate_family, CatalogId, EvolutionFamily, EvolveError, IntegrableField, IntegratorConfig,
};
use crate::expr::{self, ParseError};
use crate::herglotz::{berkson_porta_field, FieldError, HerglotzField, Tau};
use num_complex::Complex64;
use serde::Deserialize;
use std::path::Path;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read scenario file: {0}")]
    Io(#[from] std::io::Error),
    #[error("scenario parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field expression: {0}")]
    Expr(#[from] ParseError),
    #[error("unknown family `{0}` (catalog ids are B1..B5, B4', I1..I4)")]
    UnknownFamily(String),
    #[error("grid must be nonempty")]
    EmptyGrid,
    #[error("grid point {index}: z = {z} lies outside the open unit disk")]
    PointOutsideDisk { index: usize, z: Complex64 },
    #[error("grid point {index}: start time s = {s} must be nonnegative")]
    NegativeStart { index: usize, s: f64 },
    #[error("horizon {horizon} must exceed every grid start time (max s = {max_s})")]
    HorizonTooSmall { horizon: f64, max_s: f64 },
    #[error("analyses must be nonempty")]
    NoAnalyses,
    #[error("unknown analysis `{0}` (expected classify, theta, spectral, nontangential, automorphic, validate)")]
    UnknownAnalysis(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Evolve(#[from] EvolveError),
}

/// Analyses requested by a scenario.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Analyses {
    pub classify: bool,
    pub theta: bool,
    pub spectral: bool,
    pub nontangential: bool,
    pub automorphic: bool,
    pub validate: bool,
}

impl Analyses {
    fn from_names(names: &[String]) -> Result<Self, ScenarioError> {
        if names.is_empty() {
            return Err(ScenarioError::NoAnalyses);
        }
        let mut out = Analyses::default();
        for name in names {
            match name.as_str() {
                "classify" => out.classify = true,
                "theta" => out.theta = true,
                "spectral" => out.spectral = true,
                "nontangential" => out.nontangential = true,
                "automorphic" => out.automorphic = true,
                "validate" => out.validate = true,
                other => return Err(ScenarioError::UnknownAnalysis(other.to_string())),
            }
        }
        Ok(out)
    }

    pub fn names(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.classify {
            out.push("classify");
        }
        if self.theta {
            out.push("theta");
        }
        if self.spectral {
            out.push("spectral");
        }
        if self.nontangential {
            out.push("nontangential");
        }
        if self.automorphic {
            out.push("automorphic");
        }
        if self.validate {
            out.push("validate");
        }
        out
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum FamilySpec {
    Catalog(String),
    Field {
        tau: [f64; 2],
        p: String,
        #[serde(default)]
        breakpoints: Vec<f64>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntegratorSpec {
    #[serde(default = "default_rel_tol")]
    rel_tol: f64,
    #[serde(default = "default_abs_tol")]
    abs_tol: f64,
    #[serde(default = "default_max_step")]
    max_step: f64,
    #[serde(default = "default_output_grid")]
    output_grid: f64,
}

fn default_rel_tol() -> f64 {
    1e-10
}
fn default_abs_tol() -> f64 {
    1e-12
}
fn default_max_step() -> f64 {
    1.0
}
fn default_output_grid() -> f64 {
    0.05
}

impl Default for IntegratorSpec {
    fn default() -> Self {
        Self {
            rel_tol: default_rel_tol(),
            abs_tol: default_abs_tol(),
            max_step: default_max_step(),
            output_grid: default_output_grid(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    family: FamilySpec,
    grid: Vec<(f64, [f64; 2])>,
    horizon: f64,
    #[serde(default)]
    integrator: IntegratorSpec,
    analyses: Vec<String>,
}

/// How the scenario family came to be, echoed into reports.
#[derive(Debug, Clone)]
pub enum FamilyOrigin {
    Catalog(CatalogId),
    Declared { tau: Complex64, p_source: String },
}

impl std::fmt::Display for FamilyOrigin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FamilyOrigin::Catalog(id) => write!(f, "{id}"),
            FamilyOrigin::Declared { tau, p_source } => {
                write!(f, "field(tau = {} + {}i, p = {p_source})", tau.re, tau.im)
            }
        }
    }
}

/// A fully resolved scenario, ready to run.
pub struct Scenario {
    pub family: EvolutionFamily,
    pub origin: FamilyOrigin,
    /// Retained Herglotz data of a declared field, for validation reports.
    pub declared_field: Option<HerglotzField>,
    pub grid: Vec<(f64, Complex64)>,
    pub cfg: ClassifyConfig,
    pub analyses: Analyses,
}

impl std::fmt::Debug for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Scenario")
            .field("origin", &self.origin.to_string())
            .field("grid", &self.grid)
            .field("horizon", &self.cfg.horizon())
            .field("analyses", &self.analyses)
            .finish_non_exhaustive()
    }
}

impl Scenario {
    pub fn from_json_str(text: &str) -> Result<Self, ScenarioError> {
        let file: ScenarioFile = serde_json::from_str(text)?;
        Self::resolve(file)
    }

    pub fn from_path(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    fn resolve(file: ScenarioFile) -> Result<Self, ScenarioError> {
        if file.grid.is_empty() {
            return Err(ScenarioError::EmptyGrid);
        }
        let mut grid = Vec::with_capacity(file.grid.len());
        let mut max_s = 0.0f64;
        for (index, (s, z)) in file.grid.iter().enumerate() {
            let z = Complex64::new(z[0], z[1]);
            if !z.re.is_finite() || !z.im.is_finite() || z.norm() >= 1.0 {
                return Err(ScenarioError::PointOutsideDisk { index, z });
            }
            if !s.is_finite() || *s < 0.0 {
                return Err(ScenarioError::NegativeStart { index, s: *s });
            }
            max_s = max_s.max(*s);
            grid.push((*s, z));
        }
        if !file.horizon.is_finite() || file.horizon <= max_s {
            return Err(ScenarioError::HorizonTooSmall { horizon: file.horizon, max_s });
        }
        let analyses = Analyses::from_names(&file.analyses)?;
        let integrator = IntegratorConfig {
            rel_tol: file.integrator.rel_tol,
            abs_tol: file.integrator.abs_tol,
            max_step: file.integrator.max_step,
            horizon: file.horizon,
            output_grid: file.integrator.output_grid,
        };
        integrator.validate()?;
        let cfg = ClassifyConfig { integrator, ..ClassifyConfig::default() };

        let (family, origin, declared_field) = match file.family {
            FamilySpec::Catalog(name) => {
                let id: CatalogId =
                    name.parse().map_err(|_| ScenarioError::UnknownFamily(name.clone()))?;
                (EvolutionFamily::catalog(id), FamilyOrigin::Catalog(id), None)
            }
            FamilySpec::Field { tau, p, breakpoints } => {
                let tau_c = Complex64::new(tau[0], tau[1]);
                let tau = Tau::from_complex(tau_c)?;
                let parsed = expr::parse(&p)?;
                let expr = Arc::new(parsed);
                let eval = {
                    let expr = expr.clone();
                    Arc::new(move |z: Complex64, t: f64| expr.eval(z, t))
                        as Arc<dyn Fn(Complex64, f64) -> Complex64 + Send + Sync>
                };
                let field = HerglotzField::new(tau, eval, breakpoints);
                let disk_field = berkson_porta_field(&field)?;
                let family = integrate_family(IntegrableField::Disk(disk_field), integrator)?;
                (
                    family,
                    FamilyOrigin::Declared { tau: tau_c, p_source: p },
                    Some(field),
                )
            }
        };
        Ok(Scenario { family, origin, declared_field, grid, cfg, analyses })
    }
}
