use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::cone::{
    construct_axis, construct_general, construct_ones, construct_tangent_sphere, ConeConstruction,
    LorenzCone,
};
use crate::geometry::{DikinEllipsoid, Hyperplane};
use crate::invariance::{Integrator, LinearSystem, EXIT_TOL};
use crate::linalg::matrix_from_rows;

use super::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Cone selection. Axis indices are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConeSpec {
    Axis {
        index: usize,
    },
    Ones,
    Custom {
        normal: Vec<f64>,
    },
    SphereTangent,
    /// `x₁² + … + x_{n−1}² ≤ xₙ²`, `xₙ ≥ 0`.
    Standard,
    Matrix {
        q: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        axis_hint: Option<Vec<f64>>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Default for ScanRange {
    fn default() -> Self {
        Self {
            min: -10.0,
            max: 10.0,
            count: 81,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    pub seed: u64,
    pub samples: usize,
    pub step: f64,
    pub horizon: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    pub integrator: Integrator,
    pub exit_tol: f64,
    /// Random members simulated when no initial points are given.
    pub trajectories: usize,
    pub resolution: usize,
    pub scan: ScanRange,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 10_000,
            step: 1e-3,
            horizon: 10.0,
            tol: None,
            integrator: Integrator::Rk4,
            exit_tol: EXIT_TOL,
            trajectories: 8,
            resolution: 24,
            scan: ScanRange::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub schema_version: u32,
    pub dimension: usize,
    /// Dikin center, or sphere center for `sphere_tangent`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
    pub cone: ConeSpec,
    /// System matrix `A`, row-major.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_points: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub options: Options,
}

/// The cone a config describes, with its construction when it has one.
pub struct ResolvedCone {
    pub construction: Option<ConeConstruction>,
    pub cone: LorenzCone,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl ProblemConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        let config: Self = serde_json::from_str(&text)
            .map_err(|e| usage(format!("invalid config {}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(usage(format!(
                "unsupported schema_version {}, expected {SCHEMA_VERSION}",
                self.schema_version
            )));
        }
        let n = self.dimension;
        if n < 2 {
            return Err(usage(format!("dimension must be at least 2, got {n}")));
        }
        let check_len = |what: &str, len: usize| {
            if len == n {
                Ok(())
            } else {
                Err(usage(format!("{what} has length {len}, expected {n}")))
            }
        };
        let check_square = |what: &str, rows: &[Vec<f64>]| {
            check_len(what, rows.len())?;
            rows.iter().try_for_each(|r| check_len(what, r.len()))
        };
        match (&self.cone, &self.center) {
            (ConeSpec::Standard | ConeSpec::Matrix { .. }, _) => {}
            (_, None) => return Err(usage("this cone kind requires a center")),
            (_, Some(c)) => check_len("center", c.len())?,
        }
        match &self.cone {
            ConeSpec::Axis { index } if !(1..=n).contains(index) => {
                return Err(usage(format!("axis index {index} is outside 1..={n}")));
            }
            ConeSpec::Custom { normal } => check_len("normal", normal.len())?,
            ConeSpec::Matrix { q, axis_hint } => {
                check_square("cone matrix", q)?;
                if let Some(h) = axis_hint {
                    check_len("axis hint", h.len())?;
                }
            }
            _ => {}
        }
        if !matches!(
            self.cone,
            ConeSpec::SphereTangent | ConeSpec::Standard | ConeSpec::Matrix { .. }
        ) {
            let c = self.center.as_deref().unwrap_or_default();
            if c.iter().any(|v| v.is_nan() || *v <= 0.0) {
                return Err(usage("Dikin center entries must be positive"));
            }
        }
        if let Some(a) = &self.system {
            check_square("system", a)?;
        }
        if let Some(points) = &self.initial_points {
            points
                .iter()
                .try_for_each(|p| check_len("initial point", p.len()))?;
        }
        let o = &self.options;
        if o.samples == 0 {
            return Err(usage("samples must be at least 1"));
        }
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(o.step) || !positive(o.horizon) {
            return Err(usage("step and horizon must be positive"));
        }
        if o.tol.is_some_and(|t| t.is_nan() || t < 0.0) {
            return Err(usage("tol must be nonnegative"));
        }
        if o.scan.count == 0
            || !o.scan.min.is_finite()
            || !o.scan.max.is_finite()
            || o.scan.min > o.scan.max
        {
            return Err(usage("scan needs count ≥ 1 and min ≤ max"));
        }
        Ok(())
    }

    pub fn resolve_cone(&self) -> Result<ResolvedCone, CliError> {
        let n = self.dimension;
        let center = || self.center.as_deref().unwrap_or_default();
        let construction = match &self.cone {
            ConeSpec::Axis { index } => Some(construct_axis(center(), index - 1)?),
            ConeSpec::Ones => Some(construct_ones(center())?),
            ConeSpec::Custom { normal } => {
                let ed = DikinEllipsoid::from_slice(center())?;
                let plane = Hyperplane::through(DVector::from_column_slice(normal), ed.center())?;
                Some(construct_general(&ed, &plane)?)
            }
            ConeSpec::SphereTangent => Some(construct_tangent_sphere(center())?),
            ConeSpec::Standard | ConeSpec::Matrix { .. } => None,
        };
        let cone = match (&construction, &self.cone) {
            (Some(cc), _) => cc.to_cone()?,
            (None, ConeSpec::Matrix { q, axis_hint }) => LorenzCone::homogeneous(
                matrix_from_rows(q)?,
                axis_hint.as_deref().map(DVector::from_column_slice),
            )?,
            _ => LorenzCone::standard(n)?,
        };
        Ok(ResolvedCone { construction, cone })
    }

    pub fn system(&self) -> Result<LinearSystem, CliError> {
        let rows = self
            .system
            .as_ref()
            .ok_or_else(|| usage("this command requires a system matrix"))?;
        Ok(LinearSystem::new(matrix_from_rows(rows)?)?)
    }
}

pub(crate) fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    crate::linalg::matrix_to_rows(m)
}
