use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cone::ConditionResiduals;
use crate::invariance::{InvarianceCertificate, NagumoCounterexample, ScanPoint, TrajectoryRecord};
use crate::spectral::{Inertia, SpectralReport};

use super::config::ProblemConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaneSection {
    pub normal: Vec<f64>,
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionSection {
    /// `axis`, `ones`, `general`, `tangent_sphere`, `standard` or `matrix`.
    pub kind: String,
    /// 1-based, for axis cones.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis_index: Option<usize>,
    /// Row-major cone matrix.
    pub q: Vec<Vec<f64>>,
    pub inertia: Inertia,
    pub vertex: Vec<f64>,
    /// Unit direction selecting the branch, when one is fixed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plane: Option<PlaneSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_anchor: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residuals: Option<ConditionResiduals>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FalsifierSection {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<NagumoCounterexample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardizationSection {
    /// Row-major `P̄` with `P̄ᵀQP̄ = Ĩ`.
    pub matrix: Vec<Vec<f64>>,
    pub shift: Vec<f64>,
    pub congruence_residual: f64,
    pub vertex_image: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshSection {
    pub resolution: usize,
    pub obj: String,
    pub csv: String,
    pub cone_vertices: usize,
    pub ellipsoid_vertices: usize,
    pub faces: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub config: ProblemConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<ConstructionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectralReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<InvarianceCertificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<Vec<ScanPoint>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub falsifier: Option<FalsifierSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectories: Option<Vec<TrajectoryRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub standardization: Option<StandardizationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mesh: Option<MeshSection>,
    /// Wall-clock milliseconds per phase; present only on request.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn new(command: &str, config: ProblemConfig) -> Self {
        Self {
            schema_version: super::config::SCHEMA_VERSION,
            command: command.to_string(),
            config,
            construction: None,
            spectrum: None,
            certificate: None,
            scan: None,
            falsifier: None,
            trajectories: None,
            standardization: None,
            mesh: None,
            timings: None,
        }
    }

    /// Pretty JSON. Absent options are omitted, so a `null` can only come
    /// from a non-finite number; its path is returned as the error.
    pub fn to_json(&self) -> Result<String, String> {
        let value = serde_json::to_value(self).map_err(|e| e.to_string())?;
        if let Some(path) = find_null(&value, "$") {
            return Err(path);
        }
        serde_json::to_string_pretty(&value).map_err(|e| e.to_string())
    }
}

fn find_null(v: &Value, path: &str) -> Option<String> {
    match v {
        Value::Null => Some(path.to_string()),
        Value::Array(items) => items
            .iter()
            .enumerate()
            .find_map(|(i, x)| find_null(x, &format!("{path}[{i}]"))),
        Value::Object(map) => map
            .iter()
            .find_map(|(k, x)| find_null(x, &format!("{path}.{k}"))),
        _ => None,
    }
}
