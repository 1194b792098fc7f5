//! JSON instance and result files.
//!
//! Numbers are written as shortest round-trip decimals and group elements as
//! comma-joined coordinates, so files diff cleanly and reload exactly. A
//! result file carries no clock time; equal inputs and seeds give equal
//! bytes.

use std::fs;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::engine::PartitionResult;
use crate::error::{Error, Result};
use crate::geometry::{certify_polytope, PointCloud, Tolerances};
use crate::problem::ProblemKind;
use crate::solver::SolverReport;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub dimension: usize,
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
}

impl InstanceFile {
    pub fn from_cloud(cloud: &PointCloud) -> Self {
        Self {
            dimension: cloud.dimension(),
            points: cloud.points().to_vec(),
            colors: cloud.colors().map(<[usize]>::to_vec),
            metadata: None,
        }
    }

    pub fn to_cloud(&self) -> Result<PointCloud> {
        let cloud = PointCloud::new(self.dimension, self.points.clone())?;
        match &self.colors {
            Some(c) => cloud.with_colors(c.clone()),
            None => Ok(cloud),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub kill: f64,
    pub lead: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultFile {
    pub tool_version: String,
    pub seed: u64,
    pub attempts: usize,
    pub problem: ProblemKind,
    pub parts: IndexMap<String, Vec<usize>>,
    pub weights: IndexMap<String, Vec<f64>>,
    pub vertices: IndexMap<String, Vec<f64>>,
    pub residuals: Residuals,
    pub tolerances: Tolerances,
    pub solver: SolverReport,
}

impl ResultFile {
    pub fn from_result(result: &PartitionResult) -> Self {
        let key = |g: usize| result.part_key(g);
        let n = result.group.order();
        Self {
            tool_version: TOOL_VERSION.to_string(),
            seed: result.seed,
            attempts: result.attempts,
            problem: result.kind.clone(),
            parts: (0..n).map(|g| (key(g), result.parts[g].clone())).collect(),
            weights: (0..n).map(|g| (key(g), result.weights[g].clone())).collect(),
            vertices: (0..n).map(|g| (key(g), result.vertices[g].clone())).collect(),
            residuals: Residuals {
                kill: result.certificate.residual,
                lead: result.certificate.leading_magnitude,
            },
            tolerances: result.certificate.tolerances,
            solver: SolverReport {
                trace: Vec::new(),
                ..result.report.clone()
            },
        }
    }

    /// Rebuilds the result; the certificate is recomputed from the stored
    /// vertices.
    pub fn to_result(&self) -> Result<PartitionResult> {
        let group = self.problem.group()?;
        let view = self.problem.view()?;
        let lookup = |map_name: &str, key: &str| Error::Malformed(format!("{map_name} has no entry for part {key}"));
        let mut parts = Vec::new();
        let mut weights = Vec::new();
        let mut vertices = Vec::new();
        for g in group.elements() {
            let key = g.to_string();
            parts.push(self.parts.get(&key).ok_or_else(|| lookup("parts", &key))?.clone());
            weights.push(self.weights.get(&key).ok_or_else(|| lookup("weights", &key))?.clone());
            vertices.push(self.vertices.get(&key).ok_or_else(|| lookup("vertices", &key))?.clone());
        }
        for map in [self.parts.len(), self.weights.len(), self.vertices.len()] {
            if map != group.order() {
                return Err(Error::Malformed(format!(
                    "{map} parts listed for a group of order {}",
                    group.order()
                )));
            }
        }
        let certificate = certify_polytope(&group, &vertices, self.problem.polytope_kind(), &view, self.tolerances)?;
        Ok(PartitionResult {
            kind: self.problem.clone(),
            group,
            parts,
            weights,
            vertices,
            certificate,
            report: self.solver.clone(),
            seed: self.seed,
            attempts: self.attempts,
        })
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json(value)?)?;
    Ok(())
}
