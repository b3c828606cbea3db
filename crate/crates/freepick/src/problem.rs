//! Problem files, point files, and machine-readable reports.
//!
//! All files are UTF-8 JSON with complex numbers as `[re, im]` pairs and
//! matrices as flat row-major arrays of those pairs (square sizes are
//! recovered from the length). A problem file holds the variable count, the
//! domain matrix as grammar strings, and one or more interpolation points;
//! several points fold into one block-diagonal node before solving.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::freepoly::{eval, FreePoly, MatrixTuple, PolyError, PolyMatrix};
use crate::numerics::{cx, CMat};

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("problem file: {0}")]
    Format(String),
    #[error("matrix entry list of length {0} is not a perfect square")]
    NotSquare(usize),
    #[error("point {index}: {message}")]
    BadPoint { index: usize, message: String },
    #[error("constraint polynomial '{poly}' does not vanish at point {index}: norm {norm:.3e}")]
    GammaViolated {
        poly: String,
        index: usize,
        norm: f64,
    },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Row-major complex matrix encoding.
pub type MatrixJson = Vec<[f64; 2]>;

pub fn matrix_to_json(m: &CMat) -> MatrixJson {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            out.push([m[(r, c)].re, m[(r, c)].im]);
        }
    }
    out
}

pub fn matrix_from_json(v: &MatrixJson) -> Result<CMat, ProblemError> {
    let len = v.len();
    if len == 0 {
        return Err(ProblemError::NotSquare(0));
    }
    let n = (len as f64).sqrt().round() as usize;
    if n * n != len {
        return Err(ProblemError::NotSquare(len));
    }
    Ok(CMat::from_fn(n, n, |r, c| {
        let [re, im] = v[r * n + c];
        cx(re, im)
    }))
}

/// One interpolation point: a tuple and its target value.
#[derive(Serialize, Deserialize)]
pub struct PointJson {
    #[serde(rename = "X")]
    pub x: Vec<MatrixJson>,
    #[serde(rename = "W")]
    pub w: MatrixJson,
}

/// On-disk problem description.
#[derive(Serialize, Deserialize)]
pub struct ProblemFile {
    pub d: usize,
    /// Grammar strings, row-major grid.
    pub delta: Vec<Vec<String>>,
    /// Optional variety constraints validated against every point.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gamma: Vec<String>,
    pub points: Vec<PointJson>,
}

/// A parsed problem: domain matrix, folded node, folded target.
pub struct PickProblem {
    pub dims: usize,
    pub delta: PolyMatrix,
    pub node: MatrixTuple,
    pub target: CMat,
    /// Number of points folded into the node.
    pub point_count: usize,
    /// Parsed variety constraints, if any.
    pub gamma: Vec<FreePoly>,
}

impl PickProblem {
    pub fn from_file(file: &ProblemFile) -> Result<Self, ProblemError> {
        if file.d == 0 {
            return Err(ProblemError::Format("d must be positive".into()));
        }
        if file.points.is_empty() {
            return Err(ProblemError::Format(
                "at least one point is required".into(),
            ));
        }
        let delta = PolyMatrix::from_grid(file.d, &file.delta)?;
        if !delta.is_square() || delta.rows() == 0 {
            return Err(ProblemError::Format(
                "delta must be square and nonempty".into(),
            ));
        }
        let gamma: Vec<FreePoly> = file
            .gamma
            .iter()
            .map(|s| FreePoly::parse(s, file.d).map_err(PolyError::from))
            .collect::<Result<_, _>>()?;

        let mut node: Option<MatrixTuple> = None;
        let mut target: Option<CMat> = None;
        for (index, point) in file.points.iter().enumerate() {
            if point.x.len() != file.d {
                return Err(ProblemError::BadPoint {
                    index,
                    message: format!("expected {} matrices, got {}", file.d, point.x.len()),
                });
            }
            let mats: Vec<CMat> = point
                .x
                .iter()
                .map(matrix_from_json)
                .collect::<Result<_, _>>()?;
            let tuple = MatrixTuple::new(mats).map_err(|e| ProblemError::BadPoint {
                index,
                message: e.to_string(),
            })?;
            let w = matrix_from_json(&point.w)?;
            if w.nrows() != tuple.size() {
                return Err(ProblemError::BadPoint {
                    index,
                    message: format!(
                        "target size {} does not match tuple size {}",
                        w.nrows(),
                        tuple.size()
                    ),
                });
            }
            for g in &gamma {
                let v = eval(g, &tuple)?;
                let norm = v.norm();
                if norm > 1e-8 * v.nrows() as f64 {
                    return Err(ProblemError::GammaViolated {
                        poly: g.to_string(),
                        index,
                        norm,
                    });
                }
            }
            node = Some(match node {
                None => tuple,
                Some(acc) => acc.direct_sum(&tuple)?,
            });
            target = Some(match target {
                None => w,
                Some(acc) => crate::numerics::direct_sum(&acc, &w),
            });
        }
        Ok(PickProblem {
            dims: file.d,
            delta,
            node: node.expect("nonempty"),
            target: target.expect("nonempty"),
            point_count: file.points.len(),
            gamma,
        })
    }

    pub fn parse_str(text: &str) -> Result<Self, ProblemError> {
        let file: ProblemFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }
}

/// Point file for evaluation commands.
#[derive(Serialize, Deserialize)]
pub struct PointFile {
    #[serde(rename = "X")]
    pub x: Vec<MatrixJson>,
}

impl PointFile {
    pub fn to_tuple(&self) -> Result<MatrixTuple, ProblemError> {
        let mats: Vec<CMat> = self
            .x
            .iter()
            .map(matrix_from_json)
            .collect::<Result<_, _>>()?;
        MatrixTuple::new(mats).map_err(ProblemError::Poly)
    }

    pub fn from_tuple(x: &MatrixTuple) -> Self {
        PointFile {
            x: x.mats().iter().map(matrix_to_json).collect(),
        }
    }
}

/// Scalar oracle data file.
#[derive(Serialize, Deserialize)]
pub struct OracleDataFile {
    pub z: Vec<[f64; 2]>,
    pub w: Vec<[f64; 2]>,
}

/// Residual section of a report.
#[derive(Serialize, Deserialize, Default, Clone)]
pub struct ReportResiduals {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub membership: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sdp_affine: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate_at_node: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gram_mismatch: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interpolation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unitarity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification_max: Option<f64>,
}

/// Norm section of a report.
#[derive(Serialize, Deserialize, Default, Clone)]
pub struct ReportNorms {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_at_node: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interpolant_at_node: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sup_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimal_norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extension_scale: Option<f64>,
}

/// A variety point witnessing a norm violation.
#[derive(Serialize, Deserialize, Clone)]
pub struct Witness {
    pub size: usize,
    pub interpolant_norm: f64,
    pub delta_norm: f64,
    pub x: Vec<MatrixJson>,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct Versions {
    pub name: String,
    pub version: String,
}

impl Default for Versions {
    fn default() -> Self {
        Versions {
            name: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// Machine-readable outcome of a command.
#[derive(Serialize, Deserialize, Clone)]
pub struct Report {
    pub command: String,
    pub status: String,
    pub exit_code: i32,
    pub seed: u64,
    pub residuals: ReportResiduals,
    pub norms: ReportNorms,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Witness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub residual_curve: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub finite_stage: Option<usize>,
    pub versions: Versions,
}

impl Report {
    pub fn new(command: &str, status: &str, exit_code: i32, seed: u64) -> Self {
        Report {
            command: command.to_string(),
            status: status.to_string(),
            exit_code,
            seed,
            residuals: ReportResiduals::default(),
            norms: ReportNorms::default(),
            counterexample: None,
            residual_curve: Vec::new(),
            finite_stage: None,
            versions: Versions::default(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}
