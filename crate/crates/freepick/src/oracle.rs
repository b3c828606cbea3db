//! Classical one-variable Nevanlinna-Pick reference solver.
//!
//! Used as an independent cross-check for diagonal scalar data: the Pick
//! matrix `[(1 - conj(w_i) w_j) / (1 - conj(z_i) z_j)]` decides solvability,
//! and the Schur recursion produces an interpolant as a chain of nested
//! Moebius transforms. The recursion is intentionally a different algorithm
//! family from the semidefinite route, so agreement between the two is
//! meaningful evidence.

use thiserror::Error;

use crate::numerics::{cx, min_eig_herm, CMat, NumError, C64};
use crate::tol::Tolerances;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("interpolation nodes must be distinct")]
    CoincidentNodes,
    #[error("node {0} lies outside the open unit disk")]
    NodeOutsideDisk(usize),
    #[error("empty data")]
    Empty,
    #[error(transparent)]
    Num(#[from] NumError),
}

/// Scalar disk interpolation data.
#[derive(Debug, Clone)]
pub struct ScalarPickData {
    pub nodes: Vec<C64>,
    pub targets: Vec<C64>,
}

impl ScalarPickData {
    pub fn new(nodes: Vec<C64>, targets: Vec<C64>) -> Result<Self, OracleError> {
        if nodes.is_empty() || nodes.len() != targets.len() {
            return Err(OracleError::Empty);
        }
        for (i, z) in nodes.iter().enumerate() {
            if z.norm() >= 1.0 {
                return Err(OracleError::NodeOutsideDisk(i));
            }
        }
        for i in 0..nodes.len() {
            for j in (i + 1)..nodes.len() {
                if (nodes[i] - nodes[j]).norm() < 1e-14 {
                    return Err(OracleError::CoincidentNodes);
                }
            }
        }
        Ok(ScalarPickData { nodes, targets })
    }
}

/// The Pick matrix `[(1 - conj(w_i) w_j) / (1 - conj(z_i) z_j)]`.
pub fn pick_matrix(data: &ScalarPickData) -> CMat {
    let n = data.nodes.len();
    CMat::from_fn(n, n, |i, j| {
        let num = cx(1.0, 0.0) - data.targets[i].conj() * data.targets[j];
        let den = cx(1.0, 0.0) - data.nodes[i].conj() * data.nodes[j];
        num / den
    })
}

/// Positive semidefiniteness of the Pick matrix, with tolerance `-1e-8`.
pub fn pick_solvable(data: &ScalarPickData, tol: &Tolerances) -> Result<bool, OracleError> {
    let p = pick_matrix(data);
    Ok(min_eig_herm(&p, tol)? >= -1e-8)
}

/// Rational Schur-class interpolant stored as nested Moebius coefficients:
/// working outward, `f_j = (b_j f_(j+1) + g_j) / (1 + conj(g_j) b_j f_(j+1))`
/// with `b_j` the Blaschke factor of node `j` and `f` beyond the last stage
/// constant.
#[derive(Debug, Clone)]
pub struct SchurFunction {
    stages: Vec<(C64, C64)>, // (node, parameter)
    tail: C64,
}

fn blaschke(z: C64, at: C64) -> C64 {
    (z - at) / (cx(1.0, 0.0) - at.conj() * z)
}

impl SchurFunction {
    pub fn eval(&self, z: C64) -> C64 {
        let mut f = self.tail;
        for &(node, gamma) in self.stages.iter().rev() {
            let b = blaschke(z, node) * f;
            f = (b + gamma) / (cx(1.0, 0.0) + gamma.conj() * b);
        }
        f
    }

    pub fn stages(&self) -> &[(C64, C64)] {
        &self.stages
    }
}

/// Outcome of the Schur recursion.
#[derive(Debug, Clone)]
pub enum SchurOutcome {
    Solvable(SchurFunction),
    Unsolvable,
}

/// Schur-Nevanlinna recursion. Succeeds exactly when the data admits a
/// Schur-class interpolant; boundary parameters of modulus one force the
/// remaining targets to match a constant.
pub fn schur_solve(data: &ScalarPickData) -> Result<SchurOutcome, OracleError> {
    let mut nodes = data.nodes.clone();
    let mut targets = data.targets.clone();
    let mut stages: Vec<(C64, C64)> = Vec::new();

    loop {
        let gamma = targets[0];
        let node = nodes[0];
        let modulus = gamma.norm();
        if modulus > 1.0 + 1e-12 {
            return Ok(SchurOutcome::Unsolvable);
        }
        if modulus >= 1.0 - 1e-12 {
            // unimodular stage: the function is frozen to this constant
            let consistent = targets.iter().all(|w| (w - gamma).norm() <= 1e-10);
            return if consistent {
                Ok(SchurOutcome::Solvable(SchurFunction {
                    stages,
                    tail: gamma,
                }))
            } else {
                Ok(SchurOutcome::Unsolvable)
            };
        }
        if nodes.len() == 1 {
            return Ok(SchurOutcome::Solvable(SchurFunction {
                stages,
                tail: gamma,
            }));
        }
        // peel one interpolation condition off
        let mut next_nodes = Vec::with_capacity(nodes.len() - 1);
        let mut next_targets = Vec::with_capacity(nodes.len() - 1);
        for i in 1..nodes.len() {
            let z = nodes[i];
            let w = targets[i];
            let moved = (w - gamma) / (cx(1.0, 0.0) - gamma.conj() * w);
            let b = blaschke(z, node);
            next_nodes.push(z);
            next_targets.push(moved / b);
        }
        stages.push((node, gamma));
        nodes = next_nodes;
        targets = next_targets;
    }
}
