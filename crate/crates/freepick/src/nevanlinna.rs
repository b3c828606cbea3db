//! Linear-fractional parametrization of all solutions.
//!
//! From the same certificate data as the isometry step, let `N2` be the span
//! of the `p` columns and `N1` the span of the `q` columns inside
//! `L1 = C (+) C^(J L)`, with orthocomplements `M2` and `M1`. The colligation
//! `V` maps `N2` isometrically onto `N1`, so
//!
//! `(m1, m2, n2) -> (m2, m1, V n2)`
//!
//! is a unitary from `M1 (+) M2 (+) N2` to `M2 (+) M1 (+) N1`. Reading its
//! domain as `C (+) M1 (+) C^(J L)` and codomain as `C (+) M2 (+) C^(J L)`
//! gives a colligation with a block transfer function `G`; every solution of
//! the interpolation problem is
//!
//! `phi = G11 + G12 Theta (I - G22 Theta)^(-1) G21`
//!
//! for a parameter `Theta` in the unit ball, and conversely. `Theta = 0`
//! picks the central solution `G11`.
//!
//! The subspace bases are pinned by the deterministic phase convention of
//! the numerics kernel; a different basis choice reparametrizes `Theta` by
//! fixed unitaries, so tests compare values of `phi`, never entries of `G`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::AlgebraBasis;
use crate::certificate::{CertError, GramCertificate};
use crate::freepoly::{FreePoly, MatrixTuple, PolyError, PolyMatrix, TupleEvaluator};
use crate::numerics::{
    cx, kron_id_left, op_norm, orth_complement, orth_range, unitary_completion, CMat, NumError,
};
use crate::realization::{gram_columns, Realization, RealizeError};
use crate::tol::Tolerances;

#[derive(Debug, Error)]
pub enum NevError {
    #[error("evaluation point lies outside the domain: ||delta|| = {0}")]
    OutsideDomain(f64),
    #[error("parameter is not contractive: ||Theta|| = {0}")]
    ThetaTooLarge(f64),
    #[error("parameter has wrong shape: expected {expected} rows, got {got}")]
    ThetaShape { expected: usize, got: usize },
    #[error("the feedback system is singular at this point")]
    SingularFeedback,
    #[error("the two column spans have different dimensions: {0} vs {1}")]
    SpanMismatch(usize, usize),
    #[error("assembled map is not unitary: defect {0}")]
    NotUnitary(f64),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Cert(#[from] CertError),
    #[error(transparent)]
    Realize(#[from] RealizeError),
}

/// The assembled parametrization data.
#[derive(Debug, Clone)]
pub struct NevanlinnaData {
    delta: PolyMatrix,
    j_size: usize,
    l_dim: usize,
    /// Dimension of the parameter spaces `M1` and `M2`.
    m_dim: usize,
    /// Orthonormal bases inside `L1 = C (+) C^(J L)`.
    b_n2: CMat,
    b_n1: CMat,
    b_m2: CMat,
    b_m1: CMat,
    /// Unitary colligation of `G` on `(C (+) M_in) (+) C^(J L)`.
    u: CMat,
}

/// Parameter for the linear-fractional map: a function on the domain with
/// values of shape `m_dim x m_dim` and norm at most one.
pub enum Theta {
    /// The central choice.
    Zero,
    /// A constant contraction.
    Constant(CMat),
    /// A scalar inner-ball function applied as a multiple of the identity.
    Scalar(Realization),
}

impl Theta {
    fn value(&self, data: &NevanlinnaData, x: &MatrixTuple) -> Result<CMat, NevError> {
        let m = x.size();
        let md = data.m_dim;
        match self {
            Theta::Zero => Ok(CMat::zeros(md * m, md * m)),
            Theta::Constant(c) => {
                if c.nrows() != md || c.ncols() != md {
                    return Err(NevError::ThetaShape {
                        expected: md,
                        got: c.nrows(),
                    });
                }
                Ok(c.kronecker(&CMat::identity(m, m)))
            }
            Theta::Scalar(r) => {
                let v = r.eval(x)?;
                Ok(kron_id_left(md, &v))
            }
        }
    }
}

/// Builds the parametrization from a certificate.
pub fn build_parametrization(
    basis: &AlgebraBasis,
    delta: &PolyMatrix,
    p0: &FreePoly,
    cert: &GramCertificate,
    tol: &Tolerances,
) -> Result<NevanlinnaData, NevError> {
    let (p, q) = gram_columns(basis, delta, p0, cert)?;
    let v = unitary_completion(&p, &q, tol)?;

    let b_n2 = orth_range(&p, tol);
    let b_n1 = orth_range(&q, tol);
    if b_n2.ncols() != b_n1.ncols() {
        return Err(NevError::SpanMismatch(b_n2.ncols(), b_n1.ncols()));
    }
    let b_m2 = orth_complement(&b_n2, tol)?;
    let b_m1 = orth_complement(&b_n1, tol)?;

    let jl = cert.j_size * cert.n0;
    let l1 = 1 + jl;
    let m_dim = l1 - b_n2.ncols();

    // project onto N2, push through V; the M2 component is read off directly
    let proj_n2 = &b_n2 * b_n2.adjoint();
    let t = &v * proj_n2;

    let dom = 1 + m_dim + jl;
    let mut u = CMat::zeros(dom, dom);
    // columns carrying L1 input (the scalar slot and the internal slots)
    let l1_cols: Vec<(usize, usize)> = std::iter::once((0usize, 0usize))
        .chain((0..jl).map(|s| (1 + s, 1 + m_dim + s)))
        .collect();
    for &(l1_idx, col) in &l1_cols {
        // out c'
        u[(0, col)] = t[(0, l1_idx)];
        // out b: coordinates of the M2 component
        for r in 0..m_dim {
            u[(1 + r, col)] = b_m2[(l1_idx, r)].conj();
        }
        // out h'
        for s in 0..jl {
            u[(1 + m_dim + s, col)] = t[(1 + s, l1_idx)];
        }
    }
    // columns carrying the M1 parameter input
    for c in 0..m_dim {
        u[(0, 1 + c)] = b_m1[(0, c)];
        for s in 0..jl {
            u[(1 + m_dim + s, 1 + c)] = b_m1[(1 + s, c)];
        }
    }

    let defect = (u.adjoint() * &u - CMat::identity(dom, dom)).norm();
    if defect > tol.unitary {
        return Err(NevError::NotUnitary(defect));
    }

    Ok(NevanlinnaData {
        delta: delta.clone(),
        j_size: cert.j_size,
        l_dim: cert.n0,
        m_dim,
        b_n2,
        b_n1,
        b_m2,
        b_m1,
        u,
    })
}

impl NevanlinnaData {
    pub fn m_dim(&self) -> usize {
        self.m_dim
    }

    pub fn l_dim(&self) -> usize {
        self.l_dim
    }

    pub fn unitary(&self) -> &CMat {
        &self.u
    }

    pub fn basis_n2(&self) -> &CMat {
        &self.b_n2
    }

    pub fn basis_n1(&self) -> &CMat {
        &self.b_n1
    }

    /// Evaluates the four blocks of `G` at a point of the domain.
    pub fn eval_blocks(&self, x: &MatrixTuple) -> Result<GBlocks, NevError> {
        let ev = TupleEvaluator::new(x);
        let dval = self.delta.eval_with(&ev)?;
        let dnorm = op_norm(&dval)?;
        if dnorm >= 1.0 {
            return Err(NevError::OutsideDomain(dnorm));
        }
        let m = x.size();
        let jl = self.j_size * self.l_dim;
        let io = 1 + self.m_dim;

        let a_u = self.u.view((0, 0), (io, io)).into_owned();
        let b_u = self.u.view((0, io), (io, jl)).into_owned();
        let c_u = self.u.view((io, 0), (jl, io)).into_owned();
        let d_u = self.u.view((io, io), (jl, jl)).into_owned();

        let big_delta = kron_id_left(self.l_dim, &dval);
        let id_m = CMat::identity(m, m);
        let sys = CMat::identity(jl * m, jl * m) - d_u.kronecker(&id_m) * &big_delta;
        let y = sys
            .lu()
            .solve(&c_u.kronecker(&id_m))
            .ok_or(NevError::SingularFeedback)?;
        let g = a_u.kronecker(&id_m) + b_u.kronecker(&id_m) * (big_delta * y);

        Ok(GBlocks {
            g11: g.view((0, 0), (m, m)).into_owned(),
            g12: g.view((0, m), (m, self.m_dim * m)).into_owned(),
            g21: g.view((m, 0), (self.m_dim * m, m)).into_owned(),
            g22: g
                .view((m, m), (self.m_dim * m, self.m_dim * m))
                .into_owned(),
        })
    }

    /// Value of the parametrized solution at `x`.
    pub fn lft(&self, theta: &Theta, x: &MatrixTuple) -> Result<CMat, NevError> {
        let tv = theta.value(self, x)?;
        self.lft_value(&tv, x)
    }

    /// Same as [`NevanlinnaData::lft`] with a black-box parameter evaluator.
    pub fn lft_with<F>(&self, theta: F, x: &MatrixTuple) -> Result<CMat, NevError>
    where
        F: Fn(&MatrixTuple) -> Result<CMat, NevError>,
    {
        let tv = theta(x)?;
        self.lft_value(&tv, x)
    }

    fn lft_value(&self, theta_val: &CMat, x: &MatrixTuple) -> Result<CMat, NevError> {
        let blocks = self.eval_blocks(x)?;
        if self.m_dim == 0 {
            return Ok(blocks.g11);
        }
        let m = x.size();
        let expected = self.m_dim * m;
        if theta_val.nrows() != expected || theta_val.ncols() != expected {
            return Err(NevError::ThetaShape {
                expected,
                got: theta_val.nrows(),
            });
        }
        let tnorm = op_norm(theta_val)?;
        if tnorm > 1.0 + 1e-9 {
            return Err(NevError::ThetaTooLarge(tnorm));
        }
        let sys = CMat::identity(expected, expected) - &blocks.g22 * theta_val;
        let inner = sys
            .lu()
            .solve(&blocks.g21)
            .ok_or(NevError::SingularFeedback)?;
        Ok(&blocks.g11 + &blocks.g12 * (theta_val * inner))
    }
}

/// The four evaluated blocks of the open-loop function `G`.
pub struct GBlocks {
    pub g11: CMat,
    pub g12: CMat,
    pub g21: CMat,
    pub g22: CMat,
}

fn cmat_to_pairs(m: &CMat) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            out.push([m[(r, c)].re, m[(r, c)].im]);
        }
    }
    out
}

fn pairs_to_cmat(rows: usize, cols: usize, v: &[[f64; 2]]) -> CMat {
    CMat::from_fn(rows, cols, |r, c| {
        let [re, im] = v[r * cols + c];
        cx(re, im)
    })
}

/// JSON shape of a stored parametrization.
#[derive(Serialize, Deserialize)]
pub struct ParametrizationFile {
    pub d: usize,
    #[serde(rename = "J")]
    pub j: usize,
    #[serde(rename = "L_dim")]
    pub l_dim: usize,
    pub m_dim: usize,
    pub delta: Vec<Vec<String>>,
    /// Subspace bases inside `C (+) C^(J L)`, row-major complex pairs.
    pub basis_n2: Vec<[f64; 2]>,
    pub basis_n1: Vec<[f64; 2]>,
    pub basis_m2: Vec<[f64; 2]>,
    pub basis_m1: Vec<[f64; 2]>,
    /// The unitary of the parametrization colligation.
    pub unitary: Vec<[f64; 2]>,
}

impl ParametrizationFile {
    pub fn from_data(data: &NevanlinnaData) -> Self {
        ParametrizationFile {
            d: data.delta.dims(),
            j: data.j_size,
            l_dim: data.l_dim,
            m_dim: data.m_dim,
            delta: data.delta.to_grid(),
            basis_n2: cmat_to_pairs(&data.b_n2),
            basis_n1: cmat_to_pairs(&data.b_n1),
            basis_m2: cmat_to_pairs(&data.b_m2),
            basis_m1: cmat_to_pairs(&data.b_m1),
            unitary: cmat_to_pairs(&data.u),
        }
    }

    pub fn into_data(self) -> Result<NevanlinnaData, PolyError> {
        let delta = PolyMatrix::from_grid(self.d, &self.delta)?;
        let jl = self.j * self.l_dim;
        let l1 = 1 + jl;
        let rank = l1 - self.m_dim;
        let dom = 1 + self.m_dim + jl;
        Ok(NevanlinnaData {
            j_size: self.j,
            l_dim: self.l_dim,
            m_dim: self.m_dim,
            b_n2: pairs_to_cmat(l1, rank, &self.basis_n2),
            b_n1: pairs_to_cmat(l1, rank, &self.basis_n1),
            b_m2: pairs_to_cmat(l1, self.m_dim, &self.basis_m2),
            b_m1: pairs_to_cmat(l1, self.m_dim, &self.basis_m1),
            u: pairs_to_cmat(dom, dom, &self.unitary),
            delta,
        })
    }
}
