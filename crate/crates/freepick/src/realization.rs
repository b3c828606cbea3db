//! Transfer-function realizations from feasibility certificates.
//!
//! A certificate pairs two column families with equal Gram matrices: for
//! every coordinate `k` and basis vector `v` of the node space,
//!
//! `p_(k,v) = pick_k [ v ; (Delta u)(L) v ]`   and
//! `q_(k,v) = pick_k [ p0(L) v ; u(L) v ]`,
//!
//! where `Delta` applies `delta(L)` on each multiplicity slot. Completing
//! the isometry `p -> q` to a unitary `V = [[A, B], [C, D]]` on
//! `C (+) C^(J L)` yields a colligation whose transfer function
//!
//! `phi(x) = A + B (delta(x) (x) 1) [1 - D (delta(x) (x) 1)]^(-1) C`
//!
//! lies in the closed unit ball on the domain and interpolates the node.
//! Internal coordinates are ordered `(slot i, delta row j, matrix row)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::AlgebraBasis;
use crate::certificate::{CertError, GramCertificate};
use crate::freepoly::{FreePoly, MatrixTuple, PolyError, PolyMatrix, TupleEvaluator};
use crate::numerics::{cx, kron_id_left, op_norm, unitary_completion, CMat, NumError, C64};
use crate::tol::Tolerances;

#[derive(Debug, Error)]
pub enum RealizeError {
    #[error("evaluation point lies outside the domain: ||delta|| = {0}")]
    OutsideDomain(f64),
    #[error("block pair tuple leaves the domain: ||delta|| = {0}; rescale the direction")]
    BlockPairOutsideDomain(f64),
    #[error("resolvent solve failed unexpectedly")]
    SingularResolvent,
    #[error("certificate residual too large for the isometry step: {0}")]
    CertificateResidual(f64),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Cert(#[from] CertError),
}

/// Unitary colligation over `C (+) C^(J * L)` together with its domain matrix.
#[derive(Debug, Clone)]
pub struct Realization {
    delta: PolyMatrix,
    j_size: usize,
    /// Multiplicity space dimension (one slot per certificate factor row).
    l_dim: usize,
    /// The full `(1 + J L) x (1 + J L)` unitary.
    v: CMat,
}

/// The two stacked column families of the isometry step, regrouped so that
/// columns run over `(coordinate, basis vector)` pairs.
pub(crate) fn gram_columns(
    basis: &AlgebraBasis,
    delta: &PolyMatrix,
    p0: &FreePoly,
    cert: &GramCertificate,
) -> Result<(CMat, CMat), RealizeError> {
    let node = basis.tuple();
    let n = node.size();
    let ev = TupleEvaluator::new(node);
    let jl = cert.j_size * cert.n0;

    let u_stack = cert.eval_u_stack(&ev)?; // (JL n) x n, blocks (slot, row)
    let dval = delta.eval_with(&ev)?;
    let big_delta = kron_id_left(cert.n0, &dval);
    let du = &big_delta * &u_stack;
    let p0v = ev.eval(p0)?;

    // stack [top; body] with slot-major rows, then regroup columns over (k, c)
    let rows = 1 + jl;
    let mut p = CMat::zeros(rows, n * n);
    let mut q = CMat::zeros(rows, n * n);
    for k in 0..n {
        for c in 0..n {
            let col = k * n + c;
            p[(0, col)] = if k == c { cx(1.0, 0.0) } else { cx(0.0, 0.0) };
            q[(0, col)] = p0v[(k, c)];
            for s in 0..jl {
                p[(1 + s, col)] = du[(s * n + k, c)];
                q[(1 + s, col)] = u_stack[(s * n + k, c)];
            }
        }
    }
    Ok((p, q))
}

/// Builds the colligation from a verified certificate: assemble the two
/// column families, complete their intertwiner to a unitary, and split it.
pub fn lurking_isometry(
    basis: &AlgebraBasis,
    delta: &PolyMatrix,
    p0: &FreePoly,
    cert: &GramCertificate,
    tol: &Tolerances,
) -> Result<Realization, RealizeError> {
    if cert.node_residual > 1e-8 * (basis.size() as f64).max(1.0) {
        return Err(RealizeError::CertificateResidual(cert.node_residual));
    }
    let (p, q) = gram_columns(basis, delta, p0, cert)?;
    let v = unitary_completion(&p, &q, tol)?;
    Ok(Realization {
        delta: delta.clone(),
        j_size: cert.j_size,
        l_dim: cert.n0,
        v,
    })
}

impl Realization {
    pub fn from_parts(delta: PolyMatrix, l_dim: usize, v: CMat) -> Self {
        let j_size = delta.rows();
        assert_eq!(v.nrows(), 1 + j_size * l_dim);
        assert_eq!(v.ncols(), 1 + j_size * l_dim);
        Realization {
            delta,
            j_size,
            l_dim,
            v,
        }
    }

    pub fn delta(&self) -> &PolyMatrix {
        &self.delta
    }

    pub fn l_dim(&self) -> usize {
        self.l_dim
    }

    pub fn j_size(&self) -> usize {
        self.j_size
    }

    pub fn colligation(&self) -> &CMat {
        &self.v
    }

    /// `|| V* V - I ||`, the unitarity defect.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.v.nrows();
        let d1 = (self.v.adjoint() * &self.v - CMat::identity(n, n)).norm();
        let d2 = (&self.v * self.v.adjoint() - CMat::identity(n, n)).norm();
        d1.max(d2)
    }

    fn block_a(&self) -> C64 {
        self.v[(0, 0)]
    }

    fn block_b(&self) -> CMat {
        let jl = self.j_size * self.l_dim;
        self.v.view((0, 1), (1, jl)).into_owned()
    }

    fn block_c(&self) -> CMat {
        let jl = self.j_size * self.l_dim;
        self.v.view((1, 0), (jl, 1)).into_owned()
    }

    fn block_d(&self) -> CMat {
        let jl = self.j_size * self.l_dim;
        self.v.view((1, 1), (jl, jl)).into_owned()
    }

    /// Transfer-function value at a tuple strictly inside the domain.
    pub fn eval(&self, x: &MatrixTuple) -> Result<CMat, RealizeError> {
        let ev = TupleEvaluator::new(x);
        let dval = self.delta.eval_with(&ev)?;
        let dnorm = op_norm(&dval)?;
        if dnorm >= 1.0 {
            return Err(RealizeError::OutsideDomain(dnorm));
        }
        let m = x.size();
        let jl = self.j_size * self.l_dim;
        let big_delta = kron_id_left(self.l_dim, &dval); // (JL m) square
        let dd = self.block_d().kronecker(&CMat::identity(m, m));
        let cc = self.block_c().kronecker(&CMat::identity(m, m));
        let bb = self.block_b().kronecker(&CMat::identity(m, m));
        let sys = CMat::identity(jl * m, jl * m) - &dd * &big_delta;
        let y = sys.lu().solve(&cc).ok_or(RealizeError::SingularResolvent)?;
        let phi = CMat::identity(m, m).map(|z| z * self.block_a()) + bb * (big_delta * y);
        Ok(phi)
    }

    /// Derivative at `x` in direction `h`: the corner block of the value on
    /// the doubled tuple `[[x, h], [0, x]]`, which must stay in the domain.
    pub fn derivative(&self, x: &MatrixTuple, h: &MatrixTuple) -> Result<CMat, RealizeError> {
        let pair = x.jordan_pair(h)?;
        let ev = TupleEvaluator::new(&pair);
        let dval = self.delta.eval_with(&ev)?;
        let dnorm = op_norm(&dval)?;
        if dnorm >= 1.0 {
            return Err(RealizeError::BlockPairOutsideDomain(dnorm));
        }
        let big = self.eval(&pair)?;
        let n = x.size();
        Ok(big.view((0, n), (n, n)).into_owned())
    }
}

fn block_to_pairs(m: &CMat) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for row in 0..m.nrows() {
        for col in 0..m.ncols() {
            let z = m[(row, col)];
            out.push([z.re, z.im]);
        }
    }
    out
}

/// JSON shape of a stored realization: the domain matrix as grammar strings
/// plus the four colligation blocks as row-major complex pairs.
#[derive(Serialize, Deserialize)]
pub struct RealizationFile {
    pub d: usize,
    #[serde(rename = "J")]
    pub j: usize,
    #[serde(rename = "L_dim")]
    pub l_dim: usize,
    /// Node size of the problem this realization solved.
    pub n: usize,
    /// Grammar strings, row major.
    pub delta: Vec<Vec<String>>,
    #[serde(rename = "A")]
    pub a: Vec<[f64; 2]>,
    #[serde(rename = "B")]
    pub b: Vec<[f64; 2]>,
    #[serde(rename = "C")]
    pub c: Vec<[f64; 2]>,
    #[serde(rename = "D")]
    pub d_block: Vec<[f64; 2]>,
}

impl RealizationFile {
    pub fn from_realization(r: &Realization, n: usize) -> Self {
        let jl = r.j_size() * r.l_dim();
        let v = r.colligation();
        RealizationFile {
            d: r.delta().dims(),
            j: r.j_size(),
            l_dim: r.l_dim(),
            n,
            delta: r.delta().to_grid(),
            a: vec![[v[(0, 0)].re, v[(0, 0)].im]],
            b: block_to_pairs(&v.view((0, 1), (1, jl)).into_owned()),
            c: block_to_pairs(&v.view((1, 0), (jl, 1)).into_owned()),
            d_block: block_to_pairs(&v.view((1, 1), (jl, jl)).into_owned()),
        }
    }

    pub fn into_realization(self) -> Result<Realization, PolyError> {
        let delta = PolyMatrix::from_grid(self.d, &self.delta)?;
        let jl = self.j * self.l_dim;
        let side = 1 + jl;
        let mut v = CMat::zeros(side, side);
        v[(0, 0)] = cx(self.a[0][0], self.a[0][1]);
        for col in 0..jl {
            v[(0, 1 + col)] = cx(self.b[col][0], self.b[col][1]);
            v[(1 + col, 0)] = cx(self.c[col][0], self.c[col][1]);
        }
        for row in 0..jl {
            for col in 0..jl {
                let [re, im] = self.d_block[row * jl + col];
                v[(1 + row, 1 + col)] = cx(re, im);
            }
        }
        Ok(Realization::from_parts(delta, self.l_dim, v))
    }
}
