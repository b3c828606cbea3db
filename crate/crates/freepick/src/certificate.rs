//! Feasibility certificates for one-point interpolation.
//!
//! Solvability is decided through a Gram-matrix semidefinite feasibility
//! problem. The unknown is a Hermitian positive semidefinite `Q` over the
//! `N0 = J * K` column-polynomial basis functions `F_(j,k)` (basis element
//! `e_k` of the algebra placed in slot `j` of a `J`-column). Feasibility of
//!
//! `sum_{ab} Q_ab F_a(y)* [I - delta(y)* delta(x)] F_b(x)  =  1 - p0(y)* p0(x)`
//!
//! is imposed as an identity between functions on the variety of the tuple:
//! both sides are expanded over the basis `e_a(y)* e_b(x)` and the resulting
//! K^2 complex coefficients are matched. Matching only the evaluation at the
//! tuple itself would admit spurious `Q` that break the Gram equality needed
//! later for the isometry step; the coefficient identity carries exactly the
//! information of all size-preserving insertions.
//!
//! The solver is Dykstra-corrected alternating projection between the affine
//! coefficient constraint and the positive semidefinite cone. Absence of a
//! certificate after the iteration cap is reported as "undecided": floating
//! point feasibility cannot certify infeasibility.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use nalgebra::{DMatrix, DVector};

use crate::algebra::{AlgebraBasis, AlgebraError};
use crate::freepoly::{FreePoly, MatrixTuple, PolyError, PolyMatrix, TupleEvaluator};
use crate::numerics::{cx, herm_eig, op_norm, psd_project, psd_sqrt, CMat, CVec, NumError, C64};
use crate::tol::Tolerances;

#[derive(Debug, Error)]
pub enum CertError {
    #[error("the interpolation node lies outside the domain: ||delta|| = {0}")]
    NodeOutsideDomain(f64),
    #[error("delta must be square, got {0}x{1}")]
    DeltaNotSquare(usize, usize),
    #[error("sample lies outside the variety")]
    SampleOutsideVariety,
    #[error("sample lies outside the domain: ||delta|| = {0}")]
    SampleOutsideDomain(f64),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Precomputed affine description of the feasibility problem for one
/// `(tuple, delta)` pair; the target side depends only on the interpolant.
pub struct ConstraintMap {
    /// Block count of delta.
    pub j_size: usize,
    /// Dimension of the algebra.
    pub k_dim: usize,
    /// Gram basis size `J * K`.
    pub n0: usize,
    n: usize,
    /// Expansion of `delta_(i,j) e_k` over the basis, indexed `(i * J + j) * K + k`.
    mu: Vec<CVec>,
    /// Real linear constraint matrix (rows: re/im per coefficient pair).
    m: DMatrix<f64>,
    svd_u: DMatrix<f64>,
    svd_vt: DMatrix<f64>,
    svd_s: DVector<f64>,
    /// `delta` evaluated at the tuple.
    pub delta_at_node: CMat,
    /// `I - delta(L)* delta(L)`.
    middle_at_node: CMat,
    /// Stacked basis functions `F_a(L)` (Jn x n), for the evaluation residual.
    f_at_node: Vec<CMat>,
}

fn herm_params_dim(n0: usize) -> usize {
    n0 * n0
}

/// Hermitian matrix -> real parameter vector (diagonal, then re/im pairs).
fn herm_to_params(q: &CMat) -> DVector<f64> {
    let n0 = q.nrows();
    let mut p = DVector::zeros(herm_params_dim(n0));
    for a in 0..n0 {
        p[a] = q[(a, a)].re;
    }
    let mut idx = n0;
    for a in 0..n0 {
        for b in (a + 1)..n0 {
            p[idx] = q[(a, b)].re;
            p[idx + 1] = q[(a, b)].im;
            idx += 2;
        }
    }
    p
}

fn params_to_herm(p: &DVector<f64>, n0: usize) -> CMat {
    let mut q = CMat::zeros(n0, n0);
    for a in 0..n0 {
        q[(a, a)] = cx(p[a], 0.0);
    }
    let mut idx = n0;
    for a in 0..n0 {
        for b in (a + 1)..n0 {
            let z = cx(p[idx], p[idx + 1]);
            q[(a, b)] = z;
            q[(b, a)] = z.conj();
            idx += 2;
        }
    }
    q
}

impl ConstraintMap {
    fn alpha_index(&self, j: usize, k: usize) -> usize {
        j * self.k_dim + k
    }

    /// Coefficient image of one Hermitian `Q` under the constraint map.
    fn coefficient_image(&self, q: &CMat) -> DMatrix<C64> {
        let k_dim = self.k_dim;
        let jj = self.j_size;
        let mut c = DMatrix::<C64>::zeros(k_dim, k_dim);
        for ja in 0..jj {
            for ka in 0..k_dim {
                let alpha = self.alpha_index(ja, ka);
                for jb in 0..jj {
                    for kb in 0..k_dim {
                        let beta = self.alpha_index(jb, kb);
                        let qv = q[(alpha, beta)];
                        if qv.norm() == 0.0 {
                            continue;
                        }
                        if ja == jb {
                            c[(ka, kb)] += qv;
                        }
                        for i in 0..jj {
                            let mu_a = &self.mu[(i * jj + ja) * k_dim + ka];
                            let mu_b = &self.mu[(i * jj + jb) * k_dim + kb];
                            for a in 0..k_dim {
                                let left = mu_a[a].conj();
                                if left.norm() == 0.0 {
                                    continue;
                                }
                                for b in 0..k_dim {
                                    c[(a, b)] -= qv * left * mu_b[b];
                                }
                            }
                        }
                    }
                }
            }
        }
        c
    }

    fn flatten_coeffs(&self, c: &DMatrix<C64>) -> DVector<f64> {
        let k_dim = self.k_dim;
        let mut out = DVector::zeros(2 * k_dim * k_dim);
        for a in 0..k_dim {
            for b in 0..k_dim {
                out[2 * (a * k_dim + b)] = c[(a, b)].re;
                out[2 * (a * k_dim + b) + 1] = c[(a, b)].im;
            }
        }
        out
    }

    /// Target coefficients for interpolant coefficients `beta`: the expansion
    /// of `1(y)* 1(x) - p0(y)* p0(x)`.
    pub fn rhs_for(&self, basis: &AlgebraBasis, p0_coeffs: &CVec) -> DVector<f64> {
        let alpha = basis.unit_coeffs();
        let k_dim = self.k_dim;
        let mut c = DMatrix::<C64>::zeros(k_dim, k_dim);
        for a in 0..k_dim {
            for b in 0..k_dim {
                c[(a, b)] = alpha[a].conj() * alpha[b] - p0_coeffs[a].conj() * p0_coeffs[b];
            }
        }
        self.flatten_coeffs(&c)
    }

    fn apply(&self, params: &DVector<f64>) -> DVector<f64> {
        &self.m * params
    }

    /// Minimum-norm solve with the precomputed factorization.
    fn pinv_apply(&self, y: &DVector<f64>) -> DVector<f64> {
        let uty = self.svd_u.transpose() * y;
        let smax = self.svd_s.iter().cloned().fold(0.0, f64::max);
        let cutoff = 1e-12 * smax;
        let mut scaled = uty;
        for i in 0..self.svd_s.len() {
            let s = self.svd_s[i];
            scaled[i] *= if s > cutoff { 1.0 / s } else { 0.0 };
        }
        self.svd_vt.transpose() * scaled
    }

    /// Evaluation residual of a certificate at the node itself:
    /// `|| sum Q_ab F_a(L)* [I - delta(L)* delta(L)] F_b(L) - (I - W* W) ||`.
    pub fn node_residual(&self, q: &CMat, w: &CMat) -> f64 {
        let n = self.n;
        let mut lhs = CMat::zeros(n, n);
        for a in 0..self.n0 {
            for b in 0..self.n0 {
                let qv = q[(a, b)];
                if qv.norm() == 0.0 {
                    continue;
                }
                let fa = &self.f_at_node[a];
                let fb = &self.f_at_node[b];
                let block = fa.adjoint() * &self.middle_at_node * fb;
                lhs += block.map(|z| z * qv);
            }
        }
        let rhs = CMat::identity(n, n) - w.adjoint() * w;
        (lhs - rhs).norm()
    }
}

/// Assembles the affine constraint for the pair `(basis, delta)`.
pub fn build_constraint_map(
    basis: &AlgebraBasis,
    delta: &PolyMatrix,
    tol: &Tolerances,
) -> Result<ConstraintMap, CertError> {
    if !delta.is_square() {
        return Err(CertError::DeltaNotSquare(delta.rows(), delta.cols()));
    }
    let n = basis.size();
    let k_dim = basis.dim();
    let jj = delta.rows();
    let n0 = jj * k_dim;

    let ev = TupleEvaluator::new(basis.tuple());
    let delta_at_node = delta.eval_with(&ev)?;
    let norm = op_norm(&delta_at_node)?;
    if norm >= 1.0 {
        return Err(CertError::NodeOutsideDomain(norm));
    }
    let middle_at_node = CMat::identity(jj * n, jj * n) - delta_at_node.adjoint() * &delta_at_node;

    // expansions of delta_(i,j)(L) e_k(L) over the orthonormal basis
    let mut mu = Vec::with_capacity(jj * jj * k_dim);
    for i in 0..jj {
        for j in 0..jj {
            let dij = ev.eval(delta.entry(i, j))?;
            for k in 0..k_dim {
                let prod = &dij * &basis.basis_mats()[k];
                let coeffs = CVec::from_iterator(
                    k_dim,
                    basis.basis_mats().iter().map(|m| {
                        let mut s = cx(0.0, 0.0);
                        for (x, y) in prod.iter().zip(m.iter()) {
                            s += x * y.conj();
                        }
                        s
                    }),
                );
                mu.push(coeffs);
            }
        }
    }

    // stacked basis functions F_(j,k)(L): e_k(L) in block row j
    let mut f_at_node = Vec::with_capacity(n0);
    for j in 0..jj {
        for k in 0..k_dim {
            let mut f = CMat::zeros(jj * n, n);
            f.view_mut((j * n, 0), (n, n))
                .copy_from(&basis.basis_mats()[k]);
            f_at_node.push(f);
        }
    }

    let mut map = ConstraintMap {
        j_size: jj,
        k_dim,
        n0,
        n,
        mu,
        m: DMatrix::zeros(0, 0),
        svd_u: DMatrix::zeros(0, 0),
        svd_vt: DMatrix::zeros(0, 0),
        svd_s: DVector::zeros(0),
        delta_at_node,
        middle_at_node,
        f_at_node,
    };

    // real constraint matrix, one column per Hermitian parameter
    let pdim = herm_params_dim(n0);
    let rows = 2 * k_dim * k_dim;
    let mut m = DMatrix::<f64>::zeros(rows, pdim);
    for p_idx in 0..pdim {
        let mut unit = DVector::<f64>::zeros(pdim);
        unit[p_idx] = 1.0;
        let q = params_to_herm(&unit, n0);
        let c = map.coefficient_image(&q);
        let col = map.flatten_coeffs(&c);
        m.set_column(p_idx, &col);
    }

    let svd = m.clone().svd(true, true);
    map.svd_u = svd.u.expect("svd u");
    map.svd_vt = svd.v_t.expect("svd v_t");
    map.svd_s = svd.singular_values;
    map.m = m;
    let _ = tol;
    Ok(map)
}

/// Positive semidefinite Gram certificate, with the factored column
/// polynomials realizing it.
#[derive(Debug, Clone)]
pub struct GramCertificate {
    pub j_size: usize,
    pub k_dim: usize,
    pub n0: usize,
    pub n: usize,
    pub dims: usize,
    /// Hermitian PSD Gram matrix.
    pub q: CMat,
    /// Factor with `Q = A* A`.
    pub factor: CMat,
    /// One `J`-column of polynomials per factor row.
    pub u_polys: Vec<Vec<FreePoly>>,
    /// Final affine residual in coefficient space.
    pub residual: f64,
    /// Evaluation residual of the identity at the node.
    pub node_residual: f64,
    /// Affine residual per recorded iteration (downsampled).
    pub residual_curve: Vec<f64>,
    pub iterations: usize,
}

impl GramCertificate {
    /// Stacks `u_i(x)` for every factor row: a `(J * N0 * m) x m` matrix in
    /// row-block order `(i, j)`.
    pub fn eval_u_stack(&self, ev: &TupleEvaluator) -> Result<CMat, CertError> {
        let m = ev.tuple().size();
        let jj = self.j_size;
        let mut out = CMat::zeros(self.n0 * jj * m, m);
        for (i, row) in self.u_polys.iter().enumerate() {
            for (j, poly) in row.iter().enumerate() {
                let v = ev.eval(poly)?;
                out.view_mut(((i * jj + j) * m, 0), (m, m)).copy_from(&v);
            }
        }
        Ok(out)
    }

    /// `u_i(x)` for one factor row: a `(J m) x m` stack.
    pub fn eval_u_row(&self, i: usize, ev: &TupleEvaluator) -> Result<CMat, CertError> {
        let m = ev.tuple().size();
        let jj = self.j_size;
        let mut out = CMat::zeros(jj * m, m);
        for (j, poly) in self.u_polys[i].iter().enumerate() {
            let v = ev.eval(poly)?;
            out.view_mut((j * m, 0), (m, m)).copy_from(&v);
        }
        Ok(out)
    }
}

fn downsample(curve: &[f64], keep: usize) -> Vec<f64> {
    if curve.len() <= keep {
        return curve.to_vec();
    }
    let stride = curve.len().div_ceil(keep);
    let mut out: Vec<f64> = curve.iter().step_by(stride).cloned().collect();
    if let Some(&last) = curve.last() {
        if out.last() != Some(&last) {
            out.push(last);
        }
    }
    out
}

/// Finishing step for boundary solutions. Feasible Gram matrices here are
/// typically singular, so plain alternating projection approaches the cone
/// boundary tangentially and crawls. Once the iterate localizes the active
/// face, a damped Gauss-Newton pass on the factor `Q = A* A` (at the rank
/// suggested by the iterate's spectrum) closes the remaining distance; the
/// factored form keeps every trial point inside the cone.
fn factor_polish(
    map: &ConstraintMap,
    q_guess: &CMat,
    rhs: &DVector<f64>,
    tol: f64,
    tols: &Tolerances,
) -> Result<Option<(CMat, f64)>, CertError> {
    let n0 = map.n0;
    let (vals, vecs) = herm_eig(q_guess, tols)?;
    let vmax = vals.iter().cloned().fold(0.0, f64::max);
    if vmax <= 0.0 {
        return Ok(None);
    }
    let mut tried = Vec::new();
    for rel_cut in [1e-2, 1e-4, 1e-6] {
        let keep: Vec<usize> = (0..vals.len())
            .filter(|&i| vals[i] > rel_cut * vmax)
            .collect();
        let r = keep.len();
        if r == 0 || tried.contains(&r) {
            continue;
        }
        tried.push(r);
        // A0 = sqrt(lambda) V^* on the kept eigenpairs
        let mut a = CMat::zeros(r, n0);
        for (dst, &src) in keep.iter().enumerate() {
            let s = vals[src].sqrt();
            for col in 0..n0 {
                a[(dst, col)] = vecs[(col, src)].conj() * s;
            }
        }
        if let Some((q, res)) = gauss_newton_factor(map, a, rhs, tol) {
            return Ok(Some((q, res)));
        }
    }
    Ok(None)
}

fn factor_params(a: &CMat) -> DVector<f64> {
    herm_to_params(&(a.adjoint() * a))
}

/// Damped Gauss-Newton on `A -> || M vec(A* A) - rhs ||`, returning the Gram
/// matrix when the target residual is reached.
fn gauss_newton_factor(
    map: &ConstraintMap,
    mut a: CMat,
    rhs: &DVector<f64>,
    tol: f64,
) -> Option<(CMat, f64)> {
    let r = a.nrows();
    let n0 = a.ncols();
    let nvars = 2 * r * n0;
    let mut lambda = 1e-8;
    let mut residual_vec = map.apply(&factor_params(&a)) - rhs;
    let mut residual = residual_vec.norm();
    // aim well below the acceptance target: extra Newton steps are cheap and
    // the slack protects the downstream isometry step
    let aim = tol * 1e-4;

    for _ in 0..40 {
        if residual <= aim {
            break;
        }
        // Jacobian of the residual with respect to the real parameters of A
        let mut jac = DMatrix::<f64>::zeros(map.m.nrows(), nvars);
        for row in 0..r {
            for col in 0..n0 {
                for part in 0..2 {
                    let mut da = CMat::zeros(r, n0);
                    da[(row, col)] = if part == 0 {
                        cx(1.0, 0.0)
                    } else {
                        cx(0.0, 1.0)
                    };
                    let dq = da.adjoint() * &a + a.adjoint() * &da;
                    let col_idx = (row * n0 + col) * 2 + part;
                    jac.set_column(col_idx, &map.apply(&herm_to_params(&dq)));
                }
            }
        }
        let svd = jac.svd(true, true);
        let u = svd.u.as_ref()?;
        let vt = svd.v_t.as_ref()?;
        let utf = u.transpose() * &residual_vec;

        let mut improved = false;
        for _ in 0..8 {
            // Tikhonov-damped step
            let mut scaled = utf.clone();
            for i in 0..svd.singular_values.len() {
                let s = svd.singular_values[i];
                scaled[i] *= s / (s * s + lambda);
            }
            let step = vt.transpose() * &scaled;
            let mut trial = a.clone();
            for row in 0..r {
                for col in 0..n0 {
                    let idx = (row * n0 + col) * 2;
                    trial[(row, col)] -= cx(step[idx], step[idx + 1]);
                }
            }
            let trial_vec = map.apply(&factor_params(&trial)) - rhs;
            let trial_res = trial_vec.norm();
            if trial_res < residual {
                a = trial;
                residual_vec = trial_vec;
                residual = trial_res;
                lambda = (lambda / 3.0).max(1e-14);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }

    if residual <= tol {
        let q = a.adjoint() * &a;
        Some((q, residual))
    } else {
        None
    }
}

/// Dykstra-corrected alternating projection between the affine constraint
/// set and the PSD cone, with a periodic face solve to finish boundary
/// solutions. Returns `None` when the residual target is not met within the
/// iteration cap; that outcome is "undecided", not a proof of infeasibility.
pub fn solve_feasibility(
    map: &ConstraintMap,
    basis: &AlgebraBasis,
    p0_coeffs: &CVec,
    w: &CMat,
    tol: f64,
    max_iter: usize,
) -> Result<Option<GramCertificate>, CertError> {
    let tols = Tolerances::default();
    let n0 = map.n0;
    let rhs = map.rhs_for(basis, p0_coeffs);
    let polish_every = 200;

    // start on the affine set
    let mut x = map.pinv_apply(&rhs);
    let mut corr = DVector::<f64>::zeros(herm_params_dim(n0));
    let mut curve = Vec::new();
    let mut accepted: Option<(CMat, f64, usize)> = None;

    for iter in 0..max_iter {
        let y = &x + &corr;
        let ymat = params_to_herm(&y, n0);
        let zmat = psd_project(&ymat, &tols)?;
        let z = herm_to_params(&zmat);
        corr = y - &z;
        let residual_vec = map.apply(&z) - &rhs;
        let residual = residual_vec.norm();
        curve.push(residual);
        if residual <= tol {
            // polish anyway: slack below the target protects the isometry
            // step from weak-direction amplification
            match factor_polish(map, &zmat, &rhs, residual, &tols)? {
                Some((q_cand, res)) if res < residual => {
                    curve.push(res);
                    accepted = Some((q_cand, res, iter + 1));
                }
                _ => accepted = Some((zmat, residual, iter + 1)),
            }
            break;
        }
        if iter % polish_every == polish_every - 1 {
            if let Some((q_cand, res)) = factor_polish(map, &zmat, &rhs, tol, &tols)? {
                curve.push(res);
                accepted = Some((q_cand, res, iter + 1));
                break;
            }
        }
        x = z - map.pinv_apply(&residual_vec);
    }

    let Some((q, residual, iterations)) = accepted else {
        return Ok(None);
    };

    let factor = psd_sqrt(&q, &tols)?;
    let k_dim = map.k_dim;
    let jj = map.j_size;
    let mut u_polys = Vec::with_capacity(n0);
    for i in 0..n0 {
        let mut row = Vec::with_capacity(jj);
        for j in 0..jj {
            let mut poly = FreePoly::zero(basis.dims());
            for k in 0..k_dim {
                let a = factor[(i, map.alpha_index(j, k))];
                if a.norm() > 0.0 {
                    poly = poly.add(&basis.word_expansions()[k].scale(a));
                }
            }
            row.push(poly);
        }
        u_polys.push(row);
    }

    let node_residual = map.node_residual(&q, w);
    Ok(Some(GramCertificate {
        j_size: jj,
        k_dim,
        n0,
        n: map.n,
        dims: basis.dims(),
        q,
        factor,
        u_polys,
        residual,
        node_residual,
        residual_curve: downsample(&curve, 64),
        iterations,
    }))
}

/// Per-sample outcome of a certificate check.
#[derive(Debug, Clone, Serialize)]
pub struct SampleCheck {
    pub size: usize,
    pub identity_residual: f64,
    pub interpolant_norm: f64,
}

/// Report of [`verify_certificate`].
#[derive(Debug, Clone, Serialize)]
pub struct CertReport {
    pub checks: Vec<SampleCheck>,
    pub max_identity_residual: f64,
    pub telescope_tail: f64,
    pub telescope_bound: f64,
    pub passed: bool,
}

/// Checks the certificate identity
/// `I - p0(x)* p0(x) = sum_i u_i(x)* [I - delta(x)* delta(x)] u_i(x)`
/// at the node and at each sample, which must lie in the variety and in the
/// domain. Also evaluates the power tail `(I (x) p0)* d^m* d^m (I (x) p0)`
/// at the node against its norm bound.
pub fn verify_certificate(
    cert: &GramCertificate,
    basis: &AlgebraBasis,
    delta: &PolyMatrix,
    p0: &FreePoly,
    samples: &[MatrixTuple],
    tol: &Tolerances,
) -> Result<CertReport, CertError> {
    let mut checks = Vec::new();
    let mut max_res: f64 = 0.0;

    let node = basis.tuple().clone();
    let mut all: Vec<&MatrixTuple> = vec![&node];
    all.extend(samples.iter());

    for (idx, x) in all.iter().enumerate() {
        if idx > 0 {
            if !basis.in_variety(x, tol.variety)? {
                return Err(CertError::SampleOutsideVariety);
            }
        }
        let ev = TupleEvaluator::new(x);
        let dval = delta.eval_with(&ev)?;
        let dnorm = op_norm(&dval)?;
        if dnorm >= 1.0 {
            return Err(CertError::SampleOutsideDomain(dnorm));
        }
        let m = x.size();
        let p0x = ev.eval(p0)?;
        let lhs = CMat::identity(m, m) - p0x.adjoint() * &p0x;
        let middle = CMat::identity(cert.j_size * m, cert.j_size * m) - dval.adjoint() * &dval;
        let mut rhs = CMat::zeros(m, m);
        for i in 0..cert.n0 {
            let ui = cert.eval_u_row(i, &ev)?;
            rhs += ui.adjoint() * &middle * &ui;
        }
        let res = (lhs - rhs).norm();
        max_res = max_res.max(res);
        checks.push(SampleCheck {
            size: m,
            identity_residual: res,
            interpolant_norm: op_norm(&p0x)?,
        });
    }

    // telescoping tail at the node, power 40
    let m_pow = 40usize;
    let ev = TupleEvaluator::new(&node);
    let dval = delta.eval_with(&ev)?;
    let dnorm = op_norm(&dval)?;
    let p0n = ev.eval(p0)?;
    let p0norm = op_norm(&p0n)?;
    let lifted = crate::numerics::kron_id_left(cert.j_size, &p0n);
    let mut dpow = CMat::identity(dval.nrows(), dval.ncols());
    for _ in 0..m_pow {
        dpow = &dpow * &dval;
    }
    let tail = dpow * &lifted;
    let tail_norm = op_norm(&(tail.adjoint() * &tail))?;
    let bound = dnorm.powi(2 * m_pow as i32) * p0norm * p0norm;

    let passed = max_res <= tol.cert_verify && tail_norm <= bound + 1e-12;
    Ok(CertReport {
        checks,
        max_identity_residual: max_res,
        telescope_tail: tail_norm,
        telescope_bound: bound,
        passed,
    })
}

/// JSON shape of a stored certificate.
#[derive(Serialize, Deserialize)]
pub struct CertificateFile {
    pub n: usize,
    pub d: usize,
    #[serde(rename = "J")]
    pub j: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "N0")]
    pub n0: usize,
    /// Row-major, complex entries as `[re, im]`.
    #[serde(rename = "Q")]
    pub q: Vec<[f64; 2]>,
    pub u_polys: Vec<Vec<String>>,
    pub residual: f64,
}

impl CertificateFile {
    pub fn from_certificate(cert: &GramCertificate) -> Self {
        let mut q = Vec::with_capacity(cert.n0 * cert.n0);
        for r in 0..cert.n0 {
            for c in 0..cert.n0 {
                let z = cert.q[(r, c)];
                q.push([z.re, z.im]);
            }
        }
        CertificateFile {
            n: cert.n,
            d: cert.dims,
            j: cert.j_size,
            k: cert.k_dim,
            n0: cert.n0,
            q,
            u_polys: cert
                .u_polys
                .iter()
                .map(|row| row.iter().map(|p| p.to_string()).collect())
                .collect(),
            residual: cert.residual,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freepoly::eval;
    use crate::numerics::min_eig_herm;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    fn scalar_problem(z: f64, w: f64) -> (AlgebraBasis, PolyMatrix, CVec, CMat) {
        let t = tols();
        let lambda = MatrixTuple::scalars(&[cx(z, 0.0)]);
        let basis = AlgebraBasis::compute(&lambda, &t).unwrap();
        let wmat = CMat::from_row_slice(1, 1, &[cx(w, 0.0)]);
        let m = basis.membership(&wmat, t.membership).unwrap().unwrap();
        (basis, PolyMatrix::scalar_var(1), m.coeffs, wmat)
    }

    #[test]
    fn forced_certificate_at_origin() {
        let t = tols();
        let (basis, delta, coeffs, w) = scalar_problem(0.0, 0.0);
        let map = build_constraint_map(&basis, &delta, &t).unwrap();
        assert_eq!(map.n0, 1);
        let cert = solve_feasibility(&map, &basis, &coeffs, &w, t.sdp_tol, t.sdp_max_iter)
            .unwrap()
            .expect("feasible");
        assert!((cert.q[(0, 0)] - cx(1.0, 0.0)).norm() < 1e-8);
        assert!(cert.node_residual < 1e-8);
    }

    #[test]
    fn scalar_certificate_matches_closed_form() {
        // oracle: Q (1 - |z|^2) = 1 - |w|^2
        let t = tols();
        let (z, w_val) = (0.5, 0.25);
        let (basis, delta, coeffs, w) = scalar_problem(z, w_val);
        let map = build_constraint_map(&basis, &delta, &t).unwrap();
        let cert = solve_feasibility(&map, &basis, &coeffs, &w, t.sdp_tol, t.sdp_max_iter)
            .unwrap()
            .expect("feasible");
        let expected = (1.0 - w_val * w_val) / (1.0 - z * z);
        assert!((cert.q[(0, 0)] - cx(expected, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn contraction_forced_negative_is_infeasible() {
        let t = tols();
        let (basis, delta, coeffs, w) = scalar_problem(0.5, 1.2);
        let map = build_constraint_map(&basis, &delta, &t).unwrap();
        let out = solve_feasibility(&map, &basis, &coeffs, &w, t.sdp_tol, 2000).unwrap();
        assert!(out.is_none());
    }

    #[test]
    fn row_ball_origin_constraint_has_unit_trace() {
        let t = tols();
        let lambda = MatrixTuple::scalars(&[cx(0.0, 0.0), cx(0.0, 0.0)]);
        let basis = AlgebraBasis::compute(&lambda, &t).unwrap();
        let delta = PolyMatrix::row_ball(2);
        let w = CMat::zeros(1, 1);
        let m = basis.membership(&w, t.membership).unwrap().unwrap();
        let map = build_constraint_map(&basis, &delta, &t).unwrap();
        assert_eq!(map.n0, 2);
        let cert = solve_feasibility(&map, &basis, &m.coeffs, &w, t.sdp_tol, t.sdp_max_iter)
            .unwrap()
            .expect("feasible");
        // hand computation: the two diagonal entries must sum to 1
        let trace = cert.q[(0, 0)] + cert.q[(1, 1)];
        assert!((trace - cx(1.0, 0.0)).norm() < 1e-8);
        let me = min_eig_herm(&cert.q, &t).unwrap();
        assert!(me >= -1e-9);
    }

    #[test]
    fn node_outside_domain_is_an_error() {
        let t = tols();
        let lambda = MatrixTuple::scalars(&[cx(1.5, 0.0)]);
        let basis = AlgebraBasis::compute(&lambda, &t).unwrap();
        let delta = PolyMatrix::scalar_var(1);
        assert!(matches!(
            build_constraint_map(&basis, &delta, &t),
            Err(CertError::NodeOutsideDomain(_))
        ));
    }

    #[test]
    fn factor_reproduces_gram_matrix() {
        let t = tols();
        let (basis, delta, coeffs, w) = scalar_problem(0.3, 0.2);
        let map = build_constraint_map(&basis, &delta, &t).unwrap();
        let cert = solve_feasibility(&map, &basis, &coeffs, &w, t.sdp_tol, t.sdp_max_iter)
            .unwrap()
            .unwrap();
        let back = cert.factor.adjoint() * &cert.factor;
        assert!((&back - &cert.q).norm() <= 1e-9);
    }

    #[test]
    fn certificate_verifies_on_conjugated_doubles() {
        let t = tols();
        let (basis, delta, coeffs, w) = scalar_problem(0.5, 0.25);
        let map = build_constraint_map(&basis, &delta, &t).unwrap();
        let cert = solve_feasibility(&map, &basis, &coeffs, &w, t.sdp_tol, t.sdp_max_iter)
            .unwrap()
            .unwrap();
        let p0 = basis.combine(&coeffs);

        // double the node and conjugate mildly; stays in variety and domain
        let node = basis.tuple().clone();
        let doubled = node.direct_sum(&node).unwrap();
        let s = CMat::from_row_slice(
            2,
            2,
            &[cx(1.0, 0.0), cx(0.2, 0.1), cx(0.0, 0.0), cx(1.0, 0.0)],
        );
        let conj = doubled.similarity(&s).unwrap();
        let report = verify_certificate(&cert, &basis, &delta, &p0, &[doubled, conj], &t).unwrap();
        assert!(
            report.passed,
            "max residual {}",
            report.max_identity_residual
        );
        assert!(report.max_identity_residual <= 1e-7);
        assert!(report.telescope_tail <= report.telescope_bound + 1e-12);
    }

    #[test]
    fn feasibility_is_monotone_in_scaling() {
        let t = tols();
        let (basis, delta, coeffs, w) = scalar_problem(0.5, 0.45);
        let map = build_constraint_map(&basis, &delta, &t).unwrap();
        for scale in [0.0, 0.5, 1.0] {
            let coeffs_t = coeffs.map(|c| c * cx(scale, 0.0));
            let w_t = w.map(|z| z * scale);
            let out = solve_feasibility(&map, &basis, &coeffs_t, &w_t, t.sdp_tol, t.sdp_max_iter)
                .unwrap();
            assert!(out.is_some(), "scale {scale} should stay feasible");
        }
    }

    #[test]
    fn coefficient_image_matches_every_insertion() {
        // the coefficient image of Q must reproduce, for every insertion
        // matrix s, the value of the sandwiched sum over the stacked basis
        // functions; this pins the whole affine formulation exactly
        let t = tols();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let delta = PolyMatrix::row_ball(2);
        let n = 2;
        let mats: Vec<CMat> = (0..2)
            .map(|_| {
                CMat::from_fn(n, n, |_, _| {
                    cx(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
                })
                .map(|z| z * 0.4)
            })
            .collect();
        let node = MatrixTuple::new(mats).unwrap();
        let basis = AlgebraBasis::compute(&node, &t).unwrap();
        let k_dim = basis.dim();
        let map = build_constraint_map(&basis, &delta, &t).unwrap();
        let n0 = map.n0;
        let jj = 2usize;
        let dval = delta.eval(&node).unwrap();

        let raw = CMat::from_fn(n0, n0, |_, _| {
            cx(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        let q = (&raw + raw.adjoint()).map(|z| z * 0.5);

        for trial in 0..4 {
            let s = if trial == 0 {
                CMat::identity(n, n)
            } else {
                CMat::from_fn(n, n, |_, _| {
                    cx(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
                })
            };
            let stilde = crate::numerics::kron_id_left(jj, &s);
            let middle = &stilde - dval.adjoint() * &stilde * &dval;

            let mut direct = CMat::zeros(n, n);
            for a in 0..n0 {
                for b in 0..n0 {
                    let qv = q[(a, b)];
                    let fa = &map.f_at_node[a];
                    let fb = &map.f_at_node[b];
                    direct += (fa.adjoint() * &middle * fb).map(|z| z * qv);
                }
            }

            let c = map.coefficient_image(&q);
            let mut via = CMat::zeros(n, n);
            for a in 0..k_dim {
                for b in 0..k_dim {
                    let ea = &basis.basis_mats()[a];
                    let eb = &basis.basis_mats()[b];
                    via += (ea.adjoint() * &s * eb).map(|z| z * c[(a, b)]);
                }
            }
            let err = (&direct - &via).norm();
            assert!(err < 1e-10, "insertion mismatch at trial {trial}: {err}");
        }
    }

    #[test]
    fn certificate_identity_holds_as_polynomial_at_node() {
        // Eq-at-node invariant: I - p0(L)* p0(L) = u(L)* [...] u(L)
        let t = tols();
        let (basis, delta, coeffs, _w) = scalar_problem(0.5, 0.25);
        let map = build_constraint_map(&basis, &delta, &t).unwrap();
        let w = CMat::from_row_slice(1, 1, &[cx(0.25, 0.0)]);
        let cert = solve_feasibility(&map, &basis, &coeffs, &w, t.sdp_tol, t.sdp_max_iter)
            .unwrap()
            .unwrap();
        let p0 = basis.combine(&coeffs);
        let node = basis.tuple();
        let ev = TupleEvaluator::new(node);
        let p0v = eval(&p0, node).unwrap();
        let lhs = CMat::identity(1, 1) - p0v.adjoint() * &p0v;
        let dval = delta.eval_with(&ev).unwrap();
        let middle = CMat::identity(1, 1) - dval.adjoint() * &dval;
        let mut rhs = CMat::zeros(1, 1);
        for i in 0..cert.n0 {
            let ui = cert.eval_u_row(i, &ev).unwrap();
            rhs += ui.adjoint() * &middle * &ui;
        }
        assert!((lhs - rhs).norm() < 1e-8);
    }
}
