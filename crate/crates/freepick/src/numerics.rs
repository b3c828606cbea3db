//! Dense complex linear-algebra kernel.
//!
//! Thin, contract-carrying wrappers around [`nalgebra`] decompositions for
//! complex matrices: operator norm, Hermitian eigendecomposition, projection
//! onto the positive semidefinite cone, minimum-norm least squares, and the
//! unitary completion used to turn Gram-equal column families into a
//! colligation. Everything is deterministic for fixed input.

use nalgebra::{Complex, DMatrix, DVector};
use thiserror::Error;

use crate::tol::Tolerances;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

#[derive(Debug, Error)]
pub enum NumError {
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix is not Hermitian: deviation {dev:.3e} exceeds bound {bound:.3e}")]
    NotHermitian { dev: f64, bound: f64 },
    #[error("Gram matrices differ by {dev:.3e}, tolerance {tol:.3e}")]
    GramMismatch { dev: f64, tol: f64 },
    #[error("rank mismatch between column families: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
}

pub fn cx(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn assert_finite(a: &CMat) -> Result<(), NumError> {
    if a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(NumError::NonFinite)
    }
}

/// Largest singular value.
pub fn op_norm(a: &CMat) -> Result<f64, NumError> {
    assert_finite(a)?;
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(0.0);
    }
    let sv = a.clone().singular_values();
    Ok(sv.iter().cloned().fold(0.0, f64::max))
}

fn hermitian_part(a: &CMat) -> CMat {
    (a + a.adjoint()).map(|z| z * 0.5)
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// The input is symmetrized first; if it deviates from its adjoint by more
/// than `herm_rel` relative to its size the call fails.
pub fn herm_eig(a: &CMat, tol: &Tolerances) -> Result<(DVector<f64>, CMat), NumError> {
    assert_finite(a)?;
    if a.nrows() != a.ncols() {
        return Err(NumError::ShapeMismatch(
            a.nrows(),
            a.ncols(),
            a.ncols(),
            a.nrows(),
        ));
    }
    let scale = a.norm().max(1.0);
    let dev = (a - a.adjoint()).norm();
    let bound = tol.herm_rel * scale;
    if dev > bound {
        return Err(NumError::NotHermitian { dev, bound });
    }
    let h = hermitian_part(a);
    let se = nalgebra::SymmetricEigen::new(h);
    let n = se.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).unwrap());
    let vals = DVector::from_iterator(n, order.iter().map(|&i| se.eigenvalues[i]));
    let mut vecs = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &se.eigenvectors.column(src));
    }
    Ok((vals, vecs))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eig_herm(a: &CMat, tol: &Tolerances) -> Result<f64, NumError> {
    let (vals, _) = herm_eig(a, tol)?;
    Ok(if vals.is_empty() { 0.0 } else { vals[0] })
}

/// Frobenius-nearest positive semidefinite matrix: negative eigenvalues clipped to zero.
pub fn psd_project(a: &CMat, tol: &Tolerances) -> Result<CMat, NumError> {
    let (vals, vecs) = herm_eig(a, tol)?;
    let n = vals.len();
    let mut out = CMat::zeros(n, n);
    for i in 0..n {
        let v = vals[i];
        if v > 0.0 {
            let col = vecs.column(i);
            for r in 0..n {
                for c in 0..n {
                    out[(r, c)] += col[r] * col[c].conj() * v;
                }
            }
        }
    }
    Ok(hermitian_part(&out))
}

/// Hermitian square root with negative eigenvalues clipped to zero.
pub fn psd_sqrt(a: &CMat, tol: &Tolerances) -> Result<CMat, NumError> {
    let (vals, vecs) = herm_eig(a, tol)?;
    let n = vals.len();
    let mut out = CMat::zeros(n, n);
    for i in 0..n {
        let v = vals[i];
        if v > 0.0 {
            let s = v.sqrt();
            let col = vecs.column(i);
            for r in 0..n {
                for c in 0..n {
                    out[(r, c)] += col[r] * col[c].conj() * s;
                }
            }
        }
    }
    Ok(hermitian_part(&out))
}

/// Minimum-norm least-squares solution of `A X = B` via SVD.
///
/// Singular values below `lstsq_rel` times the largest are treated as zero.
/// Returns the solution and the Frobenius norm of the residual `A X - B`.
pub fn lstsq(a: &CMat, b: &CMat, tol: &Tolerances) -> Result<(CMat, f64), NumError> {
    assert_finite(a)?;
    assert_finite(b)?;
    if a.nrows() != b.nrows() {
        return Err(NumError::ShapeMismatch(
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols(),
        ));
    }
    let svd = a.clone().svd(true, true);
    let u = svd.u.as_ref().expect("svd u");
    let vt = svd.v_t.as_ref().expect("svd v_t");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cutoff = tol.lstsq_rel * smax;
    // X = V S^+ U^* B
    let utb = u.adjoint() * b;
    let mut scaled = utb.clone();
    for i in 0..svd.singular_values.len() {
        let s = svd.singular_values[i];
        let f = if s > cutoff && s > 0.0 { 1.0 / s } else { 0.0 };
        for c in 0..scaled.ncols() {
            scaled[(i, c)] *= cx(f, 0.0);
        }
    }
    let x = vt.adjoint() * scaled;
    let residual = (a * &x - b).norm();
    Ok((x, residual))
}

/// Numerical rank with a relative singular-value threshold.
pub fn rank(a: &CMat, rel: f64) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let sv = a.clone().singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax <= 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel * smax).count()
}

/// Multiplies each column by a unimodular phase making its first
/// significant entry real positive. Pinning the phase keeps outputs
/// reproducible across runs.
pub fn fix_phases(m: &mut CMat) {
    let rows = m.nrows();
    for c in 0..m.ncols() {
        let mut maxabs: f64 = 0.0;
        for r in 0..rows {
            maxabs = maxabs.max(m[(r, c)].norm());
        }
        if maxabs == 0.0 {
            continue;
        }
        let mut phase = None;
        for r in 0..rows {
            let z = m[(r, c)];
            if z.norm() > 1e-8 * maxabs {
                phase = Some(z.conj() / z.norm());
                break;
            }
        }
        if let Some(p) = phase {
            for r in 0..rows {
                m[(r, c)] *= p;
            }
        }
    }
}

/// Orthonormal basis of the column space, phases pinned.
pub fn orth_range(a: &CMat, tol: &Tolerances) -> CMat {
    if a.ncols() == 0 || a.nrows() == 0 {
        return CMat::zeros(a.nrows(), 0);
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.as_ref().expect("svd u");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let r = if smax <= 0.0 {
        0
    } else {
        svd.singular_values
            .iter()
            .filter(|&&s| s > tol.rank_rel * smax)
            .count()
    };
    let mut out = CMat::zeros(a.nrows(), r);
    for i in 0..r {
        out.set_column(i, &u.column(i));
    }
    fix_phases(&mut out);
    out
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// (orthonormal) columns of `basis`, ordered by descending projector
/// eigenvalue and phase-pinned.
pub fn orth_complement(basis: &CMat, tol: &Tolerances) -> Result<CMat, NumError> {
    let m = basis.nrows();
    let r = basis.ncols();
    if r == 0 {
        let mut id = CMat::identity(m, m);
        fix_phases(&mut id);
        return Ok(id);
    }
    let proj = CMat::identity(m, m) - basis * basis.adjoint();
    let (vals, vecs) = herm_eig(&proj, tol)?;
    let want = m - r;
    // eigenvalues ascending: complement vectors carry eigenvalue ~ 1 at the top
    let mut out = CMat::zeros(m, want);
    for i in 0..want {
        let src = m - 1 - i;
        if vals[src] < 0.5 {
            // the basis was not orthonormal enough to split the space cleanly
            return Err(NumError::RankMismatch {
                left: r,
                right: m - i,
            });
        }
        out.set_column(i, &vecs.column(src));
    }
    fix_phases(&mut out);
    Ok(out)
}

fn orthonormalize_isometry(w: &CMat, tol: &Tolerances) -> Result<CMat, NumError> {
    if w.ncols() == 0 {
        return Ok(w.clone());
    }
    let g = w.adjoint() * w;
    let (vals, vecs) = herm_eig(&g, tol)?;
    let k = vals.len();
    let mut corr = CMat::zeros(k, k);
    for i in 0..k {
        let v = vals[i].max(1e-300);
        let s = 1.0 / v.sqrt();
        let col = vecs.column(i);
        for r in 0..k {
            for c in 0..k {
                corr[(r, c)] += col[r] * col[c].conj() * s;
            }
        }
    }
    Ok(w * corr)
}

/// Unitary `V` with `V P ~= Q`, for column families with equal Gram matrices.
///
/// `P` and `Q` must have the same shape and satisfy `P*P = Q*Q` within
/// `gram_match`. The canonical intertwiner maps the range of `P` onto the
/// range of `Q`; orthocomplement bases of the two ranges are then matched to
/// extend it to a unitary. The output has `V*V = I` to machine precision.
///
/// The common rank is read off the averaged Gram matrix: a genuine rank
/// difference between the two families is impossible once the Gram equality
/// holds, while independently thresholded ranks can disagree on singular
/// values sitting at the cutoff.
pub fn unitary_completion(p: &CMat, q: &CMat, tol: &Tolerances) -> Result<CMat, NumError> {
    if p.nrows() != q.nrows() || p.ncols() != q.ncols() {
        return Err(NumError::ShapeMismatch(
            p.nrows(),
            p.ncols(),
            q.nrows(),
            q.ncols(),
        ));
    }
    assert_finite(p)?;
    assert_finite(q)?;
    let gp = p.adjoint() * p;
    let gq = q.adjoint() * q;
    let dev = (&gp - &gq).norm();
    let scale = gp.norm().max(gq.norm()).max(1.0);
    if dev > tol.gram_match * scale {
        return Err(NumError::GramMismatch {
            dev,
            tol: tol.gram_match * scale,
        });
    }

    let g = hermitian_part(&((&gp + &gq).map(|z| z * 0.5)));
    let (vals, vecs) = herm_eig(&g, tol)?;
    let k = vals.len();
    let vmax = vals.iter().cloned().fold(0.0, f64::max);
    // directions with Gram weight at the deviation scale are indistinguishable
    // from zero given the data; keeping them would amplify the mismatch
    let cutoff = (tol.rank_rel * vmax).max(10.0 * dev);
    let kept: Vec<usize> = (0..k).filter(|&i| vmax > 0.0 && vals[i] > cutoff).collect();
    let r = kept.len();

    // W_P = P E_r diag(lambda^-1/2): isometry onto range(P), likewise W_Q.
    let mut e_r = CMat::zeros(k, r);
    for (dst, &src) in kept.iter().enumerate() {
        let s = 1.0 / vals[src].sqrt();
        let col = vecs.column(src);
        for row in 0..k {
            e_r[(row, dst)] = col[row] * s;
        }
    }
    let wp = orthonormalize_isometry(&(p * &e_r), tol)?;
    let wq = orthonormalize_isometry(&(q * &e_r), tol)?;
    let kp = orth_complement(&wp, tol)?;
    let kq = orth_complement(&wq, tol)?;
    let v = &wq * wp.adjoint() + &kq * kp.adjoint();
    Ok(v)
}

/// Block-diagonal direct sum.
pub fn direct_sum(a: &CMat, b: &CMat) -> CMat {
    let mut out = CMat::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
    out.view_mut((a.nrows(), a.ncols()), (b.nrows(), b.ncols()))
        .copy_from(b);
    out
}

/// `I_k (x) a`: block diagonal with `k` copies of `a`.
pub fn kron_id_left(k: usize, a: &CMat) -> CMat {
    let mut out = CMat::zeros(k * a.nrows(), k * a.ncols());
    for i in 0..k {
        out.view_mut((i * a.nrows(), i * a.ncols()), (a.nrows(), a.ncols()))
            .copy_from(a);
    }
    out
}

/// `a (x) I_k`.
pub fn kron_id_right(a: &CMat, k: usize) -> CMat {
    a.kronecker(&CMat::identity(k, k))
}

/// Condition number from the extreme singular values.
pub fn cond(a: &CMat) -> f64 {
    let sv = a.clone().singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if smin <= 0.0 {
        f64::INFINITY
    } else {
        smax / smin
    }
}
