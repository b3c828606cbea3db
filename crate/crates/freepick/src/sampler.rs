//! Seeded generation of test points in the domain and in the variety.
//!
//! Domain points are rescaled Ginibre draws bisected onto a target norm
//! band. Variety points come from two constructions that provably stay in
//! the variety: similarity conjugates of direct-sum copies of the node, and
//! restrictions of the node to jointly invariant subspaces (found from the
//! Schur vectors of random linear combinations of the node matrices). Every
//! candidate is re-verified against the stored relations before it is
//! emitted.
//!
//! The generator is ChaCha8, a counter-based stream cipher; every consumer
//! derives its own stream from `(seed, stream id)`, so reports are
//! reproducible bit for bit.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{AlgebraBasis, AlgebraError};
use crate::freepoly::{eval, FreePoly, MatrixTuple, PolyError, PolyMatrix};
use crate::numerics::{cx, op_norm, CMat, NumError};
use crate::tol::Tolerances;

#[derive(Debug, Error)]
pub enum SampleError {
    #[error("could not scale a draw into the domain after {0} retries")]
    DegenerateScaling(usize),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Configuration of the sample generators.
#[derive(Debug, Clone, Copy)]
pub struct SampleConfig {
    pub seed: u64,
    /// Largest matrix size drawn.
    pub max_size: usize,
    /// Number of samples requested.
    pub count: usize,
    /// Condition bound for similarity conjugations, at least one.
    pub cond_bound: f64,
    /// Multiplier in `(0, 1]` used to pull conjugations back into the domain.
    pub shrink: f64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            seed: 1,
            max_size: 4,
            count: 50,
            cond_bound: 4.0,
            shrink: 0.5,
        }
    }
}

const STREAM_DOMAIN: u64 = 1;
const STREAM_VARIETY: u64 = 2;
const STREAM_SUP: u64 = 3;

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller from two uniforms
    let u1: f64 = rng.gen::<f64>().max(1e-16);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn ginibre(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    let scale = 1.0 / (2.0 * n as f64).sqrt();
    CMat::from_fn(n, n, |_, _| {
        cx(gaussian(rng) * scale, gaussian(rng) * scale)
    })
}

fn random_tuple(rng: &mut ChaCha8Rng, d: usize, n: usize) -> MatrixTuple {
    MatrixTuple::new((0..d).map(|_| ginibre(rng, n)).collect()).expect("square draws")
}

fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    let a = CMat::from_fn(n, n, |_, _| cx(gaussian(rng), gaussian(rng)));
    let mut q = a.qr().q();
    crate::numerics::fix_phases(&mut q);
    q
}

/// Invertible matrix with condition number at most `kappa`.
fn random_similarity(rng: &mut ChaCha8Rng, n: usize, kappa: f64) -> CMat {
    let u = random_unitary(rng, n);
    let v = random_unitary(rng, n);
    let lo = kappa.max(1.0).sqrt().recip();
    let hi = kappa.max(1.0).sqrt();
    let mut s = CMat::zeros(n, n);
    for i in 0..n {
        let t: f64 = rng.gen();
        let sv = lo * (hi / lo).powf(t);
        s[(i, i)] = cx(sv, 0.0);
    }
    u * s * v.adjoint()
}

fn scale_tuple(x: &MatrixTuple, t: f64) -> MatrixTuple {
    MatrixTuple::new(x.mats().iter().map(|m| m.map(|z| z * t)).collect()).expect("same shape")
}

/// Random points of the domain with `||delta(x)||` in `[0.5, 0.99]`, sizes
/// cycling through `1..=max_size`.
pub fn sample_domain(
    delta: &PolyMatrix,
    cfg: &SampleConfig,
) -> Result<Vec<MatrixTuple>, SampleError> {
    let mut rng = rng_for(cfg.seed, STREAM_DOMAIN);
    let d = delta.dims();
    let mut out = Vec::with_capacity(cfg.count);
    for idx in 0..cfg.count {
        let n = 1 + idx % cfg.max_size.max(1);
        let mut accepted = None;
        for _retry in 0..100 {
            let raw = random_tuple(&mut rng, d, n);
            let norm_at = |t: f64| -> Result<f64, SampleError> {
                let v = delta.eval(&scale_tuple(&raw, t))?;
                Ok(op_norm(&v)?)
            };
            let f1 = norm_at(1.0)?;
            if (0.5..=0.99).contains(&f1) {
                accepted = Some(scale_tuple(&raw, 1.0));
                break;
            }
            // bracket a crossing of the target level 0.9, then bisect
            let target = 0.9;
            let (mut lo, mut hi);
            if f1 < target {
                lo = 1.0;
                hi = 2.0;
                let mut ok = false;
                for _ in 0..60 {
                    if norm_at(hi)? >= target {
                        ok = true;
                        break;
                    }
                    lo = hi;
                    hi *= 2.0;
                }
                if !ok {
                    continue; // degenerate in the scaling direction
                }
            } else {
                hi = 1.0;
                lo = 0.5;
                let mut ok = false;
                for _ in 0..60 {
                    if norm_at(lo)? <= target {
                        ok = true;
                        break;
                    }
                    hi = lo;
                    lo *= 0.5;
                }
                if !ok {
                    continue;
                }
            }
            for _ in 0..70 {
                let mid = 0.5 * (lo + hi);
                if norm_at(mid)? < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let t = 0.5 * (lo + hi);
            let x = scale_tuple(&raw, t);
            let norm = op_norm(&delta.eval(&x)?)?;
            if (0.5..=0.99).contains(&norm) {
                accepted = Some(x);
                break;
            }
        }
        match accepted {
            Some(x) => out.push(x),
            None => return Err(SampleError::DegenerateScaling(100)),
        }
    }
    Ok(out)
}

fn in_domain_strict(delta: &PolyMatrix, x: &MatrixTuple) -> Result<bool, SampleError> {
    let v = delta.eval(x)?;
    Ok(op_norm(&v)? < 1.0)
}

/// Points of the variety intersected with the domain. Candidates that leave
/// the domain are pulled back toward the node; candidates that fail the
/// relation re-check are dropped. May return fewer than `count` samples.
pub fn sample_variety(
    basis: &AlgebraBasis,
    delta: &PolyMatrix,
    cfg: &SampleConfig,
) -> Result<Vec<MatrixTuple>, SampleError> {
    let tol = Tolerances::default();
    let mut rng = rng_for(cfg.seed, STREAM_VARIETY);
    let node = basis.tuple().clone();
    let n = node.size();
    let k_max = (cfg.max_size / n).max(1);
    let mut out = Vec::with_capacity(cfg.count);

    let mut attempts = 0usize;
    while out.len() < cfg.count && attempts < cfg.count * 8 {
        attempts += 1;
        let candidate = if attempts % 3 == 0 && n >= 2 {
            invariant_restriction(&mut rng, basis)
        } else {
            let copies = 1 + attempts % k_max;
            let mut folded = node.clone();
            for _ in 1..copies {
                folded = folded.direct_sum(&node)?;
            }
            let s = random_similarity(&mut rng, folded.size(), cfg.cond_bound);
            conjugate_into_domain(&folded, &s, delta, cfg.shrink)?
        };
        if let Some(x) = candidate {
            if in_domain_strict(delta, &x)? && basis.in_variety(&x, tol.variety)? {
                out.push(x);
            }
        }
    }
    Ok(out)
}

/// Conjugates by `s`, shrinking `s` toward the identity until the image is
/// back inside the domain.
fn conjugate_into_domain(
    x: &MatrixTuple,
    s: &CMat,
    delta: &PolyMatrix,
    shrink: f64,
) -> Result<Option<MatrixTuple>, SampleError> {
    let n = x.size();
    let mut t = 1.0;
    for _ in 0..80 {
        let st = CMat::identity(n, n).map(|z| z * cx(1.0 - t, 0.0)) + s.map(|z| z * t);
        if let Some(y) = x.similarity(&st) {
            if in_domain_strict(delta, &y)? {
                return Ok(Some(y));
            }
        }
        t *= shrink.clamp(0.05, 0.95);
        if t < 1e-8 {
            break;
        }
    }
    // the identity conjugation always works: the node itself is in the domain
    Ok(Some(x.clone()))
}

/// Restriction of the node to a jointly invariant subspace, when the Schur
/// basis of a random combination exposes one.
fn invariant_restriction(rng: &mut ChaCha8Rng, basis: &AlgebraBasis) -> Option<MatrixTuple> {
    let node = basis.tuple();
    let n = node.size();
    let d = node.dims();
    let mut combo = CMat::zeros(n, n);
    for r in 0..d {
        let c = cx(gaussian(rng), gaussian(rng));
        combo += node.mat(r).map(|z| z * c);
    }
    let (q, _t) = combo.schur().unpack();
    let dim = 1 + rng.gen_range(0..n.saturating_sub(1).max(1));
    let sub = q.view((0, 0), (n, dim)).into_owned();
    // joint invariance check for every coordinate matrix
    let proj_out = CMat::identity(n, n) - &sub * sub.adjoint();
    for r in 0..d {
        let leak = (&proj_out * node.mat(r) * &sub).norm();
        if leak > 1e-10 * node.mat(r).norm().max(1.0) {
            return None;
        }
    }
    let mats: Vec<CMat> = (0..d).map(|r| sub.adjoint() * node.mat(r) * &sub).collect();
    MatrixTuple::new(mats).ok()
}

/// Lower bound for the supremum of `||p0||` over the variety inside the
/// domain, together with the tuple attaining it: the maximum over emitted
/// samples plus a hill climb over the similarity parameters.
pub fn sup_search(
    basis: &AlgebraBasis,
    delta: &PolyMatrix,
    p0: &FreePoly,
    cfg: &SampleConfig,
) -> Result<(f64, MatrixTuple), SampleError> {
    let mut rng = rng_for(cfg.seed, STREAM_SUP);
    let node = basis.tuple().clone();
    let mut best = op_norm(&eval(p0, &node)?)?;
    let mut best_tuple = node.clone();

    for x in sample_variety(basis, delta, cfg)? {
        let v = op_norm(&eval(p0, &x)?)?;
        if v > best {
            best = v;
            best_tuple = x;
        }
    }

    // hill climb over conjugations of the doubled node
    let k = (cfg.max_size / node.size()).max(1).min(2);
    let mut folded = node.clone();
    for _ in 1..k {
        folded = folded.direct_sum(&node)?;
    }
    let m = folded.size();
    let mut s = CMat::identity(m, m);
    let mut step = 0.3_f64;
    for _ in 0..200 {
        let perturb = CMat::from_fn(m, m, |_, _| cx(gaussian(&mut rng), gaussian(&mut rng)))
            .map(|z| z * step);
        let cand = &s + &s * perturb;
        if crate::numerics::cond(&cand) > cfg.cond_bound.max(1.0) {
            step *= 0.7;
            continue;
        }
        if let Some(y) = folded.similarity(&cand) {
            if in_domain_strict(delta, &y)? {
                let v = op_norm(&eval(p0, &y)?)?;
                if v > best {
                    best = v;
                    best_tuple = y;
                    s = cand;
                    step = (step * 1.5).min(0.5);
                    continue;
                }
            }
        }
        step *= 0.8;
        if step < 1e-6 {
            break;
        }
    }
    Ok((best, best_tuple))
}

/// Lower bound for the supremum of `||p0||` over the variety inside the domain.
pub fn estimate_sup(
    basis: &AlgebraBasis,
    delta: &PolyMatrix,
    p0: &FreePoly,
    cfg: &SampleConfig,
) -> Result<f64, SampleError> {
    sup_search(basis, delta, p0, cfg).map(|(v, _)| v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freepoly::eval;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn domain_samples_sit_in_the_band() {
        let delta = PolyMatrix::scalar_var(1);
        let cfg = SampleConfig {
            seed: 5,
            max_size: 3,
            count: 12,
            ..SampleConfig::default()
        };
        let samples = sample_domain(&delta, &cfg).unwrap();
        assert_eq!(samples.len(), 12);
        for x in &samples {
            let norm = op_norm(&delta.eval(x).unwrap()).unwrap();
            assert!((0.5..=0.99).contains(&norm), "norm {norm}");
        }
    }

    #[test]
    fn row_ball_samples_satisfy_the_gram_bound() {
        let delta = PolyMatrix::row_ball(2);
        let cfg = SampleConfig {
            seed: 6,
            max_size: 3,
            count: 9,
            ..SampleConfig::default()
        };
        for x in sample_domain(&delta, &cfg).unwrap() {
            let mut gram = CMat::zeros(x.size(), x.size());
            for r in 0..2 {
                gram += x.mat(r).adjoint() * x.mat(r);
            }
            let top = op_norm(&gram).unwrap();
            assert!(top <= 0.99f64.powi(2) + 1e-12);
        }
    }

    #[test]
    fn same_seed_reproduces_samples() {
        let delta = PolyMatrix::scalar_var(2);
        let cfg = SampleConfig {
            seed: 77,
            max_size: 3,
            count: 6,
            ..SampleConfig::default()
        };
        let a = sample_domain(&delta, &cfg).unwrap();
        let b = sample_domain(&delta, &cfg).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.size(), y.size());
            for (mx, my) in x.mats().iter().zip(y.mats()) {
                assert_eq!(mx, my);
            }
        }
    }

    #[test]
    fn variety_samples_pass_the_relation_check() {
        let t = tols();
        let node = MatrixTuple::new(vec![CMat::from_row_slice(
            2,
            2,
            &[cx(0.2, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(0.6, 0.0)],
        )])
        .unwrap();
        let basis = AlgebraBasis::compute(&node, &t).unwrap();
        let delta = PolyMatrix::scalar_var(1);
        let cfg = SampleConfig {
            seed: 9,
            max_size: 4,
            count: 20,
            ..SampleConfig::default()
        };
        let samples = sample_variety(&basis, &delta, &cfg).unwrap();
        assert!(!samples.is_empty());
        // twenty random relation polynomials drawn from the kernel basis
        let ns = basis.relation_nullspace();
        let words = basis.relation_words().to_vec();
        let mut rng = rng_for(99, 7);
        let mut relations = Vec::new();
        for _ in 0..20 {
            let mut coeffs = crate::numerics::CVec::zeros(words.len());
            for col in 0..ns.ncols() {
                let c = cx(gaussian(&mut rng), gaussian(&mut rng));
                coeffs += ns.column(col).map(|z| z * c);
            }
            let norm = coeffs.norm().max(1e-12);
            let mut p = crate::freepoly::FreePoly::zero(1);
            for (i, w) in words.iter().enumerate() {
                p = p.add(&crate::freepoly::FreePoly::monomial(
                    1,
                    w.clone(),
                    coeffs[i] / cx(norm, 0.0),
                ));
            }
            relations.push(p);
        }
        for x in &samples {
            assert!(basis.in_variety(x, t.variety).unwrap());
            for p in &relations {
                assert!(eval(p, x).unwrap().norm() <= 1e-8);
            }
        }
        // the invariant-subspace route must expose a strict restriction
        assert!(samples
            .iter()
            .any(|x| x.size() < 2 || x.size() % 2 == 1 || x.size() == 1));
    }

    #[test]
    fn diagonal_node_restricts_to_scalars() {
        let t = tols();
        let node = MatrixTuple::new(vec![CMat::from_row_slice(
            2,
            2,
            &[cx(0.2, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(0.6, 0.0)],
        )])
        .unwrap();
        let basis = AlgebraBasis::compute(&node, &t).unwrap();
        let delta = PolyMatrix::scalar_var(1);
        let cfg = SampleConfig {
            seed: 11,
            max_size: 4,
            count: 30,
            ..SampleConfig::default()
        };
        let samples = sample_variety(&basis, &delta, &cfg).unwrap();
        let scalars: Vec<_> = samples.iter().filter(|x| x.size() == 1).collect();
        assert!(!scalars.is_empty(), "expected a scalar restriction");
        for x in scalars {
            let z = x.mat(0)[(0, 0)];
            let near_eigenvalue =
                (z - cx(0.2, 0.0)).norm() < 1e-8 || (z - cx(0.6, 0.0)).norm() < 1e-8;
            assert!(near_eigenvalue, "scalar {z} is not an eigenvalue");
        }
    }

    #[test]
    fn sup_estimate_dominates_node_norm() {
        let t = tols();
        let node = MatrixTuple::scalars(&[cx(0.5, 0.0)]);
        let basis = AlgebraBasis::compute(&node, &t).unwrap();
        let delta = PolyMatrix::scalar_var(1);
        let w = CMat::from_row_slice(1, 1, &[cx(0.9, 0.0)]);
        let p0 = basis.membership(&w, t.membership).unwrap().unwrap().poly;
        let cfg = SampleConfig {
            seed: 13,
            max_size: 3,
            count: 10,
            ..SampleConfig::default()
        };
        let sup = estimate_sup(&basis, &delta, &p0, &cfg).unwrap();
        assert!(sup >= 0.9 - 1e-12);
    }

    #[test]
    fn unitary_conjugation_cannot_beat_spectral_maximum() {
        // with condition bound 1 the climb stays on the unitary orbit, where
        // the norm of p0 equals its largest value on the spectrum
        let t = tols();
        let node = MatrixTuple::new(vec![CMat::from_row_slice(
            2,
            2,
            &[cx(0.2, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(0.5, 0.0)],
        )])
        .unwrap();
        let basis = AlgebraBasis::compute(&node, &t).unwrap();
        let delta = PolyMatrix::scalar_var(1);
        let w = CMat::from_row_slice(
            2,
            2,
            &[cx(0.3, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(0.8, 0.0)],
        );
        let p0 = basis.membership(&w, t.membership).unwrap().unwrap().poly;
        let cfg = SampleConfig {
            seed: 17,
            max_size: 4,
            count: 10,
            cond_bound: 1.0,
            shrink: 0.5,
        };
        let sup = estimate_sup(&basis, &delta, &p0, &cfg).unwrap();
        assert!(sup <= 0.8 + 1e-6, "sup {sup}");
        assert!(sup >= 0.8 - 1e-9);
    }

    #[test]
    fn scaled_interpolant_witnesses_unsolvability() {
        let t = tols();
        let node = MatrixTuple::scalars(&[cx(0.5, 0.0)]);
        let basis = AlgebraBasis::compute(&node, &t).unwrap();
        let delta = PolyMatrix::scalar_var(1);
        let w = CMat::from_row_slice(1, 1, &[cx(1.3, 0.0)]);
        let p0 = basis.membership(&w, t.membership).unwrap().unwrap().poly;
        let cfg = SampleConfig {
            seed: 19,
            max_size: 2,
            count: 5,
            ..SampleConfig::default()
        };
        let sup = estimate_sup(&basis, &delta, &p0, &cfg).unwrap();
        assert!(sup > 1.0);
    }
}
