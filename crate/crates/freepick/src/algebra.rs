//! The unital algebra generated by a matrix tuple.
//!
//! For a tuple `L = (L^1, ..., L^d)` of n-by-n matrices, the algebra is the
//! span of all word evaluations `w(L)`. Closure is computed by a breadth
//! first sweep over words: a word whose evaluation grows the span becomes a
//! pivot and its single-letter extensions are queued. The sweep terminates
//! because the dimension is at most n^2.
//!
//! Alongside the basis we keep, for every word up to one degree past the
//! closure degree, its expansion coefficients over the basis. A tuple `x`
//! lies in the free variety of `L` exactly when transporting those
//! expansions to `x` is consistent; checking all words one degree past the
//! pivots suffices, because any longer word reduces to that range one letter
//! at a time.

use thiserror::Error;

use crate::freepoly::{FreePoly, MatrixTuple, PolyError, TupleEvaluator, Word};
use crate::numerics::{cx, CMat, CVec, C64};
use crate::tol::Tolerances;

/// Hard cap on the number of words enumerated for relation checking.
const MAX_RELATION_WORDS: usize = 100_000;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("matrix size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("variable count mismatch: expected {expected}, got {got}")]
    DimsMismatch { expected: usize, got: usize },
    #[error("relation word enumeration exceeds {0} words")]
    TooManyRelationWords(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Orthonormal basis of the algebra generated by a tuple, with word
/// expansions and the truncated relation data needed for variety tests.
#[derive(Debug, Clone)]
pub struct AlgebraBasis {
    lambda: MatrixTuple,
    /// Orthonormal (trace inner product) matrices spanning the algebra.
    basis_mats: Vec<CMat>,
    /// Polynomials whose evaluation at the tuple reproduces `basis_mats`.
    word_expansions: Vec<FreePoly>,
    /// Maximum pivot word length.
    closure_degree: usize,
    /// All words of length at most `closure_degree + 1`, degree-lex order.
    relation_words: Vec<Word>,
    /// Expansion coefficients of each relation word over the basis.
    word_coeffs: Vec<CVec>,
    /// Which relation words are pivots.
    pivot_flags: Vec<bool>,
    /// Structure constants: coeffs of `e_j e_k` over the basis, row-major in (j, k).
    product_coeffs: Vec<CVec>,
}

fn trace_dot(a: &CMat, b: &CMat) -> C64 {
    // <a, b> = tr(b* a)
    let mut s = cx(0.0, 0.0);
    for (x, y) in a.iter().zip(b.iter()) {
        s += x * y.conj();
    }
    s
}

impl AlgebraBasis {
    /// Closure iteration starting from the empty word.
    pub fn compute(lambda: &MatrixTuple, tol: &Tolerances) -> Result<Self, AlgebraError> {
        let n = lambda.size();
        let d = lambda.dims();
        let ev = TupleEvaluator::new(lambda);

        let mut basis_mats: Vec<CMat> = Vec::new();
        let mut word_expansions: Vec<FreePoly> = Vec::new();
        let mut pivot_words: Vec<Word> = Vec::new();
        let mut scale: f64 = 1.0;

        let mut frontier: Vec<Word> = vec![Word::empty()];
        while let Some(word) = frontier.first().cloned() {
            frontier.remove(0);
            if basis_mats.len() == n * n {
                break;
            }
            let value = ev.eval_word(&word);
            scale = scale.max(value.norm());
            // residual against the current orthonormal basis
            let mut resid = value.clone();
            let mut expansion = FreePoly::monomial(d, word.clone(), cx(1.0, 0.0));
            for (mat, poly) in basis_mats.iter().zip(&word_expansions) {
                let c = trace_dot(&resid, mat);
                resid -= mat.map(|z| z * c);
                expansion = expansion.sub(&poly.scale(c));
            }
            let r = resid.norm();
            if r > tol.rank_rel * scale {
                let inv = cx(1.0 / r, 0.0);
                basis_mats.push(resid.map(|z| z * inv));
                word_expansions.push(expansion.scale(inv));
                // queue single-letter extensions of the new pivot
                for letter in 0..d {
                    frontier.push(word.append(letter));
                }
                pivot_words.push(word);
            }
        }

        let closure_degree = pivot_words.iter().map(|w| w.len()).max().unwrap_or(0);

        // every word one degree past the pivots, in degree-lex order
        let mut relation_words: Vec<Word> = Vec::new();
        let mut layer = vec![Word::empty()];
        for _ in 0..=closure_degree {
            relation_words.extend(layer.iter().cloned());
            if relation_words.len() > MAX_RELATION_WORDS {
                return Err(AlgebraError::TooManyRelationWords(MAX_RELATION_WORDS));
            }
            let mut next = Vec::with_capacity(layer.len() * d);
            for w in &layer {
                for letter in 0..d {
                    next.push(w.append(letter));
                }
            }
            layer = next;
        }
        relation_words.extend(layer);
        if relation_words.len() > MAX_RELATION_WORDS {
            return Err(AlgebraError::TooManyRelationWords(MAX_RELATION_WORDS));
        }

        let mut word_coeffs = Vec::with_capacity(relation_words.len());
        let mut pivot_flags = vec![false; relation_words.len()];
        for (i, w) in relation_words.iter().enumerate() {
            let value = ev.eval_word(w);
            let coeffs = CVec::from_iterator(
                basis_mats.len(),
                basis_mats.iter().map(|m| trace_dot(&value, m)),
            );
            word_coeffs.push(coeffs);
            if pivot_words.contains(w) {
                pivot_flags[i] = true;
            }
        }

        let k = basis_mats.len();
        let mut product_coeffs = Vec::with_capacity(k * k);
        for j in 0..k {
            for l in 0..k {
                let prod = &basis_mats[j] * &basis_mats[l];
                product_coeffs.push(CVec::from_iterator(
                    k,
                    basis_mats.iter().map(|m| trace_dot(&prod, m)),
                ));
            }
        }

        Ok(AlgebraBasis {
            lambda: lambda.clone(),
            basis_mats,
            word_expansions,
            closure_degree,
            relation_words,
            word_coeffs,
            pivot_flags,
            product_coeffs,
        })
    }

    pub fn tuple(&self) -> &MatrixTuple {
        &self.lambda
    }

    /// Dimension of the algebra.
    pub fn dim(&self) -> usize {
        self.basis_mats.len()
    }

    pub fn size(&self) -> usize {
        self.lambda.size()
    }

    pub fn dims(&self) -> usize {
        self.lambda.dims()
    }

    pub fn basis_mats(&self) -> &[CMat] {
        &self.basis_mats
    }

    pub fn word_expansions(&self) -> &[FreePoly] {
        &self.word_expansions
    }

    pub fn closure_degree(&self) -> usize {
        self.closure_degree
    }

    pub fn relation_words(&self) -> &[Word] {
        &self.relation_words
    }

    /// Coefficients of the identity matrix over the basis.
    pub fn unit_coeffs(&self) -> CVec {
        let n = self.size();
        let id = CMat::identity(n, n);
        CVec::from_iterator(
            self.dim(),
            self.basis_mats.iter().map(|m| trace_dot(&id, m)),
        )
    }

    /// Coefficients of a word over the basis, when it is a relation word.
    pub fn coeffs_of_word(&self, w: &Word) -> Option<&CVec> {
        self.relation_words
            .iter()
            .position(|x| x == w)
            .map(|i| &self.word_coeffs[i])
    }

    /// Coefficients of `e_j e_l` over the basis.
    pub fn product_coeffs(&self, j: usize, l: usize) -> &CVec {
        &self.product_coeffs[j * self.dim() + l]
    }

    /// Combines basis expansion polynomials with the given coefficients.
    pub fn combine(&self, coeffs: &CVec) -> FreePoly {
        let mut p = FreePoly::zero(self.dims());
        for (k, poly) in self.word_expansions.iter().enumerate() {
            p = p.add(&poly.scale(coeffs[k]));
        }
        p
    }

    /// Orthogonal projection of `w` onto the algebra: coefficient vector and
    /// the least-squares residual normalized by the target size.
    pub fn project(&self, w: &CMat) -> Result<(CVec, f64), AlgebraError> {
        let n = self.size();
        if w.nrows() != n || w.ncols() != n {
            return Err(AlgebraError::SizeMismatch {
                expected: n,
                got: w.nrows(),
            });
        }
        let coeffs =
            CVec::from_iterator(self.dim(), self.basis_mats.iter().map(|m| trace_dot(w, m)));
        let mut resid = w.clone();
        for (k, m) in self.basis_mats.iter().enumerate() {
            resid -= m.map(|z| z * coeffs[k]);
        }
        let scale = w.norm().max(1.0);
        Ok((coeffs, resid.norm() / scale))
    }

    /// Least-squares membership of `w` in the algebra. On success returns the
    /// coefficient vector and a polynomial evaluating to `w` at the tuple;
    /// the residual is compared against `tol` after normalizing the target.
    pub fn membership(&self, w: &CMat, tol: f64) -> Result<Option<Membership>, AlgebraError> {
        let (coeffs, residual) = self.project(w)?;
        if residual <= tol {
            let poly = self.combine(&coeffs);
            Ok(Some(Membership {
                coeffs,
                poly,
                residual,
            }))
        } else {
            Ok(None)
        }
    }

    /// Membership of a tuple in the free variety: every truncated relation
    /// must transport, and the transported basis must stay multiplicative.
    pub fn in_variety(&self, x: &MatrixTuple, tol: f64) -> Result<bool, AlgebraError> {
        if x.dims() != self.dims() {
            return Err(AlgebraError::DimsMismatch {
                expected: self.dims(),
                got: x.dims(),
            });
        }
        let ev = TupleEvaluator::new(x);
        let m = x.size();
        let k = self.dim();

        // transported basis values e_k(x)
        let basis_at_x: Vec<CMat> = self
            .word_expansions
            .iter()
            .map(|p| ev.eval(p))
            .collect::<Result<_, _>>()?;

        // scale of the word evaluations at x
        let mut scale: f64 = 1.0;
        let mut word_vals: Vec<CMat> = Vec::with_capacity(self.relation_words.len());
        for w in &self.relation_words {
            let v = ev.eval_word(w);
            scale = scale.max(v.norm());
            word_vals.push(v);
        }

        // w(x) must match the transported expansion of w for every stored word
        for (i, _w) in self.relation_words.iter().enumerate() {
            let coeffs = &self.word_coeffs[i];
            let mut expected = CMat::zeros(m, m);
            for (k_idx, b) in basis_at_x.iter().enumerate() {
                expected += b.map(|z| z * coeffs[k_idx]);
            }
            if (&word_vals[i] - expected).norm() > tol * scale {
                return Ok(false);
            }
        }

        // products of transported basis elements must match transported products
        let prod_scale = scale * scale;
        for j in 0..k {
            for l in 0..k {
                let coeffs = self.product_coeffs(j, l);
                let mut expected = CMat::zeros(m, m);
                for (k_idx, b) in basis_at_x.iter().enumerate() {
                    expected += b.map(|z| z * coeffs[k_idx]);
                }
                let actual = &basis_at_x[j] * &basis_at_x[l];
                if (actual - expected).norm() > tol * prod_scale.max(1.0) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// A spanning set of truncated relations: for each non-pivot stored word,
    /// the polynomial `w - sum_k c_k e_k`, which vanishes at the tuple.
    pub fn relation_polys(&self) -> Vec<FreePoly> {
        let mut out = Vec::new();
        for (i, w) in self.relation_words.iter().enumerate() {
            if self.pivot_flags[i] {
                continue;
            }
            let mono = FreePoly::monomial(self.dims(), w.clone(), cx(1.0, 0.0));
            out.push(mono.sub(&self.combine(&self.word_coeffs[i])));
        }
        out
    }

    /// The map `word -> vec(word(L))` over the stored words, one column per
    /// word in degree-lex order.
    pub fn relation_matrix(&self) -> CMat {
        let n = self.size();
        let ev = TupleEvaluator::new(&self.lambda);
        let mut m = CMat::zeros(n * n, self.relation_words.len());
        for (col, w) in self.relation_words.iter().enumerate() {
            let v = ev.eval_word(w);
            for r in 0..n {
                for c in 0..n {
                    m[(r * n + c, col)] = v[(r, c)];
                }
            }
        }
        m
    }

    /// Orthonormal basis of the kernel of [`AlgebraBasis::relation_matrix`]:
    /// each column, read as a polynomial over the stored words, vanishes at
    /// the tuple. The span is built from the word-expansion relations and
    /// orthonormalized, so its dimension is `#words - dim`.
    pub fn relation_nullspace(&self) -> CMat {
        let words = self.relation_words.len();
        // coefficient vector of each basis expansion over the stored words
        let mut expansion_coords = vec![CVec::zeros(words); self.dim()];
        for (k, poly) in self.word_expansions.iter().enumerate() {
            let mut v = CVec::zeros(words);
            for (w, &c) in poly.terms() {
                let idx = self
                    .relation_words
                    .iter()
                    .position(|x| x == w)
                    .expect("expansion words are stored");
                v[idx] = c;
            }
            expansion_coords[k] = v;
        }

        let mut basis: Vec<CVec> = Vec::with_capacity(words - self.dim());
        for (i, _w) in self.relation_words.iter().enumerate() {
            if self.pivot_flags[i] {
                continue;
            }
            // delta_w - sum_k c_k (expansion of e_k)
            let mut v = CVec::zeros(words);
            v[i] = cx(1.0, 0.0);
            let coeffs = &self.word_coeffs[i];
            for k in 0..self.dim() {
                v -= expansion_coords[k].map(|z| z * coeffs[k]);
            }
            // Gram-Schmidt against what we already kept
            for b in &basis {
                let mut dot = cx(0.0, 0.0);
                for (x, y) in v.iter().zip(b.iter()) {
                    dot += x * y.conj();
                }
                v -= b.map(|z| z * dot);
            }
            let norm = v.norm();
            if norm > 1e-12 {
                basis.push(v.map(|z| z / cx(norm, 0.0)));
            }
        }
        let mut out = CMat::zeros(words, basis.len());
        for (col, v) in basis.iter().enumerate() {
            out.set_column(col, v);
        }
        out
    }
}

/// Successful membership result.
#[derive(Debug, Clone)]
pub struct Membership {
    /// Coefficients over the orthonormal basis.
    pub coeffs: CVec,
    /// Polynomial with `poly(tuple) = target` within the residual.
    pub poly: FreePoly,
    /// Normalized least-squares residual.
    pub residual: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freepoly::eval;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    fn cmat(rows: usize, cols: usize, vals: &[f64]) -> CMat {
        CMat::from_row_slice(
            rows,
            cols,
            &vals.iter().map(|&v| cx(v, 0.0)).collect::<Vec<_>>(),
        )
    }

    fn nilpotent_tuple() -> MatrixTuple {
        MatrixTuple::new(vec![cmat(2, 2, &[0.0, 1.0, 0.0, 0.0])]).unwrap()
    }

    #[test]
    fn jordan_cell_spans_two_dimensions() {
        let t = tols();
        let basis = AlgebraBasis::compute(&nilpotent_tuple(), &t).unwrap();
        assert_eq!(basis.dim(), 2);
        // identity and the nilpotent both belong
        let id = CMat::identity(2, 2);
        assert!(basis.membership(&id, t.membership).unwrap().is_some());
        let n = cmat(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(basis.membership(&n, t.membership).unwrap().is_some());
    }

    #[test]
    fn jordan_cell_rejects_rank_one_projection() {
        let t = tols();
        let basis = AlgebraBasis::compute(&nilpotent_tuple(), &t).unwrap();
        let w = cmat(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        assert!(basis.membership(&w, t.membership).unwrap().is_none());
    }

    #[test]
    fn generic_pair_generates_everything() {
        let t = tols();
        let lambda = MatrixTuple::new(vec![
            cmat(2, 2, &[1.0, 0.0, 0.0, 2.0]),
            cmat(2, 2, &[0.3, 0.7, 0.9, 0.4]),
        ])
        .unwrap();
        let basis = AlgebraBasis::compute(&lambda, &t).unwrap();
        assert_eq!(basis.dim(), 4);
    }

    #[test]
    fn scalar_tuple_is_one_dimensional() {
        let t = tols();
        let lambda = MatrixTuple::scalars(&[cx(0.3, 0.0), cx(0.7, 0.0)]);
        let basis = AlgebraBasis::compute(&lambda, &t).unwrap();
        assert_eq!(basis.dim(), 1);
    }

    #[test]
    fn membership_returns_interpolating_polynomial() {
        let t = tols();
        let lambda = MatrixTuple::new(vec![cmat(2, 2, &[0.0, 0.0, 0.0, 0.5])]).unwrap();
        let basis = AlgebraBasis::compute(&lambda, &t).unwrap();

        // target hit by the variable itself
        let m = basis
            .membership(lambda.mat(0), t.membership)
            .unwrap()
            .unwrap();
        let back = eval(&m.poly, &lambda).unwrap();
        assert!((back - lambda.mat(0)).norm() < 1e-10);

        // diag(0, 0.25): oracle via the 2x2 Vandermonde solve for nodes 0 and 0.5,
        // g(t) = a + b t with a = 0, b = 0.5, so g = 0.5 * x1
        let w = cmat(2, 2, &[0.0, 0.0, 0.0, 0.25]);
        let m = basis.membership(&w, t.membership).unwrap().unwrap();
        let oracle = FreePoly::parse("0.5*x1", 1).unwrap();
        let got = eval(&m.poly, &lambda).unwrap();
        let want = eval(&oracle, &lambda).unwrap();
        assert!((got - want).norm() < 1e-9);
    }

    #[test]
    fn membership_recovers_random_polynomial_values() {
        let t = tols();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let lambda = MatrixTuple::new(vec![
            CMat::from_fn(3, 3, |_, _| {
                cx(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            }),
            CMat::from_fn(3, 3, |_, _| {
                cx(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            }),
        ])
        .unwrap();
        let basis = AlgebraBasis::compute(&lambda, &t).unwrap();
        for _ in 0..20 {
            let mut q = FreePoly::zero(2);
            for _ in 0..5 {
                let len = rng.gen_range(0..=4usize);
                let letters: Vec<usize> = (0..len).map(|_| rng.gen_range(0..2)).collect();
                q = q.add(&FreePoly::monomial(
                    2,
                    Word::from_letters(&letters),
                    cx(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
                ));
            }
            let target = eval(&q, &lambda).unwrap();
            let m = basis
                .membership(&target, t.membership)
                .unwrap()
                .expect("in algebra");
            let back = eval(&m.poly, &lambda).unwrap();
            assert!((back - target).norm() < 1e-9);
        }
    }

    #[test]
    fn algebra_dim_is_similarity_invariant() {
        let t = tols();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let lambda = MatrixTuple::new(vec![
            cmat(2, 2, &[0.1, 1.0, 0.0, 0.1]),
            cmat(2, 2, &[0.0, 0.0, 1.0, 0.0]),
        ])
        .unwrap();
        let s = CMat::identity(2, 2)
            + CMat::from_fn(2, 2, |_, _| {
                cx(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            })
            .map(|z| z * 0.2);
        let conj = lambda.similarity(&s).unwrap();
        let b1 = AlgebraBasis::compute(&lambda, &t).unwrap();
        let b2 = AlgebraBasis::compute(&conj, &t).unwrap();
        assert_eq!(b1.dim(), b2.dim());
    }

    #[test]
    fn variety_contains_the_tuple_itself() {
        let t = tols();
        let lambda = MatrixTuple::new(vec![
            cmat(2, 2, &[0.2, 0.4, 0.0, 0.5]),
            cmat(2, 2, &[0.3, 0.0, 0.1, 0.2]),
        ])
        .unwrap();
        let basis = AlgebraBasis::compute(&lambda, &t).unwrap();
        assert!(basis.in_variety(&lambda, t.variety).unwrap());
    }

    #[test]
    fn variety_accepts_scalar_restriction_of_diagonal() {
        let t = tols();
        let lambda = MatrixTuple::new(vec![cmat(2, 2, &[0.2, 0.0, 0.0, 0.7])]).unwrap();
        let basis = AlgebraBasis::compute(&lambda, &t).unwrap();
        let x = MatrixTuple::scalars(&[cx(0.2, 0.0)]);
        assert!(basis.in_variety(&x, t.variety).unwrap());
    }

    #[test]
    fn variety_rejects_jordan_cell_with_diagonal_spectrum() {
        let t = tols();
        let z1 = 0.2;
        let z2 = 0.7;
        let lambda = MatrixTuple::new(vec![cmat(2, 2, &[z1, 0.0, 0.0, z2])]).unwrap();
        let basis = AlgebraBasis::compute(&lambda, &t).unwrap();
        let x = MatrixTuple::new(vec![cmat(2, 2, &[z1, 1.0, 0.0, z1])]).unwrap();
        assert!(!basis.in_variety(&x, t.variety).unwrap());

        // oracle: p(t) = (t - z1)(t - z2) kills the tuple but not x
        let p = FreePoly::parse(&format!("(x1 - {z1})*(x1 - {z2})"), 1).unwrap();
        assert!(eval(&p, &lambda).unwrap().norm() < 1e-12);
        let px = eval(&p, &x).unwrap();
        let want = cmat(2, 2, &[0.0, z1 - z2, 0.0, 0.0]);
        assert!((px - want).norm() < 1e-12);
    }

    #[test]
    fn nullspace_is_orthonormal_and_kills_the_tuple() {
        let t = tols();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let lambda = MatrixTuple::new(vec![
            CMat::from_fn(2, 2, |_, _| {
                cx(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            }),
            CMat::from_fn(2, 2, |_, _| {
                cx(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            }),
        ])
        .unwrap();
        let basis = AlgebraBasis::compute(&lambda, &t).unwrap();
        let words = basis.relation_words().len();
        let m = basis.relation_matrix();
        let ns = basis.relation_nullspace();
        assert_eq!(ns.nrows(), words);
        assert_eq!(ns.ncols(), words - basis.dim());
        assert!((ns.adjoint() * &ns - CMat::identity(ns.ncols(), ns.ncols())).norm() < 1e-10);
        assert!((m * &ns).norm() < 1e-10);

        // random combinations of kernel columns vanish at the tuple and stay
        // small at variety points
        let x = lambda.direct_sum(&lambda).unwrap();
        for _ in 0..20 {
            let mut coeffs = CVec::zeros(words);
            for col in 0..ns.ncols() {
                let c = cx(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                coeffs += ns.column(col).map(|z| z * c);
            }
            let mut p = FreePoly::zero(2);
            for (i, w) in basis.relation_words().iter().enumerate() {
                p = p.add(&FreePoly::monomial(2, w.clone(), coeffs[i]));
            }
            assert!(eval(&p, &lambda).unwrap().norm() <= 1e-12 * coeffs.norm().max(1.0));
            assert!(eval(&p, &x).unwrap().norm() <= 1e-8 * coeffs.norm().max(1.0));
        }
    }

    #[test]
    fn relation_polys_vanish_at_the_tuple() {
        let t = tols();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let lambda = MatrixTuple::new(vec![
            CMat::from_fn(2, 2, |_, _| {
                cx(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            }),
            CMat::from_fn(2, 2, |_, _| {
                cx(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            }),
        ])
        .unwrap();
        let basis = AlgebraBasis::compute(&lambda, &t).unwrap();
        for p in basis.relation_polys() {
            assert!(eval(&p, &lambda).unwrap().norm() < 1e-10);
        }
    }

    #[test]
    fn expansions_evaluate_to_basis_mats() {
        let t = tols();
        let lambda = MatrixTuple::new(vec![
            cmat(3, 3, &[0.1, 0.5, 0.0, 0.0, 0.2, 0.5, 0.0, 0.0, 0.3]),
            cmat(3, 3, &[0.0, 0.0, 0.4, 0.6, 0.0, 0.0, 0.0, 0.3, 0.0]),
        ])
        .unwrap();
        let basis = AlgebraBasis::compute(&lambda, &t).unwrap();
        for (poly, mat) in basis.word_expansions().iter().zip(basis.basis_mats()) {
            let v = eval(poly, &lambda).unwrap();
            assert!((v - mat).norm() < 1e-10);
        }
        // the identity lies in the span
        let id = CMat::identity(3, 3);
        assert!(basis.membership(&id, t.membership).unwrap().is_some());
    }
}
