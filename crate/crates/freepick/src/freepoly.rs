//! Free (noncommutative) polynomial algebra.
//!
//! Polynomials in `d` noncommuting variables `x1..xd` with complex
//! coefficients, together with square tuples of complex matrices to evaluate
//! them on. A word is a monomial; multiplication concatenates words and is
//! not commutative. Matrix-valued polynomials evaluate blockwise, which is
//! how the basic open domains `{ x : ||delta(x)|| < 1 }` are defined.
//!
//! Values are immutable after construction and all operations are pure.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::numerics::{cx, op_norm, CMat, C64};

mod parse;

pub use parse::ParseError;

const COEFF_DROP: f64 = 1e-14;

/// A monomial in noncommuting variables: a finite sequence of letters.
/// Letters are stored zero-based; the empty word is the multiplicative unit.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word {
    letters: Vec<u16>,
}

impl Word {
    pub fn empty() -> Self {
        Word {
            letters: Vec::new(),
        }
    }

    /// Single letter `r` (zero-based).
    pub fn letter(r: usize) -> Self {
        Word {
            letters: vec![r as u16],
        }
    }

    pub fn from_letters(letters: &[usize]) -> Self {
        Word {
            letters: letters.iter().map(|&l| l as u16).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.letters.iter().map(|&l| l as usize)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn append(&self, r: usize) -> Word {
        let mut letters = self.letters.clone();
        letters.push(r as u16);
        Word { letters }
    }

    fn prefix(&self) -> Option<(Word, usize)> {
        let (&last, rest) = self.letters.split_last()?;
        Some((
            Word {
                letters: rest.to_vec(),
            },
            last as usize,
        ))
    }
}

// Degree-lexicographic order: shorter words first, ties broken letterwise.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        // compact runs of equal letters as powers
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == l {
                run += 1;
            }
            if run == 1 {
                parts.push(format!("x{}", l + 1));
            } else {
                parts.push(format!("x{}^{}", l + 1, run));
            }
            i += run;
        }
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("variable count mismatch: {0} vs {1}")]
    DimsMismatch(usize, usize),
    #[error("matrix tuple is empty")]
    EmptyTuple,
    #[error("tuple entries must be square matrices of one size")]
    RaggedTuple,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A free polynomial: a finitely supported map from words to complex
/// coefficients. Terms with modulus below `1e-14` are dropped after
/// arithmetic so the support stays honest.
#[derive(Clone, Debug, PartialEq)]
pub struct FreePoly {
    dims: usize,
    terms: BTreeMap<Word, C64>,
}

impl FreePoly {
    pub fn zero(dims: usize) -> Self {
        FreePoly {
            dims,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dims: usize) -> Self {
        Self::constant(dims, cx(1.0, 0.0))
    }

    pub fn constant(dims: usize, c: C64) -> Self {
        let mut p = Self::zero(dims);
        if c.norm() > COEFF_DROP {
            p.terms.insert(Word::empty(), c);
        }
        p
    }

    /// The variable `x{r+1}` (zero-based `r`).
    pub fn variable(dims: usize, r: usize) -> Self {
        assert!(r < dims, "variable index out of range");
        let mut p = Self::zero(dims);
        p.terms.insert(Word::letter(r), cx(1.0, 0.0));
        p
    }

    pub fn monomial(dims: usize, word: Word, c: C64) -> Self {
        let mut p = Self::zero(dims);
        if c.norm() > COEFF_DROP {
            p.terms.insert(word, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, C64)>>(dims: usize, terms: I) -> Self {
        let mut p = Self::zero(dims);
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    /// Parses the grammar described in [`parse`].
    pub fn parse(text: &str, dims: usize) -> Result<Self, ParseError> {
        parse::parse(text, dims)
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> C64 {
        self.terms.get(w).cloned().unwrap_or_else(|| cx(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximum stored word length; the zero polynomial has degree -1.
    pub fn degree(&self) -> isize {
        self.terms
            .keys()
            .map(|w| w.len() as isize)
            .max()
            .unwrap_or(-1)
    }

    fn add_term(&mut self, w: Word, c: C64) {
        let entry = self.terms.entry(w);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                if c.norm() > COEFF_DROP {
                    v.insert(c);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = *o.get() + c;
                if s.norm() > COEFF_DROP {
                    o.insert(s);
                } else {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &FreePoly) -> FreePoly {
        assert_eq!(self.dims, other.dims, "dims mismatch");
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &FreePoly) -> FreePoly {
        assert_eq!(self.dims, other.dims, "dims mismatch");
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -*c);
        }
        out
    }

    pub fn neg(&self) -> FreePoly {
        self.scale(cx(-1.0, 0.0))
    }

    pub fn scale(&self, s: C64) -> FreePoly {
        let mut out = FreePoly::zero(self.dims);
        for (w, c) in &self.terms {
            let v = c * s;
            if v.norm() > COEFF_DROP {
                out.terms.insert(w.clone(), v);
            }
        }
        out
    }

    /// Noncommutative product: words concatenate.
    pub fn mul(&self, other: &FreePoly) -> FreePoly {
        assert_eq!(self.dims, other.dims, "dims mismatch");
        let mut out = FreePoly::zero(self.dims);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                out.add_term(wa.concat(wb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> FreePoly {
        let mut out = FreePoly::one(self.dims);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }
}

fn format_real(x: f64) -> String {
    format!("{}", x)
}

/// Formats a coefficient for use in front of a word (needs parens when both
/// parts are present so that `*` binds correctly on re-parse).
fn format_coeff(c: C64) -> String {
    if c.im == 0.0 {
        format_real(c.re)
    } else if c.re == 0.0 {
        format!("{}i", format_real(c.im))
    } else if c.im < 0.0 {
        format!("({}-{}i)", format_real(c.re), format_real(-c.im))
    } else {
        format!("({}+{}i)", format_real(c.re), format_real(c.im))
    }
}

impl fmt::Display for FreePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (idx, (w, &c)) in self.terms.iter().enumerate() {
            // pull a minus through for purely real or purely imaginary coefficients
            let (sign_minus, c_abs) = if c.im == 0.0 && c.re < 0.0 {
                (true, cx(-c.re, 0.0))
            } else if c.re == 0.0 && c.im < 0.0 {
                (true, cx(0.0, -c.im))
            } else {
                (false, c)
            };
            let body = if w.is_empty() {
                format_coeff(c_abs)
            } else if c_abs == cx(1.0, 0.0) {
                format!("{}", w)
            } else {
                format!("{}*{}", format_coeff(c_abs), w)
            };
            if idx == 0 {
                if sign_minus {
                    out.push('-');
                }
                out.push_str(&body);
            } else {
                out.push_str(if sign_minus { " - " } else { " + " });
                out.push_str(&body);
            }
        }
        write!(f, "{}", out)
    }
}

/// A point of the matrix universe: `d` complex square matrices of one size.
#[derive(Clone, Debug)]
pub struct MatrixTuple {
    mats: Vec<CMat>,
}

impl MatrixTuple {
    pub fn new(mats: Vec<CMat>) -> Result<Self, PolyError> {
        if mats.is_empty() {
            return Err(PolyError::EmptyTuple);
        }
        let n = mats[0].nrows();
        for m in &mats {
            if m.nrows() != n || m.ncols() != n {
                return Err(PolyError::RaggedTuple);
            }
        }
        Ok(MatrixTuple { mats })
    }

    /// Tuple of 1x1 matrices from scalars.
    pub fn scalars(vals: &[C64]) -> Self {
        MatrixTuple {
            mats: vals
                .iter()
                .map(|&v| CMat::from_row_slice(1, 1, &[v]))
                .collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.mats[0].nrows()
    }

    pub fn dims(&self) -> usize {
        self.mats.len()
    }

    pub fn mats(&self) -> &[CMat] {
        &self.mats
    }

    pub fn mat(&self, r: usize) -> &CMat {
        &self.mats[r]
    }

    /// Entrywise block-diagonal direct sum.
    pub fn direct_sum(&self, other: &MatrixTuple) -> Result<MatrixTuple, PolyError> {
        if self.dims() != other.dims() {
            return Err(PolyError::DimsMismatch(self.dims(), other.dims()));
        }
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| crate::numerics::direct_sum(a, b))
            .collect();
        Ok(MatrixTuple { mats })
    }

    /// Conjugated tuple `s^-1 x s`.
    pub fn similarity(&self, s: &CMat) -> Option<MatrixTuple> {
        let lu = s.clone().lu();
        let mats: Option<Vec<CMat>> = self.mats.iter().map(|m| lu.solve(&(m * s))).collect();
        mats.map(|mats| MatrixTuple { mats })
    }

    /// Upper-triangular 2x2 block tuple `[[x, h], [0, x]]` of doubled size.
    pub fn jordan_pair(&self, h: &MatrixTuple) -> Result<MatrixTuple, PolyError> {
        if self.dims() != h.dims() {
            return Err(PolyError::DimsMismatch(self.dims(), h.dims()));
        }
        if self.size() != h.size() {
            return Err(PolyError::RaggedTuple);
        }
        let n = self.size();
        let mats = self
            .mats
            .iter()
            .zip(&h.mats)
            .map(|(a, b)| {
                let mut m = CMat::zeros(2 * n, 2 * n);
                m.view_mut((0, 0), (n, n)).copy_from(a);
                m.view_mut((0, n), (n, n)).copy_from(b);
                m.view_mut((n, n), (n, n)).copy_from(a);
                m
            })
            .collect();
        Ok(MatrixTuple { mats })
    }
}

/// Evaluates polynomials on one fixed tuple, caching word values by prefix.
pub struct TupleEvaluator<'a> {
    x: &'a MatrixTuple,
    cache: RefCell<HashMap<Word, CMat>>,
}

impl<'a> TupleEvaluator<'a> {
    pub fn new(x: &'a MatrixTuple) -> Self {
        TupleEvaluator {
            x,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn tuple(&self) -> &MatrixTuple {
        self.x
    }

    pub fn eval_word(&self, w: &Word) -> CMat {
        let n = self.x.size();
        if w.is_empty() {
            return CMat::identity(n, n);
        }
        if let Some(m) = self.cache.borrow().get(w) {
            return m.clone();
        }
        // walk up the longest cached prefix, then extend one letter at a time
        let (prefix, last) = w.prefix().expect("nonempty");
        let base = self.eval_word(&prefix);
        let m = &base * self.x.mat(last);
        self.cache.borrow_mut().insert(w.clone(), m.clone());
        m
    }

    pub fn eval(&self, p: &FreePoly) -> Result<CMat, PolyError> {
        if p.dims() != self.x.dims() {
            return Err(PolyError::DimsMismatch(p.dims(), self.x.dims()));
        }
        let n = self.x.size();
        let mut out = CMat::zeros(n, n);
        for (w, &c) in p.terms() {
            let m = self.eval_word(w);
            out.zip_apply(&m, |o, v| *o += v * c);
        }
        Ok(out)
    }
}

/// Substitutes the tuple into the polynomial; the empty word maps to the
/// identity, so evaluation is unital and multiplicative on words.
pub fn eval(p: &FreePoly, x: &MatrixTuple) -> Result<CMat, PolyError> {
    TupleEvaluator::new(x).eval(p)
}

/// A rectangular matrix of free polynomials over one variable count.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    dims: usize,
    rows: usize,
    cols: usize,
    entries: Vec<FreePoly>, // row-major
}

impl PolyMatrix {
    pub fn new(dims: usize, rows: usize, cols: usize, entries: Vec<FreePoly>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        for e in &entries {
            assert_eq!(e.dims(), dims, "all entries must share one variable count");
        }
        PolyMatrix {
            dims,
            rows,
            cols,
            entries,
        }
    }

    /// The 1x1 matrix `[x1]`.
    pub fn scalar_var(dims: usize) -> Self {
        PolyMatrix::new(dims, 1, 1, vec![FreePoly::variable(dims, 0)])
    }

    /// Diagonal matrix with the variables `x1..xd` on the diagonal.
    pub fn diag_vars(dims: usize) -> Self {
        let mut entries = vec![FreePoly::zero(dims); dims * dims];
        for r in 0..dims {
            entries[r * dims + r] = FreePoly::variable(dims, r);
        }
        PolyMatrix::new(dims, dims, dims, entries)
    }

    /// d x d matrix with first column `x1..xd` and zeros elsewhere, so that
    /// `delta(x)* delta(x)` has top-left block `sum_r x_r* x_r` (the row ball).
    pub fn row_ball(dims: usize) -> Self {
        let mut entries = vec![FreePoly::zero(dims); dims * dims];
        for r in 0..dims {
            entries[r * dims] = FreePoly::variable(dims, r);
        }
        PolyMatrix::new(dims, dims, dims, entries)
    }

    pub fn from_grid(dims: usize, grid: &[Vec<String>]) -> Result<Self, PolyError> {
        let rows = grid.len();
        let cols = if rows == 0 { 0 } else { grid[0].len() };
        let mut entries = Vec::with_capacity(rows * cols);
        for row in grid {
            if row.len() != cols {
                return Err(PolyError::RaggedTuple);
            }
            for s in row {
                entries.push(FreePoly::parse(s, dims)?);
            }
        }
        Ok(PolyMatrix::new(dims, rows, cols, entries))
    }

    pub fn to_grid(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.entry(r, c).to_string())
                    .collect()
            })
            .collect()
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> &FreePoly {
        &self.entries[r * self.cols + c]
    }

    /// Block evaluation: the `(i, j)` block of the result is `entry(i, j)(x)`.
    pub fn eval_with(&self, ev: &TupleEvaluator) -> Result<CMat, PolyError> {
        let n = ev.tuple().size();
        let mut out = CMat::zeros(self.rows * n, self.cols * n);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let block = ev.eval(self.entry(r, c))?;
                out.view_mut((r * n, c * n), (n, n)).copy_from(&block);
            }
        }
        Ok(out)
    }

    pub fn eval(&self, x: &MatrixTuple) -> Result<CMat, PolyError> {
        self.eval_with(&TupleEvaluator::new(x))
    }
}

/// Operator norm of `delta(x)` and whether it clears `1 - margin`.
pub fn in_domain(
    delta: &PolyMatrix,
    x: &MatrixTuple,
    margin: f64,
) -> Result<(bool, f64), PolyError> {
    let v = delta.eval(x)?;
    let norm = op_norm(&v)
        .map_err(|_| PolyError::RaggedTuple)
        .unwrap_or(f64::INFINITY);
    Ok((norm < 1.0 - margin, norm))
}

/// Directional derivative of `p` at `x` in direction `h`, read off the upper
/// corner block of the evaluation on `[[x, h], [0, x]]`.
pub fn poly_derivative(p: &FreePoly, x: &MatrixTuple, h: &MatrixTuple) -> Result<CMat, PolyError> {
    let pair = x.jordan_pair(h)?;
    let big = eval(p, &pair)?;
    let n = x.size();
    Ok(big.view((0, n), (n, n)).into_owned())
}
