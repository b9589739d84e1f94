//! Exact linear algebra over the rationals and prime fields.
//!
//! Everything downstream (sections, truncations, axiom checks) reduces to
//! ranks, kernels and linear solves of sparse matrices, so those live here
//! together with cochain complexes, chain maps, mapping cones and double
//! complexes.  Degree windows are explicit: a complex stores its lowest
//! degree `lo` and a dimension vector; everything outside the window is zero.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("differential does not square to zero at degree {0}")]
    DifferentialSquare(i32),
    #[error("chain map does not commute with differentials at degree {0}")]
    NotChainMap(i32),
    #[error("double complex squares do not commute at ({0}, {1})")]
    SquareMismatch(i32, i32),
    #[error("linear system is inconsistent")]
    Inconsistent,
}

// ---------------------------------------------------------------------------
// Fields and scalars
// ---------------------------------------------------------------------------

/// Coefficient field: the rationals or a prime field `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Field {
    Q,
    Fp(u64),
}

impl Field {
    /// Construct a prime field, validating primality.
    pub fn prime(p: u64) -> Result<Field, LinalgError> {
        if p < 2 {
            return Err(LinalgError::NotPrime(p));
        }
        let mut d = 2u64;
        while d.saturating_mul(d) <= p {
            if p.is_multiple_of(d) {
                return Err(LinalgError::NotPrime(p));
            }
            d += 1;
        }
        Ok(Field::Fp(p))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::zero()),
            Field::Fp(_) => Scalar::Fp(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::one()),
            Field::Fp(_) => Scalar::Fp(1),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::from(BigInt::from(v))),
            Field::Fp(p) => {
                let m = v.rem_euclid(*p as i64) as u64;
                Scalar::Fp(m)
            }
        }
    }

    /// Parse an integer or `a/b` fraction literal.
    pub fn parse(&self, s: &str) -> Option<Scalar> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let n: i64 = num.trim().parse().ok()?;
            let d: i64 = den.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(self.div(&self.from_i64(n), &self.from_i64(d)))
        } else {
            let n: i64 = s.parse().ok()?;
            Some(self.from_i64(n))
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Q, Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x + y),
            (Field::Fp(p), Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp((x + y) % p),
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Q, Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x * y),
            (Field::Fp(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Field::Q, Scalar::Q(x)) => Scalar::Q(-x),
            (Field::Fp(p), Scalar::Fp(x)) => Scalar::Fp(if *x == 0 { 0 } else { p - x }),
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Field::Q, Scalar::Q(x)) => {
                assert!(!x.is_zero(), "division by zero");
                Scalar::Q(x.recip())
            }
            (Field::Fp(p), Scalar::Fp(x)) => {
                assert!(*x != 0, "division by zero");
                // Fermat: x^(p-2) mod p.
                let mut base = *x as u128;
                let mut exp = p - 2;
                let m = *p as u128;
                let mut acc: u128 = 1;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % m;
                    }
                    base = base * base % m;
                    exp >>= 1;
                }
                Scalar::Fp(acc as u64)
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.mul(a, &self.inv(b))
    }
}

/// An element of the active coefficient field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Scalar {
    Q(BigRational),
    Fp(u64),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(x) => x.is_zero(),
            Scalar::Fp(x) => *x == 0,
        }
    }

    /// Unit entries make the cheapest pivots.
    fn pivot_cost(&self, field: &Field) -> u32 {
        match (self, field) {
            (Scalar::Q(x), _) => {
                if x.is_one() || (-x).is_one() {
                    0
                } else if x.numer().is_one() || x.numer().abs().is_one() {
                    1
                } else {
                    2
                }
            }
            (Scalar::Fp(x), Field::Fp(p))
                if (*x == 1 || *x == p - 1) => {
                    0
                }
            _ => 2,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(x) => write!(f, "{x}"),
            Scalar::Fp(x) => write!(f, "{x}"),
        }
    }
}

// ---------------------------------------------------------------------------
// Sparse matrices
// ---------------------------------------------------------------------------

type SparseRow = Vec<(usize, Scalar)>;

/// Row-major sparse matrix; rows hold (column, value) pairs sorted by column.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMat {
    pub nrows: usize,
    pub ncols: usize,
    rows: Vec<SparseRow>,
}

impl SparseMat {
    pub fn zero(nrows: usize, ncols: usize) -> SparseMat {
        SparseMat { nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    pub fn identity(n: usize, field: &Field) -> SparseMat {
        let mut m = SparseMat::zero(n, n);
        for i in 0..n {
            m.rows[i].push((i, field.one()));
        }
        m
    }

    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Scalar)>,
        field: &Field,
    ) -> SparseMat {
        let mut acc: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); nrows];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet out of range");
            let slot = acc[r].entry(c).or_insert_with(|| field.zero());
            *slot = field.add(slot, &v);
        }
        let rows = acc
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        SparseMat { nrows, ncols, rows }
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(r < self.nrows && c < self.ncols);
        let row = &mut self.rows[r];
        match row.binary_search_by_key(&c, |e| e.0) {
            Ok(i) => {
                if v.is_zero() {
                    row.remove(i);
                } else {
                    row[i].1 = v;
                }
            }
            Err(i) => {
                if !v.is_zero() {
                    row.insert(i, (c, v));
                }
            }
        }
    }

    pub fn get(&self, r: usize, c: usize, field: &Field) -> Scalar {
        match self.rows[r].binary_search_by_key(&c, |e| e.0) {
            Ok(i) => self.rows[r][i].1.clone(),
            Err(_) => field.zero(),
        }
    }

    pub fn row(&self, r: usize) -> &[(usize, Scalar)] {
        &self.rows[r]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn transpose(&self, field: &Field) -> SparseMat {
        let mut t = SparseMat::zero(self.ncols, self.nrows);
        let _ = field;
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                t.rows[*c].push((r, v.clone()));
            }
        }
        for row in &mut t.rows {
            row.sort_by_key(|e| e.0);
        }
        t
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &SparseMat, field: &Field) -> SparseMat {
        assert_eq!(self.ncols, other.nrows, "product shape mismatch");
        let mut out = SparseMat::zero(self.nrows, other.ncols);
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (k, v) in row {
                for (c, w) in &other.rows[*k] {
                    let slot = acc.entry(*c).or_insert_with(|| field.zero());
                    *slot = field.add(slot, &field.mul(v, w));
                }
            }
            out.rows[r] = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        }
        out
    }

    pub fn add(&self, other: &SparseMat, field: &Field) -> SparseMat {
        assert!(self.nrows == other.nrows && self.ncols == other.ncols);
        let mut out = SparseMat::zero(self.nrows, self.ncols);
        for r in 0..self.nrows {
            out.rows[r] = row_axpy(&self.rows[r], &field.one(), &other.rows[r], field);
        }
        out
    }

    pub fn scale(&self, s: &Scalar, field: &Field) -> SparseMat {
        let mut out = self.clone();
        for row in &mut out.rows {
            if s.is_zero() {
                row.clear();
            } else {
                for e in row.iter_mut() {
                    e.1 = field.mul(&e.1, s);
                }
            }
        }
        out
    }

    /// Apply to a dense column vector.
    pub fn apply(&self, v: &[Scalar], field: &Field) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ncols);
        let mut out = vec![field.zero(); self.nrows];
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc = field.zero();
            for (c, w) in row {
                if !v[*c].is_zero() {
                    acc = field.add(&acc, &field.mul(w, &v[*c]));
                }
            }
            out[r] = acc;
        }
        out
    }

    pub fn column(&self, c: usize, field: &Field) -> Vec<Scalar> {
        let mut out = vec![field.zero(); self.nrows];
        for (r, row) in self.rows.iter().enumerate() {
            if let Ok(i) = row.binary_search_by_key(&c, |e| e.0) {
                out[r] = row[i].1.clone();
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.nrows, other.nrows);
        let mut out = SparseMat::zero(self.nrows, self.ncols + other.ncols);
        for r in 0..self.nrows {
            let mut row = self.rows[r].clone();
            row.extend(other.rows[r].iter().map(|(c, v)| (c + self.ncols, v.clone())));
            out.rows[r] = row;
        }
        out
    }

    /// Matrix whose columns are the given dense vectors.
    pub fn from_columns(nrows: usize, cols: &[Vec<Scalar>]) -> SparseMat {
        let mut out = SparseMat::zero(nrows, cols.len());
        for (c, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), nrows);
            for (r, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    out.rows[r].push((c, v.clone()));
                }
            }
        }
        for row in &mut out.rows {
            row.sort_by_key(|e| e.0);
        }
        out
    }

    /// Columns as dense vectors.
    pub fn columns(&self, field: &Field) -> Vec<Vec<Scalar>> {
        (0..self.ncols).map(|c| self.column(c, field)).collect()
    }
}

/// `a + s * b` on sparse rows.
fn row_axpy(a: &SparseRow, s: &Scalar, b: &SparseRow, field: &Field) -> SparseRow {
    let mut out = SparseRow::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some((ca, va)), Some((cb, vb))) => {
                if ca < cb {
                    out.push((*ca, va.clone()));
                    i += 1;
                } else if cb < ca {
                    let v = field.mul(s, vb);
                    if !v.is_zero() {
                        out.push((*cb, v));
                    }
                    j += 1;
                } else {
                    let v = field.add(va, &field.mul(s, vb));
                    if !v.is_zero() {
                        out.push((*ca, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            (Some((ca, va)), None) => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (None, Some((cb, vb))) => {
                let v = field.mul(s, vb);
                if !v.is_zero() {
                    out.push((*cb, v));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Elimination
// ---------------------------------------------------------------------------

/// Reduced row echelon data.  Columns are processed left to right, so the
/// pivot columns of the input matrix are exactly `pivots[i].0` — this makes
/// the routine usable for selecting independent columns, not just ranks.
struct Rref {
    /// (pivot column, row content) with the pivot normalized to one and all
    /// other pivot columns eliminated from every row.
    pivots: Vec<(usize, SparseRow)>,
    /// Rows that reduced to zero keep their original index here.
    #[allow(dead_code)]
    zero_rows: Vec<usize>,
    /// For solves on augmented matrices: rows that are zero on the leading
    /// `restrict_cols` part but not beyond it.
    inconsistent: bool,
    /// Original row index of each pivot row (tracks augmented solves).
    pivot_src: Vec<usize>,
}

/// Full RREF of `mat`, treating only the first `restrict_cols` columns as
/// eligible pivot columns (pass `mat.ncols` for a plain reduction).
fn rref(mat: &SparseMat, field: &Field, restrict_cols: usize) -> Rref {
    let mut work: Vec<SparseRow> = mat.rows.clone();
    let mut alive: Vec<usize> = (0..work.len()).collect();
    let mut pivots: Vec<(usize, SparseRow)> = Vec::new();
    let mut pivot_src: Vec<usize> = Vec::new();
    let mut zero_rows: Vec<usize> = Vec::new();
    let mut inconsistent = false;

    for col in 0..restrict_cols {
        // Select the cheapest candidate row with a nonzero in this column.
        let mut best: Option<(u32, usize, usize)> = None; // (cost, nnz, alive idx)
        for (ai, &ri) in alive.iter().enumerate() {
            let row = &work[ri];
            if let Ok(k) = row.binary_search_by_key(&col, |e| e.0) {
                let cost = row[k].1.pivot_cost(field);
                let key = (cost, row.len(), ai);
                if best.is_none_or(|b| key < (b.0, b.1, b.2)) {
                    best = Some(key);
                }
            }
        }
        let Some((_, _, ai)) = best else { continue };
        let ri = alive.swap_remove(ai);
        let mut prow = std::mem::take(&mut work[ri]);
        // Normalize the pivot to one.
        let k = prow.binary_search_by_key(&col, |e| e.0).unwrap();
        let pv = prow[k].1.clone();
        if !matches!(&pv, Scalar::Q(x) if x.is_one()) && !matches!(&pv, Scalar::Fp(1)) {
            let inv = field.inv(&pv);
            for e in prow.iter_mut() {
                e.1 = field.mul(&e.1, &inv);
            }
        }
        // Eliminate from all remaining rows and all previous pivot rows.
        for &rj in &alive {
            if let Ok(k) = work[rj].binary_search_by_key(&col, |e| e.0) {
                let coef = field.neg(&work[rj][k].1);
                work[rj] = row_axpy(&work[rj], &coef, &prow, field);
            }
        }
        for (_, prev) in pivots.iter_mut() {
            if let Ok(k) = prev.binary_search_by_key(&col, |e| e.0) {
                let coef = field.neg(&prev[k].1);
                *prev = row_axpy(prev, &coef, &prow, field);
            }
        }
        pivots.push((col, prow));
        pivot_src.push(ri);
    }

    for &ri in &alive {
        if work[ri].is_empty() {
            zero_rows.push(ri);
        } else {
            // Nonzero content beyond the restricted columns.
            inconsistent = true;
        }
    }

    Rref { pivots, zero_rows, inconsistent, pivot_src }
}

impl SparseMat {
    pub fn rank(&self, field: &Field) -> usize {
        rref(self, field, self.ncols).pivots.len()
    }

    /// Basis of the right kernel, as columns of a matrix.
    pub fn kernel_basis(&self, field: &Field) -> SparseMat {
        let r = rref(self, field, self.ncols);
        let pivot_cols: Vec<usize> = r.pivots.iter().map(|p| p.0).collect();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.ncols];
            for &c in &pivot_cols {
                v[c] = true;
            }
            v
        };
        let free: Vec<usize> = (0..self.ncols).filter(|c| !is_pivot[*c]).collect();
        let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![field.zero(); self.ncols];
            v[f] = field.one();
            for (pc, row) in &r.pivots {
                if let Ok(k) = row.binary_search_by_key(&f, |e| e.0) {
                    v[*pc] = field.neg(&row[k].1);
                }
            }
            cols.push(v);
        }
        SparseMat::from_columns(self.ncols, &cols)
    }

    /// Solve `self * X = rhs`; `None` when inconsistent.  Free variables are
    /// set to zero, so the solution is unique whenever `self` has full
    /// column rank (the only case the callers rely on).
    pub fn solve(&self, rhs: &SparseMat, field: &Field) -> Option<SparseMat> {
        assert_eq!(self.nrows, rhs.nrows, "solve shape mismatch");
        let aug = self.hstack(rhs);
        let r = rref(&aug, field, self.ncols);
        if r.inconsistent {
            return None;
        }
        let mut x = SparseMat::zero(self.ncols, rhs.ncols);
        for (pc, row) in &r.pivots {
            for (c, v) in row {
                if *c >= self.ncols {
                    x.rows[*pc].push((c - self.ncols, v.clone()));
                }
            }
        }
        for row in &mut x.rows {
            row.sort_by_key(|e| e.0);
        }
        Some(x)
    }

    /// Indices of a maximal set of linearly independent columns (leftmost).
    pub fn independent_columns(&self, field: &Field) -> Vec<usize> {
        rref(self, field, self.ncols).pivots.iter().map(|p| p.0).collect()
    }

    /// Basis of the column space, as columns of the original matrix.
    pub fn column_space_basis(&self, field: &Field) -> SparseMat {
        let cols = self.independent_columns(field);
        let dense: Vec<Vec<Scalar>> = cols.iter().map(|&c| self.column(c, field)).collect();
        SparseMat::from_columns(self.nrows, &dense)
    }

    /// Original row indices of a maximal independent row set.
    pub fn independent_rows(&self, field: &Field) -> Vec<usize> {
        let t = self.transpose(field);
        t.independent_columns(field)
    }

    /// Row indices selected as pivot rows during left-to-right elimination —
    /// used to extend a spanning set by preferring earlier rows.
    #[allow(dead_code)]
    fn pivot_rows(&self, field: &Field) -> Vec<usize> {
        rref(self, field, self.ncols).pivot_src
    }
}

// ---------------------------------------------------------------------------
// Cochain complexes
// ---------------------------------------------------------------------------

/// A bounded cochain complex with an explicit degree window.
///
/// `dims[i]` is the dimension in degree `lo + i`; `diffs[i]` is the matrix of
/// `d : C^(lo+i) -> C^(lo+i+1)` with columns indexed by the source basis.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub field: Field,
    pub lo: i32,
    pub dims: Vec<usize>,
    pub diffs: Vec<SparseMat>,
}

impl CochainComplex {
    pub fn new(
        field: Field,
        lo: i32,
        dims: Vec<usize>,
        diffs: Vec<SparseMat>,
    ) -> Result<CochainComplex, LinalgError> {
        if !dims.is_empty() && diffs.len() + 1 != dims.len() {
            return Err(LinalgError::ShapeMismatch(format!(
                "{} degrees need {} differentials, got {}",
                dims.len(),
                dims.len() - 1,
                diffs.len()
            )));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.nrows != dims[i + 1] || d.ncols != dims[i] {
                return Err(LinalgError::ShapeMismatch(format!(
                    "differential at degree {} has shape {}x{}, expected {}x{}",
                    lo + i as i32,
                    d.nrows,
                    d.ncols,
                    dims[i + 1],
                    dims[i]
                )));
            }
        }
        let c = CochainComplex { field, lo, dims, diffs };
        for i in 0..c.diffs.len().saturating_sub(1) {
            if !c.diffs[i + 1].mul(&c.diffs[i], &c.field).is_zero() {
                return Err(LinalgError::DifferentialSquare(c.lo + i as i32));
            }
        }
        Ok(c)
    }

    /// The zero complex.
    pub fn zero(field: Field) -> CochainComplex {
        CochainComplex { field, lo: 0, dims: Vec::new(), diffs: Vec::new() }
    }

    /// A single vector space `F^n` concentrated in the given degree.
    pub fn concentrated(field: Field, degree: i32, n: usize) -> CochainComplex {
        if n == 0 {
            return CochainComplex::zero(field);
        }
        CochainComplex { field, lo: degree, dims: vec![n], diffs: Vec::new() }
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.dims.len() as i32 - 1
    }

    pub fn dim_at(&self, degree: i32) -> usize {
        let i = degree - self.lo;
        if i < 0 || i as usize >= self.dims.len() {
            0
        } else {
            self.dims[i as usize]
        }
    }

    /// Matrix of `d : C^degree -> C^(degree+1)` (zero outside the window).
    pub fn diff_at(&self, degree: i32) -> SparseMat {
        let i = degree - self.lo;
        if i >= 0 && (i as usize) < self.diffs.len() {
            self.diffs[i as usize].clone()
        } else {
            SparseMat::zero(self.dim_at(degree + 1), self.dim_at(degree))
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Betti numbers per degree; zero entries are omitted.
    pub fn cohomology(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for i in 0..self.dims.len() {
            let deg = self.lo + i as i32;
            let d_out_rank = if i < self.diffs.len() { self.diffs[i].rank(&self.field) } else { 0 };
            let d_in_rank = if i > 0 { self.diffs[i - 1].rank(&self.field) } else { 0 };
            let b = self.dims[i] - d_out_rank - d_in_rank;
            if b > 0 {
                out.insert(deg, b);
            }
        }
        out
    }

    /// Shift: `(C[m])^i = C^(i+m)`, with differentials scaled by `(-1)^m`.
    pub fn shift(&self, m: i32) -> CochainComplex {
        let sign = if m.rem_euclid(2) == 0 { 1 } else { -1 };
        let diffs = self
            .diffs
            .iter()
            .map(|d| {
                if sign == 1 {
                    d.clone()
                } else {
                    d.scale(&self.field.from_i64(-1), &self.field)
                }
            })
            .collect();
        CochainComplex { field: self.field, lo: self.lo - m, dims: self.dims.clone(), diffs }
    }

    /// Drop zero dimensions at both ends of the window.
    pub fn trimmed(&self) -> CochainComplex {
        let mut lo_i = 0;
        let mut hi_i = self.dims.len();
        while lo_i < hi_i && self.dims[lo_i] == 0 {
            lo_i += 1;
        }
        while hi_i > lo_i && self.dims[hi_i - 1] == 0 {
            hi_i -= 1;
        }
        if lo_i == hi_i {
            return CochainComplex::zero(self.field);
        }
        CochainComplex {
            field: self.field,
            lo: self.lo + lo_i as i32,
            dims: self.dims[lo_i..hi_i].to_vec(),
            diffs: self.diffs[lo_i..hi_i - 1].to_vec(),
        }
    }
}

/// A degreewise linear map of cochain complexes; missing degrees are zero.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub comps: BTreeMap<i32, SparseMat>,
}

impl ChainMap {
    pub fn zero() -> ChainMap {
        ChainMap { comps: BTreeMap::new() }
    }

    /// The identity chain map of a complex.
    pub fn identity(c: &CochainComplex) -> ChainMap {
        let mut comps = BTreeMap::new();
        for i in 0..c.dims.len() {
            if c.dims[i] > 0 {
                comps.insert(c.lo + i as i32, SparseMat::identity(c.dims[i], &c.field));
            }
        }
        ChainMap { comps }
    }

    pub fn comp_at(&self, degree: i32, source: &CochainComplex, target: &CochainComplex) -> SparseMat {
        self.comps
            .get(&degree)
            .cloned()
            .unwrap_or_else(|| SparseMat::zero(target.dim_at(degree), source.dim_at(degree)))
    }

    /// Check `f` commutes with the differentials.
    pub fn validate(
        &self,
        source: &CochainComplex,
        target: &CochainComplex,
    ) -> Result<(), LinalgError> {
        let lo = source.lo.min(target.lo);
        let hi = source.hi().max(target.hi());
        for (deg, m) in &self.comps {
            if m.nrows != target.dim_at(*deg) || m.ncols != source.dim_at(*deg) {
                return Err(LinalgError::ShapeMismatch(format!(
                    "chain map at degree {deg} has shape {}x{}, expected {}x{}",
                    m.nrows,
                    m.ncols,
                    target.dim_at(*deg),
                    source.dim_at(*deg)
                )));
            }
        }
        for deg in lo..=hi {
            let f_d = self
                .comp_at(deg + 1, source, target)
                .mul(&source.diff_at(deg), &source.field);
            let d_f = target.diff_at(deg).mul(&self.comp_at(deg, source, target), &source.field);
            if f_d != d_f {
                return Err(LinalgError::NotChainMap(deg));
            }
        }
        Ok(())
    }

    /// Compose `self` after `first` (i.e. `self ∘ first`).
    pub fn compose(
        &self,
        first: &ChainMap,
        a: &CochainComplex,
        b: &CochainComplex,
        c: &CochainComplex,
    ) -> ChainMap {
        let mut comps = BTreeMap::new();
        let lo = a.lo.min(b.lo).min(c.lo);
        let hi = a.hi().max(b.hi()).max(c.hi());
        for deg in lo..=hi {
            let m = self.comp_at(deg, b, c).mul(&first.comp_at(deg, a, b), &a.field);
            if !m.is_zero() {
                comps.insert(deg, m);
            }
        }
        ChainMap { comps }
    }
}

// ---------------------------------------------------------------------------
// Mapping cone
// ---------------------------------------------------------------------------

/// Mapping cone of `f : A -> B`: `Cone(f)^i = A^(i+1) ⊕ B^i` with
/// `d(a, b) = (-d_A a, f(a) + d_B b)`.  Block order is (A-part, B-part).
pub fn cone(f: &ChainMap, a: &CochainComplex, b: &CochainComplex) -> CochainComplex {
    let field = a.field;
    let lo = (a.lo - 1).min(b.lo);
    let hi = (a.hi() - 1).max(b.hi());
    if hi < lo {
        return CochainComplex::zero(field);
    }
    let dims: Vec<usize> = (lo..=hi).map(|i| a.dim_at(i + 1) + b.dim_at(i)).collect();
    let mut diffs = Vec::new();
    for i in lo..hi {
        let (sa, sb) = (a.dim_at(i + 1), b.dim_at(i));
        let (ta, tb) = (a.dim_at(i + 2), b.dim_at(i + 1));
        let mut d = SparseMat::zero(ta + tb, sa + sb);
        let da = a.diff_at(i + 1);
        for r in 0..da.nrows {
            for (c, v) in da.row(r) {
                d.set(r, *c, field.neg(v));
            }
        }
        let fi = f.comp_at(i + 1, a, b);
        for r in 0..fi.nrows {
            for (c, v) in fi.row(r) {
                d.set(ta + r, *c, v.clone());
            }
        }
        let db = b.diff_at(i);
        for r in 0..db.nrows {
            for (c, v) in db.row(r) {
                d.set(ta + r, sa + *c, v.clone());
            }
        }
        diffs.push(d);
    }
    CochainComplex::new(field, lo, dims, diffs).expect("cone differential must square to zero")
}

// ---------------------------------------------------------------------------
// Double complexes
// ---------------------------------------------------------------------------

/// A bounded double complex with commuting squares (`d_h d_v = d_v d_h`).
/// The total differential applies the sign twist `d = d_h + (-1)^p d_v`, so
/// squares anticommute after the adjustment and the total squares to zero.
#[derive(Clone, Debug)]
pub struct DoubleComplex {
    pub field: Field,
    pub p_lo: i32,
    pub q_lo: i32,
    /// dims[p][q]
    pub dims: Vec<Vec<usize>>,
    /// d_h[p][q] : (p,q) -> (p+1,q); the last p-row is absent.
    pub d_h: Vec<Vec<SparseMat>>,
    /// d_v[p][q] : (p,q) -> (p,q+1); the last q-column is absent.
    pub d_v: Vec<Vec<SparseMat>>,
}

/// Locates the block offsets of a total complex built from a double complex.
pub struct TotalIndex {
    pub lo: i32,
    /// offsets[m - lo] maps p to the basis offset of block (p, m - p).
    pub offsets: Vec<BTreeMap<i32, usize>>,
}

impl TotalIndex {
    pub fn offset(&self, total_degree: i32, p: i32) -> Option<usize> {
        let i = total_degree - self.lo;
        if i < 0 {
            return None;
        }
        self.offsets.get(i as usize).and_then(|m| m.get(&p)).copied()
    }
}

impl DoubleComplex {
    pub fn validate(&self) -> Result<(), LinalgError> {
        let np = self.dims.len();
        let nq = if np > 0 { self.dims[0].len() } else { 0 };
        for p in 0..np {
            for q in 0..nq {
                // d_h ∘ d_h = 0 (rows exist for p in 0..np-1).
                if p + 2 < np {
                    let a = self.d_h[p + 1][q].mul(&self.d_h[p][q], &self.field);
                    if !a.is_zero() {
                        return Err(LinalgError::DifferentialSquare(self.p_lo + p as i32));
                    }
                }
                // d_v ∘ d_v = 0 (columns exist for q in 0..nq-1).
                if q + 2 < nq {
                    let a = self.d_v[p][q + 1].mul(&self.d_v[p][q], &self.field);
                    if !a.is_zero() {
                        return Err(LinalgError::DifferentialSquare(self.q_lo + q as i32));
                    }
                }
                // Commuting squares.
                if p + 1 < np && q + 1 < nq {
                    let hv = self.d_h[p][q + 1].mul(&self.d_v[p][q], &self.field);
                    let vh = self.d_v[p + 1][q].mul(&self.d_h[p][q], &self.field);
                    if hv != vh {
                        return Err(LinalgError::SquareMismatch(
                            self.p_lo + p as i32,
                            self.q_lo + q as i32,
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Assemble the total complex; blocks in each total degree are ordered by
    /// ascending `p`.
    pub fn total_complex(&self) -> (CochainComplex, TotalIndex) {
        let np = self.dims.len() as i32;
        let nq = if np > 0 { self.dims[0].len() as i32 } else { 0 };
        if np == 0 || nq == 0 {
            return (
                CochainComplex::zero(self.field),
                TotalIndex { lo: 0, offsets: Vec::new() },
            );
        }
        let lo = self.p_lo + self.q_lo;
        let hi = (self.p_lo + np - 1) + (self.q_lo + nq - 1);
        let mut dims = Vec::new();
        let mut offsets = Vec::new();
        for m in lo..=hi {
            let mut total = 0usize;
            let mut offs = BTreeMap::new();
            for p in self.p_lo..self.p_lo + np {
                let q = m - p;
                if q < self.q_lo || q >= self.q_lo + nq {
                    continue;
                }
                let d = self.dims[(p - self.p_lo) as usize][(q - self.q_lo) as usize];
                offs.insert(p, total);
                total += d;
            }
            dims.push(total);
            offsets.push(offs);
        }
        let index = TotalIndex { lo, offsets };
        let mut diffs = Vec::new();
        for m in lo..hi {
            let src_dim = dims[(m - lo) as usize];
            let tgt_dim = dims[(m - lo + 1) as usize];
            let mut d = SparseMat::zero(tgt_dim, src_dim);
            for p in self.p_lo..self.p_lo + np {
                let q = m - p;
                if q < self.q_lo || q >= self.q_lo + nq {
                    continue;
                }
                let (pi, qi) = ((p - self.p_lo) as usize, (q - self.q_lo) as usize);
                let src_off = index.offset(m, p).unwrap();
                // Horizontal part to (p+1, q).
                if pi + 1 < np as usize {
                    if let Some(tgt_off) = index.offset(m + 1, p + 1) {
                        let h = &self.d_h[pi][qi];
                        for r in 0..h.nrows {
                            for (c, v) in h.row(r) {
                                d.set(tgt_off + r, src_off + c, v.clone());
                            }
                        }
                    }
                }
                // Vertical part to (p, q+1) with sign (-1)^p.
                if qi + 1 < nq as usize {
                    if let Some(tgt_off) = index.offset(m + 1, p) {
                        let v_mat = &self.d_v[pi][qi];
                        let negate = p.rem_euclid(2) == 1;
                        for r in 0..v_mat.nrows {
                            for (c, val) in v_mat.row(r) {
                                let x = if negate { self.field.neg(val) } else { val.clone() };
                                d.set(tgt_off + r, src_off + c, x);
                            }
                        }
                    }
                }
            }
            diffs.push(d);
        }
        let total = CochainComplex::new(self.field, lo, dims, diffs)
            .expect("total differential must square to zero");
        (total, index)
    }
}

// ---------------------------------------------------------------------------
// Cohomology bases and induced maps
// ---------------------------------------------------------------------------

/// Explicit cohomology representatives of a complex, with coordinates.
///
/// Per degree this stores a matrix `reps` whose columns are cycle
/// representatives of a basis of `H^i`, together with a basis `bnd` of the
/// boundary space, so that `[reps | bnd]` spans the cycle space and any
/// cycle's class coordinates can be read off a linear solve.
pub struct CohomologyBasis {
    pub field: Field,
    pub lo: i32,
    pub reps: Vec<SparseMat>,
    pub bnd: Vec<SparseMat>,
}

impl CohomologyBasis {
    pub fn new(c: &CochainComplex) -> CohomologyBasis {
        let field = c.field;
        let mut reps = Vec::new();
        let mut bnd = Vec::new();
        for i in 0..c.dims.len() {
            let deg = c.lo + i as i32;
            let cycles = c.diff_at(deg).kernel_basis(&field);
            let boundaries = c.diff_at(deg - 1).column_space_basis(&field);
            // Columns of `cycles` independent modulo the boundary space.
            let aug = boundaries.hstack(&cycles);
            let piv = aug.independent_columns(&field);
            let chosen: Vec<Vec<Scalar>> = piv
                .iter()
                .filter(|&&c_| c_ >= boundaries.ncols)
                .map(|&c_| cycles.column(c_ - boundaries.ncols, &field))
                .collect();
            reps.push(SparseMat::from_columns(c.dims[i], &chosen));
            bnd.push(boundaries);
        }
        CohomologyBasis { field, lo: c.lo, reps, bnd }
    }

    pub fn betti(&self, degree: i32) -> usize {
        let i = degree - self.lo;
        if i < 0 || i as usize >= self.reps.len() {
            0
        } else {
            self.reps[i as usize].ncols
        }
    }

    /// Class coordinates of cycle columns `z` in degree `degree`.
    /// Returns a `betti x z.ncols` matrix; `None` if some column is not a
    /// cycle-plus-boundary combination (i.e. not in the cycle space).
    pub fn class_coords(&self, degree: i32, z: &SparseMat) -> Option<SparseMat> {
        let i = (degree - self.lo) as usize;
        let reps = &self.reps[i];
        let bnd = &self.bnd[i];
        if reps.ncols == 0 && bnd.ncols == 0 {
            return if z.is_zero() { Some(SparseMat::zero(0, z.ncols)) } else { None };
        }
        let basis = reps.hstack(bnd);
        let x = basis.solve(z, &self.field)?;
        let mut out = SparseMat::zero(reps.ncols, z.ncols);
        for r in 0..reps.ncols {
            out.rows[r] = x.rows[r].clone();
        }
        Some(out)
    }
}

/// Matrix of `H^degree(f) : H^degree(A) -> H^degree(B)` in the chosen bases.
pub fn induced_cohomology_map(
    f: &ChainMap,
    a: &CochainComplex,
    b: &CochainComplex,
    basis_a: &CohomologyBasis,
    basis_b: &CohomologyBasis,
    degree: i32,
) -> SparseMat {
    let ha = basis_a.betti(degree);
    let hb = basis_b.betti(degree);
    if ha == 0 || b.dim_at(degree) == 0 {
        return SparseMat::zero(hb, ha);
    }
    let i = (degree - basis_a.lo) as usize;
    let reps = &basis_a.reps[i];
    let fz = f.comp_at(degree, a, b).mul(reps, &a.field);
    basis_b
        .class_coords(degree, &fz)
        .expect("image of a cycle under a chain map must be a cycle")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Field {
        Field::Q
    }

    fn mat(nrows: usize, ncols: usize, entries: &[(usize, usize, i64)], f: &Field) -> SparseMat {
        SparseMat::from_triplets(
            nrows,
            ncols,
            entries.iter().map(|&(r, c, v)| (r, c, f.from_i64(v))),
            f,
        )
    }

    #[test]
    fn field_arithmetic_q_and_fp() {
        for f in [Field::Q, Field::prime(5).unwrap()] {
            let a = f.from_i64(3);
            let b = f.from_i64(-7);
            let s = f.add(&a, &b);
            assert_eq!(s, f.from_i64(-4));
            assert_eq!(f.mul(&a, &b), f.from_i64(-21));
            let inv = f.inv(&b);
            assert_eq!(f.mul(&b, &inv), f.one());
        }
        assert!(Field::prime(6).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(2).is_ok());
    }

    #[test]
    fn parse_fractions() {
        let f = Field::Q;
        assert_eq!(f.parse("3/4").unwrap(), f.div(&f.from_i64(3), &f.from_i64(4)));
        assert_eq!(f.parse("-2").unwrap(), f.from_i64(-2));
        assert!(f.parse("1/0").is_none());
    }

    #[test]
    fn rank_kernel_small() {
        let f = q();
        // 2x3 with rank 2, kernel dim 1.
        let m = mat(2, 3, &[(0, 0, 1), (0, 1, 2), (1, 1, 1), (1, 2, 1)], &f);
        assert_eq!(m.rank(&f), 2);
        let k = m.kernel_basis(&f);
        assert_eq!(k.ncols, 1);
        assert!(m.mul(&k, &f).is_zero());
    }

    #[test]
    fn solve_unique() {
        let f = q();
        let a = mat(3, 2, &[(0, 0, 1), (1, 1, 2), (2, 0, 1), (2, 1, 1)], &f);
        let x0 = mat(2, 1, &[(0, 0, 3), (1, 0, -1)], &f);
        let b = a.mul(&x0, &f);
        let x = a.solve(&b, &f).unwrap();
        assert_eq!(x, x0);
        // Inconsistent system.
        let bad = mat(3, 1, &[(0, 0, 1)], &f);
        let a0 = mat(3, 2, &[(1, 0, 1), (2, 1, 1)], &f);
        assert!(a0.solve(&bad, &f).is_none());
    }

    #[test]
    fn independent_columns_prefers_leftmost() {
        let f = q();
        let m = mat(2, 4, &[(0, 0, 1), (0, 1, 2), (1, 2, 1), (0, 3, 1), (1, 3, 1)], &f);
        assert_eq!(m.independent_columns(&f), vec![0, 2]);
    }

    #[test]
    fn complex_validation_and_cohomology() {
        let f = q();
        // 0 -> F -> F -> 0 with identity differential: acyclic.
        let c = CochainComplex::new(f, 0, vec![1, 1], vec![SparseMat::identity(1, &f)]).unwrap();
        assert!(c.cohomology().is_empty());
        // Differential that does not square to zero is rejected.
        let bad = CochainComplex::new(
            f,
            0,
            vec![1, 1, 1],
            vec![SparseMat::identity(1, &f), SparseMat::identity(1, &f)],
        );
        assert!(matches!(bad, Err(LinalgError::DifferentialSquare(0))));
    }

    #[test]
    fn shift_moves_degrees() {
        let f = q();
        let c = CochainComplex::concentrated(f, 0, 1);
        let s = c.shift(-2);
        assert_eq!(s.dim_at(2), 1);
        assert_eq!(s.dim_at(0), 0);
        let s2 = s.shift(2);
        assert_eq!(s2.dim_at(0), 1);
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let f = q();
        let c = CochainComplex::new(f, 0, vec![2, 1], vec![mat(1, 2, &[(0, 0, 1), (0, 1, -1)], &f)])
            .unwrap();
        let id = ChainMap {
            comps: BTreeMap::from([
                (0, SparseMat::identity(2, &f)),
                (1, SparseMat::identity(1, &f)),
            ]),
        };
        id.validate(&c, &c).unwrap();
        let cn = cone(&id, &c, &c);
        assert!(cn.cohomology().is_empty());
    }

    #[test]
    fn cone_of_zero_map_splits() {
        let f = q();
        let a = CochainComplex::concentrated(f, 0, 1);
        let b = CochainComplex::concentrated(f, 1, 2);
        let cn = cone(&ChainMap::zero(), &a, &b);
        // Cone = A[1] ⊕ B: one dim in degree -1, two in degree 1.
        let h = cn.cohomology();
        assert_eq!(h.get(&-1), Some(&1));
        assert_eq!(h.get(&1), Some(&2));
    }

    #[test]
    fn total_complex_of_commuting_square() {
        let f = q();
        // Two columns, two rows, all maps identity on F: total is acyclic
        // after the sign twist (it is the tensor of two acyclic complexes).
        let id = SparseMat::identity(1, &f);
        let dc = DoubleComplex {
            field: f,
            p_lo: 0,
            q_lo: 0,
            dims: vec![vec![1, 1], vec![1, 1]],
            d_h: vec![vec![id.clone(), id.clone()]],
            d_v: vec![vec![id.clone()], vec![id.clone()]],
        };
        dc.validate().unwrap();
        let (total, _) = dc.total_complex();
        assert_eq!(total.dims, vec![1, 2, 1]);
        assert!(total.cohomology().is_empty());
    }

    #[test]
    fn induced_map_identity() {
        let f = q();
        let c = CochainComplex::new(f, 0, vec![2, 1], vec![mat(1, 2, &[(0, 0, 1), (0, 1, -1)], &f)])
            .unwrap();
        let basis = CohomologyBasis::new(&c);
        assert_eq!(basis.betti(0), 1);
        assert_eq!(basis.betti(1), 0);
        let id = ChainMap {
            comps: BTreeMap::from([
                (0, SparseMat::identity(2, &f)),
                (1, SparseMat::identity(1, &f)),
            ]),
        };
        let m = induced_cohomology_map(&id, &c, &c, &basis, &basis, 0);
        assert_eq!(m, SparseMat::identity(1, &f));
    }

    proptest! {
        #[test]
        fn rank_nullity(entries in proptest::collection::vec((0usize..5, 0usize..6, -3i64..=3), 0..20)) {
            let f = q();
            let m = mat(5, 6, &entries, &f);
            let r = m.rank(&f);
            let k = m.kernel_basis(&f);
            prop_assert_eq!(r + k.ncols, 6);
            prop_assert!(m.mul(&k, &f).is_zero());
            prop_assert_eq!(k.rank(&f), k.ncols);
        }

        #[test]
        fn solve_roundtrip(
            a_entries in proptest::collection::vec((0usize..4, 0usize..3, -3i64..=3), 0..10),
            x_entries in proptest::collection::vec((0usize..3, 0usize..2, -3i64..=3), 0..6),
        ) {
            let f = q();
            let a = mat(4, 3, &a_entries, &f);
            let x0 = mat(3, 2, &x_entries, &f);
            let b = a.mul(&x0, &f);
            let x = a.solve(&b, &f).expect("constructed system is consistent");
            prop_assert_eq!(a.mul(&x, &f), b);
        }

        #[test]
        fn fp_matches_q_rank_on_small_matrices(
            entries in proptest::collection::vec((0usize..4, 0usize..4, prop::sample::select(vec![-1i64, 1])), 0..12)
        ) {
            // Ranks over Q and F_p agree when p exceeds every minor of the
            // integer matrix.  Accumulated entries stay within ±12, so by
            // Hadamard all 4x4 minors are below 24^4 < 1000003.
            let fq = q();
            let fp = Field::prime(1_000_003).unwrap();
            let mq = mat(4, 4, &entries, &fq);
            let mp = mat(4, 4, &entries, &fp);
            prop_assert_eq!(mq.rank(&fq), mp.rank(&fp));
        }
    }
}
