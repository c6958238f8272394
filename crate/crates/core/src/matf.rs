//! Dense matrices over GF(p).
//!
//! Storage is row-major `u64` residues. Elimination always takes the first
//! nonzero pivot in the leftmost remaining column, so the pivot columns of an
//! echelon form are exactly the column rank profile.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::PrimeModulus;
use crate::opcount;

/// Multiplication settings. Strassen is off unless a threshold is given.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MulConfig {
    /// Recurse with Strassen while all three dimensions exceed this value.
    pub strassen_threshold: Option<usize>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
    field: PrimeModulus,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} over {:?} [", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl DenseMatrix {
    pub fn zeros(field: PrimeModulus, rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
            field,
        }
    }

    pub fn identity(field: PrimeModulus, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % field.value();
        }
        m
    }

    pub fn from_fn(
        field: PrimeModulus,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u64,
    ) -> Self {
        let p = field.value();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j) % p);
            }
        }
        Self {
            rows,
            cols,
            data,
            field,
        }
    }

    /// Builds a matrix from rows; entries are reduced modulo p.
    pub fn from_rows(field: PrimeModulus, rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self::from_fn(field, rows.len(), cols, |i, j| rows[i][j]))
    }

    /// Builds a matrix from column vectors of length `rows`.
    pub fn from_columns(field: PrimeModulus, rows: usize, columns: &[Vec<u64>]) -> Result<Self> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch("column length differs from row count".into()));
        }
        Ok(Self::from_fn(field, rows, columns.len(), |i, j| columns[j][i]))
    }

    /// Row-major constructor without reduction; `data` must already be canonical.
    pub(crate) fn from_raw(field: PrimeModulus, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        debug_assert!(data.iter().all(|&v| v < field.value()));
        Self {
            rows,
            cols,
            data,
            field,
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn field(&self) -> PrimeModulus {
        self.field
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.field.value();
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(self.field, self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                out.data[i * idx.len() + k] = self.get(i, j);
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Self::from_raw(self.field, idx.len(), self.cols, data)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Self) -> Result<Self> {
        Self::hcat_all(self.field, self.rows, &[self, other])
    }

    /// Concatenates blocks side by side; `rows` fixes the height when `blocks` is empty.
    pub fn hcat_all(field: PrimeModulus, rows: usize, blocks: &[&Self]) -> Result<Self> {
        if blocks.iter().any(|b| b.rows != rows) {
            return Err(Error::DimensionMismatch("hcat: row counts differ".into()));
        }
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for b in blocks {
                data.extend_from_slice(b.row(i));
            }
        }
        Ok(Self::from_raw(field, rows, cols, data))
    }

    /// Vertical concatenation.
    pub fn vcat(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vcat: column counts differ".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self::from_raw(self.field, self.rows + other.rows, self.cols, data))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::ModulusMismatch(self.field.value(), other.field.value()));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Self::from_raw(f, self.rows, self.cols, data))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(Self::from_raw(f, self.rows, self.cols, data))
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = self.field;
        let c = c % f.value();
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        Self::from_raw(f, self.rows, self.cols, data)
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        let data = self.data.iter().map(|&a| f.neg(a)).collect();
        Self::from_raw(f, self.rows, self.cols, data)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} columns, vector has length {}",
                self.cols,
                v.len()
            )));
        }
        opcount::add((self.rows * self.cols) as u64);
        Ok((0..self.rows).map(|i| self.field.dot(self.row(i), v)).collect())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_with(other, &MulConfig::default())
    }

    pub fn mul_with(&self, other: &Self, config: &MulConfig) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::ModulusMismatch(self.field.value(), other.field.value()));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "product of {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(match config.strassen_threshold {
            Some(t) => strassen(self, other, t.max(1)),
            None => classical(self, other),
        })
    }

    /// Row echelon form with leftmost-first pivoting.
    ///
    /// Returns the echelon matrix (rank rows kept, in pivot order), the pivot
    /// columns, and the row permutation applied.
    fn echelon(&self) -> (Vec<u64>, Vec<usize>, Vec<usize>, Vec<u64>) {
        let (rows, cols, f) = (self.rows, self.cols, self.field);
        let mut a = self.data.clone();
        let mut perm: Vec<usize> = (0..rows).collect();
        // multipliers, row-major rows x rows (only strictly lower part used)
        let mut lower = vec![0u64; rows * rows.min(cols)];
        let lw = rows.min(cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        let mut ops = 0u64;
        for j in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| a[i * cols + j] != 0) else {
                continue;
            };
            if pr != r {
                for k in 0..cols {
                    a.swap(pr * cols + k, r * cols + k);
                }
                for k in 0..r {
                    lower.swap(pr * lw + k, r * lw + k);
                }
                perm.swap(pr, r);
            }
            let inv = f.inv(a[r * cols + j]).expect("pivot is nonzero");
            let (head, tail) = a.split_at_mut((r + 1) * cols);
            let prow = &head[r * cols..];
            for i in 0..rows - r - 1 {
                let row = &mut tail[i * cols..(i + 1) * cols];
                let x = row[j];
                if x == 0 {
                    continue;
                }
                let factor = f.mul(x, inv);
                lower[(r + 1 + i) * lw + r] = factor;
                for k in j..cols {
                    row[k] = f.mul_sub(row[k], factor, prow[k]);
                }
                ops += (cols - j) as u64;
            }
            pivots.push(j);
            r += 1;
        }
        opcount::add(ops);
        a.truncate(r * cols);
        (a, pivots, perm, lower)
    }

    /// Lexicographically smallest maximal set of independent columns.
    pub fn col_rank_profile(&self) -> Vec<usize> {
        self.echelon().1
    }

    /// Lexicographically smallest maximal set of independent rows.
    pub fn row_rank_profile(&self) -> Vec<usize> {
        self.transpose().col_rank_profile()
    }

    pub fn rank(&self) -> usize {
        self.col_rank_profile().len()
    }

    /// PLUQ decomposition with leftmost pivots.
    pub fn pluq(&self) -> Pluq {
        let (ech, pivots, perm, lower) = self.echelon();
        let (rows, cols) = (self.rows, self.cols);
        let r = pivots.len();
        let lw = rows.min(cols);
        let one = 1 % self.field.value();
        let mut l = Self::zeros(self.field, rows, r);
        for i in 0..rows {
            for k in 0..r.min(i + 1) {
                l.data[i * r + k] = if k == i { one } else { lower[i * lw + k] };
            }
        }
        let mut col_perm = pivots.clone();
        let mut is_pivot = vec![false; cols];
        for &j in &pivots {
            is_pivot[j] = true;
        }
        col_perm.extend((0..cols).filter(|&j| !is_pivot[j]));
        let echelon = Self::from_raw(self.field, r, cols, ech);
        let u = echelon.select_columns(&col_perm);
        Pluq {
            row_perm: perm,
            l,
            u,
            col_perm,
            rank: r,
        }
    }

    /// Gauss-Jordan on `[self | rhs]`; `self` must be square and nonsingular.
    fn gauss_jordan(&self, rhs: &Self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("expected a square matrix".into()));
        }
        if rhs.rows != self.rows {
            return Err(Error::DimensionMismatch("right-hand side row count".into()));
        }
        let n = self.rows;
        let f = self.field;
        let w = n + rhs.cols;
        let aug = self.hcat(rhs)?;
        let mut a = aug.data;
        let mut ops = 0u64;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| a[i * w + c] != 0) else {
                let rank = self.rank();
                return Err(Error::Singular { rank, expected: n });
            };
            if pr != c {
                for k in 0..w {
                    a.swap(pr * w + k, c * w + k);
                }
            }
            let inv = f.inv(a[c * w + c]).expect("nonzero pivot");
            for k in c..w {
                a[c * w + k] = f.mul(a[c * w + k], inv);
            }
            let prow: Vec<u64> = a[c * w..(c + 1) * w].to_vec();
            for i in 0..n {
                if i == c {
                    continue;
                }
                let x = a[i * w + c];
                if x == 0 {
                    continue;
                }
                for k in c..w {
                    a[i * w + k] = f.mul_sub(a[i * w + k], x, prow[k]);
                }
                ops += (w - c) as u64;
            }
        }
        opcount::add(ops);
        let mut out = Self::zeros(f, n, rhs.cols);
        for i in 0..n {
            out.data[i * rhs.cols..(i + 1) * rhs.cols].copy_from_slice(&a[i * w + n..(i + 1) * w]);
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.gauss_jordan(&Self::identity(self.field, self.rows))
    }

    /// Solves `self * X = rhs` for square nonsingular `self`.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        self.gauss_jordan(rhs)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn determinant(&self) -> Result<u64> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let f = self.field;
        let pl = self.pluq();
        if pl.rank < self.rows {
            return Ok(0);
        }
        let mut det = 1 % f.value();
        for i in 0..self.rows {
            det = f.mul(det, pl.u.get(i, i));
        }
        if permutation_parity(&pl.row_perm) ^ permutation_parity(&pl.col_perm) {
            det = f.neg(det);
        }
        Ok(det)
    }

    /// Basis of the right nullspace as the columns of a `cols x (cols - rank)` matrix.
    pub fn kernel(&self) -> Self {
        let (ech, pivots, _, _) = self.echelon();
        let (cols, f) = (self.cols, self.field);
        let r = pivots.len();
        // reduce the echelon form to RREF
        let mut e = ech;
        for t in (0..r).rev() {
            let pc = pivots[t];
            let inv = f.inv(e[t * cols + pc]).expect("pivot");
            for k in 0..cols {
                e[t * cols + k] = f.mul(e[t * cols + k], inv);
            }
            for s in 0..t {
                let x = e[s * cols + pc];
                if x != 0 {
                    for k in 0..cols {
                        e[s * cols + k] = f.mul_sub(e[s * cols + k], x, e[t * cols + k]);
                    }
                }
            }
        }
        let mut is_pivot = vec![false; cols];
        for &j in &pivots {
            is_pivot[j] = true;
        }
        let free: Vec<usize> = (0..cols).filter(|&j| !is_pivot[j]).collect();
        let mut out = Self::zeros(f, cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.data[fc * free.len() + k] = 1 % f.value();
            for t in 0..r {
                out.data[pivots[t] * free.len() + k] = f.neg(e[t * cols + fc]);
            }
        }
        out
    }
}

fn permutation_parity(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut odd = false;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            odd = !odd;
        }
    }
    odd
}

/// `M[row_perm[i]][col_perm[j]] = (L * U)[i][j]`; `L` is unit lower trapezoidal
/// (`rows x rank`), `U` is upper trapezoidal (`rank x cols`) with nonzero diagonal.
#[derive(Clone, Debug)]
pub struct Pluq {
    pub row_perm: Vec<usize>,
    pub l: DenseMatrix,
    pub u: DenseMatrix,
    pub col_perm: Vec<usize>,
    pub rank: usize,
}

fn classical(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let (m, k, n) = (a.rows, a.cols, b.cols);
    let f = a.field;
    let bt = b.transpose();
    let mut data = vec![0u64; m * n];
    for i in 0..m {
        let ar = a.row(i);
        for j in 0..n {
            data[i * n + j] = f.dot(ar, &bt.data[j * k..(j + 1) * k]);
        }
    }
    opcount::add((m * k * n) as u64);
    DenseMatrix::from_raw(f, m, n, data)
}

fn block(a: &DenseMatrix, r0: usize, c0: usize, h: usize, w: usize) -> DenseMatrix {
    DenseMatrix::from_fn(a.field, h, w, |i, j| {
        let (r, c) = (r0 + i, c0 + j);
        if r < a.rows && c < a.cols {
            a.get(r, c)
        } else {
            0
        }
    })
}

fn strassen(a: &DenseMatrix, b: &DenseMatrix, threshold: usize) -> DenseMatrix {
    let (m, k, n) = (a.rows, a.cols, b.cols);
    if m <= threshold || k <= threshold || n <= threshold {
        return classical(a, b);
    }
    let (hm, hk, hn) = (m.div_ceil(2), k.div_ceil(2), n.div_ceil(2));
    let a11 = block(a, 0, 0, hm, hk);
    let a12 = block(a, 0, hk, hm, hk);
    let a21 = block(a, hm, 0, hm, hk);
    let a22 = block(a, hm, hk, hm, hk);
    let b11 = block(b, 0, 0, hk, hn);
    let b12 = block(b, 0, hn, hk, hn);
    let b21 = block(b, hk, 0, hk, hn);
    let b22 = block(b, hk, hn, hk, hn);
    let s = |x: &DenseMatrix, y: &DenseMatrix| strassen(x, y, threshold);
    let add = |x: &DenseMatrix, y: &DenseMatrix| x.add(y).expect("same shape");
    let sub = |x: &DenseMatrix, y: &DenseMatrix| x.sub(y).expect("same shape");
    let m1 = s(&add(&a11, &a22), &add(&b11, &b22));
    let m2 = s(&add(&a21, &a22), &b11);
    let m3 = s(&a11, &sub(&b12, &b22));
    let m4 = s(&a22, &sub(&b21, &b11));
    let m5 = s(&add(&a11, &a12), &b22);
    let m6 = s(&sub(&a21, &a11), &add(&b11, &b12));
    let m7 = s(&sub(&a12, &a22), &add(&b21, &b22));
    let c11 = add(&sub(&add(&m1, &m4), &m5), &m7);
    let c12 = add(&m3, &m5);
    let c21 = add(&m2, &m4);
    let c22 = add(&add(&sub(&m1, &m2), &m3), &m6);
    DenseMatrix::from_fn(a.field, m, n, |i, j| {
        let (bi, bj) = (i / hm, j / hn);
        let (ii, jj) = (i % hm, j % hn);
        match (bi, bj) {
            (0, 0) => c11.get(ii, jj),
            (0, _) => c12.get(ii, jj),
            (_, 0) => c21.get(ii, jj),
            _ => c22.get(ii, jj),
        }
    })
}

/// Echelon set of vectors supporting membership tests and incremental growth.
///
/// Each stored vector is normalized (1 at its pivot) and has zeros at the
/// pivots of all vectors stored before it, so reducing in insertion order
/// clears every pivot position.
#[derive(Clone, Debug)]
pub struct IncrementalBasis {
    field: PrimeModulus,
    dim: usize,
    vectors: Vec<(usize, Vec<u64>)>,
}

impl IncrementalBasis {
    pub fn new(field: PrimeModulus, dim: usize) -> Self {
        Self {
            field,
            dim,
            vectors: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Reduces `v` in place against the stored vectors.
    pub fn reduce(&self, v: &mut [u64]) {
        let f = self.field;
        for (piv, b) in &self.vectors {
            let c = v[*piv];
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = f.mul_sub(*x, c, y);
                }
            }
        }
        opcount::add((self.vectors.len() * self.dim) as u64);
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v` if it is independent of the stored vectors; returns whether it was added.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.dim, "vector length");
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(piv) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let f = self.field;
        let inv = f.inv(w[piv]).expect("nonzero");
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        self.vectors.push((piv, w));
        true
    }
}
