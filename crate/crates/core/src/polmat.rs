//! Matrices with polynomial entries.
//!
//! Entries are stored as a row-major grid of [`Poly`]. Most algorithms here
//! act column by column (degrees, truncation, reversal), which is why the
//! matrix-of-polynomials layout is used rather than a polynomial of matrices.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::PrimeModulus;
use crate::matf::DenseMatrix;
use crate::poly::{mul_slices, Degree, Poly, KARATSUBA_THRESHOLD};

/// Tuple of degrees; entries may be `NegInf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct DegreeTuple(pub Vec<Degree>);

impl DegreeTuple {
    pub fn from_naturals(v: &[usize]) -> Self {
        Self(v.iter().map(|&d| Degree::Finite(d)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the finite entries.
    pub fn sum(&self) -> usize {
        self.0.iter().filter_map(|d| d.finite()).sum()
    }

    pub fn max(&self) -> Degree {
        self.0.iter().copied().max().unwrap_or(Degree::NegInf)
    }

    pub fn get(&self, j: usize) -> Degree {
        self.0[j]
    }

    pub fn iter(&self) -> impl Iterator<Item = Degree> + '_ {
        self.0.iter().copied()
    }

    /// Finite entries as naturals, with `NegInf` mapped to `default`.
    pub fn naturals_or(&self, default: usize) -> Vec<usize> {
        self.0.iter().map(|d| d.unwrap_or(default)).collect()
    }
}

impl fmt::Display for DegreeTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Degree::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
    field: PrimeModulus,
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix {}x{} over {:?} [", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Result of expanding high-degree columns into a larger low-degree matrix.
#[derive(Clone, Debug)]
pub struct PartialLinearization {
    /// The expanded square matrix; its leading `m x m` block of the inverse is the original inverse.
    pub matrix: PolyMatrix,
    /// Degree bound `t` used for splitting (0 for constant input).
    pub degree_bound: usize,
    /// Dimension of the expanded matrix.
    pub dim: usize,
}

impl PolyMatrix {
    pub fn zeros(field: PrimeModulus, rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Poly::zero(field); rows * cols],
            field,
        }
    }

    pub fn identity(field: PrimeModulus, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = Poly::one(field);
        }
        m
    }

    pub fn from_fn(
        field: PrimeModulus,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Poly,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                debug_assert_eq!(e.field(), field);
                entries.push(e);
            }
        }
        Self {
            rows,
            cols,
            entries,
            field,
        }
    }

    /// Row-major entries.
    pub fn from_entries(field: PrimeModulus, rows: usize, cols: usize, entries: Vec<Poly>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(e) = entries.iter().find(|e| e.field() != field) {
            return Err(Error::ModulusMismatch(field.value(), e.field().value()));
        }
        Ok(Self {
            rows,
            cols,
            entries,
            field,
        })
    }

    pub fn from_constant(m: &DenseMatrix) -> Self {
        let f = m.field();
        Self::from_fn(f, m.rows(), m.cols(), |i, j| Poly::constant(f, m.get(i, j)))
    }

    /// `sum_k x^k M_k` for same-shape constant coefficient matrices.
    pub fn from_coefficients(field: PrimeModulus, rows: usize, cols: usize, coeffs: &[DenseMatrix]) -> Result<Self> {
        if coeffs.iter().any(|c| c.rows() != rows || c.cols() != cols) {
            return Err(Error::DimensionMismatch("coefficient shapes differ".into()));
        }
        Ok(Self::from_fn(field, rows, cols, |i, j| {
            Poly::from_raw(field, coeffs.iter().map(|c| c.get(i, j)).collect())
        }))
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
    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Poly {
        &mut self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Poly) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn col_degree(&self, j: usize) -> Degree {
        (0..self.rows).map(|i| self.get(i, j).degree()).max().unwrap_or(Degree::NegInf)
    }

    pub fn cdeg(&self) -> DegreeTuple {
        DegreeTuple((0..self.cols).map(|j| self.col_degree(j)).collect())
    }

    pub fn row_degree(&self, i: usize) -> Degree {
        (0..self.cols).map(|j| self.get(i, j).degree()).max().unwrap_or(Degree::NegInf)
    }

    /// Largest entry degree.
    pub fn degree(&self) -> Degree {
        self.entries.iter().map(Poly::degree).max().unwrap_or(Degree::NegInf)
    }

    pub fn map(&self, mut f: impl FnMut(&Poly) -> Poly) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(&mut f).collect(),
            field: self.field,
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Uniform truncation `self rem x^d`.
    pub fn truncate(&self, d: usize) -> Self {
        self.map(|p| p.truncate(d))
    }

    /// Column `j` reduced modulo `x^{d_j}`.
    pub fn col_truncate(&self, d: &[usize]) -> Result<Self> {
        if d.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{} truncation orders for {} columns",
                d.len(),
                self.cols
            )));
        }
        Ok(Self::from_fn(self.field, self.rows, self.cols, |i, j| {
            self.get(i, j).truncate(d[j])
        }))
    }

    /// `self div x^k` entrywise.
    pub fn shift_down(&self, k: usize) -> Self {
        self.map(|p| p.shift_down(k))
    }

    /// `x^k * self`.
    pub fn shift(&self, k: usize) -> Self {
        self.map(|p| p.shift(k))
    }

    /// Coefficients `lo..hi` of every entry.
    pub fn window(&self, lo: usize, hi: usize) -> Self {
        self.map(|p| p.window(lo, hi))
    }

    pub fn coeff(&self, k: usize) -> DenseMatrix {
        DenseMatrix::from_fn(self.field, self.rows, self.cols, |i, j| self.get(i, j).coeff(k))
    }

    pub fn eval_at_zero(&self) -> DenseMatrix {
        self.coeff(0)
    }

    pub fn eval(&self, x: u64) -> DenseMatrix {
        DenseMatrix::from_fn(self.field, self.rows, self.cols, |i, j| self.get(i, j).eval(x))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::ModulusMismatch(self.field.value(), other.field.value()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("sum of differently shaped matrices".into()));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect(),
            field: self.field,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(Poly::neg)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "product of {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: Vec<u64> = Vec::new();
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    let prod = mul_slices(f, a.coeffs(), b.coeffs(), KARATSUBA_THRESHOLD);
                    if acc.len() < prod.len() {
                        acc.resize(prod.len(), 0);
                    }
                    for (x, y) in acc.iter_mut().zip(prod) {
                        *x = f.add(*x, y);
                    }
                }
                out.push(Poly::from_raw(f, acc));
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            entries: out,
            field: f,
        })
    }

    /// Product by a constant matrix on the right.
    pub fn mul_constant(&self, c: &DenseMatrix) -> Result<Self> {
        self.mul(&Self::from_constant(c))
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.field, self.rows, idx.len(), |i, k| self.get(i, idx[k]).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.field, idx.len(), self.cols, |k, j| self.get(idx[k], j).clone())
    }

    /// Rows `r0..r1`.
    pub fn row_range(&self, r0: usize, r1: usize) -> Self {
        Self::from_fn(self.field, r1 - r0, self.cols, |i, j| self.get(r0 + i, j).clone())
    }

    pub fn hcat(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hcat: row counts differ".into()));
        }
        let c = self.cols;
        Ok(Self::from_fn(self.field, self.rows, c + other.cols, |i, j| {
            if j < c {
                self.get(i, j).clone()
            } else {
                other.get(i, j - c).clone()
            }
        }))
    }

    pub fn vcat(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vcat: column counts differ".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
            field: self.field,
        })
    }

    /// `[Coeffs(P_1, d_1) | ... | Coeffs(P_m, d_m)]`, the first `d_j` coefficient
    /// vectors of each column laid side by side.
    pub fn expand_columns(&self, d: &[usize]) -> Result<DenseMatrix> {
        if d.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{} orders for {} columns",
                d.len(),
                self.cols
            )));
        }
        let total: usize = d.iter().sum();
        let mut out = DenseMatrix::zeros(self.field, self.rows, total);
        let mut off = 0;
        for (j, &dj) in d.iter().enumerate() {
            for i in 0..self.rows {
                let p = self.get(i, j);
                for k in 0..dj.min(p.len()) {
                    out.set(i, off + k, p.coeff(k));
                }
            }
            off += dj;
        }
        Ok(out)
    }

    /// Inverse of [`Self::expand_columns`]: regroups blocks of columns into polynomial columns.
    pub fn from_expanded(m: &DenseMatrix, d: &[usize]) -> Result<Self> {
        let total: usize = d.iter().sum();
        if total != m.cols() {
            return Err(Error::DimensionMismatch(format!(
                "orders sum to {total}, matrix has {} columns",
                m.cols()
            )));
        }
        let f = m.field();
        let offsets: Vec<usize> = d
            .iter()
            .scan(0, |acc, &dj| {
                let o = *acc;
                *acc += dj;
                Some(o)
            })
            .collect();
        Ok(Self::from_fn(f, m.rows(), d.len(), |i, j| {
            Poly::from_raw(f, (0..d[j]).map(|k| m.get(i, offsets[j] + k)).collect())
        }))
    }

    /// Coefficient of `x^{cdeg_j}` in column `j`; zero columns give zero columns.
    pub fn leading_matrix(&self) -> DenseMatrix {
        let cd = self.cdeg();
        DenseMatrix::from_fn(self.field, self.rows, self.cols, |i, j| match cd.get(j) {
            Degree::Finite(d) => self.get(i, j).coeff(d),
            Degree::NegInf => 0,
        })
    }

    /// Whether the leading matrix has full column rank.
    pub fn is_column_reduced(&self) -> Result<bool> {
        if let Some(j) = (0..self.cols).find(|&j| self.col_degree(j).is_neg_inf()) {
            return Err(Error::ZeroColumn(j));
        }
        Ok(self.leading_matrix().rank() == self.cols)
    }

    /// Column `j` replaced by `x^{d_j} * column_j(1/x)`.
    pub fn col_reverse(&self, d: &[usize]) -> Result<Self> {
        if d.len() != self.cols {
            return Err(Error::DimensionMismatch("reversal orders length".into()));
        }
        let mut out = Self::zeros(self.field, self.rows, self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.set(i, j, self.get(i, j).reverse(d[j])?);
            }
        }
        Ok(out)
    }

    /// Determinant; by evaluation and interpolation when the field has enough
    /// points, otherwise by fraction-free elimination.
    pub fn determinant(&self) -> Result<Poly> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let bound = self.cdeg().sum();
        if self.rows >= 3 && (bound as u64) < self.field.value() {
            Ok(self.determinant_interpolated(bound))
        } else {
            self.determinant_bareiss()
        }
    }

    fn determinant_interpolated(&self, bound: usize) -> Poly {
        let f = self.field;
        let xs: Vec<u64> = (0..=bound as u64).collect();
        let ys: Vec<u64> = xs
            .iter()
            .map(|&x| self.eval(x).determinant().expect("square"))
            .collect();
        interpolate(f, &xs, &ys)
    }

    /// Determinant by fraction-free (Bareiss) elimination over GF(p)[x].
    pub fn determinant_bareiss(&self) -> Result<Poly> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let f = self.field;
        if n == 0 {
            return Ok(Poly::one(f));
        }
        let mut a: Vec<Vec<Poly>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut prev = Poly::one(f);
        let mut negate = false;
        for k in 0..n {
            let Some(piv) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(Poly::zero(f));
            };
            if piv != k {
                a.swap(piv, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                    let (q, r) = num.divrem(&prev)?;
                    debug_assert!(r.is_zero(), "Bareiss division is exact");
                    a[i][j] = q;
                }
                a[i][k] = Poly::zero(f);
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        Ok(if negate { det.neg() } else { det })
    }

    /// Expands columns of degree above `t = max(1, ceil(|cdeg| / m))` into
    /// chunks of degree below `t`, linked by extra rows `-x^t * prev + new = 0`.
    ///
    /// The determinant is preserved, and the leading `m x m` block of the
    /// inverse of the result is the inverse of `self`.
    pub fn partial_linearization(&self) -> Result<PartialLinearization> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("partial linearization needs a square matrix".into()));
        }
        let m = self.rows;
        let f = self.field;
        if self.degree().unwrap_or(0) == 0 {
            return Ok(PartialLinearization {
                matrix: self.clone(),
                degree_bound: 0,
                dim: m,
            });
        }
        let cd = self.cdeg();
        let t = cd.sum().div_ceil(m).max(1);
        // (source column, chunk index) for every extra column, column-major
        let mut extra: Vec<(usize, usize)> = Vec::new();
        for j in 0..m {
            if let Degree::Finite(dj) = cd.get(j) {
                if dj > t {
                    let k = (dj + 1).div_ceil(t) - 1;
                    extra.extend((1..=k).map(|c| (j, c)));
                }
            }
        }
        let mb = m + extra.len();
        let mut out = Self::zeros(f, mb, mb);
        for j in 0..m {
            let split = extra.iter().any(|&(s, _)| s == j);
            for i in 0..m {
                let e = self.get(i, j);
                out.set(i, j, if split { e.truncate(t) } else { e.clone() });
            }
        }
        let minus_xt = Poly::monomial(f, f.neg(1 % f.value()), t);
        for (e, &(j, c)) in extra.iter().enumerate() {
            let col = m + e;
            for i in 0..m {
                out.set(i, col, self.get(i, j).window(c * t, (c + 1) * t));
            }
            let prev = if c == 1 { j } else { col - 1 };
            out.set(col, prev, minus_xt.clone());
            out.set(col, col, Poly::one(f));
        }
        Ok(PartialLinearization {
            matrix: out,
            degree_bound: t,
            dim: mb,
        })
    }
}

/// Newton interpolation through distinct points.
pub(crate) fn interpolate(f: PrimeModulus, xs: &[u64], ys: &[u64]) -> Poly {
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = f.sub(coef[i], coef[i - 1]);
            let den = f.sub(xs[i], xs[i - j]);
            coef[i] = f.mul(num, f.inv(den).expect("distinct nodes"));
        }
    }
    let mut acc = Poly::zero(f);
    for i in (0..n).rev() {
        // acc = acc * (x - xs[i]) + coef[i]
        acc = acc.mul(&Poly::from_coeffs(f, vec![f.neg(xs[i]), 1]));
        acc = acc.add(&Poly::constant(f, coef[i]));
    }
    acc
}
