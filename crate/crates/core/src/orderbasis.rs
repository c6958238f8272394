//! Order bases, minimal kernel bases and Hermite diagonals.
//!
//! The approximant engine is the iterative M-basis method: one order at a
//! time, columns are processed by increasing (shift, index), the order-`k`
//! coefficient of the residual `F P` is eliminated against earlier pivots,
//! and pivot columns are multiplied by `x`. The residual is maintained
//! alongside `P`, so each step only looks at one coefficient.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::gf::PrimeModulus;
use crate::opcount;
use crate::poly::{Poly, PolyModulus};
use crate::polmat::PolyMatrix;

/// Coefficient vectors `x^val * (v_0 + v_1 x + ...)`.
#[derive(Clone, Debug, Default)]
struct Series {
    val: usize,
    coeffs: VecDeque<Vec<u64>>,
}

impl Series {
    fn at(&self, k: usize) -> Option<&Vec<u64>> {
        if k < self.val {
            return None;
        }
        self.coeffs.get(k - self.val)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn shift_up(&mut self) {
        if !self.coeffs.is_empty() {
            self.val += 1;
        }
    }

    fn trim(&mut self) {
        while self.coeffs.back().is_some_and(|v| v.iter().all(|&c| c == 0)) {
            self.coeffs.pop_back();
        }
        while self.coeffs.front().is_some_and(|v| v.iter().all(|&c| c == 0)) {
            self.coeffs.pop_front();
            self.val += 1;
        }
        if self.coeffs.is_empty() {
            self.val = 0;
        }
    }

    /// `self -= c * src`.
    fn sub_scaled(&mut self, f: PrimeModulus, src: &Series, c: u64) {
        let Some(width) = src.coeffs.front().map(Vec::len) else {
            return;
        };
        if self.coeffs.is_empty() {
            self.val = src.val;
        }
        while self.val > src.val {
            self.coeffs.push_front(vec![0; width]);
            self.val -= 1;
        }
        let offset = src.val - self.val;
        while self.coeffs.len() < offset + src.coeffs.len() {
            self.coeffs.push_back(vec![0; width]);
        }
        for (i, v) in src.coeffs.iter().enumerate() {
            let d = &mut self.coeffs[offset + i];
            for (a, &b) in d.iter_mut().zip(v) {
                *a = f.mul_sub(*a, c, b);
            }
        }
        opcount::add((width * src.coeffs.len()) as u64);
        self.trim();
    }
}

#[derive(Clone, Debug, Default)]
struct Column {
    shift: usize,
    basis: Series,
    residual: Series,
}

impl Column {
    fn degree(&self) -> usize {
        (self.basis.val + self.basis.coeffs.len()).saturating_sub(1)
    }
}

struct MBasis {
    field: PrimeModulus,
    cols: Vec<Column>,
    order: usize,
}

impl MBasis {
    fn new(fm: &PolyMatrix) -> Self {
        let field = fm.field();
        let (r, c) = (fm.rows(), fm.cols());
        let cols = (0..c)
            .map(|j| {
                let mut e = vec![0; c];
                e[j] = 1;
                let len = fm.col_degree(j).finite().map_or(0, |d| d + 1);
                let mut residual = Series {
                    val: 0,
                    coeffs: (0..len).map(|k| (0..r).map(|i| fm.get(i, j).coeff(k)).collect()).collect(),
                };
                residual.trim();
                Column {
                    shift: 0,
                    basis: Series {
                        val: 0,
                        coeffs: VecDeque::from([e]),
                    },
                    residual,
                }
            })
            .collect();
        Self { field, cols, order: 0 }
    }

    /// Raises the order of approximation by one.
    fn step(&mut self) {
        let f = self.field;
        let k = self.order;
        let mut perm: Vec<usize> = (0..self.cols.len()).collect();
        perm.sort_by_key(|&j| (self.cols[j].shift, j));
        // (column, pivot row, inverse of pivot entry)
        let mut pivots: Vec<(usize, usize, u64)> = Vec::new();
        for &j in &perm {
            if self.cols[j].residual.at(k).is_none() {
                continue;
            }
            let mut cj = std::mem::take(&mut self.cols[j]);
            for &(t, row, inv) in &pivots {
                let Some(r) = cj.residual.at(k) else { break };
                let c = f.mul(r[row], inv);
                if c != 0 {
                    let ct = &self.cols[t];
                    cj.basis.sub_scaled(f, &ct.basis, c);
                    cj.residual.sub_scaled(f, &ct.residual, c);
                }
            }
            if let Some(r) = cj.residual.at(k) {
                let row = r.iter().position(|&v| v != 0).expect("trimmed residual coefficient is nonzero");
                let inv = f.inv(r[row]).expect("nonzero");
                pivots.push((j, row, inv));
            }
            self.cols[j] = cj;
        }
        for &(t, _, _) in &pivots {
            let col = &mut self.cols[t];
            col.basis.shift_up();
            col.residual.shift_up();
            col.shift += 1;
        }
        self.order += 1;
    }

    fn to_matrix(&self, which: &[usize]) -> PolyMatrix {
        let f = self.field;
        let c = self.cols.len();
        let mut out = PolyMatrix::zeros(f, c, which.len());
        for (jj, &j) in which.iter().enumerate() {
            let s = &self.cols[j].basis;
            for i in 0..c {
                let mut coeffs = vec![0; s.val + s.coeffs.len()];
                for (k, v) in s.coeffs.iter().enumerate() {
                    coeffs[s.val + k] = v[i];
                }
                out.set(i, jj, Poly::from_coeffs(f, coeffs));
            }
        }
        out
    }

    fn sorted(&self, mut which: Vec<usize>) -> Vec<usize> {
        which.sort_by_key(|&j| (self.cols[j].degree(), j));
        which
    }
}

/// Minimal approximant basis `P` (`c x c`) with `F P = 0 mod x^order`.
///
/// `P` is column reduced and its columns come in nondecreasing degree order.
pub fn approximant_basis(fm: &PolyMatrix, order: usize) -> Result<PolyMatrix> {
    let mut mb = MBasis::new(fm);
    for _ in 0..order {
        mb.step();
    }
    let all = mb.sorted((0..fm.cols()).collect());
    Ok(mb.to_matrix(&all))
}

/// Column-reduced basis of the right kernel of a full row rank `r x c` matrix.
///
/// Approximation is pushed order by order until `c - r` basis columns have an
/// exactly vanishing residual. In a reduced approximant basis `[K P2]` with
/// `F K = 0` and `c - r` columns in `K`, `F P2` is nonsingular, so `K` spans
/// the kernel, and as a column subset of a reduced matrix it is reduced.
pub fn minimal_kernel_basis(fm: &PolyMatrix) -> Result<PolyMatrix> {
    let (r, c) = (fm.rows(), fm.cols());
    if r > c {
        return Err(Error::DimensionMismatch(format!(
            "kernel basis of a {r}x{c} matrix with more rows than columns"
        )));
    }
    let target = c - r;
    let d = fm.degree().unwrap_or(0);
    let cap = (r + 1) * d + 2;
    let mut mb = MBasis::new(fm);
    loop {
        let done: Vec<usize> = (0..c).filter(|&j| mb.cols[j].residual.is_zero()).collect();
        if done.len() > target {
            return Err(Error::RankDeficient {
                found: c - done.len(),
                expected: r,
            });
        }
        if done.len() == target {
            let which = mb.sorted(done);
            return Ok(mb.to_matrix(&which));
        }
        if mb.order >= cap {
            return Err(Error::RankDeficient {
                found: c - done.len(),
                expected: r,
            });
        }
        mb.step();
    }
}

/// Monic diagonal `(h_0, ..., h_{m-1})` of the column Hermite form of a
/// nonsingular square matrix.
///
/// Works modulo the determinant: rows are processed bottom up, Bezout column
/// operations gather the gcd of the row into the diagonal, its gcd with the
/// running modulus `R` is the diagonal entry, and `R` is divided by it.
pub fn hermite_diagonal(t: &PolyMatrix) -> Result<Vec<Poly>> {
    if !t.is_square() {
        return Err(Error::DimensionMismatch("Hermite diagonal of a non-square matrix".into()));
    }
    let f = t.field();
    let m = t.rows();
    let det = t.determinant()?;
    if det.is_zero() {
        return Err(Error::Precondition("Hermite diagonal of a singular matrix".into()));
    }
    let mut modulus = PolyModulus::new(det.make_monic())?;
    // Column-major working copy.
    let mut w: Vec<Vec<Poly>> = (0..m)
        .map(|j| (0..m).map(|i| modulus.rem(&t.get(i, j).rem(modulus.modulus()).expect("nonzero"))).collect())
        .collect();
    let mut diag = vec![Poly::one(f); m];
    for i in (0..m).rev() {
        if modulus.modulus().is_one() {
            break;
        }
        for j in (0..i).rev() {
            if w[j][i].is_zero() {
                continue;
            }
            let a = w[i][i].clone();
            let b = w[j][i].clone();
            let (g, u, v) = a.ext_gcd(&b);
            let (ag, _) = a.divrem(&g)?;
            let (bg, _) = b.divrem(&g)?;
            let (lo, hi) = w.split_at_mut(i);
            let (cj, ci) = (&mut lo[j], &mut hi[0]);
            for r in 0..=i {
                let new_i = modulus.rem(&u.mul(&ci[r]).add(&v.mul(&cj[r])));
                let new_j = modulus.rem(&ag.mul(&cj[r]).sub(&bg.mul(&ci[r])));
                ci[r] = new_i;
                cj[r] = new_j;
            }
            debug_assert!(cj[i].is_zero());
        }
        let h = w[i][i].gcd(modulus.modulus())?;
        let (rest, _) = modulus.modulus().divrem(&h)?;
        diag[i] = h;
        modulus = PolyModulus::new(rest)?;
        for col in w.iter_mut().take(i) {
            for e in col.iter_mut().take(i) {
                *e = modulus.rem(e);
            }
        }
    }
    Ok(diag)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn pm(field: PrimeModulus, rows: &[&[&[i64]]]) -> PolyMatrix {
        let r = rows.len();
        let c = rows[0].len();
        PolyMatrix::from_fn(field, r, c, |i, j| Poly::from_i64s(field, rows[i][j]))
    }

    struct Lcg(u64);
    impl Lcg {
        fn next(&mut self, p: u64) -> u64 {
            self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (self.0 >> 33) % p
        }
        fn poly(&mut self, field: PrimeModulus, len: usize) -> Poly {
            Poly::from_coeffs(field, (0..len).map(|_| self.next(field.value())).collect())
        }
        fn matrix(&mut self, field: PrimeModulus, r: usize, c: usize, len: usize) -> PolyMatrix {
            PolyMatrix::from_fn(field, r, c, |_, _| self.poly(field, len))
        }
    }

    #[test]
    fn kernel_of_row_vector() {
        let gf = f(97);
        let fm = pm(gf, &[&[&[0, 1], &[-1]]]);
        let k = minimal_kernel_basis(&fm).unwrap();
        assert_eq!(k.cols(), 1);
        assert!(fm.mul(&k).unwrap().is_zero());
        assert_eq!(k.cdeg().naturals_or(0), vec![1]);
    }

    #[test]
    fn kernel_of_pencil_with_zero_matrix() {
        // A = 0, U = e_0 for n = 2: kernel degrees are (1) from the Krylov shape.
        let gf = f(5);
        let fm = pm(gf, &[&[&[0, 1], &[0], &[-1]], &[&[0], &[0, 1], &[0]]]);
        let k = minimal_kernel_basis(&fm).unwrap();
        assert!(fm.mul(&k).unwrap().is_zero());
        assert_eq!(k.cdeg().naturals_or(0), vec![1]);
        assert!(k.is_column_reduced().unwrap());
    }

    // Number of vectors of degree <= dmax in the lattice of a column reduced
    // basis, by the predictable degree property.
    fn lattice_count(p: u64, cdeg: &[usize], dmax: usize) -> u64 {
        cdeg.iter()
            .map(|&d| if d <= dmax { p.pow((dmax - d + 1) as u32) } else { 1 })
            .product()
    }

    #[test]
    fn approximant_basis_counts_all_solutions() {
        let gf = f(3);
        let mut rng = Lcg(11);
        for _ in 0..6 {
            let fm = rng.matrix(gf, 1, 2, 3);
            let sigma = 3;
            let pb = approximant_basis(&fm, sigma).unwrap();
            assert!(fm.mul(&pb).unwrap().truncate(sigma).is_zero());
            assert!(pb.is_column_reduced().unwrap());
            let cdeg = pb.cdeg().naturals_or(0);
            // Enumerate all vectors with entries of degree <= 2 over GF(3).
            let dmax = 2;
            let mut count = 0u64;
            for code in 0..3u64.pow(6) {
                let mut c = code;
                let mut entries = Vec::new();
                for _ in 0..2 {
                    let mut v = Vec::new();
                    for _ in 0..=dmax {
                        v.push(c % 3);
                        c /= 3;
                    }
                    entries.push(Poly::from_coeffs(gf, v));
                }
                let val = fm.get(0, 0).mul(&entries[0]).add(&fm.get(0, 1).mul(&entries[1]));
                if val.truncate(sigma).is_zero() {
                    count += 1;
                }
            }
            assert_eq!(count, lattice_count(3, &cdeg, dmax));
        }
    }

    #[test]
    fn approximant_basis_determinant_is_monomial() {
        let gf = f(97);
        let mut rng = Lcg(5);
        let fm = rng.matrix(gf, 2, 4, 3);
        let pb = approximant_basis(&fm, 5).unwrap();
        let det = pb.determinant().unwrap();
        let total = pb.cdeg().sum();
        assert_eq!(det.degree().finite(), Some(total));
        assert!(det.coeffs()[..total].iter().all(|&c| c == 0));
        assert_eq!(total, 2 * 5);
    }

    // Exact Hermite diagonal by column Euclid without modular reduction.
    fn hermite_diagonal_exact(t: &PolyMatrix) -> Vec<Poly> {
        let m = t.rows();
        let mut w: Vec<Vec<Poly>> = (0..m).map(|j| t.column(j)).collect();
        let mut diag = Vec::new();
        for i in (0..m).rev() {
            loop {
                let nonzero: Vec<usize> = (0..=i).filter(|&j| !w[j][i].is_zero()).collect();
                if nonzero.len() <= 1 {
                    if let Some(&j) = nonzero.first() {
                        w.swap(j, i);
                    }
                    break;
                }
                let piv = *nonzero
                    .iter()
                    .min_by_key(|&&j| w[j][i].degree())
                    .unwrap();
                for &j in &nonzero {
                    if j == piv {
                        continue;
                    }
                    let (q, _) = w[j][i].divrem(&w[piv][i]).unwrap();
                    let cp = w[piv].clone();
                    for r in 0..m {
                        w[j][r] = w[j][r].sub(&q.mul(&cp[r]));
                    }
                }
            }
            diag.push(w[i][i].make_monic());
        }
        diag.reverse();
        diag
    }

    #[test]
    fn hermite_diagonal_matches_exact_elimination() {
        for p in [2u64, 7, 97] {
            let gf = f(p);
            let mut rng = Lcg(p);
            for trial in 0..20 {
                let m = 1 + trial % 4;
                let t = rng.matrix(gf, m, m, 1 + trial % 3);
                if t.determinant().unwrap().is_zero() {
                    continue;
                }
                assert_eq!(hermite_diagonal(&t).unwrap(), hermite_diagonal_exact(&t));
            }
        }
    }

    #[test]
    fn hermite_diagonal_small_cases() {
        let gf = f(97);
        let t = pm(gf, &[&[&[0, 1], &[0]], &[&[0], &[0, 0, 1]]]);
        let h = hermite_diagonal(&t).unwrap();
        assert_eq!(h, vec![Poly::x(gf), Poly::monomial(gf, 1, 2)]);
        // [[x, 1], [0, x]]
        let t = pm(gf, &[&[&[0, 1], &[1]], &[&[0], &[0, 1]]]);
        let h = hermite_diagonal(&t).unwrap();
        assert_eq!(h, vec![Poly::x(gf), Poly::x(gf)]);
        let t = pm(gf, &[&[&[0, 1], &[0]], &[&[1], &[0, 1]]]);
        let h = hermite_diagonal(&t).unwrap();
        assert_eq!(h, vec![Poly::monomial(gf, 1, 2), Poly::one(gf)]);
        let singular = pm(gf, &[&[&[1], &[1]], &[&[1], &[1]]]);
        assert!(hermite_diagonal(&singular).is_err());
    }
}
