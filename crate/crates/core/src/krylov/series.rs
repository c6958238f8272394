//! Polynomial-matrix route.
//!
//! A kernel basis `[S; T]` of `[xI - A  -U]` satisfies `(xI - A) S = U T`;
//! the Hermite diagonal of `T` has the maximal indices as degrees. With the
//! reversed pencil `[I - xA  -U]` the kernel gives the fraction
//! `S T^{-1} = (I - xA)^{-1} U = sum x^k A^k U`, whose column `j` truncated at
//! order `d_j` holds the Krylov iterates of `u_j`.

use super::KrylovSpec;
use crate::error::{Error, Result};
use crate::lifting::{truncated_inverse, truncated_product};
use crate::matf::DenseMatrix;
use crate::orderbasis::{hermite_diagonal, minimal_kernel_basis};
use crate::poly::Poly;
use crate::polmat::{DegreeTuple, PolyMatrix};

/// `[xI - A  -U]`, or `[I - xA  -U]` when `reversed`.
pub(crate) fn pencil(spec: &KrylovSpec, reversed: bool) -> PolyMatrix {
    let (a, u) = (spec.a(), spec.u());
    let f = a.field();
    let n = spec.n();
    PolyMatrix::from_fn(f, n, n + spec.m(), |i, j| {
        if j >= n {
            return Poly::constant(f, f.neg(u.get(i, j - n)));
        }
        let diag = u64::from(i == j);
        let c = f.neg(a.get(i, j));
        if reversed {
            Poly::from_coeffs(f, vec![diag, c])
        } else {
            Poly::from_coeffs(f, vec![c, diag])
        }
    })
}

/// Splits a kernel basis of a pencil into its top `n` and bottom rows.
pub(crate) fn kernel_parts(spec: &KrylovSpec, reversed: bool) -> (PolyMatrix, PolyMatrix) {
    let n = spec.n();
    let k = minimal_kernel_basis(&pencil(spec, reversed)).expect("pencils have full row rank");
    (k.row_range(0, n), k.row_range(n, n + spec.m()))
}

/// Maximal indices as the degrees of the Hermite diagonal of `T`.
pub fn max_indices(spec: &KrylovSpec) -> DegreeTuple {
    if spec.m() == 0 {
        return DegreeTuple::default();
    }
    if spec.n() == 0 {
        return DegreeTuple::from_naturals(&vec![0; spec.m()]);
    }
    let (_, t) = kernel_parts(spec, false);
    let h = hermite_diagonal(&t).expect("T is nonsingular");
    DegreeTuple(h.iter().map(Poly::degree).collect())
}

/// `K(A, U, d)` from the truncated expansion of `S T^{-1}`.
pub fn krylov_matrix(spec: &KrylovSpec, d: &[usize]) -> Result<DenseMatrix> {
    spec.check_orders(d)?;
    let n = spec.n();
    let f = spec.a().field();
    let live: Vec<usize> = (0..d.len()).filter(|&j| d[j] > 0).collect();
    if live.is_empty() || n == 0 {
        return Ok(DenseMatrix::zeros(f, n, d.iter().sum()));
    }
    let sub = spec.restrict(&live);
    let dl: Vec<usize> = live.iter().map(|&j| d[j]).collect();
    let (s, t) = kernel_parts(&sub, true);
    let q = truncated_inverse(&t, &dl)?;
    let p = truncated_product(&s, &q, &dl)?;
    p.expand_columns(&dl)
}

/// Turns a kernel basis `[S; T]` of `[xI - A  -U]` into one of `[I - xA  -U]`
/// by substituting `1/x` and scaling column `j` by `x^{d_j}`, `d = cdeg T`.
///
/// Column reducedness of `T` gives `T^(0)` invertible. `S` must have column
/// degrees below those of `T` (a zero column where `d_j = 0`).
pub fn reverse_kernel_transform(s: &PolyMatrix, t: &PolyMatrix, n: usize) -> Result<(PolyMatrix, PolyMatrix)> {
    if s.rows() != n || s.cols() != t.cols() {
        return Err(Error::DimensionMismatch(format!(
            "S is {}x{}, T is {}x{}, n = {n}",
            s.rows(),
            s.cols(),
            t.rows(),
            t.cols()
        )));
    }
    let f = s.field();
    let d = t.cdeg();
    let mut s_hat = PolyMatrix::zeros(f, n, s.cols());
    for j in 0..s.cols() {
        let dj = d.get(j).finite();
        let sj = s.col_degree(j);
        match (dj, sj.finite()) {
            (_, None) => {}
            (Some(dj), Some(sj)) if sj < dj => {
                for i in 0..n {
                    s_hat.set(i, j, s.get(i, j).reverse(dj - 1)?);
                }
            }
            _ => {
                return Err(Error::Precondition(format!(
                    "column {j} of S has degree {} but T has {}",
                    s.col_degree(j),
                    d.get(j)
                )))
            }
        }
    }
    let t_hat = t.col_reverse(&d.naturals_or(0))?;
    Ok((s_hat, t_hat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::PrimeModulus;
    use crate::krylov::naive::{naive_krylov_matrix, naive_max_indices};

    fn spec(p: u64, a: &[Vec<u64>], u: &[Vec<u64>]) -> KrylovSpec {
        let f = PrimeModulus::new(p).unwrap();
        KrylovSpec::new(DenseMatrix::from_rows(f, a).unwrap(), DenseMatrix::from_rows(f, u).unwrap()).unwrap()
    }

    fn lcg_spec(p: u64, n: usize, m: usize, seed: u64) -> KrylovSpec {
        let f = PrimeModulus::new(p).unwrap();
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 33) % p
        };
        let a = DenseMatrix::from_fn(f, n, n, |_, _| next());
        let u = DenseMatrix::from_fn(f, n, m, |_, _| next());
        KrylovSpec::new(a, u).unwrap()
    }

    #[test]
    fn indices_examples() {
        let s = spec(97, &[vec![0, 1], vec![0, 0]], &[vec![0, 1], vec![1, 0]]);
        assert_eq!(max_indices(&s).naturals_or(0), vec![2, 0]);
        let jordan = vec![vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]];
        let s = spec(97, &jordan, &[vec![0], vec![0], vec![1]]);
        assert_eq!(max_indices(&s).naturals_or(0), vec![3]);
        let id: Vec<Vec<u64>> = (0..3).map(|i| (0..3).map(|j| u64::from(i == j)).collect()).collect();
        assert_eq!(max_indices(&spec(5, &id, &id)).naturals_or(0), vec![1, 1, 1]);
        let s = spec(5, &id, &[vec![], vec![], vec![]]);
        assert!(max_indices(&s).is_empty());
    }

    #[test]
    fn indices_match_oracle() {
        for p in [2u64, 3, 97] {
            for seed in 0..8 {
                let s = lcg_spec(p, 6, 1 + (seed as usize % 4), seed);
                assert_eq!(max_indices(&s), naive_max_indices(&s), "p={p} seed={seed}");
            }
        }
    }

    #[test]
    fn krylov_matrix_examples() {
        let s = spec(97, &[vec![0, 0], vec![0, 0]], &[vec![3], vec![4]]);
        assert_eq!(krylov_matrix(&s, &[2]).unwrap().to_rows(), vec![vec![3, 0], vec![4, 0]]);
        let s = spec(97, &[vec![0, 1], vec![0, 0]], &[vec![0], vec![1]]);
        assert_eq!(krylov_matrix(&s, &[2]).unwrap().to_rows(), vec![vec![0, 1], vec![1, 0]]);
        let s = lcg_spec(97, 6, 2, 9);
        assert_eq!(krylov_matrix(&s, &[5, 3]).unwrap(), naive_krylov_matrix(&s, &[5, 3]).unwrap());
        assert_eq!(krylov_matrix(&s, &[0, 0]).unwrap().cols(), 0);
        assert_eq!(krylov_matrix(&s, &[0, 11]).unwrap(), naive_krylov_matrix(&s, &[0, 11]).unwrap());
    }

    #[test]
    fn reversal_of_scalar_kernel() {
        let s = spec(97, &[vec![0]], &[vec![1]]);
        let (sk, tk) = kernel_parts(&s, false);
        let (sh, th) = reverse_kernel_transform(&sk, &tk, 1).unwrap();
        assert_eq!(sh.get(0, 0).degree().finite(), Some(0));
        assert!(th.eval_at_zero().is_invertible());
        let prod = pencil(&s, true).mul(&sh.vcat(&th).unwrap()).unwrap();
        assert!(prod.is_zero());
    }
}
