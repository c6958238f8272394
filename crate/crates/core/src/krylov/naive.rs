//! Direct iteration oracles.

use super::{KrylovBasisResult, KrylovSpec};
use crate::error::Result;
use crate::matf::{DenseMatrix, IncrementalBasis};
use crate::polmat::DegreeTuple;

/// `K(A, U, d)` by repeated matrix-vector products.
pub fn naive_krylov_matrix(spec: &KrylovSpec, d: &[usize]) -> Result<DenseMatrix> {
    spec.check_orders(d)?;
    let (a, n) = (spec.a(), spec.n());
    let mut cols = Vec::with_capacity(d.iter().sum());
    for (j, &dj) in d.iter().enumerate() {
        let mut v = spec.u().column(j);
        for k in 0..dj {
            if k > 0 {
                v = a.mul_vec(&v)?;
            }
            cols.push(v.clone());
        }
    }
    DenseMatrix::from_columns(a.field(), n, &cols)
}

/// Maximal indices: `d_j` is the first `k` with `A^k u_j` in the span of
/// `u_j, .., A^{k-1} u_j` and the orbit of the earlier vectors.
pub fn naive_max_indices(spec: &KrylovSpec) -> DegreeTuple {
    let (a, n) = (spec.a(), spec.n());
    let mut basis = IncrementalBasis::new(a.field(), n);
    let d: Vec<usize> = (0..spec.m())
        .map(|j| {
            let mut v = spec.u().column(j);
            let mut k = 0;
            while basis.insert(&v) {
                k += 1;
                v = a.mul_vec(&v).expect("square A");
            }
            k
        })
        .collect();
    DegreeTuple::from_naturals(&d)
}

/// Maximal Krylov basis from the naive indices.
pub fn naive_krylov_basis(spec: &KrylovSpec) -> KrylovBasisResult {
    let d = naive_max_indices(spec).naturals_or(0);
    let k = naive_krylov_matrix(spec, &d).expect("orders match U");
    KrylovBasisResult::from_indices(k, &d)
}
