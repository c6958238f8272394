//! Minimal polynomials, invariant factors, matrix powers and the Kalman
//! controllability split.

use num_bigint::BigUint;

use crate::krylov::{krylov_basis, AlgoConfig, KrylovSpec};
use crate::matf::{DenseMatrix, IncrementalBasis};
use crate::orderbasis::minimal_kernel_basis;
use crate::poly::Poly;
use crate::polmat::PolyMatrix;

/// Invariant factors `f_1 | f_2 | .. | f_s` (all of degree at least one) and
/// the block diagonal matrix of their companion matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusData {
    pub invariant_factors: Vec<Poly>,
    pub block_form: DenseMatrix,
}

/// `P` whose first `nu` columns are the maximal Krylov basis of `Orb(A, U)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KalmanData {
    pub p: DenseMatrix,
    pub nu: usize,
}

impl KalmanData {
    /// `(P^{-1} A P, P^{-1} U)`.
    pub fn transformed(&self, spec: &KrylovSpec) -> (DenseMatrix, DenseMatrix) {
        let pinv = self.p.inverse().expect("P is invertible");
        let a = pinv.mul(spec.a()).and_then(|m| m.mul(&self.p)).expect("square");
        let u = pinv.mul(spec.u()).expect("n rows");
        (a, u)
    }
}

fn pencil(a: &DenseMatrix) -> PolyMatrix {
    let f = a.field();
    PolyMatrix::from_fn(f, a.rows(), a.cols(), |i, j| {
        Poly::from_coeffs(f, vec![f.neg(a.get(i, j)), u64::from(i == j)])
    })
}

/// Monic `f` of least degree with `f(A) u = 0`: the last entry of the kernel
/// basis vector of `[xI - A  -u]`.
pub fn vector_minpoly(a: &DenseMatrix, u: &[u64]) -> Poly {
    let f = a.field();
    let n = a.rows();
    assert_eq!(u.len(), n, "vector length");
    let ucol = DenseMatrix::from_columns(f, n, &[u.to_vec()]).expect("n rows");
    let spec = KrylovSpec::new(a.clone(), ucol).expect("square A");
    let fm = crate::krylov::series::pencil(&spec, false);
    let k = minimal_kernel_basis(&fm).expect("pencil has full row rank");
    k.get(n, 0).make_monic()
}

/// Diagonal of the Smith form of a square polynomial matrix, monic, in
/// divisibility order (zero entries last).
pub fn smith_diagonal(m: &PolyMatrix) -> Vec<Poly> {
    assert!(m.is_square(), "square matrix");
    let n = m.rows();
    let f = m.field();
    let mut w: Vec<Vec<Poly>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j).clone()).collect()).collect();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        loop {
            let pivot = (k..n)
                .flat_map(|i| (k..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !w[i][j].is_zero())
                .min_by_key(|&(i, j)| w[i][j].degree());
            let Some((pi, pj)) = pivot else {
                diag.extend((k..n).map(|_| Poly::zero(f)));
                return diag;
            };
            w.swap(k, pi);
            for row in w.iter_mut() {
                row.swap(k, pj);
            }
            let mut clean = true;
            for i in k + 1..n {
                if w[i][k].is_zero() {
                    continue;
                }
                let (q, r) = w[i][k].divrem(&w[k][k]).expect("nonzero pivot");
                for j in k..n {
                    let t = q.mul(&w[k][j]);
                    w[i][j] = w[i][j].sub(&t);
                }
                clean &= r.is_zero();
            }
            for j in k + 1..n {
                if w[k][j].is_zero() {
                    continue;
                }
                let (q, r) = w[k][j].divrem(&w[k][k]).expect("nonzero pivot");
                for i in k..n {
                    let t = q.mul(&w[i][k]);
                    w[i][j] = w[i][j].sub(&t);
                }
                clean &= r.is_zero();
            }
            if !clean {
                continue;
            }
            // the pivot must divide the remaining block; otherwise fold a row in
            let bad = (k + 1..n).find(|&i| {
                (k + 1..n).any(|j| !w[i][j].rem(&w[k][k]).expect("nonzero pivot").is_zero())
            });
            match bad {
                Some(i) => {
                    for j in k..n {
                        let t = w[i][j].clone();
                        w[k][j].add_assign(&t);
                    }
                }
                None => break,
            }
        }
        diag.push(w[k][k].make_monic());
    }
    diag
}

/// Companion matrix of a monic polynomial, with ones on the subdiagonal and
/// `-c_0 .. -c_{k-1}` in the last column.
pub fn companion_matrix(p: &Poly) -> DenseMatrix {
    let f = p.field();
    let k = p.len().saturating_sub(1);
    DenseMatrix::from_fn(f, k, k, |i, j| {
        if j == k - 1 {
            f.neg(p.coeff(i))
        } else {
            u64::from(i == j + 1)
        }
    })
}

/// Invariant factors from the Smith form of `xI - A`.
pub fn invariant_factors(a: &DenseMatrix) -> FrobeniusData {
    let f = a.field();
    let factors: Vec<Poly> = smith_diagonal(&pencil(a))
        .into_iter()
        .filter(|p| p.len() >= 2)
        .collect();
    let n = a.rows();
    let mut block_form = DenseMatrix::zeros(f, n, n);
    let mut at = 0;
    for p in &factors {
        let c = companion_matrix(p);
        for i in 0..c.rows() {
            for j in 0..c.cols() {
                block_form.set(at + i, at + j, c.get(i, j));
            }
        }
        at += c.rows();
    }
    FrobeniusData {
        invariant_factors: factors,
        block_form,
    }
}

/// Minimal polynomial: the largest invariant factor.
pub fn matrix_minpoly(a: &DenseMatrix) -> Poly {
    invariant_factors(a)
        .invariant_factors
        .pop()
        .unwrap_or_else(|| Poly::one(a.field()))
}

/// `p(A)` by the Paterson-Stockmeyer scheme: about `2 sqrt(deg p)` products.
pub fn poly_eval_matrix(p: &Poly, a: &DenseMatrix) -> DenseMatrix {
    let f = a.field();
    let n = a.rows();
    if p.is_zero() {
        return DenseMatrix::zeros(f, n, n);
    }
    let len = p.len();
    let s = ((len as f64).sqrt().ceil() as usize).max(1);
    let mut powers = vec![DenseMatrix::identity(f, n)];
    for i in 1..=s {
        let next = powers[i - 1].mul(a).expect("square");
        powers.push(next);
    }
    let chunk = |c: usize| -> DenseMatrix {
        let mut acc = DenseMatrix::zeros(f, n, n);
        for (k, pw) in powers.iter().enumerate().take(s) {
            let coeff = p.coeff(c * s + k);
            if coeff != 0 {
                acc = acc.add(&pw.scale(coeff)).expect("same shape");
            }
        }
        acc
    };
    let chunks = len.div_ceil(s);
    let mut acc = chunk(chunks - 1);
    for c in (0..chunks - 1).rev() {
        acc = acc.mul(&powers[s]).and_then(|m| m.add(&chunk(c))).expect("square");
    }
    acc
}

/// `A^k` as `r(A)` with `r = x^k rem minpoly(A)`.
pub fn matrix_power(a: &DenseMatrix, k: &BigUint) -> DenseMatrix {
    let f = a.field();
    let n = a.rows();
    if n == 0 {
        return DenseMatrix::zeros(f, 0, 0);
    }
    let mu = matrix_minpoly(a);
    let r = Poly::powmod(k, &mu).expect("minimal polynomial is monic of positive degree");
    poly_eval_matrix(&r, a)
}

/// Krylov basis of `Orb(A, U)` completed by unit vectors taken in index order.
pub fn kalman_decomposition(spec: &KrylovSpec) -> KalmanData {
    let basis = krylov_basis(spec, &AlgoConfig::default()).basis;
    let f = basis.field();
    let n = spec.n();
    let nu = basis.cols();
    let mut span = IncrementalBasis::new(f, n);
    let mut cols: Vec<Vec<u64>> = (0..nu).map(|j| basis.column(j)).collect();
    for c in &cols {
        span.insert(c);
    }
    for i in 0..n {
        if cols.len() == n {
            break;
        }
        let mut e = vec![0; n];
        e[i] = 1;
        if span.insert(&e) {
            cols.push(e);
        }
    }
    KalmanData {
        p: DenseMatrix::from_columns(f, n, &cols).expect("n rows"),
        nu,
    }
}
