//! Independent reference implementations used as test oracles.
//!
//! Everything here works on plain `Vec` data with `u128` products and does
//! not call the arithmetic of the library under test.
#![allow(dead_code)]

use krylovium::gf::PrimeModulus;
use krylovium::matf::DenseMatrix;
use krylovium::poly::Poly;
use krylovium::polmat::PolyMatrix;
use num_bigint::BigUint;

pub const PRIMES: [u64; 4] = [2, 3, 97, 4611686018427387847];
pub const P62: u64 = 4611686018427387847;

pub type Mat = Vec<Vec<u64>>;

pub fn mulm(p: u64, a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn addm(p: u64, a: u64, b: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

pub fn subm(p: u64, a: u64, b: u64) -> u64 {
    addm(p, a, p - b % p)
}

pub fn powm(p: u64, mut a: u64, mut e: u64) -> u64 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(p, r, a);
        }
        a = mulm(p, a, a);
        e >>= 1;
    }
    r
}

pub fn invm(p: u64, a: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero");
    powm(p, a, p - 2)
}

pub fn rows_of(m: &DenseMatrix) -> Mat {
    m.to_rows()
}

pub fn dense(p: u64, rows: usize, cols: usize, m: &Mat) -> DenseMatrix {
    let f = PrimeModulus::new(p).unwrap();
    DenseMatrix::from_fn(f, rows, cols, |i, j| m[i][j])
}

pub fn zeros(r: usize, c: usize) -> Mat {
    vec![vec![0; c]; r]
}

pub fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect()
}

pub fn mat_mul(p: u64, a: &Mat, b: &Mat, inner: usize, cols: usize) -> Mat {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(0, |acc, k| addm(p, acc, mulm(p, row[k], b[k][j]))))
                .collect()
        })
        .collect()
}

pub fn mat_add(p: u64, a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(&u, &v)| addm(p, u, v)).collect()).collect()
}

pub fn mat_vec(p: u64, a: &Mat, v: &[u64]) -> Vec<u64> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(0, |acc, (&x, &y)| addm(p, acc, mulm(p, x, y))))
        .collect()
}

/// Rank of a set of column vectors by Gaussian elimination.
pub fn rank_of_columns(p: u64, cols: &[Vec<u64>]) -> usize {
    let mut rows: Mat = cols.to_vec();
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..width {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = invm(p, rows[rank][c]);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let t = mulm(p, rows[r][c], inv);
                for k in c..width {
                    let s = mulm(p, t, rows[rank][k]);
                    rows[r][k] = subm(p, rows[r][k], s);
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn inverse(p: u64, a: &Mat) -> Option<Mat> {
    let n = a.len();
    let mut w: Mat = a.iter().zip(identity(n)).map(|(r, e)| r.iter().copied().chain(e).collect()).collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| w[r][c] != 0)?;
        w.swap(c, piv);
        let inv = invm(p, w[c][c]);
        for k in 0..2 * n {
            w[c][k] = mulm(p, w[c][k], inv);
        }
        for r in 0..n {
            if r != c && w[r][c] != 0 {
                let t = w[r][c];
                for k in 0..2 * n {
                    let s = mulm(p, t, w[c][k]);
                    w[r][k] = subm(p, w[r][k], s);
                }
            }
        }
    }
    Some(w.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn column(m: &Mat, j: usize) -> Vec<u64> {
    m.iter().map(|r| r[j]).collect()
}

pub fn from_columns(n: usize, cols: &[Vec<u64>]) -> Mat {
    (0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}

/// Columns `u_j, A u_j, .., A^{d_j - 1} u_j`, block after block.
pub fn krylov_columns(p: u64, a: &Mat, u: &Mat, d: &[usize]) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for (j, &dj) in d.iter().enumerate() {
        let mut v = column(u, j);
        for _ in 0..dj {
            let next = mat_vec(p, a, &v);
            out.push(std::mem::replace(&mut v, next));
        }
    }
    out
}

/// Greedy lexicographically maximal indices: vector by vector, extend the
/// chain while the new iterate stays independent of everything kept so far.
pub fn oracle_indices(p: u64, a: &Mat, u: &Mat) -> (Vec<usize>, Vec<Vec<u64>>) {
    let n = a.len();
    let m = u.first().map_or(0, Vec::len);
    let mut kept: Vec<Vec<u64>> = Vec::new();
    let mut d = vec![0; m];
    for j in 0..m {
        let mut v = column(u, j);
        while kept.len() < n {
            kept.push(v.clone());
            if rank_of_columns(p, &kept) < kept.len() {
                kept.pop();
                break;
            }
            d[j] += 1;
            v = mat_vec(p, a, &v);
        }
    }
    (d, kept)
}

pub fn ptrim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn pmul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            c[i + j] = addm(p, c[i + j], mulm(p, x, y));
        }
    }
    ptrim(c)
}

pub fn padd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    ptrim((0..n).map(|i| addm(p, *a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0))).collect())
}

pub fn psub(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    ptrim((0..n).map(|i| subm(p, *a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0))).collect())
}

/// Remainder of `a` by a nonzero `b`.
pub fn prem(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let b = ptrim(b.to_vec());
    let mut r = ptrim(a.to_vec());
    let inv = invm(p, *b.last().unwrap());
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let t = mulm(p, *r.last().unwrap(), inv);
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = subm(p, r[shift + i], mulm(p, t, bi));
        }
        r = ptrim(r);
    }
    r
}

/// Characteristic polynomial `det(xI - A)` by reduction to Hessenberg form.
pub fn charpoly(p: u64, a: &Mat) -> Vec<u64> {
    let n = a.len();
    let mut h = a.clone();
    for c in 0..n.saturating_sub(2) {
        let Some(piv) = (c + 1..n).find(|&r| h[r][c] != 0) else { continue };
        if piv != c + 1 {
            h.swap(piv, c + 1);
            for row in h.iter_mut() {
                row.swap(piv, c + 1);
            }
        }
        let inv = invm(p, h[c + 1][c]);
        for r in c + 2..n {
            let t = mulm(p, h[r][c], inv);
            if t == 0 {
                continue;
            }
            for k in 0..n {
                let s = mulm(p, t, h[c + 1][k]);
                h[r][k] = subm(p, h[r][k], s);
            }
            for row in h.iter_mut() {
                let s = mulm(p, t, row[r]);
                row[c + 1] = addm(p, row[c + 1], s);
            }
        }
    }
    // chi_k = (x - h_kk) chi_{k-1} - sum_i h_ik (prod_{l=i+1..k} h_{l,l-1}) chi_{i-1}
    let mut chi: Vec<Vec<u64>> = vec![vec![1 % p]];
    for k in 0..n {
        let mut next = pmul(p, &[subm(p, 0, h[k][k]), 1], &chi[k]);
        let mut prod = 1 % p;
        for i in (0..k).rev() {
            prod = mulm(p, prod, h[i + 1][i]);
            let t = mulm(p, prod, h[i][k]);
            next = psub(p, &next, &pmul(p, &[t], &chi[i]));
        }
        chi.push(next);
    }
    chi.pop().unwrap()
}

/// `f(A)` by Horner's rule.
pub fn poly_of_matrix(p: u64, f: &[u64], a: &Mat) -> Mat {
    let n = a.len();
    let mut acc = zeros(n, n);
    for &c in f.iter().rev() {
        acc = mat_mul(p, &acc, a, n, n);
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] = addm(p, row[i], c);
        }
    }
    acc
}

pub fn binary_power(p: u64, a: &Mat, k: &BigUint) -> Mat {
    let n = a.len();
    let mut r = identity(n);
    for i in (0..k.bits()).rev() {
        r = mat_mul(p, &r, &r, n, n);
        if k.bit(i) {
            r = mat_mul(p, &r, a, n, n);
        }
    }
    r
}

/// Polynomial matrix as coefficient matrices `[M_0, M_1, ..]`.
pub fn coeffs_of(m: &PolyMatrix) -> Vec<Mat> {
    let len = m.degree().finite().map_or(0, |d| d + 1);
    (0..len).map(|k| rows_of(&m.coeff(k))).collect()
}

pub fn poly_matrix(p: u64, rows: usize, cols: usize, coeffs: &[Mat]) -> PolyMatrix {
    let f = PrimeModulus::new(p).unwrap();
    let cs: Vec<DenseMatrix> = coeffs.iter().map(|c| dense(p, rows, cols, c)).collect();
    PolyMatrix::from_coefficients(f, rows, cols, &cs).unwrap()
}

/// First `order` coefficients of `P^{-1}` from `P C = I`, one coefficient at a time.
pub fn series_inverse(p: u64, pm: &[Mat], m: usize, order: usize) -> Option<Vec<Mat>> {
    let p0inv = inverse(p, pm.first()?)?;
    let mut c: Vec<Mat> = Vec::with_capacity(order);
    for k in 0..order {
        let mut rhs = if k == 0 { identity(m) } else { zeros(m, m) };
        for i in 1..=k.min(pm.len().saturating_sub(1)) {
            let t = mat_mul(p, &pm[i], &c[k - i], m, m);
            rhs = rhs.iter().zip(&t).map(|(x, y)| x.iter().zip(y).map(|(&u, &v)| subm(p, u, v)).collect()).collect();
        }
        c.push(mat_mul(p, &p0inv, &rhs, m, m));
    }
    Some(c)
}

/// Schoolbook product of polynomial matrices in coefficient form.
pub fn pm_mul(p: u64, a: &[Mat], b: &[Mat], rows: usize, inner: usize, cols: usize) -> Vec<Mat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![zeros(rows, cols); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] = mat_add(p, &out[i + j], &mat_mul(p, ai, bj, inner, cols));
        }
    }
    out
}

/// Keeps coefficient `k` of column `j` only when `k < d_j`.
pub fn col_truncate(coeffs: &[Mat], d: &[usize]) -> Vec<Mat> {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c.iter().map(|row| row.iter().enumerate().map(|(j, &v)| if k < d[j] { v } else { 0 }).collect()).collect())
        .collect()
}

/// Same polynomial matrix, comparing coefficient lists up to trailing zeros.
pub fn same_series(a: &[Mat], b: &[Mat]) -> bool {
    let n = a.len().max(b.len());
    (0..n).all(|k| {
        let za = a.get(k);
        let zb = b.get(k);
        match (za, zb) {
            (Some(x), Some(y)) => x == y,
            (Some(x), None) | (None, Some(x)) => x.iter().all(|r| r.iter().all(|&v| v == 0)),
            (None, None) => true,
        }
    })
}

pub fn to_poly(p: u64, c: &[u64]) -> Poly {
    Poly::from_coeffs(PrimeModulus::new(p).unwrap(), c.to_vec())
}
