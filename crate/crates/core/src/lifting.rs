//! Truncated power series expansions of polynomial matrix inverses.
//!
//! With `X = x^t` and `t = deg P`, the expansion `P^{-1} = sum E_i X^i` has
//! digits `E_i` of degree `< t`. For a right-hand side `R` of degree `< t`,
//! the residue `rho_b(R)` is the degree `< t` matrix with
//! `P^{-1} R = (P^{-1} R rem X^b) + X^b P^{-1} rho_b(R)`. Residues compose,
//! `rho_{a+b} = rho_b o rho_a`, and `rho_b` only needs the two digits of
//! `P^{-1}` at offset `b - 1`, which is what the high-order components store.

use crate::error::{Error, Result};
use crate::matf::DenseMatrix;
use crate::poly::Poly;
use crate::polmat::PolyMatrix;

/// Two-digit windows of `P^{-1}` at offsets `(2^{i+1} - 2) t`, `i = 0..=h`.
#[derive(Clone, Debug)]
pub struct HighOrderComponents {
    pub base_degree: usize,
    /// Slice `i` is `(P^{-1} div x^{(2^{i+1}-2) t}) rem x^{2t}`.
    pub slices: Vec<PolyMatrix>,
}

fn ceil_log2(x: usize) -> u32 {
    x.next_power_of_two().trailing_zeros()
}

fn constant_inverse(p: &PolyMatrix) -> Result<DenseMatrix> {
    if !p.is_square() {
        return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    p.eval_at_zero().inverse().map_err(|_| Error::SingularConstantTerm)
}

/// `P^{-1} rem x^order` by Newton iteration.
pub fn newton_series_inverse(p: &PolyMatrix, order: usize) -> Result<PolyMatrix> {
    let inv0 = constant_inverse(p)?;
    let m = p.rows();
    let f = p.field();
    if order == 0 {
        return Ok(PolyMatrix::zeros(f, m, m));
    }
    let id = PolyMatrix::identity(f, m);
    let mut x = PolyMatrix::from_constant(&inv0);
    let mut prec = 1;
    while prec < order {
        prec = (2 * prec).min(order);
        // x <- x + x (I - P x)
        let err = id.sub(&p.truncate(prec).mul(&x)?.truncate(prec))?;
        x = x.add(&x.mul(&err)?)?.truncate(prec);
    }
    Ok(x)
}

/// `rho_b(R)` from the window `W = (P^{-1} div X^{b-1}) rem X^2`.
fn residue(p: &PolyMatrix, w: &PolyMatrix, r: &PolyMatrix, t: usize) -> Result<PolyMatrix> {
    let digit = w.mul(r)?.window(t, 2 * t);
    Ok(p.mul(&digit)?.truncate(t))
}

fn lifting_degree(p: &PolyMatrix) -> Result<usize> {
    match p.degree().finite() {
        Some(t) if t > 0 => Ok(t),
        _ => Err(Error::Precondition("high-order lifting needs a matrix of positive degree".into())),
    }
}

/// Slices `0..=h` of the expansion of `P^{-1}`, with `t = deg P >= 1`.
pub fn high_order_comp(p: &PolyMatrix, h: usize) -> Result<HighOrderComponents> {
    let t = lifting_degree(p)?;
    let w0 = newton_series_inverse(p, 2 * t)?;
    let mut slices = vec![w0];
    for i in 0..h {
        let wi = &slices[i];
        // rho_{2^{i+1}-1}(I) = (P * digit (2^{i+1}-1) of P^{-1}) rem X
        let r = p.mul(&wi.shift_down(t))?.truncate(t);
        // rho_{2^{i+2}-2}(I) = rho_{2^{i+1}-1}(rho_{2^{i+1}-1}(I))
        let r = residue(p, wi, &r, t)?;
        let next = slices[0].mul(&r)?.truncate(2 * t);
        slices.push(next);
    }
    Ok(HighOrderComponents { base_degree: t, slices })
}

/// `(P^{-1} V) rem x^{s t}` for `t = deg P >= 1` and `deg V < t`.
///
/// Small `s` goes through Newton iteration; otherwise the order is rounded up
/// to a power of two `S`, residues at every even digit position are produced
/// by a doubling tree of jumps `2^j = 1 + (2^j - 1)`, and one product by the
/// first window turns each residue into two digits.
pub fn series_sol(
    p: &PolyMatrix,
    v: &PolyMatrix,
    s: usize,
    comps: Option<&HighOrderComponents>,
) -> Result<PolyMatrix> {
    let t = lifting_degree(p)?;
    constant_inverse(p)?;
    if v.rows() != p.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side with {} rows for a {}x{} matrix",
            v.rows(),
            p.rows(),
            p.cols()
        )));
    }
    if v.degree().finite().is_some_and(|dv| dv >= t) {
        return Err(Error::DegreeBound(format!(
            "right-hand side degree must be below {t}"
        )));
    }
    let f = p.field();
    let (m, c) = (p.rows(), v.cols());
    if s == 0 || v.is_zero() {
        return Ok(PolyMatrix::zeros(f, m, c));
    }
    if s <= 4 {
        let inv = newton_series_inverse(p, s * t)?;
        return Ok(inv.mul(v)?.truncate(s * t));
    }
    let levels = ceil_log2(s) as usize;
    let owned;
    let comps = match comps {
        Some(cp) if cp.base_degree == t && cp.slices.len() >= levels - 1 => cp,
        _ => {
            owned = high_order_comp(p, levels - 1)?;
            &owned
        }
    };
    let w0 = &comps.slices[0];
    // residues at digit positions, kept sorted
    let mut residues: Vec<(usize, PolyMatrix)> = vec![(0, v.clone())];
    for j in (1..levels).rev() {
        let jump = 1usize << j;
        let mut all = residues[0].1.clone();
        for (_, r) in &residues[1..] {
            all = all.hcat(r)?;
        }
        let moved = residue(p, &comps.slices[j - 1], &all, t)?;
        let moved = residue(p, w0, &moved, t)?;
        let mut next = Vec::with_capacity(2 * residues.len());
        for (k, (pos, r)) in residues.into_iter().enumerate() {
            let cols: Vec<usize> = (k * c..(k + 1) * c).collect();
            next.push((pos, r));
            next.push((pos + jump, moved.select_columns(&cols)));
        }
        next.sort_by_key(|(pos, _)| *pos);
        residues = next;
    }
    let mut all = residues[0].1.clone();
    for (_, r) in &residues[1..] {
        all = all.hcat(r)?;
    }
    let digits = w0.mul(&all)?.truncate(2 * t);
    let total = s * t;
    let mut out = PolyMatrix::zeros(f, m, c);
    for (k, (pos, _)) in residues.iter().enumerate() {
        let offset = pos * t;
        if offset >= total {
            continue;
        }
        for i in 0..m {
            for jj in 0..c {
                let piece = digits.get(i, k * c + jj).shift(offset);
                out.get_mut(i, jj).add_assign(&piece);
            }
        }
    }
    Ok(out.truncate(total))
}

/// Column-truncated inverse: column `j` of `P^{-1} rem x^{d_j}`.
///
/// Columns are grouped by truncation order relative to the average
/// `|d| / m`, and each group is solved on the partial linearization of `P`
/// with a series solution of just the needed length.
pub fn truncated_inverse(p: &PolyMatrix, d: &[usize]) -> Result<PolyMatrix> {
    let m = p.rows();
    if d.len() != m {
        return Err(Error::DimensionMismatch(format!("{} truncation orders for {m} columns", d.len())));
    }
    let inv0 = constant_inverse(p)?;
    let f = p.field();
    let mut q = PolyMatrix::zeros(f, m, m);
    if d.iter().all(|&dj| dj == 0) {
        return Ok(q);
    }
    if p.degree().unwrap_or(0) == 0 {
        for j in (0..m).filter(|&j| d[j] > 0) {
            for i in 0..m {
                q.set(i, j, Poly::constant(f, inv0.get(i, j)));
            }
        }
        return Ok(q);
    }
    let total = d.iter().sum::<usize>();
    let ell = (ceil_log2(m) as usize).max(1);
    // d_j in bucket k iff 2^{k-1} |d| < m d_j <= 2^k |d| (bucket 1 also takes smaller orders)
    let bucket_of = |dj: usize| -> usize {
        (1..=ell)
            .find(|&k| m * dj <= (total << k))
            .expect("d_j <= |d| <= 2^ell |d| / m")
    };
    let lin = p.partial_linearization()?;
    let t = lin.degree_bound;
    assert!(t > 0, "partial linearization of a non-constant matrix has positive degree");
    let pbar = &lin.matrix;
    let mb = lin.dim;
    let s_of = |k: usize| (total << k).div_ceil(m * t);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); ell + 1];
    for j in (0..m).filter(|&j| d[j] > 0) {
        buckets[bucket_of(d[j])].push(j);
    }
    let s_max = (1..=ell).filter(|&k| !buckets[k].is_empty()).map(s_of).max().unwrap_or(0);
    let comps = if s_max > 4 {
        Some(high_order_comp(pbar, ceil_log2(s_max) as usize - 1)?)
    } else {
        None
    };
    for k in 1..=ell {
        let cols = &buckets[k];
        if cols.is_empty() {
            continue;
        }
        let e = PolyMatrix::from_fn(f, mb, cols.len(), |i, c| {
            if i == cols[c] {
                Poly::one(f)
            } else {
                Poly::zero(f)
            }
        });
        let sol = series_sol(pbar, &e, s_of(k), comps.as_ref())?;
        for (c, &j) in cols.iter().enumerate() {
            for i in 0..m {
                q.set(i, j, sol.get(i, c).truncate(d[j]));
            }
        }
    }
    Ok(q)
}

/// Column-truncated product `(F G) rem x^d`.
pub fn truncated_product(fm: &PolyMatrix, g: &PolyMatrix, d: &[usize]) -> Result<PolyMatrix> {
    truncated_product_traced(fm, g, d, |_, _, _| {})
}

/// [`truncated_product`] reporting the partial result after each round.
///
/// The hook receives the round index, the order `b` such that the partial
/// result equals `((F rem x^b) G) rem x^d` (`None` once all of `F` is
/// accounted for), and the partial result.
pub fn truncated_product_traced(
    fm: &PolyMatrix,
    g: &PolyMatrix,
    d: &[usize],
    mut hook: impl FnMut(usize, Option<usize>, &PolyMatrix),
) -> Result<PolyMatrix> {
    let (n, m) = (fm.rows(), fm.cols());
    if g.rows() != m || g.cols() != m || d.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "truncated product of {n}x{m} by {}x{} with {} orders",
            g.rows(),
            g.cols(),
            d.len()
        )));
    }
    let f = fm.field();
    if d.iter().all(|&dj| dj == 0) {
        return Ok(PolyMatrix::zeros(f, n, m));
    }
    let cdeg = fm.cdeg();
    let gamma = cdeg.sum();
    let big_d = d.iter().sum::<usize>().max(gamma);
    let delta = big_d.div_ceil(m);
    let ell = ceil_log2(m) as usize;
    let (f0, covered) = if ell >= 2 {
        (fm.truncate(2 * delta), Some(2 * delta))
    } else {
        (fm.clone(), None)
    };
    let mut r = f0.mul(g)?.col_truncate(d)?;
    hook(0, covered, &r);
    for k in 1..ell {
        let lo = delta << k;
        let top = k == ell - 1;
        let ii: Vec<usize> = (0..m).filter(|&i| cdeg.get(i).finite().is_some_and(|c| c >= lo)).collect();
        let jj: Vec<usize> = (0..m).filter(|&j| d[j] >= lo).collect();
        if !ii.is_empty() && !jj.is_empty() {
            let fi = fm.select_columns(&ii);
            let fk = if top { fi.shift_down(lo) } else { fi.window(lo, 2 * lo) };
            let gij = g.select_rows(&ii).select_columns(&jj);
            let e: Vec<usize> = jj.iter().map(|&j| d[j] - lo).collect();
            let part = fk.mul(&gij)?.col_truncate(&e)?;
            for (c, &j) in jj.iter().enumerate() {
                for i in 0..n {
                    let piece = part.get(i, c).shift(lo);
                    r.get_mut(i, j).add_assign(&piece);
                }
            }
        }
        hook(k, if top { None } else { Some(2 * lo) }, &r);
    }
    Ok(r)
}
