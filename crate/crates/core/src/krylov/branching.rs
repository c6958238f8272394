//! Doubling (Keller-Gehrig) rounds and the hybrid maximal basis algorithm.
//!
//! Round `i` holds, for every `j`, a block `V_j = K(A, u_j, delta_j)` with
//! `delta_j <= 2^i`. The blocks of full length `2^i` are extended by
//! `A^{2^i} V_j`, and a column rank profile of the interleaved blocks trims
//! every chain back to its longest independent prefix. After the round,
//! `delta` is lexicographically maximal in `{0..2^{i+1}}^m` subject to the
//! concatenated blocks having full rank.

use super::series::{krylov_matrix, max_indices};
use super::{AlgoConfig, KrylovBasisResult, KrylovSpec};
use crate::error::Result;
use crate::matf::DenseMatrix;
use crate::polmat::DegreeTuple;

/// Progress reported by [`max_krylov_basis_traced`].
#[derive(Debug)]
pub enum Trace<'a> {
    /// Few enough vectors: the polynomial-matrix route runs directly.
    Shortcut,
    /// State after `rounds_done` doubling rounds.
    Round {
        rounds_done: usize,
        delta: &'a [usize],
        blocks: &'a [DenseMatrix],
    },
    /// Vectors handed to the polynomial-matrix phase.
    LongChains(&'a [usize]),
}

fn ceil_log2_u64(x: u64) -> usize {
    x.checked_next_power_of_two().map_or(64, |p| p.trailing_zeros() as usize)
}

fn pow2(i: usize) -> Option<usize> {
    1usize.checked_shl(i as u32)
}

fn blocks_sizes(blocks: &[DenseMatrix]) -> Vec<usize> {
    blocks.iter().map(DenseMatrix::cols).collect()
}

/// Runs up to `rounds` doubling rounds with rank-profile trimming.
fn branching_rounds(spec: &KrylovSpec, rounds: usize, trace: &mut dyn FnMut(Trace)) -> Vec<DenseMatrix> {
    let (a, u) = (spec.a(), spec.u());
    let (f, n, m) = (a.field(), spec.n(), spec.m());
    let mut blocks: Vec<DenseMatrix> = (0..m).map(|j| u.select_columns(&[j])).collect();
    let mut b = a.clone();
    for i in 0..rounds {
        let Some(len) = pow2(i) else { break };
        let active: Vec<usize> = (0..m).filter(|&j| blocks[j].cols() == len).collect();
        if active.is_empty() {
            break;
        }
        let stacked = DenseMatrix::hcat_all(f, n, &active.iter().map(|&j| &blocks[j]).collect::<Vec<_>>())
            .expect("blocks have n rows");
        let w = b.mul(&stacked).expect("square power");
        let mut parts: Vec<DenseMatrix> = Vec::with_capacity(2 * m);
        let mut widths = Vec::with_capacity(m);
        let mut next_active = 0;
        for (j, block) in blocks.iter().enumerate() {
            parts.push(block.clone());
            let mut width = block.cols();
            if active.get(next_active) == Some(&j) {
                let cols: Vec<usize> = (next_active * len..(next_active + 1) * len).collect();
                parts.push(w.select_columns(&cols));
                width += len;
                next_active += 1;
            }
            widths.push(width);
        }
        let z = DenseMatrix::hcat_all(f, n, &parts.iter().collect::<Vec<_>>()).expect("blocks have n rows");
        let mut in_profile = vec![false; z.cols()];
        for c in z.col_rank_profile() {
            in_profile[c] = true;
        }
        let mut offset = 0;
        for (j, &width) in widths.iter().enumerate() {
            let delta = (offset..offset + width).take_while(|&c| in_profile[c]).count();
            blocks[j] = z.select_columns(&(offset..offset + delta).collect::<Vec<_>>());
            offset += width;
        }
        if i + 1 < rounds {
            b = b.mul(&b).expect("square");
        }
        let delta = blocks_sizes(&blocks);
        trace(Trace::Round {
            rounds_done: i + 1,
            delta: &delta,
            blocks: &blocks,
        });
    }
    blocks
}

/// Keeps the column rank profile of the concatenated chains; the chains are
/// long enough that the profile selects exactly the maximal prefixes.
fn merge(f: crate::gf::PrimeModulus, n: usize, chains: &[DenseMatrix]) -> KrylovBasisResult {
    let k = DenseMatrix::hcat_all(f, n, &chains.iter().collect::<Vec<_>>()).expect("blocks have n rows");
    let mut owner = Vec::with_capacity(k.cols());
    for (j, c) in chains.iter().enumerate() {
        owner.extend((0..c.cols()).map(|i| (j, i)));
    }
    let profile = k.col_rank_profile();
    let labels: Vec<(usize, usize)> = profile.iter().map(|&c| owner[c]).collect();
    let mut d = vec![0; chains.len()];
    for &(j, i) in &labels {
        debug_assert_eq!(d[j], i, "rank profile picks prefixes");
        d[j] += 1;
    }
    KrylovBasisResult {
        basis: k.select_columns(&profile),
        indices: DegreeTuple::from_naturals(&d),
        column_labels: labels,
    }
}

fn empty_result(spec: &KrylovSpec) -> KrylovBasisResult {
    KrylovBasisResult::from_indices(DenseMatrix::zeros(spec.a().field(), spec.n(), 0), &vec![0; spec.m()])
}

/// Maximal Krylov basis by doubling rounds alone.
///
/// `ceil(log2 n) + 1` rounds allow chains longer than `n`, so every chain
/// stops inside the loop and no polynomial phase is needed.
pub fn keller_gehrig_basis(spec: &KrylovSpec) -> KrylovBasisResult {
    let n = spec.n();
    if n == 0 || spec.m() == 0 {
        return empty_result(spec);
    }
    let rounds = ceil_log2_u64(n as u64) + 1;
    let blocks = branching_rounds(spec, rounds, &mut |_| {});
    let d = blocks_sizes(&blocks);
    let k = DenseMatrix::hcat_all(spec.a().field(), n, &blocks.iter().collect::<Vec<_>>()).expect("n rows");
    KrylovBasisResult::from_indices(k, &d)
}

/// Hybrid maximal Krylov basis.
pub fn max_krylov_basis(spec: &KrylovSpec, config: &AlgoConfig) -> KrylovBasisResult {
    max_krylov_basis_traced(spec, config, |_| {})
}

/// [`max_krylov_basis`] reporting the branch taken and the state after each round.
pub fn max_krylov_basis_traced(
    spec: &KrylovSpec,
    config: &AlgoConfig,
    mut trace: impl FnMut(Trace),
) -> KrylovBasisResult {
    let (n, m) = (spec.n(), spec.m());
    if n == 0 || m == 0 {
        return empty_result(spec);
    }
    let f = spec.a().field();
    let thres = match config.threshold(n) {
        Some(t) if (m as u128) * (t as u128) > n as u128 => t,
        _ => {
            trace(Trace::Shortcut);
            let d = max_indices(spec).naturals_or(0);
            let k = krylov_matrix(spec, &d).expect("orders match U");
            return KrylovBasisResult::from_indices(k, &d);
        }
    };
    let rounds = ceil_log2_u64(thres);
    let mut blocks = branching_rounds(spec, rounds, &mut trace);
    let long: Vec<usize> = match pow2(rounds) {
        Some(full) => (0..m).filter(|&j| blocks[j].cols() == full).collect(),
        None => Vec::new(),
    };
    trace(Trace::LongChains(&long));
    if !long.is_empty() {
        let sub = spec.restrict(&long);
        let d = max_indices(&sub).naturals_or(0);
        let k = krylov_matrix(&sub, &d).expect("orders match U");
        let mut offset = 0;
        for (&j, &dj) in long.iter().zip(&d) {
            blocks[j] = k.select_columns(&(offset..offset + dj).collect::<Vec<_>>());
            offset += dj;
        }
    }
    merge(f, n, &blocks)
}

/// Doubling rounds toward prescribed orders: chains grow to `min(2 delta_j, d_j)`.
fn doubling_to_orders(spec: &KrylovSpec, d: &[usize], rounds: usize) -> Vec<DenseMatrix> {
    let (a, u) = (spec.a(), spec.u());
    let (f, n, m) = (a.field(), spec.n(), spec.m());
    let mut blocks: Vec<DenseMatrix> = (0..m)
        .map(|j| if d[j] > 0 { u.select_columns(&[j]) } else { DenseMatrix::zeros(f, n, 0) })
        .collect();
    let mut b = a.clone();
    for i in 0..rounds {
        let Some(len) = pow2(i) else { break };
        let active: Vec<usize> = (0..m).filter(|&j| blocks[j].cols() == len && d[j] > len).collect();
        if active.is_empty() {
            break;
        }
        let stacked = DenseMatrix::hcat_all(f, n, &active.iter().map(|&j| &blocks[j]).collect::<Vec<_>>())
            .expect("blocks have n rows");
        let w = b.mul(&stacked).expect("square power");
        for (c, &j) in active.iter().enumerate() {
            let keep = (d[j] - len).min(len);
            let cols: Vec<usize> = (c * len..c * len + keep).collect();
            blocks[j] = blocks[j].hcat(&w.select_columns(&cols)).expect("n rows");
        }
        if i + 1 < rounds {
            b = b.mul(&b).expect("square");
        }
    }
    blocks
}

/// `K(A, U, d)` by doubling rounds for short orders and the truncated series
/// route for the orders that remain unfinished after `ceil(log2 thres)` rounds.
pub fn krylov_matrix_hybrid(spec: &KrylovSpec, d: &[usize], config: &AlgoConfig) -> Result<DenseMatrix> {
    spec.check_orders(d)?;
    let (n, m) = (spec.n(), spec.m());
    let f = spec.a().field();
    if n == 0 || d.iter().all(|&dj| dj == 0) {
        return Ok(DenseMatrix::zeros(f, n, d.iter().sum()));
    }
    let thres = match config.threshold(n) {
        Some(t) if (m as u128) * (t as u128) > n as u128 => t,
        _ => return krylov_matrix(spec, d),
    };
    let rounds = ceil_log2_u64(thres);
    let mut blocks = doubling_to_orders(spec, d, rounds);
    let long: Vec<usize> = (0..m).filter(|&j| blocks[j].cols() < d[j]).collect();
    if !long.is_empty() {
        let sub = spec.restrict(&long);
        let dl: Vec<usize> = long.iter().map(|&j| d[j]).collect();
        let k = krylov_matrix(&sub, &dl)?;
        let mut offset = 0;
        for (&j, &dj) in long.iter().zip(&dl) {
            blocks[j] = k.select_columns(&(offset..offset + dj).collect::<Vec<_>>());
            offset += dj;
        }
    }
    DenseMatrix::hcat_all(f, n, &blocks.iter().collect::<Vec<_>>())
}

/// `K(A, U, d)` by doubling rounds only.
pub fn keller_gehrig_krylov_matrix(spec: &KrylovSpec, d: &[usize]) -> Result<DenseMatrix> {
    spec.check_orders(d)?;
    let f = spec.a().field();
    let dmax = d.iter().copied().max().unwrap_or(0);
    let rounds = ceil_log2_u64(dmax as u64) + 1;
    let blocks = doubling_to_orders(spec, d, rounds);
    DenseMatrix::hcat_all(f, spec.n(), &blocks.iter().collect::<Vec<_>>())
}
