//! Krylov matrices, maximal indices and maximal Krylov bases.
//!
//! For `A` (`n x n`) and `U = [u_0 .. u_{m-1}]` (`n x m`), the Krylov matrix
//! for orders `d` is `[u_0 .. A^{d_0-1} u_0 | .. | u_{m-1} .. A^{d_{m-1}-1} u_{m-1}]`.
//! The maximal indices are the lexicographically largest `d` for which this
//! matrix is a basis of the orbit `Orb(A, U)`, and the corresponding matrix is
//! the maximal Krylov basis.
//!
//! Four routes compute them and must agree exactly:
//!
//! * [`naive`]: direct iteration with incremental elimination (the oracle);
//! * [`series`]: minimal kernel bases of `[xI - A  -U]` and `[I - xA  -U]`,
//!   Hermite diagonals and truncated series;
//! * [`branching`]: Keller-Gehrig doubling rounds, alone or followed by
//!   the polynomial-matrix route for the few chains that are still growing.

pub mod branching;
pub mod naive;
pub mod series;

pub use branching::{keller_gehrig_basis, keller_gehrig_krylov_matrix, krylov_matrix_hybrid, max_krylov_basis, max_krylov_basis_traced, Trace};
pub use naive::{naive_krylov_basis, naive_krylov_matrix, naive_max_indices};
pub use series::{krylov_matrix, max_indices, reverse_kernel_transform};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matf::DenseMatrix;
use crate::polmat::DegreeTuple;

/// A pair `(A, U)` with `A` square and `U` sharing its row count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KrylovSpec {
    a: DenseMatrix,
    u: DenseMatrix,
}

impl KrylovSpec {
    pub fn new(a: DenseMatrix, u: DenseMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch(format!("A is {}x{}", a.rows(), a.cols())));
        }
        if u.rows() != a.rows() {
            return Err(Error::DimensionMismatch(format!(
                "U has {} rows, A has {}",
                u.rows(),
                a.rows()
            )));
        }
        if a.field() != u.field() {
            return Err(Error::ModulusMismatch(a.field().value(), u.field().value()));
        }
        Ok(Self { a, u })
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn u(&self) -> &DenseMatrix {
        &self.u
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn m(&self) -> usize {
        self.u.cols()
    }

    /// The same `A` with the columns `idx` of `U`.
    pub fn restrict(&self, idx: &[usize]) -> Self {
        Self {
            a: self.a.clone(),
            u: self.u.select_columns(idx),
        }
    }

    pub(crate) fn check_orders(&self, d: &[usize]) -> Result<()> {
        if d.len() != self.m() {
            return Err(Error::DimensionMismatch(format!(
                "{} orders for {} vectors",
                d.len(),
                self.m()
            )));
        }
        Ok(())
    }
}

/// Maximal Krylov basis with its indices and the provenance of each column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KrylovBasisResult {
    pub basis: DenseMatrix,
    pub indices: DegreeTuple,
    /// `(j, k)` for the column `A^k u_j`.
    pub column_labels: Vec<(usize, usize)>,
}

impl KrylovBasisResult {
    /// Wraps `K(A, U, d)` computed for the maximal indices `d`.
    pub fn from_indices(basis: DenseMatrix, d: &[usize]) -> Self {
        let column_labels = d.iter().enumerate().flat_map(|(j, &dj)| (0..dj).map(move |k| (j, k))).collect();
        Self {
            basis,
            indices: DegreeTuple::from_naturals(d),
            column_labels,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Doubling rounds, then the polynomial-matrix route on the long chains.
    Hybrid,
    /// Doubling rounds only.
    KellerGehrig,
    /// Hermite diagonal for the indices, truncated series for the matrix.
    PolmatOnly,
    /// Vector-by-vector iteration.
    Naive,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::Hybrid, Strategy::KellerGehrig, Strategy::PolmatOnly, Strategy::Naive];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Hybrid => "hybrid",
            Strategy::KellerGehrig => "kg",
            Strategy::PolmatOnly => "polmat",
            Strategy::Naive => "naive",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hybrid" => Ok(Strategy::Hybrid),
            "kg" | "keller-gehrig" | "keller_gehrig" => Ok(Strategy::KellerGehrig),
            "polmat" | "polmat_only" | "polmat-only" => Ok(Strategy::PolmatOnly),
            "naive" => Ok(Strategy::Naive),
            other => Err(Error::Precondition(format!("unknown algorithm '{other}'"))),
        }
    }
}

/// Parameters of the hybrid algorithm.
///
/// The round threshold is `thres = ceil(log2(n)^c)` with
/// `c = max(4 / (omega - 2), c1 / (omega - 1))`, unless `exponent` fixes `c`.
/// When `m <= n / thres` the doubling rounds are skipped; otherwise
/// `ceil(log2(thres))` rounds run before the polynomial-matrix phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgoConfig {
    pub omega: f64,
    pub c1: f64,
    pub strategy: Strategy,
    pub exponent: Option<f64>,
}

impl Default for AlgoConfig {
    fn default() -> Self {
        Self {
            omega: 3.0,
            c1: 2.0,
            strategy: Strategy::Hybrid,
            exponent: None,
        }
    }
}

impl AlgoConfig {
    pub fn with_strategy(strategy: Strategy) -> Self {
        Self {
            strategy,
            ..Self::default()
        }
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
            .unwrap_or_else(|| (4.0 / (self.omega - 2.0)).max(self.c1 / (self.omega - 1.0)))
    }

    /// `ceil(log2(n)^c)`, or `None` for `n < 2` where no rounds are useful.
    pub fn threshold(&self, n: usize) -> Option<u64> {
        if n < 2 {
            return None;
        }
        let t = (n as f64).log2().powf(self.exponent()).ceil();
        Some(if t >= 1.0e18 { u64::MAX } else { (t as u64).max(1) })
    }
}

/// Maximal Krylov basis by the strategy in `config`.
pub fn krylov_basis(spec: &KrylovSpec, config: &AlgoConfig) -> KrylovBasisResult {
    match config.strategy {
        Strategy::Hybrid => max_krylov_basis(spec, config),
        Strategy::KellerGehrig => keller_gehrig_basis(spec),
        Strategy::PolmatOnly => {
            let d = max_indices(spec).naturals_or(0);
            let k = krylov_matrix(spec, &d).expect("orders match U");
            KrylovBasisResult::from_indices(k, &d)
        }
        Strategy::Naive => naive_krylov_basis(spec),
    }
}

/// Maximal indices by the strategy in `config`.
pub fn indices_with(spec: &KrylovSpec, config: &AlgoConfig) -> DegreeTuple {
    match config.strategy {
        Strategy::PolmatOnly => max_indices(spec),
        Strategy::Naive => naive_max_indices(spec),
        _ => krylov_basis(spec, config).indices,
    }
}

/// Krylov matrix for given orders by the strategy in `config`.
pub fn krylov_matrix_with(spec: &KrylovSpec, d: &[usize], config: &AlgoConfig) -> Result<DenseMatrix> {
    match config.strategy {
        Strategy::Naive => naive_krylov_matrix(spec, d),
        Strategy::PolmatOnly => krylov_matrix(spec, d),
        Strategy::Hybrid => krylov_matrix_hybrid(spec, d, config),
        Strategy::KellerGehrig => keller_gehrig_krylov_matrix(spec, d),
    }
}
