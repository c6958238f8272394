//! Exact Krylov-space computations over prime fields `GF(p)`, `p < 2^62`.
//!
//! Given a square `A` and a block of vectors `U`, the crate computes the
//! maximal Krylov indices and basis of the orbit of `U` under `A`, Krylov
//! matrices for prescribed orders, minimal polynomials, invariant factors,
//! matrix powers and the controllability split of `(A, U)`.
//!
//! Two families of methods are provided and cross-checked against each other:
//! doubling rounds in the style of Keller-Gehrig ([`krylov::keller_gehrig_basis`])
//! and a polynomial-matrix route ([`krylov::max_indices`], [`krylov::krylov_matrix`])
//! built on minimal kernel bases of `[xI - A  -U]`, Hermite diagonals,
//! high-order lifting and column-truncated series. [`krylov::max_krylov_basis`]
//! combines them.
//!
//! ```
//! use krylovium::gf::PrimeModulus;
//! use krylovium::krylov::{krylov_basis, AlgoConfig, KrylovSpec};
//! use krylovium::matf::DenseMatrix;
//!
//! let f = PrimeModulus::new(97).unwrap();
//! let a = DenseMatrix::from_rows(f, &[vec![0, 1], vec![0, 0]]).unwrap();
//! let u = DenseMatrix::from_rows(f, &[vec![0, 1], vec![1, 0]]).unwrap();
//! let r = krylov_basis(&KrylovSpec::new(a, u).unwrap(), &AlgoConfig::default());
//! assert_eq!(r.indices.naturals_or(0), vec![2, 0]);
//! ```

pub mod cli;
pub mod error;
pub mod gf;
pub mod krylov;
pub mod lifting;
pub mod matf;
pub mod opcount;
pub mod orderbasis;
pub mod poly;
pub mod polmat;
pub mod spectral;
pub mod testgen;
