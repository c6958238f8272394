//! Reproducible random instances.
//!
//! The stream is ChaCha8 (`rand_chacha`) seeded with `seed_from_u64(seed)`.
//! A field element below `p` is drawn by taking `next_u64`, keeping its low
//! `bits(p - 1)` bits and rejecting values `>= p`. Matrices are filled row
//! by row. Any implementation of these three rules reproduces the instances.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gf::PrimeModulus;
use crate::krylov::KrylovSpec;
use crate::matf::DenseMatrix;

pub struct InstanceRng(ChaCha8Rng);

impl InstanceRng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..bound` by masking and rejection.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        if bound == 1 {
            return 0;
        }
        let mask = u64::MAX >> (bound - 1).leading_zeros();
        loop {
            let v = self.next_u64() & mask;
            if v < bound {
                return v;
            }
        }
    }

    pub fn element(&mut self, f: PrimeModulus) -> u64 {
        self.below(f.value())
    }

    pub fn matrix(&mut self, f: PrimeModulus, rows: usize, cols: usize) -> DenseMatrix {
        DenseMatrix::from_fn(f, rows, cols, |_, _| self.element(f))
    }

    /// Product of random unit lower and unit upper triangular matrices.
    pub fn invertible(&mut self, f: PrimeModulus, n: usize) -> DenseMatrix {
        let l = DenseMatrix::from_fn(f, n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Greater => self.element(f),
            std::cmp::Ordering::Equal => 1,
            std::cmp::Ordering::Less => 0,
        });
        let u = DenseMatrix::from_fn(f, n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Less => self.element(f),
            std::cmp::Ordering::Equal => 1,
            std::cmp::Ordering::Greater => 0,
        });
        l.mul(&u).expect("square")
    }

    /// `rows x cols` matrix of rank at most `rank`.
    pub fn low_rank(&mut self, f: PrimeModulus, rows: usize, cols: usize, rank: usize) -> DenseMatrix {
        let x = self.matrix(f, rows, rank);
        let y = self.matrix(f, rank, cols);
        x.mul(&y).expect("inner dimensions agree")
    }
}

/// Structure of the matrix `A` in a generated instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixShape {
    Dense,
    /// Rank about `n / 2`.
    Singular,
    /// Conjugate of a strictly upper triangular matrix.
    Nilpotent,
    /// Conjugate of a block diagonal of companion matrices with repeated
    /// blocks, so that there are several nontrivial invariant factors.
    RepeatedBlocks,
    /// `c I` plus a rank one term.
    NearScalar,
}

/// Structure of the vectors `U` in a generated instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VectorShape {
    Dense,
    LowRank,
    /// Some columns are zero.
    ZeroColumns,
    /// Some columns repeat earlier ones.
    Duplicates,
}

impl MatrixShape {
    pub const ALL: [MatrixShape; 5] = [
        MatrixShape::Dense,
        MatrixShape::Singular,
        MatrixShape::Nilpotent,
        MatrixShape::RepeatedBlocks,
        MatrixShape::NearScalar,
    ];
}

impl VectorShape {
    pub const ALL: [VectorShape; 4] = [
        VectorShape::Dense,
        VectorShape::LowRank,
        VectorShape::ZeroColumns,
        VectorShape::Duplicates,
    ];
}

fn companion(f: PrimeModulus, coeffs: &[u64]) -> DenseMatrix {
    // monic x^k + c_{k-1} x^{k-1} + .. + c_0; ones on the subdiagonal
    let k = coeffs.len();
    DenseMatrix::from_fn(f, k, k, |i, j| {
        if j == k - 1 {
            f.neg(coeffs[i])
        } else {
            u64::from(i == j + 1)
        }
    })
}

fn conjugate(rng: &mut InstanceRng, f: PrimeModulus, a: &DenseMatrix) -> DenseMatrix {
    let n = a.rows();
    let p = rng.invertible(f, n);
    let pinv = p.inverse().expect("unit triangular factors");
    p.mul(a).and_then(|pa| pa.mul(&pinv)).expect("square")
}

impl InstanceRng {
    pub fn square(&mut self, f: PrimeModulus, n: usize, shape: MatrixShape) -> DenseMatrix {
        match shape {
            MatrixShape::Dense => self.matrix(f, n, n),
            MatrixShape::Singular => self.low_rank(f, n, n, n / 2),
            MatrixShape::Nilpotent => {
                let s = DenseMatrix::from_fn(f, n, n, |i, j| if i < j { self.element(f) } else { 0 });
                conjugate(self, f, &s)
            }
            MatrixShape::RepeatedBlocks => {
                let mut b = DenseMatrix::zeros(f, n, n);
                let mut at = 0;
                let mut block: Vec<u64> = Vec::new();
                while at < n {
                    // reuse the previous block half of the time
                    if block.is_empty() || block.len() > n - at || self.below(2) == 0 {
                        let k = 1 + self.below((n - at).min(3) as u64) as usize;
                        block = (0..k).map(|_| self.element(f)).collect();
                    }
                    let c = companion(f, &block);
                    for i in 0..block.len() {
                        for j in 0..block.len() {
                            b.set(at + i, at + j, c.get(i, j));
                        }
                    }
                    at += block.len();
                }
                conjugate(self, f, &b)
            }
            MatrixShape::NearScalar => {
                let c = self.element(f);
                let r = self.low_rank(f, n, n, 1.min(n));
                DenseMatrix::identity(f, n).scale(c).add(&r).expect("same shape")
            }
        }
    }

    pub fn vectors(&mut self, f: PrimeModulus, n: usize, m: usize, shape: VectorShape) -> DenseMatrix {
        match shape {
            VectorShape::Dense => self.matrix(f, n, m),
            VectorShape::LowRank => {
                let r = (m / 2).max(1).min(n);
                self.low_rank(f, n, m, r)
            }
            VectorShape::ZeroColumns => {
                let mut u = self.matrix(f, n, m);
                for j in 0..m {
                    if self.below(3) == 0 {
                        for i in 0..n {
                            u.set(i, j, 0);
                        }
                    }
                }
                u
            }
            VectorShape::Duplicates => {
                let mut u = self.matrix(f, n, m);
                for j in 1..m {
                    if self.below(2) == 0 {
                        let src = self.below(j as u64) as usize;
                        for i in 0..n {
                            u.set(i, j, u.get(i, src));
                        }
                    }
                }
                u
            }
        }
    }

    pub fn spec(&mut self, f: PrimeModulus, n: usize, m: usize, a: MatrixShape, u: VectorShape) -> KrylovSpec {
        let a = self.square(f, n, a);
        let u = self.vectors(f, n, m, u);
        KrylovSpec::new(a, u).expect("dimensions agree")
    }

    /// Instance number `index` of a test family: shapes cycle with the index,
    /// sizes are random with `1 <= n <= max_n` and `0 <= m <= n + 2`.
    pub fn family_member(&mut self, f: PrimeModulus, max_n: usize, index: usize) -> KrylovSpec {
        let n = 1 + self.below(max_n as u64) as usize;
        let m = self.below(n as u64 + 3) as usize;
        let a = MatrixShape::ALL[index % MatrixShape::ALL.len()];
        let u = VectorShape::ALL[(index / MatrixShape::ALL.len()) % VectorShape::ALL.len()];
        self.spec(f, n, m, a, u)
    }
}
