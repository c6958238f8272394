//! Maximal Krylov basis of a random pair, by every strategy.

use krylovium::gf::PrimeModulus;
use krylovium::krylov::{krylov_basis, AlgoConfig, Strategy};
use krylovium::testgen::{InstanceRng, MatrixShape, VectorShape};

fn main() {
    let f = PrimeModulus::new(4611686018427387847).unwrap();
    let spec = InstanceRng::new(1).spec(f, 40, 5, MatrixShape::RepeatedBlocks, VectorShape::Dense);
    for s in Strategy::ALL {
        let r = krylov_basis(&spec, &AlgoConfig::with_strategy(s));
        println!("{s:>7}: indices {} (dimension {})", r.indices, r.dim());
    }
}
