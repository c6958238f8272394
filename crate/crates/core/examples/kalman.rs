//! Controllability split of a pair whose orbit is a proper subspace.

use krylovium::gf::PrimeModulus;
use krylovium::krylov::KrylovSpec;
use krylovium::spectral::kalman_decomposition;
use krylovium::testgen::{InstanceRng, MatrixShape, VectorShape};

fn main() {
    let f = PrimeModulus::new(97).unwrap();
    let mut rng = InstanceRng::new(7);
    let a = rng.square(f, 8, MatrixShape::Singular);
    let u = rng.vectors(f, 8, 2, VectorShape::LowRank);
    let spec = KrylovSpec::new(a, u).unwrap();
    let kd = kalman_decomposition(&spec);
    let (at, ut) = kd.transformed(&spec);
    println!("orbit dimension {}", kd.nu);
    for i in 0..8 {
        println!("{:?} | {:?}", at.row(i), ut.row(i));
    }
}
