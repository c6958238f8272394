//! Krylov matrix for prescribed, unbalanced orders.

use krylovium::gf::PrimeModulus;
use krylovium::krylov::{krylov_matrix, naive_krylov_matrix};
use krylovium::testgen::{InstanceRng, MatrixShape, VectorShape};

fn main() {
    let f = PrimeModulus::new(97).unwrap();
    let spec = InstanceRng::new(2).spec(f, 12, 3, MatrixShape::Dense, VectorShape::Dense);
    let d = [9, 0, 3];
    let k = krylov_matrix(&spec, &d).unwrap();
    assert_eq!(k, naive_krylov_matrix(&spec, &d).unwrap());
    println!("K(A, U, {d:?}) is {}x{} of rank {}", k.rows(), k.cols(), k.rank());
}
