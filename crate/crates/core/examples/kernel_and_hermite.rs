//! Kernel basis of [xI - A  -U] and the Hermite diagonal of its bottom block,
//! whose degrees are the maximal Krylov indices.

use krylovium::gf::PrimeModulus;
use krylovium::orderbasis::{hermite_diagonal, minimal_kernel_basis};
use krylovium::poly::Poly;
use krylovium::polmat::PolyMatrix;
use krylovium::testgen::{InstanceRng, MatrixShape, VectorShape};

fn main() {
    let f = PrimeModulus::new(101).unwrap();
    let (n, m) = (8, 3);
    let spec = InstanceRng::new(3).spec(f, n, m, MatrixShape::Nilpotent, VectorShape::Dense);
    let fm = PolyMatrix::from_fn(f, n, n + m, |i, j| {
        if j < n {
            Poly::from_coeffs(f, vec![f.neg(spec.a().get(i, j)), u64::from(i == j)])
        } else {
            Poly::constant(f, f.neg(spec.u().get(i, j - n)))
        }
    });
    let k = minimal_kernel_basis(&fm).unwrap();
    println!("kernel column degrees {}", k.cdeg());
    for (i, h) in hermite_diagonal(&k.row_range(n, n + m)).unwrap().iter().enumerate() {
        println!("h_{i} = {h}");
    }
}
