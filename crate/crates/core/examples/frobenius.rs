//! Minimal polynomial, invariant factors and block companion form.

use krylovium::gf::PrimeModulus;
use krylovium::spectral::{invariant_factors, matrix_minpoly, vector_minpoly};
use krylovium::testgen::{InstanceRng, MatrixShape};

fn main() {
    let f = PrimeModulus::new(97).unwrap();
    let a = InstanceRng::new(5).square(f, 9, MatrixShape::RepeatedBlocks);
    let fr = invariant_factors(&a);
    for (i, p) in fr.invariant_factors.iter().enumerate() {
        println!("f_{} = {p}", i + 1);
    }
    println!("minimal polynomial {}", matrix_minpoly(&a));
    let mut e1 = vec![0; 9];
    e1[0] = 1;
    println!("minimal polynomial of e_1 {}", vector_minpoly(&a, &e1));
}
