//! A^k for a huge exponent through x^k mod the minimal polynomial.

use krylovium::gf::PrimeModulus;
use krylovium::spectral::matrix_power;
use krylovium::testgen::InstanceRng;
use num_bigint::BigUint;

fn main() {
    let f = PrimeModulus::new(1_000_003).unwrap();
    let a = InstanceRng::new(6).matrix(f, 6, 6);
    let k: BigUint = "340282366920938463463374607431768211457".parse().unwrap();
    let big = matrix_power(&a, &k);
    let check = matrix_power(&a, &(&k - 1u32)).mul(&a).unwrap();
    assert_eq!(big, check);
    println!("A^k[0] = {:?}", big.row(0));
}
