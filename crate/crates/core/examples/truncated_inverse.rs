//! Column-truncated inverse of a polynomial matrix against Newton iteration.

use krylovium::gf::PrimeModulus;
use krylovium::lifting::{newton_series_inverse, truncated_inverse};
use krylovium::polmat::PolyMatrix;
use krylovium::testgen::InstanceRng;

fn main() {
    let f = PrimeModulus::new(65537).unwrap();
    let mut rng = InstanceRng::new(4);
    let m = 4;
    let mut coeffs = vec![rng.invertible(f, m)];
    coeffs.extend((0..3).map(|_| rng.matrix(f, m, m)));
    let p = PolyMatrix::from_coefficients(f, m, m, &coeffs).unwrap();
    let d = [40, 0, 3, 17];
    let q = truncated_inverse(&p, &d).unwrap();
    let want = newton_series_inverse(&p, 40).unwrap().col_truncate(&d).unwrap();
    assert_eq!(q, want);
    let check = p.mul(&q).unwrap().col_truncate(&d).unwrap();
    assert_eq!(check, PolyMatrix::identity(f, m).col_truncate(&d).unwrap());
    println!("P^-1 truncated at {d:?}: column degrees {}", q.cdeg());
}
