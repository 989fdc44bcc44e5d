//! Spectrum, determinant, and rank of principal update matrices.
//!
//! The length update of a principal move is a circulant with symbol
//! 1 + 2cos(pi - K/n) x + x^2. Its rank drops exactly at K = -2pi.

use flatpunct::circulant::{determinant, eigenvalues, principal_matrix, rank_by_gcd, singular_case};
use flatpunct::Angle;
use num_rational::Rational64;

fn main() {
    for (num, den, n) in [(-3i64, 2i64, 3usize), (-2, 1, 3), (-5, 2, 4), (-4, 1, 5)] {
        let k = Angle::from_pi_exact(Rational64::new(num, den));
        let m = principal_matrix(k, n).expect("n >= 3");
        let spec = eigenvalues(&m);
        println!("K = {k}, n = {n}");
        println!("  coefficients {:?}", m.coefficients());
        for (j, lambda) in spec.eigenvalues.iter().enumerate() {
            println!("  lambda_{j} = {:+.6} {:+.6}i", lambda.re, lambda.im);
        }
        println!(
            "  det = {:.6e}, rank = {}, singular = {}",
            determinant(&m),
            rank_by_gcd(&m).expect("exact coefficients"),
            singular_case(k, n),
        );
    }
}
