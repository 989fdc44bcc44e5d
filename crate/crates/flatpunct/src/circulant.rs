//! Circulant matrices given by their first column, with closed-form spectra.
//!
//! The action of the principal modifications on canonical length data is the
//! circulant with first column (1, 2cos(pi - K/n), 1, 0, ..., 0). Everything
//! the equivalence procedure needs — eigenvalues, determinant, and rank —
//! comes from the associated polynomial f(x) = c_0 + c_1 x + ... evaluated at
//! the m-th roots of unity, so the full matrix is never materialized here;
//! only the test oracles build it densely.

use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::angle::{rational_from_f64, Angle};

#[derive(Debug, Error, PartialEq)]
pub enum CirculantError {
    #[error("operation needs exact rational coefficients")]
    RequiresExact,
    #[error("principal matrix needs at least 3 vertices, got {0}")]
    Arity(usize),
}

/// A circulant matrix, stored as its first column.
#[derive(Clone, Debug, PartialEq)]
pub struct CirculantMatrix {
    c: Vec<f64>,
    exact: Option<Vec<Rational64>>,
}

/// Eigenvalues and eigenvectors, in root-of-unity order j = 0..m-1.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    pub eigenvectors: Vec<Vec<Complex64>>,
}

impl CirculantMatrix {
    pub fn new(c: Vec<f64>) -> CirculantMatrix {
        assert!(!c.is_empty(), "a circulant needs at least one coefficient");
        CirculantMatrix { c, exact: None }
    }

    pub fn new_exact(c: Vec<Rational64>) -> CirculantMatrix {
        assert!(!c.is_empty(), "a circulant needs at least one coefficient");
        let floats = c
            .iter()
            .map(|r| *r.numer() as f64 / *r.denom() as f64)
            .collect();
        CirculantMatrix {
            c: floats,
            exact: Some(c),
        }
    }

    pub fn m(&self) -> usize {
        self.c.len()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.c
    }

    pub fn exact_coefficients(&self) -> Option<&[Rational64]> {
        self.exact.as_deref()
    }

    /// f(x) = c_0 + c_1 x + ... + c_{m-1} x^{m-1}.
    pub fn associated_polynomial_at(&self, x: Complex64) -> Complex64 {
        self.c
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &ck| acc * x + ck)
    }
}

fn root_of_unity(j: usize, m: usize) -> Complex64 {
    let t = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
    Complex64::new(t.cos(), t.sin())
}

/// Closed-form spectrum: the eigenvalue paired with v_j = (1, w_j, w_j^2, ...)
/// is c_0 + c_{m-1} w_j + c_{m-2} w_j^2 + ... + c_1 w_j^{m-1}.
pub fn eigenvalues(c: &CirculantMatrix) -> Spectrum {
    let m = c.m();
    let mut eigenvalues = Vec::with_capacity(m);
    let mut eigenvectors = Vec::with_capacity(m);
    for j in 0..m {
        let w = root_of_unity(j, m);
        let mut lambda = Complex64::new(0.0, 0.0);
        let mut wp = Complex64::new(1.0, 0.0);
        for t in 0..m {
            lambda += c.c[(m - t) % m] * wp;
            wp *= w;
        }
        eigenvalues.push(lambda);
        let v = (0..m).map(|t| root_of_unity((j * t) % m, m)).collect();
        eigenvectors.push(v);
    }
    Spectrum {
        eigenvalues,
        eigenvectors,
    }
}

/// det C = prod over the m-th roots of unity w of f(w). The product is real
/// up to roundoff; the imaginary residue is checked and discarded.
pub fn determinant(c: &CirculantMatrix) -> f64 {
    let m = c.m();
    let mut prod = Complex64::new(1.0, 0.0);
    for j in 0..m {
        prod *= c.associated_polynomial_at(root_of_unity(j, m));
    }
    let scale = 1.0 + prod.norm();
    debug_assert!(
        prod.im.abs() <= 1e-9 * scale,
        "circulant determinant has imaginary residue {}",
        prod.im
    );
    prod.re
}

/// rank C = m - deg gcd(f, x^m - 1), computed by exact polynomial Euclid
/// over the rationals.
pub fn rank_by_gcd(c: &CirculantMatrix) -> Result<usize, CirculantError> {
    let coeffs = c.exact.as_ref().ok_or(CirculantError::RequiresExact)?;
    let m = c.m();
    let f: Vec<BigRational> = coeffs.iter().map(to_big).collect();
    let mut xm1 = vec![BigRational::zero(); m + 1];
    xm1[0] = -BigRational::one();
    xm1[m] = BigRational::one();
    let d = poly_degree(&poly_gcd(f, xm1));
    Ok(m - d)
}

fn to_big(r: &Rational64) -> BigRational {
    BigRational::new((*r.numer()).into(), (*r.denom()).into())
}

fn poly_trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    p
}

fn poly_degree(p: &[BigRational]) -> usize {
    p.len().saturating_sub(1)
}

/// Remainder of a by b (b nonzero), coefficients lowest-degree first.
fn poly_rem(a: Vec<BigRational>, b: &[BigRational]) -> Vec<BigRational> {
    let mut r = poly_trim(a);
    let db = poly_degree(b);
    let lead = b[db].clone();
    while !r.is_empty() && poly_degree(&r) >= db && !(r.len() == 1 && r[0].is_zero()) {
        let dr = poly_degree(&r);
        let q = r[dr].clone() / lead.clone();
        for t in 0..=db {
            let idx = dr - db + t;
            let delta = q.clone() * b[t].clone();
            r[idx] = r[idx].clone() - delta;
        }
        r = poly_trim(r);
        if dr == 0 {
            break;
        }
    }
    r
}

fn poly_gcd(a: Vec<BigRational>, b: Vec<BigRational>) -> Vec<BigRational> {
    let mut a = poly_trim(a);
    let mut b = poly_trim(b);
    while !b.is_empty() {
        let r = poly_rem(a, &b);
        a = b;
        b = r;
    }
    if a.is_empty() {
        return vec![BigRational::zero()];
    }
    // Monic normalization.
    let lead = a[poly_degree(&a)].clone();
    a.into_iter().map(|c| c / lead.clone()).collect()
}

/// 2 cos(pi - K/n) as a float; exact when the angle works out rational.
fn middle_coefficient(total_curvature: Angle, n: usize) -> (f64, Option<Rational64>) {
    let c1 = crate::moves::principal_middle_coefficient(total_curvature, n);
    let exact = if total_curvature.is_exact() {
        rational_from_f64(c1).filter(|r| {
            let back = *r.numer() as f64 / *r.denom() as f64;
            (back - c1).abs() <= 1e-12 && r.denom().abs() <= 8
        })
    } else {
        None
    };
    (c1, exact)
}

/// The circulant acting on canonical length data under principal moves:
/// first column (1, 2cos(pi - K/n), 1, 0, ..., 0).
pub fn principal_matrix(
    total_curvature: Angle,
    n: usize,
) -> Result<CirculantMatrix, CirculantError> {
    if n < 3 {
        return Err(CirculantError::Arity(n));
    }
    let (c1, c1_exact) = middle_coefficient(total_curvature, n);
    match c1_exact {
        Some(r) => {
            let mut c = vec![Rational64::zero(); n];
            c[0] = Rational64::one();
            c[1] = r;
            c[2] = Rational64::one();
            Ok(CirculantMatrix::new_exact(c))
        }
        None => {
            let mut c = vec![0.0; n];
            c[0] = 1.0;
            c[1] = c1;
            c[2] = 1.0;
            Ok(CirculantMatrix::new(c))
        }
    }
}

/// True iff the principal matrix is singular: some factor
/// 1 + 2cos(pi - K/n) w_j + w_j^2 vanishes. This happens exactly at
/// K = -2 pi (n = 3, j = 1, 2), where the factor is 1 + w + w^2 = 0.
pub fn singular_case(total_curvature: Angle, n: usize) -> bool {
    if n < 3 {
        return false;
    }
    let (c1, _) = middle_coefficient(total_curvature, n);
    (0..n).any(|j| {
        let w = root_of_unity(j, n);
        (Complex64::new(1.0, 0.0) + c1 * w + w * w).norm() < 1e-9
    })
}
