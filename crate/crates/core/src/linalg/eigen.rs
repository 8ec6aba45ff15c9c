//! Cyclic Jacobi eigensolver for small Hermitian matrices.

use num_complex::Complex;
use num_traits::Zero;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues sorted descending with matching unit eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// `V diag(values) V^H`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            for i in 0..n {
                let vi = self.vectors[(i, k)] * lambda;
                for j in 0..n {
                    out[(i, j)] += vi * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }
}

fn off_diagonal_norm<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Diagonalizes a Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot with a diagonal
/// unitary and then applies a real Givens rotation, so the combined update
/// `A <- V^H A V` zeroes `A[p][q]` exactly. Sweeps stop once the off-diagonal
/// Frobenius norm falls below `T::JACOBI_TOL` times the full Frobenius norm.
pub fn hermitian_eigen<T: Real>(matrix: &ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    if !matrix.is_square() {
        return Err(Error::Shape(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            matrix.rows(),
            matrix.cols()
        )));
    }
    let n = matrix.rows();
    let scale = matrix.frobenius_norm().max(T::min_positive_value());
    let defect = matrix.hermiticity_defect();
    if defect > T::HERMITIAN_TOL * scale.max(T::one()) {
        return Err(Error::Validation(format!(
            "matrix is not Hermitian (defect {defect:e})"
        )));
    }

    let mut a = matrix.clone();
    a.symmetrize();
    let mut v = ComplexMatrix::identity(n);
    let threshold = T::JACOBI_TOL * scale;

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off.to_f64().unwrap_or(f64::NAN),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap_or(std::cmp::Ordering::Equal));

    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, dst)] = v[(i, src)];
        }
    }
    Ok(HermitianEigen {
        values: order.iter().map(|&i| diag[i]).collect(),
        vectors,
    })
}

fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let modulus = apq.norm();
    if modulus.is_zero() {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (T::lit(2.0) * modulus);
    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;
    let phase = (apq / modulus).conj();

    // V restricted to (p, q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
    let vpp = Complex::new(c, T::zero());
    let vpq = Complex::new(s, T::zero());
    let vqp = phase * (-s);
    let vqq = phase * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * vpp + akq * vqp;
        a[(k, q)] = akp * vpq + akq * vqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = vpp.conj() * apk + vqp.conj() * aqk;
        a[(q, k)] = vpq.conj() * apk + vqq.conj() * aqk;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
    a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * vpp + vkq * vqp;
        v[(k, q)] = vkp * vpq + vkq * vqq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn diagonal_input_is_untouched() {
        let m = ComplexMatrix::<f64>::from_diagonal(&[0.3, 0.7]);
        let e = hermitian_eigen(&m).unwrap();
        assert_eq!(e.values, vec![0.7, 0.3]);
        assert!((e.vectors[(1, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn complex_off_diagonal_pivot() {
        // [[2, 1-i], [1+i, 3]] has eigenvalues 1 and 4
        let m = ComplexMatrix::from_rows(&[vec![c(2.0, 0.0), c(1.0, -1.0)], vec![c(1.0, 1.0), c(3.0, 0.0)]])
            .unwrap();
        let e = hermitian_eigen(&m).unwrap();
        assert!((e.values[0] - 4.0).abs() < 1e-13);
        assert!((e.values[1] - 1.0).abs() < 1e-13);
        assert!(e.reconstruct().sub(&m).unwrap().max_abs() < 1e-13);
        assert!(e.vectors.unitarity_defect() < 1e-13);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.5, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]])
            .unwrap();
        assert!(matches!(hermitian_eigen(&m), Err(Error::Validation(_))));
    }

    #[test]
    fn works_in_single_precision() {
        let m = ComplexMatrix::<f32>::from_rows(&[
            vec![Complex::new(0.5, 0.0), Complex::new(0.3, 0.0)],
            vec![Complex::new(0.3, 0.0), Complex::new(0.5, 0.0)],
        ])
        .unwrap();
        let e = hermitian_eigen(&m).unwrap();
        assert!((e.values[0] - 0.8).abs() < 1e-6);
        assert!((e.values[1] - 0.2).abs() < 1e-6);
    }
}
