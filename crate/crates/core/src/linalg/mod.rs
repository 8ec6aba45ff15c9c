//! Small dense complex linear algebra: bipartite pure states, reduced
//! density matrices, Hermitian eigendecomposition and entropy.
//!
//! A state on `H_S (x) H_A` with dimensions `(m, n)` stores the coefficient
//! `c_ij` of `|u_i> (x) |v_j>` at flat index `i * n + j`.

mod eigen;
mod matrix;
mod state;

pub use eigen::{hermitian_eigen, HermitianEigen, MAX_SWEEPS};
pub use matrix::{pauli, ComplexMatrix};
pub use state::{bloch_from_density, density_from_bloch, BlochVector, CompositeShape, DensityMatrix, PureState, Spectrum};

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Reduced state of the first factor: `(rho_S)_{ii'} = sum_j c_ij conj(c_i'j)`.
pub fn partial_trace_a<T: Real>(psi: &PureState<T>, shape: CompositeShape) -> Result<DensityMatrix<T>> {
    shape.check(psi.dim())?;
    let (m, n) = (shape.m(), shape.n());
    let c = psi.amplitudes();
    let mut rho = ComplexMatrix::zeros(m, m);
    for i in 0..m {
        for k in i..m {
            let mut acc = Complex::zero();
            for j in 0..n {
                acc += c[i * n + j] * c[k * n + j].conj();
            }
            rho[(i, k)] = acc;
            rho[(k, i)] = acc.conj();
        }
    }
    Ok(DensityMatrix::trusted(rho))
}

/// Reduced state of the second factor: `(rho_A)_{jj'} = sum_i c_ij conj(c_ij')`.
pub fn partial_trace_s<T: Real>(psi: &PureState<T>, shape: CompositeShape) -> Result<DensityMatrix<T>> {
    shape.check(psi.dim())?;
    let (m, n) = (shape.m(), shape.n());
    let c = psi.amplitudes();
    let mut rho = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        for k in j..n {
            let mut acc = Complex::zero();
            for i in 0..m {
                acc += c[i * n + j] * c[i * n + k].conj();
            }
            rho[(j, k)] = acc;
            rho[(k, j)] = acc.conj();
        }
    }
    Ok(DensityMatrix::trusted(rho))
}

/// Eigendecomposition of a density matrix.
///
/// Eigenvalues in `[-T::PSD_TOL, 0)` are clamped to zero; anything more
/// negative is rejected. Returns the descending spectrum and the unitary
/// whose columns are the matching eigenvectors.
pub fn eig_hermitian<T: Real>(rho: &DensityMatrix<T>) -> Result<(Spectrum<T>, ComplexMatrix<T>)> {
    let eig = hermitian_eigen(rho.matrix())?;
    let values = clamp_psd(eig.values)?;
    Ok((Spectrum::new(values)?, eig.vectors))
}

fn clamp_psd<T: Real>(values: Vec<T>) -> Result<Vec<T>> {
    values
        .into_iter()
        .map(|v| {
            if v >= T::zero() {
                Ok(v)
            } else if v >= -T::PSD_TOL {
                Ok(T::zero())
            } else {
                Err(Error::Validation(format!("eigenvalue {v:e} is below the PSD tolerance")))
            }
        })
        .collect()
}

/// Schmidt coefficients `lambda_k` of a bipartite pure state (length `m`).
pub fn schmidt_spectrum<T: Real>(psi: &PureState<T>, shape: CompositeShape) -> Result<Spectrum<T>> {
    let rho = partial_trace_a(psi, shape)?;
    Ok(eig_hermitian(&rho)?.0)
}

/// `-sum lambda log2 lambda` in bits, with `0 log 0 = 0`.
pub fn entanglement_entropy<T: Real>(spectrum: &Spectrum<T>) -> T {
    spectrum
        .values()
        .iter()
        .filter(|&&l| l > T::zero())
        .map(|&l| -l * l.log2())
        .sum::<T>()
        .max(T::zero())
}
