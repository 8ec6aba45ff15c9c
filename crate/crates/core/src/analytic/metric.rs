//! Bures and Hilbert-Schmidt line elements.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use super::Evaluation;
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, ComplexMatrix, DensityMatrix};
use crate::scalar::Real;

/// Hermitian tangent vector `delta rho`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianPerturbation<T> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> HermitianPerturbation<T> {
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Shape("perturbation must be square".into()));
        }
        let defect = matrix.hermiticity_defect();
        if defect > T::HERMITIAN_TOL {
            return Err(Error::Validation(format!("perturbation not Hermitian (defect {defect:e})")));
        }
        Ok(Self { matrix })
    }

    pub fn zero(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::zeros(dim, dim) }
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

/// `2 sum_{jk} |<j|d rho|k>|^2 / (l_j + l_k)` in the eigenbasis of `rho`.
///
/// Returns [`Evaluation::Singular`] when some pair sum `l_j + l_k` with a
/// nonzero matrix element is below `1e-12`.
pub fn bures_line_element<T: Real>(rho: &DensityMatrix<T>, drho: &HermitianPerturbation<T>) -> Result<Evaluation<T>> {
    if rho.dim() != drho.dim() {
        return Err(Error::Shape(format!("rho is {0}x{0}, perturbation {1}x{1}", rho.dim(), drho.dim())));
    }
    let tr = drho.matrix().trace().re;
    if tr.abs() > T::TRACE_TOL {
        return Err(Error::Validation(format!("perturbation trace {tr:e} is not zero")));
    }
    let (spectrum, u) = eig_hermitian(rho)?;
    let rotated = u.adjoint().matmul(drho.matrix())?.matmul(&u)?;
    let lambda = spectrum.values();
    let floor = T::lit(1e-12);
    let mut total = T::zero();
    for j in 0..lambda.len() {
        for k in 0..lambda.len() {
            let element = rotated[(j, k)].norm_sqr();
            let pair = lambda[j] + lambda[k];
            if pair <= floor {
                if element.is_zero() {
                    continue;
                }
                return Ok(Evaluation::Singular);
            }
            total += element / pair;
        }
    }
    Ok(Evaluation::Finite(T::lit(2.0) * total))
}

/// `tr(d rho^2)`.
pub fn hs_line_element<T: Real>(drho: &HermitianPerturbation<T>) -> T {
    drho.matrix().as_slice().iter().map(|z| z.norm_sqr()).sum()
}

/// Tangent vector expressed through an eigenvalue shift and a unitary
/// generator: `d rho = V (dL + [dU, L]) V^H` with `L = diag(lambda)` and
/// `dU_jk = dx_jk + i dy_jk`, `dU_kj = -conj(dU_jk)` for `j < k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPerturbation<T> {
    pub d_lambda: Vec<T>,
    /// `dx_jk + i dy_jk` for `j < k`, in row-major upper-triangle order.
    pub generator: Vec<Complex<T>>,
}

impl<T: Real> SpectralPerturbation<T> {
    pub fn new(d_lambda: Vec<T>, generator: Vec<Complex<T>>) -> Result<Self> {
        let m = d_lambda.len();
        if generator.len() != m * (m.saturating_sub(1)) / 2 {
            return Err(Error::Shape(format!(
                "{m}-level perturbation needs {} generator entries, got {}",
                m * (m.saturating_sub(1)) / 2,
                generator.len()
            )));
        }
        Ok(Self { d_lambda, generator })
    }

    fn pairs(m: usize) -> impl Iterator<Item = (usize, usize)> {
        (0..m).flat_map(move |j| ((j + 1)..m).map(move |k| (j, k)))
    }

    /// Builds `d rho` in the frame given by the unitary `basis` (columns are
    /// the eigenvectors of `rho` belonging to `lambda`).
    pub fn to_matrix(&self, lambda: &[T], basis: &ComplexMatrix<T>) -> Result<HermitianPerturbation<T>> {
        let m = self.d_lambda.len();
        if lambda.len() != m || basis.rows() != m || basis.cols() != m {
            return Err(Error::Shape("spectrum, basis and perturbation sizes differ".into()));
        }
        let mut local = ComplexMatrix::from_diagonal(&self.d_lambda);
        for ((j, k), &g) in Self::pairs(m).zip(&self.generator) {
            // [dU, L]_jk = dU_jk (l_k - l_j)
            local[(j, k)] = g * (lambda[k] - lambda[j]);
            local[(k, j)] = -g.conj() * (lambda[j] - lambda[k]);
        }
        let mut global = basis.matmul(&local)?.matmul(&basis.adjoint())?;
        global.symmetrize();
        HermitianPerturbation::new(global)
    }

    /// `sum dl_j^2 / l_j + 4 sum_{j<k} (l_j - l_k)^2 / (l_j + l_k) (dx^2 + dy^2)`.
    pub fn bures_quadratic_form(&self, lambda: &[T]) -> Result<Evaluation<T>> {
        let m = self.d_lambda.len();
        if lambda.len() != m {
            return Err(Error::Shape("spectrum and perturbation sizes differ".into()));
        }
        let mut total = T::zero();
        for (&dl, &l) in self.d_lambda.iter().zip(lambda) {
            if dl.is_zero() {
                continue;
            }
            if l <= T::zero() {
                return Ok(Evaluation::Singular);
            }
            total += dl * dl / l;
        }
        for ((j, k), g) in Self::pairs(m).zip(&self.generator) {
            let d = lambda[j] - lambda[k];
            total += T::lit(4.0) * d * d / (lambda[j] + lambda[k]) * g.norm_sqr();
        }
        Ok(Evaluation::Finite(total))
    }
}

impl SpectralPerturbation<f64> {
    /// Gaussian perturbation of size `scale`: `d_lambda` projected onto zero
    /// sum, generator entries with independent real and imaginary parts.
    pub fn random<R: Rng + ?Sized>(m: usize, scale: f64, rng: &mut R) -> Self {
        let mut d_lambda: Vec<f64> = (0..m).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let mean = d_lambda.iter().sum::<f64>() / m.max(1) as f64;
        for v in &mut d_lambda {
            *v = (*v - mean) * scale;
        }
        let generator = (0..m * m.saturating_sub(1) / 2)
            .map(|_| Complex::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal)) * scale)
            .collect();
        Self { d_lambda, generator }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{density_from_bloch, pauli, BlochVector};

    #[test]
    fn eigenvalue_shift() {
        let eps: f64 = 1e-3;
        let rho = DensityMatrix::new(ComplexMatrix::from_diagonal(&[0.7, 0.3])).unwrap();
        let d = HermitianPerturbation::new(ComplexMatrix::from_diagonal(&[eps, -eps])).unwrap();
        let ds2 = bures_line_element(&rho, &d).unwrap().finite().unwrap();
        let expected = eps * eps * (1.0 / 0.7 + 1.0 / 0.3);
        assert!((ds2 - expected).abs() < 1e-15 * expected.max(1.0));
        assert!((hs_line_element(&d) - 2.0 * eps * eps).abs() < 1e-20);
    }

    #[test]
    fn zero_perturbation() {
        let rho = DensityMatrix::<f64>::maximally_mixed(3).unwrap();
        let zero = HermitianPerturbation::zero(3);
        assert_eq!(bures_line_element(&rho, &zero).unwrap(), Evaluation::Finite(0.0));
        assert_eq!(hs_line_element(&zero), 0.0);
    }

    #[test]
    fn unitary_generator_on_tilted_qubit() {
        let eps: f64 = 1e-4;
        let rho = density_from_bloch(&BlochVector::new(0.0, 0.0, 0.6).unwrap()).unwrap();
        let p = SpectralPerturbation::new(vec![0.0, 0.0], vec![Complex::new(eps, 0.0)]).unwrap();
        let lambda = [0.8, 0.2];
        let d = p.to_matrix(&lambda, &ComplexMatrix::identity(2)).unwrap();
        let ds2 = bures_line_element(&rho, &d).unwrap().finite().unwrap();
        let expected = 4.0 * eps * eps * 0.36;
        assert!(((ds2 - expected) / expected).abs() < 1e-12);
        assert!(((p.bures_quadratic_form(&lambda).unwrap().finite().unwrap() - expected) / expected).abs() < 1e-12);
    }

    #[test]
    fn sigma_x_hs_length() {
        let eps = 0.01;
        let d = HermitianPerturbation::new(pauli::<f64>()[0].scale(eps)).unwrap();
        assert!((hs_line_element(&d) - 2.0 * eps * eps).abs() < 1e-18);
    }

    #[test]
    fn singular_on_pure_state_boundary() {
        let rho = DensityMatrix::new(ComplexMatrix::from_diagonal(&[1.0, 0.0, 0.0])).unwrap();
        let d = HermitianPerturbation::new(ComplexMatrix::from_diagonal(&[0.0, 1e-3, -1e-3])).unwrap();
        assert_eq!(bures_line_element(&rho, &d).unwrap(), Evaluation::Singular);
    }

    #[test]
    fn rejects_traceful_perturbation() {
        let rho = DensityMatrix::<f64>::maximally_mixed(2).unwrap();
        let d = HermitianPerturbation::new(ComplexMatrix::from_diagonal(&[1e-3, 0.0])).unwrap();
        assert!(matches!(bures_line_element(&rho, &d), Err(Error::Validation(_))));
    }
}
