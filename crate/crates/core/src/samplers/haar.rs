use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{partial_trace_a, ComplexMatrix, CompositeShape, DensityMatrix, PureState, Spectrum};
use crate::scalar::Real;

fn complex_gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re), T::lit(im))
}

/// Unitarily invariant random unit vector: an i.i.d. complex Gaussian
/// vector divided by its norm.
pub fn haar_pure_state<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<PureState<T>> {
    if dim == 0 {
        return Err(Error::Domain("Haar state needs dim >= 1".into()));
    }
    let amps = (0..dim).map(|_| complex_gaussian(rng)).collect();
    PureState::normalized(amps)
}

/// Haar-distributed unitary.
///
/// Householder QR of a complex Ginibre matrix, followed by rescaling each
/// column of `Q` by the phase of the matching `R` diagonal entry so that
/// the factorization is unique and the distribution of `Q` is Haar.
pub fn haar_unitary<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<ComplexMatrix<T>> {
    if dim == 0 {
        return Err(Error::Domain("Haar unitary needs dim >= 1".into()));
    }
    let data = (0..dim * dim).map(|_| complex_gaussian(rng)).collect();
    let mut a = ComplexMatrix::from_vec(dim, dim, data)?;
    let mut q = ComplexMatrix::identity(dim);
    let two = T::lit(2.0);

    for k in 0..dim {
        let norm_x = (k..dim).map(|i| a[(i, k)].norm_sqr()).sum::<T>().sqrt();
        let x0 = a[(k, k)];
        let phase = if x0.norm().is_zero() { Complex::new(T::one(), T::zero()) } else { x0 / x0.norm() };
        let alpha = -phase * norm_x;

        let mut v: Vec<Complex<T>> = (k..dim).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let norm_v = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm_v.is_zero() {
            continue;
        }
        for z in &mut v {
            *z = *z / norm_v;
        }
        // A <- H A on rows k.., H = I - 2 v v^H
        for j in k..dim {
            let w: Complex<T> = v.iter().enumerate().map(|(t, vt)| vt.conj() * a[(k + t, j)]).sum();
            for (t, vt) in v.iter().enumerate() {
                a[(k + t, j)] -= vt * w * two;
            }
        }
        // Q <- Q H
        for i in 0..dim {
            let w: Complex<T> = v.iter().enumerate().map(|(t, vt)| q[(i, k + t)] * vt).sum();
            for (t, vt) in v.iter().enumerate() {
                q[(i, k + t)] -= w * vt.conj() * two;
            }
        }
    }

    for k in 0..dim {
        let r = a[(k, k)];
        let n = r.norm();
        if n.is_zero() {
            continue;
        }
        let phase = r / n;
        for i in 0..dim {
            q[(i, k)] = q[(i, k)] * phase;
        }
    }
    Ok(q)
}

/// Reduced state of a Haar-random pure state on `H_S (x) H_A`.
pub fn sample_induced<T: Real, R: Rng + ?Sized>(shape: CompositeShape, rng: &mut R) -> Result<DensityMatrix<T>> {
    let psi = haar_pure_state(shape.dim(), rng)?;
    partial_trace_a(&psi, shape)
}

/// `U diag(spectrum) U^H` with a Haar-random `U`.
pub fn lift_to_density<T: Real, R: Rng + ?Sized>(spectrum: &Spectrum<T>, rng: &mut R) -> Result<DensityMatrix<T>> {
    let m = spectrum.len();
    let u = haar_unitary(m, rng)?;
    let mut out = ComplexMatrix::zeros(m, m);
    for (k, &lambda) in spectrum.values().iter().enumerate() {
        if lambda.is_zero() {
            continue;
        }
        for i in 0..m {
            let uik = u[(i, k)] * lambda;
            for j in 0..m {
                out[(i, j)] += uik * u[(j, k)].conj();
            }
        }
    }
    Ok(DensityMatrix::trusted(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{bloch_from_density, eig_hermitian};
    use crate::samplers::RngStream;

    #[test]
    fn zero_dimension_is_error() {
        let mut rng = RngStream::new(1, 0);
        assert!(haar_pure_state::<f64, _>(0, &mut rng).is_err());
        assert!(haar_unitary::<f64, _>(0, &mut rng).is_err());
    }

    #[test]
    fn one_dimensional_cases_are_phases() {
        let mut rng = RngStream::new(1, 0);
        let psi = haar_pure_state::<f64, _>(1, &mut rng).unwrap();
        assert!((psi.amplitudes()[0].norm() - 1.0).abs() < 1e-15);
        let u = haar_unitary::<f64, _>(1, &mut rng).unwrap();
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = RngStream::new(2, 0);
        for dim in 1..=8 {
            let u = haar_unitary::<f64, _>(dim, &mut rng).unwrap();
            assert!(u.unitarity_defect() < 1e-12, "dim {dim}");
        }
    }

    #[test]
    fn mean_first_population_is_half() {
        let mut rng = RngStream::new(3, 0);
        let n = 100_000;
        let mean = (0..n)
            .map(|_| haar_pure_state::<f64, _>(2, &mut rng).unwrap().amplitudes()[0].norm_sqr())
            .sum::<f64>()
            / n as f64;
        assert!((mean - 0.5).abs() < 0.005, "mean {mean}");
    }

    #[test]
    fn rotated_pole_is_isotropic() {
        let mut rng = RngStream::new(4, 0);
        let n = 100_000;
        let pole = Spectrum::new(vec![1.0, 0.0]).unwrap();
        let mut sum = [0.0; 3];
        for _ in 0..n {
            let r = bloch_from_density(&lift_to_density::<f64, _>(&pole, &mut rng).unwrap()).unwrap();
            assert!((r.modulus() - 1.0).abs() < 1e-12);
            for (s, v) in sum.iter_mut().zip(r.as_array()) {
                *s += v;
            }
        }
        for s in sum {
            assert!((s / n as f64).abs() < 0.01);
        }
    }

    #[test]
    fn lift_preserves_spectrum() {
        let mut rng = RngStream::new(5, 0);
        let spec = Spectrum::new(vec![0.5, 0.3, 0.15, 0.05]).unwrap();
        let rho = lift_to_density::<f64, _>(&spec, &mut rng).unwrap();
        let (back, _) = eig_hermitian(&rho).unwrap();
        for (a, b) in back.values().iter().zip(spec.values()) {
            assert!((a - b).abs() < 1e-10);
        }
        let flat = Spectrum::new(vec![0.25; 4]).unwrap();
        let rho = lift_to_density::<f64, _>(&flat, &mut rng).unwrap();
        assert!(rho.matrix().sub(&ComplexMatrix::identity(4).scale(0.25)).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn induced_matches_partial_trace_of_same_draw() {
        let shape = CompositeShape::new(2, 3).unwrap();
        let rho = sample_induced::<f64, _>(shape, &mut RngStream::new(9, 1)).unwrap();
        let psi = haar_pure_state::<f64, _>(6, &mut RngStream::new(9, 1)).unwrap();
        assert_eq!(rho, partial_trace_a(&psi, shape).unwrap());
    }
}
