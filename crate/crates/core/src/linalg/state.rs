use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::eigen::{hermitian_eigen, HermitianEigen};
use super::matrix::{pauli, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Unit vector in a `dim`-dimensional Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> PureState<T> {
    /// Wraps already-normalized amplitudes; the norm must be one within `T::NORM_TOL`.
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Domain("pure state needs dimension >= 1".into()));
        }
        let norm = norm(&amplitudes);
        if (norm - T::one()).abs() > T::NORM_TOL {
            return Err(Error::Validation(format!("state norm is {norm}, expected 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Divides by the Euclidean norm.
    pub fn normalized(mut amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm = norm(&amplitudes);
        if amplitudes.is_empty() || !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::Domain(format!("cannot normalize vector with norm {norm}")));
        }
        for a in &mut amplitudes {
            *a = *a / norm;
        }
        Ok(Self { amplitudes })
    }

    /// Computational basis vector `|index>`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::Domain(format!("basis index {index} out of range for dim {dim}")));
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
        amps[index] = Complex::new(T::one(), T::zero());
        Self::new(amps)
    }

    /// Tensor product `self (x) other` with index `i * other.dim + j`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amps.push(a * b);
            }
        }
        Self { amplitudes: amps }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.dim() != other.dim() {
            return Err(Error::Shape(format!("dims {} and {}", self.dim(), other.dim())));
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|psi><psi|`.
    pub fn projector(&self) -> DensityMatrix<T> {
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        DensityMatrix::trusted(m)
    }
}

fn norm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// Dimensions `(m, n)` of the system and ancilla factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CompositeShape {
    m: usize,
    n: usize,
}

impl CompositeShape {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Domain(format!("composite dimensions must be >= 1, got ({m}, {n})")));
        }
        Ok(Self { m, n })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.m * self.n
    }

    pub fn swapped(&self) -> Self {
        Self { m: self.n, n: self.m }
    }

    pub(crate) fn check(&self, dim: usize) -> Result<()> {
        if dim != self.dim() {
            return Err(Error::Shape(format!(
                "state of dimension {dim} does not factor as {}x{}",
                self.m, self.n
            )));
        }
        Ok(())
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    entries: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity, unit trace and positivity (via an eigendecomposition).
    pub fn new(entries: ComplexMatrix<T>) -> Result<Self> {
        if !entries.is_square() || entries.rows() == 0 {
            return Err(Error::Shape(format!(
                "density matrix must be square and non-empty, got {}x{}",
                entries.rows(),
                entries.cols()
            )));
        }
        let defect = entries.hermiticity_defect();
        if defect > T::HERMITIAN_TOL {
            return Err(Error::Validation(format!("not Hermitian (defect {defect:e})")));
        }
        let tr = entries.trace().re;
        if (tr - T::one()).abs() > T::TRACE_TOL {
            return Err(Error::Validation(format!("trace is {tr}, expected 1")));
        }
        let eig = hermitian_eigen(&entries)?;
        let min = eig.values.last().copied().unwrap_or_else(T::zero);
        if min < -T::PSD_TOL {
            return Err(Error::Validation(format!("not positive semidefinite (eigenvalue {min:e})")));
        }
        Ok(Self { entries })
    }

    /// Skips validation for constructions that are density matrices by algebra
    /// (partial traces of unit vectors, unitary conjugates of spectra). The
    /// input is symmetrized so Hermiticity holds to rounding.
    pub(crate) fn trusted(mut entries: ComplexMatrix<T>) -> Self {
        entries.symmetrize();
        Self { entries }
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("dimension must be >= 1".into()));
        }
        Ok(Self::trusted(ComplexMatrix::identity(dim).scale(T::one() / T::from_usize_lossy(dim))))
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.entries
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.entries[(i, j)]
    }

    /// Real diagonal entries `rho_ii`.
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).collect()
    }

    /// Trace distance `(1/2) ||self - other||_1`.
    pub fn trace_distance(&self, other: &Self) -> Result<T> {
        let diff = self.entries.sub(&other.entries)?;
        let eig: HermitianEigen<T> = hermitian_eigen(&diff)?;
        Ok(eig.values.iter().map(|v| v.abs()).sum::<T>() * T::lit(0.5))
    }
}

/// Eigenvalue vector on the probability simplex, sorted descending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Spectrum<T> {
    values: Vec<T>,
}

impl<T: Real> Spectrum<T> {
    /// Sorts descending and validates range and unit sum.
    pub fn new(mut values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("spectrum must be non-empty".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation("spectrum has non-finite entries".into()));
        }
        values.sort_by(|a, b| b.partial_cmp(a).expect("finite values"));
        let tol = T::SIMPLEX_TOL;
        if values[0] > T::one() + tol || values[values.len() - 1] < -tol {
            return Err(Error::Validation(format!(
                "spectrum entries outside [0, 1]: {:?}",
                values
            )));
        }
        let total: T = values.iter().copied().sum();
        if (total - T::one()).abs() > tol {
            return Err(Error::Validation(format!("spectrum sums to {total}, expected 1")));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest entry.
    pub fn max(&self) -> T {
        self.values[0]
    }

    /// Keeps the first `k` entries, padding with zeros when `k` exceeds the length.
    pub fn resized(&self, k: usize) -> Result<Self> {
        let mut v = self.values.clone();
        v.resize(k, T::zero());
        Self::new(v)
    }
}

/// Real 3-vector with modulus at most one (plus `T::NORM_TOL`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> BlochVector<T> {
    pub fn new(x: T, y: T, z: T) -> Result<Self> {
        let v = Self { x, y, z };
        let r = v.modulus();
        if !(r <= T::one() + T::NORM_TOL) {
            return Err(Error::Domain(format!("Bloch vector modulus {r} exceeds 1")));
        }
        Ok(v)
    }

    /// Builds `r * direction` for a unit `direction`.
    pub(crate) fn from_polar(r: T, direction: [T; 3]) -> Self {
        Self {
            x: r * direction[0],
            y: r * direction[1],
            z: r * direction[2],
        }
    }

    pub fn modulus(&self) -> T {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn as_array(&self) -> [T; 3] {
        [self.x, self.y, self.z]
    }
}

/// `rho = (1 + r . sigma) / 2`.
pub fn density_from_bloch<T: Real>(r: &BlochVector<T>) -> Result<DensityMatrix<T>> {
    let r = BlochVector::new(r.x, r.y, r.z)?;
    let [sx, sy, sz] = pauli::<T>();
    let half = T::lit(0.5);
    let m = ComplexMatrix::identity(2)
        .add(&sx.scale(r.x))?
        .add(&sy.scale(r.y))?
        .add(&sz.scale(r.z))?
        .scale(half);
    Ok(DensityMatrix::trusted(m))
}

/// Inverse of [`density_from_bloch`]: `r_k = tr(rho sigma_k)`.
pub fn bloch_from_density<T: Real>(rho: &DensityMatrix<T>) -> Result<BlochVector<T>> {
    if rho.dim() != 2 {
        return Err(Error::Shape(format!("Bloch representation needs dim 2, got {}", rho.dim())));
    }
    let two = T::lit(2.0);
    let off = rho.get(0, 1);
    BlochVector::new(two * off.re, -two * off.im, rho.get(0, 0).re - rho.get(1, 1).re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_state_norm_checked() {
        let bad = vec![Complex::new(1.0, 0.0), Complex::new(1.0, 0.0)];
        assert!(PureState::new(bad.clone()).is_err());
        let ok = PureState::normalized(bad).unwrap();
        assert!((ok.amplitudes()[0].re - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(matches!(PureState::<f64>::new(vec![]), Err(Error::Domain(_))));
    }

    #[test]
    fn composite_shape_rejects_zero() {
        assert!(CompositeShape::new(0, 3).is_err());
        assert_eq!(CompositeShape::new(2, 3).unwrap().dim(), 6);
    }

    #[test]
    fn spectrum_sorts_and_validates() {
        let s = Spectrum::new(vec![0.2, 0.5, 0.3]).unwrap();
        assert_eq!(s.values(), &[0.5, 0.3, 0.2]);
        assert!(Spectrum::new(vec![0.6, 0.6]).is_err());
        assert!(Spectrum::new(vec![1.2, -0.2]).is_err());
        assert!(Spectrum::new(vec![1.0, -1e-11]).is_ok());
    }

    #[test]
    fn density_matrix_rejects_bad_inputs() {
        let not_unit = ComplexMatrix::from_diagonal(&[0.5, 0.6]);
        assert!(DensityMatrix::new(not_unit).is_err());
        let negative = ComplexMatrix::from_diagonal(&[1.5, -0.5]);
        assert!(DensityMatrix::new(negative).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::<f64>::zeros(2, 3)).is_err());
    }

    #[test]
    fn bloch_examples() {
        let mixed = density_from_bloch(&BlochVector::new(0.0, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!(mixed.matrix(), &ComplexMatrix::identity(2).scale(0.5));
        let pole = density_from_bloch(&BlochVector::new(0.0, 0.0, 1.0).unwrap()).unwrap();
        assert_eq!(pole.diagonal(), vec![1.0, 0.0]);
        assert!(BlochVector::new(0.8, 0.8, 0.0).is_err());
    }

    #[test]
    fn bloch_round_trip() {
        let r = BlochVector::<f64>::new(0.3, -0.4, 0.5).unwrap();
        let back = bloch_from_density(&density_from_bloch(&r).unwrap()).unwrap();
        assert!((back.x - r.x).abs() < 1e-15);
        assert!((back.y - r.y).abs() < 1e-15);
        assert!((back.z - r.z).abs() < 1e-15);
    }
}
