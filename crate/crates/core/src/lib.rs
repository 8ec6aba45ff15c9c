//! Random bipartite pure states and the density-matrix ensembles they
//! induce, alongside the Bures and Hilbert-Schmidt volume ensembles, with
//! the closed-form spectral laws and goodness-of-fit machinery used to
//! check samplers against them.
//!
//! The linear algebra and samplers are generic over [`Real`] (`f32` or
//! `f64`); the aliases at the crate root fix `f64`. Average-entropy sums
//! are also available in exact rational arithmetic.

pub mod analytic;
pub mod error;
pub mod linalg;
pub mod mc;
pub mod quadrature;
pub mod samplers;
pub mod scalar;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::Real;

pub use num_complex::Complex;
pub use num_rational::BigRational;

pub type Complex64 = num_complex::Complex<f64>;
pub type PureState = linalg::PureState<f64>;
pub type DensityMatrix = linalg::DensityMatrix<f64>;
pub type Spectrum = linalg::Spectrum<f64>;
pub type BlochVector = linalg::BlochVector<f64>;
pub type ComplexMatrix = linalg::ComplexMatrix<f64>;
pub type UnitaryMatrix = linalg::ComplexMatrix<f64>;
pub type HermitianPerturbation = analytic::HermitianPerturbation<f64>;

pub type PureStateF32 = linalg::PureState<f32>;
pub type DensityMatrixF32 = linalg::DensityMatrix<f32>;
pub type SpectrumF32 = linalg::Spectrum<f32>;

pub use linalg::CompositeShape;
