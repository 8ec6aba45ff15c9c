//! Scalar abstraction shared by the linear-algebra and sampling layers.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point type the dense complex algebra is generic over.
///
/// The associated tolerances are the validation thresholds for the
/// domain types. For `f64` they are the values quoted throughout this
/// crate's documentation; `f32` uses looser thresholds scaled to its epsilon.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Allowed deviation of a pure state's norm from one.
    const NORM_TOL: Self;
    /// Allowed entrywise deviation from Hermiticity.
    const HERMITIAN_TOL: Self;
    /// Allowed deviation of a density matrix trace from one.
    const TRACE_TOL: Self;
    /// Most negative eigenvalue still accepted as positive semidefinite.
    const PSD_TOL: Self;
    /// Allowed deviation of a spectrum's sum from one.
    const SIMPLEX_TOL: Self;
    /// Relative off-diagonal Frobenius norm at which Jacobi sweeps stop.
    const JACOBI_TOL: Self;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("integer representable in scalar type")
    }
}

impl Real for f64 {
    const NORM_TOL: f64 = 1e-12;
    const HERMITIAN_TOL: f64 = 1e-12;
    const TRACE_TOL: f64 = 1e-12;
    const PSD_TOL: f64 = 1e-10;
    const SIMPLEX_TOL: f64 = 1e-10;
    const JACOBI_TOL: f64 = 1e-14;
}

impl Real for f32 {
    const NORM_TOL: f32 = 1e-5;
    const HERMITIAN_TOL: f32 = 1e-5;
    const TRACE_TOL: f32 = 1e-5;
    const PSD_TOL: f32 = 1e-4;
    const SIMPLEX_TOL: f32 = 1e-4;
    const JACOBI_TOL: f32 = 1e-6;
}
