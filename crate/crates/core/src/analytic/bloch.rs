//! Qubit ensembles as densities over the Bloch ball.
//!
//! Densities are with respect to the Euclidean volume `d^3 r`, so they
//! normalize as `int_0^1 4 pi r^2 p(r) dr = 1`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use super::Evaluation;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_sine_map, Tolerance};

fn check_radius(r: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!("Bloch radius {r} outside [0, 1]")));
    }
    Ok(())
}

/// Induced ensemble with two qubits: uniform on the ball.
pub fn density_p22_bloch(r: f64) -> Result<f64> {
    check_radius(r)?;
    Ok(3.0 / (4.0 * PI))
}

/// Hilbert-Schmidt ensemble: uniform on the ball.
pub fn density_hs_bloch(r: f64) -> Result<f64> {
    check_radius(r)?;
    Ok(3.0 / (4.0 * PI))
}

/// Normalizing constant `c` for `c (1 - r^2)^{-1/2}` over the unit ball,
/// determined once by quadrature. Equals `1 / pi^2`.
pub fn bures_bloch_constant() -> f64 {
    static CONSTANT: OnceLock<f64> = OnceLock::new();
    *CONSTANT.get_or_init(|| {
        let volume = integrate_sine_map(|r| 4.0 * PI * r * r / (1.0 - r * r).sqrt(), 0.0, 1.0, Tolerance::default());
        1.0 / volume.value
    })
}

/// Bures ensemble: `c (1 - r^2)^{-1/2}`, singular on the surface.
pub fn density_bures_bloch(r: f64) -> Result<Evaluation> {
    check_radius(r)?;
    if r >= 1.0 {
        return Ok(Evaluation::Singular);
    }
    Ok(Evaluation::Finite(bures_bloch_constant() / (1.0 - r * r).sqrt()))
}

/// Radial density `3 r^2` of the uniform ball.
pub fn radial_density_uniform_ball(r: f64) -> f64 {
    if (0.0..=1.0).contains(&r) {
        3.0 * r * r
    } else {
        0.0
    }
}

pub fn radial_cdf_uniform_ball(r: f64) -> f64 {
    r.clamp(0.0, 1.0).powi(3)
}

/// Radial density `(4/pi) r^2 / sqrt(1 - r^2)` of the Bures qubit ensemble.
pub fn radial_density_bures(r: f64) -> Evaluation {
    if !(0.0..1.0).contains(&r) {
        return if r == 1.0 { Evaluation::Singular } else { Evaluation::Finite(0.0) };
    }
    Evaluation::Finite(4.0 / PI * r * r / (1.0 - r * r).sqrt())
}

/// Closed-form CDF `(2/pi)(asin r - r sqrt(1 - r^2))` of the Bures radial law.
pub fn radial_cdf_bures(r: f64) -> f64 {
    let r = r.clamp(0.0, 1.0);
    (2.0 / PI) * (r.asin() - r * (1.0 - r * r).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;

    #[test]
    fn uniform_values() {
        assert!((density_p22_bloch(0.3).unwrap() - 0.238_732_414_637_843).abs() < 1e-14);
        assert_eq!(density_hs_bloch(0.9).unwrap(), density_p22_bloch(0.1).unwrap());
        assert!(density_hs_bloch(1.5).is_err());
    }

    #[test]
    fn bures_constant_is_inverse_pi_squared() {
        assert!((bures_bloch_constant() - 1.0 / (PI * PI)).abs() < 1e-14);
        let at_origin = density_bures_bloch(0.0).unwrap().finite().unwrap();
        assert!((at_origin - 0.1013).abs() < 1e-4);
        assert_eq!(density_bures_bloch(1.0).unwrap(), Evaluation::Singular);
    }

    #[test]
    fn four_over_pi_prefactor_does_not_normalize() {
        let mass = integrate_sine_map(|r| 4.0 * PI * r * r * (4.0 / PI) / (1.0 - r * r).sqrt(), 0.0, 1.0, Tolerance::default());
        assert!((mass.value - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn bures_cdf_matches_quadrature() {
        for &r in &[0.1, 0.5, (PI / 4.0).sin(), 0.9, 0.999] {
            let q = integrate(|x| radial_density_bures(x).finite().unwrap(), 0.0, r, Tolerance::default());
            assert!((q.value - radial_cdf_bures(r)).abs() < 1e-12, "r={r}");
        }
        assert!((radial_cdf_bures((PI / 4.0).sin()) - 0.1817).abs() < 1e-4);
    }
}
