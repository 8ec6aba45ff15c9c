//! Exact radial samplers for the Bures and Hilbert-Schmidt qubit ensembles.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::BlochVector;
use crate::scalar::Real;

/// Inverse of [`radial_cdf_bures`](crate::analytic::radial_cdf_bures).
///
/// With `r = sin(theta)` the CDF becomes `(2 theta - sin 2 theta) / pi`,
/// which is solved for `theta` in `[0, pi/2]` by Newton steps kept inside a
/// bisection bracket, to an absolute tolerance of `1e-12`.
pub fn bures_radial_quantile(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    let target = PI * u;
    let g = |t: f64| 2.0 * t - (2.0 * t).sin() - target;
    let (mut lo, mut hi) = (0.0, FRAC_PI_2);
    // g(t) ~ (4/3) t^3 near zero
    let mut t = (0.75 * target).cbrt().min(FRAC_PI_2);
    for _ in 0..200 {
        let gt = g(t);
        if gt == 0.0 {
            break;
        }
        if gt > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let newton = t - gt / (4.0 * t.sin().powi(2));
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        let done = (next - t).abs() < 1e-15 || hi - lo < 1e-12;
        t = next;
        if done {
            break;
        }
    }
    t.sin()
}

fn isotropic_direction<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-300 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

fn bloch<T: Real>(r: f64, dir: [f64; 3]) -> BlochVector<T> {
    BlochVector::from_polar(T::lit(r), dir.map(T::lit))
}

/// Bloch vector from the Bures-induced qubit ensemble: isotropic direction,
/// radius by inverse CDF.
pub fn sample_bures_qubit<T: Real, R: Rng + ?Sized>(rng: &mut R) -> BlochVector<T> {
    let u: f64 = rng.random();
    let r = bures_radial_quantile(u);
    bloch(r, isotropic_direction(rng))
}

/// Bloch vector uniform on the unit ball (Hilbert-Schmidt qubit ensemble).
pub fn sample_hs_qubit<T: Real, R: Rng + ?Sized>(rng: &mut R) -> BlochVector<T> {
    let u: f64 = rng.random();
    bloch(u.cbrt(), isotropic_direction(rng))
}
