//! One-dimensional marginals of the two-level induced ensemble and the
//! diagonal-element law for general `m`.

use std::f64::consts::PI;

use statrs::function::beta::{beta_reg, ln_beta};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::Domain(format!("{name} = {v} outside [0, 1]")));
    }
    Ok(())
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("marginal needs n >= 2, got {n}")));
    }
    Ok(())
}

/// `ln K_D` for the Haar measure normalization `K_D = (D-1)! / pi^D`.
pub fn ln_haar_normalization(d: usize) -> f64 {
    ln_gamma(d as f64) - d as f64 * PI.ln()
}

/// Density of `X = rho_11` for `m = 2`: `K_2N / K_N^2 [X(1-X)]^(N-1)`,
/// i.e. Beta(N, N).
pub fn marginal_x_density(x: f64, n: usize) -> Result<f64> {
    check_unit("x", x)?;
    check_n(n)?;
    let ln_c = ln_haar_normalization(2 * n) - 2.0 * ln_haar_normalization(n);
    Ok((ln_c + (n as f64 - 1.0) * (x * (1.0 - x)).ln()).exp())
}

pub fn marginal_x_cdf(x: f64, n: usize) -> Result<f64> {
    check_unit("x", x)?;
    check_n(n)?;
    Ok(beta_reg(n as f64, n as f64, x))
}

/// Density of the overlap `Y = |<a|b>|^2` between independent Haar states in
/// dimension `n`: `(n-1)(1-Y)^(n-2)`.
pub fn overlap_density(y: f64, n: usize) -> Result<f64> {
    check_unit("y", y)?;
    check_n(n)?;
    Ok((n as f64 - 1.0) * (1.0 - y).powi(n as i32 - 2))
}

pub fn overlap_cdf(y: f64, n: usize) -> Result<f64> {
    check_unit("y", y)?;
    check_n(n)?;
    Ok(1.0 - (1.0 - y).powi(n as i32 - 1))
}

/// Density of `r = l1 - l2`:
/// `(1/2) (2n-1)! / ((n-1)! (n-2)!) r^2 ((1 - r^2)/4)^(n-2)`.
pub fn radial_density_induced(r: f64, n: usize) -> Result<f64> {
    check_unit("r", r)?;
    check_n(n)?;
    let nf = n as f64;
    let ln_c = ln_gamma(2.0 * nf) - ln_gamma(nf) - ln_gamma(nf - 1.0) - std::f64::consts::LN_2;
    let base = (1.0 - r * r) / 4.0;
    Ok(ln_c.exp() * r * r * base.powi(n as i32 - 2))
}

/// CDF of [`radial_density_induced`]; with `u = r^2` it is the regularized
/// incomplete beta `I_{r^2}(3/2, n-1)`.
pub fn radial_cdf_induced(r: f64, n: usize) -> Result<f64> {
    check_unit("r", r)?;
    check_n(n)?;
    Ok(beta_reg(1.5, n as f64 - 1.0, r * r))
}

/// Joint density of the diagonal `(x_1..x_m)` of `rho_S` on the simplex:
/// `K_mn / K_n^m (x_1 ... x_m)^(n-1)`, a symmetric Dirichlet(n) law.
pub fn diagonal_density(x: &[f64], n: usize) -> Result<f64> {
    if n == 0 || x.is_empty() {
        return Err(Error::Domain("need n >= 1 and at least one entry".into()));
    }
    let total: f64 = x.iter().sum();
    if x.iter().any(|&v| !(v >= 0.0)) || (total - 1.0).abs() > 1e-10 {
        return Err(Error::Domain(format!("{x:?} is not on the simplex")));
    }
    let m = x.len();
    let ln_c = ln_haar_normalization(m * n) - m as f64 * ln_haar_normalization(n);
    let ln_body: f64 = x.iter().map(|&v| (n as f64 - 1.0) * v.ln()).sum();
    Ok((ln_c + ln_body).exp())
}

/// CDF of a single diagonal entry: Beta(n, (m-1) n).
pub fn diagonal_element_cdf(x: f64, m: usize, n: usize) -> Result<f64> {
    check_unit("x", x)?;
    if m < 2 || n == 0 {
        return Err(Error::Domain("need m >= 2, n >= 1".into()));
    }
    Ok(beta_reg(n as f64, ((m - 1) * n) as f64, x))
}

/// Variance of `rho_11` for `m = 2`: Beta(N, N) variance `1 / (4 (2N + 1))`.
pub fn diagonal_variance_two_level(n: usize) -> f64 {
    1.0 / (4.0 * (2.0 * n as f64 + 1.0))
}

/// Beta(a, b) density via `ln B`, for oracle comparisons.
pub fn beta_density(x: f64, a: f64, b: f64) -> f64 {
    ((a - 1.0) * x.ln() + (b - 1.0) * (1.0 - x).ln() - ln_beta(a, b)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, Tolerance};

    #[test]
    fn examples() {
        assert_eq!(overlap_density(0.0, 2).unwrap(), 1.0);
        assert!((radial_density_induced(1.0, 2).unwrap() - 3.0).abs() < 1e-13);
        assert!((marginal_x_density(0.5, 3).unwrap() - 1.875).abs() < 1e-12);
    }

    #[test]
    fn out_of_range_arguments() {
        assert!(marginal_x_density(1.5, 3).is_err());
        assert!(overlap_density(-0.1, 3).is_err());
        assert!(radial_density_induced(0.5, 1).is_err());
    }

    #[test]
    fn normalized_to_1e_6() {
        let tol = Tolerance::new(1e-12, 1e-12);
        for n in [2, 3, 5, 10, 40] {
            let px = integrate(|x| marginal_x_density(x, n).unwrap(), 0.0, 1.0, tol);
            let qy = integrate(|y| overlap_density(y, n).unwrap(), 0.0, 1.0, tol);
            let pr = integrate(|r| radial_density_induced(r, n).unwrap(), 0.0, 1.0, tol);
            for (name, v) in [("p(X)", px.value), ("q(Y)", qy.value), ("p(r)", pr.value)] {
                assert!((v - 1.0).abs() < 1e-6, "{name} n={n}: {v}");
            }
        }
    }

    #[test]
    fn cdfs_match_quadrature() {
        let tol = Tolerance::default();
        for n in [2, 3, 7] {
            for &t in &[0.1, 0.35, 0.8] {
                let r = integrate(|r| radial_density_induced(r, n).unwrap(), 0.0, t, tol).value;
                assert!((r - radial_cdf_induced(t, n).unwrap()).abs() < 1e-10);
                let x = integrate(|x| marginal_x_density(x, n).unwrap(), 0.0, t, tol).value;
                assert!((x - marginal_x_cdf(t, n).unwrap()).abs() < 1e-10);
                let y = integrate(|y| overlap_density(y, n).unwrap(), 0.0, t, tol).value;
                assert!((y - overlap_cdf(t, n).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn haar_normalization_matches_beta() {
        for n in [2, 3, 5, 12] {
            for &x in &[0.2, 0.5, 0.7] {
                let a = marginal_x_density(x, n).unwrap();
                let b = beta_density(x, n as f64, n as f64);
                assert!((a - b).abs() < 1e-11 * b.max(1.0));
            }
        }
    }

    #[test]
    fn diagonal_density_two_level_is_beta() {
        let d = diagonal_density(&[0.3, 0.7], 4).unwrap();
        assert!((d - beta_density(0.3, 4.0, 4.0)).abs() < 1e-12);
    }
}
