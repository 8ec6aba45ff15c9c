//! Eigenvalue densities on the probability simplex.
//!
//! Every density here is a density on *unordered* spectra with respect to
//! the flat measure `dl_1 ... dl_{m-1}` with `l_m = 1 - sum`. A sorted
//! spectrum lives in the ordered chamber, which carries `1/m!` of the mass,
//! so histograms of sorted samples must be compared against `m!` times
//! these values.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::Evaluation;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_simplex3, Tolerance};

/// Which eigenvalue law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DensityKind {
    /// Reduced states of Haar-random pure states with an `n`-dimensional ancilla.
    Induced { n: usize },
    /// Volume measure of the Bures metric.
    Bures,
    /// Volume measure of the Hilbert-Schmidt metric.
    HilbertSchmidt,
    /// Flat (Lebesgue) measure on the simplex; used as a reference and
    /// negative control.
    Flat,
}

impl fmt::Display for DensityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityKind::Induced { n } => write!(f, "induced(n={n})"),
            DensityKind::Bures => f.write_str("bures"),
            DensityKind::HilbertSchmidt => f.write_str("hilbert-schmidt"),
            DensityKind::Flat => f.write_str("flat"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Normalization {
    /// Closed-form constant.
    Exact { constant: f64 },
    /// Constant from simplex quadrature; `abs_error` is the quadrature
    /// estimate on the integral of the raw factor.
    Quadrature { constant: f64, abs_error: f64 },
    /// No constant available; values are the raw factor.
    Unnormalized,
}

impl Normalization {
    pub fn constant(&self) -> Option<f64> {
        match *self {
            Normalization::Exact { constant } | Normalization::Quadrature { constant, .. } => Some(constant),
            Normalization::Unnormalized => None,
        }
    }
}

/// Eigenvalue density for `m`-level spectra, with its normalization
/// resolved at construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenDensity {
    m: usize,
    kind: DensityKind,
    normalization: Normalization,
}

const SIMPLEX_TOL: f64 = 1e-10;
const QUAD_TOL: Tolerance = Tolerance::new(1e-13, 1e-11);

impl EigenDensity {
    pub fn new(m: usize, kind: DensityKind) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("density needs m >= 1".into()));
        }
        if let DensityKind::Induced { n } = kind {
            if n < m {
                return Err(Error::Domain(format!(
                    "induced density needs m <= n (got m={m}, n={n}); swap the factors"
                )));
            }
        }
        let mut density = Self { m, kind, normalization: Normalization::Unnormalized };
        density.normalization = density.resolve_normalization();
        Ok(density)
    }

    fn resolve_normalization(&self) -> Normalization {
        let m = self.m;
        if m == 1 {
            return Normalization::Exact { constant: 1.0 };
        }
        match (self.kind, m) {
            (DensityKind::Flat, _) => Normalization::Exact { constant: (1..m).map(|k| k as f64).product() },
            (DensityKind::Induced { n }, 2) => Normalization::Exact {
                constant: (ln_gamma(2.0 * n as f64) - ln_gamma(n as f64 - 1.0) - ln_gamma(n as f64)).exp() / 2.0,
            },
            (DensityKind::Bures, 2) => Normalization::Exact { constant: 2.0 / PI },
            (DensityKind::HilbertSchmidt, 2) => Normalization::Exact { constant: 3.0 },
            (_, 3) => {
                let raw = integrate_simplex3(|a, b, c| self.raw_factor(&[a, b, c]).unwrap_or(0.0), QUAD_TOL);
                Normalization::Quadrature { constant: 1.0 / raw.value, abs_error: raw.abs_error }
            }
            _ => Normalization::Unnormalized,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> DensityKind {
        self.kind
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn is_normalized(&self) -> bool {
        self.normalization.constant().is_some()
    }

    /// Unnormalized factor; `None` where the Bures factor diverges.
    pub fn raw_factor(&self, lambda: &[f64]) -> Option<f64> {
        let vandermonde_sq = || {
            let mut p = 1.0;
            for j in 0..lambda.len() {
                for k in (j + 1)..lambda.len() {
                    let d = lambda[j] - lambda[k];
                    p *= d * d;
                }
            }
            p
        };
        match self.kind {
            DensityKind::Flat => Some(1.0),
            DensityKind::HilbertSchmidt => Some(vandermonde_sq()),
            DensityKind::Induced { n } => {
                let power = (n - self.m) as i32;
                Some(vandermonde_sq() * lambda.iter().map(|&l| l.max(0.0).powi(power)).product::<f64>())
            }
            DensityKind::Bures => {
                if lambda.iter().any(|&l| l <= 0.0) {
                    return None;
                }
                Some(self.bures_regular_part(lambda) / lambda.iter().product::<f64>().sqrt())
            }
        }
    }

    /// `prod_{j<k} (l_j - l_k)^2 / (l_j + l_k)`: the Bures factor without
    /// the `prod l^{-1/2}` singularity. Bounded by one on the simplex.
    pub fn bures_regular_part(&self, lambda: &[f64]) -> f64 {
        let mut p = 1.0;
        for j in 0..lambda.len() {
            for k in (j + 1)..lambda.len() {
                let d = lambda[j] - lambda[k];
                let s = lambda[j] + lambda[k];
                if s > 0.0 {
                    p *= d * d / s;
                }
            }
        }
        p
    }

    /// Natural log of [`raw_factor`](Self::raw_factor); `+inf` where the
    /// Bures factor diverges and `-inf` where the factor vanishes. Stays
    /// finite for large `n` where the raw factor underflows.
    pub fn ln_raw_factor(&self, lambda: &[f64]) -> f64 {
        let ln_vandermonde_sq = || {
            let mut s = 0.0;
            for j in 0..lambda.len() {
                for k in (j + 1)..lambda.len() {
                    s += 2.0 * (lambda[j] - lambda[k]).abs().ln();
                }
            }
            s
        };
        match self.kind {
            DensityKind::Flat => 0.0,
            DensityKind::HilbertSchmidt => ln_vandermonde_sq(),
            DensityKind::Induced { n } => {
                let power = (n - self.m) as f64;
                let tail = if power == 0.0 { 0.0 } else { power * lambda.iter().map(|&l| l.max(0.0).ln()).sum::<f64>() };
                ln_vandermonde_sq() + tail
            }
            DensityKind::Bures => {
                if lambda.iter().any(|&l| l <= 0.0) {
                    return f64::INFINITY;
                }
                self.ln_bures_regular_part(lambda) - 0.5 * lambda.iter().map(|l| l.ln()).sum::<f64>()
            }
        }
    }

    pub fn ln_bures_regular_part(&self, lambda: &[f64]) -> f64 {
        let mut s = 0.0;
        for j in 0..lambda.len() {
            for k in (j + 1)..lambda.len() {
                let sum = lambda[j] + lambda[k];
                if sum > 0.0 {
                    s += 2.0 * (lambda[j] - lambda[k]).abs().ln() - sum.ln();
                }
            }
        }
        s
    }

    fn check_simplex(&self, lambda: &[f64]) -> Result<()> {
        if lambda.len() != self.m {
            return Err(Error::Shape(format!("expected {} eigenvalues, got {}", self.m, lambda.len())));
        }
        let total: f64 = lambda.iter().sum();
        if lambda.iter().any(|&l| !(l >= -SIMPLEX_TOL)) || (total - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::Domain(format!("{lambda:?} is not on the probability simplex")));
        }
        Ok(())
    }

    /// Density value (normalized when a constant is available).
    pub fn evaluate(&self, lambda: &[f64]) -> Result<Evaluation> {
        self.check_simplex(lambda)?;
        let scale = self.normalization.constant().unwrap_or(1.0);
        Ok(match self.raw_factor(lambda) {
            Some(v) => Evaluation::Finite(scale * v),
            None => Evaluation::Singular,
        })
    }
}

fn finite_or_error(e: Evaluation) -> Result<f64> {
    e.finite().ok_or_else(|| Error::Domain("density is singular at this spectrum".into()))
}

/// Induced-ensemble eigenvalue density at `lambda` (length `m`).
pub fn density_induced(lambda: &[f64], m: usize, n: usize) -> Result<f64> {
    finite_or_error(EigenDensity::new(m, DensityKind::Induced { n })?.evaluate(lambda)?)
}

/// Bures-measure eigenvalue density; boundary spectra give [`Evaluation::Singular`].
pub fn density_bures(lambda: &[f64], m: usize) -> Result<Evaluation> {
    EigenDensity::new(m, DensityKind::Bures)?.evaluate(lambda)
}

/// Hilbert-Schmidt-measure eigenvalue density.
pub fn density_hs(lambda: &[f64], m: usize) -> Result<f64> {
    finite_or_error(EigenDensity::new(m, DensityKind::HilbertSchmidt)?.evaluate(lambda)?)
}

/// Density of `r = l1 - l2 >= 0` for a two-level spectral law.
pub fn radial_density(density: &EigenDensity, r: f64) -> Result<Evaluation> {
    if density.m() != 2 {
        return Err(Error::Shape("radial density needs m = 2".into()));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!("r = {r} outside [0, 1]")));
    }
    // l1 = (1 + r)/2 and its mirror both map to |r| with dl1 = dr/2, so the
    // two factors of one half cancel the factor two from folding
    density.evaluate(&[(1.0 + r) / 2.0, (1.0 - r) / 2.0])
}
