//! Closed-form eigenvalue densities, marginals, average entropies and line
//! elements that serve as oracles for the samplers.

mod bloch;
mod densities;
mod entropy;
mod marginals;
mod metric;

pub use bloch::{
    bures_bloch_constant, density_bures_bloch, density_hs_bloch, density_p22_bloch, radial_cdf_bures,
    radial_cdf_uniform_ball, radial_density_bures, radial_density_uniform_ball,
};
pub use densities::{density_bures, density_hs, density_induced, radial_density, DensityKind, EigenDensity, Normalization};
pub use entropy::{
    avg_entropy_induced_2n, avg_entropy_page, page_entropy_exact, page_entropy_sum, two_level_entropy_exact,
    two_level_entropy_sum, Orientation, ALTERNATING_SUM_MAX_N,
};
pub use marginals::{
    beta_density, diagonal_density, diagonal_element_cdf, diagonal_variance_two_level, ln_haar_normalization,
    marginal_x_cdf, marginal_x_density, overlap_cdf, overlap_density, radial_cdf_induced, radial_density_induced,
};
pub use metric::{bures_line_element, hs_line_element, HermitianPerturbation, SpectralPerturbation};

use serde::{Deserialize, Serialize};

/// Result of evaluating a quantity that diverges on part of its domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Evaluation<T = f64> {
    Finite(T),
    Singular,
}

impl<T: Copy> Evaluation<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            Evaluation::Finite(v) => Some(v),
            Evaluation::Singular => None,
        }
    }

    pub fn is_singular(&self) -> bool {
        matches!(self, Evaluation::Singular)
    }
}
