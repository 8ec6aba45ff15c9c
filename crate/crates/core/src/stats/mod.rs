//! Empirical summaries and goodness-of-fit tests against the analytic laws.

mod gof;
mod histogram;
mod summary;

pub use gof::{
    chi_square_1d, chi_square_probabilities, chi_square_simplex, kolmogorov_sf, ks_statistic, ks_test, ks_test_with_threshold,
    ks_two_sample, GofReport, GofTest, CHI_SQUARE_ALPHA, KS_COEFFICIENT, KS_MIN_SAMPLES, MIN_EXPECTED_COUNT,
};
pub use histogram::Histogram;
pub use summary::{mean_with_stderr, neumaier_sum};
