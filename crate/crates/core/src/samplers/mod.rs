//! Random generation for the pure-state, induced and metric-induced
//! ensembles.
//!
//! Every sampler takes `&mut impl Rng`; reproducible runs pass an
//! [`RngStream`], one per block of work (see [`crate::mc`]).

mod ensemble;
mod haar;
mod qubit;
mod rng;
mod simplex;

pub use ensemble::{EnsembleSample, EnsembleSampler, EnsembleSpec};
pub use haar::{haar_pure_state, haar_unitary, lift_to_density, sample_induced};
pub use qubit::{bures_radial_quantile, sample_bures_qubit, sample_hs_qubit};
pub use rng::{RngStream, GENERATOR_NAME};
pub use simplex::{sample_simplex_density, Proposal, SimplexSampler, MAX_SIMPLEX_DIM, MIN_ACCEPTANCE_RATE};
