//! Density matrices, Bloch vectors, partial traces, estimation,
//! discrimination and cloning.

mod cloning;
mod estimation;
mod matrix;

pub use cloning::{uqcm_clone, uqcm_output, uqcm_unitary, CloneResult, UQCM_ETA, UQCM_FIDELITY};
pub use estimation::{
    bloch_log_likelihood, channel_from_measurement, discrimination_cost, estimate_state, estimation_game,
    mle_bernoulli, DiscriminationProblem, MleEstimate, MAX_COPIES,
};
pub use matrix::{
    expectation, fidelity, hermitian_eigenvalues, measure_prob, partial_trace, reduced_state, rho_from_ensemble,
    BlochVector, DensityMatrix, DENSITY_TOL, EIGEN_FLOOR,
};
