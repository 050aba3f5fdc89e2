//! Dense qudit statevectors, unitaries, gates and projective measurement.

pub mod gates;
mod limits;
mod matrix;
mod measure;
mod state;

pub use gates::{apply_qft, apply_walsh_all, bell_basis, qft, standard_gate, walsh, Gate};
pub use limits::Limits;
pub use matrix::{CMatrix, UnitaryMatrix, UNITARY_TOL};
pub use measure::{
    measure, measure_subsystems, outcome_probabilities, partial_projection, project, Basis, ForcedOutcomes,
    ForcedThenRandom, MeasurementRecord, OutcomeSelector, RandomSource, BASIS_TOL,
};
pub use state::{
    apply_matrix, mixed_radix_digits, mixed_radix_index, StateJson, StateVector, NORM_TOL, PHASE_EQ_TOL,
};

/// `a ⊗ b` for states.
pub fn tensor(a: &StateVector, b: &StateVector) -> StateVector {
    a.tensor(b)
}

/// `<a|b>`, conjugating `a`.
pub fn inner(a: &StateVector, b: &StateVector) -> crate::Result<crate::Complex64> {
    a.inner(b)
}

/// Applies `u` to `targets` of `state`.
pub fn apply(state: &StateVector, u: &UnitaryMatrix, targets: &[usize]) -> crate::Result<StateVector> {
    state.apply(u, targets)
}

/// Computational basis state, leftmost digit most significant.
pub fn basis_state(dims: &[usize], digits: &[usize]) -> crate::Result<StateVector> {
    StateVector::basis_state(dims, digits)
}
