//! Teleportation over a shared `|b3>` pair. Qubit 0 holds `ψ`, qubits 1
//! and 2 are Alice's and Bob's halves of the pair.

use crate::density::{fidelity, reduced_state};
use crate::error::{domain, Result};
use crate::qstate::{bell_basis, gates, partial_projection, Basis, OutcomeSelector, StateVector, UnitaryMatrix};

use super::report::{GameReport, Recorder};

pub(crate) fn bell_measurement_basis() -> Result<Basis> {
    let labels = (0..4).map(|k| format!("b{k}")).collect();
    Basis::custom(labels, bell_basis(2)?)
}

/// Bob's fix-up for Bell outcome `k`: `iσ_y`, `−σ_z`, `σ_x`, `−1`.
pub fn teleport_correction(k: usize) -> Result<(String, UnitaryMatrix)> {
    Ok(match k {
        0 => ("i sigma_y".into(), gates::pauli_y().phase(std::f64::consts::FRAC_PI_2)),
        1 => ("-sigma_z".into(), gates::pauli_z().neg()),
        2 => ("sigma_x".into(), gates::pauli_x()),
        3 => ("-1".into(), gates::identity(2).neg()),
        _ => return domain(format!("Bell outcome {k} out of range")),
    })
}

fn check_qubit(psi: &StateVector) -> Result<()> {
    if psi.dims() != [2] {
        return domain(format!("expected one qubit, got dims {:?}", psi.dims()));
    }
    Ok(())
}

/// Unnormalized `<b_k|(ψ ⊗ b3)>` on Bob's qubit, for `k = 0..4`.
pub fn teleport_residuals(psi: &StateVector) -> Result<Vec<Vec<crate::Complex64>>> {
    check_qubit(psi)?;
    let full = psi.tensor(&bell_basis(2)?[3]);
    bell_basis(2)?.iter().map(|b| partial_projection(&full, &[0, 1], b)).collect()
}

/// Teleports `psi` to Bob.
pub fn teleport(psi: &StateVector, sel: &mut dyn OutcomeSelector) -> Result<GameReport> {
    check_qubit(psi)?;
    let bell = bell_measurement_basis()?;
    let mut rec = Recorder::new();
    rec.prepare("alice", "psi x b3", psi.tensor(&bell_basis(2)?[3]));
    let m = rec.measure("alice", "Bell measurement", &[0, 1], &bell, sel)?;
    let (label, fix) = teleport_correction(m.outcome_index)?;
    rec.apply("bob", &label, &fix, &[2])?;

    let out = rec.state().clone();
    let bob = StateVector::normalized(vec![2], partial_projection(&out, &[0, 1], &bell.vector(m.outcome_index)?)?)?;
    let f = fidelity(&reduced_state(&out, &[2])?, psi)?;
    let overlap = psi.inner(&bob)?.norm();

    let mut rep = GameReport::new("teleport")
        .param("psi", psi)
        .param("correction", &label)
        .param("recovered", &bob);
    rep.transcript = rec.into_steps();
    rep.outcome = m.outcome_label.clone();
    rep.probabilities.insert("fidelity".into(), f);
    rep.probabilities.insert("overlap".into(), overlap);
    for (k, p) in m.distribution.iter().enumerate() {
        rep.probabilities.insert(format!("b{k}"), *p);
    }
    Ok(rep)
}

/// `a|0> + b|1>` test helper shared with secret sharing.
#[cfg(test)]
pub(crate) fn random_qubit(rng: &mut crate::qstate::RandomSource) -> StateVector {
    let mut g = || rng.uniform() * 2.0 - 1.0;
    let amps = vec![crate::c64(g(), g()), crate::c64(g(), g())];
    StateVector::normalized(vec![2], amps).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::qstate::{ForcedOutcomes, RandomSource};

    #[test]
    fn residual_for_b0() {
        let (a, b) = (c64(0.6, 0.0), c64(0.0, 0.8));
        let r = teleport_residuals(&StateVector::qubit(a, b).unwrap()).unwrap();
        assert!((r[0][0] - (-b / 2.0)).norm() < 1e-12);
        assert!((r[0][1] - a / 2.0).norm() < 1e-12);
        for v in &r {
            let p: f64 = v.iter().map(|x| x.norm_sqr()).sum();
            assert!((p - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_arrives_as_zero() {
        let zero = StateVector::basis_index(&[2], 0).unwrap();
        for k in 0..4 {
            let rep = teleport(&zero, &mut ForcedOutcomes::new([k])).unwrap();
            let got: StateVector = serde_json::from_value(rep.params["recovered"].clone()).unwrap();
            assert!(got.equal_up_to_phase(&zero));
        }
    }

    #[test]
    fn every_branch_recovers() {
        let mut rng = RandomSource::new(42);
        for _ in 0..100 {
            let psi = random_qubit(&mut rng);
            for k in 0..4 {
                let rep = teleport(&psi, &mut ForcedOutcomes::new([k])).unwrap();
                assert_eq!(rep.outcome, format!("b{k}"));
                assert!((rep.probability("overlap").unwrap() - 1.0).abs() < 1e-9);
                assert!((rep.probability("fidelity").unwrap() - 1.0).abs() < 1e-9);
                assert!((rep.probability(&format!("b{k}")).unwrap() - 0.25).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn transcript_replays() {
        let psi = random_qubit(&mut RandomSource::new(1));
        let rep = teleport(&psi, &mut RandomSource::new(8)).unwrap();
        assert_eq!(rep.replay().unwrap(), 3);
        assert!(teleport(&StateVector::basis_index(&[3], 0).unwrap(), &mut RandomSource::new(0)).is_err());
    }
}
