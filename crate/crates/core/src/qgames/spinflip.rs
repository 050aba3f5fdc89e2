//! The spin flip game: Bob, Alice, Bob act on one spin, then it is measured.
//! Alice gets +1 for `d` (`|1>`) and −1 for `u` (`|0>`).

use crate::cgame::MixedStrategy;
use crate::error::{domain, Result};
use crate::qstate::{gates, Basis, OutcomeSelector, StateVector};

use super::report::{GameReport, Move, Recorder};

fn check_qubit_move(m: &Move) -> Result<()> {
    if m.unitary.dim() != 2 {
        return domain(format!("move '{}' is not a single-qubit unitary", m.label));
    }
    Ok(())
}

/// Plays from the honest initial state `u`.
pub fn spin_flip_play(bob1: &Move, alice: &Move, bob2: &Move, sel: &mut dyn OutcomeSelector) -> Result<GameReport> {
    spin_flip_play_from(&StateVector::basis_index(&[2], 0)?, bob1, alice, bob2, sel)
}

/// Plays from an arbitrary prepared spin (the cheating variants).
pub fn spin_flip_play_from(
    initial: &StateVector,
    bob1: &Move,
    alice: &Move,
    bob2: &Move,
    sel: &mut dyn OutcomeSelector,
) -> Result<GameReport> {
    if initial.dims() != [2] {
        return domain("the spin flip game is played on one qubit");
    }
    for m in [bob1, alice, bob2] {
        check_qubit_move(m)?;
    }
    let mut rec = Recorder::new();
    rec.prepare("alice", "initial spin", initial.clone());
    rec.apply("bob", &bob1.label, &bob1.unitary, &[0])?;
    rec.apply("alice", &alice.label, &alice.unitary, &[0])?;
    rec.apply("bob", &bob2.label, &bob2.unitary, &[0])?;
    let p = rec.state().probabilities();
    let m = rec.measure("referee", "spin", &[0], &Basis::computational(&[2])?, sel)?;
    let alice_pay = if m.outcome_index == 1 { 1.0 } else { -1.0 };

    let mut rep = GameReport::new("spinflip")
        .param("initial", initial.ket_string())
        .param("moves", [&bob1.label, &alice.label, &bob2.label]);
    rep.transcript = rec.into_steps();
    rep.outcome = if m.outcome_index == 1 { "d" } else { "u" }.into();
    rep.payoffs.insert("alice".into(), alice_pay);
    rep.payoffs.insert("bob".into(), -alice_pay);
    rep.probabilities.insert("u".into(), p[0]);
    rep.probabilities.insert("d".into(), p[1]);
    rep.probabilities.insert("expected_alice".into(), p[1] - p[0]);
    Ok(rep)
}

/// Alice's expected payoff when she mixes `{1, σ_x}` with `alice_mix` and
/// Bob plays the fixed pair `bob`, computed exactly from amplitudes.
pub fn spin_flip_expected(alice_mix: &MixedStrategy, bob: (&Move, &Move), initial: &StateVector) -> Result<f64> {
    if initial.dims() != [2] {
        return domain("the spin flip game is played on one qubit");
    }
    if alice_mix.len() != 2 {
        return domain("Alice mixes over exactly two moves {1, σ_x}");
    }
    check_qubit_move(bob.0)?;
    check_qubit_move(bob.1)?;
    let alice_moves = [gates::identity(2), gates::pauli_x()];
    let mut total = 0.0;
    for (w, a) in alice_mix.probs().iter().zip(&alice_moves) {
        let s = initial.apply(&bob.0.unitary, &[0])?.apply(a, &[0])?.apply(&bob.1.unitary, &[0])?;
        let p = s.probabilities();
        total += w * (p[1] - p[0]);
    }
    Ok(total)
}
