//! Two-player entangled games: entangle `|00>` with `U`, apply local moves,
//! disentangle with `U†`, read the payoff table off the basis outcomes.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::cgame::Bimatrix;
use crate::error::{domain, Result};
use crate::qstate::{gates, CMatrix, StateVector, UnitaryMatrix};
use crate::c64;

use crate::qstate::{Basis, OutcomeSelector};

use super::report::{GameReport, Move, MoveSet, Recorder};

/// `U = (1^{⊗2} + i σ_x^{⊗2}) / √2`. Only two players are supported.
pub fn ewl_entangler(n: usize) -> Result<UnitaryMatrix> {
    if n != 2 {
        return domain(format!("the entangler is defined for 2 players, got {n}"));
    }
    let id = CMatrix::identity(4);
    let xx = gates::pauli_x().kron(&gates::pauli_x());
    let m = id.add(&xx.matrix().scale(c64(0.0, 1.0)))?.scale(c64(FRAC_1_SQRT_2, 0.0));
    UnitaryMatrix::new(m)
}

/// `U†(uA ⊗ uB)U|00>`.
pub fn ewl_final_state(ua: &UnitaryMatrix, ub: &UnitaryMatrix) -> Result<StateVector> {
    if ua.dim() != 2 || ub.dim() != 2 {
        return domain("EWL moves must be single-qubit unitaries");
    }
    let u = ewl_entangler(2)?;
    StateVector::basis_index(&[2, 2], 0)?
        .apply(&u, &[0, 1])?
        .apply(ua, &[0])?
        .apply(ub, &[1])?
        .apply(&u.adjoint(), &[0, 1])
}

/// Expected payoffs `(π_A, π_B)` and the final state. Basis state `|ij>`
/// pays the `(i, j)` cell of the 2×2 table.
pub fn ewl_play(ua: &UnitaryMatrix, ub: &UnitaryMatrix, payoffs: &Bimatrix) -> Result<(f64, f64, StateVector)> {
    if payoffs.rows() != 2 || payoffs.cols() != 2 {
        return domain("EWL payoff table must be 2x2");
    }
    let psi = ewl_final_state(ua, ub)?;
    let p = psi.probabilities();
    let (mut pa, mut pb) = (0.0, 0.0);
    for (k, pk) in p.iter().enumerate() {
        let (a, b) = payoffs.cell(k >> 1, k & 1);
        pa += pk * a;
        pb += pk * b;
    }
    Ok((pa, pb, psi))
}

/// Evaluates [`ewl_play`] on every pair of moves, giving a classical game
/// whose rows are Alice's moves and columns Bob's.
pub fn ewl_table(moves: &MoveSet, payoffs: &Bimatrix) -> Result<Bimatrix> {
    let n = moves.len();
    let mut a = vec![vec![0.0; n]; n];
    let mut b = vec![vec![0.0; n]; n];
    for (i, ma) in moves.moves().iter().enumerate() {
        for (j, mb) in moves.moves().iter().enumerate() {
            let (x, y, _) = ewl_play(&ma.unitary, &mb.unitary, payoffs)?;
            a[i][j] = x;
            b[i][j] = y;
        }
    }
    Bimatrix::new(moves.labels(), moves.labels(), a, b)
}

/// One sampled EWL round with a full transcript. Payoffs are the sampled
/// cell; `probabilities` carries the basis distribution and the expected
/// payoffs.
pub fn ewl_report(game: &str, alice: &Move, bob: &Move, payoffs: &Bimatrix, sel: &mut dyn OutcomeSelector) -> Result<GameReport> {
    let (ea, eb, _) = ewl_play(&alice.unitary, &bob.unitary, payoffs)?;
    let u = ewl_entangler(2)?;
    let mut rec = Recorder::new();
    rec.prepare("referee", "|00>", StateVector::basis_index(&[2, 2], 0)?);
    rec.apply("referee", "U", &u, &[0, 1])?;
    rec.apply("alice", &alice.label, &alice.unitary, &[0])?;
    rec.apply("bob", &bob.label, &bob.unitary, &[1])?;
    rec.apply("referee", "U^dagger", &u.adjoint(), &[0, 1])?;
    let dist = rec.state().probabilities();
    let m = rec.measure("referee", "payoff basis", &[0, 1], &Basis::computational(&[2, 2])?, sel)?;
    let (i, j) = (m.outcome_index >> 1, m.outcome_index & 1);
    let (pa, pb) = payoffs.cell(i, j);

    let mut rep = GameReport::new(game)
        .param("alice", &alice.label)
        .param("bob", &bob.label)
        .param("table", payoffs);
    rep.transcript = rec.into_steps();
    rep.outcome = format!("{} ({}, {})", m.outcome_label, payoffs.row_moves()[i], payoffs.col_moves()[j]);
    rep.payoffs.insert("alice".into(), pa);
    rep.payoffs.insert("bob".into(), pb);
    for (k, p) in dist.iter().enumerate() {
        rep.probabilities.insert(format!("|{}{}>", k >> 1, k & 1), *p);
    }
    rep.probabilities.insert("expected_alice".into(), ea);
    rep.probabilities.insert("expected_bob".into(), eb);
    Ok(rep)
}

/// Snaps table entries within `tol` of a multiple of 1/`denominator`,
/// removing floating residue before exact comparisons and display.
pub fn snap_table(g: &Bimatrix, denominator: f64, tol: f64) -> Bimatrix {
    let snap = |x: f64| {
        let r = (x * denominator).round() / denominator;
        if (r - x).abs() <= tol { r } else { x }
    };
    let f = |m: &[Vec<f64>]| m.iter().map(|r| r.iter().map(|&x| snap(x)).collect()).collect();
    Bimatrix::new(g.row_moves().to_vec(), g.col_moves().to_vec(), f(g.payoff_a()), f(g.payoff_b()))
        .expect("same shape as a valid game")
}
