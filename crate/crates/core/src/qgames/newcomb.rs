//! Quantum Newcomb game. The left qubit is Alice (`|0>` takes box two
//! only, `|1>` takes both), the right one is the predictor's placement
//! (`|0>` puts $1,000,000 in box two, `|1>` leaves it empty).

use serde::{Deserialize, Serialize};

use crate::cgame::Bimatrix;
use crate::error::{domain, Result};
use crate::qstate::{gates, OutcomeSelector, StateVector};
use crate::{c64, Complex64};

use super::report::{GameReport, Recorder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NewcombMode {
    /// Alice's flip is a classical coin: a mixture of two unitary branches.
    #[default]
    Mixture,
    /// The operator sum `w(σ_x⊗1) + (1−w)(1⊗1)` applied to amplitudes as
    /// written. Not unitary; kept to reproduce the `(1 − 2w)` coefficient.
    CoherentShorthand,
}

fn basis_label(k: usize) -> String {
    format!("|{}{}>", k >> 1, k & 1)
}

fn dollars(k: usize) -> f64 {
    Bimatrix::newcomb().a(k >> 1, k & 1)
}

/// Plays steps 1–4 for the predictor's choice `sb` (0 or 1) and Alice's
/// flip probability `w`.
pub fn newcomb_play(sb: u8, w: f64, mode: NewcombMode, sel: &mut dyn OutcomeSelector) -> Result<GameReport> {
    if sb > 1 {
        return domain(format!("predictor's choice must be 0 or 1, got {sb}"));
    }
    if !(0.0..=1.0).contains(&w) {
        return domain(format!("flip probability must lie in [0, 1], got {w}"));
    }
    let s = sb as usize;
    let initial = StateVector::basis_state(&[2, 2], &[s, s])?;
    let h = gates::hadamard();
    let rep = GameReport::new("newcomb")
        .param("sb", sb)
        .param("w", w)
        .param("mode", mode);
    match mode {
        NewcombMode::Mixture => mixture(rep, initial, w, sel),
        NewcombMode::CoherentShorthand => {
            let mut rec = Recorder::new();
            rec.prepare("sb", "initial choice", initial);
            rec.apply("sb", "H x 1", &h, &[0])?;
            let hh = h.kron(&gates::identity(2));
            let flip = gates::pauli_x().kron(&gates::identity(2));
            let op = flip
                .matrix()
                .scale(c64(w, 0.0))
                .add(&crate::qstate::CMatrix::identity(4).scale(c64(1.0 - w, 0.0)))?;
            let v = op.mul_vec(rec.state().amps())?;
            let v = hh.matrix().mul_vec(&v)?;
            rec.note(
                "alice",
                format!("applies w(X x 1) + (1-w)(1 x 1) to the amplitudes with w = {w} (not unitary)"),
            );
            rec.note("sb", "H x 1");
            finish_coherent(rep, rec, &v, s, sel)
        }
    }
}

fn mixture(mut rep: GameReport, initial: StateVector, w: f64, sel: &mut dyn OutcomeSelector) -> Result<GameReport> {
    let h = gates::hadamard();
    let mut rec = Recorder::new();
    let mut dist = vec![0.0; 4];
    for (weight, label, u) in [(1.0 - w, "1", gates::identity(2)), (w, "X", gates::pauli_x())] {
        rec.prepare("sb", "initial choice", initial.clone());
        rec.apply("sb", "H x 1", &h, &[0])?;
        rec.apply("alice", &format!("{label} (probability {weight})"), &u, &[0])?;
        rec.apply("sb", "H x 1", &h, &[0])?;
        for (d, p) in dist.iter_mut().zip(rec.state().probabilities()) {
            *d += weight * p;
        }
    }
    let k = sel.select(&dist)?;
    rec.mixture("referee", "open the boxes", vec![1.0 - w, w], dist.clone(), k, basis_label(k));
    rep.transcript = rec.into_steps();
    settle(&mut rep, &dist, k);
    Ok(rep)
}

fn finish_coherent(
    mut rep: GameReport,
    rec: Recorder,
    v: &[Complex64],
    s: usize,
    sel: &mut dyn OutcomeSelector,
) -> Result<GameReport> {
    let norm: f64 = v.iter().map(|a| a.norm_sqr()).sum();
    let coeff = v[if s == 0 { 0 } else { 3 }];
    rep.transcript = rec.into_steps();
    rep.probabilities.insert("coefficient".into(), coeff.re);
    rep.probabilities.insert("norm_squared".into(), norm);
    if norm < 1e-15 {
        rep.outcome = "vanishing amplitude: no outcome".into();
        return Ok(rep);
    }
    let dist: Vec<f64> = v.iter().map(|a| a.norm_sqr() / norm).collect();
    let k = sel.select(&dist)?;
    settle(&mut rep, &dist, k);
    Ok(rep)
}

fn settle(rep: &mut GameReport, dist: &[f64], k: usize) {
    let expected: f64 = dist.iter().enumerate().map(|(i, p)| p * dollars(i)).sum();
    rep.outcome = basis_label(k);
    rep.payoffs.insert("alice".into(), dollars(k));
    // the predictor scores a correct forecast
    rep.payoffs.insert("sb".into(), if k >> 1 == k & 1 { 1.0 } else { 0.0 });
    for (i, p) in dist.iter().enumerate() {
        rep.probabilities.insert(basis_label(i), *p);
    }
    rep.probabilities.insert("expected_alice".into(), expected);
}
