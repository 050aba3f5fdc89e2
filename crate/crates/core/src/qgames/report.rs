//! Game reports and replayable transcripts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{domain, Result};
use crate::qstate::{
    outcome_probabilities, project, Basis, MeasurementRecord, OutcomeSelector, StateVector, UnitaryMatrix,
};

/// Operators up to this dimension are stored verbatim in transcripts.
pub const OPERATOR_SNAPSHOT_DIM: usize = 64;

/// States up to this many amplitudes are stored verbatim in transcripts;
/// larger ones keep only their digest.
pub const STATE_SNAPSHOT_LEN: usize = 1 << 12;

/// Replay tolerance for distributions and snapshots.
pub const REPLAY_TOL: f64 = 1e-9;

/// Short stable fingerprint of a state: SHA-256 over the dims and the
/// amplitudes rounded to 1e-9, first 16 hex digits.
pub fn state_digest(state: &StateVector) -> String {
    let mut h = Sha256::new();
    for &d in state.dims() {
        h.update((d as u64).to_le_bytes());
    }
    let q = |x: f64| {
        let v = (x * 1e9).round() as i64;
        // fold −0 into 0
        if v == 0 { 0i64 } else { v }
    };
    for a in state.amps() {
        h.update(q(a.re).to_le_bytes());
        h.update(q(a.im).to_le_bytes());
    }
    h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// One transcript entry.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Step {
    /// Starts a branch from a fresh register.
    Prepare {
        actor: String,
        label: String,
        state: StateVector,
        digest: String,
    },
    Apply {
        actor: String,
        label: String,
        targets: Vec<usize>,
        operator: Option<UnitaryMatrix>,
        state: Option<StateVector>,
        digest: String,
    },
    Measure {
        actor: String,
        label: String,
        targets: Vec<usize>,
        /// `None` for the computational basis.
        basis: Option<Vec<StateVector>>,
        outcome: usize,
        outcome_label: String,
        distribution: Vec<f64>,
        state: Option<StateVector>,
        digest: String,
    },
    /// Classical mixture of the final states of every branch so far.
    Mixture {
        actor: String,
        label: String,
        weights: Vec<f64>,
        distribution: Vec<f64>,
        outcome: usize,
        outcome_label: String,
    },
    Note {
        actor: String,
        text: String,
    },
}

/// Result of any game in this crate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameReport {
    pub game: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub transcript: Vec<Step>,
    pub outcome: String,
    pub payoffs: BTreeMap<String, f64>,
    pub probabilities: BTreeMap<String, f64>,
}

impl GameReport {
    pub fn new(game: &str) -> Self {
        Self {
            game: game.to_string(),
            params: BTreeMap::new(),
            transcript: Vec::new(),
            outcome: String::new(),
            payoffs: BTreeMap::new(),
            probabilities: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.params.insert(key.to_string(), v);
        self
    }

    pub fn payoff(&self, player: &str) -> Option<f64> {
        self.payoffs.get(player).copied()
    }

    pub fn probability(&self, key: &str) -> Option<f64> {
        self.probabilities.get(key).copied()
    }

    /// Re-executes the transcript through the simulator and checks every
    /// recorded distribution and snapshot to [`REPLAY_TOL`]. Returns the
    /// number of steps checked.
    pub fn replay(&self) -> Result<usize> {
        replay_steps(&self.transcript)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

fn close(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= REPLAY_TOL)
}

fn fail<T>(i: usize, why: impl std::fmt::Display) -> Result<T> {
    domain(format!("transcript step {i}: {why}"))
}

pub fn replay_steps(steps: &[Step]) -> Result<usize> {
    let mut finished: Vec<StateVector> = Vec::new();
    let mut current: Option<StateVector> = None;
    let mut checked = 0;
    for (i, step) in steps.iter().enumerate() {
        match step {
            Step::Prepare { state, digest, .. } => {
                if &state_digest(state) != digest {
                    return fail(i, "digest mismatch");
                }
                if let Some(prev) = current.take() {
                    finished.push(prev);
                }
                current = Some(state.clone());
            }
            Step::Apply {
                targets,
                operator,
                state,
                digest,
                ..
            } => {
                let Some(cur) = current.as_ref() else {
                    return fail(i, "apply before prepare");
                };
                let next = match (operator, state) {
                    (Some(u), recorded) => {
                        let next = cur.apply(u, targets)?;
                        if let Some(r) = recorded {
                            if !next.approx_eq(r, REPLAY_TOL) {
                                return fail(i, "replayed state differs from snapshot");
                            }
                        }
                        next
                    }
                    (None, Some(r)) => {
                        // recomputed states may straddle a rounding boundary,
                        // so only stored ones are held to their digest
                        if &state_digest(r) != digest {
                            return fail(i, "digest mismatch");
                        }
                        r.clone()
                    }
                    (None, None) => return fail(i, "neither operator nor state recorded"),
                };
                current = Some(next);
            }
            Step::Measure {
                targets,
                basis,
                outcome,
                distribution,
                state,
                ..
            } => {
                let Some(cur) = current.as_ref() else {
                    return fail(i, "measure before prepare");
                };
                let b = match basis {
                    None => {
                        let dims: Vec<usize> = targets.iter().map(|&t| cur.dims()[t]).collect();
                        Basis::computational(&dims)?
                    }
                    Some(v) => Basis::from_vectors(v.clone())?,
                };
                let dist = outcome_probabilities(cur, targets, &b)?;
                if !close(&dist, distribution) {
                    return fail(i, "outcome distribution differs");
                }
                let rec = project(cur, targets, &b, *outcome)?;
                if let Some(r) = state {
                    if !rec.post_state.approx_eq(r, REPLAY_TOL) {
                        return fail(i, "post-measurement state differs");
                    }
                }
                current = Some(rec.post_state);
            }
            Step::Mixture {
                weights, distribution, ..
            } => {
                let mut branches = finished.clone();
                branches.extend(current.iter().cloned());
                if branches.len() != weights.len() {
                    return fail(i, format!("{} weights for {} branches", weights.len(), branches.len()));
                }
                let len = branches[0].len();
                let mut dist = vec![0.0; len];
                for (b, &w) in branches.iter().zip(weights) {
                    if b.len() != len {
                        return fail(i, "branches have different sizes");
                    }
                    for (d, p) in dist.iter_mut().zip(b.probabilities()) {
                        *d += w * p;
                    }
                }
                if !close(&dist, distribution) {
                    return fail(i, "mixture distribution differs");
                }
            }
            Step::Note { .. } => continue,
        }
        checked += 1;
    }
    Ok(checked)
}

/// Runs operations on a register and records them.
#[derive(Debug, Clone)]
pub struct Recorder {
    steps: Vec<Step>,
    state: Option<StateVector>,
}

fn snapshot(s: &StateVector) -> Option<StateVector> {
    (s.len() <= STATE_SNAPSHOT_LEN).then(|| s.clone())
}

impl Default for Recorder {
    fn default() -> Self {
        Self::new()
    }
}

impl Recorder {
    pub fn new() -> Self {
        Self {
            steps: Vec::new(),
            state: None,
        }
    }

    /// Current register. Panics before the first `prepare`.
    pub fn state(&self) -> &StateVector {
        self.state.as_ref().expect("recorder used before prepare")
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn prepare(&mut self, actor: &str, label: &str, state: StateVector) {
        self.steps.push(Step::Prepare {
            actor: actor.into(),
            label: label.into(),
            digest: state_digest(&state),
            state: state.clone(),
        });
        self.state = Some(state);
    }

    pub fn apply(&mut self, actor: &str, label: &str, u: &UnitaryMatrix, targets: &[usize]) -> Result<()> {
        let next = self.state().apply(u, targets)?;
        self.steps.push(Step::Apply {
            actor: actor.into(),
            label: label.into(),
            targets: targets.to_vec(),
            operator: (u.dim() <= OPERATOR_SNAPSHOT_DIM).then(|| u.clone()),
            state: snapshot(&next),
            digest: state_digest(&next),
        });
        self.state = Some(next);
        Ok(())
    }

    /// Records a transformation computed outside the dense simulator
    /// (structured oracles, FFTs). Only the resulting state is stored.
    pub fn transform(&mut self, actor: &str, label: &str, targets: &[usize], next: StateVector) {
        self.steps.push(Step::Apply {
            actor: actor.into(),
            label: label.into(),
            targets: targets.to_vec(),
            operator: None,
            digest: state_digest(&next),
            state: Some(next.clone()),
        });
        self.state = Some(next);
    }

    pub fn measure(
        &mut self,
        actor: &str,
        label: &str,
        targets: &[usize],
        basis: &Basis,
        sel: &mut dyn OutcomeSelector,
    ) -> Result<MeasurementRecord> {
        let rec = crate::qstate::measure_subsystems(self.state(), targets, basis, sel)?;
        let stored_basis = match basis {
            Basis::Computational { .. } => None,
            Basis::Custom { .. } => Some((0..basis.len()).map(|k| basis.vector(k)).collect::<Result<Vec<_>>>()?),
        };
        self.steps.push(Step::Measure {
            actor: actor.into(),
            label: label.into(),
            targets: targets.to_vec(),
            basis: stored_basis,
            outcome: rec.outcome_index,
            outcome_label: rec.outcome_label.clone(),
            distribution: rec.distribution.clone(),
            state: snapshot(&rec.post_state),
            digest: state_digest(&rec.post_state),
        });
        self.state = Some(rec.post_state.clone());
        Ok(rec)
    }

    pub fn mixture(&mut self, actor: &str, label: &str, weights: Vec<f64>, distribution: Vec<f64>, outcome: usize, outcome_label: String) {
        self.steps.push(Step::Mixture {
            actor: actor.into(),
            label: label.into(),
            weights,
            distribution,
            outcome,
            outcome_label,
        });
    }

    pub fn note(&mut self, actor: &str, text: impl Into<String>) {
        self.steps.push(Step::Note {
            actor: actor.into(),
            text: text.into(),
        });
    }

    pub fn into_steps(self) -> Vec<Step> {
        self.steps
    }
}

/// A labeled pure quantum strategy.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Move {
    pub label: String,
    pub unitary: UnitaryMatrix,
}

/// Ordered list of labeled unitary moves available to a player.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MoveSet {
    moves: Vec<Move>,
}

impl MoveSet {
    pub fn new(moves: Vec<Move>) -> Result<Self> {
        if moves.is_empty() {
            return domain("a move set needs at least one move");
        }
        Ok(Self { moves })
    }

    /// Named gates, e.g. `["I", "X", "H", "Z"]`. Labels are kept as given
    /// after trimming and upper-casing single letters.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let moves = names
            .iter()
            .map(|n| {
                let raw = n.as_ref().trim();
                let label = if raw.len() == 1 { raw.to_ascii_uppercase() } else { raw.to_string() };
                Ok(Move {
                    label,
                    unitary: crate::qstate::standard_gate(raw, None)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(moves)
    }

    /// `{1, σ_x}`
    pub fn classical() -> Self {
        Self::from_names(&["I", "X"]).expect("static names")
    }

    /// `{1, σ_x, H, σ_z}`
    pub fn quantum() -> Self {
        Self::from_names(&["I", "X", "H", "Z"]).expect("static names")
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn labels(&self) -> Vec<String> {
        self.moves.iter().map(|m| m.label.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<&Move> {
        self.moves.iter().find(|m| m.label == label)
    }
}
