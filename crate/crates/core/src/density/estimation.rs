//! Maximum-likelihood estimation from z-axis counts, Bayesian state
//! discrimination, and the N-copy estimation game.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::qgames::{GameReport, Recorder};
use crate::qstate::{Basis, CMatrix, RandomSource, StateVector};
use crate::c64;

use super::matrix::{measure_prob, DensityMatrix};

/// Most copies the estimation game will measure.
pub const MAX_COPIES: u64 = 1_000_000;
/// Copies recorded step by step in the transcript; later ones are summarized.
const DETAIL_COPIES: u64 = 8;

/// Maximum-likelihood estimate from `n_a` outcomes `|0>` and `n_b`
/// outcomes `|1>`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MleEstimate {
    pub n_a: u64,
    pub n_b: u64,
    /// Estimated probability of `|1>`.
    pub p_hat: f64,
    /// Estimated z component of the Bloch vector.
    pub r_z: f64,
    /// `diag(n_a/n, n_b/n)`
    pub rho: DensityMatrix,
}

pub fn mle_bernoulli(n_a: u64, n_b: u64) -> Result<MleEstimate> {
    let n = n_a + n_b;
    if n == 0 {
        return domain("no measurement data");
    }
    let (fa, fb) = (n_a as f64 / n as f64, n_b as f64 / n as f64);
    Ok(MleEstimate {
        n_a,
        n_b,
        p_hat: fb,
        r_z: fa - fb,
        rho: DensityMatrix::new(CMatrix::diagonal(&[c64(fa, 0.0), c64(fb, 0.0)]))?,
    })
}

/// Per-sample log-likelihood of Bloch component `r_z` given the counts,
/// with `0 ln 0 = 0`.
pub fn bloch_log_likelihood(n_a: u64, n_b: u64, r_z: f64) -> f64 {
    let n = (n_a + n_b) as f64;
    let term = |k: u64, p: f64| if k == 0 { 0.0 } else { k as f64 / n * p.ln() };
    term(n_a, (1.0 + r_z) / 2.0) + term(n_b, (1.0 - r_z) / 2.0)
}

/// Bob's discrimination task: priors `η_k` over states `ρ_k`, cost
/// `costs[m][k]` of answering `m` when `k` was sent, and channel
/// `channel[m][k] = h(a_m | ρ_k)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscriminationProblem {
    pub priors: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub costs: Vec<Vec<f64>>,
    pub channel: Vec<Vec<f64>>,
}

const PROB_TOL: f64 = 1e-9;

fn square(name: &str, m: &[Vec<f64>], k: usize) -> Result<()> {
    if m.len() != k || m.iter().any(|r| r.len() != k) {
        return domain(format!("{name} must be {k}x{k}"));
    }
    if m.iter().flatten().any(|x| !x.is_finite()) {
        return domain(format!("{name} has non-finite entries"));
    }
    Ok(())
}

impl DiscriminationProblem {
    pub fn new(priors: Vec<f64>, states: Vec<DensityMatrix>, costs: Vec<Vec<f64>>, channel: Vec<Vec<f64>>) -> Result<Self> {
        let p = Self {
            priors,
            states,
            costs,
            channel,
        };
        p.validate()?;
        Ok(p)
    }

    /// Re-checks the invariants, e.g. after deserializing.
    pub fn validate(&self) -> Result<()> {
        let k = self.priors.len();
        if k == 0 {
            return domain("no candidate states");
        }
        if self.priors.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return domain("priors must lie in [0, 1]");
        }
        let total: f64 = self.priors.iter().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return domain(format!("priors sum to {total}, not 1"));
        }
        if !self.states.is_empty() {
            if self.states.len() != k {
                return domain("one state per prior required");
            }
            let d = self.states[0].dim();
            if self.states.iter().any(|s| s.dim() != d) {
                return domain("candidate states differ in dimension");
            }
        }
        square("cost matrix", &self.costs, k)?;
        square("channel", &self.channel, k)?;
        if self.channel.iter().flatten().any(|&h| !(-PROB_TOL..=1.0 + PROB_TOL).contains(&h)) {
            return domain("channel entries must be probabilities");
        }
        for col in 0..k {
            let s: f64 = self.channel.iter().map(|r| r[col]).sum();
            if (s - 1.0).abs() > PROB_TOL {
                return domain(format!("channel column {col} sums to {s}, not 1"));
            }
        }
        Ok(())
    }
}

/// `h(a_m | ρ_k) = <φ_m|ρ_k|φ_m>` for a projective measurement onto
/// `basis`.
pub fn channel_from_measurement(states: &[DensityMatrix], basis: &[StateVector]) -> Result<Vec<Vec<f64>>> {
    let labels = (0..basis.len()).map(|k| k.to_string()).collect();
    // orthonormality and completeness
    Basis::custom(labels, basis.to_vec())?;
    basis
        .iter()
        .map(|phi| states.iter().map(|rho| measure_prob(rho, phi)).collect())
        .collect()
}

/// Bayes cost `c_B = Σ η_k c_mk h(a_m|ρ_k)` and error probability
/// `p_E = 1 − Σ η_k h(a_k|ρ_k)`.
pub fn discrimination_cost(p: &DiscriminationProblem) -> Result<(f64, f64)> {
    p.validate()?;
    let k = p.priors.len();
    let mut cb = 0.0;
    let mut hit = 0.0;
    for m in 0..k {
        for j in 0..k {
            cb += p.priors[j] * p.costs[m][j] * p.channel[m][j];
        }
        hit += p.priors[m] * p.channel[m][m];
    }
    Ok((cb, 1.0 - hit))
}

/// Bob's guess `√(n_a/n)|0> + √(n_b/n)|1>` from the counts.
pub fn estimate_state(est: &MleEstimate) -> StateVector {
    let n = (est.n_a + est.n_b) as f64;
    StateVector::qubit(c64((est.n_a as f64 / n).sqrt(), 0.0), c64((est.n_b as f64 / n).sqrt(), 0.0))
        .expect("unit norm by construction")
}

/// Alice sends `n_copies` of `psi`; Bob measures each in the z basis,
/// forms the maximum-likelihood estimate and answers with
/// [`estimate_state`]. He wins when `|<φ|ψ>|² ≥ threshold`.
pub fn estimation_game(psi: &StateVector, n_copies: u64, threshold: f64, rng: &mut RandomSource) -> Result<GameReport> {
    if psi.dims() != [2] {
        return domain(format!("the estimation game uses one qubit, got dims {:?}", psi.dims()));
    }
    if !(1..=MAX_COPIES).contains(&n_copies) {
        return domain(format!("copies must be between 1 and {MAX_COPIES}, got {n_copies}"));
    }
    if !(0.0..=1.0).contains(&threshold) {
        return domain(format!("threshold must lie in [0, 1], got {threshold}"));
    }
    let z = Basis::computational(&[2])?;
    let p1 = psi.amp(1).norm_sqr();
    let mut rec = Recorder::new();
    let mut n_b = 0u64;
    for copy in 0..n_copies.min(DETAIL_COPIES) {
        rec.prepare("alice", &format!("copy {}", copy + 1), psi.clone());
        let m = rec.measure("bob", "z", &[0], &z, rng)?;
        n_b += m.outcome_index as u64;
    }
    if n_copies > DETAIL_COPIES {
        let rest = n_copies - DETAIL_COPIES;
        let mut extra = 0u64;
        for _ in 0..rest {
            if rng.uniform() < p1 {
                extra += 1;
            }
        }
        n_b += extra;
        rec.note("bob", format!("measures {rest} further copies in z: {} up, {extra} down", rest - extra));
    }
    let n_a = n_copies - n_b;
    let est = mle_bernoulli(n_a, n_b)?;
    let phi = estimate_state(&est);
    let f = psi.inner(&phi)?.norm_sqr();
    let win = f >= threshold;

    let mut rep = GameReport::new("estimate")
        .param("psi", psi)
        .param("copies", n_copies)
        .param("threshold", threshold)
        .param("n_a", n_a)
        .param("n_b", n_b)
        .param("p_hat", est.p_hat)
        .param("r_z", est.r_z)
        .param("estimate", &phi);
    rep.transcript = rec.into_steps();
    rep.outcome = if win { "Bob's estimate passes".into() } else { "Bob's estimate fails".into() };
    rep.payoffs.insert("bob".into(), if win { 1.0 } else { -1.0 });
    rep.payoffs.insert("alice".into(), if win { -1.0 } else { 1.0 });
    rep.probabilities.insert("fidelity".into(), f);
    Ok(rep)
}
