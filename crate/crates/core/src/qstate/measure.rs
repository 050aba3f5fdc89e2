use std::collections::VecDeque;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::state::{check_dims, mixed_radix_digits, mixed_radix_index, validate_targets, StateVector};
use crate::error::{domain, Result};

/// Orthonormality tolerance for user-supplied measurement bases.
pub const BASIS_TOL: f64 = 1e-8;

/// Seeded deterministic generator (ChaCha8). The same seed always yields
/// the same sequence, on every platform.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform integer in `lo..hi`.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        self.rng.random_range(lo..hi)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.random::<bool>()
    }

    /// Draws an index with the given weights (need not be normalized).
    pub fn sample(&mut self, weights: &[f64]) -> usize {
        let total: f64 = weights.iter().sum();
        let mut x = self.uniform() * total;
        let mut last = 0;
        for (i, &w) in weights.iter().enumerate() {
            if w <= 0.0 {
                continue;
            }
            last = i;
            if x < w {
                return i;
            }
            x -= w;
        }
        // rounding left a sliver past the end
        last
    }
}

impl Default for RandomSource {
    fn default() -> Self {
        Self::new(0)
    }
}

/// Picks a measurement outcome given its distribution. Implemented by the
/// seeded rng and by a forced queue used to walk every branch in tests.
pub trait OutcomeSelector {
    fn select(&mut self, probabilities: &[f64]) -> Result<usize>;
}

impl OutcomeSelector for RandomSource {
    fn select(&mut self, probabilities: &[f64]) -> Result<usize> {
        Ok(self.sample(probabilities))
    }
}

/// Replays a fixed outcome sequence. Running dry, or forcing an outcome of
/// (numerically) zero probability, is a domain error.
#[derive(Debug, Clone, Default)]
pub struct ForcedOutcomes {
    queue: VecDeque<usize>,
}

impl ForcedOutcomes {
    pub fn new(outcomes: impl IntoIterator<Item = usize>) -> Self {
        Self {
            queue: outcomes.into_iter().collect(),
        }
    }

    pub fn remaining(&self) -> usize {
        self.queue.len()
    }
}

impl OutcomeSelector for ForcedOutcomes {
    fn select(&mut self, probabilities: &[f64]) -> Result<usize> {
        let Some(k) = self.queue.pop_front() else {
            return domain("forced outcome sequence exhausted");
        };
        match probabilities.get(k) {
            None => domain(format!("forced outcome {k} out of range")),
            Some(&p) if p < 1e-12 => domain(format!("forced outcome {k} has probability {p:.3e}")),
            Some(_) => Ok(k),
        }
    }
}

/// Forced outcomes first, then the rng once the queue is empty.
#[derive(Debug, Clone)]
pub struct ForcedThenRandom {
    pub forced: ForcedOutcomes,
    pub rng: RandomSource,
}

impl OutcomeSelector for ForcedThenRandom {
    fn select(&mut self, probabilities: &[f64]) -> Result<usize> {
        if self.forced.remaining() > 0 {
            self.forced.select(probabilities)
        } else {
            self.rng.select(probabilities)
        }
    }
}

/// An orthonormal basis of a (sub)register.
#[derive(Debug, Clone)]
pub enum Basis {
    /// Standard basis; never materialized.
    Computational { dims: Vec<usize> },
    Custom {
        labels: Vec<String>,
        vectors: Vec<StateVector>,
    },
}

impl Basis {
    pub fn computational(dims: &[usize]) -> Result<Self> {
        check_dims(dims)?;
        Ok(Basis::Computational { dims: dims.to_vec() })
    }

    /// Checks that `vectors` form a complete orthonormal set to [`BASIS_TOL`].
    pub fn custom(labels: Vec<String>, vectors: Vec<StateVector>) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return domain("empty measurement basis");
        };
        if labels.len() != vectors.len() {
            return domain("one label per basis vector required");
        }
        let dims = first.dims().to_vec();
        if vectors.len() != first.len() {
            return domain(format!(
                "{} vectors cannot span a space of dimension {}",
                vectors.len(),
                first.len()
            ));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.dims() != dims.as_slice() {
                return domain("basis vectors live on different registers");
            }
            for (j, w) in vectors.iter().enumerate().skip(i) {
                let ip = v.inner(w)?;
                let target = if i == j { 1.0 } else { 0.0 };
                if (ip - Complex64::new(target, 0.0)).norm() > BASIS_TOL {
                    return domain(format!("basis vectors {i} and {j} are not orthonormal (<{i}|{j}> = {ip})"));
                }
            }
        }
        Ok(Basis::Custom { labels, vectors })
    }

    /// Custom basis labelled by each vector's ket digest.
    pub fn from_vectors(vectors: Vec<StateVector>) -> Result<Self> {
        let labels = vectors.iter().map(|v| v.ket_string()).collect();
        Self::custom(labels, vectors)
    }

    pub fn dims(&self) -> &[usize] {
        match self {
            Basis::Computational { dims } => dims,
            Basis::Custom { vectors, .. } => vectors[0].dims(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Basis::Computational { dims } => dims.iter().product(),
            Basis::Custom { vectors, .. } => vectors.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn label(&self, k: usize) -> String {
        match self {
            Basis::Computational { dims } => {
                let digits: String = mixed_radix_digits(dims, k).iter().map(|d| d.to_string()).collect();
                format!("|{digits}>")
            }
            Basis::Custom { labels, .. } => labels[k].clone(),
        }
    }

    pub fn vector(&self, k: usize) -> Result<StateVector> {
        match self {
            Basis::Computational { dims } => StateVector::basis_index(dims, k),
            Basis::Custom { vectors, .. } => Ok(vectors[k].clone()),
        }
    }
}

/// Result of one projective measurement.
#[derive(Debug, Clone, Serialize)]
pub struct MeasurementRecord {
    pub outcome_index: usize,
    pub outcome_label: String,
    pub probability: f64,
    /// Full register after collapse.
    pub post_state: StateVector,
    /// Unmeasured subsystems after collapse, `None` when everything was measured.
    pub residual: Option<StateVector>,
    /// Probability of every outcome, indexed like the basis.
    pub distribution: Vec<f64>,
}

/// Splits register indices into (target index, rest index).
struct Split {
    rest_dims: Vec<usize>,
    map: Vec<(usize, usize)>,
}

fn split(dims: &[usize], targets: &[usize]) -> Split {
    let target_dims: Vec<usize> = targets.iter().map(|&t| dims[t]).collect();
    let rest: Vec<usize> = (0..dims.len()).filter(|k| !targets.contains(k)).collect();
    let rest_dims: Vec<usize> = rest.iter().map(|&k| dims[k]).collect();
    let total: usize = dims.iter().product();
    let map = (0..total)
        .map(|i| {
            let digits = mixed_radix_digits(dims, i);
            let td: Vec<usize> = targets.iter().map(|&t| digits[t]).collect();
            let rd: Vec<usize> = rest.iter().map(|&k| digits[k]).collect();
            let ti = mixed_radix_index(&target_dims, &td).expect("digits in range");
            let ri = if rd.is_empty() { 0 } else { mixed_radix_index(&rest_dims, &rd).expect("digits in range") };
            (ti, ri)
        })
        .collect();
    Split { rest_dims, map }
}

/// Unnormalized `(<b| ⊗ 1) |state>` on the unmeasured subsystems.
pub fn partial_projection(state: &StateVector, targets: &[usize], bra: &StateVector) -> Result<Vec<Complex64>> {
    let sub = validate_targets(state.dims(), targets)?;
    let target_dims: Vec<usize> = targets.iter().map(|&t| state.dims()[t]).collect();
    if bra.dims() != target_dims.as_slice() {
        return domain(format!("bra dims {:?} do not match targets {:?}", bra.dims(), target_dims));
    }
    debug_assert_eq!(sub, bra.len());
    let sp = split(state.dims(), targets);
    let rest_len: usize = sp.rest_dims.iter().product();
    let mut out = vec![Complex64::new(0.0, 0.0); rest_len];
    for (i, &(ti, ri)) in sp.map.iter().enumerate() {
        out[ri] += bra.amp(ti).conj() * state.amp(i);
    }
    Ok(out)
}

/// Outcome distribution for measuring `targets` in `basis`.
pub fn outcome_probabilities(state: &StateVector, targets: &[usize], basis: &Basis) -> Result<Vec<f64>> {
    let sub = validate_targets(state.dims(), targets)?;
    let target_dims: Vec<usize> = targets.iter().map(|&t| state.dims()[t]).collect();
    if basis.dims() != target_dims.as_slice() || basis.len() != sub {
        return domain(format!(
            "basis on {:?} cannot measure subsystems with dims {:?}",
            basis.dims(),
            target_dims
        ));
    }
    match basis {
        Basis::Computational { .. } => {
            let sp = split(state.dims(), targets);
            let mut probs = vec![0.0; sub];
            for (i, &(ti, _)) in sp.map.iter().enumerate() {
                probs[ti] += state.amp(i).norm_sqr();
            }
            Ok(probs)
        }
        Basis::Custom { vectors, .. } => vectors
            .iter()
            .map(|b| Ok(partial_projection(state, targets, b)?.iter().map(|a| a.norm_sqr()).sum()))
            .collect(),
    }
}

/// Measures the whole register in `basis`.
pub fn measure(state: &StateVector, basis: &Basis, sel: &mut dyn OutcomeSelector) -> Result<MeasurementRecord> {
    let all: Vec<usize> = (0..state.num_subsystems()).collect();
    measure_subsystems(state, &all, basis, sel)
}

/// Measures `targets` in `basis`, leaving the other subsystems in their
/// conditional state.
pub fn measure_subsystems(
    state: &StateVector,
    targets: &[usize],
    basis: &Basis,
    sel: &mut dyn OutcomeSelector,
) -> Result<MeasurementRecord> {
    let distribution = outcome_probabilities(state, targets, basis)?;
    let k = sel.select(&distribution)?;
    collapse(state, targets, basis, k, distribution)
}

/// Collapses onto outcome `k` without sampling.
pub fn project(state: &StateVector, targets: &[usize], basis: &Basis, k: usize) -> Result<MeasurementRecord> {
    let distribution = outcome_probabilities(state, targets, basis)?;
    if k >= distribution.len() {
        return domain(format!("outcome {k} out of range"));
    }
    if distribution[k] < 1e-12 {
        return domain(format!("outcome {k} has zero probability"));
    }
    collapse(state, targets, basis, k, distribution)
}

fn collapse(
    state: &StateVector,
    targets: &[usize],
    basis: &Basis,
    k: usize,
    distribution: Vec<f64>,
) -> Result<MeasurementRecord> {
    let b = basis.vector(k)?;
    let residual_amps = partial_projection(state, targets, &b)?;
    let probability = distribution[k];
    let norm = probability.sqrt();
    let residual_amps: Vec<Complex64> = residual_amps.into_iter().map(|a| a / norm).collect();
    let sp = split(state.dims(), targets);
    let post: Vec<Complex64> = sp.map.iter().map(|&(ti, ri)| b.amp(ti) * residual_amps[ri]).collect();
    let post_state = StateVector::normalized(state.dims().to_vec(), post)?;
    let residual = if sp.rest_dims.is_empty() {
        None
    } else {
        Some(StateVector::normalized(sp.rest_dims, residual_amps)?)
    };
    Ok(MeasurementRecord {
        outcome_index: k,
        outcome_label: basis.label(k),
        probability,
        post_state,
        residual,
        distribution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::qstate::gates::bell_basis;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn plus() -> StateVector {
        StateVector::qubit(c64(FRAC_1_SQRT_2, 0.0), c64(FRAC_1_SQRT_2, 0.0)).unwrap()
    }

    #[test]
    fn same_seed_same_sequence() {
        let mut a = RandomSource::new(42);
        let mut b = RandomSource::new(42);
        let xs: Vec<f64> = (0..20).map(|_| a.uniform()).collect();
        let ys: Vec<f64> = (0..20).map(|_| b.uniform()).collect();
        assert_eq!(xs, ys);
        assert_ne!(xs[0], RandomSource::new(43).uniform());
    }

    #[test]
    fn plus_state_gives_even_odds() {
        let basis = Basis::computational(&[2]).unwrap();
        let mut rng = RandomSource::new(7);
        let mut ones = 0;
        for _ in 0..2000 {
            let r = measure(&plus(), &basis, &mut rng).unwrap();
            assert!((r.probability - 0.5).abs() < 1e-12);
            ones += r.outcome_index;
            assert_eq!(r.post_state, StateVector::basis_index(&[2], r.outcome_index).unwrap());
        }
        assert!((ones as f64 / 2000.0 - 0.5).abs() < 0.05);
    }

    #[test]
    fn bell_state_in_bell_basis_is_certain() {
        let b = bell_basis(2).unwrap();
        let basis = Basis::custom((0..4).map(|k| format!("b{k}")).collect(), b.clone()).unwrap();
        let r = measure(&b[0], &basis, &mut RandomSource::new(1)).unwrap();
        assert_eq!(r.outcome_index, 0);
        assert_eq!(r.outcome_label, "b0");
        assert!((r.probability - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_register_is_flat() {
        let s = StateVector::uniform(&[2, 2, 2]).unwrap();
        let p = outcome_probabilities(&s, &[0, 1, 2], &Basis::computational(&[2, 2, 2]).unwrap()).unwrap();
        assert!(p.iter().all(|&x| (x - 0.125).abs() < 1e-12));
    }

    #[test]
    fn non_orthonormal_basis_rejected() {
        let v = vec![plus(), StateVector::basis_index(&[2], 0).unwrap()];
        assert!(matches!(Basis::from_vectors(v), Err(crate::Error::Domain(_))));
        let short = vec![plus()];
        assert!(Basis::from_vectors(short).is_err());
    }

    #[test]
    fn partial_measurement_of_bell_pair() {
        let b0 = bell_basis(2).unwrap().remove(0);
        let basis = Basis::computational(&[2]).unwrap();
        let r = project(&b0, &[0], &basis, 1).unwrap();
        assert!((r.probability - 0.5).abs() < 1e-12);
        let rest = r.residual.unwrap();
        assert!(rest.approx_eq(&StateVector::basis_index(&[2], 1).unwrap(), 1e-12));
        assert!(r.post_state.approx_eq(&StateVector::basis_index(&[2, 2], 3).unwrap(), 1e-12));
    }

    #[test]
    fn measuring_a_later_subsystem_keeps_order() {
        // |0>|+>|1>, measure the middle qubit
        let s = StateVector::basis_index(&[2], 0)
            .unwrap()
            .tensor(&plus())
            .tensor(&StateVector::basis_index(&[2], 1).unwrap());
        let r = project(&s, &[1], &Basis::computational(&[2]).unwrap(), 1).unwrap();
        assert!(r.post_state.approx_eq(&StateVector::basis_state(&[2, 2, 2], &[0, 1, 1]).unwrap(), 1e-12));
        assert!(r.residual.unwrap().approx_eq(&StateVector::basis_state(&[2, 2], &[0, 1]).unwrap(), 1e-12));
    }

    #[test]
    fn forced_outcomes_validate() {
        let basis = Basis::computational(&[2]).unwrap();
        let zero = StateVector::basis_index(&[2], 0).unwrap();
        let mut f = ForcedOutcomes::new([1]);
        assert!(measure(&zero, &basis, &mut f).is_err());
        let mut f = ForcedOutcomes::new([1]);
        assert_eq!(measure(&plus(), &basis, &mut f).unwrap().outcome_index, 1);
        assert!(measure(&plus(), &basis, &mut f).is_err());
    }
}
