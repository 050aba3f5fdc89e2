use std::cell::Cell;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::qstate::{apply_walsh_all, measure, Basis, Limits, RandomSource, StateVector};

/// Black-box phase oracle `|x> → (−1)^{f(x)}|x>` that counts its uses.
pub struct PhaseOracle<F: Fn(usize) -> bool> {
    f: F,
    calls: Cell<usize>,
}

impl<F: Fn(usize) -> bool> PhaseOracle<F> {
    pub fn new(f: F) -> Self {
        Self { f, calls: Cell::new(0) }
    }

    pub fn calls(&self) -> usize {
        self.calls.get()
    }

    /// One application on a whole register.
    pub fn apply(&self, state: &StateVector) -> StateVector {
        self.calls.set(self.calls.get() + 1);
        let amps = state
            .amps()
            .iter()
            .enumerate()
            .map(|(x, &a)| if (self.f)(x) { -a } else { a })
            .collect();
        StateVector::from_parts_unchecked(state.dims().to_vec(), amps)
    }
}

/// Result of one Bernstein–Vazirani query.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BvRun {
    pub n: usize,
    pub recovered: usize,
    pub probability: f64,
    pub oracle_calls: usize,
}

/// Recovers the hidden string `a` of `f(x) = a·x mod 2` with one oracle call.
pub fn bernstein_vazirani(n: usize, a: usize) -> Result<BvRun> {
    if n == 0 || n >= usize::BITS as usize || a >= 1usize << n {
        return domain(format!("hidden string {a} out of range for {n} qubits"));
    }
    Limits::default().check_state_qubits(n)?;
    let oracle = PhaseOracle::new(|x: usize| (x & a).count_ones() % 2 == 1);
    let dims = vec![2; n];
    let start = apply_walsh_all(&StateVector::basis_index(&dims, 0)?)?;
    let kicked = oracle.apply(&start);
    let out = apply_walsh_all(&kicked)?;
    // the outcome is certain, so the seed is irrelevant
    let rec = measure(&out, &Basis::computational(&dims)?, &mut RandomSource::new(0))?;
    Ok(BvRun {
        n,
        recovered: rec.outcome_index,
        probability: rec.probability,
        oracle_calls: oracle.calls(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_110() {
        let run = bernstein_vazirani(3, 6).unwrap();
        assert_eq!(run.recovered, 6);
        assert!((run.probability - 1.0).abs() < 1e-12);
        assert_eq!(run.oracle_calls, 1);
    }

    #[test]
    fn zero_string_is_identity_oracle() {
        assert_eq!(bernstein_vazirani(4, 0).unwrap().recovered, 0);
    }

    #[test]
    fn exhaustive_small_registers() {
        for n in 1..=5 {
            for a in 0..1 << n {
                let run = bernstein_vazirani(n, a).unwrap();
                assert_eq!((run.recovered, run.oracle_calls), (a, 1));
            }
        }
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(bernstein_vazirani(3, 8).is_err());
        assert!(bernstein_vazirani(0, 0).is_err());
    }
}
