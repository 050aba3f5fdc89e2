use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::qstate::{walsh, CMatrix, Limits, StateVector, UnitaryMatrix};

/// Above this size the iteration count uses `π√N/4 − ½` instead of the
/// exact angle.
const EXACT_ANGLE_LIMIT: u64 = 1 << 20;

/// Trajectories are kept whole while `(k + 1)·2^n` stays below this many
/// amplitudes; larger runs keep only the first and last states.
const TRAJECTORY_BUDGET: usize = 1 << 24;

/// Outcome of a simulated Grover search.
#[derive(Debug, Clone, Serialize)]
pub struct GroverRun {
    pub n: usize,
    pub target: usize,
    pub k: u64,
    /// `asin(2^{-n/2})`
    pub theta: f64,
    /// Initial uniform state followed by the state after each iteration.
    pub trajectory: Vec<StateVector>,
    /// False when intermediate snapshots were dropped for size.
    pub trajectory_complete: bool,
    pub success_probability: f64,
}

impl GroverRun {
    pub fn final_state(&self) -> &StateVector {
        self.trajectory.last().expect("trajectory is never empty")
    }
}

/// Optimal number of Grover iterations for a search space of size `n_space`.
/// Ties at `x.5` round away from zero.
pub fn grover_iterations(n_space: u64) -> Result<u64> {
    if n_space < 2 {
        return domain(format!("search space must have at least 2 items, got {n_space}"));
    }
    let x = if n_space <= EXACT_ANGLE_LIMIT {
        let theta = (1.0 / (n_space as f64).sqrt()).asin();
        PI / (4.0 * theta) - 0.5
    } else {
        PI * (n_space as f64).sqrt() / 4.0 - 0.5
    };
    Ok(x.round().max(0.0) as u64)
}

/// Rotation angle `θ` with `sin θ = 1/√N`.
pub fn grover_theta(n: usize) -> f64 {
    (2f64.powf(-(n as f64) / 2.0)).asin()
}

/// `sin²((2k+1)θ)`
pub fn grover_success_probability(n: usize, k: u64) -> f64 {
    ((2 * k + 1) as f64 * grover_theta(n)).sin().powi(2)
}

fn check_target(n: usize, a: usize) -> Result<()> {
    if n == 0 {
        return domain("Grover search needs at least one qubit");
    }
    if n >= usize::BITS as usize || a >= 1usize << n {
        return domain(format!("target {a} out of range for {n} qubits"));
    }
    Ok(())
}

/// Dense `(oracle, diffusion)` pair: `1 − 2|a><a|` and `−W(1 − 2|0><0|)W`.
pub fn grover_operators(n: usize, a: usize) -> Result<(UnitaryMatrix, UnitaryMatrix)> {
    check_target(n, a)?;
    Limits::default().check_matrix_qubits(n)?;
    let dim = 1usize << n;
    let reflect = |k: usize| {
        let mut d = vec![Complex64::new(1.0, 0.0); dim];
        d[k] = Complex64::new(-1.0, 0.0);
        CMatrix::diagonal(&d)
    };
    let oracle = UnitaryMatrix::new(reflect(a))?;
    let w = walsh(n)?;
    let inner = w.matrix().matmul(&reflect(0))?.matmul(w.matrix())?;
    let diffusion = UnitaryMatrix::new(inner.scale(Complex64::new(-1.0, 0.0)))?;
    Ok((oracle, diffusion))
}

/// Runs the optimal number of iterations from `W|0…0>`.
pub fn grover_search(n: usize, a: usize) -> Result<GroverRun> {
    check_target(n, a)?;
    let k = grover_iterations(1u64 << n)?;
    grover_search_with_iterations(n, a, k)
}

/// Same as [`grover_search`] with an explicit iteration count.
pub fn grover_search_with_iterations(n: usize, a: usize, k: u64) -> Result<GroverRun> {
    check_target(n, a)?;
    Limits::default().check_state_qubits(n)?;
    let dim = 1usize << n;
    let keep_all = (k as usize).saturating_add(1).saturating_mul(dim) <= TRAJECTORY_BUDGET;

    let start = StateVector::uniform(&vec![2; n])?;
    let mut amps = start.amps().to_vec();
    let mut trajectory = vec![start];
    for step in 0..k {
        // oracle: phase flip on the target
        amps[a] = -amps[a];
        // diffusion: inversion about the mean
        let mean: Complex64 = amps.iter().sum::<Complex64>() / dim as f64;
        for x in amps.iter_mut() {
            *x = mean * 2.0 - *x;
        }
        if keep_all || step + 1 == k {
            trajectory.push(StateVector::normalized(vec![2; n], amps.clone())?);
        }
    }
    let success_probability = trajectory.last().map(|s| s.amp(a).norm_sqr()).unwrap_or(0.0);
    Ok(GroverRun {
        n,
        target: a,
        k,
        theta: grover_theta(n),
        trajectory,
        trajectory_complete: keep_all,
        success_probability,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn iteration_counts() {
        assert_eq!(grover_iterations(8).unwrap(), 2);
        assert_eq!(grover_iterations(1 << 30).unwrap(), 25735);
        assert_eq!(grover_iterations(4).unwrap(), 1);
        // θ = π/4 puts N = 2 exactly on a tie, which rounds away from zero
        assert_eq!(grover_iterations(2).unwrap(), 1);
        assert!(grover_iterations(1).is_err());
    }

    #[test]
    fn four_items_succeed_with_certainty() {
        for a in 0..4 {
            let run = grover_search(2, a).unwrap();
            assert!((run.success_probability - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn worked_eight_item_example() {
        let run = grover_search(3, 5).unwrap();
        assert_eq!(run.k, 2);
        let s1 = 1.0 / (4.0 * 2f64.sqrt());
        let s2 = 1.0 / (8.0 * 2f64.sqrt());
        for x in 0..8 {
            let e1 = if x == 5 { 5.0 } else { 1.0 } * s1;
            let e2 = if x == 5 { 11.0 } else { -1.0 } * s2;
            assert!((run.trajectory[1].amp(x) - c64(e1, 0.0)).norm() < 1e-12);
            assert!((run.trajectory[2].amp(x) - c64(e2, 0.0)).norm() < 1e-12);
        }
        assert!((run.success_probability - 0.9453).abs() < 5e-5);
    }

    #[test]
    fn single_qubit_both_counts_give_half() {
        let k0 = grover_search_with_iterations(1, 0, 0).unwrap();
        let k1 = grover_search_with_iterations(1, 0, 1).unwrap();
        assert!((k0.success_probability - 0.5).abs() < 1e-12);
        assert!((k1.success_probability - grover_success_probability(1, 1)).abs() < 1e-12);
        assert!((k1.success_probability - 0.5).abs() < 1e-12);
    }

    #[test]
    fn dense_operators_match_structured_iteration() {
        let (oracle, diffusion) = grover_operators(3, 5).unwrap();
        let mut diag = vec![c64(1.0, 0.0); 8];
        diag[5] = c64(-1.0, 0.0);
        assert!(oracle.matrix().approx_eq(&CMatrix::diagonal(&diag), 0.0));
        assert!((&oracle * &oracle).approx_eq(&UnitaryMatrix::identity(8), 1e-15));

        // D·O = ¼ M with M(i,j) = (1 − 4δ_ij)·o_j
        let g = &diffusion * &oracle;
        for i in 0..8 {
            for j in 0..8 {
                let o = if j == 5 { -1.0 } else { 1.0 };
                let m = if i == j { -3.0 } else { 1.0 } * o;
                assert!((g.get(i, j) - c64(m / 4.0, 0.0)).norm() < 1e-12, "({i},{j})");
            }
        }

        let mut s = StateVector::uniform(&[2, 2, 2]).unwrap();
        for _ in 0..2 {
            s = s.apply(&g, &[0, 1, 2]).unwrap();
        }
        assert!(s.approx_eq(grover_search(3, 5).unwrap().final_state(), 1e-12));
    }

    #[test]
    fn bad_target_rejected() {
        assert!(grover_search(3, 8).is_err());
        assert!(grover_operators(0, 0).is_err());
        assert!(matches!(grover_operators(14, 0), Err(crate::Error::Resource(_))));
    }
}
