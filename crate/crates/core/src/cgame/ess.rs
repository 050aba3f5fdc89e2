use serde::Serialize;

use super::bimatrix::Bimatrix;
use crate::error::{domain, Result};

/// Bisection stops once the bracket is this narrow.
pub const BARRIER_TOL: f64 = 1e-6;
const CMP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EssReport {
    pub incumbent: usize,
    pub mutant: usize,
    pub eta: f64,
    /// Incumbent fitness beats the mutant's at `eta`.
    pub stable: bool,
    pub fitness_incumbent: f64,
    pub fitness_mutant: f64,
    /// Largest `η₀` with the incumbent ahead on all of `(0, η₀)`; 0 when
    /// the mutant invades at any share.
    pub invasion_barrier: f64,
}

/// Fitness of `i` and `j` in a population playing `i` with share `1 − η`
/// and `j` with share `η`.
pub fn fitness(g: &Bimatrix, i: usize, j: usize, eta: f64) -> (f64, f64) {
    let pi = |x: usize, y: usize| g.a(x, y);
    let wi = (1.0 - eta) * pi(i, i) + eta * pi(i, j);
    let wj = (1.0 - eta) * pi(j, i) + eta * pi(j, j);
    (wi, wj)
}

/// Tests whether incumbent `i` resists mutant `j` at share `eta`, and
/// estimates the invasion barrier by bisection.
pub fn ess_test(g: &Bimatrix, incumbent: usize, mutant: usize, eta: f64) -> Result<EssReport> {
    if !g.is_symmetric(CMP_TOL) {
        return domain("ESS needs a symmetric game (payoff_a = payoff_bᵀ)");
    }
    if incumbent >= g.rows() || mutant >= g.rows() {
        return domain("move index out of range");
    }
    if !(eta > 0.0 && eta < 1.0) {
        return domain(format!("η must lie in (0, 1), got {eta}"));
    }
    let gap = |e: f64| {
        let (wi, wj) = fitness(g, incumbent, mutant, e);
        wi - wj
    };
    let (fitness_incumbent, fitness_mutant) = fitness(g, incumbent, mutant, eta);

    let (g0, g1) = (gap(0.0), gap(1.0));
    let invasion_barrier = if incumbent == mutant || g0 < -CMP_TOL || (g0.abs() <= CMP_TOL && g1 <= CMP_TOL) {
        0.0
    } else if g1 > CMP_TOL {
        1.0
    } else {
        // gap(0) > 0 ≥ gap(1): walk the sign change down
        let (mut lo, mut hi) = (0.0, 1.0);
        while hi - lo > BARRIER_TOL {
            let mid = 0.5 * (lo + hi);
            if gap(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };

    Ok(EssReport {
        incumbent,
        mutant,
        eta,
        stable: fitness_incumbent > fitness_mutant + CMP_TOL,
        fitness_incumbent,
        fitness_mutant,
        invasion_barrier,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed-form root of the linear fitness gap.
    fn barrier_oracle(g: &Bimatrix, i: usize, j: usize) -> f64 {
        let d0 = g.a(i, i) - g.a(j, i);
        let d1 = g.a(i, j) - g.a(j, j);
        if d0 < 0.0 || (d0 == 0.0 && d1 <= 0.0) {
            0.0
        } else if d1 > 0.0 {
            1.0
        } else {
            d0 / (d0 - d1)
        }
    }

    #[test]
    fn defection_resists_cooperation() {
        let g = Bimatrix::prisoners_dilemma();
        let r = ess_test(&g, 1, 0, 0.01).unwrap();
        assert!(r.stable);
        assert_eq!(r.invasion_barrier, 1.0);
        assert!(!ess_test(&g, 0, 1, 0.01).unwrap().stable);
    }

    #[test]
    fn bisection_matches_closed_form() {
        // hawk-dove style table with an interior barrier
        let g = Bimatrix::from_cells(
            &["a", "b"],
            &["a", "b"],
            &[&[(2.0, 2.0), (0.0, 3.0)], &[(3.0, 0.0), (1.0, 1.0)]],
        )
        .unwrap();
        let g2 = Bimatrix::from_cells(
            &["a", "b"],
            &["a", "b"],
            &[&[(4.0, 4.0), (0.0, 1.0)], &[(1.0, 0.0), (3.0, 3.0)]],
        )
        .unwrap();
        for game in [&g, &g2] {
            for i in 0..2 {
                for j in 0..2 {
                    if i == j {
                        continue;
                    }
                    let r = ess_test(game, i, j, 0.5).unwrap();
                    assert!((r.invasion_barrier - barrier_oracle(game, i, j)).abs() < 2.0 * BARRIER_TOL);
                }
            }
        }
        // gap 3 against the incumbent, −3 against the mutant: barrier ½
        assert!((ess_test(&g2, 0, 1, 0.5).unwrap().invasion_barrier - 0.5).abs() < 2.0 * BARRIER_TOL);
    }

    #[test]
    fn asymmetric_and_bad_eta_rejected() {
        let bos = Bimatrix::battle_of_sexes(3.0, 2.0, 1.0).unwrap();
        assert!(ess_test(&bos, 0, 1, 0.1).is_err());
        let pd = Bimatrix::prisoners_dilemma();
        assert!(ess_test(&pd, 0, 1, 0.0).is_err());
        assert!(ess_test(&pd, 0, 1, 1.0).is_err());
    }
}
