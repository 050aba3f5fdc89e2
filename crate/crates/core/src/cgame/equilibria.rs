use serde::Serialize;

use super::bimatrix::{expected_payoff, Bimatrix, MixedStrategy};
use crate::error::{domain, Result};

/// Slack for the weak inequalities below.
const CMP_TOL: f64 = 1e-12;

/// Cells where neither player gains by a unilateral switch (weak inequalities).
pub fn pure_nash(g: &Bimatrix) -> Vec<(usize, usize)> {
    g.cells()
        .filter(|&(i, j)| {
            (0..g.rows()).all(|k| g.a(i, j) >= g.a(k, j) - CMP_TOL)
                && (0..g.cols()).all(|k| g.b(i, j) >= g.b(i, k) - CMP_TOL)
        })
        .collect()
}

/// Moves that weakly dominate every alternative against every opposing
/// move, as `(row moves, column moves)`.
pub fn dominant_moves(g: &Bimatrix) -> (Vec<usize>, Vec<usize>) {
    dominance(g, false)
}

/// Same as [`dominant_moves`] with strict inequalities against every other move.
pub fn strictly_dominant_moves(g: &Bimatrix) -> (Vec<usize>, Vec<usize>) {
    dominance(g, true)
}

fn dominance(g: &Bimatrix, strict: bool) -> (Vec<usize>, Vec<usize>) {
    let beats = |x: f64, y: f64| if strict { x > y + CMP_TOL } else { x >= y - CMP_TOL };
    let rows = (0..g.rows())
        .filter(|&i| {
            (0..g.rows())
                .filter(|&k| k != i)
                .all(|k| (0..g.cols()).all(|j| beats(g.a(i, j), g.a(k, j))))
        })
        .collect();
    let cols = (0..g.cols())
        .filter(|&j| {
            (0..g.cols())
                .filter(|&k| k != j)
                .all(|k| (0..g.rows()).all(|i| beats(g.b(i, j), g.b(i, k))))
        })
        .collect();
    (rows, cols)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParetoFlags {
    /// Some other cell is at least as good for both and better for one.
    pub jointly_dominated: bool,
    /// Not jointly dominated, and every unilateral switch that helps the
    /// switcher hurts the other player.
    pub pareto_optimal: bool,
}

/// Per-cell Pareto flags, indexed `[row][col]`.
pub fn pareto_analysis(g: &Bimatrix) -> Vec<Vec<ParetoFlags>> {
    let dominated = |i: usize, j: usize| {
        let (a, b) = g.cell(i, j);
        g.cells().any(|(k, l)| {
            let (a2, b2) = g.cell(k, l);
            a2 >= a - CMP_TOL && b2 >= b - CMP_TOL && (a2 > a + CMP_TOL || b2 > b + CMP_TOL)
        })
    };
    let no_free_gain = |i: usize, j: usize| {
        let (a, b) = g.cell(i, j);
        let alice = (0..g.rows()).all(|k| g.a(k, j) <= a + CMP_TOL || g.b(k, j) < b - CMP_TOL);
        let bob = (0..g.cols()).all(|l| g.b(i, l) <= b + CMP_TOL || g.a(i, l) < a - CMP_TOL);
        alice && bob
    };
    (0..g.rows())
        .map(|i| {
            (0..g.cols())
                .map(|j| {
                    let jd = dominated(i, j);
                    ParetoFlags {
                        jointly_dominated: jd,
                        pareto_optimal: !jd && no_free_gain(i, j),
                    }
                })
                .collect()
        })
        .collect()
}

/// Outcome of the 2×2 indifference calculation.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MixedNash {
    /// Alice plays row 0 with probability `p`, Bob plays column 0 with `q`.
    Interior { p: f64, q: f64, payoff_a: f64, payoff_b: f64 },
    /// No interior solution; `p`/`q` are the raw indifference values when
    /// defined. Equilibria are then among the listed pure cells.
    Degenerate {
        p: Option<f64>,
        q: Option<f64>,
        pure: Vec<(usize, usize)>,
    },
}

/// Mixed equilibrium of a 2×2 game from the two indifference conditions.
pub fn mixed_nash_2x2(g: &Bimatrix) -> Result<MixedNash> {
    if g.rows() != 2 || g.cols() != 2 {
        return domain(format!("expected a 2x2 game, got {}x{}", g.rows(), g.cols()));
    }
    let solve = |num: f64, den: f64| if den.abs() < CMP_TOL { None } else { Some(num / den) };
    // Bob indifferent between his columns fixes Alice's p, and vice versa.
    let p = solve(g.b(1, 1) - g.b(1, 0), g.b(0, 0) - g.b(0, 1) - g.b(1, 0) + g.b(1, 1));
    let q = solve(g.a(1, 1) - g.a(0, 1), g.a(0, 0) - g.a(0, 1) - g.a(1, 0) + g.a(1, 1));
    let inside = |x: Option<f64>| x.is_some_and(|v| v > 0.0 && v < 1.0);
    if let (true, true, Some(p), Some(q)) = (inside(p), inside(q), p, q) {
        let (payoff_a, payoff_b) =
            expected_payoff(g, &MixedStrategy::binary(p)?, &MixedStrategy::binary(q)?)?;
        return Ok(MixedNash::Interior {
            p,
            q,
            payoff_a,
            payoff_b,
        });
    }
    Ok(MixedNash::Degenerate {
        p,
        q,
        pure: pure_nash(g),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroSumSolution {
    pub value: f64,
    /// Over the original rows.
    pub row_strategy: MixedStrategy,
    /// Over the original columns.
    pub col_strategy: MixedStrategy,
    /// `min_j Σ_i p_i A(i,j)` at the returned row strategy.
    pub maximin: f64,
    /// `max_i Σ_j A(i,j) q_j` at the returned column strategy.
    pub minimax: f64,
}

/// Indices of the first copy of each distinct vector.
fn distinct(vectors: &[Vec<f64>]) -> Vec<usize> {
    let mut keep: Vec<usize> = Vec::new();
    for (k, v) in vectors.iter().enumerate() {
        if !keep.iter().any(|&u| vectors[u].iter().zip(v).all(|(x, y)| (x - y).abs() <= CMP_TOL)) {
            keep.push(k);
        }
    }
    keep
}

/// Value and optimal strategies of a zero-sum game that reduces to at most
/// 2×2 after merging duplicate rows and columns.
pub fn zero_sum_value_2x2(g: &Bimatrix) -> Result<ZeroSumSolution> {
    if !g.is_zero_sum(CMP_TOL) {
        return domain("game is not zero-sum");
    }
    let a = g.payoff_a();
    let rows = distinct(a);
    let columns: Vec<Vec<f64>> = (0..g.cols()).map(|j| a.iter().map(|r| r[j]).collect()).collect();
    let cols = distinct(&columns);
    if rows.len() > 2 || cols.len() > 2 {
        return domain(format!(
            "game reduces to {}x{}, only 2x2 is solved",
            rows.len(),
            cols.len()
        ));
    }
    let m = |r: usize, c: usize| a[rows[r]][cols[c]];
    let (nr, nc) = (rows.len(), cols.len());

    // pure saddle point first
    let mut best: Option<(usize, usize)> = None;
    for r in 0..nr {
        for c in 0..nc {
            let row_min = (0..nc).all(|c2| m(r, c) <= m(r, c2) + CMP_TOL);
            let col_max = (0..nr).all(|r2| m(r, c) >= m(r2, c) - CMP_TOL);
            if row_min && col_max && best.is_none() {
                best = Some((r, c));
            }
        }
    }
    let (p_reduced, q_reduced, value) = match best {
        Some((r, c)) => {
            let mut p = vec![0.0; nr];
            let mut q = vec![0.0; nc];
            p[r] = 1.0;
            q[c] = 1.0;
            (p, q, m(r, c))
        }
        None => {
            // no saddle in a 2x2 means both strategies are interior
            let (w, x, y, z) = (m(0, 0), m(0, 1), m(1, 0), m(1, 1));
            let den = w - x - y + z;
            let p = (z - y) / den;
            let q = (z - x) / den;
            (vec![p, 1.0 - p], vec![q, 1.0 - q], (w * z - x * y) / den)
        }
    };

    let mut p = vec![0.0; g.rows()];
    for (r, &orig) in rows.iter().enumerate() {
        p[orig] = p_reduced[r];
    }
    let mut q = vec![0.0; g.cols()];
    for (c, &orig) in cols.iter().enumerate() {
        q[orig] = q_reduced[c];
    }
    let maximin = (0..g.cols())
        .map(|j| (0..g.rows()).map(|i| p[i] * a[i][j]).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    let minimax = (0..g.rows())
        .map(|i| (0..g.cols()).map(|j| a[i][j] * q[j]).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(ZeroSumSolution {
        value,
        row_strategy: MixedStrategy::new(p)?,
        col_strategy: MixedStrategy::new(q)?,
        maximin,
        minimax,
    })
}
