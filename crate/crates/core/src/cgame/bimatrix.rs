use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Sum tolerance for mixed strategies.
pub const PROB_TOL: f64 = 1e-10;

/// Two-player normal-form game: `payoff_a[i][j]` and `payoff_b[i][j]` are
/// the row (Alice) and column (Bob) payoffs when Alice plays row `i` and Bob
/// plays column `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BimatrixJson", into = "BimatrixJson")]
pub struct Bimatrix {
    row_moves: Vec<String>,
    col_moves: Vec<String>,
    payoff_a: Vec<Vec<f64>>,
    payoff_b: Vec<Vec<f64>>,
}

/// Wire form shared with the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BimatrixJson {
    pub row_moves: Vec<String>,
    pub col_moves: Vec<String>,
    pub payoff_a: Vec<Vec<f64>>,
    pub payoff_b: Vec<Vec<f64>>,
}

impl TryFrom<BimatrixJson> for Bimatrix {
    type Error = crate::Error;
    fn try_from(j: BimatrixJson) -> Result<Self> {
        Bimatrix::new(j.row_moves, j.col_moves, j.payoff_a, j.payoff_b)
    }
}

impl From<Bimatrix> for BimatrixJson {
    fn from(g: Bimatrix) -> Self {
        BimatrixJson {
            row_moves: g.row_moves,
            col_moves: g.col_moves,
            payoff_a: g.payoff_a,
            payoff_b: g.payoff_b,
        }
    }
}

fn labels(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

impl Bimatrix {
    pub fn new(
        row_moves: Vec<String>,
        col_moves: Vec<String>,
        payoff_a: Vec<Vec<f64>>,
        payoff_b: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let (m, n) = (row_moves.len(), col_moves.len());
        if m == 0 || n == 0 {
            return domain("a game needs at least one move per player");
        }
        for (name, p) in [("payoff_a", &payoff_a), ("payoff_b", &payoff_b)] {
            if p.len() != m || p.iter().any(|r| r.len() != n) {
                return domain(format!("{name} must be {m}x{n} to match the move labels"));
            }
            if p.iter().flatten().any(|x| !x.is_finite()) {
                return domain(format!("{name} has a non-finite entry"));
            }
        }
        Ok(Self {
            row_moves,
            col_moves,
            payoff_a,
            payoff_b,
        })
    }

    /// Game given as a grid of `(π_A, π_B)` cells.
    pub fn from_cells(row_moves: &[&str], col_moves: &[&str], cells: &[&[(f64, f64)]]) -> Result<Self> {
        let a = cells.iter().map(|r| r.iter().map(|c| c.0).collect()).collect();
        let b = cells.iter().map(|r| r.iter().map(|c| c.1).collect()).collect();
        Self::new(labels(row_moves), labels(col_moves), a, b)
    }

    /// Zero-sum game from the row player's matrix.
    pub fn zero_sum(row_moves: Vec<String>, col_moves: Vec<String>, payoff_a: Vec<Vec<f64>>) -> Result<Self> {
        let b = payoff_a.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        Self::new(row_moves, col_moves, payoff_a, b)
    }

    /// Cooperate/defect prisoner's dilemma.
    pub fn prisoners_dilemma() -> Self {
        Self::from_cells(&["C", "D"], &["C", "D"], &[&[(3.0, 3.0), (0.0, 5.0)], &[(5.0, 0.0), (1.0, 1.0)]])
            .expect("static table")
    }

    /// Battle of the sexes with moves O and T; requires `α > β > γ`.
    pub fn battle_of_sexes(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !(alpha > beta && beta > gamma) {
            return domain(format!("battle of the sexes needs α > β > γ, got ({alpha}, {beta}, {gamma})"));
        }
        Self::from_cells(
            &["O", "T"],
            &["O", "T"],
            &[&[(alpha, beta), (gamma, gamma)], &[(gamma, gamma), (beta, alpha)]],
        )
    }

    /// Spin-flip game: Alice plays once, Bob twice. Bob's labels list his
    /// moves right to left (`"I,X"` means X first, then I); Alice wins 1
    /// when the spin ends down.
    pub fn spin_flip() -> Self {
        Self::zero_sum(
            labels(&["I", "X"]),
            labels(&["I,I", "I,X", "X,I", "X,X"]),
            vec![vec![-1.0, 1.0, 1.0, -1.0], vec![1.0, -1.0, -1.0, 1.0]],
        )
        .expect("static table")
    }

    /// Classical Newcomb game in dollars. Alice's rows are "B2" (only box
    /// two) and "both"; the columns are the predictor's forecast. The
    /// predictor scores 1 for a correct forecast.
    pub fn newcomb() -> Self {
        Self::from_cells(
            &["B2", "both"],
            &["predicts B2", "predicts both"],
            &[&[(1_000_000.0, 1.0), (0.0, 0.0)], &[(1_001_000.0, 0.0), (1_000.0, 1.0)]],
        )
        .expect("static table")
    }

    pub fn rows(&self) -> usize {
        self.row_moves.len()
    }

    pub fn cols(&self) -> usize {
        self.col_moves.len()
    }

    pub fn row_moves(&self) -> &[String] {
        &self.row_moves
    }

    pub fn col_moves(&self) -> &[String] {
        &self.col_moves
    }

    pub fn payoff_a(&self) -> &[Vec<f64>] {
        &self.payoff_a
    }

    pub fn payoff_b(&self) -> &[Vec<f64>] {
        &self.payoff_b
    }

    #[inline]
    pub fn a(&self, i: usize, j: usize) -> f64 {
        self.payoff_a[i][j]
    }

    #[inline]
    pub fn b(&self, i: usize, j: usize) -> f64 {
        self.payoff_b[i][j]
    }

    pub fn cell(&self, i: usize, j: usize) -> (f64, f64) {
        (self.a(i, j), self.b(i, j))
    }

    pub fn row_index(&self, label: &str) -> Option<usize> {
        self.row_moves.iter().position(|m| m == label)
    }

    pub fn col_index(&self, label: &str) -> Option<usize> {
        self.col_moves.iter().position(|m| m == label)
    }

    pub fn is_zero_sum(&self, tol: f64) -> bool {
        self.cells().all(|(i, j)| (self.a(i, j) + self.b(i, j)).abs() <= tol)
    }

    /// `payoff_a == payoff_bᵀ` with matching labels.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.rows() == self.cols()
            && self.row_moves == self.col_moves
            && self.cells().all(|(i, j)| (self.a(i, j) - self.b(j, i)).abs() <= tol)
    }

    /// Subgame on the given rows and columns.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        if rows.iter().any(|&i| i >= self.rows()) || cols.iter().any(|&j| j >= self.cols()) {
            return domain("restriction index out of range");
        }
        let pick = |p: &[Vec<f64>]| rows.iter().map(|&i| cols.iter().map(|&j| p[i][j]).collect()).collect();
        Self::new(
            rows.iter().map(|&i| self.row_moves[i].clone()).collect(),
            cols.iter().map(|&j| self.col_moves[j].clone()).collect(),
            pick(&self.payoff_a),
            pick(&self.payoff_b),
        )
    }

    /// All `(row, col)` index pairs, row-major.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.cols();
        (0..self.rows() * n).map(move |k| (k / n, k % n))
    }
}

/// Probability vector over one player's moves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct MixedStrategy {
    probs: Vec<f64>,
}

impl MixedStrategy {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return domain("empty mixed strategy");
        }
        if probs.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return domain("mixed strategy probabilities must be non-negative");
        }
        let s: f64 = probs.iter().sum();
        if (s - 1.0).abs() > PROB_TOL {
            return domain(format!("mixed strategy sums to {s}, not 1"));
        }
        Ok(Self { probs })
    }

    pub fn pure(k: usize, n: usize) -> Result<Self> {
        if k >= n {
            return domain(format!("move {k} out of range for {n} moves"));
        }
        let mut probs = vec![0.0; n];
        probs[k] = 1.0;
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return domain("empty mixed strategy");
        }
        Ok(Self {
            probs: vec![1.0 / n as f64; n],
        })
    }

    /// `(p, 1 − p)` over two moves.
    pub fn binary(p: f64) -> Result<Self> {
        Self::new(vec![p, 1.0 - p])
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

impl TryFrom<Vec<f64>> for MixedStrategy {
    type Error = crate::Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<MixedStrategy> for Vec<f64> {
    fn from(s: MixedStrategy) -> Self {
        s.probs
    }
}

/// `(Σ π_A(i,j) a_i b_j, Σ π_B(i,j) a_i b_j)`
pub fn expected_payoff(g: &Bimatrix, pa: &MixedStrategy, pb: &MixedStrategy) -> Result<(f64, f64)> {
    if pa.len() != g.rows() || pb.len() != g.cols() {
        return domain(format!(
            "strategies of length {} and {} do not fit a {}x{} game",
            pa.len(),
            pb.len(),
            g.rows(),
            g.cols()
        ));
    }
    let (mut ea, mut eb) = (0.0, 0.0);
    for (i, j) in g.cells() {
        let w = pa.probs[i] * pb.probs[j];
        ea += w * g.a(i, j);
        eb += w * g.b(i, j);
    }
    Ok((ea, eb))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_validates_shape() {
        let g = Bimatrix::prisoners_dilemma();
        let j = serde_json::to_string(&g).unwrap();
        assert_eq!(serde_json::from_str::<Bimatrix>(&j).unwrap(), g);
        let bad = r#"{"row_moves":["a"],"col_moves":["x","y"],"payoff_a":[[1]],"payoff_b":[[1,2]]}"#;
        assert!(serde_json::from_str::<Bimatrix>(bad).is_err());
    }

    #[test]
    fn mixed_strategy_checks() {
        assert!(MixedStrategy::new(vec![0.5, 0.6]).is_err());
        assert!(MixedStrategy::new(vec![-0.1, 1.1]).is_err());
        assert!(MixedStrategy::new(vec![f64::NAN, 1.0]).is_err());
        assert_eq!(MixedStrategy::pure(1, 3).unwrap().probs(), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn spin_flip_uniform_play_is_fair() {
        let g = Bimatrix::spin_flip();
        let (a, b) = expected_payoff(&g, &MixedStrategy::uniform(2).unwrap(), &MixedStrategy::uniform(4).unwrap())
            .unwrap();
        assert_eq!((a, b), (0.0, 0.0));
        // Alice's half-half mix is fair against every column
        for j in 0..4 {
            let (a, _) = expected_payoff(&g, &MixedStrategy::uniform(2).unwrap(), &MixedStrategy::pure(j, 4).unwrap())
                .unwrap();
            assert_eq!(a, 0.0);
        }
    }

    #[test]
    fn pd_pure_cell_and_bos_mixed_value() {
        let pd = Bimatrix::prisoners_dilemma();
        let dd = expected_payoff(&pd, &MixedStrategy::pure(1, 2).unwrap(), &MixedStrategy::pure(1, 2).unwrap()).unwrap();
        assert_eq!(dd, (1.0, 1.0));

        let (al, be, ga) = (3.0, 2.0, 1.0);
        let g = Bimatrix::battle_of_sexes(al, be, ga).unwrap();
        let s = al + be - 2.0 * ga;
        let p = MixedStrategy::binary((al - ga) / s).unwrap();
        let q = MixedStrategy::binary((be - ga) / s).unwrap();
        let (a, b) = expected_payoff(&g, &p, &q).unwrap();
        let v = (al * be - ga * ga) / s;
        assert!((a - v).abs() < 1e-12 && (b - v).abs() < 1e-12);
        assert!(Bimatrix::battle_of_sexes(1.0, 2.0, 3.0).is_err());
    }

    #[test]
    fn length_mismatch_is_domain_error() {
        let g = Bimatrix::prisoners_dilemma();
        assert!(expected_payoff(&g, &MixedStrategy::uniform(3).unwrap(), &MixedStrategy::uniform(2).unwrap()).is_err());
    }

    #[test]
    fn symmetry_and_zero_sum_flags() {
        assert!(Bimatrix::prisoners_dilemma().is_symmetric(0.0));
        assert!(!Bimatrix::battle_of_sexes(3.0, 2.0, 1.0).unwrap().is_symmetric(0.0));
        assert!(Bimatrix::spin_flip().is_zero_sum(0.0));
    }
}
