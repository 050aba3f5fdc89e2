//! Pseudo-telepathy game Γ_N. Each player gets a bit `x_i` (the sum is
//! promised even) and answers `y_i`; the team wins when
//! `Σy_i mod 2 = (Σx_i / 2) mod 2`. Sharing `|b0^N>` they always win.

use crate::cgame::CharacteristicGame;
use crate::error::{domain, Result};
use crate::qstate::{bell_basis, gates, Basis, OutcomeSelector};

use super::report::{GameReport, Recorder};

pub const MIN_PLAYERS: usize = 2;
pub const MAX_PLAYERS: usize = 16;

fn check_inputs(x: &[u8]) -> Result<()> {
    let n = x.len();
    if !(MIN_PLAYERS..=MAX_PLAYERS).contains(&n) {
        return domain(format!("Γ_N needs {MIN_PLAYERS} to {MAX_PLAYERS} players, got {n}"));
    }
    if x.iter().any(|&b| b > 1) {
        return domain("inputs must be bits");
    }
    let s: u32 = x.iter().map(|&b| b as u32).sum();
    if s % 2 == 1 {
        return domain(format!("input bits sum to {s}, breaking the even-sum promise"));
    }
    Ok(())
}

/// Whether outputs `y` win for inputs `x`.
pub fn telepathy_wins(x: &[u8], y: &[u8]) -> bool {
    let sx: u32 = x.iter().map(|&b| b as u32).sum();
    let sy: u32 = y.iter().map(|&b| b as u32).sum();
    sy % 2 == (sx / 2) % 2
}

/// One round with a transcript.
pub fn pseudo_telepathy_report(x: &[u8], sel: &mut dyn OutcomeSelector) -> Result<GameReport> {
    check_inputs(x)?;
    let n = x.len();
    let mut rec = Recorder::new();
    rec.prepare("players", "|b0^N>", bell_basis(n)?.swap_remove(0));
    let s = gates::quarter_phase();
    for (i, &xi) in x.iter().enumerate() {
        if xi == 1 {
            rec.apply(&format!("A{}", i + 1), "U_pi/2", &s, &[i])?;
        }
    }
    let h = gates::hadamard();
    for i in 0..n {
        rec.apply(&format!("A{}", i + 1), "H", &h, &[i])?;
    }
    let all: Vec<usize> = (0..n).collect();
    let m = rec.measure("players", "outputs", &all, &Basis::computational(&vec![2; n])?, sel)?;
    let y: Vec<u8> = (0..n).map(|i| ((m.outcome_index >> (n - 1 - i)) & 1) as u8).collect();
    let win = telepathy_wins(x, &y);

    // probability mass on winning parities
    let win_prob: f64 = m
        .distribution
        .iter()
        .enumerate()
        .filter(|(k, _)| {
            let bits: Vec<u8> = (0..n).map(|i| ((k >> (n - 1 - i)) & 1) as u8).collect();
            telepathy_wins(x, &bits)
        })
        .map(|(_, p)| p)
        .sum();

    let mut rep = GameReport::new("telepathy").param("x", x).param("players", n);
    rep.transcript = rec.into_steps();
    rep.outcome = format!("y = {}", y.iter().map(|b| b.to_string()).collect::<String>());
    rep.params.insert("y".into(), serde_json::json!(y));
    let pay = if win { 1.0 } else { -1.0 };
    rep.payoffs.insert("team".into(), pay);
    rep.probabilities.insert("win".into(), win_prob);
    Ok(rep)
}

/// One round: outputs and whether the team won.
pub fn pseudo_telepathy_round(x: &[u8], sel: &mut dyn OutcomeSelector) -> Result<(Vec<u8>, bool)> {
    let rep = pseudo_telepathy_report(x, sel)?;
    let y: Vec<u8> = serde_json::from_value(rep.params["y"].clone()).expect("written above");
    let win = rep.payoffs["team"] > 0.0;
    Ok((y, win))
}

/// Every even-sum input vector of length `n`.
pub fn admissible_inputs(n: usize) -> Vec<Vec<u8>> {
    (0..1usize << n)
        .filter(|k| k.count_ones() % 2 == 0)
        .map(|k| (0..n).map(|i| ((k >> (n - 1 - i)) & 1) as u8).collect())
        .collect()
}

/// The coalition game induced by Γ_N: only the grand coalition wins 1.
pub fn telepathy_coalition_game(n: usize) -> Result<CharacteristicGame> {
    if !(MIN_PLAYERS..=MAX_PLAYERS).contains(&n) {
        return domain(format!("Γ_N needs {MIN_PLAYERS} to {MAX_PLAYERS} players, got {n}"));
    }
    CharacteristicGame::grand_coalition_only(n, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cgame::{core_check, Imputation};
    use crate::qstate::RandomSource;

    #[test]
    fn three_players_parities() {
        let (y, win) = pseudo_telepathy_round(&[0, 0, 0], &mut RandomSource::new(1)).unwrap();
        assert!(win);
        assert_eq!(y.iter().map(|&b| b as u32).sum::<u32>() % 2, 0);
        let (y, win) = pseudo_telepathy_round(&[1, 1, 0], &mut RandomSource::new(1)).unwrap();
        assert!(win);
        assert_eq!(y.iter().map(|&b| b as u32).sum::<u32>() % 2, 1);
    }

    #[test]
    fn always_wins_small_teams() {
        for n in 2..=6 {
            for x in admissible_inputs(n) {
                for seed in 0..10 {
                    let rep = pseudo_telepathy_report(&x, &mut RandomSource::new(seed)).unwrap();
                    assert_eq!(rep.payoffs["team"], 1.0);
                    assert!((rep.probability("win").unwrap() - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn transcript_replays() {
        let rep = pseudo_telepathy_report(&[1, 0, 1, 1, 1], &mut RandomSource::new(3)).unwrap();
        assert_eq!(rep.replay().unwrap(), 1 + 4 + 5 + 1);
    }

    #[test]
    fn promise_and_size_enforced() {
        let mut r = RandomSource::new(0);
        assert!(pseudo_telepathy_round(&[1, 0, 0], &mut r).is_err());
        assert!(pseudo_telepathy_round(&[0], &mut r).is_err());
        assert!(pseudo_telepathy_round(&[0; 17], &mut r).is_err());
    }

    #[test]
    fn core_is_the_simplex() {
        let g = telepathy_coalition_game(4).unwrap();
        assert!(core_check(&g, &Imputation::new(vec![0.25; 4])).unwrap());
        assert!(core_check(&g, &Imputation::new(vec![1.0, 0.0, 0.0, 0.0])).unwrap());
        assert!(!core_check(&g, &Imputation::new(vec![0.5, 0.5, 0.5, -0.5])).unwrap());
    }
}
