//! Three-card game with a quantum query. Cards are ○○, ●● and ○●; Bob wins
//! 1 from Alice when he draws the mixed card and loses 1 otherwise. One
//! query `(HU_kH)^{⊗3}|000> = |r0 r1 r2>` shows him every up-face, after
//! which he may withdraw.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::qstate::{gates, Basis, RandomSource, StateVector, UnitaryMatrix};

use super::report::{GameReport, Recorder};

/// Up-face marks: circle is 0, dot is 1.
pub const CIRCLE: u8 = 0;
pub const DOT: u8 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Card {
    Circles,
    Dots,
    Mixed,
}

/// A full deal: which card sits in each slot and which side of the mixed
/// card faces up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardDeal {
    pub order: [Card; 3],
    pub mixed_up: u8,
}

impl CardDeal {
    pub fn up_faces(&self) -> [u8; 3] {
        self.order.map(|c| match c {
            Card::Circles => CIRCLE,
            Card::Dots => DOT,
            Card::Mixed => self.mixed_up,
        })
    }

    /// All 12 deals: 6 orders times 2 orientations.
    pub fn all() -> Vec<CardDeal> {
        use Card::*;
        let orders = [
            [Circles, Dots, Mixed],
            [Circles, Mixed, Dots],
            [Dots, Circles, Mixed],
            [Dots, Mixed, Circles],
            [Mixed, Circles, Dots],
            [Mixed, Dots, Circles],
        ];
        orders
            .iter()
            .flat_map(|&order| [CIRCLE, DOT].map(|mixed_up| CardDeal { order, mixed_up }))
            .collect()
    }
}

/// `H diag(1, e^{iπ r}) H`, which maps `|0>` to `|r>`.
pub fn card_query_gate(r: u8) -> UnitaryMatrix {
    let h = gates::hadamard();
    let u = gates::Gate::Phase(r as f64).matrix();
    &(&h * &u) * &h
}

fn check_faces(r: [u8; 3]) -> Result<u8> {
    if r.iter().any(|&x| x > 1) {
        return domain(format!("up-faces must be 0 or 1, got {r:?}"));
    }
    let dots = r.iter().filter(|&&x| x == DOT).count();
    match dots {
        1 => Ok(CIRCLE),
        2 => Ok(DOT),
        _ => domain(format!("{r:?} is not a legal deal: one ○○ and one ●● card always show both marks")),
    }
}

/// Runs the query and returns the recorded transcript and the read-out faces.
fn query(r: [u8; 3], rng: &mut RandomSource) -> Result<(Recorder, [u8; 3])> {
    let mut rec = Recorder::new();
    rec.prepare("bob", "|000>", StateVector::basis_index(&[2, 2, 2], 0)?);
    for (k, &rk) in r.iter().enumerate() {
        rec.apply("box", &format!("H U_{k} H"), &card_query_gate(rk), &[k])?;
    }
    let m = rec.measure("bob", "read query", &[0, 1, 2], &Basis::computational(&[2, 2, 2])?, rng)?;
    let i = m.outcome_index;
    Ok((rec, [(i >> 2) as u8 & 1, (i >> 1) as u8 & 1, i as u8 & 1]))
}

fn mark(x: u8) -> &'static str {
    if x == CIRCLE { "circle" } else { "dot" }
}

fn report(rec: Recorder, seen: [u8; 3], draw: usize, majority: u8, bob: f64, outcome: String) -> GameReport {
    let mut rep = GameReport::new("card")
        .param("up_faces", seen)
        .param("draw", draw)
        .param("majority", mark(majority));
    rep.transcript = rec.into_steps();
    rep.outcome = outcome;
    rep.payoffs.insert("bob".into(), bob);
    rep.payoffs.insert("alice".into(), -bob);
    rep
}

/// One round from the up-faces `r` alone. If the drawn card shows the
/// majority mark it is the mixed card or the matching double card with
/// equal odds, so `rng` settles it.
pub fn card_game_round(r: [u8; 3], draw: usize, rng: &mut RandomSource) -> Result<GameReport> {
    if draw > 2 {
        return domain(format!("draw index {draw} out of range"));
    }
    let majority = check_faces(r)?;
    let (rec, seen) = query(r, rng)?;
    let mut rep = if seen[draw] != majority {
        report(rec, seen, draw, majority, 0.0, "Bob withdraws: the drawn card is a double".into())
    } else if rng.coin() {
        report(rec, seen, draw, majority, 1.0, "mixed card: Bob wins".into())
    } else {
        report(rec, seen, draw, majority, -1.0, "double card: Alice wins".into())
    };
    let plays = if seen[draw] == majority { 1.0 } else { 0.0 };
    rep.probabilities.insert("bob_plays".into(), plays);
    rep.probabilities.insert("bob_wins".into(), 0.5 * plays);
    Ok(rep)
}

/// One round for a fully specified deal; the result is deterministic.
pub fn card_game_deal_round(deal: &CardDeal, draw: usize) -> Result<GameReport> {
    if draw > 2 {
        return domain(format!("draw index {draw} out of range"));
    }
    let r = deal.up_faces();
    let majority = check_faces(r)?;
    let (rec, seen) = query(r, &mut RandomSource::new(0))?;
    let mut rep = if seen[draw] != majority {
        report(rec, seen, draw, majority, 0.0, "Bob withdraws: the drawn card is a double".into())
    } else if deal.order[draw] == Card::Mixed {
        report(rec, seen, draw, majority, 1.0, "mixed card: Bob wins".into())
    } else {
        report(rec, seen, draw, majority, -1.0, "double card: Alice wins".into())
    };
    rep.params.insert("deal".into(), serde_json::to_value(deal).expect("plain data"));
    Ok(rep)
}

/// Bob's expected payoff over uniformly random deals and draws, by
/// enumerating all 36 cases.
pub fn card_game_expected_payoff() -> Result<f64> {
    let deals = CardDeal::all();
    let mut total = 0.0;
    for d in &deals {
        for draw in 0..3 {
            total += card_game_deal_round(d, draw)?.payoff("bob").expect("always set");
        }
    }
    Ok(total / (deals.len() * 3) as f64)
}

/// Bob's expected payoff in the classical game, without query or withdrawal.
pub fn card_game_classical_payoff() -> f64 {
    let mut total = 0.0;
    for d in CardDeal::all() {
        for c in d.order {
            total += if c == Card::Mixed { 1.0 } else { -1.0 };
        }
    }
    total / 36.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn query_gate_maps_zero_to_r() {
        for r in [0u8, 1] {
            let s = StateVector::basis_index(&[2], 0).unwrap().apply(&card_query_gate(r), &[0]).unwrap();
            assert!(s.approx_eq(&StateVector::basis_index(&[2], r as usize).unwrap(), 1e-12));
        }
    }

    #[test]
    fn query_reads_faces() {
        let rep = card_game_round([0, 1, 1], 0, &mut RandomSource::new(5)).unwrap();
        assert_eq!(rep.params["up_faces"], serde_json::json!([0, 1, 1]));
        // circle under a dot majority: withdraw
        assert_eq!(rep.payoff("bob"), Some(0.0));
        rep.replay().unwrap();
    }

    #[test]
    fn illegal_deals_rejected() {
        assert!(card_game_round([0, 0, 0], 0, &mut RandomSource::new(0)).is_err());
        assert!(card_game_round([1, 1, 1], 1, &mut RandomSource::new(0)).is_err());
        assert!(card_game_round([0, 2, 1], 1, &mut RandomSource::new(0)).is_err());
        assert!(card_game_round([0, 1, 1], 3, &mut RandomSource::new(0)).is_err());
    }

    #[test]
    fn quantum_game_is_fair() {
        assert_eq!(CardDeal::all().len(), 12);
        assert!(card_game_expected_payoff().unwrap().abs() < 1e-15);
        assert!((card_game_classical_payoff() + 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn withdrawal_only_on_minority() {
        for d in CardDeal::all() {
            for draw in 0..3 {
                let rep = card_game_deal_round(&d, draw).unwrap();
                let withdrew = rep.payoff("bob") == Some(0.0);
                let faces = d.up_faces();
                let maj = check_faces(faces).unwrap();
                assert_eq!(withdrew, faces[draw] != maj);
                // the minority card is always a double, so withdrawing never forfeits a win
                if withdrew {
                    assert_ne!(d.order[draw], Card::Mixed);
                }
            }
        }
    }
}
