//! Guess-a-number games. Alice hides `a` in `0..2^n` and acts as the oracle;
//! Bob wins +1 from Alice if his final guess is right and pays 1 otherwise.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::qalgo::{bernstein_vazirani, grover_iterations, grover_operators, grover_search, grover_success_probability};
use crate::qstate::{apply_walsh_all, Basis, Limits, OutcomeSelector, RandomSource, StateVector};

use super::report::{GameReport, Recorder};

/// Registers up to this size get a step-by-step transcript.
pub const DETAIL_QUBITS: usize = 10;

/// Dense operators go into the transcript up to this size.
const DENSE_QUBITS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GuessVariant {
    /// Bob queries with Grover iterations.
    I,
    /// One Bernstein–Vazirani query, then a final guess.
    II,
}

impl std::str::FromStr for GuessVariant {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(GuessVariant::I),
            "II" | "2" => Ok(GuessVariant::II),
            _ => domain(format!("unknown guess-a-number variant '{s}'")),
        }
    }
}

/// Runs the game, sampling Bob's final measurement with seed 0.
pub fn guess_number_game(variant: GuessVariant, n: usize, a: u64) -> Result<GameReport> {
    guess_number_game_with(variant, n, a, &mut RandomSource::new(0))
}

pub fn guess_number_game_with(
    variant: GuessVariant,
    n: usize,
    a: u64,
    sel: &mut dyn OutcomeSelector,
) -> Result<GameReport> {
    if n == 0 || n >= 64 || a >= 1u64 << n {
        return domain(format!("secret {a} out of range for {n} qubits"));
    }
    match variant {
        GuessVariant::I => game_one(n, a, sel),
        GuessVariant::II => game_two(n, a as usize, sel),
    }
}

fn settle(mut rep: GameReport, guess: Option<u64>, a: u64, win: f64) -> GameReport {
    let bob = match guess {
        Some(g) if g == a => 1.0,
        Some(_) => -1.0,
        None => 2.0 * win - 1.0,
    };
    rep.outcome = match guess {
        Some(g) if g == a => format!("Bob guesses {g}: correct"),
        Some(g) => format!("Bob guesses {g}: wrong"),
        None => "not sampled (register beyond the simulation cap)".into(),
    };
    rep.payoffs.insert("bob".into(), bob);
    rep.payoffs.insert("alice".into(), -bob);
    rep.probabilities.insert("win".into(), win);
    rep
}

fn game_one(n: usize, a: u64, sel: &mut dyn OutcomeSelector) -> Result<GameReport> {
    let space = 1u64 << n;
    let k = grover_iterations(space)?;
    let base = GameReport::new("guess_number_I")
        .param("n", n)
        .param("secret", a)
        .param("k", k)
        .param("oracle_calls", k)
        .param("classical_queries_for_half", space / 2);

    if Limits::default().check_state_qubits(n).is_err() {
        // beyond the statevector cap only the closed form is available
        let mut rep = base.param("analytic", true);
        let mut rec = Recorder::new();
        rec.note("bob", format!("{k} rounds of R_s R_a from the uniform superposition (closed form)"));
        rep.transcript = rec.into_steps();
        return Ok(settle(rep, None, a, grover_success_probability(n, k)));
    }

    let run = grover_search(n, a as usize)?;
    let mut rec = Recorder::new();
    let guess;
    if n <= DETAIL_QUBITS {
        let dims = vec![2; n];
        rec.prepare("bob", "W|0...0>", StateVector::uniform(&dims)?);
        rec.note("bob", "the ancilla (|0> - |1>)/sqrt2 turns U_fa into the phase flip R_a");
        let dense = if n <= DENSE_QUBITS { Some(grover_operators(n, a as usize)?) } else { None };
        let all: Vec<usize> = (0..n).collect();
        for step in 1..=k {
            match &dense {
                Some((oracle, diffusion)) => {
                    rec.apply("alice", &format!("R_a ({step})"), oracle, &all)?;
                    rec.apply("bob", &format!("R_s ({step})"), diffusion, &all)?;
                }
                None => {
                    let mut amps = rec.state().amps().to_vec();
                    amps[a as usize] = -amps[a as usize];
                    rec.transform("alice", &format!("R_a ({step})"), &all, StateVector::new(dims.clone(), amps.clone())?);
                    let mean = amps.iter().sum::<crate::Complex64>() / amps.len() as f64;
                    let next: Vec<_> = amps.iter().map(|&x| mean * 2.0 - x).collect();
                    rec.transform("bob", &format!("R_s ({step})"), &all, StateVector::new(dims.clone(), next)?);
                }
            }
        }
        let m = rec.measure("bob", "guess", &all, &Basis::computational(&dims)?, sel)?;
        guess = m.outcome_index as u64;
    } else {
        rec.note("bob", format!("{k} rounds of R_s R_a, transcript summarized above {DETAIL_QUBITS} qubits"));
        let p = run.final_state().probabilities();
        guess = sel.select(&p)? as u64;
    }
    let mut rep = base;
    rep.transcript = rec.into_steps();
    Ok(settle(rep, Some(guess), a, run.success_probability))
}

fn game_two(n: usize, a: usize, sel: &mut dyn OutcomeSelector) -> Result<GameReport> {
    let run = bernstein_vazirani(n, a)?;
    let mut rep = GameReport::new("guess_number_II")
        .param("n", n)
        .param("secret", a)
        .param("oracle_calls", run.oracle_calls);
    let mut rec = Recorder::new();
    let guess;
    if n <= DETAIL_QUBITS {
        let dims = vec![2; n];
        let all: Vec<usize> = (0..n).collect();
        rec.prepare("bob", "|0...0>", StateVector::basis_index(&dims, 0)?);
        let s = apply_walsh_all(rec.state())?;
        rec.transform("bob", "W", &all, s);
        let amps = rec
            .state()
            .amps()
            .iter()
            .enumerate()
            .map(|(x, &v)| if (x & a).count_ones() % 2 == 1 { -v } else { v })
            .collect();
        rec.transform("alice", "T_bv^a", &all, StateVector::new(dims.clone(), amps)?);
        let s = apply_walsh_all(rec.state())?;
        rec.transform("bob", "W", &all, s);
        let m = rec.measure("bob", "final guess", &all, &Basis::computational(&dims)?, sel)?;
        guess = m.outcome_index as u64;
    } else {
        rec.note("bob", format!("W, T_bv^a, W; transcript summarized above {DETAIL_QUBITS} qubits"));
        guess = run.recovered as u64;
    }
    rep.transcript = rec.into_steps();
    Ok(settle(rep, Some(guess), a as u64, run.probability))
}
