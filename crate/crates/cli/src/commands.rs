use serde_json::{json, Value};

use qugame::cgame::{ess_test, mixed_nash_2x2, pareto_analysis, pure_nash, Bimatrix};
use qugame::density::{
    channel_from_measurement, discrimination_cost, estimation_game, uqcm_clone, BlochVector, DensityMatrix,
    DiscriminationProblem,
};
use qugame::qalgo::{bernstein_vazirani, grover_search, grover_search_with_iterations, rsa_demo, shor_factor};
use qugame::qgames::{
    admissible_inputs, card_game_classical_payoff, card_game_deal_round, card_game_expected_payoff, card_game_round,
    ewl_report, ewl_table, guess_number_game_with, newcomb_play, pseudo_telepathy_report, secret_share_qubit,
    secret_share_qutrit, snap_table, spin_flip_play_from, teleport, CardDeal, GameReport, Move, MoveSet, NewcombMode,
    SharePair,
};
use qugame::qstate::{ForcedOutcomes, ForcedThenRandom, RandomSource, StateVector};
use qugame::{c64, Complex64, Error, Result};

use crate::args::{BosArgs, Command, EwlArgs, NewcombArg, QubitArgs, TableGame};
use crate::render::{Grid, Output};

fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

fn report(rep: GameReport) -> Output {
    Output::new(serde_json::to_value(rep).expect("reports always serialize"))
}

fn qubit(q: &QubitArgs) -> Result<StateVector> {
    let (s, c) = (q.theta / 2.0).sin_cos();
    StateVector::qubit(c64(c, 0.0), Complex64::from_polar(s, q.phi))
}

fn moves(names: &[String]) -> Result<MoveSet> {
    MoveSet::from_names(names)
}

fn one_move(name: &str) -> Result<Move> {
    Ok(moves(&[name.to_string()])?.moves()[0].clone())
}

fn bos(p: &BosArgs) -> Result<Bimatrix> {
    Bimatrix::battle_of_sexes(p.alpha, p.beta, p.gamma)
}

pub fn payoff_grid(title: &str, g: &Bimatrix) -> Grid {
    Grid {
        title: title.to_string(),
        rows: g.row_moves().to_vec(),
        cols: g.col_moves().to_vec(),
        cells: (0..g.rows()).map(|i| (0..g.cols()).map(|j| g.cell(i, j)).collect()).collect(),
    }
}

pub fn run(cmd: &Command, seed: u64) -> Result<Output> {
    let mut rng = RandomSource::new(seed);
    match cmd {
        Command::Grover { n, target, iterations } => grover(*n, *target, *iterations),
        Command::Bv { n, secret } => Ok(Output::new(to_value(bernstein_vazirani(*n, *secret)?))),
        Command::Shor { modulus, max_rounds } => Ok(Output::new(to_value(shor_factor(*modulus, &mut rng, *max_rounds)?))),
        Command::Rsa { modulus, e, cipher } => Ok(Output::new(to_value(rsa_demo(*modulus, *e, *cipher, &mut rng)?))),
        Command::Spinflip { bob1, alice, bob2, initial } => {
            let start = match initial.trim() {
                "u" | "0" => StateVector::basis_index(&[2], 0)?,
                "d" | "1" => StateVector::basis_index(&[2], 1)?,
                other => return domain(format!("initial spin must be u or d, got '{other}'")),
            };
            let rep = spin_flip_play_from(&start, &one_move(bob1)?, &one_move(alice)?, &one_move(bob2)?, &mut rng)?;
            Ok(report(rep))
        }
        Command::Guess { variant, n, secret } => {
            Ok(report(guess_number_game_with(variant.parse()?, *n, *secret, &mut rng)?))
        }
        Command::Pd(m) => ewl("pd", m, &Bimatrix::prisoners_dilemma(), &mut rng),
        Command::Bos { moves, prefs } => ewl("bos", moves, &bos(prefs)?, &mut rng),
        Command::Newcomb { sb, w, mode } => {
            let mode = match mode {
                NewcombArg::Mixture => NewcombMode::Mixture,
                NewcombArg::CoherentShorthand => NewcombMode::CoherentShorthand,
            };
            Ok(report(newcomb_play(*sb, *w, mode, &mut rng)?))
        }
        Command::Ess { moves, incumbent, mutant, eta } => ess(moves, incumbent.as_deref(), mutant.as_deref(), *eta),
        Command::Card { faces, draw, expected } => card(faces.as_deref(), *draw, *expected, &mut rng),
        Command::Telepathy { inputs, players } => {
            let x = match inputs {
                Some(x) => x.clone(),
                None => {
                    let all = admissible_inputs(*players);
                    if all.is_empty() {
                        return domain(format!("no admissible inputs for {players} players"));
                    }
                    all[rng.range(0, all.len() as u64) as usize].clone()
                }
            };
            Ok(report(pseudo_telepathy_report(&x, &mut rng)?))
        }
        Command::Teleport { qubit: q, branch } => {
            let psi = qubit(q)?;
            let mut sel = forced(branch.iter().copied(), rng);
            Ok(report(teleport(&psi, &mut sel)?))
        }
        Command::SecretQubit { qubit: q, bell, bob } => {
            if bob.is_some() && bell.is_none() {
                return domain("forcing Bob's outcome needs --bell as well");
            }
            let psi = qubit(q)?;
            let mut sel = forced(bell.iter().chain(bob.iter()).copied(), rng);
            Ok(report(secret_share_qubit(&psi, &mut sel)?))
        }
        Command::SecretQutrit { amps, pair } => {
            let pair: SharePair = pair.parse()?;
            let secret = StateVector::normalized(vec![3], amps.iter().map(|&a| c64(a, 0.0)).collect())?;
            Ok(report(secret_share_qutrit(&secret, pair)?))
        }
        Command::Estimate { qubit: q, copies, threshold } => {
            Ok(report(estimation_game(&qubit(q)?, *copies, *threshold, &mut rng)?))
        }
        Command::Discriminate { priors, thetas, measure } => discriminate(priors, thetas, *measure),
        Command::Clone { qubit: q } => {
            let psi = qubit(q)?;
            let input = BlochVector::from_density(&DensityMatrix::from_pure(&psi))?;
            let r = uqcm_clone(&psi)?;
            let output = BlochVector::from_density(&r.clone)?;
            Ok(Output::new(json!({
                "input": psi.ket_string(),
                "bloch_in": input,
                "bloch_out": output,
                "clone": r.clone,
                "fidelity": r.fidelity,
                "eta": r.eta,
            })))
        }
        Command::Tables { game, moves: names, classical, prefs } => tables(*game, names, *classical, prefs),
        Command::Verify => unreachable!("verify is dispatched before run"),
    }
}

fn to_value(x: impl serde::Serialize) -> Value {
    serde_json::to_value(x).expect("results always serialize")
}

fn forced(prefix: impl Iterator<Item = usize>, rng: RandomSource) -> ForcedThenRandom {
    ForcedThenRandom {
        forced: ForcedOutcomes::new(prefix),
        rng,
    }
}

fn grover(n: usize, target: usize, iterations: Option<u64>) -> Result<Output> {
    let run = match iterations {
        Some(k) => grover_search_with_iterations(n, target, k)?,
        None => grover_search(n, target)?,
    };
    let other = if target == 0 { 1 } else { 0 };
    let iterates: Vec<Value> = run
        .trajectory
        .iter()
        .enumerate()
        .map(|(i, s)| json!({"step": i, "target": s.amp(target).re, "other": s.amp(other).re}))
        .collect();
    Ok(Output::new(json!({
        "n": run.n,
        "target": run.target,
        "k": run.k,
        "theta": run.theta,
        "success_probability": run.success_probability,
        "trajectory_complete": run.trajectory_complete,
        "amplitudes": iterates,
    })))
}

fn ewl(game: &str, m: &EwlArgs, table: &Bimatrix, rng: &mut RandomSource) -> Result<Output> {
    let rep = ewl_report(game, &one_move(&m.alice)?, &one_move(&m.bob)?, table, rng)?;
    Ok(report(rep).with_grid(payoff_grid(&format!("{game} payoffs"), table)))
}

fn ess(names: &[String], incumbent: Option<&str>, mutant: Option<&str>, eta: f64) -> Result<Output> {
    let set = moves(names)?;
    let table = snap_table(&ewl_table(&set, &Bimatrix::prisoners_dilemma())?, 4.0, 1e-9);
    let labels = set.labels();
    let index = |name: &str| {
        let m = one_move(name)?;
        match labels.iter().position(|l| *l == m.label) {
            Some(i) => Ok(i),
            None => domain(format!("move '{name}' is not among {labels:?}")),
        }
    };
    let pairs = match (incumbent, mutant) {
        (Some(i), Some(j)) => vec![(index(i)?, index(j)?)],
        _ => vec![(index("X")?, index("H")?), (index("H")?, index("Z")?)],
    };
    let mut tests = Vec::new();
    for (i, j) in pairs {
        let r = ess_test(&table, i, j, eta)?;
        tests.push(json!({
            "incumbent": labels[i],
            "mutant": labels[j],
            "stable": r.stable,
            "fitness_incumbent": r.fitness_incumbent,
            "fitness_mutant": r.fitness_mutant,
            "invasion_barrier": r.invasion_barrier,
        }));
    }
    Ok(Output::new(json!({"moves": labels, "eta": eta, "tests": tests})).with_grid(payoff_grid("population payoffs", &table)))
}

fn card(faces: Option<&[u8]>, draw: Option<usize>, expected: bool, rng: &mut RandomSource) -> Result<Output> {
    if expected {
        return Ok(Output::new(json!({
            "quantum_expected_bob": card_game_expected_payoff()?,
            "classical_expected_bob": card_game_classical_payoff(),
        })));
    }
    let draw = match draw {
        Some(d) => d,
        None => rng.range(0, 3) as usize,
    };
    let rep = match faces {
        Some(f) => {
            let Ok(r) = <[u8; 3]>::try_from(f) else {
                return domain(format!("need three faces, got {}", f.len()));
            };
            card_game_round(r, draw, rng)?
        }
        None => {
            let deals = CardDeal::all();
            card_game_deal_round(&deals[rng.range(0, deals.len() as u64) as usize], draw)?
        }
    };
    Ok(report(rep))
}

fn discriminate(priors: &[f64], thetas: &[f64], measure: f64) -> Result<Output> {
    let pure = |t: f64| {
        let (s, c) = (t / 2.0).sin_cos();
        StateVector::qubit(c64(c, 0.0), c64(s, 0.0))
    };
    let states = thetas.iter().map(|&t| Ok(DensityMatrix::from_pure(&pure(t)?))).collect::<Result<Vec<_>>>()?;
    let basis = [pure(measure)?, pure(measure + std::f64::consts::PI)?];
    let channel = channel_from_measurement(&states, &basis)?;
    let k = priors.len();
    let costs = (0..k).map(|m| (0..k).map(|j| if m == j { 0.0 } else { 1.0 }).collect()).collect();
    let problem = DiscriminationProblem::new(priors.to_vec(), states, costs, channel.clone())?;
    let (cost, error) = discrimination_cost(&problem)?;
    Ok(Output::new(json!({
        "priors": priors,
        "thetas": thetas,
        "measure": measure,
        "channel": channel,
        "bayes_cost": cost,
        "error_probability": error,
    })))
}

fn tables(game: TableGame, names: &[String], classical: bool, prefs: &BosArgs) -> Result<Output> {
    let (name, base) = match game {
        TableGame::Pd => ("pd", Bimatrix::prisoners_dilemma()),
        TableGame::Bos => ("bos", bos(prefs)?),
    };
    let (kind, g) = if classical {
        ("classical", base)
    } else {
        ("quantum", snap_table(&ewl_table(&moves(names)?, &base)?, 4.0, 1e-9))
    };
    let cell = |&(i, j): &(usize, usize)| json!([g.row_moves()[i], g.col_moves()[j]]);
    let nash: Vec<Value> = pure_nash(&g).iter().map(cell).collect();
    let flags = pareto_analysis(&g);
    let optimal: Vec<Value> = g.cells().filter(|&(i, j)| flags[i][j].pareto_optimal).map(|c| cell(&c)).collect();
    let mut value = json!({
        "game": name,
        "kind": kind,
        "table": g,
        "nash": nash,
        "pareto_optimal": optimal,
    });
    if g.rows() == 2 && g.cols() == 2 {
        value["mixed_nash"] = to_value(mixed_nash_2x2(&g)?);
    }
    Ok(Output::new(value).with_grid(payoff_grid(&format!("{name} ({kind})"), &g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn out(argv: &[&str]) -> Output {
        let cli = crate::args::Cli::try_parse_from(std::iter::once("qugame").chain(argv.iter().copied())).unwrap();
        run(&cli.command.unwrap(), 1).unwrap()
    }

    #[test]
    fn grover_reports_optimal_count() {
        let v = out(&["grover", "--n", "3", "--target", "5"]).value;
        assert_eq!(v["k"], 2);
        assert!((v["success_probability"].as_f64().unwrap() - 0.9453).abs() < 5e-5);
    }

    #[test]
    fn table_viii_nash() {
        let v = out(&["tables", "--game", "pd", "--moves", "I,X,H,Z"]).value;
        assert_eq!(v["nash"], json!([["Z", "Z"]]));
        assert_eq!(v["table"]["payoff_a"][2][2], 2.25);
    }

    #[test]
    fn classical_bos_has_interior_mix() {
        let v = out(&["tables", "--game", "bos", "--classical"]).value;
        assert_eq!(v["mixed_nash"]["kind"], "interior");
    }

    #[test]
    fn ess_default_invasions() {
        let v = out(&["ess"]).value;
        assert_eq!(v["tests"][0]["stable"], false);
        assert_eq!(v["tests"][1]["stable"], false);
        let v = out(&["ess", "--incumbent", "H", "--mutant", "X"]).value;
        assert_eq!(v["tests"][0]["stable"], true);
    }

    #[test]
    fn forced_teleport_branch() {
        let v = out(&["teleport", "--branch", "3"]).value;
        assert_eq!(v["outcome"], "b3");
    }

    #[test]
    fn discrimination_of_orthogonal_states_is_perfect() {
        let v = out(&["discriminate", "--thetas", "0,3.141592653589793"]).value;
        assert!(v["error_probability"].as_f64().unwrap().abs() < 1e-12);
    }

    #[test]
    fn bad_faces_are_domain_errors() {
        let cli = crate::args::Cli::try_parse_from(["qugame", "card", "--faces", "0,1"]).unwrap();
        assert!(matches!(run(&cli.command.unwrap(), 0), Err(Error::Domain(_))));
    }
}
