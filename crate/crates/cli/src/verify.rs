//! Golden-value checks behind `qugame verify`.

use std::thread;

use qugame::cgame::{mixed_nash_2x2, pareto_analysis, pure_nash, Bimatrix, MixedNash};
use qugame::density::{measure_prob, rho_from_ensemble, uqcm_clone};
use qugame::qalgo::{bernstein_vazirani, grover_iterations, grover_search, rsa_demo};
use qugame::qgames::{
    admissible_inputs, card_game_classical_payoff, card_game_expected_payoff, ewl_table, newcomb_play,
    pseudo_telepathy_round, secret_share_qubit, secret_share_qutrit, snap_table, teleport, MoveSet, NewcombMode,
    SharePair,
};
use qugame::qstate::{CMatrix, ForcedOutcomes, RandomSource, StateVector};
use qugame::{c64, Complex64};

type Cell = (f64, f64);

/// Reference values. Kept in one place so a test can perturb one and watch
/// the matching check fail.
#[derive(Debug, Clone)]
pub struct Goldens {
    pub grover_success: f64,
    pub grover_big_k: u64,
    pub rsa: (u64, u64, u64, u64, u64),
    pub pd_classical: [[Cell; 2]; 2],
    pub pd_quantum: [[Cell; 4]; 4],
    pub bos_quantum_xx: Cell,
    pub ensemble: [[Complex64; 2]; 2],
    pub ensemble_probs: (f64, f64),
    pub uqcm_fidelity: f64,
    pub uqcm_eta: f64,
    pub card_payoffs: (f64, f64),
}

impl Default for Goldens {
    fn default() -> Self {
        Self {
            grover_success: 0.9453,
            grover_big_k: 25735,
            rsa: (7, 11, 60, 11, 23),
            pd_classical: [[(3.0, 3.0), (0.0, 5.0)], [(5.0, 0.0), (1.0, 1.0)]],
            pd_quantum: [
                [(3.0, 3.0), (0.0, 5.0), (0.5, 3.0), (1.0, 1.0)],
                [(5.0, 0.0), (1.0, 1.0), (0.5, 3.0), (0.0, 5.0)],
                [(3.0, 0.5), (3.0, 0.5), (2.25, 2.25), (1.5, 4.0)],
                [(1.0, 1.0), (5.0, 0.0), (4.0, 1.5), (3.0, 3.0)],
            ],
            bos_quantum_xx: (2.0, 3.0),
            ensemble: [[c64(0.57, 0.0), c64(0.36, 0.12)], [c64(0.36, -0.12), c64(0.43, 0.0)]],
            ensemble_probs: (0.826, 0.174),
            uqcm_fidelity: 5.0 / 6.0,
            uqcm_eta: 2.0 / 3.0,
            card_payoffs: (0.0, -1.0 / 3.0),
        }
    }
}

pub type Outcome = Result<(), String>;
type Check = fn(&Goldens) -> Outcome;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn e(err: qugame::Error) -> String {
    err.to_string()
}

fn grover_small(g: &Goldens) -> Outcome {
    let run = grover_search(3, 5).map_err(e)?;
    ensure!(run.k == 2, "k = {}", run.k);
    let s = 8f64.sqrt().recip();
    let want = [(2.5 * s, 0.5 * s), (2.75 * s, -0.25 * s)];
    for (step, (t, o)) in want.iter().enumerate() {
        let st = &run.trajectory[step + 1];
        for x in 0..8 {
            let w = if x == 5 { *t } else { *o };
            ensure!((st.amp(x) - c64(w, 0.0)).norm() < 1e-9, "iterate {} at |{x}>", step + 1);
        }
    }
    ensure!((run.success_probability - g.grover_success).abs() < 5e-5, "success {}", run.success_probability);
    Ok(())
}

fn grover_big(g: &Goldens) -> Outcome {
    let k = grover_iterations(1 << 30).map_err(e)?;
    ensure!(k == g.grover_big_k, "k = {k}");
    Ok(())
}

fn bv(_: &Goldens) -> Outcome {
    for n in 1..=5usize {
        for a in 0..1usize << n {
            let r = bernstein_vazirani(n, a).map_err(e)?;
            ensure!(r.recovered == a && r.oracle_calls == 1, "n={n} a={a}");
        }
    }
    Ok(())
}

fn rsa(g: &Goldens) -> Outcome {
    let r = rsa_demo(77, 11, 67, &mut RandomSource::new(1)).map_err(e)?;
    let got = (r.p.min(r.q), r.p.max(r.q), r.phi, r.d, r.plaintext);
    ensure!(got == g.rsa, "(p, q, phi, d, plaintext) = {got:?}");
    Ok(())
}

fn same_table<const N: usize>(t: &Bimatrix, want: &[[Cell; N]; N]) -> Outcome {
    for (i, row) in want.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            ensure!(t.cell(i, j) == c, "cell ({i},{j}) = {:?}, want {c:?}", t.cell(i, j));
        }
    }
    Ok(())
}

fn pd_classical(g: &Goldens) -> Outcome {
    let pd = Bimatrix::prisoners_dilemma();
    same_table(&pd, &g.pd_classical)?;
    ensure!(pure_nash(&pd) == vec![(1, 1)], "Nash {:?}", pure_nash(&pd));
    ensure!(pareto_analysis(&pd)[1][1].jointly_dominated, "(D,D) not jointly dominated");
    Ok(())
}

fn pd_quantum(g: &Goldens) -> Outcome {
    let pd = Bimatrix::prisoners_dilemma();
    let t3 = snap_table(&ewl_table(&MoveSet::from_names(&["I", "X", "H"]).map_err(e)?, &pd).map_err(e)?, 4.0, 1e-9);
    let want3: [[Cell; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| g.pd_quantum[i][j]));
    same_table(&t3, &want3)?;
    let t4 = snap_table(&ewl_table(&MoveSet::quantum(), &pd).map_err(e)?, 4.0, 1e-9);
    same_table(&t4, &g.pd_quantum)?;
    ensure!(pure_nash(&t4) == vec![(3, 3)], "Nash {:?}", pure_nash(&t4));
    ensure!(pareto_analysis(&t4)[3][3].pareto_optimal, "(Z,Z) not Pareto optimal");
    Ok(())
}

fn bos_quantum(g: &Goldens) -> Outcome {
    let (al, be, ga) = (3.0, 2.0, 1.0);
    let bos = Bimatrix::battle_of_sexes(al, be, ga).map_err(e)?;
    let t = snap_table(&ewl_table(&MoveSet::quantum(), &bos).map_err(e)?, 4.0, 1e-9);
    ensure!(pure_nash(&t) == vec![(1, 1)], "Nash {:?}", pure_nash(&t));
    ensure!(t.cell(1, 1) == g.bos_quantum_xx, "(X,X) = {:?}", t.cell(1, 1));
    let iz = t.restrict(&[0, 3], &[0, 3]).map_err(e)?;
    match mixed_nash_2x2(&iz).map_err(e)? {
        MixedNash::Interior { p, q, payoff_a, .. } => {
            ensure!((p - 0.5).abs() < 1e-12 && (q - 0.5).abs() < 1e-12, "p={p} q={q}");
            ensure!((payoff_a - (al + be) / 2.0).abs() < 1e-12, "payoff {payoff_a}");
        }
        other => return Err(format!("no interior mix: {other:?}")),
    }
    Ok(())
}

fn ess(g: &Goldens) -> Outcome {
    let t = snap_table(&ewl_table(&MoveSet::quantum(), &Bimatrix::prisoners_dilemma()).map_err(e)?, 4.0, 1e-9);
    same_table(&t, &g.pd_quantum)?;
    let stable = |i, j| qugame::cgame::ess_test(&t, i, j, 0.01).map(|r| r.stable).map_err(e);
    ensure!(!stable(1, 2)?, "X resists H");
    ensure!(stable(2, 1)?, "H does not resist X");
    ensure!(!stable(2, 3)?, "H resists Z");
    ensure!(stable(3, 2)?, "Z does not resist H");
    Ok(())
}

fn newcomb(_: &Goldens) -> Outcome {
    for w in [0.0, 0.25, 0.5, 1.0] {
        let r = newcomb_play(0, w, NewcombMode::Mixture, &mut RandomSource::new(1)).map_err(e)?;
        ensure!(r.payoff("alice") == Some(1_000_000.0), "sb=0 w={w}: {:?}", r.payoff("alice"));
        let r = newcomb_play(1, w, NewcombMode::Mixture, &mut RandomSource::new(1)).map_err(e)?;
        ensure!(r.outcome == "|11>", "sb=1 w={w}: {}", r.outcome);
        let r = newcomb_play(1, w, NewcombMode::CoherentShorthand, &mut RandomSource::new(1)).map_err(e)?;
        let c = r.probability("coefficient").unwrap_or(f64::NAN);
        ensure!((c - (1.0 - 2.0 * w)).abs() < 1e-12, "coefficient {c} at w={w}");
    }
    Ok(())
}

fn card(g: &Goldens) -> Outcome {
    let q = card_game_expected_payoff().map_err(e)?;
    let c = card_game_classical_payoff();
    ensure!((q - g.card_payoffs.0).abs() < 1e-12 && (c - g.card_payoffs.1).abs() < 1e-12, "payoffs {q} {c}");
    Ok(())
}

fn telepathy(_: &Goldens) -> Outcome {
    for n in 2..=6 {
        for x in admissible_inputs(n) {
            for seed in 0..20 {
                let (_, win) = pseudo_telepathy_round(&x, &mut RandomSource::new(seed)).map_err(e)?;
                ensure!(win, "lost on {x:?} with seed {seed}");
            }
        }
    }
    Ok(())
}

fn sharing(_: &Goldens) -> Outcome {
    let psi = StateVector::qubit(c64(0.6, 0.0), c64(0.0, 0.8)).map_err(e)?;
    for k in 0..4 {
        let r = teleport(&psi, &mut ForcedOutcomes::new([k])).map_err(e)?;
        let f = r.probability("overlap").unwrap_or(0.0);
        ensure!((f - 1.0).abs() < 1e-9, "teleport b{k}: {f}");
        for bob in 0..2 {
            let r = secret_share_qubit(&psi, &mut ForcedOutcomes::new([k, bob])).map_err(e)?;
            let f = r.probability("overlap").unwrap_or(0.0);
            ensure!((f - 1.0).abs() < 1e-9, "qubit share ({k},{bob}): {f}");
        }
    }
    let secret = StateVector::normalized(vec![3], vec![c64(1.0, 0.0), c64(0.0, 2.0), c64(-1.0, 0.5)]).map_err(e)?;
    for pair in SharePair::ALL {
        let r = secret_share_qutrit(&secret, pair).map_err(e)?;
        let f = r.probability("overlap").unwrap_or(0.0);
        ensure!((f - 1.0).abs() < 1e-9, "qutrit {pair}: {f}");
    }
    Ok(())
}

fn density(g: &Goldens) -> Outcome {
    let s1 = StateVector::qubit(c64(0.8, 0.0), c64(0.6, 0.0)).map_err(e)?;
    let s2 = StateVector::qubit(c64(0.6, 0.0), c64(0.0, -0.8)).map_err(e)?;
    let rho = rho_from_ensemble(&[s1, s2], &[0.75, 0.25]).map_err(e)?;
    let want = CMatrix::from_rows(g.ensemble.iter().map(|r| r.to_vec()).collect()).map_err(e)?;
    ensure!(rho.matrix().approx_eq(&want, 1e-10), "rho = {rho:?}");
    let p1 = measure_prob(&rho, &StateVector::qubit(c64(0.6, 0.0), c64(0.8, 0.0)).map_err(e)?).map_err(e)?;
    let p2 = measure_prob(&rho, &StateVector::qubit(c64(0.8, 0.0), c64(-0.6, 0.0)).map_err(e)?).map_err(e)?;
    let (w1, w2) = g.ensemble_probs;
    ensure!((p1 - w1).abs() < 5e-4 && (p2 - w2).abs() < 5e-4, "probabilities {p1} {p2}");
    Ok(())
}

fn cloning(g: &Goldens) -> Outcome {
    let mut rng = RandomSource::new(11);
    for _ in 0..200 {
        let amps = (0..2).map(|_| c64(rng.uniform() - 0.5, rng.uniform() - 0.5)).collect();
        let psi = StateVector::normalized(vec![2], amps).map_err(e)?;
        let r = uqcm_clone(&psi).map_err(e)?;
        ensure!((r.fidelity - g.uqcm_fidelity).abs() < 1e-9, "fidelity {}", r.fidelity);
        ensure!((r.eta - g.uqcm_eta).abs() < 1e-9, "eta {}", r.eta);
    }
    Ok(())
}

pub const CHECKS: [(&str, Check); 14] = [
    ("grover-n3", grover_small),
    ("grover-2^30", grover_big),
    ("bernstein-vazirani", bv),
    ("rsa-77", rsa),
    ("pd-classical", pd_classical),
    ("pd-quantum", pd_quantum),
    ("bos-quantum", bos_quantum),
    ("ess-invasion", ess),
    ("newcomb", newcomb),
    ("card-game", card),
    ("telepathy", telepathy),
    ("teleport-and-sharing", sharing),
    ("density-ensemble", density),
    ("cloning", cloning),
];

/// Runs every check in parallel; results come back in `CHECKS` order.
pub fn verify_all(g: &Goldens) -> Vec<(&'static str, Outcome)> {
    thread::scope(|s| {
        let handles: Vec<_> = CHECKS.iter().map(|&(name, f)| (name, s.spawn(move || f(g)))).collect();
        handles
            .into_iter()
            .map(|(name, h)| (name, h.join().unwrap_or_else(|_| Err("panicked".into()))))
            .collect()
    })
}
