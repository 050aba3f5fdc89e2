//! Python bindings. Results come back as plain dicts and lists built from
//! the same JSON the CLI emits; failures raise `DomainError` (a
//! `ValueError`) or `ResourceError` (a `MemoryError`).

use pyo3::create_exception;
use pyo3::exceptions::{PyMemoryError, PyValueError};
use pyo3::prelude::*;

use qugame::cgame::{pure_nash as nash, Bimatrix};
use qugame::density::{estimation_game as estimate, uqcm_clone as clone};
use qugame::qalgo::{bernstein_vazirani as bv, grover_search as grover, rsa_demo as rsa, shor_factor as shor};
use qugame::qgames::{
    ewl_table as table, newcomb_play as newcomb, pseudo_telepathy_report, secret_share_qubit as share_qubit,
    secret_share_qutrit as share_qutrit, snap_table, teleport as tele, MoveSet, NewcombMode,
};
use qugame::qstate::{ForcedOutcomes, ForcedThenRandom, RandomSource, StateVector};
use qugame::{c64, Complex64};

create_exception!(qugame_py, DomainError, PyValueError);
create_exception!(qugame_py, ResourceError, PyMemoryError);

fn err(e: qugame::Error) -> PyErr {
    match e {
        qugame::Error::Domain(m) => DomainError::new_err(m),
        qugame::Error::Resource(m) => ResourceError::new_err(m),
    }
}

/// Hands a serializable result to Python's `json.loads`.
fn to_py(py: Python<'_>, x: impl serde::Serialize) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(&x).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn qubit(theta: f64, phi: f64) -> PyResult<StateVector> {
    let (s, c) = (theta / 2.0).sin_cos();
    StateVector::qubit(c64(c, 0.0), Complex64::from_polar(s, phi)).map_err(err)
}

fn selector(forced: Vec<usize>, seed: u64) -> ForcedThenRandom {
    ForcedThenRandom {
        forced: ForcedOutcomes::new(forced),
        rng: RandomSource::new(seed),
    }
}

#[pyfunction]
fn grover_search(py: Python<'_>, n: usize, target: usize) -> PyResult<Py<PyAny>> {
    let run = grover(n, target).map_err(err)?;
    let amps: Vec<f64> = run.final_state().amps().iter().map(|a| a.re).collect();
    to_py(
        py,
        serde_json::json!({
            "k": run.k,
            "theta": run.theta,
            "success_probability": run.success_probability,
            "final_amplitudes": amps,
        }),
    )
}

#[pyfunction]
fn bernstein_vazirani(py: Python<'_>, n: usize, secret: usize) -> PyResult<Py<PyAny>> {
    to_py(py, bv(n, secret).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (modulus, seed=0, max_rounds=qugame::qalgo::DEFAULT_MAX_ROUNDS))]
fn shor_factor(py: Python<'_>, modulus: u64, seed: u64, max_rounds: usize) -> PyResult<Py<PyAny>> {
    to_py(py, shor(modulus, &mut RandomSource::new(seed), max_rounds).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (modulus, e, cipher, seed=0))]
fn rsa_demo(py: Python<'_>, modulus: u64, e: u64, cipher: u64, seed: u64) -> PyResult<Py<PyAny>> {
    to_py(py, rsa(modulus, e, cipher, &mut RandomSource::new(seed)).map_err(err)?)
}

/// Payoff table of the entangled game over `moves`. `game` is "pd" or
/// "bos"; the preferences only matter for "bos".
#[pyfunction]
#[pyo3(signature = (game="pd", moves=vec!["I".to_string(), "X".into(), "H".into(), "Z".into()], alpha=3.0, beta=2.0, gamma=1.0))]
fn ewl_table(py: Python<'_>, game: &str, moves: Vec<String>, alpha: f64, beta: f64, gamma: f64) -> PyResult<Py<PyAny>> {
    let base = match game {
        "pd" => Bimatrix::prisoners_dilemma(),
        "bos" => Bimatrix::battle_of_sexes(alpha, beta, gamma).map_err(err)?,
        other => return Err(DomainError::new_err(format!("unknown game '{other}'"))),
    };
    let set = MoveSet::from_names(&moves).map_err(err)?;
    to_py(py, snap_table(&table(&set, &base).map_err(err)?, 4.0, 1e-9))
}

/// Pure Nash cells `(row, col)` of the bimatrix game `(a, b)`.
#[pyfunction]
fn pure_nash(a: Vec<Vec<f64>>, b: Vec<Vec<f64>>) -> PyResult<Vec<(usize, usize)>> {
    let labels = |n: usize| (0..n).map(|k| k.to_string()).collect::<Vec<_>>();
    let (r, c) = (a.len(), a.first().map_or(0, Vec::len));
    let g = Bimatrix::new(labels(r), labels(c), a, b).map_err(err)?;
    Ok(nash(&g))
}

#[pyfunction]
#[pyo3(signature = (sb, w, coherent=false, seed=0))]
fn newcomb_play(py: Python<'_>, sb: u8, w: f64, coherent: bool, seed: u64) -> PyResult<Py<PyAny>> {
    let mode = if coherent { NewcombMode::CoherentShorthand } else { NewcombMode::Mixture };
    to_py(py, newcomb(sb, w, mode, &mut RandomSource::new(seed)).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (inputs, seed=0))]
fn pseudo_telepathy(py: Python<'_>, inputs: Vec<u8>, seed: u64) -> PyResult<Py<PyAny>> {
    to_py(py, pseudo_telepathy_report(&inputs, &mut RandomSource::new(seed)).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (theta, phi, branch=None, seed=0))]
fn teleport(py: Python<'_>, theta: f64, phi: f64, branch: Option<usize>, seed: u64) -> PyResult<Py<PyAny>> {
    let psi = qubit(theta, phi)?;
    to_py(py, tele(&psi, &mut selector(branch.into_iter().collect(), seed)).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (theta, phi, forced=vec![], seed=0))]
fn secret_share_qubit(py: Python<'_>, theta: f64, phi: f64, forced: Vec<usize>, seed: u64) -> PyResult<Py<PyAny>> {
    let psi = qubit(theta, phi)?;
    to_py(py, share_qubit(&psi, &mut selector(forced, seed)).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (amps, pair="ab"))]
fn secret_share_qutrit(py: Python<'_>, amps: Vec<f64>, pair: &str) -> PyResult<Py<PyAny>> {
    let secret = StateVector::normalized(vec![3], amps.into_iter().map(|a| c64(a, 0.0)).collect()).map_err(err)?;
    to_py(py, share_qutrit(&secret, pair.parse().map_err(err)?).map_err(err)?)
}

#[pyfunction]
fn uqcm_clone(py: Python<'_>, theta: f64, phi: f64) -> PyResult<Py<PyAny>> {
    to_py(py, clone(&qubit(theta, phi)?).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (theta, phi, copies, threshold=0.95, seed=0))]
fn estimation_game(py: Python<'_>, theta: f64, phi: f64, copies: u64, threshold: f64, seed: u64) -> PyResult<Py<PyAny>> {
    let psi = qubit(theta, phi)?;
    to_py(py, estimate(&psi, copies, threshold, &mut RandomSource::new(seed)).map_err(err)?)
}

#[pymodule]
fn qugame_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DomainError", m.py().get_type::<DomainError>())?;
    m.add("ResourceError", m.py().get_type::<ResourceError>())?;
    m.add_function(wrap_pyfunction!(grover_search, m)?)?;
    m.add_function(wrap_pyfunction!(bernstein_vazirani, m)?)?;
    m.add_function(wrap_pyfunction!(shor_factor, m)?)?;
    m.add_function(wrap_pyfunction!(rsa_demo, m)?)?;
    m.add_function(wrap_pyfunction!(ewl_table, m)?)?;
    m.add_function(wrap_pyfunction!(pure_nash, m)?)?;
    m.add_function(wrap_pyfunction!(newcomb_play, m)?)?;
    m.add_function(wrap_pyfunction!(pseudo_telepathy, m)?)?;
    m.add_function(wrap_pyfunction!(teleport, m)?)?;
    m.add_function(wrap_pyfunction!(secret_share_qubit, m)?)?;
    m.add_function(wrap_pyfunction!(secret_share_qutrit, m)?)?;
    m.add_function(wrap_pyfunction!(uqcm_clone, m)?)?;
    m.add_function(wrap_pyfunction!(estimation_game, m)?)?;
    Ok(())
}
