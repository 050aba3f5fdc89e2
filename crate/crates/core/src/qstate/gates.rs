use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::limits::Limits;
use super::matrix::{CMatrix, UnitaryMatrix};
use super::state::StateVector;
use crate::error::{domain, Error, Result};

const O: Complex64 = Complex64::new(0.0, 0.0);
const L: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Named gates with fixed matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Identity(usize),
    PauliX,
    PauliY,
    PauliZ,
    Hadamard,
    /// Control on the first (more significant) qubit.
    Cnot,
    /// `diag(1, e^{iπ r})`; `r = 0` is the identity and `r = 1` is σ_z.
    Phase(f64),
    /// `diag(1, i)`.
    QuarterPhase,
}

impl Gate {
    /// Parses a gate identifier plus optional real parameter. The parameter
    /// is the dimension for `identity` and `r` for `phase`.
    pub fn parse(name: &str, param: Option<f64>) -> Result<Self> {
        let key = name.trim().to_ascii_lowercase();
        Ok(match key.as_str() {
            "identity" | "i" | "1" | "id" => {
                let d = param.unwrap_or(2.0);
                if d < 1.0 || d.fract() != 0.0 {
                    return domain(format!("identity dimension must be a positive integer, got {d}"));
                }
                Gate::Identity(d as usize)
            }
            "pauli_x" | "x" | "sigma_x" => Gate::PauliX,
            "pauli_y" | "y" | "sigma_y" => Gate::PauliY,
            "pauli_z" | "z" | "sigma_z" => Gate::PauliZ,
            "hadamard" | "h" => Gate::Hadamard,
            "cnot" | "cx" => Gate::Cnot,
            "phase" => match param {
                Some(r) => Gate::Phase(r),
                None => return domain("phase gate needs the parameter r"),
            },
            "quarter_phase" | "s" => Gate::QuarterPhase,
            _ => return domain(format!("unknown gate '{name}'")),
        })
    }

    pub fn matrix(&self) -> UnitaryMatrix {
        let rows = match *self {
            Gate::Identity(d) => return UnitaryMatrix::identity(d),
            Gate::PauliX => vec![vec![O, L], vec![L, O]],
            Gate::PauliY => vec![vec![O, -I], vec![I, O]],
            Gate::PauliZ => vec![vec![L, O], vec![O, -L]],
            Gate::Hadamard => {
                let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
                vec![vec![h, h], vec![h, -h]]
            }
            Gate::Cnot => vec![
                vec![L, O, O, O],
                vec![O, L, O, O],
                vec![O, O, O, L],
                vec![O, O, L, O],
            ],
            Gate::Phase(r) => vec![vec![L, O], vec![O, Complex64::from_polar(1.0, PI * r)]],
            Gate::QuarterPhase => vec![vec![L, O], vec![O, I]],
        };
        UnitaryMatrix::new_unchecked(CMatrix::from_rows(rows).expect("static gate table"))
    }
}

impl FromStr for Gate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Gate::parse(s, None)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Identity(d) => write!(f, "identity({d})"),
            Gate::PauliX => f.write_str("pauli_x"),
            Gate::PauliY => f.write_str("pauli_y"),
            Gate::PauliZ => f.write_str("pauli_z"),
            Gate::Hadamard => f.write_str("hadamard"),
            Gate::Cnot => f.write_str("cnot"),
            Gate::Phase(r) => write!(f, "phase({r})"),
            Gate::QuarterPhase => f.write_str("quarter_phase"),
        }
    }
}

/// Matrix of a gate given by name, e.g. `standard_gate("pauli_y", None)`.
pub fn standard_gate(name: &str, param: Option<f64>) -> Result<UnitaryMatrix> {
    Ok(Gate::parse(name, param)?.matrix())
}

pub fn identity(dim: usize) -> UnitaryMatrix {
    UnitaryMatrix::identity(dim)
}
pub fn pauli_x() -> UnitaryMatrix {
    Gate::PauliX.matrix()
}
pub fn pauli_y() -> UnitaryMatrix {
    Gate::PauliY.matrix()
}
pub fn pauli_z() -> UnitaryMatrix {
    Gate::PauliZ.matrix()
}
pub fn hadamard() -> UnitaryMatrix {
    Gate::Hadamard.matrix()
}
pub fn cnot() -> UnitaryMatrix {
    Gate::Cnot.matrix()
}
pub fn quarter_phase() -> UnitaryMatrix {
    Gate::QuarterPhase.matrix()
}

/// Walsh–Hadamard transform on `n` qubits, `H^{⊗n}`.
pub fn walsh(n: usize) -> Result<UnitaryMatrix> {
    walsh_with_limits(n, &Limits::default())
}

pub fn walsh_with_limits(n: usize, limits: &Limits) -> Result<UnitaryMatrix> {
    if n == 0 {
        return domain("walsh transform needs at least one qubit");
    }
    limits.check_matrix_qubits(n)?;
    let dim = 1usize << n;
    let scale = 1.0 / (dim as f64).sqrt();
    let mut m = CMatrix::zeros(dim);
    for x in 0..dim {
        for y in 0..dim {
            let sign = if (x & y).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            m.set(x, y, Complex64::new(sign * scale, 0.0));
        }
    }
    Ok(UnitaryMatrix::new_unchecked(m))
}

/// Quantum Fourier transform on `n` qubits: entry `(x, y) = e^{±2πi xy/2^n}/√2^n`,
/// with the minus sign when `inverse` is set.
pub fn qft(n: usize, inverse: bool) -> Result<UnitaryMatrix> {
    qft_with_limits(n, inverse, &Limits::default())
}

pub fn qft_with_limits(n: usize, inverse: bool, limits: &Limits) -> Result<UnitaryMatrix> {
    if n == 0 {
        return domain("qft needs at least one qubit");
    }
    limits.check_matrix_qubits(n)?;
    let dim = 1usize << n;
    let sign = if inverse { -1.0 } else { 1.0 };
    let scale = 1.0 / (dim as f64).sqrt();
    let mut m = CMatrix::zeros(dim);
    for x in 0..dim {
        for y in 0..dim {
            // reduce xy mod dim before converting, keeps the angle small
            let k = (x * y) % dim;
            let angle = sign * 2.0 * PI * k as f64 / dim as f64;
            m.set(x, y, Complex64::from_polar(scale, angle));
        }
    }
    Ok(UnitaryMatrix::new_unchecked(m))
}

/// Applies the QFT to an entire register without forming the matrix
/// (FFT over the full index range).
pub fn apply_qft(state: &StateVector, inverse: bool) -> StateVector {
    let q = state.len();
    let mut buf = state.amps().to_vec();
    let mut planner = FftPlanner::<f64>::new();
    // rustfft's forward transform uses e^{-2πi xy/Q}
    let fft = if inverse {
        planner.plan_fft_forward(q)
    } else {
        planner.plan_fft_inverse(q)
    };
    fft.process(&mut buf);
    let scale = 1.0 / (q as f64).sqrt();
    for a in &mut buf {
        *a *= scale;
    }
    StateVector::from_parts_unchecked(state.dims().to_vec(), buf)
}

/// Applies a Hadamard to every listed qubit.
pub fn apply_walsh(state: &StateVector, qubits: &[usize]) -> Result<StateVector> {
    let h = hadamard();
    qubits
        .iter()
        .try_fold(state.clone(), |s, &q| s.apply(&h, &[q]))
}

/// Walsh–Hadamard transform of a whole qubit register by in-place
/// butterflies, `O(n 2^n)`; same result as applying [`walsh`] densely.
pub fn apply_walsh_all(state: &StateVector) -> Result<StateVector> {
    if state.dims().iter().any(|&d| d != 2) {
        return domain("walsh transform needs a qubit register");
    }
    let mut a = state.amps().to_vec();
    let len = a.len();
    let mut h = 1;
    while h < len {
        for block in (0..len).step_by(2 * h) {
            for i in block..block + h {
                let (x, y) = (a[i], a[i + h]);
                a[i] = x + y;
                a[i + h] = x - y;
            }
        }
        h *= 2;
    }
    let scale = 1.0 / (len as f64).sqrt();
    for v in &mut a {
        *v *= scale;
    }
    Ok(StateVector::from_parts_unchecked(state.dims().to_vec(), a))
}

/// Unitary permuting basis states of a register of dimension `dim`.
/// `map` must be a bijection on `0..dim`.
pub fn permutation_unitary(dim: usize, map: impl Fn(usize) -> usize) -> Result<UnitaryMatrix> {
    let mut m = CMatrix::zeros(dim);
    let mut hit = vec![false; dim];
    for col in 0..dim {
        let row = map(col);
        if row >= dim || hit[row] {
            return domain("basis map is not a permutation");
        }
        hit[row] = true;
        m.set(row, col, L);
    }
    Ok(UnitaryMatrix::new_unchecked(m))
}

/// Bell states. For `n == 2` returns `[b0, b1, b2, b3]`; for `n > 2` the
/// N-qubit pair `[b0^N, b2^N] = (|0…0> ± |1…1>)/√2`.
pub fn bell_basis(n: usize) -> Result<Vec<StateVector>> {
    if n < 2 {
        return domain(format!("Bell states need at least 2 qubits, got {n}"));
    }
    Limits::default().check_state_qubits(n)?;
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let dim = 1usize << n;
    let pair = |i: usize, j: usize, sign: f64| {
        let mut amps = vec![O; dim];
        amps[i] = h;
        amps[j] += h * sign;
        StateVector::new(vec![2; n], amps).expect("Bell state is normalized")
    };
    if n == 2 {
        Ok(vec![pair(0, 3, 1.0), pair(1, 2, 1.0), pair(0, 3, -1.0), pair(1, 2, -1.0)])
    } else {
        Ok(vec![pair(0, dim - 1, 1.0), pair(0, dim - 1, -1.0)])
    }
}
