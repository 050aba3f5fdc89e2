use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::limits::Limits;
use super::matrix::{CMatrix, UnitaryMatrix};
use crate::error::{domain, resource, Result};

/// Norm tolerance for a state to count as normalized.
pub const NORM_TOL: f64 = 1e-10;
/// Tolerance used by [`StateVector::equal_up_to_phase`].
pub const PHASE_EQ_TOL: f64 = 1e-8;

/// Normalized amplitude vector over an ordered list of subsystems.
///
/// `amps.len() == dims.iter().product()` always holds; the leftmost entry of
/// `dims` is the most significant digit of the basis index.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateJson", into = "StateJson")]
pub struct StateVector {
    dims: Vec<usize>,
    amps: Vec<Complex64>,
}

/// Wire form: `{"dims": [...], "amps": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
pub struct StateJson {
    pub dims: Vec<usize>,
    pub amps: Vec<[f64; 2]>,
}

impl TryFrom<StateJson> for StateVector {
    type Error = crate::Error;
    fn try_from(j: StateJson) -> Result<Self> {
        let amps = j.amps.iter().map(|a| Complex64::new(a[0], a[1])).collect();
        StateVector::new(j.dims, amps)
    }
}

impl From<StateVector> for StateJson {
    fn from(s: StateVector) -> Self {
        StateJson {
            dims: s.dims,
            amps: s.amps.iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

pub(crate) fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return domain("a register needs at least one subsystem");
    }
    if let Some(d) = dims.iter().find(|&&d| d < 2) {
        return domain(format!("subsystem dimension {d} is below 2"));
    }
    dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).map_or_else(
        || resource("register dimension overflows"),
        Ok,
    )
}

impl StateVector {
    /// Checked constructor; rejects unnormalized input.
    pub fn new(dims: Vec<usize>, amps: Vec<Complex64>) -> Result<Self> {
        let total = check_dims(&dims)?;
        if amps.len() != total {
            return domain(format!(
                "{} amplitudes given for a register of dimension {total}",
                amps.len()
            ));
        }
        let n2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (n2 - 1.0).abs() > NORM_TOL {
            return domain(format!("state is not normalized (norm² = {n2})"));
        }
        Ok(Self { dims, amps })
    }

    /// Rescales `amps` to unit norm. Fails on the zero vector.
    pub fn normalized(dims: Vec<usize>, amps: Vec<Complex64>) -> Result<Self> {
        let total = check_dims(&dims)?;
        if amps.len() != total {
            return domain(format!(
                "{} amplitudes given for a register of dimension {total}",
                amps.len()
            ));
        }
        let n = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if n < 1e-300 {
            return domain("cannot normalize the zero vector");
        }
        Ok(Self {
            dims,
            amps: amps.into_iter().map(|a| a / n).collect(),
        })
    }

    pub(crate) fn from_parts_unchecked(dims: Vec<usize>, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), dims.iter().product::<usize>());
        Self { dims, amps }
    }

    pub fn qubits(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        Self::new(vec![2; n], amps)
    }

    /// Single qubit `a|0> + b|1>`.
    pub fn qubit(a: Complex64, b: Complex64) -> Result<Self> {
        Self::new(vec![2], vec![a, b])
    }

    /// Computational basis state with the given digits (leftmost most
    /// significant).
    pub fn basis_state(dims: &[usize], digits: &[usize]) -> Result<Self> {
        Self::basis_state_with_limits(dims, digits, &Limits::default())
    }

    pub fn basis_state_with_limits(dims: &[usize], digits: &[usize], limits: &Limits) -> Result<Self> {
        let total = check_dims(dims)?;
        limits.check_state_dim(total)?;
        let index = mixed_radix_index(dims, digits)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); total];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            dims: dims.to_vec(),
            amps,
        })
    }

    /// `|index>` in a register of the given dims.
    pub fn basis_index(dims: &[usize], index: usize) -> Result<Self> {
        let total = check_dims(dims)?;
        if index >= total {
            return domain(format!("basis index {index} out of range 0..{total}"));
        }
        let digits = mixed_radix_digits(dims, index);
        Self::basis_state(dims, &digits)
    }

    /// Equal superposition of all basis states.
    pub fn uniform(dims: &[usize]) -> Result<Self> {
        let total = check_dims(dims)?;
        Limits::default().check_state_dim(total)?;
        let a = Complex64::new(1.0 / (total as f64).sqrt(), 0.0);
        Ok(Self {
            dims: dims.to_vec(),
            amps: vec![a; total],
        })
    }

    #[inline]
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    #[inline]
    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    #[inline]
    pub fn amp(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `|amp|²` for every basis index.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Kronecker product; `self` becomes the more significant part.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for &a in &self.amps {
            amps.extend(other.amps.iter().map(|&b| a * b));
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { dims, amps }
    }

    /// Applies `u` to the listed subsystems (identity elsewhere). The first
    /// target is the most significant digit of `u`'s index.
    pub fn apply(&self, u: &UnitaryMatrix, targets: &[usize]) -> Result<Self> {
        let amps = apply_matrix(&self.dims, &self.amps, u.matrix(), targets)?;
        Ok(Self {
            dims: self.dims.clone(),
            amps,
        })
    }

    /// Scales every amplitude by a unit-modulus phase.
    pub fn with_global_phase(&self, angle: f64) -> Self {
        let p = Complex64::from_polar(1.0, angle);
        Self {
            dims: self.dims.clone(),
            amps: self.amps.iter().map(|a| a * p).collect(),
        }
    }

    /// `<self|other>`, conjugating `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dims != other.dims {
            return domain(format!(
                "inner product of registers with dims {:?} and {:?}",
                self.dims, other.dims
            ));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Exact equality up to `tol` per amplitude (no phase freedom).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dims == other.dims
            && self
                .amps
                .iter()
                .zip(&other.amps)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Equality modulo a global unit-modulus factor, at [`PHASE_EQ_TOL`].
    pub fn equal_up_to_phase(&self, other: &Self) -> bool {
        match self.inner(other) {
            Ok(ip) => (ip.norm() - 1.0).abs() <= PHASE_EQ_TOL,
            Err(_) => false,
        }
    }

    /// Index of the digits in this register.
    pub fn index_of(&self, digits: &[usize]) -> Result<usize> {
        mixed_radix_index(&self.dims, digits)
    }

    /// Ket-notation digest, e.g. `0.7071|00> + 0.7071i|11>`, dropping
    /// amplitudes below `1e-12`.
    pub fn ket_string(&self) -> String {
        let mut terms = Vec::new();
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm() < 1e-12 {
                continue;
            }
            let label: String = mixed_radix_digits(&self.dims, i)
                .iter()
                .map(|d| d.to_string())
                .collect();
            terms.push(format!("{}|{}>", format_amp(*a), label));
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

fn format_amp(a: Complex64) -> String {
    let clean = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
    let (re, im) = (clean(a.re), clean(a.im));
    match (re == 0.0, im == 0.0) {
        (false, true) => format!("{re:.4}"),
        (true, false) => format!("{im:.4}i"),
        _ => format!("({re:.4}{im:+.4}i)"),
    }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StateVector{:?}[{}]", self.dims, self.ket_string())
    }
}

/// Mixed-radix index of `digits`, leftmost most significant.
pub fn mixed_radix_index(dims: &[usize], digits: &[usize]) -> Result<usize> {
    if dims.len() != digits.len() {
        return domain(format!(
            "{} digits given for {} subsystems",
            digits.len(),
            dims.len()
        ));
    }
    let mut index = 0usize;
    for (pos, (&d, &x)) in dims.iter().zip(digits).enumerate() {
        if x >= d {
            return domain(format!("digit {x} at position {pos} exceeds dimension {d}"));
        }
        index = index * d + x;
    }
    Ok(index)
}

/// Inverse of [`mixed_radix_index`].
pub fn mixed_radix_digits(dims: &[usize], mut index: usize) -> Vec<usize> {
    let mut digits = vec![0; dims.len()];
    for (slot, &d) in digits.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    digits
}

/// Place values of each subsystem: `stride[k] = ∏ dims[k+1..]`.
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

pub(crate) fn validate_targets(dims: &[usize], targets: &[usize]) -> Result<usize> {
    if targets.is_empty() {
        return domain("no target subsystems given");
    }
    let mut seen = vec![false; dims.len()];
    let mut sub = 1usize;
    for &t in targets {
        if t >= dims.len() {
            return domain(format!("target {t} out of range for {} subsystems", dims.len()));
        }
        if seen[t] {
            return domain(format!("target {t} listed twice"));
        }
        seen[t] = true;
        sub *= dims[t];
    }
    Ok(sub)
}

/// Applies an arbitrary square matrix to `targets` of a raw amplitude
/// vector. Used by [`StateVector::apply`] and by non-unitary shorthand
/// operators that must not pass through the normalized type.
pub fn apply_matrix(
    dims: &[usize],
    amps: &[Complex64],
    m: &CMatrix,
    targets: &[usize],
) -> Result<Vec<Complex64>> {
    let sub = validate_targets(dims, targets)?;
    if m.dim() != sub {
        return domain(format!(
            "operator of dimension {} does not match target dimension {sub}",
            m.dim()
        ));
    }
    let total: usize = dims.iter().product();
    if amps.len() != total {
        return domain("amplitude vector does not match dims");
    }
    let place = strides(dims);
    let target_dims: Vec<usize> = targets.iter().map(|&t| dims[t]).collect();

    // Offsets of every target-digit combination relative to a base index
    // whose target digits are all zero.
    let offsets: Vec<usize> = (0..sub)
        .map(|j| {
            mixed_radix_digits(&target_dims, j)
                .iter()
                .zip(targets)
                .map(|(&x, &t)| x * place[t])
                .sum()
        })
        .collect();

    let is_target: Vec<bool> = (0..dims.len()).map(|k| targets.contains(&k)).collect();
    let mut out = vec![Complex64::new(0.0, 0.0); total];
    let mut gathered = vec![Complex64::new(0.0, 0.0); sub];
    for base in 0..total {
        let digits = mixed_radix_digits(dims, base);
        if digits.iter().zip(&is_target).any(|(&x, &t)| t && x != 0) {
            continue;
        }
        for (g, &off) in gathered.iter_mut().zip(&offsets) {
            *g = amps[base + off];
        }
        for (row, &off) in offsets.iter().enumerate() {
            let mut s = Complex64::new(0.0, 0.0);
            for (col, &g) in gathered.iter().enumerate() {
                s += m.get(row, col) * g;
            }
            out[base + off] = s;
        }
    }
    Ok(out)
}
