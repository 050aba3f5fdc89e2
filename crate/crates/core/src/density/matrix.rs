use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::qstate::{mixed_radix_digits, mixed_radix_index, CMatrix, StateVector};
use crate::{c64, Complex64};

/// Hermiticity and unit-trace tolerance.
pub const DENSITY_TOL: f64 = 1e-10;

/// Smallest eigenvalue still accepted as positive, allowing for
/// accumulated rounding in partial traces.
pub const EIGEN_FLOOR: f64 = -1e-9;

/// A certified density operator: Hermitian, unit trace, positive
/// semidefinite. JSON form `{dim, entries: [[re, im], ...]}` row-major.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CMatrix", into = "CMatrix")]
pub struct DensityMatrix(CMatrix);

impl TryFrom<CMatrix> for DensityMatrix {
    type Error = crate::Error;
    fn try_from(m: CMatrix) -> Result<Self> {
        DensityMatrix::new(m)
    }
}

impl From<DensityMatrix> for CMatrix {
    fn from(d: DensityMatrix) -> Self {
        d.0
    }
}

impl std::fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DensityMatrix{:?}", self.0)
    }
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let n = m.dim();
    let a = DMatrix::from_row_slice(n, n, m.entries());
    let mut ev: Vec<f64> = a.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    ev
}

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.dim() == 0 {
            return domain("empty density matrix");
        }
        if !m.is_hermitian(DENSITY_TOL) {
            return domain("density matrix is not Hermitian");
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return domain(format!("density matrix has trace {tr}, not 1"));
        }
        let least = hermitian_eigenvalues(&m)[0];
        if least < EIGEN_FLOOR {
            return domain(format!("density matrix has negative eigenvalue {least:.3e}"));
        }
        Ok(Self(m))
    }

    /// `|ψ><ψ|`
    pub fn from_pure(psi: &StateVector) -> Self {
        Self(CMatrix::outer(psi.amps(), psi.amps()).expect("same length"))
    }

    /// `1/d`
    pub fn maximally_mixed(dim: usize) -> Self {
        Self(CMatrix::identity(dim).scale(c64(1.0 / dim as f64, 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0.get(i, j)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.0)
    }

    /// `tr ρ²`
    pub fn purity(&self) -> f64 {
        self.0.matmul(&self.0).expect("square").trace().re
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.0.approx_eq(&other.0, tol)
    }
}

fn check_state(psi: &StateVector, dim: usize) -> Result<()> {
    if psi.len() != dim {
        return domain(format!("state of dimension {} against a {dim}-dimensional ρ", psi.len()));
    }
    Ok(())
}

/// `Σ p_j |φ_j><φ_j|`
pub fn rho_from_ensemble(states: &[StateVector], probs: &[f64]) -> Result<DensityMatrix> {
    let Some(first) = states.first() else {
        return domain("empty ensemble");
    };
    if states.len() != probs.len() {
        return domain("one probability per state required");
    }
    if probs.iter().any(|&p| !(p >= 0.0)) {
        return domain("ensemble probabilities must be non-negative");
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > DENSITY_TOL {
        return domain(format!("ensemble probabilities sum to {total}, not 1"));
    }
    let dim = first.len();
    let mut acc = CMatrix::zeros(dim);
    for (s, &p) in states.iter().zip(probs) {
        check_state(s, dim)?;
        acc = acc.add(&CMatrix::outer(s.amps(), s.amps())?.scale(c64(p, 0.0)))?;
    }
    DensityMatrix::new(acc)
}

/// `<φ|ρ|φ>`
pub fn measure_prob(rho: &DensityMatrix, phi: &StateVector) -> Result<f64> {
    check_state(phi, rho.dim())?;
    let v = rho.0.mul_vec(phi.amps())?;
    let p: Complex64 = phi.amps().iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
    Ok(p.re.clamp(0.0, 1.0))
}

/// `<ψ|ρ|ψ>` for a pure reference state.
pub fn fidelity(rho: &DensityMatrix, psi: &StateVector) -> Result<f64> {
    measure_prob(rho, psi)
}

/// `tr(Aρ)` for a Hermitian observable.
pub fn expectation(rho: &DensityMatrix, observable: &CMatrix) -> Result<f64> {
    if observable.dim() != rho.dim() {
        return domain("observable and density matrix dimensions differ");
    }
    if !observable.is_hermitian(DENSITY_TOL) {
        return domain("observable is not Hermitian");
    }
    Ok(observable.matmul(&rho.0)?.trace().re)
}

/// Reduced state on `keep` (output subsystems in ascending order).
pub fn partial_trace(rho: &DensityMatrix, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
    let total: usize = dims.iter().product();
    if dims.is_empty() || dims.contains(&0) || total != rho.dim() {
        return domain(format!("dims {dims:?} do not factor a {}-dimensional ρ", rho.dim()));
    }
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.iter().any(|&k| k >= dims.len()) {
        return domain("kept subsystem out of range");
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let kd: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let td: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let kdim: usize = kd.iter().product();
    let split: Vec<(usize, usize)> = (0..total)
        .map(|i| {
            let d = mixed_radix_digits(dims, i);
            let kdig: Vec<usize> = keep.iter().map(|&k| d[k]).collect();
            let tdig: Vec<usize> = traced.iter().map(|&k| d[k]).collect();
            let ki = if kd.is_empty() { 0 } else { mixed_radix_index(&kd, &kdig).expect("in range") };
            let ti = if td.is_empty() { 0 } else { mixed_radix_index(&td, &tdig).expect("in range") };
            (ki, ti)
        })
        .collect();
    let mut out = CMatrix::zeros(kdim.max(1));
    for (i, &(ki, ti)) in split.iter().enumerate() {
        for (j, &(kj, tj)) in split.iter().enumerate() {
            if ti == tj {
                let v = out.get(ki, kj) + rho.0.get(i, j);
                out.set(ki, kj, v);
            }
        }
    }
    DensityMatrix::new(out)
}

/// Reduced state of a pure state on `keep`, without forming `|ψ><ψ|`.
pub fn reduced_state(psi: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    let dims = psi.dims();
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.iter().any(|&k| k >= dims.len()) {
        return domain("kept subsystem out of range");
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let kd: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let td: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let kdim: usize = kd.iter().product();
    let tdim: usize = td.iter().product();
    // amplitudes reshaped as kdim × tdim
    let mut m = vec![c64(0.0, 0.0); kdim * tdim];
    for (i, &a) in psi.amps().iter().enumerate() {
        let d = mixed_radix_digits(dims, i);
        let kdig: Vec<usize> = keep.iter().map(|&k| d[k]).collect();
        let tdig: Vec<usize> = traced.iter().map(|&k| d[k]).collect();
        let ki = if kd.is_empty() { 0 } else { mixed_radix_index(&kd, &kdig)? };
        let ti = if td.is_empty() { 0 } else { mixed_radix_index(&td, &tdig)? };
        m[ki * tdim + ti] = a;
    }
    let mut out = CMatrix::zeros(kdim);
    for i in 0..kdim {
        for j in 0..kdim {
            let v: Complex64 = (0..tdim).map(|t| m[i * tdim + t] * m[j * tdim + t].conj()).sum();
            out.set(i, j, v);
        }
    }
    DensityMatrix::new(out)
}

/// Bloch vector of a qubit state, `ρ = (1 + r·σ)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let r = Self { x, y, z };
        if r.norm() > 1.0 + 1e-9 {
            return domain(format!("Bloch vector length {} exceeds 1", r.norm()));
        }
        Ok(r)
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// `r_i = tr(ρ σ_i)`
    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        if rho.dim() != 2 {
            return domain(format!("Bloch vectors describe qubits, got dimension {}", rho.dim()));
        }
        let off = rho.get(1, 0);
        Ok(Self {
            x: 2.0 * off.re,
            y: 2.0 * off.im,
            z: (rho.get(0, 0) - rho.get(1, 1)).re,
        })
    }

    pub fn to_density(&self) -> DensityMatrix {
        let rows = vec![
            vec![c64((1.0 + self.z) / 2.0, 0.0), c64(self.x / 2.0, -self.y / 2.0)],
            vec![c64(self.x / 2.0, self.y / 2.0), c64((1.0 - self.z) / 2.0, 0.0)],
        ];
        DensityMatrix(CMatrix::from_rows(rows).expect("2x2"))
    }

    pub fn scaled(&self, eta: f64) -> Self {
        Self {
            x: self.x * eta,
            y: self.y * eta,
            z: self.z * eta,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{bell_basis, gates};
    use proptest::prelude::*;

    fn q(a: Complex64, b: Complex64) -> StateVector {
        StateVector::qubit(a, b).unwrap()
    }

    fn ensemble_rho() -> DensityMatrix {
        let s1 = q(c64(0.8, 0.0), c64(0.6, 0.0));
        let s2 = q(c64(0.6, 0.0), c64(0.0, -0.8));
        rho_from_ensemble(&[s1, s2], &[0.75, 0.25]).unwrap()
    }

    #[test]
    fn mixed_ensemble_matrix() {
        let rho = ensemble_rho();
        let want = CMatrix::from_rows(vec![
            vec![c64(0.57, 0.0), c64(0.36, 0.12)],
            vec![c64(0.36, -0.12), c64(0.43, 0.0)],
        ])
        .unwrap();
        assert!(rho.matrix().approx_eq(&want, 1e-12));
        let p1 = measure_prob(&rho, &q(c64(0.6, 0.0), c64(0.8, 0.0))).unwrap();
        let p2 = measure_prob(&rho, &q(c64(0.8, 0.0), c64(-0.6, 0.0))).unwrap();
        assert!((p1 - 0.826).abs() < 5e-4 && (p2 - 0.174).abs() < 5e-4);
        assert!((p1 + p2 - 1.0).abs() < 1e-12);
        let x = gates::pauli_x().into_matrix();
        assert!((expectation(&rho, &x).unwrap() - 0.72).abs() < 1e-12);
    }

    #[test]
    fn invariants_enforced() {
        let not_h = CMatrix::from_rows(vec![vec![c64(0.5, 0.0), c64(0.1, 0.0)], vec![c64(0.0, 0.0), c64(0.5, 0.0)]]).unwrap();
        assert!(DensityMatrix::new(not_h).is_err());
        let neg = CMatrix::diagonal(&[c64(1.5, 0.0), c64(-0.5, 0.0)]);
        assert!(DensityMatrix::new(neg).is_err());
        assert!(rho_from_ensemble(&[q(c64(1.0, 0.0), c64(0.0, 0.0))], &[0.9]).is_err());
        assert!(expectation(&DensityMatrix::maximally_mixed(2), &CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap()).is_err());
    }

    #[test]
    fn simple_expectations() {
        let z = gates::pauli_z().into_matrix();
        assert!(expectation(&DensityMatrix::maximally_mixed(2), &z).unwrap().abs() < 1e-15);
        let zero = DensityMatrix::from_pure(&StateVector::basis_index(&[2], 0).unwrap());
        assert!((expectation(&zero, &z).unwrap() - 1.0).abs() < 1e-15);
        let u = StateVector::basis_index(&[2], 0).unwrap();
        let d = StateVector::basis_index(&[2], 1).unwrap();
        let half = rho_from_ensemble(&[u, d], &[0.5, 0.5]).unwrap();
        assert!(half.approx_eq(&DensityMatrix::maximally_mixed(2), 1e-15));
    }

    #[test]
    fn bloch_round_trips() {
        let r = BlochVector::from_density(&DensityMatrix::maximally_mixed(2)).unwrap();
        assert!(r.norm() < 1e-15);
        let third = BlochVector::new(0.0, 0.0, 1.0 / 3.0).unwrap().to_density();
        assert!(third.matrix().approx_eq(&CMatrix::diagonal(&[c64(2.0 / 3.0, 0.0), c64(1.0 / 3.0, 0.0)]), 1e-15));
        let rho = ensemble_rho();
        let back = BlochVector::from_density(&rho).unwrap().to_density();
        assert!(back.approx_eq(&rho, 1e-12));
        assert!(BlochVector::new(1.0, 1.0, 0.0).is_err());
        assert!(BlochVector::from_density(&DensityMatrix::maximally_mixed(3)).is_err());
    }

    #[test]
    fn bell_reduces_to_mixed() {
        let b0 = DensityMatrix::from_pure(&bell_basis(2).unwrap()[0]);
        for k in [0, 1] {
            let r = partial_trace(&b0, &[2, 2], &[k]).unwrap();
            assert!(r.approx_eq(&DensityMatrix::maximally_mixed(2), 1e-15));
        }
        assert!(partial_trace(&b0, &[2, 3], &[0]).is_err());
    }

    fn arb_qubit() -> impl Strategy<Value = StateVector> {
        (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
            .prop_filter("nonzero", |(a, b, c, d)| a * a + b * b + c * c + d * d > 1e-3)
            .prop_map(|(a, b, c, d)| StateVector::normalized(vec![2], vec![c64(a, b), c64(c, d)]).unwrap())
    }

    proptest! {
        #[test]
        fn pure_states_sit_on_the_sphere(s in arb_qubit()) {
            let r = BlochVector::from_density(&DensityMatrix::from_pure(&s)).unwrap();
            prop_assert!((r.norm() - 1.0).abs() < 1e-12);
            prop_assert!((DensityMatrix::from_pure(&s).purity() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn product_trace_recovers_factor(a in arb_qubit(), b in arb_qubit()) {
            let rho = DensityMatrix::from_pure(&a.tensor(&b));
            let ra = partial_trace(&rho, &[2, 2], &[0]).unwrap();
            let rb = partial_trace(&rho, &[2, 2], &[1]).unwrap();
            prop_assert!(ra.approx_eq(&DensityMatrix::from_pure(&a), 1e-12));
            prop_assert!(rb.approx_eq(&DensityMatrix::from_pure(&b), 1e-12));
            prop_assert!(reduced_state(&a.tensor(&b), &[1]).unwrap().approx_eq(&rb, 1e-12));
        }

        #[test]
        fn basis_probabilities_sum_to_one(a in arb_qubit(), b in arb_qubit(), w in 0.0f64..1.0) {
            let rho = rho_from_ensemble(&[a.clone(), b], &[w, 1.0 - w]).unwrap();
            // a and its orthogonal complement
            let perp = StateVector::qubit(-a.amp(1).conj(), a.amp(0).conj()).unwrap();
            let total = measure_prob(&rho, &a).unwrap() + measure_prob(&rho, &perp).unwrap();
            prop_assert!((total - 1.0).abs() < 1e-10);
        }

        #[test]
        fn codiagonal_expectation(p in 0.0f64..1.0, a0 in -3.0f64..3.0, a1 in -3.0f64..3.0) {
            let rho = DensityMatrix::new(CMatrix::diagonal(&[c64(p, 0.0), c64(1.0 - p, 0.0)])).unwrap();
            let obs = CMatrix::diagonal(&[c64(a0, 0.0), c64(a1, 0.0)]);
            prop_assert!((expectation(&rho, &obs).unwrap() - (p * a0 + (1.0 - p) * a1)).abs() < 1e-12);
        }

        #[test]
        fn partial_trace_is_linear(a in arb_qubit(), b in arb_qubit(), c in arb_qubit(), w in 0.0f64..1.0) {
            let s1 = a.tensor(&b);
            let s2 = b.tensor(&c);
            let mix = rho_from_ensemble(&[s1.clone(), s2.clone()], &[w, 1.0 - w]).unwrap();
            let lhs = partial_trace(&mix, &[2, 2], &[1]).unwrap();
            let r1 = partial_trace(&DensityMatrix::from_pure(&s1), &[2, 2], &[1]).unwrap();
            let r2 = partial_trace(&DensityMatrix::from_pure(&s2), &[2, 2], &[1]).unwrap();
            let rhs = r1.matrix().scale(c64(w, 0.0)).add(&r2.matrix().scale(c64(1.0 - w, 0.0))).unwrap();
            prop_assert!(lhs.matrix().approx_eq(&rhs, 1e-12));
            prop_assert!((lhs.matrix().trace().re - 1.0).abs() < 1e-12);
        }
    }
}
