//! Secret sharing. The qubit scheme splits `a|0> + b|1>` between Bob and
//! Gerald through a GHZ state; the qutrit scheme is a (2,3) threshold
//! scheme where any two of Alice, Bob and Gerald recover the secret.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::density::{fidelity, reduced_state, DensityMatrix};
use crate::error::{domain, Result};
use crate::qstate::{
    gates, gates::permutation_unitary, partial_projection, project, Basis, OutcomeSelector, StateVector, UnitaryMatrix,
};
use crate::{c64, Complex64};

use super::report::{GameReport, Recorder};
use super::teleport::bell_measurement_basis;

fn x_basis() -> Result<Basis> {
    let h = FRAC_1_SQRT_2;
    let plus = StateVector::qubit(c64(h, 0.0), c64(h, 0.0))?;
    let minus = StateVector::qubit(c64(h, 0.0), c64(-h, 0.0))?;
    Basis::custom(vec!["x+".into(), "x-".into()], vec![plus, minus])
}

/// Gerald's correction for Bell outcome `bell` and Bob's result `bob`
/// (0 for `x+`, 1 for `x−`).
pub fn secret_correction(bell: usize, bob: usize) -> Result<(String, UnitaryMatrix)> {
    let (x, z) = (gates::pauli_x(), gates::pauli_z());
    Ok(match (bell, bob) {
        (0, 0) => ("1".into(), gates::identity(2)),
        (0, 1) => ("sigma_z".into(), z),
        (1, 0) => ("sigma_x".into(), x),
        (1, 1) => ("sigma_x sigma_z".into(), &x * &z),
        (2, 0) => ("sigma_z".into(), z),
        (2, 1) => ("1".into(), gates::identity(2)),
        (3, 0) => ("sigma_z sigma_x".into(), &z * &x),
        (3, 1) => ("-sigma_x".into(), x.neg()),
        _ => return domain(format!("no correction for Bell outcome {bell} and Bob outcome {bob}")),
    })
}

fn conjugate(rho: &DensityMatrix, u: &UnitaryMatrix) -> Result<DensityMatrix> {
    let m = u.matrix().matmul(rho.matrix())?.matmul(&u.adjoint().into_matrix())?;
    DensityMatrix::new(m)
}

/// Qubit scheme on `secret ⊗ (|000> + |111>)/√2`, registers secret,
/// Alice, Bob, Gerald. Besides the recovery fidelity the report holds
/// Gerald's best fidelity knowing only Alice's outcome and knowing only
/// Bob's.
pub fn secret_share_qubit(secret: &StateVector, sel: &mut dyn OutcomeSelector) -> Result<GameReport> {
    if secret.dims() != [2] {
        return domain(format!("the secret must be one qubit, got dims {:?}", secret.dims()));
    }
    let ghz = StateVector::normalized(vec![2, 2, 2], {
        let mut v = vec![c64(0.0, 0.0); 8];
        v[0] = c64(1.0, 0.0);
        v[7] = c64(1.0, 0.0);
        v
    })?;
    let initial = secret.tensor(&ghz);
    let xb = x_basis()?;

    let mut rec = Recorder::new();
    rec.prepare("alice", "secret x GHZ", initial.clone());
    let a = rec.measure("alice", "Bell measurement", &[0, 1], &bell_measurement_basis()?, sel)?;
    // Gerald's view after Alice's message only: Bob's qubit traced out
    let (_, fix_plus) = secret_correction(a.outcome_index, 0)?;
    let without_bob = fidelity(&conjugate(&reduced_state(rec.state(), &[3])?, &fix_plus)?, secret)?;

    let b = rec.measure("bob", "x basis", &[2], &xb, sel)?;
    let (label, fix) = secret_correction(a.outcome_index, b.outcome_index)?;
    rec.apply("gerald", &label, &fix, &[3])?;

    // Bob's message only: average over Alice's outcomes
    let bob_only = project(&initial, &[2], &xb, b.outcome_index)?;
    let without_alice = fidelity(&reduced_state(&bob_only.post_state, &[3])?, secret)?;

    let out = rec.state().clone();
    let f = fidelity(&reduced_state(&out, &[3])?, secret)?;
    let bell_vec = bell_measurement_basis()?.vector(a.outcome_index)?;
    let rest = partial_projection(&out, &[0, 1], &bell_vec)?;
    let gerald = StateVector::normalized(vec![2], partial_projection(&StateVector::normalized(vec![2, 2], rest)?, &[0], &xb.vector(b.outcome_index)?)?)?;

    let mut rep = GameReport::new("secret-qubit")
        .param("secret", secret)
        .param("bell", &a.outcome_label)
        .param("bob", &b.outcome_label)
        .param("correction", &label)
        .param("recovered", &gerald);
    rep.transcript = rec.into_steps();
    rep.outcome = format!("{} / {}: Gerald applies {label}", a.outcome_label, b.outcome_label);
    rep.probabilities.insert("fidelity".into(), f);
    rep.probabilities.insert("overlap".into(), secret.inner(&gerald)?.norm());
    rep.probabilities.insert("fidelity_without_bob".into(), without_bob);
    rep.probabilities.insert("fidelity_without_alice".into(), without_alice);
    Ok(rep)
}

/// Which two shareholders cooperate in the qutrit scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SharePair {
    AliceBob,
    BobGerald,
    AliceGerald,
}

impl SharePair {
    pub const ALL: [SharePair; 3] = [SharePair::AliceBob, SharePair::BobGerald, SharePair::AliceGerald];

    /// `(first, second)` qutrits. The first ends up holding the secret.
    pub fn qutrits(self) -> (usize, usize) {
        match self {
            SharePair::AliceBob => (0, 1),
            SharePair::BobGerald => (1, 2),
            SharePair::AliceGerald => (2, 0),
        }
    }
}

const NAMES: [&str; 3] = ["alice", "bob", "gerald"];

impl fmt::Display for SharePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.qutrits();
        let (a, b) = (a.min(b), a.max(b));
        write!(f, "{}+{}", NAMES[a], NAMES[b])
    }
}

impl FromStr for SharePair {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s.to_ascii_lowercase().chars().filter(|c| c.is_ascii_alphabetic()).collect();
        let who = |c: &str| match c {
            "a" | "alice" => Some(0),
            "b" | "bob" => Some(1),
            "g" | "gerald" => Some(2),
            _ => None,
        };
        let parts: Vec<&str> = if s.contains(['+', ',', '-', ' ']) {
            s.split(['+', ',', '-', ' ']).filter(|p| !p.is_empty()).collect()
        } else if norm.len() == 2 {
            vec![&norm[..1], &norm[1..]]
        } else {
            vec![]
        };
        let ids: Option<Vec<usize>> = parts.iter().map(|p| who(&p.to_ascii_lowercase())).collect();
        match ids.as_deref() {
            Some([0, 1]) | Some([1, 0]) => Ok(SharePair::AliceBob),
            Some([1, 2]) | Some([2, 1]) => Ok(SharePair::BobGerald),
            Some([0, 2]) | Some([2, 0]) => Ok(SharePair::AliceGerald),
            _ => domain(format!("unknown pair {s:?}; use alice+bob, bob+gerald or alice+gerald")),
        }
    }
}

/// Three-dimensional discrete Fourier transform.
fn dft3() -> UnitaryMatrix {
    let s = 1.0 / 3f64.sqrt();
    let rows = (0..3)
        .map(|j| (0..3).map(|k| Complex64::from_polar(s, 2.0 * PI * (j * k) as f64 / 3.0)).collect())
        .collect();
    UnitaryMatrix::from_rows(rows).expect("DFT is unitary")
}

/// `|s,a,c> → |a, a+s, a+2s+c>`, which after a DFT on the middle qutrit
/// encodes `|s>` as `Σ_a |a, a+s, a+2s>/√3`.
fn encoder_permutation() -> Result<UnitaryMatrix> {
    permutation_unitary(27, |i| {
        let (s, a, c) = (i / 9, (i / 3) % 3, i % 3);
        9 * a + 3 * ((a + s) % 3) + (a + 2 * s + c) % 3
    })
}

/// `Σ_a |a, a+s, a+2s>/√3` extended linearly to the secret.
pub fn qutrit_encode(secret: &StateVector) -> Result<StateVector> {
    if secret.dims() != [3] {
        return domain(format!("the secret must be one qutrit, got dims {:?}", secret.dims()));
    }
    let blank = StateVector::basis_index(&[3, 3], 0)?;
    secret
        .tensor(&blank)
        .apply(&dft3(), &[1])?
        .apply(&encoder_permutation()?, &[0, 1, 2])
}

/// `(x, y) → (x, y + x)` on a qutrit pair, targets in that order.
fn add_into_second() -> Result<UnitaryMatrix> {
    permutation_unitary(9, |i| 3 * (i / 3) + (i / 3 + i % 3) % 3)
}

/// `(x, y) → (x + y, y)`.
fn add_into_first() -> Result<UnitaryMatrix> {
    permutation_unitary(9, |i| 3 * ((i / 3 + i % 3) % 3) + i % 3)
}

/// Largest eigenvalue deviation from 1/3 over the three single shares.
pub fn qutrit_share_leak(encoded: &StateVector) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for k in 0..3 {
        for ev in reduced_state(encoded, &[k])?.eigenvalues() {
            worst = worst.max((ev - 1.0 / 3.0).abs());
        }
    }
    Ok(worst)
}

/// (2,3) threshold scheme. `pair` performs the two modular additions and
/// its first member's qutrit then holds the secret.
pub fn secret_share_qutrit(secret: &StateVector, pair: SharePair) -> Result<GameReport> {
    if secret.dims() != [3] {
        return domain(format!("the secret must be one qutrit, got dims {:?}", secret.dims()));
    }
    let (first, second) = pair.qutrits();
    let mut rec = Recorder::new();
    rec.prepare("dealer", "secret x |00>", secret.tensor(&StateVector::basis_index(&[3, 3], 0)?));
    rec.apply("dealer", "F_3", &dft3(), &[1])?;
    rec.apply("dealer", "encode", &encoder_permutation()?, &[0, 1, 2])?;
    let leak = qutrit_share_leak(rec.state())?;
    rec.apply(NAMES[first], &format!("{} += {}", NAMES[second], NAMES[first]), &add_into_second()?, &[first, second])?;
    rec.apply(NAMES[second], &format!("{} += {}", NAMES[first], NAMES[second]), &add_into_first()?, &[first, second])?;

    let out = rec.state().clone();
    let f = fidelity(&reduced_state(&out, &[first])?, secret)?;
    // the other two qutrits factor out, so any nonzero slice of them works
    let peak = (0..out.len())
        .max_by(|&i, &j| out.amp(i).norm_sqr().total_cmp(&out.amp(j).norm_sqr()))
        .expect("nonempty");
    let rest: Vec<usize> = (0..3).filter(|&k| k != first).collect();
    let digits = crate::qstate::mixed_radix_digits(&[3, 3, 3], peak);
    let bra = StateVector::basis_state(&[3, 3], &[digits[rest[0]], digits[rest[1]]])?;
    let recovered = StateVector::normalized(vec![3], partial_projection(&out, &rest, &bra)?)?;

    let mut rep = GameReport::new("secret-qutrit")
        .param("secret", secret)
        .param("pair", pair.to_string())
        .param("holder", NAMES[first])
        .param("recovered", &recovered);
    rep.transcript = rec.into_steps();
    rep.outcome = format!("{} holds the secret", NAMES[first]);
    rep.probabilities.insert("fidelity".into(), f);
    rep.probabilities.insert("overlap".into(), secret.inner(&recovered)?.norm());
    rep.probabilities.insert("single_share_leak".into(), leak);
    Ok(rep)
}

/// Reduced state of one share of the encoded secret.
pub fn qutrit_share_state(secret: &StateVector, share: usize) -> Result<DensityMatrix> {
    if share > 2 {
        return domain(format!("share {share} out of range"));
    }
    reduced_state(&qutrit_encode(secret)?, &[share])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qgames::teleport::random_qubit;
    use crate::qstate::{ForcedOutcomes, RandomSource};

    fn random_qutrit(rng: &mut RandomSource) -> StateVector {
        let mut g = || rng.uniform() * 2.0 - 1.0;
        let amps = (0..3).map(|_| c64(g(), g())).collect();
        StateVector::normalized(vec![3], amps).unwrap()
    }

    #[test]
    fn all_eight_branches_recover() {
        let mut rng = RandomSource::new(7);
        for _ in 0..25 {
            let s = random_qubit(&mut rng);
            for bell in 0..4 {
                for bob in 0..2 {
                    let rep = secret_share_qubit(&s, &mut ForcedOutcomes::new([bell, bob])).unwrap();
                    assert!((rep.probability("fidelity").unwrap() - 1.0).abs() < 1e-9);
                    assert!((rep.probability("overlap").unwrap() - 1.0).abs() < 1e-9);
                    assert!((rep.probability("fidelity_without_alice").unwrap() - 0.5).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn table_entries() {
        let s = StateVector::qubit(c64(0.6, 0.0), c64(0.8, 0.0)).unwrap();
        let rep = secret_share_qubit(&s, &mut ForcedOutcomes::new([0, 0])).unwrap();
        assert_eq!(rep.params["correction"], "1");
        // Alice's message alone leaves diag(|a|², |b|²)
        let f = rep.probability("fidelity_without_bob").unwrap();
        assert!((f - (0.36f64.powi(2) + 0.64f64.powi(2))).abs() < 1e-12);
        let rep = secret_share_qubit(&s, &mut ForcedOutcomes::new([3, 1])).unwrap();
        assert_eq!(rep.params["correction"], "-sigma_x");
        assert_eq!(rep.replay().unwrap(), 4);
    }

    #[test]
    fn alpha_branch_after_additions() {
        let zero = StateVector::basis_index(&[3], 0).unwrap();
        let enc = qutrit_encode(&zero).unwrap();
        let r = 1.0 / 3f64.sqrt();
        for idx in [0, 13, 26] {
            assert!((enc.amp(idx) - c64(r, 0.0)).norm() < 1e-12);
        }
        let out = enc
            .apply(&add_into_second().unwrap(), &[0, 1])
            .unwrap()
            .apply(&add_into_first().unwrap(), &[0, 1])
            .unwrap();
        // |000> + |021> + |012>
        for digits in [[0, 0, 0], [0, 2, 1], [0, 1, 2]] {
            let i = out.index_of(&digits).unwrap();
            assert!((out.amp(i) - c64(r, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn every_pair_recovers() {
        let mut rng = RandomSource::new(3);
        for _ in 0..20 {
            let s = random_qutrit(&mut rng);
            for pair in SharePair::ALL {
                let rep = secret_share_qutrit(&s, pair).unwrap();
                assert!((rep.probability("fidelity").unwrap() - 1.0).abs() < 1e-9, "{pair}");
                assert!((rep.probability("overlap").unwrap() - 1.0).abs() < 1e-9, "{pair}");
                assert!(rep.probability("single_share_leak").unwrap() < 1e-9);
                assert_eq!(rep.replay().unwrap(), 5);
            }
            for k in 0..3 {
                let rho = qutrit_share_state(&s, k).unwrap();
                assert!(rho.approx_eq(&DensityMatrix::maximally_mixed(3), 1e-9));
            }
        }
    }

    #[test]
    fn pair_names() {
        for (text, want) in [
            ("alice+bob", SharePair::AliceBob),
            ("ab", SharePair::AliceBob),
            ("Bob,Gerald", SharePair::BobGerald),
            ("GA", SharePair::AliceGerald),
            ("gerald-alice", SharePair::AliceGerald),
        ] {
            assert_eq!(text.parse::<SharePair>().unwrap(), want);
        }
        assert!("aa".parse::<SharePair>().is_err());
        assert!("carol+bob".parse::<SharePair>().is_err());
        assert_eq!(SharePair::AliceGerald.to_string(), "alice+gerald");
    }

    #[test]
    fn wrong_dimensions() {
        let q = StateVector::basis_index(&[2], 0).unwrap();
        assert!(secret_share_qutrit(&q, SharePair::AliceBob).is_err());
        let t = StateVector::basis_index(&[3], 0).unwrap();
        assert!(secret_share_qubit(&t, &mut RandomSource::new(0)).is_err());
    }
}
