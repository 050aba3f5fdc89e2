//! Universal 1→2 cloning machine. Register order: input, blank, ancilla.
//! The blank starts in `|0>` and the ancilla in `|A> = |0>`, with
//! `|A⊥> = |1>`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::qstate::{CMatrix, StateVector, UnitaryMatrix};
use crate::{c64, Complex64};

use super::matrix::{fidelity, reduced_state, BlochVector, DensityMatrix};

/// Optimal clone fidelity.
pub const UQCM_FIDELITY: f64 = 5.0 / 6.0;
/// Bloch-vector shrink factor of each clone.
pub const UQCM_ETA: f64 = 2.0 / 3.0;

/// Output of [`uqcm_clone`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CloneResult {
    pub clone: DensityMatrix,
    /// The second clone; always equal to `clone`.
    pub other: DensityMatrix,
    pub fidelity: f64,
    pub eta: f64,
}

fn column(amps: &[(usize, f64)]) -> Vec<Complex64> {
    let mut v = vec![c64(0.0, 0.0); 8];
    for &(i, a) in amps {
        v[i] = c64(a, 0.0);
    }
    v
}

/// The 8×8 cloning unitary. Columns `|000>` and `|100>` carry the cloning
/// map; the rest are a Gram–Schmidt completion over the standard basis.
pub fn uqcm_unitary() -> UnitaryMatrix {
    let big = (2.0f64 / 3.0).sqrt();
    let small = (1.0f64 / 6.0).sqrt();
    // |0>|B> → √(2/3)|00>|A⊥> + √(1/6)(|01> + |10>)|A>
    let c0 = column(&[(0b001, big), (0b010, small), (0b100, small)]);
    // |1>|B> → √(2/3)|11>|A> + √(1/6)(|01> + |10>)|A⊥>
    let c4 = column(&[(0b110, big), (0b011, small), (0b101, small)]);

    let mut basis = vec![c0.clone(), c4.clone()];
    for e in 0..8 {
        if basis.len() == 8 {
            break;
        }
        let mut v = column(&[(e, 1.0)]);
        for b in &basis {
            let ov: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= ov * bi;
            }
        }
        let n: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-6 {
            basis.push(v.iter().map(|x| x / n).collect());
        }
    }
    // c0 and c4 go to columns 0 and 4, the completion fills the rest in order
    let mut cols = vec![Vec::new(); 8];
    cols[0] = c0;
    cols[4] = c4;
    let mut rest = basis.into_iter().skip(2);
    for (j, c) in cols.iter_mut().enumerate() {
        if j != 0 && j != 4 {
            *c = rest.next().expect("eight orthonormal vectors");
        }
    }
    let mut m = CMatrix::zeros(8);
    for (j, c) in cols.iter().enumerate() {
        for (i, &x) in c.iter().enumerate() {
            m.set(i, j, x);
        }
    }
    UnitaryMatrix::new(m).expect("orthonormal columns")
}

/// The three-qubit state after cloning `psi`.
pub fn uqcm_output(psi: &StateVector) -> Result<StateVector> {
    if psi.dims() != [2] {
        return domain(format!("the cloner takes one qubit, got dims {:?}", psi.dims()));
    }
    let blank = StateVector::basis_index(&[2, 2], 0)?;
    psi.tensor(&blank).apply(&uqcm_unitary(), &[0, 1, 2])
}

/// Clones `psi`, traces out the ancilla and then each copy in turn.
pub fn uqcm_clone(psi: &StateVector) -> Result<CloneResult> {
    let out = uqcm_output(psi)?;
    let clone = reduced_state(&out, &[0])?;
    let other = reduced_state(&out, &[1])?;
    let f = fidelity(&clone, psi)?;
    let r_in = BlochVector::from_density(&DensityMatrix::from_pure(psi))?;
    let r_out = BlochVector::from_density(&clone)?;
    let eta = r_out.x * r_in.x + r_out.y * r_in.y + r_out.z * r_in.z;
    Ok(CloneResult {
        clone,
        other,
        fidelity: f,
        eta,
    })
}
