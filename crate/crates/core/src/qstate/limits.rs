use crate::error::{resource, Result};

/// Size caps for dense simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest statevector, in qubit-equivalents (`2^max_state_qubits` amplitudes).
    pub max_state_qubits: u32,
    /// Largest dense operator, in qubit-equivalents.
    pub max_matrix_qubits: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_state_qubits: 20,
            max_matrix_qubits: 11,
        }
    }
}

impl Limits {
    pub fn check_state_qubits(&self, n: usize) -> Result<()> {
        if n > self.max_state_qubits as usize {
            return resource(format!(
                "{n} qubits exceeds the statevector cap of {}",
                self.max_state_qubits
            ));
        }
        Ok(())
    }

    pub fn check_state_dim(&self, dim: usize) -> Result<()> {
        if dim > 1usize << self.max_state_qubits {
            return resource(format!(
                "register dimension {dim} exceeds the cap of 2^{}",
                self.max_state_qubits
            ));
        }
        Ok(())
    }

    pub fn check_matrix_qubits(&self, n: usize) -> Result<()> {
        if n > self.max_matrix_qubits as usize {
            return resource(format!(
                "a dense {n}-qubit operator exceeds the cap of {} qubits",
                self.max_matrix_qubits
            ));
        }
        Ok(())
    }
}
