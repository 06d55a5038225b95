use num_complex::Complex64;

use super::gate::Gate;
use super::pauli::PauliTerm;
use crate::{Error, Result};

const NORM_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    /// `|0...0>` on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Self {
            num_qubits,
            amplitudes,
        }
    }

    /// Computational basis state with the given index.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        let slot = amplitudes.get_mut(index).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            ))
        })?;
        *slot = Complex64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Wraps amplitudes whose length is a power of two and whose norm is 1 to 1e-10.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidParameter(format!(
                "statevector norm {norm} differs from 1"
            )));
        }
        Ok(Self {
            num_qubits: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn norm(&self) -> f64 {
        self.probabilities().iter().sum::<f64>().sqrt()
    }

    fn bit(&self, qubit: usize) -> usize {
        1 << (self.num_qubits - 1 - qubit)
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        match *gate {
            Gate::GlobalPhase { angle } => {
                let phase = Complex64::from_polar(1.0, angle);
                self.amplitudes.iter_mut().for_each(|z| *z *= phase);
            }
            Gate::Cnot { control, target } => {
                let cbit = self.bit(control);
                let tbit = self.bit(target);
                for i in 0..self.amplitudes.len() {
                    if i & cbit != 0 && i & tbit == 0 {
                        self.amplitudes.swap(i, i | tbit);
                    }
                }
            }
            Gate::Rx { target, .. } | Gate::Ry { target, .. } | Gate::Rz { target, .. } => {
                let m = gate.single_qubit_matrix().expect("rotation");
                let tbit = self.bit(target);
                for i in 0..self.amplitudes.len() {
                    if i & tbit == 0 {
                        let a0 = self.amplitudes[i];
                        let a1 = self.amplitudes[i | tbit];
                        self.amplitudes[i] = m[0][0] * a0 + m[0][1] * a1;
                        self.amplitudes[i | tbit] = m[1][0] * a0 + m[1][1] * a1;
                    }
                }
            }
        }
        Ok(())
    }

    /// `<psi| P |psi>` for one Pauli string, real part.
    pub fn pauli_expectation(&self, term: &PauliTerm) -> Result<f64> {
        if term.string.len() != self.num_qubits {
            return Err(Error::WidthMismatch {
                expected: self.num_qubits,
                actual: term.string.len(),
            });
        }
        let (flip, phases) = term.string.action_masks();
        let acc: Complex64 = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(col, &amp)| {
                let row = col ^ flip;
                self.amplitudes[row].conj() * phases(col) * amp
            })
            .sum();
        Ok(acc.re)
    }
}

/// Applies `gates` in order; the input state is left untouched.
pub fn apply_circuit(gates: &[Gate], state: &Statevector) -> Result<Statevector> {
    let mut out = state.clone();
    for gate in gates {
        out.apply(gate)?;
    }
    Ok(out)
}

/// `sum_k c_k <psi| P_k |psi>`.
pub fn expectation(state: &Statevector, terms: &[PauliTerm]) -> Result<f64> {
    terms
        .iter()
        .map(|t| Ok(t.coefficient * state.pauli_expectation(t)?))
        .sum()
}
