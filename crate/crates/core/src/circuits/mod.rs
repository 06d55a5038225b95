//! Gate-level layer: Pauli decomposition, two-qubit synthesis, statevector
//! simulation and shot sampling.
//!
//! Qubit 0 is the high-order bit of a basis index and is written first in
//! bitstrings, so `"10"` means qubit 0 is set.

mod gate;
mod kak;
mod pauli;
mod sampling;
mod statevector;
mod sweep;

pub use gate::{circuit_unitary, count_cnots, parse_circuit, write_circuit, Gate};
pub use kak::{kak_decompose, synthesis_fidelity, KAK_UNITARY_TOL};
pub use pauli::{pauli_decompose, pauli_sum_matrix, Pauli, PauliString, PauliTerm};
pub use sampling::{bitstring, sample, sample_stream, ShotHistogram};
pub use statevector::{apply_circuit, expectation, Statevector};
pub use sweep::{beta_grid, thermal_circuit, thermal_sweep, SweepConfig};
