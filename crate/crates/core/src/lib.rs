//! Desk-scale thermofield dynamics.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: dense complex matrices, a Jacobi eigensolver for Hermitian
//!   matrices and the unitary exponential built on top of it.
//! - [`discreteqm`]: lattice position/momentum operators, energy-basis ladder
//!   operators, the two oscillator Hamiltonians and Hermite functions.
//! - [`tfd`]: fermion doubling, the Bogoliubov generator, thermal states and
//!   closed-form thermal energies for the fermion and the truncated boson.
//! - [`circuits`]: Pauli decomposition, two-qubit gate synthesis, a
//!   statevector simulator and seeded shot sampling.
//! - [`vqe`]: a hardware-efficient ansatz minimised with Nelder-Mead.

pub mod circuits;
pub mod discreteqm;
mod error;
pub mod linalg;
pub mod tfd;
pub mod vqe;

pub use error::{Error, Result};
pub use num_complex::Complex64;
