use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::linalg::{ComplexMatrix, HERMITIAN_TOL};
use crate::{Error, Result};

/// Coefficients at or below this magnitude are dropped from a decomposition.
const COEFF_CUTOFF: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    fn flips(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    /// Entry `<out| P |bit>` where `out` is the flipped bit when `flips()`.
    fn phase(self, bit: bool) -> Complex64 {
        match (self, bit) {
            (Pauli::I | Pauli::X, _) => Complex64::new(1.0, 0.0),
            (Pauli::Y, false) => Complex64::new(0.0, 1.0),
            (Pauli::Y, true) => Complex64::new(0.0, -1.0),
            (Pauli::Z, false) => Complex64::new(1.0, 0.0),
            (Pauli::Z, true) => Complex64::new(-1.0, 0.0),
        }
    }
}

/// One letter per qubit, qubit 0 first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString(pub Vec<Pauli>);

impl PauliString {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Bit-flip mask and a per-column phase so that `P|col> = phase(col) |col ^ mask>`.
    pub(crate) fn action_masks(&self) -> (usize, impl Fn(usize) -> Complex64 + '_) {
        let n = self.0.len();
        let flip = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, p)| p.flips())
            .fold(0usize, |m, (q, _)| m | 1 << (n - 1 - q));
        let phase = move |col: usize| {
            self.0
                .iter()
                .enumerate()
                .map(|(q, p)| p.phase(col >> (n - 1 - q) & 1 == 1))
                .product()
        };
        (flip, phase)
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let dim = 1 << self.0.len();
        let (flip, phase) = self.action_masks();
        let mut out = ComplexMatrix::zeros(dim, dim);
        for col in 0..dim {
            out[(col ^ flip, col)] = phase(col);
        }
        out
    }

    /// All `4^n` strings in lexicographic `I < X < Y < Z` order.
    pub fn all(num_qubits: usize) -> impl Iterator<Item = PauliString> {
        (0..1usize << (2 * num_qubits)).map(move |code| {
            PauliString(
                (0..num_qubits)
                    .map(|q| Pauli::ALL[code >> (2 * (num_qubits - 1 - q)) & 3])
                    .collect(),
            )
        })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{p:?}")?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::InvalidParameter(format!(
                    "bad Pauli letter {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(PauliString)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub string: PauliString,
}

impl PauliTerm {
    pub fn new(coefficient: f64, string: &str) -> Result<Self> {
        Ok(Self {
            coefficient,
            string: string.parse()?,
        })
    }
}

/// Expands a Hermitian `2^n x 2^n` matrix as `sum_P Tr(P h) / 2^n * P`.
pub fn pauli_decompose(h: &ComplexMatrix) -> Result<Vec<PauliTerm>> {
    if !h.is_square() {
        return Err(Error::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let dim = h.rows();
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(dim));
    }
    let deviation = h.hermitian_defect();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let n = dim.trailing_zeros() as usize;
    let mut terms = Vec::new();
    for string in PauliString::all(n) {
        // Tr(P h) = sum_col P[col ^ flip, col] h[col, col ^ flip]
        let trace: Complex64 = {
            let (flip, phase) = string.action_masks();
            (0..dim).map(|col| phase(col) * h[(col, col ^ flip)]).sum()
        };
        let coefficient = trace.re / dim as f64;
        if coefficient.abs() > COEFF_CUTOFF {
            terms.push(PauliTerm {
                coefficient,
                string,
            });
        }
    }
    Ok(terms)
}

/// `sum_k c_k P_k` as a dense matrix.
pub fn pauli_sum_matrix(terms: &[PauliTerm], num_qubits: usize) -> Result<ComplexMatrix> {
    let dim = 1 << num_qubits;
    let mut out = ComplexMatrix::zeros(dim, dim);
    for term in terms {
        if term.string.len() != num_qubits {
            return Err(Error::WidthMismatch {
                expected: num_qubits,
                actual: term.string.len(),
            });
        }
        out = out.add(&term.string.matrix().scale_real(term.coefficient))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_qubit_matrices() {
        let y: PauliString = "Y".parse().unwrap();
        let m = y.matrix();
        assert_eq!(m[(0, 1)], Complex64::new(0.0, -1.0));
        assert_eq!(m[(1, 0)], Complex64::new(0.0, 1.0));
        let zx: PauliString = "ZX".parse().unwrap();
        let expected = sigma_z().kron(&pauli_x());
        assert_eq!(zx.matrix(), expected);
    }

    fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
    }

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn decompose_identity_and_number_operator() {
        let terms = pauli_decompose(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(terms, vec![PauliTerm::new(1.0, "I").unwrap()]);

        // c^dagger c with c = [[0, 1], [0, 0]] is diag(0, 1).
        let number = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
        let terms = pauli_decompose(&number).unwrap();
        assert_eq!(
            terms,
            vec![
                PauliTerm::new(0.5, "I").unwrap(),
                PauliTerm::new(-0.5, "Z").unwrap()
            ]
        );
    }

    #[test]
    fn decompose_errors() {
        assert!(matches!(
            pauli_decompose(&ComplexMatrix::identity(3)),
            Err(Error::NotPowerOfTwo(3))
        ));
        let lower = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            pauli_decompose(&lower),
            Err(Error::NotHermitian { .. })
        ));
        assert!(PauliTerm::new(1.0, "IQ").is_err());
    }

    #[test]
    fn string_enumeration() {
        let all: Vec<String> = PauliString::all(2).map(|s| s.to_string()).collect();
        assert_eq!(all.len(), 16);
        assert_eq!(all[0], "II");
        assert_eq!(all[1], "IX");
        assert_eq!(all[15], "ZZ");
    }
}
