use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::linalg::ComplexMatrix;
use crate::{Error, Result};

/// Elementary gate. Rotations follow `R_a(t) = exp(-i t sigma_a / 2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    Rx {
        target: usize,
        angle: f64,
    },
    Ry {
        target: usize,
        angle: f64,
    },
    Rz {
        target: usize,
        angle: f64,
    },
    Cnot {
        control: usize,
        target: usize,
    },
    /// Multiplies the state by `exp(i angle)`.
    GlobalPhase {
        angle: f64,
    },
}

impl Gate {
    /// 2x2 matrix of a single-qubit gate, `None` for CNOT and global phase.
    pub fn single_qubit_matrix(&self) -> Option<[[Complex64; 2]; 2]> {
        let half = |a: f64| (a / 2.0).sin_cos();
        match *self {
            Gate::Rx { angle, .. } => {
                let (s, c) = half(angle);
                Some([
                    [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
                    [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
                ])
            }
            Gate::Ry { angle, .. } => {
                let (s, c) = half(angle);
                Some([
                    [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
                    [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
                ])
            }
            Gate::Rz { angle, .. } => Some([
                [
                    Complex64::from_polar(1.0, -angle / 2.0),
                    Complex64::new(0.0, 0.0),
                ],
                [
                    Complex64::new(0.0, 0.0),
                    Complex64::from_polar(1.0, angle / 2.0),
                ],
            ]),
            Gate::Cnot { .. } | Gate::GlobalPhase { .. } => None,
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rx { angle, .. }
            | Gate::Ry { angle, .. }
            | Gate::Rz { angle, .. }
            | Gate::GlobalPhase { angle } => Some(angle),
            Gate::Cnot { .. } => None,
        }
    }

    /// Checks qubit indices against the register width and angle finiteness.
    pub fn validate(&self, width: usize) -> Result<()> {
        let check = |index: usize| {
            if index >= width {
                Err(Error::QubitOutOfRange { index, width })
            } else {
                Ok(())
            }
        };
        match *self {
            Gate::Rx { target, .. } | Gate::Ry { target, .. } | Gate::Rz { target, .. } => {
                check(target)?
            }
            Gate::Cnot { control, target } => {
                check(control)?;
                check(target)?;
                if control == target {
                    return Err(Error::InvalidParameter(format!(
                        "CNOT control and target are both q{control}"
                    )));
                }
            }
            Gate::GlobalPhase { .. } => {}
        }
        if let Some(angle) = self.angle() {
            if !angle.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "non-finite gate angle {angle}"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Rx { target, angle } => write!(f, "RX {angle:?} q{target}"),
            Gate::Ry { target, angle } => write!(f, "RY {angle:?} q{target}"),
            Gate::Rz { target, angle } => write!(f, "RZ {angle:?} q{target}"),
            Gate::Cnot { control, target } => write!(f, "CNOT q{control} q{target}"),
            Gate::GlobalPhase { angle } => write!(f, "PHASE {angle:?}"),
        }
    }
}

fn parse_qubit(token: &str) -> std::result::Result<usize, String> {
    token
        .strip_prefix('q')
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| format!("expected qubit like q0, got {token:?}"))
}

fn parse_angle(token: &str) -> std::result::Result<f64, String> {
    token
        .parse::<f64>()
        .ok()
        .filter(|a| a.is_finite())
        .ok_or_else(|| format!("expected finite angle, got {token:?}"))
}

impl FromStr for Gate {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        match tokens.as_slice() {
            ["RX", angle, q] => Ok(Gate::Rx {
                target: parse_qubit(q)?,
                angle: parse_angle(angle)?,
            }),
            ["RY", angle, q] => Ok(Gate::Ry {
                target: parse_qubit(q)?,
                angle: parse_angle(angle)?,
            }),
            ["RZ", angle, q] => Ok(Gate::Rz {
                target: parse_qubit(q)?,
                angle: parse_angle(angle)?,
            }),
            ["CNOT", c, t] => Ok(Gate::Cnot {
                control: parse_qubit(c)?,
                target: parse_qubit(t)?,
            }),
            ["PHASE", angle] => Ok(Gate::GlobalPhase {
                angle: parse_angle(angle)?,
            }),
            _ => Err(format!("unrecognised gate {s:?}")),
        }
    }
}

/// One gate per line; blank lines and `#` comments are ignored.
pub fn parse_circuit(text: &str) -> Result<Vec<Gate>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| {
            l.trim().parse().map_err(|message| Error::Parse {
                line: i + 1,
                message,
            })
        })
        .collect()
}

pub fn write_circuit(gates: &[Gate]) -> String {
    gates.iter().map(|g| format!("{g}\n")).collect()
}

pub fn count_cnots(gates: &[Gate]) -> usize {
    gates
        .iter()
        .filter(|g| matches!(g, Gate::Cnot { .. }))
        .count()
}

fn embed_single(m: [[Complex64; 2]; 2], target: usize, width: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::identity(1);
    for q in 0..width {
        let factor = if q == target {
            ComplexMatrix::new(2, 2, vec![m[0][0], m[0][1], m[1][0], m[1][1]]).expect("2x2")
        } else {
            ComplexMatrix::identity(2)
        };
        out = out.kron(&factor);
    }
    out
}

fn cnot_matrix(control: usize, target: usize, width: usize) -> ComplexMatrix {
    let dim = 1 << width;
    let cbit = 1 << (width - 1 - control);
    let tbit = 1 << (width - 1 - target);
    let mut out = ComplexMatrix::zeros(dim, dim);
    for col in 0..dim {
        let row = if col & cbit != 0 { col ^ tbit } else { col };
        out[(row, col)] = Complex64::new(1.0, 0.0);
    }
    out
}

/// Dense unitary of a gate sequence; the first gate acts first.
pub fn circuit_unitary(gates: &[Gate], width: usize) -> Result<ComplexMatrix> {
    let mut total = ComplexMatrix::identity(1 << width);
    for gate in gates {
        gate.validate(width)?;
        let m = match *gate {
            Gate::Cnot { control, target } => cnot_matrix(control, target, width),
            Gate::GlobalPhase { angle } => {
                ComplexMatrix::identity(1 << width).scale(Complex64::from_polar(1.0, angle))
            }
            Gate::Rx { target, .. } | Gate::Ry { target, .. } | Gate::Rz { target, .. } => {
                embed_single(gate.single_qubit_matrix().expect("rotation"), target, width)
            }
        };
        total = m.matmul(&total)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn text_format_round_trip() {
        let gates = vec![
            Gate::Ry {
                target: 0,
                angle: PI / 2.0,
            },
            Gate::Cnot {
                control: 0,
                target: 1,
            },
            Gate::GlobalPhase { angle: 0.25 },
            Gate::Rz {
                target: 1,
                angle: -0.0,
            },
            Gate::Rx {
                target: 1,
                angle: 1e-300,
            },
        ];
        let text = write_circuit(&gates);
        assert!(text.starts_with("RY 1.5707963267948966 q0\nCNOT q0 q1\nPHASE 0.25\n"));
        assert_eq!(parse_circuit(&text).unwrap(), gates);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_circuit("# header\nRY 0.1 q0\nFOO q1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(parse_circuit("RY nan q0").is_err());
        assert!(parse_circuit("CNOT 0 1").is_err());
    }

    #[test]
    fn validation() {
        assert!(Gate::Cnot {
            control: 0,
            target: 0
        }
        .validate(2)
        .is_err());
        assert_eq!(
            Gate::Ry {
                target: 2,
                angle: 0.0
            }
            .validate(2),
            Err(Error::QubitOutOfRange { index: 2, width: 2 })
        );
        assert!(Gate::Rz {
            target: 0,
            angle: f64::NAN
        }
        .validate(1)
        .is_err());
    }

    #[test]
    fn cnot_matrix_convention() {
        let m = circuit_unitary(
            &[Gate::Cnot {
                control: 0,
                target: 1,
            }],
            2,
        )
        .unwrap();
        let expected = ComplexMatrix::from_real(
            4,
            4,
            &[
                1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.,
            ],
        )
        .unwrap();
        assert_eq!(m, expected);
    }
}
