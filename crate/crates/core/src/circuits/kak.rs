//! Two-qubit unitary synthesis through the magic basis.
//!
//! Any `U` in `U(4)` factors as `(A1 (x) B1) N(a, b, c) (A2 (x) B2)` up to a
//! global phase, where `N = exp(i (a XX + b YY + c ZZ))`. In the magic basis
//! local gates become real orthogonal matrices and `N` becomes diagonal, so
//! the factorisation reduces to diagonalising the symmetric unitary
//! `W = U_m^T U_m` with a real orthogonal eigenbasis. `N` is emitted with a
//! fixed three-CNOT template and every local factor as a ZYZ Euler triple,
//! with the template's outer Z rotations merged into the adjacent locals.

use std::f64::consts::{E, FRAC_1_PI, FRAC_1_SQRT_2, FRAC_PI_2, PI, SQRT_2};

use num_complex::Complex64;

use super::gate::{circuit_unitary, Gate};
use crate::linalg::{herm_eig, unitary_defect, ComplexMatrix};
use crate::{Error, Result};

/// Input unitarity tolerance, `max |U^dagger U - I|`.
pub const KAK_UNITARY_TOL: f64 = 1e-10;

/// Residual below which the input is treated as a product of local gates.
const LOCAL_TOL: f64 = 1e-13;

/// Mixing coefficients tried, in order, for the real/imaginary combination.
// Irrational values avoid accidental cancellations between the two parts.
const MIXES: [f64; 5] = [0.577_215_664_901_532_9, SQRT_2, -FRAC_1_PI, E, 0.1];

type Mat2 = [[Complex64; 2]; 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Columns are the magic basis states, qubit 0 high-order.
fn magic_basis() -> ComplexMatrix {
    let s = FRAC_1_SQRT_2;
    ComplexMatrix::new(
        4,
        4,
        vec![
            c(s, 0.0),
            c(0.0, s),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, s),
            c(s, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, s),
            c(-s, 0.0),
            c(s, 0.0),
            c(0.0, -s),
            c(0.0, 0.0),
            c(0.0, 0.0),
        ],
    )
    .expect("4x4")
}

/// Diagonals of XX, YY and ZZ in the magic basis.
const XX_DIAG: [f64; 4] = [1.0, -1.0, 1.0, -1.0];
const YY_DIAG: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
const ZZ_DIAG: [f64; 4] = [1.0, 1.0, -1.0, -1.0];

fn det4(m: &ComplexMatrix) -> Complex64 {
    let mut a: Vec<Vec<Complex64>> = (0..4)
        .map(|i| (0..4).map(|j| m[(i, j)]).collect())
        .collect();
    let mut det = c(1.0, 0.0);
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .expect("non-empty range");
        if a[pivot][col].norm() == 0.0 {
            return c(0.0, 0.0);
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        let pivot_row = a[col].clone();
        for row in a.iter_mut().skip(col + 1) {
            let f = row[col] / pivot_row[col];
            for (x, p) in row.iter_mut().zip(pivot_row.iter()).skip(col) {
                *x -= f * p;
            }
        }
    }
    det
}

fn block(m: &ComplexMatrix, a: usize, b: usize) -> Mat2 {
    [
        [m[(2 * a, 2 * b)], m[(2 * a, 2 * b + 1)]],
        [m[(2 * a + 1, 2 * b)], m[(2 * a + 1, 2 * b + 1)]],
    ]
}

fn mat2_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

fn mat2_to_matrix(m: &Mat2) -> ComplexMatrix {
    ComplexMatrix::new(2, 2, vec![m[0][0], m[0][1], m[1][0], m[1][1]]).expect("2x2")
}

/// Splits a 4x4 matrix into `A (x) B`, returning the factors and the residual.
fn factor_local(m: &ComplexMatrix) -> (Mat2, Mat2, f64) {
    let norm = |b: &Mat2| b.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>();
    let (a0, b0) = [(0, 0), (0, 1), (1, 0), (1, 1)]
        .into_iter()
        .max_by(|&(i, j), &(k, l)| norm(&block(m, i, j)).total_cmp(&norm(&block(m, k, l))))
        .expect("four blocks");
    let pivot = block(m, a0, b0);
    let det = pivot[0][0] * pivot[1][1] - pivot[0][1] * pivot[1][0];
    let scale = det.sqrt();
    if scale.norm() < 1e-8 {
        return ([[c(0.0, 0.0); 2]; 2], [[c(0.0, 0.0); 2]; 2], f64::INFINITY);
    }
    let b: Mat2 = [
        [pivot[0][0] / scale, pivot[0][1] / scale],
        [pivot[1][0] / scale, pivot[1][1] / scale],
    ];
    let mut a = [[c(0.0, 0.0); 2]; 2];
    for (i, row) in a.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let blk = block(m, i, j);
            // A[i][j] = Tr(B^dagger blk) / 2
            let mut acc = c(0.0, 0.0);
            for r in 0..2 {
                for s in 0..2 {
                    acc += b[r][s].conj() * blk[r][s];
                }
            }
            *entry = acc / 2.0;
        }
    }
    let residual = mat2_to_matrix(&a).kron(&mat2_to_matrix(&b)).max_abs_diff(m);
    (a, b, residual)
}

/// ZYZ Euler angles `(alpha, beta, gamma)` with `U = e^{i phi} Rz(alpha) Ry(beta) Rz(gamma)`.
fn zyz_angles(u: &Mat2) -> (f64, f64, f64) {
    let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
    let phase = Complex64::from_polar(1.0, -det.arg() / 2.0);
    let v00 = u[0][0] * phase;
    let v10 = u[1][0] * phase;
    let v11 = u[1][1] * phase;
    let beta = 2.0 * v10.norm().atan2(v00.norm());
    let sum = if v11.norm() > 1e-14 {
        2.0 * v11.arg()
    } else {
        0.0
    };
    let diff = if v10.norm() > 1e-14 {
        2.0 * v10.arg()
    } else {
        0.0
    };
    ((sum + diff) / 2.0, beta, (sum - diff) / 2.0)
}

/// Euler gates for `u` on `target`, in application order.
fn euler_gates(u: &Mat2, target: usize) -> [Gate; 3] {
    let (alpha, beta, gamma) = zyz_angles(u);
    [
        Gate::Rz {
            target,
            angle: gamma,
        },
        Gate::Ry {
            target,
            angle: beta,
        },
        Gate::Rz {
            target,
            angle: alpha,
        },
    ]
}

fn rz(angle: f64) -> Mat2 {
    [
        [Complex64::from_polar(1.0, -angle / 2.0), c(0.0, 0.0)],
        [c(0.0, 0.0), Complex64::from_polar(1.0, angle / 2.0)],
    ]
}

/// Real orthogonal `P` (det +1) with `P^T W P` diagonal, for symmetric unitary `W`.
fn real_eigenbasis(w: &ComplexMatrix) -> Result<ComplexMatrix> {
    let mut best: Option<(f64, ComplexMatrix)> = None;
    for mix in MIXES {
        let mut combo = ComplexMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                let z = w[(i, j)];
                // Re(W) and Im(W) are real symmetric and commute.
                let re = (z.re + w[(j, i)].re) / 2.0;
                let im = (z.im + w[(j, i)].im) / 2.0;
                combo[(i, j)] = c(re + mix * im, 0.0);
            }
        }
        let eig = herm_eig(&combo)?;
        let mut p = ComplexMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                p[(i, j)] = c(eig.eigenvectors[(i, j)].re, 0.0);
            }
        }
        if det4(&p).re < 0.0 {
            for i in 0..4 {
                p[(i, 0)] = -p[(i, 0)];
            }
        }
        let d = p.transpose().matmul(w)?.matmul(&p)?;
        let off = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| d[(i, j)].norm())
            .fold(0.0, f64::max);
        if off < 1e-12 {
            return Ok(p);
        }
        if best.as_ref().is_none_or(|(b, _)| off < *b) {
            best = Some((off, p));
        }
    }
    Ok(best.expect("at least one mix").1)
}

/// Decomposes a two-qubit unitary into at most 3 CNOTs, 15 rotations and a global phase.
pub fn kak_decompose(u: &ComplexMatrix) -> Result<Vec<Gate>> {
    if u.rows() != 4 || u.cols() != 4 {
        return Err(Error::InvalidParameter(format!(
            "two-qubit synthesis needs a 4x4 unitary, got {}x{}",
            u.rows(),
            u.cols()
        )));
    }
    let deviation = unitary_defect(u);
    if deviation > KAK_UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }

    let (a, b, residual) = factor_local(u);
    let mut gates: Vec<Gate> = if residual < LOCAL_TOL {
        euler_gates(&a, 0)
            .into_iter()
            .chain(euler_gates(&b, 1))
            .collect()
    } else {
        entangling_gates(u)?
    };

    let composed = circuit_unitary(&gates, 2)?;
    let overlap = composed.dagger().matmul(u)?.trace();
    gates.push(Gate::GlobalPhase {
        angle: overlap.arg(),
    });
    Ok(gates)
}

fn entangling_gates(u: &ComplexMatrix) -> Result<Vec<Gate>> {
    let det_phase = det4(u).arg() / 4.0;
    let special = u.scale(Complex64::from_polar(1.0, -det_phase));
    let m = magic_basis();
    let m_dag = m.dagger();
    let u_magic = m_dag.matmul(&special)?.matmul(&m)?;
    let w = u_magic.transpose().matmul(&u_magic)?;

    let p = real_eigenbasis(&w)?;
    let d = p.transpose().matmul(&w)?.matmul(&p)?;
    let mut half: Vec<f64> = (0..4).map(|k| d[(k, k)].arg() / 2.0).collect();
    // Product of the square roots must be +1 so the left factor lands in SO(4).
    if half.iter().sum::<f64>().cos() < 0.0 {
        half[0] += PI;
    }

    let inv_sqrt = ComplexMatrix::from_diagonal(
        &half
            .iter()
            .map(|&h| Complex64::from_polar(1.0, -h))
            .collect::<Vec<_>>(),
    );
    let k1 = u_magic.matmul(&p)?.matmul(&inv_sqrt)?;
    let left = m.matmul(&k1)?.matmul(&m_dag)?;
    let right = m.matmul(&p.transpose())?.matmul(&m_dag)?;

    // half[k] = phi + a XX_k + b YY_k + c ZZ_k; the sign vectors are orthogonal.
    let project = |signs: &[f64; 4]| half.iter().zip(signs).map(|(h, s)| h * s).sum::<f64>() / 4.0;
    let (ca, cb, cc) = (project(&XX_DIAG), project(&YY_DIAG), project(&ZZ_DIAG));

    let (a1, b1, _) = factor_local(&left);
    let (a2, b2, _) = factor_local(&right);
    let b2 = mat2_mul(&rz(-FRAC_PI_2), &b2);
    let a1 = mat2_mul(&a1, &rz(FRAC_PI_2));

    let mut gates = Vec::with_capacity(19);
    gates.extend(euler_gates(&a2, 0));
    gates.extend(euler_gates(&b2, 1));
    gates.push(Gate::Cnot {
        control: 1,
        target: 0,
    });
    gates.push(Gate::Rz {
        target: 0,
        angle: FRAC_PI_2 - 2.0 * cc,
    });
    gates.push(Gate::Ry {
        target: 1,
        angle: 2.0 * ca - FRAC_PI_2,
    });
    gates.push(Gate::Cnot {
        control: 0,
        target: 1,
    });
    gates.push(Gate::Ry {
        target: 1,
        angle: FRAC_PI_2 - 2.0 * cb,
    });
    gates.push(Gate::Cnot {
        control: 1,
        target: 0,
    });
    gates.extend(euler_gates(&a1, 0));
    gates.extend(euler_gates(&b1, 1));
    Ok(gates)
}

/// `|Tr(C^dagger U)| / dim` for the circuit `C` built from `gates`.
pub fn synthesis_fidelity(gates: &[Gate], u: &ComplexMatrix) -> Result<f64> {
    let width = u.rows().trailing_zeros() as usize;
    let composed = circuit_unitary(gates, width)?;
    Ok(composed.dagger().matmul(u)?.trace().norm() / u.rows() as f64)
}
