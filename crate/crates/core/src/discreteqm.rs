//! Discrete quantum mechanics on a `2^n`-site lattice.
//!
//! Two bases are provided. In the position basis the lattice coordinate is
//! diagonal and momentum is obtained by conjugating with the centred DFT. In
//! the energy basis the truncated ladder operator is the primitive. Every
//! occurrence of the lattice size inside the position-basis formulas is the
//! number of sites `N = 2^num_qubits`, which is what makes the DFT unitary.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::linalg::{herm_eig, ComplexMatrix};
use crate::{Error, Result};

pub const MAX_QUBITS: usize = 8;

/// Largest Hermite order accepted by [`hermite_function`].
pub const HERMITE_MAX_ORDER: usize = 64;

/// Largest `|x|` accepted by [`hermite_function`].
pub const HERMITE_MAX_ABS_X: f64 = 20.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeSpec {
    num_qubits: usize,
}

impl LatticeSpec {
    pub fn new(num_qubits: usize) -> Result<Self> {
        if !(1..=MAX_QUBITS).contains(&num_qubits) {
            return Err(Error::InvalidParameter(format!(
                "num_qubits must be in 1..={MAX_QUBITS}, got {num_qubits}"
            )));
        }
        Ok(Self { num_qubits })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_sites(&self) -> usize {
        1 << self.num_qubits
    }

    /// Physical spacing between adjacent lattice points of `X_pos`.
    pub fn spacing(&self) -> f64 {
        (2.0 * PI / self.num_sites() as f64).sqrt()
    }

    /// Eigenvalues of `X_pos`, ascending.
    pub fn positions(&self) -> Vec<f64> {
        let n = self.num_sites();
        (1..=n)
            .map(|a| self.spacing() * centred_point(a, n))
            .collect()
    }
}

fn centred_point(a: usize, n_sites: usize) -> f64 {
    (2.0 * a as f64 - 1.0 - n_sites as f64) / 2.0
}

/// Centred lattice coordinate `(2a - 1 - N) / 2` of site `a` in `1..=N`.
pub fn lattice_point(a: usize, n_sites: usize) -> Result<f64> {
    if a == 0 || a > n_sites {
        return Err(Error::InvalidParameter(format!(
            "site index {a} outside 1..={n_sites}"
        )));
    }
    Ok(centred_point(a, n_sites))
}

pub fn position_operator(spec: &LatticeSpec) -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&spec.positions())
}

/// Centred DFT, `F[j,k] = exp(2 pi i l(j) l(k) / N) / sqrt(N)`.
pub fn dft_matrix(spec: &LatticeSpec) -> ComplexMatrix {
    let n = spec.num_sites();
    let norm = 1.0 / (n as f64).sqrt();
    let mut f = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let lj = centred_point(j + 1, n);
        for k in 0..n {
            let lk = centred_point(k + 1, n);
            f[(j, k)] = Complex64::from_polar(norm, 2.0 * PI * (lj * lk) / n as f64);
        }
    }
    f
}

/// `P_pos = F^dagger X_pos F`.
pub fn momentum_operator(spec: &LatticeSpec) -> ComplexMatrix {
    let f = dft_matrix(spec);
    let x = position_operator(spec);
    f.dagger()
        .matmul(&x)
        .and_then(|fx| fx.matmul(&f))
        .expect("square operators of equal size")
}

/// Truncated annihilation operator with `A^dagger A = diag(0, 1, ..., N-1)`.
pub fn annihilation_energy(spec: &LatticeSpec) -> ComplexMatrix {
    annihilation(spec.num_sites())
}

/// Truncated annihilation operator on a `levels`-dimensional Fock space.
pub fn annihilation(levels: usize) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(levels, levels);
    for j in 0..levels.saturating_sub(1) {
        a[(j, j + 1)] = Complex64::new(((j + 1) as f64).sqrt(), 0.0);
    }
    a
}

/// `(X_en, P_en)` with `X = (A + A^dagger)/sqrt 2` and `P = i (A - A^dagger)/sqrt 2`.
pub fn xp_energy_basis(spec: &LatticeSpec) -> (ComplexMatrix, ComplexMatrix) {
    let a = annihilation_energy(spec);
    let ad = a.dagger();
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let x = a.add(&ad).expect("same shape").scale_real(inv_sqrt2);
    let p = a
        .sub(&ad)
        .expect("same shape")
        .scale(Complex64::new(0.0, inv_sqrt2));
    (x, p)
}

fn oscillator(x: &ComplexMatrix, p: &ComplexMatrix) -> ComplexMatrix {
    let x2 = x.matmul(x).expect("square");
    let p2 = p.matmul(p).expect("square");
    x2.add(&p2).expect("same shape").scale_real(0.5)
}

/// `H_P = (X_pos^2 + P_pos^2) / 2`.
pub fn hamiltonian_position(spec: &LatticeSpec) -> ComplexMatrix {
    oscillator(&position_operator(spec), &momentum_operator(spec))
}

/// `H_E = A^dagger A + I/2`, built directly as `diag(1/2, 3/2, ...)` so the
/// spectrum is exact rather than carrying the rounding of `sqrt(k)^2`.
pub fn hamiltonian_energy(spec: &LatticeSpec) -> ComplexMatrix {
    let levels: Vec<f64> = (0..spec.num_sites()).map(|k| k as f64 + 0.5).collect();
    ComplexMatrix::from_real_diagonal(&levels)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumRow {
    pub index: usize,
    pub lambda_position: f64,
    pub lambda_energy: f64,
}

/// Ascending spectra of `H_P` and `H_E`, paired by index.
pub fn spectrum_compare(spec: &LatticeSpec) -> Result<Vec<SpectrumRow>> {
    let position = herm_eig(&hamiltonian_position(spec))?.eigenvalues;
    let energy = herm_eig(&hamiltonian_energy(spec))?.eigenvalues;
    Ok(position
        .into_iter()
        .zip(energy)
        .enumerate()
        .map(|(index, (lambda_position, lambda_energy))| SpectrumRow {
            index,
            lambda_position,
            lambda_energy,
        })
        .collect())
}

/// All orthonormal Hermite functions `H_0(x) ..= H_max_order(x)` by recurrence.
pub fn hermite_functions(max_order: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(max_order + 1);
    let h0 = PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(h0);
    if max_order == 0 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * x * h0);
    for n in 1..max_order {
        let nf = n as f64;
        let next = x * (2.0 / (nf + 1.0)).sqrt() * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
        out.push(next);
    }
    out
}

/// The `n`-th orthonormal Hermite function at `x`.
pub fn hermite_function(n: usize, x: f64) -> Result<f64> {
    if n > HERMITE_MAX_ORDER {
        return Err(Error::InvalidParameter(format!(
            "Hermite order {n} exceeds cap {HERMITE_MAX_ORDER}"
        )));
    }
    if !x.is_finite() || x.abs() > HERMITE_MAX_ABS_X {
        return Err(Error::InvalidParameter(format!(
            "Hermite argument {x} outside [-{HERMITE_MAX_ABS_X}, {HERMITE_MAX_ABS_X}]"
        )));
    }
    Ok(hermite_functions(n, x)[n])
}

#[derive(Clone, Debug, PartialEq)]
pub struct WavefunctionGrid {
    pub xs: Vec<f64>,
    pub values: Vec<Complex64>,
}

/// Uniform grid of `points` samples on `[lo, hi]`, endpoints included.
pub fn uniform_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (points - 1) as f64;
            (0..points).map(|k| lo + step * k as f64).collect()
        }
    }
}

/// 201 points on `[-5, 5]` oscillator units.
pub fn default_grid() -> Vec<f64> {
    uniform_grid(-5.0, 5.0, 201)
}

pub(crate) fn check_grid(xs: &[f64]) -> Result<()> {
    if let Some(bad) = xs
        .iter()
        .find(|x| !x.is_finite() || x.abs() > HERMITE_MAX_ABS_X)
    {
        return Err(Error::InvalidParameter(format!(
            "grid point {bad} outside [-{HERMITE_MAX_ABS_X}, {HERMITE_MAX_ABS_X}]"
        )));
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "grid points must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// `psi(x_k) = sum_i weights[i] H_i(x_k)`.
pub fn reconstruct_wavefunction(weights: &[Complex64], xs: &[f64]) -> Result<WavefunctionGrid> {
    if weights.len() > HERMITE_MAX_ORDER + 1 {
        return Err(Error::InvalidParameter(format!(
            "{} weights exceed the Hermite cap of {}",
            weights.len(),
            HERMITE_MAX_ORDER + 1
        )));
    }
    check_grid(xs)?;
    let values = xs
        .iter()
        .map(|&x| {
            if weights.is_empty() {
                return Complex64::new(0.0, 0.0);
            }
            hermite_functions(weights.len() - 1, x)
                .into_iter()
                .zip(weights)
                .map(|(h, w)| w * h)
                .sum()
        })
        .collect();
    Ok(WavefunctionGrid {
        xs: xs.to_vec(),
        values,
    })
}

/// Projects a position-basis lattice vector onto the first `N` Hermite functions.
///
/// Each site amplitude is read as a sample `psi(x_j) sqrt(dx)`, so the weights
/// are the quadrature `sum_j H_n(x_j) v_j sqrt(dx)`.
pub fn lattice_to_energy_weights(
    spec: &LatticeSpec,
    vector: &[Complex64],
) -> Result<Vec<Complex64>> {
    let n = spec.num_sites();
    if vector.len() != n {
        return Err(Error::InvalidParameter(format!(
            "lattice vector has {} entries, expected {n}",
            vector.len()
        )));
    }
    let sqrt_dx = spec.spacing().sqrt();
    let mut weights = vec![Complex64::new(0.0, 0.0); n];
    for (&x, &v) in spec.positions().iter().zip(vector) {
        for (w, h) in weights.iter_mut().zip(hermite_functions(n - 1, x)) {
            *w += v * h * sqrt_dx;
        }
    }
    Ok(weights)
}
