//! Thermofield dynamics for a single fermion and a truncated boson.
//!
//! The doubled Hilbert space puts the physical mode in the high-order
//! Kronecker slot and its thermal double in the low-order slot, so the
//! fermion basis index is `2 n_L + n_R` and the boson index is
//! `cutoff * n_L + n_R`.

use num_complex::Complex64;

use crate::discreteqm::{annihilation, check_grid, hermite_functions, HERMITE_MAX_ORDER};
use crate::linalg::{unitary_from_hermitian, ComplexMatrix};
use crate::{Error, Result};

/// Default number of boson Fock levels.
pub const DEFAULT_BOSON_CUTOFF: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalParams {
    beta: f64,
    mass: f64,
}

impl ThermalParams {
    pub fn new(beta: f64, mass: f64) -> Result<Self> {
        if !beta.is_finite() || beta < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "beta must be finite and non-negative, got {beta}"
            )));
        }
        if !mass.is_finite() || mass <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "mass must be finite and positive, got {mass}"
            )));
        }
        Ok(Self { beta, mass })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }
}

/// Bogoliubov angle, `arctan(exp(-beta m / 2))`.
pub fn theta(params: &ThermalParams) -> f64 {
    (-params.beta * params.mass / 2.0).exp().atan()
}

/// A single fermion mode and its doubled-space copies.
#[derive(Clone, Debug)]
pub struct FermionPair {
    pub c: ComplexMatrix,
    pub c_l: ComplexMatrix,
    pub c_r: ComplexMatrix,
}

/// `c_L = c (x) I` and `c_R = sigma_z (x) c`; the `sigma_z` string keeps the
/// two modes mutually anticommuting.
pub fn fermion_pair() -> FermionPair {
    let c = annihilation(2);
    let id = ComplexMatrix::identity(2);
    let sigma_z = ComplexMatrix::from_real_diagonal(&[1.0, -1.0]);
    FermionPair {
        c_l: c.kron(&id),
        c_r: sigma_z.kron(&c),
        c,
    }
}

/// `G = -i theta (c_R c_L - c_L^dagger c_R^dagger)`.
pub fn bogoliubov_generator(params: &ThermalParams) -> ComplexMatrix {
    let FermionPair { c_l, c_r, .. } = fermion_pair();
    let pair = c_r.matmul(&c_l).expect("4x4");
    let pair_dag = c_l.dagger().matmul(&c_r.dagger()).expect("4x4");
    pair.sub(&pair_dag)
        .expect("4x4")
        .scale(Complex64::new(0.0, -theta(params)))
}

fn check_generator(g: &ComplexMatrix) -> Result<()> {
    if !g.is_square() {
        return Err(Error::NotSquare {
            rows: g.rows(),
            cols: g.cols(),
        });
    }
    Ok(())
}

/// `A(beta) = e^{iG} A(0) e^{-iG}`.
pub fn thermal_transform(a0: &ComplexMatrix, g: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_generator(g)?;
    if a0.rows() != g.rows() || a0.cols() != g.cols() {
        return Err(Error::DimensionMismatch {
            left_rows: a0.rows(),
            left_cols: a0.cols(),
            right_rows: g.rows(),
            right_cols: g.cols(),
        });
    }
    let u = unitary_from_hermitian(g, -1.0)?;
    u.dagger().matmul(a0)?.matmul(&u)
}

/// State over a doubled Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct ThermalState {
    pub amplitudes: Vec<Complex64>,
    /// Absent when the state was built from a bare generator.
    pub params: Option<ThermalParams>,
}

impl ThermalState {
    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `<psi| op |psi>`, real part.
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<f64> {
        let v = op.mul_vec(&self.amplitudes)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&v)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .re)
    }
}

/// Rotates `amps` so that the first non-negligible amplitude is real-positive.
fn canonical_phase(amps: &mut [Complex64]) {
    if let Some(pivot) = amps.iter().copied().find(|z| z.norm() > 1e-300) {
        let phase = pivot.conj() / pivot.norm();
        amps.iter_mut().for_each(|z| *z *= phase);
    }
}

/// `|0(beta)> = e^{-iG} |0>` with the vacuum component made real-positive.
pub fn thermal_vacuum(g: &ComplexMatrix) -> Result<ThermalState> {
    check_generator(g)?;
    let u = unitary_from_hermitian(g, -1.0)?;
    let mut amplitudes = u.column(0);
    canonical_phase(&mut amplitudes);
    Ok(ThermalState {
        amplitudes,
        params: None,
    })
}

/// Thermal vacuum of the fermion pair at the given temperature.
pub fn fermion_thermal_state(params: &ThermalParams) -> Result<ThermalState> {
    let mut state = thermal_vacuum(&bogoliubov_generator(params))?;
    state.params = Some(*params);
    Ok(state)
}

/// `H = m c_L^dagger c_L`, no zero-point term.
pub fn fermion_hamiltonian(mass: f64) -> Result<ComplexMatrix> {
    if !mass.is_finite() || mass <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "mass must be finite and positive, got {mass}"
        )));
    }
    let c_l = fermion_pair().c_l;
    Ok(c_l.dagger().matmul(&c_l)?.scale_real(mass))
}

/// `<0| e^{iG} H e^{-iG} |0>` evaluated with dense matrices.
pub fn thermal_energy(params: &ThermalParams) -> Result<f64> {
    let h = fermion_hamiltonian(params.mass)?;
    let h_beta = thermal_transform(&h, &bogoliubov_generator(params))?;
    Ok(h_beta[(0, 0)].re)
}

/// Fermi occupation `e^{-beta m} / (1 + e^{-beta m})`.
pub fn fermion_occupation(params: &ThermalParams) -> f64 {
    let w = (-params.beta * params.mass).exp();
    w / (1.0 + w)
}

/// Closed-form thermal energy `m e^{-beta m} / (1 + e^{-beta m})`.
pub fn exact_energy_fermion(params: &ThermalParams) -> f64 {
    params.mass * fermion_occupation(params)
}

/// `Z = sum_n exp(-beta E_n)`.
pub fn partition_function(energies: &[f64], beta: f64) -> f64 {
    energies.iter().map(|e| (-beta * e).exp()).sum()
}

fn boson_levels(params: &ThermalParams, n_max: usize) -> Vec<f64> {
    (0..=n_max).map(|j| j as f64 * params.mass).collect()
}

/// Mean energy of the `n_max + 1` lowest levels `E_j = j m` at inverse temperature beta.
pub fn exact_energy_boson(params: &ThermalParams, n_max: usize) -> Result<f64> {
    if n_max < 1 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let levels = boson_levels(params, n_max);
    let mut num = 0.0;
    let mut den = 0.0;
    for e in levels {
        let w = (-params.beta * e).exp();
        num += w * e;
        den += w;
    }
    Ok(num / den)
}

fn check_cutoff(cutoff: usize) -> Result<()> {
    if cutoff < 2 {
        return Err(Error::InvalidParameter(format!(
            "boson cutoff must be at least 2, got {cutoff}"
        )));
    }
    Ok(())
}

/// Truncated boson thermal vacuum: amplitude `e^{-beta n m / 2} / sqrt(Z)` on `|n, n~>`.
pub fn boson_thermal_state(params: &ThermalParams, cutoff: usize) -> Result<ThermalState> {
    check_cutoff(cutoff)?;
    let levels = boson_levels(params, cutoff - 1);
    let z = partition_function(&levels, params.beta);
    let norm = z.sqrt();
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); cutoff * cutoff];
    for (n, e) in levels.iter().enumerate() {
        amplitudes[cutoff * n + n] = Complex64::new((-params.beta * e / 2.0).exp() / norm, 0.0);
    }
    Ok(ThermalState {
        amplitudes,
        params: Some(*params),
    })
}

/// Same state built as `sum_j x^j (a_L^dagger a_R^dagger)^j / j! |0,0>` with
/// `x = e^{-beta m / 2}`, truncated to `cutoff` levels and divided by `sqrt(Z)`.
pub fn boson_thermal_state_series(params: &ThermalParams, cutoff: usize) -> Result<ThermalState> {
    check_cutoff(cutoff)?;
    let a_dag = annihilation(cutoff).dagger();
    let id = ComplexMatrix::identity(cutoff);
    let pair_creation = a_dag.kron(&id).matmul(&id.kron(&a_dag))?;
    let x = (-params.beta * params.mass / 2.0).exp();

    let dim = cutoff * cutoff;
    let mut term = vec![Complex64::new(0.0, 0.0); dim];
    term[0] = Complex64::new(1.0, 0.0);
    let mut sum = term.clone();
    for j in 1..cutoff {
        let next = pair_creation.mul_vec(&term)?;
        let factor = x / j as f64;
        term = next.into_iter().map(|z| z * factor).collect();
        sum.iter_mut().zip(&term).for_each(|(s, t)| *s += t);
    }

    let z = partition_function(&boson_levels(params, cutoff - 1), params.beta);
    let norm = z.sqrt();
    Ok(ThermalState {
        amplitudes: sum.into_iter().map(|s| s / norm).collect(),
        params: Some(*params),
    })
}

/// `m a^dagger a (x) I` on the doubled truncated Fock space.
pub fn boson_hamiltonian(mass: f64, cutoff: usize) -> Result<ComplexMatrix> {
    check_cutoff(cutoff)?;
    let a = annihilation(cutoff);
    let number = a.dagger().matmul(&a)?;
    Ok(number
        .kron(&ComplexMatrix::identity(cutoff))
        .scale_real(mass))
}

/// Thermal ground state in the position basis, sampled on `xs x xs`.
#[derive(Clone, Debug, PartialEq)]
pub struct PositionGrid {
    pub xs: Vec<f64>,
    /// Row-major, `values[k * xs.len() + l]` is the amplitude at `(xs[k], xs[l])`.
    pub values: Vec<f64>,
}

impl PositionGrid {
    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.values[k * self.xs.len() + l]
    }

    /// Marginal `p(x) = sum_l |psi(x, x~_l)|^2 dx~` on the physical coordinate.
    pub fn marginal(&self) -> Vec<f64> {
        let n = self.xs.len();
        let dx = if n > 1 { self.xs[1] - self.xs[0] } else { 1.0 };
        (0..n)
            .map(|k| (0..n).map(|l| self.get(k, l).powi(2)).sum::<f64>() * dx)
            .collect()
    }

    /// Variance of the normalised marginal distribution.
    pub fn marginal_variance(&self) -> f64 {
        let p = self.marginal();
        let total: f64 = p.iter().sum();
        let mean: f64 = p.iter().zip(&self.xs).map(|(w, x)| w * x).sum::<f64>() / total;
        p.iter()
            .zip(&self.xs)
            .map(|(w, x)| w * (x - mean).powi(2))
            .sum::<f64>()
            / total
    }
}

/// `psi(x, x~) = sum_n H_n(x) H_n(x~) e^{-beta n m / 2} / sqrt(Z)` over `cutoff` levels.
pub fn thermal_position_wavefunction(
    params: &ThermalParams,
    xs: &[f64],
    cutoff: usize,
) -> Result<PositionGrid> {
    if cutoff == 0 || cutoff > HERMITE_MAX_ORDER + 1 {
        return Err(Error::InvalidParameter(format!(
            "cutoff must be in 1..={}, got {cutoff}",
            HERMITE_MAX_ORDER + 1
        )));
    }
    check_grid(xs)?;
    let levels = boson_levels(params, cutoff - 1);
    let norm = partition_function(&levels, params.beta).sqrt();
    let weights: Vec<f64> = levels
        .iter()
        .map(|e| (-params.beta * e / 2.0).exp() / norm)
        .collect();
    let table: Vec<Vec<f64>> = xs
        .iter()
        .map(|&x| hermite_functions(cutoff - 1, x))
        .collect();

    let n = xs.len();
    let mut values = vec![0.0; n * n];
    for k in 0..n {
        for l in k..n {
            let v: f64 = weights
                .iter()
                .zip(&table[k])
                .zip(&table[l])
                .map(|((w, a), b)| w * a * b)
                .sum();
            values[k * n + l] = v;
            values[l * n + k] = v;
        }
    }
    Ok(PositionGrid {
        xs: xs.to_vec(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discreteqm::{default_grid, hermite_function, uniform_grid};
    use crate::linalg::{eigenvalues, is_unitary};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn params(beta: f64, mass: f64) -> ThermalParams {
        ThermalParams::new(beta, mass).unwrap()
    }

    fn grid_params() -> Vec<ThermalParams> {
        let mut out = Vec::new();
        for beta in [0.01, 0.1, 1.0, 10.0] {
            for mass in [0.5, 1.0, 2.0] {
                out.push(params(beta, mass));
            }
        }
        out
    }

    #[test]
    fn params_validation() {
        assert!(ThermalParams::new(-1.0, 1.0).is_err());
        assert!(ThermalParams::new(f64::INFINITY, 1.0).is_err());
        assert!(ThermalParams::new(1.0, 0.0).is_err());
        assert!(ThermalParams::new(0.0, 1.0).is_ok());
    }

    #[test]
    fn theta_values() {
        assert_abs_diff_eq!(theta(&params(0.0, 1.0)), FRAC_PI_4, epsilon = 1e-15);
        assert!(theta(&params(1e3, 1.0)) < 1e-200);
        assert_abs_diff_eq!(
            theta(&params(1.0, 1.0)),
            (-0.5f64).exp().atan(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(theta(&params(1.0, 1.0)), 0.5452, epsilon = 1e-4);
    }

    #[test]
    fn fermion_algebra() {
        let FermionPair { c, c_l, c_r } = fermion_pair();
        let i2 = ComplexMatrix::identity(2);
        let i4 = ComplexMatrix::identity(4);
        let zero4 = ComplexMatrix::zeros(4, 4);
        assert_eq!(c.matmul(&c).unwrap(), ComplexMatrix::zeros(2, 2));
        assert_eq!(c.anticommutator(&c.dagger()).unwrap(), i2);
        assert_eq!(c_l.anticommutator(&c_l.dagger()).unwrap(), i4);
        assert_eq!(c_r.anticommutator(&c_r.dagger()).unwrap(), i4);
        assert_eq!(c_l.anticommutator(&c_r).unwrap(), zero4);
        assert_eq!(c_l.anticommutator(&c_r.dagger()).unwrap(), zero4);
        assert_eq!(c_l.matmul(&c_l).unwrap(), zero4);
        assert_eq!(c_r.matmul(&c_r).unwrap(), zero4);
    }

    #[test]
    fn generator_structure() {
        let g = bogoliubov_generator(&params(1.0, 1.0));
        assert!(g.hermitian_defect() < 1e-12);
        for mixed in [1, 2] {
            for k in 0..4 {
                assert_eq!(g[(mixed, k)], Complex64::new(0.0, 0.0));
                assert_eq!(g[(k, mixed)], Complex64::new(0.0, 0.0));
            }
        }
        let th = theta(&params(1.0, 1.0));
        assert_abs_diff_eq!(g[(0, 3)].im, -th, epsilon = 1e-15);
        assert_abs_diff_eq!(g[(3, 0)].im, th, epsilon = 1e-15);
        assert!(bogoliubov_generator(&params(1e3, 1.0)).max_abs() < 1e-200);
    }

    #[test]
    fn exponential_of_generator_acts_as_rotation() {
        // Independent oracle: truncated Taylor series of exp(-iG).
        let p = params(1.0, 1.0);
        let g = bogoliubov_generator(&p);
        let minus_i_g = g.scale(Complex64::new(0.0, -1.0));
        let mut term = ComplexMatrix::identity(4);
        let mut series = term.clone();
        for k in 1..40 {
            term = term.matmul(&minus_i_g).unwrap().scale_real(1.0 / k as f64);
            series = series.add(&term).unwrap();
        }
        let u = unitary_from_hermitian(&g, -1.0).unwrap();
        assert!(u.max_abs_diff(&series) < 1e-13);
        let th = (-0.5f64).exp().atan();
        assert_abs_diff_eq!(u[(0, 0)].re, th.cos(), epsilon = 1e-14);
        assert_abs_diff_eq!(u[(3, 0)].re, th.sin(), epsilon = 1e-14);
    }

    #[test]
    fn generator_exponential_unitary_on_grid() {
        for p in [0.01, 0.1, 1.0, 10.0]
            .iter()
            .flat_map(|&b| [0.5, 1.0, 2.0].map(|m| params(b, m)))
        {
            let u = unitary_from_hermitian(&bogoliubov_generator(&p), -1.0).unwrap();
            assert!(is_unitary(&u, 1e-10));
        }
    }

    #[test]
    fn thermal_transform_examples() {
        let h = fermion_hamiltonian(1.0).unwrap();
        assert!(
            thermal_transform(&h, &ComplexMatrix::zeros(4, 4))
                .unwrap()
                .max_abs_diff(&h)
                < 1e-15
        );
        let hb = thermal_transform(&h, &bogoliubov_generator(&params(0.0, 1.0))).unwrap();
        assert_abs_diff_eq!(hb[(0, 0)].re, 0.5, epsilon = 1e-14);
        assert!(thermal_transform(&h, &ComplexMatrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn thermal_transform_preserves_spectrum() {
        for p in grid_params() {
            let h = fermion_hamiltonian(p.mass()).unwrap();
            let hb = thermal_transform(&h, &bogoliubov_generator(&p)).unwrap();
            for (a, b) in eigenvalues(&h)
                .unwrap()
                .iter()
                .zip(eigenvalues(&hb).unwrap())
            {
                assert_abs_diff_eq!(*a, b, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn thermal_vacuum_examples() {
        let zero = thermal_vacuum(&ComplexMatrix::zeros(4, 4)).unwrap();
        assert_eq!(zero.amplitudes[0], Complex64::new(1.0, 0.0));
        assert!(zero.amplitudes[1..].iter().all(|z| z.norm() < 1e-15));

        let hot = fermion_thermal_state(&params(0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(hot.amplitudes[0].re, FRAC_1_SQRT_2, epsilon = 1e-14);
        assert_abs_diff_eq!(hot.amplitudes[3].re, FRAC_1_SQRT_2, epsilon = 1e-14);
    }

    #[test]
    fn thermal_vacuum_structure_on_grid() {
        for p in grid_params() {
            let state = fermion_thermal_state(&p).unwrap();
            assert!((state.norm() - 1.0).abs() < 1e-12);
            assert_eq!(state.amplitudes[1], Complex64::new(0.0, 0.0));
            assert_eq!(state.amplitudes[2], Complex64::new(0.0, 0.0));
            assert!(state.amplitudes[0].im == 0.0 && state.amplitudes[0].re > 0.0);
            assert_abs_diff_eq!(
                state.amplitudes[0].norm_sqr(),
                theta(&p).cos().powi(2),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn fermion_hamiltonian_examples() {
        let h = fermion_hamiltonian(1.0).unwrap();
        let ev = eigenvalues(&h).unwrap();
        for (a, b) in ev.iter().zip([0.0, 0.0, 1.0, 1.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(
            fermion_hamiltonian(2.5).unwrap().trace().re,
            5.0,
            epsilon = 1e-14
        );
        assert!(h.column(0).iter().all(|z| z.norm() == 0.0));
        assert!(fermion_hamiltonian(0.0).is_err());
    }

    #[test]
    fn thermal_energy_matches_closed_form() {
        assert_abs_diff_eq!(
            thermal_energy(&params(0.0, 1.0)).unwrap(),
            0.5,
            epsilon = 1e-14
        );
        assert!(thermal_energy(&params(100.0, 1.0)).unwrap() < 1e-40);
        let e1 = (-1.0f64).exp() / (1.0 + (-1.0f64).exp());
        assert_abs_diff_eq!(
            thermal_energy(&params(1.0, 1.0)).unwrap(),
            e1,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(e1, 0.268_941_421_369_995, epsilon = 1e-12);
        for p in grid_params() {
            assert_abs_diff_eq!(
                thermal_energy(&p).unwrap(),
                exact_energy_fermion(&p),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn fermion_energy_shape() {
        assert_abs_diff_eq!(
            exact_energy_fermion(&params(0.0, 3.0)),
            1.5,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(fermion_occupation(&params(0.0, 3.0)), 0.5, epsilon = 1e-15);
        let mut last = f64::INFINITY;
        for k in 0..100 {
            let e = exact_energy_fermion(&params(k as f64 * 0.2, 1.0));
            assert!(e < last);
            last = e;
        }
    }

    #[test]
    fn partition_function_examples() {
        assert_eq!(partition_function(&[0.0, 1.0, 5.0], 0.0), 3.0);
        let m = 1.7;
        for beta in [0.0, 0.3, 2.0] {
            assert_abs_diff_eq!(
                partition_function(&[0.0, m], beta),
                1.0 + (-beta * m).exp(),
                epsilon = 1e-15
            );
        }
        let direct = 1.0 + (-1.0f64).exp() + (-2.0f64).exp() + (-3.0f64).exp();
        assert_abs_diff_eq!(
            partition_function(&[0.0, 1.0, 2.0, 3.0], 1.0),
            direct,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(direct, 1.5530, epsilon = 1e-4);
    }

    #[test]
    fn boson_energy_limits() {
        assert!(exact_energy_boson(&params(200.0, 1.0), 15).unwrap() < 1e-80);
        assert!(exact_energy_boson(&params(1.0, 1.0), 0).is_err());
        for p in grid_params() {
            assert_abs_diff_eq!(
                exact_energy_boson(&p, 1).unwrap(),
                exact_energy_fermion(&p),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn boson_state_examples() {
        let cold = boson_thermal_state(&params(200.0, 1.0), 4).unwrap();
        assert_abs_diff_eq!(cold.amplitudes[0].re, 1.0, epsilon = 1e-15);

        let hot = boson_thermal_state(&params(0.0, 1.0), 4).unwrap();
        for n in 0..4 {
            assert_abs_diff_eq!(hot.amplitudes[4 * n + n].re, 0.5, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(hot.norm(), 1.0, epsilon = 1e-15);
        assert!(boson_thermal_state(&params(1.0, 1.0), 1).is_err());
    }

    #[test]
    fn boson_series_matches_direct_amplitudes() {
        let p = params(1.0, 1.0);
        let direct = boson_thermal_state(&p, 8).unwrap();
        let series = boson_thermal_state_series(&p, 8).unwrap();
        for (a, b) in direct.amplitudes.iter().zip(&series.amplitudes) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn boson_expectation_matches_sum() {
        for beta in [0.5, 1.0, 10.0] {
            let p = params(beta, 1.3);
            let state = boson_thermal_state(&p, 6).unwrap();
            let h = boson_hamiltonian(1.3, 6).unwrap();
            assert_abs_diff_eq!(
                state.expectation(&h).unwrap(),
                exact_energy_boson(&p, 5).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn position_wavefunction_symmetric_and_cold_limit() {
        let xs = uniform_grid(-4.0, 4.0, 41);
        let grid = thermal_position_wavefunction(&params(1.0, 1.0), &xs, 12).unwrap();
        for k in 0..xs.len() {
            for l in 0..xs.len() {
                assert_eq!(grid.get(k, l), grid.get(l, k));
            }
        }
        // The leading correction to the Gaussian product is the n = 1 term,
        // weighted by e^{-beta m / 2}.
        for beta in [10.0, 20.0, 30.0] {
            let grid = thermal_position_wavefunction(&params(beta, 1.0), &xs, 12).unwrap();
            let dev = (0..xs.len())
                .flat_map(|k| (0..xs.len()).map(move |l| (k, l)))
                .map(|(k, l)| {
                    let h0 =
                        hermite_function(0, xs[k]).unwrap() * hermite_function(0, xs[l]).unwrap();
                    (grid.get(k, l) - h0).abs()
                })
                .fold(0.0, f64::max);
            let h1_peak = 2.0 / (std::f64::consts::PI.sqrt() * std::f64::consts::E);
            assert!(
                dev <= 1.01 * (-beta / 2.0).exp() * h1_peak,
                "beta {beta}: {dev}"
            );
        }
    }

    #[test]
    fn position_wavefunction_normalised() {
        let xs = default_grid();
        let dx = xs[1] - xs[0];
        for beta in [1.0, 3.0, 10.0] {
            let grid = thermal_position_wavefunction(&params(beta, 1.0), &xs, 12).unwrap();
            // 2D trapezoid rule.
            let n = xs.len();
            let mut total = 0.0;
            for k in 0..n {
                for l in 0..n {
                    let wk = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
                    let wl = if l == 0 || l == n - 1 { 0.5 } else { 1.0 };
                    total += wk * wl * grid.get(k, l).powi(2);
                }
            }
            assert!((total * dx * dx - 1.0).abs() < 1e-3, "beta {beta}: {total}");
        }
    }

    #[test]
    fn position_wavefunction_broadens_when_hot() {
        let xs = default_grid();
        let hot = thermal_position_wavefunction(&params(0.01, 1.0), &xs, 16).unwrap();
        let cold = thermal_position_wavefunction(&params(10.0, 1.0), &xs, 16).unwrap();
        assert!(hot.marginal_variance() > cold.marginal_variance());
        assert!(thermal_position_wavefunction(&params(1.0, 1.0), &xs, 66).is_err());
    }
}
