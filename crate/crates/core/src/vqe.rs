//! Variational eigensolver over a hardware-efficient RY + CNOT ansatz.
//!
//! Energies are exact statevector expectations. Because the Bogoliubov
//! transform is a similarity, minimising over a thermal Hamiltonian finds the
//! bottom of its (unchanged) spectrum, not the thermal energy; the report
//! type makes that comparison explicit.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::circuits::{apply_circuit, expectation, pauli_decompose, Gate, PauliTerm, Statevector};
use crate::linalg::herm_eig;
use crate::tfd::{
    bogoliubov_generator, exact_energy_fermion, fermion_hamiltonian, thermal_transform,
    ThermalParams,
};
use crate::{Error, Result};

pub const DEFAULT_MAX_EVALS: usize = 2000;
pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_RESTARTS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnsatzSpec {
    pub num_qubits: usize,
    pub depth: usize,
}

impl AnsatzSpec {
    pub fn new(num_qubits: usize, depth: usize) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::InvalidParameter(
                "ansatz needs at least one qubit".into(),
            ));
        }
        Ok(Self { num_qubits, depth })
    }

    pub fn num_params(&self) -> usize {
        self.num_qubits * (self.depth + 1)
    }
}

/// One RY layer, then `depth` rounds of a CNOT chain followed by another RY layer.
pub fn build_ansatz(spec: &AnsatzSpec, params: &[f64]) -> Result<Vec<Gate>> {
    if params.len() != spec.num_params() {
        return Err(Error::InvalidParameter(format!(
            "ansatz expects {} parameters, got {}",
            spec.num_params(),
            params.len()
        )));
    }
    let n = spec.num_qubits;
    let mut gates = Vec::with_capacity(spec.num_params() + spec.depth * n.saturating_sub(1));
    for (layer, angles) in params.chunks(n).enumerate() {
        if layer > 0 {
            gates.extend((0..n - 1).map(|q| Gate::Cnot {
                control: q,
                target: q + 1,
            }));
        }
        gates.extend(
            angles
                .iter()
                .enumerate()
                .map(|(q, &angle)| Gate::Ry { target: q, angle }),
        );
    }
    Ok(gates)
}

fn ansatz_energy(terms: &[PauliTerm], spec: &AnsatzSpec, params: &[f64]) -> Result<f64> {
    let state = apply_circuit(
        &build_ansatz(spec, params)?,
        &Statevector::zero(spec.num_qubits),
    )?;
    expectation(&state, terms)
}

/// Nelder-Mead settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NelderMead {
    pub initial_step: f64,
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    pub max_evals: usize,
    /// Stop once `max f - min f` over the simplex falls below this.
    pub tol: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            initial_step: 0.1,
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            max_evals: DEFAULT_MAX_EVALS,
            tol: DEFAULT_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    /// Every objective value, in evaluation order.
    pub history: Vec<f64>,
    pub converged: bool,
}

impl NelderMead {
    pub fn minimize<F>(&self, mut f: F, start: &[f64]) -> Result<Minimum>
    where
        F: FnMut(&[f64]) -> Result<f64>,
    {
        let dim = start.len();
        let mut history = Vec::new();
        let mut eval = |x: &[f64], history: &mut Vec<f64>| -> Result<f64> {
            let v = f(x)?;
            history.push(v);
            Ok(v)
        };

        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
        let v0 = eval(start, &mut history)?;
        simplex.push((start.to_vec(), v0));
        for i in 0..dim {
            let mut x = start.to_vec();
            x[i] += self.initial_step;
            let v = eval(&x, &mut history)?;
            simplex.push((x, v));
        }

        let mut converged = false;
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let spread = simplex[dim].1 - simplex[0].1;
            if spread < self.tol {
                converged = true;
                break;
            }
            if history.len() >= self.max_evals || dim == 0 {
                break;
            }

            let centroid: Vec<f64> = (0..dim)
                .map(|j| simplex[..dim].iter().map(|(x, _)| x[j]).sum::<f64>() / dim as f64)
                .collect();
            let along = |t: f64, from: &[f64]| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(from)
                    .map(|(c, w)| c + t * (w - c))
                    .collect()
            };
            let worst = simplex[dim].clone();
            let second_worst = simplex[dim - 1].1;
            let best = simplex[0].1;

            let xr = along(-self.reflection, &worst.0);
            let fr = eval(&xr, &mut history)?;
            if fr < best {
                let xe = along(-self.reflection * self.expansion, &worst.0);
                let fe = eval(&xe, &mut history)?;
                simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < second_worst {
                simplex[dim] = (xr, fr);
                continue;
            }
            let (xc, fc) = if fr < worst.1 {
                let xc = along(-self.reflection * self.contraction, &worst.0);
                let fc = eval(&xc, &mut history)?;
                (xc, fc)
            } else {
                let xc = along(self.contraction, &worst.0);
                let fc = eval(&xc, &mut history)?;
                (xc, fc)
            };
            if fc < fr.min(worst.1) {
                simplex[dim] = (xc, fc);
                continue;
            }
            let anchor = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                let x: Vec<f64> = anchor
                    .iter()
                    .zip(&vertex.0)
                    .map(|(a, v)| a + self.shrink * (v - a))
                    .collect();
                let v = eval(&x, &mut history)?;
                *vertex = (x, v);
            }
        }

        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, value) = simplex.swap_remove(0);
        Ok(Minimum {
            x,
            value,
            history,
            converged,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VqeResult {
    pub energy: f64,
    pub params: Vec<f64>,
    /// `(evaluation index, energy)` for every objective call.
    pub trace: Vec<(usize, f64)>,
    pub converged: bool,
}

fn check_width(terms: &[PauliTerm], spec: &AnsatzSpec) -> Result<()> {
    if let Some(t) = terms.iter().find(|t| t.string.len() != spec.num_qubits) {
        return Err(Error::WidthMismatch {
            expected: spec.num_qubits,
            actual: t.string.len(),
        });
    }
    Ok(())
}

/// Single Nelder-Mead run from a seeded random start in `[0, 2 pi)^d`.
pub fn vqe_minimize(
    terms: &[PauliTerm],
    spec: &AnsatzSpec,
    seed: u64,
    max_evals: usize,
    tol: f64,
) -> Result<VqeResult> {
    check_width(terms, spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start: Vec<f64> = (0..spec.num_params())
        .map(|_| rng.random::<f64>() * TAU)
        .collect();
    let optimizer = NelderMead {
        max_evals,
        tol,
        ..NelderMead::default()
    };
    let min = optimizer.minimize(|p| ansatz_energy(terms, spec, p), &start)?;
    Ok(VqeResult {
        energy: min.value,
        params: min.x,
        trace: min.history.into_iter().enumerate().collect(),
        converged: min.converged,
    })
}

/// Best of `restarts` runs seeded `seed, seed + 1, ...`; ties go to the lower seed.
pub fn vqe_multistart(
    terms: &[PauliTerm],
    spec: &AnsatzSpec,
    seed: u64,
    restarts: usize,
    max_evals: usize,
    tol: f64,
) -> Result<VqeResult> {
    let runs = (0..restarts.max(1) as u64)
        .into_par_iter()
        .map(|k| vqe_minimize(terms, spec, seed.wrapping_add(k), max_evals, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(runs
        .into_iter()
        .reduce(|best, r| if r.energy < best.energy { r } else { best })
        .expect("at least one run"))
}

/// Spectrum of `H` and `H(beta)` next to the VQE result and the closed-form thermal energy.
#[derive(Clone, Debug, PartialEq)]
pub struct ThermalReport {
    pub beta: f64,
    pub mass: f64,
    pub lambda_min_h: f64,
    pub lambda_min_h_beta: f64,
    pub vqe_energy: f64,
    pub thermal_energy_exact: f64,
    pub vqe: VqeResult,
}

/// Two-qubit ansatz used for the fermion pair.
pub fn fermion_ansatz() -> AnsatzSpec {
    AnsatzSpec {
        num_qubits: 2,
        depth: 1,
    }
}

pub fn spectrum_vs_thermal_report(params: &ThermalParams, seed: u64) -> Result<ThermalReport> {
    let h = fermion_hamiltonian(params.mass())?;
    let h_beta = thermal_transform(&h, &bogoliubov_generator(params))?;
    let lambda_min_h = herm_eig(&h)?.eigenvalues[0];
    let lambda_min_h_beta = herm_eig(&h_beta)?.eigenvalues[0];
    let terms = pauli_decompose(&h_beta)?;
    let vqe = vqe_multistart(
        &terms,
        &fermion_ansatz(),
        seed,
        DEFAULT_RESTARTS,
        DEFAULT_MAX_EVALS,
        DEFAULT_TOL,
    )?;
    Ok(ThermalReport {
        beta: params.beta(),
        mass: params.mass(),
        lambda_min_h,
        lambda_min_h_beta,
        vqe_energy: vqe.energy,
        thermal_energy_exact: exact_energy_fermion(params),
        vqe,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::pauli_sum_matrix;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn z_term() -> Vec<PauliTerm> {
        vec![PauliTerm::new(1.0, "Z").unwrap()]
    }

    #[test]
    fn param_count_and_errors() {
        let spec = AnsatzSpec::new(3, 2).unwrap();
        assert_eq!(spec.num_params(), 9);
        assert!(build_ansatz(&spec, &[0.0; 8]).is_err());
        assert!(AnsatzSpec::new(0, 1).is_err());
        let gates = build_ansatz(&spec, &[0.0; 9]).unwrap();
        assert_eq!(
            gates
                .iter()
                .filter(|g| matches!(g, Gate::Cnot { .. }))
                .count(),
            4
        );
    }

    #[test]
    fn zero_params_leave_vacuum() {
        let spec = AnsatzSpec::new(3, 0).unwrap();
        let out = apply_circuit(
            &build_ansatz(&spec, &[0.0; 3]).unwrap(),
            &Statevector::zero(3),
        )
        .unwrap();
        assert_eq!(out, Statevector::zero(3));
    }

    #[test]
    fn single_rotation_prepares_one() {
        let spec = AnsatzSpec::new(1, 0).unwrap();
        let out =
            apply_circuit(&build_ansatz(&spec, &[PI]).unwrap(), &Statevector::zero(1)).unwrap();
        assert!((out.amplitudes()[1].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ansatz_reaches_bell_state() {
        // Grid search for parameters preparing (|00> + |11>)/sqrt 2.
        let spec = AnsatzSpec::new(2, 1).unwrap();
        let steps = 16;
        let mut best = 0.0f64;
        let mut best_params = Vec::new();
        for a in 0..steps {
            for b in 0..steps {
                for c in 0..steps {
                    for d in 0..steps {
                        let p: Vec<f64> = [a, b, c, d]
                            .iter()
                            .map(|&k| k as f64 * TAU / steps as f64)
                            .collect();
                        let psi =
                            apply_circuit(&build_ansatz(&spec, &p).unwrap(), &Statevector::zero(2))
                                .unwrap();
                        let amps = psi.amplitudes();
                        let overlap = ((amps[0] + amps[3]) * FRAC_1_SQRT_2).norm();
                        if overlap > best {
                            best = overlap;
                            best_params = p;
                        }
                    }
                }
            }
        }
        assert!(
            (best - 1.0).abs() < 1e-12,
            "best overlap {best} at {best_params:?}"
        );
    }

    #[test]
    fn nelder_mead_finds_quadratic_minimum() {
        let nm = NelderMead {
            tol: 1e-14,
            max_evals: 5000,
            ..NelderMead::default()
        };
        let min = nm
            .minimize(
                |x| Ok((x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2)),
                &[0.0, 0.0],
            )
            .unwrap();
        assert!(min.converged);
        assert!((min.x[0] - 1.0).abs() < 1e-5 && (min.x[1] + 2.0).abs() < 1e-5);
        assert_eq!(
            min.value,
            min.history.iter().copied().fold(f64::INFINITY, f64::min)
        );
    }

    #[test]
    fn single_z_minimum() {
        let spec = AnsatzSpec::new(1, 0).unwrap();
        let r = vqe_minimize(&z_term(), &spec, 3, DEFAULT_MAX_EVALS, DEFAULT_TOL).unwrap();
        assert!((r.energy + 1.0).abs() < 1e-4);
        assert!(r.converged);
    }

    #[test]
    fn fermion_hamiltonian_ground_energy() {
        let terms = pauli_decompose(&fermion_hamiltonian(1.0).unwrap()).unwrap();
        let r = vqe_minimize(
            &terms,
            &fermion_ansatz(),
            11,
            DEFAULT_MAX_EVALS,
            DEFAULT_TOL,
        )
        .unwrap();
        assert!(r.energy.abs() < 1e-2);
    }

    #[test]
    fn thermal_hamiltonian_ground_energy_is_not_thermal_energy() {
        let p = ThermalParams::new(1.0, 1.0).unwrap();
        let h = fermion_hamiltonian(1.0).unwrap();
        let terms =
            pauli_decompose(&thermal_transform(&h, &bogoliubov_generator(&p)).unwrap()).unwrap();
        let r = vqe_minimize(&terms, &fermion_ansatz(), 5, DEFAULT_MAX_EVALS, DEFAULT_TOL).unwrap();
        assert!(r.energy.abs() < 1e-2);
        assert!((r.energy - exact_energy_fermion(&p)).abs() > 0.25);
    }

    #[test]
    fn trace_properties() {
        let p = ThermalParams::new(1.0, 1.0).unwrap();
        let h = thermal_transform(
            &fermion_hamiltonian(1.0).unwrap(),
            &bogoliubov_generator(&p),
        )
        .unwrap();
        let terms = pauli_decompose(&h).unwrap();
        let lambda_min = herm_eig(&h).unwrap().eigenvalues[0];
        let a = vqe_minimize(&terms, &fermion_ansatz(), 21, 400, DEFAULT_TOL).unwrap();
        let b = vqe_minimize(&terms, &fermion_ansatz(), 21, 400, DEFAULT_TOL).unwrap();
        assert_eq!(a, b);
        assert!(a.trace.iter().all(|&(_, e)| e >= lambda_min - 1e-9));
        let trace_min = a
            .trace
            .iter()
            .map(|&(_, e)| e)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(trace_min, a.energy);
        assert!(a.trace.iter().enumerate().all(|(i, &(k, _))| i == k));
    }

    #[test]
    fn width_mismatch() {
        let spec = AnsatzSpec::new(2, 1).unwrap();
        assert!(matches!(
            vqe_minimize(&z_term(), &spec, 0, 10, 1e-6),
            Err(Error::WidthMismatch {
                expected: 2,
                actual: 1
            })
        ));
    }

    #[test]
    fn restarts_reach_ground_state_of_test_hamiltonians() {
        let p = ThermalParams::new(0.5, 2.0).unwrap();
        let fermion = fermion_hamiltonian(2.0).unwrap();
        let cases = vec![
            fermion.clone(),
            thermal_transform(&fermion, &bogoliubov_generator(&p)).unwrap(),
            pauli_sum_matrix(
                &[
                    PauliTerm::new(0.7, "ZZ").unwrap(),
                    PauliTerm::new(-0.4, "XI").unwrap(),
                    PauliTerm::new(0.3, "IX").unwrap(),
                    PauliTerm::new(0.2, "XX").unwrap(),
                ],
                2,
            )
            .unwrap(),
        ];
        for h in cases {
            let lambda_min = herm_eig(&h).unwrap().eigenvalues[0];
            let terms = pauli_decompose(&h).unwrap();
            let r = vqe_multistart(
                &terms,
                &fermion_ansatz(),
                1,
                DEFAULT_RESTARTS,
                DEFAULT_MAX_EVALS,
                DEFAULT_TOL,
            )
            .unwrap();
            assert!(
                (r.energy - lambda_min).abs() < 1e-2,
                "{} vs {lambda_min}",
                r.energy
            );
        }
    }

    #[test]
    fn report_limits() {
        let hot = spectrum_vs_thermal_report(&ThermalParams::new(0.0, 1.0).unwrap(), 42).unwrap();
        assert!((hot.thermal_energy_exact - 0.5).abs() < 1e-15);
        assert!(hot.lambda_min_h.abs() < 1e-12);

        let cold = spectrum_vs_thermal_report(&ThermalParams::new(60.0, 1.0).unwrap(), 42).unwrap();
        for v in [
            cold.lambda_min_h,
            cold.lambda_min_h_beta,
            cold.vqe_energy,
            cold.thermal_energy_exact,
        ] {
            assert!(v.abs() < 1e-2);
        }
    }
}
