use rayon::prelude::*;

use super::gate::Gate;
use super::kak::kak_decompose;
use super::sampling::{sample_stream, ShotHistogram};
use super::statevector::{apply_circuit, Statevector};
use crate::linalg::unitary_from_hermitian;
use crate::tfd::{bogoliubov_generator, ThermalParams};
use crate::{Error, Result};

/// Grid and sampling settings for a temperature sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepConfig {
    pub beta_min: f64,
    pub beta_max: f64,
    pub steps: usize,
    pub shots: u64,
    pub mass: f64,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            beta_min: 0.01,
            beta_max: 10.0,
            steps: 200,
            shots: 1000,
            mass: 1.0,
            seed: 42,
        }
    }
}

/// `steps` evenly spaced values from `beta_min` to `beta_max` inclusive.
pub fn beta_grid(beta_min: f64, beta_max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::InvalidParameter(format!(
            "steps must be at least 2, got {steps}"
        )));
    }
    if !beta_min.is_finite() || !beta_max.is_finite() || beta_min < 0.0 || beta_min >= beta_max {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= beta_min < beta_max, got [{beta_min}, {beta_max}]"
        )));
    }
    let step = (beta_max - beta_min) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| {
            if k == steps - 1 {
                beta_max
            } else {
                beta_min + step * k as f64
            }
        })
        .collect())
}

/// Synthesised circuit for `e^{-iG(beta)}`.
pub fn thermal_circuit(params: &ThermalParams) -> Result<Vec<Gate>> {
    let u = unitary_from_hermitian(&bogoliubov_generator(params), -1.0)?;
    kak_decompose(&u)
}

/// For each beta: synthesise `e^{-iG}`, run it on `|00>` and sample. Step `k`
/// draws from stream `k` of the configured seed, so the output does not depend
/// on scheduling.
pub fn thermal_sweep(config: &SweepConfig) -> Result<Vec<ShotHistogram>> {
    let betas = beta_grid(config.beta_min, config.beta_max, config.steps)?;
    betas
        .par_iter()
        .enumerate()
        .map(|(step, &beta)| {
            let params = ThermalParams::new(beta, config.mass)?;
            let state = apply_circuit(&thermal_circuit(&params)?, &Statevector::zero(2))?;
            let mut histogram = sample_stream(&state, config.shots, config.seed, step as u64)?;
            histogram.beta = Some(beta);
            Ok(histogram)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_and_errors() {
        let g = beta_grid(0.01, 10.0, 200).unwrap();
        assert_eq!(g.len(), 200);
        assert_eq!(g[0], 0.01);
        assert_eq!(g[199], 10.0);
        assert!(beta_grid(1.0, 1.0, 10).is_err());
        assert!(beta_grid(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn small_sweep_is_deterministic() {
        let cfg = SweepConfig {
            steps: 5,
            shots: 200,
            ..SweepConfig::default()
        };
        let a = thermal_sweep(&cfg).unwrap();
        assert_eq!(a, thermal_sweep(&cfg).unwrap());
        for h in &a {
            assert_eq!(h.count("01") + h.count("10"), 0);
            assert_eq!(h.counts.values().sum::<u64>(), 200);
        }
    }
}
