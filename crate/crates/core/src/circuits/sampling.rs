use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::statevector::Statevector;
use crate::{Error, Result};

/// Measurement counts keyed by bitstring (qubit 0 first). Every outcome of
/// the register is present, including those never observed.
#[derive(Clone, Debug, PartialEq)]
pub struct ShotHistogram {
    pub counts: BTreeMap<String, u64>,
    pub shots: u64,
    pub beta: Option<f64>,
}

impl ShotHistogram {
    pub fn count(&self, outcome: &str) -> u64 {
        self.counts.get(outcome).copied().unwrap_or(0)
    }

    pub fn fraction(&self, outcome: &str) -> f64 {
        self.count(outcome) as f64 / self.shots as f64
    }
}

pub fn bitstring(index: usize, num_qubits: usize) -> String {
    (0..num_qubits)
        .map(|q| {
            if index >> (num_qubits - 1 - q) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// Multinomial draw of `shots` outcomes from `|amplitude|^2`.
pub fn sample(state: &Statevector, shots: u64, seed: u64) -> Result<ShotHistogram> {
    sample_stream(state, shots, seed, 0)
}

/// Like [`sample`] but on an independent ChaCha stream of the same seed.
pub fn sample_stream(
    state: &Statevector,
    shots: u64,
    seed: u64,
    stream: u64,
) -> Result<ShotHistogram> {
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);

    let probabilities = state.probabilities();
    let total: f64 = probabilities.iter().sum();
    let mut cumulative = Vec::with_capacity(probabilities.len());
    let mut acc = 0.0;
    for p in &probabilities {
        acc += p / total;
        cumulative.push(acc);
    }

    let mut tallies = vec![0u64; probabilities.len()];
    for _ in 0..shots {
        let u: f64 = rng.random();
        let mut idx = cumulative.partition_point(|&c| c <= u);
        // Rounding can leave the last cumulative value just below 1; fall
        // back to the last outcome with non-zero probability.
        if idx >= probabilities.len() {
            idx = probabilities.iter().rposition(|&p| p > 0.0).unwrap_or(0);
        }
        tallies[idx] += 1;
    }

    let n = state.num_qubits();
    Ok(ShotHistogram {
        counts: tallies
            .into_iter()
            .enumerate()
            .map(|(i, c)| (bitstring(i, n), c))
            .collect(),
        shots,
        beta: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn bell() -> Statevector {
        let z = Complex64::new(0.0, 0.0);
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Statevector::from_amplitudes(vec![h, z, z, h]).unwrap()
    }

    #[test]
    fn bitstrings_are_qubit_zero_first() {
        assert_eq!(bitstring(0b10, 2), "10");
        assert_eq!(bitstring(1, 3), "001");
    }

    #[test]
    fn vacuum_always_measures_zero() {
        let h = sample(&Statevector::zero(2), 1000, 7).unwrap();
        assert_eq!(h.count("00"), 1000);
        assert_eq!(h.counts.len(), 4);
        assert_eq!(h.counts.values().sum::<u64>(), 1000);
    }

    #[test]
    fn bell_state_statistics() {
        let h = sample(&bell(), 1000, 42).unwrap();
        assert_eq!(h.count("01"), 0);
        assert_eq!(h.count("10"), 0);
        let sigma = (1000.0f64 * 0.25).sqrt();
        assert!((h.count("00") as f64 - 500.0).abs() <= 4.0 * sigma);
        assert_eq!(h.count("00") + h.count("11"), 1000);
    }

    #[test]
    fn fixed_seed_is_reproducible_and_streams_differ() {
        assert_eq!(
            sample(&bell(), 500, 9).unwrap(),
            sample(&bell(), 500, 9).unwrap()
        );
        let a = sample_stream(&bell(), 500, 9, 1).unwrap();
        let b = sample_stream(&bell(), 500, 9, 2).unwrap();
        assert_ne!(a, b);
        assert!(sample(&bell(), 0, 1).is_err());
    }
}
